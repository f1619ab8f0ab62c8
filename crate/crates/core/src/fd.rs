//! Central finite-difference reference implementations.
//!
//! These recompute derivatives from field *values only*, independently of the
//! jet-propagation path, and exist to cross-check it: the main code never
//! calls into here. Assembly algebra is written out locally on purpose.

use crate::error::Result;
use crate::expr::{Expr, Params, Point};
use crate::linalg::{det3, inv3, Mat3, Vec3};
use crate::riemann::MetricField;

/// Default step for first derivatives of analytic O(1) fields.
pub const H1: f64 = 1e-5;
/// Default step for second derivatives (ε^{1/4} territory).
pub const H2: f64 = 1e-4;

/// Central-difference gradient of a scalar field.
pub fn gradient(f: &Expr, p: Point, params: &Params, h: f64) -> Result<Vec3> {
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let fp = f.eval(p.shifted(i, h), params)?;
        let fm = f.eval(p.shifted(i, -h), params)?;
        *slot = (fp - fm) / (2.0 * h);
    }
    Ok(out)
}

/// Central-difference Hessian of a scalar field.
pub fn hessian(f: &Expr, p: Point, params: &Params, h: f64) -> Result<Mat3> {
    let mut out = [[0.0; 3]; 3];
    let f0 = f.eval(p, params)?;
    for i in 0..3 {
        let fp = f.eval(p.shifted(i, h), params)?;
        let fm = f.eval(p.shifted(i, -h), params)?;
        out[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let pp = f.eval(p.shifted(i, h).shifted(j, h), params)?;
            let pm = f.eval(p.shifted(i, h).shifted(j, -h), params)?;
            let mp = f.eval(p.shifted(i, -h).shifted(j, h), params)?;
            let mm = f.eval(p.shifted(i, -h).shifted(j, -h), params)?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(out)
}

fn metric_values(g: &MetricField, p: Point, params: &Params) -> Result<Mat3> {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = g.entry(i, j).eval(p, params)?;
        }
    }
    Ok(out)
}

/// Raised Christoffel symbols `Γ^l_{ij}` (indexed `[l][i][j]`) from
/// finite-differenced metric values.
pub fn christoffel_fd(
    g: &MetricField,
    p: Point,
    params: &Params,
    h: f64,
) -> Result<[[[f64; 3]; 3]; 3]> {
    let gv = metric_values(g, p, params)?;
    let mut dg = [[[0.0; 3]; 3]; 3]; // dg[k][i][j]
    for k in 0..3 {
        let gp = metric_values(g, p.shifted(k, h), params)?;
        let gm = metric_values(g, p.shifted(k, -h), params)?;
        for i in 0..3 {
            for j in 0..3 {
                dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
            }
        }
    }
    let ginv = inv3(&gv, det3(&gv));
    let mut upper = [[[0.0; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                upper[l][i][j] = (0..3)
                    .map(|m| {
                        ginv[l][m] * 0.5 * (dg[i][j][m] + dg[j][i][m] - dg[m][i][j])
                    })
                    .sum();
            }
        }
    }
    Ok(upper)
}

/// Fully lowered curvature `⟨R(∂i,∂j)∂k, ∂l⟩` with ∂Γ obtained by an outer
/// central difference of finite-difference Christoffels.
pub fn riemann_fd(
    g: &MetricField,
    p: Point,
    params: &Params,
    h_outer: f64,
    h_inner: f64,
) -> Result<[[[[f64; 3]; 3]; 3]; 3]> {
    let gv = metric_values(g, p, params)?;
    let ch = christoffel_fd(g, p, params, h_inner)?;
    let mut dch = [[[[0.0; 3]; 3]; 3]; 3]; // [k][l][i][j]
    for k in 0..3 {
        let cp = christoffel_fd(g, p.shifted(k, h_outer), params, h_inner)?;
        let cm = christoffel_fd(g, p.shifted(k, -h_outer), params, h_inner)?;
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    dch[k][l][i][j] = (cp[l][i][j] - cm[l][i][j]) / (2.0 * h_outer);
                }
            }
        }
    }
    let mut low = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut up = [0.0; 3];
                for (l, slot) in up.iter_mut().enumerate() {
                    let mut v = dch[i][l][j][k] - dch[j][l][i][k];
                    for m in 0..3 {
                        v += ch[l][i][m] * ch[m][j][k] - ch[l][j][m] * ch[m][i][k];
                    }
                    *slot = v;
                }
                for l in 0..3 {
                    low[i][j][k][l] = (0..3).map(|m| gv[l][m] * up[m]).sum();
                }
            }
        }
    }
    Ok(low)
}

/// Jacobian `out[i][l] = ∂_i F^l` of a vector-valued map by central
/// differences with one Richardson refinement: D = (4 D(h/2) − D(h)) / 3.
pub fn jacobian_richardson<F>(field: F, p: Point, h: f64) -> Result<[[f64; 3]; 3]>
where
    F: Fn(Point) -> Result<Vec3>,
{
    let mut coarse = [[0.0; 3]; 3];
    let mut fine = [[0.0; 3]; 3];
    for i in 0..3 {
        let cp = field(p.shifted(i, h))?;
        let cm = field(p.shifted(i, -h))?;
        let fp = field(p.shifted(i, h / 2.0))?;
        let fm = field(p.shifted(i, -h / 2.0))?;
        for l in 0..3 {
            coarse[i][l] = (cp[l] - cm[l]) / (2.0 * h);
            fine[i][l] = (fp[l] - fm[l]) / h;
        }
    }
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for l in 0..3 {
            out[i][l] = (4.0 * fine[i][l] - coarse[i][l]) / 3.0;
        }
    }
    Ok(out)
}

/// Directional derivative of a scalar map along `dir`, Richardson refined.
pub fn directional_richardson<F>(scalar: F, p: Point, dir: Vec3, h: f64) -> Result<f64>
where
    F: Fn(Point) -> Result<f64>,
{
    let step = |s: f64| -> Point {
        Point::new(p.x + s * dir[0], p.y + s * dir[1], p.z + s * dir[2])
    };
    let coarse = (scalar(step(h))? - scalar(step(-h))?) / (2.0 * h);
    let fine = (scalar(step(h / 2.0))? - scalar(step(-h / 2.0))?) / h;
    Ok((4.0 * fine - coarse) / 3.0)
}
