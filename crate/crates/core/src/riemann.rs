//! Levi-Civita connection and Riemann curvature of a metric field at a point.
//!
//! Sign convention, fixed here once for the whole crate:
//! R(X,Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z, stored fully lowered as
//! `low[i][j][k][l] = ⟨R(∂i,∂j)∂k, ∂l⟩`, so that ⟨R(X,Y)Y,X⟩ is the sectional
//! curvature of span(X,Y) for orthonormal X,Y (the round sphere gets +1).
//! All derivative data comes from exact 2-jets; ∂Γ is assembled analytically
//! from (g, ∂g, ∂²g, g⁻¹, ∂g⁻¹), never by differencing Γ.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::expr::{Expr, Params, Point};
use crate::linalg::{det3, inv3, max_abs, metric_dot, Mat3, Vec3};

/// Positive-definiteness threshold on leading principal minors.
pub const MINOR_TOL: f64 = 1e-12;
/// Orthonormality tolerance for frames handed to `curvature_matrix`.
pub const FRAME_TOL: f64 = 1e-9;
/// Degeneracy threshold on the gram determinant of a plane.
pub const PLANE_TOL: f64 = 1e-12;

/// Symmetric 3×3 matrix of scalar fields; entries stored as the upper
/// triangle so symmetry holds by construction.
#[derive(Debug, Clone)]
pub struct MetricField {
    upper: [Expr; 6], // g00 g01 g02 g11 g12 g22
}

const UPPER_INDEX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

impl MetricField {
    pub fn from_upper(
        g00: Expr,
        g01: Expr,
        g02: Expr,
        g11: Expr,
        g12: Expr,
        g22: Expr,
    ) -> Self {
        MetricField { upper: [g00, g01, g02, g11, g12, g22] }
    }

    /// Builds from full rows, requiring the lower triangle to be structurally
    /// identical to the upper one.
    pub fn from_rows(rows: [[Expr; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if rows[i][j] != rows[j][i] {
                    return Err(GeomError::InvalidParams(format!(
                        "metric entries ({i},{j}) and ({j},{i}) differ structurally"
                    )));
                }
            }
        }
        let [[g00, g01, g02], [_, g11, g12], [_, _, g22]] = rows;
        Ok(MetricField { upper: [g00, g01, g02, g11, g12, g22] })
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.upper[UPPER_INDEX[i][j]]
    }

    /// Evaluates the metric and its first two derivative orders at `p`.
    ///
    /// The inverse is computed by adjugate over determinant and its derivative
    /// by ∂(g⁻¹) = −g⁻¹ (∂g) g⁻¹. Fails with `NotPositiveDefinite` when a
    /// leading principal minor drops to the tolerance.
    pub fn jet(&self, p: Point, params: &Params) -> Result<MetricJet> {
        let mut g = [[0.0; 3]; 3];
        let mut dg = [[[0.0; 3]; 3]; 3];
        let mut d2g = [[[[0.0; 3]; 3]; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let jet = self.entry(i, j).eval_jet2(p, params)?;
                g[i][j] = jet.value;
                g[j][i] = jet.value;
                for k in 0..3 {
                    dg[k][i][j] = jet.grad[k];
                    dg[k][j][i] = jet.grad[k];
                    for l in 0..3 {
                        d2g[k][l][i][j] = jet.hess_at(k, l);
                        d2g[k][l][j][i] = jet.hess_at(k, l);
                    }
                }
            }
        }

        let minor1 = g[0][0];
        let minor2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let minor3 = det3(&g);
        for (idx, minor) in [(1, minor1), (2, minor2), (3, minor3)] {
            if minor <= MINOR_TOL {
                return Err(GeomError::NotPositiveDefinite { minor: idx, value: minor });
            }
        }

        let g_inv = inv3(&g, minor3);
        let mut dg_inv = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            // ∂(g⁻¹) = -g⁻¹ (∂g) g⁻¹
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            s += g_inv[i][a] * dg[k][a][b] * g_inv[b][j];
                        }
                    }
                    dg_inv[k][i][j] = -s;
                }
            }
        }

        Ok(MetricJet { point: p, g, g_inv, det: minor3, dg, d2g, dg_inv })
    }
}

/// Metric data at a point: values, inverse, and derivatives.
///
/// Index conventions: `dg[k][i][j] = ∂_k g_{ij}` and
/// `d2g[k][l][i][j] = ∂_k ∂_l g_{ij}`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub point: Point,
    pub g: Mat3,
    pub g_inv: Mat3,
    pub det: f64,
    pub dg: [Mat3; 3],
    pub d2g: [[Mat3; 3]; 3],
    pub dg_inv: [Mat3; 3],
}

impl MetricJet {
    pub fn inner(&self, u: Vec3, v: Vec3) -> f64 {
        metric_dot(&self.g, u, v)
    }

    pub fn norm(&self, u: Vec3) -> f64 {
        self.inner(u, u).sqrt()
    }
}

/// Christoffel symbols of both kinds at a point.
///
/// `lower[i][j][m] = Γ_{ij,m}`, `upper[l][i][j] = Γ^l_{ij}`; both symmetric
/// in (i,j).
#[derive(Debug, Clone)]
pub struct Christoffel {
    pub lower: [[[f64; 3]; 3]; 3],
    pub upper: [[[f64; 3]; 3]; 3],
}

pub fn christoffel(mj: &MetricJet) -> Christoffel {
    let mut lower = [[[0.0; 3]; 3]; 3];
    let mut upper = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for m in 0..3 {
                lower[i][j][m] =
                    0.5 * (mj.dg[i][j][m] + mj.dg[j][i][m] - mj.dg[m][i][j]);
            }
        }
    }
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                upper[l][i][j] = (0..3).map(|m| mj.g_inv[l][m] * lower[i][j][m]).sum();
            }
        }
    }
    Christoffel { lower, upper }
}

/// Fully lowered curvature tensor at a point.
#[derive(Debug, Clone)]
pub struct Riemann {
    /// `low[i][j][k][l] = ⟨R(∂i,∂j)∂k, ∂l⟩`
    pub low: [[[[f64; 3]; 3]; 3]; 3],
}

impl Riemann {
    /// Quadrilinear evaluation ⟨R(u,v)w, t⟩.
    pub fn apply(&self, u: Vec3, v: Vec3, w: Vec3, t: Vec3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..3 {
                if v[j] == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    for l in 0..3 {
                        s += self.low[i][j][k][l] * u[i] * v[j] * w[k] * t[l];
                    }
                }
            }
        }
        s
    }
}

pub fn riemann_tensor(mj: &MetricJet) -> Riemann {
    let ch = christoffel(mj);

    // ∂_k Γ_{ij,m} = ½(∂k∂i g_jm + ∂k∂j g_im − ∂k∂m g_ij)
    let mut dlower = [[[[0.0; 3]; 3]; 3]; 3]; // [k][i][j][m]
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for m in 0..3 {
                    dlower[k][i][j][m] = 0.5
                        * (mj.d2g[k][i][j][m] + mj.d2g[k][j][i][m] - mj.d2g[k][m][i][j]);
                }
            }
        }
    }
    // ∂_k Γ^l_{ij} = ∂_k(g^{lm}) Γ_{ij,m} + g^{lm} ∂_k Γ_{ij,m}
    let mut dupper = [[[[0.0; 3]; 3]; 3]; 3]; // [k][l][i][j]
    for k in 0..3 {
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    dupper[k][l][i][j] = (0..3)
                        .map(|m| {
                            mj.dg_inv[k][l][m] * ch.lower[i][j][m]
                                + mj.g_inv[l][m] * dlower[k][i][j][m]
                        })
                        .sum();
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
                    let mut v = dupper[i][l][j][k] - dupper[j][l][i][k];
                    for m in 0..3 {
                        v += ch.upper[l][i][m] * ch.upper[m][j][k]
                            - ch.upper[l][j][m] * ch.upper[m][i][k];
                    }
                    *slot = v;
                }
                for l in 0..3 {
                    low[i][j][k][l] = (0..3).map(|m| mj.g[l][m] * up[m]).sum();
                }
            }
        }
    }
    Riemann { low }
}

/// Sectional curvature of span(u,v): ⟨R(u,v)v,u⟩ / (|u|²|v|² − ⟨u,v⟩²).
pub fn sectional_curvature(mj: &MetricJet, rm: &Riemann, u: Vec3, v: Vec3) -> Result<f64> {
    let gram = mj.inner(u, u) * mj.inner(v, v) - mj.inner(u, v).powi(2);
    if gram <= PLANE_TOL {
        return Err(GeomError::DegeneratePlane { gram });
    }
    Ok(rm.apply(u, v, v, u) / gram)
}

/// Names the bivector basis built from an orthonormal frame (f₁,f₂,f₃):
/// the pairs are always (f₁∧f₂, f₁∧f₃, f₂∧f₃); the tag records where the
/// normal direction sits in the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BivectorOrder {
    /// Frame (X, Y, N): basis (X∧Y, X∧N, Y∧N); the ξ-plane comes first.
    XiPlaneFirst,
    /// Frame (N, e₂, e₃): basis (N∧e₂, N∧e₃, e₂∧e₃); the normal comes first.
    ReebFirst,
}

/// Curvature tensor of a metric written as a symmetric 3×3 matrix over a
/// bivector basis; diagonal entries are the sectional curvatures of the
/// frame's coordinate 2-planes.
#[derive(Debug, Clone)]
pub struct CurvatureMatrix {
    pub m: Mat3,
    pub ordering: BivectorOrder,
    pub frame: [Vec3; 3],
}

const BIVECTOR_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// M_{ab} = ⟨R(u_a, v_a) v_b, u_b⟩ over the bivector pairs of `frame`.
pub fn curvature_matrix(
    mj: &MetricJet,
    rm: &Riemann,
    frame: [Vec3; 3],
    ordering: BivectorOrder,
) -> Result<CurvatureMatrix> {
    let defect = max_abs((0..3).flat_map(|i| {
        (0..3).map(move |j| mj.inner(frame[i], frame[j]) - if i == j { 1.0 } else { 0.0 })
    }));
    if defect > FRAME_TOL {
        return Err(GeomError::FrameNotOrthonormal { defect });
    }
    let mut m = [[0.0; 3]; 3];
    for (a, &(ia, ja)) in BIVECTOR_PAIRS.iter().enumerate() {
        for (b, &(ib, jb)) in BIVECTOR_PAIRS.iter().enumerate() {
            m[a][b] = rm.apply(frame[ia], frame[ja], frame[jb], frame[ib]);
        }
    }
    Ok(CurvatureMatrix { m, ordering, frame })
}

impl CurvatureMatrix {
    pub fn symmetry_defect(&self) -> f64 {
        max_abs([
            self.m[0][1] - self.m[1][0],
            self.m[0][2] - self.m[2][0],
            self.m[1][2] - self.m[2][1],
        ])
    }

    /// Largest eigenvalue of the (symmetrized) matrix; negative means the
    /// curvature operator is negative definite on bivectors, which in
    /// dimension three bounds every sectional curvature from above.
    pub fn max_eigenvalue(&self) -> f64 {
        let a = [
            [
                self.m[0][0],
                0.5 * (self.m[0][1] + self.m[1][0]),
                0.5 * (self.m[0][2] + self.m[2][0]),
            ],
            [
                0.5 * (self.m[0][1] + self.m[1][0]),
                self.m[1][1],
                0.5 * (self.m[1][2] + self.m[2][1]),
            ],
            [
                0.5 * (self.m[0][2] + self.m[2][0]),
                0.5 * (self.m[1][2] + self.m[2][1]),
                self.m[2][2],
            ],
        ];
        max_eig_sym3(&a)
    }
}

/// Largest eigenvalue of a symmetric 3×3 via the trigonometric closed form.
fn max_eig_sym3(a: &Mat3) -> f64 {
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let mut b = *a;
    for i in 0..3 {
        b[i][i] -= q;
    }
    let p2: f64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| b[i][j] * b[i][j]).sum();
    let p = (p2 / 6.0).sqrt();
    if p < 1e-300 {
        return q;
    }
    for row in b.iter_mut() {
        for v in row.iter_mut() {
            *v /= p;
        }
    }
    let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * phi.cos()
}

/// A vector field with expression components.
pub type VectorField = [Expr; 3];

/// (∇_X Y)^l = X^i ∂_i Y^l + X^i Y^j Γ^l_{ij} at `p`.
pub fn covariant_derivative(
    g: &MetricField,
    x: &VectorField,
    y: &VectorField,
    p: Point,
    params: &Params,
) -> Result<Vec3> {
    let mj = g.jet(p, params)?;
    let ch = christoffel(&mj);
    let mut xv = [0.0; 3];
    let mut yv = [0.0; 3];
    let mut dy = [[0.0; 3]; 3]; // dy[i][l] = ∂_i Y^l
    for l in 0..3 {
        xv[l] = x[l].eval(p, params)?;
        let jet = y[l].eval_jet2(p, params)?;
        yv[l] = jet.value;
        for i in 0..3 {
            dy[i][l] = jet.grad[i];
        }
    }
    let mut out = [0.0; 3];
    for l in 0..3 {
        let mut s = 0.0;
        for i in 0..3 {
            s += xv[i] * dy[i][l];
            for j in 0..3 {
                s += xv[i] * yv[j] * ch.upper[l][i][j];
            }
        }
        out[l] = s;
    }
    Ok(out)
}

/// Euclidean identity metric, handy in tests and as a gallery building block.
pub fn euclidean_metric() -> MetricField {
    MetricField::from_upper(
        Expr::constant(1.0),
        Expr::constant(0.0),
        Expr::constant(0.0),
        Expr::constant(1.0),
        Expr::constant(0.0),
        Expr::constant(1.0),
    )
}
