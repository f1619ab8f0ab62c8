//! Second fundamental form, shape operator, and principal data of the plane
//! field ξ = ker α with respect to its unit normal (the metric dual of α).
//!
//! II(u,v) = ½⟨∇_u ṽ + ∇_v ũ, N⟩ with extensions ũ, ṽ taken *inside* ξ; the
//! symmetrization makes the value extension-independent, and a naive constant
//! extension is wrong for vectors that leave ξ away from the base point. Two
//! extension schemes are provided so tensoriality is testable.

use serde::Serialize;

use crate::contact::{FrameJets, OneForm};
use crate::error::{GeomError, Result};
use crate::expr::{Jet1, Params, Point};
use crate::fd::jacobian_richardson;
use crate::linalg::{eig_sym2, Vec3};
use crate::report::{fp3, Fp};
use crate::riemann::{christoffel, MetricField, MetricJet};

/// Principal frames are refused below this principal-curvature size.
pub const UMBILIC_TOL: f64 = 1e-6;
/// Step for tracked-frame finite differences (Richardson refines at h/2).
pub const FRAME_FD_STEP: f64 = 1e-4;

/// How a frame vector is extended to an in-ξ field around the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionScheme {
    /// Metric projection of the constant field onto ker α, renormalized.
    Projection,
    /// Two chart components held constant, the third solved from α(E) = 0.
    Solved,
}

/// II in an orthonormal ξ-frame, with the frame and normal it refers to.
#[derive(Debug, Clone)]
pub struct SecondFundamentalForm {
    pub matrix: [[f64; 2]; 2],
    pub frame: [Vec3; 2],
    pub normal: Vec3,
}

fn extension_field(
    fj: &FrameJets,
    u: Vec3,
    scheme: ExtensionScheme,
) -> Result<[Jet1; 3]> {
    let uj: [Jet1; 3] = std::array::from_fn(|i| Jet1::constant(u[i]));
    match scheme {
        ExtensionScheme::Projection => {
            let coeff = fj.inner(&uj, &fj.n_hat);
            let w: [Jet1; 3] = std::array::from_fn(|i| uj[i] - coeff * fj.n_hat[i]);
            let n2 = fj.inner(&w, &w);
            if n2.value <= 0.0 {
                return Err(GeomError::DegeneratePlane { gram: n2.value });
            }
            let n = n2.sqrt();
            Ok(std::array::from_fn(|i| w[i] / n))
        }
        ExtensionScheme::Solved => {
            let m = (0..3)
                .max_by(|&a, &b| {
                    fj.aj.alpha[a]
                        .value
                        .abs()
                        .total_cmp(&fj.aj.alpha[b].value.abs())
                })
                .unwrap();
            if fj.aj.alpha[m].value.abs() < 1e-12 {
                return Err(GeomError::NotContact { density: fj.aj.density.value });
            }
            let mut rest = Jet1::constant(0.0);
            for i in 0..3 {
                if i != m {
                    rest = rest + fj.aj.alpha[i].scale(u[i]);
                }
            }
            let solved = -rest / fj.aj.alpha[m];
            Ok(std::array::from_fn(|i| if i == m { solved } else { Jet1::constant(u[i]) }))
        }
    }
}

fn ii_in_frame(
    mj: &MetricJet,
    fj: &FrameJets,
    frame: [Vec3; 2],
    scheme: ExtensionScheme,
) -> Result<[[f64; 2]; 2]> {
    let ch = christoffel(mj);
    let n_hat = FrameJets::values(&fj.n_hat);
    let ext = [
        extension_field(fj, frame[0], scheme)?,
        extension_field(fj, frame[1], scheme)?,
    ];
    // (∇_{E_a} E_b)^l = u_a^i ∂_i E_b^l + u_a^i u_b^j Γ^l_{ij}
    let nabla = |a: usize, b: usize| -> Vec3 {
        std::array::from_fn(|l| {
            let mut s = 0.0;
            for i in 0..3 {
                s += frame[a][i] * ext[b][l].grad[i];
                for j in 0..3 {
                    s += frame[a][i] * frame[b][j] * ch.upper[l][i][j];
                }
            }
            s
        })
    };
    let mut ii = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in a..2 {
            let v = 0.5 * (mj.inner(nabla(a, b), n_hat) + mj.inner(nabla(b, a), n_hat));
            ii[a][b] = v;
            ii[b][a] = v;
        }
    }
    Ok(ii)
}

/// II in the canonical Gram–Schmidt ξ-frame via the projection extension.
pub fn second_fundamental_form(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<SecondFundamentalForm> {
    second_fundamental_form_with(g, alpha, p, params, ExtensionScheme::Projection)
}

pub fn second_fundamental_form_with(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
    scheme: ExtensionScheme,
) -> Result<SecondFundamentalForm> {
    let mj = g.jet(p, params)?;
    let fj = FrameJets::new(&mj, alpha, params)?;
    let frame = [FrameJets::values(&fj.e2), FrameJets::values(&fj.e3)];
    let matrix = ii_in_frame(&mj, &fj, frame, scheme)?;
    Ok(SecondFundamentalForm { matrix, frame, normal: FrameJets::values(&fj.n_hat) })
}

/// II in a caller-supplied orthonormal frame of ξ.
pub fn second_fundamental_form_in_frame(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
    frame: [Vec3; 2],
) -> Result<[[f64; 2]; 2]> {
    let mj = g.jet(p, params)?;
    let fj = FrameJets::new(&mj, alpha, params)?;
    let a0 = FrameJets::values(&fj.aj.alpha);
    for v in frame {
        let along = a0[0] * v[0] + a0[1] * v[1] + a0[2] * v[2];
        if along.abs() > 1e-8 {
            return Err(GeomError::FrameNotOrthonormal { defect: along.abs() });
        }
    }
    let defect = crate::linalg::max_abs([
        mj.inner(frame[0], frame[0]) - 1.0,
        mj.inner(frame[1], frame[1]) - 1.0,
        mj.inner(frame[0], frame[1]),
    ]);
    if defect > 1e-8 {
        return Err(GeomError::FrameNotOrthonormal { defect });
    }
    ii_in_frame(&mj, &fj, frame, ExtensionScheme::Projection)
}

/// Shape operator data at a point.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeData {
    /// II in the ξ-frame (equals the shape operator matrix there).
    pub ii: [[Fp; 2]; 2],
    pub frame: [[Fp; 3]; 2],
    pub normal: [Fp; 3],
    /// Largest principal curvature (≥ 0 for minimal ξ).
    pub lambda: Fp,
    pub mean_curvature: Fp,
    pub extrinsic_curvature: Fp,
    /// Chart-coordinate principal directions (for +λ then −λ); absent at
    /// umbilic points where the eigenframe is undefined.
    pub principal_dirs: Option<[[Fp; 3]; 2]>,
    pub is_umbilic: bool,
}

impl ShapeData {
    pub fn ii_values(&self) -> [[f64; 2]; 2] {
        [[self.ii[0][0].0, self.ii[0][1].0], [self.ii[1][0].0, self.ii[1][1].0]]
    }

    pub fn principal_dir_values(&self) -> Option<[Vec3; 2]> {
        self.principal_dirs
            .map(|d| [[d[0][0].0, d[0][1].0, d[0][2].0], [d[1][0].0, d[1][1].0, d[1][2].0]])
    }
}

/// Deterministic sign: first chart coordinate above 1e-9 is made positive.
fn fix_sign(v: Vec3) -> Vec3 {
    for c in v {
        if c.abs() > 1e-9 {
            return if c < 0.0 { [-v[0], -v[1], -v[2]] } else { v };
        }
    }
    v
}

pub fn shape_data(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<ShapeData> {
    let sff = second_fundamental_form(g, alpha, p, params)?;
    let m = sff.matrix;
    let ([lo, hi], [v_lo, v_hi]) = eig_sym2(m[0][0], m[0][1], m[1][1]);
    let radius = 0.5 * (hi - lo);
    let mean = 0.5 * (hi + lo);
    let is_umbilic = radius < UMBILIC_TOL;
    let [e2, e3] = sff.frame;
    let to_chart = |c: [f64; 2]| -> Vec3 {
        fix_sign(std::array::from_fn(|i| c[0] * e2[i] + c[1] * e3[i]))
    };
    let principal_dirs = if is_umbilic {
        None
    } else {
        Some([fp3(to_chart(v_hi)), fp3(to_chart(v_lo))])
    };
    Ok(ShapeData {
        ii: [[Fp(m[0][0]), Fp(m[0][1])], [Fp(m[1][0]), Fp(m[1][1])]],
        frame: [fp3(e2), fp3(e3)],
        normal: fp3(sff.normal),
        lambda: Fp(hi),
        mean_curvature: Fp(mean),
        extrinsic_curvature: Fp(lo * hi),
        principal_dirs,
        is_umbilic,
    })
}

/// Principal frame around a base point, tracked for sign continuity.
pub(crate) struct TrackedFrame<'a> {
    g: &'a MetricField,
    alpha: &'a OneForm,
    params: &'a Params,
    center: [Vec3; 2],
    /// Set when the proof-side orientation ⟨[X,Y],N⟩ = +k needs X negated.
    pub flip_x: bool,
}

impl<'a> TrackedFrame<'a> {
    pub fn new(
        g: &'a MetricField,
        alpha: &'a OneForm,
        p: Point,
        params: &'a Params,
    ) -> Result<Self> {
        let sd = shape_data(g, alpha, p, params)?;
        let center = sd
            .principal_dir_values()
            .ok_or(GeomError::UmbilicPoint { lambda: sd.lambda.0 })?;
        Ok(TrackedFrame { g, alpha, params, center, flip_x: false })
    }

    fn dirs_at(&self, q: Point) -> Result<[Vec3; 2]> {
        let sd = shape_data(self.g, self.alpha, q, self.params)?;
        let dirs = sd
            .principal_dir_values()
            .ok_or(GeomError::UmbilicPoint { lambda: sd.lambda.0 })?;
        let mut out = [[0.0; 3]; 2];
        for (slot, (d, c)) in out.iter_mut().zip(dirs.iter().zip(self.center.iter())) {
            let overlap = crate::linalg::dot(*d, *c);
            *slot = if overlap < 0.0 { [-d[0], -d[1], -d[2]] } else { *d };
        }
        if self.flip_x {
            out[0] = [-out[0][0], -out[0][1], -out[0][2]];
        }
        Ok(out)
    }

    pub fn x_at(&self, q: Point) -> Result<Vec3> {
        Ok(self.dirs_at(q)?[0])
    }

    pub fn y_at(&self, q: Point) -> Result<Vec3> {
        Ok(self.dirs_at(q)?[1])
    }

    pub fn lambda_at(&self, q: Point) -> Result<f64> {
        Ok(shape_data(self.g, self.alpha, q, self.params)?.lambda.0)
    }
}

/// ⟨∇_X Y, N⟩ and ⟨∇_Y X, N⟩ for the tracked principal frame.
#[derive(Debug, Clone, Copy)]
pub struct PrincipalBracket {
    /// ⟨∇_X Y, N⟩
    pub forward: f64,
    /// ⟨∇_Y X, N⟩
    pub backward: f64,
    pub k: f64,
}

pub fn principal_frame_bracket_check(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<PrincipalBracket> {
    let mj = g.jet(p, params)?;
    let fj = FrameJets::new(&mj, alpha, params)?;
    let tracked = TrackedFrame::new(g, alpha, p, params)?;
    let x = tracked.x_at(p)?;
    let y = tracked.y_at(p)?;
    let jac_x = jacobian_richardson(|q| tracked.x_at(q), p, FRAME_FD_STEP)?;
    let jac_y = jacobian_richardson(|q| tracked.y_at(q), p, FRAME_FD_STEP)?;
    let ch = christoffel(&mj);
    let n_hat = FrameJets::values(&fj.n_hat);
    let nabla = |a: Vec3, b: Vec3, jac_b: &[[f64; 3]; 3]| -> Vec3 {
        std::array::from_fn(|l| {
            let mut s = 0.0;
            for i in 0..3 {
                s += a[i] * jac_b[i][l];
                for j in 0..3 {
                    s += a[i] * b[j] * ch.upper[l][i][j];
                }
            }
            s
        })
    };
    Ok(PrincipalBracket {
        forward: mj.inner(nabla(x, y, &jac_y), n_hat),
        backward: mj.inner(nabla(y, x, &jac_x), n_hat),
        k: fj.k,
    })
}

/// Axis-aligned scan region.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl ScanBox {
    /// Grid nodes in x-outer, z-inner order; a single node sits at `min`.
    pub fn grid(&self, n: usize) -> Vec<Point> {
        let coords = |axis: usize| -> Vec<f64> {
            if n <= 1 {
                return vec![self.min[axis]];
            }
            (0..n)
                .map(|i| {
                    self.min[axis]
                        + (self.max[axis] - self.min[axis]) * i as f64 / (n - 1) as f64
                })
                .collect()
        };
        let (xs, ys, zs) = (coords(0), coords(1), coords(2));
        let mut out = Vec::with_capacity(n * n * n);
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    out.push(Point::new(x, y, z));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UmbilicRecord {
    pub point: [Fp; 3],
    pub lambda: Fp,
}

#[derive(Debug, Clone, Serialize)]
pub struct UmbilicScan {
    pub tolerance: Fp,
    pub evaluated: usize,
    pub umbilic_points: Vec<UmbilicRecord>,
    pub lambda_min: Fp,
    pub lambda_max: Fp,
    pub skipped: Vec<SkippedPoint>,
    /// Per-grid-point values, in grid order (CSV payload).
    #[serde(skip)]
    pub records: Vec<UmbilicRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedPoint {
    pub point: [Fp; 3],
    pub reason: String,
}

/// Evaluates λ on a grid and collects near-umbilic points; evaluation
/// failures are recorded and skipped rather than aborting the scan.
pub fn umbilic_scan(
    g: &MetricField,
    alpha: &OneForm,
    region: &ScanBox,
    resolution: usize,
    params: &Params,
    tol: f64,
) -> UmbilicScan {
    let mut scan = UmbilicScan {
        tolerance: Fp(tol),
        evaluated: 0,
        umbilic_points: Vec::new(),
        lambda_min: Fp(f64::INFINITY),
        lambda_max: Fp(f64::NEG_INFINITY),
        skipped: Vec::new(),
        records: Vec::new(),
    };
    for p in region.grid(resolution) {
        match shape_data(g, alpha, p, params) {
            Ok(sd) => {
                let lambda = sd.lambda.0;
                scan.evaluated += 1;
                scan.lambda_min = Fp(scan.lambda_min.0.min(lambda));
                scan.lambda_max = Fp(scan.lambda_max.0.max(lambda));
                let rec = UmbilicRecord { point: fp3(p.coords()), lambda: Fp(lambda) };
                if lambda < tol {
                    scan.umbilic_points.push(rec.clone());
                }
                scan.records.push(rec);
            }
            Err(err) => scan.skipped.push(SkippedPoint {
                point: fp3(p.coords()),
                reason: err.to_string(),
            }),
        }
    }
    scan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::riemann::euclidean_metric;

    fn flat_torus() -> (MetricField, OneForm) {
        (
            euclidean_metric(),
            OneForm([
                parse("cos(z)", &[]).unwrap(),
                parse("sin(z)", &[]).unwrap(),
                parse("0", &[]).unwrap(),
            ]),
        )
    }

    fn counterexample() -> (MetricField, OneForm, Params) {
        let pn = ["A", "B"];
        let g = MetricField::from_upper(
            parse("A*exp(z)", &pn).unwrap(),
            parse("1", &pn).unwrap(),
            parse("0", &pn).unwrap(),
            parse("x^2 + B*exp(-z)", &pn).unwrap(),
            parse("x", &pn).unwrap(),
            parse("1", &pn).unwrap(),
        );
        let alpha = OneForm([
            parse("0", &pn).unwrap(),
            parse("x", &pn).unwrap(),
            parse("1", &pn).unwrap(),
        ]);
        (g, alpha, Params::from([("A", 1.0), ("B", 2.0)]))
    }

    fn ker_dz() -> (MetricField, OneForm) {
        (
            euclidean_metric(),
            OneForm([
                parse("0", &[]).unwrap(),
                parse("0", &[]).unwrap(),
                parse("1", &[]).unwrap(),
            ]),
        )
    }

    #[test]
    fn parallel_planes_have_zero_ii() {
        // ker dz is integrable with totally geodesic leaves; treated as a
        // plane field only (is_contact is false, shape data still defined).
        let (g, alpha) = ker_dz();
        let par = Params::new();
        let sd = shape_data(&g, &alpha, Point::new(0.3, -0.8, 0.4), &par).unwrap();
        assert_eq!(sd.ii_values(), [[0.0; 2]; 2]);
        assert_eq!(sd.lambda.0, 0.0);
        assert!(sd.is_umbilic);
        assert!(sd.principal_dirs.is_none());
    }

    // Flat torus in the frame (∂z, (−sin z, cos z, 0)): II = [[0,−½],[−½,0]]
    // from ∇_{∂z}(−sin z, cos z, 0) = −N by hand.
    #[test]
    fn flat_torus_ii_in_reference_frame() {
        let (g, alpha) = flat_torus();
        let par = Params::new();
        let p = Point::new(0.3, 0.1, 0.7);
        let frame = [[0.0, 0.0, 1.0], [-p.z.sin(), p.z.cos(), 0.0]];
        let ii = second_fundamental_form_in_frame(&g, &alpha, p, &par, frame).unwrap();
        for (got, want) in ii.iter().flatten().zip([0.0, -0.5, -0.5, 0.0]) {
            assert!((got - want).abs() < 1e-12, "II = {ii:?}");
        }
    }

    #[test]
    fn flat_torus_shape_data() {
        let (g, alpha) = flat_torus();
        let par = Params::new();
        let p = Point::new(-0.4, 0.9, 1.3);
        let sd = shape_data(&g, &alpha, p, &par).unwrap();
        assert!((sd.lambda.0 - 0.5).abs() < 1e-12);
        assert!(sd.mean_curvature.0.abs() < 1e-12);
        assert!((sd.extrinsic_curvature.0 + 0.25).abs() < 1e-12);
        // X, Y, N mutually g-orthonormal; A X = λX, A Y = −λY in the frame
        let [x, y] = sd.principal_dir_values().unwrap();
        let mj = g.jet(p, &par).unwrap();
        let n = [sd.normal[0].0, sd.normal[1].0, sd.normal[2].0];
        for (u, v) in [(x, y), (x, n), (y, n)] {
            assert!(mj.inner(u, v).abs() < 1e-10);
        }
        assert!((mj.inner(x, x) - 1.0).abs() < 1e-10);
        assert!((mj.inner(y, y) - 1.0).abs() < 1e-10);
    }

    // Counterexample-family origin in the frame ((1,0,0), (−1,1,0)):
    // II = [[−½, ½], [½, ½]], eigenvalues ±1/√2 (hand + numeric FD oracle).
    #[test]
    fn counterexample_origin_ii() {
        let (g, alpha, par) = counterexample();
        let frame = [[1.0, 0.0, 0.0], [-1.0, 1.0, 0.0]];
        let ii = second_fundamental_form_in_frame(&g, &alpha, Point::ORIGIN, &par, frame).unwrap();
        for (got, want) in ii.iter().flatten().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-12, "II = {ii:?}");
        }
        let sd = shape_data(&g, &alpha, Point::ORIGIN, &par).unwrap();
        assert!((sd.lambda.0 - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(sd.mean_curvature.0.abs() < 1e-12);
        assert!((sd.extrinsic_curvature.0 + 0.5).abs() < 1e-12);
    }

    #[test]
    fn extension_schemes_agree() {
        let (g, alpha, par) = counterexample();
        for p in [Point::ORIGIN, Point::new(0.2, -0.1, 0.3), Point::new(-0.3, 0.4, -0.2)] {
            let a = second_fundamental_form_with(&g, &alpha, p, &par, ExtensionScheme::Projection)
                .unwrap();
            let b = second_fundamental_form_with(&g, &alpha, p, &par, ExtensionScheme::Solved)
                .unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (a.matrix[i][j] - b.matrix[i][j]).abs() < 1e-7,
                        "tensoriality defect at {p:?}: {:?} vs {:?}",
                        a.matrix,
                        b.matrix
                    );
                }
            }
        }
    }

    #[test]
    fn principal_bracket_is_half_k() {
        let (g, alpha) = flat_torus();
        let par = Params::new();
        let pb =
            principal_frame_bracket_check(&g, &alpha, Point::new(0.3, 0.1, 0.7), &par).unwrap();
        assert!((pb.forward.abs() - 0.5).abs() < 1e-5, "forward {}", pb.forward);
        assert!((pb.forward + pb.backward).abs() < 1e-5);

        let (g, alpha, par) = counterexample();
        let pb = principal_frame_bracket_check(&g, &alpha, Point::ORIGIN, &par).unwrap();
        assert!((pb.forward.abs() - 0.5).abs() < 1e-5, "forward {}", pb.forward);
        assert!((pb.forward + pb.backward).abs() < 1e-5);
    }

    #[test]
    fn umbilic_point_refused() {
        let (g, alpha) = ker_dz();
        let par = Params::new();
        assert!(matches!(
            principal_frame_bracket_check(&g, &alpha, Point::ORIGIN, &par),
            Err(GeomError::UmbilicPoint { .. })
        ));
    }

    #[test]
    fn umbilic_scans() {
        let par = Params::new();
        let unit_box = ScanBox { min: [-0.5; 3], max: [0.5; 3] };

        let (g, alpha) = ker_dz();
        let scan = umbilic_scan(&g, &alpha, &unit_box, 5, &par, UMBILIC_TOL);
        assert_eq!(scan.evaluated, 125);
        assert_eq!(scan.umbilic_points.len(), 125);

        let (g, alpha) = flat_torus();
        let scan = umbilic_scan(&g, &alpha, &unit_box, 5, &par, UMBILIC_TOL);
        assert!(scan.umbilic_points.is_empty());
        assert!((scan.lambda_min.0 - 0.5).abs() < 1e-9);
        assert!((scan.lambda_max.0 - 0.5).abs() < 1e-9);

        let (g, alpha, cpar) = counterexample();
        let bx = ScanBox { min: [-0.25; 3], max: [0.25; 3] };
        let scan = umbilic_scan(&g, &alpha, &bx, 5, &cpar, UMBILIC_TOL);
        assert!(scan.umbilic_points.is_empty());
        assert!(scan.lambda_min.0 > 0.5);
        assert!(scan.skipped.is_empty());
    }
}
