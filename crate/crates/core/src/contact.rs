//! Contact forms, Reeb fields, and the compatibility data of a contact
//! metric structure: ⟨N,X⟩ = α(X) and k⟨X,JY⟩ = dα(X,Y) for a constant k.
//!
//! The Reeb field, unit normal, and ξ-frames are algebraic in the 2-jets of
//! α and g, so their first derivatives propagate exactly through [`Jet1`]
//! arithmetic; no finite differences enter this module.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::expr::{Expr, Jet1, Params, Point};
use crate::linalg::{max_abs, Vec3};
use crate::report::{fp3, Fp};
use crate::riemann::{christoffel, MetricField, MetricJet};
use crate::rng::SplitMix64;

/// Contact condition threshold on the α∧dα density.
pub const CONTACT_TOL: f64 = 1e-9;
/// Minimum squared norm for a projected frame candidate.
const PROJ_TOL: f64 = 1e-12;

/// One-form α = α_x dx + α_y dy + α_z dz with expression components.
#[derive(Debug, Clone)]
pub struct OneForm(pub [Expr; 3]);

/// Value of dα at a point, as an antisymmetric matrix
/// `at(i,j) = ∂_i α_j − ∂_j α_i`.
#[derive(Debug, Clone, Copy)]
pub struct TwoFormValue {
    m: [[f64; 3]; 3],
}

impl TwoFormValue {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn apply(&self, u: Vec3, v: Vec3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.m[i][j] * u[i] * v[j];
            }
        }
        s
    }
}

/// Coordinate exterior derivative, exact via jets.
pub fn exterior_derivative(alpha: &OneForm, p: Point, params: &Params) -> Result<TwoFormValue> {
    let jets = [
        alpha.0[0].eval_jet2(p, params)?,
        alpha.0[1].eval_jet2(p, params)?,
        alpha.0[2].eval_jet2(p, params)?,
    ];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = jets[j].grad[i] - jets[i].grad[j];
        }
    }
    Ok(TwoFormValue { m })
}

/// Scalar density of α∧dα against dx∧dy∧dz.
pub fn contact_density(alpha: &OneForm, p: Point, params: &Params) -> Result<f64> {
    let a = [
        alpha.0[0].eval(p, params)?,
        alpha.0[1].eval(p, params)?,
        alpha.0[2].eval(p, params)?,
    ];
    let da = exterior_derivative(alpha, p, params)?;
    Ok(a[0] * da.at(1, 2) - a[1] * da.at(0, 2) + a[2] * da.at(0, 1))
}

/// Per-point contact verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ContactVerdict {
    pub point: [Fp; 3],
    pub density: Fp,
    pub is_contact: bool,
}

pub fn is_contact(alpha: &OneForm, points: &[Point], params: &Params) -> Result<Vec<ContactVerdict>> {
    points
        .iter()
        .map(|&p| {
            let density = contact_density(alpha, p, params)?;
            Ok(ContactVerdict {
                point: fp3(p.coords()),
                density: Fp(density),
                is_contact: density.abs() > CONTACT_TOL,
            })
        })
        .collect()
}

/// Reeb field of α at a point: the unique N with α(N) = 1, ι_N dα = 0.
///
/// Solved in closed form: N = V/ρ with V = ((dα)₂₃, −(dα)₁₃, (dα)₁₂) and
/// ρ the α∧dα density; ι_V dα = 0 identically and α(V) = ρ, so ρ ≠ 0 is
/// exactly solvability of the defining system {α(N) = 1, ι_N dα = 0}.
pub fn reeb_field(alpha: &OneForm, p: Point, params: &Params) -> Result<Vec3> {
    let ctx = AlphaJets::new(alpha, p, params)?;
    let reeb = ctx.reeb()?;
    Ok([reeb[0].value, reeb[1].value, reeb[2].value])
}

/// α data at a point with exact first derivatives. The Reeb field exists
/// only where α is contact; shape-operator machinery works without it.
pub(crate) struct AlphaJets {
    pub alpha: [Jet1; 3],
    pub beta: [[Jet1; 3]; 3],
    pub density: Jet1,
    reeb_jets: Option<[Jet1; 3]>,
}

impl AlphaJets {
    pub fn new(alpha: &OneForm, p: Point, params: &Params) -> Result<Self> {
        let jets = [
            alpha.0[0].eval_jet2(p, params)?,
            alpha.0[1].eval_jet2(p, params)?,
            alpha.0[2].eval_jet2(p, params)?,
        ];
        let a: [Jet1; 3] = std::array::from_fn(|i| Jet1::from_jet2(jets[i]));
        let mut beta = [[Jet1::constant(0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                beta[i][j] = Jet1 {
                    value: jets[j].grad[i] - jets[i].grad[j],
                    grad: std::array::from_fn(|k| jets[j].hess_at(i, k) - jets[i].hess_at(j, k)),
                };
            }
        }
        let density =
            a[0] * beta[1][2] - a[1] * beta[0][2] + a[2] * beta[0][1];
        let reeb_jets = if density.value.abs() > CONTACT_TOL {
            let v = [beta[1][2], -beta[0][2], beta[0][1]];
            Some(std::array::from_fn(|i| v[i] / density))
        } else {
            None
        };
        Ok(AlphaJets { alpha: a, beta, density, reeb_jets })
    }

    pub fn reeb(&self) -> Result<&[Jet1; 3]> {
        self.reeb_jets
            .as_ref()
            .ok_or(GeomError::NotContact { density: self.density.value })
    }

    pub fn dalpha(&self, u: &[Jet1; 3], v: &[Jet1; 3]) -> Jet1 {
        let mut s = Jet1::constant(0.0);
        for i in 0..3 {
            for j in 0..3 {
                s = s + self.beta[i][j] * u[i] * v[j];
            }
        }
        s
    }
}

/// Metric and frame data at a point with exact first derivatives: the unit
/// dual of α, a g-orthonormal frame of ξ = ker α, and the constant k.
pub(crate) struct FrameJets {
    pub aj: AlphaJets,
    pub g: [[Jet1; 3]; 3],
    pub alpha_sharp: [Jet1; 3],
    pub sharp_norm: Jet1,
    pub n_hat: [Jet1; 3],
    pub e2: [Jet1; 3],
    pub e3: [Jet1; 3],
    pub k: f64,
}

impl FrameJets {
    pub fn new(mj: &MetricJet, alpha: &OneForm, params: &Params) -> Result<Self> {
        let aj = AlphaJets::new(alpha, mj.point, params)?;
        let g: [[Jet1; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| Jet1 {
                value: mj.g[i][j],
                grad: std::array::from_fn(|k| mj.dg[k][i][j]),
            })
        });
        let g_inv: [[Jet1; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| Jet1 {
                value: mj.g_inv[i][j],
                grad: std::array::from_fn(|k| mj.dg_inv[k][i][j]),
            })
        });
        let alpha_sharp: [Jet1; 3] = std::array::from_fn(|i| {
            (0..3).fold(Jet1::constant(0.0), |s, j| s + g_inv[i][j] * aj.alpha[j])
        });
        let norm2 =
            (0..3).fold(Jet1::constant(0.0), |s, i| s + aj.alpha[i] * alpha_sharp[i]);
        if norm2.value <= 0.0 {
            return Err(GeomError::NotContact { density: aj.density.value });
        }
        let sharp_norm = norm2.sqrt();
        let n_hat: [Jet1; 3] = std::array::from_fn(|i| alpha_sharp[i] / sharp_norm);

        let inner = |u: &[Jet1; 3], v: &[Jet1; 3]| -> Jet1 {
            let mut s = Jet1::constant(0.0);
            for i in 0..3 {
                for j in 0..3 {
                    s = s + g[i][j] * u[i] * v[j];
                }
            }
            s
        };

        // Gram–Schmidt over the metric projections of ∂x, ∂y, ∂z onto ker α,
        // in that order, keeping the first two candidates with usable norm.
        let mut frame: Vec<[Jet1; 3]> = Vec::with_capacity(2);
        for axis in 0..3 {
            let basis: [Jet1; 3] =
                std::array::from_fn(|i| Jet1::constant(if i == axis { 1.0 } else { 0.0 }));
            let coeff = inner(&basis, &n_hat);
            let mut w: [Jet1; 3] = std::array::from_fn(|i| basis[i] - coeff * n_hat[i]);
            for prev in &frame {
                let c = inner(&w, prev);
                w = std::array::from_fn(|i| w[i] - c * prev[i]);
            }
            let n2 = inner(&w, &w);
            if n2.value > PROJ_TOL {
                let n = n2.sqrt();
                frame.push(std::array::from_fn(|i| w[i] / n));
            }
            if frame.len() == 2 {
                break;
            }
        }
        if frame.len() < 2 {
            return Err(GeomError::NotContact { density: aj.density.value });
        }
        let mut e3 = frame.pop().unwrap();
        let mut e2 = frame.pop().unwrap();
        // orient so k = dα(e₂,e₃) ≥ 0
        let mut k = aj.dalpha(&e2, &e3).value;
        if k < 0.0 {
            std::mem::swap(&mut e2, &mut e3);
            k = -k;
        }
        Ok(FrameJets { aj, g, alpha_sharp, sharp_norm, n_hat, e2, e3, k })
    }

    pub fn inner(&self, u: &[Jet1; 3], v: &[Jet1; 3]) -> Jet1 {
        let mut s = Jet1::constant(0.0);
        for i in 0..3 {
            for j in 0..3 {
                s = s + self.g[i][j] * u[i] * v[j];
            }
        }
        s
    }

    pub fn values(f: &[Jet1; 3]) -> Vec3 {
        [f[0].value, f[1].value, f[2].value]
    }

    /// Lie bracket of two jet fields, first-order exact.
    pub fn bracket(u: &[Jet1; 3], v: &[Jet1; 3]) -> Vec3 {
        std::array::from_fn(|l| {
            (0..3)
                .map(|i| u[i].value * v[l].grad[i] - v[i].value * u[l].grad[i])
                .sum()
        })
    }
}

/// Compatibility data of (g, α) at a point.
#[derive(Debug, Clone)]
pub struct ContactData {
    pub reeb: Vec3,
    pub k: f64,
    /// g-orthonormal frame (e₂, e₃) of ξ, oriented so k = dα(e₂,e₃) ≥ 0.
    pub xi_frame: [Vec3; 2],
    /// J on frame coefficients: J e₃ = e₂, J e₂ = −e₃ (so k⟨u,Jv⟩ = dα(u,v)).
    pub j_matrix: [[f64; 2]; 2],
}

pub fn contact_data(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<ContactData> {
    let mj = g.jet(p, params)?;
    let fj = FrameJets::new(&mj, alpha, params)?;
    Ok(ContactData {
        reeb: FrameJets::values(fj.aj.reeb()?),
        k: fj.k,
        xi_frame: [FrameJets::values(&fj.e2), FrameJets::values(&fj.e3)],
        j_matrix: [[0.0, 1.0], [-1.0, 0.0]],
    })
}

/// ⟨[e₂,e₃], N⟩ for the canonical ξ-frame; ±k for compatible pairs.
pub fn bracket_normal_component(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<f64> {
    let mj = g.jet(p, params)?;
    let fj = FrameJets::new(&mj, alpha, params)?;
    let br = FrameJets::bracket(&fj.e2, &fj.e3);
    Ok(mj.inner(br, FrameJets::values(&fj.n_hat)))
}

/// Predicate names used in reports and exit-code decisions.
pub const PREDICATES: [&str; 7] = [
    "reeb-dual-match",
    "unit-normal",
    "j-squared",
    "dalpha-kj",
    "k-constant",
    "reeb-geodesic",
    "minimal",
];

#[derive(Debug, Clone, Serialize)]
pub struct CompatPointRecord {
    pub point: [Fp; 3],
    pub reeb: [Fp; 3],
    pub alpha_dual: [Fp; 3],
    pub xi_frame: [[Fp; 3]; 2],
    pub k: Fp,
    pub dual_vs_reeb: Fp,
    pub unit_norm_residual: Fp,
    pub j_squared_residual: Fp,
    pub dalpha_vs_kj: Fp,
    pub reeb_geodesic_residual: Fp,
    pub mean_curvature: Fp,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatReport {
    pub points: Vec<CompatPointRecord>,
    pub k_fitted: Fp,
    pub k_spread: Fp,
    pub is_compatible: bool,
    pub failed_predicates: Vec<String>,
}

/// Runs the full Definition-1 audit at the sample points, including the
/// geodesic-Reeb and minimality consequences.
pub fn compatibility_check(
    g: &MetricField,
    alpha: &OneForm,
    points: &[Point],
    params: &Params,
    rng: &mut SplitMix64,
) -> Result<CompatReport> {
    assert!(!points.is_empty(), "at least one sample point required");
    let mut records = Vec::with_capacity(points.len());
    let mut failed: Vec<String> = Vec::new();
    let mut k_min = f64::INFINITY;
    let mut k_max = f64::NEG_INFINITY;
    let mut k_sum = 0.0;

    let fail = |name: &str, failed: &mut Vec<String>| {
        if !failed.iter().any(|f| f == name) {
            failed.push(name.to_owned());
        }
    };

    for &p in points {
        let mj = g.jet(p, params)?;
        let fj = FrameJets::new(&mj, alpha, params)?;
        let reeb_jets = fj.aj.reeb()?;
        let reeb = FrameJets::values(reeb_jets);
        let dual = FrameJets::values(&fj.alpha_sharp);

        let dual_vs_reeb = max_abs((0..3).map(|i| dual[i] - reeb[i]));
        let unit_norm_residual = (fj.sharp_norm.value - 1.0).abs();

        // J on the oriented frame satisfies J² = −id exactly; recompute the
        // product anyway so the report carries a measured residual.
        let j = [[0.0f64, 1.0], [-1.0, 0.0]];
        let mut jj_defect: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let v: f64 = (0..2).map(|m| j[r][m] * j[m][c]).sum();
                let want = if r == c { -1.0 } else { 0.0 };
                jj_defect = jj_defect.max((v - want).abs());
            }
        }

        // k⟨u, Jv⟩ = dα(u,v) over random in-ξ vectors
        let e2 = FrameJets::values(&fj.e2);
        let e3 = FrameJets::values(&fj.e3);
        let da = exterior_derivative(alpha, p, params)?;
        let mut kj_defect: f64 = 0.0;
        for _ in 0..20 {
            let (a, b) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            let (c, d) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            let u: Vec3 = std::array::from_fn(|i| a * e2[i] + b * e3[i]);
            let v: Vec3 = std::array::from_fn(|i| c * e2[i] + d * e3[i]);
            let jv: Vec3 = std::array::from_fn(|i| d * e2[i] - c * e3[i]);
            kj_defect = kj_defect.max((fj.k * mj.inner(u, jv) - da.apply(u, v)).abs());
        }

        // ∇_N N with exact reeb-field derivatives
        let ch = christoffel(&mj);
        let mut nabla_nn = [0.0; 3];
        for l in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                s += reeb_jets[i].value * reeb_jets[l].grad[i];
                for jx in 0..3 {
                    s += reeb_jets[i].value * reeb_jets[jx].value * ch.upper[l][i][jx];
                }
            }
            nabla_nn[l] = s;
        }
        let geodesic_residual = mj.norm(nabla_nn);

        let shape = crate::shape::second_fundamental_form(g, alpha, p, params)?;
        let mean_curvature = 0.5 * (shape.matrix[0][0] + shape.matrix[1][1]);

        if dual_vs_reeb > 1e-9 {
            fail("reeb-dual-match", &mut failed);
        }
        if unit_norm_residual > 1e-9 {
            fail("unit-normal", &mut failed);
        }
        if jj_defect > 1e-10 {
            fail("j-squared", &mut failed);
        }
        if kj_defect > 1e-9 {
            fail("dalpha-kj", &mut failed);
        }
        if geodesic_residual > 1e-8 {
            fail("reeb-geodesic", &mut failed);
        }
        if mean_curvature.abs() > 1e-8 {
            fail("minimal", &mut failed);
        }

        k_min = k_min.min(fj.k);
        k_max = k_max.max(fj.k);
        k_sum += fj.k;

        records.push(CompatPointRecord {
            point: fp3(p.coords()),
            reeb: fp3(reeb),
            alpha_dual: fp3(dual),
            xi_frame: [fp3(e2), fp3(e3)],
            k: Fp(fj.k),
            dual_vs_reeb: Fp(dual_vs_reeb),
            unit_norm_residual: Fp(unit_norm_residual),
            j_squared_residual: Fp(jj_defect),
            dalpha_vs_kj: Fp(kj_defect),
            reeb_geodesic_residual: Fp(geodesic_residual),
            mean_curvature: Fp(mean_curvature),
        });
    }

    let k_fitted = k_sum / points.len() as f64;
    let k_spread = k_max - k_min;
    if k_spread > 1e-8 * k_fitted.abs().max(1.0) {
        fail("k-constant", &mut failed);
    }

    Ok(CompatReport {
        points: records,
        k_fitted: Fp(k_fitted),
        k_spread: Fp(k_spread),
        is_compatible: failed.is_empty(),
        failed_predicates: failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::riemann::euclidean_metric;

    fn flat_torus_alpha() -> OneForm {
        OneForm([
            parse("cos(z)", &[]).unwrap(),
            parse("sin(z)", &[]).unwrap(),
            parse("0", &[]).unwrap(),
        ])
    }

    fn standard_alpha() -> OneForm {
        // dz + x dy
        OneForm([
            parse("0", &[]).unwrap(),
            parse("x", &[]).unwrap(),
            parse("1", &[]).unwrap(),
        ])
    }

    #[test]
    fn exterior_derivative_examples() {
        let par = Params::new();
        // d(dz + x dy) = dx∧dy
        let da = exterior_derivative(&standard_alpha(), Point::new(0.4, 0.1, -0.2), &par).unwrap();
        assert_eq!(da.at(0, 1), 1.0);
        assert_eq!(da.at(1, 0), -1.0);
        assert_eq!(da.at(0, 2), 0.0);
        assert_eq!(da.at(1, 2), 0.0);

        // d(cos z dx + sin z dy) = −sin z dz∧dx + cos z dz∧dy
        let p = Point::new(0.0, 0.0, 0.7);
        let da = exterior_derivative(&flat_torus_alpha(), p, &par).unwrap();
        assert!((da.at(2, 0) + p.z.sin()).abs() < 1e-15);
        assert!((da.at(2, 1) - p.z.cos()).abs() < 1e-15);
        assert_eq!(da.at(0, 1), 0.0);

        // closed form: d(dz) = 0
        let dz = OneForm([
            parse("0", &[]).unwrap(),
            parse("0", &[]).unwrap(),
            parse("1", &[]).unwrap(),
        ]);
        let da = exterior_derivative(&dz, p, &par).unwrap();
        assert_eq!(da.m, [[0.0; 3]; 3]);
    }

    #[test]
    fn contact_verdicts() {
        let par = Params::new();
        let pts = [Point::ORIGIN, Point::new(0.5, -0.3, 1.2)];
        for v in is_contact(&standard_alpha(), &pts, &par).unwrap() {
            assert!(v.is_contact);
            assert!((v.density.0 - 1.0).abs() < 1e-15);
        }
        // flat-torus form: contact everywhere, density magnitude 1
        // (sign is −1: α∧dα = −dx∧dy∧dz for this orientation)
        for v in is_contact(&flat_torus_alpha(), &pts, &par).unwrap() {
            assert!(v.is_contact);
            assert!((v.density.0.abs() - 1.0).abs() < 1e-15);
        }
        let dz = OneForm([
            parse("0", &[]).unwrap(),
            parse("0", &[]).unwrap(),
            parse("1", &[]).unwrap(),
        ]);
        for v in is_contact(&dz, &pts, &par).unwrap() {
            assert!(!v.is_contact);
            assert_eq!(v.density.0, 0.0);
        }
    }

    #[test]
    fn reeb_fields() {
        let par = Params::new();
        let n = reeb_field(&standard_alpha(), Point::new(0.3, 0.2, 0.9), &par).unwrap();
        assert_eq!(n, [0.0, 0.0, 1.0]);

        let p = Point::new(-0.2, 0.4, 1.3);
        let n = reeb_field(&flat_torus_alpha(), p, &par).unwrap();
        assert!((n[0] - p.z.cos()).abs() < 1e-15);
        assert!((n[1] - p.z.sin()).abs() < 1e-15);
        assert!(n[2].abs() < 1e-15);

        let dz = OneForm([
            parse("0", &[]).unwrap(),
            parse("0", &[]).unwrap(),
            parse("1", &[]).unwrap(),
        ]);
        assert!(matches!(
            reeb_field(&dz, p, &par),
            Err(GeomError::NotContact { .. })
        ));
    }

    #[test]
    fn flat_torus_is_compatible() {
        let g = euclidean_metric();
        let alpha = flat_torus_alpha();
        let par = Params::new();
        let mut rng = SplitMix64::new(7);
        let points: Vec<Point> =
            (0..25).map(|_| rng.point_in_box([-1.0; 3], [1.0; 3])).collect();
        let mut rng2 = SplitMix64::new(8);
        let report = compatibility_check(&g, &alpha, &points, &par, &mut rng2).unwrap();
        assert!(report.is_compatible, "failed: {:?}", report.failed_predicates);
        assert!((report.k_fitted.0.abs() - 1.0).abs() < 1e-9);
        assert!(report.k_spread.0 < 1e-10);
    }

    #[test]
    fn hyperbolic_fails_unit_normal() {
        // g = z⁻²·identity on z > 0, α = dz + x dy: the metric dual of α is
        // z²(0,x,1) with g-norm z√(1+x²) ≠ 1 at generic points.
        let ginv2 = || parse("1/z^2", &[]).unwrap();
        let zero = || parse("0", &[]).unwrap();
        let g = MetricField::from_upper(ginv2(), zero(), zero(), ginv2(), zero(), ginv2());
        let par = Params::new();
        let p = Point::new(0.4, -0.2, 0.8);
        let mj = g.jet(p, &par).unwrap();
        let fj = FrameJets::new(&mj, &standard_alpha(), &par).unwrap();
        let dual = FrameJets::values(&fj.alpha_sharp);
        let z2 = p.z * p.z;
        assert!((dual[0]).abs() < 1e-14);
        assert!((dual[1] - p.x * z2).abs() < 1e-14);
        assert!((dual[2] - z2).abs() < 1e-14);
        let want_norm = p.z * (1.0 + p.x * p.x).sqrt();
        assert!((fj.sharp_norm.value - want_norm).abs() < 1e-12);

        let mut rng = SplitMix64::new(3);
        let points: Vec<Point> =
            (0..10).map(|_| rng.point_in_box([-1.0, -1.0, 0.3], [1.0, 1.0, 1.8])).collect();
        let mut rng2 = SplitMix64::new(4);
        let report = compatibility_check(&g, &standard_alpha(), &points, &par, &mut rng2).unwrap();
        assert!(!report.is_compatible);
        assert!(report.failed_predicates.iter().any(|p| p == "unit-normal"));
        assert!(report.failed_predicates.iter().any(|p| p == "reeb-dual-match"));
    }

    #[test]
    fn doubling_alpha_halves_reeb_and_breaks_compatibility() {
        let par = Params::new();
        let doubled = OneForm([
            parse("2*cos(z)", &[]).unwrap(),
            parse("2*sin(z)", &[]).unwrap(),
            parse("0", &[]).unwrap(),
        ]);
        let p = Point::new(0.3, 0.5, -0.4);
        let n1 = reeb_field(&flat_torus_alpha(), p, &par).unwrap();
        let n2 = reeb_field(&doubled, p, &par).unwrap();
        for i in 0..3 {
            assert!((n2[i] - 0.5 * n1[i]).abs() < 1e-14);
        }
        let g = euclidean_metric();
        let mut rng = SplitMix64::new(5);
        let points: Vec<Point> = (0..8).map(|_| rng.point_in_box([-1.0; 3], [1.0; 3])).collect();
        let mut rng2 = SplitMix64::new(6);
        let report = compatibility_check(&g, &doubled, &points, &par, &mut rng2).unwrap();
        assert!(!report.is_compatible);
        assert!(report.failed_predicates.iter().any(|p| p == "unit-normal"));
    }

    #[test]
    fn bracket_component_is_plus_minus_k() {
        let g = euclidean_metric();
        let alpha = flat_torus_alpha();
        let par = Params::new();
        for p in [Point::new(0.3, 0.1, 0.7), Point::new(-0.5, 0.2, 2.0)] {
            let v = bracket_normal_component(&g, &alpha, p, &par).unwrap();
            assert!((v.abs() - 1.0).abs() < 1e-10, "got {v}");
        }
    }

    // ⟨[e₂,e₃],N⟩ = ±k for the exponential pair, cross-checked against a
    // finite-difference bracket of the tracked frame fields.
    #[test]
    fn bracket_component_with_fd_oracle() {
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
        let par = Params::from([("A", 1.0), ("B", 2.0)]);
        for p in [Point::ORIGIN, Point::new(0.2, -0.1, 0.15)] {
            let exact = bracket_normal_component(&g, &alpha, p, &par).unwrap();
            assert!((exact.abs() - 1.0).abs() < 1e-6, "|⟨[e₂,e₃],N⟩| = {}", exact.abs());

            // finite-difference bracket of the sign-tracked frame fields
            let center = contact_data(&g, &alpha, p, &par).unwrap();
            let frame_at = |q: Point, which: usize| -> Vec3 {
                let cd = contact_data(&g, &alpha, q, &par).unwrap();
                let f = cd.xi_frame[which];
                let c = center.xi_frame[which];
                if crate::linalg::dot(f, c) < 0.0 {
                    [-f[0], -f[1], -f[2]]
                } else {
                    f
                }
            };
            let h = 1e-5;
            let mut bracket = [0.0; 3];
            for (l, slot) in bracket.iter_mut().enumerate() {
                let mut s = 0.0;
                for i in 0..3 {
                    let d3 = (frame_at(p.shifted(i, h), 1)[l]
                        - frame_at(p.shifted(i, -h), 1)[l])
                        / (2.0 * h);
                    let d2 = (frame_at(p.shifted(i, h), 0)[l]
                        - frame_at(p.shifted(i, -h), 0)[l])
                        / (2.0 * h);
                    s += center.xi_frame[0][i] * d3 - center.xi_frame[1][i] * d2;
                }
                *slot = s;
            }
            let mj = g.jet(p, &par).unwrap();
            let fj = FrameJets::new(&mj, &alpha, &par).unwrap();
            let fd_value = mj.inner(bracket, FrameJets::values(&fj.n_hat));
            assert!((exact - fd_value).abs() < 1e-6, "jet {exact} vs fd {fd_value}");
        }
    }

    // flipping e₃ negates ⟨[e₂,e₃],N⟩ (bilinearity of the bracket pairing)
    #[test]
    fn bracket_component_orientation() {
        let g = euclidean_metric();
        let alpha = flat_torus_alpha();
        let par = Params::new();
        let p = Point::new(0.4, -0.3, 0.9);
        let mj = g.jet(p, &par).unwrap();
        let fj = FrameJets::new(&mj, &alpha, &par).unwrap();
        let n = FrameJets::values(&fj.n_hat);
        let plus = mj.inner(FrameJets::bracket(&fj.e2, &fj.e3), n);
        let e3_flipped: [Jet1; 3] = std::array::from_fn(|i| -fj.e3[i]);
        let minus = mj.inner(FrameJets::bracket(&fj.e2, &e3_flipped), n);
        assert!((plus + minus).abs() < 1e-14);
    }

    #[test]
    fn k_and_j_identity_on_random_xi_vectors() {
        // k⟨u,Jv⟩ = dα(u,v) exactly characterizes the chosen J orientation
        let g = euclidean_metric();
        let alpha = flat_torus_alpha();
        let par = Params::new();
        let p = Point::new(0.2, -0.7, 1.1);
        let cd = contact_data(&g, &alpha, p, &par).unwrap();
        assert!((cd.k - 1.0).abs() < 1e-12);
        let da = exterior_derivative(&alpha, p, &par).unwrap();
        let mj = g.jet(p, &par).unwrap();
        let [e2, e3] = cd.xi_frame;
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let (a, b) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            let (c, d) = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            let u: Vec3 = std::array::from_fn(|i| a * e2[i] + b * e3[i]);
            let v: Vec3 = std::array::from_fn(|i| c * e2[i] + d * e3[i]);
            let jv: Vec3 = std::array::from_fn(|i| d * e2[i] - c * e3[i]);
            assert!((cd.k * mj.inner(u, jv) - da.apply(u, v)).abs() < 1e-12);
        }
        // reeb is g-orthogonal to ξ
        assert!(mj.inner(cd.reeb, e2).abs() < 1e-12);
        assert!(mj.inner(cd.reeb, e3).abs() < 1e-12);
    }
}
