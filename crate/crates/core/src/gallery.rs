//! Built-in (metric, contact form) pairs and the negativity verdict for the
//! exponential counterexample family.
//!
//! The family lives on the standard contact structure ker(dz + x dy) with
//! g = [[a,b,0],[b,c,x],[0,x,1]], a = A·eᶻ, b = 1, c = x² + B·e⁻ᶻ; then
//! det g ≡ AB − 1 and the mean-curvature condition ∂_z(a(c−x²)−b²) = 0 holds
//! identically, so the Reeb field (0,0,1) is geodesic and ξ is minimal.
//!
//! Orientation caveat: this example also circulates with α = dz − x dy,
//! but the metric's (2,3) entry is +x, which matches ⟨N,·⟩ = α only for
//! α = dz + x dy. The gallery uses dz + x dy and reports are explicit about
//! the frame, rather than silently flipping signs.

use serde::Serialize;

use crate::contact::OneForm;
use crate::error::{GeomError, Result};
use crate::expr::{parse, Params, Point};
use crate::linalg::Vec3;
use crate::report::{fp3, fp3x3, Fp};
use crate::riemann::{
    curvature_matrix, riemann_tensor, sectional_curvature, BivectorOrder, CurvatureMatrix,
    MetricField,
};
use crate::rng::SplitMix64;
use crate::shape::ScanBox;

/// Parameters of the counterexample family; positive definiteness is exactly
/// AB > 1, and k = 1/√(AB−1).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CounterexampleParams {
    pub a: f64,
    pub b: f64,
}

impl CounterexampleParams {
    // negated comparisons so NaN parameters fail validation too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !(a * b > 1.0) {
            return Err(GeomError::InvalidParams(format!(
                "need A > 0 and AB > 1; got A = {a}, B = {b} (AB = {})",
                a * b
            )));
        }
        Ok(CounterexampleParams { a, b })
    }

    pub fn k(&self) -> f64 {
        1.0 / (self.a * self.b - 1.0).sqrt()
    }

    pub fn params(&self) -> Params {
        Params::from([("A", self.a), ("B", self.b)])
    }
}

/// Textual gallery entry; also the source of truth for the CLI catalog.
#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub metric: [[&'static str; 3]; 3],
    pub alpha: [&'static str; 3],
    pub parameters: &'static [(&'static str, f64)],
    pub domain: ScanBox,
}

pub fn gallery_entries() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            name: "flat-torus",
            description: "Euclidean metric with ker(cos z dx + sin z dy); flat and compatible",
            metric: [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
            alpha: ["cos(z)", "sin(z)", "0"],
            parameters: &[],
            domain: ScanBox { min: [-1.0; 3], max: [1.0; 3] },
        },
        GalleryEntry {
            name: "counterexample",
            description: "exponential family on ker(dz + x dy); negatively curved near 0 for suitable AB",
            metric: [
                ["A*exp(z)", "1", "0"],
                ["1", "x^2 + B*exp(-z)", "x"],
                ["0", "x", "1"],
            ],
            alpha: ["0", "x", "1"],
            parameters: &[("A", 1.0), ("B", 2.0)],
            domain: ScanBox { min: [-0.4; 3], max: [0.4; 3] },
        },
        GalleryEntry {
            name: "hyperbolic",
            description: "half-space model z⁻²·id (curvature −1) with ker(dz + x dy); not compatible",
            metric: [["1/z^2", "0", "0"], ["0", "1/z^2", "0"], ["0", "0", "1/z^2"]],
            alpha: ["0", "x", "1"],
            parameters: &[],
            domain: ScanBox { min: [-1.0, -1.0, 0.2], max: [1.0, 1.0, 2.0] },
        },
    ]
}

pub fn entry(name: &str) -> Option<GalleryEntry> {
    gallery_entries().into_iter().find(|e| e.name == name)
}

fn build_pair(entry: &GalleryEntry) -> (MetricField, OneForm) {
    let names: Vec<&str> = entry.parameters.iter().map(|(n, _)| *n).collect();
    let e = |s: &str| parse(s, &names).expect("gallery expression parses");
    let rows: [[crate::expr::Expr; 3]; 3] = entry.metric.map(|row| row.map(&e));
    let g = MetricField::from_rows(rows).expect("gallery metric symmetric");
    let alpha = OneForm(entry.alpha.map(&e));
    (g, alpha)
}

/// Identity metric with α = cos z dx + sin z dy.
pub fn flat_torus_pair() -> (MetricField, OneForm) {
    build_pair(&entry("flat-torus").unwrap())
}

/// Constant-curvature −1 half-space metric (chart z > 0.1) with dz + x dy.
pub fn hyperbolic_pair() -> (MetricField, OneForm) {
    build_pair(&entry("hyperbolic").unwrap())
}

/// The counterexample family; evaluate with `cp.params()`.
pub fn counterexample_pair(cp: &CounterexampleParams) -> Result<(MetricField, OneForm)> {
    CounterexampleParams::new(cp.a, cp.b)?;
    Ok(build_pair(&entry("counterexample").unwrap()))
}

/// The reference orthonormal frame of the family:
/// (∂z, (1/√(Aeᶻ)) ∂x, √(Aeᶻ/(AB−1)) (−(1/Aeᶻ) ∂x + ∂y − x ∂z)).
pub fn counterexample_frame(cp: &CounterexampleParams, pt: Point) -> Result<[Vec3; 3]> {
    CounterexampleParams::new(cp.a, cp.b)?;
    let ae_z = cp.a * pt.z.exp();
    let det = cp.a * cp.b - 1.0;
    let s = (ae_z / det).sqrt();
    let e1 = [0.0, 0.0, 1.0];
    let e2 = [1.0 / ae_z.sqrt(), 0.0, 0.0];
    let e3 = [-s / ae_z, s, -pt.x * s];
    Ok([e1, e2, e3])
}

/// The closed-form curvature matrix the family is quoted with, evaluated
/// verbatim in the inferred normal-first bivector ordering. Comparisons
/// against direct curvature are reported, never presumed to vanish.
pub fn counterexample_closed_form(
    cp: &CounterexampleParams,
    pt: Point,
) -> Result<CurvatureMatrix> {
    CounterexampleParams::new(cp.a, cp.b)?;
    let ae_z = cp.a * pt.z.exp();
    let det = cp.a * cp.b - 1.0;
    let x = pt.x;
    let m11 = 0.25 * (cp.a * cp.b - 3.0 - 2.0 * x * x * ae_z) / det;
    let m12 = -0.5 * x * (ae_z / det).sqrt();
    let m13 = 0.5 * x * ae_z.sqrt() / det;
    let m = [[m11, m12, m13], [m12, -0.25, 0.0], [m13, 0.0, 0.25]];
    Ok(CurvatureMatrix {
        m,
        ordering: BivectorOrder::ReebFirst,
        frame: counterexample_frame(cp, pt)?,
    })
}

/// A sectional curvature that failed to be negative, with the plane that
/// produced it.
#[derive(Debug, Clone, Serialize)]
pub struct OffendingSectional {
    pub point: [Fp; 3],
    pub plane: String,
    pub sectional: Fp,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictPointRecord {
    pub point: [Fp; 3],
    pub direct: [[Fp; 3]; 3],
    pub closed_form: [[Fp; 3]; 3],
    pub residual: Fp,
    pub frame_sectionals: [Fp; 3],
    pub min_sectional: Fp,
    pub max_sectional: Fp,
    pub matrix_negative_definite: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictSummary {
    pub max_residual: Fp,
    pub matrix_negative_definite_everywhere: bool,
    pub all_sectional_negative: bool,
    pub counterexample_points: Vec<OffendingSectional>,
}

/// Outcome of the negativity audit over a ball.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub params: CounterexampleParams,
    pub radius: Fp,
    pub grid: usize,
    pub random_planes_per_point: usize,
    pub points: Vec<VerdictPointRecord>,
    pub summary: VerdictSummary,
}

/// Compares direct curvature against the quoted closed form and collects
/// sectional-curvature signs over an n³ grid restricted to the ball of
/// radius `r`. The verdict fields state what was computed; nothing about the
/// outcome is assumed.
pub fn counterexample_verdict(
    cp: &CounterexampleParams,
    radius: f64,
    grid: usize,
    rng: &mut SplitMix64,
) -> Result<VerdictReport> {
    let cp = CounterexampleParams::new(cp.a, cp.b)?;
    let (g, _alpha) = counterexample_pair(&cp)?;
    let params = cp.params();
    const RANDOM_PLANES: usize = 20;

    let bx = ScanBox { min: [-radius; 3], max: [radius; 3] };
    let mut points = Vec::new();
    let mut offenders = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut neg_def_everywhere = true;

    for p in bx.grid(grid) {
        if p.norm() > radius + 1e-12 {
            continue;
        }
        let mj = g.jet(p, &params)?;
        let rm = riemann_tensor(&mj);
        let frame = counterexample_frame(&cp, p)?;
        let direct = curvature_matrix(&mj, &rm, frame, BivectorOrder::ReebFirst)?;
        let closed = counterexample_closed_form(&cp, p)?;
        let residual = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .fold(0.0f64, |m, (i, j)| m.max((direct.m[i][j] - closed.m[i][j]).abs()));
        max_residual = max_residual.max(residual);

        let frame_sectionals = [direct.m[0][0], direct.m[1][1], direct.m[2][2]];
        let plane_names = ["e1^e2", "e1^e3", "e2^e3"];
        let mut min_s = f64::INFINITY;
        let mut max_s = f64::NEG_INFINITY;
        for (value, name) in frame_sectionals.iter().zip(plane_names) {
            min_s = min_s.min(*value);
            max_s = max_s.max(*value);
            if *value >= 0.0 {
                offenders.push(OffendingSectional {
                    point: fp3(p.coords()),
                    plane: name.to_owned(),
                    sectional: Fp(*value),
                });
            }
        }
        for i in 0..RANDOM_PLANES {
            let (u, v) = rng.plane();
            let s = sectional_curvature(&mj, &rm, u, v)?;
            min_s = min_s.min(s);
            max_s = max_s.max(s);
            if s >= 0.0 {
                offenders.push(OffendingSectional {
                    point: fp3(p.coords()),
                    plane: format!("random-{i}"),
                    sectional: Fp(s),
                });
            }
        }

        let neg_def = direct.max_eigenvalue() < 0.0;
        neg_def_everywhere &= neg_def;
        points.push(VerdictPointRecord {
            point: fp3(p.coords()),
            direct: fp3x3(direct.m),
            closed_form: fp3x3(closed.m),
            residual: Fp(residual),
            frame_sectionals: [
                Fp(frame_sectionals[0]),
                Fp(frame_sectionals[1]),
                Fp(frame_sectionals[2]),
            ],
            min_sectional: Fp(min_s),
            max_sectional: Fp(max_s),
            matrix_negative_definite: neg_def,
        });
    }

    let all_sectional_negative = offenders.is_empty();
    Ok(VerdictReport {
        params: cp,
        radius: Fp(radius),
        grid,
        random_planes_per_point: RANDOM_PLANES,
        points,
        summary: VerdictSummary {
            max_residual: Fp(max_residual),
            matrix_negative_definite_everywhere: neg_def_everywhere,
            all_sectional_negative,
            counterexample_points: offenders,
        },
    })
}
