//! Curvature of a compatible contact metric structure expressed through
//! extrinsic data, and the checks built on top of it.
//!
//! In the principal bivector basis (X∧Y, X∧N, Y∧N) the curvature matrix of a
//! compatible metric is determined by λ, k, their derivatives, three
//! connection scalars, and the generalized Webster curvature K:
//!
//! ```text
//! M₁₁ = −3k²/4 + λ² + K          M₁₂ = −Y(λ) − 2λ⟨∇_X X, Y⟩
//! M₂₂ =  k²/4 − λ² + N(λ)        M₁₃ =  X(λ) − 2λ⟨∇_Y Y, X⟩
//! M₃₃ =  k²/4 − λ² − N(λ)        M₂₃ =  2λ⟨∇_N X, Y⟩
//! ```
//!
//! The sign of N(λ) in M₃₃ is the one forced by the curvature computation
//! ⟨R(Y,N)N,Y⟩ (replacing X by Y flips the derivative direction); a `+` there
//! would make M₂₂ = M₃₃ identically, which direct curvature contradicts.
//! Consistency against the direct tensor is checked, not assumed.

use serde::Serialize;

use crate::contact::{FrameJets, OneForm};
use crate::error::{GeomError, Result};
use crate::expr::{Params, Point};
use crate::fd::{directional_richardson, jacobian_richardson};
use crate::linalg::{max_abs, Mat3, Vec3};
use crate::report::{fp3, fp3x3, Fp};
use crate::riemann::{
    christoffel, curvature_matrix, riemann_tensor, sectional_curvature, BivectorOrder,
    MetricField, MetricJet,
};
use crate::shape::{shape_data, TrackedFrame, FRAME_FD_STEP};

/// Scalars entering the curvature matrix of a compatible metric at a
/// non-umbilic point.
#[derive(Debug, Clone, Serialize)]
pub struct ExtrinsicScalars {
    pub lambda: Fp,
    pub k: Fp,
    /// Directional derivatives of λ along the principal frame and the normal.
    pub x_lambda: Fp,
    pub y_lambda: Fp,
    pub n_lambda: Fp,
    /// ⟨∇_X X, Y⟩
    pub c_xxy: Fp,
    /// ⟨∇_Y Y, X⟩
    pub c_yyx: Fp,
    /// ⟨∇_N X, Y⟩
    pub c_nxy: Fp,
    /// Generalized Webster curvature, solved exactly from the ξ-plane
    /// sectional curvature via M₁₁ (the commutator formula is a separate,
    /// finite-difference-limited cross-check).
    pub webster_k: Fp,
}

/// Assembles the curvature matrix (ordering: ξ-plane first) from scalars.
pub fn assemble_curvature(s: &ExtrinsicScalars) -> Mat3 {
    let (lambda, k) = (s.lambda.0, s.k.0);
    let quarter_k2 = 0.25 * k * k;
    let m11 = -3.0 * quarter_k2 + lambda * lambda + s.webster_k.0;
    let m22 = quarter_k2 - lambda * lambda + s.n_lambda.0;
    let m33 = quarter_k2 - lambda * lambda - s.n_lambda.0;
    let m12 = -s.y_lambda.0 - 2.0 * lambda * s.c_xxy.0;
    let m13 = s.x_lambda.0 - 2.0 * lambda * s.c_yyx.0;
    let m23 = 2.0 * lambda * s.c_nxy.0;
    [[m11, m12, m13], [m12, m22, m23], [m13, m23, m33]]
}

/// Pointwise compatibility guard used by every identity operation.
pub(crate) fn require_compatible_at(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<(MetricJet, FrameJets)> {
    let mj = g.jet(p, params)?;
    let fj = FrameJets::new(&mj, alpha, params)?;
    let reeb = FrameJets::values(fj.aj.reeb()?);
    let dual = FrameJets::values(&fj.alpha_sharp);
    let dual_residual = max_abs((0..3).map(|i| dual[i] - reeb[i]));
    if dual_residual > 1e-8 {
        return Err(GeomError::NotCompatible {
            predicate: "reeb-dual-match",
            residual: dual_residual,
        });
    }
    let norm_residual = (fj.sharp_norm.value - 1.0).abs();
    if norm_residual > 1e-8 {
        return Err(GeomError::NotCompatible {
            predicate: "unit-normal",
            residual: norm_residual,
        });
    }
    Ok((mj, fj))
}

/// Principal frame with exact-N derivative data plus the tracked-FD pieces.
struct PrincipalData<'a> {
    tracked: TrackedFrame<'a>,
    x: Vec3,
    y: Vec3,
    n_hat: Vec3,
    jac_x: [[f64; 3]; 3],
    jac_y: [[f64; 3]; 3],
    lambda: f64,
    k: f64,
}

fn principal_data<'a>(
    g: &'a MetricField,
    alpha: &'a OneForm,
    p: Point,
    params: &'a Params,
    mj: &MetricJet,
    fj: &FrameJets,
) -> Result<PrincipalData<'a>> {
    let sd = shape_data(g, alpha, p, params)?;
    if sd.is_umbilic {
        return Err(GeomError::UmbilicPoint { lambda: sd.lambda.0 });
    }
    let mut tracked = TrackedFrame::new(g, alpha, p, params)?;
    let n_hat = FrameJets::values(&fj.n_hat);

    // Orient the frame the way the identity is derived: ⟨[X,Y],N⟩ = +k.
    let jac_y = jacobian_richardson(|q| tracked.y_at(q), p, FRAME_FD_STEP)?;
    let jac_x0 = jacobian_richardson(|q| tracked.x_at(q), p, FRAME_FD_STEP)?;
    let x0 = tracked.x_at(p)?;
    let y = tracked.y_at(p)?;
    let bracket: Vec3 = std::array::from_fn(|l| {
        (0..3).map(|i| x0[i] * jac_y[i][l] - y[i] * jac_x0[i][l]).sum()
    });
    let (x, jac_x) = if mj.inner(bracket, n_hat) < 0.0 {
        tracked.flip_x = true;
        (
            [-x0[0], -x0[1], -x0[2]],
            jac_x0.map(|row| [-row[0], -row[1], -row[2]]),
        )
    } else {
        (x0, jac_x0)
    };
    Ok(PrincipalData {
        tracked,
        x,
        y,
        n_hat,
        jac_x,
        jac_y,
        lambda: sd.lambda.0,
        k: fj.k,
    })
}

fn connection_scalar(
    mj: &MetricJet,
    a: Vec3,
    b: Vec3,
    jac_b: &[[f64; 3]; 3],
    c: Vec3,
) -> f64 {
    // ⟨∇_a b, c⟩ with ∂b supplied as a Jacobian
    let ch = christoffel(mj);
    let nab: Vec3 = std::array::from_fn(|l| {
        let mut s = 0.0;
        for i in 0..3 {
            s += a[i] * jac_b[i][l];
            for j in 0..3 {
                s += a[i] * b[j] * ch.upper[l][i][j];
            }
        }
        s
    });
    mj.inner(nab, c)
}

/// Extracts every scalar of the identity at a non-umbilic compatible point.
pub fn extract_scalars(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<ExtrinsicScalars> {
    let (mj, fj) = require_compatible_at(g, alpha, p, params)?;
    let pd = principal_data(g, alpha, p, params, &mj, &fj)?;

    let lam = |q: Point| pd.tracked.lambda_at(q);
    let x_lambda = directional_richardson(lam, p, pd.x, FRAME_FD_STEP)?;
    let y_lambda = directional_richardson(lam, p, pd.y, FRAME_FD_STEP)?;
    let reeb = FrameJets::values(fj.aj.reeb()?);
    let n_lambda = directional_richardson(lam, p, reeb, FRAME_FD_STEP)?;

    let c_xxy = connection_scalar(&mj, pd.x, pd.x, &pd.jac_x, pd.y);
    let c_yyx = connection_scalar(&mj, pd.y, pd.y, &pd.jac_y, pd.x);
    let c_nxy = connection_scalar(&mj, pd.n_hat, pd.x, &pd.jac_x, pd.y);

    // Webster K from the ξ-plane sectional curvature: K = K(ξ) + 3k²/4 − λ².
    let rm = riemann_tensor(&mj);
    let k_xi = sectional_curvature(&mj, &rm, pd.x, pd.y)?;
    let webster_k = k_xi + 0.75 * pd.k * pd.k - pd.lambda * pd.lambda;

    Ok(ExtrinsicScalars {
        lambda: Fp(pd.lambda),
        k: Fp(pd.k),
        x_lambda: Fp(x_lambda),
        y_lambda: Fp(y_lambda),
        n_lambda: Fp(n_lambda),
        c_xxy: Fp(c_xxy),
        c_yyx: Fp(c_yyx),
        c_nxy: Fp(c_nxy),
        webster_k: Fp(webster_k),
    })
}

/// The displayed commutator formula for the Webster curvature, evaluated with
/// tracked-frame finite differences (nested, hence tolerance-limited):
/// K = X(⟨∇_Y Y,X⟩) + Y(⟨∇_X X,Y⟩) − ⟨∇_Y Y,X⟩² − ⟨∇_X X,Y⟩²
///     − ⟨[X,Y],N⟩⟨[N,Y],X⟩.
pub fn webster_formula_fd(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<f64> {
    let (mj, fj) = require_compatible_at(g, alpha, p, params)?;
    let pd = principal_data(g, alpha, p, params, &mj, &fj)?;

    let scalar_at = |which_yyx: bool, q: Point| -> Result<f64> {
        let mjq = g.jet(q, params)?;
        let xq = pd.tracked.x_at(q)?;
        let yq = pd.tracked.y_at(q)?;
        if which_yyx {
            let jac_yq = jacobian_richardson(|r| pd.tracked.y_at(r), q, FRAME_FD_STEP)?;
            Ok(connection_scalar(&mjq, yq, yq, &jac_yq, xq))
        } else {
            let jac_xq = jacobian_richardson(|r| pd.tracked.x_at(r), q, FRAME_FD_STEP)?;
            Ok(connection_scalar(&mjq, xq, xq, &jac_xq, yq))
        }
    };
    let c_yyx = scalar_at(true, p)?;
    let c_xxy = scalar_at(false, p)?;
    let x_of_cyyx = directional_richardson(|q| scalar_at(true, q), p, pd.x, FRAME_FD_STEP)?;
    let y_of_cxxy = directional_richardson(|q| scalar_at(false, q), p, pd.y, FRAME_FD_STEP)?;

    let bracket_xy: Vec3 = std::array::from_fn(|l| {
        (0..3).map(|i| pd.x[i] * pd.jac_y[i][l] - pd.y[i] * pd.jac_x[i][l]).sum()
    });
    // [N,Y]^l = N^i ∂_i Y^l − Y^i ∂_i N^l, with ∂N exact from the reeb jets
    let reeb_jets = fj.aj.reeb()?;
    let reeb = FrameJets::values(reeb_jets);
    let bracket_ny: Vec3 = std::array::from_fn(|l| {
        (0..3)
            .map(|i| reeb[i] * pd.jac_y[i][l] - pd.y[i] * reeb_jets[l].grad[i])
            .sum()
    });
    Ok(x_of_cyyx + y_of_cxxy
        - c_yyx * c_yyx
        - c_xxy * c_xxy
        - mj.inner(bracket_xy, pd.n_hat) * mj.inner(bracket_ny, pd.x))
}

/// Residual record of the identity check at one point.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub point: [Fp; 3],
    pub scalars: ExtrinsicScalars,
    pub assembled: [[Fp; 3]; 3],
    pub direct: [[Fp; 3]; 3],
    pub residuals: [[Fp; 3]; 3],
    pub max_residual: Fp,
    /// |webster_k (solved) − commutator formula (finite differences)|.
    pub webster_cross_residual: Fp,
    pub pass: bool,
}

/// Compares the assembled matrix against direct curvature in the principal
/// frame; `tol` defaults to 1e−5 at call sites (frame finite differences
/// dominate the residual).
pub fn curvature_identity_check(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
    tol: f64,
) -> Result<IdentityResidual> {
    let (mj, fj) = require_compatible_at(g, alpha, p, params)?;
    let pd = principal_data(g, alpha, p, params, &mj, &fj)?;
    let scalars = extract_scalars(g, alpha, p, params)?;
    let assembled = assemble_curvature(&scalars);
    let rm = riemann_tensor(&mj);
    let direct = curvature_matrix(
        &mj,
        &rm,
        [pd.x, pd.y, pd.n_hat],
        BivectorOrder::XiPlaneFirst,
    )?;
    let mut residuals = [[0.0; 3]; 3];
    let mut max_residual: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            residuals[i][j] = assembled[i][j] - direct.m[i][j];
            max_residual = max_residual.max(residuals[i][j].abs());
        }
    }
    let webster_fd = webster_formula_fd(g, alpha, p, params)?;
    let webster_cross_residual = (scalars.webster_k.0 - webster_fd).abs();
    Ok(IdentityResidual {
        point: fp3(p.coords()),
        scalars,
        assembled: fp3x3(assembled),
        direct: fp3x3(direct.m),
        residuals: fp3x3(residuals),
        max_residual: Fp(max_residual),
        webster_cross_residual: Fp(webster_cross_residual),
        pass: max_residual < tol,
    })
}

/// Ric(N,N) identity: K(X,N) + K(Y,N) = k²/2 − 2λ².
#[derive(Debug, Clone, Serialize)]
pub struct RicReebIdentity {
    pub lhs: Fp,
    pub rhs: Fp,
    pub residual: Fp,
}

pub fn ric_reeb_identity(
    g: &MetricField,
    alpha: &OneForm,
    p: Point,
    params: &Params,
) -> Result<RicReebIdentity> {
    let (mj, fj) = require_compatible_at(g, alpha, p, params)?;
    let rm = riemann_tensor(&mj);
    let n_hat = FrameJets::values(&fj.n_hat);
    let e2 = FrameJets::values(&fj.e2);
    let e3 = FrameJets::values(&fj.e3);
    // the sum is Ric(N,N): any orthonormal ξ-frame gives the same value
    let lhs = sectional_curvature(&mj, &rm, e2, n_hat)?
        + sectional_curvature(&mj, &rm, e3, n_hat)?;
    let sd = shape_data(g, alpha, p, params)?;
    let lambda = sd.lambda.0;
    let rhs = 0.5 * fj.k * fj.k - 2.0 * lambda * lambda;
    Ok(RicReebIdentity { lhs: Fp(lhs), rhs: Fp(rhs), residual: Fp((lhs - rhs).abs()) })
}

/// Forced value of Ric(N,N) at an umbilic point of a compatible pair: k²/2,
/// strictly positive, so an umbilic point certifies positive curvature nearby.
pub fn umbilic_obstruction(k: f64) -> Result<f64> {
    if k.abs() <= 1e-12 {
        return Err(GeomError::ZeroK);
    }
    Ok(0.5 * k * k)
}

/// Constant-curvature constraint analysis.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceFormConstraints {
    pub lambda: Fp,
    /// The forced constant sectional curvature; identically zero, so no
    /// negative space form admits a compatible structure.
    pub sectional: Fp,
}

/// Solves the constraint system of a constant-curvature compatible metric:
/// vanishing off-diagonals force the connection scalars to zero, the Webster
/// curvature becomes k²/2, and equal diagonals give 2λ² = k²/2, hence
/// λ = k/2 and sectional curvature k²/4 − λ² = 0 exactly.
pub fn space_form_constraints(k: f64) -> Result<SpaceFormConstraints> {
    if k <= 0.0 {
        return Err(GeomError::InvalidParams(format!(
            "space-form analysis requires k > 0, got {k}"
        )));
    }
    let lambda = 0.5 * k;
    let sectional = 0.25 * k * k - lambda * lambda;
    Ok(SpaceFormConstraints { lambda: Fp(lambda), sectional: Fp(sectional) })
}
