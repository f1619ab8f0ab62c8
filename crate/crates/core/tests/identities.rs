#![allow(clippy::needless_range_loop)]

//! Tensor-level invariant suites on seeded random analytic metrics and the
//! gallery pairs: curvature symmetries, the first Bianchi identity, metric
//! compatibility of the connection, and agreement between the jet path and
//! the pure finite-difference recomputation.

use contactmetric::expr::{Axis, Expr, Exponent, Params};
use contactmetric::fd;
use contactmetric::gallery;
use contactmetric::linalg::max_abs;
use contactmetric::riemann::{
    christoffel, curvature_matrix, riemann_tensor, sectional_curvature, BivectorOrder,
    MetricField,
};
use contactmetric::rng::SplitMix64;

/// Random polynomial with |value| ≲ 0.6 on [-0.7, 0.7]³.
fn random_poly(rng: &mut SplitMix64) -> Expr {
    let mut terms: Option<Expr> = None;
    let n_terms = 1 + (rng.next_u64() % 4) as usize;
    for _ in 0..n_terms {
        let c = rng.uniform(-0.3, 0.3);
        let mut term = Expr::Const(c);
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let d = (rng.next_u64() % 3) as i32;
            if d > 0 {
                term = Expr::Mul(
                    Box::new(term),
                    Box::new(Expr::Pow(Box::new(Expr::Coord(axis)), Exponent::Int(d))),
                );
            }
        }
        terms = Some(match terms {
            None => term,
            Some(acc) => Expr::Add(Box::new(acc), Box::new(term)),
        });
    }
    terms.unwrap()
}

/// δ_ij + 0.1·(random symmetric polynomial perturbation).
fn random_metric(rng: &mut SplitMix64) -> MetricField {
    let entry = |rng: &mut SplitMix64, diag: bool| -> Expr {
        let base = if diag { 1.0 } else { 0.0 };
        Expr::Add(
            Box::new(Expr::Const(base)),
            Box::new(Expr::Mul(Box::new(Expr::Const(0.1)), Box::new(random_poly(rng)))),
        )
    };
    MetricField::from_upper(
        entry(rng, true),
        entry(rng, false),
        entry(rng, false),
        entry(rng, true),
        entry(rng, false),
        entry(rng, true),
    )
}

#[test]
fn curvature_symmetries_and_bianchi() {
    let mut rng = SplitMix64::new(2001);
    let params = Params::new();
    for metric_idx in 0..20 {
        let g = random_metric(&mut rng);
        for _ in 0..3 {
            let p = rng.point_in_box([-0.7; 3], [0.7; 3]);
            let mj = g.jet(p, &params).unwrap();
            let rm = riemann_tensor(&mj);
            let mut defect: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            let r = rm.low[i][j][k][l];
                            defect = defect.max((r + rm.low[j][i][k][l]).abs());
                            defect = defect.max((r + rm.low[i][j][l][k]).abs());
                            defect = defect.max((r - rm.low[k][l][i][j]).abs());
                            let bianchi =
                                r + rm.low[j][k][i][l] + rm.low[k][i][j][l];
                            defect = defect.max(bianchi.abs());
                        }
                    }
                }
            }
            assert!(defect < 1e-8, "metric {metric_idx}: symmetry defect {defect} at {p:?}");
        }
    }
}

#[test]
fn connection_is_metric_compatible() {
    let mut rng = SplitMix64::new(2002);
    let params = Params::new();
    for _ in 0..20 {
        let g = random_metric(&mut rng);
        let p = rng.point_in_box([-0.7; 3], [0.7; 3]);
        let mj = g.jet(p, &params).unwrap();
        let ch = christoffel(&mj);
        let mut defect: f64 = 0.0;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    defect = defect
                        .max((mj.dg[k][i][j] - ch.lower[k][i][j] - ch.lower[k][j][i]).abs());
                }
            }
        }
        assert!(defect < 1e-8, "∇g defect {defect}");
    }
}

#[test]
fn curvature_matrix_diagonal_is_sectional() {
    let mut rng = SplitMix64::new(2003);
    let params = Params::new();
    for _ in 0..10 {
        let g = random_metric(&mut rng);
        let p = rng.point_in_box([-0.7; 3], [0.7; 3]);
        let mj = g.jet(p, &params).unwrap();
        let rm = riemann_tensor(&mj);
        // orthonormalize the coordinate frame with metric Gram–Schmidt
        let mut frame = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..i {
                let c = mj.inner(frame[i], frame[j]);
                for l in 0..3 {
                    frame[i][l] -= c * frame[j][l];
                }
            }
            let n = mj.norm(frame[i]);
            for l in 0..3 {
                frame[i][l] /= n;
            }
        }
        let cm = curvature_matrix(&mj, &rm, frame, BivectorOrder::ReebFirst).unwrap();
        assert!(cm.symmetry_defect() < 1e-9);
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            let sec = sectional_curvature(&mj, &rm, frame[i], frame[j]).unwrap();
            assert!(
                (cm.m[a][a] - sec).abs() < 1e-10,
                "diagonal {a}: {} vs sectional {}",
                cm.m[a][a],
                sec
            );
        }
    }
}

#[test]
fn jet_curvature_matches_finite_differences_on_gallery() {
    let cp = gallery::CounterexampleParams::new(1.0, 2.0).unwrap();
    let cases: Vec<(MetricField, Params, [f64; 3], [f64; 3])> = vec![
        (gallery::flat_torus_pair().0, Params::new(), [-1.0; 3], [1.0; 3]),
        (
            gallery::counterexample_pair(&cp).unwrap().0,
            cp.params(),
            [-0.4; 3],
            [0.4; 3],
        ),
        (
            gallery::hyperbolic_pair().0,
            Params::new(),
            [-1.0, -1.0, 0.4],
            [1.0, 1.0, 1.6],
        ),
    ];
    let mut rng = SplitMix64::new(2004);
    for (g, params, lo, hi) in &cases {
        for _ in 0..5 {
            let p = rng.point_in_box(*lo, *hi);
            let mj = g.jet(p, params).unwrap();
            let rm = riemann_tensor(&mj);
            let fd_low = fd::riemann_fd(g, p, params, 3e-4, 1e-5).unwrap();
            let mut defect: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            defect = defect.max((rm.low[i][j][k][l] - fd_low[i][j][k][l]).abs());
                        }
                    }
                }
            }
            assert!(defect < 1e-4, "jet vs fd defect {defect} at {p:?}");
        }
    }
}

#[test]
fn christoffel_jet_vs_fd_on_random_metrics() {
    let mut rng = SplitMix64::new(2005);
    let params = Params::new();
    for _ in 0..10 {
        let g = random_metric(&mut rng);
        let p = rng.point_in_box([-0.7; 3], [0.7; 3]);
        let mj = g.jet(p, &params).unwrap();
        let ch = christoffel(&mj);
        let ch_fd = fd::christoffel_fd(&g, p, &params, fd::H1).unwrap();
        let defect = max_abs((0..27).map(|idx| {
            let (l, i, j) = (idx / 9, (idx / 3) % 3, idx % 3);
            ch.upper[l][i][j] - ch_fd[l][i][j]
        }));
        assert!(defect < 1e-7, "Γ jet vs fd defect {defect}");
    }
}

#[test]
fn metric_inverse_identity_holds() {
    let mut rng = SplitMix64::new(2006);
    let params = Params::new();
    for _ in 0..20 {
        let g = random_metric(&mut rng);
        let p = rng.point_in_box([-0.7; 3], [0.7; 3]);
        let mj = g.jet(p, &params).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                let got: f64 = (0..3).map(|m| mj.g[i][m] * mj.g_inv[m][j]).sum();
                assert!((got - want).abs() < 1e-12);
            }
        }
    }
}
