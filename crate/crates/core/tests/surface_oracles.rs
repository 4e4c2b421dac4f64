mod common;

use std::f64::consts::{FRAC_PI_4, PI};

use d4lab_core::{
    expansion_coefficients, fundamental_forms, implicit_jet, normal_vector, parametrize, ridge_subparabolic_directions,
    sample, solve_point, Branch, ChartPoint, DirectionKind, ExpansionCoefficients, Sign, UnfoldingSpec,
};
use rand::Rng;

fn spec1() -> UnfoldingSpec {
    UnfoldingSpec::canonical(Sign::Minus).with(1, 0, 0, 2, 1.0).with(2, 0, 0, 2, 1.0)
}

fn theta_range(branch: Branch) -> (f64, f64) {
    if branch.elliptic() {
        (0.0, PI)
    } else {
        (-1.0, 1.0)
    }
}

#[test]
fn spec1_solves_to_machine_precision() {
    for branch in Branch::sheets(Sign::Minus) {
        let s = solve_point(&spec1(), branch, ChartPoint::new(FRAC_PI_4, 0.1), None).unwrap();
        assert!(s.residual <= 1e-12, "{branch:?}: {s:?}");
    }
}

#[test]
fn implicit_jet_matches_finite_differences() {
    let mut rng = common::rng(21);
    let h = 1e-4;
    for s in 0..10 {
        let e1 = if s % 2 == 0 { Sign::Minus } else { Sign::Plus };
        let spec = common::random_spec(&mut rng, e1);
        for branch in Branch::sheets(e1) {
            // inside the fold-free neighbourhood of the edge on hyperbolic sheets
            let (lo, hi) = if branch.elliptic() { (0.0, PI) } else { (-0.5, 0.5) };
            let (th, z) = (rng.gen_range(lo..hi), rng.gen_range(0.005..0.02));
            let b = |dt: f64, dz: f64| parametrize(&spec, branch, ChartPoint::new(th + dt, z + dz)).unwrap();
            let jet = implicit_jet(&spec, branch, ChartPoint::new(th, z)).unwrap();
            for (c, d) in [(0, jet.x), (1, jet.y)] {
                let f = |dt: f64, dz: f64| b(dt, dz)[c];
                let d1 = |g: &dyn Fn(f64) -> f64| (8.0 * (g(h) - g(-h)) - g(2.0 * h) + g(-2.0 * h)) / (12.0 * h);
                let d2 = |g: &dyn Fn(f64) -> f64| {
                    (16.0 * (g(h) + g(-h)) - g(2.0 * h) - g(-2.0 * h) - 30.0 * g(0.0)) / (12.0 * h * h)
                };
                let fd = [
                    d1(&|t| f(t, 0.0)),
                    d1(&|z| f(0.0, z)),
                    d2(&|t| f(t, 0.0)),
                    d1(&|z| d1(&|t| f(t, z))),
                    d2(&|z| f(0.0, z)),
                ];
                let exact = [d.d_theta, d.d_z, d.d_theta_theta, d.d_theta_z, d.d_z_z];
                let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (e, a) in exact.iter().zip(fd) {
                    assert!((e - a).abs() <= 1e-6 * scale, "{branch:?} theta {th} z {z}: {exact:?} vs {fd:?}");
                }
            }
        }
    }
}

#[test]
fn forms_and_normal_on_the_edge() {
    let mut rng = common::rng(22);
    for s in 0..20 {
        let e1 = if s % 2 == 0 { Sign::Minus } else { Sign::Plus };
        let spec = common::random_spec(&mut rng, e1);
        for branch in Branch::sheets(e1) {
            let (lo, hi) = theta_range(branch);
            let th = rng.gen_range(lo..hi);
            let p = ChartPoint::new(th, 0.0);
            let ff = fundamental_forms(&spec, branch, p).unwrap();
            assert_eq!((ff.e, ff.f), (0.0, 0.0));
            assert!((ff.g - 1.0).abs() <= 1e-14);
            let ex = expansion_coefficients(&spec, branch, th).unwrap();
            let (nt, _) = normal_vector(&spec, branch, p).unwrap();
            let norm2: f64 = nt.iter().map(|v| v * v).sum();
            assert!((norm2 - ex.e0).abs() <= 1e-12 * ex.e0.max(1.0), "{norm2} vs {}", ex.e0);
            assert!((ff.n - ex.n0 / ex.nu_norm0).abs() <= 1e-12 * (1.0 + ff.n.abs()));
        }
    }
}

#[test]
fn bounded_curvature_tends_to_normalized_n0() {
    let mut rng = common::rng(23);
    for s in 0..20 {
        let e1 = if s % 2 == 0 { Sign::Minus } else { Sign::Plus };
        let spec = common::random_spec(&mut rng, e1);
        let branch = Branch::sheets(e1)[s % 4 / 2];
        let (lo, hi) = theta_range(branch);
        let th = loop {
            let t = rng.gen_range(lo..hi);
            if branch.lambda(t).abs() >= 0.3 {
                break t;
            }
        };
        let ex = expansion_coefficients(&spec, branch, th).unwrap();
        let limit = ex.n0 / ex.nu_norm0;
        let err = |z: f64| (sample(&spec, branch, ChartPoint::new(th, z)).unwrap().curvatures.unwrap().kappa2 - limit).abs();
        let (e1, e2) = (err(2e-4), err(1e-4));
        // first-order convergence, or already at rounding level
        assert!(e2 <= 0.6 * e1 || e2 <= 1e-9 * (1.0 + limit.abs()), "{branch:?} theta {th}: {e1:.2e} {e2:.2e}");
    }
}

fn central(f: impl Fn(f64) -> f64, th: f64) -> f64 {
    let h = 1e-5;
    (f(th + h) - f(th - h)) / (2.0 * h)
}

/// The three curve functions from finite differences of the coefficient values.
fn curve_functions(spec: &UnfoldingSpec, branch: Branch, th: f64) -> [f64; 3] {
    let at = |t: f64| expansion_coefficients(spec, branch, t).unwrap();
    let ExpansionCoefficients { e0, e1, l0, m0, n0, n1, a0, .. } = at(th);
    let de0 = central(|t| at(t).e0, th);
    let dn0 = central(|t| at(t).n0, th);
    let da0 = central(|t| at(t).a0, th);
    let (lam, dlam) = (branch.lambda(th), central(|t| branch.lambda(t), th));
    [
        a0 * (2.0 * dlam * e0 + 3.0 * lam * de0) + 2.0 * lam * e0 * da0,
        -e1 * l0 * n0 + de0 * m0 * n0 + 2.0 * e0 * (l0 * n1 - m0 * dn0),
        2.0 * e0 * dn0 - de0 * n0,
    ]
}

#[test]
fn curve_directions_match_difference_oracle() {
    let kinds = [DirectionKind::RidgeUnbounded, DirectionKind::RidgeBounded, DirectionKind::SubparabolicBounded];
    let mut rng = common::rng(24);
    for s in 0..6 {
        let spec = &common::random_spec(&mut rng, if s % 2 == 0 { Sign::Plus } else { Sign::Minus });
        for branch in Branch::sheets(spec.epsilon1()) {
            let (lo, hi) = theta_range(branch);
            let n = 2000;
            let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
            let values: Vec<[f64; 3]> = grid.iter().map(|t| curve_functions(spec, branch, *t)).collect();
            for (i, kind) in kinds.iter().enumerate() {
                let brackets: Vec<(f64, f64)> = (0..n)
                    .filter(|k| (values[*k][i] > 0.0) != (values[k + 1][i] > 0.0))
                    .map(|k| (grid[k], grid[k + 1]))
                    .collect();
                let found: Vec<f64> = ridge_subparabolic_directions(spec, branch, *kind)
                    .unwrap()
                    .directions
                    .iter()
                    .map(|d| d.theta)
                    .filter(|t| *t > lo && *t < hi)
                    .collect();
                assert_eq!(found.len(), brackets.len(), "{branch:?} {kind:?}: {found:?} vs {brackets:?}");
                for (t, (a, b)) in found.iter().zip(&brackets) {
                    assert!(*t >= a - 1e-6 && *t <= b + 1e-6, "{branch:?} {kind:?}: {t} not in [{a}, {b}]");
                }
            }
        }
    }
}

#[test]
fn elliptic_sheets_have_period_pi() {
    let mut rng = common::rng(25);
    let spec = common::random_spec(&mut rng, Sign::Minus);
    for branch in Branch::sheets(Sign::Minus) {
        for _ in 0..50 {
            let (th, z) = (rng.gen_range(0.0..PI), rng.gen_range(-0.1..0.1));
            let a = parametrize(&spec, branch, ChartPoint::new(th, z)).unwrap();
            let b = parametrize(&spec, branch, ChartPoint::new(th + PI, z)).unwrap();
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() <= 1e-12, "{branch:?} theta {th} z {z}: {a:?} vs {b:?}");
            }
        }
    }
}

#[test]
fn canonical_divergent_curvature_recovers_l0() {
    for e1 in common::both_signs() {
        let spec = UnfoldingSpec::canonical(e1);
        for branch in Branch::sheets(e1) {
            for th in [0.2, 0.45, 0.7] {
                let ex = expansion_coefficients(&spec, branch, th).unwrap();
                let z = 1e-3;
                let smp = sample(&spec, branch, ChartPoint::new(th, z)).unwrap();
                let f = smp.forms;
                let s = z * z * smp.lambda_value * smp.a;
                let i_tilde = (f.e * f.g - f.f * f.f) / (s * s);
                let nn = smp.nu_tilde.iter().map(|v| v * v).sum::<f64>().sqrt();
                let scaled = smp.curvatures.unwrap().kappa1 * s * i_tilde * nn;
                assert!((scaled - ex.l0).abs() <= 0.01 * ex.l0.abs(), "{branch:?} theta {th}: {scaled} vs {}", ex.l0);
            }
        }
    }
}
