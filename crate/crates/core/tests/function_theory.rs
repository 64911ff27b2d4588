mod common;

use common::*;
use ehs_core::elliptic::{
    duplication_residual, halfperiod_product_residual, quasi_periodicity_residual, riemann_residual, sigma_oracle,
};
use ehs_core::{make_context, BracketCase, ContextSpec, Error, C64};

#[test]
fn lattice_signs_for_unit_first_period() {
    let ctx = make_context::<f64>(&ContextSpec::elliptic(c(0.0, 1.3), c(0.0, 0.0), c(0.31, 0.07))).unwrap();
    assert_eq!([ctx.eps(0), ctx.eps(1), ctx.eps(2), ctx.eps(3)], [1, -1, -1, -1]);
}

#[test]
fn real_dependent_periods_fail() {
    let spec = ContextSpec::new(BracketCase::Elliptic, c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), DELTA);
    assert!(matches!(make_context::<f64>(&spec), Err(Error::DegenerateLattice)));
}

/// `eta_r` against a finite-difference solve of the quasi-periodicity law.
#[test]
fn eta_matches_numerical_solve() {
    let mut spec = ContextSpec::elliptic(c(0.0, 1.0), c(0.1, 0.0), c(0.3, 0.0));
    // 10 * 0.3 is a period, so only the first few multiples can be screened
    spec.k_lattice = 8;
    let ctx = make_context::<f64>(&spec).unwrap();
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    for r in 1..4 {
        let w = ctx.half_period(r).unwrap();
        let ratio = |u: C64| ctx.bracket(u + w).unwrap() / (ctx.bracket(u).unwrap() * ctx.eps(r) as f64);
        let (u1, u2) = (c(0.21, 0.13), c(0.22, 0.125));
        let eta = (ratio(u1) / ratio(u2)).ln() / (two_pi_i * (u1 - u2));
        assert!(rel(eta, ctx.eta(r)) < 1e-10, "r = {r}: {eta} vs {}", ctx.eta(r));
    }
}

#[test]
fn delta_on_the_lattice_is_rejected_by_default() {
    let spec = ContextSpec::elliptic(c(0.0, 1.0), c(0.1, 0.0), c(0.3, 0.0));
    assert!(matches!(make_context::<f64>(&spec), Err(Error::DeltaInLattice { k: 10 })));
}

#[test]
fn bracket_is_odd() {
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        let u = c(0.23, 0.11);
        assert_eq!(ctx.bracket(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(rel(ctx.bracket(-u).unwrap(), -ctx.bracket(u).unwrap()) < 1e-12);
    }
}

#[test]
fn bracket_matches_weierstrass_product() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(11);
    for _ in 0..6 {
        // inside the fundamental cell spanned by 1 and tau
        let (s, t) = (g_unit(&mut g), g_unit(&mut g));
        let u = TAU * t + s;
        let oracle = sigma_oracle(&ctx, u, 128).unwrap() * ctx.e(QUAD * u * u);
        assert!(rel(ctx.bracket(u).unwrap(), oracle) < 1e-9, "u = {u}");
    }
}

fn g_unit(g: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    g.gen_range(0.05..0.95)
}

#[test]
fn sigma_oracle_normalization() {
    let ctx = ctx(BracketCase::Elliptic);
    assert_eq!(sigma_oracle(&ctx, c(0.0, 0.0), 40).unwrap(), c(0.0, 0.0));
    let u = c(1e-6, 0.0);
    assert!((sigma_oracle(&ctx, u, 40).unwrap() / u - 1.0).norm() < 1e-5);
    let u = c(0.2, 0.1);
    let theta = ctx.bracket(u).unwrap() / ctx.e(QUAD * u * u);
    assert!(rel(sigma_oracle(&ctx, u, 40).unwrap(), theta) < 1e-8);
}

#[test]
fn bracket_pm_symmetries() {
    let mut g = rng(3);
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        let (x, y) = (point(&mut g, 0.4), point(&mut g, 0.4));
        assert_eq!(ctx.bracket_pm(x, x).unwrap(), c(0.0, 0.0));
        assert!(rel(ctx.bracket_pm(x, y).unwrap(), ctx.bracket_pm(x, -y).unwrap()) < 1e-12);
        assert!(rel(ctx.bracket_pm(x, y).unwrap(), -ctx.bracket_pm(y, x).unwrap()) < 1e-12);
    }
}

#[test]
fn shifted_factorial_is_a_product() {
    let ctx = ctx(BracketCase::Elliptic);
    let u = c(0.17, -0.08);
    assert_eq!(ctx.shifted_factorial(u, 0).unwrap(), c(1.0, 0.0));
    assert_eq!(ctx.shifted_factorial(u, 1).unwrap(), ctx.bracket(u).unwrap());
    let direct = ctx.bracket(u).unwrap() * ctx.bracket(u + DELTA).unwrap() * ctx.bracket(u + DELTA * 2.0).unwrap();
    assert!(rel(ctx.shifted_factorial(u, 3).unwrap(), direct) < 1e-12);
}

#[test]
fn riemann_relation() {
    let mut g = rng(5);
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        let p = points(&mut g, 3, 0.4);
        assert!(riemann_residual(&ctx, p[0], p[1], p[2], p[2]).unwrap().value < 1e-12);
        for _ in 0..20 {
            let p = points(&mut g, 4, 0.4);
            let bound = if case == BracketCase::Rational { 1e-12 } else { 1e-10 };
            assert!(riemann_residual(&ctx, p[0], p[1], p[2], p[3]).unwrap().value < bound);
        }
    }
}

#[test]
fn duplication_formula() {
    let mut g = rng(6);
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        assert_eq!(duplication_residual(&ctx, c(0.0, 0.0)).unwrap().value, 0.0);
        for _ in 0..20 {
            assert!(duplication_residual(&ctx, point(&mut g, 0.4)).unwrap().value < 1e-10);
        }
    }
    // shared zero at half the first period
    let ctx = ctx(BracketCase::Elliptic);
    assert!(duplication_residual(&ctx, c(0.5, 0.0)).unwrap().value < 1e-10);
}

#[test]
fn half_period_products() {
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        for r in 0..4 {
            if ctx.half_period(r).is_some() {
                let bound = if r == 0 { 1e-12 } else { 1e-10 };
                assert!(halfperiod_product_residual(&ctx, r).unwrap().value < bound, "{case:?} r = {r}");
            }
        }
    }
}

#[test]
fn quasi_periodicity() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(8);
    for _ in 0..10 {
        let u = point(&mut g, 0.4);
        for r in 1..4 {
            assert!(quasi_periodicity_residual(&ctx, u, r).unwrap().value < 1e-10);
        }
    }
}

#[test]
fn near_lattice_denominator_is_flagged() {
    let ctx = ctx(BracketCase::Elliptic);
    assert!(matches!(ctx.den(c(1.0, 0.0)), Err(Error::NearSingularity { .. })));
    assert!(matches!(ctx.den(TAU + c(1e-12, 0.0)), Err(Error::NearSingularity { .. })));
}
