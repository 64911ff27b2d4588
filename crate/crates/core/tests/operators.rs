mod common;

use common::*;
use ehs_core::operators::*;
use ehs_core::{BracketCase, Error, C64};

fn params_bc(seed: u64, target_units: f64) -> ParamsBC<f64> {
    let mut g = rng(seed);
    let a = balanced(&mut g, 8, DELTA * target_units);
    ParamsBC { a: arr8(&a), c: arr4(&points(&mut g, 4, 0.4)) }
}

#[test]
fn a_plus_matches_naive_product() {
    let ctx = ctx(BracketCase::Elliptic);
    let p = params_bc(1, 4.0);
    let x = c(0.11, -0.23);
    let mut naive = c(1.0, 0.0);
    for ap in p.a {
        naive *= ctx.bracket(x + ap).unwrap();
    }
    naive /= ctx.bracket(x * 2.0).unwrap() * ctx.bracket(x * 2.0 + DELTA).unwrap();
    assert!(rel(coeff_a_plus(&ctx, &p.a, x).unwrap(), naive) < 1e-12);
    assert!(rel(coeff_a_minus(&ctx, &p.a, x).unwrap(), coeff_a_plus(&ctx, &p.a, -x).unwrap()) < 1e-12);
    assert_eq!(coeff_a_plus(&ctx, &p.a, -p.a[0]).unwrap(), c(0.0, 0.0));
}

#[test]
fn a0_vanishes_when_x_hits_every_auxiliary_parameter() {
    let ctx = ctx(BracketCase::Elliptic);
    let p = params_bc(2, 4.0);
    let x = c(0.17, 0.09);
    assert_eq!(coeff_a0(&ctx, &p.a, &[x; 4], x).unwrap(), c(0.0, 0.0));
}

#[test]
fn auxiliary_parameters_are_superfluous() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(3);
    for _ in 0..10 {
        let a = points(&mut g, 8, 0.4);
        let p = points(&mut g, 3, 0.4);
        assert!(superfluous_c_residual(&ctx, &a, p[0], p[1], p[2]).unwrap().value < 1e-11);
    }
}

#[test]
fn a0_vanishes_at_the_type_c_specialization() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(4);
    let mut a = points(&mut g, 8, 0.4);
    for r in 0..4 {
        a[4 + r] = -(ctx.half_period(r).unwrap() - DELTA) * 0.5;
    }
    let cc = arr4(&points(&mut g, 4, 0.4));
    for _ in 0..5 {
        let x = point(&mut g, 0.4);
        assert!(coeff_a0(&ctx, &a, &cc, x).unwrap().norm() < 1e-11);
    }
}

#[test]
fn l_on_constants() {
    let ctx = ctx(BracketCase::Elliptic);
    let p = params_bc(5, 2.0);
    let x = c(0.07, 0.21);
    assert!(constant_residual_bc1(&ctx, &p, x).unwrap().value < 1e-9);
    assert_eq!(apply_l(&ctx, &p, x, |_| Ok(c(0.0, 0.0))).unwrap(), c(0.0, 0.0));
}

#[test]
fn l_kernel_identity() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(6);
    for seed in 0..20 {
        let p = params_bc(100 + seed, 4.0);
        let r = kernel_residual_bc1(&ctx, &p, point(&mut g, 0.4), point(&mut g, 0.4)).unwrap();
        assert!(r.value < 1e-9);
    }
}

#[test]
fn unbalanced_parameters_are_rejected() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut p = params_bc(7, 4.0);
    p.a[3] += c(1e-6, 0.0);
    assert!(matches!(kernel_residual_bc1(&ctx, &p, c(0.1, 0.2), c(-0.2, 0.1)), Err(Error::UnbalancedParams { .. })));
}

#[test]
fn r_operator_identities_in_all_cases() {
    let mut g = rng(8);
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        for _ in 0..10 {
            let p0 = ParamsC { a: arr4(&balanced(&mut g, 4, c(0.0, 0.0))) };
            assert!(constant_residual_c1(&ctx, &p0, point(&mut g, 0.4)).unwrap().value < 1e-9);
            let p1 = ParamsC { a: arr4(&balanced(&mut g, 4, DELTA)) };
            assert!(kernel_residual_c1(&ctx, &p1, point(&mut g, 0.4), point(&mut g, 0.4)).unwrap().value < 1e-9);
        }
        let a = points(&mut g, 4, 0.4);
        let x = c(0.13, -0.04);
        // four parameters: the sign flips of the numerator cancel, the one of [2x] is absorbed by B^-
        assert!(rel(coeff_b_minus(&ctx, &a, x).unwrap(), coeff_b_plus(&ctx, &a, -x).unwrap()) < 1e-12);
    }
}

#[test]
fn c_sigma_forms_agree() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(9);
    let a = points(&mut g, 8, 0.4);
    let cc = arr4(&points(&mut g, 4, 0.4));
    let z = c(0.09, 0.14);
    for f in [c_sigma_sum::<f64>, c_sigma_det::<f64>, c_sigma_rec::<f64>] {
        assert_eq!(f(&ctx, &a, &cc, z, 0).unwrap(), c(1.0, 0.0));
        assert!(rel(f(&ctx, &a, &cc, z, 1).unwrap(), coeff_a0(&ctx, &a, &cc, z).unwrap()) < 1e-14);
    }
    for sigma in 2..=8 {
        let s = c_sigma_sum(&ctx, &a, &cc, z, sigma).unwrap();
        assert!(rel(s, c_sigma_det(&ctx, &a, &cc, z, sigma).unwrap()) < 1e-11, "sigma = {sigma}");
        assert!(rel(s, c_sigma_rec(&ctx, &a, &cc, z, sigma).unwrap()) < 1e-11, "sigma = {sigma}");
    }
}

#[test]
fn partial_fractions() {
    let mut g = rng(10);
    for case in BracketCase::ALL {
        let ctx = ctx(case);
        let (z, x, y) = (point(&mut g, 0.4), point(&mut g, 0.4), point(&mut g, 0.4));
        assert!(partial_fraction_residual(&ctx, z, &[x], &[y]).unwrap().value < 1e-11);
        let xs = points(&mut g, 3, 0.4);
        assert_eq!(partial_fraction_residual(&ctx, z, &xs, &xs).unwrap().value, 0.0);
        for n in 1..=4 {
            let (xs, ys) = (points(&mut g, n, 0.4), points(&mut g, n, 0.4));
            assert!(partial_fraction_residual(&ctx, z, &xs, &ys).unwrap().value < 1e-10);
        }
    }
}

#[test]
fn five_group_lemma() {
    let ctx = ctx(BracketCase::Elliptic);
    let mut g = rng(11);
    // half-period points with four delta balance
    let d: Vec<C64> = (0..4).map(|r| (DELTA - ctx.half_period(r).unwrap()) * 0.5).collect();
    let dsum: C64 = d.iter().sum();
    let a = balanced(&mut g, 8, DELTA * 2.0 + dsum);
    let r = lemma_general_residual(&ctx, &a, &d, point(&mut g, 0.4), point(&mut g, 0.4)).unwrap();
    assert!(r.value < 1e-9);
    for m in 2..=4 {
        let d = points(&mut g, m, 0.4);
        let dsum: C64 = d.iter().sum();
        let a = balanced(&mut g, m + 4, DELTA * 2.0 + dsum);
        assert!(lemma_general_residual(&ctx, &a, &d, point(&mut g, 0.4), point(&mut g, 0.4)).unwrap().value < 1e-9);
    }
}
