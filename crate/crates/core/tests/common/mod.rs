#![allow(dead_code)]

use ehs_core::num::Cx;
use ehs_core::{make_context, BracketCase, BracketContext, ContextSpec, Real, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const TAU: C64 = C64::new(0.2, 1.1);
pub const QUAD: C64 = C64::new(0.05, -0.03);
pub const DELTA: C64 = C64::new(0.13, 0.05);

pub fn spec(case: BracketCase) -> ContextSpec {
    match case {
        BracketCase::Elliptic => ContextSpec::elliptic(TAU, QUAD, DELTA),
        other => ContextSpec::degenerate(other, QUAD, DELTA),
    }
}

pub fn ctx(case: BracketCase) -> BracketContext<f64> {
    make_context(&spec(case)).unwrap()
}

pub fn ctx_t<T: Real>(case: BracketCase) -> BracketContext<T> {
    make_context(&spec(case)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut ChaCha8Rng, w: f64) -> C64 {
    c(rng.gen_range(-w..w), rng.gen_range(-w..w))
}

pub fn points(rng: &mut ChaCha8Rng, n: usize, w: f64) -> Vec<C64> {
    (0..n).map(|_| point(rng, w)).collect()
}

/// Balanced vector: the last entry absorbs `target - sum(rest)`.
pub fn balanced(rng: &mut ChaCha8Rng, n: usize, target: C64) -> Vec<C64> {
    let mut a = points(rng, n, 0.4);
    let rest: C64 = a[..n - 1].iter().sum();
    a[n - 1] = target - rest;
    a
}

pub fn rel(a: Cx<f64>, b: Cx<f64>) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

pub fn arr8(v: &[C64]) -> [C64; 8] {
    core::array::from_fn(|i| v[i])
}

pub fn arr4(v: &[C64]) -> [C64; 4] {
    core::array::from_fn(|i| v[i])
}
