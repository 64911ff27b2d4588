//! The multi-index series `Phi_alpha`, the terminating very-well-poised
//! `V`-series and the specialized summand `F^alpha_{mu nu}`.

use alloc::vec::Vec;
use num_traits::One;

use crate::combinatorics::{enumerate_box, MultiIndex, SizeLimit};
use crate::elliptic::BracketContext;
use crate::error::{Error, Result};
use crate::num::{to_c64, Cx, Real, Side};
use crate::operators::{coeff_a_minus, coeff_a_plus};

/// Arguments of `Phi_alpha(x | u)`.
#[derive(Clone, Debug)]
pub struct PhiSpec<T: Real> {
    pub alpha: MultiIndex,
    pub x: Vec<Cx<T>>,
    pub u: Vec<Cx<T>>,
}

fn phi_term<T: Real>(ctx: &BracketContext<T>, spec: &PhiSpec<T>, mu: &[usize]) -> Result<Cx<T>> {
    let (x, alpha) = (&spec.x, spec.alpha.parts());
    let m = x.len();
    let d = ctx.delta();
    let two = T::from_f64(2.0);
    let kd = |k: usize| ctx.kd(k as i64);
    let mut t = Cx::<T>::one();
    for i in 0..m {
        t = t * ctx.bracket((x[i] + kd(mu[i])) * two)? / ctx.den(x[i] * two)?;
        for j in i + 1..m {
            t = t * ctx.bracket_pm(x[i] + kd(mu[i]), x[j] + kd(mu[j]))? / ctx.den_pm(x[i], x[j])?;
        }
        for j in 0..m {
            let num = ctx.shifted_factorial(x[i] + x[j], mu[i])?
                * ctx.shifted_factorial(x[i] - x[j] - kd(alpha[j]), mu[i])?;
            let den = ctx.den_sf(x[i] + x[j] + kd(alpha[j]) + d, mu[i])?
                * ctx.den_sf(x[i] - x[j] + d, mu[i])?;
            t = t * num / den;
        }
        for &uk in &spec.u {
            t = t * ctx.shifted_factorial(x[i] + uk, mu[i])? / ctx.den_sf(x[i] - uk + d, mu[i])?;
        }
    }
    Ok(t)
}

/// `Phi_alpha` as a sum over the box `0 <= mu <= alpha`.
pub fn phi_side<T: Real>(ctx: &BracketContext<T>, spec: &PhiSpec<T>, limit: SizeLimit) -> Result<Side<T>> {
    if spec.x.len() != spec.alpha.len() {
        return Err(Error::BadSize(alloc::format!(
            "{} base points for {} blocks",
            spec.x.len(),
            spec.alpha.len()
        )));
    }
    let mut s = Side::new();
    for mu in enumerate_box(&spec.alpha, limit)? {
        s.add(phi_term(ctx, spec, mu.parts())?);
    }
    Ok(s)
}

pub fn phi_alpha<T: Real>(ctx: &BracketContext<T>, spec: &PhiSpec<T>) -> Result<Cx<T>> {
    Ok(phi_side(ctx, spec, SizeLimit::default())?.value())
}

/// Absolute tolerance on `|a_i + kmax delta|` for the termination witness.
pub const TERMINATION_TOL: f64 = 1e-10;

fn v_term<T: Real>(ctx: &BracketContext<T>, a0: Cx<T>, a: &[Cx<T>], k: usize) -> Result<Cx<T>> {
    let d = ctx.delta();
    let mut t = ctx.bracket(a0 + ctx.kd(2 * k as i64))? / ctx.den(a0)?
        * ctx.shifted_factorial(a0, k)?
        / ctx.den_sf(d, k)?;
    for &ai in a {
        t = t * ctx.shifted_factorial(ai, k)? / ctx.den_sf(d + a0 - ai, k)?;
    }
    Ok(t)
}

/// The `V`-series summed over `0 <= k <= kmax`.
///
/// Some `a_i` must equal `-kmax delta` (within [`TERMINATION_TOL`]) unless
/// `truncate` is set.
pub fn v_side<T: Real>(ctx: &BracketContext<T>, a0: Cx<T>, a: &[Cx<T>], kmax: usize, truncate: bool) -> Result<Side<T>> {
    let stop = ctx.kd(kmax as i64);
    let witnessed = a.iter().any(|&ai| to_c64(ai + stop).norm() < TERMINATION_TOL);
    if !witnessed && !truncate {
        return Err(Error::NonTerminating { kmax });
    }
    let mut s = Side::new();
    for k in 0..=kmax {
        s.add(v_term(ctx, a0, a, k)?);
    }
    Ok(s)
}

pub fn v_series<T: Real>(ctx: &BracketContext<T>, a0: Cx<T>, a: &[Cx<T>], kmax: usize) -> Result<Cx<T>> {
    Ok(v_side(ctx, a0, a, kmax, false)?.value())
}

/// Single `V`-series summand, for termination audits.
pub fn v_summand<T: Real>(ctx: &BracketContext<T>, a0: Cx<T>, a: &[Cx<T>], k: usize) -> Result<Cx<T>> {
    v_term(ctx, a0, a, k)
}

/// `f(u)_k = f(u) f(u + delta) ... f(u + (k-1) delta)`.
pub fn coeff_factorial<T: Real, F>(ctx: &BracketContext<T>, f: F, u: Cx<T>, k: usize) -> Result<Cx<T>>
where
    F: Fn(Cx<T>) -> Result<Cx<T>>,
{
    let mut p = Cx::<T>::one();
    for j in 0..k {
        p = p * f(u + ctx.kd(j as i64))?;
    }
    Ok(p)
}

/// The bracket part of `F^alpha_{mu nu}` (everything except the `A^+-`
/// coefficient factorials and the sign).
pub fn f_bracket_part<T: Real>(
    ctx: &BracketContext<T>,
    alpha: &[usize],
    beta: &[usize],
    x: &[Cx<T>],
    y: &[Cx<T>],
    nu: &[usize],
    mu: &[usize],
) -> Result<Cx<T>> {
    let d = ctx.delta();
    let kd = |k: i64| ctx.kd(k);
    let two = T::from_f64(2.0);
    let (m, n) = (alpha.len(), beta.len());
    let (al, be) = (|i: usize| alpha[i] as i64, |k: usize| beta[k] as i64);
    let (nu_, mu_) = (|i: usize| nu[i] as i64, |i: usize| mu[i] as i64);
    let sf = |u, k| ctx.shifted_factorial(u, k);
    let dsf = |u, k| ctx.den_sf(u, k);
    let mut t = Cx::<T>::one();
    for i in 0..m {
        let xi = x[i];
        t = t * ctx.bracket((xi + kd(nu_(i) - 1)) * two)? / ctx.den((xi - d) * two)?
            * ctx.bracket((xi + kd(mu_(i))) * two)?
            / ctx.den((xi + kd(al(i))) * two)?;
        for j in i + 1..m {
            let xj = x[j];
            t = t * ctx.bracket_pm(xi + kd(nu_(i) - 1), xj + kd(nu_(j) - 1))? / ctx.den_pm(xi - d, xj - d)?
                * ctx.bracket_pm(xi + kd(mu_(i)), xj + kd(mu_(j)))?
                / ctx.den_pm(xi + kd(al(i)), xj + kd(al(j)))?;
        }
        let am = alpha[i] - mu[i];
        for j in 0..m {
            let xj = x[j];
            t = t * ctx.bracket_pm(xi - d, xj + kd(al(j)))? / ctx.den_pm(xi - d, xj + kd(mu_(j)))?
                * ctx.bracket_pm(xi + kd(nu_(i) - 1), xj + kd(mu_(j)))?
                / ctx.den_pm(xi + kd(nu_(i) - 1), xj + kd(al(j)))?;
            t = t * sf(xi + xj - kd(2), nu[i])? / dsf(xi + xj + kd(al(j) - 1), nu[i])?
                * sf(xi - xj - kd(al(j)), nu[i])?
                / dsf(xi - xj + d, nu[i])?;
            t = t * sf(-xi - xj - kd(al(i) + al(j)), am)? / dsf(-xi - xj - kd(al(i) - 1), am)?
                * sf(-xi + xj - kd(al(i)), am)?
                / dsf(-xi + xj + kd(al(j) - al(i) + 1), am)?;
        }
        for k in 0..n {
            let yk = y[k];
            t = t * sf(xi + yk + kd(be(k) - 1), nu[i])? / dsf(xi + yk - d, nu[i])?
                * sf(xi - yk, nu[i])?
                / dsf(xi - yk - kd(be(k)), nu[i])?;
            t = t * sf(-xi - yk - kd(al(i) - 1), am)? / dsf(-xi - yk - kd(al(i) + be(k) - 1), am)?
                * sf(-xi + yk - kd(al(i) - be(k)), am)?
                / dsf(-xi + yk - kd(al(i)), am)?;
        }
    }
    Ok(t)
}

/// `F^alpha_{mu nu}(x; y)` for the eight parameters `a`.
#[allow(clippy::too_many_arguments)]
pub fn f_mu_nu<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    mu: &MultiIndex,
    nu: &MultiIndex,
) -> Result<Cx<T>> {
    if !(nu.le(mu) && mu.le(alpha)) || x.len() != alpha.len() || y.len() != beta.len() {
        return Err(Error::BadSize("need nu <= mu <= alpha and matching points".into()));
    }
    let flips = nu.weight() + alpha.weight() - mu.weight();
    let mut t = if flips.is_multiple_of(2) { Cx::<T>::one() } else { -Cx::<T>::one() };
    for i in 0..alpha.len() {
        t = t * coeff_factorial(ctx, |u| coeff_a_minus(ctx, a, u), x[i], nu.0[i])?
            * coeff_factorial(ctx, |u| coeff_a_plus(ctx, a, u), x[i] + ctx.kd(mu.0[i] as i64), alpha.0[i] - mu.0[i])?;
    }
    Ok(t * f_bracket_part(ctx, alpha.parts(), beta.parts(), x, y, nu.parts(), mu.parts())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{make_context, ContextSpec};
    use crate::num::C64;
    use alloc::vec;

    fn ctx() -> BracketContext<f64> {
        make_context(&ContextSpec::elliptic(C64::new(0.1, 1.1), C64::new(0.03, 0.02), C64::new(0.13, 0.05))).unwrap()
    }

    #[test]
    fn phi_of_zero_index_is_one() {
        let ctx = ctx();
        let spec = PhiSpec { alpha: MultiIndex::new(&[0, 0]), x: vec![C64::new(0.1, 0.2), C64::new(-0.3, 0.1)], u: vec![C64::new(0.2, 0.0)] };
        assert_eq!(phi_alpha(&ctx, &spec).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn v_series_requires_a_witness() {
        let ctx = ctx();
        let a0 = C64::new(0.3, 0.1);
        let a = [C64::new(0.1, 0.2)];
        assert_eq!(v_series(&ctx, a0, &a, 2).unwrap_err(), Error::NonTerminating { kmax: 2 });
        assert_eq!(v_series(&ctx, a0, &a, 0).unwrap_err(), Error::NonTerminating { kmax: 0 });
        let a = [C64::new(0.1, 0.2), -ctx.kd(2)];
        assert!(v_series(&ctx, a0, &a, 2).is_ok());
    }

    #[test]
    fn v_series_terminates_past_the_witness() {
        let ctx = ctx();
        let a0 = C64::new(0.3, 0.1);
        let a = [C64::new(0.1, 0.2), -ctx.kd(2)];
        let s = v_side(&ctx, a0, &a, 2, false).unwrap();
        let next = v_summand(&ctx, a0, &a, 3).unwrap();
        assert!(next.norm() < 1e-12 * s.max_term());
    }

    #[test]
    fn f_of_empty_indices_is_one() {
        let ctx = ctx();
        let e = MultiIndex::new(&[]);
        let f = f_mu_nu(&ctx, &[C64::new(0.1, 0.0); 8], &e, &e, &[], &[], &e, &e).unwrap();
        assert_eq!(f, C64::new(1.0, 0.0));
    }
}
