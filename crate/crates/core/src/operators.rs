//! Coefficients `A^+-`, `A^0_r`, `B^+-`, the difference operators `L`
//! (type BC_1, eight parameters) and `R` (type C_1, four parameters), the
//! banded coefficient `C_sigma`, and the one-variable kernel identities.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::elliptic::{BracketCase, BracketContext};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::num::{cabs, residual, Cx, Real, Residual, Side};

/// Parameters of the eight-parameter operator.
#[derive(Clone, Copy, Debug)]
pub struct ParamsBC<T: Real> {
    pub a: [Cx<T>; 8],
    pub c: [Cx<T>; 4],
}

impl<T: Real> ParamsBC<T> {
    /// `b_p = delta - a_p`, same `c`.
    pub fn dual(&self, delta: Cx<T>) -> Self {
        ParamsBC { a: self.a.map(|a| delta - a), c: self.c }
    }
}

/// Parameters of the four-parameter operator.
#[derive(Clone, Copy, Debug)]
pub struct ParamsC<T: Real> {
    pub a: [Cx<T>; 4],
}

impl<T: Real> ParamsC<T> {
    /// `b_p = delta/2 - a_p`.
    pub fn dual(&self, delta: Cx<T>) -> Self {
        let h = delta * T::from_f64(0.5);
        ParamsC { a: self.a.map(|a| h - a) }
    }
}

pub(crate) fn sum<T: Real>(a: &[Cx<T>]) -> Cx<T> {
    a.iter().fold(Cx::<T>::zero(), |s, &x| s + x)
}

/// Errors with `UnbalancedParams` unless `sum(a) = target` up to roundoff.
pub fn check_balance<T: Real>(a: &[Cx<T>], target: Cx<T>) -> Result<()> {
    let deficit = cabs(sum(a) - target);
    let scale = 1.0 + a.iter().map(|&x| cabs(x)).fold(cabs(target), f64::max);
    if deficit <= 1e-13 * scale {
        Ok(())
    } else {
        Err(Error::UnbalancedParams { deficit })
    }
}

fn require_elliptic<T: Real>(ctx: &BracketContext<T>) -> Result<()> {
    if ctx.case() == BracketCase::Elliptic {
        Ok(())
    } else {
        Err(Error::WrongCase("elliptic"))
    }
}

/// `prod_p [x + a_p] / ([2x][2x + delta])`.
pub fn coeff_a_plus<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], x: Cx<T>) -> Result<Cx<T>> {
    let two = T::from_f64(2.0);
    let mut num = Cx::<T>::one();
    for &ap in a {
        num = num * ctx.bracket(x + ap)?;
    }
    Ok(num / (ctx.den(x * two)? * ctx.den(x * two + ctx.delta())?))
}

/// `prod_p [x - a_p] / ([2x][2x - delta])`.
pub fn coeff_a_minus<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], x: Cx<T>) -> Result<Cx<T>> {
    let two = T::from_f64(2.0);
    let mut num = Cx::<T>::one();
    for &ap in a {
        num = num * ctx.bracket(x - ap)?;
    }
    Ok(num / (ctx.den(x * two)? * ctx.den(x * two - ctx.delta())?))
}

/// The `r`-th half-period term of `A^0(x; a | c)` with auxiliary parameter `cr`.
pub fn coeff_a0_r<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    x: Cx<T>,
    cr: Cx<T>,
    r: usize,
) -> Result<Cx<T>> {
    require_elliptic(ctx)?;
    let wr = ctx.half_period(r).ok_or(Error::BadIndex(r))?;
    let half = T::from_f64(0.5);
    let d = ctx.delta();
    let h = (wr - d) * half;
    let expo = (d - wr * half - sum(a) * half) * ctx.eta(r);
    let pre = ctx.e(expo) * T::from_f64(ctx.eps(r) as f64);
    let mut num = ctx.bracket_pm(x, cr)?;
    for &ap in a {
        num = num * ctx.bracket(h + ap)?;
    }
    let den = ctx.den_pm(h, x)? * ctx.den_pm(h, cr)? * T::from_f64(2.0);
    Ok(pre * num / den)
}

/// The four terms of `A^0`.
pub fn coeff_a0_terms<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    x: Cx<T>,
) -> Result<[Cx<T>; 4]> {
    let mut t = [Cx::<T>::zero(); 4];
    for r in 0..4 {
        t[r] = coeff_a0_r(ctx, a, x, c[r], r)?;
    }
    Ok(t)
}

/// `A^0(x; a | c) = sum_r A^0_r(x; a | c_r)`.
pub fn coeff_a0<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], c: &[Cx<T>; 4], x: Cx<T>) -> Result<Cx<T>> {
    Ok(sum(&coeff_a0_terms(ctx, a, c, x)?))
}

/// `L` applied to `f` at `x`, as its six summands.
pub fn apply_l_side<T: Real, F>(ctx: &BracketContext<T>, params: &ParamsBC<T>, x: Cx<T>, f: F) -> Result<Side<T>>
where
    F: Fn(Cx<T>) -> Result<Cx<T>>,
{
    let d = ctx.delta();
    let mut s = Side::new();
    s.add(coeff_a_plus(ctx, &params.a, x)? * f(x + d)?);
    s.add(coeff_a_minus(ctx, &params.a, x)? * f(x - d)?);
    let fx = f(x)?;
    for t in coeff_a0_terms(ctx, &params.a, &params.c, x)? {
        s.add(t * fx);
    }
    Ok(s)
}

/// `L(x; a | c) f(x) = A^+ f(x + delta) + A^- f(x - delta) + A^0 f(x)`.
pub fn apply_l<T: Real, F>(ctx: &BracketContext<T>, params: &ParamsBC<T>, x: Cx<T>, f: F) -> Result<Cx<T>>
where
    F: Fn(Cx<T>) -> Result<Cx<T>>,
{
    Ok(apply_l_side(ctx, params, x, f)?.value())
}

/// `prod_p [x + a_p] / [2x]`.
pub fn coeff_b_plus<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], x: Cx<T>) -> Result<Cx<T>> {
    let mut num = Cx::<T>::one();
    for &ap in a {
        num = num * ctx.bracket(x + ap)?;
    }
    Ok(num / ctx.den(x * T::from_f64(2.0))?)
}

/// `-prod_p [x - a_p] / [2x]`.
pub fn coeff_b_minus<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], x: Cx<T>) -> Result<Cx<T>> {
    let mut num = Cx::<T>::one();
    for &ap in a {
        num = num * ctx.bracket(x - ap)?;
    }
    Ok(-num / ctx.den(x * T::from_f64(2.0))?)
}

pub fn apply_r_side<T: Real, F>(ctx: &BracketContext<T>, params: &ParamsC<T>, x: Cx<T>, f: F) -> Result<Side<T>>
where
    F: Fn(Cx<T>) -> Result<Cx<T>>,
{
    let h = ctx.delta() * T::from_f64(0.5);
    let mut s = Side::new();
    s.add(coeff_b_plus(ctx, &params.a, x)? * f(x + h)?);
    s.add(coeff_b_minus(ctx, &params.a, x)? * f(x - h)?);
    Ok(s)
}

/// `R(x; a) f(x) = B^+ f(x + delta/2) + B^- f(x - delta/2)`.
pub fn apply_r<T: Real, F>(ctx: &BracketContext<T>, params: &ParamsC<T>, x: Cx<T>, f: F) -> Result<Cx<T>>
where
    F: Fn(Cx<T>) -> Result<Cx<T>>,
{
    Ok(apply_r_side(ctx, params, x, f)?.value())
}

/// Increasing sequences `0 < xi_1 < ... < xi_r < sigma` with gaps at least 2.
pub fn gap_two_sequences(sigma: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, sigma: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for xi in start..sigma {
            cur.push(xi);
            out.push(cur.clone());
            rec(xi + 2, sigma, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![Vec::new()];
    rec(1, sigma, &mut Vec::new(), &mut out);
    out
}

struct BandCoeffs<T: Real> {
    plus: Vec<Cx<T>>,
    minus: Vec<Cx<T>>,
    zero: Vec<Cx<T>>,
}

fn band_coeffs<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    z: Cx<T>,
    sigma: usize,
) -> Result<BandCoeffs<T>> {
    let mut b = BandCoeffs { plus: Vec::new(), minus: Vec::new(), zero: Vec::new() };
    for k in 0..sigma {
        let zk = z + ctx.kd(k as i64);
        b.zero.push(coeff_a0(ctx, a, c, zk)?);
        b.plus.push(coeff_a_plus(ctx, a, zk)?);
        b.minus.push(coeff_a_minus(ctx, a, zk)?);
    }
    Ok(b)
}

/// `C_sigma` as the signed sum over gap-2 sequences.
pub fn c_sigma_sum<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    z: Cx<T>,
    sigma: usize,
) -> Result<Cx<T>> {
    let b = band_coeffs(ctx, a, c, z, sigma)?;
    let mut s = Side::new();
    for xs in gap_two_sequences(sigma) {
        let mut t = if xs.len() % 2 == 0 { Cx::<T>::one() } else { -Cx::<T>::one() };
        let mut used = vec![false; sigma];
        for &xi in &xs {
            t = t * b.plus[xi - 1] * b.minus[xi];
            used[xi - 1] = true;
            used[xi] = true;
        }
        for k in 0..sigma {
            if !used[k] {
                t = t * b.zero[k];
            }
        }
        s.add(t);
    }
    Ok(s.value())
}

/// `C_sigma` as a tridiagonal determinant (`A^0` diagonal, `A^-` above, `A^+` below).
pub fn c_sigma_det<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    z: Cx<T>,
    sigma: usize,
) -> Result<Cx<T>> {
    if sigma == 0 {
        return Ok(Cx::<T>::one());
    }
    let b = band_coeffs(ctx, a, c, z, sigma)?;
    let mut m = vec![vec![Cx::<T>::zero(); sigma]; sigma];
    for i in 0..sigma {
        m[i][i] = b.zero[i];
        if i + 1 < sigma {
            m[i][i + 1] = b.minus[i + 1];
            m[i + 1][i] = b.plus[i];
        }
    }
    Ok(determinant(m))
}

/// `C_sigma` by the three-term recurrence.
pub fn c_sigma_rec<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    z: Cx<T>,
    sigma: usize,
) -> Result<Cx<T>> {
    if sigma == 0 {
        return Ok(Cx::<T>::one());
    }
    let mut prev = Cx::<T>::one();
    let mut cur = coeff_a0(ctx, a, c, z)?;
    for s in 0..sigma.saturating_sub(1) {
        let zs = z + ctx.kd(s as i64);
        let zs1 = z + ctx.kd(s as i64 + 1);
        let next = cur * coeff_a0(ctx, a, c, zs1)?
            - prev * coeff_a_plus(ctx, a, zs)? * coeff_a_minus(ctx, a, zs1)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn cauchy_kernel<T: Real>(ctx: &BracketContext<T>, x: Cx<T>, y: Cx<T>) -> Result<Cx<T>> {
    Ok(Cx::<T>::one() / ctx.den_pm(x, y)?)
}

/// Kernel identity for `L`: `L_x (1/[x +- y]) = L_y^{dual} (1/[x +- y])`, balance `4 delta`.
pub fn kernel_residual_bc1<T: Real>(ctx: &BracketContext<T>, params: &ParamsBC<T>, x: Cx<T>, y: Cx<T>) -> Result<Residual> {
    require_elliptic(ctx)?;
    check_balance(&params.a, ctx.kd(4))?;
    let lhs = apply_l_side(ctx, params, x, |t| cauchy_kernel(ctx, t, y))?;
    let rhs = apply_l_side(ctx, &params.dual(ctx.delta()), y, |t| cauchy_kernel(ctx, x, t))?;
    Ok(residual(&lhs, &rhs))
}

/// `L(x; a | a_0, a_0, a_0, a_0) 1 = prod_{p=1..7}[a_0 + a_p] / [2 a_0 + delta]`, balance `2 delta`.
/// The auxiliary vector of `params` is ignored and set to `a_0`.
pub fn constant_residual_bc1<T: Real>(ctx: &BracketContext<T>, params: &ParamsBC<T>, x: Cx<T>) -> Result<Residual> {
    require_elliptic(ctx)?;
    check_balance(&params.a, ctx.kd(2))?;
    let a0 = params.a[0];
    let p = ParamsBC { a: params.a, c: [a0; 4] };
    let lhs = apply_l_side(ctx, &p, x, |_| Ok(Cx::<T>::one()))?;
    let mut prod = Cx::<T>::one();
    for &ap in &params.a[1..] {
        prod = prod * ctx.bracket(a0 + ap)?;
    }
    let rhs = Side::single(prod / ctx.den(a0 * T::from_f64(2.0) + ctx.delta())?);
    Ok(residual(&lhs, &rhs))
}

/// Kernel identity for `R`, balance `delta`.
pub fn kernel_residual_c1<T: Real>(ctx: &BracketContext<T>, params: &ParamsC<T>, x: Cx<T>, y: Cx<T>) -> Result<Residual> {
    check_balance(&params.a, ctx.delta())?;
    let lhs = apply_r_side(ctx, params, x, |t| cauchy_kernel(ctx, t, y))?;
    let rhs = apply_r_side(ctx, &params.dual(ctx.delta()), y, |t| cauchy_kernel(ctx, t, x))?;
    Ok(residual(&lhs, &rhs))
}

/// `R(x; a) 1 = prod_{p=1..3}[a_0 + a_p]`, balance 0.
pub fn constant_residual_c1<T: Real>(ctx: &BracketContext<T>, params: &ParamsC<T>, x: Cx<T>) -> Result<Residual> {
    check_balance(&params.a, Cx::<T>::zero())?;
    let lhs = apply_r_side(ctx, params, x, |_| Ok(Cx::<T>::one()))?;
    let mut prod = Cx::<T>::one();
    for &ap in &params.a[1..] {
        prod = prod * ctx.bracket(params.a[0] + ap)?;
    }
    Ok(residual(&lhs, &Side::single(prod)))
}

/// `A^0_r(x; a|c) - A^0_r(x; a|c') = A^0_r(c'; a|c)`, worst over r.
pub fn superfluous_c_residual<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: Cx<T>,
    c2: Cx<T>,
    x: Cx<T>,
) -> Result<Residual> {
    let mut worst = Residual::ZERO;
    for r in 0..4 {
        let mut lhs = Side::new();
        lhs.add(coeff_a0_r(ctx, a, x, c, r)?);
        lhs.add(-coeff_a0_r(ctx, a, x, c2, r)?);
        let rhs = Side::single(coeff_a0_r(ctx, a, c2, c, r)?);
        worst = worst.max(residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// Partial fraction decomposition with `c = sum (x_i - y_i)`.
pub fn partial_fraction_residual<T: Real>(
    ctx: &BracketContext<T>,
    z: Cx<T>,
    xs: &[Cx<T>],
    ys: &[Cx<T>],
) -> Result<Residual> {
    if xs.len() != ys.len() {
        return Err(Error::BadSize(alloc::format!("{} x-points vs {} y-points", xs.len(), ys.len())));
    }
    let c = sum(xs) - sum(ys);
    let mut l = ctx.bracket(c)?;
    for (&x, &y) in xs.iter().zip(ys) {
        l = l * ctx.bracket(z - y)? / ctx.den(z - x)?;
    }
    let mut rhs = Side::new();
    for (i, &xi) in xs.iter().enumerate() {
        let mut t = ctx.bracket(z - xi + c)? / ctx.den(z - xi)?;
        for &y in ys {
            t = t * ctx.bracket(xi - y)?;
        }
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                t = t / ctx.den(xi - xj)?;
            }
        }
        rhs.add(t);
    }
    Ok(residual(&Side::single(l), &rhs))
}

/// The general five-group identity for `m + 4` parameters `a` and `m`
/// points `d` with `sum(a) - sum(d) = 2 delta`; the residual is the
/// normalized size of the (vanishing) total.
pub fn lemma_general_residual<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    d: &[Cx<T>],
    x: Cx<T>,
    y: Cx<T>,
) -> Result<Residual> {
    let m = d.len();
    if a.len() != m + 4 {
        return Err(Error::BadSize(alloc::format!("need {} parameters, got {}", m + 4, a.len())));
    }
    let dl = ctx.delta();
    check_balance(a, ctx.kd(2) + sum(d))?;
    let b: Vec<Cx<T>> = a.iter().map(|&ap| dl - ap).collect();
    let e: Vec<Cx<T>> = d.iter().map(|&t| dl - t).collect();
    let two = T::from_f64(2.0);
    let kernel = ctx.bracket_pm(x, y)?;

    // one shifted group: prod [s u + p] / ([2 s u] prod [s u + q]) * kernel / [shifted +- other]
    let group = |u: Cx<T>, ps: &[Cx<T>], qs: &[Cx<T>]| -> Result<Cx<T>> {
        let mut t = Cx::<T>::one();
        for &p in ps {
            t = t * ctx.bracket(u + p)?;
        }
        t = t / ctx.den(u * two)?;
        for &q in qs {
            t = t / ctx.den(u + q)?;
        }
        Ok(t)
    };
    let mut s = Side::new();
    s.add(group(x, a, d)? * kernel / ctx.den_pm(x + dl, y)?);
    s.add(group(-x, a, d)? * kernel / ctx.den_pm(x - dl, y)?);
    s.add(group(y, &b, &e)? * kernel / ctx.den_pm(x, y + dl)?);
    s.add(group(-y, &b, &e)? * kernel / ctx.den_pm(x, y - dl)?);
    for r in 0..m {
        let mut t = Cx::<T>::one();
        for &ap in a {
            t = t * ctx.bracket(ap - d[r])?;
        }
        for rp in 0..m {
            if rp != r {
                t = t / ctx.den(d[rp] - d[r])?;
            }
        }
        t = t * kernel / (ctx.den_pm(-d[r], x)? * ctx.den_pm(-e[r], y)?);
        s.add(t);
    }
    Ok(residual(&s, &Side::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{make_context, ContextSpec};
    use crate::num::C64;

    fn ctx() -> BracketContext<f64> {
        make_context(&ContextSpec::elliptic(C64::new(0.1, 1.1), C64::new(0.03, 0.02), C64::new(0.13, 0.05))).unwrap()
    }

    fn pts(seed: u64, n: usize) -> Vec<C64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                C64::new(0.8 * a, 0.8 * b)
            })
            .collect()
    }

    fn balanced8(ctx: &BracketContext<f64>, k: i64, seed: u64) -> [C64; 8] {
        let v = pts(seed, 8);
        let mut a = [C64::new(0.0, 0.0); 8];
        a[..7].copy_from_slice(&v[..7]);
        a[7] = ctx.kd(k) - sum(&a[..7]);
        a
    }

    #[test]
    fn a_minus_is_a_plus_at_minus_x() {
        let ctx = ctx();
        let a = balanced8(&ctx, 4, 1);
        let x = C64::new(0.21, -0.13);
        let p = coeff_a_plus(&ctx, &a, -x).unwrap();
        let m = coeff_a_minus(&ctx, &a, x).unwrap();
        assert!((p - m).norm() < 1e-12 * p.norm());
    }

    #[test]
    fn b_minus_is_b_plus_at_minus_x() {
        let ctx = ctx();
        let a = [C64::new(0.1, 0.2), C64::new(-0.3, 0.1), C64::new(0.2, -0.2), C64::new(0.05, 0.3)];
        let x = C64::new(0.21, -0.13);
        let p = coeff_b_plus(&ctx, &a, -x).unwrap();
        let m = coeff_b_minus(&ctx, &a, x).unwrap();
        assert!((p - m).norm() < 1e-12 * p.norm());
    }

    #[test]
    fn a_plus_vanishes_at_minus_a0() {
        let ctx = ctx();
        let a = balanced8(&ctx, 4, 2);
        assert_eq!(coeff_a_plus(&ctx, &a, -a[0]).unwrap().norm(), 0.0);
    }

    #[test]
    fn kernel_identity_bc1() {
        let ctx = ctx();
        let a = balanced8(&ctx, 4, 3);
        let c = pts(4, 4);
        let p = ParamsBC { a, c: [c[0], c[1], c[2], c[3]] };
        let r = kernel_residual_bc1(&ctx, &p, C64::new(0.17, 0.3), C64::new(-0.22, 0.05)).unwrap();
        assert!(r.value < 1e-9, "{r:?}");
    }

    #[test]
    fn kernel_identity_rejects_unbalanced() {
        let ctx = ctx();
        let mut a = balanced8(&ctx, 4, 3);
        a[7] += C64::new(1e-3, 0.0);
        let p = ParamsBC { a, c: [a[0]; 4] };
        let err = kernel_residual_bc1(&ctx, &p, C64::new(0.17, 0.3), C64::new(-0.22, 0.05)).unwrap_err();
        assert!(matches!(err, Error::UnbalancedParams { .. }));
    }

    #[test]
    fn bc_operators_need_the_elliptic_case() {
        let trig = make_context::<f64>(&ContextSpec::degenerate(BracketCase::Trigonometric, C64::new(0.0, 0.0), C64::new(0.2, 0.1))).unwrap();
        let a = [C64::new(0.1, 0.0); 8];
        assert_eq!(coeff_a0(&trig, &a, &[a[0]; 4], C64::new(0.3, 0.0)).unwrap_err(), Error::WrongCase("elliptic"));
    }

    #[test]
    fn c_sigma_initial_values() {
        let ctx = ctx();
        let a = balanced8(&ctx, 4, 5);
        let c = [a[1]; 4];
        let z = C64::new(0.11, 0.07);
        assert_eq!(c_sigma_sum(&ctx, &a, &c, z, 0).unwrap(), C64::new(1.0, 0.0));
        let a0 = coeff_a0(&ctx, &a, &c, z).unwrap();
        assert!((c_sigma_rec(&ctx, &a, &c, z, 1).unwrap() - a0).norm() < 1e-15 * a0.norm());
        assert!((c_sigma_det(&ctx, &a, &c, z, 1).unwrap() - a0).norm() < 1e-15 * a0.norm());
    }

    #[test]
    fn gap_two_sequence_counts_are_fibonacci() {
        let counts: Vec<usize> = (0..8).map(|s| gap_two_sequences(s).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 8, 13, 21]);
    }
}
