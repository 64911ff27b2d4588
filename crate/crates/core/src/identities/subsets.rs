//! Sums over sign partitions of a point set and the Cauchy determinant.

use alloc::vec::Vec;
use num_traits::One;

use crate::combinatorics::{enumerate_partitions3, Sign, SignPartition, SizeLimit};
use crate::elliptic::BracketContext;
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::num::{residual, Cx, Real, Residual, Side};
use crate::operators::{
    check_balance, coeff_a0, coeff_a_minus, coeff_a_plus, coeff_b_minus, coeff_b_plus, ParamsBC, ParamsC,
};

/// Summand of the eight-parameter subset sum for one sign partition.
pub fn subset_term_bc<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    z: &[Cx<T>],
    w: &[Cx<T>],
    part: &SignPartition,
) -> Result<Cx<T>> {
    let mut t = Cx::<T>::one();
    for (i, s) in part.signs.iter().enumerate() {
        t = t * match s {
            Some(Sign::Plus) => coeff_a_plus(ctx, a, z[i])?,
            Some(Sign::Minus) => coeff_a_minus(ctx, a, z[i])?,
            Some(Sign::Zero) => coeff_a0(ctx, a, c, z[i])?,
            None => continue,
        };
    }
    Ok(t * cross_factor(ctx, z, w, part, ctx.delta())?)
}

// shifted pair and kernel factors shared by both subset sums
fn cross_factor<T: Real>(
    ctx: &BracketContext<T>,
    z: &[Cx<T>],
    w: &[Cx<T>],
    part: &SignPartition,
    step: Cx<T>,
) -> Result<Cx<T>> {
    let n = z.len();
    let shifted = |i: usize| z[i] + step * T::from_i64(part.shift(i));
    let mut t = Cx::<T>::one();
    for i in 0..n {
        let ei = part.shift(i);
        for j in i + 1..n {
            if ei == 0 && part.shift(j) == 0 {
                continue;
            }
            t = t * ctx.bracket_pm(shifted(i), shifted(j))? / ctx.den_pm(z[i], z[j])?;
        }
        if ei != 0 {
            for &wk in w {
                t = t * ctx.bracket_pm(z[i], wk)? / ctx.den_pm(shifted(i), wk)?;
            }
        }
    }
    Ok(t)
}

/// Level-`r` subset sum with `A^+-`, `A^0` coefficients and shifts `+-delta`.
pub fn side_bc<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    z: &[Cx<T>],
    w: &[Cx<T>],
    r: usize,
    limit: SizeLimit,
) -> Result<Side<T>> {
    let mut s = Side::new();
    for part in enumerate_partitions3(z.len(), Some(r), limit)? {
        s.add(subset_term_bc(ctx, a, c, z, w, &part)?);
    }
    Ok(s)
}

/// Summand of the four-parameter subset sum (signs `+-` only, shifts `+-delta/2`).
pub fn subset_term_c<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    z: &[Cx<T>],
    w: &[Cx<T>],
    part: &SignPartition,
) -> Result<Cx<T>> {
    let mut t = Cx::<T>::one();
    for (i, s) in part.signs.iter().enumerate() {
        t = t * match s {
            Some(Sign::Plus) => coeff_b_plus(ctx, a, z[i])?,
            Some(Sign::Minus) => coeff_b_minus(ctx, a, z[i])?,
            Some(Sign::Zero) => return Err(Error::BadSize("zero sign in a type C partition".into())),
            None => continue,
        };
    }
    Ok(t * cross_factor(ctx, z, w, part, ctx.delta() * T::from_f64(0.5))?)
}

pub fn side_c<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    z: &[Cx<T>],
    w: &[Cx<T>],
    r: usize,
    limit: SizeLimit,
) -> Result<Side<T>> {
    let mut s = Side::new();
    for part in enumerate_partitions3(z.len(), Some(r), limit)? {
        if part.signs.contains(&Some(Sign::Zero)) {
            continue;
        }
        s.add(subset_term_c(ctx, a, z, w, &part)?);
    }
    Ok(s)
}

fn levels(n: usize, r: Option<usize>) -> Result<core::ops::RangeInclusive<usize>> {
    match r {
        Some(r) if r > n => Err(Error::BadSize(alloc::format!("level {r} exceeds {n} points"))),
        Some(r) => Ok(r..=r),
        None => Ok(0..=n),
    }
}

/// Duality of the eight-parameter subset sums at level `r` (every level
/// when `r` is `None`), balance `4 delta`.
pub fn bc_subset_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsBC<T>,
    z: &[Cx<T>],
    w: &[Cx<T>],
    r: Option<usize>,
    limit: SizeLimit,
) -> Result<Residual> {
    check_balance(&params.a, ctx.kd(4))?;
    if z.len() != w.len() {
        return Err(Error::BadSize(alloc::format!("{} vs {} points", z.len(), w.len())));
    }
    let dual = params.dual(ctx.delta());
    let mut worst = Residual::ZERO;
    for r in levels(z.len(), r)? {
        let lhs = side_bc(ctx, &params.a, &params.c, z, w, r, limit)?;
        let rhs = side_bc(ctx, &dual.a, &dual.c, w, z, r, limit)?;
        worst = worst.max(residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// Duality of the four-parameter subset sums with sign `(-1)^r`, balance `delta`.
pub fn c_subset_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    z: &[Cx<T>],
    w: &[Cx<T>],
    r: Option<usize>,
    limit: SizeLimit,
) -> Result<Residual> {
    check_balance(&params.a, ctx.delta())?;
    if z.len() != w.len() {
        return Err(Error::BadSize(alloc::format!("{} vs {} points", z.len(), w.len())));
    }
    let dual = params.dual(ctx.delta());
    let mut worst = Residual::ZERO;
    for r in levels(z.len(), r)? {
        let lhs = side_c(ctx, &params.a, z, w, r, limit)?;
        let mut rhs = side_c(ctx, &dual.a, w, z, r, limit)?;
        if r % 2 == 1 {
            rhs = rhs.scale(-Cx::<T>::one());
        }
        worst = worst.max(residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// The four-parameter subset sum equals the eight-parameter one with step
/// `delta/2` and the extra parameters `-(w_r - delta/2)/2`, up to the
/// constant `K^r`, `K = [-w_1/2][-w_2/2][-w_3/2]/2`.
///
/// `half` must be the context with step `delta/2`.
#[allow(clippy::too_many_arguments)]
pub fn c_subset_spec_residual<T: Real>(
    ctx: &BracketContext<T>,
    half: &BracketContext<T>,
    params: &ParamsC<T>,
    c: &[Cx<T>; 4],
    z: &[Cx<T>],
    w: &[Cx<T>],
    r: Option<usize>,
    limit: SizeLimit,
) -> Result<Residual> {
    check_balance(&params.a, ctx.delta())?;
    let h = T::from_f64(0.5);
    let mut a8 = [Cx::<T>::one(); 8];
    a8[..4].copy_from_slice(&params.a);
    let mut k = Cx::<T>::one() * h;
    for s in 0..4 {
        let ws = half.half_period(s).ok_or(Error::WrongCase("elliptic"))?;
        a8[4 + s] = -(ws - half.delta()) * h;
        if s > 0 {
            k = k * half.bracket(-ws * h)?;
        }
    }
    let mut worst = Residual::ZERO;
    for r in levels(z.len(), r)? {
        let lhs = side_bc(half, &a8, c, z, w, r, limit)?;
        let mut rhs = side_c(ctx, &params.a, z, w, r, limit)?;
        for _ in 0..r {
            rhs = rhs.scale(k);
        }
        worst = worst.max(residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// `det(1/[z_i +- w_j])` against its product formula.
pub fn cauchy_det_residual<T: Real>(ctx: &BracketContext<T>, z: &[Cx<T>], w: &[Cx<T>]) -> Result<Residual> {
    let n = z.len();
    if w.len() != n {
        return Err(Error::BadSize(alloc::format!("{} vs {} points", n, w.len())));
    }
    let mut m = Vec::with_capacity(n);
    let mut den = Cx::<T>::one();
    for &zi in z {
        let mut row = Vec::with_capacity(n);
        for &wj in w {
            let b = ctx.den_pm(zi, wj)?;
            den = den * b;
            row.push(Cx::<T>::one() / b);
        }
        m.push(row);
    }
    let mut num = Cx::<T>::one();
    for i in 0..n {
        for j in i + 1..n {
            num = num * ctx.bracket_pm(z[i], z[j])? * ctx.bracket_pm(w[i], w[j])?;
        }
    }
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        num = -num;
    }
    Ok(residual(&Side::single(determinant(m)), &Side::single(num / den)))
}
