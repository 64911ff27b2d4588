//! Four-parameter multi-index identities: dualities between `Phi_alpha`
//! and `Phi_beta`, their subset and one-variable specializations, the zero
//! formula and the Karlsson-Minton type transformations.

use alloc::vec::Vec;
use num_traits::One;

use crate::combinatorics::{principal_specialize, MultiIndex, SizeLimit};
use crate::elliptic::BracketContext;
use crate::error::{Error, Result};
use crate::num::{residual, Cx, Real, Residual, Side};
use crate::operators::{check_balance, ParamsC};
use crate::series::{phi_side, v_side, PhiSpec};

use super::subsets::side_c;

fn half<T: Real>(ctx: &BracketContext<T>) -> Cx<T> {
    ctx.delta() * T::from_f64(0.5)
}

fn neg_if<T: Real>(s: Side<T>, odd: bool) -> Side<T> {
    if odd {
        s.scale(-Cx::<T>::one())
    } else {
        s
    }
}

/// `prod_i prod_p [x_i + delta/2 + a_p]_{alpha_i} / [2x_i + delta]_{alpha_i}`
/// times `prod_{i<j} [x_i + x_j + (alpha_j + 1) delta]_{alpha_i} / [x_i + x_j + delta]_{alpha_i}`.
pub fn pre_x<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], alpha: &[usize], x: &[Cx<T>]) -> Result<Cx<T>> {
    let d = ctx.delta();
    let h = half(ctx);
    let two = T::from_f64(2.0);
    let mut t = Cx::<T>::one();
    for i in 0..alpha.len() {
        for &ap in a {
            t = t * ctx.shifted_factorial(x[i] + h + ap, alpha[i])?;
        }
        t = t / ctx.den_sf(x[i] * two + d, alpha[i])?;
        for j in i + 1..alpha.len() {
            t = t * ctx.shifted_factorial(x[i] + x[j] + ctx.kd(alpha[j] as i64 + 1), alpha[i])?
                / ctx.den_sf(x[i] + x[j] + d, alpha[i])?;
        }
    }
    Ok(t)
}

/// Upper arguments `(delta/2 - a_p)_p` followed by `(delta/2 + y_k + beta_k delta, delta/2 - y_k)_k`.
pub fn upper_args<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], beta: &[usize], y: &[Cx<T>]) -> Vec<Cx<T>> {
    let h = half(ctx);
    let mut u: Vec<Cx<T>> = a.iter().map(|&ap| h - ap).collect();
    for (k, &yk) in y.iter().enumerate() {
        u.push(h + yk + ctx.kd(beta[k] as i64));
        u.push(h - yk);
    }
    u
}

/// `prod_{k,i} [y_k - x_i + delta/2 - alpha_i delta]_{beta_k} / [y_k - x_i + delta/2]_{beta_k}`.
pub fn cross_factor<T: Real>(
    ctx: &BracketContext<T>,
    alpha: &[usize],
    beta: &[usize],
    x: &[Cx<T>],
    y: &[Cx<T>],
) -> Result<Cx<T>> {
    let h = half(ctx);
    let mut t = Cx::<T>::one();
    for (k, &yk) in y.iter().enumerate() {
        for (i, &xi) in x.iter().enumerate() {
            t = t * ctx.shifted_factorial(yk - xi + h - ctx.kd(alpha[i] as i64), beta[k])?
                / ctx.den_sf(yk - xi + h, beta[k])?;
        }
    }
    Ok(t)
}

fn check_points(alpha: &MultiIndex, x: &[Cx<impl Real>]) -> Result<()> {
    if alpha.len() != x.len() {
        return Err(Error::BadSize(alloc::format!("{} points for {} blocks", x.len(), alpha.len())));
    }
    Ok(())
}

fn prod_b_pairs<T: Real>(ctx: &BracketContext<T>, b: &[Cx<T>], n: usize) -> Result<Cx<T>> {
    let mut t = Cx::<T>::one();
    for p in 1..4 {
        for q in p + 1..4 {
            t = t * ctx.shifted_factorial(b[p] + b[q], n)?;
        }
    }
    Ok(t)
}

fn prod_a0_ap<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], m: usize) -> Result<Cx<T>> {
    let mut t = Cx::<T>::one();
    for p in 1..4 {
        t = t * ctx.shifted_factorial(a[0] + a[p], m)?;
    }
    Ok(t)
}

struct DualSides<T: Real> {
    lhs: Side<T>,
    rhs: Side<T>,
}

fn dual_sides<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<DualSides<T>> {
    check_points(alpha, x)?;
    check_points(beta, y)?;
    let a = &params.a;
    let b = params.dual(ctx.delta()).a;
    let lspec = PhiSpec { alpha: alpha.clone(), x: x.to_vec(), u: upper_args(ctx, a, beta.parts(), y) };
    let rspec = PhiSpec { alpha: beta.clone(), x: y.to_vec(), u: upper_args(ctx, &b, alpha.parts(), x) };
    let lhs = phi_side(ctx, &lspec, limit)?.scale(pre_x(ctx, a, alpha.parts(), x)?);
    let rhs = phi_side(ctx, &rspec, limit)?
        .scale(cross_factor(ctx, alpha.parts(), beta.parts(), x, y)? * pre_x(ctx, &b, beta.parts(), y)?);
    Ok(DualSides { lhs, rhs })
}

/// Duality between `Phi_alpha` and `Phi_beta` for `|alpha| = |beta| = M`,
/// balance `delta`, sign `(-1)^M`.
pub fn c_dual_mn_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let m = alpha.weight();
    if beta.weight() != m {
        return Err(Error::BadSize(alloc::format!("|alpha| = {m} but |beta| = {}", beta.weight())));
    }
    check_balance(&params.a, ctx.delta())?;
    let s = dual_sides(ctx, params, alpha, beta, x, y, limit)?;
    Ok(residual(&s.lhs, &neg_if(s.rhs, m % 2 == 1)))
}

/// General duality with `M = |alpha|`, `N = |beta|`, balance `(N - M + 1) delta`.
pub fn c_dual_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let (m, n) = (alpha.weight(), beta.weight());
    check_balance(&params.a, ctx.kd(n as i64 - m as i64 + 1))?;
    let b = params.dual(ctx.delta()).a;
    let s = dual_sides(ctx, params, alpha, beta, x, y, limit)?;
    let lhs = s.lhs.scale(prod_b_pairs(ctx, &b, n)?);
    let rhs = neg_if(s.rhs.scale(prod_a0_ap(ctx, &params.a, m)?), n % 2 == 1);
    Ok(residual(&lhs, &rhs))
}

/// The subset sum at level `M` evaluated at `z = (x)_alpha + delta/2`,
/// `w = (y)_beta + delta/2` against its multi-index form.
pub fn c_dual_coherence_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    check_points(alpha, x)?;
    check_points(beta, y)?;
    let h = half(ctx);
    let z: Vec<Cx<T>> = principal_specialize(ctx, x, alpha)?.into_iter().map(|t| t + h).collect();
    let w: Vec<Cx<T>> = principal_specialize(ctx, y, beta)?.into_iter().map(|t| t + h).collect();
    let lhs = side_c(ctx, &params.a, &z, &w, alpha.weight(), limit)?;
    let d = ctx.delta();
    let mut xy = Cx::<T>::one();
    for (i, &xi) in x.iter().enumerate() {
        for (k, &yk) in y.iter().enumerate() {
            for r in 0..beta.0[k] {
                let v = yk + ctx.kd(r as i64) + h;
                xy = xy * ctx.shifted_factorial_pm(xi + h, v, alpha.0[i])? / ctx.den_sf_pm(xi + d, v, alpha.0[i])?;
            }
        }
    }
    let spec = PhiSpec { alpha: alpha.clone(), x: x.to_vec(), u: upper_args(ctx, &params.a, beta.parts(), y) };
    let rhs = phi_side(ctx, &spec, limit)?.scale(pre_x(ctx, &params.a, alpha.parts(), x)? * xy);
    Ok(residual(&lhs, &rhs))
}

/// Subset duality between `M` and `N` points, balance `(N - M + 1) delta`.
pub fn c_set3_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    z: &[Cx<T>],
    w: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let (m, n) = (z.len(), w.len());
    check_balance(&params.a, ctx.kd(n as i64 - m as i64 + 1))?;
    let b = params.dual(ctx.delta()).a;
    let lhs = side_c(ctx, &params.a, z, w, m, limit)?.scale(prod_b_pairs(ctx, &b, n)?);
    let rhs = side_c(ctx, &b, w, z, n, limit)?.scale(prod_a0_ap(ctx, &params.a, m)?);
    Ok(residual(&lhs, &neg_if(rhs, n % 2 == 1)))
}

/// Multiple summation `Phi_alpha(x | delta/2 - a) = prod [a_0 + a_p]_M / pre`,
/// balance `-(M - 1) delta`.
pub fn ct_sum_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    alpha: &MultiIndex,
    x: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    check_points(alpha, x)?;
    let m = alpha.weight();
    check_balance(&params.a, -ctx.kd(m as i64 - 1))?;
    let spec = PhiSpec { alpha: alpha.clone(), x: x.to_vec(), u: upper_args(ctx, &params.a, &[], &[]) };
    let lhs = phi_side(ctx, &spec, limit)?;
    let rhs = prod_a0_ap(ctx, &params.a, m)? / pre_x(ctx, &params.a, alpha.parts(), x)?;
    Ok(residual(&lhs, &Side::single(rhs)))
}

/// The `n = 1` duality: the right side collapses to a single `V`-series of length `N`.
pub fn c_n1_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    alpha: &MultiIndex,
    n: usize,
    x: &[Cx<T>],
    y: Cx<T>,
    limit: SizeLimit,
) -> Result<Residual> {
    check_points(alpha, x)?;
    let m = alpha.weight();
    check_balance(&params.a, ctx.kd(n as i64 - m as i64 + 1))?;
    let a = &params.a;
    let b = params.dual(ctx.delta()).a;
    let h = half(ctx);
    let two = T::from_f64(2.0);
    let spec = PhiSpec { alpha: alpha.clone(), x: x.to_vec(), u: upper_args(ctx, a, &[n], &[y]) };
    let lhs = phi_side(ctx, &spec, limit)?.scale(prod_b_pairs(ctx, &b, n)? * pre_x(ctx, a, alpha.parts(), x)?);

    let mut vargs: Vec<Cx<T>> = b.iter().map(|&bp| y + h - bp).collect();
    for (i, &xi) in x.iter().enumerate() {
        vargs.push(h + y - xi);
        vargs.push(h + y + xi + ctx.kd(alpha.0[i] as i64));
    }
    vargs.push(-ctx.kd(n as i64));
    let mut f = prod_a0_ap(ctx, a, m)?;
    for (i, &xi) in x.iter().enumerate() {
        f = f * ctx.shifted_factorial(y - xi + h - ctx.kd(alpha.0[i] as i64), n)? / ctx.den_sf(y - xi + h, n)?;
    }
    for &bp in &b {
        f = f * ctx.shifted_factorial(y + h + bp, n)?;
    }
    f = f / ctx.den_sf(y * two + ctx.delta(), n)?;
    let rhs = neg_if(v_side(ctx, y * two, &vargs, n, false)?.scale(f), n % 2 == 1);
    Ok(residual(&lhs, &rhs))
}

/// Transformation between `V`-series of lengths `M` and `N` with twelve
/// parameters, balance `(N - M + 1) delta`.
pub fn v12_11_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsC<T>,
    m: usize,
    n: usize,
    x: Cx<T>,
    y: Cx<T>,
) -> Result<Residual> {
    check_balance(&params.a, ctx.kd(n as i64 - m as i64 + 1))?;
    let a = &params.a;
    let b = params.dual(ctx.delta()).a;
    let h = half(ctx);
    let two = T::from_f64(2.0);
    let d = ctx.delta();
    let mut largs: Vec<Cx<T>> = a.iter().map(|&ap| x + h - ap).collect();
    largs.extend([x + y + h + ctx.kd(n as i64), x - y + h, -ctx.kd(m as i64)]);
    let mut rargs: Vec<Cx<T>> = b.iter().map(|&bp| y + h - bp).collect();
    rargs.extend([y + x + h + ctx.kd(m as i64), y - x + h, -ctx.kd(n as i64)]);

    let mut f = Cx::<T>::one();
    for p in 1..4 {
        f = f * ctx.shifted_factorial(a[0] + a[p], m)? / ctx.den_sf(ctx.kd(1 - m as i64) - a[0] - a[p], n)?;
    }
    for p in 0..4 {
        f = f * ctx.shifted_factorial(y + h + b[p], n)? / ctx.den_sf(x + h + a[p], m)?;
    }
    f = f * ctx.shifted_factorial(x * two + d, m)? / ctx.den_sf(y * two + d, n)?
        * ctx.shifted_factorial(y - x + h - ctx.kd(m as i64), n)?
        / ctx.den_sf(y - x + h, n)?;
    let lhs = v_side(ctx, x * two, &largs, m, false)?;
    let rhs = v_side(ctx, y * two, &rargs, n, false)?.scale(f);
    Ok(residual(&lhs, &rhs))
}

/// `Phi_alpha(x | (delta/2 + y_k + beta_k delta, delta/2 - y_k)_k)` vanishes
/// when `|alpha| = |beta| + 1`; the residual is its size relative to the
/// largest summand.
pub fn zero_formula_residual<T: Real>(
    ctx: &BracketContext<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    check_points(alpha, x)?;
    check_points(beta, y)?;
    if alpha.weight() != beta.weight() + 1 {
        return Err(Error::BadSize(alloc::format!(
            "need |alpha| = |beta| + 1, got {} and {}",
            alpha.weight(),
            beta.weight()
        )));
    }
    let spec = PhiSpec { alpha: alpha.clone(), x: x.to_vec(), u: upper_args(ctx, &[], beta.parts(), y) };
    Ok(residual(&phi_side(ctx, &spec, limit)?, &Side::new()))
}

/// `[A + B]_k [A - B]_k`.
fn sf_pm<T: Real>(ctx: &BracketContext<T>, p: Cx<T>, q: Cx<T>, k: usize) -> Result<Cx<T>> {
    ctx.shifted_factorial_pm(p, q, k)
}

fn den_sf_pm<T: Real>(ctx: &BracketContext<T>, p: Cx<T>, q: Cx<T>, k: usize) -> Result<Cx<T>> {
    ctx.den_sf_pm(p, q, k)
}

/// Points and sizes of the Karlsson-Minton type transformation.
#[derive(Clone, Debug)]
pub struct KmData<T: Real> {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub x: Vec<Cx<T>>,
    pub y: Vec<Cx<T>>,
    pub u: Cx<T>,
    pub v: Cx<T>,
    pub r: usize,
    pub s: usize,
}

fn km_side<T: Real>(ctx: &BracketContext<T>, k: &KmData<T>, u: Cx<T>, v: Cx<T>, r: usize, s: usize, limit: SizeLimit) -> Result<Side<T>> {
    let d = ctx.delta();
    let h = half(ctx);
    let mut pre = sf_pm(ctx, v + d, v, s)? * sf_pm(ctx, u + d, v, r)?;
    for (j, &yj) in k.y.iter().enumerate() {
        pre = pre * sf_pm(ctx, yj + d, v, k.beta.0[j])?;
    }
    for (i, &xi) in k.x.iter().enumerate() {
        pre = pre / den_sf_pm(ctx, xi + h, v, k.alpha.0[i])?;
    }
    let mut uu = alloc::vec![v, -v - ctx.kd(s as i64)];
    for (i, &xi) in k.x.iter().enumerate() {
        uu.push(h + xi + ctx.kd(k.alpha.0[i] as i64));
        uu.push(h - xi);
    }
    let mut blocks = k.beta.0.clone();
    blocks.push(r);
    let mut pts = k.y.clone();
    pts.push(u);
    let spec = PhiSpec { alpha: MultiIndex(blocks), x: pts, u: uu };
    Ok(phi_side(ctx, &spec, limit)?.scale(pre))
}

/// Symmetry of the Karlsson-Minton type series under `(u, r) <-> (v, s)`,
/// with `|alpha| = |beta| + r + s`.
pub fn km_transform_residual<T: Real>(ctx: &BracketContext<T>, k: &KmData<T>, limit: SizeLimit) -> Result<Residual> {
    check_points(&k.alpha, &k.x)?;
    check_points(&k.beta, &k.y)?;
    if k.alpha.weight() != k.beta.weight() + k.r + k.s {
        return Err(Error::BadSize(alloc::format!(
            "need |alpha| = |beta| + r + s, got {} vs {} + {} + {}",
            k.alpha.weight(),
            k.beta.weight(),
            k.r,
            k.s
        )));
    }
    let lhs = km_side(ctx, k, k.u, k.v, k.r, k.s, limit)?;
    let rhs = km_side(ctx, k, k.v, k.u, k.s, k.r, limit)?;
    Ok(residual(&lhs, &rhs))
}

fn km_v_side<T: Real>(ctx: &BracketContext<T>, alpha: &MultiIndex, x: &[Cx<T>], u: Cx<T>, v: Cx<T>, r: usize, s: usize) -> Result<Side<T>> {
    let d = ctx.delta();
    let h = half(ctx);
    let mut pre = sf_pm(ctx, v + d, v, s)? * sf_pm(ctx, u + d, v, r)?;
    for (i, &xi) in x.iter().enumerate() {
        pre = pre / den_sf_pm(ctx, xi + h, v, alpha.0[i])?;
    }
    let mut args = alloc::vec![u + v, u - v - ctx.kd(s as i64)];
    for (i, &xi) in x.iter().enumerate() {
        args.push(u + h + xi + ctx.kd(alpha.0[i] as i64));
        args.push(u + h - xi);
    }
    args.push(-ctx.kd(r as i64));
    Ok(v_side(ctx, u * T::from_f64(2.0), &args, r, false)?.scale(pre))
}

/// The `beta = 0` case: a `V`-series transformation, `|alpha| = r + s`.
pub fn km_2m8_residual<T: Real>(
    ctx: &BracketContext<T>,
    alpha: &MultiIndex,
    x: &[Cx<T>],
    u: Cx<T>,
    v: Cx<T>,
    r: usize,
    s: usize,
) -> Result<Residual> {
    check_points(alpha, x)?;
    if alpha.weight() != r + s {
        return Err(Error::BadSize(alloc::format!("need |alpha| = r + s, got {} vs {r} + {s}", alpha.weight())));
    }
    let lhs = km_v_side(ctx, alpha, x, u, v, r, s)?;
    let rhs = km_v_side(ctx, alpha, x, v, u, s, r)?;
    Ok(residual(&lhs, &rhs))
}

/// The `s = 0` case: a `V`-series summation of length `M = |alpha|`.
pub fn km_sum_residual<T: Real>(ctx: &BracketContext<T>, alpha: &MultiIndex, x: &[Cx<T>], u: Cx<T>, v: Cx<T>) -> Result<Residual> {
    check_points(alpha, x)?;
    let m = alpha.weight();
    let d = ctx.delta();
    let h = half(ctx);
    let mut args = alloc::vec![u + v, u - v];
    for (i, &xi) in x.iter().enumerate() {
        args.push(u + h + xi + ctx.kd(alpha.0[i] as i64));
        args.push(u + h - xi);
    }
    args.push(-ctx.kd(m as i64));
    let lhs = v_side(ctx, u * T::from_f64(2.0), &args, m, false)?;
    let mut rhs = sf_pm(ctx, u + d, u, m)? / den_sf_pm(ctx, u + d, v, m)?;
    for (i, &xi) in x.iter().enumerate() {
        rhs = rhs * sf_pm(ctx, xi + h, v, alpha.0[i])? / den_sf_pm(ctx, xi + h, u, alpha.0[i])?;
    }
    Ok(residual(&lhs, &Side::single(rhs)))
}

/// Both reductions of `Phi`: a trailing zero block drops out, and an upper
/// argument equal to `delta/2` drops out.
pub fn phi_reduction_residual<T: Real>(
    ctx: &BracketContext<T>,
    alpha: &MultiIndex,
    x: &[Cx<T>],
    u: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    if x.len() != alpha.len() + 1 {
        return Err(Error::BadSize(alloc::format!("need {} points, got {}", alpha.len() + 1, x.len())));
    }
    let base = PhiSpec { alpha: alpha.clone(), x: x[..alpha.len()].to_vec(), u: u.to_vec() };
    let plain = phi_side(ctx, &base, limit)?;
    let mut padded_alpha = alpha.0.clone();
    padded_alpha.push(0);
    let padded = PhiSpec { alpha: MultiIndex(padded_alpha), x: x.to_vec(), u: u.to_vec() };
    let mut extra_u = u.to_vec();
    extra_u.push(half(ctx));
    let extended = PhiSpec { alpha: alpha.clone(), x: base.x.clone(), u: extra_u };
    let r1 = residual(&phi_side(ctx, &padded, limit)?, &plain);
    let r2 = residual(&phi_side(ctx, &extended, limit)?, &plain);
    Ok(r1.max(r2))
}

/// One block: `Phi_(N)(x | u) = V(2x; x + u_k, -N delta; N)`.
pub fn phi_bridge_residual<T: Real>(ctx: &BracketContext<T>, n: usize, x: Cx<T>, u: &[Cx<T>], limit: SizeLimit) -> Result<Residual> {
    let spec = PhiSpec { alpha: MultiIndex(alloc::vec![n]), x: alloc::vec![x], u: u.to_vec() };
    let mut args: Vec<Cx<T>> = u.iter().map(|&uk| x + uk).collect();
    args.push(-ctx.kd(n as i64));
    let lhs = phi_side(ctx, &spec, limit)?;
    let rhs = v_side(ctx, x * T::from_f64(2.0), &args, n, false)?;
    Ok(residual(&lhs, &rhs))
}
