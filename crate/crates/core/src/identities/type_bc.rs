//! Eight-parameter multi-index identities: the duality with `C_sigma`
//! corrections, its subset forms with different numbers of points, and the
//! consistency of the summand `F` with the subset sum.

use alloc::vec::Vec;
use num_traits::One;

use crate::combinatorics::{enumerate_nested_box, principal_specialize, MultiIndex, Sign, SignPartition, SizeLimit};
use crate::elliptic::BracketContext;
use crate::error::{Error, Result};
use crate::num::{cabs, residual, Cx, Real, Residual, Side};
use crate::operators::{c_sigma_rec, check_balance, coeff_a0, ParamsBC};
use crate::series::f_mu_nu;

use super::subsets::{side_bc, subset_term_bc};

/// The nested-box sum over `nu <= mu <= alpha` of `F^alpha_{mu nu}` times
/// the `C_{mu_i - nu_i}(x_i + nu_i delta)` corrections.
#[allow(clippy::too_many_arguments)]
pub fn dual_side_bc<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>],
    c: &[Cx<T>; 4],
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Side<T>> {
    if x.len() != alpha.len() || y.len() != beta.len() {
        return Err(Error::BadSize("points do not match the multi-indices".into()));
    }
    let mut s = Side::new();
    for (nu, mu) in enumerate_nested_box(alpha, limit)? {
        let mut t = f_mu_nu(ctx, a, alpha, beta, x, y, &mu, &nu)?;
        for i in 0..alpha.len() {
            t = t * c_sigma_rec(ctx, a, c, x[i] + ctx.kd(nu.0[i] as i64), mu.0[i] - nu.0[i])?;
        }
        s.add(t);
    }
    Ok(s)
}

/// Duality for `|alpha| = |beta|`, balance `4 delta`.
pub fn bc_dual_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsBC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    if alpha.weight() != beta.weight() {
        return Err(Error::BadSize(alloc::format!("|alpha| = {} but |beta| = {}", alpha.weight(), beta.weight())));
    }
    check_balance(&params.a, ctx.kd(4))?;
    let dual = params.dual(ctx.delta());
    let lhs = dual_side_bc(ctx, &params.a, &params.c, alpha, beta, x, y, limit)?;
    let rhs = dual_side_bc(ctx, &dual.a, &dual.c, beta, alpha, y, x, limit)?;
    Ok(residual(&lhs, &rhs))
}

/// The nested-box sum against the subset sum at `z = (x)_alpha`, `w = (y)_beta`, level `|alpha|`.
pub fn bc_dual_coherence_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsBC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let z = principal_specialize(ctx, x, alpha)?;
    let w = principal_specialize(ctx, y, beta)?;
    let lhs = dual_side_bc(ctx, &params.a, &params.c, alpha, beta, x, y, limit)?;
    let rhs = side_bc(ctx, &params.a, &params.c, &z, &w, z.len(), limit)?;
    Ok(residual(&lhs, &rhs))
}

/// `F^alpha_{mu nu}` times the `A^0` factors against the subset summand at
/// the sign sequence `-^nu 0^(mu - nu) +^(alpha - mu)` of each block; worst
/// relative deviation over the nested box.
#[allow(clippy::too_many_arguments)]
pub fn f_coherence_residual<T: Real>(
    ctx: &BracketContext<T>,
    params: &ParamsBC<T>,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let z = principal_specialize(ctx, x, alpha)?;
    let w = principal_specialize(ctx, y, beta)?;
    let (a, c) = (&params.a, &params.c);
    let mut worst = Residual::ZERO;
    for (nu, mu) in enumerate_nested_box(alpha, limit)? {
        let mut signs = Vec::with_capacity(z.len());
        let mut f = f_mu_nu(ctx, a, alpha, beta, x, y, &mu, &nu)?;
        for i in 0..alpha.len() {
            for k in 0..alpha.0[i] {
                signs.push(Some(if k < nu.0[i] {
                    Sign::Minus
                } else if k < mu.0[i] {
                    f = f * coeff_a0(ctx, a, c, x[i] + ctx.kd(k as i64))?;
                    Sign::Zero
                } else {
                    Sign::Plus
                }));
            }
        }
        let term = subset_term_bc(ctx, a, c, &z, &w, &SignPartition { signs })?;
        let scale = cabs(f).max(cabs(term));
        let r = Residual { value: if scale > 0.0 { cabs(f - term) / scale } else { 0.0 }, scale };
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Parameters with `a_7 = a_0 + delta`, and their duals
/// `(delta - a_7, delta - a_1, ..., delta - a_6, delta - a_0)`.
fn constrained_dual<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>; 8]) -> Result<[Cx<T>; 8]> {
    let d = ctx.delta();
    let gap = cabs(a[7] - a[0] - d);
    if gap > 1e-13 * (1.0 + cabs(a[0]) + cabs(d)) {
        return Err(Error::UnbalancedParams { deficit: gap });
    }
    let mut b = a.map(|ap| d - ap);
    b.swap(0, 7);
    Ok(b)
}

fn prod_a0_ap6<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>], k: usize) -> Result<Cx<T>> {
    let mut t = Cx::<T>::one();
    for p in 1..7 {
        t = t * ctx.shifted_factorial(a[0] + a[p], k)?;
    }
    Ok(t)
}

fn check_mn<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>; 8], m: usize, n: usize) -> Result<[Cx<T>; 8]> {
    if m < n {
        return Err(Error::BadSize(alloc::format!("need M >= N, got M = {m}, N = {n}")));
    }
    check_balance(a, ctx.kd(4 - 2 * m as i64 + 2 * n as i64))?;
    constrained_dual(ctx, a)
}

/// Subset transformation between `M` and `N <= M` points,
/// balance `(4 - 2M + 2N) delta`, `a_7 = a_0 + delta`.
pub fn bc_set_mn_residual<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>; 8],
    z: &[Cx<T>],
    w: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let (m, n) = (z.len(), w.len());
    let b = check_mn(ctx, a, m, n)?;
    let lhs = side_bc(ctx, a, &[a[0]; 4], z, w, m, limit)?;
    let rhs = side_bc(ctx, &b, &[b[0]; 4], w, z, n, limit)?.scale(prod_a0_ap6(ctx, a, m - n)?);
    Ok(residual(&lhs, &rhs))
}

/// Subset summation (`N = 0`), balance `(4 - 2M) delta`.
pub fn bc_sum_set_residual<T: Real>(ctx: &BracketContext<T>, a: &[Cx<T>; 8], z: &[Cx<T>], limit: SizeLimit) -> Result<Residual> {
    let m = z.len();
    check_mn(ctx, a, m, 0)?;
    let lhs = side_bc(ctx, a, &[a[0]; 4], z, &[], m, limit)?;
    Ok(residual(&lhs, &Side::single(prod_a0_ap6(ctx, a, m)?)))
}

/// Multi-index transformation with `M = |alpha| >= N = |beta|`.
#[allow(clippy::too_many_arguments)]
pub fn bc_dual_mn_residual<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>; 8],
    alpha: &MultiIndex,
    beta: &MultiIndex,
    x: &[Cx<T>],
    y: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let (m, n) = (alpha.weight(), beta.weight());
    let b = check_mn(ctx, a, m, n)?;
    let lhs = dual_side_bc(ctx, a, &[a[0]; 4], alpha, beta, x, y, limit)?;
    let rhs = dual_side_bc(ctx, &b, &[b[0]; 4], beta, alpha, y, x, limit)?.scale(prod_a0_ap6(ctx, a, m - n)?);
    Ok(residual(&lhs, &rhs))
}

/// Multi-index summation (`beta = 0`).
pub fn bc_sum_multi_residual<T: Real>(
    ctx: &BracketContext<T>,
    a: &[Cx<T>; 8],
    alpha: &MultiIndex,
    x: &[Cx<T>],
    limit: SizeLimit,
) -> Result<Residual> {
    let m = alpha.weight();
    check_mn(ctx, a, m, 0)?;
    let empty = MultiIndex::default();
    let lhs = dual_side_bc(ctx, a, &[a[0]; 4], alpha, &empty, x, &[], limit)?;
    Ok(residual(&lhs, &Side::single(prod_a0_ap6(ctx, a, m)?)))
}
