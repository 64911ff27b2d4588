//! Deterministic rejection sampling of singularity-free, balanced points.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, shape, Balance, EvalOptions, IdentityId, ParamSample, Sizes};
use crate::elliptic::BracketCase;
use crate::error::{Error, Result};
use crate::num::{Residual, C64};

/// Rejections tolerated before giving up.
pub const MAX_REJECTIONS: usize = 10_000;

/// Sampling boxes for the context and the free values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub tau_re: (f64, f64),
    pub tau_im: (f64, f64),
    pub delta_re: (f64, f64),
    pub delta_im: (f64, f64),
    /// Half-width of the square for the quadratic coefficient.
    pub quad_coeff: f64,
    /// Half-width of the square for parameters and points.
    pub points: f64,
    pub max_rejections: usize,
    /// Fixed context values replacing the random draw.
    pub tau: Option<C64>,
    pub delta: Option<C64>,
    pub fixed_quad_coeff: Option<C64>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            tau_re: (-0.5, 0.5),
            tau_im: (0.8, 1.5),
            delta_re: (0.1, 0.3),
            delta_im: (-0.1, 0.1),
            quad_coeff: 0.1,
            points: 0.4,
            max_rejections: MAX_REJECTIONS,
            tau: None,
            delta: None,
            fixed_quad_coeff: None,
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream for one trial, fixed by the run identity and the trial index.
pub fn trial_rng(seed: u64, id: IdentityId, sizes: &Sizes, case: BracketCase, trial: u64) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for b in alloc::format!("{id}|{sizes}|{}", case.name()).bytes() {
        h = splitmix(h ^ b as u64);
    }
    ChaCha8Rng::seed_from_u64(splitmix(h ^ splitmix(trial)))
}

fn uniform<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

fn point<R: Rng>(rng: &mut R, half_width: f64) -> C64 {
    C64::new(uniform(rng, (-half_width, half_width)), uniform(rng, (-half_width, half_width)))
}

fn draw<R: Rng>(rng: &mut R, id: IdentityId, sizes: &Sizes, case: BracketCase, cfg: &SamplerConfig) -> ParamSample {
    let sh = shape(id, sizes);
    let tau = C64::new(uniform(rng, cfg.tau_re), uniform(rng, cfg.tau_im));
    let delta = C64::new(uniform(rng, cfg.delta_re), uniform(rng, cfg.delta_im));
    let quad_coeff = point(rng, cfg.quad_coeff);
    let tau = cfg.tau.unwrap_or(tau);
    let delta = cfg.delta.unwrap_or(delta);
    let quad_coeff = cfg.fixed_quad_coeff.unwrap_or(quad_coeff);
    let mut pts = |n: usize| -> Vec<C64> { (0..n).map(|_| point(rng, cfg.points)).collect() };
    let mut a = pts(sh.n_a);
    let c = pts(sh.n_c);
    let x = pts(sh.n_x);
    let y = pts(sh.n_y);
    let extra = pts(sh.n_extra);
    if sh.shifted_pair {
        a[7] = a[0] + delta;
    }
    if let Some(k) = sh.solved_index() {
        let mut target = match sh.balance {
            Balance::Delta(m) | Balance::DeltaPlusExtra(m) => delta * m as f64,
            Balance::Free => C64::new(0.0, 0.0),
        };
        if let Balance::DeltaPlusExtra(_) = sh.balance {
            target += extra.iter().sum::<C64>();
        }
        let rest: C64 = a.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).sum();
        a[k] = target - rest;
    }
    ParamSample { case, tau, delta, quad_coeff, a, c, x, y, extra }
}

fn rejectable(e: &Error) -> bool {
    matches!(
        e,
        Error::NearSingularity { .. }
            | Error::DeltaInLattice { .. }
            | Error::DegenerateLattice
            | Error::SelfTestFailed(_)
            | Error::Overflow
    )
}

/// Draws a sample whose double-precision evaluation touches no
/// near-singular denominator; returns it with that evaluation.
///
/// `sizes` must be resolved.
pub fn sample_params<R: Rng>(
    rng: &mut R,
    id: IdentityId,
    sizes: &Sizes,
    case: BracketCase,
    cfg: &SamplerConfig,
    opts: &EvalOptions,
) -> Result<(ParamSample, Residual)> {
    if !id.supports(case) {
        return Err(Error::WrongCase("elliptic"));
    }
    // a context error with every context value pinned cannot be resampled away
    let pinned = cfg.delta.is_some() && (cfg.tau.is_some() || case != BracketCase::Elliptic);
    for _ in 0..=cfg.max_rejections {
        let s = draw(rng, id, sizes, case, cfg);
        match evaluate::<f64>(id, sizes, &s, opts) {
            Ok(r) if r.value.is_finite() => return Ok((s, r)),
            Ok(_) => continue,
            Err(e @ (Error::DeltaInLattice { .. } | Error::DegenerateLattice | Error::SelfTestFailed(_))) if pinned => {
                return Err(e)
            }
            Err(e) if rejectable(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplerExhausted(cfg.max_rejections))
}
