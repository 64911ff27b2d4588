//! The bracket function `[u]` in its rational, trigonometric and elliptic
//! forms, quasi-periodicity data, shifted factorials and the basic
//! function-theoretic identities.
//!
//! The elliptic bracket is `e(a u^2) sigma(u)`, evaluated through the odd
//! Jacobi theta function with nome `q = e^{i pi tau}`, `tau = w2/w1`:
//!
//! ```text
//! sigma(u) = e(c u^2) (w1/pi) theta1(pi u / w1) / theta1'(0)
//! ```
//!
//! Arguments are first reduced to the fundamental cell with the
//! quasi-periodicity relation, so the theta series always converges fast.

use alloc::format;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{c64_to, cabs, cexp, cmul_i, csin, residual, to_c64, Cx, Real, Residual, Side, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BracketCase {
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "trig")]
    Trigonometric,
    #[serde(rename = "elliptic")]
    Elliptic,
}

impl BracketCase {
    pub const ALL: [BracketCase; 3] =
        [BracketCase::Rational, BracketCase::Trigonometric, BracketCase::Elliptic];

    pub fn name(self) -> &'static str {
        match self {
            BracketCase::Rational => "rational",
            BracketCase::Trigonometric => "trig",
            BracketCase::Elliptic => "elliptic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(BracketCase::Rational),
            "trig" | "trigonometric" => Some(BracketCase::Trigonometric),
            "elliptic" => Some(BracketCase::Elliptic),
            _ => None,
        }
    }
}

/// Construction parameters of a [`BracketContext`].
#[derive(Clone, Debug, PartialEq)]
pub struct ContextSpec {
    pub case: BracketCase,
    pub omega1: C64,
    /// Second period; ignored outside the elliptic case.
    pub omega2: C64,
    pub quad_coeff: C64,
    pub delta: C64,
    /// Relative distance to the lattice below which a denominator is rejected.
    pub tol_sing: f64,
    /// `k delta` must stay off the lattice for `1 <= k <= k_lattice`.
    pub k_lattice: usize,
    /// Cap on theta-series terms.
    pub trunc: usize,
}

impl ContextSpec {
    pub fn new(case: BracketCase, omega1: C64, omega2: C64, quad_coeff: C64, delta: C64) -> Self {
        ContextSpec {
            case,
            omega1,
            omega2,
            quad_coeff,
            delta,
            tol_sing: 1e-8,
            k_lattice: 64,
            trunc: 256,
        }
    }

    /// Periods `(1, tau)`.
    pub fn elliptic(tau: C64, quad_coeff: C64, delta: C64) -> Self {
        Self::new(BracketCase::Elliptic, C64::new(1.0, 0.0), tau, quad_coeff, delta)
    }

    /// Period 1.
    pub fn degenerate(case: BracketCase, quad_coeff: C64, delta: C64) -> Self {
        Self::new(case, C64::new(1.0, 0.0), C64::new(0.0, 0.0), quad_coeff, delta)
    }
}

/// Immutable evaluation context for `[u]`.
#[derive(Clone, Debug)]
pub struct BracketContext<T: Real> {
    case: BracketCase,
    omega1: Cx<T>,
    omega2: Cx<T>,
    quad_coeff: Cx<T>,
    delta: Cx<T>,
    half: [Cx<T>; 4],
    eta: [Cx<T>; 4],
    eps: [i8; 4],
    finite: [bool; 4],
    tol_sing: f64,
    trunc: usize,
    // theta data (elliptic case)
    gauss: Cx<T>,
    nome: Cx<T>,
    pi_over_w1: Cx<T>,
    theta_scale: Cx<T>,
    w1: C64,
    w2: C64,
}

/// Builds a context and runs the quasi-periodicity self-test.
pub fn make_context<T: Real>(spec: &ContextSpec) -> Result<BracketContext<T>> {
    BracketContext::new(spec)
}

fn e_of<T: Real>(u: Cx<T>) -> Cx<T> {
    let two_pi = T::pi() + T::pi();
    cexp(Cx::new(-two_pi * u.im, two_pi * u.re))
}

fn real<T: Real>(x: f64) -> Cx<T> {
    Cx::new(T::from_f64(x), T::zero())
}

impl<T: Real> BracketContext<T> {
    pub fn new(spec: &ContextSpec) -> Result<Self> {
        let mut w1 = spec.omega1;
        let mut w2 = spec.omega2;
        if w1.norm() == 0.0 {
            return Err(Error::DegenerateLattice);
        }
        if spec.case == BracketCase::Elliptic {
            let ratio = w2 / w1;
            if !ratio.im.is_finite() || ratio.im.abs() < 1e-12 {
                return Err(Error::DegenerateLattice);
            }
            if ratio.im < 0.0 {
                core::mem::swap(&mut w1, &mut w2);
            }
        }
        let omega1: Cx<T> = c64_to(w1);
        let omega2: Cx<T> = if spec.case == BracketCase::Elliptic { c64_to(w2) } else { Cx::<T>::zero() };
        let a: Cx<T> = c64_to(spec.quad_coeff);
        let zero = Cx::<T>::zero();
        let two = real::<T>(2.0);
        let pi = real::<T>(1.0) * T::pi();

        let mut ctx = BracketContext {
            case: spec.case,
            omega1,
            omega2,
            quad_coeff: a,
            delta: c64_to(spec.delta),
            half: [zero; 4],
            eta: [zero; 4],
            eps: [1, -1, -1, -1],
            finite: [true, false, false, false],
            tol_sing: spec.tol_sing,
            trunc: spec.trunc.max(8),
            gauss: a,
            nome: zero,
            pi_over_w1: pi / omega1,
            theta_scale: zero,
            w1,
            w2: if spec.case == BracketCase::Elliptic { w2 } else { C64::new(0.0, 0.0) },
        };

        match spec.case {
            BracketCase::Rational => {}
            BracketCase::Trigonometric => {
                ctx.half[1] = omega1;
                ctx.finite[1] = true;
                ctx.eta[1] = two * a * omega1;
            }
            BracketCase::Elliptic => {
                let tau = omega2 / omega1;
                ctx.nome = cexp(cmul_i(tau * pi));
                let (t1, t3) = ctx.theta_derivatives();
                // c = zeta(w1/2) / (2 pi i w1), zeta(w1/2) = pi^2 T3 / (6 w1 T1)
                let c = -cmul_i(pi * t3 / (real::<T>(12.0) * omega1 * omega1 * t1));
                ctx.gauss = a + c;
                ctx.theta_scale = -cmul_i(omega1 / (pi * two * t1));
                let w3 = -omega1 - omega2;
                ctx.half = [zero, omega1, omega2, w3];
                ctx.finite = [true; 4];
                let eta1 = two * ctx.gauss * omega1;
                let eta2 = two * ctx.gauss * omega2 - Cx::<T>::one() / omega1;
                ctx.eta = [zero, eta1, eta2, -eta1 - eta2];
            }
        }

        if spec.delta.norm() == 0.0 {
            return Err(Error::DeltaInLattice { k: 0 });
        }
        for k in 1..=spec.k_lattice {
            if ctx.lattice_distance(spec.delta * k as f64) < spec.tol_sing * w1.norm() {
                return Err(Error::DeltaInLattice { k });
            }
        }
        ctx.self_test()?;
        Ok(ctx)
    }

    /// Sums `sum (-1)^n q^{n(n+1)} (2n+1)^p` for p = 1, 3.
    fn theta_derivatives(&self) -> (Cx<T>, Cx<T>) {
        let q = self.nome;
        let q2 = q * q;
        let mut g = Cx::<T>::one();
        let mut step = q2;
        let mut t1 = Cx::<T>::zero();
        let mut t3 = Cx::<T>::zero();
        for n in 0..self.trunc {
            let k = T::from_f64((2 * n + 1) as f64);
            let sign = if n % 2 == 0 { T::one() } else { -T::one() };
            let term = g * (sign * k);
            t1 = t1 + term;
            t3 = t3 + term * (k * k);
            if n > 0 && cabs(term) * { let k = (2 * n + 1) as f64; k * k } <= T::EPSILON * cabs(t1) * 1e-2 {
                break;
            }
            g = g * step;
            step = step * q2;
        }
        (t1, t3)
    }

    /// `sum (-1)^n q^{n(n+1)} (w^{2n+1} - w^{-(2n+1)})`, `w = e^{iv}`.
    fn theta_series(&self, v: Cx<T>) -> Cx<T> {
        let w = cexp(cmul_i(v));
        let winv = cexp(-cmul_i(v));
        let w2 = w * w;
        let w2inv = winv * winv;
        let q2 = self.nome * self.nome;
        let mut g = Cx::<T>::one();
        let mut step = q2;
        let mut wp = w;
        let mut wm = winv;
        let mut s = Cx::<T>::zero();
        for n in 0..self.trunc {
            let term = g * (wp - wm);
            if n % 2 == 0 {
                s = s + term;
            } else {
                s = s - term;
            }
            let grow = cabs(wp).max(cabs(wm));
            if n > 0 && cabs(g) * grow <= T::EPSILON * 1e-2 * cabs(s) {
                break;
            }
            g = g * step;
            step = step * q2;
            wp = wp * w2;
            wm = wm * w2inv;
        }
        s
    }

    /// Bracket evaluated from the series without argument reduction.
    fn bracket_direct(&self, u: Cx<T>) -> Cx<T> {
        match self.case {
            BracketCase::Rational => e_of(self.quad_coeff * u * u) * u,
            BracketCase::Trigonometric => e_of(self.quad_coeff * u * u) * csin(u * self.pi_over_w1),
            BracketCase::Elliptic => {
                e_of(self.gauss * u * u) * self.theta_scale * self.theta_series(u * self.pi_over_w1)
            }
        }
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn self_test(&self) -> Result<()> {
        let tol = if T::EPSILON < 1e-20 { 1e-40 } else { 1e-9 };
        let probe = c64_to::<T>(C64::new(0.137, 0.071)) * self.omega1;
        let base = self.bracket_direct(probe);
        for r in 1..4 {
            if !self.finite[r] {
                continue;
            }
            let w = self.half[r];
            let lhs = self.bracket_direct(probe + w);
            let rhs = self.quasi_factor(r, probe) * base;
            let rel = cabs(lhs - rhs) / cabs(base);
            if !(rel < tol) {
                return Err(Error::SelfTestFailed(format!(
                    "quasi-periodicity residual {rel:e} for r = {r}"
                )));
            }
            // numeric eta from two nearby probes
            let step = C64::new(0.05, 0.03) * self.w1;
            let p2 = probe + c64_to(step);
            let r1 = to_c64(lhs) / to_c64(self.eps_cx(r) * base);
            let r2 = to_c64(self.bracket_direct(p2 + w)) / to_c64(self.eps_cx(r) * self.bracket_direct(p2));
            let eta_num = (r2 / r1).ln() / (C64::new(0.0, 2.0 * core::f64::consts::PI) * step);
            let eta = to_c64(self.eta[r]);
            if !((eta_num - eta).norm() < 1e-7 * (1.0 + eta.norm())) {
                return Err(Error::SelfTestFailed(format!(
                    "eta_{r} analytic {eta} disagrees with numeric {eta_num}"
                )));
            }
        }
        Ok(())
    }

    fn eps_cx(&self, r: usize) -> Cx<T> {
        real(self.eps[r] as f64)
    }

    /// `eps_r e(eta_r (u + w_r/2))`.
    fn quasi_factor(&self, r: usize, u: Cx<T>) -> Cx<T> {
        let half = real::<T>(0.5);
        self.eps_cx(r) * e_of(self.eta[r] * (u + self.half[r] * half))
    }

    pub fn case(&self) -> BracketCase {
        self.case
    }

    pub fn delta(&self) -> Cx<T> {
        self.delta
    }

    pub fn omega1(&self) -> Cx<T> {
        self.omega1
    }

    pub fn omega2(&self) -> Option<Cx<T>> {
        (self.case == BracketCase::Elliptic).then_some(self.omega2)
    }

    pub fn quad_coeff(&self) -> Cx<T> {
        self.quad_coeff
    }

    pub fn tol_sing(&self) -> f64 {
        self.tol_sing
    }

    /// `w_r` for r = 0..3 when finite in this case.
    pub fn half_period(&self, r: usize) -> Option<Cx<T>> {
        (r < 4 && self.finite[r]).then(|| self.half[r])
    }

    pub fn eta(&self, r: usize) -> Cx<T> {
        self.eta[r]
    }

    pub fn eps(&self, r: usize) -> i8 {
        self.eps[r]
    }

    /// `e(u) = exp(2 pi i u)`.
    pub fn e(&self, u: Cx<T>) -> Cx<T> {
        e_of(u)
    }

    /// Distance from `u` to the nearest zero of `[.]`.
    pub fn lattice_distance(&self, u: C64) -> f64 {
        match self.case {
            BracketCase::Rational => u.norm(),
            BracketCase::Trigonometric => {
                let m = libm::round((u / self.w1).re);
                (u - self.w1 * m).norm()
            }
            BracketCase::Elliptic => {
                let (s, t) = self.lattice_coords(u);
                let mut best = f64::INFINITY;
                for m in [libm::floor(s), libm::ceil(s)] {
                    for n in [libm::floor(t), libm::ceil(t)] {
                        best = best.min((u - self.w1 * m - self.w2 * n).norm());
                    }
                }
                best
            }
        }
    }

    /// Real coordinates `(s, t)` with `u = s w1 + t w2`.
    fn lattice_coords(&self, u: C64) -> (f64, f64) {
        let (a, b) = (self.w1, self.w2);
        let det = a.re * b.im - b.re * a.im;
        ((u.re * b.im - b.re * u.im) / det, (a.re * u.im - a.im * u.re) / det)
    }

    fn finite_or_overflow(v: Cx<T>) -> Result<Cx<T>> {
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow)
        }
    }

    /// The bracket `[u]`.
    pub fn bracket(&self, u: Cx<T>) -> Result<Cx<T>> {
        let v = match self.case {
            BracketCase::Rational => e_of(self.quad_coeff * u * u) * u,
            BracketCase::Trigonometric => {
                let m = libm::round((to_c64(u) / self.w1).re);
                let u0 = u - self.omega1 * T::from_f64(m);
                let sign = if (m as i64) % 2 == 0 { T::one() } else { -T::one() };
                e_of(self.quad_coeff * u * u) * csin(u0 * self.pi_over_w1) * sign
            }
            BracketCase::Elliptic => {
                let (s, t) = self.lattice_coords(to_c64(u));
                let (m, n) = (libm::round(s), libm::round(t));
                if m == 0.0 && n == 0.0 {
                    e_of(self.gauss * u * u) * self.theta_scale * self.theta_series(u * self.pi_over_w1)
                } else {
                    let (mt, nt) = (T::from_f64(m), T::from_f64(n));
                    let w = self.omega1 * mt + self.omega2 * nt;
                    let u0 = u - w;
                    let eta = self.eta[1] * mt + self.eta[2] * nt;
                    let even = (m as i64) % 2 == 0 && (n as i64) % 2 == 0;
                    let sign = if even { T::one() } else { -T::one() };
                    let half = T::from_f64(0.5);
                    let expo = eta * (u0 + w * half) + self.gauss * u0 * u0;
                    e_of(expo) * self.theta_scale * self.theta_series(u0 * self.pi_over_w1) * sign
                }
            }
        };
        Self::finite_or_overflow(v)
    }

    /// `[u]` used as a denominator: rejects `u` near a lattice zero.
    pub fn den(&self, u: Cx<T>) -> Result<Cx<T>> {
        let uf = to_c64(u);
        if self.lattice_distance(uf) < self.tol_sing * self.w1.norm() {
            return Err(Error::NearSingularity { re: uf.re, im: uf.im });
        }
        self.bracket(u)
    }

    /// `[x + y][x - y]`.
    pub fn bracket_pm(&self, x: Cx<T>, y: Cx<T>) -> Result<Cx<T>> {
        Ok(self.bracket(x + y)? * self.bracket(x - y)?)
    }

    pub fn den_pm(&self, x: Cx<T>, y: Cx<T>) -> Result<Cx<T>> {
        Ok(self.den(x + y)? * self.den(x - y)?)
    }

    /// `[u]_k = [u][u + delta] ... [u + (k-1) delta]`.
    pub fn shifted_factorial(&self, u: Cx<T>, k: usize) -> Result<Cx<T>> {
        let mut p = Cx::<T>::one();
        for i in 0..k {
            p = p * self.bracket(u + self.delta * T::from_f64(i as f64))?;
        }
        Ok(p)
    }

    pub fn den_sf(&self, u: Cx<T>, k: usize) -> Result<Cx<T>> {
        let mut p = Cx::<T>::one();
        for i in 0..k {
            p = p * self.den(u + self.delta * T::from_f64(i as f64))?;
        }
        Ok(p)
    }

    /// `[u + v]_k [u - v]_k`.
    pub fn shifted_factorial_pm(&self, u: Cx<T>, v: Cx<T>, k: usize) -> Result<Cx<T>> {
        Ok(self.shifted_factorial(u + v, k)? * self.shifted_factorial(u - v, k)?)
    }

    pub fn den_sf_pm(&self, u: Cx<T>, v: Cx<T>, k: usize) -> Result<Cx<T>> {
        Ok(self.den_sf(u + v, k)? * self.den_sf(u - v, k)?)
    }

    /// Multiple of delta as a working-precision complex.
    pub fn kd(&self, k: i64) -> Cx<T> {
        self.delta * T::from_i64(k)
    }

    /// Product of `[x - w_s/2] / [-w_s/2]` over s = 1..3, with the infinite
    /// half-periods of the degenerate cases replaced by their limit.
    fn duplication_factor(&self, x: Cx<T>) -> Result<Cx<T>> {
        let half = T::from_f64(0.5);
        let a = self.quad_coeff;
        match self.case {
            BracketCase::Rational => Ok(e_of(a * x * x * T::from_f64(3.0))),
            BracketCase::Trigonometric => {
                let w = self.omega1;
                let r = self.bracket(x - w * half)? / self.den(-w * half)?;
                Ok(r * e_of(a * (x * x * T::from_f64(2.0) + x * w)))
            }
            BracketCase::Elliptic => {
                let mut p = Cx::<T>::one();
                for s in 1..4 {
                    let h = self.half[s] * half;
                    p = p * self.bracket(x - h)? / self.den(-h)?;
                }
                Ok(p)
            }
        }
    }
}

/// Normalized residual of the three-term Riemann relation.
pub fn riemann_residual<T: Real>(
    ctx: &BracketContext<T>,
    x: Cx<T>,
    y: Cx<T>,
    u: Cx<T>,
    v: Cx<T>,
) -> Result<Residual> {
    let mut lhs = Side::new();
    lhs.add(ctx.bracket_pm(x, u)? * ctx.bracket_pm(y, v)?);
    lhs.add(-(ctx.bracket_pm(x, v)? * ctx.bracket_pm(y, u)?));
    let rhs = Side::single(ctx.bracket_pm(x, y)? * ctx.bracket_pm(u, v)?);
    Ok(residual(&lhs, &rhs))
}

/// Normalized residual of the duplication formula `[2x] = 2[x] H(x)`.
pub fn duplication_residual<T: Real>(ctx: &BracketContext<T>, x: Cx<T>) -> Result<Residual> {
    let two = T::from_f64(2.0);
    let lhs = Side::single(ctx.bracket(x * two)?);
    let rhs = Side::single(ctx.bracket(x)? * ctx.duplication_factor(x)? * two);
    Ok(residual(&lhs, &rhs))
}

/// Normalized residual of the half-period product formula at index `r`.
///
/// Outside the elliptic case only finite half-periods are admissible;
/// the infinite ones enter through their limiting factor.
pub fn halfperiod_product_residual<T: Real>(ctx: &BracketContext<T>, r: usize) -> Result<Residual> {
    let wr = ctx.half_period(r).ok_or(Error::BadIndex(r))?;
    let half = T::from_f64(0.5);
    let mut lhs = Cx::<T>::one();
    let mut prod = Cx::<T>::one();
    for s in 1..4 {
        if let Some(ws) = ctx.half_period(s) {
            prod = prod * ctx.bracket(-ws * half)?;
        }
    }
    for s in 0..4 {
        if s == r {
            continue;
        }
        if let Some(ws) = ctx.half_period(s) {
            lhs = lhs * ctx.bracket((wr - ws) * half)?;
        }
    }
    let x = wr * half;
    let a = ctx.quad_coeff();
    lhs = lhs
        * match ctx.case() {
            BracketCase::Elliptic => Cx::<T>::one(),
            BracketCase::Trigonometric => ctx.e(a * (x * ctx.omega1() + x * x * T::from_f64(2.0))),
            BracketCase::Rational => ctx.e(a * x * x * T::from_f64(3.0)),
        };
    let rhs = ctx.eps_cx(r) * ctx.e(ctx.eta(r) * wr * half) * prod;
    Ok(residual(&Side::single(lhs), &Side::single(rhs)))
}

/// Normalized residual of `[u + w_r] = eps_r e(eta_r (u + w_r/2)) [u]`.
pub fn quasi_periodicity_residual<T: Real>(
    ctx: &BracketContext<T>,
    u: Cx<T>,
    r: usize,
) -> Result<Residual> {
    let w = ctx.half_period(r).filter(|_| r > 0).ok_or(Error::BadIndex(r))?;
    let lhs = Side::single(ctx.bracket(u + w)?);
    let rhs = Side::single(ctx.quasi_factor(r, u) * ctx.bracket(u)?);
    Ok(residual(&lhs, &rhs))
}

/// Weierstrass product for `sigma(u)` truncated to `|m|, |n| <= trunc`,
/// with Richardson extrapolation over `trunc`, `trunc/2`, `trunc/4`, `trunc/8`
/// removing the `1/t^2`, `1/t^3` and `1/t^4` tail terms.
pub fn sigma_oracle(ctx: &BracketContext<f64>, u: C64, trunc: usize) -> Result<C64> {
    if ctx.case() != BracketCase::Elliptic {
        return Err(Error::WrongCase("elliptic"));
    }
    if u.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let trunc = trunc.max(16);
    let (w1, w2) = (ctx.w1, ctx.w2);
    let log_prod = |t: usize| -> C64 {
        let t = t as i64;
        let mut s = u.ln();
        for m in -t..=t {
            for n in -t..=t {
                if m == 0 && n == 0 {
                    continue;
                }
                let w = w1 * m as f64 + w2 * n as f64;
                let z = u / w;
                s += (C64::new(1.0, 0.0) - z).ln() + z + z * z * 0.5;
            }
        }
        s
    };
    let l: [C64; 4] = core::array::from_fn(|k| log_prod(trunc >> k));
    let step = |hi: C64, lo: C64, p: i32| {
        let f = f64::from(1u32 << p);
        (hi * f - lo) / (f - 1.0)
    };
    let r: [C64; 3] = core::array::from_fn(|k| step(l[k], l[k + 1], 2));
    let s = [step(r[0], r[1], 3), step(r[1], r[2], 3)];
    Ok(step(s[0], s[1], 4).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Quad;

    fn ctx64() -> BracketContext<f64> {
        make_context(&ContextSpec::elliptic(
            C64::new(0.1, 1.1),
            C64::new(0.03, 0.02),
            C64::new(0.13, 0.05),
        ))
        .unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bracket_is_odd_and_vanishes_at_zero() {
        let ctx = ctx64();
        assert_eq!(ctx.bracket(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let u = c(0.23, 0.11);
        let s = ctx.bracket(u).unwrap() + ctx.bracket(-u).unwrap();
        assert!(s.norm() < 1e-12 * ctx.bracket(u).unwrap().norm());
    }

    #[test]
    fn signs_follow_the_lattice_parity_rule() {
        let ctx = ctx64();
        assert_eq!([ctx.eps(0), ctx.eps(1), ctx.eps(2), ctx.eps(3)], [1, -1, -1, -1]);
    }

    #[test]
    fn real_dependent_periods_are_rejected() {
        let spec = ContextSpec::new(BracketCase::Elliptic, c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.3, 0.1));
        assert_eq!(make_context::<f64>(&spec).unwrap_err(), Error::DegenerateLattice);
    }

    #[test]
    fn lattice_multiple_of_delta_is_rejected() {
        let spec = ContextSpec::elliptic(c(0.0, 1.0), c(0.0, 0.0), c(0.25, 0.0));
        assert_eq!(make_context::<f64>(&spec).unwrap_err(), Error::DeltaInLattice { k: 4 });
    }

    #[test]
    fn reduced_and_direct_evaluation_agree() {
        let ctx = ctx64();
        for u in [c(0.9, 0.2), c(-1.4, 1.3), c(0.3, -2.1)] {
            let a = ctx.bracket(u).unwrap();
            let b = ctx.bracket_direct(u);
            assert!((a - b).norm() < 1e-11 * b.norm(), "u = {u}");
        }
    }

    #[test]
    fn orientation_is_normalized() {
        let spec = ContextSpec::new(BracketCase::Elliptic, c(0.1, 1.1), c(1.0, 0.0), c(0.0, 0.0), c(0.13, 0.05));
        let ctx = make_context::<f64>(&spec).unwrap();
        assert_eq!(ctx.omega1(), c(1.0, 0.0));
    }

    #[test]
    fn quad_context_matches_double() {
        let spec = ContextSpec::elliptic(c(0.1, 1.1), c(0.03, 0.02), c(0.13, 0.05));
        let q = make_context::<Quad>(&spec).unwrap();
        let d = make_context::<f64>(&spec).unwrap();
        let u = c(0.37, -0.21);
        let bq = to_c64(q.bracket(c64_to(u)).unwrap());
        let bd = d.bracket(u).unwrap();
        assert!((bq - bd).norm() < 1e-14 * bd.norm());
    }

    #[test]
    fn shifted_factorial_splits() {
        let ctx = ctx64();
        let u = c(0.2, 0.3);
        let whole = ctx.shifted_factorial(u, 5).unwrap();
        let parts = ctx.shifted_factorial(u, 2).unwrap() * ctx.shifted_factorial(u + ctx.kd(2), 3).unwrap();
        assert!((whole - parts).norm() < 1e-12 * whole.norm());
        assert_eq!(ctx.shifted_factorial(u, 0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn denominator_guard_trips_on_lattice_points() {
        let ctx = ctx64();
        let err = ctx.den(c(1e-10, 0.0) + ctx.half_period(2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NearSingularity { .. }));
        assert!(ctx.den(c(0.3, 0.0)).is_ok());
    }
}
