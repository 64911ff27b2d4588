//! Quad-double real: an unevaluated sum of four non-overlapping `f64` limbs
//! (about 62 significant decimal digits).
//!
//! Arithmetic follows the classic error-free-transformation algorithms
//! (two-sum, Dekker split products, renormalization).

use core::cmp::Ordering;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Num, One, Zero};

use super::real::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quad(pub [f64; 4]);

#[allow(clippy::approx_constant)]
const PI: Quad = Quad([
    3.141592653589793,
    1.2246467991473532e-16,
    -2.9947698097183397e-33,
    1.1124542208633653e-49,
]);
#[allow(clippy::approx_constant)]
const LN2: Quad = Quad([
    0.6931471805599453,
    2.3190468138462996e-17,
    5.707708438416212e-34,
    -3.5824322106018114e-50,
]);
/// 2^-212, below which series terms no longer change the sum.
const TINY: f64 = 1.5e-64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0;
    const THRESH: f64 = 6.696_928_794_914_17e299;
    if libm::fabs(a) > THRESH {
        let a = a * 3.725_290_298_461_914e-9;
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi * 268_435_456.0, (a - hi) * 268_435_456.0)
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

#[inline]
fn three_sum(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    let (b, c) = two_sum(t2, t3);
    (a, b, c)
}

#[inline]
fn three_sum2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    (a, t2 + t3)
}

fn renorm(mut c: [f64; 5]) -> Quad {
    if !c[0].is_finite() {
        return Quad([c[0], 0.0, 0.0, 0.0]);
    }
    let mut s = c[4];
    for i in (0..4).rev() {
        let (hi, lo) = two_sum(c[i], s);
        s = hi;
        c[i + 1] = lo;
    }
    c[0] = s;

    let mut out = [0.0; 4];
    let mut k = 0;
    let mut s = c[0];
    for &t in &c[1..] {
        let (hi, lo) = two_sum(s, t);
        if lo != 0.0 {
            out[k] = hi;
            k += 1;
            s = lo;
            if k == 4 {
                return Quad(out);
            }
        } else {
            s = hi;
        }
    }
    out[k] = s;
    Quad(out)
}

impl Quad {
    pub const ZERO: Quad = Quad([0.0; 4]);
    pub const ONE: Quad = Quad([1.0, 0.0, 0.0, 0.0]);

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Quad([x, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.0[0]
    }

    /// Exact multiplication by 2^k.
    pub fn ldexp(self, k: i32) -> Self {
        let s = &self.0;
        Quad([
            libm::scalbn(s[0], k),
            libm::scalbn(s[1], k),
            libm::scalbn(s[2], k),
            libm::scalbn(s[3], k),
        ])
    }

    pub fn mul_f64(self, b: f64) -> Self {
        self * Quad::from_f64(b)
    }

    pub fn div_f64(self, b: f64) -> Self {
        self / Quad::from_f64(b)
    }

    fn is_negative(self) -> bool {
        self.0[0] < 0.0
    }

    fn qexp(self) -> Self {
        let x = self.0[0];
        if x > 709.7 {
            return Quad::from_f64(f64::INFINITY);
        }
        if x < -745.0 {
            return Quad::ZERO;
        }
        if x == 0.0 {
            return Quad::ONE;
        }
        const HALVINGS: i32 = 10;
        let k = libm::round(x / LN2.0[0]);
        let r = (self - LN2.mul_f64(k)).ldexp(-HALVINGS);

        // expm1(r) by Taylor series
        let mut sum = r;
        let mut term = r;
        let mut n = 2.0;
        loop {
            term = (term * r).div_f64(n);
            sum += term;
            if libm::fabs(term.0[0]) <= TINY * libm::fabs(sum.0[0]) {
                break;
            }
            n += 1.0;
        }
        // expm1(2y) = expm1(y) * (2 + expm1(y))
        for _ in 0..HALVINGS {
            sum = sum * (sum + Quad::from_f64(2.0));
        }
        (sum + Quad::ONE).ldexp(k as i32)
    }

    fn qsin_cos(self) -> (Self, Self) {
        let x = self.0[0];
        if x == 0.0 && self.0[1] == 0.0 {
            return (Quad::ZERO, Quad::ONE);
        }
        let half_pi = PI.ldexp(-1);
        let k = libm::round(x / half_pi.0[0]);
        let r = self - half_pi.mul_f64(k);
        let r2 = r * r;

        let mut s = r;
        let mut term = r;
        let mut n = 2.0;
        loop {
            term = -(term * r2).div_f64(n * (n + 1.0));
            s += term;
            if libm::fabs(term.0[0]) <= TINY * libm::fabs(s.0[0]) {
                break;
            }
            n += 2.0;
        }
        let mut c = Quad::ONE;
        let mut term = Quad::ONE;
        let mut n = 1.0;
        loop {
            term = -(term * r2).div_f64(n * (n + 1.0));
            c += term;
            if libm::fabs(term.0[0]) <= TINY {
                break;
            }
            n += 2.0;
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl Neg for Quad {
    type Output = Quad;
    #[inline]
    fn neg(self) -> Quad {
        let s = self.0;
        Quad([-s[0], -s[1], -s[2], -s[3]])
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, b: Quad) -> Quad {
        let a = self.0;
        let b = b.0;
        let (s0, t0) = two_sum(a[0], b[0]);
        let (s1, t1) = two_sum(a[1], b[1]);
        let (s2, t2) = two_sum(a[2], b[2]);
        let (s3, t3) = two_sum(a[3], b[3]);
        let (s1, t0) = two_sum(s1, t0);
        let (s2, t0, t1) = three_sum(s2, t0, t1);
        let (s3, t0) = three_sum2(s3, t0, t2);
        let t0 = t0 + t1 + t3;
        renorm([s0, s1, s2, s3, t0])
    }
}

impl Sub for Quad {
    type Output = Quad;
    #[inline]
    fn sub(self, b: Quad) -> Quad {
        self + (-b)
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, b: Quad) -> Quad {
        let a = self.0;
        let b = b.0;
        let (p0, q0) = two_prod(a[0], b[0]);
        let (p1, q1) = two_prod(a[0], b[1]);
        let (p2, q2) = two_prod(a[1], b[0]);
        let (p3, q3) = two_prod(a[0], b[2]);
        let (p4, q4) = two_prod(a[1], b[1]);
        let (p5, q5) = two_prod(a[2], b[0]);

        let (p1, p2, q0) = three_sum(p1, p2, q0);
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);

        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let mut s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        s2 += t0 + t1;

        let s1 = s1
            + (a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + q0 + q3 + q4 + q5);
        renorm([p0, p1, s0, s1, s2])
    }
}

impl Div for Quad {
    type Output = Quad;
    fn div(self, b: Quad) -> Quad {
        let b0 = b.0[0];
        let q0 = self.0[0] / b0;
        let mut r = self - b.mul_f64(q0);
        let q1 = r.0[0] / b0;
        r -= b.mul_f64(q1);
        let q2 = r.0[0] / b0;
        r -= b.mul_f64(q2);
        let q3 = r.0[0] / b0;
        r -= b.mul_f64(q3);
        let q4 = r.0[0] / b0;
        renorm([q0, q1, q2, q3, q4])
    }
}

impl Rem for Quad {
    type Output = Quad;
    fn rem(self, b: Quad) -> Quad {
        let q = self / b;
        let t = Quad([
            libm::trunc(q.0[0]),
            if libm::trunc(q.0[0]) == q.0[0] { libm::trunc(q.0[1]) } else { 0.0 },
            0.0,
            0.0,
        ]);
        self - t * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Quad {
            #[inline]
            fn $m(&mut self, b: Quad) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Quad) -> Option<Ordering> {
        for i in 0..4 {
            match self.0[i].partial_cmp(&other.0[i])? {
                Ordering::Equal => continue,
                ord => return Some(ord),
            }
        }
        Some(Ordering::Equal)
    }
}

impl Zero for Quad {
    fn zero() -> Quad {
        Quad::ZERO
    }
    fn is_zero(&self) -> bool {
        self.0[0] == 0.0
    }
}

impl One for Quad {
    fn one() -> Quad {
        Quad::ONE
    }
}

impl Num for Quad {
    type FromStrRadixErr = core::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Quad, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Quad::from_f64)
    }
}

impl Real for Quad {
    const COMPENSATED: bool = false;
    const EPSILON: f64 = 1.2e-63;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Quad::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self.0[0] + self.0[1]
    }
    #[inline]
    fn pi() -> Self {
        PI
    }
    fn exp(self) -> Self {
        self.qexp()
    }
    fn sin_cos(self) -> (Self, Self) {
        self.qsin_cos()
    }
    #[inline]
    fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quad, b: Quad, tol: f64) -> bool {
        let d = (a - b).abs().to_f64();
        d <= tol * libm::fabs(b.to_f64()).max(1e-300)
    }

    #[test]
    fn renormalized_limbs_do_not_overlap() {
        let x = Quad::from_f64(1.0) / Quad::from_f64(3.0);
        for i in 0..3 {
            assert!(libm::fabs(x.0[i + 1]) <= libm::fabs(x.0[i]) * 1.2e-16);
        }
    }

    #[test]
    fn third_times_three_is_one() {
        let third = Quad::ONE / Quad::from_f64(3.0);
        let one = third * Quad::from_f64(3.0);
        assert!((one - Quad::ONE).abs().to_f64() < 1e-62);
    }

    #[test]
    fn exp_ln2_is_two() {
        assert!(close(LN2.qexp(), Quad::from_f64(2.0), 1e-61));
    }

    #[test]
    fn exp_of_sum_is_product() {
        let a = Quad::from_f64(0.37) / Quad::from_f64(7.0);
        let b = Quad::from_f64(-2.3);
        assert!(close((a + b).qexp(), a.qexp() * b.qexp(), 1e-61));
    }

    #[test]
    fn sin_cos_pythagoras_and_quarter_turns() {
        for &x in &[0.1, 1.3, -2.7, 5.0, 40.0] {
            let q = Quad::from_f64(x) / Quad::from_f64(3.0);
            let (s, c) = q.qsin_cos();
            let one = s * s + c * c;
            assert!((one - Quad::ONE).abs().to_f64() < 1e-60, "x={x}");
        }
        let (s, c) = (PI.ldexp(-1)).qsin_cos();
        assert!((s - Quad::ONE).abs().to_f64() < 1e-62);
        assert!(c.abs().to_f64() < 1e-62);
    }

    #[test]
    fn subtraction_cancels_exactly() {
        let a = Quad::from_f64(1.0) / Quad::from_f64(7.0);
        assert_eq!((a - a).to_f64(), 0.0);
    }
}
