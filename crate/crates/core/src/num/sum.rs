//! One side of an identity: a sum of summands, with the largest summand
//! magnitude kept for residual normalization.

use num_traits::Zero;

use super::complex::{cabs, Cx};
use super::real::Real;

#[derive(Clone, Copy, Debug)]
pub struct Side<T: Real> {
    sum: Cx<T>,
    comp: Cx<T>,
    max: f64,
    count: usize,
}

#[inline]
fn neumaier<T: Real>(sum: &mut T, comp: &mut T, x: T) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl<T: Real> Default for Side<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Side<T> {
    pub fn new() -> Self {
        Side { sum: Cx::zero(), comp: Cx::zero(), max: 0.0, count: 0 }
    }

    /// A side consisting of a single summand.
    pub fn single(v: Cx<T>) -> Self {
        let mut s = Self::new();
        s.add(v);
        s
    }

    pub fn add(&mut self, term: Cx<T>) {
        let m = cabs(term);
        if m > self.max || m.is_nan() {
            self.max = m;
        }
        self.count += 1;
        if T::COMPENSATED {
            neumaier(&mut self.sum.re, &mut self.comp.re, term.re);
            neumaier(&mut self.sum.im, &mut self.comp.im, term.im);
        } else {
            self.sum = self.sum + term;
        }
    }

    /// Multiplies every summand by `f`.
    pub fn scale(self, f: Cx<T>) -> Self {
        Side {
            sum: self.sum * f,
            comp: self.comp * f,
            max: self.max * cabs(f),
            count: self.count,
        }
    }

    pub fn value(&self) -> Cx<T> {
        self.sum + self.comp
    }

    /// Largest summand magnitude.
    pub fn max_term(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

/// Normalized residual of one identity evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    /// |LHS - RHS| / scale, or 0 when every summand vanishes.
    pub value: f64,
    /// Largest summand magnitude over both sides.
    pub scale: f64,
}

impl Residual {
    pub const ZERO: Residual = Residual { value: 0.0, scale: 0.0 };

    /// Worst of two residuals (used when one check covers several instances).
    pub fn max(self, other: Residual) -> Residual {
        if other.value > self.value || other.value.is_nan() {
            other
        } else {
            self
        }
    }
}

pub fn residual<T: Real>(lhs: &Side<T>, rhs: &Side<T>) -> Residual {
    let scale = lhs.max.max(rhs.max);
    let diff = cabs(lhs.value() - rhs.value());
    if scale == 0.0 {
        return Residual { value: diff, scale };
    }
    Residual { value: diff / scale, scale }
}
