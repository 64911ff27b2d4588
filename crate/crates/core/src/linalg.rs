//! Dense complex determinant by LU factorization with partial pivoting.

use alloc::vec::Vec;
use num_traits::{One, Zero};

use crate::num::{cabs, Cx, Real};

/// Determinant of a square matrix given in row-major order.
pub fn determinant<T: Real>(mut m: Vec<Vec<Cx<T>>>) -> Cx<T> {
    let n = m.len();
    let mut det = Cx::<T>::one();
    for col in 0..n {
        let mut piv = col;
        let mut best = cabs(m[col][col]);
        for row in col + 1..n {
            let v = cabs(m[row][col]);
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return Cx::<T>::zero();
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col];
        det = det * p;
        for row in col + 1..n {
            let f = m[row][col] / p;
            if f.is_zero() {
                continue;
            }
            for k in col + 1..n {
                let t = m[col][k];
                m[row][k] = m[row][k] - f * t;
            }
        }
    }
    det
}
