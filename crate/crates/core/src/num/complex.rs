//! Complex helpers over a generic [`Real`] component type.

use num_complex::Complex;

use super::real::Real;

pub type Cx<T> = Complex<T>;
pub type C64 = Complex<f64>;

#[inline]
pub fn c64_to<T: Real>(z: C64) -> Cx<T> {
    Cx::new(T::from_f64(z.re), T::from_f64(z.im))
}

#[inline]
pub fn to_c64<T: Real>(z: Cx<T>) -> C64 {
    C64::new(z.re.to_f64(), z.im.to_f64())
}

/// Magnitude, evaluated in binary64.
#[inline]
pub fn cabs<T: Real>(z: Cx<T>) -> f64 {
    libm::hypot(z.re.to_f64(), z.im.to_f64())
}

#[inline]
pub fn cmul_i<T: Real>(z: Cx<T>) -> Cx<T> {
    Cx::new(-z.im, z.re)
}

pub fn cexp<T: Real>(z: Cx<T>) -> Cx<T> {
    let r = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Cx::new(r * c, r * s)
}

pub fn csin<T: Real>(z: Cx<T>) -> Cx<T> {
    // sin z = (w - 1/w) / 2i with w = e^{iz}
    let w = cexp(cmul_i(z));
    let winv = cexp(-cmul_i(z));
    let d = w - winv;
    let half = T::from_f64(0.5);
    Cx::new(d.im * half, -d.re * half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = cexp(Cx::new(0.0, core::f64::consts::PI));
        assert!((z - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sin_matches_expansion() {
        let z = C64::new(0.3, -0.7);
        let expect = C64::new(
            libm::sin(0.3) * libm::cosh(-0.7),
            libm::cos(0.3) * libm::sinh(-0.7),
        );
        assert!((csin(z) - expect).norm() < 1e-15);
    }
}
