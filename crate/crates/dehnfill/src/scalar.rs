//! Closed-form scalar functions for tube packing and deformation control:
//! the packing function `h` and its inverse, the substituted functions
//! `H`, `G`, `G~`, the separation kernels `F` and `F~`, and the constants
//! they are built from.
//!
//! Everything is derived from the single computed constant
//! `C = 2*sqrt(3)/S`, never from its decimal rounding 3.3957.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{lit, two, Real};
use crate::roots;

/// Whether bounds are taken for a single-cusp manifold or for the
/// additional cusps of a multi-cusp manifold. For multiple cusps the
/// packing argument yields only one inscribed ellipse per torus, so the
/// area coefficient `C` is halved (and `H`, `G`, `G~` double).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CuspCount {
    Single,
    Multi,
}

/// Constants of the tube-packing argument, computed from first principles
/// once at startup.
#[derive(Debug, Clone, Serialize)]
pub struct PackingConstants<T> {
    /// `S = (1/(2 sqrt 2)) / arcsinh(1/(2 sqrt 2))`, the convexity ratio
    /// bounding `sinh(zeta)/zeta` on the projected ball.
    pub s_ratio: T,
    /// `C = 2 sqrt(3) / S`, the area coefficient (single cusp); the
    /// literal 3.3957 is its four-decimal rounding.
    pub c_single: T,
    /// `C / 2`, the coefficient for the extra cusps of a multi-cusp manifold.
    pub c_multi: T,
    /// Maximum of the packing function `h`.
    pub h_max: T,
    /// Radius at which `h` attains its maximum: `arctanh(sqrt(sqrt 5 - 2))`.
    pub r_at_hmax: T,
    /// `tanh(r_at_hmax) = sqrt(sqrt 5 - 2)`.
    pub z_at_hmax: T,
    /// `rho_1 = 0.531`, the operative tube-radius floor.
    pub rho1: T,
    /// `z_1 = tanh(rho_1)`.
    pub z1: T,
}

impl<T: Real> PackingConstants<T> {
    pub fn compute() -> Self {
        let one = T::one();
        let inv_2r2 = one / (two::<T>() * two::<T>().sqrt());
        let s_ratio = inv_2r2 / inv_2r2.asinh();
        let c_single = two::<T>() * lit::<T>(3.0).sqrt() / s_ratio;
        let c_multi = c_single / two();
        let z_at_hmax = (lit::<T>(5.0).sqrt() - two::<T>()).sqrt();
        let r_at_hmax = z_at_hmax.atanh();
        let rho1 = lit::<T>(0.531);
        let z1 = rho1.tanh();
        // h_max = C * f(z*) evaluated at the closed-form argmax
        let f_star = z_at_hmax * (one - z_at_hmax * z_at_hmax) / (one + z_at_hmax * z_at_hmax);
        PackingConstants {
            s_ratio,
            c_single,
            c_multi,
            h_max: c_single * f_star,
            r_at_hmax,
            z_at_hmax,
            rho1,
            z1,
        }
    }

    /// Area coefficient for the given cusp count.
    #[inline]
    pub fn c(&self, cusps: CuspCount) -> T {
        match cusps {
            CuspCount::Single => self.c_single,
            CuspCount::Multi => self.c_multi,
        }
    }

    /// The packing function `h(r) = C tanh(r)/cosh(2r)`: a lower bound for
    /// the product (cone angle) x (core length) when the tube radius is `r`.
    pub fn h(&self, r: T) -> Result<T> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::domain("h", format!("tube radius {r} must be finite and > 0")));
        }
        Ok(self.c_single * r.tanh() / (two::<T>() * r).cosh())
    }

    /// `f(z) = z(1-z^2)/(1+z^2)`, so that `h(r) = C f(tanh r)`.
    pub fn f_of_z(&self, z: T) -> Result<T> {
        if !(z > T::zero() && z <= T::one()) {
            return Err(Error::domain("f_of_z", format!("z = {z} outside (0, 1]")));
        }
        let z2 = z * z;
        Ok(z * (T::one() - z2) / (T::one() + z2))
    }

    /// Derivative of `h` in `r` (used for Newton polishing of the inverse).
    pub fn dh_dr(&self, r: T) -> Result<T> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::domain("dh_dr", format!("tube radius {r} must be finite and > 0")));
        }
        let z = r.tanh();
        let z2 = z * z;
        let fprime = (T::one() - lit::<T>(4.0) * z2 - z2 * z2) / ((T::one() + z2) * (T::one() + z2));
        let sech2 = T::one() - z2;
        Ok(self.c_single * fprime * sech2)
    }

    /// Inverts `h` on its decreasing branch `r >= r_at_hmax`.
    ///
    /// Bracketed bisection on `[r_at_hmax, 50]` with Newton polishing,
    /// absolute tolerance 1e-12 in `r`.
    pub fn h_inverse(&self, a: T) -> Result<T> {
        if !(a > T::zero()) {
            return Err(Error::domain("h_inverse", format!("argument {a} must be > 0")));
        }
        if a > self.h_max {
            return Err(Error::HumpExceeded {
                detail: format!(
                    "h_inverse({a}) undefined above the hump maximum {}",
                    self.h_max
                ),
                t_max: None,
            });
        }
        if a == self.h_max {
            return Ok(self.r_at_hmax);
        }
        let hi = lit::<T>(50.0);
        if self.h(hi)? > a {
            // extremely small a: extend the bracket (h decays like 4 C e^{-2r})
            return Err(Error::Numerical {
                op: "h_inverse",
                detail: format!("argument {a} too small for bracket [r_at_hmax, 50]"),
            });
        }
        let f = |r: T| self.h(r).unwrap() - a;
        let df = |r: T| self.dh_dr(r).unwrap();
        roots::bisect_newton(f, df, self.r_at_hmax, hi, lit::<T>(1e-12))
    }

    /// `H(z) = 1/(alpha * ell) = (1+z^2)/(C z (1-z^2))`.
    pub fn big_h(&self, z: T, cusps: CuspCount) -> Result<T> {
        if !(z > T::zero() && z < T::one()) {
            return Err(Error::domain("big_h", format!("z = {z} outside (0, 1)")));
        }
        let z2 = z * z;
        Ok((T::one() + z2) / (self.c(cusps) * z * (T::one() - z2)))
    }

    /// `1/H(z) = C z (1-z^2)/(1+z^2)`, total on (0, 1].
    pub fn inv_big_h(&self, z: T, cusps: CuspCount) -> Result<T> {
        if !(z > T::zero() && z <= T::one()) {
            return Err(Error::domain("inv_big_h", format!("z = {z} outside (0, 1]")));
        }
        let z2 = z * z;
        Ok(self.c(cusps) * z * (T::one() - z2) / (T::one() + z2))
    }

    /// `G(z) = (1+z^2)/(2C z^3)`, the lower barrier for `du/dt`.
    pub fn g(&self, z: T, cusps: CuspCount) -> Result<T> {
        if !(z > T::zero() && z <= T::one()) {
            return Err(Error::domain("g", format!("z = {z} outside (0, 1]")));
        }
        let z2 = z * z;
        Ok((T::one() + z2) / (two::<T>() * self.c(cusps) * z * z2))
    }

    /// `G~(z) = (1+z^2)^2/(2C z^3 (3-z^2))`, the upper barrier for `du/dt`.
    pub fn g_tilde(&self, z: T, cusps: CuspCount) -> Result<T> {
        if !(z > T::zero() && z <= T::one()) {
            return Err(Error::domain("g_tilde", format!("z = {z} outside (0, 1]")));
        }
        let z2 = z * z;
        let n = (T::one() + z2) * (T::one() + z2);
        Ok(n / (two::<T>() * self.c(cusps) * z * z2 * (lit::<T>(3.0) - z2)))
    }

    /// Analytic derivative `H'(z) = (z^4 + 4z^2 - 1)/(C z^2 (1-z^2)^2)`.
    pub fn dh_dz(&self, z: T, cusps: CuspCount) -> Result<T> {
        if !(z > T::zero() && z < T::one()) {
            return Err(Error::domain("dh_dz", format!("z = {z} outside (0, 1)")));
        }
        let z2 = z * z;
        let omz2 = T::one() - z2;
        Ok((z2 * z2 + lit::<T>(4.0) * z2 - T::one()) / (self.c(cusps) * z2 * omz2 * omz2))
    }

    /// The regular part of the lower separation kernel:
    /// `F(z) = -(1 + 4z + 6z^2 + z^4)/((z+1)(1+z^2)^2)`,
    /// so that `H'/(H+G) = F(z) + 1/(1-z)`.
    pub fn f_kernel(&self, z: T) -> Result<T> {
        if !(z > T::zero() && z <= T::one()) {
            return Err(Error::domain("f_kernel", format!("z = {z} outside (0, 1]")));
        }
        let z2 = z * z;
        let num = T::one() + lit::<T>(4.0) * z + lit::<T>(6.0) * z2 + z2 * z2;
        let den = (z + T::one()) * (T::one() + z2) * (T::one() + z2);
        Ok(-num / den)
    }

    /// The regular part of the upper separation kernel:
    /// `F~(z) = (z^6 + 7z^4 + 12z^3 - 9z^2 - 4z + 1)/((1+z)(1+z^2)(6z^2 - z^4 - 1))`,
    /// so that `H'/(H - G~) = F~(z) + 1/(1-z)`.
    ///
    /// The cancellation of the removable factor (1-z) has been carried out
    /// symbolically, so the form is stable all the way to z = 1, where
    /// `F~(1) = 1/2`. The denominator factor `6z^2 - z^4 - 1` is positive
    /// exactly where `H - G~ > 0`, i.e. for `z > sqrt(3 - 2 sqrt 2) = tanh(0.4407...)`.
    pub fn f_tilde(&self, z: T) -> Result<T> {
        if !(z > T::zero() && z <= T::one()) {
            return Err(Error::domain("f_tilde", format!("z = {z} outside (0, 1]")));
        }
        let z2 = z * z;
        let pos_floor = lit::<T>(3.0) - two::<T>() * two::<T>().sqrt();
        if z2 <= pos_floor {
            return Err(Error::domain(
                "f_tilde",
                format!("z = {z} below tanh(0.4407) where H - G~ changes sign"),
            ));
        }
        let num = ((((z2 + lit::<T>(7.0)) * z + lit::<T>(12.0)) * z - lit::<T>(9.0)) * z
            - lit::<T>(4.0))
            * z
            + T::one();
        let den = (T::one() + z) * (T::one() + z2) * (lit::<T>(6.0) * z2 - z2 * z2 - T::one());
        Ok(num / den)
    }
}

/// `f64` constants, computed once.
pub fn constants() -> &'static PackingConstants<f64> {
    use std::sync::OnceLock;
    static CONSTANTS: OnceLock<PackingConstants<f64>> = OnceLock::new();
    CONSTANTS.get_or_init(PackingConstants::compute)
}
