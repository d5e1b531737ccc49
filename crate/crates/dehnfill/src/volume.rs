//! Volume change under filling: two-sided bounds on the volume drop
//! `Delta V` between a cusped manifold and its filling, from the Schlafli
//! identity `dV/dalpha = -ell/2` combined with the envelope kernels.
//!
//! Both bounding integrals are written with the `1/(1-z)` singularity
//! cancelled against `1/H`, leaving integrands that are smooth on `(0, 1]`
//! with common limit `C/4` at `z = 1`.

use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::quad;
use crate::real::{lit, Real};
use crate::scalar::PackingConstants;

/// Volume of the smallest orientable cusped hyperbolic 3-manifold
/// (Cao and Meyerhoff), truncated toward zero so it stays a lower bound.
pub const CUSPED_MIN_VOLUME: f64 = 2.02988;

/// Volume-drop bounds for fillings certified by the envelope machinery.
#[derive(Debug, Clone)]
pub struct VolumeSolver<T> {
    k: PackingConstants<T>,
    quad_tol: T,
    cusped_volume: T,
}

impl<T: Real> VolumeSolver<T> {
    pub fn new() -> Self {
        Self::with_quad_tol(lit(1e-10))
    }

    pub fn with_quad_tol(quad_tol: T) -> Self {
        VolumeSolver {
            k: PackingConstants::compute(),
            quad_tol,
            cusped_volume: lit(CUSPED_MIN_VOLUME),
        }
    }

    /// Replaces the default minimal cusped volume with the volume of a
    /// specific manifold, for sharper per-manifold output.
    pub fn with_cusped_volume(mut self, v: T) -> Result<Self> {
        if !(v >= lit(CUSPED_MIN_VOLUME)) {
            return Err(Error::domain(
                "VolumeSolver::with_cusped_volume",
                format!("{v} is below the minimal cusped volume {CUSPED_MIN_VOLUME}"),
            ));
        }
        self.cusped_volume = v;
        Ok(self)
    }

    pub fn constants(&self) -> &PackingConstants<T> {
        &self.k
    }

    fn check_z_hat(&self, z_hat: T, op: &'static str) -> Result<()> {
        // both kernels need 6z^2 - z^4 - 1 > 0, i.e. z > tanh(0.4407...);
        // everything produced by h_inverse lands at or above z(h_max)
        let floor = crate::envelope::alpha_ell_monotone_threshold::<T>().tanh();
        if !(z_hat > floor && z_hat <= T::one()) {
            return Err(Error::domain(
                op,
                format!("z_hat = {z_hat} outside (tanh(0.4407), 1]"),
            ));
        }
        Ok(())
    }

    /// Lower integrand `H'/(4 H (H + G))`, in the cancelled form
    /// `(F(z)/H(z) + C z (1+z)/(1+z^2)) / 4`.
    pub fn dv_integrand_lower(&self, z: T) -> Result<T> {
        let c = self.k.c_single;
        let z2 = z * z;
        let f = self.k.f_kernel(z)?;
        let inv_h = c * z * (T::one() - z2) / (T::one() + z2);
        Ok((f * inv_h + c * z * (T::one() + z) / (T::one() + z2)) / lit(4.0))
    }

    /// Upper integrand `H'/(4 H (H - G~))`, same cancellation with `F~`.
    pub fn dv_integrand_upper(&self, z: T) -> Result<T> {
        let c = self.k.c_single;
        let z2 = z * z;
        let f = self.k.f_tilde(z)?;
        let inv_h = c * z * (T::one() - z2) / (T::one() + z2);
        Ok((f * inv_h + c * z * (T::one() + z) / (T::one() + z2)) / lit(4.0))
    }

    /// `int_{z_hat}^1` of the lower integrand.
    pub fn dv_lower_integral(&self, z_hat: T) -> Result<T> {
        self.check_z_hat(z_hat, "dv_lower_integral")?;
        quad::integrate(
            |z| self.dv_integrand_lower(z).unwrap(),
            z_hat,
            T::one(),
            self.quad_tol,
        )
    }

    /// `int_{z_hat}^1` of the upper integrand.
    pub fn dv_upper_integral(&self, z_hat: T) -> Result<T> {
        self.check_z_hat(z_hat, "dv_upper_integral")?;
        quad::integrate(
            |z| self.dv_integrand_upper(z).unwrap(),
            z_hat,
            T::one(),
            self.quad_tol,
        )
    }

    /// `z = tanh(rho)` at the full filling for core length `ell`, from
    /// `2 pi ell = h(rho)` on the upper branch. Fails with `HumpExceeded`
    /// for `ell > h_max / (2 pi)`.
    pub fn z_at_full_filling(&self, ell: T) -> Result<T> {
        if !(ell > T::zero()) {
            return Err(Error::domain(
                "z_at_full_filling",
                format!("core length {ell} must be > 0"),
            ));
        }
        let two_pi = lit::<T>(std::f64::consts::TAU);
        Ok(self.k.h_inverse(two_pi * ell)?.tanh())
    }

    /// Two-sided bound on the volume drop of a filling whose core geodesic
    /// has length `ell`.
    pub fn delta_v_bounds(&self, ell: T) -> Result<Bracket<T>> {
        let z_hat = self.z_at_full_filling(ell)?;
        Bracket::new(self.dv_lower_integral(z_hat)?, self.dv_upper_integral(z_hat)?)
    }

    /// The largest certified volume drop over the whole validity region,
    /// `int_{z1}^1` of the upper integrand, about 0.3287.
    pub fn max_delta_v(&self) -> Result<T> {
        self.dv_upper_integral(lit(crate::envelope::Z1_LITERAL))
    }

    /// Universal lower bound on the volume of any filling reached through
    /// the envelope region: cusped volume minus the maximal drop, about
    /// 1.7012 with the default cusped volume.
    pub fn min_filled_volume(&self) -> Result<T> {
        Ok(self.cusped_volume - self.max_delta_v()?)
    }

    /// Lower bound on the volume of the specific filling with core length
    /// `ell`.
    pub fn filled_volume_lower(&self, ell: T) -> Result<T> {
        Ok(self.cusped_volume - self.delta_v_bounds(ell)?.hi)
    }
}

impl<T: Real> Default for VolumeSolver<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Schlafli derivative of volume along a cone deformation, `-ell/2`.
pub fn dv_dalpha<T: Real>(ell: T) -> T {
    -ell / lit::<T>(2.0)
}

/// Leading Neumann-Zagier style asymptote `Delta V ~ pi ell / 2` for
/// short core length.
pub fn short_core_asymptote<T: Real>(ell: T) -> T {
    lit::<T>(std::f64::consts::PI) * ell / lit(2.0)
}
