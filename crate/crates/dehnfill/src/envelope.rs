//! Deformation envelopes: the differential inequalities in `(t, z, u)`
//! along a cone-angle deformation path, their closed-form first-time
//! bound, two-sided z-envelopes, tube-radius and core-length envelopes,
//! the universal normalized-length thresholds, and the drilling predicates.
//!
//! Parametrization: `t = alpha^2`, `u = alpha/ell = t H(z)`, `z = tanh(rho)`
//! with `rho = h^{-1}(alpha ell)`. The inequalities are valid while
//! `z >= z1`; all envelope outputs carry that validity region.

use serde::Serialize;

use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::quad;
use crate::real::{lit, two, Real};
use crate::roots;
use crate::scalar::{CuspCount, PackingConstants};

/// The operative validity floor for `z`, as the literal used in the
/// threshold arithmetic. `tanh(0.531) = 0.48616...` differs from it by
/// about 1e-4; the literal is deliberately not "improved".
pub const Z1_LITERAL: f64 = 0.4862;

/// `t` at the full filling, `(2 pi)^2`.
pub fn t_full<T: Real>() -> T {
    let tau = lit::<T>(std::f64::consts::TAU);
    tau * tau
}

/// A point on a deformation path, with the derived quantities attached.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConeState<T> {
    /// cone angle, radians in [0, 2 pi]
    pub alpha: T,
    /// `t = alpha^2`
    pub t: T,
    /// `z = tanh(rho)`
    pub z: T,
    /// `u = alpha/ell = t H(z)`
    pub u: T,
    /// `rho = arctanh(z)`
    pub rho: T,
    /// core length `ell = alpha/u` (0 at the cusp)
    pub ell: T,
}

impl<T: Real> ConeState<T> {
    pub fn from_alpha_z(
        k: &PackingConstants<T>,
        alpha: T,
        z: T,
        cusps: CuspCount,
    ) -> Result<Self> {
        let two_pi = lit::<T>(std::f64::consts::TAU);
        if !(alpha >= T::zero() && alpha <= two_pi) {
            return Err(Error::domain(
                "ConeState::from_alpha_z",
                format!("alpha = {alpha} outside [0, 2*pi]"),
            ));
        }
        let t = alpha * alpha;
        let h = k.big_h(z, cusps)?;
        let u = t * h;
        let ell = if alpha > T::zero() { alpha / u } else { T::zero() };
        Ok(ConeState {
            alpha,
            t,
            z,
            u,
            rho: z.atanh(),
            ell,
        })
    }
}

/// One sampled point of an envelope curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnvelopeSample<T> {
    pub alpha: T,
    pub t: T,
    pub z: Bracket<T>,
    pub rho_lo: T,
    pub ell: Bracket<T>,
    pub valid: bool,
}

/// A sampled monotone envelope curve in `t`, with per-sample brackets.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeCurve<T> {
    pub samples: Vec<EnvelopeSample<T>>,
    pub l_hat: T,
    pub cusps: CuspCount,
    pub quad_tol: T,
    pub root_tol: T,
    /// Set when the bracket dies at `z1` before `alpha = 2 pi`.
    pub truncated_at_t: Option<T>,
}

/// Envelope computations for one surgery curve of normalized length
/// `l_hat` on a single- or multi-cusp manifold.
#[derive(Debug, Clone)]
pub struct EnvelopeSolver<T> {
    k: PackingConstants<T>,
    cusps: CuspCount,
    l_hat: T,
    quad_tol: T,
    root_tol: T,
    z1: T,
}

impl<T: Real> EnvelopeSolver<T> {
    pub fn new(l_hat: T, cusps: CuspCount) -> Result<Self> {
        Self::with_tolerances(l_hat, cusps, lit(1e-10), lit(1e-12))
    }

    pub fn with_tolerances(l_hat: T, cusps: CuspCount, quad_tol: T, root_tol: T) -> Result<Self> {
        if !(l_hat > T::zero()) {
            return Err(Error::domain(
                "EnvelopeSolver::new",
                format!("normalized length {l_hat} must be > 0"),
            ));
        }
        if !(quad_tol > T::zero() && root_tol > T::zero()) {
            return Err(Error::domain("EnvelopeSolver::new", "tolerances must be > 0".to_string()));
        }
        Ok(EnvelopeSolver {
            k: PackingConstants::compute(),
            cusps,
            l_hat,
            quad_tol,
            root_tol,
            z1: lit(Z1_LITERAL),
        })
    }

    pub fn constants(&self) -> &PackingConstants<T> {
        &self.k
    }

    pub fn l_hat(&self) -> T {
        self.l_hat
    }

    pub fn cusps(&self) -> CuspCount {
        self.cusps
    }

    pub fn z1(&self) -> T {
        self.z1
    }

    /// `int_1^z F(w) dw` by adaptive quadrature; `F` is smooth and bounded
    /// on `(0, 1]`, the log singularity having been split off analytically.
    fn int_f(&self, z: T) -> Result<T> {
        quad::integrate(|w| self.k.f_kernel(w).unwrap(), T::one(), z, self.quad_tol)
    }

    /// `int_1^z F~(w) dw`, the analogous regular part of the upper kernel.
    fn int_f_tilde(&self, z: T) -> Result<T> {
        quad::integrate(|w| self.k.f_tilde(w).unwrap(), T::one(), z, self.quad_tol)
    }

    /// Lower-envelope time as a function of `xi = 1 - z`, kept in terms of
    /// `xi` to avoid cancellation near the cusp.
    fn lower_time_of_xi(&self, xi: T) -> Result<T> {
        let z = T::one() - xi;
        Ok(self.k.c(self.cusps) * self.l_hat * self.l_hat * xi * (-self.int_f(z)?).exp())
    }

    fn upper_time_of_xi(&self, xi: T) -> Result<T> {
        let z = T::one() - xi;
        Ok(self.k.c(self.cusps) * self.l_hat * self.l_hat * xi * (-self.int_f_tilde(z)?).exp())
    }

    /// The first time `t` at which `z(t)` can reach the given `z`:
    /// `t >= C l_hat^2 (1-z) exp(-int_1^z F)`.
    pub fn first_time_lower_bound(&self, z: T) -> Result<T> {
        if !(z >= self.z1 && z < T::one()) {
            return Err(Error::domain(
                "first_time_lower_bound",
                format!("z = {z} outside [z1, 1); the inequalities are invalid below z1"),
            ));
        }
        self.lower_time_of_xi(T::one() - z)
    }

    /// The latest time compatible with the other side of the inequality,
    /// via the kernel `H'/(H - G~)` with the same cusp initial condition.
    pub fn last_time_upper_bound(&self, z: T) -> Result<T> {
        if !(z >= self.z1 && z < T::one()) {
            return Err(Error::domain(
                "last_time_upper_bound",
                format!("z = {z} outside [z1, 1)"),
            ));
        }
        self.upper_time_of_xi(T::one() - z)
    }

    /// Largest `t` for which the whole bracket is certified: the time at
    /// which the lower envelope reaches `z1`, capped at `(2 pi)^2`.
    pub fn t_max(&self) -> Result<T> {
        let at_floor = self.lower_time_of_xi(T::one() - self.z1)?;
        Ok(at_floor.min(t_full()))
    }

    /// Inverts a monotone (in `xi = 1-z`) time function by bisection in
    /// `ln xi`; `root_tol` applies as a relative tolerance on `xi`.
    fn invert_time(&self, t: T, f: &dyn Fn(T) -> Result<T>, op: &'static str) -> Result<T> {
        let xi_hi = T::one() - self.z1;
        let t_at_floor = f(xi_hi)?;
        if t > t_at_floor {
            return Err(Error::HumpExceeded {
                detail: format!("envelope reaches z1 before t = {t}"),
                t_max: t_at_floor.to_f64(),
            });
        }
        if t == t_at_floor {
            return Ok(self.z1);
        }
        let xi_lo = lit::<T>(1e-18);
        if f(xi_lo)? >= t {
            return Err(Error::domain(op, format!("t = {t} too small to resolve (z within 1e-18 of 1)")));
        }
        let u = roots::bisect(
            |lu: T| f(lu.exp()).unwrap() - t,
            xi_lo.ln(),
            xi_hi.ln(),
            self.root_tol.max(lit(1e-14)),
        )?;
        Ok(T::one() - u.exp())
    }

    /// The certified bracket `[z_lo, z_hi]` for `z(t)`.
    ///
    /// Fails with `HumpExceeded` (carrying the last certified `t`) once the
    /// lower envelope would cross `z1`.
    pub fn z_envelope(&self, t: T) -> Result<Bracket<T>> {
        if !(t > T::zero() && t <= t_full()) {
            return Err(Error::domain("z_envelope", format!("t = {t} outside (0, (2*pi)^2]")));
        }
        let z_lo = self.invert_time(t, &|xi| self.lower_time_of_xi(xi), "z_envelope")?;
        let z_hi = self.invert_time(t, &|xi| self.upper_time_of_xi(xi), "z_envelope")?;
        Bracket::new(z_lo, z_hi)
    }

    /// Certified lower bound on the tube radius at cone angle `alpha`:
    /// `arctanh(z_lo(alpha^2))`, which is at least 0.531 wherever defined.
    pub fn tube_radius_lower(&self, alpha: T) -> Result<T> {
        let z = self.z_envelope(alpha * alpha)?;
        Ok(z.lo.atanh())
    }

    /// Certified bracket for the core length at cone angle `alpha`:
    /// `[1/(alpha H(z_hi)), 1/(alpha H(z_lo))]`.
    pub fn core_length_bracket(&self, alpha: T) -> Result<Bracket<T>> {
        if !(alpha > T::zero()) {
            return Err(Error::domain(
                "core_length_bracket",
                format!("alpha = {alpha} must be > 0"),
            ));
        }
        let z = self.z_envelope(alpha * alpha)?;
        Bracket::new(
            self.k.inv_big_h(z.hi, self.cusps)? / alpha,
            self.k.inv_big_h(z.lo, self.cusps)? / alpha,
        )
    }

    /// Samples the envelope over `alpha` in `(0, 2 pi]`: log-spaced over the
    /// first half of the samples, linear up to `2 pi` for the rest. If the
    /// bracket dies at `z1` before `2 pi`, the curve truncates there and the
    /// final sample is marked invalid.
    pub fn sample_curve(&self, n_samples: usize) -> Result<EnvelopeCurve<T>> {
        let n = n_samples.max(2);
        let two_pi = lit::<T>(std::f64::consts::TAU);
        let t_stop = self.t_max()?;
        let truncated = t_stop < t_full::<T>();
        let alpha_stop = t_stop.sqrt();
        let alpha_min = two_pi * lit::<T>(1e-4);
        let n_log = n / 2;
        let n_lin = n - n_log;
        let mut alphas = Vec::with_capacity(n);
        let split = (alpha_stop * lit::<T>(0.5)).max(alpha_min);
        for i in 0..n_log {
            let frac = lit::<T>(i as f64 / n_log as f64);
            alphas.push(alpha_min * (split / alpha_min).powf(frac));
        }
        for i in 0..n_lin {
            let frac = lit::<T>(i as f64 / (n_lin - 1).max(1) as f64);
            alphas.push(split + (alpha_stop - split) * frac);
        }
        let mut samples = Vec::with_capacity(n);
        for alpha in alphas {
            let t = alpha * alpha;
            match self.z_envelope(t) {
                Ok(z) => {
                    let ell = Bracket::new(
                        self.k.inv_big_h(z.hi, self.cusps)? / alpha,
                        self.k.inv_big_h(z.lo, self.cusps)? / alpha,
                    )?;
                    let valid = !(truncated && t >= t_stop * lit(1.0 - 1e-9));
                    samples.push(EnvelopeSample {
                        alpha,
                        t,
                        z,
                        rho_lo: z.lo.atanh(),
                        ell,
                        valid,
                    });
                }
                Err(Error::HumpExceeded { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(EnvelopeCurve {
            samples,
            l_hat: self.l_hat,
            cusps: self.cusps,
            quad_tol: self.quad_tol,
            root_tol: self.root_tol,
            truncated_at_t: truncated.then(|| t_stop),
        })
    }
}

/// The universal normalized-length threshold guaranteeing the envelope
/// reaches `alpha = 2 pi`: about 7.5146 for a single cusp, `sqrt 2` times
/// that for the extra cusps of a multi-cusp manifold. Computed end to end
/// from quadrature of `F`, never hardcoded.
pub fn critical_normalized_length<T: Real>(cusps: CuspCount, quad_tol: T) -> Result<T> {
    let k = PackingConstants::<T>::compute();
    let z1 = lit::<T>(Z1_LITERAL);
    let int_f = quad::integrate(|w| k.f_kernel(w).unwrap(), T::one(), z1, quad_tol)?;
    let sq = t_full::<T>() * int_f.exp() / (k.c(cusps) * (T::one() - z1));
    Ok(sq.sqrt())
}

/// Two-sided bound on `du/dt`: `[-G(z), G~(z)]`, valid for `z >= z1`.
pub fn du_dt_bounds<T: Real>(k: &PackingConstants<T>, z: T, cusps: CuspCount) -> Result<Bracket<T>> {
    if !(z >= lit::<T>(Z1_LITERAL)) {
        return Err(Error::domain(
            "du_dt_bounds",
            format!("z = {z} below z1; the differential inequalities are invalid there"),
        ));
    }
    Bracket::new(-k.g(z, cusps)?, k.g_tilde(z, cusps)?)
}

/// Tube radius above which `alpha * ell` is increasing in `alpha`:
/// `arcsinh(sqrt((sqrt 2 - 1)/2)) = 0.4407...`, in closed form.
pub fn alpha_ell_monotone_threshold<T: Real>() -> T {
    ((two::<T>().sqrt() - T::one()) / two::<T>()).sqrt().asinh()
}

/// Which drilling criterion applies to a closed geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DrillingCriterion {
    /// Short core and certified tube radius >= 0.531.
    LengthAndTube,
    /// Length <= 0.111; tube radius >= 0.982 is imported from the
    /// short-geodesic tube bound for smooth manifolds.
    ShortGeodesic,
    /// Shortest geodesic of length <= 0.162; tube radius >= log(3)/2 is
    /// imported, unless the geodesic is long (> 0.831), which the length
    /// hypothesis already excludes.
    ShortestGeodesic,
}

/// Outcome of the drilling predicates for one geodesic.
#[derive(Debug, Clone, Serialize)]
pub struct DrillingDecision {
    /// ell <= h_max/(2 pi) and known tube radius >= 0.531
    pub length_and_tube: bool,
    /// ell <= 0.111
    pub short_geodesic: bool,
    /// shortest geodesic with ell <= 0.162
    pub shortest_geodesic: bool,
    pub applies: Option<DrillingCriterion>,
    pub reason: String,
}

/// Decides whether the cone angle along a closed geodesic of length `ell`
/// can be certified to decrease from `2 pi` back to a cusp.
pub fn drilling_predicates<T: Real>(
    k: &PackingConstants<T>,
    ell: T,
    tube_radius: Option<T>,
    shortest: bool,
) -> Result<DrillingDecision> {
    if !(ell > T::zero()) {
        return Err(Error::domain("drilling_predicates", format!("length {ell} must be > 0")));
    }
    let two_pi = lit::<T>(std::f64::consts::TAU);
    let len_cap = k.h_max / two_pi;
    let short_enough = ell <= len_cap;
    let length_and_tube = short_enough
        && tube_radius.map_or(false, |r| r >= lit::<T>(0.531));
    let short_geodesic = ell <= lit::<T>(0.111);
    // log(3)/2 = 0.549... > 0.531, so the imported radius suffices
    let shortest_geodesic = shortest && ell <= lit::<T>(0.162);
    let applies = if length_and_tube {
        Some(DrillingCriterion::LengthAndTube)
    } else if short_geodesic {
        Some(DrillingCriterion::ShortGeodesic)
    } else if shortest_geodesic {
        Some(DrillingCriterion::ShortestGeodesic)
    } else {
        None
    };
    let reason = match applies {
        Some(DrillingCriterion::LengthAndTube) => format!(
            "ell = {ell} <= h_max/(2 pi) = {len_cap} with certified tube radius >= 0.531"
        ),
        Some(DrillingCriterion::ShortGeodesic) => {
            format!("ell = {ell} <= 0.111 implies tube radius >= 0.982")
        }
        Some(DrillingCriterion::ShortestGeodesic) => {
            format!("shortest geodesic with ell = {ell} <= 0.162 implies tube radius >= log(3)/2")
        }
        None => format!("no criterion applies to ell = {ell}"),
    };
    Ok(DrillingDecision {
        length_and_tube,
        short_geodesic,
        shortest_geodesic,
        applies,
        reason,
    })
}
