//! Boundary-term closed forms on the tube torus: the standard deformation
//! forms in the cylindrical frame, their pairings per unit area, the
//! quadratic in the longitude coefficients (x, y), and the resulting
//! two-sided bound on the core-length derivative.

use num_complex::Complex;
use serde::Serialize;

use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::real::{lit, two, Real};

/// Which standard form a matrix represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormKind {
    /// Changes the cone angle, keeps the meridian elliptic.
    Meridian,
    /// Stretches the singular locus, fixes the meridian holonomy.
    Longitude,
}

/// A standard form evaluated at radius `r`, as a complex 3x3 matrix in the
/// orthonormal cylindrical frame (entries are coefficients of `e_i (x) w_j`).
#[derive(Debug, Clone)]
pub struct StandardFormMatrix<T> {
    pub entries: [[Complex<T>; 3]; 3],
    pub kind: FormKind,
    pub r: T,
}

impl<T: Real> StandardFormMatrix<T> {
    pub fn trace(&self) -> Complex<T> {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    /// Max absolute asymmetry over off-diagonal pairs.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = self.entries[i][j] - self.entries[j][i];
                worst = worst.max(d.re.abs()).max(d.im.abs());
            }
        }
        worst
    }
}

fn check_radius<T: Real>(op: &'static str, r: T) -> Result<()> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain(op, format!("radius {r} must be finite and > 0")));
    }
    Ok(())
}

fn check_alpha<T: Real>(op: &'static str, alpha: T) -> Result<()> {
    let two_pi = lit::<T>(std::f64::consts::TAU);
    if !(alpha > T::zero() && alpha <= two_pi) {
        return Err(Error::domain(op, format!("cone angle {alpha} outside (0, 2*pi]")));
    }
    Ok(())
}

/// Evaluates the standard meridian or longitude form at radius `r`.
pub fn standard_form<T: Real>(kind: FormKind, r: T) -> Result<StandardFormMatrix<T>> {
    check_radius("standard_form", r)?;
    let s = r.sinh();
    let c = r.cosh();
    let zero = Complex::new(T::zero(), T::zero());
    let re = |x: T| Complex::new(x, T::zero());
    let im = |x: T| Complex::new(T::zero(), x);
    let entries = match kind {
        FormKind::Meridian => [
            [re(-T::one() / (c * c * s * s)), zero, zero],
            [zero, re(T::one() / (s * s)), im(-T::one() / (c * s))],
            [zero, im(-T::one() / (c * s)), re(-T::one() / (c * c))],
        ],
        FormKind::Longitude => [
            [re(-T::one() / (c * c)), zero, zero],
            [zero, re(-T::one()), im(-s / c)],
            [zero, im(-s / c), re((c * c + T::one()) / (c * c))],
        ],
    };
    Ok(StandardFormMatrix { entries, kind, r })
}

/// The four boundary pairings of the standard forms at radius `R`,
/// divided by the area of the torus `T_R`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryPairings<T> {
    /// `b_R(eta_m, eta_m)/area`
    pub mm: T,
    /// `b_R(eta_l, eta_l)/area`; also equals `b_R(*D eta_l, *D eta_l)/area`
    pub ll: T,
    /// `b_R(eta_m, eta_l)/area`
    pub ml: T,
    /// `b_R(eta_l, eta_m)/area`
    pub lm: T,
}

pub fn boundary_pairings<T: Real>(r: T) -> Result<BoundaryPairings<T>> {
    check_radius("boundary_pairings", r)?;
    let s = r.sinh();
    let c = r.cosh();
    let inv_s2 = T::one() / (s * s);
    let inv_c2 = T::one() / (c * c);
    Ok(BoundaryPairings {
        mm: (inv_s2 + inv_c2) / (s * c),
        ll: -(s / c) * (two::<T>() + inv_c2),
        ml: -(two::<T>() + inv_c2) / (s * c),
        lm: (s / c) * (inv_s2 + inv_c2),
    })
}

/// Coefficients of the boundary quadratic
/// `b_R(eta_0, eta_0)/area = a (x^2 + y^2) + b x + c`
/// at tube radius `R` with meridian length `m = alpha sinh R`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FluxCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    /// `m = alpha sinh R`
    pub m: T,
}

impl<T: Real> FluxCoefficients<T> {
    /// The (positive) discriminant `b^2 - 4ac = tanh^2(R)/m^4`.
    ///
    /// Note the sign: with `a < 0 < c` the product `4ac` is negative, so
    /// the quantity entering the root formulas for the x-interval is
    /// `b^2 - 4ac`, which equals `tanh^2(R)/m^4`.
    pub fn discriminant(&self) -> T {
        self.b * self.b - lit::<T>(4.0) * self.a * self.c
    }

    /// Evaluates the quadratic at `(x, y)`.
    pub fn eval(&self, x: T, y: T) -> T {
        self.a * (x * x + y * y) + self.b * x + self.c
    }
}

pub fn flux_coefficients<T: Real>(r: T, alpha: T) -> Result<FluxCoefficients<T>> {
    check_radius("flux_coefficients", r)?;
    check_alpha("flux_coefficients", alpha)?;
    let s = r.sinh();
    let c = r.cosh();
    let t = r.tanh();
    let m = alpha * s;
    let m2 = m * m;
    Ok(FluxCoefficients {
        a: -t * (two::<T>() * c * c + T::one()) / (c * c),
        b: t / (two::<T>() * c * c) / m2,
        c: (t + t * t * t) / lit::<T>(16.0) / (m2 * m2),
        m,
    })
}

/// The interval `[x_lo, x_hi]` containing the longitude coefficient `x`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct XInterval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> XInterval<T> {
    pub fn center(&self) -> T {
        (self.lo + self.hi) / two()
    }

    pub fn radius(&self) -> T {
        (self.hi - self.lo) / two()
    }
}

pub fn x_interval<T: Real>(r: T, alpha: T) -> Result<XInterval<T>> {
    check_radius("x_interval", r)?;
    check_alpha("x_interval", alpha)?;
    let c2 = r.cosh() * r.cosh();
    let m = alpha * r.sinh();
    let quarter_m2 = lit::<T>(4.0) * m * m;
    Ok(XInterval {
        lo: -(two::<T>() * c2 - T::one()) / ((two::<T>() * c2 + T::one()) * quarter_m2),
        hi: T::one() / quarter_m2,
    })
}

/// The printed upper bound for `b_R(eta_0, eta_0)/area`:
/// `(1/4m^4) sinh(R)cosh(R)/(2cosh^2(R)+1)`, the completed-square maximum.
pub fn b00_upper<T: Real>(r: T, m: T) -> Result<T> {
    check_radius("b00_upper", r)?;
    if !(m > T::zero()) {
        return Err(Error::domain("b00_upper", format!("meridian length {m} must be > 0")));
    }
    let s = r.sinh();
    let c = r.cosh();
    let m2 = m * m;
    Ok(s * c / ((two::<T>() * c * c + T::one()) * lit::<T>(4.0) * m2 * m2))
}

/// The two closed-form endpoints of `4 alpha^2 x` as functions of the tube
/// radius alone: `[-(1/sinh^2 R)(2sinh^2 R+1)/(2sinh^2 R+3), 1/sinh^2 R]`.
pub fn keybound_factors<T: Real>(r: T) -> Result<(T, T)> {
    check_radius("keybound_factors", r)?;
    let s2 = r.sinh() * r.sinh();
    let hi = T::one() / s2;
    let lo = -(two::<T>() * s2 + T::one()) / ((two::<T>() * s2 + lit::<T>(3.0)) * s2);
    Ok((lo, hi))
}

/// Two-sided bound on `d ell / d alpha = (ell/alpha)(1 + 4 alpha^2 x)`
/// given core length, cone angle, and an embedded tube of radius `R`.
pub fn dl_dalpha_bounds<T: Real>(ell: T, alpha: T, r: T) -> Result<Bracket<T>> {
    if !(ell > T::zero()) {
        return Err(Error::domain("dl_dalpha_bounds", format!("core length {ell} must be > 0")));
    }
    check_alpha("dl_dalpha_bounds", alpha)?;
    let (lo, hi) = keybound_factors(r)?;
    let scale = ell / alpha;
    Bracket::new(scale * (T::one() + lo), scale * (T::one() + hi))
}

/// Derivative of a peripheral curve's complex length under the combined
/// deformation: `d/dt L = L/(2 alpha^2) + 2 Re(L) (x + i y)`, with
/// `t = alpha^2`.
pub fn complex_length_derivative<T: Real>(
    length: Complex<T>,
    alpha: T,
    x: T,
    y: T,
) -> Result<Complex<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::domain(
            "complex_length_derivative",
            format!("cone angle {alpha} must be > 0"),
        ));
    }
    let t2 = two::<T>() * alpha * alpha;
    let scaled = Complex::new(length.re / t2, length.im / t2);
    let re_part = two::<T>() * length.re;
    Ok(scaled + Complex::new(x * re_part, y * re_part))
}

/// Whether `(x, y)` satisfies the disk constraint
/// `(x + b/2a)^2 + y^2 <= (b^2 - 4ac)/(4a^2)` at radius `R` with meridian
/// length `m`.
pub fn xy_admissible<T: Real>(x: T, y: T, r: T, m: T) -> Result<bool> {
    check_radius("xy_admissible", r)?;
    if !(m > T::zero()) {
        return Err(Error::domain("xy_admissible", format!("meridian length {m} must be > 0")));
    }
    // the constraint only depends on (R, m), so build the coefficients
    // directly instead of round-tripping through a cone angle
    let c = r.cosh();
    let t = r.tanh();
    let m2 = m * m;
    let a = -t * (two::<T>() * c * c + T::one()) / (c * c);
    let b = t / (two::<T>() * c * c) / m2;
    let cc = (t + t * t * t) / lit::<T>(16.0) / (m2 * m2);
    let disc = b * b - lit::<T>(4.0) * a * cc;
    let center = -b / (two::<T>() * a);
    let dx = x - center;
    let rad2 = disc / (lit::<T>(4.0) * a * a);
    // points on the boundary circle count as admissible; the relative
    // slack keeps closed-form endpoints inside despite rounding
    Ok(dx * dx + y * y <= rad2 * (T::one() + lit::<T>(1e-12)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn standard_forms_match_printed_entries() {
        let r: f64 = 0.8;
        let wm = standard_form(FormKind::Meridian, r).unwrap();
        let wl = standard_form(FormKind::Longitude, r).unwrap();
        let (s, c) = (r.sinh(), r.cosh());
        assert!((wm.entries[0][0].re + 1.0 / (c * c * s * s)).abs() < 1e-15);
        assert!((wl.entries[2][2].re - (c * c + 1.0) / (c * c)).abs() < 1e-15);
        // symmetry at another radius
        let wm13 = standard_form(FormKind::Meridian, 1.3).unwrap();
        assert_eq!(wm13.entries[1][2], wm13.entries[2][1]);
        assert!(wm13.asymmetry() == 0.0);
    }

    #[test]
    fn standard_forms_traceless() {
        for r in [0.3_f64, 0.8, 1.3, 2.5] {
            for kind in [FormKind::Meridian, FormKind::Longitude] {
                let w = standard_form(kind, r).unwrap();
                let tr = w.trace();
                assert!(tr.re.abs() < 1e-14 && tr.im.abs() < 1e-14, "trace != 0 at r = {r}");
            }
        }
        assert!(standard_form(FormKind::Meridian, 0.0).is_err());
    }

    #[test]
    fn pairing_closed_forms() {
        let r: f64 = 1.0;
        let p = boundary_pairings(r).unwrap();
        assert!((p.ll + r.tanh() * (2.0 + 1.0 / r.cosh().powi(2))).abs() < 1e-15);
        // bml / bll = 1/sinh^2 at R = 0.9
        let p9 = boundary_pairings(0.9_f64).unwrap();
        assert!((p9.ml / p9.ll - 1.0 / 0.9_f64.sinh().powi(2)).abs() < 1e-12);
        // signs on a grid
        for i in 0..48 {
            let r = 0.3 + (5.0 - 0.3) * (i as f64) / 47.0;
            let p = boundary_pairings(r).unwrap();
            assert!(p.mm > 0.0 && p.ll < 0.0);
        }
    }

    #[test]
    fn discriminant_identity() {
        let fc = flux_coefficients(1.0_f64, PI).unwrap();
        let expect = 1.0_f64.tanh().powi(2) / fc.m.powi(4);
        assert!((fc.discriminant() - expect).abs() <= 1e-12 * expect);
        assert!(fc.a < 0.0 && fc.b > 0.0 && fc.c > 0.0);
    }

    #[test]
    fn discriminant_identity_on_grid() {
        for i in 0..20 {
            for j in 0..20 {
                let r = 0.3 + (3.0 - 0.3) * (i as f64) / 19.0;
                let alpha = 2.0 * PI * ((j as f64) + 1.0) / 20.0;
                let fc = flux_coefficients(r, alpha).unwrap();
                let expect = r.tanh().powi(2) / fc.m.powi(4);
                assert!(
                    (fc.discriminant() - expect).abs() <= 1e-12 * expect,
                    "discriminant off at (r, alpha) = ({r}, {alpha})"
                );
            }
        }
    }

    #[test]
    fn c_coefficient_closed_form() {
        let r: f64 = 0.7;
        let fc = flux_coefficients(r, 1.0).unwrap();
        let t = r.tanh();
        assert!((fc.c * fc.m.powi(4) - (t + t.powi(3)) / 16.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_assembles_from_pairings() {
        // coefficients of the quadratic reproduce the pairing assembly:
        // (1/16a^4) bmm - (x/4a^2)(bml + blm) + x^2 bll
        for (r, alpha) in [(0.8_f64, 2.0_f64), (1.2, PI), (2.0, 5.0)] {
            let fc = flux_coefficients(r, alpha).unwrap();
            let p = boundary_pairings(r).unwrap();
            let a4 = alpha.powi(4);
            let c_from_pairings = p.mm / (16.0 * a4);
            assert!((fc.c - c_from_pairings).abs() <= 1e-13 * fc.c.abs());
            let b_from_pairings = -(p.ml + p.lm) / (4.0 * alpha * alpha);
            assert!((fc.b - b_from_pairings).abs() <= 1e-13 * fc.b.abs());
            assert!((fc.a - p.ll).abs() <= 1e-13 * fc.a.abs());
            // and at x = 0 the quadratic value is c
            assert_eq!(fc.eval(0.0, 0.0), fc.c);
        }
    }

    #[test]
    fn x_interval_endpoints() {
        let r: f64 = 1.1;
        let alpha = 2.0;
        let xi = x_interval(r, alpha).unwrap();
        let m2 = (alpha * r.sinh()).powi(2);
        assert!((xi.hi * 4.0 * m2 - 1.0).abs() < 1e-15);
        // sinh-form rewrite agrees with cosh form
        let s2 = r.sinh().powi(2);
        let cosh_form = (2.0 * r.cosh().powi(2) - 1.0) / (2.0 * r.cosh().powi(2) + 1.0);
        let sinh_form = (2.0 * s2 + 1.0) / (2.0 * s2 + 3.0);
        assert!((cosh_form - sinh_form).abs() < 1e-14);
        // at R = arcsinh(1/sqrt 2): 4 a^2 x_lo = -1
        let r0 = (1.0 / 2.0_f64.sqrt()).asinh();
        let xi0 = x_interval(r0, alpha).unwrap();
        assert!((4.0 * alpha * alpha * xi0.lo + 1.0).abs() < 1e-12);
        // ratio -> -1 as R -> infinity
        let xi_far = x_interval(20.0, alpha).unwrap();
        assert!((xi_far.lo / xi_far.hi + 1.0).abs() < 1e-8);
    }

    #[test]
    fn x_interval_matches_quadratic_roots() {
        // radius = sqrt(b^2-4ac)/(2|a|) = (1/2m^2) cosh^2 R/(2cosh^2 R + 1)
        for (r, alpha) in [(0.6_f64, 1.0_f64), (1.0, PI), (1.7, 6.0)] {
            let fc = flux_coefficients(r, alpha).unwrap();
            let xi = x_interval(r, alpha).unwrap();
            let rad = fc.discriminant().sqrt() / (2.0 * fc.a.abs());
            assert!((xi.radius() - rad).abs() <= 1e-12 * rad);
            let c2 = r.cosh().powi(2);
            let printed = c2 / (2.0 * fc.m * fc.m * (2.0 * c2 + 1.0));
            assert!((rad - printed).abs() <= 1e-12 * rad);
            // center = -b/2a
            assert!((xi.center() + fc.b / (2.0 * fc.a)).abs() <= 1e-12 * xi.radius());
        }
    }

    #[test]
    fn b00_matches_completed_square() {
        let (r, m) = (1.2_f64, 0.4_f64);
        let alpha = m / r.sinh();
        let fc = flux_coefficients(r, alpha).unwrap();
        let upper = b00_upper(r, m).unwrap();
        // (4ac - b^2)/(4a) with a < 0 equals the positive printed bound
        let completed = (4.0 * fc.a * fc.c - fc.b * fc.b) / (4.0 * fc.a);
        assert!((upper - completed).abs() <= 1e-12 * upper);
        // homogeneity m^-4
        let doubled = b00_upper(r, 2.0 * m).unwrap();
        assert!((doubled - upper / 16.0).abs() < 1e-15);
        // positive on a grid
        for i in 0..48 {
            let r = 0.3 + (5.0 - 0.3) * (i as f64) / 47.0;
            assert!(b00_upper(r, 0.7).unwrap() > 0.0);
        }
    }

    #[test]
    fn b00_matches_completed_square_on_grid() {
        for i in 0..20 {
            for j in 0..20 {
                let r = 0.3 + (3.0 - 0.3) * (i as f64) / 19.0;
                let alpha = 2.0 * PI * ((j as f64) + 1.0) / 20.0;
                let fc = flux_coefficients(r, alpha).unwrap();
                let upper = b00_upper(r, fc.m).unwrap();
                let completed = (4.0 * fc.a * fc.c - fc.b * fc.b) / (4.0 * fc.a);
                assert!((upper - completed).abs() <= 1e-12 * upper);
            }
        }
    }

    #[test]
    fn dl_dalpha_examples() {
        // lower endpoint zero exactly at R = arcsinh(1/sqrt 2)
        let r0 = (1.0 / 2.0_f64.sqrt()).asinh();
        assert!((r0 - 0.65848).abs() < 1e-5);
        let b = dl_dalpha_bounds(0.1, 1.0, r0).unwrap();
        assert!(b.lo.abs() < 1e-12);
        // wide tube: both endpoints collapse to ell/alpha
        let far = dl_dalpha_bounds(0.1_f64, 1.0, 20.0).unwrap();
        assert!((far.lo - 0.1).abs() < 1e-10 && (far.hi - 0.1).abs() < 1e-10);
        // direct evaluation at (0.05, pi, 1.0)
        let b = dl_dalpha_bounds(0.05, PI, 1.0).unwrap();
        let s2 = 1.0_f64.sinh().powi(2);
        let scale = 0.05 / PI;
        let lo = scale * (1.0 - (2.0 * s2 + 1.0) / ((2.0 * s2 + 3.0) * s2));
        let hi = scale * (1.0 + 1.0 / s2);
        assert!((b.lo - lo).abs() < 1e-15 && (b.hi - hi).abs() < 1e-15);
    }

    #[test]
    fn dl_dalpha_lower_monotone_in_radius() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..60 {
            let r = 0.3 + (4.0 - 0.3) * (i as f64) / 59.0;
            let b = dl_dalpha_bounds(1.0, 1.0, r).unwrap();
            assert!(b.lo > prev, "lower endpoint not increasing at r = {r}");
            prev = b.lo;
        }
    }

    #[test]
    fn complex_length_derivative_cases() {
        let alpha = 1.3_f64;
        // meridian: L = i alpha stays pure imaginary; d/dt = i/(2 alpha)
        let d = complex_length_derivative(Complex::new(0.0, alpha), alpha, 0.7, -0.2).unwrap();
        assert!(d.re.abs() < 1e-15);
        assert!((d.im - 1.0 / (2.0 * alpha)).abs() < 1e-15);
        // real length, x = y = 0: d ell/dt = ell/(2 alpha^2)
        let ell = 0.42;
        let d = complex_length_derivative(Complex::new(ell, 0.0), alpha, 0.0, 0.0).unwrap();
        assert!((d.re - ell / (2.0 * alpha * alpha)).abs() < 1e-15 && d.im.abs() < 1e-15);
        // linearity: L = 0 -> 0
        let d = complex_length_derivative(Complex::new(0.0, 0.0), alpha, 0.3, 0.4).unwrap();
        assert_eq!(d, Complex::new(0.0, 0.0));
        assert!(complex_length_derivative(Complex::new(1.0, 0.0), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn xy_disk_constraint() {
        let (r, m) = (1.0_f64, 0.5_f64);
        let alpha = m / r.sinh();
        let xi = x_interval(r, alpha).unwrap();
        // interval endpoints are admissible with y = 0, outside is not
        assert!(xy_admissible(xi.lo, 0.0, r, m).unwrap());
        assert!(xy_admissible(xi.hi, 0.0, r, m).unwrap());
        assert!(xy_admissible(xi.center(), 0.0, r, m).unwrap());
        assert!(!xy_admissible(xi.hi + 1e-6, 0.0, r, m).unwrap());
        let rad = xi.radius();
        assert!(xy_admissible(xi.center(), 0.99 * rad, r, m).unwrap());
        assert!(!xy_admissible(xi.center(), 1.01 * rad, r, m).unwrap());
    }
}
