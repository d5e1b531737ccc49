//! Tube packing geometry: distances in cylindrical coordinates around a
//! geodesic, projections of balls onto the tube, the inscribed ellipse,
//! and the resulting lower bound on the area of the tube boundary torus.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{lit, two, Real};
use crate::scalar::{CuspCount, PackingConstants};

/// A point in cylindrical coordinates `(r, theta, zeta)` around a geodesic
/// in the universal-cover cylinder: `theta` is a real number, not taken
/// modulo the cone angle. Metric: `dr^2 + sinh^2 r dtheta^2 + cosh^2 r dzeta^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylPoint<T> {
    pub r: T,
    pub theta: T,
    pub zeta: T,
}

impl<T: Real> CylPoint<T> {
    pub fn new(r: T, theta: T, zeta: T) -> Result<Self> {
        if !(r >= T::zero()) {
            return Err(Error::domain("CylPoint::new", format!("r = {r} must be >= 0")));
        }
        Ok(CylPoint { r, theta, zeta })
    }
}

/// Reduces an angle into `(-period/2, period/2]`, for picking the
/// representative of a lattice translate closest to a base point.
pub fn wrap_angle<T: Real>(theta: T, period: T) -> T {
    let half = period / two();
    let mut t = theta % period;
    if t > half {
        t = t - period;
    }
    if t <= -half {
        t = t + period;
    }
    t
}

/// Hyperbolic distance between two points in cylindrical coordinates,
/// valid for `|theta_1 - theta_2| <= pi`:
/// `cosh d = cosh(dz) cosh r1 cosh r2 - cos(dtheta) sinh r1 sinh r2`.
pub fn cyl_distance<T: Real>(p1: CylPoint<T>, p2: CylPoint<T>) -> Result<T> {
    let dtheta = (p1.theta - p2.theta).abs();
    if dtheta > lit::<T>(std::f64::consts::PI) {
        return Err(Error::domain(
            "cyl_distance",
            format!("|dtheta| = {dtheta} exceeds pi; formula invalid"),
        ));
    }
    let dz = p1.zeta - p2.zeta;
    let cosh_d = dz.cosh() * p1.r.cosh() * p2.r.cosh() - dtheta.cos() * p1.r.sinh() * p2.r.sinh();
    // rounding can push cosh d a hair below 1 for coincident points
    Ok(cosh_d.max(T::one()).acosh())
}

/// Whether `(theta, zeta)` lies in the projection onto the tube boundary
/// of the ball of radius `d` centered at `(r0, 0, 0)`, per
/// `sinh^2(zeta) cosh^2(r0) + sin^2(theta) sinh^2(r0) <= sinh^2(d)`.
pub fn ball_projection_contains<T: Real>(r0: T, d: T, theta: T, zeta: T) -> Result<bool> {
    if !(d > T::zero() && d < r0) {
        return Err(Error::domain(
            "ball_projection_contains",
            format!("need 0 < d < r0, got d = {d}, r0 = {r0}"),
        ));
    }
    let lhs = zeta.sinh().powi(2) * r0.cosh().powi(2) + theta.sin().powi(2) * r0.sinh().powi(2);
    Ok(lhs <= d.sinh().powi(2))
}

/// Semi-axes of the ellipse inscribed in the projected ball, in the flat
/// coordinates `(zeta cosh R, theta sinh R)` on the torus at radius `R`:
/// `a = cosh R sinh R/(S cosh 2R)`, `b = sinh^2 R / sinh 2R = tanh(R)/2`.
pub fn inscribed_ellipse_axes<T: Real>(k: &PackingConstants<T>, r: T) -> Result<(T, T)> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain("inscribed_ellipse_axes", format!("R = {r} must be > 0")));
    }
    let s = r.sinh();
    let c = r.cosh();
    let a = c * s / (k.s_ratio * (two::<T>() * r).cosh());
    let b = s * s / (two::<T>() * r).sinh();
    Ok((a, b))
}

/// Lower bound on the area of the tube boundary torus:
/// `C sinh^2 R / cosh 2R`, with `C` halved for the extra cusps of a
/// multi-cusp manifold.
pub fn torus_area_lower_bound<T: Real>(
    k: &PackingConstants<T>,
    r: T,
    cusps: CuspCount,
) -> Result<T> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain("torus_area_lower_bound", format!("R = {r} must be > 0")));
    }
    let s = r.sinh();
    Ok(k.c(cusps) * s * s / (two::<T>() * r).cosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::constants;
    use std::f64::consts::PI;

    #[test]
    fn distance_identity_and_axis_cases() {
        let p = CylPoint::new(1.2_f64, 0.3, -0.7).unwrap();
        assert!(cyl_distance(p, p).unwrap().abs() < 1e-7);
        let a = CylPoint::new(0.0_f64, 0.0, 1.0).unwrap();
        let b = CylPoint::new(0.0, 0.0, -2.5).unwrap();
        assert!((cyl_distance(a, b).unwrap() - 3.5).abs() < 1e-12);
        // documented quarter-turn case: cosh d = cosh^2(1)
        let p1 = CylPoint::new(1.0, 0.0, 0.0).unwrap();
        let p2 = CylPoint::new(1.0, PI / 2.0, 0.0).unwrap();
        let d = cyl_distance(p1, p2).unwrap();
        assert!((d.cosh() - 1.0_f64.cosh().powi(2)).abs() < 1e-12);
        // domain error past pi
        let p3 = CylPoint::new(1.0, 3.5, 0.0).unwrap();
        assert!(cyl_distance(p1, p3).is_err());
    }

    #[test]
    fn triangle_inequality_sampled() {
        // deterministic pseudo-random triples with |dtheta| <= pi pairwise
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..300 {
            let pt = |u: f64, v: f64, w: f64| {
                CylPoint::new(2.0 * u, PI * (v - 0.5), 3.0 * (w - 0.5)).unwrap()
            };
            let a = pt(next(), next(), next());
            let b = pt(next(), next(), next());
            let c = pt(next(), next(), next());
            let dab = cyl_distance(a, b).unwrap();
            let dbc = cyl_distance(b, c).unwrap();
            let dac = cyl_distance(a, c).unwrap();
            assert!(dac <= dab + dbc + 1e-9);
        }
    }

    #[test]
    fn projection_membership() {
        // center always inside
        assert!(ball_projection_contains(1.0, 0.5, 0.0, 0.0).unwrap());
        // boundary in zeta: sinh z = sinh d / cosh r0
        let (r0, d) = (1.4_f64, 0.6_f64);
        let z_edge = (d.sinh() / r0.cosh()).asinh();
        assert!(ball_projection_contains(r0, d, 0.0, z_edge * (1.0 - 1e-9)).unwrap());
        assert!(!ball_projection_contains(r0, d, 0.0, z_edge * (1.0 + 1e-9)).unwrap());
        // hypothesis d < r0 enforced
        assert!(ball_projection_contains(0.5, 0.6, 0.0, 0.0).is_err());
    }

    #[test]
    fn projection_agrees_with_distance_minimization() {
        // membership iff exists r with cyl_distance((r, theta, zeta), (2R, 0, 0)) <= R
        let big_r = 0.6_f64;
        let center = CylPoint::new(2.0 * big_r, 0.0, 0.0).unwrap();
        let dist_to_tube = |theta: f64, zeta: f64| {
            let mut best = f64::INFINITY;
            for i in 0..=4000 {
                let r = 3.0 * (i as f64) / 4000.0;
                let p = CylPoint::new(r, theta, zeta).unwrap();
                best = best.min(cyl_distance(p, center).unwrap());
            }
            best
        };
        for (theta, zeta) in [
            (0.0, 0.1),
            (0.2, 0.0),
            (0.3, 0.2),
            (0.05, 0.25),
            (0.6, 0.0),
            (0.0, 0.4),
        ] {
            let inside = ball_projection_contains(2.0 * big_r, big_r, theta, zeta).unwrap();
            let d = dist_to_tube(theta, zeta);
            if (d - big_r).abs() > 1e-3 {
                assert_eq!(inside, d <= big_r, "disagreement at ({theta}, {zeta}): d = {d}");
            }
        }
    }

    #[test]
    fn ellipse_axes_values() {
        let k = constants();
        // sinh R = 1/sqrt(2)
        let r = (1.0 / 2.0_f64.sqrt()).asinh();
        let (a, b) = inscribed_ellipse_axes(k, r).unwrap();
        assert!((a - 0.4245).abs() < 1e-4);
        assert!((b - 0.2887).abs() < 1e-4);
        // b = tanh(R)/2 identity
        let (_, b15) = inscribed_ellipse_axes(k, 1.5).unwrap();
        assert!((b15 - 1.5_f64.tanh() / 2.0).abs() < 1e-14);
        assert!(inscribed_ellipse_axes(k, 0.0).is_err());
    }

    #[test]
    fn ellipse_contained_in_projected_ball() {
        let k = constants();
        for big_r in [0.55_f64, 0.8, 1.2] {
            let (a, b) = inscribed_ellipse_axes(k, big_r).unwrap();
            for i in 0..64 {
                let phi = 2.0 * PI * (i as f64) / 64.0;
                // flat coordinates -> cylindrical angles
                let zeta = a * phi.cos() / big_r.cosh();
                let theta = b * phi.sin() / big_r.sinh();
                assert!(
                    ball_projection_contains(2.0 * big_r, big_r, theta, zeta).unwrap(),
                    "ellipse boundary point escapes projection at R = {big_r}, phi = {phi}"
                );
            }
        }
    }

    #[test]
    fn area_bound_ties_to_h() {
        let k = constants();
        let r = 0.9_f64;
        let area = torus_area_lower_bound(k, r, CuspCount::Single).unwrap();
        assert!((area / (r.sinh() * r.cosh()) - k.h(r).unwrap()).abs() < 1e-12);
        // pointwise over a grid
        for i in 1..50 {
            let r = 0.2 + 3.0 * (i as f64) / 49.0;
            let area = torus_area_lower_bound(k, r, CuspCount::Single).unwrap();
            assert!((area / (r.sinh() * r.cosh()) - k.h(r).unwrap()).abs() < 1e-12);
        }
        // multi flag halves
        let half = torus_area_lower_bound(k, r, CuspCount::Multi).unwrap();
        assert!((half - area / 2.0).abs() < 1e-15);
    }

    #[test]
    fn area_bound_reproduced_from_ellipse_packing() {
        // C sinh^2 R / cosh 2R = (2 sqrt 3 / pi) * 2 * (pi a b), two ellipses
        // at circle-packing density pi/(2 sqrt 3)
        let k = constants();
        let r = 1.0_f64;
        let (a, b) = inscribed_ellipse_axes(k, r).unwrap();
        let from_packing = (2.0 * 3.0_f64.sqrt() / PI) * 2.0 * (PI * a * b);
        let direct = torus_area_lower_bound(k, r, CuspCount::Single).unwrap();
        assert!((from_packing - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn sinh_zeta_bound_universal() {
        // sup over R of sinh R / cosh 2R is 1/(2 sqrt 2)
        let mut max = 0.0_f64;
        for i in 1..20000 {
            let r = 5.0 * (i as f64) / 19999.0;
            max = max.max(r.sinh() / (2.0 * r).cosh());
        }
        assert!(max <= 1.0 / (2.0 * 2.0_f64.sqrt()) + 1e-12);
        // and the max is actually attained near sinh R = 1/sqrt 2
        assert!(max > 1.0 / (2.0 * 2.0_f64.sqrt()) - 1e-6);
    }

    #[test]
    fn angle_wrapping() {
        assert!((wrap_angle(3.5_f64, 2.0) - (-0.5)).abs() < 1e-15);
        assert!((wrap_angle(-3.5_f64, 2.0) - 0.5).abs() < 1e-15);
        assert_eq!(wrap_angle(1.0, 2.0), 1.0);
    }
}
