//! Randomized invariants over the public API.

use proptest::prelude::*;

use dehnfill::envelope::EnvelopeSolver;
use dehnfill::packing::{cyl_distance, wrap_angle, CylPoint};
use dehnfill::scalar::{constants, CuspCount};
use dehnfill::slopes::{self, CuspShape, Slope};
use dehnfill::volume::VolumeSolver;
use dehnfill::Bracket;

proptest! {
    #[test]
    fn h_inverse_round_trips(r in 0.531_f64..8.0) {
        let k = constants();
        let h = k.h(r).unwrap();
        let back = k.h_inverse(h).unwrap();
        prop_assert!((back - r).abs() < 1e-9 * r.max(1.0));
    }

    #[test]
    fn separation_kernel_identity(z in 0.05_f64..0.999) {
        let k = constants();
        let c = CuspCount::Single;
        let lhs = k.dh_dz(z, c).unwrap() / (k.big_h(z, c).unwrap() + k.g(z, c).unwrap());
        let rhs = k.f_kernel(z).unwrap() + 1.0 / (1.0 - z);
        prop_assert!((lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn bracket_map_monotone_preserves_order(
        lo in -100.0_f64..100.0,
        w in 0.0_f64..50.0,
    ) {
        let b = Bracket::new(lo, lo + w).unwrap();
        let mid = (b.lo + b.hi) / 2.0;
        let m = b.map_monotone(|x| x.exp());
        prop_assert!(m.lo <= m.hi);
        prop_assert!(m.contains(mid.exp()));
    }

    #[test]
    fn cyl_distance_is_symmetric(
        r1 in 0.01_f64..2.0,
        r2 in 0.01_f64..2.0,
        th in -3.0_f64..3.0,
        ze in -2.0_f64..2.0,
    ) {
        let a = CylPoint::new(r1, 0.0, 0.0).unwrap();
        let b = CylPoint::new(r2, th, ze).unwrap();
        let d1 = cyl_distance(a, b).unwrap();
        let d2 = cyl_distance(b, a).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-12 * d1.max(1.0));
        prop_assert!(d1 >= 0.0);
    }

    #[test]
    fn wrapped_angle_stays_in_range(
        th in -50.0_f64..50.0,
        period in 0.5_f64..10.0,
    ) {
        let w = wrap_angle(th, period);
        prop_assert!(w.abs() <= period / 2.0 + 1e-12);
        let turns = (th - w) / period;
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn envelope_brackets_are_ordered(
        lhat in 7.6_f64..20.0,
        frac in 0.01_f64..1.0,
    ) {
        let solver = EnvelopeSolver::new(lhat, CuspCount::Single).unwrap();
        let t = frac * solver.t_max().unwrap();
        let z = solver.z_envelope(t).unwrap();
        prop_assert!(0.0 < z.lo && z.lo <= z.hi && z.hi < 1.0);
        let ell = solver.core_length_bracket(t.sqrt()).unwrap();
        prop_assert!(0.0 < ell.lo && ell.lo <= ell.hi);
    }

    #[test]
    fn volume_drop_bounds_are_ordered_and_monotone(
        ell in 1e-4_f64..0.162,
        step in 1.0001_f64..1.2,
    ) {
        let vol = VolumeSolver::<f64>::new();
        let a = vol.delta_v_bounds(ell).unwrap();
        prop_assert!(0.0 < a.lo && a.lo <= a.hi);
        let ell2 = (ell * step).min(0.1622);
        let b = vol.delta_v_bounds(ell2).unwrap();
        prop_assert!(b.hi >= a.hi - 1e-12);
    }

    #[test]
    fn slope_canonical_form_is_stable(p in -40_i64..40, q in -40_i64..40) {
        prop_assume!((p, q) != (0, 0));
        let g = {
            fn gcd(a: u64, b: u64) -> u64 { if b == 0 { a } else { gcd(b, a % b) } }
            gcd(p.unsigned_abs(), q.unsigned_abs()) as i64
        };
        let s = Slope::new(p / g, q / g).unwrap();
        prop_assert!(s.q > 0 || (s.q == 0 && s.p > 0));
        let t = Slope::new(-p / g, -q / g).unwrap();
        prop_assert_eq!(s, t);
        prop_assert_eq!(slopes::intersection_number(s, t), 0);
    }

    #[test]
    fn enumeration_is_scale_invariant(
        re in -0.5_f64..0.5,
        im in 0.87_f64..2.5,
        scale in 0.2_f64..5.0,
        l_max in 1.0_f64..8.0,
    ) {
        let a = CuspShape::from_tau(re, im, 1.0).unwrap();
        let b = CuspShape::from_tau(re, im, scale).unwrap();
        prop_assert_eq!(a.short_slopes(l_max).unwrap(), b.short_slopes(l_max).unwrap());
    }

    #[test]
    fn length_times_length_dominates_intersection(
        re in -0.5_f64..0.5,
        im in 0.87_f64..3.0,
    ) {
        let shape = CuspShape::from_tau(re, im, 1.0).unwrap();
        let found = shape.short_slopes(6.0).unwrap();
        for (i, &a) in found.iter().enumerate() {
            for &b in &found[i + 1..] {
                let delta = slopes::intersection_number(a, b) as f64;
                let prod = shape.normalized_length(a) * shape.normalized_length(b);
                prop_assert!(prod >= delta - 1e-9);
            }
        }
    }
}
