//! Self-verification suite: every structural identity and reproduced bound
//! in the crate, re-checked end to end at runtime. Backs the `check`
//! subcommand.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::envelope::{self, EnvelopeSolver};
use crate::scalar::{CuspCount, PackingConstants};
use crate::slopes;
use crate::volume::VolumeSolver;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from(name: &'static str, r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => CheckResult { name, passed: true, detail },
            Err(detail) => CheckResult { name, passed: false, detail },
        }
    }
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Runs every check against the given constants (normally
/// `PackingConstants::compute()`; an inconsistent struct makes the
/// consistency checks fail, which exercises the failure path).
pub fn run_all_checks(k: &PackingConstants<f64>, seed: u64) -> Vec<CheckResult> {
    vec![
        CheckResult::from("constants-consistency", constants_consistency(k)),
        CheckResult::from("hump-inverse-roundtrip", hump_roundtrip(k)),
        CheckResult::from("separation-identities", separation_identities(k)),
        CheckResult::from("boundary-discriminant", boundary_discriminant()),
        CheckResult::from("derivative-bound-interval", derivative_bound_interval()),
        CheckResult::from("packing-area-bound", packing_area(k)),
        CheckResult::from("critical-length", critical_length()),
        CheckResult::from("envelope-at-threshold", envelope_threshold()),
        CheckResult::from("envelope-truncation", envelope_truncation()),
        CheckResult::from("volume-drop-bounds", volume_bounds()),
        CheckResult::from("schlafli-consistency", schlafli_consistency()),
        CheckResult::from("slope-counts", slope_counts(seed)),
    ]
}

fn constants_consistency(k: &PackingConstants<f64>) -> Result<String, String> {
    let x = 1.0 / (2.0 * 2.0_f64.sqrt());
    let s = x / x.asinh();
    if (k.s_ratio - s).abs() > 1e-14 {
        return Err(format!("s_ratio = {} vs {s}", k.s_ratio));
    }
    let c = 2.0 * 3.0_f64.sqrt() / s;
    if (k.c_single - c).abs() > 1e-13 {
        return Err(format!("C = {} vs {c}", k.c_single));
    }
    if (k.c_multi - c / 2.0).abs() > 1e-13 {
        return Err(format!("C_multi = {} vs {}", k.c_multi, c / 2.0));
    }
    let hm = k.h(k.r_at_hmax).map_err(|e| e.to_string())?;
    if (hm - k.h_max).abs() > 1e-14 {
        return Err(format!("h(r*) = {hm} vs h_max = {}", k.h_max));
    }
    if (k.h_max - 1.019675).abs() > 1e-5 {
        return Err(format!("h_max = {}", k.h_max));
    }
    let slope = k.dh_dr(k.r_at_hmax).map_err(|e| e.to_string())?;
    if slope.abs() > 1e-9 {
        return Err(format!("dh/dr at the hump top = {slope}"));
    }
    let z2 = k.z_at_hmax * k.z_at_hmax;
    if (z2 - (5.0_f64.sqrt() - 2.0)).abs() > 1e-13 {
        return Err(format!("z*^2 = {z2} vs sqrt(5) - 2"));
    }
    Ok(format!("C = {:.6}, h_max = {:.7} at r = {:.7}", k.c_single, k.h_max, k.r_at_hmax))
}

fn hump_roundtrip(k: &PackingConstants<f64>) -> Result<String, String> {
    let mut worst = 0.0_f64;
    for i in 0..60 {
        let r = 0.531 + (8.0 - 0.531) * (i as f64) / 59.0;
        let h = k.h(r).map_err(|e| e.to_string())?;
        let back = k.h_inverse(h).map_err(|e| e.to_string())?;
        worst = worst.max((back - r).abs());
    }
    if worst > 1e-8 {
        return Err(format!("worst roundtrip error {worst:.3e}"));
    }
    if k.h_inverse(k.h_max * (1.0 + 1e-9)).is_ok() {
        return Err("inverse accepted a value above the hump".to_string());
    }
    Ok(format!("worst |h^-1(h(r)) - r| = {worst:.3e} over 60 radii"))
}

fn separation_identities(k: &PackingConstants<f64>) -> Result<String, String> {
    let mut worst = 0.0_f64;
    for i in 0..80 {
        let z = 0.45 + (0.999 - 0.45) * (i as f64) / 79.0;
        let h = k.big_h(z, CuspCount::Single).map_err(|e| e.to_string())?;
        let dh = k.dh_dz(z, CuspCount::Single).map_err(|e| e.to_string())?;
        let g = k.g(z, CuspCount::Single).map_err(|e| e.to_string())?;
        let gt = k.g_tilde(z, CuspCount::Single).map_err(|e| e.to_string())?;
        let f = k.f_kernel(z).map_err(|e| e.to_string())?;
        let ft = k.f_tilde(z).map_err(|e| e.to_string())?;
        let lhs1 = dh / (h + g);
        let rhs1 = f + 1.0 / (1.0 - z);
        let lhs2 = dh / (h - gt);
        let rhs2 = ft + 1.0 / (1.0 - z);
        worst = worst.max(((lhs1 - rhs1) / rhs1).abs());
        worst = worst.max(((lhs2 - rhs2) / rhs2).abs());
    }
    if worst > 1e-9 {
        return Err(format!("worst relative defect {worst:.3e}"));
    }
    Ok(format!("both kernel identities hold to {worst:.3e} on 80 points"))
}

fn boundary_discriminant() -> Result<String, String> {
    let mut worst = 0.0_f64;
    for i in 0..20 {
        for j in 0..20 {
            let r = 0.531 + 2.0 * (i as f64) / 19.0;
            let alpha = 0.3 + (TAU - 0.3) * (j as f64) / 19.0;
            let fc = crate::boundary::flux_coefficients(r, alpha).map_err(|e| e.to_string())?;
            let expect = r.tanh().powi(2) / fc.m.powi(4);
            let got = fc.discriminant();
            worst = worst.max(((got - expect) / expect).abs());
        }
    }
    if worst > 1e-12 {
        return Err(format!("worst relative defect {worst:.3e}"));
    }
    Ok(format!("b^2 - 4ac = tanh^2(R)/m^4 to {worst:.3e} on a 20x20 grid"))
}

fn derivative_bound_interval() -> Result<String, String> {
    // the keybound interval must contain 0 exactly down to the monotone
    // threshold radius and the bounds must scale like ell/alpha
    let r_star: f64 = envelope::alpha_ell_monotone_threshold();
    let (lo, _) = crate::boundary::keybound_factors(r_star).map_err(|e| e.to_string())?;
    if (2.0 + lo).abs() > 1e-10 {
        return Err(format!("2 + lo = {} at the threshold radius", 2.0 + lo));
    }
    for r in [0.531_f64, 0.8, 1.5] {
        let b = crate::boundary::dl_dalpha_bounds(0.05, 1.2, r).map_err(|e| e.to_string())?;
        let b2 = crate::boundary::dl_dalpha_bounds(0.10, 1.2, r).map_err(|e| e.to_string())?;
        if !(b.lo < b.hi && b.hi > 0.0) {
            return Err(format!("degenerate interval [{}, {}] at R = {r}", b.lo, b.hi));
        }
        if ((b2.lo / b.lo) - 2.0).abs() > 1e-12 || ((b2.hi / b.hi) - 2.0).abs() > 1e-12 {
            return Err(format!("bounds not homogeneous in ell at R = {r}"));
        }
        // alpha * ell stays monotone: 2 + (4 alpha^2 x)_lo > 0 above r_star
        let (lo, hi) = crate::boundary::keybound_factors(r).map_err(|e| e.to_string())?;
        if !(2.0 + lo > 0.0 && 2.0 + hi > 2.0) {
            return Err(format!("keybound factors ({lo}, {hi}) at R = {r}"));
        }
    }
    Ok(format!("alpha*ell monotone above R = {r_star:.4}"))
}

fn packing_area(k: &PackingConstants<f64>) -> Result<String, String> {
    let mut worst = 0.0_f64;
    for i in 0..40 {
        let r = 0.531 + 3.0 * (i as f64) / 39.0;
        let area = crate::packing::torus_area_lower_bound(k, r, CuspCount::Single)
            .map_err(|e| e.to_string())?;
        let h = k.h(r).map_err(|e| e.to_string())?;
        // area bound and packing function: area = h(R) sinh(R) cosh(R)
        let ratio = area / (r.sinh() * r.cosh() * h);
        worst = worst.max((ratio - 1.0).abs());
    }
    if worst > 1e-11 {
        return Err(format!("area/h tie broken by {worst:.3e}"));
    }
    Ok(format!("area bound ties to h to {worst:.3e} on 40 radii"))
}

fn critical_length() -> Result<String, String> {
    let single =
        envelope::critical_normalized_length::<f64>(CuspCount::Single, 1e-10).map_err(|e| e.to_string())?;
    let multi =
        envelope::critical_normalized_length::<f64>(CuspCount::Multi, 1e-10).map_err(|e| e.to_string())?;
    if (single * single - 56.4696).abs() > 0.05 {
        return Err(format!("threshold^2 = {}", single * single));
    }
    if (multi / single - 2.0_f64.sqrt()).abs() > 1e-12 {
        return Err(format!("multi/single = {}", multi / single));
    }
    Ok(format!("L^2 threshold = {:.4} (single), L = {multi:.4} (multi)", single * single))
}

fn envelope_threshold() -> Result<String, String> {
    let env = EnvelopeSolver::new(7.515, CuspCount::Single).map_err(|e| e.to_string())?;
    let rho = env.tube_radius_lower(TAU).map_err(|e| e.to_string())?;
    if rho < 0.531 {
        return Err(format!("rho_lo(2 pi) = {rho} < 0.531 at L = 7.515"));
    }
    let ell = env.core_length_bracket(TAU).map_err(|e| e.to_string())?;
    if ell.hi > 0.16230 {
        return Err(format!("ell_hi(2 pi) = {} exceeds h_max/(2 pi)", ell.hi));
    }
    Ok(format!("L = 7.515 fills: rho >= {rho:.4}, ell <= {:.5}", ell.hi))
}

fn envelope_truncation() -> Result<String, String> {
    let env = EnvelopeSolver::new(7.40, CuspCount::Single).map_err(|e| e.to_string())?;
    let t_max = env.t_max().map_err(|e| e.to_string())?;
    if t_max >= TAU * TAU {
        return Err(format!("L = 7.40 unexpectedly reaches full filling (t_max = {t_max})"));
    }
    match env.z_envelope(TAU * TAU) {
        Err(crate::error::Error::HumpExceeded { .. }) => {
            Ok(format!("L = 7.40 truncates at t = {t_max:.3} < (2 pi)^2"))
        }
        other => Err(format!("expected truncation, got {other:?}")),
    }
}

fn volume_bounds() -> Result<String, String> {
    let v = VolumeSolver::<f64>::new();
    let dv = v.max_delta_v().map_err(|e| e.to_string())?;
    if (dv - 0.3287).abs() > 1e-3 {
        return Err(format!("max delta V = {dv}"));
    }
    let floor = v.min_filled_volume().map_err(|e| e.to_string())?;
    if (floor - 1.7012).abs() > 2e-3 {
        return Err(format!("volume floor = {floor}"));
    }
    let b = v.delta_v_bounds(1e-4).map_err(|e| e.to_string())?;
    let nz = crate::volume::short_core_asymptote(1e-4);
    if (b.lo / nz - 1.0).abs() > 0.02 || (b.hi / nz - 1.0).abs() > 0.02 {
        return Err(format!("short-core asymptote off: [{}, {}] vs {nz}", b.lo, b.hi));
    }
    Ok(format!("max drop {dv:.4}, volume floor {floor:.4}"))
}

fn schlafli_consistency() -> Result<String, String> {
    let env = EnvelopeSolver::new(8.0, CuspCount::Single).map_err(|e| e.to_string())?;
    let v = VolumeSolver::<f64>::new();
    let n = 400;
    let a0 = TAU * 1e-3;
    let mut total = 0.0;
    let mut prev_a = a0;
    let mut prev_ell = env.core_length_bracket(a0).map_err(|e| e.to_string())?.hi;
    for i in 1..=n {
        let a = a0 + (TAU - a0) * (i as f64) / (n as f64);
        let ell = env.core_length_bracket(a).map_err(|e| e.to_string())?.hi;
        total += 0.25 * (prev_ell + ell) * (a - prev_a);
        prev_a = a;
        prev_ell = ell;
    }
    total += a0 * a0 / (4.0 * 64.0);
    let z_lo = env.z_envelope(TAU * TAU).map_err(|e| e.to_string())?.lo;
    let kernel = v.dv_lower_integral(z_lo).map_err(|e| e.to_string())?;
    let rel = (total / kernel - 1.0).abs();
    if rel > 1e-2 {
        return Err(format!("Schlafli {total} vs kernel {kernel} (rel {rel:.3e})"));
    }
    Ok(format!("Schlafli integral matches kernel integral to {rel:.3e}"))
}

fn slope_counts(seed: u64) -> Result<String, String> {
    let single = slopes::exceptional_count_bound(7.5146).map_err(|e| e.to_string())?;
    let multi = slopes::exceptional_count_bound(10.6273).map_err(|e| e.to_string())?;
    if single != 60 || multi != 114 {
        return Err(format!("count bounds ({single}, {multi}) != (60, 114)"));
    }
    let mut worst_s = 0;
    let mut worst_m = 0;
    for shape in slopes::sample_fundamental_domain(seed, 100) {
        let s = shape.short_slopes(7.5146).map_err(|e| e.to_string())?.len() as u64;
        let m = shape.short_slopes(10.6273).map_err(|e| e.to_string())?.len() as u64;
        if s > 60 || m > 114 {
            return Err(format!("shape {shape:?} has counts ({s}, {m})"));
        }
        worst_s = worst_s.max(s);
        worst_m = worst_m.max(m);
    }
    Ok(format!(
        "bounds (60, 114); worst observed counts ({worst_s}, {worst_m}) over 100 shapes"
    ))
}
