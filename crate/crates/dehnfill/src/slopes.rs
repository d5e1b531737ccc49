//! Slopes on a cusp torus: normalized lengths, enumeration of all short
//! slopes with a completeness guarantee, the length-intersection
//! inequality, and the prime-projection bound on how many slopes can be
//! exceptional.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// A primitive homology class `p mu + q lambda` on the cusp torus, taken
/// up to sign with the canonical representative `q > 0`, or `q = 0` and
/// `p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::domain("Slope::new", "zero class is not a slope".to_string()));
        }
        if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
            return Err(Error::domain(
                "Slope::new",
                format!("({p}, {q}) is not primitive"),
            ));
        }
        Ok(Slope { p, q }.canonical())
    }

    fn canonical(self) -> Self {
        if self.q < 0 || (self.q == 0 && self.p < 0) {
            Slope { p: -self.p, q: -self.q }
        } else {
            self
        }
    }
}

/// Geometric intersection number of two slopes, `|p1 q2 - p2 q1|`.
pub fn intersection_number(a: Slope, b: Slope) -> u64 {
    (a.p as i128 * b.q as i128 - b.p as i128 * a.q as i128).unsigned_abs() as u64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A Euclidean cusp cross-section, as the lattice spanned by the
/// translations `v1` (meridian) and `v2` (longitude).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CuspShape<T> {
    pub v1: [T; 2],
    pub v2: [T; 2],
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum ShapeJson {
    Basis { v1: [f64; 2], v2: [f64; 2] },
    Tau {
        tau: [f64; 2],
        #[serde(default)]
        scale: Option<f64>,
    },
}

impl<T: Real> CuspShape<T> {
    pub fn new(v1: [T; 2], v2: [T; 2]) -> Result<Self> {
        let shape = CuspShape { v1, v2 };
        let det = shape.det().abs();
        let scale = norm(v1).max(norm(v2));
        if !(det > lit::<T>(1e-12) * scale * scale) {
            return Err(Error::domain(
                "CuspShape::new",
                "basis vectors are (numerically) linearly dependent".to_string(),
            ));
        }
        Ok(shape)
    }

    /// Lattice `scale * (Z + Z tau)` for a modulus `tau` in the upper half
    /// plane.
    pub fn from_tau(tau_re: T, tau_im: T, scale: T) -> Result<Self> {
        if !(tau_im > T::zero()) {
            return Err(Error::domain(
                "CuspShape::from_tau",
                format!("Im(tau) = {tau_im} must be > 0"),
            ));
        }
        if !(scale > T::zero()) {
            return Err(Error::domain(
                "CuspShape::from_tau",
                format!("scale = {scale} must be > 0"),
            ));
        }
        Self::new([scale, T::zero()], [scale * tau_re, scale * tau_im])
    }

    fn det(&self) -> T {
        self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]
    }

    /// Area of the cusp torus.
    pub fn area(&self) -> T {
        self.det().abs()
    }

    fn translation(&self, p: i64, q: i64) -> [T; 2] {
        let p = lit::<T>(p as f64);
        let q = lit::<T>(q as f64);
        [
            p * self.v1[0] + q * self.v2[0],
            p * self.v1[1] + q * self.v2[1],
        ]
    }

    /// Euclidean length of the geodesic representative of `s`.
    pub fn length(&self, s: Slope) -> T {
        norm(self.translation(s.p, s.q))
    }

    /// Normalized length `length / sqrt(area)`, scale invariant.
    pub fn normalized_length(&self, s: Slope) -> T {
        self.length(s) / self.area().sqrt()
    }

    /// Lagrange-reduced copy of the basis together with the coefficient
    /// rows expressing the reduced vectors in the original basis.
    fn reduce(&self) -> ([T; 2], [T; 2], [i64; 2], [i64; 2]) {
        let mut w1 = self.v1;
        let mut w2 = self.v2;
        let mut c1 = [1_i64, 0];
        let mut c2 = [0_i64, 1];
        for _ in 0..64 {
            if norm2(w2) < norm2(w1) {
                std::mem::swap(&mut w1, &mut w2);
                std::mem::swap(&mut c1, &mut c2);
            }
            let mu = (dot(w1, w2) / norm2(w1)).round();
            let m = mu.to_f64().unwrap_or(0.0) as i64;
            if m == 0 {
                break;
            }
            let mt = lit::<T>(m as f64);
            w2 = [w2[0] - mt * w1[0], w2[1] - mt * w1[1]];
            c2 = [c2[0] - m * c1[0], c2[1] - m * c1[1]];
        }
        (w1, w2, c1, c2)
    }

    /// Euclidean length of the shortest nonzero lattice vector.
    pub fn systole(&self) -> T {
        let (w1, _, _, _) = self.reduce();
        norm(w1)
    }

    /// All slopes with normalized length at most `l_max`, in lexicographic
    /// order of `(p, q)`. Complete: enumeration runs over a reduced basis
    /// with dual-norm coefficient boxes that provably contain every lattice
    /// vector of the admissible length.
    pub fn short_slopes(&self, l_max: T) -> Result<Vec<Slope>> {
        if !(l_max > T::zero() && l_max.is_finite()) {
            return Err(Error::domain(
                "short_slopes",
                format!("length bound {l_max} must be positive and finite"),
            ));
        }
        let ell = l_max * self.area().sqrt();
        let (w1, w2, c1, c2) = self.reduce();
        let det = self.area();
        // |a| <= ell |w2| / det, |b| <= ell |w1| / det for any vector
        // a w1 + b w2 of length <= ell (dual basis norms)
        let a_max = (ell * norm(w2) / det).floor().to_f64().unwrap_or(0.0) as i64;
        let b_max = (ell * norm(w1) / det).floor().to_f64().unwrap_or(0.0) as i64;
        let mut out = Vec::new();
        for b in 0..=b_max {
            let a_lo = if b == 0 { 1 } else { -a_max };
            for a in a_lo..=a_max {
                if gcd(a.unsigned_abs(), b.unsigned_abs()) != 1 {
                    continue;
                }
                let at = lit::<T>(a as f64);
                let bt = lit::<T>(b as f64);
                let v = [at * w1[0] + bt * w2[0], at * w1[1] + bt * w2[1]];
                if norm(v) <= ell {
                    let p = a * c1[0] + b * c2[0];
                    let q = a * c1[1] + b * c2[1];
                    out.push(Slope { p, q }.canonical());
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl CuspShape<f64> {
    /// Parses either `{"v1": [x, y], "v2": [x, y]}` or
    /// `{"tau": [re, im], "scale": s}` (scale optional, default 1).
    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: ShapeJson = serde_json::from_str(s).map_err(|e| Error::Domain {
            op: "CuspShape::from_json_str",
            detail: format!("malformed shape JSON: {e}"),
        })?;
        match parsed {
            ShapeJson::Basis { v1, v2 } => CuspShape::new(v1, v2),
            ShapeJson::Tau { tau, scale } => {
                CuspShape::from_tau(tau[0], tau[1], scale.unwrap_or(1.0))
            }
        }
    }
}

fn dot<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

fn norm2<T: Real>(a: [T; 2]) -> T {
    dot(a, a)
}

fn norm<T: Real>(a: [T; 2]) -> T {
    norm2(a).sqrt()
}

/// Smallest prime strictly greater than `n`.
fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    loop {
        if is_prime(c) {
            return c;
        }
        c += 1;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Bound on the number of slopes with pairwise intersection number at most
/// `delta_max`: distinct such slopes stay distinct in `P^1(F_p)` for the
/// least prime `p > delta_max`, so there are at most `p + 1` of them.
pub fn slope_count_bound_from_delta(delta_max: u64) -> u64 {
    next_prime_above(delta_max) + 1
}

/// Bound on the number of exceptional slopes when every exceptional slope
/// has normalized length below `l_star`: pairwise intersection numbers are
/// then below `l_star^2`, and the prime-projection bound applies.
pub fn exceptional_count_bound(l_star: f64) -> Result<u64> {
    if !(l_star > 0.0 && l_star.is_finite()) {
        return Err(Error::domain(
            "exceptional_count_bound",
            format!("threshold {l_star} must be positive and finite"),
        ));
    }
    let l2 = l_star * l_star;
    // strict inequality delta < l_star^2
    let delta_max = (l2.ceil() as u64).saturating_sub(1);
    Ok(slope_count_bound_from_delta(delta_max))
}

/// Draws `n` cusp shapes with modulus in the standard fundamental domain
/// `|Re tau| <= 1/2, |tau| >= 1`, with `Im tau` spread up to a factor of 3
/// above the domain floor. Deterministic in `seed`.
pub fn sample_fundamental_domain(seed: u64, n: usize) -> Vec<CuspShape<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let re: f64 = rng.gen_range(-0.5..=0.5);
        let floor = (1.0 - re * re).max(0.75).sqrt();
        let im = floor * 3.0_f64.powf(rng.gen_range(0.0..1.0));
        let scale = 10.0_f64.powf(rng.gen_range(-1.0..1.0));
        if let Ok(shape) = CuspShape::from_tau(re, im, scale) {
            out.push(shape);
        }
    }
    out
}
