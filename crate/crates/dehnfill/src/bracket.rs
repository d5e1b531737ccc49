use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// An ordered pair of real values with `lo <= hi`, used for every
/// two-sided bound in the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::domain(
                "Bracket::new",
                format!("lo = {lo} exceeds hi = {hi}"),
            ));
        }
        Ok(Bracket { lo, hi })
    }

    /// A degenerate bracket `[v, v]`.
    pub fn point(v: T) -> Self {
        Bracket { lo: v, hi: v }
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Applies a monotone increasing map to both endpoints.
    pub fn map_monotone<U: Real>(&self, f: impl Fn(T) -> U) -> Bracket<U> {
        Bracket {
            lo: f(self.lo),
            hi: f(self.hi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_endpoints() {
        assert!(Bracket::new(1.0, 0.5).is_err());
        let b = Bracket::new(0.5, 1.0).unwrap();
        assert!(b.contains(0.75));
        assert!(!b.contains(1.25));
        assert_eq!(b.width(), 0.5);
    }
}
