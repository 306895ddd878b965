use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PAIR_TOLERANCE: f64 = 1e-12;

/// Space-time exponents `(r, s)` with `r ∈ (3, ∞]`, `s ∈ [2, ∞)` and
/// `3/r + 2/s = 1`. `r = ∞` is stored as `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct ProdiSerrinPair {
    r: f64,
    s: f64,
}

impl ProdiSerrinPair {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        let fail = |constraint: &str| Error::PairConstraint {
            r,
            s,
            constraint: constraint.to_string(),
        };
        if r.is_nan() || s.is_nan() {
            return Err(fail("exponents must be numbers"));
        }
        if r <= 3.0 {
            return Err(fail("r must exceed 3 (r ∈ (3, ∞])"));
        }
        if !(2.0..f64::INFINITY).contains(&s) {
            return Err(fail("s must lie in [2, ∞)"));
        }
        let sum = 3.0 / r + 2.0 / s;
        if (sum - 1.0).abs() > PAIR_TOLERANCE {
            return Err(fail(&format!("3/r + 2/s must equal 1, got {sum}")));
        }
        Ok(ProdiSerrinPair { r, s })
    }

    /// The pair on the Prodi-Serrin curve with time exponent `s`:
    /// `r = 3s/(s-2)`, or `r = ∞` at `s = 2`.
    pub fn from_s(s: f64) -> Result<Self> {
        let r = if s == 2.0 { f64::INFINITY } else { 3.0 * s / (s - 2.0) };
        Self::new(r, s)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `3/r + 2/s - 1`.
    pub fn defect(&self) -> f64 {
        3.0 / self.r + 2.0 / self.s - 1.0
    }

    /// `(r_ε, s_ε)` with `s_ε = s + ε(4 - s)`.
    pub fn shifted(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::arg("eps", format!("must lie in (0, 1), got {eps}")));
        }
        Self::from_s(self.s + eps * (4.0 - self.s))
    }
}

#[derive(Deserialize)]
struct RawPair {
    r: f64,
    s: f64,
}

impl TryFrom<RawPair> for ProdiSerrinPair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        ProdiSerrinPair::new(raw.r, raw.s)
    }
}

impl std::fmt::Display for ProdiSerrinPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(r = {}, s = {})", self.r, self.s)
    }
}
