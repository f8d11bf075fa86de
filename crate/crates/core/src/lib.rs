//! Exact-arithmetic engine for the homology and cohomology rings of
//! symmetric products of finite two-dimensional CW complexes.
//!
//! A complex is given by a presentation: k circles wedged at a point and
//! r two-cells attached along words in the circles.  From the presentation
//! the crate builds the minimal multiplicative chain complex of the n-th
//! symmetric product, computes integral and mod-p homology by exact sparse
//! linear algebra, and computes cup products through an explicit chain-level
//! coproduct.  All arithmetic is arbitrary precision; nothing is floated.

pub mod cohomring;
pub mod diagonal;
pub mod error;
pub mod exactlinalg;
pub mod homology;
pub mod presentation;
pub mod spchain;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};

/// Coefficient choice for chain-level and homology computations.
///
/// `Mod(m)` reduces integer chains modulo an arbitrary m >= 2; homology and
/// ring computations additionally require m to be prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Integers,
    Rationals,
    Mod(u64),
}

impl Coefficients {
    /// Fails unless the choice is usable as a field (Q or F_p, p prime).
    pub fn require_field(&self) -> Result<()> {
        match self {
            Coefficients::Integers => Err(Error::InvalidParameter(
                "a field is required here: use Q or F_p".into(),
            )),
            Coefficients::Rationals => Ok(()),
            Coefficients::Mod(m) => {
                if is_prime(*m) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("modulus {m} is not prime")))
                }
            }
        }
    }
}

impl std::str::FromStr for Coefficients {
    type Err = Error;

    /// Accepts "Z", "Q" or "F<p>" (also "Fp2"-less forms like "F2", "F13").
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Z" | "z" => Ok(Coefficients::Integers),
            "Q" | "q" => Ok(Coefficients::Rationals),
            _ => {
                let rest = t
                    .strip_prefix('F')
                    .or_else(|| t.strip_prefix('f'))
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown coefficient ring {t:?}; expected Z, Q or F<p>"
                        ))
                    })?;
                let p: u64 = rest.parse().map_err(|_| {
                    Error::InvalidParameter(format!("bad prime in coefficient ring {t:?}"))
                })?;
                if !is_prime(p) {
                    return Err(Error::InvalidParameter(format!("{p} is not prime")));
                }
                Ok(Coefficients::Mod(p))
            }
        }
    }
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::Mod(m) => write!(f, "F{m}"),
        }
    }
}

/// Deterministic trial-division primality test for small moduli.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m % 2 == 0 {
        return m == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
