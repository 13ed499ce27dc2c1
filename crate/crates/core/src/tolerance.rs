//! Numerical thresholds shared by the verification drivers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the rank threshold.
pub const TOL_ENV: &str = "HRLAB_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative cut for singular values and eigenvalue signs.
    pub rank: f64,
    /// Bound on the relative `Q`-orthogonality residual.
    pub orthogonality: f64,
    /// Allowed negative slack in the local-estimate certificate.
    pub certificate: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank: 1e-10,
            orthogonality: 1e-9,
            certificate: 1e-10,
        }
    }
}

impl Tolerance {
    /// Defaults with the rank threshold replaced by `rank`.
    pub fn with_rank(rank: f64) -> Result<Self> {
        if !(rank.is_finite() && rank > 0.0 && rank < 1.0) {
            return Err(Error::Range(format!("tolerance {rank} must lie in (0, 1)")));
        }
        Ok(Tolerance {
            rank,
            ..Self::default()
        })
    }

    /// Defaults, with `HRLAB_TOL` applied when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(s) => {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{TOL_ENV}={s:?} is not a number")))?;
                Self::with_rank(v)
            }
            Err(_) => Ok(Self::default()),
        }
    }
}
