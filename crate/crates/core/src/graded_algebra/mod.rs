//! Linear algebra, graded series and pair data.

pub mod field;
pub mod homology;
pub mod matrix;
pub mod pair;
pub mod series;
pub mod snf;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use field::{Field, PrimeField, Rationals};
pub use homology::{cohomology_basis, homology_of_complex, CohomologyBasis, Complex, Direction, HomologyGroup};
pub use matrix::{IntegerMatrix, SparseMatrix};
pub use pair::{validate_pair_data, PairData, PairError, PairSpec, Preset, ValidationReport};
pub use series::PoincareSeries;
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("integer overflow during exact elimination")]
    Overflow,
    #[error("cannot multiply {left:?} by {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("malformed complex: {0}")]
    Shape(String),
    #[error("differentials do not compose to zero after degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("vector is not a cocycle")]
    NotACocycle,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
}

/// Coefficient ring for (co)homology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Coefficients {
    #[default]
    Integers,
    Rationals,
    Prime(u64),
}

impl Coefficients {
    pub fn is_integral(self) -> bool {
        self == Coefficients::Integers
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = String;

    /// Accepts `Z`, `Q`, `Fp` or `F_p` (case-insensitive letter), e.g. `F2`.
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        match t {
            "Z" | "z" => return Ok(Coefficients::Integers),
            "Q" | "q" => return Ok(Coefficients::Rationals),
            _ => {}
        }
        let rest = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .map(|r| r.trim_start_matches('_'))
            .ok_or_else(|| format!("unknown coefficient ring {s:?}; use Z, Q or Fp"))?;
        let p: u64 = rest
            .parse()
            .map_err(|_| format!("unknown coefficient ring {s:?}; use Z, Q or Fp"))?;
        PrimeField::new(p).ok_or_else(|| format!("{p} is not a prime below 2^31"))?;
        Ok(Coefficients::Prime(p))
    }
}
