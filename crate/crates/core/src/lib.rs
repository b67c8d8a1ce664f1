//! Exact cohomology of polyhedral products `Z(K; (X, A))` and polyhedral
//! smash products `Ẑ(K; (X, A))` from simplicial and cohomological data.
//!
//! The crate offers several independent routes to the same groups: the
//! algebraic decomposition indexed by pairs `(I, σ)`, a filtered cochain
//! model with its spectral sequence, the small cochain complex `C_K` for
//! the real moment-angle complex and a cubical cellular oracle.

pub mod cube_oracle;
pub mod decomposition;
pub mod graded_algebra;
pub mod realmac_chain;
pub mod simplicial;
pub mod spectral;

pub use graded_algebra::{Coefficients, PairData, PairSpec, PoincareSeries, Preset};
pub use simplicial::{Simplex, SimplicialComplex, VertexSet};

/// Which space a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// The polyhedral product `Z(K; (X, A))`, unreduced cohomology.
    Product,
    /// The polyhedral smash product `Ẑ(K; (X, A))`, reduced cohomology.
    #[default]
    Smash,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "z" | "Z" | "product" => Ok(Variant::Product),
            "hat" | "zhat" | "smash" => Ok(Variant::Smash),
            _ => Err(format!("unknown variant {s:?}; use z or hat")),
        }
    }
}
