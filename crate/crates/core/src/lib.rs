//! Exact-arithmetic invariants of Newton diagrams.
//!
//! Given the support of a power series `f` in `n+1` variables, this crate
//! computes the combinatorial invariants attached to its Newton diagram:
//!
//! * the group `KN` of (virtual) Newton polygons, with heights, lengths,
//!   degrees, truncations and virtual vertex chains ([`kn`]);
//! * the face structure of the Newton polyhedron and of all coordinate
//!   sub-polyhedra: coordinate facets, primitive normals, the weights
//!   `m`, `n`, maximal axial numbers, the subdiagrams `s_α`, and both the
//!   unsigned Newton number and the signed Milnor-number sum ([`diagram`]);
//! * the alternating Jacobian polygons `AJ⁽ᵈ⁺¹⁾`, the Jacobian polygons
//!   `J⁽ᵈ⁺¹⁾` and the Łojasiewicz exponent, evaluated through lattice
//!   volumes and generalized mixed volumes of diagram faces ([`jacobian`]);
//! * triangulations of the diagram, lattice point counts `Cap`, relative
//!   combinatorial Newton polyhedra, and report generators for the BKO
//!   conjecture and its triangulation-based refinement ([`tri`]).
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. Inputs are assumed (never verified) to be
//! Newton nondegenerate with an isolated singularity; all results are
//! functions of the diagram alone.

pub mod diagram;
pub mod geom;
pub mod jacobian;
pub mod kn;
pub mod tri;

pub use diagram::{Face, NewtonDiagram, SupportSet, WeightVector};
pub use jacobian::{LevelPolygonSet, LojResult};
pub use kn::{ExtInt, ExtNat, KNElement, Slope};
pub use tri::Triangulation;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision integer used for all lattice data.
pub type Int = BigInt;
/// Arbitrary-precision rational used for all derived quantities.
pub type Rat = BigRational;

/// Convenience constructor for an `Int`.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Convenience constructor for a `Rat` from a ratio of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Errors reported by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid generator pair ({0}, {1})")]
    InvalidGenerator(String, String),
    #[error("leading coefficient of the zero element is undefined")]
    LeadingCoeffOfZero,
    #[error("element has infinite height or length")]
    InfiniteExtent,
    #[error("negative coefficient {0} on slope {1}; not a polygon")]
    NegativeCoefficient(String, String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("mixed volume multiplicities sum to {0}, expected {1}")]
    BadMultiplicities(usize, usize),
    #[error("empty support")]
    EmptySupport,
    #[error("support point {0} is invalid: {1}")]
    BadSupportPoint(String, String),
    #[error("weight vector {0} is invalid: {1}")]
    BadWeightVector(String, String),
    #[error("weight of f is infinite for this vector")]
    InfiniteWeight,
    #[error("diagram has no coordinate facet")]
    NoCoordinateFacet,
    #[error("diagram is not convenient; the signed Newton number requires a point on every axis")]
    NotConvenient,
    #[error("level {0} out of range 0..={1}")]
    LevelOutOfRange(usize, usize),
    #[error("triangulation is invalid: {0}")]
    BadTriangulation(String),
    #[error("cell is not part of the triangulation")]
    UnknownCell,
    #[error("face of dimension {0} is not a facet (expected dimension {1})")]
    NotAFacet(usize, usize),
}

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod thread_safety {
    use super::*;

    // Everything is immutable value data; instances can be shared and
    // sent between threads freely.
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<KNElement<Int>>();
        assert_send_sync::<KNElement<Rat>>();
        assert_send_sync::<Slope>();
        assert_send_sync::<ExtNat>();
        assert_send_sync::<SupportSet>();
        assert_send_sync::<WeightVector>();
        assert_send_sync::<Face>();
        assert_send_sync::<NewtonDiagram>();
        assert_send_sync::<Triangulation>();
        assert_send_sync::<LojResult>();
        assert_send_sync::<LevelPolygonSet>();
        assert_send_sync::<geom::RationalPolytope>();
        assert_send_sync::<geom::AffineLatticeFrame>();
    }
}
