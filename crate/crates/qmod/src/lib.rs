//! Exact-arithmetic toolkit for totally indefinite rational quaternion
//! algebras and their orders: Hilbert symbols and ramification,
//! discriminants, maximal and Eichler orders, distance ideals and the
//! tree metric behind them, Atkin-Lehner and stable groups, and the
//! Galois bounds they impose on fields of moduli of quaternionic
//! multiplication.
//!
//! Everything is computed over Z and Q with no floating point anywhere;
//! searches are bounded, deterministic, and report `Inconclusive` rather
//! than guessing. Start from [`algebra::QuaternionAlgebra`], saturate the
//! standard order with [`order::saturate_to_maximal`], and feed the
//! result to the [`moduli`] and [`report`] layers. The `examples/`
//! directory walks through each capability; the thin `qmod` binary
//! exposes the same operations on the command line.

pub mod algebra;
pub mod arith;
pub mod cache;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod moduli;
pub mod order;
pub mod quad;
pub mod report;
pub mod tree;
pub mod util;

pub use algebra::{
    algebra_of_discriminant, hilbert_symbol, ramified_places, twisting_classification, Place,
    Quaternion, QuaternionAlgebra, TwistClassification,
};
pub use arith::{factor, kronecker, sqrt_mod, valuation, Factorization};
pub use error::{Error, Result};
pub use lattice::QuatLattice;
pub use moduli::{
    atkin_lehner_group, find_polarization, find_twists, narrow_picard_quotient, stable_group,
    u0_structure, AtkinLehnerGroup, PolarizedOrder, StableGroup, TwistReport,
};
pub use order::{
    check_basis_divisibility, distance_ideal, enumerate_sqrt, find_anticommuting_basis, intersect,
    is_order, reduced_discriminant_of, saturate_to_maximal, standard_order, DistanceIdeal,
    QuatOrder, SearchOutcome,
};
pub use quad::{make_field, roots_of_unity, u0_generators, QuadField, QuadOrder, RootsOfUnity};
pub use report::{moduli_bound_report, BoundReport, SearchBounds};
pub use tree::{endomorphism_order, tree_distance, vertex_of, PlaneLattice, TreeVertex};
