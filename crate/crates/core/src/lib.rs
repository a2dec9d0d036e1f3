//! Exact computations around the Cayley trick for nondegenerate complete
//! intersections: the square exponent matrix `L`, Mellin transforms of fiber
//! integrals as Γ-products, Horn and GKZ systems, lattice-polytope data
//! (volumes, mixed volumes, Ehrhart series), Hodge/weight placement and the
//! transpose mirror construction.
//!
//! All arithmetic is exact (`num-bigint` / `num-rational`).

pub mod cayley;
pub mod error;
pub mod gkz;
pub mod horn;
pub mod io;
pub mod linalg;
pub mod mellin;
pub mod mirror;
pub mod poly;
pub mod polytope;
pub mod report;
pub mod spectra;
pub mod util;

pub use cayley::{
    auto_placement, build_phase, cayley_matrix, check_nondegenerate, AuxPlacement, Balance, CayleyMatrix,
    LaurentSystem, PhaseFunction, Polynomial, VarLabel,
};
pub use error::Error;
pub use linalg::{Int, IntMatrix, Rat, RatMatrix};
pub use mellin::{gamma_equivalent, linear_forms, AffineZ, GammaProduct, IndexSets, LinearForm};
pub use polytope::LatticePolytope;
