//! Exact weighted asymmetric tropical Fermat-Weber sets.
//!
//! Points live in the tropical projective torus `R^n / R·1`, stored by their
//! zero-sum representative with exact rational coordinates. The crate
//! computes the Fermat-Weber set of weighted data as a covector cell, solves
//! the inverse problem of finding weights for a prescribed cell, and builds
//! consensus trees from equidistant phylogenetic trees.

mod bounds;
pub mod covector;
pub mod error;
pub mod fermat_weber;
pub mod inverse;
pub mod lp;
pub mod phylo;
pub mod point;
pub mod random;
pub mod rational;
pub mod signomial;
pub mod transport;

pub use covector::{
    cell_from_graph, cell_vertices, covector_at, enumerate_bounded_cells, in_tconv, CovectorCell,
    CovectorGraph,
};
pub use fermat_weber::{is_fw_point, solve_fw, FermatWeberResult};
pub use error::{Error, ErrorCategory, Result};
pub use point::{asym_distance, asym_distance_general, normalize, DataSet, TropicalPoint, WeightVector};
pub use rational::Rational;
pub use signomial::{TropicalLinearForm, WeightedObjective};
pub use transport::{central_cayley_cell, solve_transport, CentralCell, TransportationInstance};
pub use inverse::{realize_cell, spanning_forest, weights_from_forest, Realization, SpanningForest};
