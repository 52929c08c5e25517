//! Two-dimensional finite-volume solver on structured quadrilateral meshes.

pub mod cases;
pub mod flux;
pub mod grid;
pub mod solver;
pub mod state;

pub use cases::{case_registry_2d, find_case_2d, run_case_2d, Case2D, Case2DKind, ContourVariable, Run2DOptions};
pub use flux::{interface_flux_2d, FaceGeometry};
pub use grid::Mesh2D;
pub use solver::{advance_2d, fv_step_2d, Bc2D, Boundaries2D, Log2D, Segment, Solver2DConfig, StructuredGrid2D};
pub use state::{Cons2D, Flux2D, Prim2D};
