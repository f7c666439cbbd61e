//! Semi-free dg-algebra resolutions of `R/I`, their linearization at the
//! origin and a weight-two minimal model.

mod algebra;
mod fiber;
mod minimal;
mod resolution;

pub use algebra::{d_monomial, differential, monomials_of_degree, DgElement, DgMonomial};
pub use fiber::{cotangent_fiber, LinearizedCotangentFiber};
pub use minimal::{minimize_at_origin, MinimalModel, QuadraticDifferential};
pub use resolution::{
    kill_cycles, kill_cycles_within, koszul_stage, resolve_through, resolve_through_within, Budget, DgGenerator,
    DgResolution, DEFAULT_GENERATOR_CAP,
};
