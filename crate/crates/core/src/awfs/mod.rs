//! Free fillers as a pointed endofunctor, its free-algebra (Kelly) iteration, and the
//! factorizations built from it.

mod endofunctor;
mod factor;
mod kelly;

pub use endofunctor::{build_step, BoxSummand, DegeneratePiece, EndofunctorStep};
pub use kelly::{kelly_iterate, omega_colimit_check, FactorizationTrace, KellyOptions, StopReason};
pub use factor::{
    awfs_filler, fill_into_next_stage, graph_factorization, image_lifting_check, one_step_middle,
    refl_coalgebra, DiagonalFiller, GraphFactorization, ReflCoalgebra,
};
