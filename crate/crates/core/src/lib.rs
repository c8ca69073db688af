//! Finite-dimensional k-g-fusion frames: construction, verification of frame
//! bounds, operator transforms, Q-duals and perturbation tests.
//!
//! Every Hilbert space is `F^n` with `F ∈ {ℝ, ℂ}` and operators are dense
//! matrices. Matrices are stored as complex throughout; real problems simply
//! carry zero imaginary parts and are tagged [`Field::Real`].

pub mod document;
pub mod duality;
pub mod error;
pub mod fixtures;
pub mod frame_ops;
pub mod json;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod perturbation;
pub mod probes;
pub mod suites;
pub mod transforms;

pub use document::FrameDocument;
pub use error::{FrameError, Result};
pub use frame_ops::{FrameBounds, FrameReport};
pub use model::{
    BoundedOperator, Field, Fixture, GFusionSystem, HilbertSpace, LocalOperator, Member,
    WeightedSubspace,
};
pub use numerics::{CMatrix, CVector, ToleranceProfile, C64};
