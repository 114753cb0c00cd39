//! Integral lattices with involution, real period triples, and certified
//! move planning.
//!
//! The crate models the bookkeeping behind deformation questions for real
//! structures on lattices of signature (3, k): an integral symmetric bilinear
//! form, an involutive isometry splitting it into eigenlattices, and period
//! triples (ω₊, ω₋, γ) spanning positive subspaces compatible with the
//! splitting. On top of that sit three elementary moves — rotate, perturb,
//! retarget — and a planner that drives any valid triple to a prescribed
//! class l in the minus eigenlattice through at most six moves, emitting a
//! trace that an independent verifier can re-check step by step.
//!
//! Integer computations (signatures, eigenlattice bases, determinants) are
//! exact, via arbitrary-precision rationals; period-domain geometry runs in
//! f64 against explicit tolerances. Nothing here panics on malformed input:
//! fallible constructors and operations return [`Error`].
//!
//! Entry points:
//! - [`Lattice::new`], [`builtins::named_lattice`] — build or look up a form;
//! - [`Involution::new`], [`classify`], [`enumerate_involutions`] — real
//!   homological types;
//! - [`validate_triple`], [`is_generic`] — period data;
//! - [`moves`] — the three elementary moves;
//! - [`plan_path`], [`verify_trace`] — certified planning.
//!
//! All randomness flows through explicit seeds, so every result is
//! reproducible bit for bit.

mod error;
mod exact;
mod numeric;

pub mod builtins;
pub mod involution;
pub mod lattice;
pub mod moves;
pub mod period;
pub mod planner;

pub use error::{Error, Result};
pub use involution::{
    classify, enumerate_involutions, is_real_homological_type, ClassificationReport, EigenSplit,
    Involution,
};
pub use lattice::{Lattice, Signature, SubspaceBasis, BOX_CAP};
pub use moves::MoveParams;
pub use period::{
    is_generic, normalize_triple, same_cone_component, validate_triple, CheckResult,
    GenericityReport, RealTriple, ValidationReport,
};
pub use planner::{
    plan_path, verify_trace, PlanParams, Trace, TraceStep, VerifyParams, VerifyReport,
    VerifyStepReport,
};
