//! Homotopy 2-categories of model categories, computed.
//!
//! The library builds the 2-category whose 2-cells are congruence classes of
//! Quillen homotopies over a computable model-category instance, together
//! with fibrant/cofibrant replacement, the localization functor, and the
//! collapse to connected components. Two fully decidable instances are
//! provided: bounded chain complexes over a prime field ([`chain`]) and
//! finite tabular model categories ([`tabular`]).

pub mod calculus;
pub mod chain;
pub mod cylinder;
pub mod fp;
pub mod instance;
pub mod par;
pub mod tabular;
pub mod twocat;

pub use instance::{
    ClassFlags, Coproduct, Error, Factorization, FactorizationSystem, LiftProblem, ModelInstance,
    MorRef, ObjRef, Product, Pushout, Result,
};
