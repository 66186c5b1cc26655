//! The contract a computable model-category instance must satisfy.
//!
//! An instance owns its objects and morphisms behind opaque ids; every
//! operation is a pure function of its inputs plus the instance's frozen
//! tables, so instances are shareable read-only across threads.

use serde::{Deserialize, Serialize};

use crate::cylinder::{PathObject, QCylinder, QHomotopy};

/// Opaque object identifier, valid within exactly one instance.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ObjRef(pub u32);

/// Opaque morphism identifier, valid within exactly one instance.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct MorRef(pub u32);

/// Membership of a morphism in the three distinguished classes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ClassFlags {
    pub is_we: bool,
    pub is_fib: bool,
    pub is_cof: bool,
}

impl ClassFlags {
    pub fn all() -> Self {
        ClassFlags { is_we: true, is_fib: true, is_cof: true }
    }
    pub fn is_triv_cof(&self) -> bool {
        self.is_cof && self.is_we
    }
    pub fn is_triv_fib(&self) -> bool {
        self.is_fib && self.is_we
    }
}

/// Which factorization system a factorization was requested from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum FactorizationSystem {
    /// left factor a cofibration, right factor a trivial fibration
    CofThenTrivFib,
    /// left factor a trivial cofibration, right factor a fibration
    TrivCofThenFib,
}

/// A chosen factorization `f = right ∘ left`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Factorization {
    pub left: MorRef,
    pub right: MorRef,
    pub system: FactorizationSystem,
}

/// A commuting square `p ∘ u = v ∘ i` asking for a diagonal `h` with
/// `h ∘ i = u` and `p ∘ h = v`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LiftProblem {
    pub i: MorRef,
    pub p: MorRef,
    pub top: MorRef,
    pub bottom: MorRef,
}

/// A chosen binary coproduct with its injections.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Coproduct {
    pub obj: ObjRef,
    pub inj0: MorRef,
    pub inj1: MorRef,
}

/// A chosen binary product with its projections.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Product {
    pub obj: ObjRef,
    pub proj0: MorRef,
    pub proj1: MorRef,
}

/// A chosen pushout of a span with its two inclusions.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Pushout {
    pub obj: ObjRef,
    pub inc0: MorRef,
    pub inc1: MorRef,
}

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("unknown object id {0:?}")]
    UnknownObject(ObjRef),
    #[error("unknown morphism id {0:?}")]
    UnknownMorphism(MorRef),
    #[error("morphisms are not composable: cod {0:?} != dom {1:?}")]
    NotComposable(MorRef, MorRef),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no lift exists for the given square")]
    NoLift,
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A computable model category: class predicates, chosen finite (co)limits,
/// a lifting solver, a factorization system, and a congruence oracle on
/// q-homotopies. All choices are deterministic for fixed inputs.
pub trait ModelInstance: Send + Sync {
    fn name(&self) -> &str;

    fn dom(&self, f: MorRef) -> Result<ObjRef>;
    fn cod(&self, f: MorRef) -> Result<ObjRef>;
    fn identity(&self, x: ObjRef) -> Result<MorRef>;
    /// `compose(g, f)` is `g ∘ f` (apply `f` first).
    fn compose(&self, g: MorRef, f: MorRef) -> Result<MorRef>;
    fn classify(&self, f: MorRef) -> Result<ClassFlags>;

    fn initial(&self) -> ObjRef;
    fn terminal(&self) -> ObjRef;
    fn from_initial(&self, x: ObjRef) -> Result<MorRef>;
    fn to_terminal(&self, x: ObjRef) -> Result<MorRef>;

    fn coproduct(&self, x: ObjRef, y: ObjRef) -> Result<Coproduct>;
    fn product(&self, x: ObjRef, y: ObjRef) -> Result<Product>;
    /// Mediating arrow `[f, g]` out of a coproduct.
    fn copair(&self, cp: &Coproduct, f: MorRef, g: MorRef) -> Result<MorRef>;
    /// Mediating arrow `(f, g)` into a product.
    fn pair(&self, pr: &Product, f: MorRef, g: MorRef) -> Result<MorRef>;
    /// Chosen pushout of the span `f: A -> B`, `g: A -> C`.
    fn pushout(&self, f: MorRef, g: MorRef) -> Result<Pushout>;
    /// Mediating arrow out of a pushout for a commuting cocone `(u, v)`.
    fn pushout_induced(&self, po: &Pushout, u: MorRef, v: MorRef) -> Result<MorRef>;

    fn factorize(&self, f: MorRef, system: FactorizationSystem) -> Result<Factorization>;
    /// Middle map of the chosen factorizations for a commuting square
    /// `(u, v): f -> g`, when the instance provides one.
    fn factor_middle(
        &self,
        f: MorRef,
        g: MorRef,
        u: MorRef,
        v: MorRef,
        system: FactorizationSystem,
    ) -> Result<MorRef>;
    fn factorization_functorial(&self) -> bool;
    fn factorization_normal(&self) -> bool;

    fn solve_lift(&self, prob: &LiftProblem) -> Result<MorRef>;

    /// Chosen factorization of the codiagonal `X ⊔ X -> X` as a q-cylinder.
    /// Instances usually route through `factorize` via
    /// [`crate::cylinder::q_cylinder_via_factorization`], but may prefer an
    /// explicit construction.
    fn q_cylinder(&self, x: ObjRef) -> Result<QCylinder>;

    /// Chosen factorization of the diagonal `Y -> Y × Y` as a path object.
    fn path_object(&self, y: ObjRef) -> Result<PathObject>;

    /// The congruence oracle: decides 2-cell equality of two q-homotopies
    /// with common endpoints.
    fn oracle_equal(&self, a: &QHomotopy, b: &QHomotopy) -> Result<bool>;

    /// Some q-homotopy `f ⇝ g`, if the instance can decide existence.
    fn find_q_homotopy(&self, f: MorRef, g: MorRef) -> Result<Option<QHomotopy>>;

    /// All objects, for instances that support exhaustive enumeration.
    fn enumerate_objects(&self) -> Option<Vec<ObjRef>> {
        None
    }
    /// All morphisms `x -> y`, for instances that support enumeration.
    fn enumerate_morphisms(&self, _x: ObjRef, _y: ObjRef) -> Option<Vec<MorRef>> {
        None
    }
}

/// Convenience checks shared by the generic constructions.
pub(crate) fn ensure_parallel(inst: &dyn ModelInstance, f: MorRef, g: MorRef) -> Result<()> {
    if inst.dom(f)? != inst.dom(g)? || inst.cod(f)? != inst.cod(g)? {
        return Err(Error::EndpointMismatch(format!("{f:?} and {g:?} are not parallel")));
    }
    Ok(())
}

pub(crate) fn is_fibrant(inst: &dyn ModelInstance, x: ObjRef) -> Result<bool> {
    Ok(inst.classify(inst.to_terminal(x)?)?.is_fib)
}

pub(crate) fn is_cofibrant(inst: &dyn ModelInstance, x: ObjRef) -> Result<bool> {
    Ok(inst.classify(inst.from_initial(x)?)?.is_cof)
}

/// `true` iff the object is fibrant and cofibrant.
pub fn is_fibrant_cofibrant(inst: &dyn ModelInstance, x: ObjRef) -> Result<bool> {
    Ok(is_fibrant(inst, x)? && is_cofibrant(inst, x)?)
}
