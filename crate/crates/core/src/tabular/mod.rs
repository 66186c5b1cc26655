//! Finite model categories given entirely by data tables: objects,
//! morphisms, composition, class flags, chosen (co)limits, factorizations,
//! and optionally chosen lifts. Everything is validated by exhaustive
//! enumeration, and the congruence oracle is the germ-generated fixpoint
//! closure over all homotopies.

mod closure;
pub mod fixtures;
mod validate;

pub use closure::CongruenceClosure;
pub use validate::{SquareId, ValidationReport, Violation};

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cylinder::{PathObject, QCylinder, QHomotopy};
use crate::instance::{
    ClassFlags, Coproduct, Error, Factorization, FactorizationSystem, LiftProblem, ModelInstance,
    MorRef, ObjRef, Product, Pushout, Result,
};

/// One morphism row of the table.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MorSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// A chosen binary coproduct or product entry.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PairEntry {
    pub left: String,
    pub right: String,
    pub object: String,
    /// injections for coproducts, projections for products
    pub leg0: String,
    pub leg1: String,
}

/// A chosen pushout (of a span) or pullback (of a cospan) entry.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SquareEntry {
    pub along0: String,
    pub along1: String,
    pub object: String,
    pub leg0: String,
    pub leg1: String,
}

/// A chosen factorization entry `of = right ∘ left`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct FactorEntry {
    pub of: String,
    pub left: String,
    pub right: String,
}

/// A chosen lift for one lifting square.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct LiftEntry {
    pub i: String,
    pub p: String,
    pub top: String,
    pub bottom: String,
    pub solution: String,
}

/// The serialized form of a finite tabular model category.
///
/// Composition is a list of `[first, then, equals]` triples; classes list
/// morphism names (identities included explicitly); the chosen-structure
/// tables give one entry per needed input. Totality of composition and of
/// the factorization tables is part of validation, the (co)limit tables are
/// validated on the entries they contain.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TabularCategorySpec {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorSpec>,
    pub identities: BTreeMap<String, String>,
    /// `[f, g, h]` meaning `g ∘ f = h`
    pub composition: Vec<[String; 3]>,
    pub weak_equivalences: Vec<String>,
    pub fibrations: Vec<String>,
    pub cofibrations: Vec<String>,
    pub initial: Option<String>,
    pub terminal: Option<String>,
    #[serde(default)]
    pub coproducts: Vec<PairEntry>,
    #[serde(default)]
    pub products: Vec<PairEntry>,
    #[serde(default)]
    pub pushouts: Vec<SquareEntry>,
    #[serde(default)]
    pub pullbacks: Vec<SquareEntry>,
    #[serde(default)]
    pub cof_then_triv_fib: Vec<FactorEntry>,
    #[serde(default)]
    pub triv_cof_then_fib: Vec<FactorEntry>,
    pub functorial: bool,
    pub normal: bool,
    #[serde(default)]
    pub lifts: Vec<LiftEntry>,
}

pub(crate) struct MorInfo {
    pub name: String,
    pub dom: ObjRef,
    pub cod: ObjRef,
}

/// A loaded tabular instance. Loading only resolves names; axiom checking
/// lives in [`TabularInstance::validate`].
pub struct TabularInstance {
    pub(crate) spec_name: String,
    pub(crate) objects: Vec<String>,
    pub(crate) mors: Vec<MorInfo>,
    pub(crate) identity: Vec<Option<MorRef>>,
    pub(crate) comp: BTreeMap<(u32, u32), MorRef>,
    pub(crate) flags: Vec<ClassFlags>,
    pub(crate) initial: Option<ObjRef>,
    pub(crate) terminal: Option<ObjRef>,
    pub(crate) coproducts: BTreeMap<(u32, u32), Coproduct>,
    pub(crate) products: BTreeMap<(u32, u32), Product>,
    pub(crate) pushouts: BTreeMap<(u32, u32), Pushout>,
    pub(crate) pullbacks: BTreeMap<(u32, u32), (ObjRef, MorRef, MorRef)>,
    pub(crate) factorizations: [BTreeMap<u32, (MorRef, MorRef)>; 2],
    pub(crate) functorial: bool,
    pub(crate) normal: bool,
    pub(crate) lifts: BTreeMap<(u32, u32, u32, u32), MorRef>,
    oracle: OnceLock<std::result::Result<CongruenceClosure, String>>,
}

fn sys_index(system: FactorizationSystem) -> usize {
    match system {
        FactorizationSystem::CofThenTrivFib => 0,
        FactorizationSystem::TrivCofThenFib => 1,
    }
}

impl TabularInstance {
    /// Resolve a spec's names into indices. Fails only on dangling names or
    /// duplicate definitions; axiom violations are the validator's job.
    pub fn load(spec: &TabularCategorySpec) -> Result<Self> {
        let mut obj_ids = BTreeMap::new();
        for (i, o) in spec.objects.iter().enumerate() {
            if obj_ids.insert(o.clone(), ObjRef(i as u32)).is_some() {
                return Err(Error::Validation(format!("duplicate object name {o}")));
            }
        }
        let obj = |name: &str| -> Result<ObjRef> {
            obj_ids
                .get(name)
                .copied()
                .ok_or_else(|| Error::Validation(format!("unknown object name {name}")))
        };
        let mut mor_ids = BTreeMap::new();
        let mut mors = Vec::new();
        for (i, m) in spec.morphisms.iter().enumerate() {
            if mor_ids.insert(m.name.clone(), MorRef(i as u32)).is_some() {
                return Err(Error::Validation(format!("duplicate morphism name {}", m.name)));
            }
            mors.push(MorInfo { name: m.name.clone(), dom: obj(&m.dom)?, cod: obj(&m.cod)? });
        }
        let mor = |name: &str| -> Result<MorRef> {
            mor_ids
                .get(name)
                .copied()
                .ok_or_else(|| Error::Validation(format!("unknown morphism name {name}")))
        };
        let mut identity = vec![None; spec.objects.len()];
        for (o, m) in &spec.identities {
            identity[obj(o)?.0 as usize] = Some(mor(m)?);
        }
        let mut comp = BTreeMap::new();
        for [f, g, h] in &spec.composition {
            let key = (mor(f)?.0, mor(g)?.0);
            if comp.insert(key, mor(h)?).is_some() {
                return Err(Error::Validation(format!("duplicate composition entry {f};{g}")));
            }
        }
        let mut flags = vec![ClassFlags::default(); mors.len()];
        for name in &spec.weak_equivalences {
            flags[mor(name)?.0 as usize].is_we = true;
        }
        for name in &spec.fibrations {
            flags[mor(name)?.0 as usize].is_fib = true;
        }
        for name in &spec.cofibrations {
            flags[mor(name)?.0 as usize].is_cof = true;
        }
        let mut coproducts = BTreeMap::new();
        for e in &spec.coproducts {
            coproducts.insert(
                (obj(&e.left)?.0, obj(&e.right)?.0),
                Coproduct { obj: obj(&e.object)?, inj0: mor(&e.leg0)?, inj1: mor(&e.leg1)? },
            );
        }
        let mut products = BTreeMap::new();
        for e in &spec.products {
            products.insert(
                (obj(&e.left)?.0, obj(&e.right)?.0),
                Product { obj: obj(&e.object)?, proj0: mor(&e.leg0)?, proj1: mor(&e.leg1)? },
            );
        }
        let mut pushouts = BTreeMap::new();
        for e in &spec.pushouts {
            pushouts.insert(
                (mor(&e.along0)?.0, mor(&e.along1)?.0),
                Pushout { obj: obj(&e.object)?, inc0: mor(&e.leg0)?, inc1: mor(&e.leg1)? },
            );
        }
        let mut pullbacks = BTreeMap::new();
        for e in &spec.pullbacks {
            pullbacks.insert(
                (mor(&e.along0)?.0, mor(&e.along1)?.0),
                (obj(&e.object)?, mor(&e.leg0)?, mor(&e.leg1)?),
            );
        }
        let mut factorizations = [BTreeMap::new(), BTreeMap::new()];
        for (idx, entries) in
            [(0usize, &spec.cof_then_triv_fib), (1usize, &spec.triv_cof_then_fib)]
        {
            for e in entries {
                factorizations[idx].insert(mor(&e.of)?.0, (mor(&e.left)?, mor(&e.right)?));
            }
        }
        let mut lifts = BTreeMap::new();
        for e in &spec.lifts {
            lifts.insert(
                (mor(&e.i)?.0, mor(&e.p)?.0, mor(&e.top)?.0, mor(&e.bottom)?.0),
                mor(&e.solution)?,
            );
        }
        Ok(TabularInstance {
            spec_name: spec.name.clone(),
            objects: spec.objects.clone(),
            mors,
            identity,
            comp,
            flags,
            initial: spec.initial.as_deref().map(&obj).transpose()?,
            terminal: spec.terminal.as_deref().map(&obj).transpose()?,
            coproducts,
            products,
            pushouts,
            pullbacks,
            factorizations,
            functorial: spec.functorial,
            normal: spec.normal,
            lifts,
            oracle: OnceLock::new(),
        })
    }

    /// Load and exhaustively validate; the report is produced either way.
    pub fn load_validate(spec: &TabularCategorySpec) -> Result<(Self, ValidationReport)> {
        let inst = Self::load(spec)?;
        let report = inst.validate();
        Ok((inst, report))
    }

    pub fn object_name(&self, x: ObjRef) -> &str {
        &self.objects[x.0 as usize]
    }

    pub fn mor_name(&self, f: MorRef) -> &str {
        &self.mors[f.0 as usize].name
    }

    pub fn object_by_name(&self, name: &str) -> Result<ObjRef> {
        self.objects
            .iter()
            .position(|o| o == name)
            .map(|i| ObjRef(i as u32))
            .ok_or_else(|| Error::Validation(format!("unknown object name {name}")))
    }

    pub fn mor_by_name(&self, name: &str) -> Result<MorRef> {
        self.mors
            .iter()
            .position(|m| m.name == name)
            .map(|i| MorRef(i as u32))
            .ok_or_else(|| Error::Validation(format!("unknown morphism name {name}")))
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn mor_count(&self) -> usize {
        self.mors.len()
    }

    pub(crate) fn all_objects(&self) -> Vec<ObjRef> {
        (0..self.objects.len() as u32).map(ObjRef).collect()
    }

    pub(crate) fn all_mors(&self) -> Vec<MorRef> {
        (0..self.mors.len() as u32).map(MorRef).collect()
    }

    pub(crate) fn mors_between(&self, x: ObjRef, y: ObjRef) -> Vec<MorRef> {
        self.mors
            .iter()
            .enumerate()
            .filter(|(_, m)| m.dom == x && m.cod == y)
            .map(|(i, _)| MorRef(i as u32))
            .collect()
    }

    fn check_mor(&self, f: MorRef) -> Result<()> {
        if (f.0 as usize) < self.mors.len() {
            Ok(())
        } else {
            Err(Error::UnknownMorphism(f))
        }
    }

    /// All solutions of a lifting square, in morphism-table order.
    pub fn enumerate_lifts(&self, prob: &LiftProblem) -> Result<Vec<MorRef>> {
        for m in [prob.i, prob.p, prob.top, prob.bottom] {
            self.check_mor(m)?;
        }
        if self.compose(prob.p, prob.top)? != self.compose(prob.bottom, prob.i)? {
            return Err(Error::Structural("lifting square does not commute".into()));
        }
        let b = self.cod(prob.i)?;
        let c = self.dom(prob.p)?;
        let mut out = Vec::new();
        for h in self.mors_between(b, c) {
            if self.compose(h, prob.i)? == prob.top && self.compose(prob.p, h)? == prob.bottom {
                out.push(h);
            }
        }
        Ok(out)
    }

    /// The germ-generated congruence closure, built on first use.
    pub fn congruence_closure(&self) -> Result<&CongruenceClosure> {
        self.oracle
            .get_or_init(|| closure::build(self).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Validation(e.clone()))
    }

    /// The unique mediating morphism `m: from -> to` satisfying all given
    /// equations `m ∘ pre = rhs`.
    fn mediate_out(&self, from: ObjRef, to: ObjRef, eqs: &[(MorRef, MorRef)]) -> Result<MorRef> {
        let mut found = None;
        'outer: for m in self.mors_between(from, to) {
            for &(pre, rhs) in eqs {
                if self.compose(m, pre)? != rhs {
                    continue 'outer;
                }
            }
            found = Some(m);
            break;
        }
        found.ok_or_else(|| Error::Structural("no mediating morphism in the table".into()))
    }

    /// The unique mediating morphism `m: from -> to` with `post ∘ m = rhs`.
    fn mediate_in(&self, from: ObjRef, to: ObjRef, eqs: &[(MorRef, MorRef)]) -> Result<MorRef> {
        let mut found = None;
        'outer: for m in self.mors_between(from, to) {
            for &(post, rhs) in eqs {
                if self.compose(post, m)? != rhs {
                    continue 'outer;
                }
            }
            found = Some(m);
            break;
        }
        found.ok_or_else(|| Error::Structural("no mediating morphism in the table".into()))
    }
}

impl ModelInstance for TabularInstance {
    fn name(&self) -> &str {
        &self.spec_name
    }

    fn dom(&self, f: MorRef) -> Result<ObjRef> {
        self.check_mor(f)?;
        Ok(self.mors[f.0 as usize].dom)
    }

    fn cod(&self, f: MorRef) -> Result<ObjRef> {
        self.check_mor(f)?;
        Ok(self.mors[f.0 as usize].cod)
    }

    fn identity(&self, x: ObjRef) -> Result<MorRef> {
        self.identity
            .get(x.0 as usize)
            .copied()
            .flatten()
            .ok_or_else(|| Error::Validation(format!("object {x:?} has no identity entry")))
    }

    fn compose(&self, g: MorRef, f: MorRef) -> Result<MorRef> {
        self.check_mor(f)?;
        self.check_mor(g)?;
        if self.cod(f)? != self.dom(g)? {
            return Err(Error::NotComposable(g, f));
        }
        self.comp
            .get(&(f.0, g.0))
            .copied()
            .ok_or_else(|| {
                Error::Validation(format!(
                    "composition table missing {};{}",
                    self.mor_name(f),
                    self.mor_name(g)
                ))
            })
    }

    fn classify(&self, f: MorRef) -> Result<ClassFlags> {
        self.check_mor(f)?;
        Ok(self.flags[f.0 as usize])
    }

    fn initial(&self) -> ObjRef {
        self.initial.expect("instance has no initial object")
    }

    fn terminal(&self) -> ObjRef {
        self.terminal.expect("instance has no terminal object")
    }

    fn from_initial(&self, x: ObjRef) -> Result<MorRef> {
        let zero = self.initial.ok_or_else(|| Error::Validation("no initial object".into()))?;
        let arrows = self.mors_between(zero, x);
        arrows
            .first()
            .copied()
            .ok_or_else(|| Error::Validation(format!("no arrow from the initial object to {x:?}")))
    }

    fn to_terminal(&self, x: ObjRef) -> Result<MorRef> {
        let one = self.terminal.ok_or_else(|| Error::Validation("no terminal object".into()))?;
        let arrows = self.mors_between(x, one);
        arrows
            .first()
            .copied()
            .ok_or_else(|| Error::Validation(format!("no arrow from {x:?} to the terminal object")))
    }

    fn coproduct(&self, x: ObjRef, y: ObjRef) -> Result<Coproduct> {
        self.coproducts
            .get(&(x.0, y.0))
            .copied()
            .ok_or_else(|| Error::Validation(format!("no coproduct entry for ({x:?}, {y:?})")))
    }

    fn product(&self, x: ObjRef, y: ObjRef) -> Result<Product> {
        self.products
            .get(&(x.0, y.0))
            .copied()
            .ok_or_else(|| Error::Validation(format!("no product entry for ({x:?}, {y:?})")))
    }

    fn copair(&self, cp: &Coproduct, f: MorRef, g: MorRef) -> Result<MorRef> {
        let to = self.cod(f)?;
        self.mediate_out(cp.obj, to, &[(cp.inj0, f), (cp.inj1, g)])
    }

    fn pair(&self, pr: &Product, f: MorRef, g: MorRef) -> Result<MorRef> {
        let from = self.dom(f)?;
        self.mediate_in(from, pr.obj, &[(pr.proj0, f), (pr.proj1, g)])
    }

    fn pushout(&self, f: MorRef, g: MorRef) -> Result<Pushout> {
        self.pushouts
            .get(&(f.0, g.0))
            .copied()
            .ok_or_else(|| {
                Error::Validation(format!(
                    "no pushout entry for span ({}, {})",
                    self.mor_name(f),
                    self.mor_name(g)
                ))
            })
    }

    fn pushout_induced(&self, po: &Pushout, u: MorRef, v: MorRef) -> Result<MorRef> {
        let to = self.cod(u)?;
        self.mediate_out(po.obj, to, &[(po.inc0, u), (po.inc1, v)])
    }

    fn factorize(&self, f: MorRef, system: FactorizationSystem) -> Result<Factorization> {
        self.check_mor(f)?;
        let (left, right) = self.factorizations[sys_index(system)]
            .get(&f.0)
            .copied()
            .ok_or_else(|| {
                Error::Validation(format!("no factorization entry for {}", self.mor_name(f)))
            })?;
        Ok(Factorization { left, right, system })
    }

    fn factor_middle(
        &self,
        f: MorRef,
        g: MorRef,
        u: MorRef,
        v: MorRef,
        system: FactorizationSystem,
    ) -> Result<MorRef> {
        if self.compose(g, u)? != self.compose(v, f)? {
            return Err(Error::Structural("square does not commute".into()));
        }
        let fac_f = self.factorize(f, system)?;
        let fac_g = self.factorize(g, system)?;
        let mid_f = self.cod(fac_f.left)?;
        let mid_g = self.cod(fac_g.left)?;
        let lam_g_u = self.compose(fac_g.left, u)?;
        let v_rho_f = self.compose(v, fac_f.right)?;
        let mut found = None;
        for m in self.mors_between(mid_f, mid_g) {
            if self.compose(m, fac_f.left)? == lam_g_u && self.compose(fac_g.right, m)? == v_rho_f {
                found = Some(m);
                break;
            }
        }
        found.ok_or_else(|| {
            Error::Structural(format!(
                "no middle map between factorizations of {} and {}",
                self.mor_name(f),
                self.mor_name(g)
            ))
        })
    }

    fn factorization_functorial(&self) -> bool {
        self.functorial
    }

    fn factorization_normal(&self) -> bool {
        self.normal
    }

    fn solve_lift(&self, prob: &LiftProblem) -> Result<MorRef> {
        if let Some(&h) = self.lifts.get(&(prob.i.0, prob.p.0, prob.top.0, prob.bottom.0)) {
            return Ok(h);
        }
        self.enumerate_lifts(prob)?.first().copied().ok_or(Error::NoLift)
    }

    fn q_cylinder(&self, x: ObjRef) -> Result<QCylinder> {
        crate::cylinder::q_cylinder_via_factorization(self, x)
    }

    fn path_object(&self, y: ObjRef) -> Result<PathObject> {
        crate::cylinder::path_object_via_factorization(self, y)
    }

    fn oracle_equal(&self, a: &QHomotopy, b: &QHomotopy) -> Result<bool> {
        if a.f != b.f || a.g != b.g {
            return Err(Error::EndpointMismatch("oracle needs common endpoints".into()));
        }
        let closure = self.congruence_closure()?;
        closure.equal(&a.as_homotopy(self)?, &b.as_homotopy(self)?)
    }

    fn find_q_homotopy(&self, f: MorRef, g: MorRef) -> Result<Option<QHomotopy>> {
        crate::instance::ensure_parallel(self, f, g)?;
        let closure = self.congruence_closure()?;
        Ok(closure.find_q_homotopy(self, f, g))
    }

    fn enumerate_objects(&self) -> Option<Vec<ObjRef>> {
        Some(self.all_objects())
    }

    fn enumerate_morphisms(&self, x: ObjRef, y: ObjRef) -> Option<Vec<MorRef>> {
        Some(self.mors_between(x, y))
    }
}
