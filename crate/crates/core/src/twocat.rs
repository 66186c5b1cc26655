//! The homotopy 2-category on fibrant-cofibrant objects: 2-cells are
//! congruence classes of q-homotopies, composed vertically by pushout and
//! horizontally through whiskering. On top of it: fibrant/cofibrant
//! replacement, the localization functor, its pseudofunctor variant for
//! instances without a functorial factorization, and the collapse of
//! hom-categories to connected components.

use serde::Serialize;

use crate::calculus::{
    compose_q, map_homotopy, reduce_to_q, we_equivalence_data, InstanceFunctor,
};
use crate::cylinder::{
    identity_q_homotopy, invert_q_homotopy, whisker_post_q, whisker_pre, Homotopy, QHomotopy,
};
use crate::instance::{
    is_fibrant_cofibrant, Error, FactorizationSystem, LiftProblem, ModelInstance, MorRef, ObjRef,
    Result,
};

/// A 2-cell: the congruence class of a q-homotopy between arrows of the
/// fibrant-cofibrant subcategory, carried by one representative. Equality is
/// only decided through the instance oracle.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwoCell {
    pub rep: QHomotopy,
    pub f: MorRef,
    pub g: MorRef,
}

fn ensure_fc(inst: &dyn ModelInstance, f: MorRef) -> Result<()> {
    for x in [inst.dom(f)?, inst.cod(f)?] {
        if !is_fibrant_cofibrant(inst, x)? {
            return Err(Error::PreconditionFailed(format!(
                "object {x:?} is not fibrant-cofibrant"
            )));
        }
    }
    Ok(())
}

/// Wrap a homotopy between fibrant-cofibrant endpoints as a 2-cell,
/// normalizing to a fibrant q-homotopy.
pub fn two_cell_of(inst: &dyn ModelInstance, h: &Homotopy) -> Result<TwoCell> {
    ensure_fc(inst, h.f)?;
    let red = reduce_to_q(inst, h)?;
    Ok(TwoCell { rep: red.homotopy, f: h.f, g: h.g })
}

/// The identity 2-cell of an arrow, in q-form.
pub fn identity_two_cell(inst: &dyn ModelInstance, f: MorRef) -> Result<TwoCell> {
    ensure_fc(inst, f)?;
    let rep = identity_q_homotopy(inst, f)?;
    Ok(TwoCell { rep, f, g: f })
}

/// Oracle equality of two 2-cells with the same endpoints.
pub fn two_cells_equal(inst: &dyn ModelInstance, a: &TwoCell, b: &TwoCell) -> Result<bool> {
    if a.f != b.f || a.g != b.g {
        return Err(Error::EndpointMismatch("2-cells have different endpoints".into()));
    }
    inst.oracle_equal(&a.rep, &b.rep)
}

/// Vertical composition `a ∘ b` (apply `b : f ⇒ g` first, then
/// `a : g ⇒ l`), realized by the pushout composition of representatives.
pub fn vcomp(inst: &dyn ModelInstance, a: &TwoCell, b: &TwoCell) -> Result<TwoCell> {
    if b.g != a.f {
        return Err(Error::EndpointMismatch(format!(
            "cannot compose 2-cells: first ends at {:?}, second starts at {:?}",
            b.g, a.f
        )));
    }
    let comp = compose_q(inst, &b.rep, &a.rep)?;
    Ok(TwoCell { rep: comp.homotopy, f: b.f, g: a.g })
}

/// Inverse 2-cell (every 2-cell is invertible): swap the cylinder legs.
pub fn invert_two_cell(a: &TwoCell) -> TwoCell {
    TwoCell { rep: invert_q_homotopy(&a.rep), f: a.g, g: a.f }
}

/// Whisker on the codomain side: `r ∘ a` keeps the representative cylinder.
pub fn whisker_cell_post(inst: &dyn ModelInstance, r: MorRef, a: &TwoCell) -> Result<TwoCell> {
    ensure_fc(inst, r)?;
    let rep = whisker_post_q(inst, &a.rep, r)?;
    Ok(TwoCell { rep, f: inst.compose(r, a.f)?, g: inst.compose(r, a.g)? })
}

/// Whisker on the domain side: `a ∘ l` leaves q-form (the apex arrow is no
/// longer an identity), so the result is re-normalized through the fibrant
/// q-homotopy reduction.
pub fn whisker_cell_pre(inst: &dyn ModelInstance, a: &TwoCell, l: MorRef) -> Result<TwoCell> {
    ensure_fc(inst, l)?;
    let whiskered = whisker_pre(inst, &a.rep.as_homotopy(inst)?, l)?;
    two_cell_of(inst, &whiskered)
}

/// Horizontal composition of `b : f ⇒ g` (arrows `X -> Y`) with
/// `a : f' ⇒ g'` (arrows `Y -> Z`), computed as a vertical composite of
/// whiskers. Both bracketings are produced and checked oracle-equal (the
/// exchange law); the first is returned.
pub fn hcomp(inst: &dyn ModelInstance, a: &TwoCell, b: &TwoCell) -> Result<TwoCell> {
    if inst.cod(b.f)? != inst.dom(a.f)? {
        return Err(Error::EndpointMismatch("2-cells are not horizontally composable".into()));
    }
    // (g' b) ∘ (a f): f'f ⇒ g'f ⇒ g'g
    let route_a = vcomp(
        inst,
        &whisker_cell_post(inst, a.g, b)?,
        &whisker_cell_pre(inst, a, b.f)?,
    )?;
    // (a g) ∘ (f' b): f'f ⇒ f'g ⇒ g'g
    let route_b = vcomp(
        inst,
        &whisker_cell_pre(inst, a, b.g)?,
        &whisker_cell_post(inst, a.f, b)?,
    )?;
    if !two_cells_equal(inst, &route_a, &route_b)? {
        return Err(Error::Structural(
            "exchange law failed: the two horizontal composites differ".into(),
        ));
    }
    Ok(route_a)
}

/// Functorial image of a 2-cell under a class-preserving assignment.
pub fn map_two_cell<F: InstanceFunctor + ?Sized>(
    inst: &dyn ModelInstance,
    functor: &F,
    a: &TwoCell,
) -> Result<TwoCell> {
    let image = map_homotopy(inst, functor, &a.rep.as_homotopy(inst)?)?;
    two_cell_of(inst, &image)
}

/// A weak equivalence presented as an equivalence: quasi-inverse plus
/// invertible unit and counit 2-cells.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceWitness {
    pub forward: MorRef,
    pub quasi_inverse: MorRef,
    /// `id_X ⇒ quasi_inverse ∘ forward`
    pub unit: TwoCell,
    /// `forward ∘ quasi_inverse ⇒ id_Y`
    pub counit: TwoCell,
}

/// Build the equivalence witness of a weak equivalence between
/// fibrant-cofibrant objects from its split factorization.
pub fn we_equivalence_witness(inst: &dyn ModelInstance, s: MorRef) -> Result<EquivalenceWitness> {
    let data = we_equivalence_data(inst, s)?;
    let unit = two_cell_of(inst, &data.unit)?;
    let counit = two_cell_of(inst, &data.counit)?;
    Ok(EquivalenceWitness { forward: data.forward, quasi_inverse: data.quasi_inverse, unit, counit })
}

/// Check the laws an equivalence witness must satisfy: endpoint shapes and
/// invertibility of both cells, all at the oracle level.
pub fn validate_equivalence_witness(
    inst: &dyn ModelInstance,
    w: &EquivalenceWitness,
) -> Result<bool> {
    let x = inst.dom(w.forward)?;
    let y = inst.cod(w.forward)?;
    let gs = inst.compose(w.quasi_inverse, w.forward)?;
    let sg = inst.compose(w.forward, w.quasi_inverse)?;
    if w.unit.f != inst.identity(x)? || w.unit.g != gs {
        return Ok(false);
    }
    if w.counit.f != sg || w.counit.g != inst.identity(y)? {
        return Ok(false);
    }
    for cell in [&w.unit, &w.counit] {
        let inv = invert_two_cell(cell);
        let left = vcomp(inst, &inv, cell)?;
        let right = vcomp(inst, cell, &inv)?;
        let id_src = identity_two_cell(inst, cell.f)?;
        let id_tgt = identity_two_cell(inst, cell.g)?;
        if !two_cells_equal(inst, &left, &id_src)? || !two_cells_equal(inst, &right, &id_tgt)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replacement data of one object: the cofibrant replacement `QX -> X`, the
/// fibrant replacement `X -> RX`, and the fibrant-cofibrant composite
/// `rX = R(QX)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReplacementData {
    pub x: ObjRef,
    pub qx: ObjRef,
    pub rx: ObjRef,
    pub r_fc: ObjRef,
    /// trivial fibration `QX -> X`
    pub p: MorRef,
    /// trivial cofibration `X -> RX`
    pub v: MorRef,
    /// trivial cofibration `QX -> R(QX)`
    pub v_q: MorRef,
}

/// Images of one morphism under the replacement functors.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MorReplacement {
    pub qf: MorRef,
    pub rf: MorRef,
    /// `r f = R(Q f)`
    pub r_fc_f: MorRef,
}

/// Q, R, and r over an instance with chosen factorizations. Strict
/// functoriality of the morphism assignments needs the instance's
/// functorial middle maps; [`Replacer::strict`] enforces the flag.
pub struct Replacer<'a> {
    inst: &'a dyn ModelInstance,
}

impl<'a> Replacer<'a> {
    pub fn new(inst: &'a dyn ModelInstance) -> Self {
        Replacer { inst }
    }

    /// Like `new`, but only for instances claiming functorial factorization.
    pub fn strict(inst: &'a dyn ModelInstance) -> Result<Self> {
        if !inst.factorization_functorial() {
            return Err(Error::PreconditionFailed(
                "instance factorization is not functorial; use the pseudofunctor mode".into(),
            ));
        }
        Ok(Replacer { inst })
    }

    pub fn object(&self, x: ObjRef) -> Result<ReplacementData> {
        let inst = self.inst;
        let q_fac = inst.factorize(inst.from_initial(x)?, FactorizationSystem::CofThenTrivFib)?;
        let qx = inst.cod(q_fac.left)?;
        let r_fac = inst.factorize(inst.to_terminal(x)?, FactorizationSystem::TrivCofThenFib)?;
        let rx = inst.cod(r_fac.left)?;
        let rq_fac =
            inst.factorize(inst.to_terminal(qx)?, FactorizationSystem::TrivCofThenFib)?;
        let r_fc = inst.cod(rq_fac.left)?;
        Ok(ReplacementData {
            x,
            qx,
            rx,
            r_fc,
            p: q_fac.right,
            v: r_fac.left,
            v_q: rq_fac.left,
        })
    }

    /// `Q f`: middle map of the square from `0 -> X` to `0 -> Y`.
    pub fn q_mor(&self, f: MorRef) -> Result<MorRef> {
        let inst = self.inst;
        let x = inst.dom(f)?;
        let y = inst.cod(f)?;
        let id0 = inst.identity(inst.initial())?;
        inst.factor_middle(
            inst.from_initial(x)?,
            inst.from_initial(y)?,
            id0,
            f,
            FactorizationSystem::CofThenTrivFib,
        )
    }

    /// `R f`: middle map of the square from `X -> 1` to `Y -> 1`.
    pub fn r_mor(&self, f: MorRef) -> Result<MorRef> {
        let inst = self.inst;
        let x = inst.dom(f)?;
        let y = inst.cod(f)?;
        let id1 = inst.identity(inst.terminal())?;
        inst.factor_middle(
            inst.to_terminal(x)?,
            inst.to_terminal(y)?,
            f,
            id1,
            FactorizationSystem::TrivCofThenFib,
        )
    }

    /// `r f = R(Q f)`, landing in the fibrant-cofibrant subcategory.
    pub fn morphism(&self, f: MorRef) -> Result<MorReplacement> {
        let qf = self.q_mor(f)?;
        let rf = self.r_mor(f)?;
        let r_fc_f = self.r_mor(qf)?;
        Ok(MorReplacement { qf, rf, r_fc_f })
    }
}

/// The fibrant-cofibrant replacement as a functor usable on 2-cells.
pub struct ReplacementFunctor<'a> {
    repl: Replacer<'a>,
}

impl<'a> ReplacementFunctor<'a> {
    pub fn new(inst: &'a dyn ModelInstance) -> Result<Self> {
        Ok(ReplacementFunctor { repl: Replacer::strict(inst)? })
    }
}

impl InstanceFunctor for ReplacementFunctor<'_> {
    fn map_obj(&self, x: ObjRef) -> Result<ObjRef> {
        Ok(self.repl.object(x)?.r_fc)
    }
    fn map_mor(&self, f: MorRef) -> Result<MorRef> {
        Ok(self.repl.morphism(f)?.r_fc_f)
    }
}

/// The identity functor, for tests and degenerate mappings.
pub struct IdentityFunctor;

impl InstanceFunctor for IdentityFunctor {
    fn map_obj(&self, x: ObjRef) -> Result<ObjRef> {
        Ok(x)
    }
    fn map_mor(&self, f: MorRef) -> Result<MorRef> {
        Ok(f)
    }
}

/// The localization `q = i ∘ r` of an instance with functorial
/// factorization: objects and arrows map through the fibrant-cofibrant
/// replacement, 2-cells through its functorial image, and weak equivalences
/// become equivalence witnesses.
pub struct Localization<'a> {
    inst: &'a dyn ModelInstance,
    functor: ReplacementFunctor<'a>,
}

impl<'a> Localization<'a> {
    pub fn new(inst: &'a dyn ModelInstance) -> Result<Self> {
        Ok(Localization { inst, functor: ReplacementFunctor::new(inst)? })
    }

    pub fn object(&self, x: ObjRef) -> Result<ObjRef> {
        self.functor.map_obj(x)
    }

    pub fn arrow(&self, f: MorRef) -> Result<MorRef> {
        self.functor.map_mor(f)
    }

    pub fn two_cell(&self, a: &TwoCell) -> Result<TwoCell> {
        map_two_cell(self.inst, &self.functor, a)
    }

    /// Image of a weak equivalence, packaged as an equivalence.
    pub fn weak_equivalence(&self, s: MorRef) -> Result<EquivalenceWitness> {
        if !self.inst.classify(s)?.is_we {
            return Err(Error::PreconditionFailed("not a weak equivalence".into()));
        }
        let image = self.arrow(s)?;
        we_equivalence_witness(self.inst, image)
    }
}

/// The pseudofunctor-mode cofibrant replacement: per-object factorizations
/// only, `Q` on arrows and 2-cells by lifting, with the unit and
/// composition coherence cells `ξ` and `φ` characterized over the
/// projections.
pub struct PseudoReplacement<'a> {
    inst: &'a dyn ModelInstance,
}

impl<'a> PseudoReplacement<'a> {
    pub fn new(inst: &'a dyn ModelInstance) -> Self {
        PseudoReplacement { inst }
    }

    /// `(QX, p_X)` with `p_X : QX -> X` a trivial fibration.
    pub fn q_object(&self, x: ObjRef) -> Result<(ObjRef, MorRef)> {
        let inst = self.inst;
        let fac = inst.factorize(inst.from_initial(x)?, FactorizationSystem::CofThenTrivFib)?;
        Ok((inst.cod(fac.left)?, fac.right))
    }

    /// `Q f`: a chosen lift of `f ∘ p_X` through `p_Y` along the cofibration
    /// `0 -> QX`.
    pub fn q_arrow(&self, f: MorRef) -> Result<MorRef> {
        let inst = self.inst;
        let (qx, px) = self.q_object(inst.dom(f)?)?;
        let (qy, py) = self.q_object(inst.cod(f)?)?;
        inst.solve_lift(&LiftProblem {
            i: inst.from_initial(qx)?,
            p: py,
            top: inst.from_initial(qy)?,
            bottom: inst.compose(f, px)?,
        })
    }

    /// `Q[H]`: the unique 2-cell `Qf ⇒ Qg` with `p_Y Q[H] = [H] p_X`,
    /// obtained by lifting the whiskered homotopy through `p_Y`. The
    /// whiskered homotopy is renormalized to q-form first (its domain `QX`
    /// is always cofibrant).
    pub fn q_two_cell(&self, h: &QHomotopy) -> Result<QHomotopy> {
        let inst = self.inst;
        let (_, px) = self.q_object(inst.dom(h.f)?)?;
        let (_, py) = self.q_object(inst.cod(h.f)?)?;
        let qf = self.q_arrow(h.f)?;
        let qg = self.q_arrow(h.g)?;
        let whiskered = whisker_pre(inst, &h.as_homotopy(inst)?, px)?;
        let q_form = crate::calculus::reduce_to_q(inst, &whiskered)?.homotopy;
        crate::calculus::lift_2cell(inst, py, &q_form, qf, qg)
    }

    /// The unit coherence cell `ξ_X : id_QX ⇒ Q(id_X)`, characterized by
    /// `p_X ∘ ξ_X = [identity of p_X]`.
    pub fn xi(&self, x: ObjRef) -> Result<QHomotopy> {
        let inst = self.inst;
        let (qx, px) = self.q_object(x)?;
        let q_id = self.q_arrow(inst.identity(x)?)?;
        let id_cell = identity_q_homotopy(inst, px)?;
        crate::calculus::lift_2cell(inst, px, &id_cell, inst.identity(qx)?, q_id)
    }

    /// The composition coherence cell `φ_{g,f} : Qg ∘ Qf ⇒ Q(g∘f)`,
    /// characterized by `p_Z ∘ φ = [identity of g∘f∘p_X]`.
    pub fn phi(&self, g: MorRef, f: MorRef) -> Result<QHomotopy> {
        let inst = self.inst;
        if inst.cod(f)? != inst.dom(g)? {
            return Err(Error::NotComposable(g, f));
        }
        let (_, px) = self.q_object(inst.dom(f)?)?;
        let (_, pz) = self.q_object(inst.cod(g)?)?;
        let qf = self.q_arrow(f)?;
        let qg = self.q_arrow(g)?;
        let q_gf = self.q_arrow(inst.compose(g, f)?)?;
        let gf_px = inst.compose(inst.compose(g, f)?, px)?;
        let id_cell = identity_q_homotopy(inst, gf_px)?;
        crate::calculus::lift_2cell(inst, pz, &id_cell, inst.compose(qg, qf)?, q_gf)
    }
}

/// Connected-components relation on a hom-set: `f ~ g` iff some 2-cell
/// `f ⇒ g` exists. For fibrant-cofibrant endpoints single-cell existence is
/// already an equivalence (cells invert and compose).
pub fn pi0_hom(inst: &dyn ModelInstance, f: MorRef, g: MorRef) -> Result<bool> {
    ensure_fc(inst, f)?;
    crate::instance::ensure_parallel(inst, f, g)?;
    if f == g {
        return Ok(true);
    }
    Ok(inst.find_q_homotopy(f, g)?.is_some())
}

/// Partition of the morphisms `x -> y` into homotopy classes, as sorted
/// class lists (requires hom-set enumeration).
pub fn pi0_quotient(inst: &dyn ModelInstance, x: ObjRef, y: ObjRef) -> Result<Vec<Vec<MorRef>>> {
    let homs = inst
        .enumerate_morphisms(x, y)
        .ok_or_else(|| Error::Unsupported("instance cannot enumerate this hom-set".into()))?;
    let mut classes: Vec<Vec<MorRef>> = Vec::new();
    'next: for f in homs {
        for class in classes.iter_mut() {
            if pi0_hom(inst, class[0], f)? {
                class.push(f);
                continue 'next;
            }
        }
        classes.push(vec![f]);
    }
    for class in classes.iter_mut() {
        class.sort();
    }
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}
