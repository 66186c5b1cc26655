//! Constructions on homotopies over any instance: normalization to fibrant
//! q-homotopies, pushout composition, left/right conversion, zig-zag search
//! for the germ relation, split factorization of weak equivalences, and
//! 2-cell lifting along trivial fibrations.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::cylinder::{
    identity_q_homotopy, validate_cylinder_map, whisker_post, whisker_post_q, whisker_pre,
    Cylinder, CylinderMap, Homotopy, PathObject, QCylinder, QHomotopy, RightHomotopy,
};
use crate::instance::{
    is_cofibrant, is_fibrant, Error, FactorizationSystem, LiftProblem, ModelInstance, MorRef,
    Pushout, Result,
};

/// A recorded germ-relation edge: a cylinder map from the cylinder of one
/// homotopy to the cylinder of another, compatible with the homotopy maps
/// (`h_to ∘ phi = h_from`).
#[derive(Clone, Debug, Serialize)]
pub struct GermEdge {
    pub from: Homotopy,
    pub to: Homotopy,
    pub map: CylinderMap,
}

impl GermEdge {
    /// Check every equation required of the edge.
    pub fn validate(&self, inst: &dyn ModelInstance) -> Result<bool> {
        let d = validate_cylinder_map(inst, &self.map)?;
        let compat = inst.compose(self.to.h, self.map.phi)? == self.from.h;
        Ok(d.is_valid() && compat)
    }
}

/// Result of normalizing a homotopy: a fibrant q-homotopy in the same germ
/// class, plus the cylinder-map witnesses that connect it to the input.
#[derive(Clone, Debug)]
pub struct QReduction {
    pub homotopy: QHomotopy,
    pub witnesses: Vec<GermEdge>,
}

fn is_q_form(inst: &dyn ModelInstance, h: &Homotopy) -> Result<Option<QHomotopy>> {
    let id = inst.identity(h.cyl.base)?;
    if h.cyl.z != h.cyl.base || h.cyl.x != id {
        return Ok(None);
    }
    let cp = inst.coproduct(h.cyl.base, h.cyl.base)?;
    let combined = inst.copair(&cp, h.cyl.d0, h.cyl.d1)?;
    if !inst.classify(combined)?.is_cof {
        return Ok(None);
    }
    let cyl = QCylinder {
        base: h.cyl.base,
        w: h.cyl.w,
        d0: h.cyl.d0,
        d1: h.cyl.d1,
        s: h.cyl.s,
        fibrant: inst.classify(h.cyl.s)?.is_fib,
    };
    Ok(Some(QHomotopy { cyl, h: h.h, f: h.f, g: h.g }))
}

/// Replace a homotopy by a fibrant one in the same germ class: factor `s` as
/// trivial cofibration `j` then fibration `s'`, and extend `h` along `j` by
/// lifting against the terminal map of the (fibrant) codomain. The witness is
/// the cylinder map `(j, id_Z)`.
pub fn to_fibrant_homotopy(
    inst: &dyn ModelInstance,
    h: &Homotopy,
) -> Result<(Homotopy, GermEdge)> {
    let y = inst.cod(h.f)?;
    if !is_fibrant(inst, y)? {
        return Err(Error::PreconditionFailed(format!(
            "codomain object {y:?} must be fibrant to fibrantize a homotopy"
        )));
    }
    let fac = inst.factorize(h.cyl.s, FactorizationSystem::TrivCofThenFib)?;
    let j = fac.left;
    let s_new = fac.right;
    let w_new = inst.cod(j)?;
    let h_new = inst.solve_lift(&LiftProblem {
        i: j,
        p: inst.to_terminal(y)?,
        top: h.h,
        bottom: inst.to_terminal(w_new)?,
    })?;
    let cyl = Cylinder {
        base: h.cyl.base,
        w: w_new,
        z: h.cyl.z,
        d0: inst.compose(j, h.cyl.d0)?,
        d1: inst.compose(j, h.cyl.d1)?,
        s: s_new,
        x: h.cyl.x,
        fibrant: true,
    };
    let out = Homotopy { cyl, h: h_new, f: h.f, g: h.g };
    let edge = GermEdge {
        from: h.clone(),
        to: out.clone(),
        map: CylinderMap { source: h.cyl, target: cyl, phi: j, psi: inst.identity(h.cyl.z)? },
    };
    Ok((out, edge))
}

/// Replace a fibrant homotopy by a fibrant q-homotopy in the same germ
/// class: lift the chosen fibrant q-cylinder's legs against the (trivial)
/// fibration `s`, obtaining `t` with `h∘t` the q-homotopy. The witness is the
/// cylinder map `(t, x)` in the reverse direction.
pub fn fibrant_to_q_homotopy(
    inst: &dyn ModelInstance,
    h: &Homotopy,
) -> Result<(QHomotopy, GermEdge)> {
    let s_flags = inst.classify(h.cyl.s)?;
    if !s_flags.is_fib {
        return Err(Error::PreconditionFailed("homotopy cylinder is not fibrant".into()));
    }
    let x = h.cyl.base;
    let qc = inst.q_cylinder(x)?;
    let cp = inst.coproduct(x, x)?;
    let left_edge = inst.copair(&cp, qc.d0, qc.d1)?;
    let top = inst.copair(&cp, h.cyl.d0, h.cyl.d1)?;
    let bottom = inst.compose(h.cyl.x, qc.s)?;
    let t = inst.solve_lift(&LiftProblem { i: left_edge, p: h.cyl.s, top, bottom })?;
    let out = QHomotopy {
        cyl: qc,
        h: inst.compose(h.h, t)?,
        f: h.f,
        g: h.g,
    };
    let edge = GermEdge {
        from: out.as_homotopy(inst)?,
        to: h.clone(),
        map: CylinderMap {
            source: qc.as_cylinder(inst)?,
            target: h.cyl,
            phi: t,
            psi: h.cyl.x,
        },
    };
    Ok((out, edge))
}

/// Normalize a homotopy to a fibrant q-homotopy in the same germ class.
///
/// Stage 1 (when `s` is not already a fibration) requires the codomain
/// fibrant; stage 2 (when not already in q-form) requires the domain
/// cofibrant. A homotopy that is already a fibrant q-homotopy is returned
/// unchanged with no witnesses.
pub fn reduce_to_q(inst: &dyn ModelInstance, h: &Homotopy) -> Result<QReduction> {
    if let Some(q) = is_q_form(inst, h)? {
        if q.cyl.fibrant {
            return Ok(QReduction { homotopy: q, witnesses: Vec::new() });
        }
    }
    let mut witnesses = Vec::new();
    let fibrant = if inst.classify(h.cyl.s)?.is_fib {
        h.clone()
    } else {
        let (fh, edge) = to_fibrant_homotopy(inst, h)?;
        witnesses.push(edge);
        fh
    };
    if !is_cofibrant(inst, h.cyl.base)? {
        return Err(Error::PreconditionFailed(format!(
            "domain object {:?} must be cofibrant to normalize to a q-homotopy",
            h.cyl.base
        )));
    }
    let (q, edge) = fibrant_to_q_homotopy(inst, &fibrant)?;
    witnesses.push(edge);
    Ok(QReduction { homotopy: q, witnesses })
}

/// Result of the pushout composition: the composite q-homotopy together with
/// the pushout inclusions of the two constituent cylinders.
#[derive(Clone, Debug)]
pub struct QComposite {
    pub homotopy: QHomotopy,
    pub pushout: Pushout,
}

/// Vertical composition of q-homotopies `h: f ⇝ g`, `h2: g ⇝ l` by gluing
/// the cylinders along `d1` and `d0'`: `W'' = pushout(d1, d0')` with
/// inclusions `α, β`; the composite has `d0'' = α∘d0`, `d1'' = β∘d1'`,
/// `s''` and `h''` induced by the universal property.
pub fn compose_q(inst: &dyn ModelInstance, h: &QHomotopy, h2: &QHomotopy) -> Result<QComposite> {
    if h.g != h2.f {
        return Err(Error::EndpointMismatch(format!(
            "cannot compose: first ends at {:?}, second starts at {:?}",
            h.g, h2.f
        )));
    }
    if !is_cofibrant(inst, h.cyl.base)? {
        return Err(Error::PreconditionFailed(format!(
            "base object {:?} must be cofibrant for pushout composition",
            h.cyl.base
        )));
    }
    let po = inst.pushout(h.cyl.d1, h2.cyl.d0)?;
    let s = inst.pushout_induced(&po, h.cyl.s, h2.cyl.s)?;
    let hh = inst.pushout_induced(&po, h.h, h2.h)?;
    let cyl = QCylinder {
        base: h.cyl.base,
        w: po.obj,
        d0: inst.compose(po.inc0, h.cyl.d0)?,
        d1: inst.compose(po.inc1, h2.cyl.d1)?,
        s,
        fibrant: inst.classify(s)?.is_fib,
    };
    Ok(QComposite { homotopy: QHomotopy { cyl, h: hh, f: h.f, g: h2.g }, pushout: po })
}

/// Convert a left q-homotopy to a right q-homotopy with the given path
/// object: lift `σ∘f` against the fibration `(δ0, δ1)` along the trivial
/// cofibration `d0`, then restrict along `d1`.
pub fn left_to_right(
    inst: &dyn ModelInstance,
    h: &QHomotopy,
    path: &PathObject,
) -> Result<RightHomotopy> {
    if !is_cofibrant(inst, h.cyl.base)? {
        return Err(Error::PreconditionFailed(format!(
            "base object {:?} must be cofibrant for left-to-right conversion",
            h.cyl.base
        )));
    }
    let y = inst.cod(h.f)?;
    if path.base != y {
        return Err(Error::Structural("path object is not over the homotopy codomain".into()));
    }
    let sigma_f = inst.compose(path.sigma, h.f)?;
    // Constant-homotopy shortcut: when h = f∘s the evident lift is σ∘f∘s.
    let k_full = if h.h == inst.compose(h.f, h.cyl.s)? {
        inst.compose(sigma_f, h.cyl.s)?
    } else {
        let pr = inst.product(y, y)?;
        let right_edge = inst.pair(&pr, path.delta0, path.delta1)?;
        let bottom = inst.pair(&pr, inst.compose(h.f, h.cyl.s)?, h.h)?;
        inst.solve_lift(&LiftProblem { i: h.cyl.d0, p: right_edge, top: sigma_f, bottom })?
    };
    let k = inst.compose(k_full, h.cyl.d1)?;
    Ok(RightHomotopy { path: *path, k, f: h.f, g: h.g })
}

/// How the zig-zag search obtains candidate cylinder-map edges.
pub enum EdgeSource<'a> {
    /// Exhaustive enumeration through the instance (finite instances only).
    Enumerate,
    /// Search only within a supplied set of recorded edges.
    Witnesses(&'a [GermEdge]),
}

/// Outcome of `germ_search`: either a connecting zig-zag (each step a
/// validated edge, `forward` saying whether it is traversed source-to-target)
/// or `NotFound`, which is inconclusive for bounded searches.
#[derive(Clone, Debug, Serialize)]
pub enum GermWitness {
    Connected { steps: Vec<(GermEdge, bool)> },
    NotFound { explored: usize, bound: usize },
}

impl GermWitness {
    pub fn connected(&self) -> bool {
        matches!(self, GermWitness::Connected { .. })
    }
}

fn homotopy_key(h: &Homotopy) -> (MorRef, MorRef, MorRef, MorRef, MorRef, MorRef) {
    (h.cyl.d0, h.cyl.d1, h.cyl.s, h.cyl.x, h.h, h.f)
}

/// Enumerate all cylinders for `x`, for instances that support object and
/// morphism enumeration.
pub fn enumerate_all_cylinders(
    inst: &dyn ModelInstance,
    x: crate::instance::ObjRef,
) -> Result<Vec<Cylinder>> {
    let objs = inst
        .enumerate_objects()
        .ok_or_else(|| Error::Unsupported("instance does not enumerate objects".into()))?;
    let mut out = Vec::new();
    for &w in &objs {
        let d_cands = inst.enumerate_morphisms(x, w).unwrap_or_default();
        if d_cands.is_empty() {
            continue;
        }
        for &z in &objs {
            let s_cands = inst.enumerate_morphisms(w, z).unwrap_or_default();
            for &s in &s_cands {
                if !inst.classify(s)?.is_we {
                    continue;
                }
                for &d0 in &d_cands {
                    for &d1 in &d_cands {
                        let x0 = inst.compose(s, d0)?;
                        if x0 != inst.compose(s, d1)? {
                            continue;
                        }
                        out.push(Cylinder {
                            base: x,
                            w,
                            z,
                            d0,
                            d1,
                            s,
                            x: x0,
                            fibrant: inst.classify(s)?.is_fib,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn edges_between(
    inst: &dyn ModelInstance,
    from: &Homotopy,
    to: &Homotopy,
) -> Result<Vec<GermEdge>> {
    // all cylinder maps (phi, psi): C_from -> C_to with h_to ∘ phi = h_from
    let mut out = Vec::new();
    let phis = inst.enumerate_morphisms(from.cyl.w, to.cyl.w).unwrap_or_default();
    let psis = inst.enumerate_morphisms(from.cyl.z, to.cyl.z).unwrap_or_default();
    for &phi in &phis {
        if inst.compose(to.h, phi)? != from.h {
            continue;
        }
        for &psi in &psis {
            let m = CylinderMap { source: from.cyl, target: to.cyl, phi, psi };
            if validate_cylinder_map(inst, &m)?.is_valid() {
                out.push(GermEdge { from: from.clone(), to: to.clone(), map: m });
            }
        }
    }
    Ok(out)
}

/// Breadth-first zig-zag search connecting two homotopies with the same
/// endpoints through cylinder maps. With `EdgeSource::Enumerate` the search
/// is exhaustive over all homotopies `f ⇝ g` of the instance (the bound is
/// ignored); with recorded witnesses it walks the witness graph up to the
/// given zig-zag length. `NotFound` is never a disproof for bounded search.
pub fn germ_search(
    inst: &dyn ModelInstance,
    a: &Homotopy,
    b: &Homotopy,
    bound: usize,
    source: EdgeSource,
) -> Result<GermWitness> {
    if a.f != b.f || a.g != b.g {
        return Err(Error::EndpointMismatch("germ search requires equal endpoints".into()));
    }
    if homotopy_key(a) == homotopy_key(b) {
        return Ok(GermWitness::Connected { steps: Vec::new() });
    }
    let exhaustive = matches!(source, EdgeSource::Enumerate);
    let edges: Vec<GermEdge> = match source {
        EdgeSource::Witnesses(ws) => ws.to_vec(),
        EdgeSource::Enumerate => {
            let cyls = enumerate_all_cylinders(inst, inst.dom(a.f)?)?;
            let mut homotopies = Vec::new();
            for c in &cyls {
                let hs = inst.enumerate_morphisms(c.w, inst.cod(a.f)?).unwrap_or_default();
                for &hm in &hs {
                    if inst.compose(hm, c.d0)? == a.f && inst.compose(hm, c.d1)? == a.g {
                        homotopies.push(Homotopy { cyl: *c, h: hm, f: a.f, g: a.g });
                    }
                }
            }
            let mut edges = Vec::new();
            for hf in &homotopies {
                for ht in &homotopies {
                    edges.extend(edges_between(inst, hf, ht)?);
                }
            }
            edges
        }
    };
    let effective_bound = if exhaustive { usize::MAX } else { bound };
    // BFS over homotopy nodes through edges in either direction.
    let mut adj: HashMap<_, Vec<(usize, bool)>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        adj.entry(homotopy_key(&e.from)).or_default().push((i, true));
        adj.entry(homotopy_key(&e.to)).or_default().push((i, false));
    }
    let target = homotopy_key(b);
    let mut queue = VecDeque::new();
    let mut seen = HashMap::new();
    let start = homotopy_key(a);
    seen.insert(start, usize::MAX);
    queue.push_back((start, 0usize, Vec::new()));
    let mut explored = 0usize;
    while let Some((node, depth, trail)) = queue.pop_front() {
        explored += 1;
        if node == target {
            let steps = trail
                .iter()
                .map(|&(i, fwd): &(usize, bool)| (edges[i].clone(), fwd))
                .collect::<Vec<_>>();
            for (e, _) in &steps {
                if !e.validate(inst)? {
                    return Err(Error::Structural("recorded germ edge failed validation".into()));
                }
            }
            return Ok(GermWitness::Connected { steps });
        }
        if depth >= effective_bound {
            continue;
        }
        for &(i, fwd) in adj.get(&node).into_iter().flatten() {
            let next = if fwd { homotopy_key(&edges[i].to) } else { homotopy_key(&edges[i].from) };
            if seen.contains_key(&next) {
                continue;
            }
            seen.insert(next, i);
            let mut t = trail.clone();
            t.push((i, fwd));
            queue.push_back((next, depth + 1, t));
        }
    }
    Ok(GermWitness::NotFound { explored, bound })
}

/// Split factorization of a weak equivalence with fibrant domain and
/// cofibrant codomain: `s = p ∘ i` with `i` a trivial cofibration split by a
/// retraction and `p` a trivial fibration split by a section.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SplitWe {
    pub i: MorRef,
    pub p: MorRef,
    pub retraction_of_i: MorRef,
    pub section_of_p: MorRef,
    pub middle: crate::instance::ObjRef,
}

pub fn split_we(inst: &dyn ModelInstance, s: MorRef) -> Result<SplitWe> {
    let flags = inst.classify(s)?;
    if !flags.is_we {
        return Err(Error::PreconditionFailed("split_we needs a weak equivalence".into()));
    }
    let x = inst.dom(s)?;
    let y = inst.cod(s)?;
    if !is_fibrant(inst, x)? {
        return Err(Error::PreconditionFailed(format!("domain {x:?} must be fibrant")));
    }
    if !is_cofibrant(inst, y)? {
        return Err(Error::PreconditionFailed(format!("codomain {y:?} must be cofibrant")));
    }
    let fac = inst.factorize(s, FactorizationSystem::CofThenTrivFib)?;
    let i = fac.left;
    let p = fac.right;
    let mid = inst.cod(i)?;
    // X fibrant: lift against the terminal map retracts i.
    let retraction = inst.solve_lift(&LiftProblem {
        i,
        p: inst.to_terminal(x)?,
        top: inst.identity(x)?,
        bottom: inst.to_terminal(mid)?,
    })?;
    // Y cofibrant: lift from the initial map sections p.
    let section = inst.solve_lift(&LiftProblem {
        i: inst.from_initial(y)?,
        p,
        top: inst.from_initial(mid)?,
        bottom: inst.identity(y)?,
    })?;
    Ok(SplitWe { i, p, retraction_of_i: retraction, section_of_p: section, middle: mid })
}

/// The homotopy `s∘r ⇝ id` attached to a split weak equivalence `s` with
/// left inverse `r` (`r∘s = id`): cylinder `(Y, X, s∘r, id, r, r)` with
/// homotopy map `id_Y`.
pub fn section_counit_homotopy(
    inst: &dyn ModelInstance,
    s: MorRef,
    r: MorRef,
) -> Result<Homotopy> {
    let x = inst.dom(s)?;
    let y = inst.cod(s)?;
    if inst.compose(r, s)? != inst.identity(x)? {
        return Err(Error::PreconditionFailed("r is not a left inverse of s".into()));
    }
    let sr = inst.compose(s, r)?;
    let cyl = Cylinder {
        base: y,
        w: y,
        z: x,
        d0: sr,
        d1: inst.identity(y)?,
        s: r,
        x: r,
        fibrant: inst.classify(r)?.is_fib,
    };
    Ok(Homotopy { cyl, h: inst.identity(y)?, f: sr, g: inst.identity(y)? })
}

/// The homotopy `id ⇝ σ∘p` attached to a split weak equivalence `p` with
/// right inverse `σ` (`p∘σ = id`): cylinder `(Z, Y, id, σ∘p, p, p)` with
/// homotopy map `id_Z`.
pub fn retraction_unit_homotopy(
    inst: &dyn ModelInstance,
    p: MorRef,
    sigma: MorRef,
) -> Result<Homotopy> {
    let z = inst.dom(p)?;
    let y = inst.cod(p)?;
    if inst.compose(p, sigma)? != inst.identity(y)? {
        return Err(Error::PreconditionFailed("sigma is not a right inverse of p".into()));
    }
    let sp = inst.compose(sigma, p)?;
    let cyl = Cylinder {
        base: z,
        w: z,
        z: y,
        d0: inst.identity(z)?,
        d1: sp,
        s: p,
        x: p,
        fibrant: inst.classify(p)?.is_fib,
    };
    Ok(Homotopy { cyl, h: inst.identity(z)?, f: inst.identity(z)?, g: sp })
}

/// Quasi-inverse data for a weak equivalence between fibrant-cofibrant
/// objects, as raw homotopies (the 2-cell layer wraps these into classes).
#[derive(Clone, Debug)]
pub struct EquivalenceHomotopies {
    pub forward: MorRef,
    pub quasi_inverse: MorRef,
    /// `id_X ⇝ quasi_inverse ∘ forward`
    pub unit: Homotopy,
    /// `forward ∘ quasi_inverse ⇝ id_Y`
    pub counit: Homotopy,
    pub split: SplitWe,
}

/// Compose the split factorization with the section/retraction homotopies
/// into quasi-inverse data: `g = r_i ∘ σ_p`, the unit is the whiskered
/// retraction-unit homotopy of `p`, the counit the whiskered section-counit
/// homotopy of `i`.
pub fn we_equivalence_data(inst: &dyn ModelInstance, s: MorRef) -> Result<EquivalenceHomotopies> {
    let x = inst.dom(s)?;
    let y = inst.cod(s)?;
    if !crate::instance::is_fibrant_cofibrant(inst, x)?
        || !crate::instance::is_fibrant_cofibrant(inst, y)?
    {
        return Err(Error::PreconditionFailed(
            "equivalence data needs fibrant-cofibrant endpoints".into(),
        ));
    }
    let sp = split_we(inst, s)?;
    let g = inst.compose(sp.retraction_of_i, sp.section_of_p)?;
    // unit: id_X = r_i ∘ id_Z ∘ i ⇝ r_i ∘ (σ_p ∘ p) ∘ i = g ∘ s
    let unit_mid = retraction_unit_homotopy(inst, sp.p, sp.section_of_p)?;
    let unit = whisker_post(inst, &whisker_pre(inst, &unit_mid, sp.i)?, sp.retraction_of_i)?;
    // counit: s ∘ g = p ∘ (i ∘ r_i) ∘ σ_p ⇝ p ∘ id_Z ∘ σ_p = id_Y
    let counit_mid = section_counit_homotopy(inst, sp.i, sp.retraction_of_i)?;
    let counit = whisker_post(inst, &whisker_pre(inst, &counit_mid, sp.section_of_p)?, sp.p)?;
    Ok(EquivalenceHomotopies { forward: s, quasi_inverse: g, unit, counit, split: sp })
}

/// Lift a q-homotopy `p∘f ⇝ p∘g` along a trivial fibration `p` to a
/// q-homotopy `f ⇝ g` on the same cylinder; the lifted 2-cell is the unique
/// one with `p∘[H'] = [H]`.
pub fn lift_2cell(
    inst: &dyn ModelInstance,
    p: MorRef,
    h: &QHomotopy,
    f: MorRef,
    g: MorRef,
) -> Result<QHomotopy> {
    let flags = inst.classify(p)?;
    if !flags.is_triv_fib() {
        return Err(Error::PreconditionFailed("lift_2cell needs a trivial fibration".into()));
    }
    if inst.compose(p, f)? != h.f || inst.compose(p, g)? != h.g {
        return Err(Error::EndpointMismatch(
            "homotopy endpoints are not p∘f and p∘g".into(),
        ));
    }
    if p == inst.identity(inst.dom(p)?)? {
        return Ok(QHomotopy { cyl: h.cyl, h: h.h, f, g });
    }
    let base = h.cyl.base;
    let cp = inst.coproduct(base, base)?;
    let left_edge = inst.copair(&cp, h.cyl.d0, h.cyl.d1)?;
    let top = inst.copair(&cp, f, g)?;
    let lifted = inst.solve_lift(&LiftProblem { i: left_edge, p, top, bottom: h.h })?;
    Ok(QHomotopy { cyl: h.cyl, h: lifted, f, g })
}

/// Vertical composite of a q-homotopy with the identity q-homotopy of its
/// target, used in tests and the 2-cell layer.
pub fn compose_with_identity(
    inst: &dyn ModelInstance,
    h: &QHomotopy,
) -> Result<QComposite> {
    let idh = identity_q_homotopy(inst, h.g)?;
    compose_q(inst, h, &idh)
}

/// Functorial image of homotopies under a class-preserving map of instances
/// (or an endofunctor of one instance).
pub trait InstanceFunctor {
    fn map_obj(&self, x: crate::instance::ObjRef) -> Result<crate::instance::ObjRef>;
    fn map_mor(&self, f: MorRef) -> Result<MorRef>;
}

/// Apply a functor to every component of a homotopy, checking that the image
/// cylinder is still a cylinder (the functor must preserve the classes the
/// cylinder needs).
pub fn map_homotopy<F: InstanceFunctor + ?Sized>(
    inst: &dyn ModelInstance,
    functor: &F,
    h: &Homotopy,
) -> Result<Homotopy> {
    let cyl = Cylinder {
        base: functor.map_obj(h.cyl.base)?,
        w: functor.map_obj(h.cyl.w)?,
        z: functor.map_obj(h.cyl.z)?,
        d0: functor.map_mor(h.cyl.d0)?,
        d1: functor.map_mor(h.cyl.d1)?,
        s: functor.map_mor(h.cyl.s)?,
        x: functor.map_mor(h.cyl.x)?,
        fibrant: false,
    };
    let s_flags = inst.classify(cyl.s)?;
    if !s_flags.is_we {
        return Err(Error::PreconditionFailed(
            "functor image of the cylinder's weak equivalence is not a weak equivalence".into(),
        ));
    }
    let cyl = Cylinder { fibrant: s_flags.is_fib, ..cyl };
    let out = Homotopy {
        cyl,
        h: functor.map_mor(h.h)?,
        f: functor.map_mor(h.f)?,
        g: functor.map_mor(h.g)?,
    };
    let d = crate::cylinder::validate_homotopy(inst, &out)?;
    if !d.is_valid() {
        return Err(Error::PreconditionFailed(format!(
            "functor image is not a homotopy: failed {:?}",
            d.failures()
        )));
    }
    Ok(out)
}

/// Post-whisker a q-homotopy and keep q-form (same cylinder).
pub fn whisker_post_preserves_q(
    inst: &dyn ModelInstance,
    h: &QHomotopy,
    r: MorRef,
) -> Result<QHomotopy> {
    whisker_post_q(inst, h, r)
}
