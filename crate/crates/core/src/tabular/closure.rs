//! The germ-generated congruence on homotopies of a tabular instance:
//! enumerate every homotopy of the category, union nodes related by a
//! cylinder map compatible with the homotopy arrows, then close under
//! inversion, whiskering on both sides, and pushout composition by fixpoint
//! iteration. The resulting partition is the instance's oracle.

use std::collections::BTreeMap;

use crate::calculus::{compose_q, enumerate_all_cylinders};
use crate::cylinder::validate_cylinder_map;
use crate::cylinder::{
    invert_homotopy, whisker_post, whisker_pre, CylinderMap, Homotopy, QCylinder, QHomotopy,
};
use crate::instance::{is_cofibrant, Error, ModelInstance, MorRef, Result};

use super::TabularInstance;

type HKey = (MorRef, MorRef, MorRef, MorRef, MorRef);

fn key(h: &Homotopy) -> HKey {
    (h.cyl.d0, h.cyl.d1, h.cyl.s, h.cyl.x, h.h)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The computed partition of all homotopies of the instance.
pub struct CongruenceClosure {
    nodes: Vec<Homotopy>,
    index: BTreeMap<HKey, usize>,
    class_of: Vec<usize>,
}

impl CongruenceClosure {
    fn node(&self, h: &Homotopy) -> Result<usize> {
        self.index
            .get(&key(h))
            .copied()
            .ok_or_else(|| Error::Structural("homotopy is not in the enumerated universe".into()))
    }

    /// Oracle equality: same class in the closure.
    pub fn equal(&self, a: &Homotopy, b: &Homotopy) -> Result<bool> {
        if a.f != b.f || a.g != b.g {
            return Err(Error::EndpointMismatch("closure query needs common endpoints".into()));
        }
        Ok(self.class_of[self.node(a)?] == self.class_of[self.node(b)?])
    }

    /// Classes as sorted lists of node indices (deterministic).
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in self.class_of.iter().enumerate() {
            by_class.entry(c).or_default().push(i);
        }
        by_class.into_values().collect()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn homotopies(&self) -> &[Homotopy] {
        &self.nodes
    }

    /// Any enumerated q-form homotopy `f ⇝ g`, preferring the instance's
    /// chosen q-cylinder shape.
    pub fn find_q_homotopy(
        &self,
        inst: &TabularInstance,
        f: MorRef,
        g: MorRef,
    ) -> Option<QHomotopy> {
        for h in &self.nodes {
            if h.f != f || h.g != g {
                continue;
            }
            if let Ok(Some(q)) = as_q_form(inst, h) {
                return Some(q);
            }
        }
        None
    }
}

fn as_q_form(inst: &dyn ModelInstance, h: &Homotopy) -> Result<Option<QHomotopy>> {
    let id = inst.identity(h.cyl.base)?;
    if h.cyl.z != h.cyl.base || h.cyl.x != id {
        return Ok(None);
    }
    let cp = inst.coproduct(h.cyl.base, h.cyl.base)?;
    let combined = inst.copair(&cp, h.cyl.d0, h.cyl.d1)?;
    if !inst.classify(combined)?.is_cof {
        return Ok(None);
    }
    Ok(Some(QHomotopy {
        cyl: QCylinder {
            base: h.cyl.base,
            w: h.cyl.w,
            d0: h.cyl.d0,
            d1: h.cyl.d1,
            s: h.cyl.s,
            fibrant: inst.classify(h.cyl.s)?.is_fib,
        },
        h: h.h,
        f: h.f,
        g: h.g,
    }))
}

/// Enumerate all homotopies and compute the closure.
pub(super) fn build(inst: &TabularInstance) -> Result<CongruenceClosure> {
    let objects = inst.all_objects();
    let mut nodes: Vec<Homotopy> = Vec::new();
    for &x in &objects {
        let cyls = enumerate_all_cylinders(inst, x)?;
        for c in &cyls {
            for &y in &objects {
                for h in inst.mors_between(c.w, y) {
                    let f = inst.compose(h, c.d0)?;
                    let g = inst.compose(h, c.d1)?;
                    nodes.push(Homotopy { cyl: *c, h, f, g });
                }
            }
        }
    }
    let index: BTreeMap<HKey, usize> =
        nodes.iter().enumerate().map(|(i, h)| (key(h), i)).collect();
    let mut uf = UnionFind::new(nodes.len());

    // germ generators: cylinder maps compatible with the homotopy arrows
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate() {
            if i == j || a.f != b.f || a.g != b.g {
                continue;
            }
            // map a.cyl -> b.cyl with b.h ∘ phi = a.h
            for phi in inst.mors_between(a.cyl.w, b.cyl.w) {
                if inst.compose(b.h, phi)? != a.h {
                    continue;
                }
                for psi in inst.mors_between(a.cyl.z, b.cyl.z) {
                    let m = CylinderMap { source: a.cyl, target: b.cyl, phi, psi };
                    if validate_cylinder_map(inst, &m)?.is_valid() {
                        uf.union(i, j);
                    }
                }
            }
        }
    }

    // close under the 2-categorical operations
    let all_mors = inst.all_mors();
    loop {
        let mut changed = false;
        let reps: Vec<usize> = (0..nodes.len()).map(|i| uf.find(i)).collect();
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &r) in reps.iter().enumerate() {
            by_class.entry(r).or_default().push(i);
        }
        for members in by_class.values() {
            let first = members[0];
            for &other in &members[1..] {
                // inversion
                if let (Some(&ia), Some(&ib)) = (
                    index.get(&key(&invert_homotopy(&nodes[first]))),
                    index.get(&key(&invert_homotopy(&nodes[other]))),
                ) {
                    changed |= uf.union(ia, ib);
                }
                // whiskering on both sides by every composable arrow
                for &l in &all_mors {
                    if inst.cod(l)? == nodes[first].cyl.base {
                        let wa = whisker_pre(inst, &nodes[first], l)?;
                        let wb = whisker_pre(inst, &nodes[other], l)?;
                        if let (Some(&ia), Some(&ib)) = (index.get(&key(&wa)), index.get(&key(&wb))) {
                            changed |= uf.union(ia, ib);
                        }
                    }
                    if inst.dom(l)? == inst.cod(nodes[first].h)? {
                        let wa = whisker_post(inst, &nodes[first], l)?;
                        let wb = whisker_post(inst, &nodes[other], l)?;
                        if let (Some(&ia), Some(&ib)) = (index.get(&key(&wa)), index.get(&key(&wb))) {
                            changed |= uf.union(ia, ib);
                        }
                    }
                }
                // pushout composition with every composable q-homotopy,
                // substituted into either slot
                for third in 0..nodes.len() {
                    changed |=
                        union_composites(inst, &nodes, &index, &mut uf, (first, third), (other, third))?;
                    changed |=
                        union_composites(inst, &nodes, &index, &mut uf, (third, first), (third, other))?;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let class_of: Vec<usize> = (0..nodes.len()).map(|i| uf.find(i)).collect();
    Ok(CongruenceClosure { nodes, index, class_of })
}

/// Compose the two node pairs as q-homotopies (when both slots are in
/// q-form and composable) and union the results.
fn union_composites(
    inst: &TabularInstance,
    nodes: &[Homotopy],
    index: &BTreeMap<HKey, usize>,
    uf: &mut UnionFind,
    (a1, b1): (usize, usize),
    (a2, b2): (usize, usize),
) -> Result<bool> {
    if nodes[a1].g != nodes[b1].f || nodes[a2].g != nodes[b2].f {
        return Ok(false);
    }
    let (Some(l1), Some(r1)) = (as_q_form(inst, &nodes[a1])?, as_q_form(inst, &nodes[b1])?) else {
        return Ok(false);
    };
    let (Some(l2), Some(r2)) = (as_q_form(inst, &nodes[a2])?, as_q_form(inst, &nodes[b2])?) else {
        return Ok(false);
    };
    if !is_cofibrant(inst, l1.cyl.base)? || !is_cofibrant(inst, l2.cyl.base)? {
        return Ok(false);
    }
    let (Ok(c1), Ok(c2)) = (compose_q(inst, &l1, &r1), compose_q(inst, &l2, &r2)) else {
        return Ok(false);
    };
    let h1 = c1.homotopy.as_homotopy(inst)?;
    let h2 = c2.homotopy.as_homotopy(inst)?;
    if let (Some(&n1), Some(&n2)) = (index.get(&key(&h1)), index.get(&key(&h2))) {
        Ok(uf.union(n1, n2))
    } else {
        Ok(false)
    }
}
