//! Exhaustive axiom validation for tabular instances: category laws, chosen
//! finite (co)limits, lifting, class closure (including retracts),
//! factorization tables, three-for-two, two-for-one, plus the
//! split-generation and middle-map reports.

use serde::Serialize;

use crate::instance::{FactorizationSystem, LiftProblem, ModelInstance, MorRef};
use crate::par;

use super::TabularInstance;

/// A lifting square, reported by morphism name.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct SquareId {
    pub i: String,
    pub p: String,
    pub top: String,
    pub bottom: String,
}

/// One violated axiom instance.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

/// The full validation outcome. `violations` empty means the spec is a model
/// category with coherent chosen structure; the extra reports record
/// properties that are hypotheses of downstream theorems rather than axioms.
#[derive(Serialize, Debug, Clone)]
pub struct ValidationReport {
    pub name: String,
    pub objects: usize,
    pub morphisms: usize,
    pub violations: Vec<Violation>,
    /// every weak equivalence is a composite of split weak equivalences
    pub weak_equivalences_split_generated: bool,
    /// the same property restricted to weak equivalences between
    /// fibrant-cofibrant objects (the hypothesis localization consumes)
    pub fc_weak_equivalences_split_generated: bool,
    /// middle maps exist for every commuting square between factored arrows
    pub middle_maps_exist: bool,
    /// the declared functorial flag of the spec
    pub declared_functorial: bool,
    pub declared_normal: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn v(axiom: &str, detail: String) -> Violation {
    Violation { axiom: axiom.to_string(), detail }
}

impl TabularInstance {
    /// Run every check; deterministic order of violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        self.check_category_laws(&mut violations);
        self.check_limits(&mut violations);
        self.check_lifting(&mut violations);
        self.check_class_closure(&mut violations);
        self.check_factorizations(&mut violations);
        self.check_three_for_two(&mut violations);
        self.check_lift_table(&mut violations);
        let split = self.split_generation_report(false);
        let split_fc = self.split_generation_report(true);
        let middles = self.middle_maps_exist();
        if self.functorial && !middles {
            violations.push(v(
                "M4/functorial",
                "factorization tables are declared functorial but some commuting square has no middle map".into(),
            ));
        }
        ValidationReport {
            name: self.spec_name.clone(),
            objects: self.objects.len(),
            morphisms: self.mors.len(),
            violations,
            weak_equivalences_split_generated: split,
            fc_weak_equivalences_split_generated: split_fc,
            middle_maps_exist: middles,
            declared_functorial: self.functorial,
            declared_normal: self.normal,
        }
    }

    fn check_category_laws(&self, out: &mut Vec<Violation>) {
        // identities exist and are two-sided units
        for (i, name) in self.objects.iter().enumerate() {
            let x = crate::instance::ObjRef(i as u32);
            match self.identity(x) {
                Err(_) => out.push(v("category/identity", format!("object {name} has no identity"))),
                Ok(id) => {
                    if self.dom(id).ok() != Some(x) || self.cod(id).ok() != Some(x) {
                        out.push(v(
                            "category/identity",
                            format!("identity of {name} is not an endomorphism of {name}"),
                        ));
                    }
                }
            }
        }
        // composition total on composable pairs, with correct boundaries
        for f in self.all_mors() {
            for g in self.all_mors() {
                if self.cod(f).unwrap() != self.dom(g).unwrap() {
                    continue;
                }
                match self.comp.get(&(f.0, g.0)) {
                    None => out.push(v(
                        "category/composition",
                        format!("missing composite {};{}", self.mor_name(f), self.mor_name(g)),
                    )),
                    Some(&h) => {
                        if self.dom(h).unwrap() != self.dom(f).unwrap()
                            || self.cod(h).unwrap() != self.cod(g).unwrap()
                        {
                            out.push(v(
                                "category/composition",
                                format!(
                                    "composite {};{} has wrong boundaries",
                                    self.mor_name(f),
                                    self.mor_name(g)
                                ),
                            ));
                        }
                    }
                }
            }
        }
        if !out.is_empty() {
            // unit/associativity checks need a total table
            return;
        }
        for f in self.all_mors() {
            let idd = self.identity(self.dom(f).unwrap());
            let idc = self.identity(self.cod(f).unwrap());
            if let (Ok(idd), Ok(idc)) = (idd, idc) {
                if self.compose(f, idd).unwrap() != f {
                    out.push(v("category/identity", format!("{} ∘ id != {0}", self.mor_name(f))));
                }
                if self.compose(idc, f).unwrap() != f {
                    out.push(v("category/identity", format!("id ∘ {} != {0}", self.mor_name(f))));
                }
            }
        }
        // associativity over all composable triples, in parallel
        let mors = self.all_mors();
        let mut triples: Vec<(MorRef, MorRef, MorRef)> = Vec::new();
        for &f in &mors {
            for &g in &mors {
                for &h in &mors {
                    triples.push((f, g, h));
                }
            }
        }
        let bad = par::failures(&triples, |&(f, g, h)| {
            if self.cod(f).ok()? != self.dom(g).ok()? || self.cod(g).ok()? != self.dom(h).ok()? {
                return None;
            }
            let left = self.compose(h, self.compose(g, f).ok()?).ok()?;
            let right = self.compose(self.compose(h, g).ok()?, f).ok()?;
            if left != right {
                Some(v(
                    "category/associativity",
                    format!(
                        "({};{});{} != {};({};{})",
                        self.mor_name(f),
                        self.mor_name(g),
                        self.mor_name(h),
                        self.mor_name(f),
                        self.mor_name(g),
                        self.mor_name(h)
                    ),
                ))
            } else {
                None
            }
        });
        out.extend(bad);
    }

    fn check_limits(&self, out: &mut Vec<Violation>) {
        match self.initial {
            None => out.push(v("M1/initial", "no initial object designated".into())),
            Some(zero) => {
                for x in self.all_objects() {
                    let n = self.mors_between(zero, x).len();
                    if n != 1 {
                        out.push(v(
                            "M1/initial",
                            format!("{} arrows from the initial object to {}", n, self.object_name(x)),
                        ));
                    }
                }
            }
        }
        match self.terminal {
            None => out.push(v("M1/terminal", "no terminal object designated".into())),
            Some(one) => {
                for x in self.all_objects() {
                    let n = self.mors_between(x, one).len();
                    if n != 1 {
                        out.push(v(
                            "M1/terminal",
                            format!("{} arrows from {} to the terminal object", n, self.object_name(x)),
                        ));
                    }
                }
            }
        }
        // chosen coproducts: cocone structure plus the universal property
        for (&(x, y), cp) in &self.coproducts {
            let (x, y) = (crate::instance::ObjRef(x), crate::instance::ObjRef(y));
            let label = format!("{} ⊔ {}", self.object_name(x), self.object_name(y));
            if self.dom(cp.inj0).unwrap() != x
                || self.dom(cp.inj1).unwrap() != y
                || self.cod(cp.inj0).unwrap() != cp.obj
                || self.cod(cp.inj1).unwrap() != cp.obj
            {
                out.push(v("M1/coproduct", format!("{label}: injections have wrong boundaries")));
                continue;
            }
            for t in self.all_objects() {
                for t1 in self.mors_between(x, t) {
                    for t2 in self.mors_between(y, t) {
                        let mediators = self
                            .mors_between(cp.obj, t)
                            .into_iter()
                            .filter(|&u| {
                                self.compose(u, cp.inj0).unwrap() == t1
                                    && self.compose(u, cp.inj1).unwrap() == t2
                            })
                            .count();
                        if mediators != 1 {
                            out.push(v(
                                "M1/coproduct",
                                format!(
                                    "{label}: cocone ({}, {}) has {} mediating arrows",
                                    self.mor_name(t1),
                                    self.mor_name(t2),
                                    mediators
                                ),
                            ));
                        }
                    }
                }
            }
        }
        for (&(x, y), pr) in &self.products {
            let (x, y) = (crate::instance::ObjRef(x), crate::instance::ObjRef(y));
            let label = format!("{} × {}", self.object_name(x), self.object_name(y));
            if self.cod(pr.proj0).unwrap() != x
                || self.cod(pr.proj1).unwrap() != y
                || self.dom(pr.proj0).unwrap() != pr.obj
                || self.dom(pr.proj1).unwrap() != pr.obj
            {
                out.push(v("M1/product", format!("{label}: projections have wrong boundaries")));
                continue;
            }
            for t in self.all_objects() {
                for t1 in self.mors_between(t, x) {
                    for t2 in self.mors_between(t, y) {
                        let mediators = self
                            .mors_between(t, pr.obj)
                            .into_iter()
                            .filter(|&u| {
                                self.compose(pr.proj0, u).unwrap() == t1
                                    && self.compose(pr.proj1, u).unwrap() == t2
                            })
                            .count();
                        if mediators != 1 {
                            out.push(v(
                                "M1/product",
                                format!(
                                    "{label}: cone ({}, {}) has {} mediating arrows",
                                    self.mor_name(t1),
                                    self.mor_name(t2),
                                    mediators
                                ),
                            ));
                        }
                    }
                }
            }
        }
        for (&(f, g), po) in &self.pushouts {
            let (f, g) = (MorRef(f), MorRef(g));
            let label = format!("pushout({}, {})", self.mor_name(f), self.mor_name(g));
            if self.dom(f).unwrap() != self.dom(g).unwrap() {
                out.push(v("M1/pushout", format!("{label}: not a span")));
                continue;
            }
            let ok_bounds = self.dom(po.inc0).unwrap() == self.cod(f).unwrap()
                && self.dom(po.inc1).unwrap() == self.cod(g).unwrap()
                && self.cod(po.inc0).unwrap() == po.obj
                && self.cod(po.inc1).unwrap() == po.obj;
            if !ok_bounds {
                out.push(v("M1/pushout", format!("{label}: inclusions have wrong boundaries")));
                continue;
            }
            if self.compose(po.inc0, f).unwrap() != self.compose(po.inc1, g).unwrap() {
                out.push(v("M1/pushout", format!("{label}: square does not commute")));
                continue;
            }
            for t in self.all_objects() {
                for u in self.mors_between(self.cod(f).unwrap(), t) {
                    for w in self.mors_between(self.cod(g).unwrap(), t) {
                        if self.compose(u, f).unwrap() != self.compose(w, g).unwrap() {
                            continue;
                        }
                        let mediators = self
                            .mors_between(po.obj, t)
                            .into_iter()
                            .filter(|&m| {
                                self.compose(m, po.inc0).unwrap() == u
                                    && self.compose(m, po.inc1).unwrap() == w
                            })
                            .count();
                        if mediators != 1 {
                            out.push(v(
                                "M1/pushout",
                                format!(
                                    "{label}: cocone ({}, {}) has {} mediating arrows",
                                    self.mor_name(u),
                                    self.mor_name(w),
                                    mediators
                                ),
                            ));
                        }
                    }
                }
            }
        }
        for (&(f, g), &(obj, pr0, pr1)) in &self.pullbacks {
            let (f, g) = (MorRef(f), MorRef(g));
            let label = format!("pullback({}, {})", self.mor_name(f), self.mor_name(g));
            if self.cod(f).unwrap() != self.cod(g).unwrap() {
                out.push(v("M1/pullback", format!("{label}: not a cospan")));
                continue;
            }
            let ok_bounds = self.cod(pr0).unwrap() == self.dom(f).unwrap()
                && self.cod(pr1).unwrap() == self.dom(g).unwrap()
                && self.dom(pr0).unwrap() == obj
                && self.dom(pr1).unwrap() == obj;
            if !ok_bounds {
                out.push(v("M1/pullback", format!("{label}: projections have wrong boundaries")));
                continue;
            }
            if self.compose(f, pr0).unwrap() != self.compose(g, pr1).unwrap() {
                out.push(v("M1/pullback", format!("{label}: square does not commute")));
                continue;
            }
            for t in self.all_objects() {
                for u in self.mors_between(t, self.dom(f).unwrap()) {
                    for w in self.mors_between(t, self.dom(g).unwrap()) {
                        if self.compose(f, u).unwrap() != self.compose(g, w).unwrap() {
                            continue;
                        }
                        let mediators = self
                            .mors_between(t, obj)
                            .into_iter()
                            .filter(|&m| {
                                self.compose(pr0, m).unwrap() == u
                                    && self.compose(pr1, m).unwrap() == w
                            })
                            .count();
                        if mediators != 1 {
                            out.push(v(
                                "M1/pullback",
                                format!(
                                    "{label}: cone ({}, {}) has {} mediating arrows",
                                    self.mor_name(u),
                                    self.mor_name(w),
                                    mediators
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }

    /// All qualifying (trivial-cofibration, fibration) and
    /// (cofibration, trivial-fibration) squares must have a lift.
    fn check_lifting(&self, out: &mut Vec<Violation>) {
        let mors = self.all_mors();
        let mut squares = Vec::new();
        for &i in &mors {
            let fi = self.classify(i).unwrap();
            for &p in &mors {
                let fp = self.classify(p).unwrap();
                let qualifies =
                    (fi.is_triv_cof() && fp.is_fib) || (fi.is_cof && fp.is_triv_fib());
                if !qualifies {
                    continue;
                }
                for top in self.mors_between(self.dom(i).unwrap(), self.dom(p).unwrap()) {
                    for bottom in self.mors_between(self.cod(i).unwrap(), self.cod(p).unwrap()) {
                        if self.compose(p, top).unwrap() == self.compose(bottom, i).unwrap() {
                            squares.push(LiftProblem { i, p, top, bottom });
                        }
                    }
                }
            }
        }
        let bad = par::failures(&squares, |prob| {
            match self.enumerate_lifts(prob) {
                Ok(sols) if !sols.is_empty() => None,
                _ => Some(v(
                    "M2/lift",
                    format!(
                        "square i={}, p={}, top={}, bottom={} has no lift",
                        self.mor_name(prob.i),
                        self.mor_name(prob.p),
                        self.mor_name(prob.top),
                        self.mor_name(prob.bottom)
                    ),
                )),
            }
        });
        out.extend(bad);
    }

    fn check_class_closure(&self, out: &mut Vec<Violation>) {
        // identities belong to all three classes
        for x in self.all_objects() {
            if let Ok(id) = self.identity(x) {
                let fl = self.classify(id).unwrap();
                if !(fl.is_we && fl.is_fib && fl.is_cof) {
                    out.push(v(
                        "M3/identities",
                        format!("identity of {} is missing a class flag", self.object_name(x)),
                    ));
                }
            }
        }
        // closure under composition
        for (&(f, g), &h) in &self.comp {
            let (f, g) = (MorRef(f), MorRef(g));
            let (ff, fg, fh) = (
                self.classify(f).unwrap(),
                self.classify(g).unwrap(),
                self.classify(h).unwrap(),
            );
            for (class, cf, cg, ch) in [
                ("weak equivalences", ff.is_we, fg.is_we, fh.is_we),
                ("fibrations", ff.is_fib, fg.is_fib, fh.is_fib),
                ("cofibrations", ff.is_cof, fg.is_cof, fh.is_cof),
            ] {
                if cf && cg && !ch {
                    out.push(v(
                        "M3/composition",
                        format!(
                            "{class} not closed: {};{} = {}",
                            self.mor_name(f),
                            self.mor_name(g),
                            self.mor_name(h)
                        ),
                    ));
                }
            }
        }
        // closure under retracts: f is a retract of g via (i_x, r_x, i_y, r_y)
        let mors = self.all_mors();
        for &f in &mors {
            for &g in &mors {
                if !self.is_retract_of(f, g) {
                    continue;
                }
                let (ff, fg) = (self.classify(f).unwrap(), self.classify(g).unwrap());
                for (class, cf, cg) in [
                    ("weak equivalences", ff.is_we, fg.is_we),
                    ("fibrations", ff.is_fib, fg.is_fib),
                    ("cofibrations", ff.is_cof, fg.is_cof),
                ] {
                    if cg && !cf {
                        out.push(v(
                            "M3/retract",
                            format!(
                                "{} is a retract of {} but not in {class}",
                                self.mor_name(f),
                                self.mor_name(g)
                            ),
                        ));
                    }
                }
            }
        }
    }

    fn is_retract_of(&self, f: MorRef, g: MorRef) -> bool {
        let (fx, fy) = (self.dom(f).unwrap(), self.cod(f).unwrap());
        let (gx, gy) = (self.dom(g).unwrap(), self.cod(g).unwrap());
        let idx = self.identity(fx);
        let idy = self.identity(fy);
        let (Ok(idx), Ok(idy)) = (idx, idy) else { return false };
        for ix in self.mors_between(fx, gx) {
            for rx in self.mors_between(gx, fx) {
                if self.compose(rx, ix).unwrap() != idx {
                    continue;
                }
                for iy in self.mors_between(fy, gy) {
                    for ry in self.mors_between(gy, fy) {
                        if self.compose(ry, iy).unwrap() != idy {
                            continue;
                        }
                        let left = self.compose(g, ix).unwrap() == self.compose(iy, f).unwrap();
                        let right = self.compose(ry, g).unwrap() == self.compose(f, rx).unwrap();
                        if left && right {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn check_factorizations(&self, out: &mut Vec<Violation>) {
        for (sys, name) in [
            (FactorizationSystem::CofThenTrivFib, "cof_then_triv_fib"),
            (FactorizationSystem::TrivCofThenFib, "triv_cof_then_fib"),
        ] {
            for f in self.all_mors() {
                let fac = match self.factorize(f, sys) {
                    Ok(fac) => fac,
                    Err(_) => {
                        out.push(v(
                            "M4/factorization",
                            format!("{name} table has no entry for {}", self.mor_name(f)),
                        ));
                        continue;
                    }
                };
                match self.compose(fac.right, fac.left) {
                    Ok(h) if h == f => {}
                    _ => {
                        out.push(v(
                            "M4/factorization",
                            format!("{name}({}) does not recompose", self.mor_name(f)),
                        ));
                        continue;
                    }
                }
                let lf = self.classify(fac.left).unwrap();
                let rf = self.classify(fac.right).unwrap();
                let ok = match sys {
                    FactorizationSystem::CofThenTrivFib => lf.is_cof && rf.is_triv_fib(),
                    FactorizationSystem::TrivCofThenFib => lf.is_triv_cof() && rf.is_fib,
                };
                if !ok {
                    out.push(v(
                        "M4/factorization",
                        format!("{name}({}) has wrong class flags", self.mor_name(f)),
                    ));
                }
                if self.normal {
                    let (in_l, in_r) = match sys {
                        FactorizationSystem::CofThenTrivFib => {
                            (self.classify(f).unwrap().is_cof, self.classify(f).unwrap().is_triv_fib())
                        }
                        FactorizationSystem::TrivCofThenFib => {
                            (self.classify(f).unwrap().is_triv_cof(), self.classify(f).unwrap().is_fib)
                        }
                    };
                    let idd = self.identity(self.dom(f).unwrap()).ok();
                    let idc = self.identity(self.cod(f).unwrap()).ok();
                    if in_l {
                        if Some(fac.right) != idc {
                            out.push(v(
                                "M4/normal",
                                format!("{name}({}): left-class arrow must factor as (f, id)", self.mor_name(f)),
                            ));
                        }
                    } else if in_r && Some(fac.left) != idd {
                        out.push(v(
                            "M4/normal",
                            format!("{name}({}): right-class arrow must factor as (id, f)", self.mor_name(f)),
                        ));
                    }
                }
            }
        }
    }

    fn check_three_for_two(&self, out: &mut Vec<Violation>) {
        for (&(f, g), &h) in &self.comp {
            let (f, g) = (MorRef(f), MorRef(g));
            let wf = self.classify(f).unwrap().is_we;
            let wg = self.classify(g).unwrap().is_we;
            let wh = self.classify(h).unwrap().is_we;
            let cases = [
                (wf && wg && !wh, "g∘f"),
                (wf && wh && !wg, "g"),
                (wg && wh && !wf, "f"),
            ];
            for (bad, which) in cases {
                if bad {
                    out.push(v(
                        "M5/three-for-two",
                        format!(
                            "{};{}: {which} fails to be a weak equivalence",
                            self.mor_name(f),
                            self.mor_name(g)
                        ),
                    ));
                }
            }
        }
        // the weaker two-for-one property, checked independently
        for (&(f, g), &h) in &self.comp {
            let (f, g) = (MorRef(f), MorRef(g));
            let Ok(id) = self.identity(self.dom(f).unwrap()) else { continue };
            if h != id {
                continue;
            }
            let wf = self.classify(f).unwrap().is_we;
            let wg = self.classify(g).unwrap().is_we;
            if wf != wg {
                out.push(v(
                    "M5/two-for-one",
                    format!(
                        "section/retraction pair ({}, {}) disagrees on weak equivalence",
                        self.mor_name(f),
                        self.mor_name(g)
                    ),
                ));
            }
        }
    }

    fn check_lift_table(&self, out: &mut Vec<Violation>) {
        for (&(i, p, top, bottom), &h) in &self.lifts {
            let (i, p, top, bottom) = (MorRef(i), MorRef(p), MorRef(top), MorRef(bottom));
            let ok = self.compose(h, i).map(|x| x == top).unwrap_or(false)
                && self.compose(p, h).map(|x| x == bottom).unwrap_or(false);
            if !ok {
                out.push(v(
                    "M2/lift-table",
                    format!("chosen lift for (i={}, p={}) fails a triangle", self.mor_name(i), self.mor_name(p)),
                ));
            }
        }
    }

    /// `true` iff every weak equivalence (optionally: only those between
    /// fibrant-cofibrant objects) lies in the composition closure of the
    /// split weak equivalences (those with a one-sided inverse).
    pub fn split_generation_report(&self, fc_only: bool) -> bool {
        let fc = |x: crate::instance::ObjRef| {
            crate::instance::is_fibrant_cofibrant(self, x).unwrap_or(false)
        };
        let mors = self.all_mors();
        let mut split_we = Vec::new();
        for &f in &mors {
            if !self.classify(f).unwrap().is_we {
                continue;
            }
            let (x, y) = (self.dom(f).unwrap(), self.cod(f).unwrap());
            let idx = self.identity(x).ok();
            let idy = self.identity(y).ok();
            let has_left = self
                .mors_between(y, x)
                .iter()
                .any(|&r| Some(self.compose(r, f).unwrap()) == idx);
            let has_right = self
                .mors_between(y, x)
                .iter()
                .any(|&s| Some(self.compose(f, s).unwrap()) == idy);
            if has_left || has_right {
                split_we.push(f);
            }
        }
        // closure of the split set under composition
        let mut in_closure: Vec<bool> = mors.iter().map(|f| split_we.contains(f)).collect();
        loop {
            let mut changed = false;
            for (&(f, g), &h) in &self.comp {
                if in_closure[f as usize] && in_closure[g as usize] && !in_closure[h.0 as usize] {
                    in_closure[h.0 as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        mors.iter()
            .filter(|&&f| self.classify(f).unwrap().is_we)
            .filter(|&&f| {
                !fc_only || (fc(self.dom(f).unwrap()) && fc(self.cod(f).unwrap()))
            })
            .all(|&f| in_closure[f.0 as usize])
    }

    /// Middle maps exist for every commuting square between factored arrows
    /// in both systems (with a unique mediating candidate this is exactly a
    /// functorial realization of the factorization).
    pub fn middle_maps_exist(&self) -> bool {
        for sys in [FactorizationSystem::CofThenTrivFib, FactorizationSystem::TrivCofThenFib] {
            for f in self.all_mors() {
                for g in self.all_mors() {
                    for u in self.mors_between(self.dom(f).unwrap(), self.dom(g).unwrap()) {
                        for w in self.mors_between(self.cod(f).unwrap(), self.cod(g).unwrap()) {
                            let sq = self
                                .compose(g, u)
                                .map(|l| self.compose(w, f).map(|r| l == r).unwrap_or(false))
                                .unwrap_or(false);
                            if !sq {
                                continue;
                            }
                            if self.factor_middle(f, g, u, w, sys).is_err() {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

