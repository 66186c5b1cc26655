//! Shipped tabular fixtures: the walking isomorphism, a deliberately broken
//! walking arrow, and a six-object lattice with non-trivial fibrant and
//! cofibrant replacement (plus a declared-non-functorial variant of it used
//! by the pseudofunctor path). Lattice-shaped fixtures are generated from a
//! small builder so the tables stay consistent by construction.

use std::collections::BTreeMap;

use super::{FactorEntry, MorSpec, PairEntry, SquareEntry, TabularCategorySpec};
use crate::instance::FactorizationSystem;

/// Arrow classes for a builder arrow `x <= y`, given by object indices.
pub type ClassFn<'a> = &'a dyn Fn(usize, usize) -> (bool, bool, bool);
/// Middle object of the chosen factorization of `x -> y` for a system.
pub type MiddleFn<'a> = &'a dyn Fn(usize, usize, FactorizationSystem) -> usize;

/// Generate the full tables of a finite lattice seen as a category: one
/// arrow per comparable pair, joins as coproducts/pushouts, meets as
/// products/pullbacks.
pub struct LatticeBuilder<'a> {
    pub name: &'a str,
    pub objects: &'a [&'a str],
    pub leq: &'a dyn Fn(usize, usize) -> bool,
    pub join: &'a dyn Fn(usize, usize) -> usize,
    pub meet: &'a dyn Fn(usize, usize) -> usize,
    pub initial: usize,
    pub terminal: usize,
    pub classes: ClassFn<'a>,
    pub middle: MiddleFn<'a>,
    pub functorial: bool,
    pub normal: bool,
}

impl LatticeBuilder<'_> {
    fn arrow_name(&self, x: usize, y: usize) -> String {
        if x == y {
            format!("id_{}", self.objects[x])
        } else {
            format!("{}_{}", self.objects[x], self.objects[y])
        }
    }

    pub fn build(&self) -> TabularCategorySpec {
        let n = self.objects.len();
        let mut morphisms = Vec::new();
        let mut identities = BTreeMap::new();
        let mut arrows = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if (self.leq)(x, y) {
                    let name = self.arrow_name(x, y);
                    morphisms.push(MorSpec {
                        name: name.clone(),
                        dom: self.objects[x].to_string(),
                        cod: self.objects[y].to_string(),
                    });
                    if x == y {
                        identities.insert(self.objects[x].to_string(), name.clone());
                    }
                    arrows.push((x, y, name));
                }
            }
        }
        let mut composition = Vec::new();
        for &(x, y, ref fname) in &arrows {
            for &(y2, z, ref gname) in &arrows {
                if y == y2 {
                    composition.push([fname.clone(), gname.clone(), self.arrow_name(x, z)]);
                }
            }
        }
        let mut weak_equivalences = Vec::new();
        let mut fibrations = Vec::new();
        let mut cofibrations = Vec::new();
        for &(x, y, ref name) in &arrows {
            let (we, fib, cof) = (self.classes)(x, y);
            if we {
                weak_equivalences.push(name.clone());
            }
            if fib {
                fibrations.push(name.clone());
            }
            if cof {
                cofibrations.push(name.clone());
            }
        }
        let mut coproducts = Vec::new();
        let mut products = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let j = (self.join)(x, y);
                coproducts.push(PairEntry {
                    left: self.objects[x].to_string(),
                    right: self.objects[y].to_string(),
                    object: self.objects[j].to_string(),
                    leg0: self.arrow_name(x, j),
                    leg1: self.arrow_name(y, j),
                });
                let m = (self.meet)(x, y);
                products.push(PairEntry {
                    left: self.objects[x].to_string(),
                    right: self.objects[y].to_string(),
                    object: self.objects[m].to_string(),
                    leg0: self.arrow_name(m, x),
                    leg1: self.arrow_name(m, y),
                });
            }
        }
        let mut pushouts = Vec::new();
        let mut pullbacks = Vec::new();
        for &(a, b, ref f) in &arrows {
            for &(a2, c, ref g) in &arrows {
                if a == a2 {
                    let j = (self.join)(b, c);
                    pushouts.push(SquareEntry {
                        along0: f.clone(),
                        along1: g.clone(),
                        object: self.objects[j].to_string(),
                        leg0: self.arrow_name(b, j),
                        leg1: self.arrow_name(c, j),
                    });
                }
                if b == c {
                    let m = (self.meet)(a, a2);
                    pullbacks.push(SquareEntry {
                        along0: f.clone(),
                        along1: g.clone(),
                        object: self.objects[m].to_string(),
                        leg0: self.arrow_name(m, a),
                        leg1: self.arrow_name(m, a2),
                    });
                }
            }
        }
        let mut cof_then_triv_fib = Vec::new();
        let mut triv_cof_then_fib = Vec::new();
        for &(x, y, ref name) in &arrows {
            for (sys, table) in [
                (FactorizationSystem::CofThenTrivFib, &mut cof_then_triv_fib),
                (FactorizationSystem::TrivCofThenFib, &mut triv_cof_then_fib),
            ] {
                let m = (self.middle)(x, y, sys);
                table.push(FactorEntry {
                    of: name.clone(),
                    left: self.arrow_name(x, m),
                    right: self.arrow_name(m, y),
                });
            }
        }
        TabularCategorySpec {
            name: self.name.to_string(),
            objects: self.objects.iter().map(|s| s.to_string()).collect(),
            morphisms,
            identities,
            composition,
            weak_equivalences,
            fibrations,
            cofibrations,
            initial: Some(self.objects[self.initial].to_string()),
            terminal: Some(self.objects[self.terminal].to_string()),
            coproducts,
            products,
            pushouts,
            pullbacks,
            cof_then_triv_fib,
            triv_cof_then_fib,
            functorial: self.functorial,
            normal: self.normal,
            lifts: Vec::new(),
        }
    }
}

/// Two isomorphic objects with all arrows in all three classes; the smallest
/// valid fixture and the standard positive control.
pub fn walking_isomorphism() -> TabularCategorySpec {
    let m = |name: &str, dom: &str, cod: &str| MorSpec {
        name: name.into(),
        dom: dom.into(),
        cod: cod.into(),
    };
    let pair = |l: &str, r: &str, o: &str, a: &str, b: &str| PairEntry {
        left: l.into(),
        right: r.into(),
        object: o.into(),
        leg0: a.into(),
        leg1: b.into(),
    };
    let sq = |f: &str, g: &str, o: &str, a: &str, b: &str| SquareEntry {
        along0: f.into(),
        along1: g.into(),
        object: o.into(),
        leg0: a.into(),
        leg1: b.into(),
    };
    let fac = |of: &str, l: &str, r: &str| FactorEntry { of: of.into(), left: l.into(), right: r.into() };
    let all = vec!["id_a".to_string(), "id_b".to_string(), "f".to_string(), "g".to_string()];
    TabularCategorySpec {
        name: "walking-isomorphism".into(),
        objects: vec!["a".into(), "b".into()],
        morphisms: vec![m("id_a", "a", "a"), m("id_b", "b", "b"), m("f", "a", "b"), m("g", "b", "a")],
        identities: [("a".to_string(), "id_a".to_string()), ("b".to_string(), "id_b".to_string())]
            .into_iter()
            .collect(),
        composition: vec![
            ["id_a".into(), "id_a".into(), "id_a".into()],
            ["id_a".into(), "f".into(), "f".into()],
            ["f".into(), "id_b".into(), "f".into()],
            ["f".into(), "g".into(), "id_a".into()],
            ["g".into(), "f".into(), "id_b".into()],
            ["g".into(), "id_a".into(), "g".into()],
            ["id_b".into(), "g".into(), "g".into()],
            ["id_b".into(), "id_b".into(), "id_b".into()],
        ],
        weak_equivalences: all.clone(),
        fibrations: all.clone(),
        cofibrations: all,
        initial: Some("a".into()),
        terminal: Some("b".into()),
        coproducts: vec![
            pair("a", "a", "a", "id_a", "id_a"),
            pair("a", "b", "b", "f", "id_b"),
            pair("b", "a", "b", "id_b", "f"),
            pair("b", "b", "b", "id_b", "id_b"),
        ],
        products: vec![
            pair("a", "a", "a", "id_a", "id_a"),
            pair("a", "b", "a", "id_a", "f"),
            pair("b", "a", "a", "f", "id_a"),
            pair("b", "b", "b", "id_b", "id_b"),
        ],
        pushouts: vec![
            sq("id_a", "id_a", "a", "id_a", "id_a"),
            sq("id_a", "f", "b", "f", "id_b"),
            sq("f", "id_a", "b", "id_b", "f"),
            sq("f", "f", "b", "id_b", "id_b"),
            sq("id_b", "id_b", "b", "id_b", "id_b"),
            sq("id_b", "g", "a", "g", "id_a"),
            sq("g", "id_b", "a", "id_a", "g"),
            sq("g", "g", "a", "id_a", "id_a"),
        ],
        pullbacks: vec![
            sq("id_a", "id_a", "a", "id_a", "id_a"),
            sq("id_a", "g", "b", "g", "id_b"),
            sq("g", "id_a", "b", "id_b", "g"),
            sq("g", "g", "b", "id_b", "id_b"),
            sq("id_b", "id_b", "b", "id_b", "id_b"),
            sq("id_b", "f", "a", "f", "id_a"),
            sq("f", "id_b", "a", "id_a", "f"),
            sq("f", "f", "a", "id_a", "id_a"),
        ],
        cof_then_triv_fib: vec![
            fac("id_a", "id_a", "id_a"),
            fac("id_b", "id_b", "id_b"),
            fac("f", "f", "id_b"),
            fac("g", "g", "id_a"),
        ],
        triv_cof_then_fib: vec![
            fac("id_a", "id_a", "id_a"),
            fac("id_b", "id_b", "id_b"),
            fac("f", "f", "id_b"),
            fac("g", "g", "id_a"),
        ],
        functorial: true,
        normal: true,
        lifts: Vec::new(),
    }
}

/// The walking arrow with its arrow flagged in every class: the lifting
/// square of the arrow against itself has no diagonal, so validation must
/// fail exactly on the two qualifying M2 configurations.
pub fn walking_arrow_invalid() -> TabularCategorySpec {
    let chain = ["a", "b"];
    LatticeBuilder {
        name: "walking-arrow-invalid",
        objects: &chain,
        leq: &|x, y| x <= y,
        join: &|x, y| x.max(y),
        meet: &|x, y| x.min(y),
        initial: 0,
        terminal: 1,
        classes: &|_, _| (true, true, true),
        middle: &|_, y, _| y,
        functorial: true,
        normal: true,
    }
    .build()
}

const SIX: [&str; 6] = ["o0", "y", "z", "a", "b", "o1"];

fn six_classes(x: usize, yy: usize) -> (bool, bool, bool) {
    // chain o0 < y < z < a < b < o1 with weak equivalences {y->z, a->b},
    // fibrations everything except {a->b, a->o1}, cofibrations everything
    // except {o0->z, y->z}
    let we = x == yy || (x, yy) == (1, 2) || (x, yy) == (3, 4);
    let fib = !matches!((x, yy), (3, 4) | (3, 5));
    let cof = !matches!((x, yy), (0, 2) | (1, 2));
    (we, fib, cof)
}

fn six_middle(x: usize, y: usize, sys: FactorizationSystem) -> usize {
    let (we, fib, cof) = six_classes(x, y);
    match sys {
        FactorizationSystem::CofThenTrivFib => {
            if cof {
                y
            } else if fib && we {
                x
            } else {
                // o0 -> z factors through y
                1
            }
        }
        FactorizationSystem::TrivCofThenFib => {
            if cof && we {
                y
            } else if fib {
                x
            } else {
                // a -> o1 factors through b
                4
            }
        }
    }
}

/// Six-object lattice where `z` is not cofibrant (its cofibrant replacement
/// is `y`) and `a` is not fibrant (its fibrant replacement is `b`), with
/// normal, functorial factorization tables.
pub fn six_object_lattice() -> TabularCategorySpec {
    LatticeBuilder {
        name: "six-object-lattice",
        objects: &SIX,
        leq: &|x, y| x <= y,
        join: &|x, y| x.max(y),
        meet: &|x, y| x.min(y),
        initial: 0,
        terminal: 5,
        classes: &six_classes,
        middle: &six_middle,
        functorial: true,
        normal: true,
    }
    .build()
}

/// The same category with the factorization declared non-functorial: the
/// chosen middle-map assignment is not exposed, so replacement must go
/// through the per-object pseudofunctor construction instead.
pub fn six_object_lattice_nonfunctorial() -> TabularCategorySpec {
    let mut spec = six_object_lattice();
    spec.name = "six-object-lattice-nonfunctorial".into();
    spec.functorial = false;
    spec
}

/// All shipped fixtures with their canonical file names.
pub fn all() -> Vec<(&'static str, TabularCategorySpec)> {
    vec![
        ("walking_isomorphism.json", walking_isomorphism()),
        ("walking_arrow_invalid.json", walking_arrow_invalid()),
        ("six_object_lattice.json", six_object_lattice()),
        ("six_object_lattice_nonfunctorial.json", six_object_lattice_nonfunctorial()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tabular::TabularInstance;

    /// the checked-in fixture files are exactly the generated specs; set
    /// REGEN_FIXTURES=1 to rewrite them after a deliberate change
    #[test]
    fn shipped_fixture_files_are_current() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        for (name, spec) in all() {
            let path = dir.join(name);
            let body = serde_json::to_string_pretty(&spec).unwrap() + "\n";
            if std::env::var("REGEN_FIXTURES").is_ok() {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &body).unwrap();
                continue;
            }
            let on_disk = std::fs::read_to_string(&path)
                .unwrap_or_else(|_| panic!("missing fixture file {path:?}; run with REGEN_FIXTURES=1"));
            assert_eq!(on_disk, body, "fixture {name} is stale; run with REGEN_FIXTURES=1");
            // and the file parses back to a loadable spec
            let parsed: TabularCategorySpec = serde_json::from_str(&on_disk).unwrap();
            TabularInstance::load(&parsed).unwrap();
        }
    }

    #[test]
    fn walking_isomorphism_is_valid() {
        let (_, report) = TabularInstance::load_validate(&walking_isomorphism()).unwrap();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(report.weak_equivalences_split_generated);
    }

    #[test]
    fn walking_arrow_fails_exactly_on_lifting() {
        let (_, report) = TabularInstance::load_validate(&walking_arrow_invalid()).unwrap();
        assert!(!report.is_valid());
        // exactly one failing square (it qualifies under both pairings but
        // is reported once)
        assert_eq!(report.violations.len(), 1);
        for v in &report.violations {
            assert_eq!(v.axiom, "M2/lift");
            assert!(v.detail.contains("i=a_b"), "unexpected detail {}", v.detail);
            assert!(v.detail.contains("p=a_b"), "unexpected detail {}", v.detail);
        }
        // the arrow is a weak equivalence with no splitting
        assert!(!report.weak_equivalences_split_generated);
    }

    #[test]
    fn six_object_lattice_is_valid() {
        let (inst, report) = TabularInstance::load_validate(&six_object_lattice()).unwrap();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
        assert!(report.middle_maps_exist);
        // z is not cofibrant, a is not fibrant, everything else is both
        use crate::instance::{is_fibrant_cofibrant, ModelInstance};
        let z = inst.object_by_name("z").unwrap();
        let a = inst.object_by_name("a").unwrap();
        assert!(!is_fibrant_cofibrant(&inst, z).unwrap());
        assert!(!is_fibrant_cofibrant(&inst, a).unwrap());
        for name in ["o0", "y", "b", "o1"] {
            let x = inst.object_by_name(name).unwrap();
            assert!(is_fibrant_cofibrant(&inst, x).unwrap(), "{name} should be fc");
        }
        // y->z has no inverse, so split generation fails globally; between
        // fibrant-cofibrant objects the only weak equivalences are
        // identities, which are split
        assert!(!report.weak_equivalences_split_generated);
        assert!(report.fc_weak_equivalences_split_generated);
        let _ = inst.classify(inst.mor_by_name("a_b").unwrap()).unwrap();
    }

    #[test]
    fn empty_spec_is_invalid_for_missing_limits() {
        let spec = TabularCategorySpec {
            name: "empty".into(),
            objects: vec![],
            morphisms: vec![],
            identities: Default::default(),
            composition: vec![],
            weak_equivalences: vec![],
            fibrations: vec![],
            cofibrations: vec![],
            initial: None,
            terminal: None,
            coproducts: vec![],
            products: vec![],
            pushouts: vec![],
            pullbacks: vec![],
            cof_then_triv_fib: vec![],
            triv_cof_then_fib: vec![],
            functorial: false,
            normal: false,
            lifts: vec![],
        };
        let (_, report) = TabularInstance::load_validate(&spec).unwrap();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.axiom == "M1/terminal"));
    }
}
