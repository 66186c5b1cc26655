//! Cylinders, path objects, homotopies, and the structure maps between them.
//!
//! A cylinder for `X` is a configuration `(W, Z, d0, d1, s, x)` with `s` a
//! weak equivalence and `s∘d0 = s∘d1 = x`; a q-cylinder is the special case
//! `Z = X`, `x = id` with `(d0, d1): X ⊔ X -> W` a cofibration. Homotopies
//! out of them are the would-be 2-cells of the homotopy 2-category.

use serde::Serialize;

use crate::instance::{
    ensure_parallel, Error, FactorizationSystem, ModelInstance, MorRef, ObjRef, Result,
};

/// General cylinder `(W, Z, d0, d1, s, x)` for the object `base`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Cylinder {
    pub base: ObjRef,
    pub w: ObjRef,
    pub z: ObjRef,
    pub d0: MorRef,
    pub d1: MorRef,
    pub s: MorRef,
    pub x: MorRef,
    /// set when `s` is additionally a fibration
    pub fibrant: bool,
}

/// Quillen cylinder: factorization `X ⊔ X -> W -> X` of the codiagonal with
/// the first leg a cofibration and the second a weak equivalence.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct QCylinder {
    pub base: ObjRef,
    pub w: ObjRef,
    pub d0: MorRef,
    pub d1: MorRef,
    pub s: MorRef,
    pub fibrant: bool,
}

impl QCylinder {
    /// View as a general cylinder with `Z = X` and `x = id`.
    pub fn as_cylinder(&self, inst: &dyn ModelInstance) -> Result<Cylinder> {
        Ok(Cylinder {
            base: self.base,
            w: self.w,
            z: self.base,
            d0: self.d0,
            d1: self.d1,
            s: self.s,
            x: inst.identity(self.base)?,
            fibrant: self.fibrant,
        })
    }
}

/// Path object: factorization `Y -> V -> Y × Y` of the diagonal with the
/// first leg a weak equivalence and the second a fibration.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PathObject {
    pub base: ObjRef,
    pub v: ObjRef,
    pub delta0: MorRef,
    pub delta1: MorRef,
    pub sigma: MorRef,
    /// set when `sigma` is additionally a cofibration
    pub cofibrant: bool,
}

/// Left homotopy `(C, h): f ⇝ g` on a general cylinder.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Homotopy {
    pub cyl: Cylinder,
    pub h: MorRef,
    pub f: MorRef,
    pub g: MorRef,
}

/// Left homotopy on a q-cylinder.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct QHomotopy {
    pub cyl: QCylinder,
    pub h: MorRef,
    pub f: MorRef,
    pub g: MorRef,
}

impl QHomotopy {
    pub fn as_homotopy(&self, inst: &dyn ModelInstance) -> Result<Homotopy> {
        Ok(Homotopy { cyl: self.cyl.as_cylinder(inst)?, h: self.h, f: self.f, g: self.g })
    }
}

/// Right homotopy `(P, k): f ⇝ g` into a path object.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct RightHomotopy {
    pub path: PathObject,
    pub k: MorRef,
    pub f: MorRef,
    pub g: MorRef,
}

/// Structure-preserving map of cylinders `(phi, psi): C -> C'`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CylinderMap {
    pub source: Cylinder,
    pub target: Cylinder,
    pub phi: MorRef,
    pub psi: MorRef,
}

/// A composable chain of homotopies `f0 ⇝ f1 ⇝ ... ⇝ fn`.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopySequence {
    pub steps: Vec<Homotopy>,
}

impl HomotopySequence {
    pub fn new(steps: Vec<Homotopy>) -> Result<Self> {
        for pair in steps.windows(2) {
            if pair[0].g != pair[1].f {
                return Err(Error::EndpointMismatch(format!(
                    "consecutive homotopies disagree: {:?} vs {:?}",
                    pair[0].g, pair[1].f
                )));
            }
        }
        Ok(HomotopySequence { steps })
    }

    pub fn source(&self) -> Option<MorRef> {
        self.steps.first().map(|h| h.f)
    }

    pub fn target(&self) -> Option<MorRef> {
        self.steps.last().map(|h| h.g)
    }
}

/// One named structural check of a cylinder or homotopy.
#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub check: String,
    pub ok: bool,
}

/// Outcome of validating a cylinder or homotopy: every equation and class
/// check, individually named.
#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.check.as_str()).collect()
    }

    fn push(&mut self, check: &str, ok: bool) {
        self.checks.push(Diagnostic { check: check.to_string(), ok });
    }
}

fn mors_equal(a: MorRef, b: MorRef) -> bool {
    a == b
}

/// Check all defining equations and class conditions of a cylinder.
pub fn validate_cylinder(inst: &dyn ModelInstance, c: &Cylinder) -> Result<Diagnostics> {
    let mut d = Diagnostics { checks: Vec::new() };
    if inst.dom(c.d0)? != c.base
        || inst.dom(c.d1)? != c.base
        || inst.cod(c.d0)? != c.w
        || inst.cod(c.d1)? != c.w
        || inst.dom(c.s)? != c.w
        || inst.cod(c.s)? != c.z
        || inst.dom(c.x)? != c.base
        || inst.cod(c.x)? != c.z
    {
        return Err(Error::Structural("cylinder components have mismatched domains/codomains".into()));
    }
    d.push("s_d0_equals_x", mors_equal(inst.compose(c.s, c.d0)?, c.x));
    d.push("s_d1_equals_x", mors_equal(inst.compose(c.s, c.d1)?, c.x));
    let s_flags = inst.classify(c.s)?;
    d.push("s_is_weak_equivalence", s_flags.is_we);
    if c.fibrant {
        d.push("s_is_fibration", s_flags.is_fib);
    }
    Ok(d)
}

/// Check a q-cylinder, including the cofibration condition on the combined
/// map `X ⊔ X -> W`, and, when `X` is cofibrant, that `d0`, `d1` are trivial
/// cofibrations.
pub fn validate_q_cylinder(inst: &dyn ModelInstance, c: &QCylinder) -> Result<Diagnostics> {
    let mut d = validate_cylinder(inst, &c.as_cylinder(inst)?)?;
    let cp = inst.coproduct(c.base, c.base)?;
    let combined = inst.copair(&cp, c.d0, c.d1)?;
    d.checks.push(Diagnostic {
        check: "copair_d0_d1_is_cofibration".into(),
        ok: inst.classify(combined)?.is_cof,
    });
    let id = inst.identity(c.base)?;
    d.checks.push(Diagnostic {
        check: "s_d0_is_identity".into(),
        ok: mors_equal(inst.compose(c.s, c.d0)?, id),
    });
    d.checks.push(Diagnostic {
        check: "s_d1_is_identity".into(),
        ok: mors_equal(inst.compose(c.s, c.d1)?, id),
    });
    if crate::instance::is_cofibrant(inst, c.base)? {
        for (name, leg) in [("d0_trivial_cofibration", c.d0), ("d1_trivial_cofibration", c.d1)] {
            let fl = inst.classify(leg)?;
            d.checks.push(Diagnostic { check: name.into(), ok: fl.is_triv_cof() });
        }
    }
    Ok(d)
}

/// Check the two homotopy equations `h∘d0 = f`, `h∘d1 = g` on top of the
/// cylinder checks.
pub fn validate_homotopy(inst: &dyn ModelInstance, h: &Homotopy) -> Result<Diagnostics> {
    let mut d = validate_cylinder(inst, &h.cyl)?;
    d.push("h_d0_equals_f", mors_equal(inst.compose(h.h, h.cyl.d0)?, h.f));
    d.push("h_d1_equals_g", mors_equal(inst.compose(h.h, h.cyl.d1)?, h.g));
    ensure_parallel(inst, h.f, h.g)?;
    Ok(d)
}

/// Check a cylinder map: `phi∘dk = d'k`, `psi∘s = s'∘phi`, `psi∘x = x'`.
pub fn validate_cylinder_map(inst: &dyn ModelInstance, m: &CylinderMap) -> Result<Diagnostics> {
    let mut d = Diagnostics { checks: Vec::new() };
    d.push("phi_d0", mors_equal(inst.compose(m.phi, m.source.d0)?, m.target.d0));
    d.push("phi_d1", mors_equal(inst.compose(m.phi, m.source.d1)?, m.target.d1));
    d.push(
        "psi_s_equals_s_phi",
        mors_equal(inst.compose(m.psi, m.source.s)?, inst.compose(m.target.s, m.phi)?),
    );
    d.push("psi_x_equals_x", mors_equal(inst.compose(m.psi, m.source.x)?, m.target.x));
    Ok(d)
}

/// Build a q-cylinder for `x` by factorizing the codiagonal `X ⊔ X -> X`
/// with the cofibration-then-trivial-fibration system. The result is marked
/// fibrant when the right factor is a fibration (it always is here, being a
/// trivial fibration).
pub fn q_cylinder_via_factorization(inst: &dyn ModelInstance, x: ObjRef) -> Result<QCylinder> {
    let cp = inst.coproduct(x, x)?;
    let id = inst.identity(x)?;
    let codiag = inst.copair(&cp, id, id)?;
    let fac = inst.factorize(codiag, FactorizationSystem::CofThenTrivFib)?;
    let d0 = inst.compose(fac.left, cp.inj0)?;
    let d1 = inst.compose(fac.left, cp.inj1)?;
    let fibrant = inst.classify(fac.right)?.is_fib;
    Ok(QCylinder { base: x, w: inst.cod(fac.left)?, d0, d1, s: fac.right, fibrant })
}

/// Build a path object for `y` by factorizing the diagonal `Y -> Y × Y`
/// with the trivial-cofibration-then-fibration system.
pub fn path_object_via_factorization(inst: &dyn ModelInstance, y: ObjRef) -> Result<PathObject> {
    let pr = inst.product(y, y)?;
    let id = inst.identity(y)?;
    let diag = inst.pair(&pr, id, id)?;
    let fac = inst.factorize(diag, FactorizationSystem::TrivCofThenFib)?;
    let delta0 = inst.compose(pr.proj0, fac.right)?;
    let delta1 = inst.compose(pr.proj1, fac.right)?;
    let cofibrant = inst.classify(fac.left)?.is_cof;
    Ok(PathObject { base: y, v: inst.dom(fac.right)?, delta0, delta1, sigma: fac.left, cofibrant })
}

/// The degenerate identity homotopy `f ⇝ f` on the cylinder
/// `(X, X, id, id, id, id)`.
pub fn identity_homotopy(inst: &dyn ModelInstance, f: MorRef) -> Result<Homotopy> {
    let x = inst.dom(f)?;
    let id = inst.identity(x)?;
    let cyl = Cylinder {
        base: x,
        w: x,
        z: x,
        d0: id,
        d1: id,
        s: id,
        x: id,
        fibrant: inst.classify(id)?.is_fib,
    };
    Ok(Homotopy { cyl, h: f, f, g: f })
}

/// The identity 2-cell representative in q-form: the homotopy `(C, f∘s)` on
/// the instance's chosen q-cylinder, which receives a cylinder map to the
/// degenerate identity cylinder.
pub fn identity_q_homotopy(inst: &dyn ModelInstance, f: MorRef) -> Result<QHomotopy> {
    let x = inst.dom(f)?;
    let cyl = inst.q_cylinder(x)?;
    let h = inst.compose(f, cyl.s)?;
    Ok(QHomotopy { cyl, h, f, g: f })
}

/// Invert a homotopy by exchanging `d0` and `d1`; the class of the result is
/// a two-sided inverse of the class of the input.
pub fn invert_homotopy(h: &Homotopy) -> Homotopy {
    let mut cyl = h.cyl;
    std::mem::swap(&mut cyl.d0, &mut cyl.d1);
    Homotopy { cyl, h: h.h, f: h.g, g: h.f }
}

/// Invert a q-homotopy; the swapped leg order is still a q-cylinder.
pub fn invert_q_homotopy(h: &QHomotopy) -> QHomotopy {
    let mut cyl = h.cyl;
    std::mem::swap(&mut cyl.d0, &mut cyl.d1);
    QHomotopy { cyl, h: h.h, f: h.g, g: h.f }
}

/// Precompose a homotopy with `l: X' -> X`: the cylinder becomes
/// `(W, Z, d0∘l, d1∘l, s, x∘l)` and `h` is unchanged. Note that even when the
/// input is a q-homotopy the result is a general homotopy (`x∘l` is no longer
/// an identity).
pub fn whisker_pre(inst: &dyn ModelInstance, h: &Homotopy, l: MorRef) -> Result<Homotopy> {
    if inst.cod(l)? != h.cyl.base {
        return Err(Error::NotComposable(h.cyl.d0, l));
    }
    let cyl = Cylinder {
        base: inst.dom(l)?,
        w: h.cyl.w,
        z: h.cyl.z,
        d0: inst.compose(h.cyl.d0, l)?,
        d1: inst.compose(h.cyl.d1, l)?,
        s: h.cyl.s,
        x: inst.compose(h.cyl.x, l)?,
        fibrant: h.cyl.fibrant,
    };
    Ok(Homotopy { cyl, h: h.h, f: inst.compose(h.f, l)?, g: inst.compose(h.g, l)? })
}

/// Postcompose a homotopy with `r: Y -> Y'`: same cylinder, `h` becomes `r∘h`.
pub fn whisker_post(inst: &dyn ModelInstance, h: &Homotopy, r: MorRef) -> Result<Homotopy> {
    if inst.dom(r)? != inst.cod(h.h)? {
        return Err(Error::NotComposable(r, h.h));
    }
    Ok(Homotopy {
        cyl: h.cyl,
        h: inst.compose(r, h.h)?,
        f: inst.compose(r, h.f)?,
        g: inst.compose(r, h.g)?,
    })
}

/// Postcomposition keeps q-homotopies in q-form.
pub fn whisker_post_q(inst: &dyn ModelInstance, h: &QHomotopy, r: MorRef) -> Result<QHomotopy> {
    if inst.dom(r)? != inst.cod(h.h)? {
        return Err(Error::NotComposable(r, h.h));
    }
    Ok(QHomotopy {
        cyl: h.cyl,
        h: inst.compose(r, h.h)?,
        f: inst.compose(r, h.f)?,
        g: inst.compose(r, h.g)?,
    })
}
