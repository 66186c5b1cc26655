//! The chain-complex model instance: objects and morphisms are interned
//! behind opaque ids (content-addressed, so equal data means equal id), and
//! all structure is computed by exact linear algebra.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::cylinder::{PathObject, QCylinder, QHomotopy};
use crate::fp::Mat;
use crate::instance::{
    ClassFlags, Coproduct, Error, Factorization, FactorizationSystem, LiftProblem, ModelInstance,
    MorRef, ObjRef, Product, Pushout, Result,
};

use super::solve::{contraction, lift_chain_map, null_homotopy, second_homotopy};
use super::{classify_chain, ChainComplex, ChainHomotopy, ChainMap};

#[derive(Clone, PartialEq, Eq, Hash)]
struct MorData {
    dom: ObjRef,
    cod: ObjRef,
    map: ChainMap,
}

#[derive(Default)]
struct Inner {
    objects: Vec<ChainComplex>,
    obj_ids: HashMap<ChainComplex, ObjRef>,
    mors: Vec<MorData>,
    mor_ids: HashMap<MorData, MorRef>,
    /// per-degree sections of the quotient projection, keyed by the pushout's
    /// inclusion morphisms (content-addressed, so the key pins the subspace)
    pushout_sections: HashMap<(MorRef, MorRef), Vec<Mat>>,
}

/// Model instance of bounded chain complexes over F_p.
pub struct ChainInstance {
    p: u64,
    inner: Mutex<Inner>,
}

impl ChainInstance {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "modulus must be a prime >= 2");
        let inst = ChainInstance { p, inner: Mutex::new(Inner::default()) };
        // the zero complex doubles as initial and terminal object
        inst.intern_object(ChainComplex::zero(p));
        inst
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn intern_object(&self, x: ChainComplex) -> ObjRef {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&id) = inner.obj_ids.get(&x) {
            return id;
        }
        let id = ObjRef(inner.objects.len() as u32);
        inner.objects.push(x.clone());
        inner.obj_ids.insert(x, id);
        id
    }

    /// Normalizing interner: re-canonicalizes the matrices against the stored
    /// complexes so that content-equal morphisms always share one id.
    fn intern_mor(&self, dom: ObjRef, cod: ObjRef, map: ChainMap) -> Result<MorRef> {
        let (src, tgt) = (self.complex(dom)?, self.complex(cod)?);
        let map = ChainMap::new(&src, &tgt, map.mats)?;
        let data = MorData { dom, cod, map };
        let mut inner = self.inner.lock().unwrap();
        if let Some(&id) = inner.mor_ids.get(&data) {
            return Ok(id);
        }
        let id = MorRef(inner.mors.len() as u32);
        inner.mors.push(data.clone());
        inner.mor_ids.insert(data, id);
        Ok(id)
    }

    /// Intern a complex (validating it) and return its object id.
    pub fn add_complex(&self, x: ChainComplex) -> Result<ObjRef> {
        if x.p != self.p {
            return Err(Error::Validation("complex modulus differs from instance".into()));
        }
        let x = ChainComplex::new(x.p, x.dims, x.d)?;
        Ok(self.intern_object(x))
    }

    /// Intern a validated chain map between two interned objects.
    pub fn add_map(&self, dom: ObjRef, cod: ObjRef, map: ChainMap) -> Result<MorRef> {
        self.intern_mor(dom, cod, map)
    }

    pub fn complex(&self, x: ObjRef) -> Result<ChainComplex> {
        let inner = self.inner.lock().unwrap();
        inner.objects.get(x.0 as usize).cloned().ok_or(Error::UnknownObject(x))
    }

    /// Domain, codomain, and matrices of an interned morphism.
    pub fn map_data(&self, f: MorRef) -> Result<(ObjRef, ObjRef, ChainMap)> {
        let inner = self.inner.lock().unwrap();
        let d = inner.mors.get(f.0 as usize).ok_or(Error::UnknownMorphism(f))?;
        Ok((d.dom, d.cod, d.map.clone()))
    }

    fn triple(&self, f: MorRef) -> Result<(ChainComplex, ChainComplex, ChainMap, ObjRef, ObjRef)> {
        let (dom, cod, map) = self.map_data(f)?;
        Ok((self.complex(dom)?, self.complex(cod)?, map, dom, cod))
    }

    /// The tensor-with-interval cylinder of `x`: degree `n` is
    /// `X_n ⊕ X_n ⊕ X_{n-1}` in block order (end 0, end 1, interval), with
    /// `d(x0, x1, e) = (d x0 + e, d x1 - e, -d e)`. This is the instance's
    /// chosen factorization of the codiagonal.
    pub fn standard_cylinder(&self, x: ObjRef) -> Result<QCylinder> {
        let xc = self.complex(x)?;
        let p = self.p;
        let len = xc.len() + 1;
        let dim = |n: usize| 2 * xc.dim(n) + xc.dim(n.wrapping_sub(1));
        let dims: Vec<usize> = (0..len).map(|n| if n == 0 { 2 * xc.dim(0) } else { dim(n) }).collect();
        let mut d = Vec::new();
        for n in 1..len {
            // rows: blocks of degree n-1; cols: blocks of degree n
            let (r0, rn_prev) = (xc.dim(n - 1), if n >= 2 { xc.dim(n - 2) } else { 0 });
            let (c0, cn_prev) = (xc.dim(n), xc.dim(n - 1));
            let dn = xc.diff(n);
            let mut m = Mat::zeros(p, 2 * r0 + rn_prev, 2 * c0 + cn_prev);
            for i in 0..r0 {
                for j in 0..c0 {
                    m[(i, j)] = dn[(i, j)];
                    m[(r0 + i, c0 + j)] = dn[(i, j)];
                }
            }
            for i in 0..cn_prev {
                // e-block enters end 0 positively, end 1 negatively
                m[(i, 2 * c0 + i)] = 1 % p;
                m[(r0 + i, 2 * c0 + i)] = (p - 1) % p;
            }
            if n >= 2 {
                let dprev = xc.diff(n - 1);
                for i in 0..rn_prev {
                    for j in 0..cn_prev {
                        m[(2 * r0 + i, 2 * c0 + j)] = (p - dprev[(i, j)]) % p;
                    }
                }
            }
            d.push(m);
        }
        let w = ChainComplex::new(p, dims, d)?;
        let w_ref = self.add_complex(w.clone())?;
        let mut d0 = Vec::new();
        let mut d1 = Vec::new();
        let mut s = Vec::new();
        for n in 0..w.len().max(xc.len()) {
            let xd = xc.dim(n);
            let prev = if n >= 1 { xc.dim(n - 1) } else { 0 };
            let mut m0 = Mat::zeros(p, 2 * xd + prev, xd);
            let mut m1 = Mat::zeros(p, 2 * xd + prev, xd);
            let mut ms = Mat::zeros(p, xd, 2 * xd + prev);
            for i in 0..xd {
                m0[(i, i)] = 1 % p;
                m1[(xd + i, i)] = 1 % p;
                ms[(i, i)] = 1 % p;
                ms[(i, xd + i)] = 1 % p;
            }
            d0.push(m0);
            d1.push(m1);
            s.push(ms);
        }
        let d0 = self.add_map(x, w_ref, ChainMap { mats: d0 })?;
        let d1 = self.add_map(x, w_ref, ChainMap { mats: d1 })?;
        let s = self.add_map(w_ref, x, ChainMap { mats: s })?;
        Ok(QCylinder { base: x, w: w_ref, d0, d1, s, fibrant: true })
    }

    /// The closed-form contraction of the standard cylinder:
    /// `t(x) = (0, 0, x)` satisfies `d∘t + t∘d = d0 - d1` and `s∘t = 0`.
    pub fn standard_contraction(&self, x: ObjRef) -> Result<ChainHomotopy> {
        let xc = self.complex(x)?;
        let p = self.p;
        let mats = (0..xc.len())
            .map(|n| {
                let xd = xc.dim(n);
                let up = xc.dim(n + 1);
                let mut m = Mat::zeros(p, 2 * up + xd, xd);
                for i in 0..xd {
                    m[(2 * up + i, i)] = 1 % p;
                }
                m
            })
            .collect();
        Ok(ChainHomotopy { mats })
    }

    /// The path complex of `y`: degree `n >= 1` is `Y_n ⊕ Y_n ⊕ Y_{n+1}` in
    /// block order (face 0, face 1, path) with
    /// `d(y0, y1, z) = (d y0, d y1, -d z + y0 - y1)`; degree 0 is truncated
    /// to `Y_0 ⊕ Y_1` with `d(y0, y1, z) = (d y0, -d z + y0 - y1)` into it
    /// and faces `(y, z) -> y` and `(y, z) -> y - d z`. The truncation keeps
    /// the section a quasi-isomorphism while the face pair stays a fibration
    /// (degree-0 surjectivity is not required of fibrations).
    pub fn standard_path(&self, y: ObjRef) -> Result<PathObject> {
        let yc = self.complex(y)?;
        let p = self.p;
        let len = yc.len();
        let pdim = |n: usize| {
            if n == 0 {
                yc.dim(0) + yc.dim(1)
            } else {
                2 * yc.dim(n) + yc.dim(n + 1)
            }
        };
        let dims: Vec<usize> = (0..len).map(pdim).collect();
        let mut d = Vec::new();
        for n in 1..len {
            let (c0, cup) = (yc.dim(n), yc.dim(n + 1));
            let dn = yc.diff(n);
            let dup = yc.diff(n + 1);
            let mut m = Mat::zeros(p, pdim(n - 1), pdim(n));
            let (r0, rup) = (yc.dim(n - 1), yc.dim(n));
            // first-face rows carry d on the first face block
            for i in 0..r0 {
                for j in 0..c0 {
                    m[(i, j)] = dn[(i, j)];
                }
            }
            // second-face rows exist only above degree 0
            let z_row0 = if n == 1 { r0 } else { 2 * r0 };
            if n >= 2 {
                for i in 0..r0 {
                    for j in 0..c0 {
                        m[(r0 + i, c0 + j)] = dn[(i, j)];
                    }
                }
            }
            // path rows: +face0, -face1, -d on the path block
            for i in 0..rup {
                m[(z_row0 + i, i)] = 1 % p;
                m[(z_row0 + i, c0 + i)] = (p - 1) % p;
                for j in 0..cup {
                    m[(z_row0 + i, 2 * c0 + j)] = (p - dup[(i, j)]) % p;
                }
            }
            d.push(m);
        }
        let v = ChainComplex::new(p, dims, d)?;
        let v_ref = self.add_complex(v.clone())?;
        let mut delta0 = Vec::new();
        let mut delta1 = Vec::new();
        let mut sigma = Vec::new();
        for n in 0..len {
            let yd = yc.dim(n);
            let cols = pdim(n);
            let mut p0 = Mat::zeros(self.p, yd, cols);
            let mut p1 = Mat::zeros(self.p, yd, cols);
            let mut sg = Mat::zeros(self.p, cols, yd);
            if n == 0 {
                let d1m = yc.diff(1);
                for i in 0..yd {
                    p0[(i, i)] = 1 % self.p;
                    p1[(i, i)] = 1 % self.p;
                    sg[(i, i)] = 1 % self.p;
                }
                for i in 0..yd {
                    for j in 0..yc.dim(1) {
                        p1[(i, yd + j)] = (self.p - d1m[(i, j)]) % self.p;
                    }
                }
            } else {
                for i in 0..yd {
                    p0[(i, i)] = 1 % self.p;
                    p1[(i, yd + i)] = 1 % self.p;
                    sg[(i, i)] = 1 % self.p;
                    sg[(yd + i, i)] = 1 % self.p;
                }
            }
            delta0.push(p0);
            delta1.push(p1);
            sigma.push(sg);
        }
        let delta0 = self.add_map(v_ref, y, ChainMap { mats: delta0 })?;
        let delta1 = self.add_map(v_ref, y, ChainMap { mats: delta1 })?;
        let sigma = self.add_map(y, v_ref, ChainMap { mats: sigma })?;
        Ok(PathObject { base: y, v: v_ref, delta0, delta1, sigma, cofibrant: true })
    }

    /// Read the chain homotopy off a right homotopy into the standard path
    /// object (the path block of `k`).
    pub fn chain_homotopy_of_standard_path(
        &self,
        rh: &crate::cylinder::RightHomotopy,
    ) -> Result<ChainHomotopy> {
        let std_path = self.standard_path(rh.path.base)?;
        if std_path.v != rh.path.v || std_path.delta0 != rh.path.delta0 {
            return Err(Error::Structural("right homotopy is not on the standard path".into()));
        }
        let (xc, _, km, _, _) = self.triple(rh.k)?;
        let yc = self.complex(rh.path.base)?;
        let vc = self.complex(rh.path.v)?;
        let mats = (0..xc.len().max(yc.len().saturating_sub(1)))
            .map(|n| {
                let k_at = km.at(&vc, &xc, n);
                let z_col0 = if n == 0 { yc.dim(0) } else { 2 * yc.dim(n) };
                let rows = yc.dim(n + 1);
                let mut m = Mat::zeros(self.p, rows, xc.dim(n));
                for i in 0..rows {
                    for j in 0..xc.dim(n) {
                        m[(i, j)] = k_at[(z_col0 + i, j)];
                    }
                }
                m
            })
            .collect();
        Ok(ChainHomotopy { mats })
    }

    /// Wrap a chain homotopy `f - g = dk + kd` as a homotopy on the standard
    /// cylinder: `h(x0, x1, e) = f(x0) + g(x1) + k(e)`.
    pub fn homotopy_from_chain(
        &self,
        f: MorRef,
        g: MorRef,
        k: &ChainHomotopy,
    ) -> Result<QHomotopy> {
        let (src, tgt, fm, dom, cod) = self.triple(f)?;
        let (_, _, gm, gdom, gcod) = self.triple(g)?;
        if dom != gdom || cod != gcod {
            return Err(Error::EndpointMismatch("maps are not parallel".into()));
        }
        if !k.witnesses(&src, &tgt, &fm, &gm) {
            return Err(Error::Validation("matrices do not witness f - g = dk + kd".into()));
        }
        let cyl = self.standard_cylinder(dom)?;
        let wc = self.complex(cyl.w)?;
        let mut mats = Vec::new();
        for n in 0..wc.len().max(tgt.len()) {
            let xd = src.dim(n);
            let prev = if n >= 1 { src.dim(n - 1) } else { 0 };
            let rows = tgt.dim(n);
            let mut m = Mat::zeros(self.p, rows, 2 * xd + prev);
            let fa = fm.at(&tgt, &src, n);
            let ga = gm.at(&tgt, &src, n);
            for i in 0..rows {
                for j in 0..xd {
                    m[(i, j)] = fa[(i, j)];
                    m[(i, xd + j)] = ga[(i, j)];
                }
            }
            if n >= 1 {
                let ka = k.at(&tgt, &src, n - 1);
                for i in 0..rows {
                    for j in 0..prev {
                        m[(i, 2 * xd + j)] = ka[(i, j)];
                    }
                }
            }
            mats.push(m);
        }
        let h = self.add_map(cyl.w, cod, ChainMap { mats })?;
        Ok(QHomotopy { cyl, h, f, g })
    }

    /// Read the chain homotopy back off a homotopy whose cylinder is the
    /// standard cylinder of its base (the interval block of `h`).
    pub fn chain_homotopy_of_standard(&self, qh: &QHomotopy) -> Result<ChainHomotopy> {
        let std_cyl = self.standard_cylinder(qh.cyl.base)?;
        if std_cyl.w != qh.cyl.w || std_cyl.d0 != qh.cyl.d0 || std_cyl.d1 != qh.cyl.d1 {
            return Err(Error::Structural("homotopy is not on the standard cylinder".into()));
        }
        let (wc, tgt, hm, _, _) = self.triple(qh.h)?;
        let base = self.complex(qh.cyl.base)?;
        let mats = (0..base.len())
            .map(|n| {
                let xd = base.dim(n + 1);
                let h_at = hm.at(&tgt, &wc, n + 1);
                h_at.submatrix(0, 2 * xd, h_at.rows, base.dim(n))
            })
            .collect();
        Ok(ChainHomotopy { mats })
    }

    /// Extract the chain homotopy encoded by a q-homotopy on an arbitrary
    /// cylinder: solve for a contraction `t` of `d0 - d1` inside `ker s`
    /// and return `h ∘ t`.
    pub fn extract_chain_homotopy(&self, qh: &QHomotopy) -> Result<ChainHomotopy> {
        let (xc, wc, d0m, _, _) = self.triple(qh.cyl.d0)?;
        let (_, _, d1m, _, _) = self.triple(qh.cyl.d1)?;
        let (_, _, sm, _, _) = self.triple(qh.cyl.s)?;
        let (_, yc, hm, _, _) = self.triple(qh.h)?;
        let t = contraction(&xc, &wc, &d0m, &d1m, &sm)
            .ok_or_else(|| Error::Structural("cylinder admits no contraction".into()))?;
        let mats = (0..xc.len())
            .map(|n| hm.at(&yc, &wc, n + 1).mul(&t.at(&wc, &xc, n)))
            .collect();
        Ok(ChainHomotopy { mats })
    }

    /// Basis of the F_p vector space of chain maps `x -> y`.
    pub fn hom_basis(&self, x: ObjRef, y: ObjRef) -> Result<Vec<ChainMap>> {
        let (xc, yc) = (self.complex(x)?, self.complex(y)?);
        let len = xc.len().max(yc.len());
        let mut sys = crate::fp::LinSys::new(self.p);
        let blocks: Vec<_> = (0..len).map(|n| sys.add_block(yc.dim(n), xc.dim(n))).collect();
        for n in 1..len {
            let zero = Mat::zeros(self.p, yc.dim(n - 1), xc.dim(n));
            let batch = sys.equations(&zero);
            sys.term_left(&batch, &yc.diff(n), blocks[n], 1);
            sys.term_right(&batch, blocks[n - 1], &xc.diff(n), self.p - 1);
        }
        Ok(sys.kernel().into_iter().map(|mats| ChainMap { mats }).collect())
    }

    /// Decide whether two parallel morphisms are chain homotopic, returning
    /// the witness.
    pub fn connecting_homotopy(&self, f: MorRef, g: MorRef) -> Result<Option<ChainHomotopy>> {
        let (src, tgt, fm, dom, cod) = self.triple(f)?;
        let (_, _, gm, gdom, gcod) = self.triple(g)?;
        if dom != gdom || cod != gcod {
            return Err(Error::EndpointMismatch("maps are not parallel".into()));
        }
        Ok(null_homotopy(&src, &tgt, &fm, &gm))
    }

    fn mapping_cylinder(&self, f: MorRef) -> Result<Factorization> {
        let (xc, yc, fm, dom, cod) = self.triple(f)?;
        let p = self.p;
        let len = (xc.len() + 1).max(yc.len());
        let dims: Vec<usize> = (0..len)
            .map(|n| xc.dim(n) + if n >= 1 { xc.dim(n - 1) } else { 0 } + yc.dim(n))
            .collect();
        let mut d = Vec::new();
        for n in 1..len {
            let (rx, rxp, ry) = (
                xc.dim(n - 1),
                if n >= 2 { xc.dim(n - 2) } else { 0 },
                yc.dim(n - 1),
            );
            let (cx, cxp, cy) = (xc.dim(n), xc.dim(n - 1), yc.dim(n));
            let dx = xc.diff(n);
            let dxp = xc.diff(n - 1);
            let dy = yc.diff(n);
            let fprev = fm.at(&yc, &xc, n - 1);
            let mut m = Mat::zeros(p, rx + rxp + ry, cx + cxp + cy);
            for i in 0..rx {
                for j in 0..cx {
                    m[(i, j)] = dx[(i, j)];
                }
                // the shifted block feeds back into X with sign +1
                if i < cxp {
                    m[(i, cx + i)] = 1 % p;
                }
            }
            for i in 0..rxp {
                for j in 0..cxp {
                    m[(rx + i, cx + j)] = (p - dxp[(i, j)]) % p;
                }
            }
            for i in 0..ry {
                for j in 0..cxp {
                    m[(rx + rxp + i, cx + j)] = (p - fprev[(i, j)]) % p;
                }
                for j in 0..cy {
                    m[(rx + rxp + i, cx + cxp + j)] = dy[(i, j)];
                }
            }
            d.push(m);
        }
        let cylf = ChainComplex::new(p, dims, d)?;
        let mid = self.add_complex(cylf.clone())?;
        let mut lam = Vec::new();
        let mut rho = Vec::new();
        for n in 0..len {
            let (cx, cxp, cy) = (xc.dim(n), if n >= 1 { xc.dim(n - 1) } else { 0 }, yc.dim(n));
            let mut l = Mat::zeros(p, cx + cxp + cy, xc.dim(n));
            for i in 0..cx {
                l[(i, i)] = 1 % p;
            }
            lam.push(l);
            let mut r = Mat::zeros(p, yc.dim(n), cx + cxp + cy);
            let fa = fm.at(&yc, &xc, n);
            for i in 0..yc.dim(n) {
                for j in 0..cx {
                    r[(i, j)] = fa[(i, j)];
                }
                r[(i, cx + cxp + i)] = 1 % p;
            }
            rho.push(r);
        }
        let left = self.add_map(dom, mid, ChainMap { mats: lam })?;
        let right = self.add_map(mid, cod, ChainMap { mats: rho })?;
        Ok(Factorization { left, right, system: FactorizationSystem::CofThenTrivFib })
    }

    /// The acyclic complex of disks surjecting onto `y` in positive degrees:
    /// degree `n` is `Y_n ⊕ Y_{n+1}` (tops for n >= 1, then bottoms), with
    /// the differential sending tops identically onto the bottoms below.
    fn disk_surjector(&self, y: &ChainComplex) -> (ChainComplex, ChainMap) {
        let p = self.p;
        let len = y.len();
        let top = |n: usize| if n >= 1 { y.dim(n) } else { 0 };
        let dims: Vec<usize> = (0..len).map(|n| top(n) + y.dim(n + 1)).collect();
        let mut d = Vec::new();
        for n in 1..len {
            let (rt, rb) = (top(n - 1), y.dim(n));
            let (ct, cb) = (top(n), y.dim(n + 1));
            let mut m = Mat::zeros(p, rt + rb, ct + cb);
            for i in 0..ct.min(rb) {
                m[(rt + i, i)] = 1 % p;
            }
            d.push(m);
        }
        let e = ChainComplex::new(p, dims, d).expect("disk complex is well-formed");
        let mats = (0..len)
            .map(|n| {
                let (ct, cb) = (top(n), y.dim(n + 1));
                let mut m = Mat::zeros(p, y.dim(n), ct + cb);
                for i in 0..ct {
                    m[(i, i)] = 1 % p;
                }
                let dn = y.diff(n + 1);
                for i in 0..y.dim(n) {
                    for j in 0..cb {
                        m[(i, ct + j)] = dn[(i, j)];
                    }
                }
                m
            })
            .collect();
        (e, ChainMap { mats })
    }

    fn disk_factorization(&self, f: MorRef) -> Result<Factorization> {
        let (xc, yc, fm, dom, cod) = self.triple(f)?;
        let (e, em) = self.disk_surjector(&yc);
        let midc = xc.direct_sum(&e);
        let mid = self.add_complex(midc.clone())?;
        let len = midc.len();
        let mut lam = Vec::new();
        let mut rho = Vec::new();
        for n in 0..len.max(yc.len()) {
            let xd = xc.dim(n);
            let ed = e.dim(n);
            let mut l = Mat::zeros(self.p, xd + ed, xd);
            for i in 0..xd {
                l[(i, i)] = 1 % self.p;
            }
            lam.push(l);
            let fa = fm.at(&yc, &xc, n);
            let ea = em.mats.get(n).cloned().unwrap_or_else(|| Mat::zeros(self.p, yc.dim(n), ed));
            rho.push(fa.hstack(&ea));
        }
        let left = self.add_map(dom, mid, ChainMap { mats: lam })?;
        let right = self.add_map(mid, cod, ChainMap { mats: rho })?;
        Ok(Factorization { left, right, system: FactorizationSystem::TrivCofThenFib })
    }

    /// Shortcut status of `f` for the normality rules of a system.
    fn shortcut_status(&self, f: MorRef, system: FactorizationSystem) -> Result<Shortcut> {
        let flags = self.classify(f)?;
        Ok(match system {
            FactorizationSystem::CofThenTrivFib => {
                if flags.is_cof {
                    Shortcut::Left
                } else if flags.is_triv_fib() {
                    Shortcut::Right
                } else {
                    Shortcut::General
                }
            }
            FactorizationSystem::TrivCofThenFib => {
                if flags.is_triv_cof() {
                    Shortcut::Left
                } else if flags.is_fib {
                    Shortcut::Right
                } else {
                    Shortcut::General
                }
            }
        })
    }
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum Shortcut {
    /// f is already in the left class: factor as (f, id)
    Left,
    /// f is already in the right class: factor as (id, f)
    Right,
    General,
}

impl ModelInstance for ChainInstance {
    fn name(&self) -> &str {
        "chain"
    }

    fn dom(&self, f: MorRef) -> Result<ObjRef> {
        Ok(self.map_data(f)?.0)
    }

    fn cod(&self, f: MorRef) -> Result<ObjRef> {
        Ok(self.map_data(f)?.1)
    }

    fn identity(&self, x: ObjRef) -> Result<MorRef> {
        let xc = self.complex(x)?;
        self.intern_mor(x, x, ChainMap::identity(&xc))
    }

    fn compose(&self, g: MorRef, f: MorRef) -> Result<MorRef> {
        let (fx, fy, fm, fdom, fcod) = self.triple(f)?;
        let (_, gz, gm, gdom, gcod) = self.triple(g)?;
        if fcod != gdom {
            return Err(Error::NotComposable(g, f));
        }
        let composed = gm.compose(&fm, &fx, &fy, &gz);
        self.intern_mor(fdom, gcod, composed)
    }

    fn classify(&self, f: MorRef) -> Result<ClassFlags> {
        let (src, tgt, fm, _, _) = self.triple(f)?;
        Ok(classify_chain(&src, &tgt, &fm))
    }

    fn initial(&self) -> ObjRef {
        ObjRef(0)
    }

    fn terminal(&self) -> ObjRef {
        ObjRef(0)
    }

    fn from_initial(&self, x: ObjRef) -> Result<MorRef> {
        let xc = self.complex(x)?;
        let zero = ChainComplex::zero(self.p);
        self.intern_mor(self.initial(), x, ChainMap::zero(&zero, &xc))
    }

    fn to_terminal(&self, x: ObjRef) -> Result<MorRef> {
        let xc = self.complex(x)?;
        let zero = ChainComplex::zero(self.p);
        self.intern_mor(x, self.terminal(), ChainMap::zero(&xc, &zero))
    }

    fn coproduct(&self, x: ObjRef, y: ObjRef) -> Result<Coproduct> {
        let (xc, yc) = (self.complex(x)?, self.complex(y)?);
        let sum = xc.direct_sum(&yc);
        let obj = self.add_complex(sum.clone())?;
        let len = sum.len();
        let mut i0 = Vec::new();
        let mut i1 = Vec::new();
        for n in 0..len {
            let (a, b) = (xc.dim(n), yc.dim(n));
            let mut m0 = Mat::zeros(self.p, a + b, a);
            let mut m1 = Mat::zeros(self.p, a + b, b);
            for i in 0..a {
                m0[(i, i)] = 1 % self.p;
            }
            for i in 0..b {
                m1[(a + i, i)] = 1 % self.p;
            }
            i0.push(m0);
            i1.push(m1);
        }
        Ok(Coproduct {
            obj,
            inj0: self.add_map(x, obj, ChainMap { mats: i0 })?,
            inj1: self.add_map(y, obj, ChainMap { mats: i1 })?,
        })
    }

    fn product(&self, x: ObjRef, y: ObjRef) -> Result<Product> {
        let (xc, yc) = (self.complex(x)?, self.complex(y)?);
        let sum = xc.direct_sum(&yc);
        let obj = self.add_complex(sum.clone())?;
        let len = sum.len();
        let mut p0 = Vec::new();
        let mut p1 = Vec::new();
        for n in 0..len {
            let (a, b) = (xc.dim(n), yc.dim(n));
            let mut m0 = Mat::zeros(self.p, a, a + b);
            let mut m1 = Mat::zeros(self.p, b, a + b);
            for i in 0..a {
                m0[(i, i)] = 1 % self.p;
            }
            for i in 0..b {
                m1[(i, a + i)] = 1 % self.p;
            }
            p0.push(m0);
            p1.push(m1);
        }
        Ok(Product {
            obj,
            proj0: self.add_map(obj, x, ChainMap { mats: p0 })?,
            proj1: self.add_map(obj, y, ChainMap { mats: p1 })?,
        })
    }

    fn copair(&self, cp: &Coproduct, f: MorRef, g: MorRef) -> Result<MorRef> {
        let (_, tgt_f, fm, fdom, fcod) = self.triple(f)?;
        let (_, _, gm, gdom, gcod) = self.triple(g)?;
        if fcod != gcod {
            return Err(Error::EndpointMismatch("copair needs a common codomain".into()));
        }
        let (xc, yc) = (self.complex(fdom)?, self.complex(gdom)?);
        let sum = self.complex(cp.obj)?;
        let len = sum.len().max(tgt_f.len());
        let mats = (0..len)
            .map(|n| fm.at(&tgt_f, &xc, n).hstack(&gm.at(&tgt_f, &yc, n)))
            .collect();
        self.add_map(cp.obj, fcod, ChainMap { mats })
    }

    fn pair(&self, pr: &Product, f: MorRef, g: MorRef) -> Result<MorRef> {
        let (src_f, xc, fm, fdom, _) = self.triple(f)?;
        let (_, yc, gm, gdom, _) = self.triple(g)?;
        if fdom != gdom {
            return Err(Error::EndpointMismatch("pair needs a common domain".into()));
        }
        let prod = self.complex(pr.obj)?;
        let len = prod.len().max(src_f.len());
        let mats = (0..len)
            .map(|n| fm.at(&xc, &src_f, n).vstack(&gm.at(&yc, &src_f, n)))
            .collect();
        self.add_map(fdom, pr.obj, ChainMap { mats })
    }

    fn pushout(&self, f: MorRef, g: MorRef) -> Result<Pushout> {
        let (ac, bc, fm, fdom, fcod) = self.triple(f)?;
        let (_, cc, gm, gdom, gcod) = self.triple(g)?;
        if fdom != gdom {
            return Err(Error::EndpointMismatch("pushout needs a span".into()));
        }
        let p = self.p;
        let len = bc.len().max(cc.len()).max(ac.len());
        // per-degree projection onto the quotient of B ⊕ C by im(f, -g)
        let mut projs = Vec::new();
        let mut incls = Vec::new();
        let mut dims = Vec::new();
        for n in 0..len {
            let span = fm.at(&bc, &ac, n).vstack(&gm.at(&cc, &ac, n).neg());
            let ambient = bc.dim(n) + cc.dim(n);
            // RREF of the transpose: rows span the subspace, pivots are the
            // coordinates to eliminate
            let mut rowsp = Mat::zeros(p, span.cols, span.rows);
            for i in 0..span.rows {
                for j in 0..span.cols {
                    rowsp[(j, i)] = span[(i, j)];
                }
            }
            let pivots = rowsp.rref();
            let free: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
            let q = free.len();
            // projection: reduce each ambient basis vector by the RREF rows,
            // then read the free coordinates
            let mut proj = Mat::zeros(p, q, ambient);
            for j in 0..ambient {
                let mut v = vec![0u64; ambient];
                v[j] = 1 % p;
                for (r, &pc) in pivots.iter().enumerate() {
                    let c = v[pc];
                    if c != 0 {
                        for t in 0..ambient {
                            v[t] = (v[t] + (p - c) * rowsp[(r, t)]) % p;
                        }
                    }
                }
                for (qi, &fc) in free.iter().enumerate() {
                    proj[(qi, j)] = v[fc];
                }
            }
            let mut incl = Mat::zeros(p, ambient, q);
            for (qi, &fc) in free.iter().enumerate() {
                incl[(fc, qi)] = 1 % p;
            }
            projs.push(proj);
            incls.push(incl);
            dims.push(q);
        }
        // induced differential on the quotient
        let mut d = Vec::new();
        for n in 1..len {
            let amb_d = bc.diff(n).block_diag(&cc.diff(n));
            d.push(projs[n - 1].mul(&amb_d).mul(&incls[n]));
        }
        let qc = ChainComplex::new(p, dims, d)?;
        let obj = self.add_complex(qc.clone())?;
        let mut a_mats = Vec::new();
        let mut b_mats = Vec::new();
        for n in 0..len {
            let (bdim, cdim) = (bc.dim(n), cc.dim(n));
            let mut ib = Mat::zeros(p, bdim + cdim, bdim);
            for i in 0..bdim {
                ib[(i, i)] = 1 % p;
            }
            let mut ic = Mat::zeros(p, bdim + cdim, cdim);
            for i in 0..cdim {
                ic[(bdim + i, i)] = 1 % p;
            }
            a_mats.push(projs[n].mul(&ib));
            b_mats.push(projs[n].mul(&ic));
        }
        let inc0 = self.add_map(fcod, obj, ChainMap { mats: a_mats })?;
        let inc1 = self.add_map(gcod, obj, ChainMap { mats: b_mats })?;
        // remember the sections so induced maps can be computed later
        {
            let mut inner = self.inner.lock().unwrap();
            inner.pushout_sections.entry((inc0, inc1)).or_insert(incls);
        }
        Ok(Pushout { obj, inc0, inc1 })
    }

    fn pushout_induced(&self, po: &Pushout, u: MorRef, v: MorRef) -> Result<MorRef> {
        let (bc, tc, um, _, ucod) = self.triple(u)?;
        let (cc, _, vm, _, vcod) = self.triple(v)?;
        if ucod != vcod {
            return Err(Error::EndpointMismatch("cocone legs must share a codomain".into()));
        }
        let sections = {
            let inner = self.inner.lock().unwrap();
            inner
                .pushout_sections
                .get(&(po.inc0, po.inc1))
                .cloned()
                .ok_or_else(|| Error::Structural("unknown pushout for induced map".into()))?
        };
        let qc = self.complex(po.obj)?;
        let len = qc.len().max(tc.len());
        let mats = (0..len)
            .map(|n| {
                let copair = um.at(&tc, &bc, n).hstack(&vm.at(&tc, &cc, n));
                let sect = sections
                    .get(n)
                    .cloned()
                    .unwrap_or_else(|| Mat::zeros(self.p, bc.dim(n) + cc.dim(n), qc.dim(n)));
                copair.mul(&sect)
            })
            .collect();
        self.add_map(po.obj, ucod, ChainMap { mats })
    }

    fn factorize(&self, f: MorRef, system: FactorizationSystem) -> Result<Factorization> {
        let (_, _, _, dom, cod) = self.triple(f)?;
        match self.shortcut_status(f, system)? {
            Shortcut::Left => Ok(Factorization { left: f, right: self.identity(cod)?, system }),
            Shortcut::Right => Ok(Factorization { left: self.identity(dom)?, right: f, system }),
            Shortcut::General => match system {
                FactorizationSystem::CofThenTrivFib => self.mapping_cylinder(f),
                FactorizationSystem::TrivCofThenFib => self.disk_factorization(f),
            },
        }
    }

    fn factor_middle(
        &self,
        f: MorRef,
        g: MorRef,
        u: MorRef,
        v: MorRef,
        system: FactorizationSystem,
    ) -> Result<MorRef> {
        // square check: g∘u = v∘f
        if self.compose(g, u)? != self.compose(v, f)? {
            return Err(Error::Structural("square does not commute".into()));
        }
        let sf = self.shortcut_status(f, system)?;
        let sg = self.shortcut_status(g, system)?;
        match (sf, sg) {
            (Shortcut::Left, Shortcut::Left) => Ok(v),
            (Shortcut::Right, Shortcut::Right) => Ok(u),
            (Shortcut::General, Shortcut::General) => {
                let (um_src, um_tgt, um, udom, ucod) = self.triple(u)?;
                let (vm_src, vm_tgt, vm, _, _) = self.triple(v)?;
                let fac_f = self.factorize(f, system)?;
                let fac_g = self.factorize(g, system)?;
                let mid_f = self.cod(fac_f.left)?;
                let mid_g = self.cod(fac_g.left)?;
                let (mfc, mgc) = (self.complex(mid_f)?, self.complex(mid_g)?);
                let len = mfc.len().max(mgc.len());
                let mats: Vec<Mat> = match system {
                    FactorizationSystem::CofThenTrivFib => (0..len)
                        .map(|n| {
                            // cylinder middle: diag(u_n, u_{n-1}, v_n)
                            let un = um.at(&um_tgt, &um_src, n);
                            let uprev = if n >= 1 {
                                um.at(&um_tgt, &um_src, n - 1)
                            } else {
                                Mat::zeros(self.p, 0, 0)
                            };
                            let vn = vm.at(&vm_tgt, &vm_src, n);
                            un.block_diag(&uprev).block_diag(&vn)
                        })
                        .collect(),
                    FactorizationSystem::TrivCofThenFib => (0..len)
                        .map(|n| {
                            // sum middle: diag(u_n, E(v)_n) with E(v) acting
                            // as v on tops (degree n) and bottoms (degree n+1)
                            let un = um.at(&um_tgt, &um_src, n);
                            let vt = if n >= 1 {
                                vm.at(&vm_tgt, &vm_src, n)
                            } else {
                                Mat::zeros(self.p, 0, 0)
                            };
                            let vb = vm.at(&vm_tgt, &vm_src, n + 1);
                            un.block_diag(&vt).block_diag(&vb)
                        })
                        .collect(),
                };
                let _ = (udom, ucod);
                self.add_map(mid_f, mid_g, ChainMap { mats })
            }
            _ => Err(Error::Unsupported(
                "middle maps across mixed normality shortcuts are not provided".into(),
            )),
        }
    }

    fn factorization_functorial(&self) -> bool {
        true
    }

    fn factorization_normal(&self) -> bool {
        true
    }

    fn solve_lift(&self, prob: &LiftProblem) -> Result<MorRef> {
        let (ac, bc, im, _, icod) = self.triple(prob.i)?;
        let (cc, dc, pm, pdom, _) = self.triple(prob.p)?;
        let (_, _, tm, _, _) = self.triple(prob.top)?;
        let (_, _, bm, _, _) = self.triple(prob.bottom)?;
        if self.compose(prob.p, prob.top)? != self.compose(prob.bottom, prob.i)? {
            return Err(Error::Structural("lifting square does not commute".into()));
        }
        let h = lift_chain_map(&ac, &bc, &cc, &dc, &im, &pm, &tm, &bm)?;
        self.add_map(icod, pdom, h)
    }

    fn q_cylinder(&self, x: ObjRef) -> Result<QCylinder> {
        self.standard_cylinder(x)
    }

    fn path_object(&self, y: ObjRef) -> Result<PathObject> {
        self.standard_path(y)
    }

    fn oracle_equal(&self, a: &QHomotopy, b: &QHomotopy) -> Result<bool> {
        if a.f != b.f || a.g != b.g {
            return Err(Error::EndpointMismatch("oracle needs common endpoints".into()));
        }
        let ka = self.extract_chain_homotopy(a)?;
        let kb = self.extract_chain_homotopy(b)?;
        let (src, tgt, _, _, _) = self.triple(a.f)?;
        Ok(second_homotopy(&src, &tgt, &ka, &kb).is_some())
    }

    fn find_q_homotopy(&self, f: MorRef, g: MorRef) -> Result<Option<QHomotopy>> {
        match self.connecting_homotopy(f, g)? {
            None => Ok(None),
            Some(k) => Ok(Some(self.homotopy_from_chain(f, g, &k)?)),
        }
    }

    /// Hom-sets here are finite F_p vector spaces; enumerate when small
    /// enough (used by the connected-components quotient).
    fn enumerate_morphisms(&self, x: ObjRef, y: ObjRef) -> Option<Vec<MorRef>> {
        const CAP: u128 = 4096;
        let basis = self.hom_basis(x, y).ok()?;
        let total = (self.p as u128).checked_pow(basis.len() as u32)?;
        if total > CAP {
            return None;
        }
        let (xc, yc) = (self.complex(x).ok()?, self.complex(y).ok()?);
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut rem = idx;
            let mut acc = ChainMap::zero(&xc, &yc);
            for b in &basis {
                let c = (rem % self.p as u128) as u64;
                rem /= self.p as u128;
                if c != 0 {
                    let len = acc.mats.len();
                    for n in 0..len {
                        acc.mats[n] = acc.mats[n].add(&b.at(&yc, &xc, n).scale(c));
                    }
                }
            }
            out.push(self.intern_mor(x, y, acc).ok()?);
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::validate_q_cylinder;
    use crate::fp::Mat;

    fn inst2() -> ChainInstance {
        ChainInstance::new(2)
    }

    #[test]
    fn standard_cylinder_of_sphere_has_expected_dims() {
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let cyl = inst.standard_cylinder(s0).unwrap();
        let w = inst.complex(cyl.w).unwrap();
        assert_eq!(w.dims, vec![2, 1]);
        let d = validate_q_cylinder(&inst, &cyl).unwrap();
        assert!(d.is_valid(), "failures: {:?}", d.failures());
        assert!(cyl.fibrant);
    }

    /// path-object laws, shared by the per-object tests below
    fn check_path_object(inst: &ChainInstance, y: ObjRef) {
        let p = inst.standard_path(y).unwrap();
        let id = inst.identity(y).unwrap();
        assert_eq!(inst.compose(p.delta0, p.sigma).unwrap(), id);
        assert_eq!(inst.compose(p.delta1, p.sigma).unwrap(), id);
        assert!(inst.classify(p.sigma).unwrap().is_triv_cof());
        let pr = inst.product(y, y).unwrap();
        let combined = inst.pair(&pr, p.delta0, p.delta1).unwrap();
        assert!(inst.classify(combined).unwrap().is_fib);
    }

    #[test]
    fn standard_path_objects_are_valid() {
        let inst = inst2();
        // in degrees >= 1 the path complex mirrors the cylinder; degree 0 is
        // truncated, so for S0 the path object collapses onto S0 itself
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        check_path_object(&inst, s0);
        let v = inst.complex(inst.standard_path(s0).unwrap().v).unwrap();
        assert_eq!(v.dims, vec![1]);

        let d1 = inst.add_complex(ChainComplex::disk(2, 1)).unwrap();
        check_path_object(&inst, d1);
        let v = inst.complex(inst.standard_path(d1).unwrap().v).unwrap();
        assert_eq!(v.dims, vec![2, 2]);

        // the mirrored block count shows up from degree 1 upward
        let s1 = inst.add_complex(ChainComplex::sphere(2, 1)).unwrap();
        check_path_object(&inst, s1);
        let v = inst.complex(inst.standard_path(s1).unwrap().v).unwrap();
        assert_eq!(v.dims, vec![1, 2]);

        // terminal object: the path object of 0 is 0 itself
        check_path_object(&inst, inst.terminal());
    }

    #[test]
    fn cylinder_of_zero_complex_is_degenerate() {
        let inst = inst2();
        let zero = inst.initial();
        let cyl = inst.standard_cylinder(zero).unwrap();
        let d = validate_q_cylinder(&inst, &cyl).unwrap();
        assert!(d.is_valid());
        let w = inst.complex(cyl.w).unwrap();
        assert_eq!(w.total_dim(), 0);
    }

    #[test]
    fn factorize_identity_is_identity_pair() {
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let id = inst.identity(s0).unwrap();
        for system in [FactorizationSystem::CofThenTrivFib, FactorizationSystem::TrivCofThenFib] {
            let fac = inst.factorize(id, system).unwrap();
            assert_eq!(fac.left, id);
            assert_eq!(fac.right, id);
        }
    }

    #[test]
    fn factorize_from_initial_keeps_object() {
        // 0 -> X is a cofibration, so normality forces (f, id)
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let f = inst.from_initial(s0).unwrap();
        let fac = inst.factorize(f, FactorizationSystem::CofThenTrivFib).unwrap();
        assert_eq!(fac.left, f);
        assert_eq!(inst.cod(fac.left).unwrap(), s0);
        assert_eq!(fac.right, inst.identity(s0).unwrap());
    }

    /// a non-cofibration non-fibration test map: S0 ⊕ D1 -> S0 collapse
    /// composed with an inclusion, tuned so neither shortcut applies
    fn general_map(inst: &ChainInstance) -> MorRef {
        // f: S0 ⊕ S0 -> S0, (a, b) -> a + b: surjective in degree 0 only,
        // not injective, not a quasi-iso
        let s0 = ChainComplex::sphere(2, 0);
        let sum = s0.direct_sum(&s0);
        let dom = inst.add_complex(sum.clone()).unwrap();
        let cod = inst.add_complex(s0.clone()).unwrap();
        let f = ChainMap::new(&sum, &s0, vec![Mat::from_rows(2, 1, 2, &[1, 1])]).unwrap();
        inst.add_map(dom, cod, f).unwrap()
    }

    #[test]
    fn factorize_general_map_both_systems() {
        let inst = inst2();
        let f = general_map(&inst);
        for system in [FactorizationSystem::CofThenTrivFib, FactorizationSystem::TrivCofThenFib] {
            let fac = inst.factorize(f, system).unwrap();
            assert_eq!(inst.compose(fac.right, fac.left).unwrap(), f, "recomposes to f");
            let lf = inst.classify(fac.left).unwrap();
            let rf = inst.classify(fac.right).unwrap();
            match system {
                FactorizationSystem::CofThenTrivFib => {
                    assert!(lf.is_cof);
                    assert!(rf.is_triv_fib());
                }
                FactorizationSystem::TrivCofThenFib => {
                    assert!(lf.is_triv_cof());
                    assert!(rf.is_fib);
                }
            }
        }
    }

    #[test]
    fn pushout_dimensions_match_rank_count() {
        // pushout of the two end inclusions of the cylinder on S0:
        // brute-force dimension check dim(W ⊕ W) - dim X per degree
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let cyl = inst.standard_cylinder(s0).unwrap();
        let po = inst.pushout(cyl.d1, cyl.d0).unwrap();
        let w = inst.complex(cyl.w).unwrap();
        let x = inst.complex(s0).unwrap();
        let q = inst.complex(po.obj).unwrap();
        for n in 0..q.len().max(w.len()) {
            // the span legs are injective, so the quotient loses exactly dim X_n
            assert_eq!(q.dim(n), 2 * w.dim(n) - x.dim(n), "degree {n}");
        }
        // inclusions commute with the span
        assert_eq!(
            inst.compose(po.inc0, cyl.d1).unwrap(),
            inst.compose(po.inc1, cyl.d0).unwrap()
        );
        // universal property on a test cocone: both s legs agree on the span
        let s2 = inst.pushout_induced(&po, cyl.s, cyl.s).unwrap();
        assert_eq!(inst.compose(s2, po.inc0).unwrap(), cyl.s);
        assert_eq!(inst.compose(s2, po.inc1).unwrap(), cyl.s);
    }

    #[test]
    fn pushout_of_identities_is_same_object() {
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let id = inst.identity(s0).unwrap();
        let po = inst.pushout(id, id).unwrap();
        let q = inst.complex(po.obj).unwrap();
        assert_eq!(q.total_dim(), 1);
        // inclusions are mutually inverse isos here; composing with the
        // induced map of the identity cocone gives the identity
        let m = inst.pushout_induced(&po, id, id).unwrap();
        assert_eq!(inst.compose(m, po.inc0).unwrap(), id);
    }

    #[test]
    fn lift_with_identity_left_edge_returns_top() {
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let f = general_map(&inst);
        let dom = inst.dom(f).unwrap();
        let id = inst.identity(dom).unwrap();
        let h = inst
            .solve_lift(&LiftProblem { i: id, p: f, top: inst.identity(dom).unwrap(), bottom: f })
            .unwrap();
        assert_eq!(h, id);
        let _ = s0;
    }

    #[test]
    fn lift_with_identity_right_edge_returns_bottom() {
        let inst = inst2();
        let f = general_map(&inst);
        let cod = inst.cod(f).unwrap();
        let id = inst.identity(cod).unwrap();
        let h = inst
            .solve_lift(&LiftProblem { i: f, p: id, top: f, bottom: id })
            .unwrap();
        assert_eq!(h, id);
    }

    #[test]
    fn homotopy_roundtrip_through_standard_cylinder() {
        let inst = inst2();
        // X = D1, Y = D1 ⊕ S0; nontrivial homotopies exist
        let d1 = ChainComplex::disk(2, 1);
        let y = ChainComplex::disk(2, 1).direct_sum(&ChainComplex::sphere(2, 0));
        let xr = inst.add_complex(d1.clone()).unwrap();
        let yr = inst.add_complex(y.clone()).unwrap();
        let f = inst.add_map(xr, yr, ChainMap::zero(&d1, &y)).unwrap();
        // k: X_0 -> Y_1 arbitrary gives g = f - (dk + kd)
        let k = ChainHomotopy {
            mats: vec![Mat::from_rows(2, 1, 1, &[1]), Mat::zeros(2, 0, 1)],
        };
        let mut g_mats = Vec::new();
        for n in 0..2 {
            let mut delta = y.diff(n + 1).mul(&k.at(&y, &d1, n));
            if n > 0 {
                delta = delta.add(&k.at(&y, &d1, n - 1).mul(&d1.diff(n)));
            }
            g_mats.push(Mat::zeros(2, y.dim(n), d1.dim(n)).sub(&delta));
        }
        let g = inst.add_map(xr, yr, ChainMap::new(&d1, &y, g_mats).unwrap()).unwrap();
        let qh = inst.homotopy_from_chain(g, f, &k).unwrap();
        // wait: k witnesses (g) - (f)? we built g = -(dk+kd) and f = 0, so
        // k witnesses f - g... pick the orientation the constructor accepts
        let back = inst.chain_homotopy_of_standard(&qh).unwrap();
        assert_eq!(back.mats[0], k.mats[0]);
        // extraction through the generic contraction agrees up to a second
        // homotopy with the block read-off
        let extracted = inst.extract_chain_homotopy(&qh).unwrap();
        assert!(second_homotopy(&d1, &y, &extracted, &back).is_some());
    }

    #[test]
    fn oracle_accepts_equal_and_rejects_inequivalent() {
        let inst = inst2();
        // target with zero differential and room in degree 1: distinct
        // homotopy classes of witnesses for 0 ⇝ 0
        let x = ChainComplex::sphere(2, 0);
        let y = ChainComplex::new(2, vec![1, 1], vec![Mat::zeros(2, 1, 1)]).unwrap();
        let xr = inst.add_complex(x.clone()).unwrap();
        let yr = inst.add_complex(y.clone()).unwrap();
        let z = inst.add_map(xr, yr, ChainMap::zero(&x, &y)).unwrap();
        let h0 = inst
            .homotopy_from_chain(z, z, &ChainHomotopy::zero(&x, &y))
            .unwrap();
        let h1 = inst
            .homotopy_from_chain(
                z,
                z,
                &ChainHomotopy { mats: vec![Mat::from_rows(2, 1, 1, &[1])] },
            )
            .unwrap();
        assert!(inst.oracle_equal(&h0, &h0).unwrap());
        assert!(!inst.oracle_equal(&h0, &h1).unwrap());
    }

    #[test]
    fn find_q_homotopy_matches_null_homotopy() {
        let inst = inst2();
        let s0 = inst.add_complex(ChainComplex::sphere(2, 0)).unwrap();
        let id = inst.identity(s0).unwrap();
        let zero_map = {
            let x = inst.complex(s0).unwrap();
            inst.add_map(s0, s0, ChainMap::zero(&x, &x)).unwrap()
        };
        assert!(inst.find_q_homotopy(id, id).unwrap().is_some());
        assert!(inst.find_q_homotopy(id, zero_map).unwrap().is_none());
    }

    #[test]
    fn whole_instance_is_fibrant_cofibrant() {
        let inst = inst2();
        let y = inst
            .add_complex(ChainComplex::disk(2, 2).direct_sum(&ChainComplex::sphere(2, 1)))
            .unwrap();
        assert!(crate::instance::is_fibrant_cofibrant(&inst, y).unwrap());
    }

    #[test]
    fn oracle_identifies_contraction_based_extraction() {
        // a homotopy and its inversion extract to negatives of each other
        let inst = inst2();
        let x = ChainComplex::disk(2, 1);
        let y = ChainComplex::disk(2, 1);
        let xr = inst.add_complex(x.clone()).unwrap();
        let yr = inst.add_complex(y.clone()).unwrap();
        let id = inst.identity(xr).unwrap();
        let _ = yr;
        let k = super::super::null_homotopy(&x, &y, &ChainMap::identity(&x), &ChainMap::identity(&x));
        assert!(k.is_some());
        let qh = inst.homotopy_from_chain(id, id, &k.unwrap()).unwrap();
        let inv = crate::cylinder::invert_q_homotopy(&qh);
        let m = inst.extract_chain_homotopy(&qh).unwrap();
        let mi = inst.extract_chain_homotopy(&inv).unwrap();
        // m + mi is null-2-homotopic (over F2, m = mi up to second homotopy)
        assert!(second_homotopy(&x, &y, &m, &mi.neg().add(&ChainHomotopy::zero(&x, &y), &x, &y)).is_some());
    }
}
