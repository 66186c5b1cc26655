//! Shared generators for the integration and acceptance suites: seeded
//! random chain complexes (direct sums of spheres and disks twisted by a
//! random change of basis), random chain maps from the hom-space basis, and
//! random homotopy data.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ho2::chain::{ChainComplex, ChainHomotopy, ChainInstance, ChainMap};
use ho2::fp::Mat;
use ho2::instance::{ModelInstance, MorRef, ObjRef};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random invertible matrix over F_p.
pub fn random_invertible(rng: &mut StdRng, p: u64, n: usize) -> Mat {
    loop {
        let entries: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let m = Mat::from_rows(p, n, n, &entries);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Random bounded complex with total dimension at most `max_total`: a direct
/// sum of spheres and disks conjugated by a random degreewise basis change,
/// so `d∘d = 0` holds by construction while the matrices look arbitrary.
pub fn random_complex(rng: &mut StdRng, p: u64, max_total: usize) -> ChainComplex {
    let mut acc = ChainComplex::zero(p);
    let mut budget = max_total.max(1);
    while budget > 0 && rng.gen_bool(0.8) {
        let piece = match rng.gen_range(0..4) {
            0 => ChainComplex::sphere(p, rng.gen_range(0..2)),
            1 => ChainComplex::sphere(p, rng.gen_range(0..3)),
            _ => ChainComplex::disk(p, rng.gen_range(1..3)),
        };
        if piece.total_dim() > budget {
            break;
        }
        budget -= piece.total_dim();
        acc = acc.direct_sum(&piece);
    }
    if acc.total_dim() == 0 {
        acc = ChainComplex::sphere(p, 0);
    }
    twist(rng, &acc)
}

/// Conjugate by random degreewise invertibles.
pub fn twist(rng: &mut StdRng, x: &ChainComplex) -> ChainComplex {
    let us: Vec<Mat> = (0..x.len()).map(|n| random_invertible(rng, x.p, x.dim(n))).collect();
    let d = (1..x.len())
        .map(|n| {
            us[n - 1]
                .mul(&x.diff(n))
                .mul(&us[n].inverse().expect("invertible by construction"))
        })
        .collect();
    ChainComplex::new(x.p, x.dims.clone(), d).expect("twisted complex is valid")
}

/// Random chain map via the hom-space basis.
pub fn random_map(
    rng: &mut StdRng,
    inst: &ChainInstance,
    x: ObjRef,
    y: ObjRef,
) -> MorRef {
    let basis = inst.hom_basis(x, y).unwrap();
    let (xc, yc) = (inst.complex(x).unwrap(), inst.complex(y).unwrap());
    let mut acc = ChainMap::zero(&xc, &yc);
    for b in &basis {
        let c = rng.gen_range(0..inst.modulus());
        if c != 0 {
            for n in 0..acc.mats.len() {
                acc.mats[n] = acc.mats[n].add(&b.at(&yc, &xc, n).scale(c));
            }
        }
    }
    inst.add_map(x, y, acc).unwrap()
}

/// Random degree-(+1) matrices `X_n -> Y_{n+1}` (not required to witness
/// anything by themselves).
pub fn random_degree_one(
    rng: &mut StdRng,
    inst: &ChainInstance,
    x: ObjRef,
    y: ObjRef,
) -> ChainHomotopy {
    let (xc, yc) = (inst.complex(x).unwrap(), inst.complex(y).unwrap());
    let mats = (0..xc.len())
        .map(|n| {
            let (r, c) = (yc.dim(n + 1), xc.dim(n));
            let entries: Vec<u64> = (0..r * c).map(|_| rng.gen_range(0..inst.modulus())).collect();
            Mat::from_rows(inst.modulus(), r, c, &entries)
        })
        .collect();
    ChainHomotopy { mats }
}

/// Given `f` and matrices `k`, produce the unique `g` with
/// `f - g = dk + kd`, together with `g` interned.
pub fn offset_by_homotopy(
    inst: &ChainInstance,
    f: MorRef,
    k: &ChainHomotopy,
) -> (MorRef, ChainMap) {
    let (x, y, fm) = inst.map_data(f).unwrap();
    let (xc, yc) = (inst.complex(x).unwrap(), inst.complex(y).unwrap());
    let len = xc.len().max(yc.len());
    let mut mats = Vec::new();
    for n in 0..len {
        let mut delta = yc.diff(n + 1).mul(&k.at(&yc, &xc, n));
        if n > 0 {
            delta = delta.add(&k.at(&yc, &xc, n - 1).mul(&xc.diff(n)));
        }
        mats.push(fm.at(&yc, &xc, n).sub(&delta));
    }
    let gm = ChainMap::new(&xc, &yc, mats).expect("offset of a chain map is a chain map");
    let g = inst.add_map(x, y, gm.clone()).unwrap();
    (g, gm)
}

/// A random homotopy pair: `f`, `g`, a wrapped q-homotopy witnessing
/// `f ⇝ g`, and the underlying matrices.
pub struct HomotopySample {
    pub x: ObjRef,
    pub y: ObjRef,
    pub f: MorRef,
    pub g: MorRef,
    pub k: ChainHomotopy,
    pub qh: ho2::cylinder::QHomotopy,
}

pub fn random_homotopy(rng: &mut StdRng, inst: &ChainInstance, max_total: usize) -> HomotopySample {
    let xc = random_complex(rng, inst.modulus(), max_total);
    let yc = random_complex(rng, inst.modulus(), max_total);
    let x = inst.add_complex(xc).unwrap();
    let y = inst.add_complex(yc).unwrap();
    let f = random_map(rng, inst, x, y);
    let k = random_degree_one(rng, inst, x, y);
    let (g, _) = offset_by_homotopy(inst, f, &k);
    let qh = inst.homotopy_from_chain(f, g, &k).unwrap();
    HomotopySample { x, y, f, g, k, qh }
}

/// Random automorphism of an object: rejection-sample chain self-maps until
/// every degree matrix is invertible, falling back to the identity.
pub fn random_automorphism(rng: &mut StdRng, inst: &ChainInstance, x: ObjRef) -> MorRef {
    let xc = inst.complex(x).unwrap();
    for _ in 0..60 {
        let m = random_map(rng, inst, x, x);
        let (_, _, mm) = inst.map_data(m).unwrap();
        if (0..xc.len()).all(|n| mm.at(&xc, &xc, n).inverse().is_some()) {
            return m;
        }
    }
    inst.identity(x).unwrap()
}

fn sum_of(p: u64, stack: &[ChainComplex]) -> ChainComplex {
    stack
        .iter()
        .fold(ChainComplex::zero(p), |acc, piece| acc.direct_sum(piece))
}

/// A random quasi-isomorphism: a composite of automorphisms, inclusions of
/// contractible summands, and projections off them (the three building
/// blocks of split weak equivalences).
pub fn random_quasi_iso(rng: &mut StdRng, inst: &ChainInstance, max_total: usize) -> MorRef {
    let p = inst.modulus();
    let base = random_complex(rng, p, max_total);
    let mut stack = vec![base];
    let mut cur = inst.add_complex(sum_of(p, &stack)).unwrap();
    let mut acc = random_automorphism(rng, inst, cur);
    for _ in 0..rng.gen_range(1..=3usize) {
        let cc = inst.complex(cur).unwrap();
        if stack.len() == 1 || rng.gen_bool(0.5) {
            // include a fresh contractible summand
            let d = ChainComplex::disk(p, rng.gen_range(1..3));
            stack.push(d);
            let sum = sum_of(p, &stack);
            let tgt = inst.add_complex(sum.clone()).unwrap();
            let mats = (0..sum.len())
                .map(|n| {
                    let mut m = Mat::zeros(p, sum.dim(n), cc.dim(n));
                    for i in 0..cc.dim(n) {
                        m[(i, i)] = 1 % p;
                    }
                    m
                })
                .collect();
            let incl = inst.add_map(cur, tgt, ChainMap { mats }).unwrap();
            acc = inst.compose(incl, acc).unwrap();
            cur = tgt;
        } else {
            // project off the most recent summand
            stack.pop();
            let smaller = sum_of(p, &stack);
            let tgt = inst.add_complex(smaller.clone()).unwrap();
            let mats = (0..cc.len())
                .map(|n| {
                    let mut m = Mat::zeros(p, smaller.dim(n), cc.dim(n));
                    for i in 0..smaller.dim(n) {
                        m[(i, i)] = 1 % p;
                    }
                    m
                })
                .collect();
            let proj = inst.add_map(cur, tgt, ChainMap { mats }).unwrap();
            acc = inst.compose(proj, acc).unwrap();
            cur = tgt;
        }
        if rng.gen_bool(0.5) {
            let theta = random_automorphism(rng, inst, cur);
            acc = inst.compose(theta, acc).unwrap();
        }
    }
    acc
}
