//! Degreewise linear solvers: null-homotopies, second homotopies between
//! homotopies, cylinder contractions, and chain-map lifts. Every solver
//! assembles one sparse system and takes the canonical (free-variables-zero)
//! solution, so results are deterministic.

use crate::fp::{LinSys, Mat};
use crate::instance::{Error, Result};

use super::{ChainComplex, ChainHomotopy, ChainMap, SecondHomotopy};

/// Solve `f - g = d∘k + k∘d` for `k[n] : X_n -> Y_{n+1}`; `None` iff the
/// system is unsolvable.
pub fn null_homotopy(
    src: &ChainComplex,
    tgt: &ChainComplex,
    f: &ChainMap,
    g: &ChainMap,
) -> Option<ChainHomotopy> {
    let len = src.len().max(tgt.len());
    let mut sys = LinSys::new(src.p);
    let blocks: Vec<_> = (0..len).map(|n| sys.add_block(tgt.dim(n + 1), src.dim(n))).collect();
    for n in 0..len {
        let rhs = f.at(tgt, src, n).sub(&g.at(tgt, src, n));
        let batch = sys.equations(&rhs);
        sys.term_left(&batch, &tgt.diff(n + 1), blocks[n], 1);
        if n > 0 {
            sys.term_right(&batch, blocks[n - 1], &src.diff(n), 1);
        }
    }
    sys.solve().map(|mats| ChainHomotopy { mats })
}

/// Solve `h - h2 = d∘k - k∘d` for `k[n] : X_n -> Y_{n+2}`; the fixed sign
/// convention is the hom-complex boundary in degree two.
pub fn second_homotopy(
    src: &ChainComplex,
    tgt: &ChainComplex,
    h: &ChainHomotopy,
    h2: &ChainHomotopy,
) -> Option<SecondHomotopy> {
    let len = src.len().max(tgt.len());
    let mut sys = LinSys::new(src.p);
    let blocks: Vec<_> = (0..len).map(|n| sys.add_block(tgt.dim(n + 2), src.dim(n))).collect();
    for n in 0..len {
        let rhs = h.at(tgt, src, n).sub(&h2.at(tgt, src, n));
        let batch = sys.equations(&rhs);
        sys.term_left(&batch, &tgt.diff(n + 2), blocks[n], 1);
        if n > 0 {
            sys.term_right(&batch, blocks[n - 1], &src.diff(n), src.p - 1);
        }
    }
    sys.solve().map(|mats| SecondHomotopy { mats })
}

/// A contraction of a cylinder-like object: given parallel chain maps
/// `a, b : X -> W` and a retraction-like `s : W -> X` with `s∘a = s∘b`,
/// solve `a - b = d∘t + t∘d` with the extra constraint `s∘t = 0`, so the
/// null-homotopy lands in `ker s`. Used to extract the chain homotopy encoded
/// by a homotopy on an arbitrary q-cylinder.
pub fn contraction(
    x: &ChainComplex,
    w: &ChainComplex,
    a: &ChainMap,
    b: &ChainMap,
    s: &ChainMap,
) -> Option<ChainHomotopy> {
    let len = x.len().max(w.len());
    let mut sys = LinSys::new(x.p);
    let blocks: Vec<_> = (0..len).map(|n| sys.add_block(w.dim(n + 1), x.dim(n))).collect();
    for n in 0..len {
        let rhs = a.at(w, x, n).sub(&b.at(w, x, n));
        let batch = sys.equations(&rhs);
        sys.term_left(&batch, &w.diff(n + 1), blocks[n], 1);
        if n > 0 {
            sys.term_right(&batch, blocks[n - 1], &x.diff(n), 1);
        }
        // constraint s∘t = 0 in degree n+1 slots
        let zero = Mat::zeros(x.p, x.dim(n + 1), x.dim(n));
        let batch = sys.equations(&zero);
        sys.term_left(&batch, &s.at(x, w, n + 1), blocks[n], 1);
    }
    sys.solve().map(|mats| ChainHomotopy { mats })
}

/// Solve a lifting square in chain complexes: find a chain map
/// `h : B -> C` with `h∘i = top` and `p∘h = bottom` for `i : A -> B`,
/// `p : C -> D`, `top : A -> C`, `bottom : B -> D`.
#[allow(clippy::too_many_arguments)]
pub fn lift_chain_map(
    a: &ChainComplex,
    b: &ChainComplex,
    c: &ChainComplex,
    d: &ChainComplex,
    i: &ChainMap,
    p: &ChainMap,
    top: &ChainMap,
    bottom: &ChainMap,
) -> Result<ChainMap> {
    let len = [a.len(), b.len(), c.len(), d.len()].into_iter().max().unwrap_or(0);
    let mut sys = LinSys::new(a.p);
    let blocks: Vec<_> = (0..len).map(|n| sys.add_block(c.dim(n), b.dim(n))).collect();
    for n in 0..len {
        // h ∘ i = top
        let batch = sys.equations(&top.at(c, a, n));
        sys.term_right(&batch, blocks[n], &i.at(b, a, n), 1);
        // p ∘ h = bottom
        let batch = sys.equations(&bottom.at(d, b, n));
        sys.term_left(&batch, &p.at(d, c, n), blocks[n], 1);
        // chain-map condition d∘h_n - h_{n-1}∘d = 0
        if n > 0 {
            let zero = Mat::zeros(a.p, c.dim(n - 1), b.dim(n));
            let batch = sys.equations(&zero);
            sys.term_left(&batch, &c.diff(n), blocks[n], 1);
            sys.term_right(&batch, blocks[n - 1], &b.diff(n), a.p - 1);
        }
    }
    let mats = sys.solve().ok_or(Error::NoLift)?;
    Ok(ChainMap { mats })
}
