//! Bounded non-negatively graded chain complexes of finite-dimensional F_p
//! vector spaces, with the projective model structure: weak equivalences are
//! quasi-isomorphisms, fibrations are the maps surjective in strictly
//! positive degrees, cofibrations the degreewise injections. Over a field
//! every object is fibrant and cofibrant.

mod instance;
mod solve;

pub use instance::ChainInstance;
pub use solve::{contraction, lift_chain_map, null_homotopy, second_homotopy};

use serde::{Deserialize, Serialize};

use crate::fp::Mat;
use crate::instance::{ClassFlags, Error, Result};

/// A chain complex, stored as per-degree dimensions plus the differentials.
/// `d[i]` is the matrix of the differential from degree `i + 1` into degree
/// `i` (shape `dims[i] x dims[i+1]`, row-major, entries in `[0, p)`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainComplex {
    pub p: u64,
    pub dims: Vec<usize>,
    pub d: Vec<Mat>,
}

impl ChainComplex {
    /// Build and validate: shapes line up, degree below 0 is empty by
    /// construction, and `d∘d = 0`.
    pub fn new(p: u64, dims: Vec<usize>, d: Vec<Mat>) -> Result<Self> {
        let mut c = ChainComplex { p, dims, d };
        c.trim();
        let expected = c.dims.len().saturating_sub(1);
        if c.d.len() != expected {
            return Err(Error::Validation(format!(
                "expected {} differentials for {} degrees, got {}",
                expected,
                c.dims.len(),
                c.d.len()
            )));
        }
        for (i, m) in c.d.iter().enumerate() {
            if m.rows != c.dims[i] || m.cols != c.dims[i + 1] || m.p != p {
                return Err(Error::Validation(format!(
                    "differential into degree {i} has shape {}x{}, expected {}x{}",
                    m.rows,
                    m.cols,
                    c.dims[i],
                    c.dims[i + 1]
                )));
            }
        }
        for i in 0..c.d.len().saturating_sub(1) {
            if !c.d[i].mul(&c.d[i + 1]).is_zero() {
                return Err(Error::Validation(format!(
                    "d∘d != 0 between degrees {} and {}",
                    i + 2,
                    i
                )));
            }
        }
        Ok(c)
    }

    /// Zero complex.
    pub fn zero(p: u64) -> Self {
        ChainComplex { p, dims: Vec::new(), d: Vec::new() }
    }

    /// Sphere: F_p concentrated in degree `n`.
    pub fn sphere(p: u64, n: usize) -> Self {
        let mut dims = vec![0; n + 1];
        dims[n] = 1;
        let d = (0..n).map(|i| Mat::zeros(p, dims[i], dims[i + 1])).collect();
        ChainComplex { p, dims, d }
    }

    /// Disk: identity differential between degrees `n` and `n - 1` (`n >= 1`);
    /// contractible.
    pub fn disk(p: u64, n: usize) -> Self {
        assert!(n >= 1, "disks start at degree 1");
        let mut dims = vec![0; n + 1];
        dims[n] = 1;
        dims[n - 1] = 1;
        let d = (0..n)
            .map(|i| {
                if i == n - 1 {
                    Mat::identity(p, 1)
                } else {
                    Mat::zeros(p, dims[i], dims[i + 1])
                }
            })
            .collect();
        ChainComplex { p, dims, d }
    }

    fn trim(&mut self) {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            while self.d.len() > self.dims.len().saturating_sub(1) {
                self.d.pop();
            }
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Matrix of `d_n : X_n -> X_{n-1}`; zero-sized outside the support.
    pub fn diff(&self, n: usize) -> Mat {
        if n == 0 || n > self.d.len() {
            let rows = if n == 0 { 0 } else { self.dim(n - 1) };
            return Mat::zeros(self.p, rows, self.dim(n));
        }
        self.d[n - 1].clone()
    }

    /// Homology dimension in degree `n`: `dim ker d_n - rank d_{n+1}`.
    pub fn homology(&self, n: usize) -> usize {
        if n >= self.len() {
            return 0;
        }
        let ker = self.dim(n) - self.diff(n).rank();
        ker - self.diff(n + 1).rank()
    }

    /// Direct sum, block order `self` then `other`.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let len = self.len().max(other.len());
        let dims: Vec<usize> = (0..len).map(|n| self.dim(n) + other.dim(n)).collect();
        let d = (0..len.saturating_sub(1))
            .map(|i| self.diff(i + 1).block_diag(&other.diff(i + 1)))
            .collect();
        ChainComplex { p: self.p, dims, d }
    }
}

/// A chain map as per-degree matrices `f[n] : X_n -> Y_n` (shape
/// `dim Y_n x dim X_n`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainMap {
    pub mats: Vec<Mat>,
}

impl ChainMap {
    /// Validate shapes and the commutation `f∘d = d∘f`, then normalize the
    /// stored length.
    pub fn new(src: &ChainComplex, tgt: &ChainComplex, mats: Vec<Mat>) -> Result<Self> {
        let len = src.len().max(tgt.len());
        if mats.len() > len {
            for m in &mats[len..] {
                if m.rows != 0 || m.cols != 0 {
                    return Err(Error::Validation("chain map exceeds complex degrees".into()));
                }
            }
        }
        let mut full = Vec::with_capacity(len);
        for n in 0..len {
            let m = mats
                .get(n)
                .cloned()
                .unwrap_or_else(|| Mat::zeros(src.p, tgt.dim(n), src.dim(n)));
            if m.rows != tgt.dim(n) || m.cols != src.dim(n) {
                return Err(Error::Validation(format!(
                    "chain map degree {n} has shape {}x{}, expected {}x{}",
                    m.rows,
                    m.cols,
                    tgt.dim(n),
                    src.dim(n)
                )));
            }
            full.push(m);
        }
        let f = ChainMap { mats: full };
        for n in 1..=len {
            let lhs = f.at(tgt, src, n - 1).mul(&src.diff(n));
            let rhs = tgt.diff(n).mul(&f.at(tgt, src, n));
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "chain map does not commute with d at degree {n}"
                )));
            }
        }
        Ok(f)
    }

    pub fn zero(src: &ChainComplex, tgt: &ChainComplex) -> Self {
        let len = src.len().max(tgt.len());
        ChainMap {
            mats: (0..len).map(|n| Mat::zeros(src.p, tgt.dim(n), src.dim(n))).collect(),
        }
    }

    pub fn identity(x: &ChainComplex) -> Self {
        ChainMap { mats: (0..x.len()).map(|n| Mat::identity(x.p, x.dim(n))).collect() }
    }

    /// Matrix at degree `n`, materializing a zero block outside the stored
    /// range.
    pub fn at(&self, tgt: &ChainComplex, src: &ChainComplex, n: usize) -> Mat {
        self.mats
            .get(n)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(src.p, tgt.dim(n), src.dim(n)))
    }

    /// `self ∘ other` for `other: X -> Y`, `self: Y -> Z`.
    pub fn compose(&self, other: &ChainMap, x: &ChainComplex, y: &ChainComplex, z: &ChainComplex) -> ChainMap {
        let len = x.len().max(z.len()).max(y.len());
        let mats = (0..len)
            .map(|n| self.at(z, y, n).mul(&other.at(y, x, n)))
            .collect();
        ChainMap { mats }
    }
}

/// The three class predicates of the projective structure.
///
/// Weak equivalence: induced map on homology is an isomorphism in every
/// degree. Fibration: surjective in degrees >= 1. Cofibration: degreewise
/// injective (the cokernel is automatically projective over a field).
pub fn classify_chain(src: &ChainComplex, tgt: &ChainComplex, f: &ChainMap) -> ClassFlags {
    let len = src.len().max(tgt.len());
    let mut flags = ClassFlags { is_we: true, is_fib: true, is_cof: true };
    for n in 0..len {
        let m = f.at(tgt, src, n);
        let r = m.rank();
        if n >= 1 && r != tgt.dim(n) {
            flags.is_fib = false;
        }
        if r != src.dim(n) {
            flags.is_cof = false;
        }
        // induced map on homology: iso iff f(ker d)+im d = ker d on the
        // target and the induced map is injective
        let ker_src = src.diff(n).kernel_basis();
        let h_src = ker_src.cols - src.diff(n + 1).rank();
        let ker_tgt_dim = tgt.dim(n) - tgt.diff(n).rank();
        let im_tgt = {
            // columns spanning im d_{n+1} on the target
            tgt.diff(n + 1)
        };
        let mapped = m.mul(&ker_src);
        let combined = mapped.hstack(&im_tgt);
        let r_comb = combined.rank();
        let r_im = im_tgt.rank();
        let injective = r_comb - r_im == h_src;
        let surjective = r_comb == ker_tgt_dim;
        if !(injective && surjective) {
            flags.is_we = false;
        }
    }
    flags
}

/// Per-degree matrices `k[n] : X_n -> Y_{n+1}` witnessing `f - g = dk + kd`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChainHomotopy {
    pub mats: Vec<Mat>,
}

impl ChainHomotopy {
    pub fn zero(src: &ChainComplex, tgt: &ChainComplex) -> Self {
        let len = src.len().max(tgt.len().saturating_sub(1));
        ChainHomotopy {
            mats: (0..len).map(|n| Mat::zeros(src.p, tgt.dim(n + 1), src.dim(n))).collect(),
        }
    }

    pub fn at(&self, tgt: &ChainComplex, src: &ChainComplex, n: usize) -> Mat {
        self.mats
            .get(n)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(src.p, tgt.dim(n + 1), src.dim(n)))
    }

    /// Check `f - g = d∘k + k∘d` in every degree.
    pub fn witnesses(
        &self,
        src: &ChainComplex,
        tgt: &ChainComplex,
        f: &ChainMap,
        g: &ChainMap,
    ) -> bool {
        let len = src.len().max(tgt.len());
        (0..len).all(|n| {
            let lhs = f.at(tgt, src, n).sub(&g.at(tgt, src, n));
            let mut rhs = tgt.diff(n + 1).mul(&self.at(tgt, src, n));
            if n > 0 {
                rhs = rhs.add(&self.at(tgt, src, n - 1).mul(&src.diff(n)));
            }
            lhs == rhs
        })
    }

    pub fn add(&self, other: &ChainHomotopy, src: &ChainComplex, tgt: &ChainComplex) -> ChainHomotopy {
        let len = self.mats.len().max(other.mats.len());
        ChainHomotopy {
            mats: (0..len)
                .map(|n| self.at(tgt, src, n).add(&other.at(tgt, src, n)))
                .collect(),
        }
    }

    pub fn neg(&self) -> ChainHomotopy {
        ChainHomotopy { mats: self.mats.iter().map(Mat::neg).collect() }
    }
}

/// Matrices `k[n] : X_n -> Y_{n+2}` witnessing `h - h' = d∘k - k∘d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SecondHomotopy {
    pub mats: Vec<Mat>,
}

/// JSON form of a complex: `{"p": 2, "degrees": [...], "d": [[row-major]...]}`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ComplexJson {
    pub p: u64,
    pub degrees: Vec<usize>,
    pub d: Vec<Vec<u64>>,
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<ChainComplex> {
        let mut mats = Vec::new();
        for (i, rows) in self.d.iter().enumerate() {
            let r = self.degrees.get(i).copied().unwrap_or(0);
            let c = self.degrees.get(i + 1).copied().unwrap_or(0);
            if rows.len() != r * c {
                return Err(Error::Validation(format!(
                    "differential {i} has {} entries, expected {}",
                    rows.len(),
                    r * c
                )));
            }
            mats.push(Mat::from_rows(self.p, r, c, rows));
        }
        ChainComplex::new(self.p, self.degrees.clone(), mats)
    }

    pub fn from_complex(x: &ChainComplex) -> Self {
        ComplexJson {
            p: x.p,
            degrees: x.dims.clone(),
            d: x.d.iter().map(|m| m.entries().to_vec()).collect(),
        }
    }
}

/// JSON form of a chain map between two inline complexes.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MapJson {
    pub p: u64,
    pub source: ComplexJson,
    pub target: ComplexJson,
    /// one row-major matrix per degree, shape `target.degrees[n] x source.degrees[n]`
    pub matrices: Vec<Vec<u64>>,
}

impl MapJson {
    pub fn to_map(&self) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
        let src = self.source.to_complex()?;
        let tgt = self.target.to_complex()?;
        let mut mats = Vec::new();
        for (n, rows) in self.matrices.iter().enumerate() {
            let r = tgt.dim(n);
            let c = src.dim(n);
            if rows.len() != r * c {
                return Err(Error::Validation(format!(
                    "map degree {n} has {} entries, expected {}",
                    rows.len(),
                    r * c
                )));
            }
            mats.push(Mat::from_rows(self.p, r, c, rows));
        }
        let f = ChainMap::new(&src, &tgt, mats)?;
        Ok((src, tgt, f))
    }
}
