//! Exact linear algebra over the prime field F_p.
//!
//! Everything downstream (classifiers, factorizations, lifting solvers, the
//! congruence oracle) reduces to solving linear systems here, so the solver
//! must be deterministic: `Mat::solve` row-reduces and sets every free
//! variable to zero under the fixed column order.

use serde::{Deserialize, Serialize};

/// Modular inverse by Fermat; `p` is prime and `a != 0 (mod p)`.
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dense row-major matrix over F_p. Entries are kept reduced into `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Mat{}x{}/{}[", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Build from row-major entries, reducing mod p.
    pub fn from_rows(p: u64, rows: usize, cols: usize, entries: &[u64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Mat { p, rows, cols, data: entries.iter().map(|&e| e % p).collect() }
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.p, self.rows)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + self.p - b) % self.p)
            .collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|&a| (self.p - a) % self.p).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Mat {
        let c = c % self.p;
        let data = self.data.iter().map(|&a| a * c % self.p).collect();
        Mat { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)] + a * other[(k, j)] % self.p;
                    out[(i, j)] = v % self.p;
                }
            }
        }
        out
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `self` to the left of `other`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Block diagonal of `self` and `other`.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Mat {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols);
        let mut out = Mat::zeros(self.p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(row0 + i, col0 + j)];
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    let t = self[(row, j)];
                    self[(row, j)] = self[(pr, j)];
                    self[(pr, j)] = t;
                }
            }
            let inv = inv_mod(self[(row, col)], self.p);
            for j in 0..self.cols {
                self[(row, j)] = self[(row, j)] * inv % self.p;
            }
            for r in 0..self.rows {
                if r != row && self[(r, col)] != 0 {
                    let c = self[(r, col)];
                    for j in 0..self.cols {
                        let v = self[(r, j)] + (self.p - c) * self[(row, j)] % self.p;
                        self[(r, j)] = v % self.p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one column per basis vector, in the
    /// canonical order induced by the free columns.
    pub fn kernel_basis(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(self.p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = (self.p - m[(r, fc)]) % self.p;
            }
        }
        basis
    }

    /// Canonical solution of `self * x = b`: row-reduce the augmented matrix
    /// and set all free variables to zero. Returns `None` when inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let bcol = Mat::from_rows(self.p, self.rows, 1, b);
        let mut aug = self.hstack(&bcol);
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)];
        }
        Some(x)
    }

    /// Two-sided inverse, when square and non-singular.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(self.p, n));
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(aug.submatrix(0, n, n, n))
    }

    /// Column space: `true` iff v lies in the span of the columns.
    pub fn spans(&self, v: &[u64]) -> bool {
        self.solve(v).is_some()
    }
}

/// A sparse linear system over F_p with block-structured unknowns.
///
/// Unknowns are entries of matrix blocks registered with [`LinSys::add_block`];
/// within a block the variable order is row-major, blocks are ordered by
/// registration. This fixed order is what makes every downstream solver
/// deterministic.
pub struct LinSys {
    p: u64,
    n_vars: usize,
    blocks: Vec<(usize, usize, usize)>, // (offset, rows, cols)
    rows: Vec<(Vec<(usize, u64)>, u64)>,
}

/// Handle to a registered unknown block.
#[derive(Clone, Copy, Debug)]
pub struct BlockId(usize);

impl LinSys {
    pub fn new(p: u64) -> Self {
        LinSys { p, n_vars: 0, blocks: Vec::new(), rows: Vec::new() }
    }

    pub fn add_block(&mut self, rows: usize, cols: usize) -> BlockId {
        let id = BlockId(self.blocks.len());
        self.blocks.push((self.n_vars, rows, cols));
        self.n_vars += rows * cols;
        id
    }

    fn var(&self, b: BlockId, i: usize, j: usize) -> usize {
        let (off, _r, c) = self.blocks[b.0];
        off + i * c + j
    }

    fn block_shape(&self, b: BlockId) -> (usize, usize) {
        let (_, r, c) = self.blocks[b.0];
        (r, c)
    }

    /// Start a batch of equations of shape `rows x cols`, one scalar equation
    /// per entry, with right-hand side `rhs`.
    pub fn equations(&mut self, rhs: &Mat) -> EqBatch {
        let start = self.rows.len();
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                self.rows.push((Vec::new(), rhs[(i, j)]));
            }
        }
        EqBatch { start, rows: rhs.rows, cols: rhs.cols }
    }

    /// Add the term `sign * A * X` (for unknown block X) to a batch.
    pub fn term_left(&mut self, batch: &EqBatch, a: &Mat, x: BlockId, sign: u64) {
        let (xr, xc) = self.block_shape(x);
        assert_eq!(a.cols, xr);
        assert_eq!((a.rows, xc), (batch.rows, batch.cols));
        let sign = sign % self.p;
        for i in 0..batch.rows {
            for j in 0..batch.cols {
                let row = batch.start + i * batch.cols + j;
                for k in 0..xr {
                    let c = a[(i, k)] * sign % self.p;
                    if c != 0 {
                        let v = self.var(x, k, j);
                        self.rows[row].0.push((v, c));
                    }
                }
            }
        }
    }

    /// Add the term `sign * X * B` (for unknown block X) to a batch.
    pub fn term_right(&mut self, batch: &EqBatch, x: BlockId, b: &Mat, sign: u64) {
        let (xr, xc) = self.block_shape(x);
        assert_eq!(xc, b.rows);
        assert_eq!((xr, b.cols), (batch.rows, batch.cols));
        let sign = sign % self.p;
        for i in 0..batch.rows {
            for j in 0..batch.cols {
                let row = batch.start + i * batch.cols + j;
                for k in 0..xc {
                    let c = b[(k, j)] * sign % self.p;
                    if c != 0 {
                        let v = self.var(x, i, k);
                        self.rows[row].0.push((v, c));
                    }
                }
            }
        }
    }

    /// Basis of the homogeneous solution space (right-hand sides ignored),
    /// one per-block matrix bundle per basis vector.
    pub fn kernel(&self) -> Vec<Vec<Mat>> {
        let mut a = Mat::zeros(self.p, self.rows.len(), self.n_vars);
        for (r, (terms, _)) in self.rows.iter().enumerate() {
            for &(v, c) in terms {
                a[(r, v)] = (a[(r, v)] + c) % self.p;
            }
        }
        let basis = a.kernel_basis();
        (0..basis.cols)
            .map(|k| {
                self.blocks
                    .iter()
                    .map(|&(off, r, c)| {
                        let entries: Vec<u64> =
                            (0..r * c).map(|i| basis[(off + i, k)]).collect();
                        Mat::from_rows(self.p, r, c, &entries)
                    })
                    .collect()
            })
            .collect()
    }

    /// Solve and return each block as a matrix, or `None` if inconsistent.
    pub fn solve(&self) -> Option<Vec<Mat>> {
        let mut a = Mat::zeros(self.p, self.rows.len(), self.n_vars);
        let mut b = Vec::with_capacity(self.rows.len());
        for (r, (terms, rhs)) in self.rows.iter().enumerate() {
            for &(v, c) in terms {
                a[(r, v)] = (a[(r, v)] + c) % self.p;
            }
            b.push(*rhs);
        }
        let x = a.solve(&b)?;
        let mut out = Vec::with_capacity(self.blocks.len());
        for &(off, r, c) in &self.blocks {
            out.push(Mat::from_rows(self.p, r, c, &x[off..off + r * c]));
        }
        Some(out)
    }
}

pub struct EqBatch {
    start: usize,
    rows: usize,
    cols: usize,
}

/// Iterate over all matrices of a given shape over F_p, in base-p counter
/// order. Test oracles use this for exhaustive checks at small sizes.
pub fn enumerate_mats(p: u64, rows: usize, cols: usize) -> impl Iterator<Item = Mat> {
    let n = rows * cols;
    let total = (p as u128).checked_pow(n as u32).expect("enumeration too large");
    (0..total).map(move |idx| {
        let mut data = vec![0u64; n];
        let mut rem = idx;
        for slot in data.iter_mut() {
            *slot = (rem % p as u128) as u64;
            rem /= p as u128;
        }
        Mat { p, rows, cols, data }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_and_rank() {
        let m = Mat::from_rows(2, 3, 3, &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(m.rank(), 2);
        let id = Mat::identity(5, 4);
        assert_eq!(id.rank(), 4);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let a = Mat::identity(7, 3);
        assert_eq!(a.solve(&[1, 2, 3]), Some(vec![1, 2, 3]));
    }

    #[test]
    fn solve_inconsistent_is_none() {
        // x + y = 1 and x + y = 0
        let a = Mat::from_rows(3, 2, 2, &[1, 1, 1, 1]);
        assert_eq!(a.solve(&[1, 0]), None);
    }

    #[test]
    fn solve_free_variables_are_zero() {
        // one equation, two unknowns: x + 2y = 1 over F_5; canonical answer x=1, y=0
        let a = Mat::from_rows(5, 1, 2, &[1, 2]);
        assert_eq!(a.solve(&[1]), Some(vec![1, 0]));
    }

    #[test]
    fn kernel_basis_spans_kernel_exhaustively() {
        // exhaustive cross-check against enumeration at tiny sizes
        for p in [2u64, 3] {
            for m in enumerate_mats(p, 2, 2) {
                let basis = m.kernel_basis();
                let mut count = 0u64;
                for v in enumerate_mats(p, 2, 1) {
                    if m.mul(&v).is_zero() {
                        count += 1;
                        assert!(basis.spans(&v.column(0)));
                    }
                }
                assert_eq!(count, p.pow(basis.cols as u32));
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_rows(5, 2, 2, &[1, 2, 3, 4]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let sing = Mat::from_rows(5, 2, 2, &[1, 2, 2, 4]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn linsys_left_and_right_terms() {
        // solve A*X - X*B = C with known solution
        let p = 7;
        let a = Mat::from_rows(p, 2, 2, &[1, 2, 0, 3]);
        let b = Mat::from_rows(p, 2, 2, &[2, 0, 1, 1]);
        let x_true = Mat::from_rows(p, 2, 2, &[4, 5, 6, 1]);
        let c = a.mul(&x_true).sub(&x_true.mul(&b));
        let mut sys = LinSys::new(p);
        let x = sys.add_block(2, 2);
        let batch = sys.equations(&c);
        sys.term_left(&batch, &a, x, 1);
        sys.term_right(&batch, x, &b, p - 1);
        let sol = sys.solve().unwrap();
        assert_eq!(a.mul(&sol[0]).sub(&sol[0].mul(&b)), c);
    }

    proptest! {
        #[test]
        fn prop_solve_verifies(rows in 1usize..5, cols in 1usize..5, seed in 0u64..1000) {
            // random solvable system: pick x, set b = A x, re-verify A*sol = b
            let p = 5u64;
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || { state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); state >> 33 };
            let a = Mat::from_rows(p, rows, cols, &(0..rows*cols).map(|_| next() % p).collect::<Vec<_>>());
            let x = Mat::from_rows(p, cols, 1, &(0..cols).map(|_| next() % p).collect::<Vec<_>>());
            let b = a.mul(&x);
            let sol = a.solve(&b.column(0)).expect("constructed solvable");
            let sol_m = Mat::from_rows(p, cols, 1, &sol);
            prop_assert_eq!(a.mul(&sol_m), b);
        }
    }
}
