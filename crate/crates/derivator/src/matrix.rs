//! Dense matrices over prime fields F_p, with the exact rank / kernel
//! computations everything else reduces to.

use crate::error::{Error, Result};
use rand::Rng;

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Row-major dense matrix with entries in {0, .., p-1}.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FpMatrix {}x{} mod {} [", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        let data = data.into_iter().map(|x| x % p).collect();
        Ok(FpMatrix { p, rows, cols, data })
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % p;
            }
        }
        m
    }

    pub fn random(p: u32, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(p, rows, cols, |_, _| rng.gen_range(0..p))
    }

    /// Random invertible matrix, by rejection sampling (fast at desk scale).
    pub fn random_invertible(p: u32, n: usize, rng: &mut impl Rng) -> Self {
        loop {
            let m = Self::random(p, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: u32) {
        let e = &mut self.data[i * self.cols + j];
        *e = (*e + v % self.p) % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        let data = self.data.iter().map(|&x| (p - x) % p).collect();
        FpMatrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p as u64;
        let c = (c as u64) % p;
        let data = self.data.iter().map(|&x| ((x as u64 * c) % p) as u32).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(FpMatrix { p, rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidMatrix(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// self * other.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(Error::InvalidMatrix(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let row_out = &mut out.data[i * other.cols..(i + 1) * other.cols];
                let row_b = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in row_out.iter_mut().zip(row_b) {
                    *o = ((*o as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.rows != other.rows {
            return Err(Error::InvalidMatrix("hstack row mismatch".into()));
        }
        let cols = self.cols + other.cols;
        let mut out = FpMatrix::zeros(self.p, self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols]
                .copy_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            out.data[i * cols + self.cols..(i + 1) * cols]
                .copy_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.cols != other.cols {
            return Err(Error::InvalidMatrix("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Copy `block` into self with top-left corner at (i0, j0).
    pub fn set_block(&mut self, i0: usize, j0: usize, block: &Self) {
        debug_assert!(i0 + block.rows <= self.rows && j0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(i0 + i) * self.cols + j0 + j] = block.data[i * block.cols + j];
            }
        }
    }

    /// Add `c * block` into self at (i0, j0).
    pub fn add_block(&mut self, i0: usize, j0: usize, block: &Self, c: u32) {
        debug_assert!(i0 + block.rows <= self.rows && j0 + block.cols <= self.cols);
        let p = self.p as u64;
        let c = (c as u64) % p;
        if c == 0 {
            return;
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                let e = &mut self.data[(i0 + i) * self.cols + j0 + j];
                *e = ((*e as u64 + c * block.data[i * block.cols + j] as u64) % p) as u32;
            }
        }
    }

    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Self {
        let mut out = FpMatrix::zeros(self.p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.data[(i0 + i) * self.cols + j0 + j];
            }
        }
        out
    }

    fn inv_mod(&self, a: u32) -> u32 {
        // Fermat: a^(p-2) mod p.
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u32
    }

    /// Row-reduce in place; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // find pivot
            let mut pivot = None;
            for r in row..self.rows {
                if self.data[r * self.cols + col] != 0 {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot else { continue };
            if pr != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = self.inv_mod(self.data[row * self.cols + col]) as u64;
            for j in col..self.cols {
                let e = &mut self.data[row * self.cols + j];
                *e = ((*e as u64) * inv % p) as u32;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.data[r * self.cols + col] as u64;
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for j in col..self.cols {
                    let v = self.data[row * self.cols + j] as u64;
                    let e = &mut self.data[r * self.cols + j];
                    *e = ((*e as u64 + neg * v) % p) as u32;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of ker(self) as the columns of the returned matrix.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FpMatrix::zeros(self.p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.data[fc * out.cols + k] = 1;
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = r.data[prow * r.cols + fc];
                if v != 0 {
                    out.data[pc * out.cols + k] = (self.p - v) % self.p;
                }
            }
        }
        out
    }

    /// For a matrix with full row rank, a right inverse S with self * S = I.
    pub fn right_inverse(&self) -> Result<Self> {
        let (r, pivots) = self.hstack(&FpMatrix::identity(self.p, self.rows))?.rref();
        if pivots.len() != self.rows || pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::InvalidMatrix("matrix does not have full row rank".into()));
        }
        // rows of r: [rref(self) | T] with T * self-rows relation; columns `pivots`
        // of self map to unit vectors, so S e_i = column of identity solution.
        let mut s = FpMatrix::zeros(self.p, self.cols, self.rows);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..self.rows {
                s.data[pc * self.rows + j] = r.data[prow * r.cols + self.cols + j];
            }
        }
        debug_assert!(self.mul(&s).unwrap() == FpMatrix::identity(self.p, self.rows));
        Ok(s)
    }

    /// For a matrix with full column rank, a left inverse L with L * self = I.
    pub fn left_inverse(&self) -> Result<Self> {
        Ok(self.transpose().right_inverse()?.transpose())
    }

    /// Solve self * x = b for one solution; error if inconsistent.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        if b.rows != self.rows {
            return Err(Error::InvalidMatrix("solve: rhs row mismatch".into()));
        }
        let (r, pivots) = self.hstack(b)?.rref();
        // any pivot in the b-part means inconsistency
        if pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::InvalidMatrix("solve: inconsistent system".into()));
        }
        let mut x = FpMatrix::zeros(self.p, self.cols, b.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = r.data[prow * r.cols + self.cols + j];
            }
        }
        Ok(x)
    }

    /// Whether the columns of `v` all lie in the column span of `self`.
    pub fn spans(&self, v: &Self) -> bool {
        let joint = self.hstack(v).expect("spans: shape mismatch");
        self.rank() == joint.rank()
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>], cols: usize) -> Result<Self> {
        for r in rows {
            if r.len() != cols {
                return Err(Error::InvalidMatrix("ragged rows".into()));
            }
        }
        let data = rows.iter().flatten().copied().collect();
        FpMatrix::new(p, rows.len(), cols, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force rank by row reduction written independently (the spot-check
    /// oracle for the fast path).
    fn rank_bruteforce(m: &FpMatrix) -> usize {
        let p = m.p() as i64;
        let mut a: Vec<Vec<i64>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j) as i64).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let piv = (rank..m.rows()).find(|&r| a[r][col] % p != 0);
            if let Some(r) = piv {
                a.swap(rank, r);
                for r2 in 0..m.rows() {
                    if r2 != rank && a[r2][col] % p != 0 {
                        // eliminate by cross-multiplication, no inverses needed
                        let (c1, c2) = (a[rank][col], a[r2][col]);
                        for j in 0..m.cols() {
                            a[r2][j] = ((a[r2][j] * c1 - a[rank][j] * c2) % p + p * p) % p;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn identity_rank() {
        for p in [2, 3, 7] {
            assert_eq!(FpMatrix::identity(p, 4).rank(), 4);
            assert_eq!(FpMatrix::zeros(p, 3, 5).rank(), 0);
        }
    }

    #[test]
    fn empty_shapes() {
        let m = FpMatrix::zeros(7, 0, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().cols(), 4);
        let n = FpMatrix::zeros(7, 4, 0);
        assert_eq!(n.rank(), 0);
        assert_eq!(n.kernel_basis().cols(), 0);
        assert_eq!(m.mul(&FpMatrix::zeros(7, 4, 2)).unwrap().rows(), 0);
    }

    #[test]
    fn kernel_is_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u32, 3, 7] {
            for _ in 0..20 {
                let m = FpMatrix::random(p, 5, 7, &mut rng);
                let k = m.kernel_basis();
                assert!(m.mul(&k).unwrap().is_zero());
                assert_eq!(k.cols(), m.nullity());
                assert_eq!(k.rank(), k.cols());
            }
        }
    }

    #[test]
    fn right_left_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [3u32, 7] {
            let a = FpMatrix::random_invertible(p, 4, &mut rng);
            let pr = a.block(0, 0, 3, 4); // full row rank w.h.p. of a random invertible
            if pr.rank() == 3 {
                let s = pr.right_inverse().unwrap();
                assert_eq!(pr.mul(&s).unwrap(), FpMatrix::identity(p, 3));
            }
            let inj = a.block(0, 0, 4, 3);
            if inj.rank() == 3 {
                let l = inj.left_inverse().unwrap();
                assert_eq!(l.mul(&inj).unwrap(), FpMatrix::identity(p, 3));
            }
        }
    }

    #[test]
    fn solve_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = FpMatrix::random(7, 4, 6, &mut rng);
        let x0 = FpMatrix::random(7, 6, 2, &mut rng);
        let b = a.mul(&x0).unwrap();
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
    }

    proptest! {
        #[test]
        fn rank_nullity_and_bruteforce(seed in 0u64..500, p in prop::sample::select(vec![2u32,3,7]),
                                       r in 0usize..6, c in 0usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = FpMatrix::random(p, r, c, &mut rng);
            prop_assert_eq!(m.rank() + m.nullity(), c);
            prop_assert_eq!(m.rank(), rank_bruteforce(&m));
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
