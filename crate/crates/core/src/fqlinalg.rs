//! Linear algebra over a prime field F_p.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > 65_521 {
            return Err(Error::Invalid(format!("{p} is not a supported prime")));
        }
        Ok(Fp { p: p as u32 })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverting zero in F_{}", self.p);
        let mut r = 1u32;
        let mut base = a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }
}

/// Number of steps `p^exp`, or a cap error if it exceeds `cap`.
pub fn checked_count(what: &'static str, p: u32, exp: usize, cap: u64) -> Result<u64> {
    let mut n: u128 = 1;
    for _ in 0..exp {
        n *= p as u128;
        if n > cap as u128 {
            return Err(Error::CapExceeded { what, needed: format!("{p}^{exp}"), cap });
        }
    }
    Ok(n as u64)
}

/// Dense matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    f: Fp,
    data: Vec<u32>,
}

/// Result of a consistent linear system: one solution plus a basis of the homogeneous solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize, f: Fp) -> Self {
        FqMatrix { rows, cols, f, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, f: Fp) -> Self {
        let mut m = Self::zeros(n, n, f);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, f: Fp, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        let data = data.into_iter().map(|x| x % f.p).collect();
        FqMatrix { rows, cols, f, data }
    }

    pub fn from_rows(f: Fp, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| f.reduce(x)).collect();
        Ok(FqMatrix { rows: rows.len(), cols, f, data })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<u32>], f: Fp) -> Self {
        let mut m = Self::zeros(rows, cols.len(), f);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x % self.f.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data.chunks(self.cols).map(<[u32]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let p = self.f.p as u64;
        let mut out = FqMatrix::zeros(self.rows, o.cols, self.f);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * o.data[k * o.cols + j] as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| self.f.add(acc, self.f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    fn zip(&self, o: &FqMatrix, op: impl Fn(u32, u32) -> u32) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| op(a, b)).collect();
        FqMatrix { rows: self.rows, cols: self.cols, f: self.f, data }
    }

    pub fn add(&self, o: &FqMatrix) -> FqMatrix {
        let f = self.f;
        self.zip(o, |a, b| f.add(a, b))
    }

    pub fn sub(&self, o: &FqMatrix) -> FqMatrix {
        let f = self.f;
        self.zip(o, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> FqMatrix {
        self.scale(self.f.neg(1))
    }

    pub fn scale(&self, c: u32) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.f.mul(a, c)).collect();
        FqMatrix { data, ..self.clone() }
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.cols, self.rows, self.f);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn pow(&self, k: usize) -> FqMatrix {
        assert!(self.is_square());
        (0..k).fold(FqMatrix::identity(self.rows, self.f), |acc, _| acc.mul(self))
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> FqMatrix {
        let mut b = FqMatrix::zeros(r1 - r0, c1 - c0, self.f);
        for i in r0..r1 {
            for j in c0..c1 {
                b.set(i - r0, j - c0, self.get(i, j));
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FqMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn block_diag(&self, o: &FqMatrix) -> FqMatrix {
        let mut m = FqMatrix::zeros(self.rows + o.rows, self.cols + o.cols, self.f);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, o);
        m
    }

    pub fn hstack(&self, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = FqMatrix::zeros(self.rows, self.cols + o.cols, self.f);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, o);
        m
    }

    pub fn vstack(&self, o: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, o.cols);
        let mut m = FqMatrix::zeros(self.rows + o.rows, self.cols, self.f);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, o);
        m
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let f = self.f;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let x = f.mul(m.get(r, j), inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let x = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let f = self.f;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(row, fc));
                }
                v
            })
            .collect()
    }

    /// Pivot columns of the matrix itself, a basis of the column space.
    pub fn image_basis(&self) -> Vec<Vec<u32>> {
        self.rref().1.into_iter().map(|c| self.column(c)).collect()
    }

    pub fn solve(&self, b: &[u32]) -> Option<Solution> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&FqMatrix::from_columns(self.rows, &[b.to_vec()], self.f));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut particular = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = r.get(row, self.cols);
        }
        Some(Solution { particular, kernel: self.kernel_basis() })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&FqMatrix::identity(n, self.f)).rref();
        (pivots.len() >= n && pivots[..n].iter().enumerate().all(|(i, &c)| i == c)).then(|| r.block(0, n, n, 2 * n))
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// All vectors of `F_p^d` in lexicographic order, last coordinate fastest.
#[derive(Debug, Clone)]
pub struct VectorIter {
    p: u32,
    cur: Vec<u32>,
    done: bool,
}

impl VectorIter {
    pub fn new(f: Fp, d: usize) -> Self {
        VectorIter { p: f.p, cur: vec![0; d], done: false }
    }

    pub fn capped(f: Fp, d: usize, what: &'static str, cap: u64) -> Result<Self> {
        checked_count(what, f.p, d, cap)?;
        Ok(Self::new(f, d))
    }
}

impl Iterator for VectorIter {
    type Item = Vec<u32>;
    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        self.done = true;
        for x in self.cur.iter_mut().rev() {
            *x += 1;
            if *x < self.p {
                self.done = false;
                break;
            }
            *x = 0;
        }
        Some(out)
    }
}

/// Every `rows × cols` matrix over F_p exactly once, in row-major lexicographic order.
pub fn enumerate_matrices(rows: usize, cols: usize, f: Fp, cap: u64) -> Result<impl Iterator<Item = FqMatrix>> {
    Ok(VectorIter::capped(f, rows * cols, "matrix", cap)?.map(move |v| FqMatrix::from_vec(rows, cols, f, v)))
}

/// Linear combination `Σ c_i b_i` of vectors.
pub fn combine(f: Fp, coeffs: &[u32], basis: &[Vec<u32>], len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for (&c, b) in coeffs.iter().zip(basis) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(b) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

/// Gaussian binomial coefficient: the number of `k`-dimensional subspaces of `F_p^n`.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Every `k`-dimensional subspace of `F_p^n`, each given by its reduced echelon basis.
pub fn enumerate_subspaces(n: usize, k: usize, f: Fp, cap: u64) -> Result<Vec<Vec<Vec<u32>>>> {
    let total = gaussian_binomial(n, k, f.p as u64);
    if total > cap as u128 {
        return Err(Error::CapExceeded { what: "subspace", needed: total.to_string(), cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    for pivots in combinations(n, k) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| ((pc + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for vals in VectorIter::new(f, free.len()) {
            let mut basis = vec![vec![0u32; n]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r][pc] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(&vals) {
                basis[r][c] = x;
            }
            out.push(basis);
        }
    }
    Ok(out)
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}
