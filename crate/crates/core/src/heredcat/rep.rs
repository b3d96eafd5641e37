//! Representations of quivers with linear relations over F_p.
//!
//! Both the provider categories and Z/2-graded complexes (a doubled quiver with
//! relations) are handled here: intertwiners, subquotients, extension cocycles
//! and isomorphism search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::K0Class;
use crate::error::{Error, Result};
use crate::fqlinalg::{checked_count, combine, Fp, FqMatrix, VectorIter};

/// A linear combination of paths, each path listed in order of application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation(pub Vec<(u32, Vec<usize>)>);

/// A quiver together with relations that its representations must satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuiver {
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
    pub relations: Vec<Relation>,
}

/// A representation: one space per vertex, one matrix `dims[t] × dims[s]` per arrow.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rep {
    f: Fp,
    dims: Vec<usize>,
    mats: Vec<FqMatrix>,
}

/// An intertwiner, one matrix per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism(pub Vec<FqMatrix>);

/// `Ext¹(quot, sub)` presented by block upper-triangular cocycles modulo coboundaries.
#[derive(Debug, Clone)]
pub struct ExtSpace {
    /// dim Hom(quot, sub), the kernel of the coboundary map.
    pub hom_dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Basis of a complement of the coboundaries inside the cocycles.
    pub complement: Vec<Vec<u32>>,
    pub h_len: usize,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }
}

impl std::fmt::Debug for Rep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Rep{:?}{:?}", self.dims, self.mats)
    }
}

impl Rep {
    pub fn field(&self) -> Fp {
        self.f
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mats(&self) -> &[FqMatrix] {
        &self.mats
    }

    pub fn mat(&self, a: usize) -> &FqMatrix {
        &self.mats[a]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim_class(&self) -> K0Class {
        K0Class::new(self.dims.iter().map(|&d| d as i64).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

impl Morphism {
    pub fn zero(x: &Rep, y: &Rep) -> Self {
        Morphism(x.dims.iter().zip(&y.dims).map(|(&dx, &dy)| FqMatrix::zeros(dy, dx, x.f)).collect())
    }

    pub fn identity(x: &Rep) -> Self {
        Morphism(x.dims.iter().map(|&d| FqMatrix::identity(d, x.f)).collect())
    }

    pub fn compose(&self, first: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&first.0).map(|(g, f)| g.mul(f)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FqMatrix::is_zero)
    }

    pub fn is_invertible(&self) -> bool {
        self.0.iter().all(FqMatrix::is_invertible)
    }

    pub fn is_injective(&self) -> bool {
        self.0.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.0.iter().all(|m| m.rank() == m.rows())
    }

    pub fn rank_vector(&self) -> K0Class {
        K0Class::new(self.0.iter().map(|m| m.rank() as i64).collect())
    }

    pub fn neg(&self) -> Morphism {
        Morphism(self.0.iter().map(FqMatrix::neg).collect())
    }
}

/// Column basis matrix of a subspace given by vectors.
fn basis_matrix(dim: usize, vecs: &[Vec<u32>], f: Fp) -> FqMatrix {
    FqMatrix::from_columns(dim, vecs, f)
}

/// Coordinates `C` with `basis · C = v`, `basis` of full column rank.
fn coordinates(basis: &FqMatrix, v: &FqMatrix) -> Result<FqMatrix> {
    let f = basis.field();
    let mut out = FqMatrix::zeros(basis.cols(), v.cols(), f);
    for j in 0..v.cols() {
        let sol = basis
            .solve(&v.column(j))
            .ok_or_else(|| Error::Inconsistent("vector outside the expected subspace".into()))?;
        for (i, x) in sol.particular.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    Ok(out)
}

/// Extends independent columns `u` (n × k) by standard basis vectors to an invertible n × n matrix.
fn complete_basis(u: &FqMatrix) -> FqMatrix {
    let n = u.rows();
    let f = u.field();
    let mut cur = u.clone();
    let mut rank = cur.rank();
    for i in 0..n {
        if rank == n {
            break;
        }
        let mut e = vec![0; n];
        e[i] = 1;
        let cand = cur.hstack(&FqMatrix::from_columns(n, &[e], f));
        let r = cand.rank();
        if r > rank {
            cur = cand;
            rank = r;
        }
    }
    cur
}

/// Invertibility of a row-major `n × n` block, eliminating in `scratch`.
fn block_invertible(data: &[u32], n: usize, f: Fp, scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.extend_from_slice(data);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| scratch[r * n + c] != 0) else {
            return false;
        };
        if piv != c {
            for j in 0..n {
                scratch.swap(piv * n + j, c * n + j);
            }
        }
        let inv = f.inv(scratch[c * n + c]);
        for r in (c + 1)..n {
            let factor = f.mul(scratch[r * n + c], inv);
            if factor != 0 {
                for j in c..n {
                    scratch[r * n + j] = f.sub(scratch[r * n + j], f.mul(factor, scratch[c * n + j]));
                }
            }
        }
    }
    true
}

impl BoundQuiver {
    pub fn free(n: usize, arrows: Vec<(usize, usize)>) -> Self {
        BoundQuiver { n, arrows, relations: Vec::new() }
    }

    pub fn rep(&self, f: Fp, dims: Vec<usize>, mats: Vec<FqMatrix>) -> Result<Rep> {
        if dims.len() != self.n || mats.len() != self.arrows.len() {
            return Err(Error::Invalid("representation does not match the quiver".into()));
        }
        for (a, (&(s, t), m)) in self.arrows.iter().zip(&mats).enumerate() {
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::Invalid(format!(
                    "arrow {a} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                )));
            }
            if m.field() != f {
                return Err(Error::Invalid("matrix over the wrong field".into()));
            }
        }
        let r = Rep { f, dims, mats };
        if !self.satisfies_relations(&r) {
            return Err(Error::Invalid("representation violates the relations".into()));
        }
        Ok(r)
    }

    pub fn zero_rep(&self, f: Fp) -> Rep {
        Rep { f, dims: vec![0; self.n], mats: self.arrows.iter().map(|_| FqMatrix::zeros(0, 0, f)).collect() }
    }

    pub fn simple(&self, f: Fp, v: usize) -> Rep {
        let mut dims = vec![0; self.n];
        dims[v] = 1;
        self.zero_maps(f, dims)
    }

    /// The representation with the given dimensions and all arrows zero.
    pub fn zero_maps(&self, f: Fp, dims: Vec<usize>) -> Rep {
        let mats = self.arrows.iter().map(|&(s, t)| FqMatrix::zeros(dims[t], dims[s], f)).collect();
        Rep { f, dims, mats }
    }

    pub fn path_matrix(&self, r: &Rep, path: &[usize]) -> FqMatrix {
        let (s0, _) = self.arrows[path[0]];
        path.iter().fold(FqMatrix::identity(r.dims[s0], r.f), |acc, &a| r.mats[a].mul(&acc))
    }

    fn relation_value(&self, r: &Rep, rel: &Relation) -> FqMatrix {
        let (s, _) = self.arrows[rel.0[0].1[0]];
        let (_, t) = self.arrows[*rel.0[0].1.last().expect("empty path")];
        rel.0.iter().fold(FqMatrix::zeros(r.dims[t], r.dims[s], r.f), |acc, (c, path)| {
            acc.add(&self.path_matrix(r, path).scale(*c))
        })
    }

    pub fn satisfies_relations(&self, r: &Rep) -> bool {
        self.relations.iter().all(|rel| self.relation_value(r, rel).is_zero())
    }

    pub fn is_morphism(&self, x: &Rep, y: &Rep, g: &Morphism) -> bool {
        g.0.len() == self.n
            && (0..self.n).all(|v| g.0[v].rows() == y.dims[v] && g.0[v].cols() == x.dims[v])
            && self.arrows.iter().enumerate().all(|(a, &(s, t))| g.0[t].mul(&x.mats[a]) == y.mats[a].mul(&g.0[s]))
    }

    /// Offsets of the per-vertex blocks of a flattened `⊕_v Hom_k(x_v, y_v)`.
    fn hom_layout(&self, x: &Rep, y: &Rep) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.n + 1);
        let mut acc = 0;
        for v in 0..self.n {
            off.push(acc);
            acc += x.dims[v] * y.dims[v];
        }
        off.push(acc);
        off
    }

    fn unflatten(&self, x: &Rep, y: &Rep, coords: &[u32]) -> Morphism {
        let off = self.hom_layout(x, y);
        Morphism(
            (0..self.n)
                .map(|v| FqMatrix::from_vec(y.dims[v], x.dims[v], x.f, coords[off[v]..off[v + 1]].to_vec()))
                .collect(),
        )
    }

    /// Basis of Hom(x, y) in flattened coordinates.
    fn hom_coords(&self, x: &Rep, y: &Rep) -> Vec<Vec<u32>> {
        let f = x.f;
        let off = self.hom_layout(x, y);
        let nvars = off[self.n];
        if nvars == 0 {
            return Vec::new();
        }
        let mut eqs: Vec<Vec<u32>> = Vec::new();
        for (a, &(s, t)) in self.arrows.iter().enumerate() {
            let (xa, ya) = (&x.mats[a], &y.mats[a]);
            // (g_t X_a - Y_a g_s)[i][j] = 0 for i < y_t, j < x_s
            for i in 0..y.dims[t] {
                for j in 0..x.dims[s] {
                    let mut row = vec![0u32; nvars];
                    for k in 0..x.dims[t] {
                        let c = xa.get(k, j);
                        if c != 0 {
                            let idx = off[t] + i * x.dims[t] + k;
                            row[idx] = f.add(row[idx], c);
                        }
                    }
                    for k in 0..y.dims[s] {
                        let c = ya.get(i, k);
                        if c != 0 {
                            let idx = off[s] + k * x.dims[s] + j;
                            row[idx] = f.sub(row[idx], c);
                        }
                    }
                    eqs.push(row);
                }
            }
        }
        if eqs.is_empty() {
            return (0..nvars)
                .map(|i| {
                    let mut e = vec![0; nvars];
                    e[i] = 1;
                    e
                })
                .collect();
        }
        let data: Vec<u32> = eqs.iter().flatten().copied().collect();
        FqMatrix::from_vec(eqs.len(), nvars, f, data).kernel_basis()
    }

    pub fn hom_basis(&self, x: &Rep, y: &Rep) -> Vec<Morphism> {
        self.hom_coords(x, y).iter().map(|c| self.unflatten(x, y, c)).collect()
    }

    pub fn hom_dim(&self, x: &Rep, y: &Rep) -> usize {
        self.hom_coords(x, y).len()
    }

    /// Every element of Hom(x, y), in a fixed order.
    pub fn hom_elements(&self, x: &Rep, y: &Rep, cap: u64) -> Result<Vec<Morphism>> {
        let basis = self.hom_coords(x, y);
        let len = self.hom_layout(x, y)[self.n];
        let it = VectorIter::capped(x.f, basis.len(), "hom", cap)?;
        Ok(it.map(|c| self.unflatten(x, y, &combine(x.f, &c, &basis, len))).collect())
    }

    pub fn direct_sum(&self, x: &Rep, y: &Rep) -> Rep {
        Rep {
            f: x.f,
            dims: x.dims.iter().zip(&y.dims).map(|(a, b)| a + b).collect(),
            mats: x.mats.iter().zip(&y.mats).map(|(a, b)| a.block_diag(b)).collect(),
        }
    }

    /// The representation induced on a stable subspace, given by column bases.
    pub fn subrep(&self, r: &Rep, basis: &[FqMatrix]) -> Result<Rep> {
        let mats = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| coordinates(&basis[t], &r.mats[a].mul(&basis[s])))
            .collect::<Result<Vec<_>>>()?;
        Ok(Rep { f: r.f, dims: basis.iter().map(FqMatrix::cols).collect(), mats })
    }

    /// The quotient by a stable subspace, using a deterministic completion of its basis.
    pub fn quotient(&self, r: &Rep, sub: &[FqMatrix]) -> Result<Rep> {
        let frames: Vec<FqMatrix> = sub.iter().map(complete_basis).collect();
        let inv: Vec<FqMatrix> = frames
            .iter()
            .map(|t| t.inverse().ok_or_else(|| Error::Inconsistent("basis completion failed".into())))
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = (0..self.n).map(|v| r.dims[v] - sub[v].cols()).collect();
        let mats = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let conj = inv[t].mul(&r.mats[a]).mul(&frames[s]);
                let (ks, kt) = (sub[s].cols(), sub[t].cols());
                if !conj.block(kt, r.dims[t], 0, ks).is_zero() {
                    return Err(Error::Inconsistent("subspace is not stable".into()));
                }
                Ok(conj.block(kt, r.dims[t], ks, r.dims[s]))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Rep { f: r.f, dims, mats })
    }

    /// The quotient together with the projection onto it and a k-linear section of that projection.
    pub fn quotient_map(&self, r: &Rep, sub: &[FqMatrix]) -> Result<(Rep, Morphism, Vec<FqMatrix>)> {
        let quot = self.quotient(r, sub)?;
        let mut proj = Vec::with_capacity(self.n);
        let mut section = Vec::with_capacity(self.n);
        for (v, u) in sub.iter().enumerate() {
            let frame = complete_basis(u);
            let inv = frame.inverse().ok_or_else(|| Error::Inconsistent("basis completion failed".into()))?;
            let (k, n) = (u.cols(), r.dims[v]);
            proj.push(inv.block(k, n, 0, n));
            section.push(frame.block(0, n, k, n));
        }
        Ok((quot, Morphism(proj), section))
    }

    /// `outer / inner` for stable subspaces `inner ⊆ outer` of `r`.
    pub fn subquotient(&self, r: &Rep, outer: &[FqMatrix], inner: &[FqMatrix]) -> Result<Rep> {
        let w = self.subrep(r, outer)?;
        let inner_coords = outer.iter().zip(inner).map(|(o, i)| coordinates(o, i)).collect::<Result<Vec<_>>>()?;
        self.quotient(&w, &inner_coords)
    }

    pub fn kernel_basis(&self, x: &Rep, g: &Morphism) -> Vec<FqMatrix> {
        (0..self.n).map(|v| basis_matrix(x.dims[v], &g.0[v].kernel_basis(), x.f)).collect()
    }

    pub fn image_basis(&self, y: &Rep, g: &Morphism) -> Vec<FqMatrix> {
        (0..self.n).map(|v| basis_matrix(y.dims[v], &g.0[v].image_basis(), y.f)).collect()
    }

    pub fn kernel(&self, x: &Rep, g: &Morphism) -> Result<Rep> {
        self.subrep(x, &self.kernel_basis(x, g))
    }

    pub fn image(&self, y: &Rep, g: &Morphism) -> Result<Rep> {
        self.subrep(y, &self.image_basis(y, g))
    }

    pub fn cokernel(&self, y: &Rep, g: &Morphism) -> Result<Rep> {
        self.quotient(y, &self.image_basis(y, g))
    }

    /// Offsets of the arrow blocks `h_a: quot_{s(a)} → sub_{t(a)}`.
    fn h_layout(&self, sub: &Rep, quot: &Rep) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.arrows.len() + 1);
        let mut acc = 0;
        for &(s, t) in &self.arrows {
            off.push(acc);
            acc += sub.dims[t] * quot.dims[s];
        }
        off.push(acc);
        off
    }

    /// The middle term `[[sub, h], [0, quot]]` of the extension given by `h`.
    pub fn middle(&self, sub: &Rep, quot: &Rep, h: &[u32]) -> Rep {
        let off = self.h_layout(sub, quot);
        let f = sub.f;
        let dims: Vec<usize> = sub.dims.iter().zip(&quot.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = sub.mats[a].block_diag(&quot.mats[a]);
                let hb = FqMatrix::from_vec(sub.dims[t], quot.dims[s], f, h[off[a]..off[a + 1]].to_vec());
                m.set_block(0, sub.dims[s], &hb);
                m
            })
            .collect();
        Rep { f, dims, mats }
    }

    pub fn ext_space(&self, sub: &Rep, quot: &Rep) -> ExtSpace {
        let f = sub.f;
        let off = self.h_layout(sub, quot);
        let h_len = off[self.arrows.len()];
        let unit = |i: usize| {
            let mut e = vec![0u32; h_len];
            e[i] = 1;
            e
        };

        let cocycles: Vec<Vec<u32>> = if self.relations.is_empty() || h_len == 0 {
            (0..h_len).map(unit).collect()
        } else {
            // each relation's top-right block is linear in h and vanishes at h = 0
            let columns: Vec<Vec<u32>> = (0..h_len)
                .map(|i| {
                    let m = self.middle(sub, quot, &unit(i));
                    self.relations
                        .iter()
                        .flat_map(|rel| {
                            let val = self.relation_value(&m, rel);
                            let (s, _) = self.arrows[rel.0[0].1[0]];
                            let (_, t) = self.arrows[*rel.0[0].1.last().expect("empty path")];
                            val.block(0, sub.dims[t], sub.dims[s], sub.dims[s] + quot.dims[s]).data().to_vec()
                        })
                        .collect()
                })
                .collect();
            let rows = columns.first().map_or(0, Vec::len);
            if rows == 0 {
                (0..h_len).map(unit).collect()
            } else {
                FqMatrix::from_columns(rows, &columns, f).kernel_basis()
            }
        };

        // δ(c)_a = c_t X_a - Y_a c_s with c_v : quot_v → sub_v
        let c_off = self.hom_layout(quot, sub);
        let c_len = c_off[self.n];
        let cob_cols: Vec<Vec<u32>> = (0..c_len)
            .map(|ci| {
                let mut coords = vec![0u32; c_len];
                coords[ci] = 1;
                let c = self.unflatten(quot, sub, &coords);
                let mut h = vec![0u32; h_len];
                for (a, &(s, t)) in self.arrows.iter().enumerate() {
                    let d = c.0[t].mul(&quot.mats[a]).sub(&sub.mats[a].mul(&c.0[s]));
                    h[off[a]..off[a + 1]].copy_from_slice(d.data());
                }
                h
            })
            .collect();
        let cob = FqMatrix::from_columns(h_len, &cob_cols, f);
        let cob_basis = cob.image_basis();
        let coboundary_dim = cob_basis.len();
        let hom_dim = c_len - coboundary_dim;

        let mut current = FqMatrix::from_columns(h_len, &cob_basis, f);
        let mut rank = coboundary_dim;
        let mut complement = Vec::new();
        for z in &cocycles {
            let cand = current.hstack(&FqMatrix::from_columns(h_len, std::slice::from_ref(z), f));
            let r = cand.rank();
            if r > rank {
                current = cand;
                rank = r;
                complement.push(z.clone());
            }
        }
        ExtSpace { hom_dim, cocycle_dim: cocycles.len(), coboundary_dim, complement, h_len }
    }

    /// Every extension class, as the cocycle vectors of a complement of the coboundaries.
    pub fn ext_elements(&self, ext: &ExtSpace, f: Fp, cap: u64) -> Result<Vec<Vec<u32>>> {
        let it = VectorIter::capped(f, ext.dim(), "extension", cap)?;
        Ok(it.map(|c| combine(f, &c, &ext.complement, ext.h_len)).collect())
    }

    /// Cheap isomorphism invariants: dimensions and ranks of arrows, short paths and loop powers.
    pub fn fingerprint(&self, r: &Rep) -> Vec<usize> {
        let mut fp = r.dims.clone();
        for (a, &(s, t)) in self.arrows.iter().enumerate() {
            fp.push(r.mats[a].rank());
            for (b, &(s2, _)) in self.arrows.iter().enumerate() {
                if s2 == t {
                    fp.push(r.mats[b].mul(&r.mats[a]).rank());
                }
            }
            if s == t {
                let mut pw = r.mats[a].clone();
                for _ in 1..r.dims[s] {
                    pw = pw.mul(&r.mats[a]);
                    fp.push(pw.rank());
                }
            }
        }
        fp
    }

    /// Searches Hom(x, y) for an invertible element.
    ///
    /// Random combinations are tried first; if none is invertible the whole space
    /// is scanned, which either finds one or proves `x ≇ y`.
    pub fn find_iso(&self, x: &Rep, y: &Rep, cap: u64) -> Result<Option<Morphism>> {
        if x.dims != y.dims {
            return Ok(None);
        }
        let basis = self.hom_coords(x, y);
        let end_x = self.hom_dim(x, x);
        if basis.len() != end_x || self.hom_dim(y, y) != end_x || self.hom_dim(y, x) != end_x {
            return Ok(None);
        }
        let f = x.f;
        let len = self.hom_layout(x, y)[self.n];
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
        for _ in 0..256 {
            let c: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..f.p())).collect();
            let g = self.unflatten(x, y, &combine(f, &c, &basis, len));
            if g.is_invertible() {
                return Ok(Some(g));
            }
        }
        checked_count("isomorphism", f.p(), basis.len(), cap)?;
        Ok(VectorIter::new(f, basis.len())
            .map(|c| self.unflatten(x, y, &combine(f, &c, &basis, len)))
            .find(Morphism::is_invertible))
    }

    /// |Aut x| by scanning all endomorphisms.
    pub fn count_automorphisms(&self, x: &Rep, cap: u64) -> Result<u64> {
        let basis = self.hom_coords(x, x);
        let off = self.hom_layout(x, x);
        let f = x.f;
        let p = f.p();
        checked_count("endomorphism", p, basis.len(), cap)?;
        let mut cur = vec![0u32; off[self.n]];
        let mut digits = vec![0u32; basis.len()];
        let mut scratch = Vec::new();
        let mut count = 0;
        loop {
            if (0..self.n).all(|v| block_invertible(&cur[off[v]..off[v + 1]], x.dims[v], f, &mut scratch)) {
                count += 1;
            }
            // odometer over coefficient vectors; a digit wrapping adds its basis vector p times, i.e. zero
            let mut i = basis.len();
            loop {
                if i == 0 {
                    return Ok(count);
                }
                i -= 1;
                for (c, &b) in cur.iter_mut().zip(&basis[i]) {
                    *c = f.add(*c, b);
                }
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    /// Whether every path eventually acts as zero, via iterated socles.
    pub fn is_nilpotent(&self, r: &Rep) -> Result<bool> {
        let mut cur = r.clone();
        while !cur.is_zero() {
            let soc: Vec<FqMatrix> = (0..self.n)
                .map(|v| {
                    let outgoing: Vec<&FqMatrix> = self
                        .arrows
                        .iter()
                        .enumerate()
                        .filter(|(_, &(s, _))| s == v)
                        .map(|(a, _)| &cur.mats[a])
                        .collect();
                    let stacked = outgoing.iter().fold(FqMatrix::zeros(0, cur.dims[v], cur.f), |acc, m| acc.vstack(m));
                    basis_matrix(cur.dims[v], &stacked.kernel_basis(), cur.f)
                })
                .collect();
            if soc.iter().all(|b| b.cols() == 0) {
                return Ok(false);
            }
            cur = self.quotient(&cur, &soc)?;
        }
        Ok(true)
    }
}
