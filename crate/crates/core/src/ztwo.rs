//! Z/2-graded complexes `M⁰ ⇄ M¹` over a provider category.
//!
//! A complex is a representation of the doubled quiver with vertices `(v, i)`,
//! a copy of every arrow in each degree, differentials `d⁰_v`, `d¹_v`, and
//! relations saying that differentials are intertwiners with `d¹d⁰ = d⁰d¹ = 0`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fqlinalg::FqMatrix;
use crate::heredcat::{BoundQuiver, ClassId, ExtSpace, HereditaryCategory, K0Class, Morphism, Relation, Rep};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZTwoComplex {
    pub m0: Rep,
    pub m1: Rep,
    pub d0: Morphism,
    pub d1: Morphism,
}

/// The four generator shapes of the pairing table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenKind {
    K,
    KStar,
    C,
    CStar,
}

impl GenKind {
    pub const ALL: [GenKind; 4] = [GenKind::K, GenKind::KStar, GenKind::C, GenKind::CStar];

    pub fn is_acyclic(self) -> bool {
        matches!(self, GenKind::K | GenKind::KStar)
    }
}

/// Exponent of the Euler pairing `⟨x, y⟩` between generators with at least one acyclic side.
pub fn pairing_exponent(
    euler: impl Fn(&K0Class, &K0Class) -> i64,
    left: GenKind,
    l: &K0Class,
    right: GenKind,
    r: &K0Class,
) -> Option<i64> {
    use GenKind::*;
    match (left, right) {
        (K | KStar, K | KStar) | (C, K) | (CStar, KStar) | (K, CStar) | (KStar, C) => Some(euler(l, r)),
        (CStar, K) | (K, C) | (C, KStar) | (KStar, CStar) => Some(0),
        (C | CStar, C | CStar) => None,
    }
}

/// Data of `[M] = q^exp [K_α] ⋄ [K*_β] ⋄ [C*_{H⁰} ⊕ C_{H¹}]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalFormData {
    pub exp: i64,
    pub alpha: K0Class,
    pub beta: K0Class,
    pub h0: ClassId,
    pub h1: ClassId,
}

/// Complex machinery bound to one provider.
pub struct ZTwo {
    cat: Arc<dyn HereditaryCategory>,
    dq: BoundQuiver,
}

impl ZTwo {
    pub fn new(cat: Arc<dyn HereditaryCategory>) -> Self {
        let base = cat.quiver();
        let (n, m) = (base.n, base.arrows.len());
        let neg_one = cat.field().p() - 1;
        let mut arrows = Vec::with_capacity(2 * m + 2 * n);
        for deg in 0..2 {
            arrows.extend(base.arrows.iter().map(|&(s, t)| (s + deg * n, t + deg * n)));
        }
        arrows.extend((0..n).map(|v| (v, v + n)));
        arrows.extend((0..n).map(|v| (v + n, v)));
        let d = |deg: usize, v: usize| 2 * m + deg * n + v;
        let mut relations = Vec::new();
        for (a, &(s, t)) in base.arrows.iter().enumerate() {
            for deg in 0..2 {
                let (ai, aj) = (a + deg * m, a + (1 - deg) * m);
                relations.push(Relation(vec![(1, vec![ai, d(deg, t)]), (neg_one, vec![d(deg, s), aj])]));
            }
        }
        for v in 0..n {
            relations.push(Relation(vec![(1, vec![d(0, v), d(1, v)])]));
            relations.push(Relation(vec![(1, vec![d(1, v), d(0, v)])]));
        }
        ZTwo { cat, dq: BoundQuiver { n: 2 * n, arrows, relations } }
    }

    pub fn category(&self) -> &Arc<dyn HereditaryCategory> {
        &self.cat
    }

    pub fn doubled_quiver(&self) -> &BoundQuiver {
        &self.dq
    }

    fn n(&self) -> usize {
        self.cat.n()
    }

    /// Builds a complex, checking intertwiner equations and `d∘d = 0`.
    pub fn complex(&self, m0: Rep, m1: Rep, d0: Morphism, d1: Morphism) -> Result<ZTwoComplex> {
        let q = self.cat.quiver();
        if !q.is_morphism(&m0, &m1, &d0) || !q.is_morphism(&m1, &m0, &d1) {
            return Err(Error::Invalid("differentials are not intertwiners".into()));
        }
        if !d1.compose(&d0).is_zero() || !d0.compose(&d1).is_zero() {
            return Err(Error::Invalid("differentials do not compose to zero".into()));
        }
        Ok(ZTwoComplex { m0, m1, d0, d1 })
    }

    pub fn to_rep(&self, m: &ZTwoComplex) -> Rep {
        let f = self.cat.field();
        let dims: Vec<usize> = m.m0.dims().iter().chain(m.m1.dims()).copied().collect();
        let mats: Vec<FqMatrix> =
            m.m0.mats().iter().chain(m.m1.mats()).chain(&m.d0.0).chain(&m.d1.0).cloned().collect();
        self.dq.rep(f, dims, mats).expect("a valid complex is a valid representation")
    }

    pub fn from_rep(&self, r: &Rep) -> ZTwoComplex {
        let (n, m) = (self.n(), self.cat.quiver().arrows.len());
        let f = self.cat.field();
        let base = self.cat.quiver();
        let mk = |deg: usize| {
            let dims = r.dims()[deg * n..(deg + 1) * n].to_vec();
            let mats = r.mats()[deg * m..(deg + 1) * m].to_vec();
            base.rep(f, dims, mats).expect("degree part of a complex is a representation")
        };
        ZTwoComplex {
            m0: mk(0),
            m1: mk(1),
            d0: Morphism(r.mats()[2 * m..2 * m + n].to_vec()),
            d1: Morphism(r.mats()[2 * m + n..2 * m + 2 * n].to_vec()),
        }
    }

    pub fn make_k(&self, x: &Rep) -> ZTwoComplex {
        ZTwoComplex { m0: x.clone(), m1: x.clone(), d0: Morphism::identity(x), d1: Morphism::zero(x, x) }
    }

    pub fn make_kstar(&self, x: &Rep) -> ZTwoComplex {
        ZTwoComplex { m0: x.clone(), m1: x.clone(), d0: Morphism::zero(x, x), d1: Morphism::identity(x) }
    }

    pub fn make_c(&self, x: &Rep) -> ZTwoComplex {
        let z = self.cat.quiver().zero_rep(self.cat.field());
        ZTwoComplex { d0: Morphism::zero(&z, x), d1: Morphism::zero(x, &z), m0: z, m1: x.clone() }
    }

    pub fn make_cstar(&self, x: &Rep) -> ZTwoComplex {
        let z = self.cat.quiver().zero_rep(self.cat.field());
        ZTwoComplex { d0: Morphism::zero(x, &z), d1: Morphism::zero(&z, x), m0: x.clone(), m1: z }
    }

    pub fn make(&self, kind: GenKind, x: &Rep) -> ZTwoComplex {
        match kind {
            GenKind::K => self.make_k(x),
            GenKind::KStar => self.make_kstar(x),
            GenKind::C => self.make_c(x),
            GenKind::CStar => self.make_cstar(x),
        }
    }

    /// The degree shift: swaps components and negates both differentials.
    pub fn shift(&self, m: &ZTwoComplex) -> ZTwoComplex {
        ZTwoComplex { m0: m.m1.clone(), m1: m.m0.clone(), d0: m.d1.neg(), d1: m.d0.neg() }
    }

    pub fn direct_sum(&self, a: &ZTwoComplex, b: &ZTwoComplex) -> ZTwoComplex {
        self.from_rep(&self.dq.direct_sum(&self.to_rep(a), &self.to_rep(b)))
    }

    /// `(H⁰, H¹)` as representations: `ker d⁰ / im d¹` and `ker d¹ / im d⁰`.
    pub fn homology_reps(&self, m: &ZTwoComplex) -> Result<(Rep, Rep)> {
        let q = self.cat.quiver();
        let h0 = q.subquotient(&m.m0, &q.kernel_basis(&m.m0, &m.d0), &q.image_basis(&m.m0, &m.d1))?;
        let h1 = q.subquotient(&m.m1, &q.kernel_basis(&m.m1, &m.d1), &q.image_basis(&m.m1, &m.d0))?;
        Ok((h0, h1))
    }

    pub fn homology(&self, m: &ZTwoComplex) -> Result<(ClassId, ClassId)> {
        let (h0, h1) = self.homology_reps(m)?;
        Ok((self.cat.identify(&h0)?, self.cat.identify(&h1)?))
    }

    pub fn is_acyclic(&self, m: &ZTwoComplex) -> Result<bool> {
        let (h0, h1) = self.homology_reps(m)?;
        Ok(h0.is_zero() && h1.is_zero())
    }

    /// Dimension vectors of `im d⁰` and `im d¹`.
    pub fn image_classes(&self, m: &ZTwoComplex) -> (K0Class, K0Class) {
        (m.d0.rank_vector(), m.d1.rank_vector())
    }

    pub fn normal_form_data(&self, m: &ZTwoComplex) -> Result<NormalFormData> {
        let (alpha, beta) = self.image_classes(m);
        let (h0, h1) = self.homology(m)?;
        let e = |a: &K0Class, b: &K0Class| self.cat.euler(a, b);
        let exp = e(&alpha, &beta) + e(&alpha, &self.cat.dim(h0)?) + e(&beta, &self.cat.dim(h1)?);
        Ok(NormalFormData { exp, alpha, beta, h0, h1 })
    }

    pub fn hom_dim(&self, m: &ZTwoComplex, n: &ZTwoComplex) -> usize {
        self.dq.hom_dim(&self.to_rep(m), &self.to_rep(n))
    }

    /// Extensions `0 → sub → X → quot → 0` of complexes.
    pub fn ext_space(&self, quot: &ZTwoComplex, sub: &ZTwoComplex) -> ExtSpace {
        self.dq.ext_space(&self.to_rep(sub), &self.to_rep(quot))
    }

    pub fn ext1_dim(&self, quot: &ZTwoComplex, sub: &ZTwoComplex) -> usize {
        self.ext_space(quot, sub).dim()
    }

    /// One middle term per extension class, and `dim Hom(quot, sub)`.
    pub fn extension_middles(&self, quot: &ZTwoComplex, sub: &ZTwoComplex) -> Result<(Vec<ZTwoComplex>, usize)> {
        let (rq, rs) = (self.to_rep(quot), self.to_rep(sub));
        let ext = self.dq.ext_space(&rs, &rq);
        let middles = self
            .dq
            .ext_elements(&ext, self.cat.field(), self.cat.caps().complex_scan)?
            .iter()
            .map(|h| self.from_rep(&self.dq.middle(&rs, &rq, h)))
            .collect();
        Ok((middles, ext.hom_dim))
    }

    pub fn find_iso(&self, a: &ZTwoComplex, b: &ZTwoComplex) -> Result<Option<Morphism>> {
        self.dq.find_iso(&self.to_rep(a), &self.to_rep(b), self.cat.caps().complex_scan)
    }

    pub fn aut_order(&self, m: &ZTwoComplex) -> Result<u64> {
        self.dq.count_automorphisms(&self.to_rep(m), self.cat.caps().complex_scan)
    }

    /// Number of pairs `(i: sub → X, p: X → quot)` forming a short exact sequence of complexes.
    pub fn count_ses(&self, quot: &ZTwoComplex, sub: &ZTwoComplex, x: &ZTwoComplex) -> Result<u64> {
        let (rq, rs, rx) = (self.to_rep(quot), self.to_rep(sub), self.to_rep(x));
        if &rq.dim_class() + &rs.dim_class() != rx.dim_class() {
            return Ok(0);
        }
        let cap = self.cat.caps().complex_scan;
        let injs: Vec<Morphism> =
            self.dq.hom_elements(&rs, &rx, cap)?.into_iter().filter(Morphism::is_injective).collect();
        let surjs: Vec<Morphism> =
            self.dq.hom_elements(&rx, &rq, cap)?.into_iter().filter(Morphism::is_surjective).collect();
        Ok(injs.iter().map(|i| surjs.iter().filter(|p| p.compose(i).is_zero()).count() as u64).sum())
    }

    /// `|Ext¹(quot, sub)_X| / |Hom(quot, sub)|` as `#ses / |Aut X|`.
    pub fn ext1_coeff(&self, quot: &ZTwoComplex, sub: &ZTwoComplex, x: &ZTwoComplex) -> Result<BigRational> {
        let ses = self.count_ses(quot, sub, x)?;
        Ok(BigRational::new(BigUint::from(ses).into(), BigUint::from(self.aut_order(x)?).into()))
    }

    /// The same coefficient read off from extension cocycles.
    pub fn ext1_coeff_by_cocycles(
        &self,
        quot: &ZTwoComplex,
        sub: &ZTwoComplex,
        x: &ZTwoComplex,
    ) -> Result<BigRational> {
        let (middles, hom) = self.extension_middles(quot, sub)?;
        let mut hits = 0u64;
        for m in &middles {
            if self.find_iso(m, x)?.is_some() {
                hits += 1;
            }
        }
        let denom = num_traits::pow(BigUint::from(self.cat.q()), hom);
        Ok(BigRational::new(BigUint::from(hits).into(), denom.into()))
    }

    /// Groups middle terms of the Hall product into isomorphism classes with their coefficients.
    pub fn hall_product(&self, quot: &ZTwoComplex, sub: &ZTwoComplex) -> Result<Vec<(ZTwoComplex, BigRational)>> {
        let (middles, hom) = self.extension_middles(quot, sub)?;
        let mut groups: Vec<(ZTwoComplex, u64)> = Vec::new();
        'next: for m in middles {
            for (rep, count) in groups.iter_mut() {
                if self.find_iso(&m, rep)?.is_some() {
                    *count += 1;
                    continue 'next;
                }
            }
            groups.push((m, 1));
        }
        let denom: num_bigint::BigInt = num_traits::pow(BigUint::from(self.cat.q()), hom).into();
        Ok(groups.into_iter().map(|(m, c)| (m, BigRational::new(c.into(), denom.clone()))).collect())
    }

    /// Whether image classes add along `0 → k → l → m → 0` when `k` or `m` is acyclic.
    pub fn ses_image_additivity_check(
        &self,
        k: &ZTwoComplex,
        l: &ZTwoComplex,
        m: &ZTwoComplex,
        i: &Morphism,
        p: &Morphism,
    ) -> Result<bool> {
        let (rk, rl, rm) = (self.to_rep(k), self.to_rep(l), self.to_rep(m));
        let exact = self.dq.is_morphism(&rk, &rl, i)
            && self.dq.is_morphism(&rl, &rm, p)
            && i.is_injective()
            && p.is_surjective()
            && p.compose(i).is_zero()
            && &rk.dim_class() + &rm.dim_class() == rl.dim_class();
        if !exact {
            return Err(Error::Precondition("maps do not form a short exact sequence of complexes".into()));
        }
        if !self.is_acyclic(k)? && !self.is_acyclic(m)? {
            return Err(Error::Precondition("neither end of the sequence is acyclic".into()));
        }
        let ((ak, bk), (al, bl), (am, bm)) = (self.image_classes(k), self.image_classes(l), self.image_classes(m));
        Ok(al == &ak + &am && bl == &bk + &bm)
    }

    /// Componentwise twist exponent `⟨M⁰, N⁰⟩ + ⟨M¹, N¹⟩`.
    pub fn cw_exponent(&self, m: &ZTwoComplex, n: &ZTwoComplex) -> i64 {
        self.cat.euler(&m.m0.dim_class(), &n.m0.dim_class()) + self.cat.euler(&m.m1.dim_class(), &n.m1.dim_class())
    }

    /// All complexes whose components are the given representations, up to isomorphism.
    pub fn complexes_on(&self, m0: &Rep, m1: &Rep) -> Result<Vec<ZTwoComplex>> {
        let q = self.cat.quiver();
        let cap = self.cat.caps().complex_scan;
        let d0s = q.hom_elements(m0, m1, cap)?;
        let d1s = q.hom_elements(m1, m0, cap)?;
        if (d0s.len() as u128) * (d1s.len() as u128) > cap as u128 {
            return Err(Error::CapExceeded { what: "complex", needed: (d0s.len() * d1s.len()).to_string(), cap });
        }
        let mut found: Vec<(ZTwoComplex, Vec<usize>)> = Vec::new();
        let mut by_key: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for d0 in &d0s {
            for d1 in &d1s {
                if !d1.compose(d0).is_zero() || !d0.compose(d1).is_zero() {
                    continue;
                }
                let c = ZTwoComplex { m0: m0.clone(), m1: m1.clone(), d0: d0.clone(), d1: d1.clone() };
                let fp = self.dq.fingerprint(&self.to_rep(&c));
                let bucket = by_key.entry(fp.clone()).or_default();
                let mut seen = false;
                for &idx in bucket.iter() {
                    if self.find_iso(&c, &found[idx].0)?.is_some() {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    bucket.push(found.len());
                    found.push((c, fp));
                }
            }
        }
        Ok(found.into_iter().map(|(c, _)| c).collect())
    }

    /// Every complex with components among the classes of total dimension ≤ `bound`, up to isomorphism.
    pub fn enumerate_complexes(&self, bound: usize) -> Result<Vec<ZTwoComplex>> {
        let classes = self.cat.classes_up_to(bound)?;
        let mut out = Vec::new();
        for &a in &classes {
            for &b in &classes {
                out.extend(self.complexes_on(&self.cat.rep(a)?, &self.cat.rep(b)?)?);
            }
        }
        Ok(out)
    }
}

/// JSON form of a representation: dimension vector and one matrix (list of rows) per arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepLiteral {
    pub dims: Vec<usize>,
    pub mats: Vec<Vec<Vec<i64>>>,
}

/// JSON form of a complex: `{"M0", "M1", "d0", "d1"}` with per-vertex matrices for the differentials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexLiteral {
    #[serde(rename = "M0")]
    pub m0: RepLiteral,
    #[serde(rename = "M1")]
    pub m1: RepLiteral,
    pub d0: Vec<Vec<Vec<i64>>>,
    pub d1: Vec<Vec<Vec<i64>>>,
}

fn matrix(f: crate::fqlinalg::Fp, rows: usize, cols: usize, lit: &[Vec<i64>]) -> Result<FqMatrix> {
    if rows == 0 || cols == 0 {
        return Ok(FqMatrix::zeros(rows, cols, f));
    }
    let m = FqMatrix::from_rows(f, lit)?;
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::Invalid(format!("expected a {rows}x{cols} matrix")));
    }
    Ok(m)
}

impl RepLiteral {
    pub fn to_rep(&self, cat: &dyn HereditaryCategory) -> Result<Rep> {
        let q = cat.quiver();
        if self.dims.len() != q.n || self.mats.len() != q.arrows.len() {
            return Err(Error::Invalid("representation literal does not match the quiver".into()));
        }
        let mats = q
            .arrows
            .iter()
            .zip(&self.mats)
            .map(|(&(s, t), m)| matrix(cat.field(), self.dims[t], self.dims[s], m))
            .collect::<Result<Vec<_>>>()?;
        let r = q.rep(cat.field(), self.dims.clone(), mats)?;
        cat.check_rep(&r)?;
        Ok(r)
    }
}

impl ComplexLiteral {
    pub fn to_complex(&self, z: &ZTwo) -> Result<ZTwoComplex> {
        let cat = z.category().as_ref();
        let (m0, m1) = (self.m0.to_rep(cat)?, self.m1.to_rep(cat)?);
        let n = cat.n();
        if self.d0.len() != n || self.d1.len() != n {
            return Err(Error::Invalid("differentials need one matrix per vertex".into()));
        }
        let d0 =
            (0..n).map(|v| matrix(cat.field(), m1.dims()[v], m0.dims()[v], &self.d0[v])).collect::<Result<Vec<_>>>()?;
        let d1 =
            (0..n).map(|v| matrix(cat.field(), m0.dims()[v], m1.dims()[v], &self.d1[v])).collect::<Result<Vec<_>>>()?;
        z.complex(m0, m1, Morphism(d0), Morphism(d1))
    }
}
