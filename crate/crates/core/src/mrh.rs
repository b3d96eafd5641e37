//! The twisted modified Ringel–Hall algebra of Z/2-graded complexes.
//!
//! Elements are finite combinations of normal-order monomials
//! `[C_A]*[C*_B]*K_α*K*_β`. Products are computed by a rewriting pipeline:
//! torus factors move right, the middle `[C*_B]*[C_A]` is swapped across, the
//! resulting direct-sum symbols are expanded in the basis, and the stalk
//! factors on each side are multiplied with the twisted Hall product of the
//! underlying category.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{Scalar, ScalarRepr};
use crate::heredcat::{ClassId, HereditaryCategory, K0Class};
use crate::ztwo::{NormalFormData, ZTwo, ZTwoComplex};

/// The monomial `[C_A]*[C*_B]*K_α*K*_β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub a: ClassId,
    pub b: ClassId,
    pub alpha: K0Class,
    pub beta: K0Class,
}

impl Mono {
    pub fn unit(n: usize) -> Self {
        Mono { a: ClassId::ZERO, b: ClassId::ZERO, alpha: K0Class::zero(n), beta: K0Class::zero(n) }
    }

    pub fn is_torus(&self) -> bool {
        self.a == ClassId::ZERO && self.b == ClassId::ZERO
    }

    fn shifted(&self, alpha: &K0Class, beta: &K0Class) -> Mono {
        Mono { a: self.a, b: self.b, alpha: &self.alpha + alpha, beta: &self.beta + beta }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[C_{}]*[C*_{}]*K_{}*K*_{}", self.a, self.b, self.alpha, self.beta)
    }
}

/// A finite linear combination of normal-order monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct MrhElt {
    q: u64,
    terms: BTreeMap<Mono, Scalar>,
}

impl MrhElt {
    pub fn zero(q: u64) -> Self {
        MrhElt { q, terms: BTreeMap::new() }
    }

    pub fn from_mono(q: u64, m: Mono) -> Self {
        Self::from_term(m, Scalar::one(q))
    }

    pub fn from_term(m: Mono, c: Scalar) -> Self {
        let mut out = MrhElt::zero(c.q());
        out.add_term(m, c);
        out
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.q))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> MrhElt {
        let mut out = MrhElt::zero(self.q);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Multiplies on the right by `K_α*K*_β`, which only shifts exponents.
    pub fn times_torus(&self, alpha: &K0Class, beta: &K0Class) -> MrhElt {
        MrhElt { q: self.q, terms: self.terms.iter().map(|(m, c)| (m.shifted(alpha, beta), c.clone())).collect() }
    }

    pub fn add_scaled(&mut self, other: &MrhElt, c: &Scalar) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }
}

impl std::ops::Add<&MrhElt> for &MrhElt {
    type Output = MrhElt;
    fn add(self, o: &MrhElt) -> MrhElt {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::one(self.q));
        out
    }
}

impl std::ops::Sub<&MrhElt> for &MrhElt {
    type Output = MrhElt;
    fn sub(self, o: &MrhElt) -> MrhElt {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from_int(-1, self.q));
        out
    }
}

impl std::ops::Neg for &MrhElt {
    type Output = MrhElt;
    fn neg(self) -> MrhElt {
        self.scale(&Scalar::from_int(-1, self.q))
    }
}

impl fmt::Debug for MrhElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})·{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    #[serde(rename = "A")]
    a: u32,
    #[serde(rename = "B")]
    b: u32,
    alpha: &'a K0Class,
    beta: &'a K0Class,
    coeff: &'a Scalar,
}

impl Serialize for MrhElt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermRecord {
            a: m.a.0,
            b: m.b.0,
            alpha: &m.alpha,
            beta: &m.beta,
            coeff: c,
        }))
    }
}

/// Wire form of one term, as read back from a report.
#[derive(Debug, Clone, serde::Deserialize)]
pub struct TermLiteral {
    #[serde(rename = "A")]
    pub a: u32,
    #[serde(rename = "B")]
    pub b: u32,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub coeff: ScalarRepr,
}

impl MrhElt {
    pub fn from_literals(q: u64, terms: Vec<TermLiteral>) -> Result<MrhElt> {
        let mut out = MrhElt::zero(q);
        for t in terms {
            let m = Mono { a: ClassId(t.a), b: ClassId(t.b), alpha: K0Class::new(t.alpha), beta: K0Class::new(t.beta) };
            out.add_term(m, t.coeff.into_scalar(q)?);
        }
        Ok(out)
    }
}

/// Basis monomial `[C_A]*[C*_B]*K_γ` of the reduced algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedMono {
    #[serde(rename = "A")]
    pub a: ClassId,
    #[serde(rename = "B")]
    pub b: ClassId,
    pub gamma: K0Class,
}

pub type ReducedElt = BTreeMap<ReducedMono, Scalar>;

/// One orbit type of `Hom(X, Y)`: kernel, cokernel, image class and the number of maps.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub ker: ClassId,
    pub coker: ClassId,
    pub im: K0Class,
    pub count: u64,
}

type Memo<K, V> = RwLock<HashMap<K, Arc<V>>>;

fn memo<K: Eq + Hash + Clone, V>(m: &Memo<K, V>, k: K, f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
    if let Some(v) = m.read().expect("memo poisoned").get(&k) {
        return Ok(v.clone());
    }
    let v = Arc::new(f()?);
    Ok(m.write().expect("memo poisoned").entry(k).or_insert(v).clone())
}

/// The rewriting engine bound to one provider category.
pub struct Mrh {
    cat: Arc<dyn HereditaryCategory>,
    z: ZTwo,
    strata: Memo<(ClassId, ClassId), Vec<Stratum>>,
    expand: Memo<(ClassId, ClassId), MrhElt>,
    cross: Memo<(ClassId, ClassId), MrhElt>,
}

impl Mrh {
    pub fn new(cat: Arc<dyn HereditaryCategory>) -> Self {
        Mrh {
            z: ZTwo::new(cat.clone()),
            cat,
            strata: RwLock::default(),
            expand: RwLock::default(),
            cross: RwLock::default(),
        }
    }

    pub fn category(&self) -> &Arc<dyn HereditaryCategory> {
        &self.cat
    }

    pub fn ztwo(&self) -> &ZTwo {
        &self.z
    }

    pub fn q(&self) -> u64 {
        self.cat.q()
    }

    fn v(&self, k: i64) -> Scalar {
        Scalar::v_pow(k, self.q())
    }

    fn sym(&self, a: &K0Class, b: &K0Class) -> i64 {
        self.cat.sym(a, b)
    }

    fn euler(&self, a: &K0Class, b: &K0Class) -> i64 {
        self.cat.euler(a, b)
    }

    pub fn unit(&self) -> MrhElt {
        MrhElt::from_mono(self.q(), Mono::unit(self.cat.n()))
    }

    pub fn monomial(&self, a: ClassId, b: ClassId, alpha: K0Class, beta: K0Class) -> Result<MrhElt> {
        let n = self.cat.n();
        if alpha.len() != n || beta.len() != n {
            return Err(Error::Invalid(format!("torus exponents must have {n} entries")));
        }
        self.cat.class(a)?;
        self.cat.class(b)?;
        Ok(MrhElt::from_mono(self.q(), Mono { a, b, alpha, beta }))
    }

    pub fn iplus(&self, a: ClassId) -> Result<MrhElt> {
        let n = self.cat.n();
        self.monomial(a, ClassId::ZERO, K0Class::zero(n), K0Class::zero(n))
    }

    pub fn iminus(&self, b: ClassId) -> Result<MrhElt> {
        let n = self.cat.n();
        self.monomial(ClassId::ZERO, b, K0Class::zero(n), K0Class::zero(n))
    }

    pub fn torus(&self, alpha: K0Class, beta: K0Class) -> Result<MrhElt> {
        self.monomial(ClassId::ZERO, ClassId::ZERO, alpha, beta)
    }

    /// Total stalk dimension `dim A + dim B` of a monomial.
    pub fn stalk_dim(&self, m: &Mono) -> Result<i64> {
        Ok(self.cat.dim(m.a)?.total() + self.cat.dim(m.b)?.total())
    }

    /// Maps in `Hom(X, Y)` grouped by the isomorphism types of kernel and cokernel.
    pub fn hom_strata(&self, x: ClassId, y: ClassId) -> Result<Arc<Vec<Stratum>>> {
        memo(&self.strata, (x, y), || {
            let (rx, ry) = (self.cat.rep(x)?, self.cat.rep(y)?);
            let maps = self.cat.quiver().hom_elements(&rx, &ry, self.cat.caps().hom_scan)?;
            let mut groups: BTreeMap<(ClassId, ClassId, K0Class), u64> = BTreeMap::new();
            for g in &maps {
                let im = g.rank_vector();
                let (ker, coker) = if im.is_zero() {
                    (x, y)
                } else {
                    (
                        self.cat.identify(&self.cat.kernel_obj(&rx, g)?)?,
                        self.cat.identify(&self.cat.cokernel_obj(&ry, g)?)?,
                    )
                };
                *groups.entry((ker, coker, im)).or_default() += 1;
            }
            Ok(groups.into_iter().map(|((ker, coker, im), count)| Stratum { ker, coker, im, count }).collect())
        })
    }

    /// Normal-basis expansion of `[C_X ⊕ C*_Y]`.
    pub fn expand_pair(&self, x: ClassId, y: ClassId) -> Result<Arc<MrhElt>> {
        if let Some(v) = self.expand.read().expect("memo poisoned").get(&(x, y)) {
            return Ok(v.clone());
        }
        let n = self.cat.n();
        let mut out = MrhElt::from_mono(self.q(), Mono { a: x, b: y, alpha: K0Class::zero(n), beta: K0Class::zero(n) });
        for s in self.hom_strata(x, y)?.iter().filter(|s| !s.im.is_zero()) {
            let (dk, dc) = (self.cat.dim(s.ker)?, self.cat.dim(s.coker)?);
            let c =
                self.v(self.euler(&dc, &s.im) - self.euler(&dk, &s.im)) * Scalar::from_int(-(s.count as i64), self.q());
            let inner = self.expand_pair(s.ker, s.coker)?;
            out.add_scaled(&inner.times_torus(&K0Class::zero(n), &s.im), &c);
        }
        let out = Arc::new(out);
        Ok(self.expand.write().expect("memo poisoned").entry((x, y)).or_insert(out).clone())
    }

    /// `[C*_B]*[C_A]` rewritten in normal order.
    pub fn cross(&self, b: ClassId, a: ClassId) -> Result<Arc<MrhElt>> {
        memo(&self.cross, (b, a), || {
            let n = self.cat.n();
            let mut out = MrhElt::zero(self.q());
            for s in self.hom_strata(b, a)?.iter() {
                let (dk, dc) = (self.cat.dim(s.ker)?, self.cat.dim(s.coker)?);
                let c = self.v(self.euler(&dc, &s.im) - self.euler(&dk, &s.im))
                    * Scalar::from_int(s.count as i64, self.q());
                let pair = self.expand_pair(s.coker, s.ker)?;
                out.add_scaled(&pair.times_torus(&s.im, &K0Class::zero(n)), &c);
            }
            Ok(out)
        })
    }

    /// Exponent of `v` collected when `K_α*K*_β` moves right across `[C_A]*[C*_B]`.
    fn passage(&self, alpha: &K0Class, beta: &K0Class, a: &K0Class, b: &K0Class) -> i64 {
        self.sym(alpha, a) - self.sym(alpha, b) - self.sym(a, beta) + self.sym(b, beta)
    }

    /// Twisted Hall row `[C_A]*[C_B] = Σ v^⟨A,B⟩ c [C_M]`; the same row serves the `C*` copy.
    fn twisted_row(&self, a: ClassId, b: ClassId) -> Result<Vec<(ClassId, Scalar)>> {
        let v = self.v(self.euler(&self.cat.dim(a)?, &self.cat.dim(b)?));
        Ok(self
            .cat
            .hall_row(a, b)?
            .iter()
            .map(|(m, c)| (*m, &v * &Scalar::from_rational(c.clone(), self.q())))
            .collect())
    }

    pub fn mul_mono(&self, m1: &Mono, m2: &Mono) -> Result<MrhElt> {
        let q = self.q();
        let (a2, b2) = (self.cat.dim(m2.a)?, self.cat.dim(m2.b)?);
        let s1 = self.v(self.passage(&m1.alpha, &m1.beta, &a2, &b2));
        let alpha = &m1.alpha + &m2.alpha;
        let beta = &m1.beta + &m2.beta;
        if m1.is_torus() {
            return Ok(MrhElt::from_term(Mono { a: m2.a, b: m2.b, alpha, beta }, s1));
        }
        if m2.is_torus() {
            return Ok(MrhElt::from_term(Mono { a: m1.a, b: m1.b, alpha, beta }, Scalar::one(q)));
        }
        let mut out = MrhElt::zero(q);
        for (t, c) in self.cross(m1.b, m2.a)?.terms() {
            let s2 = self.v(self.passage(&t.alpha, &t.beta, &K0Class::zero(self.cat.n()), &b2));
            let c = &(&s1 * c) * &s2;
            let left = self.twisted_row(m1.a, t.a)?;
            let right = self.twisted_row(t.b, m2.b)?;
            let (ta, tb) = (&alpha + &t.alpha, &beta + &t.beta);
            for (ma, ca) in &left {
                let cl = &c * ca;
                for (mb, cb) in &right {
                    out.add_term(Mono { a: *ma, b: *mb, alpha: ta.clone(), beta: tb.clone() }, &cl * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, x: &MrhElt, y: &MrhElt) -> Result<MrhElt> {
        let mut out = MrhElt::zero(self.q());
        for (m1, c1) in x.terms() {
            for (m2, c2) in y.terms() {
                out.add_scaled(&self.mul_mono(m1, m2)?, &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Product of several elements from left to right.
    pub fn mul_all<'a>(&self, xs: impl IntoIterator<Item = &'a MrhElt>) -> Result<MrhElt> {
        xs.into_iter().try_fold(self.unit(), |acc, x| self.mul(&acc, x))
    }

    /// Image of `[M]` in the normal basis, computed from its normal-form data.
    pub fn reduce_nf(&self, nf: &NormalFormData) -> Result<MrhElt> {
        let (h0, h1) = (self.cat.dim(nf.h0)?, self.cat.dim(nf.h1)?);
        let ab = &nf.alpha + &nf.beta;
        let k = 2 * nf.exp - 2 * self.euler(&nf.alpha, &nf.beta) - self.euler(&ab, &h0) - self.euler(&ab, &h1);
        let torus = self.torus(nf.alpha.clone(), nf.beta.clone())?;
        Ok(self.mul(&torus, &*self.expand_pair(nf.h1, nf.h0)?)?.scale(&self.v(k)))
    }

    pub fn reduce_complex(&self, m: &ZTwoComplex) -> Result<MrhElt> {
        self.reduce_nf(&self.z.normal_form_data(m)?)
    }

    /// `v^{cw(M,N)} Σ_X |Ext¹(M,N)_X| / |Hom(M,N)| · reduce(X)`, by enumerating extension cocycles.
    pub fn oracle_mul(&self, m: &ZTwoComplex, n: &ZTwoComplex) -> Result<MrhElt> {
        let (middles, hom) = self.z.extension_middles(m, n)?;
        let mut groups: HashMap<NormalFormData, u64> = HashMap::new();
        for x in &middles {
            *groups.entry(self.z.normal_form_data(x)?).or_default() += 1;
        }
        let denom = num_traits::pow(BigInt::from(self.q()), hom);
        let twist = self.v(self.z.cw_exponent(m, n));
        let mut keys: Vec<(NormalFormData, u64)> = groups.into_iter().collect();
        keys.sort_by(|a, b| (&a.0.alpha, &a.0.beta, a.0.h0, a.0.h1).cmp(&(&b.0.alpha, &b.0.beta, b.0.h0, b.0.h1)));
        let mut out = MrhElt::zero(self.q());
        for (nf, count) in keys {
            let c = Scalar::from_rational(BigRational::new(count.into(), denom.clone()), self.q());
            out.add_scaled(&self.reduce_nf(&nf)?, &(&c * &twist));
        }
        Ok(out)
    }

    /// Passes to the quotient by `K_α*K*_α = 1`.
    pub fn to_reduced(&self, x: &MrhElt) -> ReducedElt {
        let mut out = ReducedElt::new();
        for (m, c) in x.terms() {
            let key = ReducedMono { a: m.a, b: m.b, gamma: &m.alpha - &m.beta };
            let slot = out.entry(key.clone()).or_insert_with(|| Scalar::zero(self.q()));
            *slot += c;
            if slot.is_zero() {
                out.remove(&key);
            }
        }
        out
    }
}
