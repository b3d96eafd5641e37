//! Finitary hereditary categories of nilpotent quiver representations.

mod jordan;
mod quiver;
pub mod rep;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use jordan::JordanCategory;
pub use quiver::QuiverCategory;
pub use rep::{BoundQuiver, ExtSpace, Morphism, Relation, Rep};

use crate::error::{Error, Result};
use crate::fqlinalg::{enumerate_subspaces, is_prime, Fp, FqMatrix};

/// A class in K_0, realized as a dimension vector (entries may be negative).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct K0Class(Vec<i64>);

impl K0Class {
    pub fn new(v: Vec<i64>) -> Self {
        K0Class(v)
    }

    pub fn zero(n: usize) -> Self {
        K0Class(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        K0Class(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &K0Class) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &K0Class {
    type Output = K0Class;
    fn add(self, o: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &K0Class {
    type Output = K0Class;
    fn sub(self, o: &K0Class) -> K0Class {
        K0Class(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        K0Class(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for K0Class {
    type Output = K0Class;
    fn add(self, o: K0Class) -> K0Class {
        &self + &o
    }
}

impl Sub for K0Class {
    type Output = K0Class;
    fn sub(self, o: K0Class) -> K0Class {
        &self - &o
    }
}

/// Stable handle of an isomorphism class within one provider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub u32);

impl ClassId {
    pub const ZERO: ClassId = ClassId(0);
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct IsoClass {
    pub id: ClassId,
    pub rep: Rep,
    pub dim: K0Class,
    pub label: String,
}

/// Quiver description; also the JSON form `{"vertices", "arrows", "nilpotent", "q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    #[serde(rename = "vertices")]
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
    #[serde(default)]
    pub nilpotent: bool,
    pub q: u64,
}

impl QuiverSpec {
    pub fn preset(name: &str, q: u64) -> Result<Self> {
        let spec = match name {
            "a1" => QuiverSpec { n: 1, arrows: vec![], nilpotent: false, q },
            "a2" => QuiverSpec { n: 2, arrows: vec![(0, 1)], nilpotent: false, q },
            "jordan" => QuiverSpec { n: 1, arrows: vec![(0, 0)], nilpotent: true, q },
            other => return Err(Error::Invalid(format!("unknown preset {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.q) {
            return Err(Error::Invalid(format!("q = {} is not prime", self.q)));
        }
        if let Some(&(s, t)) = self.arrows.iter().find(|&&(s, t)| s >= self.n || t >= self.n) {
            return Err(Error::Invalid(format!("arrow ({s},{t}) leaves the vertex range")));
        }
        if self.has_oriented_cycle() && !self.nilpotent {
            return Err(Error::Invalid("quivers with oriented cycles require nilpotent = true".into()));
        }
        Ok(())
    }

    pub fn has_oriented_cycle(&self) -> bool {
        // Kahn's algorithm: a cycle remains iff not every vertex can be removed
        let mut indeg = vec![0usize; self.n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        removed < self.n
    }

    pub fn is_jordan(&self) -> bool {
        self.n == 1 && self.arrows == [(0, 0)]
    }

    pub fn field(&self) -> Result<Fp> {
        Fp::new(self.q)
    }

    pub fn bound_quiver(&self) -> BoundQuiver {
        BoundQuiver::free(self.n, self.arrows.clone())
    }

    /// Exponent of the Euler form: `Σ α_i β_i − Σ_{a: i→j} α_i β_j`.
    pub fn euler(&self, a: &K0Class, b: &K0Class) -> i64 {
        let diag: i64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
        diag - self.arrows.iter().map(|&(s, t)| a.0[s] * b.0[t]).sum::<i64>()
    }

    pub fn sym(&self, a: &K0Class, b: &K0Class) -> i64 {
        self.euler(a, b) + self.euler(b, a)
    }
}

/// Enumeration limits; exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub hom_scan: u64,
    pub subspace_scan: u64,
    pub complex_scan: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { hom_scan: 1 << 26, subspace_scan: 1 << 20, complex_scan: 1 << 22 }
    }
}

impl Caps {
    /// Applies overrides of the form `hom=N,subspace=N,complex=N`.
    pub fn apply_overrides(mut self, s: &str) -> Result<Self> {
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("cap override {item:?} is not key=value")))?;
            let v: u64 = v.trim().parse().map_err(|_| Error::Invalid(format!("cap value {v:?} is not an integer")))?;
            if v == 0 {
                return Err(Error::Invalid("caps must be positive".into()));
            }
            match k.trim() {
                "hom" | "hom_scan" => self.hom_scan = v,
                "subspace" | "subspace_scan" => self.subspace_scan = v,
                "complex" | "complex_scan" => self.complex_scan = v,
                other => return Err(Error::Invalid(format!("unknown cap {other:?}"))),
            }
        }
        Ok(self)
    }
}

/// Untwisted Hall product row: `[A]⋄[B] = Σ c_M [M]`, sorted by class id.
pub type HallRow = Vec<(ClassId, BigRational)>;

/// State shared by every provider: the quiver, caps and memo tables.
pub struct CategoryCore {
    pub spec: QuiverSpec,
    pub quiver: BoundQuiver,
    pub field: Fp,
    pub caps: Caps,
    hall: RwLock<HashMap<(ClassId, ClassId), Arc<HallRow>>>,
    aut: RwLock<HashMap<ClassId, BigUint>>,
    hom: RwLock<HashMap<(ClassId, ClassId), usize>>,
}

impl CategoryCore {
    pub fn new(spec: QuiverSpec, caps: Caps) -> Result<Self> {
        spec.validate()?;
        Ok(CategoryCore {
            quiver: spec.bound_quiver(),
            field: spec.field()?,
            spec,
            caps,
            hall: RwLock::default(),
            aut: RwLock::default(),
            hom: RwLock::default(),
        })
    }
}

fn cached<K: std::hash::Hash + Eq + Clone, V: Clone>(
    map: &RwLock<HashMap<K, V>>,
    key: K,
    compute: impl FnOnce() -> Result<V>,
) -> Result<V> {
    if let Some(v) = map.read().expect("cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = compute()?;
    map.write().expect("cache poisoned").entry(key).or_insert_with(|| v.clone());
    Ok(v)
}

/// A provider of iso classes and counting data for a category of nilpotent representations.
pub trait HereditaryCategory: Send + Sync {
    fn core(&self) -> &CategoryCore;

    /// All classes of total dimension ≤ `bound`, in id order.
    fn classes_up_to(&self, bound: usize) -> Result<Vec<ClassId>>;

    /// All classes with the given dimension vector, in id order.
    fn classes_of_dim(&self, dim: &K0Class) -> Result<Vec<ClassId>>;

    fn class(&self, id: ClassId) -> Result<Arc<IsoClass>>;

    fn identify(&self, r: &Rep) -> Result<ClassId>;

    fn hom_dim_uncached(&self, a: ClassId, b: ClassId) -> Result<usize> {
        Ok(self.quiver().hom_dim(&self.class(a)?.rep, &self.class(b)?.rep))
    }

    fn aut_order_uncached(&self, a: ClassId) -> Result<BigUint> {
        let c = self.class(a)?;
        Ok(self.quiver().count_automorphisms(&c.rep, self.caps().hom_scan)?.into())
    }

    fn spec(&self) -> &QuiverSpec {
        &self.core().spec
    }

    fn quiver(&self) -> &BoundQuiver {
        &self.core().quiver
    }

    fn field(&self) -> Fp {
        self.core().field
    }

    fn q(&self) -> u64 {
        self.core().spec.q
    }

    fn caps(&self) -> Caps {
        self.core().caps
    }

    fn n(&self) -> usize {
        self.core().spec.n
    }

    fn dim(&self, a: ClassId) -> Result<K0Class> {
        Ok(self.class(a)?.dim.clone())
    }

    fn rep(&self, a: ClassId) -> Result<Rep> {
        Ok(self.class(a)?.rep.clone())
    }

    fn euler(&self, a: &K0Class, b: &K0Class) -> i64 {
        self.spec().euler(a, b)
    }

    fn sym(&self, a: &K0Class, b: &K0Class) -> i64 {
        self.spec().sym(a, b)
    }

    /// Checks shapes and nilpotency of user-supplied data.
    fn check_rep(&self, r: &Rep) -> Result<()> {
        let q = self.quiver();
        q.rep(r.field(), r.dims().to_vec(), r.mats().to_vec())?;
        if self.spec().nilpotent && !q.is_nilpotent(r)? {
            return Err(Error::Invalid("representation is not nilpotent".into()));
        }
        Ok(())
    }

    fn hom_dim(&self, a: ClassId, b: ClassId) -> Result<usize> {
        cached(&self.core().hom, (a, b), || self.hom_dim_uncached(a, b))
    }

    fn aut_order(&self, a: ClassId) -> Result<BigUint> {
        cached(&self.core().aut, a, || self.aut_order_uncached(a))
    }

    fn end_dim(&self, a: ClassId) -> Result<usize> {
        self.hom_dim(a, a)
    }

    /// `dim Ext¹(A, B) = dim Hom(A, B) − ⟨Â, B̂⟩`.
    fn ext1_dim(&self, a: ClassId, b: ClassId) -> Result<usize> {
        let e = self.hom_dim(a, b)? as i64 - self.euler(&self.dim(a)?, &self.dim(b)?);
        usize::try_from(e).map_err(|_| Error::Inconsistent(format!("negative Ext¹ dimension for {a}, {b}")))
    }

    fn simple(&self, v: usize) -> Result<ClassId> {
        self.identify(&self.quiver().simple(self.field(), v))
    }

    fn direct_sum(&self, a: ClassId, b: ClassId) -> Result<ClassId> {
        self.identify(&self.quiver().direct_sum(&self.class(a)?.rep, &self.class(b)?.rep))
    }

    /// `[A]⋄[B] = Σ_M |Ext¹(A,B)_M| / |Hom(A,B)| [M]`, from the extension cocycles.
    fn hall_row(&self, a: ClassId, b: ClassId) -> Result<Arc<HallRow>> {
        if a == ClassId::ZERO {
            return Ok(Arc::new(vec![(b, BigRational::one())]));
        }
        if b == ClassId::ZERO {
            return Ok(Arc::new(vec![(a, BigRational::one())]));
        }
        cached(&self.core().hall, (a, b), || {
            let (ra, rb) = (self.class(a)?.rep.clone(), self.class(b)?.rep.clone());
            let q = self.quiver();
            let ext = q.ext_space(&rb, &ra);
            let mut counts: HashMap<ClassId, u64> = HashMap::new();
            for h in q.ext_elements(&ext, self.field(), self.caps().hom_scan)? {
                *counts.entry(self.identify(&q.middle(&rb, &ra, &h))?).or_default() += 1;
            }
            let denom = num_traits::pow(BigUint::from(self.q()), ext.hom_dim);
            let mut row: HallRow =
                counts.into_iter().map(|(m, c)| (m, BigRational::new(c.into(), denom.clone().into()))).collect();
            row.sort_by_key(|(m, _)| *m);
            Ok(Arc::new(row))
        })
    }

    /// Coefficient of `[M]` in `[A]⋄[B]`.
    fn hall_product_coeff(&self, a: ClassId, b: ClassId, m: ClassId) -> Result<BigRational> {
        Ok(self.hall_row(a, b)?.iter().find(|(x, _)| *x == m).map_or_else(BigRational::zero, |(_, c)| c.clone()))
    }

    /// Number of subrepresentations `U ⊆ M` with `U ≅ B` and `M/U ≅ A`.
    fn count_subobjects(&self, a: ClassId, b: ClassId, m: ClassId) -> Result<u64> {
        let (da, db, dm) = (self.dim(a)?, self.dim(b)?, self.dim(m)?);
        if &da + &db != dm {
            return Ok(0);
        }
        let rm = self.rep(m)?;
        let q = self.quiver();
        let f = self.field();
        let cap = self.caps().subspace_scan;
        let per_vertex: Vec<Vec<FqMatrix>> = (0..self.n())
            .map(|v| {
                let n = rm.dims()[v];
                let subs = enumerate_subspaces(n, db.entries()[v] as usize, f, cap)?;
                Ok(subs.iter().map(|s| FqMatrix::from_columns(n, s, f)).collect())
            })
            .collect::<Result<_>>()?;
        let total: u128 = per_vertex.iter().map(|v| v.len() as u128).product();
        if total > cap as u128 {
            return Err(Error::CapExceeded { what: "subspace", needed: total.to_string(), cap });
        }
        let mut count = 0;
        let mut idx = vec![0usize; self.n()];
        'outer: loop {
            let choice: Vec<FqMatrix> = idx.iter().enumerate().map(|(v, &i)| per_vertex[v][i].clone()).collect();
            let stable = q.arrows.iter().enumerate().all(|(ar, &(s, t))| {
                let img = rm.mat(ar).mul(&choice[s]);
                choice[t].hstack(&img).rank() == choice[t].cols()
            });
            if stable
                && self.identify(&q.subrep(&rm, &choice)?)? == b
                && self.identify(&q.quotient(&rm, &choice)?)? == a
            {
                count += 1;
            }
            for v in (0..self.n()).rev() {
                idx[v] += 1;
                if idx[v] < per_vertex[v].len() {
                    continue 'outer;
                }
                idx[v] = 0;
            }
            break;
        }
        Ok(count)
    }

    /// `|Ext¹(A,B)_M| / |Hom(A,B)| = g^M_{A,B} |Aut A| |Aut B| / |Aut M|` by subobject counting.
    fn hall_coeff(&self, a: ClassId, b: ClassId, m: ClassId) -> Result<BigRational> {
        let g = self.count_subobjects(a, b, m)?;
        let num = BigUint::from(g) * self.aut_order(a)? * self.aut_order(b)?;
        Ok(BigRational::new(num.into(), self.aut_order(m)?.into()))
    }

    /// Number of pairs `(i: B → M, p: M → A)` forming a short exact sequence.
    fn count_ses(&self, a: ClassId, b: ClassId, m: ClassId) -> Result<u64> {
        let (ra, rb, rm) = (self.rep(a)?, self.rep(b)?, self.rep(m)?);
        if &rb.dim_class() + &ra.dim_class() != rm.dim_class() {
            return Ok(0);
        }
        let q = self.quiver();
        let cap = self.caps().hom_scan;
        let injs: Vec<Morphism> = q.hom_elements(&rb, &rm, cap)?.into_iter().filter(Morphism::is_injective).collect();
        let surjs: Vec<Morphism> = q.hom_elements(&rm, &ra, cap)?.into_iter().filter(Morphism::is_surjective).collect();
        Ok(injs.iter().map(|i| surjs.iter().filter(|p| p.compose(i).is_zero()).count() as u64).sum())
    }

    /// Subobject-free check of the Hall number: `#ses / |Aut M|`.
    fn hall_coeff_by_ses(&self, a: ClassId, b: ClassId, m: ClassId) -> Result<BigRational> {
        Ok(BigRational::new(BigUint::from(self.count_ses(a, b, m)?).into(), self.aut_order(m)?.into()))
    }

    fn kernel_obj(&self, x: &Rep, g: &Morphism) -> Result<Rep> {
        self.quiver().kernel(x, g)
    }

    fn image_obj(&self, y: &Rep, g: &Morphism) -> Result<Rep> {
        self.quiver().image(y, g)
    }

    fn cokernel_obj(&self, y: &Rep, g: &Morphism) -> Result<Rep> {
        self.quiver().cokernel(y, g)
    }
}

/// Opens the preferred provider: partition-based for the Jordan quiver, generic otherwise.
pub fn open(spec: QuiverSpec, caps: Caps) -> Result<Arc<dyn HereditaryCategory>> {
    if spec.is_jordan() {
        Ok(Arc::new(JordanCategory::new(spec.q, caps)?))
    } else {
        Ok(Arc::new(QuiverCategory::new(spec, caps)?))
    }
}

#[cfg(test)]
mod tests;
