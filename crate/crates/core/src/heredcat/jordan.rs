//! Nilpotent representations of the Jordan quiver, classified by partitions.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;

use super::{Caps, CategoryCore, ClassId, HereditaryCategory, IsoClass, K0Class, QuiverSpec, Rep};
use crate::error::{Error, Result};
use crate::fqlinalg::{Fp, FqMatrix};

/// Partitions of `n` in reverse lexicographic order, parts descending.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn conjugate(parts: &[usize]) -> Vec<usize> {
    let max = parts.first().copied().unwrap_or(0);
    (1..=max).map(|k| parts.iter().filter(|&&p| p >= k).count()).collect()
}

/// Nilpotent matrix with Jordan blocks of the given sizes.
pub fn jordan_matrix(parts: &[usize], f: Fp) -> FqMatrix {
    let n: usize = parts.iter().sum();
    let mut m = FqMatrix::zeros(n, n, f);
    let mut start = 0;
    for &p in parts {
        for i in 0..p.saturating_sub(1) {
            m.set(start + i, start + i + 1, 1);
        }
        start += p;
    }
    m
}

/// Partition type of a nilpotent matrix, read off from the ranks of its powers.
pub fn partition_of(m: &FqMatrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut ranks = vec![n];
    let mut pw = FqMatrix::identity(n, m.field());
    for _ in 0..n {
        pw = pw.mul(m);
        ranks.push(pw.rank());
    }
    if ranks[n] != 0 {
        return None;
    }
    // parts of size ≥ k: ranks[k-1] - ranks[k]
    let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
    let mut parts = Vec::new();
    for k in (1..=n).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, exactly));
    }
    Some(parts)
}

pub fn partition_label(parts: &[usize]) -> String {
    let s: Vec<String> = parts.iter().map(usize::to_string).collect();
    format!("({})", s.join(","))
}

#[derive(Default)]
struct Registry {
    classes: Vec<Arc<IsoClass>>,
    parts: Vec<Vec<usize>>,
    by_parts: HashMap<Vec<usize>, ClassId>,
    window: Option<usize>,
}

pub struct JordanCategory {
    core: CategoryCore,
    reg: RwLock<Registry>,
}

impl JordanCategory {
    pub fn new(q: u64, caps: Caps) -> Result<Self> {
        let core = CategoryCore::new(QuiverSpec::preset("jordan", q)?, caps)?;
        let cat = JordanCategory { core, reg: RwLock::default() };
        cat.ensure_window(0);
        Ok(cat)
    }

    fn ensure_window(&self, bound: usize) {
        if self.reg.read().expect("registry poisoned").window.is_some_and(|w| w >= bound) {
            return;
        }
        let mut reg = self.reg.write().expect("registry poisoned");
        let start = reg.window.map_or(0, |w| w + 1);
        for n in start..=bound {
            for parts in partitions(n) {
                let id = ClassId(reg.classes.len() as u32);
                let rep = Rep::jordan(&parts, self.core.field);
                reg.classes.push(Arc::new(IsoClass {
                    id,
                    dim: K0Class::new(vec![n as i64]),
                    rep,
                    label: partition_label(&parts),
                }));
                reg.by_parts.insert(parts.clone(), id);
                reg.parts.push(parts);
            }
        }
        reg.window = Some(bound.max(reg.window.unwrap_or(0)));
    }

    pub fn partition(&self, id: ClassId) -> Result<Vec<usize>> {
        self.reg.read().expect("registry poisoned").parts.get(id.0 as usize).cloned().ok_or(Error::UnknownClass(id.0))
    }

    pub fn class_of_partition(&self, parts: &[usize]) -> Result<ClassId> {
        let mut sorted = parts.to_vec();
        sorted.retain(|&p| p > 0);
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        self.ensure_window(sorted.iter().sum());
        Ok(self.reg.read().expect("registry poisoned").by_parts[&sorted])
    }
}

impl Rep {
    /// The Jordan-quiver representation with the given block sizes.
    pub fn jordan(parts: &[usize], f: Fp) -> Rep {
        let q = super::BoundQuiver::free(1, vec![(0, 0)]);
        let n = parts.iter().sum();
        q.rep(f, vec![n], vec![jordan_matrix(parts, f)]).expect("jordan matrices have valid shapes")
    }
}

impl HereditaryCategory for JordanCategory {
    fn core(&self) -> &CategoryCore {
        &self.core
    }

    fn classes_up_to(&self, bound: usize) -> Result<Vec<ClassId>> {
        self.ensure_window(bound);
        let reg = self.reg.read().expect("registry poisoned");
        Ok(reg.classes.iter().filter(|c| c.dim.total() <= bound as i64).map(|c| c.id).collect())
    }

    fn classes_of_dim(&self, dim: &K0Class) -> Result<Vec<ClassId>> {
        let n = dim.entries()[0];
        if n < 0 {
            return Ok(Vec::new());
        }
        self.ensure_window(n as usize);
        let reg = self.reg.read().expect("registry poisoned");
        Ok(partitions(n as usize).iter().map(|p| reg.by_parts[p]).collect())
    }

    fn class(&self, id: ClassId) -> Result<Arc<IsoClass>> {
        self.reg.read().expect("registry poisoned").classes.get(id.0 as usize).cloned().ok_or(Error::UnknownClass(id.0))
    }

    fn identify(&self, r: &Rep) -> Result<ClassId> {
        let parts = partition_of(r.mat(0)).ok_or_else(|| Error::Invalid("matrix is not nilpotent".into()))?;
        self.class_of_partition(&parts)
    }

    fn hom_dim_uncached(&self, a: ClassId, b: ClassId) -> Result<usize> {
        let (la, lb) = (self.partition(a)?, self.partition(b)?);
        Ok(la.iter().flat_map(|&x| lb.iter().map(move |&y| x.min(y))).sum())
    }

    fn aut_order_uncached(&self, a: ClassId) -> Result<BigUint> {
        let parts = self.partition(a)?;
        let q = BigUint::from(self.core.spec.q);
        let conj_sq: usize = conjugate(&parts).iter().map(|c| c * c).sum();
        let mut mult: HashMap<usize, usize> = HashMap::new();
        for &p in &parts {
            *mult.entry(p).or_default() += 1;
        }
        let tri: usize = mult.values().map(|m| m * (m + 1) / 2).sum();
        let mut out = num_traits::pow(q.clone(), conj_sq - tri);
        for &m in mult.values() {
            for j in 1..=m {
                out *= num_traits::pow(q.clone(), j) - 1u32;
            }
        }
        Ok(out)
    }
}
