//! Brute-force provider for nilpotent representations of an arbitrary quiver.
//!
//! Classes are found layer by layer in total dimension: every nonzero nilpotent
//! representation has a simple subrepresentation, so each class of dimension `d`
//! is the middle term of an extension of some class of dimension `d − 1` by a
//! simple.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use super::{Caps, CategoryCore, ClassId, HereditaryCategory, IsoClass, K0Class, QuiverSpec, Rep};
use crate::error::{Error, Result};

#[derive(Default)]
struct Registry {
    classes: Vec<Arc<IsoClass>>,
    fingerprints: Vec<Vec<usize>>,
    by_dim: HashMap<K0Class, Vec<ClassId>>,
    window: usize,
}

pub struct QuiverCategory {
    core: CategoryCore,
    reg: RwLock<Registry>,
    grow: Mutex<()>,
    memo: RwLock<HashMap<Rep, ClassId>>,
}

impl QuiverCategory {
    pub fn new(spec: QuiverSpec, caps: Caps) -> Result<Self> {
        let core = CategoryCore::new(spec, caps)?;
        let zero = core.quiver.zero_rep(core.field);
        let mut reg = Registry::default();
        reg.by_dim.insert(zero.dim_class(), vec![ClassId::ZERO]);
        reg.fingerprints.push(core.quiver.fingerprint(&zero));
        reg.classes.push(Arc::new(IsoClass { id: ClassId::ZERO, dim: zero.dim_class(), rep: zero, label: "0".into() }));
        Ok(QuiverCategory { core, reg: RwLock::new(reg), grow: Mutex::new(()), memo: RwLock::default() })
    }

    fn window(&self) -> usize {
        self.reg.read().expect("registry poisoned").window
    }

    fn ensure_window(&self, bound: usize) -> Result<()> {
        if self.window() >= bound {
            return Ok(());
        }
        let _guard = self.grow.lock().expect("growth lock poisoned");
        while self.window() < bound {
            let d = self.window() + 1;
            let layer = self.build_layer(d)?;
            let mut reg = self.reg.write().expect("registry poisoned");
            for (rep, fp) in layer {
                let id = ClassId(reg.classes.len() as u32);
                let dim = rep.dim_class();
                reg.by_dim.entry(dim.clone()).or_default().push(id);
                reg.fingerprints.push(fp);
                reg.classes.push(Arc::new(IsoClass { id, dim, rep, label: format!("#{}", id.0) }));
            }
            reg.window = d;
        }
        Ok(())
    }

    fn build_layer(&self, d: usize) -> Result<Vec<(Rep, Vec<usize>)>> {
        let q = &self.core.quiver;
        let f = self.core.field;
        let prev: Vec<Arc<IsoClass>> = {
            let reg = self.reg.read().expect("registry poisoned");
            reg.classes.iter().filter(|c| c.dim.total() == d as i64 - 1).cloned().collect()
        };
        let mut found: Vec<(Rep, Vec<usize>)> = Vec::new();
        for base in &prev {
            for v in 0..self.core.spec.n {
                let s = q.simple(f, v);
                let ext = q.ext_space(&s, &base.rep);
                for h in q.ext_elements(&ext, f, self.core.caps.hom_scan)? {
                    let x = q.middle(&s, &base.rep, &h);
                    let fp = q.fingerprint(&x);
                    let mut seen = false;
                    for (y, fy) in &found {
                        if *fy == fp && q.find_iso(&x, y, self.core.caps.hom_scan)?.is_some() {
                            seen = true;
                            break;
                        }
                    }
                    if !seen {
                        found.push((x, fp));
                    }
                }
            }
        }
        found.sort_by(|a, b| a.0.dims().cmp(b.0.dims()));
        Ok(found)
    }
}

impl HereditaryCategory for QuiverCategory {
    fn core(&self) -> &CategoryCore {
        &self.core
    }

    fn classes_up_to(&self, bound: usize) -> Result<Vec<ClassId>> {
        self.ensure_window(bound)?;
        let reg = self.reg.read().expect("registry poisoned");
        Ok(reg.classes.iter().filter(|c| c.dim.total() <= bound as i64).map(|c| c.id).collect())
    }

    fn classes_of_dim(&self, dim: &K0Class) -> Result<Vec<ClassId>> {
        if !dim.is_nonneg() {
            return Ok(Vec::new());
        }
        self.ensure_window(dim.total() as usize)?;
        let reg = self.reg.read().expect("registry poisoned");
        Ok(reg.by_dim.get(dim).cloned().unwrap_or_default())
    }

    fn class(&self, id: ClassId) -> Result<Arc<IsoClass>> {
        self.reg.read().expect("registry poisoned").classes.get(id.0 as usize).cloned().ok_or(Error::UnknownClass(id.0))
    }

    fn identify(&self, r: &Rep) -> Result<ClassId> {
        if let Some(&id) = self.memo.read().expect("memo poisoned").get(r) {
            return Ok(id);
        }
        let q = &self.core.quiver;
        let fp = q.fingerprint(r);
        let candidates: Vec<(ClassId, Rep)> = {
            self.ensure_window(r.total_dim())?;
            let reg = self.reg.read().expect("registry poisoned");
            reg.by_dim
                .get(&r.dim_class())
                .into_iter()
                .flatten()
                .filter(|id| reg.fingerprints[id.0 as usize] == fp)
                .map(|id| (*id, reg.classes[id.0 as usize].rep.clone()))
                .collect()
        };
        for (id, rep) in candidates {
            if q.find_iso(r, &rep, self.core.caps.hom_scan)?.is_some() {
                self.memo.write().expect("memo poisoned").insert(r.clone(), id);
                return Ok(id);
            }
        }
        Err(Error::Inconsistent(format!(
            "no class of dimension {:?} matches; the representation may not be nilpotent",
            r.dims()
        )))
    }
}
