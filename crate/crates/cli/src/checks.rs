//! Verification suites; each returns one row per checked instance.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hallforge::double::{dims_below, Double, HeElt, HeMono};
use hallforge::heredcat::{ClassId, HereditaryCategory, K0Class};
use hallforge::mrh::{Mono, Mrh, MrhElt};
use hallforge::ztwo::{pairing_exponent, GenKind};
use hallforge::{Result, Scalar};

use crate::config::CheckName;

const ASSOC_TRIPLES: usize = 200;
const ORACLE_FULL_LIMIT: usize = 400;
const ORACLE_SAMPLE: usize = 300;
const CENTRALITY_SAMPLE: usize = 20;

pub struct Ctx {
    pub double: Double,
    pub bound: usize,
    pub seed: u64,
}

impl Ctx {
    pub fn new(cat: Arc<dyn HereditaryCategory>, bound: usize, seed: u64) -> Self {
        Ctx { double: Double::open(cat), bound, seed }
    }

    fn cat(&self) -> &dyn HereditaryCategory {
        self.double.category().as_ref()
    }

    fn mrh(&self) -> &Mrh {
        self.double.mrh()
    }

    fn q(&self) -> u64 {
        self.cat().q()
    }

    fn classes(&self) -> Result<Vec<ClassId>> {
        self.cat().classes_up_to(self.bound)
    }

    /// Ordered class pairs whose dimensions add up to at most the bound.
    fn pairs(&self) -> Result<Vec<(ClassId, ClassId)>> {
        let ids = self.classes()?;
        let mut out = Vec::new();
        for &a in &ids {
            for &b in &ids {
                if self.cat().dim(a)?.total() + self.cat().dim(b)?.total() <= self.bound as i64 {
                    out.push((a, b));
                }
            }
        }
        Ok(out)
    }

    /// `0` and `±e_i`.
    fn tori(&self) -> Vec<K0Class> {
        let n = self.cat().n();
        let mut out = vec![K0Class::zero(n)];
        for i in 0..n {
            out.push(K0Class::unit(n, i));
            out.push(-&K0Class::unit(n, i));
        }
        out
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    fn random_mono(&self, rng: &mut ChaCha8Rng, ids: &[ClassId]) -> Mono {
        let n = self.cat().n();
        let mut vec = || K0Class::new((0..n).map(|_| rng.gen_range(-2..=2)).collect());
        let (alpha, beta) = (vec(), vec());
        Mono { a: ids[rng.gen_range(0..ids.len())], b: ids[rng.gen_range(0..ids.len())], alpha, beta }
    }
}

pub fn run(ctx: &Ctx, check: CheckName) -> Result<Vec<Value>> {
    let rows = match check {
        CheckName::Euler => euler(ctx)?,
        CheckName::Rp => rp(ctx)?,
        CheckName::Pairing => pairing(ctx)?,
        CheckName::Assoc => assoc(ctx)?,
        CheckName::Oracle => oracle(ctx)?,
        CheckName::D3 => d3(ctx)?,
        CheckName::Hopf => hopf(ctx)?,
        CheckName::Uv => uv(ctx)?,
        CheckName::Serre => serre(ctx)?,
        CheckName::Heisenberg => heisenberg(ctx)?,
        CheckName::Triangular => triangular(ctx)?,
    };
    Ok(rows
        .into_iter()
        .map(|mut row| {
            row["check"] = json!(check.as_str());
            row
        })
        .collect())
}

fn euler(ctx: &Ctx) -> Result<Vec<Value>> {
    let cat = ctx.cat();
    let mut rows = Vec::new();
    for (a, b) in ctx.pairs()? {
        let hom = cat.hom_dim(a, b)? as i64;
        let ext = cat.ext1_dim(a, b)? as i64;
        let euler = cat.euler(&cat.dim(a)?, &cat.dim(b)?);
        rows.push(json!({"a": a.0, "b": b.0, "hom": hom, "ext": ext, "euler": euler, "pass": hom - ext == euler}));
    }
    Ok(rows)
}

fn rp(ctx: &Ctx) -> Result<Vec<Value>> {
    let cat = ctx.cat();
    let mut rows = Vec::new();
    for (a, b) in ctx.pairs()? {
        let dm = &cat.dim(a)? + &cat.dim(b)?;
        for m in cat.classes_of_dim(&dm)? {
            let cocycle = cat.hall_product_coeff(a, b, m)?;
            let sub = cat.hall_coeff(a, b, m)?;
            let ses = cat.hall_coeff_by_ses(a, b, m)?;
            let pass = cocycle == sub && sub == ses;
            rows.push(json!({"a": a.0, "b": b.0, "m": m.0, "coeff": cocycle.to_string(), "pass": pass}));
        }
    }
    Ok(rows)
}

fn kind_name(k: GenKind) -> &'static str {
    match k {
        GenKind::K => "K",
        GenKind::KStar => "K*",
        GenKind::C => "C",
        GenKind::CStar => "C*",
    }
}

fn pairing(ctx: &Ctx) -> Result<Vec<Value>> {
    let cat = ctx.cat();
    let z = ctx.mrh().ztwo();
    let ids = ctx.classes()?;
    let mut rows = Vec::new();
    for &a in &ids {
        for &b in &ids {
            let (ra, rb) = (cat.rep(a)?, cat.rep(b)?);
            for lk in GenKind::ALL {
                for rk in GenKind::ALL {
                    let Some(t) = pairing_exponent(|x, y| cat.euler(x, y), lk, &ra.dim_class(), rk, &rb.dim_class())
                    else {
                        continue;
                    };
                    let (x, y) = (z.make(lk, &ra), z.make(rk, &rb));
                    let found = z.hom_dim(&x, &y) as i64 - z.ext1_dim(&x, &y) as i64;
                    rows.push(json!({
                        "left": format!("{}_{}", kind_name(lk), a),
                        "right": format!("{}_{}", kind_name(rk), b),
                        "exponent": t,
                        "found": found,
                        "pass": found == t,
                    }));
                }
            }
        }
    }
    Ok(rows)
}

fn assoc(ctx: &Ctx) -> Result<Vec<Value>> {
    let mrh = ctx.mrh();
    let ids = ctx.classes()?;
    let mut rng = ctx.rng(0);
    let mut rows = Vec::new();
    for i in 0..ASSOC_TRIPLES {
        let [x, y, z] = [(); 3].map(|_| ctx.random_mono(&mut rng, &ids));
        let [ex, ey, ez] = [&x, &y, &z].map(|m| MrhElt::from_mono(ctx.q(), m.clone()));
        let l = mrh.mul(&mrh.mul(&ex, &ey)?, &ez)?;
        let r = mrh.mul(&ex, &mrh.mul(&ey, &ez)?)?;
        rows.push(json!({
            "index": i,
            "x": x.to_string(),
            "y": y.to_string(),
            "z": z.to_string(),
            "terms": l.len(),
            "pass": l == r,
        }));
    }
    Ok(rows)
}

fn oracle(ctx: &Ctx) -> Result<Vec<Value>> {
    let mrh = ctx.mrh();
    let cx = mrh.ztwo().enumerate_complexes(ctx.bound)?;
    let n = cx.len();
    let pairs: Vec<(usize, usize)> = if n * n <= ORACLE_FULL_LIMIT {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ctx.rng(1);
        let mut sample: Vec<(usize, usize)> =
            (0..ORACLE_SAMPLE).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        sample.sort_unstable();
        sample.dedup();
        sample
    };
    let mut rows = Vec::new();
    for (i, j) in pairs {
        let o = mrh.oracle_mul(&cx[i], &cx[j])?;
        let m = mrh.mul(&mrh.reduce_complex(&cx[i])?, &mrh.reduce_complex(&cx[j])?)?;
        rows.push(json!({"lhs": i, "rhs": j, "terms": m.len(), "pass": o == m}));
    }
    Ok(rows)
}

fn d3(ctx: &Ctx) -> Result<Vec<Value>> {
    let ts = ctx.tori();
    let mut rows = Vec::new();
    for (a, b) in ctx.pairs()? {
        for alpha in &ts {
            for beta in &ts {
                let x = HeMono { a, alpha: alpha.clone() };
                let y = HeMono { a: b, alpha: beta.clone() };
                let r = ctx.double.verify_d3(&x, &y)?;
                rows.push(json!({
                    "a": x.to_string(),
                    "b": y.to_string(),
                    "equal": r.equal,
                    "lhs_terms": r.lhs.len(),
                    "rhs_terms": r.rhs.len(),
                    "pass": r.equal,
                }));
            }
        }
    }
    Ok(rows)
}

fn hopf(ctx: &Ctx) -> Result<Vec<Value>> {
    let d = &ctx.double;
    let cat = ctx.cat();
    let ts = ctx.tori();
    let mut rows = Vec::new();
    for (a, b) in ctx.pairs()? {
        let dz = &cat.dim(a)? + &cat.dim(b)?;
        for z in cat.classes_of_dim(&dz)? {
            for (i, alpha) in ts.iter().enumerate() {
                for (j, beta) in ts.iter().enumerate() {
                    let gamma = &ts[(i + j) % ts.len()];
                    let x = HeMono { a, alpha: alpha.clone() };
                    let y = HeMono { a: b, alpha: beta.clone() };
                    let w = HeMono { a: z, alpha: gamma.clone() };
                    let elt = |m: &HeMono| d.mono(m.a, m.alpha.clone());
                    let pass = d.verify_hopf_pairing(&elt(&x)?, &elt(&y)?, &elt(&w)?)?;
                    rows.push(json!({"x": x.to_string(), "y": y.to_string(), "z": w.to_string(), "pass": pass}));
                }
            }
        }
    }
    Ok(rows)
}

fn uv(ctx: &Ctx) -> Result<Vec<Value>> {
    let cat = ctx.cat();
    let ids = ctx.classes()?;
    let mut rows = Vec::new();
    for &a in &ids {
        let da = cat.dim(a)?;
        for &b in &ids {
            let db = cat.dim(b)?;
            for &x in &ids {
                let dx = cat.dim(x)?;
                for &y in &ids {
                    for delta in dims_below(&da) {
                        let delta_t = &(&da - &dx) - &delta;
                        if !delta.le(&db) || !delta_t.is_nonneg() || !delta_t.le(&db) {
                            continue;
                        }
                        let pass = ctx.double.verify_uv_identity(a, b, x, y, &delta, &delta_t)?;
                        rows.push(json!({
                            "a": a.0,
                            "b": b.0,
                            "x": x.0,
                            "y": y.0,
                            "delta": delta.entries(),
                            "delta_t": delta_t.entries(),
                            "pass": pass,
                        }));
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Quantum integer `[n] = (v^n − v^{−n}) / (v − v^{−1})`.
fn qint(n: i64, q: u64) -> Scalar {
    let mut s = Scalar::zero(q);
    for k in 0..n {
        s = &s + &Scalar::v_pow(n - 1 - 2 * k, q);
    }
    s
}

fn qbinom(n: i64, r: i64, q: u64) -> Result<Scalar> {
    let mut s = Scalar::one(q);
    for k in 1..=r {
        s = &(&s * &qint(n - k + 1, q)) * &qint(k, q).inv()?;
    }
    Ok(s)
}

fn serre(ctx: &Ctx) -> Result<Vec<Value>> {
    let d = &ctx.double;
    let cat = ctx.cat();
    let q = ctx.q();
    let arrows = &cat.spec().arrows;
    let looped = |v: usize| arrows.iter().any(|&(s, t)| s == v && t == v);
    let mut rows = Vec::new();
    for i in (0..cat.n()).filter(|&i| !looped(i)) {
        for j in (0..cat.n()).filter(|&j| j != i && !looped(j)) {
            let between = arrows.iter().filter(|&&(s, t)| (s, t) == (i, j) || (s, t) == (j, i)).count() as i64;
            let top = 1 + between;
            let (ei, ej) = (d.class(cat.simple(i)?)?, d.class(cat.simple(j)?)?);
            let power = |k: i64| -> Result<HeElt> {
                let mut acc = d.unit();
                for _ in 0..k {
                    acc = d.he_mul(&acc, &ei)?;
                }
                Ok(acc)
            };
            let mut rel = HeElt::zero(q);
            for r in 0..=top {
                let term = d.he_mul(&d.he_mul(&power(top - r)?, &ej)?, &power(r)?)?;
                let sign = Scalar::from_int(if r % 2 == 0 { 1 } else { -1 }, q);
                rel.add_scaled(&term, &(&sign * &qbinom(top, r, q)?));
            }
            rows.push(
                json!({"i": i + 1, "j": j + 1, "degree": top, "residual_terms": rel.len(), "pass": rel.is_empty()}),
            );
        }
    }
    Ok(rows)
}

fn heisenberg(ctx: &Ctx) -> Result<Vec<Value>> {
    let mrh = ctx.mrh();
    let cat = ctx.cat();
    let q = ctx.q();
    let n = cat.n();
    let zero = K0Class::zero(n);
    let qm1 = Scalar::from_int(q as i64 - 1, q);
    let mut rows = Vec::new();
    for v in 0..n {
        let s = cat.simple(v)?;
        let (p, m) = (mrh.iplus(s)?, mrh.iminus(s)?);
        let e = K0Class::unit(n, v);
        let comm = &mrh.mul(&m, &p)? - &mrh.mul(&p, &m)?;
        let expect = (&mrh.torus(e.clone(), zero.clone())? - &mrh.torus(zero.clone(), e.clone())?).scale(&qm1);
        rows.push(json!({"kind": "commutator", "vertex": v + 1, "terms": comm.len(), "pass": comm == expect}));
    }
    let ids = ctx.classes()?;
    let mut rng = ctx.rng(2);
    for v in 0..n {
        let e = K0Class::unit(n, v);
        if (0..n).any(|w| cat.sym(&e, &K0Class::unit(n, w)) != 0) {
            continue;
        }
        for (label, k) in [("K", mrh.torus(e.clone(), zero.clone())?), ("K*", mrh.torus(zero.clone(), e.clone())?)] {
            for _ in 0..CENTRALITY_SAMPLE {
                let mono = ctx.random_mono(&mut rng, &ids);
                let x = MrhElt::from_mono(q, mono.clone());
                let pass = mrh.mul(&k, &x)? == mrh.mul(&x, &k)?;
                rows.push(json!({
                    "kind": "central",
                    "vertex": v + 1,
                    "torus": label,
                    "with": mono.to_string(),
                    "pass": pass,
                }));
            }
        }
    }
    Ok(rows)
}

fn triangular(ctx: &Ctx) -> Result<Vec<Value>> {
    let mrh = ctx.mrh();
    let ids = ctx.classes()?;
    let zero = K0Class::zero(ctx.cat().n());
    let mut rows = Vec::new();
    for &x in &ids {
        for &y in &ids {
            let ex = mrh.expand_pair(x, y)?;
            let lead = Mono { a: x, b: y, alpha: zero.clone(), beta: zero.clone() };
            let top = mrh.stalk_dim(&lead)?;
            let mut pass = ex.coeff(&lead).is_one();
            for (m, _) in ex.terms().filter(|(m, _)| **m != lead) {
                pass &= mrh.stalk_dim(m)? < top;
            }
            rows.push(json!({"a": x.0, "b": y.0, "terms": ex.len(), "pass": pass}));
        }
    }
    Ok(rows)
}
