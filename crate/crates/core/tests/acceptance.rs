//! Acceptance suite: ten exact checks, one summary line each.
//!
//! Runs as a plain binary so the summary is always printed; exits nonzero if any check fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hallforge::double::{dims_below, Double, HeElt, HeMono};
use hallforge::heredcat::{open, Caps, ClassId, HereditaryCategory, K0Class, Morphism, QuiverSpec, Rep};
use hallforge::mrh::{Mono, Mrh, MrhElt};
use hallforge::ztwo::{pairing_exponent, GenKind, ZTwo};
use hallforge::Scalar;

const CATEGORIES: [&str; 3] = ["a1", "a2", "jordan"];
const SEED: u64 = 0x5eed_2024;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn cat(name: &str, q: u64) -> Arc<dyn HereditaryCategory> {
    open(QuiverSpec::preset(name, q).unwrap(), Caps::default()).unwrap()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn e<T>(r: hallforge::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|err| err.to_string())
}

// Counting oracles built only from Hom enumeration.

fn automorphisms(c: &dyn HereditaryCategory, m: &Rep) -> u64 {
    let q = c.quiver();
    q.hom_elements(m, m, u64::MAX).unwrap().iter().filter(|g| g.is_invertible()).count() as u64
}

/// Pairs `(i: B → M, p: M → A)` with `i` injective, `p` surjective and `p i = 0`.
fn ses_pairs(c: &dyn HereditaryCategory, a: &Rep, b: &Rep, m: &Rep) -> u64 {
    if &a.dim_class() + &b.dim_class() != m.dim_class() {
        return 0;
    }
    let q = c.quiver();
    let injs: Vec<Morphism> =
        q.hom_elements(b, m, u64::MAX).unwrap().into_iter().filter(|g| g.is_injective()).collect();
    let surjs: Vec<Morphism> =
        q.hom_elements(m, a, u64::MAX).unwrap().into_iter().filter(|g| g.is_surjective()).collect();
    injs.iter().map(|i| surjs.iter().filter(|p| p.compose(i).is_zero()).count() as u64).sum()
}

fn ses_coeff(c: &dyn HereditaryCategory, a: ClassId, b: ClassId, m: ClassId) -> BigRational {
    let (ra, rb, rm) = (c.rep(a).unwrap(), c.rep(b).unwrap(), c.rep(m).unwrap());
    BigRational::new(ses_pairs(c, &ra, &rb, &rm).into(), automorphisms(c, &rm).into())
}

fn log_q(x: &BigRational, q: u64) -> Option<i64> {
    if !x.is_integer() || x <= &BigRational::zero() {
        return None;
    }
    let mut n = x.to_integer();
    let mut k = 0;
    let qb = BigInt::from(q);
    while n > BigInt::one() {
        if &n % &qb != BigInt::zero() {
            return None;
        }
        n /= &qb;
        k += 1;
    }
    Some(k)
}

fn pairs_up_to(c: &dyn HereditaryCategory, bound: i64) -> Vec<(ClassId, ClassId)> {
    let ids = c.classes_up_to(bound as usize).unwrap();
    let mut out = Vec::new();
    for &a in &ids {
        for &b in &ids {
            if c.dim(a).unwrap().total() + c.dim(b).unwrap().total() <= bound {
                out.push((a, b));
            }
        }
    }
    out
}

fn criterion_1() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            for (a, b) in pairs_up_to(c.as_ref(), 3) {
                let dm = &c.dim(a).unwrap() + &c.dim(b).unwrap();
                let mut sum = BigRational::zero();
                for m in e(c.classes_of_dim(&dm))? {
                    sum += ses_coeff(c.as_ref(), a, b, m);
                }
                let hom = e(c.hom_dim(a, b))? as i64;
                let ext = sum * BigRational::from_integer(num_traits::pow(BigInt::from(q), hom as usize));
                let ext =
                    log_q(&ext, q).ok_or_else(|| format!("{name} q={q} {a} {b}: |Ext| = {ext} is not a power of q"))?;
                let euler = c.euler(&c.dim(a).unwrap(), &c.dim(b).unwrap());
                ensure(hom - ext == euler, || format!("{name} q={q} {a} {b}: hom {hom} ext {ext} euler {euler}"))?;
                ensure(e(c.ext1_dim(a, b))? as i64 == ext, || format!("{name} q={q} {a} {b}: ext1_dim disagrees"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} class pairs"))
}

fn criterion_2() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            let z = ZTwo::new(c.clone());
            let ids = e(c.classes_up_to(2))?;
            for &a in &ids {
                for &b in &ids {
                    let (ra, rb) = (c.rep(a).unwrap(), c.rep(b).unwrap());
                    for lk in GenKind::ALL {
                        for rk in GenKind::ALL {
                            let Some(t) =
                                pairing_exponent(|x, y| c.euler(x, y), lk, &ra.dim_class(), rk, &rb.dim_class())
                            else {
                                continue;
                            };
                            let (x, y) = (z.make(lk, &ra), z.make(rk, &rb));
                            let hom = z.hom_dim(&x, &y) as i64;
                            let ext = z.ext1_dim(&x, &y) as i64;
                            ensure(hom - ext == t, || {
                                format!(
                                    "{name} q={q} <{lk:?}_{a},{rk:?}_{b}>: |Hom|/|Ext| = q^{} but table gives q^{t}",
                                    hom - ext
                                )
                            })?;
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{n} generator pairs"))
}

fn criterion_3() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            for (a, b) in pairs_up_to(c.as_ref(), 3) {
                let dm = &c.dim(a).unwrap() + &c.dim(b).unwrap();
                for m in e(c.classes_of_dim(&dm))? {
                    let sub = e(c.hall_coeff(a, b, m))?;
                    let ses = ses_coeff(c.as_ref(), a, b, m);
                    ensure(sub == ses, || format!("{name} q={q} ({a},{b};{m}): subobjects {sub} vs ses {ses}"))?;
                    ensure(e(c.hall_product_coeff(a, b, m))? == ses, || {
                        format!("{name} q={q} ({a},{b};{m}): cocycle route")
                    })?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} Hall numbers"))
}

fn random_mono(rng: &mut ChaCha8Rng, ids: &[ClassId], n: usize) -> Mono {
    let vec = |rng: &mut ChaCha8Rng| K0Class::new((0..n).map(|_| rng.gen_range(-2..=2)).collect());
    Mono { a: ids[rng.gen_range(0..ids.len())], b: ids[rng.gen_range(0..ids.len())], alpha: vec(rng), beta: vec(rng) }
}

fn criterion_4() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            let ids = e(c.classes_up_to(2))?;
            let mrh = Mrh::new(c.clone());
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ q);
            for _ in 0..200 {
                let [x, y, z] = [(); 3].map(|_| MrhElt::from_mono(q, random_mono(&mut rng, &ids, c.n())));
                let l = e(mrh.mul(&e(mrh.mul(&x, &y))?, &z))?;
                let r = e(mrh.mul(&x, &e(mrh.mul(&y, &z))?))?;
                ensure(l == r, || format!("{name} q={q}: ({x:?})({y:?})({z:?}) not associative"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} triples"))
}

fn criterion_5() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        let c = cat(name, 2);
        let mrh = Mrh::new(c.clone());
        let cx = e(mrh.ztwo().enumerate_complexes(2))?;
        let red: Vec<MrhElt> =
            cx.iter().map(|m| mrh.reduce_complex(m)).collect::<hallforge::Result<_>>().map_err(|x| x.to_string())?;
        let mut pairs: Vec<(usize, usize)> = (0..cx.len()).flat_map(|i| (0..cx.len()).map(move |j| (i, j))).collect();
        if name == "a2" {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            pairs = (0..300).map(|_| pairs[rng.gen_range(0..pairs.len())]).collect();
        }
        for (i, j) in pairs {
            let o = e(mrh.oracle_mul(&cx[i], &cx[j]))?;
            let m = e(mrh.mul(&red[i], &red[j]))?;
            ensure(o == m, || format!("{name}: complexes {i}, {j}: oracle {o:?} vs engine {m:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} complex pairs"))
}

fn tori(n: usize) -> Vec<K0Class> {
    let mut out = vec![K0Class::zero(n)];
    for i in 0..n {
        out.push(K0Class::unit(n, i));
        out.push(-&K0Class::unit(n, i));
    }
    out
}

fn criterion_6() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            let d = Double::open(c.clone());
            let ts = tori(c.n());
            for (a, b) in pairs_up_to(c.as_ref(), 3) {
                for alpha in &ts {
                    for beta in &ts {
                        let x = HeMono { a, alpha: alpha.clone() };
                        let y = HeMono { a: b, alpha: beta.clone() };
                        let r = e(d.verify_d3(&x, &y))?;
                        ensure(r.equal, || format!("{name} q={q}: {x} vs {y}: lhs {:?} rhs {:?}", r.lhs, r.rhs))?;
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{n} basis pairs"))
}

fn criterion_7() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            let d = Double::open(c.clone());
            let ts = tori(c.n());
            for (a, b) in pairs_up_to(c.as_ref(), 3) {
                let dz = &c.dim(a).unwrap() + &c.dim(b).unwrap();
                for z in e(c.classes_of_dim(&dz))? {
                    for (i, alpha) in ts.iter().enumerate() {
                        // all torus triples from {0, ±e_i} for x, with y and z cycling through the same list
                        for (j, beta) in ts.iter().enumerate() {
                            let gamma = &ts[(i + j) % ts.len()];
                            let x = e(d.mono(a, alpha.clone()))?;
                            let y = e(d.mono(b, beta.clone()))?;
                            let zz = e(d.mono(z, gamma.clone()))?;
                            ensure(e(d.verify_hopf_pairing(&x, &y, &zz))?, || {
                                format!("{name} q={q}: φ(xy,z) ≠ (x⊗y,Δz) for x={x:?} y={y:?} z={zz:?}")
                            })?;
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{n} triples"))
}

fn criterion_8() -> Check {
    let mut n = 0;
    for name in ["jordan", "a2"] {
        let c = cat(name, 2);
        let d = Double::open(c.clone());
        let ids = e(c.classes_up_to(2))?;
        for &a in &ids {
            let da = c.dim(a).unwrap();
            for &b in &ids {
                let db = c.dim(b).unwrap();
                for &x in &ids {
                    let dx = c.dim(x).unwrap();
                    for &y in &ids {
                        for delta in dims_below(&da) {
                            let delta_t = &(&da - &dx) - &delta;
                            if !delta.le(&db) || !delta_t.is_nonneg() || !delta_t.le(&db) {
                                continue;
                            }
                            ensure(e(d.verify_uv_identity(a, b, x, y, &delta, &delta_t))?, || {
                                format!("{name}: A={a} B={b} X={x} Y={y} δ={delta} δ̃={delta_t}")
                            })?;
                            n += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{n} admissible tuples"))
}

fn criterion_9() -> Check {
    // (a) A_1 commutator
    for q in [2u64, 3, 5] {
        let mrh = Mrh::new(cat("a1", q));
        let s = mrh.category().simple(0).unwrap();
        let (p, m) = (e(mrh.iplus(s))?, e(mrh.iminus(s))?);
        let lhs = e(mrh.mul(&m, &p))?;
        let t = |a: i64, b: i64| mrh.torus(K0Class::new(vec![a]), K0Class::new(vec![b])).unwrap();
        let qm1 = Scalar::from_int(q as i64 - 1, q);
        let rhs = &(&e(mrh.mul(&p, &m))? + &t(1, 0).scale(&qm1)) - &t(0, 1).scale(&qm1);
        ensure(lhs == rhs, || format!("a1 q={q}: [C*_S][C_S] = {lhs:?}"))?;
    }
    // (b) Jordan K_(1), K*_(1) central
    let mrh = Mrh::new(cat("jordan", 2));
    let ids = e(mrh.category().classes_up_to(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let one = K0Class::new(vec![1]);
    let zero = K0Class::new(vec![0]);
    let ks = [e(mrh.torus(one.clone(), zero.clone()))?, e(mrh.torus(zero, one))?];
    for _ in 0..20 {
        let m = MrhElt::from_mono(2, random_mono(&mut rng, &ids, 1));
        for k in &ks {
            ensure(e(mrh.mul(k, &m))? == e(mrh.mul(&m, k))?, || format!("jordan: {k:?} does not commute with {m:?}"))?;
        }
    }
    // (c) quantum Serre relations in A_2
    for q in [2u64, 3] {
        let d = Double::open(cat("a2", q));
        let c = d.category().clone();
        let (s1, s2) = (e(d.class(c.simple(0).unwrap()))?, e(d.class(c.simple(1).unwrap()))?);
        let m = |x: &HeElt, y: &HeElt| d.he_mul(x, y).unwrap();
        let vv = &Scalar::v_pow(1, q) + &Scalar::v_pow(-1, q);
        for (i, j) in [(&s1, &s2), (&s2, &s1)] {
            let rel = &(&m(&m(i, i), j) - &m(&m(i, j), i).scale(&vv)) + &m(&m(j, i), i);
            ensure(rel.is_empty(), || format!("a2 q={q}: Serre relation leaves {rel:?}"))?;
        }
    }
    Ok("commutator, centrality, Serre".into())
}

fn criterion_10() -> Check {
    let mut n = 0;
    for name in CATEGORIES {
        for q in [2u64, 3] {
            let c = cat(name, q);
            let mrh = Mrh::new(c.clone());
            let ids = e(c.classes_up_to(3))?;
            let zero = K0Class::zero(c.n());
            for &x in &ids {
                for &y in &ids {
                    let ex = e(mrh.expand_pair(x, y))?;
                    let lead = Mono { a: x, b: y, alpha: zero.clone(), beta: zero.clone() };
                    ensure(ex.coeff(&lead).is_one(), || format!("{name} q={q}: leading coefficient of ({x},{y})"))?;
                    let top = e(mrh.stalk_dim(&lead))?;
                    for (m, _) in ex.terms().filter(|(m, _)| **m != lead) {
                        ensure(e(mrh.stalk_dim(m))? < top, || format!("{name} q={q}: ({x},{y}) has term {m}"))?;
                    }
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("euler form soundness", criterion_1),
        ("pairing table", criterion_2),
        ("riedtmann-peng consistency", criterion_3),
        ("associativity", criterion_4),
        ("oracle equivalence", criterion_5),
        ("drinfeld double cross relation", criterion_6),
        ("hopf pairing", criterion_7),
        ("U/V identity", criterion_8),
        ("structural corollaries", criterion_9),
        ("basis triangularity", criterion_10),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}, {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}, {secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
