use num_rational::BigRational;

use super::*;

fn cat(name: &str, q: u64) -> Arc<dyn HereditaryCategory> {
    open(QuiverSpec::preset(name, q).unwrap(), Caps::default()).unwrap()
}

fn generic(name: &str, q: u64) -> QuiverCategory {
    QuiverCategory::new(QuiverSpec::preset(name, q).unwrap(), Caps::default()).unwrap()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn class_windows() {
    assert_eq!(cat("a1", 2).classes_up_to(2).unwrap().len(), 3);
    assert_eq!(cat("jordan", 2).classes_up_to(2).unwrap().len(), 4);
    assert_eq!(generic("jordan", 2).classes_up_to(2).unwrap().len(), 4);
    let a2 = cat("a2", 2);
    let ids = a2.classes_up_to(2).unwrap();
    let dims: Vec<K0Class> = ids.iter().map(|&i| a2.dim(i).unwrap()).collect();
    let expect: Vec<K0Class> =
        [[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [1, 1], [2, 0]].iter().map(|d| K0Class::new(d.to_vec())).collect();
    assert_eq!(dims, expect);
}

#[test]
fn class_ids_are_ordered_by_dimension_vector() {
    let a2 = generic("a2", 3);
    let ids = a2.classes_up_to(4).unwrap();
    let dims: Vec<K0Class> = ids.iter().map(|&i| a2.dim(i).unwrap()).collect();
    for w in dims.windows(2) {
        assert!((w[0].total(), &w[0]) <= (w[1].total(), &w[1]));
    }
    // (a, b) has min(a, b) + 1 classes
    let count: usize = (0..=4).flat_map(|a| (0..=4 - a).map(move |b| a.min(b) + 1)).sum();
    assert_eq!(ids.len(), count);
}

#[test]
fn identify_examples() {
    let j = cat("jordan", 2);
    let f = j.field();
    let zero = j.quiver().rep(f, vec![2], vec![FqMatrix::zeros(2, 2, f)]).unwrap();
    assert_eq!(j.class(j.identify(&zero).unwrap()).unwrap().label, "(1,1)");
    let block = Rep::jordan(&[2], f);
    assert_eq!(j.class(j.identify(&block).unwrap()).unwrap().label, "(2)");
    for c in j.classes_up_to(3).unwrap() {
        assert_eq!(j.identify(&j.rep(c).unwrap()).unwrap(), c);
    }
}

#[test]
fn hom_examples() {
    let a2 = cat("a2", 2);
    let (s1, s2) = (a2.simple(0).unwrap(), a2.simple(1).unwrap());
    assert_eq!(a2.hom_dim(s1, s2).unwrap(), 0);
    assert_eq!(a2.hom_dim(s1, s1).unwrap(), 1);
    let j = JordanCategory::new(2, Caps::default()).unwrap();
    let (m2, m1) = (j.class_of_partition(&[2]).unwrap(), j.class_of_partition(&[1]).unwrap());
    assert_eq!(j.hom_dim(m2, m1).unwrap(), 1);
    assert_eq!(j.quiver().hom_dim(&j.rep(m2).unwrap(), &j.rep(m1).unwrap()), 1);
}

#[test]
fn euler_examples() {
    let j = QuiverSpec::preset("jordan", 2).unwrap();
    let a1 = QuiverSpec::preset("a1", 2).unwrap();
    let a2 = QuiverSpec::preset("a2", 2).unwrap();
    let e = |v: &[i64]| K0Class::new(v.to_vec());
    assert_eq!(j.euler(&e(&[1]), &e(&[1])), 0);
    assert_eq!(a2.euler(&e(&[1, 0]), &e(&[0, 1])), -1);
    assert_eq!(a2.euler(&e(&[2, 1]), &e(&[0, 0])), 0);
    assert_eq!(j.sym(&e(&[1]), &e(&[1])), 0);
    assert_eq!(a1.sym(&e(&[1]), &e(&[1])), 2);
    assert_eq!(a2.sym(&e(&[1, 0]), &e(&[0, 1])), -1);
}

#[test]
fn ext_examples() {
    let a1 = cat("a1", 3);
    let k = a1.simple(0).unwrap();
    assert_eq!(a1.ext1_dim(k, k).unwrap(), 0);
    let j = cat("jordan", 2);
    let s = j.simple(0).unwrap();
    assert_eq!(j.ext1_dim(s, s).unwrap(), 1);
    let a2 = cat("a2", 2);
    let (s1, s2) = (a2.simple(0).unwrap(), a2.simple(1).unwrap());
    assert_eq!(a2.ext1_dim(s1, s2).unwrap(), 1);
    let row = a2.hall_row(s1, s2).unwrap();
    let p1 = a2
        .identify(&a2.quiver().rep(a2.field(), vec![1, 1], vec![FqMatrix::identity(1, a2.field())]).unwrap())
        .unwrap();
    assert!(row.iter().any(|(m, _)| *m == p1));
}

#[test]
fn aut_examples() {
    for q in [2u64, 3, 5] {
        let a1 = cat("a1", q);
        assert_eq!(a1.aut_order(a1.simple(0).unwrap()).unwrap(), BigUint::from(q - 1));
    }
    let j = JordanCategory::new(2, Caps::default()).unwrap();
    assert_eq!(j.aut_order(j.class_of_partition(&[1, 1]).unwrap()).unwrap(), BigUint::from(6u32));
    assert_eq!(j.aut_order(j.class_of_partition(&[2]).unwrap()).unwrap(), BigUint::from(2u32));
}

#[test]
fn hall_coeff_examples() {
    let j = JordanCategory::new(2, Caps::default()).unwrap();
    let s = j.class_of_partition(&[1]).unwrap();
    let ss = j.class_of_partition(&[1, 1]).unwrap();
    let j2 = j.class_of_partition(&[2]).unwrap();
    assert_eq!(j.hall_coeff(s, s, ss).unwrap(), r(1, 2));
    assert_eq!(j.hall_coeff(s, s, j2).unwrap(), r(1, 2));
    assert_eq!(j.hall_coeff_by_ses(s, s, ss).unwrap(), r(1, 2));
    assert_eq!(j.hall_product_coeff(s, s, j2).unwrap(), r(1, 2));
    let a1 = cat("a1", 3);
    let k = a1.simple(0).unwrap();
    let k2 = a1.direct_sum(k, k).unwrap();
    assert_eq!(a1.hall_coeff(k, k, k2).unwrap(), r(1, 3));
    assert_eq!(a1.hall_coeff(k, ClassId::ZERO, k).unwrap(), r(1, 1));
    assert_eq!(a1.hall_coeff(k, ClassId::ZERO, k2).unwrap(), r(0, 1));
}

#[test]
fn kernel_image_cokernel() {
    let a2 = cat("a2", 3);
    let q = a2.quiver();
    let f = a2.field();
    let p1 = q.rep(f, vec![1, 1], vec![FqMatrix::identity(1, f)]).unwrap();
    let s1 = q.simple(f, 0);
    let proj = q.hom_basis(&p1, &s1).remove(0);
    assert_eq!(a2.identify(&a2.kernel_obj(&p1, &proj).unwrap()).unwrap(), a2.simple(1).unwrap());
    let zero = Morphism::zero(&p1, &s1);
    assert_eq!(a2.kernel_obj(&p1, &zero).unwrap().dims(), p1.dims());
    assert!(a2.image_obj(&s1, &zero).unwrap().is_zero());
    assert_eq!(a2.cokernel_obj(&s1, &zero).unwrap().dims(), s1.dims());
    let id = Morphism::identity(&p1);
    assert!(a2.kernel_obj(&p1, &id).unwrap().is_zero());
    assert!(a2.cokernel_obj(&p1, &id).unwrap().is_zero());
}

#[test]
fn direct_sum_examples() {
    let j = cat("jordan", 3);
    let s = j.simple(0).unwrap();
    let ss = j.direct_sum(s, s).unwrap();
    assert_eq!(j.aut_order(ss).unwrap(), BigUint::from(48u32));
    assert_eq!(j.direct_sum(s, ClassId::ZERO).unwrap(), s);
    let ids = j.classes_up_to(2).unwrap();
    for &a in &ids {
        for &b in &ids {
            assert_eq!(j.direct_sum(a, b).unwrap(), j.direct_sum(b, a).unwrap());
            assert_eq!(j.dim(j.direct_sum(a, b).unwrap()).unwrap(), &j.dim(a).unwrap() + &j.dim(b).unwrap());
        }
    }
}

#[test]
fn jordan_formulas_match_brute_force() {
    for q in [2u64, 3] {
        let fast = JordanCategory::new(q, Caps::default()).unwrap();
        let slow = generic("jordan", q);
        let ids = fast.classes_up_to(4).unwrap();
        assert_eq!(slow.classes_up_to(4).unwrap().len(), ids.len());
        let to_slow: Vec<ClassId> = ids.iter().map(|&c| slow.identify(&fast.rep(c).unwrap()).unwrap()).collect();
        for (i, &a) in ids.iter().enumerate() {
            assert_eq!(fast.aut_order(a).unwrap(), slow.aut_order(to_slow[i]).unwrap(), "aut at q={q}");
            for (j, &b) in ids.iter().enumerate() {
                assert_eq!(fast.hom_dim(a, b).unwrap(), slow.hom_dim(to_slow[i], to_slow[j]).unwrap());
            }
        }
    }
}

#[test]
fn presets_and_validation() {
    assert!(QuiverSpec::preset("a1", 4).is_err());
    let cyclic = QuiverSpec { n: 2, arrows: vec![(0, 1), (1, 0)], nilpotent: false, q: 2 };
    assert!(cyclic.validate().is_err());
    let js = r#"{"vertices": 2, "arrows": [[0,1]], "nilpotent": false, "q": 3}"#;
    let spec: QuiverSpec = serde_json::from_str(js).unwrap();
    assert_eq!(spec, QuiverSpec::preset("a2", 3).unwrap());
}

#[test]
fn caps_are_enforced() {
    let caps = Caps { hom_scan: 4, ..Caps::default() };
    let a1 = QuiverCategory::new(QuiverSpec::preset("a1", 3).unwrap(), caps).unwrap();
    let k = a1.simple(0).unwrap();
    let k2 = a1.direct_sum(k, k).unwrap();
    assert!(matches!(a1.aut_order(k2), Err(Error::CapExceeded { .. })));
    assert_eq!(Caps::default().apply_overrides("hom=5, complex=7").unwrap().hom_scan, 5);
    assert!(Caps::default().apply_overrides("hom=0").is_err());
    assert!(Caps::default().apply_overrides("bogus=1").is_err());
}
