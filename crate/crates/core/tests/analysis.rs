use std::collections::BTreeSet;

use num_bigint::BigInt;

use labshift::analysis::{
    density_report, flat_independence, independence_certificate, independence_certificate_with, tf_check,
    tf_check_label, tf_table, TfCandidate, TfVerdict, DEFAULT_TF_THRESHOLD,
};
use labshift::subshift::{default_partition, in_a, Mode};
use labshift::zoo::{self, ZooParams};
use labshift::{ExpandingSystem, Label, NVector};

fn chi(l: u32) -> NVector {
    NVector::chi(l)
}

fn two(l: u32) -> NVector {
    NVector::from_pairs([(l, 2)]).unwrap()
}

fn ruppert(n: i64) -> bool {
    (n >= 0 && n % 2 == 0) || (n < 0 && n % 2 != 0)
}

#[test]
fn ruppert_example() {
    let radius = 120;
    let two_n = TfCandidate::from_predicate("2N", radius, |n| n >= 0 && n % 2 == 0);
    let r = tf_check(&ruppert, radius, std::slice::from_ref(&two_n), DEFAULT_TF_THRESHOLD);
    assert_eq!(r.verdict, TfVerdict::NotTfWithWitness);
    assert_eq!(r.candidate.as_deref(), Some("2N"));
    assert_eq!(r.intersection_sizes, tf_table(&ruppert, &two_n, radius));

    // brute force: translates n with A - n ⊇ 2N ∩ [-N, N] and A - n inside the radius
    for &(nn, count) in &r.intersection_sizes {
        let b: Vec<i64> = two_n.members.iter().copied().filter(|x| x.abs() <= nn as i64).collect();
        let want = (-(radius as i64)..=radius as i64)
            .filter(|&t| b.iter().all(|&x| (x + t).abs() > radius as i64 || ruppert(x + t)))
            .count();
        assert!(count <= want, "N = {nn}");
        assert!(count >= DEFAULT_TF_THRESHOLD);
    }

    let finite = TfCandidate::new("pair", vec![0, 1]);
    let r = tf_check(&ruppert, radius, &[finite], DEFAULT_TF_THRESHOLD);
    assert_eq!(r.verdict, TfVerdict::TfOnWindow);
    assert!(r.witness_b.is_none());
}

#[test]
fn chi_atoms_pass() {
    let sys = ExpandingSystem::strict();
    let m = zoo::builtin("chiL_atoms", &ZooParams::default()).unwrap();
    let r = tf_check_label(&sys, &default_partition(), &m, 120, DEFAULT_TF_THRESHOLD).unwrap();
    assert_eq!(r.verdict, TfVerdict::TfOnWindow);
}

#[test]
fn deep_label_is_refuted_and_replayable() {
    let sys = ExpandingSystem::strict();
    let p = default_partition();
    let m = Label::generated([two(1)]);
    let r = tf_check_label(&sys, &p, &m, 40, 5).unwrap();
    assert_eq!(r.verdict, TfVerdict::NotTfWithWitness);
    assert!(r.candidate.as_deref().unwrap().starts_with("A[M - "));
    let b: Vec<i64> = r.witness_b.as_ref().unwrap().iter().map(|x| x.parse().unwrap()).collect();
    assert!(b.contains(&0));
    for x in &b {
        assert!(in_a(&sys, &p, &m.minus(&chi(1)), &BigInt::from(*x), Mode::Full).unwrap());
    }
    assert!(r.intersection_sizes.iter().all(|&(_, k)| k >= 5));
    let again = tf_check_label(&sys, &p, &m, 40, 5).unwrap();
    assert_eq!(again, r);
}

#[test]
fn ex11a_certificates() {
    for n in 1..=3 {
        let m = zoo::builtin("ex11a", &ZooParams { n: Some(n), ..Default::default() }).unwrap();
        let f: Vec<NVector> = zoo::ex11a_block_a(n).into_iter().map(chi).collect();
        let cert = independence_certificate(&m, &f, zoo::ex11a_b_start(n) + (1 << n)).unwrap().unwrap();
        assert!(cert.validate(&m).unwrap());
        let subsets: BTreeSet<Vec<NVector>> = cert.witnesses.iter().map(|w| w.a.clone()).collect();
        assert_eq!(subsets.len(), 1 << n);
        let j = serde_json::to_value(&cert).unwrap();
        assert!(j.get("F").is_some() && j["witnesses"][0].get("A").is_some());
    }
}

#[test]
fn certificate_edge_cases() {
    let m = zoo::builtin("ex8a", &ZooParams::default()).unwrap();
    let single = independence_certificate(&m, &[chi(2)], 6).unwrap().unwrap();
    assert_eq!(single.witnesses.len(), 2);
    assert!(independence_certificate(&m, &[chi(2), chi(2).add(&chi(3))], 6).is_err());
    assert!(independence_certificate(&m, &[two(2)], 6).is_err());
    let zero = Label::zero();
    assert!(independence_certificate(&zero, &[NVector::zero()], 4).unwrap().is_ok());
    let atoms = zoo::builtin("chiL_atoms", &ZooParams::default()).unwrap();
    let miss = independence_certificate_with(&atoms, &[chi(1), chi(2)], 5, 2).unwrap();
    assert!(miss.is_err());
}

#[test]
fn flat_independence_examples() {
    let full = zoo::builtin("chiL_full", &ZooParams::default()).unwrap();
    let cert = flat_independence(&full, &[1, 2, 3], 5).unwrap().unwrap();
    assert_eq!(cert.witnesses.len(), 8);
    assert!(cert.validate(&full).unwrap());

    let flat = zoo::builtin("ex11a_flat", &ZooParams::default()).unwrap();
    let a3 = zoo::ex11a_block_a(3);
    let cert = flat_independence(&flat, &a3, *a3.last().unwrap()).unwrap().unwrap();
    assert!(cert.validate(&flat).unwrap());

    let ex8a = zoo::builtin("ex8a", &ZooParams::default()).unwrap();
    let bad = flat_independence(&ex8a, &[1, 2, 3, 4], 4).unwrap().unwrap_err();
    let rho = ex8a.window_roof(4).unwrap();
    assert!(!ex8a.contains(&rho.restrict(|x| bad.contains(&x))).unwrap());
    assert!(flat_independence(&ex8a, &[9], 4).is_err());
}

#[test]
fn density_examples() {
    let sys = ExpandingSystem::paper();
    let ws: Vec<BigInt> = (3..=8).map(|e| BigInt::from(4i64.pow(e))).collect();
    let r = density_report(&sys, &ws).unwrap();
    assert!(r.all_within_bound && r.ratios_decreasing);
    assert_eq!(r.rows.len(), 6);
    let strict = density_report(&ExpandingSystem::strict(), &[BigInt::from(343), BigInt::from(2401)]).unwrap();
    assert!(strict.all_within_bound);
}
