use proptest::prelude::*;
use semifield_core::isotopy::{
    build_beta_change, build_d_reflection, build_l_minus_d, build_l_minus_d_parts, build_omega_change,
    enumerate_strong_autotopisms, search_strong_isotopism_monomial,
};
use semifield_core::nuclei::nucleus_report;
use semifield_core::{census, make_field, BhParams, Error, FieldSpec, IsotopismCert, Level, PLinearMap};
use std::sync::{Arc, OnceLock};

fn f729() -> Arc<FieldSpec> {
    static F: OnceLock<Arc<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| make_field(3, 1, 3).unwrap()).clone()
}

fn f5_8() -> Arc<FieldSpec> {
    static F: OnceLock<Arc<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| make_field(5, 1, 4).unwrap()).clone()
}

#[test]
fn identity_triple_verifies() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let id = PLinearMap::identity(p.spec());
    let c = IsotopismCert::new(p.clone(), p, id.clone(), id.clone(), id, Level::Presemifield);
    assert!(c.strong());
    assert!(c.verify().unwrap());
    assert!(c.verify_basis_pairs().unwrap());
}

#[test]
fn perturbed_coefficient_fails() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let f = p.spec();
    let c = build_d_reflection(&p).unwrap();
    for e in 0..6 {
        let mut l = c.l().clone();
        l.add_term(f.gamma(), e);
        let bad = IsotopismCert::new(c.src().clone(), c.dst().clone(), c.m().clone(), c.n().clone(), l, Level::Presemifield);
        assert!(!bad.verify().unwrap());
        assert!(!bad.verify_basis_pairs().unwrap());
    }
}

#[test]
fn beta_change_in_f729() {
    let f = f729();
    let k = f.canonical_constants();
    let c = build_beta_change(&f, 2, k.beta, f.gamma_pow(3), k.omega).unwrap();
    assert!(c.verify().unwrap());
    assert!(c.verify_basis_pairs().unwrap());
    assert_eq!(c.dst().beta(), &f.gamma_pow(3));
    let same = build_beta_change(&f, 2, k.beta, k.beta, k.omega).unwrap();
    assert_eq!(same.n(), &PLinearMap::identity(&f));
}

#[test]
fn omega_change_in_f729() {
    let f = f729();
    let k = f.canonical_constants();
    // ω' = cω with c ∈ F_{q^l}
    let c = f.gamma_pow(28 * 5);
    let w2 = f.mul(&c, &k.omega);
    let cert = build_omega_change(&f, 2, k.beta, k.omega, w2).unwrap();
    assert!(cert.verify_basis_pairs().unwrap());
    assert!(build_omega_change(&f, 2, k.beta, k.omega, f.one()).is_err());
}

#[test]
fn certificates_chain() {
    let f = f729();
    let k = f.canonical_constants();
    let a = build_beta_change(&f, 2, k.beta, f.gamma_pow(5), k.omega).unwrap();
    let b = build_d_reflection(a.dst()).unwrap();
    let ab = a.compose(&b).unwrap();
    assert_eq!(ab.src(), a.src());
    assert_eq!(ab.dst().d(), 4);
    assert!(ab.verify().unwrap());
    let back = ab.inverse().unwrap();
    assert!(back.verify().unwrap());
    let round = ab.compose(&back).unwrap();
    assert_eq!(round.src(), round.dst());
    assert!(round.verify().unwrap());
    assert!(matches!(a.compose(&a), Err(Error::InvalidParams(_))));
}

#[test]
fn reflection_twice_is_an_autotopism() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let c = build_d_reflection(&p).unwrap();
    assert_eq!(c.dst().d(), 4);
    let c2 = build_d_reflection(c.dst()).unwrap();
    let loop_ = c.compose(&c2).unwrap();
    assert_eq!(loop_.src(), &p);
    assert_eq!(loop_.dst(), &p);
    assert!(loop_.verify().unwrap());
    let autos = enumerate_strong_autotopisms(&p).unwrap();
    assert!(autos.contains(&loop_));
}

#[test]
fn reflection_preserves_nucleus_sizes() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let c = build_d_reflection(&p).unwrap();
    let a = nucleus_report(c.src(), Some(1 << 16)).unwrap();
    let b = nucleus_report(c.dst(), Some(1 << 16)).unwrap();
    assert_eq!((a.center.len(), a.middle.len()), (b.center.len(), b.middle.len()));
}

#[test]
fn l_minus_d_for_q5_l4() {
    let f = f5_8();
    let parts = build_l_minus_d_parts(&f, 1).unwrap();
    let c = &parts.cert;
    assert_eq!(c.level(), Level::Semifield);
    assert!(!c.strong());
    assert_eq!(c.src().d(), 3);
    assert_eq!(c.dst().d(), 1);
    assert!(c.verify().unwrap());
    assert!(c.verify_basis_pairs().unwrap());
    assert!(parts.l_prime.is_permutation());
    assert!(parts.n_prime.is_permutation());
    assert_eq!(f.frobenius_q(&parts.xi, 1), f.neg(&parts.xi));
    // the same isotopism between the presemifields
    let pre = c.to_presemifield().unwrap();
    assert!(pre.verify().unwrap());
    assert!(pre.verify_basis_pairs().unwrap());
    // and in the other direction
    assert!(c.inverse().unwrap().verify().unwrap());
    let other = build_l_minus_d(&f, 3).unwrap();
    assert_eq!(other.src().d(), 1);
    assert!(other.verify().unwrap());
    let a = nucleus_report(c.src(), None).unwrap();
    let b = nucleus_report(c.dst(), None).unwrap();
    assert_eq!((a.center.len(), a.middle.len()), (b.center.len(), b.middle.len()));
}

#[test]
fn merged_classes_have_witnesses() {
    let f = f5_8();
    let cs = census::census(5, 4).unwrap();
    for class in cs.merged() {
        let c = build_l_minus_d(&f, class[0]).unwrap();
        assert!(c.verify().unwrap());
    }
}

#[test]
fn l_minus_d_rejections() {
    assert_eq!(build_l_minus_d(&make_field(3, 1, 4).unwrap(), 1).unwrap_err(), Error::WrongResidue);
    assert_eq!(build_l_minus_d(&make_field(5, 1, 3).unwrap(), 2).unwrap_err(), Error::OddL);
    assert_eq!(build_l_minus_d(&make_field(5, 1, 2).unwrap(), 1).unwrap_err(), Error::OddL);
}

#[test]
fn autotopism_counts() {
    for (p, h, l, d) in [(3u64, 1u32, 2u32, 1u64), (3, 1, 2, 3), (3, 1, 3, 2), (3, 1, 3, 4), (5, 1, 2, 1), (7, 1, 2, 1), (3, 2, 2, 1)] {
        let f = make_field(p, h, l).unwrap();
        let bh = BhParams::canonical(&f, d).unwrap();
        let all = enumerate_strong_autotopisms(&bh).unwrap();
        let q = p.pow(h);
        let expected = census::strong_autotopism_order(q, h as u64, l as u64).unwrap();
        assert_eq!(all.len() as u128, expected, "BH({q}, {l}, {d})");
        assert!(all.iter().all(|c| c.strong() && c.n().is_monomial()));
    }
}

#[test]
fn autotopisms_with_other_constants() {
    // the count does not depend on β or ω
    let f = f729();
    let k = f.canonical_constants();
    let w = f.mul(&f.gamma_pow(28 * 3), &k.omega);
    let bh = BhParams::new(f.clone(), 2, f.gamma_pow(11), w).unwrap();
    let all = enumerate_strong_autotopisms(&bh).unwrap();
    assert_eq!(all.len(), 312);
    assert!(all.iter().all(|c| c.verify_basis_pairs().unwrap()));
}

#[test]
fn search_agrees_with_enumeration() {
    for (p, l, d) in [(3u64, 2u32, 1u64), (3, 3, 2), (5, 2, 1)] {
        let f = make_field(p, 1, l).unwrap();
        let bh = BhParams::canonical(&f, d).unwrap();
        let found = search_strong_isotopism_monomial(&bh, &bh).unwrap();
        assert_eq!(found, enumerate_strong_autotopisms(&bh).unwrap());
    }
}

#[test]
fn search_finds_the_reflection() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let r = p.with_d(4).unwrap();
    let found = search_strong_isotopism_monomial(&p, &r).unwrap();
    assert_eq!(found.len(), 312);
    let refl = build_d_reflection(&p).unwrap();
    assert!(found.contains(&refl));
    assert!(found.iter().all(|c| c.verify_basis_pairs().unwrap()));
}

#[test]
fn search_guard_and_mismatch() {
    let a = BhParams::canonical(&f729(), 2).unwrap();
    let b = BhParams::canonical(&make_field(3, 1, 4).unwrap(), 1).unwrap();
    assert_eq!(search_strong_isotopism_monomial(&a, &b).unwrap_err(), Error::SpecMismatch);
    let big = BhParams::canonical(&make_field(3, 1, 7).unwrap(), 2).unwrap();
    assert!(matches!(
        search_strong_isotopism_monomial(&big, &big),
        Err(Error::SizeGuard { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn beta_change_any_nonsquares(a in 0u64..364, b in 0u64..364) {
        let f = f729();
        let k = f.canonical_constants();
        let (beta, beta2) = (f.gamma_pow(2 * a + 1), f.gamma_pow(2 * b + 1));
        let c = build_beta_change(&f, 2, beta, beta2, k.omega).unwrap();
        prop_assert!(c.verify_basis_pairs().unwrap());
        let back = build_beta_change(&f, 2, beta2, beta, k.omega).unwrap();
        prop_assert!(c.compose(&back).unwrap().verify().unwrap());
        prop_assert!(c.inverse().unwrap().verify().unwrap());
    }

    #[test]
    fn composed_autotopisms_verify(i in 0usize..312, j in 0usize..312) {
        static AUTOS: OnceLock<Vec<IsotopismCert>> = OnceLock::new();
        let autos = AUTOS.get_or_init(|| {
            enumerate_strong_autotopisms(&BhParams::canonical(&f729(), 2).unwrap()).unwrap()
        });
        let c = autos[i].compose(&autos[j]).unwrap();
        prop_assert!(c.verify().unwrap());
        prop_assert!(autos.contains(&c));
    }
}
