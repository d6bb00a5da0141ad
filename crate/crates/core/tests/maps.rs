use proptest::prelude::*;
use semifield_core::biform::agree_on_basis_pairs;
use semifield_core::{make_field, BhParams, BiForm, FieldElement, FieldSpec, MulTable, PLinearMap};
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

fn f729() -> Arc<FieldSpec> {
    static F: OnceLock<Arc<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| make_field(3, 1, 3).unwrap()).clone()
}

fn f81() -> Arc<FieldSpec> {
    static F: OnceLock<Arc<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| make_field(3, 1, 2).unwrap()).clone()
}

fn map_from(f: &Arc<FieldSpec>, idx: &[u64]) -> PLinearMap {
    let coeffs = idx.iter().map(|&i| f.element(i)).collect();
    PLinearMap::new(f.clone(), coeffs).unwrap()
}

fn map_strategy(f: Arc<FieldSpec>) -> impl Strategy<Value = PLinearMap> {
    let n = f.degree();
    let order = f.order();
    prop::collection::vec(0..order, n).prop_map(move |idx| map_from(&f, &idx))
}

fn form_strategy(f: Arc<FieldSpec>) -> impl Strategy<Value = BiForm> {
    let n = f.degree() as i64;
    let order = f.order();
    prop::collection::vec((0..n, 0..n, 0..order), 0..8).prop_map(move |ts| {
        BiForm::from_terms(&f, ts.into_iter().map(|(i, j, c)| (i, j, f.element(c))))
    })
}

fn elem(f: Arc<FieldSpec>) -> impl Strategy<Value = FieldElement> {
    let order = f.order();
    (0..order).prop_map(move |i| f.element(i))
}

#[test]
fn frobenius_monomials() {
    let f = f729();
    let id = PLinearMap::identity(&f);
    assert_eq!(id.to_matrix(), semifield_core::fp::FpMatrix::identity(6, 3));
    assert_eq!(PLinearMap::zero(&f).to_matrix(), semifield_core::fp::FpMatrix::zero(6, 3));
    assert!(!PLinearMap::zero(&f).is_permutation());
    for a in 0..6 {
        for b in 0..6 {
            let x = PLinearMap::monomial(&f, f.one(), a);
            let y = PLinearMap::monomial(&f, f.one(), b);
            assert_eq!(x.compose(&y), PLinearMap::monomial(&f, f.one(), (a + b) % 6));
        }
        let x = PLinearMap::monomial(&f, f.one(), a);
        assert_eq!(x.invert().unwrap(), PLinearMap::monomial(&f, f.one(), (6 - a) % 6));
    }
    assert_eq!(id.invert().unwrap(), id);
}

#[test]
fn half_trace_map_is_singular() {
    let f = f729();
    let mut t = PLinearMap::identity(&f);
    t.add_term(f.one(), 3);
    assert!(!t.is_permutation());
    let omega = f.canonical_constants().omega;
    assert!(t.eval(&omega).is_zero());
}

#[test]
fn rank_agrees_with_image_size() {
    let f = f81();
    let mut seed = 17u64;
    for _ in 0..30 {
        let idx: Vec<u64> = (0..4)
            .map(|k| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                // sparse maps are singular more often
                if (seed >> 60).is_multiple_of(3) {
                    0
                } else {
                    (seed >> 20) % 81 + k
                }
            })
            .map(|v| v % 81)
            .collect();
        let m = map_from(&f, &idx);
        let image: BTreeSet<FieldElement> = f.elements().map(|x| m.eval(&x)).collect();
        assert_eq!(m.is_permutation(), image.len() == 81);
        assert_eq!(3usize.pow(m.to_matrix().rank() as u32), image.len());
    }
}

#[test]
fn bh_form_shape_and_exhaustive_agreement() {
    let f = f729();
    let p = BhParams::canonical(&f, 2).unwrap();
    let b = p.form();
    assert_eq!(b.len(), 6);
    assert!(b.is_symmetric());
    let table = MulTable::build(&p, 1 << 16).unwrap();
    for ix in 0..f.order() {
        let x = f.element(ix);
        for iy in 0..f.order() {
            let y = f.element(iy);
            let v = b.eval(&x, &y);
            assert_eq!(f.index_of(&v) as u32, table.get(ix, iy));
            if iy % 37 == 0 {
                assert_eq!(v, p.mul(&x, &y));
            }
        }
    }
}

#[test]
fn form_equality_matches_exhaustive_evaluation() {
    let f = f81();
    let base = BhParams::canonical(&f, 1).unwrap().form();
    let mut other = base.clone();
    other.add_term(0, 1, f.one());
    assert_ne!(base, other);
    let same = base.add(&BiForm::zero(&f));
    assert_eq!(base, same);
    let all_equal = |a: &BiForm, b: &BiForm| {
        f.elements().all(|x| f.elements().all(|y| a.eval(&x, &y) == b.eval(&x, &y)))
    };
    assert!(all_equal(&base, &same));
    assert!(!all_equal(&base, &other));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_associative_and_matches_matrices(
        a in map_strategy(f729()),
        b in map_strategy(f729()),
        c in map_strategy(f729()),
        x in elem(f729()),
    ) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).to_matrix(), a.to_matrix().mul(&b.to_matrix()));
        prop_assert_eq!(a.compose(&b).eval(&x), a.eval(&b.eval(&x)));
        let id = PLinearMap::identity(&f729());
        prop_assert_eq!(id.compose(&a), a.clone());
        prop_assert_eq!(a.compose(&id), a);
    }

    #[test]
    fn maps_are_additive(a in map_strategy(f729()), x in elem(f729()), y in elem(f729())) {
        let f = f729();
        prop_assert_eq!(a.eval(&f.add(&x, &y)), f.add(&a.eval(&x), &a.eval(&y)));
    }

    #[test]
    fn invert_is_two_sided(a in map_strategy(f729())) {
        let f = f729();
        if a.is_permutation() {
            let inv = a.invert().unwrap();
            let id = PLinearMap::identity(&f);
            prop_assert_eq!(a.compose(&inv), id.clone());
            prop_assert_eq!(inv.compose(&a), id);
            for k in 0..6 {
                prop_assert_eq!(a.eval(&inv.eval(&f.basis(k))), f.basis(k));
            }
        } else {
            prop_assert!(a.invert().is_err());
        }
    }

    #[test]
    fn matrix_round_trip(a in map_strategy(f729())) {
        let f = f729();
        prop_assert_eq!(PLinearMap::from_matrix(&f, &a.to_matrix()).unwrap(), a);
    }

    #[test]
    fn form_operations_match_pointwise(
        b in form_strategy(f729()),
        m in map_strategy(f729()),
        mx in map_strategy(f729()),
        my in map_strategy(f729()),
        x in elem(f729()),
        y in elem(f729()),
    ) {
        let f = f729();
        let left = b.apply_left(&m).unwrap();
        prop_assert_eq!(left.eval(&x, &y), m.eval(&b.eval(&x, &y)));
        let sub = b.substitute(&mx, &my).unwrap();
        prop_assert_eq!(sub.eval(&x, &y), b.eval(&mx.eval(&x), &my.eval(&y)));
        let id = PLinearMap::identity(&f);
        prop_assert_eq!(b.apply_left(&id).unwrap(), b.clone());
        prop_assert_eq!(b.substitute(&id, &id).unwrap(), b.clone());
        prop_assert_eq!(b.fix_right(&y).eval(&x), b.eval(&x, &y));
        prop_assert_eq!(b.fix_left(&x).eval(&y), b.eval(&x, &y));
        prop_assert_eq!(b.basis_table().eval(&x, &y), b.eval(&x, &y));
    }

    #[test]
    fn forms_are_bilinear(b in form_strategy(f729()), x in elem(f729()), x2 in elem(f729()), y in elem(f729())) {
        let f = f729();
        prop_assert_eq!(b.eval(&f.add(&x, &x2), &y), f.add(&b.eval(&x, &y), &b.eval(&x2, &y)));
        prop_assert_eq!(b.eval(&y, &f.add(&x, &x2)), f.add(&b.eval(&y, &x), &b.eval(&y, &x2)));
        prop_assert_eq!(b.eval(&f.zero(), &y), f.zero());
    }

    #[test]
    fn equality_iff_basis_agreement(a in form_strategy(f729()), b in form_strategy(f729())) {
        let f = f729();
        let eq = a == b;
        prop_assert_eq!(eq, agree_on_basis_pairs(|x, y| a.eval(x, y), |x, y| b.eval(x, y), &f));
        prop_assert!(agree_on_basis_pairs(|x, y| a.eval(x, y), |x, y| a.eval(x, y), &f));
        let c = BiForm::from_terms(&f, a.terms().map(|(i, j, c)| (i as i64, j as i64, c)));
        prop_assert_eq!(c, a);
    }
}
