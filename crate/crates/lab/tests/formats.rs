use proptest::prelude::*;
use semifield_core::bh::DEFAULT_TABLE_GUARD;
use semifield_core::isotopy::{build_d_reflection, build_l_minus_d};
use semifield_core::{make_field, BhParams, FieldSpec, MulTable, PLinearMap};
use semifield_lab::formats::*;
use std::sync::{Arc, OnceLock};

fn f729() -> Arc<FieldSpec> {
    static F: OnceLock<Arc<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| make_field(3, 1, 3).unwrap()).clone()
}

fn through_json<T: serde::Serialize + serde::de::DeserializeOwned>(v: &T) -> T {
    serde_json::from_str(&to_json(v, false).unwrap()).unwrap()
}

#[test]
fn field_round_trip() {
    for (p, h, l) in [(3, 1, 1), (3, 2, 1), (3, 1, 3), (5, 1, 4), (3, 2, 2)] {
        let f = make_field(p, h, l).unwrap();
        let j = FieldSpecJson::from_spec(&f);
        let back = through_json(&j).to_spec().unwrap();
        assert_eq!(back.modulus(), f.modulus());
        assert_eq!(back.gamma(), f.gamma());
        assert_eq!(FieldSpecJson::from_spec(&back), j);
    }
}

#[test]
fn f9_json_shape() {
    let f = make_field(3, 1, 1).unwrap();
    let v: serde_json::Value = serde_json::from_str(&to_json(&FieldSpecJson::from_spec(&f), false).unwrap()).unwrap();
    assert_eq!(v["modulus"], serde_json::json!([1, 0, 1]));
    assert_eq!(v["p"], 3);
}

#[test]
fn bad_field_is_rejected() {
    let f = make_field(3, 1, 1).unwrap();
    let mut j = FieldSpecJson::from_spec(&f);
    j.modulus = vec![2, 0, 1]; // x^2 + 2 = (x - 1)(x + 1)
    assert!(j.to_spec().is_err());
    let mut j = FieldSpecJson::from_spec(&f);
    j.gamma = vec![1, 0]; // 1 is not primitive
    assert!(j.to_spec().is_err());
    let mut j = FieldSpecJson::from_spec(&f);
    j.modulus = vec![1, 0, 2];
    assert!(j.to_spec().is_err());
}

#[test]
fn element_length_is_checked() {
    let f = f729();
    assert!(element_from_json(&f, &[1, 2]).is_err());
    let x = f.gamma_pow(100);
    assert_eq!(element_from_json(&f, &element_to_json(&f, &x)).unwrap(), x);
}

#[test]
fn params_and_form_round_trip() {
    let f = f729();
    let p = BhParams::canonical(&f, 2).unwrap();
    let j = through_json(&BhParamsJson::from_params(&p));
    assert_eq!(j.to_params().unwrap(), p);
    let form = p.form();
    assert_eq!(through_json(&BiFormJson::from_form(&form)).to_form(&f).unwrap(), form);
    let other = make_field(3, 1, 4).unwrap();
    assert!(j.to_params_in(&other).is_err());
    let mut bad = j.clone();
    bad.d = 3;
    assert!(bad.to_params().is_err());
}

#[test]
fn form_exponent_range_is_checked() {
    let f = f729();
    let j = BiFormJson {
        terms: vec![TermJson { i: 6, j: 0, c: element_to_json(&f, &f.one()) }],
    };
    assert!(j.to_form(&f).is_err());
}

#[test]
fn certificate_round_trip() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let c = build_d_reflection(&p).unwrap();
    let j = through_json(&CertJson::from_cert(&c));
    let back = j.to_cert().unwrap();
    assert_eq!(back, c);
    assert!(back.verify().unwrap());

    let lmd = build_l_minus_d(&make_field(5, 1, 4).unwrap(), 1).unwrap();
    let back = through_json(&CertJson::from_cert(&lmd)).to_cert().unwrap();
    assert_eq!(back, lmd);
    assert!(back.verify().unwrap());
}

#[test]
fn certificate_keys_and_default_level() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let c = build_d_reflection(&p).unwrap();
    let mut v = serde_json::to_value(CertJson::from_cert(&c)).unwrap();
    for k in ["src", "dst", "M", "N", "L", "strong", "level"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["level"], "presemifield");
    v.as_object_mut().unwrap().remove("level");
    let j: CertJson = serde_json::from_value(v).unwrap();
    assert_eq!(j.to_cert().unwrap(), c);
}

#[test]
fn tampered_certificate_loads_but_fails() {
    let f = f729();
    let p = BhParams::canonical(&f, 2).unwrap();
    let c = build_d_reflection(&p).unwrap();
    let mut j = CertJson::from_cert(&c);
    j.l.coeffs[1] = element_to_json(&f, &f.gamma());
    let bad = j.to_cert().unwrap();
    assert!(!bad.verify().unwrap());
}

#[test]
fn table_round_trip_is_bit_identical() {
    let p = BhParams::canonical(&f729(), 2).unwrap();
    let t = MulTable::build(&p, DEFAULT_TABLE_GUARD).unwrap();
    let mut bytes = Vec::new();
    write_table(&mut bytes, &t).unwrap();
    assert_eq!(&bytes[..4], TABLE_MAGIC);
    assert_eq!(bytes[4], TABLE_VERSION);
    assert_eq!(u16::from_le_bytes([bytes[5], bytes[6]]), 3);
    assert_eq!(bytes[7], 6);
    assert_eq!(bytes.len(), 8 + 729 * 729 * 2);
    let back = read_table(&mut bytes.as_slice()).unwrap();
    assert_eq!(back.entries(), t.entries());
    let mut again = Vec::new();
    write_table(&mut again, &back).unwrap();
    assert_eq!(again, bytes);
}

#[test]
fn table_header_and_length_are_checked() {
    let p = BhParams::canonical(&make_field(3, 1, 2).unwrap(), 1).unwrap();
    let t = MulTable::build(&p, DEFAULT_TABLE_GUARD).unwrap();
    let mut bytes = Vec::new();
    write_table(&mut bytes, &t).unwrap();
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(read_table(&mut bad.as_slice()), Err(FormatError::Table(_))));
    let mut bad = bytes.clone();
    bad[4] = 9;
    assert!(matches!(read_table(&mut bad.as_slice()), Err(FormatError::Table(_))));
    let short = &bytes[..bytes.len() - 1];
    assert!(read_table(&mut &short[..]).is_err());
    assert!(read_table(&mut &bytes[..5]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn maps_round_trip(idx in prop::collection::vec(0u64..729, 6)) {
        let f = f729();
        let m = PLinearMap::new(f.clone(), idx.iter().map(|&i| f.element(i)).collect()).unwrap();
        let j = through_json(&PLinearMapJson::from_map(&m));
        prop_assert_eq!(j.to_map(&f).unwrap(), m);
    }

    #[test]
    fn elements_round_trip(i in 0u64..6561) {
        let f = make_field(3, 1, 4).unwrap();
        let x = f.element(i);
        prop_assert_eq!(element_from_json(&f, &element_to_json(&f, &x)).unwrap(), x);
    }
}
