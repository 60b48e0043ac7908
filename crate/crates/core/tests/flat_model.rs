mod common;

use common::{form, rng, sampled_corpus};
use contact_schwarzian::corpus::sample_points;
use contact_schwarzian::flat_model::theta_at;
use contact_schwarzian::*;

#[test]
fn corpus_maps_are_contactomorphisms() {
    for n in [2, 3] {
        for s in sampled_corpus(n, 600 + n as u64, 10, 3) {
            for x in &s.points {
                let (c, res) = s.map.contact_residual(x).unwrap();
                assert!(res < 1e-9, "{:?} {res}", s.kind);
                assert!(c.abs() > 1e-6);
            }
        }
    }
}

#[test]
fn inverse_undoes_the_map() {
    for s in sampled_corpus(3, 611, 5, 2) {
        for y in &s.points {
            let x = s.map.apply(y).unwrap();
            let back = s.map.invert(y).unwrap().apply(&x).unwrap();
            let err = back.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{:?}", s.kind);
        }
    }
}

#[test]
fn conformal_factors_multiply_under_composition() {
    for s in sampled_corpus(2, 620, 6, 1).windows(2) {
        let (phi, psi) = (&s[0].map, &s[1].map);
        let comp = ContactMap64::compose(&[phi.clone(), psi.clone()]).unwrap();
        let f = form(2);
        let mut r = rng(621);
        for x in sample_points(&f, &mut r, &[psi, &comp], 2).unwrap() {
            let y = psi.apply(&x).unwrap();
            let expected = phi.conformal_factor(&y).unwrap() * psi.conformal_factor(&x).unwrap();
            assert!((comp.conformal_factor(&x).unwrap() - expected).abs() < 1e-9 * expected.abs().max(1.0));
        }
    }
}

#[test]
fn theta_has_the_standard_form() {
    let f = form(2);
    let th = theta_at(&f, &[1.0, 2.0, 3.0]);
    assert_eq!(th.len(), 3);
    assert!(th[2] != 0.0);
}

#[test]
fn map_json_roundtrip() {
    for s in sampled_corpus(3, 630, 5, 1) {
        let text = s.map.to_json().to_string();
        let back = ContactMap64::from_json_str(&text).unwrap();
        let x = &s.points[0];
        assert_eq!(back.apply(x).unwrap(), s.map.apply(x).unwrap());
    }
    assert!(matches!(ContactMap64::from_json_str("{\"n\": 2, \"map\": {\"twist\": {}}}"), Err(Error::Malformed(_))));
    assert!(ContactMap64::from_json_str("{\"n\": 1, \"map\": {\"compose\": []}}").is_err());
}

#[test]
fn non_contact_projective_map_fails_the_contact_check() {
    let mut m = Matrix64::identity(4);
    m[(3, 3)] = 2.0;
    let map = ContactMap64::projective(form(2), m).unwrap();
    let (_, res) = map.contact_residual(&[0.1, 0.2, 0.3]).unwrap();
    assert!(res > 1e-3);
}
