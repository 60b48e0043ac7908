mod common;

use common::{form, rng};
use contact_schwarzian::algebra::{frame_generator, sp_basis, sp_residual, symplectic_residual};
use contact_schwarzian::corpus::{random_sp_block, random_sp_element};
use contact_schwarzian::*;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn exponentials_of_sp_are_symplectic() {
    for n in [2, 3] {
        let f = form(n);
        let mut r = rng(500 + n as u64);
        for _ in 0..10 {
            let a = random_sp_element(&f, &mut r);
            assert!(symplectic_residual(a.matrix(), &f).unwrap() < 1e-12);
            let inv = a.inverse(&f).unwrap();
            let id = a.compose(&inv);
            assert!(id.matrix().sub(&Matrix64::identity(2 * n)).max_abs() < 1e-12);
        }
    }
}

#[test]
fn non_symplectic_matrix_is_rejected() {
    let f = form(2);
    let mut m = Matrix64::identity(4);
    m[(3, 3)] = 2.0;
    assert!(SpElement::new(m, &f, 1e-10).is_err());
}

#[test]
fn sp_blocks_roundtrip_through_matrices() {
    for n in [2, 3] {
        let f = form(n);
        let mut r = rng(510 + n as u64);
        for _ in 0..5 {
            let h = random_sp_block(&f, &mut r, 0.5);
            let g = h.to_matrix(&f);
            assert!(sp_residual(&g, &f) < 1e-14);
            let back = SpBlock::from_matrix(&g, &f);
            assert!(back.to_matrix(&f).sub(&g).max_abs() < 1e-15);
        }
    }
}

#[test]
fn basis_spans_the_algebra() {
    for n in [2, 3] {
        let f = SymplecticForm::<Rational64>::standard(Dimensions::new(n).unwrap());
        let basis = sp_basis(&f);
        assert_eq!(basis.generators.len(), n * (2 * n + 1));
        let k = 2 * n;
        let flat: Vec<Vec<Rational64>> =
            basis.generator_matrices(&f).iter().map(|g| (0..k * k).map(|i| g[(i / k, i % k)]).collect()).collect();
        assert_eq!(Matrix::from_rows(&flat).unwrap().rank(0.0), n * (2 * n + 1));
        for alpha in 0..f.manifold_dim() {
            assert!(sp_residual(&frame_generator(&f, alpha), &f) == 0.0);
        }
    }
}

#[test]
fn raise_then_lower_is_identity() {
    let f = form(3);
    let mut r = rng(520);
    let t = Tensor::from_fn(4, 3, |_| r.random_range(-1.0..1.0));
    for slot in 0..3 {
        let up = f.index_adjust(&t, slot, IndexDirection::Raise).unwrap();
        let back = f.index_adjust(&up, slot, IndexDirection::Lower).unwrap();
        assert!(back.sub(&t).max_abs() < 1e-15);
    }
    assert!(matches!(f.index_adjust(&t, 3, IndexDirection::Raise), Err(Error::SlotOutOfRange { .. })));
}

#[test]
fn dimension_below_three_is_rejected() {
    assert!(Dimensions::new(1).is_err());
    assert_eq!(Dimensions::new(3).unwrap().manifold(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn lowering_matches_covector_convention(v in proptest::collection::vec(-5.0f64..5.0, 4)) {
        let f = form(3);
        let low = f.lower(&v);
        let up = f.raise(&low);
        for (a, b) in up.iter().zip(&v) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
