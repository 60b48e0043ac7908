mod common;

use std::sync::Arc;

use common::{form, rng, sampled_corpus};
use contact_schwarzian::algebra::sp_basis;
use contact_schwarzian::corpus::{random_point, random_polynomial};
use contact_schwarzian::hessian::*;
use contact_schwarzian::*;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

fn rational_form(n: usize) -> SymplecticForm<Rational64> {
    SymplecticForm::standard(Dimensions::new(n).unwrap())
}

fn rational_polynomial(dim: usize, degree: usize, seed: i64) -> Polynomial<Rational64> {
    monomials::<Rational64>(dim, degree).into_iter().enumerate().fold(Polynomial::zero(dim), |acc, (k, mono)| {
        let c = Rational64::new((k as i64 * 7 + seed * 3) % 11 - 5, 1 + (k as i64 + seed) % 4);
        acc.add(&mono.scale(c))
    })
}

#[test]
fn affine_basis_is_annihilated() {
    for n in [2, 3] {
        let f = form(n);
        let mut r = rng(100 + n as u64);
        let basis = kernel_basis(&f);
        assert_eq!(basis.len(), 2 * n);
        for p in basis {
            let u = DensityField::from_polynomial(1.0, p);
            for _ in 0..5 {
                let x = random_point(&f, &mut r);
                assert!(contact_hessian(&u, &x, &f).unwrap().max_abs() < 1e-12);
            }
        }
    }
}

#[test]
fn affine_basis_is_annihilated_exactly() {
    for n in [2, 3] {
        let f = rational_form(n);
        for p in kernel_basis(&f) {
            assert!(hessian_polynomials(&p, &f).iter().all(Polynomial::is_zero));
        }
    }
}

#[test]
fn coordinate_and_frame_formulas_agree() {
    for n in [2, 3] {
        let f = form(n);
        let mut r = rng(110 + n as u64);
        for _ in 0..5 {
            let u = DensityField::from_polynomial(1.0, random_polynomial(f.manifold_dim(), 3, &mut r, 1.0));
            let x = random_point(&f, &mut r);
            let a = contact_hessian(&u, &x, &f).unwrap();
            let b = hessian_from_frames(&u, &x, &f).unwrap();
            assert!(a.sub(&b).max_abs() < 1e-12);
        }
    }
}

#[test]
fn kernel_dimension_is_two_n() {
    for n in [2, 3] {
        assert_eq!(hessian_kernel_dimension(&rational_form(n), 3, 0.0), 2 * n);
        assert_eq!(hessian_kernel_dimension(&form(n), 3, 1e-9), 2 * n);
    }
}

#[test]
fn wrong_weight_is_rejected() {
    let f = form(2);
    let u = DensityField::from_polynomial(2.0, Polynomial::constant(3, 1.0));
    assert!(matches!(contact_hessian(&u, &[0.0; 3], &f), Err(Error::Weight { .. })));
}

#[test]
fn transformed_operator_and_reconstruction() {
    for n in [2, 3] {
        for s in sampled_corpus(n, 120 + n as u64, 10, 3) {
            for x in &s.points {
                let rec = reconstruct_ratio(&s.map, x).unwrap();
                assert!(rec.kernel_residual < 1e-6, "{:?} {}", s.kind, rec.kernel_residual);
                assert!(rec.ratio_residual < 1e-10, "{:?} {}", s.kind, rec.ratio_residual);
                assert!(rec.pde_residual < 1e-6, "{:?} {}", s.kind, rec.pde_residual);
            }
        }
    }
}

#[test]
fn only_the_negative_half_weight_exponent_works() {
    for n in [2, 3] {
        let s = sampled_corpus(n, 130 + n as u64, 5, 2);
        let worst = |e: f64| {
            s.iter()
                .flat_map(|s| s.points.iter().map(|x| kernel_residual_with_exponent(&s.map, x, e).unwrap()))
                .fold(0.0, f64::max)
        };
        assert_eq!(density_exponent(1.0), -0.5);
        assert!(worst(-0.5) < 1e-8);
        for e in [0.0, 0.5, 1.0] {
            assert!(worst(e) > 1e-3, "exponent {e}");
        }
    }
}

#[test]
fn infinitesimal_action_preserves_affine_kernel() {
    for n in [2, 3] {
        let f = rational_form(n);
        for h in sp_basis(&f).generators {
            for p in kernel_basis(&f) {
                let image = infinitesimal_action(&h, Rational64::from_integer(1), &p, &f);
                assert!(hessian_polynomials(&image, &f).iter().all(Polynomial::is_zero));
            }
        }
    }
}

#[test]
fn commutator_represents_the_bracket() {
    for n in [2, 3] {
        let f = rational_form(n);
        let gens = sp_basis(&f).generators;
        let u = rational_polynomial(f.manifold_dim(), 2, n as i64);
        let sign = Rational64::from_integer(COMMUTATOR_SIGN);
        for w in [0, 1, 3] {
            let weight = Rational64::from_integer(w);
            for (i, h1) in gens.iter().enumerate() {
                for h2 in gens.iter().skip(i + 1).step_by(2) {
                    assert!(commutator_defect(h1, h2, weight, &u, &f, sign).is_zero());
                }
            }
        }
        let wrong = gens.iter().enumerate().any(|(i, h1)| {
            gens.iter().skip(i + 1).any(|h2| !commutator_defect(h1, h2, Rational64::from_integer(1), &u, &f, -sign).is_zero())
        });
        assert!(wrong);
    }
}

#[test]
fn action_field_matches_polynomial_action() {
    for n in [2, 3] {
        let f = form(n);
        let mut r = rng(140 + n as u64);
        let gens = sp_basis(&f).generators;
        for _ in 0..4 {
            let h = &gens[r.random_range(0..gens.len())];
            let p = random_polynomial(f.manifold_dim(), 3, &mut r, 1.0);
            let weight = r.random_range(-2.0..2.0);
            let exact = infinitesimal_action(h, weight, &p, &f);
            let density = DensityField::new(weight, Arc::new(p));
            let field = InfinitesimalActionField::new(h, &density, &f).into_density();
            let x = random_point(&f, &mut r);
            assert!((field.value_at(&x).unwrap() - exact.evaluate(&x)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn affine_combinations_stay_in_kernel(
        coeffs in proptest::collection::vec(-3.0f64..3.0, 6),
        x in proptest::collection::vec(-2.0f64..2.0, 5),
    ) {
        let f = form(3);
        let u = kernel_basis(&f)
            .into_iter()
            .zip(coeffs)
            .fold(Polynomial::zero(5), |acc, (p, c)| acc.add(&p.scale(c)));
        let h = contact_hessian(&DensityField::from_polynomial(1.0, u), &x, &f).unwrap();
        prop_assert!(h.max_abs() < 1e-11);
    }
}
