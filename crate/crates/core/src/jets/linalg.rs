use super::jet::Jet;
use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Field;

pub type JetMatrix<T> = Vec<Vec<Jet<T>>>;

pub fn jet_matmul<T: Field>(a: &JetMatrix<T>, b: &JetMatrix<T>) -> JetMatrix<T> {
    let n = b.len();
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| {
                    let mut acc = &row[0] * &b[0][j];
                    for k in 1..n {
                        acc += &(&row[k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn jet_matrix_values<T: Field>(a: &JetMatrix<T>) -> Matrix<T> {
    Matrix::from_fn(a.len(), a[0].len(), |i, j| a[i][j].value())
}

/// Inverse of a square matrix of jets.
///
/// The value-level inverse is refined by Newton steps `B ← B(2I − AB)`,
/// each of which doubles the number of correct jet orders.
pub fn jet_matrix_inverse<T: Field>(a: &JetMatrix<T>) -> Result<JetMatrix<T>> {
    let n = a.len();
    let inv0 = jet_matrix_values(a).inverse()?;
    let proto = &a[0][0];
    let mut b: JetMatrix<T> =
        (0..n).map(|i| (0..n).map(|j| proto.constant_like(inv0[(i, j)])).collect()).collect();
    let mut correct = 0usize;
    while correct < proto.order() {
        let ab = jet_matmul(a, &b);
        let two_minus: JetMatrix<T> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { T::from_i64(2) } else { T::zero() };
                        -(&ab[i][j]) + d
                    })
                    .collect()
            })
            .collect();
        b = jet_matmul(&b, &two_minus);
        correct = 2 * correct + 1;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_jet_matrix() {
        let x = Jet::coordinates(&[0.3, -0.2], 4);
        let a: JetMatrix<f64> = vec![
            vec![x[0].add_scalar(2.0), &x[0] * &x[1]],
            vec![x[1].powi(3), (&x[0] * &x[0]).add_scalar(1.5)],
        ];
        let b = jet_matrix_inverse(&a).unwrap();
        let p = jet_matmul(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                let e = p[i][j].add_scalar(-target).max_coeff_magnitude();
                assert!(e < 1e-13, "entry ({i},{j}) off by {e}");
            }
        }
    }
}
