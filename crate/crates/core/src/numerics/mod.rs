//! Dense matrices, gradient bookkeeping, finite-difference checking and the
//! adaptive optimizer used for training.

mod gradcheck;
mod matrix;
mod optim;

use std::collections::BTreeMap;

pub use gradcheck::{grad_check, relative_error, GradCheckReport};
pub use matrix::{relu, sigmoid, softplus, Matrix};
pub use optim::Adam;

/// A scalar loss together with its gradient for each named parameter.
#[derive(Debug, Clone, Default)]
pub struct GradientBundle {
    pub loss: f64,
    pub grads: BTreeMap<String, Matrix>,
}

/// Named access to trainable matrices.
pub trait ParamStore {
    fn param_names(&self) -> Vec<String>;
    fn param(&self, name: &str) -> Option<&Matrix>;
    fn param_mut(&mut self, name: &str) -> Option<&mut Matrix>;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-10.0f64..10.0, rows * cols)
            .prop_map(move |v| Matrix::from_vec(rows, cols, v).unwrap())
    }

    proptest! {
        #[test]
        fn matmul_is_associative((a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6)
            .prop_flat_map(|(m, n, p, q)| (matrix(m, n), matrix(n, p), matrix(p, q))))
        {
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            let scale = left.as_slice().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-10 * scale);
        }

        #[test]
        fn activations_stay_finite(v in proptest::collection::vec(-700.0f64..700.0, 1..50)) {
            let m = Matrix::from_vec(1, v.len(), v).unwrap();
            prop_assert!(m.sigmoid().is_finite());
            prop_assert!(m.relu().is_finite());
            prop_assert!(m.sigmoid().as_slice().iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }
}
