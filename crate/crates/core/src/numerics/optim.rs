use std::collections::BTreeMap;

use super::{GradientBundle, Matrix};
use crate::error::{Error, Result};

pub const BETA1: f64 = 0.9;
pub const BETA2: f64 = 0.999;
pub const EPSILON: f64 = 1e-8;

/// Adaptive moment estimation state for a fixed set of named parameters.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    step: u64,
    moments: BTreeMap<String, (Matrix, Matrix)>,
}

impl Adam {
    pub fn new(lr: f64) -> Result<Self> {
        if !(lr > 0.0 && lr.is_finite()) {
            return Err(Error::Parameter(format!("learning rate must be > 0, got {lr}")));
        }
        Ok(Self {
            lr,
            step: 0,
            moments: BTreeMap::new(),
        })
    }

    pub fn lr(&self) -> f64 {
        self.lr
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// Applies one update to every parameter yielded by `params`, each of
    /// which must have a gradient in `grads`. Gradients are validated before
    /// any parameter is touched.
    pub fn step<'a, S, I>(&mut self, params: I, grads: &GradientBundle) -> Result<()>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (S, &'a mut Matrix)>,
    {
        let params: Vec<_> = params.into_iter().collect();
        for (name, p) in &params {
            let name = name.as_ref();
            let g = grads
                .grads
                .get(name)
                .ok_or_else(|| Error::training(format!("missing gradient for {name}")))?;
            if g.shape() != p.shape() {
                return Err(Error::Shape {
                    op: "adam_step",
                    left: p.shape(),
                    right: g.shape(),
                });
            }
            if !g.is_finite() {
                return Err(Error::training(format!("non-finite gradient for {name}")));
            }
        }

        self.step += 1;
        let t = self.step as i32;
        let bias1 = 1.0 - BETA1.powi(t);
        let bias2 = 1.0 - BETA2.powi(t);
        for (name, p) in params {
            let name = name.as_ref();
            let g = &grads.grads[name];
            let (m, v) = self
                .moments
                .entry(name.to_string())
                .or_insert_with(|| (Matrix::zeros(p.rows(), p.cols()), Matrix::zeros(p.rows(), p.cols())));
            let m = m.as_mut_slice();
            let v = v.as_mut_slice();
            for (i, (w, &gi)) in p.as_mut_slice().iter_mut().zip(g.as_slice()).enumerate() {
                m[i] = BETA1 * m[i] + (1.0 - BETA1) * gi;
                v[i] = BETA2 * v[i] + (1.0 - BETA2) * gi * gi;
                let m_hat = m[i] / bias1;
                let v_hat = v[i] / bias2;
                *w -= self.lr * m_hat / (v_hat.sqrt() + EPSILON);
            }
        }
        Ok(())
    }
}
