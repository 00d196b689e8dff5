use rand::Rng;

use super::HcaeConfig;
use crate::numerics::{Matrix, ParamStore};

pub const THETA1: &str = "theta1";
pub const THETA2: &str = "theta2";
pub const DECODER_W: &str = "decoder_w";

/// Weight `in × out` and bias `1 × out` of one dense layer.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub weight: Matrix,
    pub bias: Matrix,
}

/// All trainable matrices of one subject's model.
///
/// `theta1` is `M·N × hidden`, `theta2` is `hidden × latent`, `decoder_w` is
/// `latent × M·N`. The discriminator maps `latent` through the hidden widths
/// to a single logit.
#[derive(Debug, Clone, PartialEq)]
pub struct HcaeParams {
    pub theta1: Matrix,
    pub theta2: Matrix,
    pub decoder_w: Matrix,
    pub disc: Vec<DenseLayer>,
}

/// Uniform on ±√(6 / (fan_in + fan_out)).
pub fn glorot_uniform(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-limit..limit))
}

impl HcaeParams {
    pub fn init(feature_dim: usize, cfg: &HcaeConfig, rng: &mut impl Rng) -> Self {
        let theta1 = glorot_uniform(feature_dim, cfg.hidden_dim, rng);
        let theta2 = glorot_uniform(cfg.hidden_dim, cfg.latent_dim, rng);
        let decoder_w = glorot_uniform(cfg.latent_dim, feature_dim, rng);
        let mut widths = vec![cfg.latent_dim];
        widths.extend(&cfg.disc_hidden_dims);
        widths.push(1);
        let disc = widths
            .windows(2)
            .map(|w| DenseLayer {
                weight: glorot_uniform(w[0], w[1], rng),
                bias: Matrix::zeros(1, w[1]),
            })
            .collect();
        Self {
            theta1,
            theta2,
            decoder_w,
            disc,
        }
    }

    pub fn latent_dim(&self) -> usize {
        self.theta2.cols()
    }

    pub fn is_finite(&self) -> bool {
        self.theta1.is_finite()
            && self.theta2.is_finite()
            && self.decoder_w.is_finite()
            && self.disc.iter().all(|l| l.weight.is_finite() && l.bias.is_finite())
    }

    pub fn generator_names() -> [&'static str; 3] {
        [THETA1, THETA2, DECODER_W]
    }

    pub fn discriminator_names(&self) -> Vec<String> {
        (0..self.disc.len())
            .flat_map(|i| [disc_weight_name(i), disc_bias_name(i)])
            .collect()
    }

    /// Encoder and decoder matrices, for the generator optimizer.
    pub fn generator_params_mut(&mut self) -> [(&'static str, &mut Matrix); 3] {
        [
            (THETA1, &mut self.theta1),
            (THETA2, &mut self.theta2),
            (DECODER_W, &mut self.decoder_w),
        ]
    }

    pub fn discriminator_params_mut(&mut self) -> Vec<(String, &mut Matrix)> {
        self.disc
            .iter_mut()
            .enumerate()
            .flat_map(|(i, l)| {
                [
                    (disc_weight_name(i), &mut l.weight),
                    (disc_bias_name(i), &mut l.bias),
                ]
            })
            .collect()
    }
}

pub fn disc_weight_name(layer: usize) -> String {
    format!("disc.{layer}.weight")
}

pub fn disc_bias_name(layer: usize) -> String {
    format!("disc.{layer}.bias")
}

fn parse_disc_name(name: &str) -> Option<(usize, bool)> {
    let rest = name.strip_prefix("disc.")?;
    let (idx, kind) = rest.split_once('.')?;
    let idx = idx.parse().ok()?;
    match kind {
        "weight" => Some((idx, true)),
        "bias" => Some((idx, false)),
        _ => None,
    }
}

impl ParamStore for HcaeParams {
    fn param_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Self::generator_names().iter().map(|s| s.to_string()).collect();
        names.extend(self.discriminator_names());
        names
    }

    fn param(&self, name: &str) -> Option<&Matrix> {
        match name {
            THETA1 => Some(&self.theta1),
            THETA2 => Some(&self.theta2),
            DECODER_W => Some(&self.decoder_w),
            _ => {
                let (i, weight) = parse_disc_name(name)?;
                let layer = self.disc.get(i)?;
                Some(if weight { &layer.weight } else { &layer.bias })
            }
        }
    }

    fn param_mut(&mut self, name: &str) -> Option<&mut Matrix> {
        match name {
            THETA1 => Some(&mut self.theta1),
            THETA2 => Some(&mut self.theta2),
            DECODER_W => Some(&mut self.decoder_w),
            _ => {
                let (i, weight) = parse_disc_name(name)?;
                let layer = self.disc.get_mut(i)?;
                Some(if weight { &mut layer.weight } else { &mut layer.bias })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{self, Stream};

    #[test]
    fn shapes_follow_config() {
        let cfg = HcaeConfig::default();
        let p = HcaeParams::init(140, &cfg, &mut seed::rng(1, Stream::ModelInit, 0));
        assert_eq!(p.theta1.shape(), (140, 32));
        assert_eq!(p.theta2.shape(), (32, 16));
        assert_eq!(p.decoder_w.shape(), (16, 140));
        let shapes: Vec<_> = p.disc.iter().map(|l| (l.weight.shape(), l.bias.shape())).collect();
        assert_eq!(shapes, vec![((16, 64), (1, 64)), ((64, 16), (1, 16)), ((16, 1), (1, 1))]);
    }

    #[test]
    fn glorot_bounds() {
        let w = glorot_uniform(10, 20, &mut seed::rng(3, Stream::ModelInit, 0));
        let limit = (6.0f64 / 30.0).sqrt();
        assert!(w.as_slice().iter().all(|v| v.abs() < limit));
    }

    #[test]
    fn named_access_covers_every_parameter_once() {
        let cfg = HcaeConfig::default();
        let mut p = HcaeParams::init(12, &cfg, &mut seed::rng(1, Stream::ModelInit, 0));
        let names = p.param_names();
        assert_eq!(names.len(), 3 + 2 * 3);
        for n in &names {
            assert!(p.param(n).is_some(), "{n}");
            assert!(p.param_mut(n).is_some(), "{n}");
        }
        assert!(p.param("disc.9.weight").is_none());
        assert!(p.param("bogus").is_none());
    }
}
