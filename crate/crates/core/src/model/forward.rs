//! Forward passes, losses and their hand-derived adjoints.
//!
//! Encoder: `Y1 = relu(Δ X Θ1)`, `Z = Δ Y1 Θ2`.
//! Decoder: `P = σ(Z W)`, read as Bernoulli probabilities of the incidence.
//! Discriminator: dense relu layers ending in one linear logit.

use std::collections::BTreeMap;

use super::params::{disc_bias_name, disc_weight_name, DenseLayer, HcaeParams, DECODER_W, THETA1, THETA2};
use crate::error::{Error, Result};
use crate::hypergraph::{propagation_operator, Hyperconnectome, StackedFeatures};
use crate::numerics::{sigmoid, softplus, GradientBundle, Matrix};

/// Probabilities are clamped to `[PROB_CLAMP, 1 - PROB_CLAMP]` before logs.
pub const PROB_CLAMP: f64 = 1e-7;

/// Per-subject constants: Δ, the pre-propagated features `Δ X`, and the
/// incidence the decoder reconstructs.
#[derive(Debug, Clone)]
pub struct SubjectGraph {
    delta: Matrix,
    propagated: Matrix,
    target: Matrix,
}

impl SubjectGraph {
    pub fn new(features: &StackedFeatures, h: &Hyperconnectome) -> Result<Self> {
        let delta = propagation_operator(h)?;
        Self::with_operator(delta, features.values(), h.incidence().clone())
    }

    /// Uses an arbitrary square operator in place of Δ.
    pub fn with_operator(delta: Matrix, features: &Matrix, target: Matrix) -> Result<Self> {
        let propagated = delta.matmul(features)?;
        if target.shape() != features.shape() {
            return Err(Error::Shape {
                op: "subject_graph",
                left: target.shape(),
                right: features.shape(),
            });
        }
        Ok(Self {
            delta,
            propagated,
            target,
        })
    }

    pub fn delta(&self) -> &Matrix {
        &self.delta
    }

    pub fn target(&self) -> &Matrix {
        &self.target
    }

    pub fn n_nodes(&self) -> usize {
        self.delta.rows()
    }

    pub fn feature_dim(&self) -> usize {
        self.target.cols()
    }
}

struct EncoderTrace {
    pre1: Matrix,
    smoothed: Matrix,
    z: Matrix,
}

fn encoder_forward(graph: &SubjectGraph, params: &HcaeParams) -> Result<EncoderTrace> {
    let pre1 = graph.propagated.matmul(&params.theta1)?;
    let smoothed = graph.delta.matmul(&pre1.relu())?;
    let z = smoothed.matmul(&params.theta2)?;
    Ok(EncoderTrace {
        pre1,
        smoothed,
        z,
    })
}

/// Latent embedding `Z` (`N × latent`) of one subject.
pub fn encode(features: &StackedFeatures, h: &Hyperconnectome, params: &HcaeParams) -> Result<Matrix> {
    encode_graph(&SubjectGraph::new(features, h)?, params)
}

pub fn encode_graph(graph: &SubjectGraph, params: &HcaeParams) -> Result<Matrix> {
    Ok(encoder_forward(graph, params)?.z)
}

/// Reconstruction probabilities `σ(Z W)`, shaped like the incidence.
pub fn decode(z: &Matrix, params: &HcaeParams) -> Result<Matrix> {
    Ok(z.matmul(&params.decoder_w)?.sigmoid())
}

/// Mean binary cross-entropy between clamped probabilities and the incidence.
pub fn reconstruction_loss(probs: &Matrix, h: &Hyperconnectome) -> Result<f64> {
    bernoulli_cross_entropy(probs, h.incidence())
}

/// Mean binary cross-entropy of clamped `probs` against a 0/1 `target`.
pub fn bernoulli_cross_entropy(probs: &Matrix, target: &Matrix) -> Result<f64> {
    if probs.shape() != target.shape() {
        return Err(Error::Shape {
            op: "reconstruction_loss",
            left: probs.shape(),
            right: target.shape(),
        });
    }
    let terms = probs.as_slice().iter().zip(target.as_slice()).map(|(&p, &t)| {
        let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        -(t * p.ln() + (1.0 - t) * (1.0 - p).ln())
    });
    Ok(running_mean(terms))
}

/// Incremental mean; exact when every term is equal.
fn running_mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut mean = 0.0;
    for (i, v) in values.enumerate() {
        mean += (v - mean) / (i + 1) as f64;
    }
    mean
}

struct DiscTrace {
    /// Input of every layer; `inputs[0]` is the sample batch.
    inputs: Vec<Matrix>,
    /// Pre-activation of every layer; the last one holds the logits.
    pre: Vec<Matrix>,
}

fn disc_forward(samples: &Matrix, layers: &[DenseLayer]) -> Result<DiscTrace> {
    let expected = layers.first().map_or(0, |l| l.weight.rows());
    if samples.cols() != expected {
        return Err(Error::Shape {
            op: "discriminator_forward",
            left: samples.shape(),
            right: (expected, 1),
        });
    }
    let mut inputs = vec![samples.clone()];
    let mut pre = Vec::with_capacity(layers.len());
    for (i, layer) in layers.iter().enumerate() {
        let h = inputs[i].matmul(&layer.weight)?.add_row_broadcast(&layer.bias)?;
        if i + 1 < layers.len() {
            inputs.push(h.relu());
        }
        pre.push(h);
    }
    Ok(DiscTrace { inputs, pre })
}

/// Gradients of the layers and of the input batch given `d loss / d logit`.
fn disc_backward(layers: &[DenseLayer], trace: &DiscTrace, dlogits: &[f64]) -> Result<(Vec<(Matrix, Matrix)>, Matrix)> {
    let mut grads = vec![None; layers.len()];
    let mut upstream = Matrix::from_vec(dlogits.len(), 1, dlogits.to_vec())?;
    for i in (0..layers.len()).rev() {
        let dpre = if i + 1 < layers.len() {
            let mask = trace.pre[i].map(|v| if v > 0.0 { 1.0 } else { 0.0 });
            upstream.hadamard(&mask)?
        } else {
            upstream
        };
        let dw = trace.inputs[i].t_matmul(&dpre)?;
        let db = dpre.column_sums();
        upstream = dpre.matmul_t(&layers[i].weight)?;
        grads[i] = Some((dw, db));
    }
    Ok((grads.into_iter().map(Option::unwrap).collect(), upstream))
}

/// One logit per sample row.
pub fn discriminator_forward(samples: &Matrix, params: &HcaeParams) -> Result<Vec<f64>> {
    let trace = disc_forward(samples, &params.disc)?;
    Ok(trace.pre.last().unwrap().as_slice().to_vec())
}

/// `(disc_loss, gen_loss)`, with
/// `disc_loss = -½ mean log σ(D(real)) - ½ mean log(1 - σ(D(z)))` and the
/// non-saturating `gen_loss = -mean log σ(D(z))`. Log-sigmoids are evaluated
/// as softplus so saturated logits stay exact.
pub fn adversarial_losses(z: &Matrix, real: &Matrix, params: &HcaeParams) -> Result<(f64, f64)> {
    if z.rows() == 0 || real.rows() == 0 {
        return Err(Error::Parameter("adversarial losses need at least one sample of each kind".into()));
    }
    let real_logits = discriminator_forward(real, params)?;
    let fake_logits = discriminator_forward(z, params)?;
    Ok((disc_loss_from_logits(&real_logits, &fake_logits), gen_loss_from_logits(&fake_logits)))
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

fn disc_loss_from_logits(real: &[f64], fake: &[f64]) -> f64 {
    0.5 * mean(real.iter().map(|&r| softplus(-r)), real.len())
        + 0.5 * mean(fake.iter().map(|&f| softplus(f)), fake.len())
}

fn gen_loss_from_logits(fake: &[f64]) -> f64 {
    mean(fake.iter().map(|&f| softplus(-f)), fake.len())
}

/// Loss terms of the encoder/decoder objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorLosses {
    pub recon: f64,
    pub gen: f64,
    /// `recon_weight · recon + adv_weight · gen`
    pub total: f64,
}

/// Weights of the two generator terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub recon: f64,
    pub adv: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self { recon: 1.0, adv: 1.0 }
    }
}

pub fn generator_losses(graph: &SubjectGraph, params: &HcaeParams, w: LossWeights) -> Result<GeneratorLosses> {
    let z = encode_graph(graph, params)?;
    let recon = bernoulli_cross_entropy(&decode(&z, params)?, &graph.target)?;
    let gen = gen_loss_from_logits(&discriminator_forward(&z, params)?);
    Ok(GeneratorLosses {
        recon,
        gen,
        total: w.recon * recon + w.adv * gen,
    })
}

/// Generator objective and its gradient with respect to `theta1`, `theta2`
/// and `decoder_w`. Discriminator weights are treated as constants.
pub fn generator_gradients(
    graph: &SubjectGraph,
    params: &HcaeParams,
    w: LossWeights,
) -> Result<(GeneratorLosses, GradientBundle)> {
    let enc = encoder_forward(graph, params)?;
    let logits = enc.z.matmul(&params.decoder_w)?;
    let count = logits.as_slice().len() as f64;

    // d recon / d logit = (p - h) / count inside the clamp band, 0 where clamped
    let mut recon = 0.0;
    let mut seen = 0.0;
    let mut dlogits = Matrix::zeros(logits.rows(), logits.cols());
    for ((dl, &x), &t) in dlogits
        .as_mut_slice()
        .iter_mut()
        .zip(logits.as_slice())
        .zip(graph.target.as_slice())
    {
        let p = sigmoid(x);
        let pc = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
        seen += 1.0;
        recon += (-(t * pc.ln() + (1.0 - t) * (1.0 - pc).ln()) - recon) / seen;
        if p > PROB_CLAMP && p < 1.0 - PROB_CLAMP {
            *dl = w.recon * (p - t) / count;
        }
    }

    let grad_decoder = enc.z.t_matmul(&dlogits)?;
    let mut dz = dlogits.matmul_t(&params.decoder_w)?;

    // d gen / d fake_logit_i = -σ(-f_i) / n
    let disc_trace = disc_forward(&enc.z, &params.disc)?;
    let fake_logits = disc_trace.pre.last().unwrap().as_slice();
    let gen = gen_loss_from_logits(fake_logits);
    let n = fake_logits.len() as f64;
    let dfake: Vec<f64> = fake_logits.iter().map(|&f| -w.adv * sigmoid(-f) / n).collect();
    let (_, dz_adv) = disc_backward(&params.disc, &disc_trace, &dfake)?;
    dz.add_assign(&dz_adv)?;

    let grad_theta2 = enc.smoothed.t_matmul(&dz)?;
    let dsmoothed = dz.matmul_t(&params.theta2)?;
    let dy1 = graph.delta.t_matmul(&dsmoothed)?;
    let relu_mask = enc.pre1.map(|v| if v > 0.0 { 1.0 } else { 0.0 });
    let dpre1 = dy1.hadamard(&relu_mask)?;
    let grad_theta1 = graph.propagated.t_matmul(&dpre1)?;

    let losses = GeneratorLosses {
        recon,
        gen,
        total: w.recon * recon + w.adv * gen,
    };
    let bundle = GradientBundle {
        loss: losses.total,
        grads: BTreeMap::from([
            (THETA1.to_string(), grad_theta1),
            (THETA2.to_string(), grad_theta2),
            (DECODER_W.to_string(), grad_decoder),
        ]),
    };
    Ok((losses, bundle))
}

/// Discriminator loss and its gradient with respect to every discriminator
/// layer. `z` is treated as a constant.
pub fn discriminator_gradients(z: &Matrix, real: &Matrix, params: &HcaeParams) -> Result<GradientBundle> {
    if z.rows() == 0 || real.rows() == 0 {
        return Err(Error::Parameter("adversarial losses need at least one sample of each kind".into()));
    }
    let real_trace = disc_forward(real, &params.disc)?;
    let fake_trace = disc_forward(z, &params.disc)?;
    let real_logits = real_trace.pre.last().unwrap().as_slice();
    let fake_logits = fake_trace.pre.last().unwrap().as_slice();
    let loss = disc_loss_from_logits(real_logits, fake_logits);

    let nr = real_logits.len() as f64;
    let nf = fake_logits.len() as f64;
    let dreal: Vec<f64> = real_logits.iter().map(|&r| -0.5 * sigmoid(-r) / nr).collect();
    let dfake: Vec<f64> = fake_logits.iter().map(|&f| 0.5 * sigmoid(f) / nf).collect();
    let (g_real, _) = disc_backward(&params.disc, &real_trace, &dreal)?;
    let (g_fake, _) = disc_backward(&params.disc, &fake_trace, &dfake)?;

    let mut grads = BTreeMap::new();
    for (i, ((wr, br), (wf, bf))) in g_real.into_iter().zip(g_fake).enumerate() {
        grads.insert(disc_weight_name(i), wr.add(&wf)?);
        grads.insert(disc_bias_name(i), br.add(&bf)?);
    }
    Ok(GradientBundle { loss, grads })
}

/// Discriminator loss alone, for finite-difference probing.
pub fn discriminator_loss(z: &Matrix, real: &Matrix, params: &HcaeParams) -> Result<f64> {
    Ok(adversarial_losses(z, real, params)?.0)
}
