use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::forward::{
    bernoulli_cross_entropy, decode, discriminator_gradients, encode_graph, generator_gradients, LossWeights,
    SubjectGraph,
};
use super::{HcaeConfig, HcaeParams, Prior};
use crate::data::{Cohort, MultiViewConnectome};
use crate::error::{Error, Result};
use crate::hypergraph::build_hyperconnectome;
use crate::numerics::{Adam, Matrix};
use crate::seed::{self, Stream};

/// Latent embedding of one subject.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub subject_id: String,
    /// `N × latent_dim`
    pub z: Matrix,
}

impl Embedding {
    /// Row-major flattening of `z`, the classifier's feature vector.
    pub fn flattened(&self) -> &[f64] {
        self.z.as_slice()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Losses measured at the start of the epoch, before either update.
    pub recon_loss: f64,
    pub disc_loss: f64,
    pub gen_loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    pub epochs: Vec<EpochRecord>,
    /// Reconstruction loss of the final parameters.
    pub final_recon_loss: f64,
}

impl TrainTrace {
    pub fn initial_recon_loss(&self) -> f64 {
        self.epochs[0].recon_loss
    }

    /// Delimited text: `epoch,recon_loss,disc_loss,gen_loss`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,recon_loss,disc_loss,gen_loss\n");
        for r in &self.epochs {
            out.push_str(&format!("{},{},{},{}\n", r.epoch, r.recon_loss, r.disc_loss, r.gen_loss));
        }
        out
    }
}

/// Output of training one subject.
#[derive(Debug, Clone, PartialEq)]
pub struct SubjectFit {
    pub params: HcaeParams,
    pub embedding: Embedding,
    pub trace: TrainTrace,
}

/// Initial parameters and the frozen prior projection for feature width
/// `feature_dim`. Both depend only on the config seed, so every subject of a
/// cohort starts from the same point.
pub fn initial_state(feature_dim: usize, cfg: &HcaeConfig) -> (HcaeParams, Matrix) {
    let mut rng = seed::rng(cfg.seed, Stream::ModelInit, feature_dim as u64);
    let params = HcaeParams::init(feature_dim, cfg, &mut rng);
    let scale = 1.0 / (feature_dim as f64).sqrt();
    let projection = Matrix::from_fn(feature_dim, cfg.latent_dim, |_, _| {
        let e: f64 = StandardNormal.sample(&mut rng);
        e * scale
    });
    (params, projection)
}

pub fn train_subject(subject: &MultiViewConnectome, cfg: &HcaeConfig) -> Result<SubjectFit> {
    cfg.validate()?;
    let (h, features) = build_hyperconnectome(subject, cfg.k)?;
    let graph = SubjectGraph::new(&features, &h)?;
    let (params, projection) = initial_state(graph.feature_dim(), cfg);
    let projected = features.values().matmul(&projection)?;
    train_graph(&graph, params, cfg, |epoch_rng| match cfg.prior {
        Prior::Projection => projected.clone(),
        Prior::Gaussian => Matrix::from_fn(graph.n_nodes(), cfg.latent_dim, |_, _| StandardNormal.sample(epoch_rng)),
    })
    .map(|(params, z, trace)| SubjectFit {
        params,
        embedding: Embedding {
            subject_id: subject.subject_id().to_string(),
            z,
        },
        trace,
    })
    .map_err(|e| e.with_subject(subject.subject_id()))
}

/// Alternating adversarial training on a prepared graph: per epoch one
/// discriminator step, then one encoder/decoder step against the updated
/// discriminator.
pub fn train_graph(
    graph: &SubjectGraph,
    mut params: HcaeParams,
    cfg: &HcaeConfig,
    mut prior: impl FnMut(&mut rand_chacha::ChaCha8Rng) -> Matrix,
) -> Result<(HcaeParams, Matrix, TrainTrace)> {
    cfg.validate()?;
    let weights = LossWeights {
        recon: cfg.recon_weight,
        adv: cfg.adv_weight,
    };
    let mut prior_rng = seed::rng(cfg.seed, Stream::Prior, 0);
    let mut disc_opt = Adam::new(cfg.disc_lr)?;
    let mut gen_opt = Adam::new(cfg.lr)?;
    let mut records = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        let fail = |what: &str| Error::training(format!("non-finite {what} at epoch {epoch}"));
        let z = encode_graph(graph, &params)?;
        let real = prior(&mut prior_rng);

        let disc = discriminator_gradients(&z, &real, &params)?;
        if !disc.loss.is_finite() {
            return Err(fail("discriminator loss"));
        }
        disc_opt
            .step(params.discriminator_params_mut(), &disc)
            .map_err(|e| Error::training(format!("epoch {epoch}: {e}")))?;

        let (losses, grads) = generator_gradients(graph, &params, weights)?;
        if !losses.recon.is_finite() || !losses.gen.is_finite() {
            return Err(fail("generator loss"));
        }
        gen_opt
            .step(params.generator_params_mut(), &grads)
            .map_err(|e| Error::training(format!("epoch {epoch}: {e}")))?;

        if !params.is_finite() {
            return Err(fail("parameters"));
        }
        records.push(EpochRecord {
            epoch,
            recon_loss: losses.recon,
            disc_loss: disc.loss,
            gen_loss: losses.gen,
        });
    }

    let z = encode_graph(graph, &params)?;
    let final_recon_loss = bernoulli_cross_entropy(&decode(&z, &params)?, graph.target())?;
    if !z.is_finite() || !final_recon_loss.is_finite() {
        return Err(Error::training("non-finite embedding after training"));
    }
    Ok((
        params,
        z,
        TrainTrace {
            epochs: records,
            final_recon_loss,
        },
    ))
}

/// Trains every subject independently (in parallel); results keep cohort order.
pub fn embed_cohort_each(cohort: &Cohort, cfg: &HcaeConfig) -> Vec<Result<SubjectFit>> {
    cohort
        .subjects()
        .par_iter()
        .map(|s| train_subject(s, cfg))
        .collect()
}

pub fn embed_cohort(cohort: &Cohort, cfg: &HcaeConfig) -> Result<Vec<SubjectFit>> {
    embed_cohort_each(cohort, cfg).into_iter().collect()
}
