//! Subject-specific hyperconnectome autoencoder: two hypergraph convolutions,
//! a dense sigmoid decoder and an adversarial discriminator on the latent rows.

mod config;
mod forward;
mod params;
mod train;

pub use config::{HcaeConfig, Prior};
pub use forward::{
    adversarial_losses, bernoulli_cross_entropy, decode, discriminator_forward, discriminator_gradients,
    discriminator_loss, encode, encode_graph, generator_gradients, generator_losses, reconstruction_loss,
    GeneratorLosses, LossWeights, SubjectGraph, PROB_CLAMP,
};
pub use params::{glorot_uniform, DenseLayer, HcaeParams, DECODER_W, THETA1, THETA2};
pub use train::{
    embed_cohort, embed_cohort_each, initial_state, train_graph, train_subject, Embedding, EpochRecord,
    SubjectFit, TrainTrace,
};
