//! Labeled synthetic cohorts with block-community structure.
//!
//! All views share one community layout; each view adds its own fixed
//! jitter. Every (class, view) pair owns a disjoint chunk of nodes, its
//! signature. A subject expresses its class signature in a seeded half of
//! its views by strengthening every edge that touches the chunk, so no single
//! view sees the class of every subject while the stacked views always do.

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Cohort, ConnectivityMatrix, MultiViewConnectome};
use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::seed::{self, Stream};

/// Unit of every generated value; noise is `(1 - signal) · SCALE · N(0, 1)`.
pub const SCALE: f64 = 10.0;
const WITHIN_COMMUNITY: f64 = 0.6;
const BETWEEN_COMMUNITY: f64 = 0.15;
const JITTER: f64 = 0.1;
/// Relative strengthening of edges touching an expressed signature.
pub const SIGNATURE_GAIN: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub n_subjects: usize,
    pub n_nodes: usize,
    pub n_views: usize,
    pub n_classes: usize,
    /// Fraction of the signal kept; noise is scaled by `1 - signal`.
    pub signal: f64,
    pub seed: u64,
}

impl SyntheticParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_classes < 1 {
            return Err(Error::Parameter("n_classes must be >= 1".into()));
        }
        if self.n_subjects < 2 * self.n_classes {
            return Err(Error::Parameter(format!(
                "n_subjects ({}) must be >= 2 * n_classes ({})",
                self.n_subjects, self.n_classes
            )));
        }
        if self.n_views < 1 {
            return Err(Error::Parameter("n_views must be >= 1".into()));
        }
        let min_nodes = (self.n_views * self.n_classes).max(4);
        if self.n_nodes < min_nodes {
            return Err(Error::Parameter(format!(
                "n_nodes must be >= max(4, n_views * n_classes) = {min_nodes}, got {}",
                self.n_nodes
            )));
        }
        if !(self.signal > 0.0 && self.signal <= 1.0) {
            return Err(Error::Parameter(format!("signal must lie in (0, 1], got {}", self.signal)));
        }
        Ok(())
    }

    /// Number of views in which each subject expresses its signature.
    pub fn expressed_views(&self) -> usize {
        self.n_views.div_ceil(2)
    }
}

/// Nodes forming the signature of `class` in `view`.
pub fn signature_nodes(p: &SyntheticParams, class: usize, view: usize) -> std::ops::Range<usize> {
    let chunks = p.n_views * p.n_classes;
    let c = class * p.n_views + view;
    (c * p.n_nodes / chunks)..((c + 1) * p.n_nodes / chunks)
}

/// Subject `i` belongs to class `i % n_classes` and is named `subj_<i>`.
pub fn generate_synthetic_cohort(p: &SyntheticParams) -> Result<Cohort> {
    p.validate()?;
    let n = p.n_nodes;
    let mut rng = seed::rng(p.seed, Stream::Synthetic, 0);
    let n_communities = p.n_classes.max(3);
    let community: Vec<usize> = (0..n).map(|_| rng.random_range(0..n_communities)).collect();
    let base: Vec<Matrix> = (0..p.n_views)
        .map(|_| {
            let mut x = Matrix::zeros(n, n);
            for a in 0..n {
                for b in 0..a {
                    let level = if community[a] == community[b] {
                        WITHIN_COMMUNITY
                    } else {
                        BETWEEN_COMMUNITY
                    };
                    let v = SCALE * (level + rng.random_range(0.0..JITTER));
                    x[(a, b)] = v;
                    x[(b, a)] = v;
                }
            }
            x
        })
        .collect();

    let class_names: Vec<String> = (0..p.n_classes).map(|c| format!("class_{c}")).collect();
    let noise_scale = (1.0 - p.signal) * SCALE;
    let mut subjects = Vec::with_capacity(p.n_subjects);
    for s in 0..p.n_subjects {
        let class = s % p.n_classes;
        let mut rng = seed::rng(p.seed, Stream::Synthetic, 1 + s as u64);
        let expressed = sample(&mut rng, p.n_views, p.expressed_views()).into_vec();
        let views = (0..p.n_views)
            .map(|view| {
                let chunk = signature_nodes(p, class, view);
                let gain = if expressed.contains(&view) { 1.0 + SIGNATURE_GAIN } else { 1.0 };
                let mut x = base[view].clone();
                for a in 0..n {
                    for b in 0..a {
                        let e: f64 = StandardNormal.sample(&mut rng);
                        let scale = if chunk.contains(&a) || chunk.contains(&b) { gain } else { 1.0 };
                        let v = x[(a, b)] * scale + noise_scale * e;
                        x[(a, b)] = v;
                        x[(b, a)] = v;
                    }
                }
                ConnectivityMatrix::new(x, view + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        subjects.push(MultiViewConnectome::new(
            format!("subj_{s:03}"),
            views,
            Some(class_names[class].clone()),
        )?);
    }
    Cohort::new(subjects, class_names)
}
