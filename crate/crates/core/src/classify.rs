//! Linear SVM on flattened embeddings and the repeated stratified
//! train/test evaluation protocol.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Embedding;
use crate::numerics::Matrix;
use crate::seed::{self, Stream};

pub const DEFAULT_REG: f64 = 1e-3;
pub const DEFAULT_SVM_EPOCHS: usize = 200;
pub const DEFAULT_RUNS: usize = 100;
pub const DEFAULT_TRAIN_FRAC: f64 = 0.8;

/// Linear classifier `sign(w · standardize(x) + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub reg: f64,
    /// Per-feature training mean and scale used for standardization.
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
    /// Regularized hinge objective after each epoch, of the running average
    /// once averaging has started.
    pub objective_history: Vec<f64>,
}

impl SvmModel {
    pub fn feature_dim(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(x)
            .zip(self.mean.iter().zip(&self.scale))
            .map(|((w, v), (m, s))| w * (v - m) / s)
            .sum::<f64>()
            + self.bias
    }
}

fn standardization(features: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = features.rows() as f64;
    let mean: Vec<f64> = features.column_sums().as_slice().iter().map(|s| s / n).collect();
    let mut var = vec![0.0; features.cols()];
    for r in 0..features.rows() {
        for (c, v) in features.row(r).iter().enumerate() {
            var[c] += (v - mean[c]).powi(2);
        }
    }
    let scale = var
        .into_iter()
        .map(|v| {
            let sd = (v / n).sqrt();
            if sd > 1e-12 {
                sd
            } else {
                1.0
            }
        })
        .collect();
    (mean, scale)
}

/// Trains with Pegasos: seeded stochastic subgradient steps of size
/// `1 / (reg · t)` on the L2-regularized hinge loss, followed by projection
/// onto the ball of radius `1 / √reg`. The bias is an extra, regularized
/// coordinate on a constant feature. The returned model is the average of
/// the iterates from the second half of the epochs.
pub fn svm_train(features: &Matrix, labels: &[i8], reg: f64, epochs: usize, seed: u64) -> Result<SvmModel> {
    if features.rows() != labels.len() {
        return Err(Error::Shape {
            op: "svm_train",
            left: features.shape(),
            right: (labels.len(), 1),
        });
    }
    if labels.iter().any(|&y| y != 1 && y != -1) {
        return Err(Error::Parameter("labels must be +1 or -1".into()));
    }
    if !labels.contains(&1) || !labels.contains(&-1) {
        return Err(Error::training("svm needs at least one example of each class"));
    }
    if !features.is_finite() {
        return Err(Error::Parameter("svm features must be finite".into()));
    }
    if reg.is_nan() || reg <= 0.0 || epochs == 0 {
        return Err(Error::Parameter("svm needs reg > 0 and epochs >= 1".into()));
    }

    let (mean, scale) = standardization(features);
    let d = features.cols();
    let rows: Vec<Vec<f64>> = (0..features.rows())
        .map(|r| {
            features
                .row(r)
                .iter()
                .enumerate()
                .map(|(c, v)| (v - mean[c]) / scale[c])
                .collect()
        })
        .collect();

    let mut rng = seed::rng(seed, Stream::Svm, 0);
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let radius = 1.0 / reg.sqrt();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut history = Vec::with_capacity(epochs);
    let mut t = 0u64;
    let average_from = epochs / 2;
    let mut w_avg = vec![0.0; d];
    let mut b_avg = 0.0;
    let mut n_avg = 0.0;
    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (reg * t as f64);
            let y = labels[i] as f64;
            let margin = y * (dot(&w, &rows[i]) + b);
            let shrink = 1.0 - eta * reg;
            w.iter_mut().for_each(|v| *v *= shrink);
            b *= shrink;
            if margin < 1.0 {
                for (wv, xv) in w.iter_mut().zip(&rows[i]) {
                    *wv += eta * y * xv;
                }
                b += eta * y;
            }
            let norm = (dot(&w, &w) + b * b).sqrt();
            if norm > radius {
                let f = radius / norm;
                w.iter_mut().for_each(|v| *v *= f);
                b *= f;
            }
            if epoch >= average_from {
                n_avg += 1.0;
                for (a, v) in w_avg.iter_mut().zip(&w) {
                    *a += (v - *a) / n_avg;
                }
                b_avg += (b - b_avg) / n_avg;
            }
        }
        if epoch >= average_from {
            history.push(objective(&w_avg, b_avg, &rows, labels, reg));
        } else {
            history.push(objective(&w, b, &rows, labels, reg));
        }
    }
    Ok(SvmModel {
        weights: w_avg,
        bias: b_avg,
        reg,
        mean,
        scale,
        objective_history: history,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn objective(w: &[f64], b: f64, rows: &[Vec<f64>], labels: &[i8], reg: f64) -> f64 {
    let hinge: f64 = rows
        .iter()
        .zip(labels)
        .map(|(x, &y)| (1.0 - y as f64 * (dot(w, x) + b)).max(0.0))
        .sum();
    0.5 * reg * (dot(w, w) + b * b) + hinge / rows.len() as f64
}

/// `+1` where the decision value is `>= 0`, else `-1`.
pub fn svm_predict(model: &SvmModel, features: &Matrix) -> Result<Vec<i8>> {
    if features.cols() != model.feature_dim() {
        return Err(Error::Shape {
            op: "svm_predict",
            left: features.shape(),
            right: (1, model.feature_dim()),
        });
    }
    Ok((0..features.rows())
        .map(|r| if model.decision(features.row(r)) >= 0.0 { 1 } else { -1 })
        .collect())
}

pub fn accuracy(predicted: &[i8], truth: &[i8]) -> f64 {
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub n_runs: usize,
    pub train_frac: f64,
    pub seed: u64,
    pub reg: f64,
    pub svm_epochs: usize,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            n_runs: DEFAULT_RUNS,
            train_frac: DEFAULT_TRAIN_FRAC,
            seed: 0,
            reg: DEFAULT_REG,
            svm_epochs: DEFAULT_SVM_EPOCHS,
        }
    }
}

/// Train and test indices of one stratified split.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffles each class separately and puts `round(train_frac · n_c)` of its
/// members (at least one, at most `n_c - 1`) into the training set.
pub fn stratified_split(classes: &[usize], n_classes: usize, train_frac: f64, seed: u64, run: u64) -> Split {
    let mut rng = seed::rng(seed, Stream::Split, run);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for c in 0..n_classes {
        let mut members: Vec<usize> = (0..classes.len()).filter(|&i| classes[i] == c).collect();
        members.shuffle(&mut rng);
        let n = members.len();
        let n_train = ((train_frac * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1));
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Split { train, test }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub run: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub class_names: Vec<String>,
    pub runs: Vec<RunResult>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    /// Final reconstruction loss per subject, when known.
    pub recon_errors: Vec<(String, f64)>,
    /// Settings that produced the report, as key/value pairs.
    pub config_echo: Vec<(String, String)>,
}

impl EvalReport {
    pub fn accuracies(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.test_accuracy).collect()
    }

    pub fn mean_train_accuracy(&self) -> f64 {
        self.runs.iter().map(|r| r.train_accuracy).sum::<f64>() / self.runs.len() as f64
    }

    pub fn mean_recon_error(&self) -> Option<f64> {
        if self.recon_errors.is_empty() {
            None
        } else {
            Some(self.recon_errors.iter().map(|(_, e)| e).sum::<f64>() / self.recon_errors.len() as f64)
        }
    }

    /// One block per run followed by a summary block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "[config]").unwrap();
        for (k, v) in &self.config_echo {
            writeln!(out, "{k} = {v}").unwrap();
        }
        for r in &self.runs {
            writeln!(out, "\n[run {}]", r.run).unwrap();
            writeln!(out, "n_train = {}", r.n_train).unwrap();
            writeln!(out, "n_test = {}", r.n_test).unwrap();
            writeln!(out, "train_accuracy = {}", r.train_accuracy).unwrap();
            writeln!(out, "test_accuracy = {}", r.test_accuracy).unwrap();
        }
        writeln!(out, "\n[summary]").unwrap();
        writeln!(out, "classes = {}", self.class_names.join(",")).unwrap();
        writeln!(out, "n_runs = {}", self.runs.len()).unwrap();
        writeln!(out, "mean_accuracy = {}", self.mean_accuracy).unwrap();
        writeln!(out, "std_accuracy = {}", self.std_accuracy).unwrap();
        writeln!(out, "mean_train_accuracy = {}", self.mean_train_accuracy()).unwrap();
        if let Some(e) = self.mean_recon_error() {
            writeln!(out, "mean_recon_error = {e}").unwrap();
        }
        out
    }

    /// `run,n_train,n_test,train_accuracy,test_accuracy`
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("run,n_train,n_test,train_accuracy,test_accuracy\n");
        for r in &self.runs {
            writeln!(out, "{},{},{},{},{}", r.run, r.n_train, r.n_test, r.train_accuracy, r.test_accuracy).unwrap();
        }
        out
    }

    /// `subject_id,recon_error`
    pub fn recon_csv(&self) -> String {
        let mut out = String::from("subject_id,recon_error\n");
        for (s, e) in &self.recon_errors {
            writeln!(out, "{s},{e}").unwrap();
        }
        out
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Repeats a stratified split / train / test cycle `n_runs` times on the
/// flattened embeddings. Exactly two classes are supported; the
/// lexicographically first class is the negative one.
pub fn evaluate_protocol(embeddings: &[Embedding], labels: &[String], cfg: &ProtocolConfig) -> Result<EvalReport> {
    if embeddings.len() != labels.len() {
        return Err(Error::Protocol(format!(
            "{} embeddings but {} labels",
            embeddings.len(),
            labels.len()
        )));
    }
    if cfg.n_runs == 0 {
        return Err(Error::Protocol("n_runs must be >= 1".into()));
    }
    if !(cfg.train_frac > 0.0 && cfg.train_frac < 1.0) {
        return Err(Error::Protocol(format!("train_frac must lie in (0, 1), got {}", cfg.train_frac)));
    }
    let mut class_names: Vec<String> = labels.to_vec();
    class_names.sort();
    class_names.dedup();
    if class_names.len() != 2 {
        return Err(Error::Protocol(format!(
            "exactly two classes are required, found {}",
            class_names.len()
        )));
    }
    let classes: Vec<usize> = labels
        .iter()
        .map(|l| class_names.iter().position(|c| c == l).unwrap())
        .collect();
    for (c, name) in class_names.iter().enumerate() {
        let count = classes.iter().filter(|&&k| k == c).count();
        if count < 2 {
            return Err(Error::Protocol(format!("class {name} has {count} subject(s); at least 2 needed")));
        }
    }
    let dim = embeddings[0].flattened().len();
    if let Some(e) = embeddings.iter().find(|e| e.flattened().len() != dim) {
        return Err(Error::Shape {
            op: "evaluate_protocol",
            left: (1, dim),
            right: (1, e.flattened().len()),
        });
    }
    let features = Matrix::from_vec(
        embeddings.len(),
        dim,
        embeddings.iter().flat_map(|e| e.flattened().iter().copied()).collect(),
    )?;
    let signs: Vec<i8> = classes.iter().map(|&c| if c == 1 { 1 } else { -1 }).collect();

    let runs = (0..cfg.n_runs)
        .into_par_iter()
        .map(|run| {
            let split = stratified_split(&classes, 2, cfg.train_frac, cfg.seed, run as u64);
            let pick = |idx: &[usize]| -> (Matrix, Vec<i8>) {
                let m = Matrix::from_fn(idx.len(), dim, |r, c| features[(idx[r], c)]);
                (m, idx.iter().map(|&i| signs[i]).collect())
            };
            let (xtr, ytr) = pick(&split.train);
            let (xte, yte) = pick(&split.test);
            let svm_seed = seed::derive(cfg.seed, Stream::Svm, run as u64);
            let model = svm_train(&xtr, &ytr, cfg.reg, cfg.svm_epochs, svm_seed)?;
            Ok(RunResult {
                run,
                n_train: split.train.len(),
                n_test: split.test.len(),
                train_accuracy: accuracy(&svm_predict(&model, &xtr)?, &ytr),
                test_accuracy: accuracy(&svm_predict(&model, &xte)?, &yte),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (mean_accuracy, std_accuracy) = mean_std(&runs.iter().map(|r| r.test_accuracy).collect::<Vec<_>>());
    Ok(EvalReport {
        class_names,
        runs,
        mean_accuracy,
        std_accuracy,
        recon_errors: Vec::new(),
        config_echo: vec![
            ("n_runs".into(), cfg.n_runs.to_string()),
            ("train_frac".into(), cfg.train_frac.to_string()),
            ("seed".into(), cfg.seed.to_string()),
            ("svm_reg".into(), cfg.reg.to_string()),
            ("svm_epochs".into(), cfg.svm_epochs.to_string()),
            ("split_seed_policy".into(), "derive(seed, split, run)".into()),
        ],
    })
}
