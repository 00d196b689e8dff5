//! Command-line front end: `build`, `embed`, `evaluate` and `pipeline`.
//!
//! Settings come from built-in defaults, then an optional TOML file, then
//! flags; later sources win. The fully resolved settings are written as
//! `resolved_config.toml` into every directory a command creates.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{evaluate_protocol, EvalReport, ProtocolConfig};
use crate::data::{self, generate_synthetic_cohort, Cohort, SyntheticParams};
use crate::error::{Error, Result};
use crate::hypergraph::{build_hyperconnectome, propagation_operator};
use crate::model::{embed_cohort, embed_cohort_each, Embedding, HcaeConfig, Prior};

pub const DEFAULT_SYNTHETIC: &str = "40,35,4,2,0.8";
pub const RESOLVED_CONFIG: &str = "resolved_config.toml";

#[derive(Debug, Parser)]
#[command(name = "hcae", version, about = "Multi-view brain hyperconnectome autoencoder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build hyperconnectomes and dump incidence and propagation matrices.
    Build(Flags),
    /// Train one autoencoder per subject and write the embeddings.
    Embed(Flags),
    /// Classify previously written embeddings with repeated stratified splits.
    Evaluate(Flags),
    /// Run build, embed and evaluate in sequence.
    Pipeline(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file whose keys match the resolved config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub latent_dim: Option<usize>,
    /// Number of train/test splits.
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Synthetic cohort as `n_subjects,n_nodes,n_views,n_classes,signal`.
    #[arg(long, conflicts_with = "manifest")]
    pub synthetic: Option<String>,
    /// Cohort manifest (`subject_id,label,view_1,...`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Also evaluate every single view on its own.
    #[arg(long)]
    pub ablate_views: bool,
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub manifest: Option<PathBuf>,
    pub synthetic: Option<String>,
    pub k: Option<usize>,
    pub hidden_dim: Option<usize>,
    pub latent_dim: Option<usize>,
    pub disc_hidden_dims: Option<Vec<usize>>,
    pub epochs: Option<usize>,
    pub lr: Option<f64>,
    pub disc_lr: Option<f64>,
    pub prior: Option<Prior>,
    pub recon_weight: Option<f64>,
    pub adv_weight: Option<f64>,
    pub n_runs: Option<usize>,
    pub train_frac: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub svm_reg: Option<f64>,
    pub svm_epochs: Option<usize>,
    pub ablate_views: Option<bool>,
}

/// Fully resolved settings. Exactly one of `manifest` and `synthetic` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<String>,
    pub k: usize,
    pub hidden_dim: usize,
    pub latent_dim: usize,
    pub disc_hidden_dims: Vec<usize>,
    pub epochs: usize,
    pub lr: f64,
    pub disc_lr: f64,
    pub prior: Prior,
    pub recon_weight: f64,
    pub adv_weight: f64,
    pub n_runs: usize,
    pub train_frac: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub svm_reg: f64,
    pub svm_epochs: usize,
    pub ablate_views: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let h = HcaeConfig::default();
        let p = ProtocolConfig::default();
        Self {
            manifest: None,
            synthetic: Some(DEFAULT_SYNTHETIC.to_string()),
            k: h.k,
            hidden_dim: h.hidden_dim,
            latent_dim: h.latent_dim,
            disc_hidden_dims: h.disc_hidden_dims,
            epochs: h.epochs,
            lr: h.lr,
            disc_lr: h.disc_lr,
            prior: h.prior,
            recon_weight: h.recon_weight,
            adv_weight: h.adv_weight,
            n_runs: p.n_runs,
            train_frac: p.train_frac,
            seed: h.seed,
            out: PathBuf::from("hcae_out"),
            svm_reg: p.reg,
            svm_epochs: p.svm_epochs,
            ablate_views: false,
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg: FileConfig = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e
            .span()
            .map(|s| text[..s.start].lines().count().max(1))
            .unwrap_or(0),
        message: e.message().to_string(),
    })?;
    // manifest paths in a file are relative to that file
    if let (Some(m), Some(dir)) = (&cfg.manifest, path.parent()) {
        if m.is_relative() {
            cfg.manifest = Some(dir.join(m));
        }
    }
    Ok(cfg)
}

impl RunConfig {
    /// Defaults, overridden by the file named in `flags.config`, overridden
    /// by the remaining flags.
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => read_config_file(p)?,
            None => FileConfig::default(),
        };
        let mut c = RunConfig::default();
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = file.$field.clone() {
                    c.$field = v;
                }
            )*};
        }
        take!(k, hidden_dim, latent_dim, disc_hidden_dims, epochs, lr, disc_lr, prior);
        take!(recon_weight, adv_weight, n_runs, train_frac, seed, out, svm_reg, svm_epochs, ablate_views);
        let mut manifest = file.manifest.clone();
        let mut synthetic = file.synthetic.clone();
        if manifest.is_some() && synthetic.is_some() {
            return Err(Error::Parameter("config sets both manifest and synthetic".into()));
        }

        if let Some(v) = flags.seed {
            c.seed = v;
        }
        if let Some(v) = flags.k {
            c.k = v;
        }
        if let Some(v) = flags.epochs {
            c.epochs = v;
        }
        if let Some(v) = flags.latent_dim {
            c.latent_dim = v;
        }
        if let Some(v) = flags.runs {
            c.n_runs = v;
        }
        if let Some(v) = &flags.out {
            c.out = v.clone();
        }
        if flags.ablate_views {
            c.ablate_views = true;
        }
        if let Some(m) = &flags.manifest {
            manifest = Some(m.clone());
            synthetic = None;
        }
        if let Some(s) = &flags.synthetic {
            synthetic = Some(s.clone());
            manifest = None;
        }
        match (manifest, synthetic) {
            (Some(m), _) => {
                c.manifest = Some(m);
                c.synthetic = None;
            }
            (None, Some(s)) => c.synthetic = Some(s),
            (None, None) => {}
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.hcae_config().validate()?;
        if let Some(p) = self.synthetic_params()? {
            p.validate()?;
        }
        if self.n_runs == 0 {
            return Err(Error::Parameter("n_runs must be >= 1".into()));
        }
        if !(self.train_frac > 0.0 && self.train_frac < 1.0) {
            return Err(Error::Parameter(format!("train_frac must lie in (0, 1), got {}", self.train_frac)));
        }
        if self.svm_reg.is_nan() || self.svm_reg <= 0.0 || self.svm_epochs == 0 {
            return Err(Error::Parameter("svm_reg must be > 0 and svm_epochs >= 1".into()));
        }
        Ok(())
    }

    pub fn hcae_config(&self) -> HcaeConfig {
        HcaeConfig {
            hidden_dim: self.hidden_dim,
            latent_dim: self.latent_dim,
            disc_hidden_dims: self.disc_hidden_dims.clone(),
            epochs: self.epochs,
            lr: self.lr,
            disc_lr: self.disc_lr,
            seed: self.seed,
            k: self.k,
            prior: self.prior,
            recon_weight: self.recon_weight,
            adv_weight: self.adv_weight,
        }
    }

    pub fn protocol_config(&self) -> ProtocolConfig {
        ProtocolConfig {
            n_runs: self.n_runs,
            train_frac: self.train_frac,
            seed: self.seed,
            reg: self.svm_reg,
            svm_epochs: self.svm_epochs,
        }
    }

    pub fn synthetic_params(&self) -> Result<Option<SyntheticParams>> {
        self.synthetic
            .as_deref()
            .map(|s| parse_synthetic(s, self.seed))
            .transpose()
    }

    pub fn load_cohort(&self) -> Result<Cohort> {
        match (&self.manifest, self.synthetic_params()?) {
            (Some(m), _) => data::load_cohort(Path::new("."), m),
            (None, Some(p)) => generate_synthetic_cohort(&p),
            (None, None) => Err(Error::Parameter("no data source configured".into())),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("RunConfig is always representable as TOML")
    }

    pub fn stage_dir(&self, stage: &str) -> PathBuf {
        self.out.join(stage)
    }
}

/// Parses `n_subjects,n_nodes,n_views,n_classes,signal`.
pub fn parse_synthetic(spec: &str, seed: u64) -> Result<SyntheticParams> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || {
        Error::Parameter(format!(
            "synthetic spec {spec:?} must be n_subjects,n_nodes,n_views,n_classes,signal"
        ))
    };
    if parts.len() != 5 {
        return Err(bad());
    }
    let count = |s: &str| s.parse::<usize>().map_err(|_| bad());
    Ok(SyntheticParams {
        n_subjects: count(parts[0])?,
        n_nodes: count(parts[1])?,
        n_views: count(parts[2])?,
        n_classes: count(parts[3])?,
        signal: parts[4].parse().map_err(|_| bad())?,
        seed,
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Creates `dir` and writes the resolved config into it.
fn prepare_dir(dir: &Path, cfg: &RunConfig) -> Result<()> {
    create_dir(dir)?;
    write_text(&dir.join(RESOLVED_CONFIG), &cfg.to_toml())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildSummary {
    pub n_subjects: usize,
    pub dir: PathBuf,
}

/// Writes `incidence/<id>.txt`, `delta/<id>.txt` and `summary.csv` with
/// per-subject degree statistics.
pub fn cmd_build(cfg: &RunConfig) -> Result<BuildSummary> {
    let cohort = cfg.load_cohort()?;
    let dir = cfg.stage_dir("build");
    prepare_dir(&dir, cfg)?;
    create_dir(&dir.join("incidence"))?;
    create_dir(&dir.join("delta"))?;
    let mut summary =
        String::from("subject_id,n_nodes,n_views,k,n_hyperedges,min_vertex_degree,max_vertex_degree,mean_vertex_degree\n");
    for s in cohort.subjects() {
        let (h, _) = build_hyperconnectome(s, cfg.k)?;
        let delta = propagation_operator(&h)?;
        data::write_matrix(&dir.join("incidence").join(format!("{}.txt", s.subject_id())), h.incidence())?;
        data::write_matrix(&dir.join("delta").join(format!("{}.txt", s.subject_id())), &delta)?;
        let d = h.vertex_degrees();
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        writeln!(
            summary,
            "{},{},{},{},{},{min},{max},{mean}",
            s.subject_id(),
            h.n_nodes(),
            h.n_views(),
            h.k(),
            h.n_edges()
        )
        .unwrap();
    }
    write_text(&dir.join("summary.csv"), &summary)?;
    Ok(BuildSummary {
        n_subjects: cohort.len(),
        dir,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedSummary {
    pub written: usize,
    pub dir: PathBuf,
}

/// One row of `embed/index.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRow {
    pub subject_id: String,
    pub label: String,
    pub embedding_file: String,
    pub recon_loss: f64,
}

/// Trains every subject and writes `embeddings/<id>.txt`, `traces/<id>.csv`
/// and `index.csv`. Subjects that fail are reported on stderr and left out;
/// the other subjects are still written, and the command then fails.
pub fn cmd_embed(cfg: &RunConfig) -> Result<EmbedSummary> {
    let cohort = cfg.load_cohort()?;
    let hcfg = cfg.hcae_config();
    let dir = cfg.stage_dir("embed");
    prepare_dir(&dir, cfg)?;
    create_dir(&dir.join("embeddings"))?;
    create_dir(&dir.join("traces"))?;

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (subject, fit) in cohort.subjects().iter().zip(embed_cohort_each(&cohort, &hcfg)) {
        let id = subject.subject_id();
        match fit {
            Ok(fit) => {
                let file = format!("embeddings/{id}.txt");
                data::write_matrix(&dir.join(&file), &fit.embedding.z)?;
                write_text(&dir.join("traces").join(format!("{id}.csv")), &fit.trace.to_csv())?;
                rows.push(IndexRow {
                    subject_id: id.to_string(),
                    label: subject.label().unwrap_or_default().to_string(),
                    embedding_file: file,
                    recon_loss: fit.trace.final_recon_loss,
                });
            }
            Err(e) => {
                eprintln!("subject {id}: {e}");
                failures.push((id.to_string(), e));
            }
        }
    }

    let index_path = dir.join("index.csv");
    let mut w = csv::Writer::from_path(&index_path).map_err(|e| csv_error(&index_path, e))?;
    for r in &rows {
        w.serialize(r).map_err(|e| csv_error(&index_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&index_path, e))?;

    match failures.len() {
        0 => Ok(EmbedSummary {
            written: rows.len(),
            dir,
        }),
        1 => Err(failures.pop().unwrap().1),
        n => Err(Error::Training {
            subject: None,
            message: format!(
                "{n} of {} subjects failed: {}",
                cohort.len(),
                failures.iter().map(|(id, _)| id.as_str()).collect::<Vec<_>>().join(", ")
            ),
        }),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: e.position().map_or(0, |p| p.line() as usize),
        message: e.to_string(),
    }
}

/// Reads `index.csv` from an embed directory together with the embeddings it
/// names.
pub fn read_embeddings(embed_dir: &Path) -> Result<(Vec<IndexRow>, Vec<Embedding>)> {
    let index_path = embed_dir.join("index.csv");
    if !index_path.is_file() {
        return Err(Error::io(
            &index_path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "embedding index not found; run embed first"),
        ));
    }
    let mut r = csv::Reader::from_path(&index_path).map_err(|e| csv_error(&index_path, e))?;
    let rows: Vec<IndexRow> = r
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| csv_error(&index_path, e))?;
    let embeddings = rows
        .iter()
        .map(|row| {
            Ok(Embedding {
                subject_id: row.subject_id.clone(),
                z: data::read_matrix(&embed_dir.join(&row.embedding_file))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, embeddings))
}

/// Accuracy of one view subset in the ablation table.
#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub views: String,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_recon_error: f64,
}

/// Embeds and evaluates every single view of `cohort` separately with the
/// same model and protocol settings.
pub fn single_view_reports(cohort: &Cohort, hcfg: &HcaeConfig, pcfg: &ProtocolConfig) -> Result<Vec<EvalReport>> {
    let labels = cohort_labels(cohort)?;
    (0..cohort.n_views())
        .map(|v| {
            let fits = embed_cohort(&cohort.single_view(v)?, hcfg)?;
            let mut report = evaluate_protocol(
                &fits.iter().map(|f| f.embedding.clone()).collect::<Vec<_>>(),
                &labels,
                pcfg,
            )?;
            report.recon_errors = fits
                .iter()
                .map(|f| (f.embedding.subject_id.clone(), f.trace.final_recon_loss))
                .collect();
            Ok(report)
        })
        .collect()
}

pub fn cohort_labels(cohort: &Cohort) -> Result<Vec<String>> {
    cohort
        .subjects()
        .iter()
        .map(|s| {
            s.label()
                .map(str::to_string)
                .ok_or_else(|| Error::Protocol(format!("subject {} has no label", s.subject_id())))
        })
        .collect()
}

pub fn ablation_csv(rows: &[AblationRow]) -> String {
    let mut out = String::from("views,mean_accuracy,std_accuracy,mean_recon_error\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.views, r.mean_accuracy, r.std_accuracy, r.mean_recon_error).unwrap();
    }
    out
}

fn ablation_row(views: String, report: &EvalReport) -> AblationRow {
    AblationRow {
        views,
        mean_accuracy: report.mean_accuracy,
        std_accuracy: report.std_accuracy,
        mean_recon_error: report.mean_recon_error().unwrap_or(f64::NAN),
    }
}

/// Evaluates the embeddings under `<out>/embed` and writes `report.txt`,
/// `runs.csv`, `recon.csv` and, with view ablation on, `ablation.csv`.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<EvalReport> {
    let (rows, embeddings) = read_embeddings(&cfg.stage_dir("embed"))?;
    if let Some(r) = rows.iter().find(|r| r.label.is_empty()) {
        return Err(Error::Protocol(format!("subject {} has no label", r.subject_id)));
    }
    let labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
    let pcfg = cfg.protocol_config();
    let mut report = evaluate_protocol(&embeddings, &labels, &pcfg)?;
    report.recon_errors = rows.iter().map(|r| (r.subject_id.clone(), r.recon_loss)).collect();
    // the output location is left out so reports compare equal across directories
    report.config_echo.extend(
        cfg.to_toml()
            .lines()
            .filter_map(|l| l.split_once(" = "))
            .filter(|(k, _)| *k != "out")
            .map(|(k, v)| (format!("run.{k}"), v.to_string())),
    );

    let dir = cfg.stage_dir("evaluate");
    prepare_dir(&dir, cfg)?;
    write_text(&dir.join("report.txt"), &report.to_text())?;
    write_text(&dir.join("runs.csv"), &report.runs_csv())?;
    write_text(&dir.join("recon.csv"), &report.recon_csv())?;

    if cfg.ablate_views {
        let cohort = cfg.load_cohort()?;
        let singles = single_view_reports(&cohort, &cfg.hcae_config(), &pcfg)?;
        let mut table: Vec<AblationRow> = singles
            .iter()
            .enumerate()
            .map(|(v, r)| ablation_row(format!("view_{}", v + 1), r))
            .collect();
        table.push(ablation_row("all".into(), &report));
        write_text(&dir.join("ablation.csv"), &ablation_csv(&table))?;
    }
    Ok(report)
}

/// build, embed, evaluate; stops at the first failing stage.
pub fn cmd_pipeline(cfg: &RunConfig) -> Result<EvalReport> {
    prepare_dir(&cfg.out, cfg)?;
    cmd_build(cfg)?;
    cmd_embed(cfg)?;
    cmd_evaluate(cfg)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 for usage or parameter errors, 1 for
/// failures during computation.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (flags, stage) = match &cli.command {
        Command::Build(f) => (f, "build"),
        Command::Embed(f) => (f, "embed"),
        Command::Evaluate(f) => (f, "evaluate"),
        Command::Pipeline(f) => (f, "pipeline"),
    };
    let result = RunConfig::resolve(flags).and_then(|cfg| match stage {
        "build" => cmd_build(&cfg).map(|s| format!("built {} hyperconnectomes in {}", s.n_subjects, s.dir.display())),
        "embed" => cmd_embed(&cfg).map(|s| format!("wrote {} embeddings to {}", s.written, s.dir.display())),
        "evaluate" => cmd_evaluate(&cfg).map(|r| summary_line(&r)),
        _ => cmd_pipeline(&cfg).map(|r| summary_line(&r)),
    });
    match result {
        Ok(msg) => {
            println!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn summary_line(r: &EvalReport) -> String {
    format!(
        "mean accuracy {:.4} (std {:.4}) over {} runs",
        r.mean_accuracy,
        r.std_accuracy,
        r.runs.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_echo_protocol_constants() {
        let c = RunConfig::resolve(&Flags::default()).unwrap();
        let text = c.to_toml();
        assert!(text.contains("epochs = 30\n"));
        assert!(text.contains("train_frac = 0.8\n"));
        assert!(text.contains("n_runs = 100\n"));
        assert!(text.contains("synthetic = \"40,35,4,2,0.8\"\n"));
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "epochs = 7\nk = 3\nn_runs = 4\nmanifest = \"m.csv\"\n").unwrap();
        let flags = Flags {
            config: Some(path),
            epochs: Some(9),
            ..Default::default()
        };
        let c = RunConfig::resolve(&flags).unwrap();
        assert_eq!((c.epochs, c.k, c.n_runs), (9, 3, 4));
        assert_eq!(c.manifest.as_deref(), Some(dir.path().join("m.csv").as_path()));
        assert_eq!(c.synthetic, None);

        let flags = Flags {
            synthetic: Some("10,8,2,2,0.9".into()),
            ..flags
        };
        let c = RunConfig::resolve(&flags).unwrap();
        assert_eq!(c.manifest, None);
        assert_eq!(c.synthetic_params().unwrap().unwrap().n_nodes, 8);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "epoch = 7\n").unwrap();
        let e = RunConfig::resolve(&Flags {
            config: Some(path.clone()),
            ..Default::default()
        })
        .unwrap_err();
        assert!(e.is_usage(), "{e}");

        fs::write(&path, "train_frac = 1.5\n").unwrap();
        assert!(RunConfig::resolve(&Flags {
            config: Some(path),
            ..Default::default()
        })
        .unwrap_err()
        .is_usage());

        assert!(parse_synthetic("1,2,3", 0).is_err());
        assert!(parse_synthetic("a,2,3,4,0.5", 0).is_err());
        assert_eq!(parse_synthetic("40, 35, 4, 2, 0.8", 3).unwrap().seed, 3);
    }
}
