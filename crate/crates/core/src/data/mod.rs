//! Connectivity matrices, subjects and cohorts: validation, text I/O and
//! synthetic cohort generation.

mod io;
mod synthetic;

pub use io::{format_matrix, load_cohort, parse_matrix, read_matrix, write_cohort, write_matrix};
pub use synthetic::{generate_synthetic_cohort, signature_nodes, SyntheticParams};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Loaded matrices whose asymmetry stays within this bound are symmetrized
/// silently; anything larger is rejected.
pub const ASYMMETRY_TOLERANCE: f64 = 1e-9;

/// Symmetric, zero-diagonal, finite N×N connectivity matrix for one view.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityMatrix {
    values: Matrix,
    view_id: usize,
}

impl ConnectivityMatrix {
    /// Accepts `values` only if it already satisfies every invariant exactly.
    pub fn new(values: Matrix, view_id: usize) -> Result<Self> {
        check_square_finite(&values, view_id)?;
        let n = values.rows();
        for i in 0..n {
            if values[(i, i)] != 0.0 {
                return Err(invalid(view_id, format!("nonzero diagonal at ({i}, {i})")));
            }
            for j in 0..i {
                if values[(i, j)] != values[(j, i)] {
                    return Err(invalid(view_id, format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { values, view_id })
    }

    /// Validation used for matrices read from disk: near-symmetric input is
    /// symmetrized and the diagonal cleared, larger asymmetry is an error.
    pub fn from_raw(values: &Matrix, view_id: usize) -> Result<Self> {
        check_square_finite(values, view_id)?;
        let asym = max_asymmetry(values);
        if asym > ASYMMETRY_TOLERANCE {
            return Err(invalid(
                view_id,
                format!("asymmetric: max |A - A^T| = {asym:e} exceeds {ASYMMETRY_TOLERANCE:e}"),
            ));
        }
        symmetrize(values, view_id)
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn view_id(&self) -> usize {
        self.view_id
    }

    pub fn n_nodes(&self) -> usize {
        self.values.rows()
    }
}

fn invalid(view_id: usize, reason: String) -> Error {
    Error::Validation {
        context: format!("view {view_id}"),
        reason,
    }
}

fn check_square_finite(values: &Matrix, view_id: usize) -> Result<()> {
    if !values.is_square() {
        return Err(invalid(
            view_id,
            format!("not square: {}x{}", values.rows(), values.cols()),
        ));
    }
    if values.rows() == 0 {
        return Err(invalid(view_id, "empty matrix".into()));
    }
    if !values.is_finite() {
        return Err(invalid(view_id, "contains NaN or infinite entries".into()));
    }
    Ok(())
}

fn max_asymmetry(values: &Matrix) -> f64 {
    let n = values.rows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((values[(i, j)] - values[(j, i)]).abs());
        }
    }
    worst
}

/// Returns `(A + Aᵀ) / 2` with the diagonal set to zero.
pub fn symmetrize(values: &Matrix, view_id: usize) -> Result<ConnectivityMatrix> {
    check_square_finite(values, view_id)?;
    let n = values.rows();
    let sym = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (values[(i, j)] + values[(j, i)]) / 2.0
        }
    });
    Ok(ConnectivityMatrix { values: sym, view_id })
}

/// All views of one subject, sharing node count and ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiViewConnectome {
    subject_id: String,
    views: Vec<ConnectivityMatrix>,
    label: Option<String>,
}

impl MultiViewConnectome {
    pub fn new(
        subject_id: impl Into<String>,
        views: Vec<ConnectivityMatrix>,
        label: Option<String>,
    ) -> Result<Self> {
        let subject_id = subject_id.into();
        let Some(first) = views.first() else {
            return Err(Error::Validation {
                context: format!("subject {subject_id}"),
                reason: "no views".into(),
            });
        };
        let n = first.n_nodes();
        for v in &views {
            if v.n_nodes() != n {
                return Err(Error::Validation {
                    context: format!("subject {subject_id} view {}", v.view_id),
                    reason: format!("has {} nodes, view {} has {n}", v.n_nodes(), first.view_id),
                });
            }
        }
        Ok(Self {
            subject_id,
            views,
            label,
        })
    }

    pub fn subject_id(&self) -> &str {
        &self.subject_id
    }

    pub fn views(&self) -> &[ConnectivityMatrix] {
        &self.views
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n_nodes(&self) -> usize {
        self.views[0].n_nodes()
    }

    pub fn n_views(&self) -> usize {
        self.views.len()
    }

    /// The same subject restricted to a single view (0-based index).
    pub fn single_view(&self, index: usize) -> Result<Self> {
        let view = self.views.get(index).cloned().ok_or_else(|| {
            Error::Parameter(format!(
                "view index {index} out of range for {} views",
                self.views.len()
            ))
        })?;
        Ok(Self {
            subject_id: self.subject_id.clone(),
            views: vec![view],
            label: self.label.clone(),
        })
    }
}

/// A population of subjects with a common node count and view count.
#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    subjects: Vec<MultiViewConnectome>,
    class_names: Vec<String>,
}

impl Cohort {
    pub fn new(subjects: Vec<MultiViewConnectome>, class_names: Vec<String>) -> Result<Self> {
        let Some(first) = subjects.first() else {
            return Err(Error::Cohort("no subjects".into()));
        };
        let (n, m) = (first.n_nodes(), first.n_views());
        let mut ids = std::collections::HashSet::new();
        for s in &subjects {
            if s.n_nodes() != n || s.n_views() != m {
                return Err(Error::Cohort(format!(
                    "subject {} has N={}, M={} but {} has N={n}, M={m}",
                    s.subject_id,
                    s.n_nodes(),
                    s.n_views(),
                    first.subject_id
                )));
            }
            if !ids.insert(s.subject_id.as_str()) {
                return Err(Error::Cohort(format!("duplicate subject id {}", s.subject_id)));
            }
            if let Some(label) = s.label() {
                if !class_names.iter().any(|c| c == label) {
                    return Err(Error::Cohort(format!(
                        "subject {} has label {label} not in class list",
                        s.subject_id
                    )));
                }
            }
        }
        let mut sorted = class_names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != class_names.len() {
            return Err(Error::Cohort("class names are not distinct".into()));
        }
        Ok(Self {
            subjects,
            class_names,
        })
    }

    /// Builds a cohort whose class list is the sorted set of subject labels.
    pub fn from_subjects(subjects: Vec<MultiViewConnectome>) -> Result<Self> {
        let mut classes: Vec<String> = subjects
            .iter()
            .filter_map(|s| s.label().map(str::to_string))
            .collect();
        classes.sort();
        classes.dedup();
        Self::new(subjects, classes)
    }

    pub fn subjects(&self) -> &[MultiViewConnectome] {
        &self.subjects
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_nodes(&self) -> usize {
        self.subjects[0].n_nodes()
    }

    pub fn n_views(&self) -> usize {
        self.subjects[0].n_views()
    }

    pub fn len(&self) -> usize {
        self.subjects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    pub fn labels(&self) -> Vec<Option<String>> {
        self.subjects.iter().map(|s| s.label.clone()).collect()
    }

    /// Every subject restricted to one view (0-based).
    pub fn single_view(&self, index: usize) -> Result<Self> {
        let subjects = self
            .subjects
            .iter()
            .map(|s| s.single_view(index))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            subjects,
            class_names: self.class_names.clone(),
        })
    }
}
