use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Cohort, ConnectivityMatrix, MultiViewConnectome};
use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Parses a whitespace-separated numeric grid, one row per line. Blank lines
/// are ignored.
pub fn parse_matrix(text: &str, origin: &Path) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno + 1,
                    message: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    line: lineno + 1,
                    message: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: origin.to_path_buf(),
            line: 0,
            message: "empty matrix file".into(),
        });
    }
    Matrix::from_rows(&rows)
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, path)
}

/// Shortest round-trip decimal representation of every entry.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 12);
    for r in 0..m.rows() {
        for (c, v) in m.row(r).iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    fs::write(path, format_matrix(m)).map_err(|e| Error::io(path, e))
}

/// Loads a cohort from a manifest with header `subject_id,label,view_1,...,view_M`.
/// A relative `manifest` is resolved against `dir`; matrix paths are resolved
/// against the manifest's own directory. An empty label means unlabeled.
pub fn load_cohort(dir: &Path, manifest: &Path) -> Result<Cohort> {
    let manifest_path = if manifest.is_absolute() {
        manifest.to_path_buf()
    } else {
        dir.join(manifest)
    };
    let base = manifest_path.parent().map(Path::to_path_buf).unwrap_or_default();
    let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |line: usize, message: String| Error::Parse {
        path: manifest_path.clone(),
        line,
        message,
    };
    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.len() < 3 || &header[0] != "subject_id" || &header[1] != "label" {
        return Err(parse_err(
            1,
            "header must be subject_id,label,view_1,...,view_M".into(),
        ));
    }
    let n_views = header.len() - 2;

    let mut subjects = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| parse_err(line, e.to_string()))?;
        if record.len() != header.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        let subject_id = record[0].to_string();
        if subject_id.is_empty() {
            return Err(parse_err(line, "empty subject_id".into()));
        }
        let label = Some(record[1].to_string()).filter(|l| !l.is_empty());
        let mut views = Vec::with_capacity(n_views);
        for m in 0..n_views {
            let path = base.join(&record[m + 2]);
            let raw = read_matrix(&path)?;
            let view = ConnectivityMatrix::from_raw(&raw, m + 1).map_err(|e| match e {
                Error::Validation { reason, .. } => Error::Validation {
                    context: format!("subject {subject_id} view {} ({})", m + 1, path.display()),
                    reason,
                },
                other => other,
            })?;
            views.push(view);
        }
        subjects.push(MultiViewConnectome::new(subject_id, views, label)?);
    }
    Cohort::from_subjects(subjects)
}

/// Writes `manifest.csv` plus one matrix file per subject and view under `dir`.
/// Returns the manifest path.
pub fn write_cohort(cohort: &Cohort, dir: &Path) -> Result<PathBuf> {
    let views_dir = dir.join("views");
    fs::create_dir_all(&views_dir).map_err(|e| Error::io(&views_dir, e))?;
    let manifest_path = dir.join("manifest.csv");
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["subject_id".to_string(), "label".to_string()];
    header.extend((1..=cohort.n_views()).map(|m| format!("view_{m}")));
    let csv_err = |e: csv::Error| Error::io(&manifest_path, std::io::Error::other(e));
    writer.write_record(&header).map_err(csv_err)?;
    for s in cohort.subjects() {
        let mut record = vec![s.subject_id().to_string(), s.label().unwrap_or("").to_string()];
        for v in s.views() {
            let rel = format!("views/{}_view{}.txt", s.subject_id(), v.view_id());
            write_matrix(&dir.join(&rel), v.values())?;
            record.push(rel);
        }
        writer.write_record(&record).map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::io(&manifest_path, std::io::Error::other(e.to_string())))?;
    fs::write(&manifest_path, bytes).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_ragged_rows() {
        let err = parse_matrix("0 1\n1 0 2\n", Path::new("x.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_matrix("0 abc\n", Path::new("x.txt")).is_err());
        assert!(parse_matrix("\n\n", Path::new("x.txt")).is_err());
    }

    #[test]
    fn format_is_exact_roundtrip() {
        let m = Matrix::from_rows(&[[0.0, 1.0 / 3.0, -2.5e-17], [1e300, -0.0, 0.1]]).unwrap();
        let back = parse_matrix(&format_matrix(&m), Path::new("x")).unwrap();
        assert!(m.as_slice().iter().zip(back.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}
