//! Central-difference verification of analytic gradients.

use std::collections::BTreeMap;

use super::{GradientBundle, Matrix, ParamStore};
use crate::error::{Error, Result};

/// Worst-case comparison between analytic and numeric gradients.
#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub checked: usize,
    pub max_rel_error: f64,
    /// Parameter name and flat index of the worst entry.
    pub worst: Option<(String, usize)>,
    pub worst_analytic: f64,
    pub worst_numeric: f64,
    pub tol: f64,
}

impl GradCheckReport {
    pub fn passed(&self) -> bool {
        self.max_rel_error <= self.tol
    }
}

/// Relative error with denominator `max(|a|, |b|, 1e-8)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8)
}

/// Compares `analytic` against `(f(p + eps) - f(p - eps)) / (2 eps)` for every
/// entry of every parameter named in `analytic`. Parameters are restored
/// exactly after probing.
pub fn grad_check<P, F>(
    params: &mut P,
    analytic: &GradientBundle,
    mut f: F,
    eps: f64,
    tol: f64,
) -> Result<GradCheckReport>
where
    P: ParamStore,
    F: FnMut(&P) -> Result<f64>,
{
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::Parameter(format!("grad_check eps {eps} outside [1e-7, 1e-3]")));
    }
    let mut report = GradCheckReport {
        checked: 0,
        max_rel_error: 0.0,
        worst: None,
        worst_analytic: 0.0,
        worst_numeric: 0.0,
        tol,
    };
    for (name, grad) in &analytic.grads {
        let len = match params.param(name) {
            Some(p) if p.shape() == grad.shape() => p.as_slice().len(),
            Some(p) => {
                return Err(Error::Shape {
                    op: "grad_check",
                    left: p.shape(),
                    right: grad.shape(),
                })
            }
            None => return Err(Error::Parameter(format!("unknown parameter {name}"))),
        };
        for i in 0..len {
            let original = params.param(name).unwrap().as_slice()[i];
            let mut probe = |value: f64, params: &mut P| -> Result<f64> {
                params.param_mut(name).unwrap().as_mut_slice()[i] = value;
                let loss = f(params)?;
                if !loss.is_finite() {
                    return Err(Error::Instability {
                        param: name.clone(),
                        index: i,
                    });
                }
                Ok(loss)
            };
            let plus = probe(original + eps, params);
            let minus = probe(original - eps, params);
            params.param_mut(name).unwrap().as_mut_slice()[i] = original;
            let numeric = (plus? - minus?) / (2.0 * eps);
            let a = grad.as_slice()[i];
            let rel = relative_error(a, numeric);
            report.checked += 1;
            if rel > report.max_rel_error || report.worst.is_none() {
                report.max_rel_error = rel.max(report.max_rel_error);
                report.worst = Some((name.clone(), i));
                report.worst_analytic = a;
                report.worst_numeric = numeric;
            }
        }
    }
    Ok(report)
}

impl ParamStore for BTreeMap<String, Matrix> {
    fn param_names(&self) -> Vec<String> {
        self.keys().cloned().collect()
    }

    fn param(&self, name: &str) -> Option<&Matrix> {
        self.get(name)
    }

    fn param_mut(&mut self, name: &str) -> Option<&mut Matrix> {
        self.get_mut(name)
    }
}
