use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::DEFAULT_K;

/// Where the discriminator's "real" samples come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Prior {
    /// Rows of the stacked connectivity features mapped to the latent width by
    /// a fixed seeded random projection.
    #[default]
    Projection,
    /// Fresh standard-normal samples every epoch.
    Gaussian,
}

impl fmt::Display for Prior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prior::Projection => "projection",
            Prior::Gaussian => "gaussian",
        })
    }
}

impl FromStr for Prior {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" => Ok(Prior::Projection),
            "gaussian" => Ok(Prior::Gaussian),
            other => Err(Error::Parameter(format!(
                "unknown prior {other:?} (expected projection or gaussian)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HcaeConfig {
    pub hidden_dim: usize,
    pub latent_dim: usize,
    pub disc_hidden_dims: Vec<usize>,
    pub epochs: usize,
    /// Encoder/decoder learning rate.
    pub lr: f64,
    pub disc_lr: f64,
    /// Seeds parameter initialization, the prior projection and Gaussian prior
    /// draws. Shared by every subject of a cohort.
    pub seed: u64,
    pub k: usize,
    pub prior: Prior,
    pub recon_weight: f64,
    pub adv_weight: f64,
}

impl Default for HcaeConfig {
    fn default() -> Self {
        Self {
            hidden_dim: 32,
            latent_dim: 16,
            disc_hidden_dims: vec![64, 16],
            epochs: 30,
            lr: 0.01,
            disc_lr: 0.001,
            seed: 0,
            k: DEFAULT_K,
            prior: Prior::Projection,
            recon_weight: 1.0,
            adv_weight: 1.0,
        }
    }
}

impl HcaeConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::Parameter(format!("{name} must be >= 1")))
            } else {
                Ok(())
            }
        };
        positive("hidden_dim", self.hidden_dim)?;
        positive("latent_dim", self.latent_dim)?;
        positive("epochs", self.epochs)?;
        positive("k", self.k)?;
        for &d in &self.disc_hidden_dims {
            positive("disc_hidden_dims entry", d)?;
        }
        for (name, v) in [("lr", self.lr), ("disc_lr", self.disc_lr)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be > 0, got {v}")));
            }
        }
        for (name, v) in [("recon_weight", self.recon_weight), ("adv_weight", self.adv_weight)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = HcaeConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.epochs, 30);
    }

    #[test]
    fn zero_epochs_rejected() {
        let cfg = HcaeConfig {
            epochs: 0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Parameter(_))));
    }

    #[test]
    fn prior_parses() {
        assert_eq!("gaussian".parse::<Prior>().unwrap(), Prior::Gaussian);
        assert!("uniform".parse::<Prior>().is_err());
        assert_eq!(Prior::Projection.to_string(), "projection");
    }
}
