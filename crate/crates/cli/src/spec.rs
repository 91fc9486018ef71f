//! Problem files.

use serde::{Deserialize, Serialize};

use filtmult::error::{Error, Result};
use filtmult::filtration::{Filtration, FiltrationSpec};
use filtmult::ideal::MonomialIdeal;
use filtmult::multi::{MultiFiltration, MultiFiltrationSpec};
use filtmult::multiplicity::{ExactConfig, Strategy};

/// Parameters of a randomized suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub count: usize,
    /// Ring dimension; for the integrality suite, the largest dimension used.
    pub dim: usize,
    #[serde(default = "default_max_exp")]
    pub max_exp: u32,
}

fn default_max_exp() -> u32 {
    5
}

/// Every field is optional; each task reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// Ring dimension, checked against every descriptor when present.
    pub d: Option<usize>,
    pub ideal: Option<MonomialIdeal>,
    #[serde(default)]
    pub filtrations: Vec<FiltrationSpec>,
    pub multifiltration: Option<MultiFiltrationSpec>,
    pub strategy: Option<Strategy>,
    /// Indices for `colength` and evaluation points for `mixed` and `multigraded-demo`.
    pub n: Option<Vec<u64>>,
    pub points: Option<Vec<Vec<u64>>>,
    pub schedule: Option<Vec<u64>>,
    pub targets: Option<Vec<Vec<u64>>>,
    pub period: Option<u64>,
    pub window: Option<u64>,
    /// Level for the body-volume comparison.
    pub m: Option<u64>,
    /// Zero-based slot for `rees`; all slots when absent.
    pub slot: Option<usize>,
    pub degree: Option<usize>,
    pub threshold: Option<f64>,
    pub tolerance: Option<f64>,
    pub random: Option<RandomSpec>,
    pub seed: Option<u64>,
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        match self.d {
            Some(d) if d != found => Err(Error::DimensionMismatch { expected: d, found }),
            _ => Ok(()),
        }
    }

    pub fn ideal(&self) -> Result<MonomialIdeal> {
        let ideal = self.ideal.clone().ok_or_else(|| missing("ideal"))?;
        self.check_dim(ideal.dim())?;
        Ok(ideal)
    }

    pub fn filtrations(&self, at_least: usize) -> Result<Vec<Filtration>> {
        if self.filtrations.len() < at_least {
            return Err(Error::InvalidArgument(format!(
                "task needs at least {at_least} filtrations, got {}",
                self.filtrations.len()
            )));
        }
        let fs: Vec<Filtration> = self.filtrations.iter().map(|f| f.build()).collect::<Result<_>>()?;
        for f in &fs {
            self.check_dim(f.dim())?;
        }
        Ok(fs)
    }

    pub fn multifiltration(&self) -> Result<Option<MultiFiltration>> {
        let Some(spec) = &self.multifiltration else {
            return Ok(None);
        };
        let mf = spec.build()?;
        self.check_dim(mf.dim())?;
        Ok(Some(mf))
    }

    /// The requested strategy, with `budget` overriding the numeric `max_m`.
    /// Without an explicit strategy, a budget selects the numeric route.
    pub fn strategy(&self, budget: Option<u64>) -> Strategy {
        match (&self.strategy, budget) {
            (Some(Strategy::Numeric(cfg)), Some(b)) => {
                let mut cfg = cfg.clone();
                cfg.max_m = b;
                Strategy::Numeric(cfg)
            }
            (Some(s), _) => s.clone(),
            (None, Some(b)) => Strategy::numeric(b),
            (None, None) => Strategy::exact(),
        }
    }

    pub fn exact_config(&self) -> ExactConfig {
        match &self.strategy {
            Some(Strategy::Exact(cfg)) => cfg.clone(),
            _ => ExactConfig::default(),
        }
    }
}

pub fn missing(field: &str) -> Error {
    Error::InvalidArgument(format!("problem file is missing `{field}`"))
}
