use std::str::FromStr;
use std::time::Instant;

use bsa_core::flags::{self, euclidean_pca_flag, forward_bsa, AnalysisResult};
use bsa_core::Manifold;

use crate::error::{Error, Result};
use crate::io::{DatasetFile, ResultFile};
use crate::parallel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisMethod {
    Fbs,
    Pbs,
    Bsa,
    PcaFlag,
}

impl FromStr for AnalysisMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fbs" => Ok(AnalysisMethod::Fbs),
            "pbs" => Ok(AnalysisMethod::Pbs),
            "bsa" => Ok(AnalysisMethod::Bsa),
            "pca-flag" | "pca" => Ok(AnalysisMethod::PcaFlag),
            other => Err(Error::Invalid(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub method: AnalysisMethod,
    pub k: usize,
    pub budget: u64,
    pub seed: u64,
    pub parallel: bool,
}

impl AnalysisConfig {
    pub fn new(method: AnalysisMethod, k: usize) -> Self {
        AnalysisConfig {
            method,
            k,
            budget: flags::DEFAULT_BUDGET,
            seed: 0,
            parallel: true,
        }
    }
}

/// Run one analysis and package it as a [`ResultFile`].
pub fn run_analysis(dataset: &DatasetFile, cfg: &AnalysisConfig) -> Result<(AnalysisResult, ResultFile)> {
    let data = &dataset.points;
    let start = Instant::now();
    let mut pca = None;
    let result = match cfg.method {
        AnalysisMethod::Fbs => forward_bsa(data, cfg.k)?,
        AnalysisMethod::Pbs if cfg.parallel => parallel::optimal_pure_subspace(data, cfg.k, cfg.budget, cfg.seed)?,
        AnalysisMethod::Pbs => flags::optimal_pure_subspace(data, cfg.k, cfg.budget, cfg.seed)?,
        AnalysisMethod::Bsa if cfg.parallel => parallel::bsa_flag_search(data, cfg.k, cfg.budget, cfg.seed)?,
        AnalysisMethod::Bsa => flags::bsa_flag_search(data, cfg.k, cfg.budget, cfg.seed)?,
        AnalysisMethod::PcaFlag => {
            if !matches!(dataset.manifold, Manifold::Euclidean(_)) {
                return Err(Error::Invalid("pca-flag needs a Euclidean dataset".into()));
            }
            let p = euclidean_pca_flag(data, cfg.k)?;
            let r = p.result.clone();
            pca = Some(p);
            r
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut file = ResultFile::new(&result, dataset, cfg.parallel, elapsed);
    file.pca = pca.as_ref().map(Into::into);
    Ok((result, file))
}
