//! Batch generation specs.
//!
//! ```json
//! {"specs": [{"name": "eil51-k5", "base": "tsplib:eil51.tsp", "kappa": 5,
//!             "prize_mode": "MOD", "cost_mode": "MST", "alpha": 0.5, "seed": 1}]}
//! ```
//!
//! `base` is `tsplib:<path>` (relative to the manifest), `random:<n>` for
//! `n` uniform points, or `pollution` for the synthetic road network (whose
//! own construction ignores `kappa` and the two modes).

use std::fs;
use std::path::{Path, PathBuf};

use pctsp_core::instances::{
    generate, random_coordinates, synth_pollution_instance, CostMode, GenError, GenerationSpec, PollutionParams,
    PrizeMode,
};
use pctsp_core::Instance;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tsplib::{parse_tsplib, TsplibError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub name: String,
    pub base: String,
    #[serde(default = "default_kappa")]
    pub kappa: usize,
    #[serde(default = "default_prize")]
    pub prize_mode: String,
    #[serde(default = "default_cost")]
    pub cost_mode: String,
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_kappa() -> usize {
    5
}
fn default_prize() -> String {
    "ONE".into()
}
fn default_cost() -> String {
    "MST".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub specs: Vec<SpecRecord>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown base {0:?}; expected tsplib:<path>, random:<n> or pollution")]
    Base(String),
    #[error("{0}")]
    Mode(String),
    #[error(transparent)]
    Tsplib(#[from] TsplibError),
    #[error(transparent)]
    Generation(#[from] GenError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Tsplib(PathBuf),
    Random(usize),
    Pollution,
}

impl Base {
    pub fn parse(text: &str, dir: &Path) -> Result<Base, ManifestError> {
        if let Some(path) = text.strip_prefix("tsplib:") {
            Ok(Base::Tsplib(dir.join(path)))
        } else if let Some(n) = text.strip_prefix("random:") {
            n.parse().map(Base::Random).map_err(|_| ManifestError::Base(text.into()))
        } else if text == "pollution" {
            Ok(Base::Pollution)
        } else {
            Err(ManifestError::Base(text.into()))
        }
    }
}

pub fn load_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let text =
        fs::read_to_string(path).map_err(|source| ManifestError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Builds the instance described by `spec`; relative TSPLIB paths resolve
/// against `dir`.
pub fn build_instance(spec: &SpecRecord, dir: &Path) -> Result<Instance, ManifestError> {
    let gen = GenerationSpec {
        name: spec.name.clone(),
        base: spec.base.clone(),
        kappa: spec.kappa,
        prize_mode: spec.prize_mode.parse::<PrizeMode>().map_err(ManifestError::Mode)?,
        cost_mode: spec.cost_mode.parse::<CostMode>().map_err(ManifestError::Mode)?,
        alpha: spec.alpha,
        seed: spec.seed,
    };
    match Base::parse(&spec.base, dir)? {
        Base::Tsplib(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|source| ManifestError::Io { path: path.display().to_string(), source })?;
            Ok(generate(&parse_tsplib(&text)?, &gen)?)
        }
        Base::Random(n) => Ok(generate(&random_coordinates(n, spec.seed), &gen)?),
        Base::Pollution => {
            let params = PollutionParams { alpha: spec.alpha, ..PollutionParams::default() };
            let (mut inst, _) = synth_pollution_instance(&params, spec.seed)?;
            inst.name = spec.name.clone();
            Ok(inst)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(base: &str, alpha: f64) -> SpecRecord {
        SpecRecord {
            name: "s".into(),
            base: base.into(),
            kappa: 2,
            prize_mode: "MOD".into(),
            cost_mode: "EUC".into(),
            alpha,
            seed: 3,
        }
    }

    #[test]
    fn random_base() {
        let inst = build_instance(&spec("random:12", 0.5), Path::new(".")).unwrap();
        assert_eq!((inst.n(), inst.m()), (12, 24));
        assert_eq!(inst.meta.as_ref().unwrap().kappa, Some(2));
    }

    #[test]
    fn bad_specs() {
        assert!(matches!(
            build_instance(&spec("random:12", 0.0), Path::new(".")),
            Err(ManifestError::Generation(GenError::InvalidAlpha(_)))
        ));
        assert!(matches!(build_instance(&spec("grid", 0.5), Path::new(".")), Err(ManifestError::Base(_))));
        let mut s = spec("random:12", 0.5);
        s.prize_mode = "SQUARE".into();
        assert!(matches!(build_instance(&s, Path::new(".")), Err(ManifestError::Mode(_))));
    }
}
