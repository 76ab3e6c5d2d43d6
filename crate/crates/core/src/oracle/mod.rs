//! Brute-force cohomology of ideal sheaves of explicit configurations.
//!
//! Configurations have integer coordinates; every number comes from the rank of
//! an evaluation matrix, computed modulo a large prime and recomputed exactly
//! over `Q` whenever the modular rank falls short of its upper bound.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::engine::{ConfigDecl, MapEnd, OracleProvider};

pub mod config;
pub mod ideal;
pub mod linalg;

pub use config::{sample_config, sample_config_with_retries, Component, Line, LineConfiguration, Point, Selection};
pub use ideal::{h0_ideal, h1_ideal, monomials, restriction_surjective, serre_bundle_h1, Series, Source};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("sampling {kind} failed after {attempts} attempts")]
    SamplingExhausted { kind: String, attempts: usize },
    #[error("negative dimension {value} for {what}")]
    NegativeDimension { what: String, value: i128 },
    #[error("unknown selector {0}")]
    UnknownSelector(String),
    #[error("{0}")]
    Parameter(String),
}

/// [`OracleProvider`] sampling one configuration per declared name.
#[derive(Clone, Debug, Default)]
pub struct GeometryOracle {
    pub seed: u64,
    /// Resampling budget per configuration; `None` means [`config::RETRIES`].
    pub retries: Option<usize>,
    configs: BTreeMap<String, LineConfiguration>,
    cache: BTreeMap<(String, i64, u8), u64>,
}

impl GeometryOracle {
    pub fn new(seed: u64) -> Self {
        GeometryOracle { seed, ..Default::default() }
    }

    pub fn configs(&self) -> &BTreeMap<String, LineConfiguration> {
        &self.configs
    }

    fn resolve<'a>(&'a self, selector: &'a str) -> Result<(&'a LineConfiguration, &'a str), OracleError> {
        let (name, part) = selector.split_once('.').unwrap_or((selector, ""));
        let cfg = self.configs.get(name).ok_or_else(|| OracleError::UnknownSelector(selector.to_string()))?;
        Ok((cfg, part))
    }
}

impl OracleProvider for GeometryOracle {
    fn declare(&mut self, decl: &ConfigDecl) -> Result<(), String> {
        let retries = self.retries.unwrap_or(config::RETRIES);
        let cfg = sample_config_with_retries(decl.kind, decl.count, decl.aux, self.seed, &decl.name, retries).map_err(|e| e.to_string())?;
        self.configs.insert(decl.name.clone(), cfg);
        self.cache.retain(|(sel, _, _), _| sel.split('.').next() != Some(decl.name.as_str()));
        Ok(())
    }

    fn ideal_h(&mut self, selector: &str, k: i64, degree: u8) -> Result<u64, String> {
        let key = (selector.to_string(), k, degree);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let (cfg, part) = self.resolve(selector).map_err(|e| e.to_string())?;
        let v = match degree {
            0 => h0_ideal(cfg, part, k),
            1 => h1_ideal(cfg, part, k),
            d => return Err(format!("the oracle computes h0 and h1 only, not h{d}")),
        }
        .map_err(|e| e.to_string())?;
        self.cache.insert(key, v);
        Ok(v)
    }

    fn surjective(&mut self, source: &MapEnd, target: &MapEnd) -> Result<bool, String> {
        let (src, selector) = match (source, target) {
            (MapEnd::P3(k), MapEnd::Structure { selector, k: k2 }) if k == k2 => (Source::P3(*k), selector),
            (MapEnd::P3(k), MapEnd::Points { selector }) => (Source::P3(*k), selector),
            (MapEnd::Quadric { p, q }, MapEnd::Points { selector }) => (Source::Quadric(*p, *q), selector),
            _ => return Err(format!("the oracle cannot decide surjectivity of {source:?} -> {target:?}")),
        };
        let (cfg, part) = self.resolve(selector).map_err(|e| e.to_string())?;
        restriction_surjective(cfg, src, part).map_err(|e| e.to_string())
    }
}
