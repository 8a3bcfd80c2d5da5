//! Flat `key = value` experiment configuration.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{LabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Sharpness,
    Domination,
    Weaktype,
    Apchar,
    Cover,
}

impl FromStr for Experiment {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sharpness" => Ok(Self::Sharpness),
            "domination" => Ok(Self::Domination),
            "weaktype" => Ok(Self::Weaktype),
            "apchar" => Ok(Self::Apchar),
            "cover" => Ok(Self::Cover),
            other => Err(LabError::Config(format!("unknown experiment `{other}`"))),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sharpness => "sharpness",
            Self::Domination => "domination",
            Self::Weaktype => "weaktype",
            Self::Apchar => "apchar",
            Self::Cover => "cover",
        })
    }
}

/// What the weak-type experiment measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakMode {
    /// Weak (1,1) ratio of vector Haar shifts.
    Shift,
    /// Unweighted `L^p` ratio of vector positive shifts.
    Positive,
}

/// Largest mesh depth accepted at n = 1.
pub const MAX_DEPTH: u32 = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub p: f64,
    pub r: f64,
    pub deltas: Vec<f64>,
    pub kappas: Vec<u32>,
    /// Power exponents for `apchar`; when empty, `a = δ - 1` over `deltas`.
    pub powers: Vec<f64>,
    pub depth: u32,
    /// Extra depths for `apchar` (monotonicity in the mesh).
    pub depths: Vec<u32>,
    /// Root is `[-2^top, 2^top)` when positive, `[0, 1)` otherwise.
    pub top: i32,
    pub components: usize,
    pub trials: usize,
    pub seed: u64,
    pub lambda: f64,
    pub mode: WeakMode,
    /// Relative tail bound for the shell series.
    pub tail_tol: f64,
    /// Depth of the grid cross-check in `sharpness`; 0 disables it.
    pub grid_depth: u32,
    /// Grid cross-check runs for `δ` at or above this value.
    pub grid_min_delta: f64,
    pub out: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "experiment",
    "p",
    "r",
    "deltas",
    "kappas",
    "powers",
    "depth",
    "depths",
    "top",
    "components",
    "trials",
    "seed",
    "lambda",
    "mode",
    "tail_tol",
    "grid_depth",
    "grid_min_delta",
    "out",
];

fn cfg_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

/// Reals, also written as `2^e` or `2^-e`.
fn real(key: &str, v: &str) -> Result<f64> {
    let v = v.trim();
    let x = if let Some(e) = v.strip_prefix("2^") {
        let e: i32 = e.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| cfg_err(format!("{key}: bad power `{v}`")))?;
        2f64.powi(e)
    } else {
        v.parse().map_err(|_| cfg_err(format!("{key}: `{v}` is not a number")))?
    };
    if !x.is_finite() {
        return Err(cfg_err(format!("{key}: `{v}` is not finite")));
    }
    Ok(x)
}

fn int<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| cfg_err(format!("{key}: `{}` is not a non-negative integer", v.trim())))
}

/// Comma-separated list; integer ranges may be written `a..=b`.
fn ladder<T>(key: &str, v: &str, one: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| one(key, s)).collect()
}

fn int_ladder(key: &str, v: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..=") {
            let (a, b): (u32, u32) = (int(key, a)?, int(key, b)?);
            out.extend(a..=b);
        } else {
            out.push(int(key, part)?);
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Defaults are the desk-scale choices used by the acceptance suite.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut c = Self {
            experiment,
            p: 2.0,
            r: 2.0,
            deltas: (2..=8).map(|e| 2f64.powi(-e)).collect(),
            kappas: vec![1, 2, 3],
            powers: Vec::new(),
            depth: 8,
            depths: Vec::new(),
            top: 0,
            components: 4,
            trials: 50,
            seed: 20240917,
            lambda: 0.125,
            mode: WeakMode::Shift,
            tail_tol: 1e-10,
            grid_depth: 20,
            grid_min_delta: 0.0625,
            out: None,
        };
        match experiment {
            Experiment::Weaktype => {
                c.kappas = (1..=6).collect();
                c.trials = 200;
                c.depth = 10;
            }
            Experiment::Apchar => c.depth = 16,
            Experiment::Cover => c.depth = 10,
            _ => {}
        }
        c
    }

    /// Parses a config file. `experiment` may come from the command line
    /// instead; when both are present they must agree.
    pub fn parse(text: &str, experiment: Option<Experiment>) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut seen = BTreeSet::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {}: expected `key = value`", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(cfg_err(format!("line {}: unknown key `{k}`", no + 1)));
            }
            if !seen.insert(k.to_string()) {
                return Err(cfg_err(format!("line {}: duplicate key `{k}`", no + 1)));
            }
            pairs.push((k.to_string(), v.to_string()));
        }
        let from_file = pairs.iter().find(|(k, _)| k == "experiment").map(|(_, v)| v.parse::<Experiment>()).transpose()?;
        let exp = match (experiment, from_file) {
            (Some(a), Some(b)) if a != b => {
                return Err(cfg_err(format!("command line says `{a}` but the config says `{b}`")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(cfg_err("no experiment given")),
        };
        let mut c = Self::defaults(exp);
        for (k, v) in &pairs {
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    fn set(&mut self, k: &str, v: &str) -> Result<()> {
        match k {
            "experiment" => {}
            "p" => self.p = real(k, v)?,
            "r" => self.r = real(k, v)?,
            "deltas" => self.deltas = ladder(k, v, real)?,
            "kappas" => self.kappas = int_ladder(k, v)?,
            "powers" => self.powers = ladder(k, v, real)?,
            "depth" => self.depth = int(k, v)?,
            "depths" => self.depths = int_ladder(k, v)?,
            "top" => self.top = v.trim().parse().map_err(|_| cfg_err(format!("top: `{v}` is not an integer")))?,
            "components" => self.components = int(k, v)?,
            "trials" => self.trials = int(k, v)?,
            "seed" => self.seed = int(k, v)?,
            "lambda" => self.lambda = real(k, v)?,
            "mode" => {
                self.mode = match v {
                    "shift" => WeakMode::Shift,
                    "positive" => WeakMode::Positive,
                    _ => return Err(cfg_err(format!("mode: `{v}` is neither `shift` nor `positive`"))),
                }
            }
            "tail_tol" => self.tail_tol = real(k, v)?,
            "grid_depth" => self.grid_depth = int(k, v)?,
            "grid_min_delta" => self.grid_min_delta = real(k, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            _ => unreachable!("keys are checked against KEYS"),
        }
        Ok(())
    }

    /// Checks the invariants every runner relies on.
    pub fn validate(&self) -> Result<()> {
        let open = |name: &str, x: f64| {
            if x > 1.0 && x.is_finite() {
                Ok(())
            } else {
                Err(cfg_err(format!("{name} = {x} must lie in (1, ∞)")))
            }
        };
        open("p", self.p)?;
        open("r", self.r)?;
        if self.depth > MAX_DEPTH || self.grid_depth > MAX_DEPTH || self.depths.iter().any(|&d| d > MAX_DEPTH) {
            return Err(cfg_err(format!("depth exceeds the budget of {MAX_DEPTH}")));
        }
        if self.top < 0 || self.top as u32 + self.depth > MAX_DEPTH {
            return Err(cfg_err(format!("top = {} with depth {} exceeds the budget", self.top, self.depth)));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(cfg_err("tail_tol must lie in (0, 1)"));
        }
        match self.experiment {
            Experiment::Sharpness => {
                if self.deltas.is_empty() {
                    return Err(cfg_err("deltas must be nonempty"));
                }
                if let Some(d) = self.deltas.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
                    return Err(cfg_err(format!("δ = {d} must lie in (0, 1)")));
                }
            }
            Experiment::Domination | Experiment::Weaktype => {
                if self.kappas.is_empty() {
                    return Err(cfg_err("kappas must be nonempty"));
                }
                if let Some(k) = self.kappas.iter().find(|&&k| k > self.depth) {
                    return Err(cfg_err(format!("κ = {k} exceeds depth {}", self.depth)));
                }
                if self.components == 0 || self.trials == 0 {
                    return Err(cfg_err("components and trials must be positive"));
                }
                if !(self.lambda > 0.0 && self.lambda <= 0.125) {
                    return Err(cfg_err(format!("λ = {} must lie in (0, 1/8]", self.lambda)));
                }
            }
            Experiment::Apchar => {
                if self.powers.is_empty() && self.deltas.is_empty() {
                    return Err(cfg_err("apchar needs powers or deltas"));
                }
                if let Some(d) = self.deltas.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
                    return Err(cfg_err(format!("δ = {d} must lie in (0, 1)")));
                }
            }
            Experiment::Cover => {
                if self.depth == 0 || self.depth > 12 {
                    return Err(cfg_err("cover sweeps depth 1..=12"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ladders_and_comments() {
        let c = ExperimentConfig::parse(
            "experiment = sharpness\n# comment\np = 2\ndeltas = 2^-2, 2^-3, 0.0625  # trailing\n",
            None,
        )
        .unwrap();
        assert_eq!(c.deltas, vec![0.25, 0.125, 0.0625]);
        let w = ExperimentConfig::parse("kappas = 1..=3, 5\n", Some(Experiment::Weaktype)).unwrap();
        assert_eq!(w.kappas, vec![1, 2, 3, 5]);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            "experiment = sharpness\nbogus = 1",
            "experiment = sharpness\np = 1",
            "experiment = sharpness\ndeltas = 0.5, 1.0",
            "experiment = sharpness\ndeltas = ",
            "experiment = weaktype\nkappas = 12",
            "experiment = sharpness\np = 2\np = 3",
            "p = 2",
            "experiment = nonsense",
            "experiment = cover\ndepth = 30",
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::parse(text, None), Err(LabError::Config(_))), "{text}");
        }
        assert!(ExperimentConfig::parse("experiment = cover", Some(Experiment::Apchar)).is_err());
    }
}
