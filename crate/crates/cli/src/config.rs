//! Flat `key = value` config with command-line overrides.

use crate::error::CliError;
use distal_core::confrac::{DEFAULT_PRECISION_BITS, DEFAULT_Q_CAP, MAX_Q_CAP};
use distal_core::sieve::TableKind;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const KEYS: &[&str] = &[
    "n_max",
    "grid",
    "precision_bits",
    "q_cap",
    "coeff_rule",
    "c_bound",
    "threads",
    "seed",
    "cache_dir",
    "out",
    "format",
    "kind",
    "alpha",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum CoeffRule {
    /// `c_k = −1/|k|`.
    Furstenberg,
    /// `c_k = C` for every `k`.
    Constant,
    /// `c_k = 0`.
    Zero,
    /// One `c_k` per line, `k = 1, 2, …`.
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum AlphaSpec {
    Liouville,
    Golden { len: usize },
    File { path: PathBuf },
}

/// Resolved settings. `threads` is left out of the serialized echo so
/// manifests from runs that differ only in thread count agree.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub n_max: u64,
    pub grid: Vec<u64>,
    pub precision_bits: u64,
    pub q_cap: u64,
    pub coeff_rule: CoeffRule,
    pub c_bound: f64,
    #[serde(skip)]
    pub threads: usize,
    pub seed: u64,
    pub cache_dir: PathBuf,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    pub kind: TableKind,
    pub alpha: AlphaSpec,
}

fn bad(key: &str, value: &str) -> CliError {
    CliError::Config(format!("invalid {key} '{value}'"))
}

/// Integers may be written as `1000000`, `1e6` or `1_000_000`.
pub fn parse_count(key: &str, s: &str) -> Result<u64, CliError> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| bad(key, s))?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 {
        Ok(f as u64)
    } else {
        Err(bad(key, s))
    }
}

pub fn parse_grid(s: &str) -> Result<Vec<u64>, CliError> {
    let grid: Vec<u64> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_count("grid", t))
        .collect::<Result<_, _>>()?;
    if grid.is_empty() {
        return Err(CliError::Config("grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("grid must be strictly increasing".into()));
    }
    Ok(grid)
}

fn parse_coeff_rule(s: &str) -> Result<CoeffRule, CliError> {
    match s.trim() {
        "furstenberg" => Ok(CoeffRule::Furstenberg),
        "constant" => Ok(CoeffRule::Constant),
        "zero" => Ok(CoeffRule::Zero),
        t => match t.strip_prefix("file:") {
            Some(p) if !p.is_empty() => Ok(CoeffRule::File { path: p.into() }),
            _ => Err(bad("coeff_rule", s)),
        },
    }
}

fn parse_alpha(s: &str) -> Result<AlphaSpec, CliError> {
    let t = s.trim();
    if t == "liouville" {
        return Ok(AlphaSpec::Liouville);
    }
    if let Some(len) = t.strip_prefix("golden:") {
        let len = parse_count("alpha", len)? as usize;
        if len == 0 {
            return Err(bad("alpha", s));
        }
        return Ok(AlphaSpec::Golden { len });
    }
    match t.strip_prefix("file:") {
        Some(p) if !p.is_empty() => Ok(AlphaSpec::File { path: p.into() }),
        _ => Err(bad("alpha", s)),
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key '{k}'", i + 1)));
        }
        if map.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key '{k}'", i + 1)));
        }
    }
    Ok(map)
}

impl ExperimentConfig {
    /// Builds the config from merged `key → value` pairs (flags already
    /// layered over the file) and checks its invariants.
    pub fn resolve(values: &BTreeMap<String, String>) -> Result<ExperimentConfig, CliError> {
        let get = |k: &str| values.get(k).map(String::as_str);
        let n_max = get("n_max").map(|v| parse_count("n_max", v)).transpose()?.unwrap_or(1_000_000);
        let grid = match get("grid") {
            Some(v) => parse_grid(v)?,
            None => default_grid(n_max),
        };
        let precision_bits = get("precision_bits")
            .map(|v| parse_count("precision_bits", v))
            .transpose()?
            .unwrap_or(DEFAULT_PRECISION_BITS);
        let q_cap = get("q_cap").map(|v| parse_count("q_cap", v)).transpose()?.unwrap_or(DEFAULT_Q_CAP);
        let coeff_rule = get("coeff_rule").map(parse_coeff_rule).transpose()?.unwrap_or(CoeffRule::Furstenberg);
        let c_bound = match get("c_bound") {
            Some(v) => v.trim().parse::<f64>().map_err(|_| bad("c_bound", v))?,
            None => 1.0,
        };
        let threads = match get("threads") {
            Some(v) => parse_count("threads", v)? as usize,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let seed = get("seed").map(|v| parse_count("seed", v)).transpose()?.unwrap_or(0);
        let cache_dir = get("cache_dir").map_or_else(|| PathBuf::from(".distal-cache"), PathBuf::from);
        let out = get("out").map(PathBuf::from);
        let format = match get("format").map(str::trim) {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(v) => return Err(bad("format", v)),
        };
        let kind = match get("kind").map(str::trim) {
            None | Some("moebius") | Some("mobius") => TableKind::Moebius,
            Some("liouville") => TableKind::Liouville,
            Some(v) => return Err(bad("kind", v)),
        };
        let alpha = get("alpha").map(parse_alpha).transpose()?.unwrap_or(AlphaSpec::Liouville);

        if grid.first().is_some_and(|&g| g < 1) || grid.last().is_some_and(|&g| g > n_max) {
            return Err(CliError::Config(format!("grid must lie within [1, n_max = {n_max}]")));
        }
        if precision_bits < 64 {
            return Err(CliError::Config(format!("precision_bits = {precision_bits} is below 64")));
        }
        if threads < 1 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        if !(2..=MAX_Q_CAP).contains(&q_cap) {
            return Err(CliError::Config(format!("q_cap must lie in [2, {MAX_Q_CAP}]")));
        }
        if !(c_bound.is_finite() && c_bound >= 1.0) {
            return Err(CliError::Config(format!("c_bound = {c_bound} must be finite and at least 1")));
        }
        Ok(ExperimentConfig {
            n_max,
            grid,
            precision_bits,
            q_cap,
            coeff_rule,
            c_bound,
            threads,
            seed,
            cache_dir,
            out,
            format,
            kind,
            alpha,
        })
    }
}

/// Decades `10³, 10⁴, …` up to `n_max`, or just `n_max` when it is smaller.
pub fn default_grid(n_max: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut n = 1000u64;
    while n <= n_max {
        grid.push(n);
        n = match n.checked_mul(10) {
            Some(m) => m,
            None => break,
        };
    }
    if grid.is_empty() {
        grid.push(n_max.max(1));
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(pairs: &[(&str, &str)]) -> Result<ExperimentConfig, CliError> {
        let map = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ExperimentConfig::resolve(&map)
    }

    #[test]
    fn defaults() {
        let c = resolve(&[]).unwrap();
        assert_eq!(c.grid, vec![1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(c.precision_bits, 128);
        assert_eq!(c.coeff_rule, CoeffRule::Furstenberg);
        assert_eq!(resolve(&[("n_max", "10")]).unwrap().grid, vec![10]);
    }

    #[test]
    fn counts_accept_exponent_form() {
        assert_eq!(parse_count("n", "1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("n", "1_000").unwrap(), 1000);
        assert!(parse_count("n", "1.5").is_err());
        assert!(parse_count("n", "-3").is_err());
    }

    #[test]
    fn invariants() {
        assert!(matches!(resolve(&[("n_max", "100"), ("grid", "10,1000")]), Err(CliError::Config(_))));
        assert!(matches!(resolve(&[("grid", "0,10")]), Err(CliError::Config(_))));
        assert!(matches!(resolve(&[("precision_bits", "32")]), Err(CliError::Config(_))));
        assert!(matches!(resolve(&[("threads", "0")]), Err(CliError::Config(_))));
        assert!(matches!(resolve(&[("grid", "10,10")]), Err(CliError::Config(_))));
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\nn_max = 1e5\ngrid=10,100 # trailing\n").unwrap();
        assert_eq!(m["n_max"], "1e5");
        assert_eq!(m["grid"], "10,100");
        assert!(parse_config_text("bogus = 1").is_err());
        assert!(parse_config_text("n_max").is_err());
        assert!(parse_config_text("seed = 1\nseed = 2").is_err());
    }

    #[test]
    fn alpha_and_rule() {
        assert_eq!(parse_alpha("golden:30").unwrap(), AlphaSpec::Golden { len: 30 });
        assert!(parse_alpha("golden:0").is_err());
        assert_eq!(parse_coeff_rule("file:c.txt").unwrap(), CoeffRule::File { path: "c.txt".into() });
        assert!(parse_coeff_rule("weird").is_err());
    }
}
