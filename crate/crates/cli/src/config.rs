//! Flat `key = value` files for benchmark configuration.

use std::str::FromStr;

use nakagami_core::montecarlo::BenchConfig;
use nakagami_core::{Centrality, EstimatorKind, RestartPolicy};

/// Parses `text` and applies every assignment to `cfg`.
///
/// Recognized keys: `m_grid`, `omega`, `block_size`, `num_blocks`, `trials`,
/// `estimators`, `seed`, `restarts`, `centrality`, `jitter`. Lists are
/// comma-separated. `#` starts a comment.
pub fn apply_config(cfg: &mut BenchConfig, text: &str) -> Result<(), String> {
    let (mut restarts, mut centrality, mut jitter) =
        (cfg.restart_policy.restarts(), cfg.restart_policy.centrality(), cfg.restart_policy.jitter());
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let at = |e: String| format!("line {}: {key}: {e}", i + 1);
        match key {
            "m_grid" => cfg.m_grid = parse_list(value).map_err(at)?,
            "omega" => cfg.omega = parse_one(value).map_err(at)?,
            "block_size" => cfg.block_size = parse_one(value).map_err(at)?,
            "num_blocks" => cfg.num_blocks = parse_one(value).map_err(at)?,
            "trials" => cfg.trials = parse_one(value).map_err(at)?,
            "estimators" => cfg.estimators = parse_estimators(value).map_err(at)?,
            "seed" | "base_seed" => cfg.base_seed = parse_one(value).map_err(at)?,
            "restarts" => restarts = parse_one(value).map_err(at)?,
            "centrality" => centrality = parse_one::<Centrality>(value).map_err(at)?,
            "jitter" => jitter = parse_one(value).map_err(at)?,
            _ => return Err(format!("line {}: unknown key {key:?}", i + 1)),
        }
    }
    cfg.restart_policy = RestartPolicy::new(restarts, centrality, jitter).map_err(|e| e.to_string())?;
    Ok(())
}

fn parse_one<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| format!("invalid value {s:?}: {e}"))
}

/// Comma-separated list; empty items are rejected.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    if s.trim().is_empty() {
        return Err("empty list".into());
    }
    s.split(',').map(|item| parse_one(item.trim())).collect()
}

/// All estimators when `s` is `all`, else a comma-separated list.
pub fn parse_estimators(s: &str) -> Result<Vec<EstimatorKind>, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(EstimatorKind::ALL.to_vec());
    }
    parse_list(s)
}
