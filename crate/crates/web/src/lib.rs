//! Browser bindings for the `run`, `converge` and `compare` operations.
//!
//! Each operation takes the flat `key = value` configuration text accepted by
//! the command-line tool and returns CSV or a formatted table.

use rbf_weno::config::{RunConfig, SchemeId};
use rbf_weno::harness::{compare_schemes, convergence_study, run_case, Metadata};
use wasm_bindgen::prelude::*;

/// Largest grid the page accepts; keeps the tab responsive.
pub const MAX_CELLS: usize = 4000;

fn meta() -> Metadata {
    Metadata { commit: "web".into() }
}

fn parse_config(text: &str) -> Result<RunConfig, String> {
    let cfg = RunConfig::from_text(text).map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    check_cells(cfg.n_cells.unwrap_or(0))?;
    Ok(cfg)
}

fn check_cells(n: usize) -> Result<(), String> {
    if n > MAX_CELLS {
        return Err(format!("at most {MAX_CELLS} cells in the browser, got {n}"));
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad {what} `{s}`")))
        .collect()
}

/// Runs one case; returns the solution profile CSV.
pub fn run_text(config: &str) -> Result<String, String> {
    let cfg = parse_config(config)?;
    let out = run_case(&cfg).map_err(|e| e.to_string())?;
    Ok(out.profile_csv(&meta()))
}

/// Runs a convergence study on comma-separated resolutions; returns the error table.
pub fn converge_text(config: &str, resolutions: &str) -> Result<String, String> {
    let mut cfg = parse_config(config)?;
    cfg.dt_cap = true;
    let res: Vec<usize> = parse_list(resolutions, "resolution")?;
    for &n in &res {
        check_cells(n)?;
    }
    let report = convergence_study(&cfg, &res).map_err(|e| e.to_string())?;
    Ok(report.to_table())
}

/// Runs comma-separated schemes side by side; returns the comparison CSV.
pub fn compare_text(config: &str, schemes: &str) -> Result<String, String> {
    let cfg = parse_config(config)?;
    let ids: Vec<SchemeId> = parse_list(schemes, "scheme")?;
    let cmp = compare_schemes(&cfg, &ids).map_err(|e| e.to_string())?;
    Ok(cmp.to_csv(&meta()))
}

#[wasm_bindgen]
pub fn run(config: &str) -> Result<String, JsError> {
    run_text(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn converge(config: &str, resolutions: &str) -> Result<String, JsError> {
    converge_text(config, resolutions).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare(config: &str, schemes: &str) -> Result<String, JsError> {
    compare_text(config, schemes).map_err(|e| JsError::new(&e))
}
