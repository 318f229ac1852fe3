//! Output rendering: CSV with a header row, LF endings, numeric payloads
//! only; JSON mirroring the same field names. Probabilities carry 6
//! significant digits, or exactly 4 decimals in paper-match mode.

use std::io::Write;
use std::path::Path;

use serde_json::json;

use hbplus_core::{LeakageReport, SurfaceGrid};

use crate::experiment::{CampaignSummary, ScenarioRow};
use crate::spec::{CliError, OutputFormat};

/// Formats with `digits` significant digits, as a plain decimal.
pub fn format_sig(x: f64, digits: i32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (digits - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn fmt(x: f64, paper_match: bool) -> String {
    if paper_match {
        format!("{x:.4}")
    } else {
        format_sig(x, 6)
    }
}

/// The same rounding the text output uses, pushed back into an f64 so JSON
/// payloads match the CSV payloads.
fn rounded(x: f64, paper_match: bool) -> f64 {
    fmt(x, paper_match).parse().unwrap_or(x)
}

pub fn tables_csv(rows: &[LeakageReport], paper_match: bool) -> String {
    let mut out = String::from("eta,r,q,p,p_e,equivocation,mutual_info\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.eta,
            row.r,
            row.q,
            fmt(row.p, paper_match),
            fmt(row.p_e, paper_match),
            fmt(row.equivocation, paper_match),
            fmt(row.mutual_info, paper_match),
        ));
    }
    out
}

pub fn tables_json(rows: &[LeakageReport], paper_match: bool) -> String {
    let values: Vec<_> = rows
        .iter()
        .map(|row| {
            json!({
                "eta": row.eta,
                "r": row.r,
                "q": row.q,
                "p": rounded(row.p, paper_match),
                "p_e": rounded(row.p_e, paper_match),
                "equivocation": rounded(row.equivocation, paper_match),
                "mutual_info": rounded(row.mutual_info, paper_match),
            })
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&values).expect("static schema");
    text.push('\n');
    text
}

pub fn surface_csv(grid: &SurfaceGrid, paper_match: bool) -> String {
    let mut out = String::from("eta,r,p\n");
    for (i, &eta) in grid.eta_axis.iter().enumerate() {
        for (j, &r) in grid.r_axis.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt(eta, paper_match),
                r,
                fmt(grid.values[i][j], paper_match)
            ));
        }
    }
    out
}

pub fn surface_json(grid: &SurfaceGrid, paper_match: bool) -> String {
    let values: Vec<Vec<f64>> = grid
        .values
        .iter()
        .map(|row| row.iter().map(|&v| rounded(v, paper_match)).collect())
        .collect();
    let payload = json!({
        "eta_axis": grid.eta_axis,
        "r_axis": grid.r_axis,
        "p": values,
    });
    let mut text = serde_json::to_string_pretty(&payload).expect("static schema");
    text.push('\n');
    text
}

pub fn campaign_csv(s: &CampaignSummary, paper_match: bool) -> String {
    let mut out = String::from(
        "k,r,eta,q,trials,seed,per_bit_error_rate,full_key_success_rate,\
         post_attack_auth_success_rate,predicted_per_bit_error,\
         predicted_per_bit_error_exact,predicted_full_key_success,\
         bit_errors_total,faults_total,auths_total\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        s.key_len,
        s.rounds,
        s.eta,
        s.queries,
        s.trials,
        s.seed,
        fmt(s.per_bit_error_rate, paper_match),
        fmt(s.full_key_success_rate, paper_match),
        fmt(s.post_attack_auth_success_rate, paper_match),
        fmt(s.predicted_per_bit_error, paper_match),
        fmt(s.predicted_per_bit_error_exact, paper_match),
        fmt(s.predicted_full_key_success, paper_match),
        s.bit_errors_total,
        s.faults_total,
        s.auths_total,
    ));
    out
}

pub fn campaign_json(s: &CampaignSummary, paper_match: bool) -> String {
    let payload = json!({
        "k": s.key_len,
        "r": s.rounds,
        "eta": s.eta,
        "q": s.queries,
        "trials": s.trials,
        "seed": s.seed,
        "per_bit_error_rate": rounded(s.per_bit_error_rate, paper_match),
        "full_key_success_rate": rounded(s.full_key_success_rate, paper_match),
        "post_attack_auth_success_rate": rounded(s.post_attack_auth_success_rate, paper_match),
        "predicted_per_bit_error": rounded(s.predicted_per_bit_error, paper_match),
        "predicted_per_bit_error_exact": rounded(s.predicted_per_bit_error_exact, paper_match),
        "predicted_full_key_success": rounded(s.predicted_full_key_success, paper_match),
        "bit_errors_total": s.bit_errors_total,
        "faults_total": s.faults_total,
        "auths_total": s.auths_total,
    });
    let mut text = serde_json::to_string_pretty(&payload).expect("static schema");
    text.push('\n');
    text
}

pub fn auth_sim_csv(rows: &[ScenarioRow], paper_match: bool) -> String {
    let mut out = String::from("scenario,trials,events,empirical_rate,model_rate,exact_rate\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.scenario,
            row.trials,
            row.events,
            fmt(row.empirical_rate, paper_match),
            fmt(row.model_rate, paper_match),
            fmt(row.exact_rate, paper_match),
        ));
    }
    out
}

pub fn auth_sim_json(rows: &[ScenarioRow], paper_match: bool) -> String {
    let values: Vec<_> = rows
        .iter()
        .map(|row| {
            json!({
                "scenario": row.scenario,
                "trials": row.trials,
                "events": row.events,
                "empirical_rate": rounded(row.empirical_rate, paper_match),
                "model_rate": rounded(row.model_rate, paper_match),
                "exact_rate": rounded(row.exact_rate, paper_match),
            })
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&values).expect("static schema");
    text.push('\n');
    text
}

/// Writes the payload to the output path, or to standard output when no
/// path was given. Data goes to stdout only; diagnostics use stderr.
pub fn emit(payload: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, payload)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle
                .write_all(payload.as_bytes())
                .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}")))?;
        }
    }
    Ok(())
}

/// Picks the renderer for a format.
pub fn render_tables(rows: &[LeakageReport], format: OutputFormat, paper_match: bool) -> String {
    match format {
        OutputFormat::Csv => tables_csv(rows, paper_match),
        OutputFormat::Json => tables_json(rows, paper_match),
    }
}

pub fn render_surface(grid: &SurfaceGrid, format: OutputFormat, paper_match: bool) -> String {
    match format {
        OutputFormat::Csv => surface_csv(grid, paper_match),
        OutputFormat::Json => surface_json(grid, paper_match),
    }
}

pub fn render_campaign(s: &CampaignSummary, format: OutputFormat, paper_match: bool) -> String {
    match format {
        OutputFormat::Csv => campaign_csv(s, paper_match),
        OutputFormat::Json => campaign_json(s, paper_match),
    }
}

pub fn render_auth_sim(rows: &[ScenarioRow], format: OutputFormat, paper_match: bool) -> String {
    match format {
        OutputFormat::Csv => auth_sim_csv(rows, paper_match),
        OutputFormat::Json => auth_sim_json(rows, paper_match),
    }
}
