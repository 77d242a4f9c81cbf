//! One function per subcommand, each assembling its complete output
//! document in memory (output order never depends on evaluation order).

use phchain_core::{
    brute_force_count, classify_mergers, domain4_contains, qh_threshold, scan, xi_root,
    ChainModel, PatternsError, Ratio, SpectralError,
};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;

use crate::format::{count_value, fmt_f64, json_to_string};

pub enum CliError {
    Config(String),
    Numeric(String),
}

/// Output text plus an optional numerical-failure note (partial results
/// are still printed; the process then exits with code 3).
pub struct CmdResult {
    pub output: String,
    pub failure: Option<String>,
}

impl CmdResult {
    fn ok(output: String) -> Self {
        CmdResult {
            output,
            failure: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

fn config_err<T>(message: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(message.into()))
}

fn map_spectral(err: SpectralError) -> CliError {
    match err {
        SpectralError::InvalidSteps { steps } => {
            CliError::Config(format!("need at least 2 steps, got {steps}"))
        }
        other => CliError::Numeric(other.to_string()),
    }
}

fn ratio_value(r: Ratio) -> Value {
    if r.is_integer() {
        match i64::try_from(r.numerator()) {
            Ok(v) => Value::from(v),
            Err(_) => Value::from(r.to_string()),
        }
    } else {
        Value::from(r.to_string())
    }
}

fn g_json(model: &ChainModel) -> Value {
    Value::from(model.coefficients().to_vec())
}

pub fn run_spectrum(
    model: &ChainModel,
    t_start: f64,
    t_end: f64,
    steps: usize,
    format: OutputFormat,
) -> Result<CmdResult, CliError> {
    let result = scan(model, t_start, t_end, steps).map_err(map_spectral)?;

    // One row per (sample, energy), ordered by signed tracked label.
    let mut rows: Vec<(f64, i64, f64, f64)> = Vec::new();
    for point in &result.points {
        let Some(sample) = &point.sample else { continue };
        let labels = sample.labels.as_ref().expect("scan samples are labeled");
        let mut per_sample: Vec<(i64, f64, f64)> = Vec::with_capacity(2 * labels.len());
        for (i, &m) in labels.iter().enumerate() {
            let minus = sample.roots.energies[2 * i];
            let plus = sample.roots.energies[2 * i + 1];
            per_sample.push((-(m as i64), minus.re, minus.im));
            per_sample.push((m as i64, plus.re, plus.im));
        }
        per_sample.sort_by_key(|row| row.0);
        for (label, re, im) in per_sample {
            rows.push((point.t, label, re, im));
        }
    }

    let output = match format {
        OutputFormat::Csv => {
            let mut out = String::from("t,label,re,im\n");
            for (t, label, re, im) in &rows {
                let _ = writeln!(out, "{},{label},{},{}", fmt_f64(*t), fmt_f64(*re), fmt_f64(*im));
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(t, label, re, im)| json!({"t": t, "label": label, "re": re, "im": im}))
                .collect();
            json_to_string(&json!({
                "j": model.half_dim(),
                "g": g_json(model),
                "t_start": t_start,
                "t_end": t_end,
                "steps": steps,
                "rows": rows,
            }))
        }
    };

    let failure = if result.failures.is_empty() {
        None
    } else {
        let f = &result.failures[0];
        Some(format!(
            "{} of {} samples failed (first at t = {}: {})",
            result.failures.len(),
            steps,
            fmt_f64(f.t),
            f.error
        ))
    };
    Ok(CmdResult { output, failure })
}

pub fn run_thresholds(
    model: &ChainModel,
    search_max: f64,
    qh_bracket: Option<(f64, f64)>,
) -> Result<CmdResult, CliError> {
    if search_max <= 0.0 {
        return config_err("--search-max must be positive");
    }

    let mut xi_entries = Vec::new();
    let mut found: Vec<f64> = Vec::new();
    for n in 1..=model.half_dim() {
        match xi_root(model, n, search_max) {
            Ok(report) => {
                found.push(report.t);
                xi_entries.push(json!({"n": n, "t": report.t, "residual": report.residual}));
            }
            Err(SpectralError::NoRootInRange { .. }) => {
                xi_entries.push(json!({"n": n, "status": "no_root_in_range"}));
            }
            Err(other) => return Err(CliError::Numeric(other.to_string())),
        }
    }

    // Without an explicit bracket, probe above all coupling switch-off
    // points (Hermitian, hence real) against the middle of the
    // complexified window below the smallest one.
    let bracket = qh_bracket.or_else(|| {
        let hi = found.iter().cloned().fold(f64::NAN, f64::max) * 1.5;
        let lo = found.iter().cloned().fold(f64::NAN, f64::min) * 0.5;
        (hi.is_finite() && lo.is_finite()).then_some((hi, lo))
    });
    let qh = match bracket {
        None => json!({"status": "not_bracketed"}),
        Some((hi, lo)) => match qh_threshold(model, hi, lo) {
            Ok(report) => json!({"t": report.t, "bracket": [report.bracket.0, report.bracket.1]}),
            Err(SpectralError::PredicateNotBracketed { .. }) => {
                json!({"status": "not_bracketed"})
            }
            Err(other) => return Err(CliError::Numeric(other.to_string())),
        },
    };

    Ok(CmdResult::ok(json_to_string(&json!({
        "j": model.half_dim(),
        "g": g_json(model),
        "search_max": search_max,
        "xi_roots": xi_entries,
        "qh": qh,
    }))))
}

pub fn run_classify(
    model: &ChainModel,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<CmdResult, CliError> {
    let result = classify_mergers(model, t_start, t_end, steps).map_err(map_spectral)?;
    let events: Vec<Value> = result
        .events
        .iter()
        .map(|e| json!({"t": e.t, "pair": [e.pair.0, e.pair.1]}))
        .collect();
    Ok(CmdResult::ok(json_to_string(&json!({
        "j": model.half_dim(),
        "g": g_json(model),
        "t_start": t_start,
        "t_end": t_end,
        "steps": steps,
        "events": events,
        "pattern": result.pattern.shorthand(),
        "complete": result.pattern.complete,
        "degenerate": result.pattern.degenerate,
    }))))
}

pub fn run_enumerate(
    max_k: usize,
    oracle: bool,
    format: OutputFormat,
) -> Result<CmdResult, CliError> {
    let table = phchain_core::enumerate_counts(max_k)
        .map_err(|e| CliError::Numeric(e.to_string()))?;

    // Brute-force cross-checks exist for N = 2J <= 20.
    let oracle_for = |j: usize| -> Result<Option<u128>, CliError> {
        if !oracle || j > 10 {
            return Ok(None);
        }
        match brute_force_count(j) {
            Ok(v) => Ok(Some(v)),
            Err(PatternsError::TooLarge { .. }) => Ok(None),
            Err(e) => Err(CliError::Numeric(e.to_string())),
        }
    };

    let mut csv = String::new();
    let mut json_rows: Vec<Value> = Vec::new();
    if format == OutputFormat::Csv {
        csv.push_str("k,p4k,p4k_plus2,abs_r,abs_r_minus_s");
        if oracle {
            csv.push_str(",oracle_p4k,oracle_p4k_plus2,agreement");
        }
        csv.push('\n');
    }
    for k in 0..=max_k {
        let p1 = table.p4k[k];
        let p2 = table.p4k_plus2[k];
        let abs_r = table.r[k].abs();
        let abs_rs = table.r_minus_s[k].abs();
        let o1 = oracle_for(2 * k)?;
        let o2 = oracle_for(2 * k + 1)?;
        let agreement = match (o1, o2) {
            (None, None) => None,
            (a, b) => Some(a.map_or(true, |v| v == p1) && b.map_or(true, |v| v == p2)),
        };
        match format {
            OutputFormat::Csv => {
                let _ = write!(csv, "{k},{p1},{p2},{abs_r},{abs_rs}");
                if oracle {
                    let cell = |o: Option<u128>| o.map(|v| v.to_string()).unwrap_or_default();
                    let agree = agreement.map(|a| a.to_string()).unwrap_or_default();
                    let _ = write!(csv, ",{},{},{agree}", cell(o1), cell(o2));
                }
                csv.push('\n');
            }
            OutputFormat::Json => {
                let mut row = Map::new();
                row.insert("k".into(), Value::from(k));
                row.insert("p4k".into(), count_value(p1));
                row.insert("p4k_plus2".into(), count_value(p2));
                row.insert("abs_r".into(), ratio_value(abs_r));
                row.insert("abs_r_minus_s".into(), ratio_value(abs_rs));
                if let Some(v) = o1 {
                    row.insert("oracle_p4k".into(), count_value(v));
                }
                if let Some(v) = o2 {
                    row.insert("oracle_p4k_plus2".into(), count_value(v));
                }
                if let Some(a) = agreement {
                    row.insert("agreement".into(), Value::from(a));
                }
                json_rows.push(Value::Object(row));
            }
        }
    }

    let output = match format {
        OutputFormat::Csv => csv,
        OutputFormat::Json => json_to_string(&json!({
            "max_k": max_k,
            "rows": json_rows,
        })),
    };
    Ok(CmdResult::ok(output))
}

pub fn run_domain4(grid: usize) -> Result<CmdResult, CliError> {
    if grid < 2 {
        return config_err(format!("--grid must be at least 2, got {grid}"));
    }
    let coord = |i: usize| i as f64 / (grid - 1) as f64;

    let mut out = String::from("alpha,beta,inside\n");
    for i in 0..grid {
        for k in 0..grid {
            let point = domain4_contains(coord(i), coord(k));
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f64(point.alpha),
                fmt_f64(point.beta),
                point.inside
            );
        }
    }

    out.push_str("\ncurve,param,alpha,beta\n");
    for i in 0..grid {
        let alpha = coord(i);
        let beta = (9.0 * alpha - alpha * alpha) / (9.0 + 3.0 * alpha);
        let _ = writeln!(out, "1,{},{},{}", fmt_f64(alpha), fmt_f64(alpha), fmt_f64(beta));
    }
    for i in 0..grid {
        let beta = coord(i);
        let alpha = beta - beta * beta / 4.0;
        let _ = writeln!(out, "2,{},{},{}", fmt_f64(beta), fmt_f64(alpha), fmt_f64(beta));
    }
    Ok(CmdResult::ok(out))
}
