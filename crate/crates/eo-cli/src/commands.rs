//! The four subcommand implementations. Each returns the exact stdout text,
//! so the dispatcher owns all writing and exit-code mapping and the tests
//! can call commands in-process.

use crate::input::{curve_from_json_file, parse_family, parse_field, parse_module_spec, parse_params};
use crate::sweep::{
    csv_string, field_json, growth_report, sweep_family, GrowthReport, SweepReport,
};
use crate::{CliError, CurveArgs, ModuleArgs, SweepArgs, TypesArgs};
use eo_core::{
    classify, enumerate_eo_types, eo_covering_pairs, SymplecticSemilinearModule,
};
use std::fmt::Write as _;

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Classify one curve given by flags or a JSON description file.
pub fn cmd_curve(args: &CurveArgs) -> Result<String, CliError> {
    let curve = match &args.json {
        Some(path) => curve_from_json_file(path)?,
        None => {
            let family = parse_family(args.family.as_deref().ok_or_else(|| {
                CliError::BadInput("either --family or --json is required".into())
            })?)?;
            let field = parse_field(&args.field)?;
            let params = parse_params(&field, &args.params)?;
            eo_core::CurveModel::from_family(family, &field, &params)?
        }
    };
    let report = classify(&curve)?;
    let mut value = report.to_json();
    value["field"] = field_json(curve.field().spec());
    Ok(pretty(&value))
}

/// Sweep a family over its whole parameter space (or over k = 1, 2, 3 with
/// `--growth`), writing CSV/JSON artifacts when requested.
pub fn cmd_sweep(args: &SweepArgs) -> Result<String, CliError> {
    let family = parse_family(&args.family)?;
    let workers = crate::resolve_workers(args.workers)?;
    if args.growth {
        if args.csv.is_some() {
            return Err(CliError::BadInput(
                "--csv is not available with --growth (per-k tallies only)".into(),
            ));
        }
        let report: GrowthReport = growth_report(family, 3, workers)?;
        if let Some(path) = &args.json {
            write_text(path, &pretty(&report.to_json()))?;
        }
        return Ok(report.table());
    }
    let field = parse_field(&args.field)?;
    let rows = sweep_family(family, &field, workers)?;
    let report = SweepReport::from_rows(family, &field, &rows);
    if let Some(path) = &args.csv {
        write_text(path, &csv_string(family, &field, &rows))?;
    }
    if let Some(path) = &args.json {
        write_text(path, &pretty(&report.to_json()))?;
    }
    Ok(pretty(&report.to_json()))
}

fn write_text(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::BadInput(format!("cannot write {}: {e}", path.display())))
}

/// Analyze a module (or a direct sum of several): validate, run the
/// canonical filtration, and report type, a-number, p-rank and codimension.
pub fn cmd_module(args: &ModuleArgs) -> Result<String, CliError> {
    let field = parse_field(&args.field)?;
    let mut specs: Vec<&str> = args.specs.iter().map(String::as_str).collect();
    specs.extend(args.direct_sum.iter().map(String::as_str));
    let mut modules = specs
        .iter()
        .map(|s| parse_module_spec(s, &field))
        .collect::<Result<Vec<_>, _>>()?;
    let mut total: SymplecticSemilinearModule = modules.remove(0);
    for m in modules {
        total = total.direct_sum(&m)?;
    }
    total.validate().map_err(|v| CliError::BadInput(v.to_string()))?;
    let mu = total.eo_type()?;
    let v = total.final_type()?;
    let g = total.g();
    let value = serde_json::json!({
        "field": field_json(total.field().spec()),
        "g": g,
        "valid": true,
        "summands": specs.len(),
        "mu": mu.parts(),
        "mu_display": mu.to_string(),
        "final_type": v.values(),
        "a": mu.a_number(),
        "f": mu.p_rank(g),
        "codim": mu.codimension(),
    });
    Ok(pretty(&value))
}

/// Print the 2^g Ekedahl–Oort types with codimension, p-rank, a-number and
/// covering relations of the specialization order.
pub fn cmd_types(args: &TypesArgs) -> Result<String, CliError> {
    let g = args.genus;
    if !(1..=6).contains(&g) {
        return Err(CliError::BadInput(format!("genus {g} out of range 1..=6")));
    }
    let types = enumerate_eo_types(g);
    let covers = eo_covering_pairs(g);
    let mut out = String::new();
    let _ = writeln!(out, "Ekedahl–Oort types for g = {g}: {} strata", types.len());
    let _ = writeln!(out, "{:<16}{:>6}{:>4}{:>4}  {}", "mu", "codim", "f", "a", "covers");
    for t in &types {
        let covered: Vec<String> = covers
            .iter()
            .filter(|(_, upper)| upper == t)
            .map(|(lower, _)| lower.to_string())
            .collect();
        let _ = writeln!(
            out,
            "{:<16}{:>6}{:>4}{:>4}  {}",
            t.to_string(),
            t.codimension(),
            t.p_rank(g),
            t.a_number(),
            covered.join(" ")
        );
    }
    Ok(out)
}
