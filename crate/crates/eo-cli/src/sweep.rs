//! Exhaustive parameter sweeps: enumerate every parameter tuple of a family
//! over GF(3ᵏ) in lexicographic order, classify each point, and render the
//! results as a CSV table plus a summary report. Output is byte-identical
//! for any worker count: rows are produced in enumeration order regardless
//! of how the work is distributed.

use crate::CliError;
use eo_core::{classify, ClassificationReport, CurveError, CurveModel, Family, Field, FieldSpec};
use num_bigint::BigUint;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One enumerated parameter point with its classification outcome.
#[derive(Clone, Debug)]
pub struct SweepRow {
    /// Parameter indices in `Family::param_names` order.
    pub indices: Vec<u64>,
    pub outcome: RowOutcome,
}

#[derive(Clone, Debug)]
pub enum RowOutcome {
    Classified(ClassificationReport),
    /// A family constraint (non-vanishing condition) rejected the point.
    Constraint,
    /// The affine model is singular at the point.
    Singular,
    /// Classification failed; the row is kept and marked.
    Error(String),
}

/// The bucket a classified row falls into: the type when determined,
/// otherwise the `|`-joined candidate set.
pub fn bucket_key(report: &ClassificationReport) -> String {
    match &report.mu {
        Some(mu) => mu.to_string(),
        None => {
            let parts: Vec<String> = report.ambiguous.iter().map(|t| t.to_string()).collect();
            parts.join("|")
        }
    }
}

/// Classify every parameter tuple of the family over the field, in
/// lexicographic order of the index vector (first parameter most
/// significant). `workers` limits the thread pool; `None` uses the
/// default pool.
pub fn sweep_family(
    family: Family,
    field: &Field,
    workers: Option<usize>,
) -> Result<Vec<SweepRow>, CliError> {
    let names = family.param_names();
    let order = field.spec().order();
    let total = order
        .checked_pow(names.len() as u32)
        .ok_or_else(|| CliError::BadInput("parameter space too large to enumerate".into()))?;
    let classify_point = |flat: u64| -> SweepRow {
        let mut indices = vec![0u64; names.len()];
        let mut rest = flat;
        for slot in indices.iter_mut().rev() {
            *slot = rest % order;
            rest /= order;
        }
        let params: BTreeMap<String, _> = names
            .iter()
            .zip(&indices)
            .map(|(name, &i)| (name.to_string(), field.from_index(i)))
            .collect();
        let outcome = match CurveModel::from_family(family, field, &params) {
            Err(CurveError::ConstraintViolation(_)) => RowOutcome::Constraint,
            Err(CurveError::SingularCurve(_)) => RowOutcome::Singular,
            Err(e) => RowOutcome::Error(e.to_string()),
            Ok(curve) => match classify(&curve) {
                Ok(report) => RowOutcome::Classified(report),
                Err(e) => RowOutcome::Error(e.to_string()),
            },
        };
        SweepRow { indices, outcome }
    };
    let run = || (0..total).into_par_iter().map(classify_point).collect();
    let rows = match workers {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(run),
    };
    Ok(rows)
}

/// Aggregated sweep results; every tally key is a bucket from
/// [`bucket_key`] and the counts satisfy
/// classified + constraint + singular + errors = enumerated.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub family: Family,
    pub field: Field,
    pub enumerated: u64,
    pub rejected_constraint: u64,
    pub rejected_singular: u64,
    pub errors: u64,
    /// Counts per determined type.
    pub tally: BTreeMap<String, u64>,
    /// Counts per unresolved candidate set.
    pub ambiguous_tally: BTreeMap<String, u64>,
    pub method_full: u64,
    pub method_cartier_only: u64,
    pub method_ambiguous: u64,
    /// First parameter point (in enumeration order) landing in each bucket.
    pub witnesses: BTreeMap<String, BTreeMap<String, u64>>,
}

impl SweepReport {
    pub fn from_rows(family: Family, field: &Field, rows: &[SweepRow]) -> SweepReport {
        let mut report = SweepReport {
            family,
            field: field.clone(),
            enumerated: rows.len() as u64,
            rejected_constraint: 0,
            rejected_singular: 0,
            errors: 0,
            tally: BTreeMap::new(),
            ambiguous_tally: BTreeMap::new(),
            method_full: 0,
            method_cartier_only: 0,
            method_ambiguous: 0,
            witnesses: BTreeMap::new(),
        };
        let names = family.param_names();
        for row in rows {
            let r = match &row.outcome {
                RowOutcome::Constraint => {
                    report.rejected_constraint += 1;
                    continue;
                }
                RowOutcome::Singular => {
                    report.rejected_singular += 1;
                    continue;
                }
                RowOutcome::Error(_) => {
                    report.errors += 1;
                    continue;
                }
                RowOutcome::Classified(r) => r,
            };
            let key = bucket_key(r);
            if r.mu.is_some() {
                *report.tally.entry(key.clone()).or_insert(0) += 1;
                match r.method {
                    eo_core::Method::Full => report.method_full += 1,
                    eo_core::Method::CartierOnly => report.method_cartier_only += 1,
                }
            } else {
                *report.ambiguous_tally.entry(key.clone()).or_insert(0) += 1;
                report.method_ambiguous += 1;
            }
            report.witnesses.entry(key).or_insert_with(|| {
                names
                    .iter()
                    .zip(&row.indices)
                    .map(|(n, &i)| (n.to_string(), i))
                    .collect()
            });
        }
        report
    }

    pub fn classified(&self) -> u64 {
        self.tally.values().sum::<u64>() + self.ambiguous_tally.values().sum::<u64>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family.name(),
            "field": field_json(self.field.spec()),
            "enumerated": self.enumerated,
            "classified": self.classified(),
            "rejected": {
                "constraint": self.rejected_constraint,
                "singular": self.rejected_singular,
            },
            "errors": self.errors,
            "tally": self.tally,
            "ambiguous_tally": self.ambiguous_tally,
            "method_counts": {
                "full": self.method_full,
                "cartier-only": self.method_cartier_only,
                "ambiguous": self.method_ambiguous,
            },
            "witnesses": self.witnesses,
        })
    }
}

/// Field description for reports: characteristic, degree, modulus.
pub fn field_json(spec: &FieldSpec) -> serde_json::Value {
    serde_json::json!({
        "p": spec.p(),
        "k": spec.k(),
        "display": format!("{}^{}", spec.p(), spec.k()),
        "modulus": spec.modulus(),
        "modulus_poly": modulus_string(spec),
    })
}

/// Human form of the modulus, e.g. `t^2 + 1` for coefficients [1,0,1].
pub fn modulus_string(spec: &FieldSpec) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (i, &c) in spec.modulus().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i != 0 {
            String::new()
        } else {
            c.to_string()
        };
        let var = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        let sep = if coeff.is_empty() || var.is_empty() {
            ""
        } else {
            "·"
        };
        terms.push(format!("{coeff}{sep}{var}"));
    }
    terms.join(" + ")
}

/// Render sweep rows as CSV with fixed columns
/// `family,field,<params…>,a,f,mu,method,status`, preceded by `#` header
/// lines echoing the field and modulus.
pub fn csv_string(family: Family, field: &Field, rows: &[SweepRow]) -> String {
    let spec = field.spec();
    let names = family.param_names();
    let field_label = format!("{}^{}", spec.p(), spec.k());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# family {} over GF({field_label}), modulus {} (coefficients {:?})",
        family.name(),
        modulus_string(spec),
        spec.modulus(),
    );
    let _ = writeln!(out, "family,field,{},a,f,mu,method,status", names.join(","));
    for row in rows {
        let _ = write!(out, "{},{field_label}", family.name());
        for i in &row.indices {
            let _ = write!(out, ",{i}");
        }
        match &row.outcome {
            RowOutcome::Classified(r) => {
                let _ = writeln!(
                    out,
                    ",{},{},\"{}\",{},ok",
                    r.a_number,
                    r.p_rank,
                    bucket_key(r),
                    r.method
                );
            }
            RowOutcome::Constraint => {
                let _ = writeln!(out, ",,,,,constraint");
            }
            RowOutcome::Singular => {
                let _ = writeln!(out, ",,,,,singular");
            }
            RowOutcome::Error(_) => {
                let _ = writeln!(out, ",,,,,error");
            }
        }
    }
    out
}

/// Smallest d with 3^d ≥ n¹⁰⁰, i.e. ⌈100·log₃ n⌉ computed exactly.
pub fn log3_ceil_hundredths(n: u64) -> u32 {
    assert!(n > 0, "log of zero");
    let target = BigUint::from(n).pow(100);
    let three = BigUint::from(3u8);
    let mut pow = BigUint::from(1u8);
    let mut d = 0u32;
    while pow < target {
        pow *= &three;
        d += 1;
    }
    d
}

/// Format hundredths as a fixed two-decimal string without floats.
pub fn hundredths_string(h: u32) -> String {
    format!("{}.{:02}", h / 100, h % 100)
}

/// Counts per bucket for the same family over k = 1..=max_k, with
/// exact ⌈100·log₃(count)⌉ growth figures.
pub struct GrowthReport {
    pub family: Family,
    pub per_k: Vec<(Field, BTreeMap<String, u64>)>,
}

pub fn growth_report(
    family: Family,
    max_k: usize,
    workers: Option<usize>,
) -> Result<GrowthReport, CliError> {
    let mut per_k = Vec::new();
    for k in 1..=max_k {
        let field = Field::gf3(k);
        let rows = sweep_family(family, &field, workers)?;
        let report = SweepReport::from_rows(family, &field, &rows);
        let mut tally = report.tally;
        tally.extend(report.ambiguous_tally);
        per_k.push((field, tally));
    }
    Ok(GrowthReport { family, per_k })
}

impl GrowthReport {
    /// All bucket keys seen at any k, sorted.
    fn keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self
            .per_k
            .iter()
            .flat_map(|(_, t)| t.keys().cloned())
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }

    pub fn to_json(&self) -> serde_json::Value {
        let per_k: Vec<serde_json::Value> = self
            .per_k
            .iter()
            .map(|(field, tally)| {
                let types: BTreeMap<String, serde_json::Value> = tally
                    .iter()
                    .map(|(key, &count)| {
                        (
                            key.clone(),
                            serde_json::json!({
                                "count": count,
                                "log3_ceil_hundredths": log3_ceil_hundredths(count),
                            }),
                        )
                    })
                    .collect();
                serde_json::json!({
                    "field": field_json(field.spec()),
                    "types": types,
                })
            })
            .collect();
        serde_json::json!({
            "family": self.family.name(),
            "growth": per_k,
        })
    }

    /// Text table: one row per type, one log₃(count) column per k.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "log₃(classified points) per type for {}, shown as ⌈100·log₃ n⌉/100",
            self.family.name()
        );
        let _ = write!(out, "{:<16}", "type");
        for (field, _) in &self.per_k {
            let _ = write!(out, "{:>10}", format!("k={}", field.spec().k()));
        }
        let _ = writeln!(out);
        for key in self.keys() {
            let _ = write!(out, "{key:<16}");
            for (_, tally) in &self.per_k {
                match tally.get(&key) {
                    None => {
                        let _ = write!(out, "{:>10}", "-");
                    }
                    Some(&n) => {
                        let _ = write!(
                            out,
                            "{:>10}",
                            hundredths_string(log3_ceil_hundredths(n))
                        );
                    }
                }
            }
            let _ = writeln!(out);
        }
        out
    }
}
