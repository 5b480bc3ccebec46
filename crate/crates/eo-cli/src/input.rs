//! Parsers for the command-line input grammars: field descriptions like
//! `3^2`, parameter assignments like `a3=0,a2=1,a0=2,b=0`, and module
//! specifications (a JSON file path, a named rank-2 block, or `μ@g` for the
//! standard module of a type).

use crate::CliError;
use eo_core::{
    standard_block, standard_module, CurveModel, EOType, Family, Field, FieldElement,
    StandardBlock, SymplecticSemilinearModule,
};
use std::collections::BTreeMap;
use std::path::Path;

/// Parse `3` or `3^k`: characteristic 3 with the auto-selected modulus.
pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let s = s.trim();
    let (p, k) = match s.split_once('^') {
        None => (s, "1"),
        Some((p, k)) => (p, k),
    };
    if p.trim() != "3" {
        return Err(CliError::BadInput(format!(
            "unsupported field `{s}`: the characteristic must be 3"
        )));
    }
    let k: usize = k
        .trim()
        .parse()
        .map_err(|_| CliError::BadInput(format!("bad extension degree in `{s}`")))?;
    if !(1..=6).contains(&k) {
        return Err(CliError::BadInput(format!(
            "extension degree {k} out of range 1..=6"
        )));
    }
    Field::new(3, k).map_err(|e| CliError::BadInput(e.to_string()))
}

/// Parse `name=index,name=index,…` into family parameters; values are
/// element enumeration indices in `0..3^k`.
pub fn parse_params(
    field: &Field,
    s: &str,
) -> Result<BTreeMap<String, FieldElement>, CliError> {
    let mut out = BTreeMap::new();
    let order = field.spec().order();
    for piece in s.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (name, value) = piece.split_once('=').ok_or_else(|| {
            CliError::BadInput(format!("bad parameter `{piece}`, expected name=index"))
        })?;
        let idx: u64 = value.trim().parse().map_err(|_| {
            CliError::BadInput(format!("bad value `{value}` for parameter `{name}`"))
        })?;
        if idx >= order {
            return Err(CliError::BadInput(format!(
                "index {idx} for `{name}` is outside 0..{order}"
            )));
        }
        if out
            .insert(name.trim().to_string(), field.from_index(idx))
            .is_some()
        {
            return Err(CliError::BadInput(format!(
                "parameter `{}` given twice",
                name.trim()
            )));
        }
    }
    Ok(out)
}

/// Parse a family name, with the valid names listed in the error.
pub fn parse_family(s: &str) -> Result<Family, CliError> {
    Family::parse(s).ok_or_else(|| {
        CliError::BadInput(format!(
            "unknown family `{s}` (expected F32, F321, F43A, F43B, F43C or F21)"
        ))
    })
}

/// Build a curve from a JSON description file.
pub fn curve_from_json_file(path: &Path) -> Result<CurveModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::BadInput(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
    CurveModel::from_json(&value).map_err(CliError::from)
}

/// Resolve a module specification:
/// - a path to a module JSON file,
/// - `ordinary-elliptic` / `supersingular-elliptic` (alias
///   `superspecial-elliptic`): the named rank-2 blocks over `field`,
/// - `μ@g`, e.g. `[2,1]@3`: the standard module of type μ in genus g.
pub fn parse_module_spec(
    spec: &str,
    field: &Field,
) -> Result<SymplecticSemilinearModule, CliError> {
    let spec = spec.trim();
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::BadInput(format!("cannot read {spec}: {e}")))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::BadInput(format!("{spec}: {e}")))?;
        return SymplecticSemilinearModule::from_json(&value).map_err(CliError::from);
    }
    if let Some(block) = StandardBlock::parse(spec) {
        return Ok(standard_block(block, field));
    }
    if let Some((mu, g)) = spec.rsplit_once('@') {
        let mu = EOType::parse(mu).map_err(CliError::from)?;
        let g: usize = g
            .trim()
            .parse()
            .map_err(|_| CliError::BadInput(format!("bad genus `{g}` in `{spec}`")))?;
        return standard_module(&mu, g, field).map_err(CliError::from);
    }
    Err(CliError::BadInput(format!(
        "cannot interpret module spec `{spec}` (not a file, named block, or μ@g)"
    )))
}
