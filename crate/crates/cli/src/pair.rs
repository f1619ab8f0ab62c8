//! Pair definitions: JSON input files and gallery lookups resolved into
//! evaluable fields plus the parameter table and sampling domain.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use contactmetric::contact::OneForm;
use contactmetric::expr::{parse, Params};
use contactmetric::gallery;
use contactmetric::riemann::MetricField;
use contactmetric::shape::ScanBox;

/// Schema of a pair-definition document.
///
/// A metric entry may be given as the empty string on one side of the
/// diagonal; it is mirrored from its transpose. Non-empty off-diagonal
/// entries must agree textually with their mirror.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub name: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub metric: [[String; 3]; 3],
    pub alpha: [String; 3],
    pub domain: Domain,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

pub struct LoadedPair {
    pub name: String,
    pub metric: MetricField,
    pub alpha: OneForm,
    pub params: Params,
    pub domain: ScanBox,
}

fn build(
    name: &str,
    metric_text: [[String; 3]; 3],
    alpha_text: [String; 3],
    parameters: BTreeMap<String, f64>,
    domain: ScanBox,
) -> Result<LoadedPair, String> {
    for i in 0..3 {
        if domain.min[i] > domain.max[i] {
            return Err(format!("domain is empty on axis {i}"));
        }
    }
    let mut metric_text = metric_text;
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (metric_text[i][j].trim(), metric_text[j][i].trim());
            if i == j {
                if a.is_empty() {
                    return Err(format!("metric diagonal entry ({i},{i}) is missing"));
                }
                continue;
            }
            match (a.is_empty(), b.is_empty()) {
                (true, true) => {
                    return Err(format!("metric entries ({i},{j}) and ({j},{i}) both missing"))
                }
                (true, false) => metric_text[i][j] = metric_text[j][i].clone(),
                (false, true) => metric_text[j][i] = metric_text[i][j].clone(),
                (false, false) if a != b => {
                    return Err(format!(
                        "metric entries ({i},{j}) = `{a}` and ({j},{i}) = `{b}` differ"
                    ))
                }
                _ => {}
            }
        }
    }

    let names: Vec<&str> = parameters.keys().map(|s| s.as_str()).collect();
    let parse_entry = |what: &str, src: &str| {
        parse(src, &names).map_err(|e| format!("{what}: `{src}`: {e}"))
    };
    let mut rows = Vec::with_capacity(3);
    for i in 0..3 {
        let mut row = Vec::with_capacity(3);
        for j in 0..3 {
            row.push(parse_entry(&format!("metric[{i}][{j}]"), &metric_text[i][j])?);
        }
        rows.push(row);
    }
    let rows: [[contactmetric::Expr; 3]; 3] = [
        rows[0].clone().try_into().unwrap(),
        rows[1].clone().try_into().unwrap(),
        rows[2].clone().try_into().unwrap(),
    ];
    let metric = MetricField::from_rows(rows).map_err(|e| e.to_string())?;
    let alpha = OneForm([
        parse_entry("alpha[0]", &alpha_text[0])?,
        parse_entry("alpha[1]", &alpha_text[1])?,
        parse_entry("alpha[2]", &alpha_text[2])?,
    ]);

    let mut params = Params::new();
    for (k, v) in &parameters {
        params.insert(k, *v);
    }
    Ok(LoadedPair { name: name.to_owned(), metric, alpha, params, domain })
}

/// Loads a pair from a JSON file, applying `-P` overrides.
pub fn from_file(path: &Path, overrides: &[(String, f64)]) -> Result<LoadedPair, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let spec: PairSpec =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut parameters = spec.parameters;
    for (k, v) in overrides {
        parameters.insert(k.clone(), *v);
    }
    build(
        &spec.name,
        spec.metric,
        spec.alpha,
        parameters,
        ScanBox { min: spec.domain.min, max: spec.domain.max },
    )
}

/// Resolves a gallery entry by name, applying `-P` overrides.
pub fn from_gallery(name: &str, overrides: &[(String, f64)]) -> Result<LoadedPair, String> {
    let entry = gallery::entry(name).ok_or_else(|| {
        let known: Vec<&str> = gallery::gallery_entries().iter().map(|e| e.name).collect();
        format!("unknown gallery entry `{name}` (known: {})", known.join(", "))
    })?;
    let mut parameters: BTreeMap<String, f64> =
        entry.parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in overrides {
        parameters.insert(k.clone(), *v);
    }
    build(
        entry.name,
        entry.metric.map(|row| row.map(str::to_owned)),
        entry.alpha.map(str::to_owned),
        parameters,
        entry.domain,
    )
}
