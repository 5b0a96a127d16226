//! CSV tables built from a directory of experiment records.

use std::fs;
use std::path::Path;

use serde_json::Value;

use super::CliError;
use crate::report::fmt17;

/// Value of the `schema` field in subsample records.
pub const SUBSAMPLE_SCHEMA: &str = "subsample";
pub const SUBMATRIX_SCHEMA: &str = "submatrix";
pub const RECORD_SCHEMA_VERSION: u32 = 1;

fn num(v: &Value) -> String {
    v.as_f64().map(fmt17).unwrap_or_default()
}

fn rows_for(schema: &str, record: &Value) -> Option<(Vec<&'static str>, Vec<Vec<String>>)> {
    match schema {
        SUBSAMPLE_SCHEMA => {
            let rows = record["experiments"]
                .as_array()?
                .iter()
                .map(|e| vec![num(&e["sigma"]), num(&e["success_fraction"]), num(&e["floor"]), e["pass"].to_string()])
                .collect();
            Some((vec!["sigma", "success_fraction", "floor", "pass"], rows))
        }
        SUBMATRIX_SCHEMA => {
            let e = &record["estimate"];
            let row = vec![
                record["mode"]["mode"].as_str().unwrap_or_default().to_string(),
                num(&record["sigma"]),
                num(&e["p"]),
                num(&e["theoretical_bound"]),
                num(&e["empirical_lp"]),
                record["holds"].to_string(),
            ];
            Some((vec!["mode", "sigma", "p", "bound", "empirical_lp", "holds"], vec![row]))
        }
        crate::hamilton::TRACE_SCHEMA => {
            let o = &record["outcome"];
            let row = vec![
                record["n"].to_string(),
                record["config"]["seed"].to_string(),
                (o["status"] == "success").to_string(),
                o["phase"].as_str().unwrap_or_default().to_string(),
                o["cycle_length"].as_u64().map(|x| x.to_string()).unwrap_or_default(),
            ];
            Some((vec!["n", "seed", "success", "failed_phase", "cycle_length"], vec![row]))
        }
        _ => None,
    }
}

/// One CSV table from every `*.json` record in `dir` (manifests skipped).
/// All records must share one schema and schema version.
pub fn emit_summary(dir: &Path) -> Result<String, CliError> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().ends_with("manifest.json")
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::SchemaMismatch(format!("no experiment records in {}", dir.display())));
    }
    let mut records = Vec::new();
    for f in &files {
        let text = fs::read_to_string(f).map_err(|e| CliError::io(f, e))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::SchemaMismatch(format!("{}: not JSON ({e})", f.display())))?;
        let key = (v["schema"].as_str().unwrap_or("").to_string(), v["schema_version"].as_u64());
        records.push((f, key, v));
    }
    let first = records[0].1.clone();
    let odd: Vec<String> = records.iter().filter(|r| r.1 != first).map(|r| r.0.display().to_string()).collect();
    if !odd.is_empty() {
        return Err(CliError::SchemaMismatch(format!(
            "{} has schema {:?} v{:?}; differing: {}",
            records[0].0.display(),
            first.0,
            first.1,
            odd.join(", ")
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header_written = false;
    for (f, (schema, _), v) in &records {
        let (header, rows) =
            rows_for(schema, v).ok_or_else(|| CliError::SchemaMismatch(format!("{}: unknown schema {schema:?}", f.display())))?;
        if !header_written {
            w.write_record(&header).map_err(CliError::csv)?;
            header_written = true;
        }
        for r in rows {
            w.write_record(&r).map_err(CliError::csv)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
