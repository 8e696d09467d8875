//! CSV ingestion and export of score, covariate and target tables.
//!
//! Score CSV: `entity,<layer>,...`, an empty cell is a missing score.
//! Covariates CSV: `entity,age,gender`. Targets CSV: `entity,<layer>_t1,...`.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::evaluation::RegressionReport;
use crate::model::{CovariateTable, Covariates, EntityId, LayerId, ScoreTable, TargetTable};
use crate::scalar::Scalar;

const TARGET_SUFFIX: &str = "_t1";

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input)
}

fn headers<R: Read>(rdr: &mut csv::Reader<R>, what: &str) -> Result<Vec<String>> {
    let h: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if h.is_empty() || h.iter().all(String::is_empty) {
        return Err(Error::InvalidInput(format!("{what} CSV is empty or has no header")));
    }
    if h[0] != "entity" {
        return Err(Error::InvalidInput(format!("{what} CSV: first column must be `entity`, found `{}`", h[0])));
    }
    for (i, name) in h.iter().enumerate().skip(1) {
        if name.is_empty() {
            return Err(Error::InvalidInput(format!("{what} CSV: column {} has an empty name", i + 1)));
        }
        if h[1..i].contains(name) {
            return Err(Error::InvalidInput(format!("{what} CSV: column `{name}` appears twice")));
        }
    }
    Ok(h)
}

fn parse_cell(raw: &str, entity: &str, column: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        return Ok(None);
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::InvalidInput(format!("entity `{entity}`, column `{column}`: `{raw}` is not a number")))?;
    Ok(Some(v))
}

fn records<R: Read>(rdr: &mut csv::Reader<R>, width: usize, what: &str) -> Result<Vec<csv::StringRecord>> {
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != width {
            return Err(Error::InvalidInput(format!(
                "{what} CSV row {}: {} fields, expected {width}",
                line + 2,
                rec.len()
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

/// Parses and validates a score table.
pub fn read_score_table<T: Scalar, R: Read>(input: R) -> Result<ScoreTable<T>> {
    let mut rdr = reader(input);
    let h = headers(&mut rdr, "score")?;
    let layers: Vec<LayerId> = h[1..].iter().map(|s| LayerId::from(s.as_str())).collect();
    let mut entities = Vec::new();
    let mut rows = Vec::new();
    for rec in records(&mut rdr, h.len(), "score")? {
        let entity = &rec[0];
        let row = (1..h.len())
            .map(|i| Ok(parse_cell(&rec[i], entity, &h[i])?.map(T::lit)))
            .collect::<Result<Vec<_>>>()?;
        entities.push(EntityId::from(entity));
        rows.push(row);
    }
    let table = ScoreTable::new(entities, layers, rows)?;
    table.ensure_valid()?;
    Ok(table)
}

/// Writes a score table; values use the shortest representation that
/// parses back to the same number.
pub fn write_score_table<T: Scalar, W: Write>(table: &ScoreTable<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["entity".to_string()];
    header.extend(table.layers().iter().map(|l| l.0.clone()));
    w.write_record(&header)?;
    for (e, id) in table.entities().iter().enumerate() {
        let mut rec = vec![id.0.clone()];
        rec.extend((0..table.n_layers()).map(|l| table.get(e, l).map_or(String::new(), |v| v.to_string())));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_covariates<R: Read>(input: R) -> Result<CovariateTable> {
    let mut rdr = reader(input);
    let h = headers(&mut rdr, "covariates")?;
    if h != ["entity", "age", "gender"] {
        return Err(Error::InvalidInput(format!(
            "covariates CSV header must be `entity,age,gender`, found `{}`",
            h.join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in records(&mut rdr, 3, "covariates")? {
        let age = parse_cell(&rec[1], &rec[0], "age")?
            .ok_or_else(|| Error::InvalidInput(format!("entity `{}` has no age", &rec[0])))?;
        if rec[2].is_empty() {
            return Err(Error::InvalidInput(format!("entity `{}` has no gender", &rec[0])));
        }
        rows.push((EntityId::from(&rec[0]), Covariates { age, gender: rec[2].to_string() }));
    }
    CovariateTable::new(rows)
}

pub fn read_targets<R: Read>(input: R) -> Result<TargetTable> {
    let mut rdr = reader(input);
    let h = headers(&mut rdr, "targets")?;
    let layers = h[1..]
        .iter()
        .map(|c| {
            c.strip_suffix(TARGET_SUFFIX)
                .filter(|l| !l.is_empty())
                .map(LayerId::from)
                .ok_or_else(|| Error::InvalidInput(format!("targets CSV: column `{c}` must be named `<layer>{TARGET_SUFFIX}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for rec in records(&mut rdr, h.len(), "targets")? {
        let cells = (1..h.len()).map(|i| parse_cell(&rec[i], &rec[0], &h[i])).collect::<Result<Vec<_>>>()?;
        if let Some(v) = cells.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("entity `{}` has a non-finite target {v}", &rec[0])));
        }
        rows.push((EntityId::from(&rec[0]), cells));
    }
    TargetTable::new(layers, rows)
}

/// One line per report row, for spreadsheet diffing.
pub fn write_regression_csv<W: Write>(report: &RegressionReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
