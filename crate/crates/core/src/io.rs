//! Rankings files.
//!
//! CSV: one row per judge, `n` columns, optional `v1,...,vn` header. An empty
//! cell or `NA` marks an unranked object. JSON: an array of arrays with `null`
//! for unranked objects, or a full [`Instance`] object. Ragged input is
//! rejected by both readers.

use std::path::Path;

use crate::error::{Error, Result};
use crate::ranking::{Instance, Ranking};

/// Version tag of the rankings/instance file schemas.
pub const FORMAT_VERSION: u32 = 1;

fn parse_cell(cell: &str, row: usize, col: usize) -> Result<Option<i64>> {
    let cell = cell.trim();
    if cell.is_empty() || cell.eq_ignore_ascii_case("NA") {
        return Ok(None);
    }
    cell.parse::<i64>()
        .map(Some)
        .map_err(|_| Error::Parse(format!("row {row}, column {col}: {cell:?} is not an integer position")))
}

fn is_header(record: &csv::StringRecord) -> bool {
    record.iter().enumerate().all(|(i, c)| c.trim().eq_ignore_ascii_case(&format!("v{}", i + 1)))
}

fn check_rectangular(rows: &[Ranking]) -> Result<()> {
    if let Some(first) = rows.first() {
        if let Some((idx, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != first.len()) {
            return Err(Error::Parse(format!(
                "ragged input: row {} has {} columns, expected {}",
                idx + 1,
                r.len(),
                first.len()
            )));
        }
    }
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<Ranking>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if idx == 0 && is_header(&record) {
            continue;
        }
        if record.len() == 1 && record[0].trim().is_empty() {
            continue;
        }
        let positions = record
            .iter()
            .enumerate()
            .map(|(col, c)| parse_cell(c, idx + 1, col + 1))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Ranking::new(positions)?);
    }
    check_rectangular(&rows)?;
    Ok(rows)
}

pub fn parse_json(text: &str) -> Result<Vec<Ranking>> {
    Ok(parse_json_instance(text)?.judges().to_vec())
}

/// Accepts either a bare array of rankings or a serialized [`Instance`].
pub fn parse_json_instance(text: &str) -> Result<Instance> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.is_array() {
        let rows: Vec<Ranking> = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        check_rectangular(&rows)?;
        return Instance::from_judges(rows);
    }
    let inst: Instance = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    inst.check()?;
    Ok(inst)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads rankings from a `.json` or CSV file (any other extension).
pub fn read_rankings(path: impl AsRef<Path>) -> Result<Vec<Ranking>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if is_json(path) {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if is_json(path) {
        parse_json_instance(&text)
    } else {
        Instance::from_judges(parse_csv(&text)?)
    }
}

/// CSV with a `v1..vn` header and `NA` for unranked objects.
pub fn to_csv(rankings: &[Ranking]) -> String {
    let mut out = String::new();
    if let Some(first) = rankings.first() {
        let header: Vec<String> = (1..=first.len()).map(|i| format!("v{i}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
    }
    for r in rankings {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn write_csv(path: impl AsRef<Path>, rankings: &[Ranking]) -> Result<()> {
    std::fs::write(path, to_csv(rankings))?;
    Ok(())
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(inst).expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header_and_nulls() {
        let rows = parse_csv("v1,v2,v3\n1,2,NA\n,1,1\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].positions(), &[Some(1), Some(2), None]);
        assert_eq!(rows[1].positions(), &[None, Some(1), Some(1)]);
    }

    #[test]
    fn csv_without_header() {
        let rows = parse_csv("1, 2 ,3\n").unwrap();
        assert_eq!(rows, vec![Ranking::identity(3)]);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(parse_csv("1,2,3\n1,2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_json("[[1,2],[1]]"), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_cells_rejected() {
        assert!(matches!(parse_csv("1,x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_csv("1,0\n"), Err(Error::NonPositivePosition { .. })));
    }

    #[test]
    fn json_instance_round_trip() {
        let inst = Instance::from_judges(parse_json("[[1,null,2],[null,1,1]]").unwrap())
            .unwrap()
            .with_metadata(serde_json::json!({"generator": "test"}));
        let back = parse_json_instance(&instance_to_json(&inst)).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn csv_round_trip() {
        let rows = parse_csv("1,NA,2\nNA,1,1\n").unwrap();
        assert_eq!(parse_csv(&to_csv(&rows)).unwrap(), rows);
    }
}
