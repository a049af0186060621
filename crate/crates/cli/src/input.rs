use std::fs::File;
use std::path::Path;

use crate::error::CliError;

fn reader(path: &Path) -> Result<csv::Reader<File>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

fn number(field: &str, path: &Path, line: u64) -> Result<f64, CliError> {
    let v: f64 = field.parse().map_err(|_| {
        CliError::Parse(format!(
            "{}:{line}: `{field}` is not a number",
            path.display()
        ))
    })?;
    if !v.is_finite() {
        return Err(CliError::Parse(format!(
            "{}:{line}: `{field}` is not a finite number",
            path.display()
        )));
    }
    Ok(v)
}

fn is_header(record: &csv::StringRecord, names: &[&str]) -> bool {
    record.len() == names.len()
        && record
            .iter()
            .zip(names)
            .all(|(f, n)| f.eq_ignore_ascii_case(n))
}

/// One value per line, optional `value` header.
pub fn read_sequence(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (i, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && is_header(&record, &["value"]) {
            continue;
        }
        if record.len() != 1 {
            return Err(CliError::Parse(format!(
                "{}:{line}: expected one value per line, found {} fields",
                path.display(),
                record.len()
            )));
        }
        values.push(number(&record[0], path, line)?);
    }
    Ok(values)
}

/// `x,y` rows, optional `x,y` header.
pub fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut points = Vec::new();
    for (i, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && is_header(&record, &["x", "y"]) {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::Parse(format!(
                "{}:{line}: expected `x,y`, found {} fields",
                path.display(),
                record.len()
            )));
        }
        points.push((
            number(&record[0], path, line)?,
            number(&record[1], path, line)?,
        ));
    }
    Ok(points)
}

/// `start:end:count` with both endpoints included.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(CliError::Parse(format!(
            "grid `{spec}` is not of the form start:end:count"
        )));
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Parse(format!("grid bound `{s}` is not a finite number")))
    };
    let (start, end) = (num(start)?, num(end)?);
    let count: usize = count
        .parse()
        .map_err(|_| CliError::Parse(format!("grid count `{count}` is not an integer")))?;
    if count < 2 {
        return Err(CliError::Validation(format!(
            "grid count must be at least 2, got {count}"
        )));
    }
    if end < start {
        return Err(CliError::Validation(format!(
            "grid end {end} lies below its start {start}"
        )));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                end
            } else {
                start + (end - start) * i as f64 / last
            }
        })
        .collect())
}

/// Budget override from `NEOCALC_EVAL_BUDGET`, if set.
pub fn eval_budget_override(raw: Option<String>) -> Result<Option<usize>, CliError> {
    match raw {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Validation(format!(
                "NEOCALC_EVAL_BUDGET must be a positive integer, got `{s}`"
            ))),
        },
    }
}
