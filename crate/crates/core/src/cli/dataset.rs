//! CSV datasets: one observation per row, eight columns
//! `x_l,x_m1,x_m2,x_r,y_l,y_m1,y_m2,y_r`. Crisp values repeat one number four times.

use std::io::Read;

use super::CliError;
use crate::coeffs::FuzzyObservation;
use crate::fuznum::TrapezoidalFuzzyNumber;

pub const COLUMNS: [&str; 8] = [
    "x_l", "x_m1", "x_m2", "x_r", "y_l", "y_m1", "y_m2", "y_r",
];

pub fn read_dataset<R: Read>(reader: R) -> Result<Vec<FuzzyObservation>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| CliError::Parse(format!("cannot read header: {e}")))?
        .clone();
    if headers.len() != COLUMNS.len()
        || headers
            .iter()
            .zip(COLUMNS)
            .any(|(h, want)| !h.eq_ignore_ascii_case(want))
    {
        return Err(CliError::Parse(format!(
            "header must be {}, got {}",
            COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut data = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| CliError::Parse(format!("row {row}: {e}")))?;
        if record.len() != COLUMNS.len() {
            return Err(CliError::Parse(format!(
                "row {row}: expected {} fields, got {}",
                COLUMNS.len(),
                record.len()
            )));
        }
        let mut v = [0.0; 8];
        for (k, field) in record.iter().enumerate() {
            v[k] = field.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| {
                CliError::Parse(format!(
                    "row {row}, column {}: cannot parse '{field}' as a finite number",
                    COLUMNS[k]
                ))
            })?;
        }
        let x = TrapezoidalFuzzyNumber::new(v[0], v[1], v[2], v[3])
            .map_err(|e| CliError::Validation(format!("row {row}: x {e}")))?;
        let y = TrapezoidalFuzzyNumber::new(v[4], v[5], v[6], v[7])
            .map_err(|e| CliError::Validation(format!("row {row}: y {e}")))?;
        data.push(FuzzyObservation::new(x, y));
    }
    if data.len() < 2 {
        return Err(CliError::Validation(format!(
            "dataset needs at least 2 rows, got {}",
            data.len()
        )));
    }
    Ok(data)
}
