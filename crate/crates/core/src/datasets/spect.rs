use std::path::Path;

use super::{data_lines, numbered, parse_error, read_text, ColumnNote, LabeledDataset};
use crate::data::Dataset;
use crate::error::Result;

const FEATURES: usize = 22;

/// Loads one SPECT Heart file: comma-separated 0/1 values, the diagnosis
/// label first and then 22 binary features. The label is kept as-is
/// (`Y = 1` is the majority "normal" class in the standard split).
pub fn load_spect_file(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (line, row) in data_lines(&text) {
        let bits = row
            .split(',')
            .map(|f| match f.trim() {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(parse_error(
                    path,
                    line,
                    format!("expected 0 or 1, found {other:?}"),
                )),
            })
            .collect::<Result<Vec<u8>>>()?;
        if bits.len() != FEATURES + 1 {
            return Err(parse_error(
                path,
                line,
                format!("expected {} fields, found {}", FEATURES + 1, bits.len()),
            ));
        }
        outputs.push(vec![bits[0]]);
        inputs.push(bits[1..].to_vec());
    }
    if inputs.is_empty() {
        return Err(parse_error(path, 0, "no data rows"));
    }
    let data = Dataset::from_rows(&inputs, &outputs, Some(vec![2; FEATURES]))?
        .with_names(numbered("X", FEATURES), vec!["Y".to_string()])?;
    let mut columns: Vec<ColumnNote> = (1..=FEATURES)
        .map(|j| {
            ColumnNote::new(
                &format!("X{j}"),
                &format!("partial diagnosis feature {j}"),
                &format!("F{j}"),
                "as is",
            )
        })
        .collect();
    columns.push(ColumnNote::new(
        "Y",
        "overall diagnosis",
        "OVERALL_DIAGNOSIS",
        "as is",
    ));
    LabeledDataset::new(data, columns, Vec::new())
}

/// Loads the SPECT training and test splits.
pub fn load_spect(
    train: impl AsRef<Path>,
    test: impl AsRef<Path>,
) -> Result<(LabeledDataset, LabeledDataset)> {
    Ok((load_spect_file(train)?, load_spect_file(test)?))
}
