use std::path::Path;

use super::{data_lines, numbered, parse_error, read_text, ColumnNote, LabeledDataset};
use crate::data::Dataset;
use crate::error::Result;

const SLOTS: [&str; 9] = [
    "top-left-square",
    "top-middle-square",
    "top-right-square",
    "middle-left-square",
    "middle-middle-square",
    "middle-right-square",
    "bottom-left-square",
    "bottom-middle-square",
    "bottom-right-square",
];

/// Loads the Tic-Tac-Toe endgame file: nine comma-separated slots in
/// row-major order starting at the upper left (`x`, `o` or `b`), then
/// `positive` or `negative`.
///
/// Slots are encoded `x -> 2`, `o -> 1`, `b -> 0` (marks 1, -1, 0 in the
/// signed convention); `Y = 1` iff x wins.
pub fn load_tictactoe(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (line, row) in data_lines(&text) {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != 10 {
            return Err(parse_error(
                path,
                line,
                format!("expected 10 fields, found {}", fields.len()),
            ));
        }
        let x = fields[..9]
            .iter()
            .map(|f| match *f {
                "x" => Ok(2u8),
                "o" => Ok(1),
                "b" => Ok(0),
                other => Err(parse_error(path, line, format!("unknown symbol {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let y = match fields[9] {
            "positive" => 1u8,
            "negative" => 0,
            other => return Err(parse_error(path, line, format!("unknown class {other:?}"))),
        };
        inputs.push(x);
        outputs.push(vec![y]);
    }
    if inputs.is_empty() {
        return Err(parse_error(path, 0, "no data rows"));
    }
    let data = Dataset::from_rows(&inputs, &outputs, Some(vec![3; 9]))?
        .with_names(numbered("X", 9), vec!["Y".to_string()])?;
    let mut columns: Vec<ColumnNote> = SLOTS
        .iter()
        .enumerate()
        .map(|(j, s)| {
            ColumnNote::new(
                &format!("X{}", j + 1),
                &s.replace('-', " "),
                s,
                "x -> 2 (mark 1), o -> 1 (mark -1), b -> 0 (empty)",
            )
        })
        .collect();
    columns.push(ColumnNote::new(
        "Y",
        "x wins",
        "Class",
        "positive -> 1, negative -> 0",
    ));
    LabeledDataset::new(data, columns, Vec::new())
}
