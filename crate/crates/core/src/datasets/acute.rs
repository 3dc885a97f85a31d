use std::path::Path;

use super::{data_lines, numbered, parse_error, read_text, ColumnNote, LabeledDataset};
use crate::data::Dataset;
use crate::error::Result;

/// Fever threshold in degrees Celsius; temperatures at or above it map to 1.
pub const FEVER_CELSIUS: f64 = 38.0;

const EXPECTED_ROWS: usize = 120;

const INPUTS: [(&str, &str); 6] = [
    ("temperature", "temperature of patient"),
    ("nausea", "occurrence of nausea"),
    ("lumbar_pain", "lumbar pain"),
    (
        "urine_pushing",
        "urine pushing (continuous need for urination)",
    ),
    ("micturition_pains", "micturition pains"),
    (
        "burning_of_urethra",
        "burning of urethra, itch, swelling of urethra outlet",
    ),
];

const OUTPUTS: [(&str, &str); 2] = [
    ("bladder_inflammation", "inflammation of urinary bladder"),
    ("nephritis", "nephritis of renal pelvis origin"),
];

fn yes_no(field: &str) -> Option<u8> {
    match field.to_ascii_lowercase().as_str() {
        "yes" => Some(1),
        "no" => Some(0),
        _ => None,
    }
}

/// Loads the Acute Inflammations diagnosis file: a temperature (decimal
/// comma or point) followed by seven yes/no fields, separated by tabs or
/// spaces. UTF-16 files with a byte order mark are accepted.
///
/// Inputs `X1..X6` are fever (temperature >= 38.0), nausea, lumbar pain,
/// urine pushing, micturition pains and burning of urethra. Outputs are
/// `Y1` (bladder inflammation) and `Y2` (nephritis). A row count other than
/// 120 is reported as a warning.
pub fn load_acute_inflammations(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (line, row) in data_lines(&text) {
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(parse_error(
                path,
                line,
                format!("expected 8 fields, found {}", fields.len()),
            ));
        }
        let temperature: f64 = fields[0]
            .replace(',', ".")
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad temperature {:?}", fields[0])))?;
        let mut bits = Vec::with_capacity(7);
        for f in &fields[1..] {
            bits.push(
                yes_no(f).ok_or_else(|| {
                    parse_error(path, line, format!("expected yes/no, found {f:?}"))
                })?,
            );
        }
        let mut x = vec![u8::from(temperature >= FEVER_CELSIUS)];
        x.extend(&bits[..5]);
        inputs.push(x);
        outputs.push(bits[5..].to_vec());
    }
    if inputs.is_empty() {
        return Err(parse_error(path, 0, "no data rows"));
    }
    let mut warnings = Vec::new();
    if inputs.len() != EXPECTED_ROWS {
        warnings.push(format!(
            "expected {EXPECTED_ROWS} rows, found {}",
            inputs.len()
        ));
    }
    let data = Dataset::from_rows(&inputs, &outputs, Some(vec![2; 6]))?
        .with_names(numbered("X", 6), numbered("Y", 2))?;
    let mut columns =
        vec![
            ColumnNote::new("X1", INPUTS[0].1, INPUTS[0].0, "1 iff temperature >= 38.0")
                .with_threshold(FEVER_CELSIUS),
        ];
    for (j, (source, description)) in INPUTS.iter().enumerate().skip(1) {
        columns.push(ColumnNote::new(
            &format!("X{}", j + 1),
            description,
            source,
            "yes -> 1, no -> 0",
        ));
    }
    for (i, (source, description)) in OUTPUTS.iter().enumerate() {
        columns.push(ColumnNote::new(
            &format!("Y{}", i + 1),
            description,
            source,
            "yes -> 1, no -> 0",
        ));
    }
    LabeledDataset::new(data, columns, warnings)
}
