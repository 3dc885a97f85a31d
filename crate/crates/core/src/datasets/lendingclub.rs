use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{numbered, parse_error, ColumnNote, LabeledDataset};
use crate::data::Dataset;
use crate::error::{Error, Result};

const POLICY_PREFIX: &str = "Does not meet the credit policy. Status:";

/// Raw column names and value sets used to derive the loan attributes.
/// Defaults follow the 2019 LendingClub loan export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LendingClubSchema {
    pub loan_status: String,
    pub paid_status: Vec<String>,
    pub excluded_status: Vec<String>,
    pub home_ownership: String,
    pub homeowner_values: Vec<String>,
    pub delinquencies: String,
    pub verification_status: String,
    pub verified_values: Vec<String>,
    pub public_records: String,
    pub application_type: String,
    pub individual_values: Vec<String>,
    pub ever_120_days_past_due: String,
    pub accounts_opened_12m: String,
    pub bankruptcies: String,
    pub loan_amount: String,
    pub annual_income: String,
    pub term: String,
    pub long_term_months: u32,
}

impl Default for LendingClubSchema {
    fn default() -> Self {
        let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect();
        LendingClubSchema {
            loan_status: "loan_status".into(),
            paid_status: v(&["Fully Paid"]),
            excluded_status: v(&["Current"]),
            home_ownership: "home_ownership".into(),
            homeowner_values: v(&["OWN", "MORTGAGE"]),
            delinquencies: "delinq_2yrs".into(),
            verification_status: "verification_status".into(),
            verified_values: v(&["Verified", "Source Verified"]),
            public_records: "pub_rec".into(),
            application_type: "application_type".into(),
            individual_values: v(&["Individual"]),
            ever_120_days_past_due: "num_accts_ever_120_pd".into(),
            accounts_opened_12m: "num_tl_op_past_12m".into(),
            bankruptcies: "pub_rec_bankruptcies".into(),
            loan_amount: "loan_amnt".into(),
            annual_income: "annual_inc".into(),
            term: "term".into(),
            long_term_months: 60,
        }
    }
}

impl LendingClubSchema {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Loads a LendingClub loan export with the default schema. See
/// [`load_lendingclub_with`].
pub fn load_lendingclub(path: impl AsRef<Path>, threshold: Option<f64>) -> Result<LabeledDataset> {
    load_lendingclub_with(path, threshold, &LendingClubSchema::default())
}

/// Loads a LendingClub loan export.
///
/// Loans with an excluded status ("Current") are dropped, as are rows with a
/// blank or non-positive annual income or a blank loan amount; the counts are
/// reported as warnings. `Y = 1` iff the loan was fully paid. `X9` is 1 iff
/// loan amount / annual income exceeds `threshold`, or the median ratio of
/// the kept rows when no threshold is given. Preamble lines before the
/// header and short footer lines are skipped.
pub fn load_lendingclub_with(
    path: impl AsRef<Path>,
    threshold: Option<f64>,
    schema: &LendingClubSchema,
) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(File::open(path)?);
    let mut records = reader.records();

    let mut header = None;
    let mut line = 0;
    for rec in records.by_ref() {
        let rec = rec?;
        line += 1;
        if rec.iter().any(|f| f.trim() == schema.loan_status) {
            header = Some(rec);
            break;
        }
    }
    let header = header.ok_or_else(|| {
        Error::Format(format!(
            "{}: no header row with column {:?}",
            path.display(),
            schema.loan_status
        ))
    })?;
    let index: HashMap<&str, usize> = header
        .iter()
        .enumerate()
        .map(|(i, h)| (h.trim(), i))
        .collect();
    let col = |name: &str| -> Result<usize> {
        index.get(name).copied().ok_or_else(|| {
            Error::Format(format!(
                "{}: missing required column {name:?}",
                path.display()
            ))
        })
    };
    let status = col(&schema.loan_status)?;
    let flags = [
        col(&schema.home_ownership)?,
        col(&schema.delinquencies)?,
        col(&schema.verification_status)?,
        col(&schema.public_records)?,
        col(&schema.application_type)?,
        col(&schema.ever_120_days_past_due)?,
        col(&schema.accounts_opened_12m)?,
        col(&schema.bankruptcies)?,
    ];
    let amount = col(&schema.loan_amount)?;
    let income = col(&schema.annual_income)?;
    let term = col(&schema.term)?;

    let is_in = |set: &[String], v: &str| set.iter().any(|s| s == v);
    let mut skipped: BTreeMap<&str, usize> = BTreeMap::new();
    let mut blank_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut inputs: Vec<Vec<u8>> = Vec::new();
    let mut ratios: Vec<f64> = Vec::new();
    let mut outputs: Vec<Vec<u8>> = Vec::new();

    for rec in records {
        let rec = rec?;
        line += 1;
        if rec.len() < header.len() {
            *skipped.entry("short lines").or_default() += 1;
            continue;
        }
        let field = |i: usize| rec.get(i).unwrap_or("").trim();
        let raw_status = field(status);
        let st = raw_status.strip_prefix(POLICY_PREFIX).unwrap_or(raw_status);
        if is_in(&schema.excluded_status, st) {
            *skipped.entry("excluded status").or_default() += 1;
            continue;
        }
        let inc: Option<f64> = field(income).parse().ok().filter(|v: &f64| *v > 0.0);
        let Some(inc) = inc else {
            *skipped.entry("blank or zero income").or_default() += 1;
            continue;
        };
        let Ok(amt) = field(amount).parse::<f64>() else {
            *skipped.entry("blank loan amount").or_default() += 1;
            continue;
        };
        let mut count_flag = |i: usize| -> Result<u8> {
            let v = field(i);
            if v.is_empty() {
                *blank_counts
                    .entry(header[i].trim().to_string())
                    .or_default() += 1;
                return Ok(0);
            }
            let x: f64 = v.parse().map_err(|_| {
                parse_error(
                    path,
                    line,
                    format!("{:?}: not a number: {v:?}", header[i].trim()),
                )
            })?;
            Ok(u8::from(x > 0.0))
        };
        let months: u32 = field(term)
            .chars()
            .filter(char::is_ascii_digit)
            .collect::<String>()
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad term {:?}", field(term))))?;
        let row = vec![
            u8::from(is_in(&schema.homeowner_values, field(flags[0]))),
            count_flag(flags[1])?,
            u8::from(is_in(&schema.verified_values, field(flags[2]))),
            count_flag(flags[3])?,
            u8::from(is_in(&schema.individual_values, field(flags[4]))),
            count_flag(flags[5])?,
            count_flag(flags[6])?,
            count_flag(flags[7])?,
            0,
            u8::from(months == schema.long_term_months),
        ];
        inputs.push(row);
        ratios.push(amt / inc);
        outputs.push(vec![u8::from(is_in(&schema.paid_status, st))]);
    }
    if inputs.is_empty() {
        return Err(parse_error(path, line, "no loans left after filtering"));
    }

    let mu = match threshold {
        Some(mu) => mu,
        None => median(&ratios),
    };
    for (row, r) in inputs.iter_mut().zip(&ratios) {
        row[8] = u8::from(*r > mu);
    }

    let mut warnings: Vec<String> = skipped
        .iter()
        .map(|(why, n)| format!("dropped {n} rows: {why}"))
        .collect();
    warnings.extend(
        blank_counts
            .iter()
            .map(|(c, n)| format!("{n} blank values in {c:?} read as 0")),
    );

    let data = Dataset::from_rows(&inputs, &outputs, Some(vec![2; 10]))?
        .with_names(numbered("X", 10), vec!["Y".to_string()])?;
    let list = |v: &[String]| v.join("|");
    let mut columns = vec![
        ColumnNote::new(
            "X1",
            "home ownership",
            &schema.home_ownership,
            &format!("1 iff in {}", list(&schema.homeowner_values)),
        ),
        ColumnNote::new(
            "X2",
            "delinquency in the past two years",
            &schema.delinquencies,
            "1 iff > 0",
        ),
        ColumnNote::new(
            "X3",
            "reported income verified",
            &schema.verification_status,
            &format!("1 iff in {}", list(&schema.verified_values)),
        ),
        ColumnNote::new("X4", "public records", &schema.public_records, "1 iff > 0"),
        ColumnNote::new(
            "X5",
            "individual application",
            &schema.application_type,
            &format!("1 iff in {}", list(&schema.individual_values)),
        ),
        ColumnNote::new(
            "X6",
            "ever 120 days past due",
            &schema.ever_120_days_past_due,
            "1 iff > 0",
        ),
        ColumnNote::new(
            "X7",
            "accounts opened in the last 12 months",
            &schema.accounts_opened_12m,
            "1 iff > 0",
        ),
        ColumnNote::new("X8", "bankruptcies", &schema.bankruptcies, "1 iff > 0"),
        ColumnNote::new(
            "X9",
            "loan to income ratio",
            &format!("{}/{}", schema.loan_amount, schema.annual_income),
            if threshold.is_some() {
                "1 iff ratio > given threshold"
            } else {
                "1 iff ratio > median ratio"
            },
        )
        .with_threshold(mu),
        ColumnNote::new(
            "X10",
            "long loan term",
            &schema.term,
            &format!("1 iff {} months", schema.long_term_months),
        ),
    ];
    columns.push(ColumnNote::new(
        "Y",
        "loan fully paid",
        &schema.loan_status,
        &format!(
            "1 iff in {}, rows in {} excluded",
            list(&schema.paid_status),
            list(&schema.excluded_status)
        ),
    ));
    LabeledDataset::new(data, columns, warnings)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}
