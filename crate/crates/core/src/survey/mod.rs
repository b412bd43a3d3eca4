//! Reader-impression survey analysis: contingency tables, chi-square tests,
//! Cramér's V and per-pattern impression percentages.
//!
//! Every (respondent, title) answer is one counting event.

pub mod chi2;
pub mod synth;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::model::{ObligatoryPattern, OptionalPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readership {
    Unconcerned,
    Commoner,
    Engineer,
    Researcher,
}

impl Readership {
    pub const ALL: [Readership; 4] = [
        Readership::Unconcerned,
        Readership::Commoner,
        Readership::Engineer,
        Readership::Researcher,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Readership::Unconcerned => "unconcerned",
            Readership::Commoner => "commoner",
            Readership::Engineer => "engineer",
            Readership::Researcher => "researcher",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Impression {
    Comprehensible,
    PositiveFeeling,
    Interesting,
}

impl Impression {
    pub const ALL: [Impression; 3] = [Impression::Comprehensible, Impression::PositiveFeeling, Impression::Interesting];

    pub fn as_str(self) -> &'static str {
        match self {
            Impression::Comprehensible => "comprehensible",
            Impression::PositiveFeeling => "positive_feeling",
            Impression::Interesting => "interesting",
        }
    }
}

impl fmt::Display for Readership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Impression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Main information source named by a concerned respondent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoSource {
    General,
    Trade,
    Academic,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurveyError {
    #[error("inconsistent preliminary answers: {0}")]
    InconsistentAnswers(String),
    #[error("degenerate contingency table: {0}")]
    DegenerateTable(String),
    #[error("no data for {readership}/{impression} pattern {pattern}")]
    MissingCell {
        readership: Readership,
        impression: Impression,
        pattern: String,
    },
    #[error("invalid generation target: {0}")]
    InvalidTarget(String),
}

pub fn classify_readership(concerned: bool, source: Option<InfoSource>) -> Result<Readership, SurveyError> {
    match (concerned, source) {
        (false, None) => Ok(Readership::Unconcerned),
        (true, Some(InfoSource::General)) => Ok(Readership::Commoner),
        (true, Some(InfoSource::Trade)) => Ok(Readership::Engineer),
        (true, Some(InfoSource::Academic)) => Ok(Readership::Researcher),
        (false, Some(_)) => Err(SurveyError::InconsistentAnswers(
            "information source given by an unconcerned respondent".into(),
        )),
        (true, None) => Err(SurveyError::InconsistentAnswers(
            "concerned respondent without an information source".into(),
        )),
    }
}

/// The rated title, reduced to what the analysis needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleRef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub technology_id: Option<String>,
    pub obligatory: ObligatoryPattern,
    pub optional: OptionalPattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawResponse")]
pub struct SurveyResponse {
    pub respondent_id: String,
    pub field_id: String,
    pub readership: Readership,
    pub title: TitleRef,
    pub answers: BTreeMap<Impression, bool>,
}

/// Input form of a response: either a readership or the raw preliminary answers.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResponse {
    respondent_id: String,
    field_id: String,
    #[serde(default)]
    readership: Option<Readership>,
    #[serde(default)]
    concerned: Option<bool>,
    #[serde(default)]
    source: Option<InfoSource>,
    title: TitleRef,
    answers: BTreeMap<Impression, bool>,
}

impl TryFrom<RawResponse> for SurveyResponse {
    type Error = SurveyError;

    fn try_from(raw: RawResponse) -> Result<Self, SurveyError> {
        let readership = match (raw.readership, raw.concerned) {
            (Some(r), None) if raw.source.is_none() => r,
            (None, Some(concerned)) => classify_readership(concerned, raw.source)?,
            (None, None) => {
                return Err(SurveyError::InconsistentAnswers(
                    "neither readership nor preliminary answers given".into(),
                ))
            }
            _ => {
                return Err(SurveyError::InconsistentAnswers(
                    "readership given together with preliminary answers".into(),
                ))
            }
        };
        if let Some(missing) = Impression::ALL.iter().find(|i| !raw.answers.contains_key(i)) {
            return Err(SurveyError::InconsistentAnswers(format!("no answer for {missing}")));
        }
        Ok(SurveyResponse {
            respondent_id: raw.respondent_id,
            field_id: raw.field_id,
            readership,
            title: raw.title,
            answers: raw.answers,
        })
    }
}

/// Which pattern family forms the table rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternAxis {
    #[default]
    Obligatory,
    Optional,
}

impl PatternAxis {
    pub fn rows(self) -> usize {
        match self {
            PatternAxis::Obligatory => ObligatoryPattern::ALL.len(),
            PatternAxis::Optional => OptionalPattern::ALL.len(),
        }
    }

    pub fn labels(self) -> Vec<&'static str> {
        match self {
            PatternAxis::Obligatory => ObligatoryPattern::ALL.iter().map(|p| p.label()).collect(),
            PatternAxis::Optional => OptionalPattern::ALL.iter().map(|p| p.label()).collect(),
        }
    }

    pub fn row_of(self, title: &TitleRef) -> usize {
        match self {
            PatternAxis::Obligatory => title.obligatory.index(),
            PatternAxis::Optional => title.optional.index(),
        }
    }
}

/// Pattern × (yes, no) counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    pub axis: PatternAxis,
    pub cells: Vec<[u64; 2]>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn empty(axis: PatternAxis) -> Self {
        ContingencyTable {
            axis,
            cells: vec![[0, 0]; axis.rows()],
            n: 0,
        }
    }

    /// Builds a table from explicit rows; the row count picks the axis (3 or 4).
    pub fn from_rows(rows: &[[u64; 2]]) -> Self {
        let axis = if rows.len() == PatternAxis::Optional.rows() {
            PatternAxis::Optional
        } else {
            assert_eq!(rows.len(), PatternAxis::Obligatory.rows(), "table needs 3 or 4 rows");
            PatternAxis::Obligatory
        };
        ContingencyTable {
            axis,
            cells: rows.to_vec(),
            n: rows.iter().flatten().sum(),
        }
    }

    pub fn df(&self) -> u32 {
        self.cells.len() as u32 - 1
    }

    fn check(&self) -> Result<(), SurveyError> {
        let labels = self.axis.labels();
        let mut problems = Vec::new();
        if self.n == 0 {
            problems.push("table is empty".to_string());
        } else {
            for (label, row) in labels.iter().zip(&self.cells) {
                if row[0] + row[1] == 0 {
                    problems.push(format!("row {label} is empty"));
                }
            }
            for (col, name) in ["yes", "no"].iter().enumerate() {
                if self.cells.iter().all(|r| r[col] == 0) {
                    problems.push(format!("column {name} is empty"));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SurveyError::DegenerateTable(problems.join(", ")))
        }
    }
}

pub fn contingency_table(
    responses: &[SurveyResponse],
    impression: Impression,
    readership: Readership,
    axis: PatternAxis,
) -> ContingencyTable {
    let mut table = ContingencyTable::empty(axis);
    for r in responses.iter().filter(|r| r.readership == readership) {
        if let Some(&yes) = r.answers.get(&impression) {
            table.cells[axis.row_of(&r.title)][if yes { 0 } else { 1 }] += 1;
            table.n += 1;
        }
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignificanceBucket {
    NotSig,
    Sig5pct,
    Sig1pct,
}

impl SignificanceBucket {
    pub fn as_str(self) -> &'static str {
        match self {
            SignificanceBucket::Sig1pct => "sig_1pct",
            SignificanceBucket::Sig5pct => "sig_5pct",
            SignificanceBucket::NotSig => "not_sig",
        }
    }

    pub fn of(chi_square: f64, df: u32) -> Self {
        let df = f64::from(df);
        if chi_square >= chi2::quantile(0.99, df) {
            SignificanceBucket::Sig1pct
        } else if chi_square >= chi2::quantile(0.95, df) {
            SignificanceBucket::Sig5pct
        } else {
            SignificanceBucket::NotSig
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub chi_square: f64,
    pub df: u32,
    pub p_value: f64,
    pub significance: SignificanceBucket,
    pub cramers_v: f64,
}

/// Pearson statistic without continuity correction.
pub fn chi_square_statistic(table: &ContingencyTable) -> Result<f64, SurveyError> {
    table.check()?;
    let n = table.n as f64;
    let col = [0, 1].map(|j| table.cells.iter().map(|r| r[j]).sum::<u64>() as f64);
    let mut stat = 0.0;
    for row in &table.cells {
        let row_total = (row[0] + row[1]) as f64;
        for j in 0..2 {
            let expected = row_total * col[j] / n;
            let d = row[j] as f64 - expected;
            stat += d * d / expected;
        }
    }
    Ok(stat)
}

pub fn cramers_v(table: &ContingencyTable) -> Result<f64, SurveyError> {
    let stat = chi_square_statistic(table)?;
    let k = table.cells.len().min(2) as f64;
    Ok((stat / (table.n as f64 * (k - 1.0))).sqrt().min(1.0))
}

pub fn chi_square_test(table: &ContingencyTable) -> Result<TestResult, SurveyError> {
    let chi_square = chi_square_statistic(table)?;
    let df = table.df();
    let k = table.cells.len().min(2) as f64;
    Ok(TestResult {
        chi_square,
        df,
        p_value: chi2::sf(chi_square, f64::from(df)),
        significance: SignificanceBucket::of(chi_square, df),
        cramers_v: (chi_square / (table.n as f64 * (k - 1.0))).sqrt().min(1.0),
    })
}

/// Yes-percentages per pattern row; `None` marks a row without data.
#[derive(Debug, Clone, PartialEq)]
pub struct Percentages {
    pub axis: PatternAxis,
    pub values: BTreeMap<(Readership, Impression), Vec<Option<f64>>>,
}

impl Percentages {
    pub fn get(&self, readership: Readership, impression: Impression) -> &[Option<f64>] {
        &self.values[&(readership, impression)]
    }
}

pub fn impression_percentages(responses: &[SurveyResponse], axis: PatternAxis) -> Percentages {
    let mut values = BTreeMap::new();
    for r in Readership::ALL {
        for i in Impression::ALL {
            let t = contingency_table(responses, i, r, axis);
            let row = t
                .cells
                .iter()
                .map(|c| {
                    let total = c[0] + c[1];
                    (total > 0).then(|| 100.0 * c[0] as f64 / total as f64)
                })
                .collect();
            values.insert((r, i), row);
        }
    }
    Percentages { axis, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Increasing,
    NonIncreasing,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::NonIncreasing => "non-increasing",
        }
    }

    /// Increasing means non-decreasing along the rows with at least one strict rise.
    pub fn of(values: &[f64]) -> Self {
        let ordered = values.windows(2).all(|w| w[0] <= w[1]);
        let rises = values.windows(2).any(|w| w[0] < w[1]);
        if ordered && rises {
            Trend::Increasing
        } else {
            Trend::NonIncreasing
        }
    }
}

pub fn monotonicity_report(percentages: &Percentages) -> Result<BTreeMap<(Readership, Impression), Trend>, SurveyError> {
    let labels = percentages.axis.labels();
    let mut out = BTreeMap::new();
    for (&(readership, impression), row) in &percentages.values {
        let mut values = Vec::with_capacity(row.len());
        for (label, v) in labels.iter().zip(row) {
            values.push(v.ok_or_else(|| SurveyError::MissingCell {
                readership,
                impression,
                pattern: label.to_string(),
            })?);
        }
        out.insert((readership, impression), Trend::of(&values));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullReport {
    pub axis: PatternAxis,
    pub results: BTreeMap<(Impression, Readership), (ContingencyTable, TestResult)>,
    pub percentages: Percentages,
    /// Absent when some pattern row has no data.
    pub trends: Option<BTreeMap<(Readership, Impression), Trend>>,
}

pub fn full_report(responses: &[SurveyResponse], axis: PatternAxis) -> Result<FullReport, SurveyError> {
    let mut results = BTreeMap::new();
    let mut degenerate = Vec::new();
    for i in Impression::ALL {
        for r in Readership::ALL {
            let table = contingency_table(responses, i, r, axis);
            match chi_square_test(&table) {
                Ok(test) => {
                    results.insert((i, r), (table, test));
                }
                Err(e) => degenerate.push(format!("{i}/{r} ({})", describe(&e))),
            }
        }
    }
    if !degenerate.is_empty() {
        return Err(SurveyError::DegenerateTable(degenerate.join("; ")));
    }
    let percentages = impression_percentages(responses, axis);
    let trends = monotonicity_report(&percentages).ok();
    Ok(FullReport {
        axis,
        results,
        percentages,
        trends,
    })
}

fn describe(e: &SurveyError) -> String {
    match e {
        SurveyError::DegenerateTable(what) => what.clone(),
        other => other.to_string(),
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// One row per (impression, readership) test.
pub fn write_report_csv<W: Write>(out: W, report: &FullReport) -> csv::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["impression", "readership", "n", "chi_square", "df", "p_value", "significance", "cramers_v"])?;
    for ((i, r), (table, test)) in &report.results {
        w.write_record([
            i.as_str(),
            r.as_str(),
            &table.n.to_string(),
            &format!("{:.6}", test.chi_square),
            &test.df.to_string(),
            &format!("{:.6e}", test.p_value),
            test.significance.as_str(),
            &format!("{:.4}", test.cramers_v),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Wide percentage matrix: one row per (readership, impression), one column per pattern.
pub fn write_percentages_csv<W: Write>(out: W, report: &FullReport) -> csv::Result<()> {
    let mut w = csv_writer(out);
    let mut header = vec!["readership", "impression"];
    header.extend(report.axis.labels());
    header.push("trend");
    w.write_record(&header)?;
    for (&(r, i), row) in &report.percentages.values {
        let mut record = vec![r.as_str().to_string(), i.as_str().to_string()];
        record.extend(row.iter().map(|v| v.map(|p| format!("{p:.2}")).unwrap_or_else(|| "no-data".into())));
        let trend = report
            .trends
            .as_ref()
            .and_then(|t| t.get(&(r, i)))
            .map(|t| t.as_str())
            .unwrap_or("no-data");
        record.push(trend.to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
