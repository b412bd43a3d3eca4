//! Synthetic survey responses planted to exact contingency counts.
//!
//! Respondents follow the allocation layout: respondent `k` sees group `k % 4`,
//! i.e. three titles per obligatory pattern, so a readership with `r`
//! respondents contributes `3r` answer events to each pattern row.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::{cramers_v, ContingencyTable, Impression, Readership, SignificanceBucket, SurveyError, SurveyResponse, TitleRef};
use crate::composer::group_of;
use crate::model::{ObligatoryPattern, OptionalPattern};

/// Planted counts for one readership, rows in obligatory-pattern order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadershipTarget {
    pub events: [u64; 3],
    pub yes: BTreeMap<Impression, [u64; 3]>,
}

impl ReadershipTarget {
    /// Same yes/no table for every impression.
    pub fn uniform(table: [[u64; 2]; 3]) -> Self {
        ReadershipTarget {
            events: table.map(|r| r[0] + r[1]),
            yes: Impression::ALL.iter().map(|i| (*i, table.map(|r| r[0]))).collect(),
        }
    }
}

pub type SurveyTarget = BTreeMap<Readership, ReadershipTarget>;

pub const SYNTH_FIELDS: [&str; 2] = ["electric-transmission", "architectural-engineering"];

/// Titles (technology, optional pattern) that group `group` shows for obligatory row `row`.
fn group_titles(group: usize, row: usize) -> Vec<(usize, OptionalPattern)> {
    let mut out = Vec::new();
    for t in 0..3 {
        for o in OptionalPattern::ALL {
            if group_of(t, row, o.index()) == group {
                out.push((t, o));
            }
        }
    }
    out
}

pub fn generate_responses(target: &SurveyTarget, seed: u64) -> Result<Vec<SurveyResponse>, SurveyError> {
    let mut out = Vec::new();
    for (&readership, t) in target {
        for i in Impression::ALL {
            let yes = t
                .yes
                .get(&i)
                .ok_or_else(|| SurveyError::InvalidTarget(format!("{readership}: no counts for {i}")))?;
            for (row, (&y, &e)) in yes.iter().zip(&t.events).enumerate() {
                if y > e {
                    return Err(SurveyError::InvalidTarget(format!(
                        "{readership}/{i} row {}: {y} yes answers out of {e} events",
                        ObligatoryPattern::ALL[row]
                    )));
                }
            }
        }

        let mut rng = crate::rng::stage(seed, readership as u64);
        // answers[impression][row][event]
        let mut answers: BTreeMap<Impression, Vec<Vec<bool>>> = BTreeMap::new();
        for (&i, yes) in &t.yes {
            let rows = (0..3)
                .map(|row| {
                    let mut v: Vec<bool> = (0..t.events[row]).map(|j| j < yes[row]).collect();
                    v.shuffle(&mut rng);
                    v
                })
                .collect();
            answers.insert(i, rows);
        }

        let respondents = t.events.iter().map(|e| e.div_ceil(3)).max().unwrap_or(0);
        let prefix = readership.as_str().chars().next().expect("non-empty name");
        for k in 0..respondents {
            let group = (k % 4) as usize;
            let field = SYNTH_FIELDS[(k % 2) as usize];
            for (row, ob) in ObligatoryPattern::ALL.into_iter().enumerate() {
                let titles = group_titles(group, row);
                for (slot, &(tech, optional)) in titles.iter().enumerate() {
                    let event = (3 * k + slot as u64) as usize;
                    if event as u64 >= t.events[row] {
                        break;
                    }
                    out.push(SurveyResponse {
                        respondent_id: format!("{prefix}{k:04}"),
                        field_id: field.to_string(),
                        readership,
                        title: TitleRef {
                            technology_id: Some(format!("{field}-{}", tech + 1)),
                            obligatory: ob,
                            optional,
                        },
                        answers: answers.iter().map(|(i, rows)| (*i, rows[row][event])).collect(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Respondents per readership in the three surveyed fields.
pub const FIELD_RESPONDENTS: [(&str, [u64; 4]); 3] = [
    ("electric-transmission", [151, 114, 69, 48]),
    ("architectural-engineering", [168, 115, 62, 45]),
    ("environmental-science", [108, 153, 71, 53]),
];

/// Respondents per readership for the tuned dataset: the first two fields pooled.
pub fn synthetic_respondents() -> [u64; 4] {
    let [(_, a), (_, b), _] = FIELD_RESPONDENTS;
    [0, 1, 2, 3].map(|i| a[i] + b[i])
}

/// Published effect sizes per impression, readerships in `Readership::ALL` order.
pub const REFERENCE_V: [(Impression, [f64; 4]); 3] = [
    (Impression::Comprehensible, [0.62, 0.59, 0.38, 0.43]),
    (Impression::PositiveFeeling, [0.45, 0.45, 0.22, 0.24]),
    (Impression::Interesting, [0.27, 0.35, 0.22, 0.10]),
];

pub fn reference_grid() -> BTreeMap<(Impression, Readership), (f64, SignificanceBucket)> {
    let mut out = BTreeMap::new();
    for (i, vs) in REFERENCE_V {
        for (r, v) in Readership::ALL.into_iter().zip(vs) {
            let bucket = if (i, r) == (Impression::Interesting, Readership::Researcher) {
                SignificanceBucket::Sig5pct
            } else {
                SignificanceBucket::Sig1pct
            };
            out.insert((i, r), (v, bucket));
        }
    }
    out
}

fn base_rate(i: Impression) -> f64 {
    match i {
        Impression::Comprehensible => 0.55,
        Impression::PositiveFeeling => 0.5,
        Impression::Interesting => 0.4,
    }
}

/// Rising yes counts `[c - s, c, c + s]` over `events` per row, with `s` chosen to land closest to `target_v`.
pub fn tuned_slope(events: u64, base: f64, target_v: f64) -> [u64; 3] {
    let c = (base * events as f64).round() as u64;
    let table = |s: u64| ContingencyTable::from_rows(&[[c - s, events - c + s], [c, events - c], [c + s, events - c - s]]);
    (1..=c.min(events - c))
        .min_by(|&a, &b| {
            let da = (cramers_v(&table(a)).unwrap_or(0.0) - target_v).abs();
            let db = (cramers_v(&table(b)).unwrap_or(0.0) - target_v).abs();
            da.total_cmp(&db)
        })
        .map(|s| [c - s, c, c + s])
        .unwrap_or([c, c, c])
}

/// Target whose tables reproduce the reference effect sizes with rising yes-percentages.
pub fn reference_target() -> SurveyTarget {
    let respondents = synthetic_respondents();
    let mut target = SurveyTarget::new();
    for (ri, r) in Readership::ALL.into_iter().enumerate() {
        let e = 3 * respondents[ri];
        let yes = REFERENCE_V
            .iter()
            .map(|(i, vs)| (*i, tuned_slope(e, base_rate(*i), vs[ri])))
            .collect();
        target.insert(r, ReadershipTarget { events: [e; 3], yes });
    }
    target
}
