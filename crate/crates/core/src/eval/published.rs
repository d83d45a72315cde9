//! Published per-verb counts and a consistency audit of the reported totals.

use serde::Serialize;

use super::{aggregate, EvalError, EvalReport};

/// The published per-verb table, shipped with the crate.
pub const PUBLISHED_TABLE: &str = include_str!("../../../../fixtures/published_counts.tsv");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublishedRow {
    pub no: u32,
    pub verb: String,
    pub regular: bool,
    pub generated: usize,
    pub correct: usize,
    pub wrong: usize,
    /// Accuracy as printed, in percent.
    pub printed_accuracy: f64,
}

impl PublishedRow {
    pub fn report(&self) -> Result<EvalReport, EvalError> {
        EvalReport::from_counts(self.generated, self.correct)
    }
}

pub fn parse_published(text: &str) -> Result<Vec<PublishedRow>, EvalError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        if line.trim().is_empty() || line.starts_with('#') || line.starts_with("no\t") {
            continue;
        }
        let err = |reason: String| EvalError::ParseError { file: "published table".into(), line: n, reason };
        let c: Vec<&str> = line.split('\t').collect();
        if c.len() != 7 {
            return Err(err(format!("expected 7 columns, got {}", c.len())));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad count {s:?}")));
        let regular = match c[2] {
            "Regular" => true,
            "Irregular" => false,
            other => return Err(err(format!("bad label {other:?}"))),
        };
        rows.push(PublishedRow {
            no: c[0].parse().map_err(|_| err(format!("bad row number {:?}", c[0])))?,
            verb: c[1].to_string(),
            regular,
            generated: int(c[3])?,
            correct: int(c[4])?,
            wrong: int(c[5])?,
            printed_accuracy: c[6].parse().map_err(|_| err(format!("bad accuracy {:?}", c[6])))?,
        });
    }
    Ok(rows)
}

/// Totals stated in the running text and the totals row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PublishedFigures {
    pub total_generated: usize,
    pub total_correct: usize,
    pub total_wrong_row: usize,
    pub total_errors_text: usize,
    pub overall_accuracy: f64,
    pub regular_generated: usize,
    pub regular_errors: usize,
    pub regular_accuracy: f64,
    pub irregular_generated: usize,
    pub irregular_errors: usize,
    pub irregular_accuracy: f64,
}

impl PublishedFigures {
    pub const REPORTED: PublishedFigures = PublishedFigures {
        total_generated: 26_867,
        total_correct: 26_179,
        total_wrong_row: 688,
        total_errors_text: 668,
        overall_accuracy: 97.4,
        regular_generated: 7_577,
        regular_errors: 8,
        regular_accuracy: 99.6,
        irregular_generated: 19_290,
        irregular_errors: 661,
        irregular_accuracy: 96.6,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditFinding {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub totals: EvalReport,
    pub regular: EvalReport,
    pub irregular: EvalReport,
    pub findings: Vec<AuditFinding>,
}

const TOLERANCE: f64 = 0.1;

fn pct(correct: usize, generated: usize) -> f64 {
    100.0 * correct as f64 / generated as f64
}

/// Recomputes every total from the rows and lists each disagreement with the
/// published figures. Nothing is reconciled silently.
pub fn audit(rows: &[PublishedRow], published: &PublishedFigures) -> Result<AuditReport, EvalError> {
    let mut findings = Vec::new();
    let mut note = |code: &str, message: String| findings.push(AuditFinding { code: code.into(), message });

    let mut reports = Vec::new();
    for r in rows {
        let rep = r.report()?;
        if r.generated - r.correct != r.wrong {
            note("row-count", format!("row {} ({}): {} - {} != {}", r.no, r.verb, r.generated, r.correct, r.wrong));
        }
        if (rep.accuracy_percent() - r.printed_accuracy).abs() > TOLERANCE {
            note(
                "row-accuracy",
                format!("row {} ({}): printed {}% but counts give {:.2}%", r.no, r.verb, r.printed_accuracy, rep.accuracy_percent()),
            );
        }
        reports.push((r.regular, rep));
    }
    let all: Vec<EvalReport> = reports.iter().map(|(_, r)| r.clone()).collect();
    let reg: Vec<EvalReport> = reports.iter().filter(|(g, _)| *g).map(|(_, r)| r.clone()).collect();
    let irr: Vec<EvalReport> = reports.iter().filter(|(g, _)| !*g).map(|(_, r)| r.clone()).collect();
    let totals = aggregate(&all);
    let regular = aggregate(&reg);
    let irregular = aggregate(&irr);
    let p = published;

    if totals.generated != p.total_generated {
        note("total-generated", format!("rows sum to {} generated, totals row says {}", totals.generated, p.total_generated));
    }
    if totals.correct != p.total_correct {
        note("total-correct", format!("rows sum to {} correct, totals row says {}", totals.correct, p.total_correct));
    }
    if totals.wrong != p.total_wrong_row {
        note("total-wrong", format!("rows sum to {} wrong, totals row says {}", totals.wrong, p.total_wrong_row));
    }
    if p.total_errors_text != p.total_wrong_row || totals.wrong != p.total_errors_text {
        note(
            "error-total",
            format!(
                "text reports {} errors; the totals row and the row sum give {} ({} wrong)",
                p.total_errors_text, p.total_wrong_row, totals.wrong
            ),
        );
    }
    let split = p.regular_errors + p.irregular_errors;
    if split != p.total_errors_text {
        note(
            "error-split",
            format!("regular + irregular errors = {} + {} = {}, not {}", p.regular_errors, p.irregular_errors, split, p.total_errors_text),
        );
    }
    if (totals.accuracy_percent() - p.overall_accuracy).abs() > TOLERANCE {
        note("overall-accuracy", format!("counts give {:.2}%, reported {}%", totals.accuracy_percent(), p.overall_accuracy));
    }
    if regular.generated != p.regular_generated {
        note(
            "regular-generated",
            format!("rows labelled Regular sum to {} generated, text says {}", regular.generated, p.regular_generated),
        );
    }
    if regular.wrong != p.regular_errors {
        note("regular-errors", format!("rows labelled Regular sum to {} wrong, text says {}", regular.wrong, p.regular_errors));
    }
    if irregular.generated != p.irregular_generated {
        note(
            "irregular-generated",
            format!("rows labelled Irregular sum to {} generated, text says {}", irregular.generated, p.irregular_generated),
        );
    }
    if irregular.wrong != p.irregular_errors {
        note("irregular-errors", format!("rows labelled Irregular sum to {} wrong, text says {}", irregular.wrong, p.irregular_errors));
    }
    if p.regular_generated + p.irregular_generated != p.total_generated {
        note(
            "generated-split",
            format!("{} + {} != {}", p.regular_generated, p.irregular_generated, p.total_generated),
        );
    }

    // the regular-verb accuracy cannot be reproduced from the stated error
    // count; list the candidate readings
    let with_stated = pct(p.regular_generated - p.regular_errors, p.regular_generated);
    if (with_stated - p.regular_accuracy).abs() > TOLERANCE {
        let mut readings = vec![format!("{} errors give {:.2}%", p.regular_errors, with_stated)];
        if regular.wrong <= p.regular_generated {
            readings.push(format!(
                "{} errors (row sum) over {} give {:.2}%",
                regular.wrong,
                p.regular_generated,
                pct(p.regular_generated - regular.wrong, p.regular_generated)
            ));
        }
        readings.push(format!("row counts alone give {:.2}%", regular.accuracy_percent()));
        note(
            "regular-accuracy",
            format!("reported {}% for regular verbs: {}", p.regular_accuracy, readings.join("; ")),
        );
    }
    let irr_stated = pct(p.irregular_generated - p.irregular_errors, p.irregular_generated);
    if (irr_stated - p.irregular_accuracy).abs() > TOLERANCE {
        note(
            "irregular-accuracy",
            format!("{} errors over {} give {:.2}%, reported {}%", p.irregular_errors, p.irregular_generated, irr_stated, p.irregular_accuracy),
        );
    }

    Ok(AuditReport { totals, regular, irregular, findings })
}
