//! Deterministic CSV and plain-text rendering of every report.
//!
//! CSV files carry unrounded values; text tables round percentages to whole
//! numbers, half away from zero.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::audit::{ColonizedSds, ConcentrationReport, CoverageReport};
use crate::baseline::csv_cell;
use crate::call_match::{MatchReport, MatchRow, ProfileRow, RefereeProfile};
use crate::error::{Error, Result};
use crate::fss::{ActivityClass, ScoreCard, Skip};

/// Whole-number percentage, halves rounded away from zero.
pub fn round_pct(value: f64) -> i64 {
    value.round() as i64
}

fn count_with_pct(count: usize, pct: f64) -> String {
    format!("{count} ({}%)", round_pct(pct))
}

fn share(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Aligned columns: first column left-aligned, the rest right-aligned.
pub fn text_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut parts = Vec::new();
        for (i, (cell, w)) in cells.zip(&widths).enumerate() {
            parts.push(if i == 0 {
                format!("{cell:<w$}")
            } else {
                format!("{cell:>w$}")
            });
        }
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut headers.iter().copied());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut rule.iter().map(String::as_str));
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

pub fn scorecards_csv(cards: &[ScoreCard]) -> String {
    let mut out = String::from("researcher_id,official_sds,t,fss,percentile,activity_class\n");
    for c in cards {
        let percentile = c.percentile.map(|p| format!("{p:.6}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{:.6},{:.9},{},{}",
            csv_cell(&c.researcher_id),
            csv_cell(&c.official_sds),
            c.t,
            c.fss,
            percentile,
            c.activity_class
        );
    }
    out
}

pub fn load_scorecards(path: &Path) -> Result<Vec<ScoreCard>> {
    #[derive(Deserialize)]
    struct Row {
        researcher_id: String,
        official_sds: String,
        t: f64,
        fss: f64,
        percentile: Option<f64>,
        activity_class: String,
    }
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(file);
    let mut cards = Vec::new();
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| Error::format(path, line, e.to_string()))?;
        let activity_class: ActivityClass = row
            .activity_class
            .parse()
            .map_err(|e: String| Error::format(path, line, e))?;
        if (activity_class == ActivityClass::NonActive) != row.percentile.is_none() {
            return Err(Error::format(
                path,
                line,
                "percentile must be empty exactly for non_active researchers",
            ));
        }
        cards.push(ScoreCard {
            researcher_id: row.researcher_id,
            official_sds: row.official_sds,
            t: row.t,
            fss: row.fss,
            percentile: row.percentile,
            activity_class,
        });
    }
    Ok(cards)
}

pub fn skip_log_csv(skipped: &[Skip]) -> String {
    let mut out = String::from("researcher_id,reason\n");
    for s in skipped {
        let _ = writeln!(
            out,
            "{},{}",
            csv_cell(&s.researcher_id),
            csv_cell(&s.reason)
        );
    }
    out
}

pub fn coverage_csv(report: &CoverageReport) -> String {
    let mut out = String::from(
        "uda_code,uda_name,total_sds,expert_count,academic_count,uncovered_count,uncovered_pct,single_count,single_pct,uncovered_sds,single_expert_sds\n",
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{},{:.6},{},{}",
            csv_cell(&r.uda_code),
            csv_cell(&r.uda_name),
            r.total_sds,
            r.expert_count,
            r.academic_count,
            r.uncovered_sds.len(),
            r.uncovered_pct(),
            r.single_expert_sds.len(),
            r.single_pct(),
            csv_cell(&r.uncovered_sds.join(";")),
            csv_cell(&r.single_expert_sds.join(";")),
        );
    }
    let t = &report.totals;
    let _ = writeln!(
        out,
        ",Total,{},{},{},{},{:.6},{},{:.6},,",
        t.total_sds,
        t.expert_count,
        t.academic_count,
        t.uncovered,
        share(t.uncovered, t.total_sds),
        t.single,
        share(t.single, t.total_sds),
    );
    out
}

pub fn coverage_text(report: &CoverageReport) -> String {
    let expert_sum: usize = report.rows.iter().map(|r| r.expert_count).sum();
    let academic_sum: usize = report.rows.iter().map(|r| r.academic_count).sum();
    let mut rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.uda_name.clone(),
                r.total_sds.to_string(),
                count_with_pct(r.expert_count, share(r.expert_count, expert_sum)),
                count_with_pct(r.academic_count, share(r.academic_count, academic_sum)),
                count_with_pct(r.uncovered_sds.len(), r.uncovered_pct()),
                count_with_pct(r.single_expert_sds.len(), r.single_pct()),
            ]
        })
        .collect();
    let t = &report.totals;
    rows.push(vec![
        "Total".into(),
        t.total_sds.to_string(),
        t.expert_count.to_string(),
        t.academic_count.to_string(),
        count_with_pct(t.uncovered, share(t.uncovered, t.total_sds)),
        count_with_pct(t.single, share(t.single, t.total_sds)),
    ]);
    text_table(
        &[
            "UDA",
            "Total SDSs",
            "No. of experts",
            "Of which academics",
            "SDSs not covered (%)",
            "SDSs covered by a single expert (%)",
        ],
        &rows,
    )
}

fn format_index(ci: Option<f64>, digits: usize) -> String {
    ci.map_or_else(|| "undef".to_string(), |v| format!("{v:.digits$}"))
}

pub fn concentration_csv(report: &ConcentrationReport) -> String {
    let mut out = String::from(
        "uda_code,uda_name,academic_experts,academic_share_pct,national_staff,staff_share_pct,concentration_index\n",
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{},{:.6},{}",
            csv_cell(&r.uda_code),
            csv_cell(&r.uda_name),
            r.academic_experts,
            share(r.academic_experts, report.total_academic_experts),
            r.national_staff,
            share(r.national_staff, report.total_staff),
            format_index(r.concentration_index, 6),
        );
    }
    let _ = writeln!(
        out,
        ",Total,{},100.000000,{},100.000000,",
        report.total_academic_experts, report.total_staff
    );
    out
}

pub fn concentration_text(report: &ConcentrationReport) -> String {
    let mut rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.uda_name.clone(),
                count_with_pct(
                    r.academic_experts,
                    share(r.academic_experts, report.total_academic_experts),
                ),
                count_with_pct(
                    r.national_staff,
                    share(r.national_staff, report.total_staff),
                ),
                format_index(r.concentration_index, 2),
            ]
        })
        .collect();
    rows.push(vec![
        "Total".into(),
        report.total_academic_experts.to_string(),
        report.total_staff.to_string(),
        String::new(),
    ]);
    text_table(
        &[
            "UDA",
            "Academic experts",
            "National academic staff",
            "Concentration index",
        ],
        &rows,
    )
}

pub fn colonization_csv(flagged: &[ColonizedSds]) -> String {
    let mut out = String::from(
        "sds_code,declaring_experts,native_declaring,top_foreign_source_sds,top_foreign_count\n",
    );
    for c in flagged {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_cell(&c.sds_code),
            c.declaring_experts,
            c.native_declaring,
            csv_cell(&c.top_foreign_source_sds),
            c.top_foreign_count
        );
    }
    out
}

pub fn colonization_text(flagged: &[ColonizedSds]) -> String {
    let rows: Vec<Vec<String>> = flagged
        .iter()
        .map(|c| {
            vec![
                c.sds_code.clone(),
                c.declaring_experts.to_string(),
                c.native_declaring.to_string(),
                c.top_foreign_source_sds.clone(),
                c.top_foreign_count.to_string(),
            ]
        })
        .collect();
    let mut out = format!(
        "SDSs declared only by academics from other SDSs: {}\n\n",
        flagged.len()
    );
    out.push_str(&text_table(
        &[
            "SDS",
            "Declaring academics",
            "Native",
            "Main source SDS",
            "From main source",
        ],
        &rows,
    ));
    out
}

const MATCH_NOTE: &str = "Referee/applicant alignment estimated by official SDS equality.";

fn match_csv_row(out: &mut String, r: &MatchRow) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{:.6}",
        csv_cell(&r.uda_code),
        csv_cell(&r.uda_name),
        r.applicant_count,
        r.referee_count,
        r.applicant_sds_count,
        r.referee_covered_sds_count,
        r.uncovered_sds_count,
        r.applicants_in_uncovered_sds,
        r.pct_applicants_in_uncovered_sds
    );
}

pub fn match_csv(report: &MatchReport) -> String {
    let mut out = String::from(
        "uda_code,uda_name,applicants,referees,applicant_sds,referee_sds,uncovered_sds,applicants_in_uncovered_sds,pct_applicants_in_uncovered_sds\n",
    );
    for r in &report.rows {
        match_csv_row(&mut out, r);
    }
    match_csv_row(&mut out, &report.total);
    out
}

pub fn match_text(report: &MatchReport) -> String {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .chain(std::iter::once(&report.total))
        .map(|r| {
            vec![
                r.uda_name.clone(),
                r.applicant_count.to_string(),
                r.referee_count.to_string(),
                r.applicant_sds_count.to_string(),
                r.referee_covered_sds_count.to_string(),
                r.uncovered_sds_count.to_string(),
                round_pct(r.pct_applicants_in_uncovered_sds).to_string(),
            ]
        })
        .collect();
    let mut out = format!("{MATCH_NOTE}\n\n");
    out.push_str(&text_table(
        &[
            "UDA",
            "Applic.",
            "Referee",
            "Applic. SDS",
            "Referee SDS",
            "Differ.",
            "% of applicants from SDS not covered by referees",
        ],
        &rows,
    ));
    out
}

fn profile_csv_row(out: &mut String, r: &ProfileRow) {
    let _ = writeln!(
        out,
        "{},{},{},{},{:.6},{},{:.6}",
        csv_cell(&r.uda_code),
        csv_cell(&r.uda_name),
        r.referee_count,
        r.below_median_count,
        r.below_median_pct(),
        r.inactive_count,
        r.inactive_pct()
    );
}

pub fn profile_csv(profile: &RefereeProfile) -> String {
    let mut out = String::from(
        "uda_code,uda_name,referees,below_median,below_median_pct,inactive,inactive_pct\n",
    );
    for r in &profile.rows {
        profile_csv_row(&mut out, r);
    }
    profile_csv_row(&mut out, &profile.total);
    out
}

pub fn profile_text(profile: &RefereeProfile) -> String {
    let rows: Vec<Vec<String>> = profile
        .rows
        .iter()
        .chain(std::iter::once(&profile.total))
        .map(|r| {
            vec![
                r.uda_name.clone(),
                r.referee_count.to_string(),
                count_with_pct(r.below_median_count, r.below_median_pct()),
                count_with_pct(r.inactive_count, r.inactive_pct()),
            ]
        })
        .collect();
    let mut out = text_table(
        &[
            "UDA",
            "Referees",
            "Of which under the national median",
            "Inactive referees",
        ],
        &rows,
    );
    if !profile.unscored.is_empty() {
        let _ = writeln!(
            out,
            "\nUnscored referees ({}): {}",
            profile.unscored.len(),
            profile.unscored.join(", ")
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(round_pct(12.5), 13);
        assert_eq!(round_pct(58.4), 58);
        assert_eq!(round_pct(0.49), 0);
        assert_eq!(round_pct(82.926), 83);
    }

    #[test]
    fn table_aligns_columns() {
        let t = text_table(&["A", "Count"], &[vec!["long name".into(), "7".into()]]);
        let lines: Vec<_> = t.lines().collect();
        assert_eq!(lines[0], "A          Count");
        assert_eq!(lines[2], "long name      7");
    }

    #[test]
    fn scorecards_roundtrip() {
        let cards = vec![
            ScoreCard {
                researcher_id: "r1".into(),
                official_sds: "MED/04".into(),
                t: 5.0,
                fss: 0.123456789,
                percentile: Some(87.5),
                activity_class: ActivityClass::QI,
            },
            ScoreCard {
                researcher_id: "r2".into(),
                official_sds: "MED/04".into(),
                t: 2.5,
                fss: 0.0,
                percentile: None,
                activity_class: ActivityClass::NonActive,
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scorecards.csv");
        std::fs::write(&path, scorecards_csv(&cards)).unwrap();
        assert_eq!(load_scorecards(&path).unwrap(), cards);
    }
}
