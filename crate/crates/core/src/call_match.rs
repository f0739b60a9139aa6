//! Referee adequacy for one call for proposals: do the referees' fields
//! cover the applicants' fields, and how do the referees score nationally?
//!
//! Field alignment is estimated by SDS equality: an academic referee covers
//! their official SDS, a non-academic referee every SDS they declared.

use std::collections::{BTreeSet, HashMap};

use crate::audit::pct;
use crate::error::{Error, Result};
use crate::fss::{ActivityClass, ScoreCard};
use crate::ingest::Register;
use crate::model::{CallForProposals, FieldTaxonomy, RegisterEntry, Roster};

#[derive(Debug, Clone, PartialEq)]
pub struct MatchRow {
    pub uda_code: String,
    pub uda_name: String,
    pub applicant_count: usize,
    pub referee_count: usize,
    pub applicant_sds_count: usize,
    pub referee_covered_sds_count: usize,
    pub uncovered_sds_count: usize,
    pub applicants_in_uncovered_sds: usize,
    pub pct_applicants_in_uncovered_sds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub rows: Vec<MatchRow>,
    pub total: MatchRow,
}

/// Fields covered by one referee and the UDA the referee is counted under.
fn referee_fields<'a>(
    entry: &'a RegisterEntry,
    roster: &'a Roster,
    taxonomy: &FieldTaxonomy,
) -> Result<(Vec<&'a str>, Option<String>)> {
    match entry.researcher_id.as_deref() {
        Some(id) => {
            let r = roster.get(id).ok_or_else(|| {
                Error::validation(format!(
                    "referee {} links to unknown researcher {id}",
                    entry.expert_id
                ))
            })?;
            let uda = taxonomy.uda_of(&r.official_sds).map(String::from);
            Ok((vec![r.official_sds.as_str()], uda))
        }
        None => {
            // declared_sds is sorted; the first declared field places the referee.
            let uda = entry
                .declared_sds
                .first()
                .and_then(|s| taxonomy.uda_of(s))
                .map(String::from);
            Ok((entry.declared_sds.iter().map(String::as_str).collect(), uda))
        }
    }
}

pub fn match_analysis(
    call: &CallForProposals,
    register: &Register,
    roster: &Roster,
    taxonomy: &FieldTaxonomy,
) -> Result<MatchReport> {
    let mut covered: BTreeSet<&str> = BTreeSet::new();
    let mut referees_by_uda: HashMap<String, usize> = HashMap::new();
    for expert_id in &call.referees {
        let entry = register.get(expert_id).ok_or_else(|| {
            Error::validation(format!("call referee {expert_id} is not in the register"))
        })?;
        let (fields, uda) = referee_fields(entry, roster, taxonomy)?;
        covered.extend(fields);
        if let Some(uda) = uda {
            *referees_by_uda.entry(uda).or_insert(0) += 1;
        }
    }

    let mut rows = Vec::with_capacity(taxonomy.udas().len());
    for uda in taxonomy.udas() {
        let applicants: Vec<&str> = call
            .applicants
            .iter()
            .filter(|a| taxonomy.uda_of(&a.official_sds) == Some(uda.code.as_str()))
            .map(|a| a.official_sds.as_str())
            .collect();
        let fields: BTreeSet<&str> = applicants.iter().copied().collect();
        let covered_here = fields.iter().filter(|s| covered.contains(*s)).count();
        let stranded = applicants.iter().filter(|s| !covered.contains(*s)).count();
        rows.push(MatchRow {
            uda_code: uda.code.clone(),
            uda_name: uda.name.clone(),
            applicant_count: applicants.len(),
            referee_count: referees_by_uda.get(&uda.code).copied().unwrap_or(0),
            applicant_sds_count: fields.len(),
            referee_covered_sds_count: covered_here,
            uncovered_sds_count: fields.len() - covered_here,
            applicants_in_uncovered_sds: stranded,
            pct_applicants_in_uncovered_sds: pct(stranded, applicants.len()),
        });
    }

    let sum = |f: fn(&MatchRow) -> usize| rows.iter().map(f).sum::<usize>();
    let applicant_count = sum(|r| r.applicant_count);
    let applicants_in_uncovered_sds = sum(|r| r.applicants_in_uncovered_sds);
    let total = MatchRow {
        uda_code: String::new(),
        uda_name: "Total".into(),
        applicant_count,
        referee_count: call.referees.len(),
        applicant_sds_count: sum(|r| r.applicant_sds_count),
        referee_covered_sds_count: sum(|r| r.referee_covered_sds_count),
        uncovered_sds_count: sum(|r| r.uncovered_sds_count),
        applicants_in_uncovered_sds,
        pct_applicants_in_uncovered_sds: pct(applicants_in_uncovered_sds, applicant_count),
    };
    Ok(MatchReport { rows, total })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub uda_code: String,
    pub uda_name: String,
    pub referee_count: usize,
    /// Active below the 50th percentile, plus every inactive referee.
    pub below_median_count: usize,
    pub inactive_count: usize,
}

impl ProfileRow {
    pub fn below_median_pct(&self) -> f64 {
        pct(self.below_median_count, self.referee_count)
    }

    pub fn inactive_pct(&self) -> f64 {
        pct(self.inactive_count, self.referee_count)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefereeProfile {
    pub rows: Vec<ProfileRow>,
    pub total: ProfileRow,
    /// Referees without a score card (non-academics, or academics outside
    /// the scored population).
    pub unscored: Vec<String>,
}

pub fn is_below_median(card: &ScoreCard) -> bool {
    match card.activity_class {
        ActivityClass::NonActive => true,
        _ => card.percentile.is_some_and(|p| p < 50.0),
    }
}

pub fn referee_profile(
    call: &CallForProposals,
    register: &Register,
    taxonomy: &FieldTaxonomy,
    scorecards: &[ScoreCard],
) -> Result<RefereeProfile> {
    let cards: HashMap<&str, &ScoreCard> = scorecards
        .iter()
        .map(|c| (c.researcher_id.as_str(), c))
        .collect();
    let mut rows: Vec<ProfileRow> = taxonomy
        .udas()
        .iter()
        .map(|u| ProfileRow {
            uda_code: u.code.clone(),
            uda_name: u.name.clone(),
            referee_count: 0,
            below_median_count: 0,
            inactive_count: 0,
        })
        .collect();
    let mut unscored = Vec::new();
    for expert_id in &call.referees {
        let entry = register.get(expert_id).ok_or_else(|| {
            Error::validation(format!("call referee {expert_id} is not in the register"))
        })?;
        let card = entry
            .researcher_id
            .as_deref()
            .and_then(|id| cards.get(id).copied());
        let slot = card
            .and_then(|c| taxonomy.uda_of(&c.official_sds))
            .and_then(|uda| taxonomy.uda_index(uda));
        let (Some(card), Some(slot)) = (card, slot) else {
            unscored.push(expert_id.clone());
            continue;
        };
        let row = &mut rows[slot];
        row.referee_count += 1;
        if is_below_median(card) {
            row.below_median_count += 1;
        }
        if card.activity_class == ActivityClass::NonActive {
            row.inactive_count += 1;
        }
    }
    let total = ProfileRow {
        uda_code: String::new(),
        uda_name: "Total".into(),
        referee_count: rows.iter().map(|r| r.referee_count).sum(),
        below_median_count: rows.iter().map(|r| r.below_median_count).sum(),
        inactive_count: rows.iter().map(|r| r.inactive_count).sum(),
    };
    Ok(RefereeProfile {
        rows,
        total,
        unscored,
    })
}
