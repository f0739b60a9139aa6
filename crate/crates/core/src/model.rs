//! Domain types shared by every analysis: the field taxonomy, national
//! staff, register entries, publications and calls for proposals.
//!
//! Collections are built once by the loaders in [`crate::ingest`] and are
//! read-only afterwards.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of the field classification: a scientific disciplinary sector
/// (SDS) and the disciplinary area (UDA) it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdsEntry {
    pub sds_code: String,
    pub sds_name: String,
    pub uda_code: String,
    pub uda_name: String,
    /// Life-science field: co-author credit follows list position.
    pub positional_weighting: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Uda {
    pub code: String,
    pub name: String,
}

/// The SDS -> UDA tree. UDAs keep the order in which they first appear in
/// the source file; reports follow that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTaxonomy {
    entries: Vec<SdsEntry>,
    udas: Vec<Uda>,
    by_code: HashMap<String, usize>,
}

impl FieldTaxonomy {
    pub fn new(entries: Vec<SdsEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("taxonomy has no SDS entries"));
        }
        let mut by_code = HashMap::with_capacity(entries.len());
        let mut udas: Vec<Uda> = Vec::new();
        for (idx, e) in entries.iter().enumerate() {
            if e.sds_code.is_empty() || e.uda_code.is_empty() {
                return Err(Error::validation(format!(
                    "taxonomy row {} has an empty SDS or UDA code",
                    idx + 1
                )));
            }
            if let Some(&prev) = by_code.get(&e.sds_code) {
                let prev: &SdsEntry = &entries[prev];
                return Err(if prev.uda_code != e.uda_code {
                    Error::validation(format!(
                        "SDS {} listed under two UDAs ({} and {})",
                        e.sds_code, prev.uda_code, e.uda_code
                    ))
                } else {
                    Error::validation(format!("duplicate SDS code {}", e.sds_code))
                });
            }
            by_code.insert(e.sds_code.clone(), idx);
            match udas.iter().find(|u| u.code == e.uda_code) {
                Some(u) if u.name != e.uda_name => {
                    return Err(Error::validation(format!(
                        "UDA {} has conflicting names {:?} and {:?}",
                        u.code, u.name, e.uda_name
                    )))
                }
                Some(_) => {}
                None => udas.push(Uda {
                    code: e.uda_code.clone(),
                    name: e.uda_name.clone(),
                }),
            }
        }
        Ok(Self {
            entries,
            udas,
            by_code,
        })
    }

    pub fn entries(&self) -> &[SdsEntry] {
        &self.entries
    }

    pub fn udas(&self) -> &[Uda] {
        &self.udas
    }

    pub fn sds(&self, code: &str) -> Option<&SdsEntry> {
        self.by_code.get(code).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, code: &str) -> bool {
        self.by_code.contains_key(code)
    }

    pub fn uda_of(&self, sds_code: &str) -> Option<&str> {
        self.sds(sds_code).map(|e| e.uda_code.as_str())
    }

    /// Position of a UDA in report order.
    pub fn uda_index(&self, uda_code: &str) -> Option<usize> {
        self.udas.iter().position(|u| u.code == uda_code)
    }

    pub fn sds_in_uda<'a>(&'a self, uda_code: &'a str) -> impl Iterator<Item = &'a SdsEntry> + 'a {
        self.entries.iter().filter(move |e| e.uda_code == uda_code)
    }

    pub fn is_positional(&self, sds_code: &str) -> bool {
        self.sds(sds_code).is_some_and(|e| e.positional_weighting)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcademicRank {
    Assistant,
    Associate,
    Full,
    Other,
}

impl FromStr for AcademicRank {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "assistant" => Ok(Self::Assistant),
            "associate" => Ok(Self::Associate),
            "full" => Ok(Self::Full),
            "other" => Ok(Self::Other),
            other => Err(format!("unknown rank {other:?}")),
        }
    }
}

/// A member of the national academic staff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Researcher {
    pub researcher_id: String,
    pub official_sds: String,
    pub institution_id: String,
    pub employment_start: NaiveDate,
    /// `None` means still employed.
    pub employment_end: Option<NaiveDate>,
    pub rank: AcademicRank,
}

impl Researcher {
    /// Years worked inside `window`, counted per calendar year as the share
    /// of that year's days on payroll. A full window of five years gives
    /// exactly 5.
    pub fn years_in_window(&self, window: YearWindow) -> f64 {
        let mut t = 0.0;
        for year in window.start..=window.end {
            let (Some(jan1), Some(dec31)) = (
                NaiveDate::from_ymd_opt(year, 1, 1),
                NaiveDate::from_ymd_opt(year, 12, 31),
            ) else {
                continue;
            };
            let from = self.employment_start.max(jan1);
            let to = self.employment_end.map_or(dec31, |end| end.min(dec31));
            if from > to {
                continue;
            }
            let worked = (to - from).num_days() + 1;
            let len = dec31.ordinal() as i64;
            t += worked as f64 / len as f64;
        }
        t
    }
}

/// Register category; anything other than A, B or C loads as `Unspecified`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpertCategory {
    A,
    B,
    C,
    Unspecified,
}

impl ExpertCategory {
    pub fn parse_lenient(token: &str) -> Self {
        match token.trim() {
            "A" | "a" => Self::A,
            "B" | "b" => Self::B,
            "C" | "c" => Self::C,
            _ => Self::Unspecified,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::Unspecified => "",
        }
    }
}

/// A self-declared expert in the register. Academics link to the roster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterEntry {
    pub expert_id: String,
    pub researcher_id: Option<String>,
    pub category: ExpertCategory,
    /// Sorted, deduplicated, never empty.
    pub declared_sds: Vec<String>,
}

impl RegisterEntry {
    pub fn is_academic(&self) -> bool {
        self.researcher_id.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocType {
    Article,
    Review,
    Proceedings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Author {
    pub researcher_id: Option<String>,
    pub institution_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub pub_id: String,
    pub year: i32,
    pub doc_type: DocType,
    pub subject_categories: Vec<String>,
    pub citations: u64,
    /// Byline order; slot 1 is `authors[0]`.
    pub authors: Vec<Author>,
}

impl Publication {
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    /// 1-based slot of `researcher_id` in the byline.
    pub fn position_of(&self, researcher_id: &str) -> Option<usize> {
        self.authors
            .iter()
            .position(|a| a.researcher_id.as_deref() == Some(researcher_id))
            .map(|i| i + 1)
    }
}

/// Inclusive range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YearWindow {
    pub start: i32,
    pub end: i32,
}

impl YearWindow {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::validation(format!(
                "empty year window {start}:{end}"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

impl FromStr for YearWindow {
    type Err = Error;

    /// Parses `2004:2008`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::validation(format!("window {s:?} is not START:END")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<i32>()
                .map_err(|_| Error::validation(format!("window {s:?} has a non-integer year")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

impl fmt::Display for YearWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applicant {
    pub applicant_id: String,
    pub official_sds: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallForProposals {
    pub applicants: Vec<Applicant>,
    /// Expert ids from the register, in file order.
    pub referees: Vec<String>,
}

/// The national roster with an id index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    researchers: Vec<Researcher>,
    by_id: HashMap<String, usize>,
}

impl Roster {
    pub fn new(researchers: Vec<Researcher>, taxonomy: &FieldTaxonomy) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(researchers.len());
        for (idx, r) in researchers.iter().enumerate() {
            if !taxonomy.contains(&r.official_sds) {
                return Err(Error::validation(format!(
                    "researcher {} has unknown SDS {}",
                    r.researcher_id, r.official_sds
                )));
            }
            if let Some(end) = r.employment_end {
                if end < r.employment_start {
                    return Err(Error::validation(format!(
                        "researcher {} ends employment ({end}) before starting ({})",
                        r.researcher_id, r.employment_start
                    )));
                }
            }
            if by_id.insert(r.researcher_id.clone(), idx).is_some() {
                return Err(Error::validation(format!(
                    "duplicate researcher_id {}",
                    r.researcher_id
                )));
            }
        }
        Ok(Self { researchers, by_id })
    }

    pub fn get(&self, id: &str) -> Option<&Researcher> {
        self.by_id.get(id).map(|&i| &self.researchers[i])
    }

    pub fn researchers(&self) -> &[Researcher] {
        &self.researchers
    }

    pub fn len(&self) -> usize {
        self.researchers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.researchers.is_empty()
    }

    /// Staff count per UDA code.
    pub fn staff_by_uda(&self, taxonomy: &FieldTaxonomy) -> HashMap<String, usize> {
        let mut counts = HashMap::new();
        for r in &self.researchers {
            if let Some(uda) = taxonomy.uda_of(&r.official_sds) {
                *counts.entry(uda.to_string()).or_insert(0) += 1;
            }
        }
        counts
    }
}
