//! Validated loaders for the CSV and JSON Lines inputs.
//!
//! CSV files are UTF-8 with a header row; list-valued cells use `;` as the
//! separator. Every loader either returns a fully validated collection or an
//! error naming the offending file and line.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use chrono::NaiveDate;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{
    AcademicRank, Applicant, Author, CallForProposals, DocType, ExpertCategory, FieldTaxonomy,
    Publication, RegisterEntry, Researcher, Roster, SdsEntry, YearWindow,
};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Deserializes every data row of a headed CSV file. The returned line
/// numbers are 1-based file lines (the header is line 1).
fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<(u64, T)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    // Force header parsing so an empty file is reported as such.
    let headers = reader
        .headers()
        .map_err(|e| Error::format(path, 1, e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(Error::format(path, 1, "missing header row"));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::format(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::format(path, line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

fn split_list(cell: &str) -> Vec<String> {
    cell.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn non_empty(cell: Option<String>) -> Option<String> {
    cell.map(|s| s.trim().to_string()).filter(|s| !s.is_empty())
}

#[derive(Deserialize)]
struct TaxonomyRow {
    sds_code: String,
    sds_name: String,
    uda_code: String,
    uda_name: String,
    positional_weighting: String,
}

pub fn load_taxonomy(path: &Path) -> Result<FieldTaxonomy> {
    let mut entries = Vec::new();
    for (line, row) in read_csv::<TaxonomyRow>(path)? {
        let positional_weighting = match row.positional_weighting.as_str() {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::format(
                    path,
                    line,
                    format!("positional_weighting must be 0 or 1, got {other:?}"),
                ))
            }
        };
        entries.push(SdsEntry {
            sds_code: row.sds_code,
            sds_name: row.sds_name,
            uda_code: row.uda_code,
            uda_name: row.uda_name,
            positional_weighting,
        });
    }
    FieldTaxonomy::new(entries)
}

#[derive(Deserialize)]
struct RosterRow {
    researcher_id: String,
    official_sds: String,
    institution_id: String,
    employment_start: String,
    employment_end: Option<String>,
    rank: String,
}

fn parse_date(path: &Path, line: u64, field: &str, value: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(value, "%Y-%m-%d")
        .map_err(|e| Error::format(path, line, format!("{field} {value:?}: {e}")))
}

pub fn load_roster(path: &Path, taxonomy: &FieldTaxonomy) -> Result<Roster> {
    let mut researchers = Vec::new();
    for (line, row) in read_csv::<RosterRow>(path)? {
        if row.researcher_id.is_empty() {
            return Err(Error::format(path, line, "empty researcher_id"));
        }
        let employment_start = parse_date(path, line, "employment_start", &row.employment_start)?;
        let employment_end = match non_empty(row.employment_end) {
            Some(v) => Some(parse_date(path, line, "employment_end", &v)?),
            None => None,
        };
        let rank: AcademicRank = row
            .rank
            .parse()
            .map_err(|e: String| Error::format(path, line, e))?;
        researchers.push(Researcher {
            researcher_id: row.researcher_id,
            official_sds: row.official_sds,
            institution_id: row.institution_id,
            employment_start,
            employment_end,
            rank,
        });
    }
    Roster::new(researchers, taxonomy)
}

/// Register entries with an expert id index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    entries: Vec<RegisterEntry>,
    by_id: HashMap<String, usize>,
}

impl Register {
    pub fn new(
        entries: Vec<RegisterEntry>,
        taxonomy: &FieldTaxonomy,
        roster: &Roster,
    ) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(entries.len());
        for (idx, e) in entries.iter().enumerate() {
            if e.declared_sds.is_empty() {
                return Err(Error::validation(format!(
                    "expert {} declares no SDS",
                    e.expert_id
                )));
            }
            if let Some(bad) = e.declared_sds.iter().find(|s| !taxonomy.contains(s)) {
                return Err(Error::validation(format!(
                    "expert {} declares unknown SDS {bad}",
                    e.expert_id
                )));
            }
            if let Some(rid) = &e.researcher_id {
                if roster.get(rid).is_none() {
                    return Err(Error::validation(format!(
                        "expert {} links to researcher {rid} absent from the roster",
                        e.expert_id
                    )));
                }
            }
            if by_id.insert(e.expert_id.clone(), idx).is_some() {
                return Err(Error::validation(format!(
                    "duplicate expert_id {}",
                    e.expert_id
                )));
            }
        }
        Ok(Self { entries, by_id })
    }

    pub fn entries(&self) -> &[RegisterEntry] {
        &self.entries
    }

    pub fn get(&self, expert_id: &str) -> Option<&RegisterEntry> {
        self.by_id.get(expert_id).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn academics(&self) -> impl Iterator<Item = &RegisterEntry> {
        self.entries.iter().filter(|e| e.is_academic())
    }
}

#[derive(Deserialize)]
struct RegisterRow {
    expert_id: String,
    category: Option<String>,
    researcher_id: Option<String>,
    declared_sds: String,
}

pub fn load_register(path: &Path, taxonomy: &FieldTaxonomy, roster: &Roster) -> Result<Register> {
    let mut entries = Vec::new();
    for (line, row) in read_csv::<RegisterRow>(path)? {
        if row.expert_id.is_empty() {
            return Err(Error::format(path, line, "empty expert_id"));
        }
        let declared: BTreeSet<String> = split_list(&row.declared_sds).into_iter().collect();
        if declared.is_empty() {
            return Err(Error::validation(format!(
                "{}:{line}: expert {} declares no SDS",
                path.display(),
                row.expert_id
            )));
        }
        entries.push(RegisterEntry {
            expert_id: row.expert_id,
            researcher_id: non_empty(row.researcher_id),
            category: ExpertCategory::parse_lenient(row.category.as_deref().unwrap_or("")),
            declared_sds: declared.into_iter().collect(),
        });
    }
    Register::new(entries, taxonomy, roster)
}

#[derive(Deserialize)]
struct RawAuthor {
    #[serde(default)]
    researcher_id: Option<String>,
    institution_id: String,
}

#[derive(Deserialize)]
struct RawPublication {
    pub_id: String,
    year: i32,
    doc_type: DocType,
    subject_categories: Vec<String>,
    citations: i64,
    authors: Vec<RawAuthor>,
}

/// Loads a publications file, keeping only those published inside `window`.
pub fn load_corpus(path: &Path, window: YearWindow) -> Result<Vec<Publication>> {
    let reader = BufReader::new(open(path)?);
    let mut pubs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx as u64 + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawPublication =
            serde_json::from_str(&line).map_err(|e| Error::format(path, lineno, e.to_string()))?;
        let publication = validate_publication(raw)
            .map_err(|msg| Error::validation(format!("{}:{lineno}: {msg}", path.display())))?;
        if !seen.insert(publication.pub_id.clone()) {
            return Err(Error::validation(format!(
                "{}:{lineno}: duplicate pub_id {}",
                path.display(),
                publication.pub_id
            )));
        }
        if window.contains(publication.year) {
            pubs.push(publication);
        }
    }
    Ok(pubs)
}

fn validate_publication(raw: RawPublication) -> std::result::Result<Publication, String> {
    if raw.pub_id.is_empty() {
        return Err("empty pub_id".into());
    }
    if raw.citations < 0 {
        return Err(format!(
            "publication {} has negative citations ({})",
            raw.pub_id, raw.citations
        ));
    }
    if raw.authors.is_empty() {
        return Err(format!("publication {} has no authors", raw.pub_id));
    }
    let categories: Vec<String> = raw
        .subject_categories
        .into_iter()
        .map(|c| c.trim().to_string())
        .filter(|c| !c.is_empty())
        .collect();
    if categories.is_empty() {
        return Err(format!(
            "publication {} has no subject category",
            raw.pub_id
        ));
    }
    let mut linked = HashSet::new();
    let authors: Vec<Author> = raw
        .authors
        .into_iter()
        .map(|a| Author {
            researcher_id: non_empty(a.researcher_id),
            institution_id: a.institution_id,
        })
        .collect();
    for a in &authors {
        if let Some(id) = &a.researcher_id {
            if !linked.insert(id.as_str()) {
                return Err(format!(
                    "publication {} lists researcher {id} more than once",
                    raw.pub_id
                ));
            }
        }
    }
    Ok(Publication {
        pub_id: raw.pub_id,
        year: raw.year,
        doc_type: raw.doc_type,
        subject_categories: categories,
        citations: raw.citations as u64,
        authors,
    })
}

/// Every author link in `pubs` must name a roster researcher.
pub fn check_corpus_links(pubs: &[Publication], roster: &Roster) -> Result<()> {
    for p in pubs {
        for a in &p.authors {
            if let Some(id) = &a.researcher_id {
                if roster.get(id).is_none() {
                    return Err(Error::validation(format!(
                        "publication {} links author {id} absent from the roster",
                        p.pub_id
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct ApplicantRow {
    applicant_id: String,
    official_sds: String,
}

#[derive(Deserialize)]
struct RefereeRow {
    expert_id: String,
}

pub fn load_call(
    applicants_path: &Path,
    referees_path: &Path,
    taxonomy: &FieldTaxonomy,
) -> Result<CallForProposals> {
    let mut applicants = Vec::new();
    let mut seen = HashSet::new();
    for (line, row) in read_csv::<ApplicantRow>(applicants_path)? {
        if !taxonomy.contains(&row.official_sds) {
            return Err(Error::validation(format!(
                "{}:{line}: applicant {} has unknown SDS {}",
                applicants_path.display(),
                row.applicant_id,
                row.official_sds
            )));
        }
        if !seen.insert(row.applicant_id.clone()) {
            return Err(Error::validation(format!(
                "{}:{line}: duplicate applicant_id {}",
                applicants_path.display(),
                row.applicant_id
            )));
        }
        applicants.push(Applicant {
            applicant_id: row.applicant_id,
            official_sds: row.official_sds,
        });
    }
    let mut referees = Vec::new();
    let mut seen = HashSet::new();
    for (line, row) in read_csv::<RefereeRow>(referees_path)? {
        if !seen.insert(row.expert_id.clone()) {
            return Err(Error::validation(format!(
                "{}:{line}: referee {} listed twice",
                referees_path.display(),
                row.expert_id
            )));
        }
        referees.push(row.expert_id);
    }
    Ok(CallForProposals {
        applicants,
        referees,
    })
}
