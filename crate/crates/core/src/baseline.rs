//! Citation normalization baseline.
//!
//! Each (publication year, subject category) stratum of the reference corpus
//! gets the median citation count of its publications. A publication's
//! normalized impact is its citation count divided by the median of its
//! stratum, averaged over its subject categories.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Publication;
use crate::par::{self, Exec};

/// Which publications enter a stratum's median.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineInclusion {
    /// Only publications with at least one citation.
    #[default]
    CitedOnly,
    /// Every publication, uncited included. Strata whose median is 0 get no entry.
    All,
}

impl std::str::FromStr for BaselineInclusion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cited_only" => Ok(Self::CitedOnly),
            "all" => Ok(Self::All),
            other => Err(format!("unknown baseline inclusion {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumKey {
    pub year: i32,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CitationBaseline {
    pub census_date: NaiveDate,
    medians: BTreeMap<i32, BTreeMap<String, f64>>,
}

/// Median of an unsorted sample; even sizes take the midpoint of the two
/// central values. `None` for an empty sample.
pub fn median(values: &mut [u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        (values[n / 2 - 1] as f64 + values[n / 2] as f64) / 2.0
    })
}

impl CitationBaseline {
    /// Builds medians from `corpus`. A publication listed under k categories
    /// contributes its count to each of the k strata.
    pub fn compute(
        corpus: &[Publication],
        census_date: NaiveDate,
        inclusion: BaselineInclusion,
        exec: Exec,
    ) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::validation("reference corpus is empty"));
        }
        let mut strata: BTreeMap<StratumKey, Vec<u64>> = BTreeMap::new();
        for p in corpus {
            if inclusion == BaselineInclusion::CitedOnly && p.citations == 0 {
                continue;
            }
            for cat in &p.subject_categories {
                strata
                    .entry(StratumKey {
                        year: p.year,
                        category: cat.clone(),
                    })
                    .or_default()
                    .push(p.citations);
            }
        }
        let strata: Vec<(StratumKey, Vec<u64>)> = strata.into_iter().collect();
        let medians = par::map(exec, strata, |(key, mut values)| {
            median(&mut values).map(|me| (key, me))
        });
        Ok(Self::nest(
            census_date,
            medians.into_iter().flatten().filter(|(_, me)| *me > 0.0),
        ))
    }

    fn nest(census_date: NaiveDate, medians: impl IntoIterator<Item = (StratumKey, f64)>) -> Self {
        let mut nested: BTreeMap<i32, BTreeMap<String, f64>> = BTreeMap::new();
        for (k, me) in medians {
            nested.entry(k.year).or_default().insert(k.category, me);
        }
        Self {
            census_date,
            medians: nested,
        }
    }

    pub fn from_medians(
        census_date: NaiveDate,
        medians: impl IntoIterator<Item = (StratumKey, f64)>,
    ) -> Result<Self> {
        let medians: Vec<_> = medians.into_iter().collect();
        if let Some((k, me)) = medians.iter().find(|(_, me)| !me.is_finite() || *me <= 0.0) {
            return Err(Error::validation(format!(
                "median for {} / {} must be positive, got {me}",
                k.year, k.category
            )));
        }
        Ok(Self::nest(census_date, medians))
    }

    pub fn median_for(&self, year: i32, category: &str) -> Option<f64> {
        self.medians.get(&year)?.get(category).copied()
    }

    /// Number of strata with a median.
    pub fn len(&self) -> usize {
        self.medians.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Strata in (year, category) order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &str, f64)> {
        self.medians
            .iter()
            .flat_map(|(&y, cats)| cats.iter().map(move |(c, &me)| (y, c.as_str(), me)))
    }

    /// Field-normalized impact of one publication.
    pub fn normalized_impact(&self, publication: &Publication) -> Result<f64> {
        if publication.citations == 0 {
            return Ok(0.0);
        }
        let c = publication.citations as f64;
        let mut sum = 0.0;
        let mut n = 0usize;
        for cat in &publication.subject_categories {
            if let Some(me) = self.median_for(publication.year, cat) {
                sum += c / me;
                n += 1;
            }
        }
        if n == 0 {
            return Err(Error::MissingBaseline {
                pub_id: publication.pub_id.clone(),
            });
        }
        Ok(sum / n as f64)
    }

    /// `year,category,me` with a header row. Medians are halves of integers,
    /// so six fractional digits reproduce them exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,category,me\n");
        for (year, category, me) in self.iter() {
            let _ = writeln!(out, "{year},{},{me:.6}", csv_cell(category));
        }
        out
    }

    pub fn load_csv(path: &Path, census_date: NaiveDate) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            year: i32,
            category: String,
            me: f64,
        }
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = csv::Reader::from_reader(file);
        let mut medians = Vec::new();
        for (i, row) in reader.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| Error::format(path, i as u64 + 2, e.to_string()))?;
            medians.push((
                StratumKey {
                    year: row.year,
                    category: row.category,
                },
                row.me,
            ));
        }
        Self::from_medians(census_date, medians)
    }
}

pub(crate) fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Author, DocType};

    fn census() -> NaiveDate {
        NaiveDate::from_ymd_opt(2009, 6, 30).unwrap()
    }

    fn publication(id: &str, year: i32, cats: &[&str], citations: u64) -> Publication {
        Publication {
            pub_id: id.into(),
            year,
            doc_type: DocType::Article,
            subject_categories: cats.iter().map(|c| c.to_string()).collect(),
            citations,
            authors: vec![Author {
                researcher_id: None,
                institution_id: "u".into(),
            }],
        }
    }

    fn baseline(pubs: &[Publication]) -> CitationBaseline {
        CitationBaseline::compute(
            pubs,
            census(),
            BaselineInclusion::CitedOnly,
            Exec::default(),
        )
        .unwrap()
    }

    #[test]
    fn even_stratum_takes_midpoint() {
        let pubs: Vec<_> = [1, 2, 3, 10, 0, 0]
            .iter()
            .enumerate()
            .map(|(i, &c)| publication(&format!("p{i}"), 2005, &["X"], c))
            .collect();
        assert_eq!(baseline(&pubs).median_for(2005, "X"), Some(2.5));
    }

    #[test]
    fn single_and_uncited_strata() {
        let pubs = vec![
            publication("a", 2005, &["X"], 5),
            publication("b", 2005, &["Y"], 0),
            publication("c", 2005, &["Y"], 0),
        ];
        let b = baseline(&pubs);
        assert_eq!(b.median_for(2005, "X"), Some(5.0));
        assert_eq!(b.median_for(2005, "Y"), None);
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn all_inclusion_counts_uncited() {
        let pubs: Vec<_> = [0, 0, 4, 6]
            .iter()
            .enumerate()
            .map(|(i, &c)| publication(&format!("p{i}"), 2005, &["X"], c))
            .collect();
        let b = CitationBaseline::compute(&pubs, census(), BaselineInclusion::All, Exec::default())
            .unwrap();
        assert_eq!(b.median_for(2005, "X"), Some(2.0));
        let zeros = vec![
            publication("z", 2005, &["Z"], 0),
            publication("y", 2005, &["Z"], 0),
        ];
        let b =
            CitationBaseline::compute(&zeros, census(), BaselineInclusion::All, Exec::default())
                .unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn multi_category_publication_feeds_each_stratum() {
        let pubs = vec![publication("a", 2006, &["X", "Y"], 3)];
        let b = baseline(&pubs);
        assert_eq!(b.median_for(2006, "X"), Some(3.0));
        assert_eq!(b.median_for(2006, "Y"), Some(3.0));
    }

    #[test]
    fn normalized_impact_examples() {
        let b = CitationBaseline::from_medians(
            census(),
            [
                (
                    StratumKey {
                        year: 2005,
                        category: "A".into(),
                    },
                    2.5,
                ),
                (
                    StratumKey {
                        year: 2005,
                        category: "B".into(),
                    },
                    2.0,
                ),
                (
                    StratumKey {
                        year: 2005,
                        category: "C".into(),
                    },
                    4.0,
                ),
            ],
        )
        .unwrap();
        assert_eq!(
            b.normalized_impact(&publication("p", 2005, &["A"], 5))
                .unwrap(),
            2.0
        );
        assert_eq!(
            b.normalized_impact(&publication("p", 2005, &["B", "C"], 4))
                .unwrap(),
            1.5
        );
        assert_eq!(
            b.normalized_impact(&publication("p", 1999, &["Q"], 0))
                .unwrap(),
            0.0
        );
        // Categories without a baseline are skipped when another one has it.
        assert_eq!(
            b.normalized_impact(&publication("p", 2005, &["B", "Q"], 4))
                .unwrap(),
            2.0
        );
        match b.normalized_impact(&publication("lost", 2005, &["Q"], 3)) {
            Err(Error::MissingBaseline { pub_id }) => assert_eq!(pub_id, "lost"),
            other => panic!("expected missing baseline, got {other:?}"),
        }
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(CitationBaseline::compute(
            &[],
            census(),
            BaselineInclusion::CitedOnly,
            Exec::default()
        )
        .is_err());
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let pubs: Vec<_> = (0..9)
            .map(|i| {
                publication(
                    &format!("p{i}"),
                    2004 + i % 3,
                    &["A,B", "C"],
                    (i * 7 % 5 + 1) as u64,
                )
            })
            .collect();
        let b = baseline(&pubs);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("baseline.csv");
        std::fs::write(&path, b.to_csv()).unwrap();
        let back = CitationBaseline::load_csv(&path, census()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn cached_nonpositive_median_rejected() {
        let bad = [(
            StratumKey {
                year: 2005,
                category: "A".into(),
            },
            0.0,
        )];
        assert!(CitationBaseline::from_medians(census(), bad).is_err());
    }
}
