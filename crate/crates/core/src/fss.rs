//! Fractional Scientific Strength (FSS) scoring and within-field ranking.
//!
//! A researcher's FSS is the yearly average, over the years worked in the
//! observation window, of field-normalized citations weighted by the
//! researcher's co-author share:
//!
//! ```text
//! FSS = (1 / t) * Σ_i  impact_i * share_i
//! ```
//!
//! Researchers are then ranked against everyone else in their official SDS.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baseline::CitationBaseline;
use crate::error::{Error, Result};
use crate::model::{FieldTaxonomy, Publication, Researcher, Roster, YearWindow};
use crate::par::{self, Exec};
use crate::weights::{authorship_weight, WeightingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActivityClass {
    NonActive,
    QIV,
    QIII,
    QII,
    QI,
}

impl ActivityClass {
    /// Quartile bin of an active researcher's percentile.
    pub fn from_percentile(p: f64) -> Self {
        if p < 25.0 {
            Self::QIV
        } else if p < 50.0 {
            Self::QIII
        } else if p < 75.0 {
            Self::QII
        } else {
            Self::QI
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonActive => "non_active",
            Self::QIV => "QIV",
            Self::QIII => "QIII",
            Self::QII => "QII",
            Self::QI => "QI",
        }
    }

    pub const ALL: [ActivityClass; 5] =
        [Self::NonActive, Self::QIV, Self::QIII, Self::QII, Self::QI];
}

impl fmt::Display for ActivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActivityClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown activity class {s:?}"))
    }
}

/// Who forms the denominator of a percentile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankPopulation {
    /// Active researchers only (FSS > 0).
    #[default]
    Active,
    /// Everyone with a score card; non-actives share the bottom ranks.
    All,
}

impl FromStr for RankPopulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "active" => Ok(Self::Active),
            "all" => Ok(Self::All),
            other => Err(format!("unknown rank population {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCard {
    pub researcher_id: String,
    pub official_sds: String,
    /// Years worked inside the window.
    pub t: f64,
    pub fss: f64,
    /// Set by [`rank_within_sds`]; `None` for non-actives.
    pub percentile: Option<f64>,
    pub activity_class: ActivityClass,
}

impl ScoreCard {
    pub fn is_active(&self) -> bool {
        self.fss > 0.0
    }
}

/// A roster researcher left without a score card.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skip {
    pub researcher_id: String,
    pub reason: String,
}

pub fn weighting_mode(researcher: &Researcher, taxonomy: &FieldTaxonomy) -> WeightingMode {
    if taxonomy.is_positional(&researcher.official_sds) {
        WeightingMode::Positional
    } else {
        WeightingMode::Uniform
    }
}

/// Scores one researcher. Returns `Ok(None)` when the researcher did not
/// work inside `window`. Publications outside the window are ignored.
pub fn compute_fss(
    researcher: &Researcher,
    pubs: &[&Publication],
    baseline: &CitationBaseline,
    taxonomy: &FieldTaxonomy,
    window: YearWindow,
) -> Result<Option<ScoreCard>> {
    let t = researcher.years_in_window(window);
    if t <= 0.0 {
        return Ok(None);
    }
    let mode = weighting_mode(researcher, taxonomy);
    let mut total = 0.0;
    for p in pubs.iter().filter(|p| window.contains(p.year)) {
        let position = p.position_of(&researcher.researcher_id).ok_or_else(|| {
            Error::validation(format!(
                "publication {} does not list researcher {}",
                p.pub_id, researcher.researcher_id
            ))
        })?;
        let impact = baseline.normalized_impact(p)?;
        if impact == 0.0 {
            continue;
        }
        total += impact * authorship_weight(p, position, mode)?;
    }
    let fss = total / t;
    Ok(Some(ScoreCard {
        researcher_id: researcher.researcher_id.clone(),
        official_sds: researcher.official_sds.clone(),
        t,
        fss,
        percentile: None,
        activity_class: ActivityClass::NonActive,
    }))
}

/// Publications of each linked researcher, ordered by `pub_id` so that
/// floating-point sums do not depend on corpus file order.
pub fn index_by_author(corpus: &[Publication]) -> HashMap<&str, Vec<&Publication>> {
    let mut index: HashMap<&str, Vec<&Publication>> = HashMap::new();
    for p in corpus {
        for a in &p.authors {
            if let Some(id) = &a.researcher_id {
                index.entry(id.as_str()).or_default().push(p);
            }
        }
    }
    for pubs in index.values_mut() {
        pubs.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    }
    index
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scoring {
    /// Roster order.
    pub cards: Vec<ScoreCard>,
    pub skipped: Vec<Skip>,
}

/// Scores every roster researcher and ranks them within their SDS.
pub fn score_roster(
    roster: &Roster,
    corpus: &[Publication],
    baseline: &CitationBaseline,
    taxonomy: &FieldTaxonomy,
    window: YearWindow,
    population: RankPopulation,
    exec: Exec,
) -> Result<Scoring> {
    let index = index_by_author(corpus);
    let empty = Vec::new();
    let outcomes = par::map_ref(exec, roster.researchers(), |r| {
        let pubs = index.get(r.researcher_id.as_str()).unwrap_or(&empty);
        compute_fss(r, pubs, baseline, taxonomy, window)
    });
    let mut cards = Vec::with_capacity(outcomes.len());
    let mut skipped = Vec::new();
    for (r, outcome) in roster.researchers().iter().zip(outcomes) {
        match outcome? {
            Some(card) => cards.push(card),
            None => skipped.push(Skip {
                researcher_id: r.researcher_id.clone(),
                reason: format!("no employment overlap with window {window}"),
            }),
        }
    }
    Ok(Scoring {
        cards: rank_within_sds(cards, population, exec),
        skipped,
    })
}

/// Mean 1-based ranks (1 = lowest) of `values`, ties sharing the average of
/// the ranks they span.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Ranks i+1 ..= j.
        let mean = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = mean;
        }
        i = j;
    }
    ranks
}

/// Assigns percentiles and activity classes within each SDS. Active
/// researchers get `100 * (midrank - 0.5) / N`; output keeps input order.
pub fn rank_within_sds(
    mut cards: Vec<ScoreCard>,
    population: RankPopulation,
    exec: Exec,
) -> Vec<ScoreCard> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, c) in cards.iter().enumerate() {
        groups.entry(c.official_sds.as_str()).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let ranked: Vec<Vec<(usize, Option<f64>)>> = par::map_ref(exec, &groups, |members| {
        let pool: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| population == RankPopulation::All || cards[i].is_active())
            .collect();
        let values: Vec<f64> = pool.iter().map(|&i| cards[i].fss).collect();
        let ranks = midranks(&values);
        let n = pool.len() as f64;
        let mut out: Vec<(usize, Option<f64>)> = members.iter().map(|&i| (i, None)).collect();
        let by_card: HashMap<usize, f64> = pool.iter().copied().zip(ranks).collect();
        for slot in &mut out {
            if cards[slot.0].is_active() {
                slot.1 = by_card.get(&slot.0).map(|r| 100.0 * (r - 0.5) / n);
            }
        }
        out
    });
    for (i, percentile) in ranked.into_iter().flatten() {
        let card = &mut cards[i];
        card.percentile = percentile;
        card.activity_class =
            percentile.map_or(ActivityClass::NonActive, ActivityClass::from_percentile);
    }
    cards
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::StratumKey;
    use crate::model::{AcademicRank, Author, DocType, SdsEntry};
    use chrono::NaiveDate;

    fn card(id: &str, sds: &str, fss: f64) -> ScoreCard {
        ScoreCard {
            researcher_id: id.into(),
            official_sds: sds.into(),
            t: 5.0,
            fss,
            percentile: None,
            activity_class: ActivityClass::NonActive,
        }
    }

    fn percentiles(cards: &[ScoreCard]) -> Vec<Option<f64>> {
        cards.iter().map(|c| c.percentile).collect()
    }

    #[test]
    fn lone_researcher_is_median() {
        let out = rank_within_sds(
            vec![card("a", "S", 0.3)],
            RankPopulation::Active,
            Exec::default(),
        );
        assert_eq!(out[0].percentile, Some(50.0));
        assert_eq!(out[0].activity_class, ActivityClass::QII);
    }

    #[test]
    fn four_distinct_scores() {
        let cards = vec![
            card("d", "S", 4.0),
            card("a", "S", 1.0),
            card("c", "S", 3.0),
            card("b", "S", 2.0),
        ];
        let out = rank_within_sds(cards, RankPopulation::Active, Exec::default());
        assert_eq!(
            percentiles(&out),
            [Some(87.5), Some(12.5), Some(62.5), Some(37.5)]
        );
        let classes: Vec<_> = out.iter().map(|c| c.activity_class).collect();
        assert_eq!(
            classes,
            [
                ActivityClass::QI,
                ActivityClass::QIV,
                ActivityClass::QII,
                ActivityClass::QIII
            ]
        );
    }

    #[test]
    fn tie_at_top_shares_midrank() {
        let cards = vec![
            card("a", "S", 1.0),
            card("b", "S", 2.0),
            card("c", "S", 5.0),
            card("d", "S", 5.0),
        ];
        let out = rank_within_sds(cards, RankPopulation::Active, Exec::default());
        assert_eq!(out[2].percentile, Some(75.0));
        assert_eq!(out[3].percentile, Some(75.0));
        assert_eq!(out[3].activity_class, ActivityClass::QI);
    }

    #[test]
    fn non_actives_are_unranked() {
        let cards = vec![
            card("z", "S", 0.0),
            card("a", "S", 1.0),
            card("y", "T", 0.0),
        ];
        let out = rank_within_sds(cards.clone(), RankPopulation::Active, Exec::default());
        assert_eq!(percentiles(&out), [None, Some(50.0), None]);
        assert_eq!(out[0].activity_class, ActivityClass::NonActive);
        assert_eq!(out[2].activity_class, ActivityClass::NonActive);

        // With everyone in the denominator the lone active ranks 2 of 2.
        let out = rank_within_sds(cards, RankPopulation::All, Exec::default());
        assert_eq!(percentiles(&out), [None, Some(75.0), None]);
    }

    #[test]
    fn sds_are_ranked_separately() {
        let cards = vec![
            card("a", "S", 1.0),
            card("b", "T", 100.0),
            card("c", "S", 2.0),
        ];
        let out = rank_within_sds(cards, RankPopulation::Active, Exec::Sequential);
        assert_eq!(percentiles(&out), [Some(25.0), Some(50.0), Some(75.0)]);
    }

    fn taxonomy(positional: bool) -> FieldTaxonomy {
        FieldTaxonomy::new(vec![SdsEntry {
            sds_code: "S".into(),
            sds_name: "S".into(),
            uda_code: "U".into(),
            uda_name: "U".into(),
            positional_weighting: positional,
        }])
        .unwrap()
    }

    fn researcher() -> Researcher {
        Researcher {
            researcher_id: "r".into(),
            official_sds: "S".into(),
            institution_id: "u".into(),
            employment_start: NaiveDate::from_ymd_opt(1999, 1, 1).unwrap(),
            employment_end: None,
            rank: AcademicRank::Associate,
        }
    }

    fn solo(id: &str, cat: &str, citations: u64) -> Publication {
        Publication {
            pub_id: id.into(),
            year: 2006,
            doc_type: DocType::Article,
            subject_categories: vec![cat.into()],
            citations,
            authors: vec![Author {
                researcher_id: Some("r".into()),
                institution_id: "u".into(),
            }],
        }
    }

    fn baseline() -> CitationBaseline {
        CitationBaseline::from_medians(
            NaiveDate::from_ymd_opt(2009, 6, 30).unwrap(),
            [
                (
                    StratumKey {
                        year: 2006,
                        category: "A".into(),
                    },
                    2.5,
                ),
                (
                    StratumKey {
                        year: 2006,
                        category: "B".into(),
                    },
                    4.0,
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hand_evaluated_fss() {
        let w = YearWindow::new(2004, 2008).unwrap();
        // Impacts 5/2.5 = 2.0 and 4/4 = 1.0 over five years.
        let p1 = solo("p1", "A", 5);
        let p2 = solo("p2", "B", 4);
        let c = compute_fss(&researcher(), &[&p1, &p2], &baseline(), &taxonomy(false), w)
            .unwrap()
            .unwrap();
        assert_eq!(c.t, 5.0);
        assert!((c.fss - 0.6).abs() < 1e-15);
    }

    #[test]
    fn no_or_uncited_publications_give_zero() {
        let w = YearWindow::new(2004, 2008).unwrap();
        let c = compute_fss(&researcher(), &[], &baseline(), &taxonomy(false), w)
            .unwrap()
            .unwrap();
        assert_eq!(c.fss, 0.0);
        let z = solo("z", "NOPE", 0);
        let c = compute_fss(&researcher(), &[&z], &baseline(), &taxonomy(false), w)
            .unwrap()
            .unwrap();
        assert_eq!(c.fss, 0.0);
        let ranked = rank_within_sds(vec![c], RankPopulation::Active, Exec::default());
        assert_eq!(ranked[0].activity_class, ActivityClass::NonActive);
    }

    #[test]
    fn outside_window_is_skipped() {
        let w = YearWindow::new(2010, 2012).unwrap();
        let mut r = researcher();
        r.employment_end = NaiveDate::from_ymd_opt(2009, 12, 31);
        assert!(compute_fss(&r, &[], &baseline(), &taxonomy(false), w)
            .unwrap()
            .is_none());
    }

    #[test]
    fn missing_baseline_propagates() {
        let w = YearWindow::new(2004, 2008).unwrap();
        let p = solo("orphan", "NOPE", 3);
        match compute_fss(&researcher(), &[&p], &baseline(), &taxonomy(false), w) {
            Err(Error::MissingBaseline { pub_id }) => assert_eq!(pub_id, "orphan"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn positional_field_uses_byline_position() {
        let w = YearWindow::new(2004, 2008).unwrap();
        let mut p = solo("p", "A", 5);
        p.authors = vec![
            Author {
                researcher_id: Some("r".into()),
                institution_id: "u".into(),
            },
            Author {
                researcher_id: None,
                institution_id: "x".into(),
            },
            Author {
                researcher_id: None,
                institution_id: "y".into(),
            },
            Author {
                researcher_id: None,
                institution_id: "x".into(),
            },
            Author {
                researcher_id: None,
                institution_id: "u".into(),
            },
        ];
        let uniform = compute_fss(&researcher(), &[&p], &baseline(), &taxonomy(false), w)
            .unwrap()
            .unwrap();
        let positional = compute_fss(&researcher(), &[&p], &baseline(), &taxonomy(true), w)
            .unwrap()
            .unwrap();
        assert!((uniform.fss - 2.0 * 0.2 / 5.0).abs() < 1e-15);
        assert!((positional.fss - 2.0 * 0.4 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), [3.5, 1.0, 3.5, 2.0]);
        assert!(midranks(&[]).is_empty());
    }
}
