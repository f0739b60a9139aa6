//! Random mini-corpora and a brute-force FSS evaluator that shares no code
//! with the library's scoring path.
#![allow(dead_code)]

use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate};
use rand::seq::IndexedRandom;
use rand::Rng;

use refaudit::model::{
    AcademicRank, Author, DocType, FieldTaxonomy, Publication, Researcher, Roster, SdsEntry,
    YearWindow,
};

pub const WINDOW: YearWindow = YearWindow {
    start: 2004,
    end: 2008,
};

pub fn census() -> NaiveDate {
    NaiveDate::from_ymd_opt(2009, 6, 30).unwrap()
}

pub fn taxonomy() -> FieldTaxonomy {
    let rows = [
        ("BIO/10", "05", "Biology", true),
        ("BIO/11", "05", "Biology", true),
        ("ING-IND/08", "09", "Industrial engineering", false),
    ];
    FieldTaxonomy::new(
        rows.iter()
            .map(|(s, u, n, p)| SdsEntry {
                sds_code: s.to_string(),
                sds_name: s.to_string(),
                uda_code: u.to_string(),
                uda_name: n.to_string(),
                positional_weighting: *p,
            })
            .collect(),
    )
    .unwrap()
}

pub struct MiniCorpus {
    pub taxonomy: FieldTaxonomy,
    pub roster: Roster,
    pub pubs: Vec<Publication>,
}

fn random_date<R: Rng>(rng: &mut R, from_year: i32, to_year: i32) -> NaiveDate {
    let y = rng.random_range(from_year..=to_year);
    let m = rng.random_range(1..=12);
    let d = rng.random_range(1..=28);
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// At most 10 researchers, 30 publications and 3 subject categories.
pub fn mini_corpus<R: Rng>(rng: &mut R) -> MiniCorpus {
    let taxonomy = taxonomy();
    let codes: Vec<&str> = taxonomy
        .entries()
        .iter()
        .map(|e| e.sds_code.as_str())
        .collect();
    let institutions = ["U1", "U2", "U3"];
    let categories = ["CAT-A", "CAT-B", "CAT-C"];

    let n_researchers = rng.random_range(1..=10);
    let researchers: Vec<Researcher> = (0..n_researchers)
        .map(|i| {
            let start = random_date(rng, 1995, 2007);
            let end = if rng.random_bool(0.3) {
                let e = random_date(rng, 2004, 2012);
                Some(e.max(start))
            } else {
                None
            };
            Researcher {
                researcher_id: format!("r{i}"),
                official_sds: codes.choose(rng).unwrap().to_string(),
                institution_id: institutions.choose(rng).unwrap().to_string(),
                employment_start: start,
                employment_end: end,
                rank: AcademicRank::Associate,
            }
        })
        .collect();
    let roster = Roster::new(researchers, &taxonomy).unwrap();

    let n_pubs = rng.random_range(1..=30);
    let pubs = (0..n_pubs)
        .map(|k| {
            let s = rng.random_range(1..=7);
            let mut linked: Vec<usize> = (0..n_researchers).collect();
            let mut authors = Vec::with_capacity(s);
            for _ in 0..s {
                let researcher_id = if !linked.is_empty() && rng.random_bool(0.6) {
                    let pick = rng.random_range(0..linked.len());
                    Some(format!("r{}", linked.swap_remove(pick)))
                } else {
                    None
                };
                authors.push(Author {
                    researcher_id,
                    institution_id: institutions.choose(rng).unwrap().to_string(),
                });
            }
            let n_cats = rng.random_range(1..=3);
            let mut cats: Vec<String> = categories
                .choose_multiple(rng, n_cats)
                .map(|c| c.to_string())
                .collect();
            cats.sort();
            let citations = if rng.random_bool(0.3) {
                0
            } else {
                rng.random_range(1..=60)
            };
            Publication {
                pub_id: format!("p{k}"),
                year: rng.random_range(WINDOW.start..=WINDOW.end),
                doc_type: DocType::Article,
                subject_categories: cats,
                citations,
                authors,
            }
        })
        .collect();
    MiniCorpus {
        taxonomy,
        roster,
        pubs,
    }
}

/// Medians of cited-only publications per (year, category).
pub fn oracle_medians(pubs: &[Publication]) -> BTreeMap<(i32, String), f64> {
    let mut strata: BTreeMap<(i32, String), Vec<u64>> = BTreeMap::new();
    for p in pubs.iter().filter(|p| p.citations >= 1) {
        for c in &p.subject_categories {
            strata
                .entry((p.year, c.clone()))
                .or_default()
                .push(p.citations);
        }
    }
    strata
        .into_iter()
        .map(|(k, mut v)| {
            v.sort();
            let n = v.len();
            let me = (v[(n - 1) / 2] + v[n / 2]) as f64 / 2.0;
            (k, me)
        })
        .collect()
}

/// Credit table built role by role, then rescaled by its own sum.
pub fn oracle_weights(institutions: &[&str], positional: bool) -> Vec<f64> {
    let s = institutions.len();
    if !positional || s <= 2 {
        return vec![1.0 / s as f64; s];
    }
    let mut w = vec![0.0; s];
    let last = s - 1;
    if institutions[0] == institutions[last] {
        w[0] = 0.4;
        w[last] = 0.4;
        for x in &mut w[1..last] {
            *x = 0.2 / (s - 2) as f64;
        }
    } else {
        let mut taken = vec![false; s];
        for (slot, share) in [(0, 0.3), (last, 0.3), (1, 0.15), (last - 1, 0.15)] {
            if !taken[slot] {
                w[slot] += share;
                taken[slot] = true;
            }
        }
        let rest: Vec<usize> = (0..s).filter(|&i| !taken[i]).collect();
        for &i in &rest {
            w[i] = 0.1 / rest.len() as f64;
        }
        let total: f64 = w.iter().sum();
        for x in &mut w {
            *x /= total;
        }
    }
    w
}

/// Years worked in the window, summed day by day.
pub fn oracle_years(r: &Researcher, window: YearWindow) -> f64 {
    let mut day = NaiveDate::from_ymd_opt(window.start, 1, 1).unwrap();
    let stop = NaiveDate::from_ymd_opt(window.end, 12, 31).unwrap();
    let mut t = 0.0;
    while day <= stop {
        let employed = day >= r.employment_start && r.employment_end.is_none_or(|e| day <= e);
        if employed {
            let leap = NaiveDate::from_ymd_opt(day.year(), 2, 29).is_some();
            t += 1.0 / if leap { 366.0 } else { 365.0 };
        }
        day = day.succ_opt().unwrap();
    }
    t
}

/// FSS of every researcher with positive time in the window.
pub fn oracle_fss(corpus: &MiniCorpus) -> BTreeMap<String, f64> {
    let medians = oracle_medians(&corpus.pubs);
    let mut out = BTreeMap::new();
    for r in corpus.roster.researchers() {
        let t = oracle_years(r, WINDOW);
        if t <= 0.0 {
            continue;
        }
        let positional = corpus
            .taxonomy
            .sds(&r.official_sds)
            .unwrap()
            .positional_weighting;
        let mut sum = 0.0;
        for p in &corpus.pubs {
            let Some(slot) = p
                .authors
                .iter()
                .position(|a| a.researcher_id.as_deref() == Some(r.researcher_id.as_str()))
            else {
                continue;
            };
            if p.citations == 0 {
                continue;
            }
            let ratios: Vec<f64> = p
                .subject_categories
                .iter()
                .filter_map(|c| medians.get(&(p.year, c.clone())))
                .map(|me| p.citations as f64 / me)
                .collect();
            let impact = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let inst: Vec<&str> = p
                .authors
                .iter()
                .map(|a| a.institution_id.as_str())
                .collect();
            sum += impact * oracle_weights(&inst, positional)[slot];
        }
        out.insert(r.researcher_id.clone(), sum / t);
    }
    out
}

/// Scales every citation count by `k`.
pub fn scaled(pubs: &[Publication], k: u64) -> Vec<Publication> {
    pubs.iter()
        .cloned()
        .map(|mut p| {
            p.citations *= k;
            p
        })
        .collect()
}
