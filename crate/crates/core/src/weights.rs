//! Co-author credit shares.
//!
//! Outside the life sciences every co-author receives `1/s`. In fields that
//! encode contribution by byline position, bylines of three or more authors
//! favour the first and last slots:
//!
//! * first and last author at the same institution: 0.40 each, the other
//!   authors split 0.20;
//! * different institutions: 0.30 to first and last, 0.15 to second and
//!   second-to-last, the rest split 0.10.
//!
//! Short extramural bylines (three or four authors) have coinciding roles or
//! no "rest"; each slot then takes every role share at most once and the
//! shares are rescaled to sum to 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Publication;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingMode {
    Uniform,
    Positional,
}

const INTRA_END: f64 = 0.40;
const INTRA_REST: f64 = 0.20;
const EXTRA_END: f64 = 0.30;
const EXTRA_INNER: f64 = 0.15;
const EXTRA_REST: f64 = 0.10;

/// True when first and last author share an institution.
pub fn is_intramural(publication: &Publication) -> bool {
    match (publication.authors.first(), publication.authors.last()) {
        (Some(first), Some(last)) => first.institution_id == last.institution_id,
        _ => true,
    }
}

/// Unscaled extramural share of `position` (1-based) in a byline of `s > 2`.
fn extramural_raw(s: usize, position: usize) -> f64 {
    if position == 1 || position == s {
        EXTRA_END
    } else if position == 2 || position == s - 1 {
        EXTRA_INNER
    } else {
        // Only reached for s >= 5, where slots 3..=s-2 exist.
        EXTRA_REST / (s - 4) as f64
    }
}

/// Sum of the unscaled extramural shares; exactly 1 from five authors up.
fn extramural_total(s: usize) -> f64 {
    match s {
        3 => EXTRA_END * 2.0 + EXTRA_INNER,
        4 => EXTRA_END * 2.0 + EXTRA_INNER * 2.0,
        _ => 1.0,
    }
}

fn share(s: usize, position: usize, intramural: bool, mode: WeightingMode) -> f64 {
    if mode == WeightingMode::Uniform || s <= 2 {
        return 1.0 / s as f64;
    }
    if intramural {
        if position == 1 || position == s {
            INTRA_END
        } else {
            INTRA_REST / (s - 2) as f64
        }
    } else {
        match s {
            3 | 4 => extramural_raw(s, position) / extramural_total(s),
            _ => extramural_raw(s, position),
        }
    }
}

/// Credit share of the author in slot `position` (1-based).
pub fn authorship_weight(
    publication: &Publication,
    position: usize,
    mode: WeightingMode,
) -> Result<f64> {
    let s = publication.author_count();
    if position == 0 || position > s {
        return Err(Error::PositionOutOfRange {
            pub_id: publication.pub_id.clone(),
            position,
            authors: s,
        });
    }
    Ok(share(s, position, is_intramural(publication), mode))
}

/// Shares of every slot, in byline order.
pub fn weight_table(publication: &Publication, mode: WeightingMode) -> Vec<f64> {
    let s = publication.author_count();
    let intramural = is_intramural(publication);
    (1..=s).map(|p| share(s, p, intramural, mode)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Author, DocType};

    fn byline(institutions: &[&str]) -> Publication {
        Publication {
            pub_id: "p".into(),
            year: 2005,
            doc_type: DocType::Article,
            subject_categories: vec!["X".into()],
            citations: 1,
            authors: institutions
                .iter()
                .map(|i| Author {
                    researcher_id: None,
                    institution_id: i.to_string(),
                })
                .collect(),
        }
    }

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-15, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn five_intramural() {
        let p = byline(&["u", "v", "w", "x", "u"]);
        let r = 0.20 / 3.0;
        close(
            &weight_table(&p, WeightingMode::Positional),
            &[0.40, r, r, r, 0.40],
        );
    }

    #[test]
    fn six_extramural() {
        let p = byline(&["u", "u", "u", "v", "v", "v"]);
        close(
            &weight_table(&p, WeightingMode::Positional),
            &[0.30, 0.15, 0.05, 0.05, 0.15, 0.30],
        );
    }

    #[test]
    fn two_authors_split_evenly() {
        let p = byline(&["u", "v"]);
        close(&weight_table(&p, WeightingMode::Positional), &[0.5, 0.5]);
        close(
            &weight_table(&byline(&["u"]), WeightingMode::Positional),
            &[1.0],
        );
    }

    #[test]
    fn three_extramural_rescaled() {
        let p = byline(&["u", "w", "v"]);
        close(
            &weight_table(&p, WeightingMode::Positional),
            &[0.40, 0.20, 0.40],
        );
    }

    #[test]
    fn four_extramural_rescaled() {
        let p = byline(&["u", "w", "w", "v"]);
        close(
            &weight_table(&p, WeightingMode::Positional),
            &[1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0],
        );
    }

    #[test]
    fn three_intramural() {
        let p = byline(&["u", "w", "u"]);
        close(
            &weight_table(&p, WeightingMode::Positional),
            &[0.40, 0.20, 0.40],
        );
    }

    #[test]
    fn uniform_ignores_affiliation() {
        let p = byline(&["u", "w", "w", "v"]);
        close(&weight_table(&p, WeightingMode::Uniform), &[0.25; 4]);
    }

    #[test]
    fn position_bounds() {
        let p = byline(&["u", "v", "w"]);
        assert!(authorship_weight(&p, 0, WeightingMode::Uniform).is_err());
        assert!(authorship_weight(&p, 4, WeightingMode::Positional).is_err());
        assert!(
            (authorship_weight(&p, 2, WeightingMode::Positional).unwrap() - 0.20).abs() < 1e-15
        );
    }
}
