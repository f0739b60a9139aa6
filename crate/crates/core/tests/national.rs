//! Register-wide tables on the synthetic national fixture.

use refaudit::audit::{coverage_table, cross_colonization};
use refaudit::baseline::{BaselineInclusion, CitationBaseline};
use refaudit::call_match::referee_profile;
use refaudit::fss::{score_roster, RankPopulation};
use refaudit::model::YearWindow;
use refaudit::par::Exec;
use refaudit::report::round_pct;
use refaudit::synth;

#[test]
fn coverage_matches_the_register_census() {
    let f = synth::national();
    let report = coverage_table(&f.register, &f.taxonomy);

    let medicine = report
        .rows
        .iter()
        .find(|r| r.uda_name == "Medicine")
        .unwrap();
    assert_eq!(medicine.total_sds, 50);
    assert_eq!(medicine.uncovered_sds.len(), 11);
    assert_eq!(round_pct(medicine.uncovered_pct()), 22);
    assert_eq!(medicine.single_expert_sds.len(), 16);
    assert_eq!(round_pct(medicine.single_pct()), 32);

    let t = &report.totals;
    assert_eq!(
        (t.total_sds, t.expert_count, t.academic_count),
        (205, 1492, 956)
    );
    assert_eq!((t.uncovered, t.single), (18, 25));
}

#[test]
fn every_colonized_sds_has_no_native_declarer() {
    let f = synth::national();
    let flagged = cross_colonization(&f.register, &f.roster, &f.taxonomy);
    assert!(!flagged.is_empty());
    for c in &flagged {
        assert_eq!(c.native_declaring, 0);
        assert!(c.declaring_experts >= c.top_foreign_count);
        assert_ne!(c.top_foreign_source_sds, c.sds_code);
    }
}

#[test]
fn referee_profile_splits_by_uda() {
    let f = synth::national();
    let census = chrono::NaiveDate::from_ymd_opt(2009, 6, 30).unwrap();
    let baseline = CitationBaseline::compute(
        &f.corpus,
        census,
        BaselineInclusion::CitedOnly,
        Exec::default(),
    )
    .unwrap();
    let scoring = score_roster(
        &f.roster,
        &f.corpus,
        &baseline,
        &f.taxonomy,
        YearWindow::new(2004, 2008).unwrap(),
        RankPopulation::Active,
        Exec::default(),
    )
    .unwrap();
    let profile = referee_profile(&f.call, &f.register, &f.taxonomy, &scoring.cards).unwrap();
    let split: Vec<(usize, usize, usize)> = profile
        .rows
        .iter()
        .map(|r| (r.referee_count, r.below_median_count, r.inactive_count))
        .collect();
    assert_eq!(
        split,
        [
            (3, 0, 0),
            (8, 4, 2),
            (8, 5, 3),
            (9, 4, 1),
            (8, 4, 1),
            (3, 1, 1),
            (2, 0, 0),
            (2, 1, 0),
            (12, 3, 0)
        ]
    );
    assert!(profile.unscored.is_empty());
}
