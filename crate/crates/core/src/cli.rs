//! Run configuration and the three pipelines behind the `refaudit`
//! subcommands. Each pipeline renders all of its outputs in memory first;
//! files are only written once every step has succeeded.

use std::path::{Path, PathBuf};

use chrono::{Datelike, NaiveDate};
use serde::Deserialize;

use crate::audit::{concentration_index, coverage_table, cross_colonization};
use crate::baseline::{BaselineInclusion, CitationBaseline};
use crate::call_match::{match_analysis, referee_profile};
use crate::error::{Error, Result};
use crate::fss::{score_roster, RankPopulation, Scoring};
use crate::ingest::{
    check_corpus_links, load_call, load_corpus, load_register, load_roster, load_taxonomy,
};
use crate::model::YearWindow;
use crate::par::Exec;
use crate::report;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub window: YearWindow,
    pub census_date: NaiveDate,
    pub baseline_inclusion: BaselineInclusion,
    pub rank_population: RankPopulation,
    pub taxonomy: Option<PathBuf>,
    pub roster: Option<PathBuf>,
    pub register: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    /// National corpus for the citation medians; defaults to `corpus`.
    pub reference_corpus: Option<PathBuf>,
    /// Precomputed `year,category,me` medians, used instead of computing them.
    pub baseline_cache: Option<PathBuf>,
    pub call: Option<PathBuf>,
    pub call_referees: Option<PathBuf>,
    /// Existing scorecards.csv for `match`; computed in-process when absent.
    pub scorecards: Option<PathBuf>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            window: YearWindow {
                start: 2004,
                end: 2008,
            },
            census_date: NaiveDate::from_ymd_opt(2009, 6, 30).expect("valid date"),
            baseline_inclusion: BaselineInclusion::CitedOnly,
            rank_population: RankPopulation::Active,
            taxonomy: None,
            roster: None,
            register: None,
            corpus: None,
            reference_corpus: None,
            baseline_cache: None,
            call: None,
            call_referees: None,
            scorecards: None,
            out: PathBuf::from("."),
        }
    }
}

/// Optional TOML config file. Keys mirror the long flag names with
/// underscores; relative paths resolve against the file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub window: Option<String>,
    pub census_date: Option<NaiveDate>,
    pub baseline: Option<BaselineInclusion>,
    pub rank_population: Option<RankPopulation>,
    pub taxonomy: Option<PathBuf>,
    pub roster: Option<PathBuf>,
    pub register: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub reference_corpus: Option<PathBuf>,
    pub baseline_cache: Option<PathBuf>,
    pub call: Option<PathBuf>,
    pub call_referees: Option<PathBuf>,
    pub scorecards: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: ConfigFile = toml::from_str(&text)
            .map_err(|e| Error::validation(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.taxonomy,
            &mut cfg.roster,
            &mut cfg.register,
            &mut cfg.corpus,
            &mut cfg.reference_corpus,
            &mut cfg.baseline_cache,
            &mut cfg.call,
            &mut cfg.call_referees,
            &mut cfg.scorecards,
            &mut cfg.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Config-file values over the defaults.
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(w) = self.window {
            cfg.window = w.parse()?;
        }
        if let Some(d) = self.census_date {
            cfg.census_date = d;
        }
        if let Some(b) = self.baseline {
            cfg.baseline_inclusion = b;
        }
        if let Some(r) = self.rank_population {
            cfg.rank_population = r;
        }
        cfg.taxonomy = self.taxonomy;
        cfg.roster = self.roster;
        cfg.register = self.register;
        cfg.corpus = self.corpus;
        cfg.reference_corpus = self.reference_corpus;
        cfg.baseline_cache = self.baseline_cache;
        cfg.call = self.call;
        cfg.call_referees = self.call_referees;
        cfg.scorecards = self.scorecards;
        if let Some(out) = self.out {
            cfg.out = out;
        }
        Ok(cfg)
    }
}

impl RunConfig {
    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let window_end = NaiveDate::from_ymd_opt(self.window.end, 12, 31);
        if window_end.is_some_and(|end| self.census_date < end) {
            out.push(format!(
                "census date {} falls before the end of the window {}; late publications get little citation time",
                self.census_date, self.window
            ));
        }
        if self.census_date.year() < self.window.start {
            out.push(format!(
                "census date {} precedes the whole window {}",
                self.census_date, self.window
            ));
        }
        out
    }
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::validation(format!("--{flag} is required")))
}

/// Named output files, rendered but not yet written.
pub type Outputs = Vec<(&'static str, String)>;

/// Loads inputs, builds the baseline and scores the whole roster.
pub fn run_scoring(config: &RunConfig, exec: Exec) -> Result<(Scoring, CitationBaseline)> {
    let taxonomy = load_taxonomy(required(&config.taxonomy, "taxonomy")?)?;
    let roster = load_roster(required(&config.roster, "roster")?, &taxonomy)?;
    let corpus = load_corpus(required(&config.corpus, "corpus")?, config.window)?;
    check_corpus_links(&corpus, &roster)?;
    let baseline = match (&config.baseline_cache, &config.reference_corpus) {
        (Some(cache), _) => CitationBaseline::load_csv(cache, config.census_date)?,
        (None, Some(reference)) => {
            let reference = load_corpus(reference, config.window)?;
            CitationBaseline::compute(
                &reference,
                config.census_date,
                config.baseline_inclusion,
                exec,
            )?
        }
        (None, None) => {
            CitationBaseline::compute(&corpus, config.census_date, config.baseline_inclusion, exec)?
        }
    };
    let scoring = score_roster(
        &roster,
        &corpus,
        &baseline,
        &taxonomy,
        config.window,
        config.rank_population,
        exec,
    )?;
    Ok((scoring, baseline))
}

pub fn cmd_score(config: &RunConfig, exec: Exec) -> Result<Outputs> {
    let (scoring, baseline) = run_scoring(config, exec)?;
    Ok(vec![
        ("scorecards.csv", report::scorecards_csv(&scoring.cards)),
        ("skipped.csv", report::skip_log_csv(&scoring.skipped)),
        ("baseline.csv", baseline.to_csv()),
    ])
}

pub fn cmd_audit(config: &RunConfig) -> Result<Outputs> {
    let taxonomy = load_taxonomy(required(&config.taxonomy, "taxonomy")?)?;
    let roster = load_roster(required(&config.roster, "roster")?, &taxonomy)?;
    let register = load_register(required(&config.register, "register")?, &taxonomy, &roster)?;
    let coverage = coverage_table(&register, &taxonomy);
    let concentration = concentration_index(&register, &roster, &taxonomy);
    let colonized = cross_colonization(&register, &roster, &taxonomy);
    Ok(vec![
        ("coverage.csv", report::coverage_csv(&coverage)),
        ("coverage.txt", report::coverage_text(&coverage)),
        (
            "concentration.csv",
            report::concentration_csv(&concentration),
        ),
        (
            "concentration.txt",
            report::concentration_text(&concentration),
        ),
        ("colonization.csv", report::colonization_csv(&colonized)),
        ("colonization.txt", report::colonization_text(&colonized)),
    ])
}

pub fn cmd_match(config: &RunConfig, exec: Exec) -> Result<Outputs> {
    let taxonomy = load_taxonomy(required(&config.taxonomy, "taxonomy")?)?;
    let roster = load_roster(required(&config.roster, "roster")?, &taxonomy)?;
    let register = load_register(required(&config.register, "register")?, &taxonomy, &roster)?;
    let call = load_call(
        required(&config.call, "call")?,
        required(&config.call_referees, "call-referees")?,
        &taxonomy,
    )?;
    let matched = match_analysis(&call, &register, &roster, &taxonomy)?;
    let cards = match &config.scorecards {
        Some(path) => report::load_scorecards(path)?,
        None => run_scoring(config, exec)?.0.cards,
    };
    let profile = referee_profile(&call, &register, &taxonomy, &cards)?;
    Ok(vec![
        ("match_report.csv", report::match_csv(&matched)),
        ("match_report.txt", report::match_text(&matched)),
        ("referee_profile.csv", report::profile_csv(&profile)),
        ("referee_profile.txt", report::profile_text(&profile)),
    ])
}

/// Writes every output into `dir`, each through a temporary file that is
/// renamed into place only after all of them were written in full.
pub fn write_outputs(dir: &Path, outputs: &Outputs) -> Result<()> {
    let out_err = |path: &Path, source: std::io::Error| Error::Output {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(|e| out_err(dir, e))?;
    let mut staged = Vec::with_capacity(outputs.len());
    for (name, contents) in outputs {
        let mut tmp = tempfile::Builder::new()
            .prefix(&format!(".{name}."))
            .tempfile_in(dir)
            .map_err(|e| out_err(dir, e))?;
        std::io::Write::write_all(&mut tmp, contents.as_bytes())
            .map_err(|e| out_err(tmp.path(), e))?;
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, target) in staged {
        tmp.persist(&target)
            .map_err(|e| out_err(&target, e.error))?;
    }
    Ok(())
}
