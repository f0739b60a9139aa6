use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use refaudit::baseline::BaselineInclusion;
use refaudit::cli::{cmd_audit, cmd_match, cmd_score, write_outputs, ConfigFile, RunConfig};
use refaudit::fss::RankPopulation;
use refaudit::model::YearWindow;
use refaudit::par::Exec;
use refaudit::Error;

#[derive(Parser)]
#[command(
    name = "refaudit",
    version,
    about = "Audit referee registers and score researcher productivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute FSS score cards for every roster researcher
    Score(Flags),
    /// Field coverage, concentration and cross-colonization of the register
    Audit(Flags),
    /// Referee coverage and performance for one call for proposals
    Match(Flags),
}

#[derive(Args)]
struct Flags {
    /// TOML file with defaults for any of the flags below
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    #[arg(long)]
    roster: Option<PathBuf>,
    #[arg(long)]
    register: Option<PathBuf>,
    /// Publications of the scored researchers (JSON Lines)
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// National corpus for citation medians (defaults to --corpus)
    #[arg(long)]
    reference_corpus: Option<PathBuf>,
    /// Reuse medians from a baseline.csv written by `score`
    #[arg(long)]
    baseline_cache: Option<PathBuf>,
    /// Applicants file (applicant_id,official_sds)
    #[arg(long)]
    call: Option<PathBuf>,
    /// Referees file (expert_id)
    #[arg(long)]
    call_referees: Option<PathBuf>,
    /// Existing scorecards.csv for `match`
    #[arg(long)]
    scorecards: Option<PathBuf>,
    /// Publication years, START:END
    #[arg(long)]
    window: Option<YearWindow>,
    /// Date at which citation counts were taken (YYYY-MM-DD)
    #[arg(long)]
    census_date: Option<NaiveDate>,
    /// Publications entering the medians: cited_only or all
    #[arg(long)]
    baseline: Option<BaselineInclusion>,
    /// Percentile denominator: active or all
    #[arg(long)]
    rank_population: Option<RankPopulation>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn into_config(self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ConfigFile::load(path)?.into_config()?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field { cfg.$target = v; })*
            };
        }
        macro_rules! take_path {
            ($($field:ident),* $(,)?) => {
                $(if self.$field.is_some() { cfg.$field = self.$field; })*
            };
        }
        take!(
            window => window,
            census_date => census_date,
            baseline => baseline_inclusion,
            rank_population => rank_population,
            out => out,
        );
        take_path!(
            taxonomy,
            roster,
            register,
            corpus,
            reference_corpus,
            baseline_cache,
            call,
            call_referees,
            scorecards,
        );
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let exec = Exec::default();
    let (flags, which) = match cli.command {
        Command::Score(f) => (f, "score"),
        Command::Audit(f) => (f, "audit"),
        Command::Match(f) => (f, "match"),
    };
    let config = flags.into_config()?;
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    let outputs = match which {
        "score" => cmd_score(&config, exec)?,
        "audit" => cmd_audit(&config)?,
        _ => cmd_match(&config, exec)?,
    };
    write_outputs(&config.out, &outputs)?;
    for (name, _) in &outputs {
        eprintln!("wrote {}", config.out.join(name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
