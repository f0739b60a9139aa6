//! Synthetic national-scale fixture.
//!
//! Builds a taxonomy, roster, register, publication corpus and call for
//! proposals whose aggregates match published counts for the Italian
//! hard-science register (205 SDSs in nine UDAs, 39,512 staff, 1,492
//! experts of whom 956 academics) and for the 2008 Sardinia regional call
//! (327 applicants, 55 referees). Individual records are invented; only the
//! per-UDA counts are constrained. Used by the test suites, the benches and
//! `examples/gen_fixtures.rs`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::baseline::csv_cell;
use crate::ingest::Register;
use crate::model::{
    AcademicRank, Applicant, Author, CallForProposals, DocType, ExpertCategory, FieldTaxonomy,
    Publication, RegisterEntry, Researcher, Roster, SdsEntry,
};

/// Target counts for one UDA.
#[derive(Debug, Clone, Copy)]
pub struct UdaProfile {
    pub code: &'static str,
    pub name: &'static str,
    pub life_science: bool,
    pub total_sds: usize,
    /// Experts declaring at least one SDS of the UDA.
    pub declaring_experts: usize,
    pub declaring_academics: usize,
    pub uncovered_sds: usize,
    pub single_expert_sds: usize,
    /// Register academics whose official SDS is in the UDA.
    pub official_academics: usize,
    pub staff: usize,
    pub applicants: usize,
    pub referees: usize,
    pub applicant_sds: usize,
    pub covered_sds: usize,
    /// Applicants placed in SDSs no referee covers.
    pub stranded_applicants: usize,
    pub referees_below_median: usize,
    pub referees_inactive: usize,
}

const fn uda(
    code: &'static str,
    name: &'static str,
    life_science: bool,
    register: [usize; 7],
    call: [usize; 7],
) -> UdaProfile {
    UdaProfile {
        code,
        name,
        life_science,
        total_sds: register[0],
        declaring_experts: register[1],
        declaring_academics: register[2],
        uncovered_sds: register[3],
        single_expert_sds: register[4],
        official_academics: register[5],
        staff: register[6],
        applicants: call[0],
        referees: call[1],
        applicant_sds: call[2],
        covered_sds: call[3],
        stranded_applicants: call[4],
        referees_below_median: call[5],
        referees_inactive: call[6],
    }
}

pub const HARD_SCIENCES: [UdaProfile; 9] = [
    uda(
        "08",
        "Civil engineering",
        false,
        [22, 130, 59, 2, 1, 40, 1455],
        [16, 3, 6, 3, 5, 0, 0],
    ),
    uda(
        "09",
        "Industrial and information engineering",
        false,
        [42, 774, 509, 0, 0, 438, 5488],
        [41, 8, 23, 6, 34, 4, 2],
    ),
    uda(
        "07",
        "Agriculture and veterinary science",
        true,
        [30, 147, 86, 3, 4, 74, 3153],
        [43, 8, 27, 6, 33, 5, 3],
    ),
    uda(
        "05",
        "Biology",
        true,
        [19, 207, 113, 1, 1, 80, 5792],
        [65, 9, 17, 6, 34, 4, 1],
    ),
    uda(
        "03",
        "Chemistry",
        false,
        [12, 238, 143, 0, 0, 99, 3610],
        [32, 8, 11, 6, 14, 4, 1],
    ),
    uda(
        "04",
        "Earth science",
        false,
        [12, 54, 21, 1, 2, 13, 1440],
        [14, 3, 9, 3, 10, 1, 1],
    ),
    uda(
        "02",
        "Physics",
        false,
        [8, 196, 100, 0, 0, 78, 2872],
        [17, 2, 5, 2, 10, 0, 0],
    ),
    uda(
        "01",
        "Mathematics and computer science",
        false,
        [10, 176, 88, 0, 1, 49, 3516],
        [6, 2, 4, 2, 3, 1, 0],
    ),
    uda(
        "06",
        "Medicine",
        true,
        [50, 117, 89, 11, 16, 85, 12186],
        [93, 12, 28, 10, 48, 3, 0],
    ),
];

/// Distinct register entries (academic and not).
pub const REGISTER_SIZE: usize = 1492;
/// Register entries without a category.
const UNSPECIFIED_CATEGORY: usize = 134;

#[derive(Debug, Clone)]
pub struct NationalFixture {
    pub taxonomy: FieldTaxonomy,
    pub roster: Roster,
    pub register: Register,
    pub corpus: Vec<Publication>,
    pub call: CallForProposals,
}

#[derive(Debug, Clone)]
pub struct FixturePaths {
    pub taxonomy: PathBuf,
    pub roster: PathBuf,
    pub register: PathBuf,
    pub corpus: PathBuf,
    pub applicants: PathBuf,
    pub referees: PathBuf,
}

fn sds_code(uda: &UdaProfile, j: usize) -> String {
    format!("U{}/{:02}", uda.code, j + 1)
}

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid fixture date")
}

fn build_taxonomy() -> FieldTaxonomy {
    let entries = HARD_SCIENCES
        .iter()
        .flat_map(|u| {
            (0..u.total_sds).map(move |j| SdsEntry {
                sds_code: sds_code(u, j),
                sds_name: format!("{} sector {}", u.name, j + 1),
                uda_code: u.code.to_string(),
                uda_name: u.name.to_string(),
                positional_weighting: u.life_science,
            })
        })
        .collect();
    FieldTaxonomy::new(entries).expect("fixture taxonomy is valid")
}

/// Roster researchers per SDS, as indices into the roster, per UDA.
type StaffIndex = Vec<Vec<Vec<usize>>>;

fn build_roster(taxonomy: &FieldTaxonomy) -> (Roster, StaffIndex) {
    let ranks = [
        AcademicRank::Assistant,
        AcademicRank::Associate,
        AcademicRank::Full,
        AcademicRank::Associate,
        AcademicRank::Other,
    ];
    let mut researchers = Vec::new();
    let mut index: StaffIndex = Vec::new();
    for u in &HARD_SCIENCES {
        let mut per_sds = vec![Vec::new(); u.total_sds];
        for k in 0..u.staff {
            let n = researchers.len();
            let j = k % u.total_sds;
            let (start, end) = match n % 97 {
                13 => (date(2006, 3, 1), None),
                41 => (date(1994, 11, 1), Some(date(2007, 6, 30))),
                _ => (date(1990 + (n % 15) as i32, 1 + (n % 12) as u32, 1), None),
            };
            per_sds[j].push(n);
            researchers.push(Researcher {
                researcher_id: format!("R{n:05}"),
                official_sds: sds_code(u, j),
                institution_id: format!("UNI{:02}", n % 61),
                employment_start: start,
                employment_end: end,
                rank: ranks[n % ranks.len()],
            });
        }
        index.push(per_sds);
    }
    (
        Roster::new(researchers, taxonomy).expect("fixture roster is valid"),
        index,
    )
}

struct Expert {
    researcher: Option<usize>,
    declared: Vec<String>,
}

/// A declaration an expert makes inside one UDA, before its SDS is chosen.
struct Pending {
    expert: usize,
    native_sds: Option<usize>,
}

struct RegisterPlan {
    experts: Vec<Expert>,
    /// Register index of the native academics per UDA and SDS slot.
    natives: Vec<Vec<Vec<usize>>>,
}

fn plan_register(staff: &StaffIndex) -> RegisterPlan {
    let mut experts: Vec<Expert> = Vec::new();
    let mut natives: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut academics_by_uda: Vec<Vec<usize>> = Vec::new();
    let mut pending: Vec<Vec<Pending>> = (0..HARD_SCIENCES.len()).map(|_| Vec::new()).collect();

    // Academics, each declaring their official SDS. Official SDSs cycle over
    // the SDSs that end up declared by two or more experts.
    for (ui, u) in HARD_SCIENCES.iter().enumerate() {
        let multi = u.total_sds - u.uncovered_sds - u.single_expert_sds;
        let mut slots = vec![Vec::new(); u.total_sds];
        let mut used = vec![0usize; u.total_sds];
        let mut mine = Vec::new();
        for i in 0..u.official_academics {
            let j = i % multi;
            let researcher = staff[ui][j][used[j]];
            used[j] += 1;
            let e = experts.len();
            experts.push(Expert {
                researcher: Some(researcher),
                declared: vec![sds_code(u, j)],
            });
            slots[j].push(e);
            mine.push(e);
            pending[ui].push(Pending {
                expert: e,
                native_sds: Some(j),
            });
        }
        natives.push(slots);
        academics_by_uda.push(mine);
    }

    // Academics who also declare one SDS in a second UDA.
    let all_academics: Vec<(usize, usize)> = academics_by_uda
        .iter()
        .enumerate()
        .flat_map(|(ui, list)| list.iter().map(move |&e| (ui, e)))
        .collect();
    let mut has_extra = vec![false; experts.len()];
    let mut cursor = 0usize;
    for (ui, u) in HARD_SCIENCES.iter().enumerate() {
        for _ in 0..(u.declaring_academics - u.official_academics) {
            loop {
                let (home, e) = all_academics[cursor % all_academics.len()];
                cursor += 1;
                if home != ui && !has_extra[e] {
                    has_extra[e] = true;
                    pending[ui].push(Pending {
                        expert: e,
                        native_sds: None,
                    });
                    break;
                }
            }
        }
    }

    // Non-academics: one declaration per UDA token, two UDAs for some.
    let non_academics = REGISTER_SIZE - experts.len();
    let tokens: Vec<usize> = HARD_SCIENCES
        .iter()
        .enumerate()
        .flat_map(|(ui, u)| std::iter::repeat_n(ui, u.declaring_experts - u.declaring_academics))
        .collect();
    let first_external = experts.len();
    for _ in 0..non_academics {
        experts.push(Expert {
            researcher: None,
            declared: Vec::new(),
        });
    }
    for (k, &ui) in tokens.iter().enumerate() {
        pending[ui].push(Pending {
            expert: first_external + k % non_academics,
            native_sds: None,
        });
    }

    // Choose SDSs: singles first (from foreign declarers), natives stay on
    // their official SDS, the rest cycle over the multi-declared SDSs.
    for (ui, u) in HARD_SCIENCES.iter().enumerate() {
        let multi = u.total_sds - u.uncovered_sds - u.single_expert_sds;
        let mut foreign: Vec<usize> = pending[ui]
            .iter()
            .filter(|p| p.native_sds.is_none())
            .map(|p| p.expert)
            .collect();
        let rest = foreign.split_off(u.single_expert_sds);
        for (s, &e) in foreign.iter().enumerate() {
            experts[e].declared.push(sds_code(u, multi + s));
        }
        for (turn, e) in (u.official_academics..).zip(rest) {
            experts[e].declared.push(sds_code(u, turn % multi));
        }
    }
    for e in &mut experts {
        e.declared.sort();
        e.declared.dedup();
    }
    RegisterPlan { experts, natives }
}

fn build_register(plan: &RegisterPlan, roster: &Roster, taxonomy: &FieldTaxonomy) -> Register {
    let mut unspecified = 0;
    let mut external = 0;
    let entries = plan
        .experts
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let category = match e.researcher {
                Some(_) => ExpertCategory::A,
                None if unspecified < UNSPECIFIED_CATEGORY => {
                    unspecified += 1;
                    ExpertCategory::Unspecified
                }
                None => {
                    external += 1;
                    if external % 2 == 0 {
                        ExpertCategory::B
                    } else {
                        ExpertCategory::C
                    }
                }
            };
            RegisterEntry {
                expert_id: format!("E{i:04}"),
                researcher_id: e
                    .researcher
                    .map(|r| roster.researchers()[r].researcher_id.clone()),
                category,
                declared_sds: e.declared.clone(),
            }
        })
        .collect();
    Register::new(entries, taxonomy, roster).expect("fixture register is valid")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Standing {
    Inactive,
    Low,
    High,
}

fn build_call(plan: &RegisterPlan) -> (CallForProposals, Vec<(usize, Standing)>) {
    let mut applicants = Vec::new();
    let mut referees = Vec::new();
    let mut standings = Vec::new();
    for (ui, u) in HARD_SCIENCES.iter().enumerate() {
        let uncovered_fields = u.applicant_sds - u.covered_sds;
        let covered_applicants = u.applicants - u.stranded_applicants;
        for k in 0..covered_applicants {
            applicants.push(sds_code(u, k % u.covered_sds));
        }
        for k in 0..u.stranded_applicants {
            applicants.push(sds_code(u, u.covered_sds + k % uncovered_fields));
        }
        for r in 0..u.referees {
            let expert = plan.natives[ui][r % u.covered_sds][r / u.covered_sds];
            let standing = if r < u.referees_inactive {
                Standing::Inactive
            } else if r < u.referees_below_median {
                Standing::Low
            } else {
                Standing::High
            };
            referees.push(format!("E{expert:04}"));
            standings.push((expert, standing));
        }
    }
    let applicants = applicants
        .into_iter()
        .enumerate()
        .map(|(i, sds)| Applicant {
            applicant_id: format!("A{i:03}"),
            official_sds: sds,
        })
        .collect();
    (
        CallForProposals {
            applicants,
            referees,
        },
        standings,
    )
}

fn unlinked(institution: String) -> Author {
    Author {
        researcher_id: None,
        institution_id: institution,
    }
}

/// Publications for everyone in the referees' SDSs. Peers publish with
/// 8..=31 citations as first or last of at most three authors; low referees
/// have one solo paper cited once, high referees one solo paper cited 500
/// times, inactive referees nothing. All papers of an SDS share one
/// (year, category) stratum, so the ordering survives normalization.
fn build_corpus(
    roster: &Roster,
    staff: &StaffIndex,
    register: &Register,
    standings: &[(usize, Standing)],
) -> Vec<Publication> {
    let referee_of: std::collections::HashMap<&str, Standing> = standings
        .iter()
        .map(|&(e, s)| {
            let id = register.entries()[e]
                .researcher_id
                .as_deref()
                .expect("referees are academics");
            (id, s)
        })
        .collect();
    let researchers = roster.researchers();
    let mut fields: Vec<(usize, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for &(e, _) in standings {
        let id = register.entries()[e].researcher_id.as_deref().unwrap();
        let sds = &roster.get(id).unwrap().official_sds;
        let (ui, u) = HARD_SCIENCES
            .iter()
            .enumerate()
            .find(|(_, u)| sds.starts_with(&format!("U{}/", u.code)))
            .unwrap();
        let j = (0..u.total_sds).find(|&j| &sds_code(u, j) == sds).unwrap();
        if seen.insert((ui, j)) {
            fields.push((ui, j));
        }
    }
    fields.sort_unstable();

    let mut pubs = Vec::new();
    let mut next_id = 0usize;
    let mut make = |year: i32, category: &str, citations: u64, authors: Vec<Author>| {
        next_id += 1;
        let doc_type = match next_id % 7 {
            0 => DocType::Review,
            3 => DocType::Proceedings,
            _ => DocType::Article,
        };
        Publication {
            pub_id: format!("P{next_id:06}"),
            year,
            doc_type,
            subject_categories: vec![category.to_string()],
            citations,
            authors,
        }
    };
    for (ui, j) in fields {
        let u = &HARD_SCIENCES[ui];
        let category = format!("SC-{}", sds_code(u, j));
        let year = 2004 + ((ui + j) % 5) as i32;
        let members = &staff[ui][j];
        let peers: Vec<&Researcher> = members
            .iter()
            .map(|&n| &researchers[n])
            .filter(|r| !referee_of.contains_key(r.researcher_id.as_str()))
            .collect();
        for r in members.iter().map(|&n| &researchers[n]) {
            let me = Author {
                researcher_id: Some(r.researcher_id.clone()),
                institution_id: r.institution_id.clone(),
            };
            match referee_of.get(r.researcher_id.as_str()) {
                Some(Standing::Inactive) => {}
                Some(Standing::Low) => pubs.push(make(year, &category, 1, vec![me])),
                Some(Standing::High) => pubs.push(make(year, &category, 500, vec![me])),
                None => {}
            }
        }
        for (i, peer) in peers.iter().enumerate() {
            if i % 4 == 3 {
                continue;
            }
            let me = Author {
                researcher_id: Some(peer.researcher_id.clone()),
                institution_id: peer.institution_id.clone(),
            };
            let citations = 8 + ((i * 7) % 24) as u64;
            let authors = match i % 3 {
                0 => vec![me],
                1 => vec![unlinked(format!("UNI{:02}", (i + 5) % 61)), me],
                _ => vec![
                    me,
                    unlinked("EXT".into()),
                    unlinked(peer.institution_id.clone()),
                ],
            };
            pubs.push(make(year, &category, citations, authors));
            if i % 5 == 0 {
                // A second paper a year later, in an uncited stretch.
                pubs.push(make(
                    (year + 1).min(2008),
                    &category,
                    0,
                    vec![Author {
                        researcher_id: Some(peer.researcher_id.clone()),
                        institution_id: peer.institution_id.clone(),
                    }],
                ));
            }
        }
        // Two peers sharing a paper as first and last author.
        if peers.len() > 2 {
            let first = peers[0];
            let last = peers[1];
            pubs.push(make(
                year,
                &category,
                9,
                vec![
                    Author {
                        researcher_id: Some(first.researcher_id.clone()),
                        institution_id: first.institution_id.clone(),
                    },
                    unlinked("EXT".into()),
                    Author {
                        researcher_id: Some(last.researcher_id.clone()),
                        institution_id: last.institution_id.clone(),
                    },
                ],
            ));
        }
    }
    // Out-of-window papers the loader must drop.
    pubs.push(make(2003, "SC-OLD", 12, vec![unlinked("UNI00".into())]));
    pubs.push(make(2009, "SC-NEW", 3, vec![unlinked("UNI01".into())]));
    pubs
}

pub fn national() -> NationalFixture {
    let taxonomy = build_taxonomy();
    let (roster, staff) = build_roster(&taxonomy);
    let plan = plan_register(&staff);
    let register = build_register(&plan, &roster, &taxonomy);
    let (call, standings) = build_call(&plan);
    let corpus = build_corpus(&roster, &staff, &register, &standings);
    NationalFixture {
        taxonomy,
        roster,
        register,
        corpus,
        call,
    }
}

pub fn taxonomy_csv(taxonomy: &FieldTaxonomy) -> String {
    let mut out = String::from("sds_code,sds_name,uda_code,uda_name,positional_weighting\n");
    for e in taxonomy.entries() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_cell(&e.sds_code),
            csv_cell(&e.sds_name),
            csv_cell(&e.uda_code),
            csv_cell(&e.uda_name),
            u8::from(e.positional_weighting)
        );
    }
    out
}

pub fn roster_csv(roster: &Roster) -> String {
    let mut out = String::from(
        "researcher_id,official_sds,institution_id,employment_start,employment_end,rank\n",
    );
    for r in roster.researchers() {
        let rank = match r.rank {
            AcademicRank::Assistant => "assistant",
            AcademicRank::Associate => "associate",
            AcademicRank::Full => "full",
            AcademicRank::Other => "other",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_cell(&r.researcher_id),
            csv_cell(&r.official_sds),
            csv_cell(&r.institution_id),
            r.employment_start,
            r.employment_end.map(|d| d.to_string()).unwrap_or_default(),
            rank
        );
    }
    out
}

pub fn register_csv(register: &Register) -> String {
    let mut out = String::from("expert_id,category,researcher_id,declared_sds\n");
    for e in register.entries() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_cell(&e.expert_id),
            e.category.as_str(),
            csv_cell(e.researcher_id.as_deref().unwrap_or("")),
            csv_cell(&e.declared_sds.join(";"))
        );
    }
    out
}

pub fn corpus_jsonl(pubs: &[Publication]) -> String {
    let mut out = String::new();
    for p in pubs {
        out.push_str(&serde_json::to_string(p).expect("publication serializes"));
        out.push('\n');
    }
    out
}

pub fn applicants_csv(call: &CallForProposals) -> String {
    let mut out = String::from("applicant_id,official_sds\n");
    for a in &call.applicants {
        let _ = writeln!(
            out,
            "{},{}",
            csv_cell(&a.applicant_id),
            csv_cell(&a.official_sds)
        );
    }
    out
}

pub fn referees_csv(call: &CallForProposals) -> String {
    let mut out = String::from("expert_id\n");
    for r in &call.referees {
        let _ = writeln!(out, "{}", csv_cell(r));
    }
    out
}

impl NationalFixture {
    pub fn write(&self, dir: &Path) -> io::Result<FixturePaths> {
        fs::create_dir_all(dir)?;
        let paths = FixturePaths {
            taxonomy: dir.join("taxonomy.csv"),
            roster: dir.join("roster.csv"),
            register: dir.join("register.csv"),
            corpus: dir.join("publications.jsonl"),
            applicants: dir.join("applicants.csv"),
            referees: dir.join("call_referees.csv"),
        };
        fs::write(&paths.taxonomy, taxonomy_csv(&self.taxonomy))?;
        fs::write(&paths.roster, roster_csv(&self.roster))?;
        fs::write(&paths.register, register_csv(&self.register))?;
        fs::write(&paths.corpus, corpus_jsonl(&self.corpus))?;
        fs::write(&paths.applicants, applicants_csv(&self.call))?;
        fs::write(&paths.referees, referees_csv(&self.call))?;
        Ok(paths)
    }
}
