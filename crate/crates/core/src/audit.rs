//! Register audit against the taxonomy and national roster.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::ingest::Register;
use crate::model::{FieldTaxonomy, Roster};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageRow {
    pub uda_code: String,
    pub uda_name: String,
    pub total_sds: usize,
    /// Experts declaring at least one SDS of the UDA. An expert declaring
    /// SDSs in several UDAs is counted in each.
    pub expert_count: usize,
    pub academic_count: usize,
    pub uncovered_sds: Vec<String>,
    pub single_expert_sds: Vec<String>,
}

impl CoverageRow {
    pub fn uncovered_pct(&self) -> f64 {
        pct(self.uncovered_sds.len(), self.total_sds)
    }

    pub fn single_pct(&self) -> f64 {
        pct(self.single_expert_sds.len(), self.total_sds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageTotals {
    pub total_sds: usize,
    /// Distinct register entries.
    pub expert_count: usize,
    pub academic_count: usize,
    pub uncovered: usize,
    pub single: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub rows: Vec<CoverageRow>,
    pub totals: CoverageTotals,
}

pub(crate) fn pct(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// SDS coverage per UDA: how many register experts declare each SDS.
pub fn coverage_table(register: &Register, taxonomy: &FieldTaxonomy) -> CoverageReport {
    let mut declarers: HashMap<&str, usize> = HashMap::new();
    let mut experts_by_uda: HashMap<&str, (BTreeSet<&str>, BTreeSet<&str>)> = HashMap::new();
    for e in register.entries() {
        for sds in &e.declared_sds {
            *declarers.entry(sds.as_str()).or_insert(0) += 1;
            if let Some(uda) = taxonomy.uda_of(sds) {
                let (all, academics) = experts_by_uda.entry(uda).or_default();
                all.insert(e.expert_id.as_str());
                if e.is_academic() {
                    academics.insert(e.expert_id.as_str());
                }
            }
        }
    }

    let rows: Vec<CoverageRow> = taxonomy
        .udas()
        .iter()
        .map(|uda| {
            let mut row = CoverageRow {
                uda_code: uda.code.clone(),
                uda_name: uda.name.clone(),
                total_sds: 0,
                expert_count: 0,
                academic_count: 0,
                uncovered_sds: Vec::new(),
                single_expert_sds: Vec::new(),
            };
            for sds in taxonomy.sds_in_uda(&uda.code) {
                row.total_sds += 1;
                match declarers.get(sds.sds_code.as_str()).copied().unwrap_or(0) {
                    0 => row.uncovered_sds.push(sds.sds_code.clone()),
                    1 => row.single_expert_sds.push(sds.sds_code.clone()),
                    _ => {}
                }
            }
            if let Some((all, academics)) = experts_by_uda.get(uda.code.as_str()) {
                row.expert_count = all.len();
                row.academic_count = academics.len();
            }
            row
        })
        .collect();

    let totals = CoverageTotals {
        total_sds: rows.iter().map(|r| r.total_sds).sum(),
        expert_count: register.len(),
        academic_count: register.academics().count(),
        uncovered: rows.iter().map(|r| r.uncovered_sds.len()).sum(),
        single: rows.iter().map(|r| r.single_expert_sds.len()).sum(),
    };
    CoverageReport { rows, totals }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationRow {
    pub uda_code: String,
    pub uda_name: String,
    pub academic_experts: usize,
    pub national_staff: usize,
    /// `None` when the UDA has no staff (or the register no academics).
    pub concentration_index: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub rows: Vec<ConcentrationRow>,
    pub total_academic_experts: usize,
    pub total_staff: usize,
}

/// Ratio of each UDA's share of register academics to its share of national
/// staff. Academics are placed in the UDA of their official SDS.
pub fn concentration_index(
    register: &Register,
    roster: &Roster,
    taxonomy: &FieldTaxonomy,
) -> ConcentrationReport {
    let staff = roster.staff_by_uda(taxonomy);
    let mut experts: HashMap<&str, usize> = HashMap::new();
    for e in register.academics() {
        let uda = e
            .researcher_id
            .as_deref()
            .and_then(|id| roster.get(id))
            .and_then(|r| taxonomy.uda_of(&r.official_sds));
        if let Some(uda) = uda {
            *experts.entry(uda).or_insert(0) += 1;
        }
    }
    let total_academic_experts: usize = experts.values().sum();
    let total_staff = roster.len();

    let rows = taxonomy
        .udas()
        .iter()
        .map(|uda| {
            let e = experts.get(uda.code.as_str()).copied().unwrap_or(0);
            let s = staff.get(&uda.code).copied().unwrap_or(0);
            let concentration_index = (s > 0 && total_academic_experts > 0).then(|| {
                (e as f64 / total_academic_experts as f64) / (s as f64 / total_staff as f64)
            });
            ConcentrationRow {
                uda_code: uda.code.clone(),
                uda_name: uda.name.clone(),
                academic_experts: e,
                national_staff: s,
                concentration_index,
            }
        })
        .collect();
    ConcentrationReport {
        rows,
        total_academic_experts,
        total_staff,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColonizedSds {
    pub sds_code: String,
    pub declaring_experts: usize,
    pub native_declaring: usize,
    pub top_foreign_source_sds: String,
    pub top_foreign_count: usize,
}

/// SDSs declared by academics none of whom officially belongs to them, with
/// the official SDS that supplies most of the declarers. Ties go to the
/// lexicographically smallest source code. Sorted by SDS code.
pub fn cross_colonization(
    register: &Register,
    roster: &Roster,
    taxonomy: &FieldTaxonomy,
) -> Vec<ColonizedSds> {
    // declared SDS -> official SDS of each declaring academic -> count
    let mut sources: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    for e in register.academics() {
        let Some(official) = e
            .researcher_id
            .as_deref()
            .and_then(|id| roster.get(id))
            .map(|r| r.official_sds.as_str())
        else {
            continue;
        };
        for sds in &e.declared_sds {
            if taxonomy.contains(sds) {
                *sources
                    .entry(sds.as_str())
                    .or_default()
                    .entry(official)
                    .or_insert(0) += 1;
            }
        }
    }
    sources
        .into_iter()
        .filter_map(|(sds, by_source)| {
            let native = by_source.get(sds).copied().unwrap_or(0);
            if native > 0 {
                return None;
            }
            let declaring = by_source.values().sum();
            // BTreeMap iterates in code order, so the first maximum wins ties.
            let (top, count) =
                by_source
                    .iter()
                    .fold(None::<(&str, usize)>, |best, (&src, &n)| match best {
                        Some((_, m)) if m >= n => best,
                        _ => Some((src, n)),
                    })?;
            Some(ColonizedSds {
                sds_code: sds.to_string(),
                declaring_experts: declaring,
                native_declaring: 0,
                top_foreign_source_sds: top.to_string(),
                top_foreign_count: count,
            })
        })
        .collect()
}
