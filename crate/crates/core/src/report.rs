//! One-stop summary of what the cohomology forces about a free action.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::milnor::{floyd_s1_obstruction, Flavor, MilnorParams, ObstructionVerdict};
use crate::orbit::{
    borsuk_ulam_report, gysin_euler_report, verify_orbit_dims, CoincidenceRule, ConditionalClause,
    EulerVerdict, ParamSearch,
};
use crate::spectral::{
    enumerate_cases, BaseRing, CaseRun, FailureReason, Group, UndeterminedDifferential,
    VolovikovIndex,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub group: Group,
    pub flavor: Flavor,
    pub r: u32,
    pub s: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case: String,
    pub page: usize,
    pub differential: String,
    pub admissible: bool,
    pub failure_reason: Option<FailureReason>,
    pub relation: Option<String>,
    pub witness: Option<String>,
    pub undetermined: Option<UndeterminedDifferential>,
    /// `Tot E_∞` through degree `dim X`.
    pub tot_dims: Vec<usize>,
    pub volovikov: Option<VolovikovIndex>,
    pub d_squared_zero: bool,
}

impl CaseSummary {
    pub fn from_run(run: &CaseRun) -> Self {
        let res = &run.result;
        let base: &BaseRing = res.e2.base();
        Self {
            case: run.label.clone(),
            page: res.spec.page,
            differential: res.spec.describe(base, res.e2.fiber().presentation()),
            admissible: res.admissible,
            failure_reason: res.failure_reason,
            relation: res.relation_text(),
            witness: res.witness_text(),
            undetermined: res.undetermined,
            tot_dims: res.tot_dims[..=res.dim_x].to_vec(),
            volovikov: res.volovikov,
            d_squared_zero: res.d_squared_zero,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub query: Query,
    pub cases: Vec<CaseSummary>,
    pub survivors: Vec<String>,
    pub tot_dims: Option<Vec<usize>>,
    /// Every matching parameter bit string; none is singled out.
    pub matching_params: Vec<String>,
    pub orbit_dims: Option<Vec<usize>>,
    pub volovikov: Option<VolovikovIndex>,
    pub coindex: Option<u32>,
    pub genus_lower: Option<u32>,
    /// No equivariant map `S^k → X` for `k` at least this.
    pub sphere_map_bound: Option<u32>,
    pub euler_class: Option<EulerVerdict>,
    pub floyd: Option<ObstructionVerdict>,
    pub conditional_clauses: Vec<ConditionalClause>,
    pub coincidence: Option<CoincidenceRule>,
    pub notes: Vec<String>,
    pub version: String,
}

pub fn build_report(group: Group, flavor: Flavor, r: u32, s: u32) -> Result<ObstructionReport> {
    let params = MilnorParams::new(flavor, r, s)?;
    let runs = enumerate_cases(group, &params)?;
    let cases: Vec<CaseSummary> = runs.iter().map(CaseSummary::from_run).collect();
    let survivor = runs.iter().find(|c| c.result.admissible);
    let mut report = ObstructionReport {
        query: Query { group, flavor, r, s },
        survivors: cases.iter().filter(|c| c.admissible).map(|c| c.case.clone()).collect(),
        tot_dims: survivor.map(|c| c.result.tot_dims[..=c.result.dim_x].to_vec()),
        volovikov: survivor.and_then(|c| c.result.volovikov),
        cases,
        matching_params: Vec::new(),
        orbit_dims: None,
        coindex: None,
        genus_lower: None,
        sphere_map_bound: None,
        euler_class: None,
        floyd: None,
        conditional_clauses: Vec::new(),
        coincidence: None,
        notes: Vec::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    if flavor == Flavor::Complex && group == Group::S1 {
        report.floyd = Some(floyd_s1_obstruction(r, s)?);
    }
    if survivor.is_none() {
        report
            .notes
            .push("no differential is consistent with a free action".into());
        return Ok(report);
    }
    let search = verify_orbit_dims(group, flavor, r, s, ParamSearch::All)?;
    report.matching_params = search
        .matching()
        .filter_map(|v| v.params.as_ref().map(|p| p.to_bits()))
        .collect();
    let dim_x = params.manifold_dimension();
    report.orbit_dims = search
        .matching()
        .next()
        .map(|v| v.computed_dims[..=dim_x].to_vec());
    report
        .notes
        .push("matching parameters are candidates; realization by an action is not decided".into());
    match group {
        Group::Z2 => {
            let bu = borsuk_ulam_report(group, flavor, r, s)?;
            report.coindex = bu.coindex.as_ref().map(|c| c.coindex);
            report.genus_lower = bu.coindex.as_ref().map(|c| c.genus_lower);
            report.sphere_map_bound = bu.coindex.as_ref().map(|c| c.no_equivariant_map_above);
            report.conditional_clauses = bu.conditional_clauses;
            report.coincidence = bu.coincidence;
        }
        Group::S1 => {
            let e = gysin_euler_report(r, s)?;
            if e.s_equals_one_variant {
                report
                    .notes
                    .push("s = 1: H^2 of the orbit space is one-dimensional".into());
            }
            report.euler_class = Some(e);
        }
    }
    Ok(report)
}
