use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::differential::{apply_differential, check_derivation_well_defined, d_squared_is_zero, turn_page, DifferentialData};
use super::page::{build_e2, BigradedPage, ColumnMode, Window};
use super::{BaseRing, DifferentialSpec, Group};
use crate::algebra::{GradedAlgebra, RelationWitness};
use crate::error::{Error, Result};
use crate::milnor::{milnor_algebra, MilnorParams};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub mode: ColumnMode,
    /// Defaults to `l_max` = fiber top and `k_max = dim X + l_max + 4`.
    pub window: Option<Window>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    RelationNotKilled,
    VanishingViolated,
    HigherDifferentialUndetermined,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::RelationNotKilled => "relation_not_killed",
            FailureReason::VanishingViolated => "vanishing_violated",
            FailureReason::HigherDifferentialUndetermined => "higher_differential_undetermined",
        }
    }
}

/// A page whose differential could be nonzero on some entry but is not
/// fixed by the chosen generator images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndeterminedDifferential {
    pub page: usize,
    pub source: (usize, usize),
}

/// First page on which a differential hits the bottom row, or infinity when
/// none ever does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolovikovIndex {
    Page(usize),
    Infinite,
}

impl fmt::Display for VolovikovIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VolovikovIndex::Page(n) => write!(f, "{n}"),
            VolovikovIndex::Infinite => f.write_str("infinity"),
        }
    }
}

impl Serialize for VolovikovIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            VolovikovIndex::Page(n) => s.serialize_u64(*n as u64),
            VolovikovIndex::Infinite => s.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for VolovikovIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Page(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Page(n) => Ok(VolovikovIndex::Page(n)),
            Raw::Text(t) if t == "infinity" => Ok(VolovikovIndex::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad index `{t}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PageSequenceResult {
    pub spec: DifferentialSpec,
    pub dim_x: usize,
    pub e2: BigradedPage,
    /// `E_∞` when the run is determined, otherwise the last computed page.
    pub final_page: BigradedPage,
    pub differential: Option<DifferentialData>,
    /// `Σ_{k+l=n} dim E_∞^{k,l}` for `0 ≤ n ≤ k_max`.
    pub tot_dims: Vec<usize>,
    pub admissible: bool,
    pub failure_reason: Option<FailureReason>,
    pub witness: Option<RelationWitness>,
    pub undetermined: Option<UndeterminedDifferential>,
    pub volovikov: Option<VolovikovIndex>,
    pub d_squared_zero: bool,
    pub pages_monotone: bool,
    /// For circle actions the vanishing is demanded from degree `dim X` on;
    /// set when that boundary degree is nonzero in the fiber.
    pub equality_bound_active: bool,
}

impl PageSequenceResult {
    pub fn witness_text(&self) -> Option<String> {
        let w = self.witness.as_ref()?;
        let fiber = self.e2.fiber();
        let poly = fiber.to_polynomial(&w.image);
        let body = fiber.format_element(&w.image);
        let body = if poly.len() > 1 { format!("({body})") } else { body };
        Some(format!("{}⊗{}", self.e2.base().class_name(self.spec.page), body))
    }

    pub fn relation_text(&self) -> Option<String> {
        let w = self.witness.as_ref()?;
        Some(self.e2.fiber().presentation().format_polynomial(&w.relation))
    }
}

/// First entry at which `d_p` could be nonzero, `None` if `d_p` vanishes.
///
/// While the page still equals `E_2` as an algebra, `d_p` is a derivation
/// fixed by the images of the fiber generators, so it vanishes once each of
/// those images lies in a zero entry. Otherwise every entry is checked.
fn undetermined_at(page: &BigradedPage, p: usize) -> Option<(usize, usize)> {
    if page.last_nonzero_page().is_none() {
        let gens_die = page.fiber().presentation().generators().iter().all(|g| {
            g.degree + 1 < p || page.dim(p, g.degree + 1 - p) == 0
        });
        if gens_die {
            return None;
        }
    }
    let w = page.window();
    (0..=w.k_max)
        .flat_map(|k| (p.saturating_sub(1)..=w.l_max).map(move |l| (k, l)))
        .find(|&(k, l)| page.dim(k, l) > 0 && page.dim(k + p, l + 1 - p) > 0)
}

fn vanishing_holds(group: Group, tot: &[usize], dim_x: usize) -> bool {
    tot.iter().enumerate().all(|(n, &d)| {
        let must_vanish = match group {
            Group::Z2 => n > dim_x,
            Group::S1 => n >= dim_x,
        };
        !must_vanish || d == 0
    })
}

fn monotone(a: &BigradedPage, b: &BigradedPage) -> bool {
    let w = a.window();
    (0..=w.k_max).all(|k| (0..=w.l_max).all(|l| b.dim(k, l) <= a.dim(k, l)))
}

pub fn run_borel_ss(
    base: BaseRing,
    fiber: Arc<GradedAlgebra>,
    spec: &DifferentialSpec,
    dim_x: usize,
) -> Result<PageSequenceResult> {
    run_borel_ss_with(base, fiber, spec, dim_x, RunOptions::default())
}

/// Builds `E_2`, applies `spec` on its page, and follows the sequence to
/// `E_∞` as far as the structural vanishing checks allow.
pub fn run_borel_ss_with(
    base: BaseRing,
    fiber: Arc<GradedAlgebra>,
    spec: &DifferentialSpec,
    dim_x: usize,
    options: RunOptions,
) -> Result<PageSequenceResult> {
    spec.validate(&base, fiber.presentation())?;
    let window = match options.window {
        Some(w) => w,
        None => {
            let top = fiber
                .finiteness()
                .ok_or(Error::InfiniteFiber {
                    window: fiber.max_degree(),
                })?
                .top;
            Window {
                k_max: dim_x + top + 4,
                l_max: top,
            }
        }
    };
    let e2 = build_e2(base, fiber.clone(), window, options.mode)?;
    let equality_bound_active = base.group == Group::S1
        && fiber.finiteness().is_some_and(|f| dim_x <= f.top)
        && fiber.dimension(dim_x).is_ok_and(|d| d > 0);

    let stop = |page: BigradedPage,
                differential: Option<DifferentialData>,
                reason: FailureReason,
                witness: Option<RelationWitness>,
                undetermined: Option<UndeterminedDifferential>,
                d_squared_zero: bool| {
        PageSequenceResult {
            spec: spec.clone(),
            dim_x,
            tot_dims: page.tot_dims(),
            pages_monotone: monotone(&e2, &page),
            e2: e2.clone(),
            final_page: page,
            differential,
            admissible: false,
            failure_reason: Some(reason),
            witness,
            undetermined,
            volovikov: None,
            d_squared_zero,
            equality_bound_active,
        }
    };

    if let Some(w) = check_derivation_well_defined(&fiber, spec)? {
        return Ok(stop(
            e2.clone(),
            None,
            FailureReason::RelationNotKilled,
            Some(w),
            None,
            true,
        ));
    }
    for p in 2..spec.page {
        if let Some(source) = undetermined_at(&e2, p) {
            return Ok(stop(
                e2.clone(),
                None,
                FailureReason::HigherDifferentialUndetermined,
                None,
                Some(UndeterminedDifferential { page: p, source }),
                true,
            ));
        }
    }
    let mut page = e2.clone();
    page.page_number = spec.page;
    let diff = apply_differential(&page, spec)?;
    let d_squared_zero = d_squared_is_zero(&diff);
    let mut next = turn_page(&page, &diff)?;
    for p in spec.page + 1..=window.l_max + 1 {
        if let Some(source) = undetermined_at(&next, p) {
            next.page_number = p;
            return Ok(stop(
                next,
                Some(diff),
                FailureReason::HigherDifferentialUndetermined,
                None,
                Some(UndeterminedDifferential { page: p, source }),
                d_squared_zero,
            ));
        }
    }
    let tot_dims = next.tot_dims();
    let admissible = vanishing_holds(base.group, &tot_dims, dim_x);
    let volovikov = Some(if diff.hits_base_row() {
        VolovikovIndex::Page(spec.page)
    } else {
        VolovikovIndex::Infinite
    });
    Ok(PageSequenceResult {
        spec: spec.clone(),
        dim_x,
        pages_monotone: monotone(&e2, &next),
        e2,
        final_page: next,
        differential: Some(diff),
        tot_dims,
        admissible,
        failure_reason: (!admissible).then_some(FailureReason::VanishingViolated),
        witness: None,
        undetermined: None,
        volovikov,
        d_squared_zero,
        equality_bound_active,
    })
}

pub fn volovikov_index(result: &PageSequenceResult) -> Option<VolovikovIndex> {
    result.volovikov
}

#[derive(Clone, Debug)]
pub struct CaseRun {
    pub label: String,
    pub result: PageSequenceResult,
}

/// Every differential on the first page where a generator can transgress:
/// each generator of minimal degree `d` goes to zero or to the base class
/// at page `d + 1`. Only the trivial choice exists if the base vanishes in
/// that degree.
pub fn enumerate_cases_for(
    base: BaseRing,
    fiber: Arc<GradedAlgebra>,
    dim_x: usize,
) -> Result<Vec<CaseRun>> {
    let pres = fiber.presentation();
    let n = pres.n_generators();
    let d_min = pres.degrees().into_iter().min().unwrap_or(1);
    let page = d_min + 1;
    let eligible: u32 = if base.dim(page) > 0 {
        pres.generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.degree == d_min)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    } else {
        0
    };
    (0..1u32 << n)
        .filter(|mask| mask & !eligible == 0)
        .map(|mask| {
            let spec = DifferentialSpec::from_mask(page, n, mask);
            let result = run_borel_ss(base, fiber.clone(), &spec, dim_x)?;
            Ok(CaseRun {
                label: spec.case_label(),
                result,
            })
        })
        .collect()
}

pub fn enumerate_cases(group: Group, params: &MilnorParams) -> Result<Vec<CaseRun>> {
    enumerate_cases_for(
        BaseRing::new(group),
        Arc::new(milnor_algebra(params)),
        params.manifold_dimension(),
    )
}

pub fn enumerate_admissible_cases(group: Group, params: &MilnorParams) -> Result<Vec<CaseRun>> {
    Ok(enumerate_cases(group, params)?
        .into_iter()
        .filter(|c| c.result.admissible)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::Flavor;

    fn params(flavor: Flavor, r: u32, s: u32) -> MilnorParams {
        MilnorParams::new(flavor, r, s).unwrap()
    }

    fn labels(runs: &[CaseRun]) -> Vec<&str> {
        runs.iter().map(|c| c.label.as_str()).collect()
    }

    #[test]
    fn real_z2_survivor() {
        let all = enumerate_cases(Group::Z2, &params(Flavor::Real, 5, 3)).unwrap();
        assert_eq!(labels(&all), vec!["trivial", "i", "ii", "iii"]);
        let by = |l: &str| &all.iter().find(|c| c.label == l).unwrap().result;
        assert_eq!(by("trivial").failure_reason, Some(FailureReason::VanishingViolated));
        assert_eq!(by("trivial").volovikov, Some(VolovikovIndex::Infinite));
        assert_eq!(by("i").failure_reason, Some(FailureReason::RelationNotKilled));
        assert_eq!(by("i").witness_text().unwrap(), "t^2⊗(b^4 + a^2b^2)");
        assert_eq!(by("ii").witness_text().unwrap(), "t^2⊗(b^4 + a^2b^2)");
        let iii = by("iii");
        assert!(iii.admissible);
        assert!(iii.d_squared_zero && iii.pages_monotone);
        assert_eq!(iii.tot_dims[..8], [1, 2, 3, 4, 4, 3, 2, 1]);
        assert!(iii.tot_dims[8..].iter().all(|&d| d == 0));
        assert_eq!(iii.volovikov, Some(VolovikovIndex::Page(2)));
        let adm = enumerate_admissible_cases(Group::Z2, &params(Flavor::Real, 5, 3)).unwrap();
        assert_eq!(labels(&adm), vec!["iii"]);
    }

    #[test]
    fn even_s_has_no_survivor() {
        let runs = enumerate_cases(Group::Z2, &params(Flavor::Real, 5, 2)).unwrap();
        let iii = &runs[3].result;
        assert_eq!(iii.failure_reason, Some(FailureReason::RelationNotKilled));
        assert_eq!(iii.witness_text().unwrap(), "t^2⊗a^2");
        assert!(enumerate_admissible_cases(Group::Z2, &params(Flavor::Real, 5, 2))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn complex_z2_uses_page_three() {
        let adm = enumerate_admissible_cases(Group::Z2, &params(Flavor::Complex, 5, 3)).unwrap();
        assert_eq!(labels(&adm), vec!["iii"]);
        let r = &adm[0].result;
        assert_eq!(r.spec.page, 3);
        assert_eq!(r.volovikov, Some(VolovikovIndex::Page(3)));
        // Three surviving columns, each a copy of ker d3 on the fiber.
        let ker: usize = r.differential.as_ref().unwrap().rank_table(0).iter().map(|row| row.kernel).sum();
        assert_eq!(r.tot_dims.iter().sum::<usize>(), 3 * ker);
        assert_eq!(ker, 10);
    }

    #[test]
    fn circle_action() {
        let adm = enumerate_admissible_cases(Group::S1, &params(Flavor::Real, 3, 1)).unwrap();
        assert_eq!(adm.len(), 1);
        let r = &adm[0].result;
        assert_eq!(r.tot_dims, vec![1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(r.equality_bound_active);
        let adm = enumerate_admissible_cases(Group::S1, &params(Flavor::Real, 5, 3)).unwrap();
        assert_eq!(adm.len(), 1);
        assert_eq!(adm[0].result.tot_dims[..3], [1, 1, 2]);
    }

    #[test]
    fn circle_on_complex_fiber_only_trivial() {
        let runs = enumerate_cases(Group::S1, &params(Flavor::Complex, 3, 1)).unwrap();
        assert_eq!(labels(&runs), vec!["trivial"]);
        assert!(!runs[0].result.admissible);
    }

    #[test]
    fn full_columns_agree_with_periodic() {
        let base = BaseRing::new(Group::Z2);
        let p = params(Flavor::Real, 7, 3);
        let fiber = Arc::new(milnor_algebra(&p));
        let spec = DifferentialSpec::from_case("iii", 2).unwrap();
        let a = run_borel_ss(base, fiber.clone(), &spec, 9).unwrap();
        let full = RunOptions {
            mode: ColumnMode::Full,
            window: None,
        };
        let b = run_borel_ss_with(base, fiber, &spec, 9, full).unwrap();
        assert_eq!(a.final_page.dims(), b.final_page.dims());
        assert_eq!(a.tot_dims, b.tot_dims);
    }

    #[test]
    fn volovikov_serialization() {
        assert_eq!(serde_json::to_string(&VolovikovIndex::Page(2)).unwrap(), "2");
        assert_eq!(
            serde_json::to_string(&VolovikovIndex::Infinite).unwrap(),
            "\"infinity\""
        );
        let back: VolovikovIndex = serde_json::from_str("\"infinity\"").unwrap();
        assert_eq!(back, VolovikovIndex::Infinite);
    }
}
