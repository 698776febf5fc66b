//! Orbit-space rings of free actions on Milnor manifolds.
//!
//! The candidate rings depend on free bits `α_i, β_i, γ_i` that the
//! spectral sequence does not fix. Each candidate is compared, degree by
//! degree, against `Tot E_∞` of the surviving differential, and the full
//! matching set is reported.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{GeneratorSpec, GradedAlgebra, GradedPresentation, Monomial, NilpotencyOrder, Polynomial};
use crate::error::{Error, Result};
use crate::milnor::{check_rs, milnor_algebra, Flavor, MilnorParams};
use crate::spectral::{enumerate_admissible_cases, Group, PageSequenceResult, VolovikovIndex};

/// Free bits of an orbit presentation. For `Z2` the bit string is
/// `alphas ‖ betas ‖ gammas` (`s + 4` bits); for `S1` it is `αβ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitParams {
    pub alphas: Vec<u8>,
    pub betas: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<[u8; 3]>,
}

impl OrbitParams {
    pub fn bit_len(group: Group, s: u32) -> usize {
        match group {
            Group::Z2 => s as usize + 4,
            Group::S1 => 2,
        }
    }

    pub fn zero(group: Group, s: u32) -> Self {
        Self::from_bits(group, s, &vec![0; Self::bit_len(group, s)]).expect("sized")
    }

    fn from_bits(group: Group, s: u32, bits: &[u8]) -> Result<Self> {
        if s.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!("s={s} is even")));
        }
        let want = Self::bit_len(group, s);
        if bits.len() != want {
            return Err(Error::InvalidParams(format!(
                "expected {want} bits, got {}",
                bits.len()
            )));
        }
        Ok(match group {
            Group::Z2 => {
                let h = (s as usize).div_ceil(2);
                Self {
                    alphas: bits[..h].to_vec(),
                    betas: bits[h..2 * h].to_vec(),
                    gammas: Some([bits[2 * h], bits[2 * h + 1], bits[2 * h + 2]]),
                }
            }
            Group::S1 => Self {
                alphas: vec![bits[0]],
                betas: vec![bits[1]],
                gammas: None,
            },
        })
    }

    pub fn parse(group: Group, s: u32, text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParams(format!("unexpected character `{other}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(group, s, &bits)
    }

    pub fn to_bits(&self) -> String {
        self.alphas
            .iter()
            .chain(&self.betas)
            .chain(self.gammas.iter().flatten())
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    /// Every parameter vector, in increasing binary order of the bit string.
    pub fn all(group: Group, s: u32) -> Result<Vec<Self>> {
        let n = Self::bit_len(group, s);
        (0..1u64 << n)
            .map(|v| {
                let bits: Vec<u8> = (0..n).map(|i| (v >> (n - 1 - i) & 1) as u8).collect();
                Self::from_bits(group, s, &bits)
            })
            .collect()
    }
}

fn require_odd(r: u32, s: u32) -> Result<()> {
    if r.is_multiple_of(2) || s.is_multiple_of(2) {
        return Err(Error::EvenParameter { r, s });
    }
    Ok(())
}

fn check_query(group: Group, flavor: Flavor, r: u32, s: u32) -> Result<()> {
    check_rs(r, s)?;
    if group == Group::S1 && flavor == Flavor::Complex {
        return Err(Error::Unsupported(
            "circle actions on complex Milnor manifolds have no orbit presentation".into(),
        ));
    }
    require_odd(r, s)
}

fn mono(exps: &[u32]) -> Monomial {
    Monomial(exps.to_vec())
}

/// Orbit-space presentation with generators `x, y, z, w` (`Z2`) or
/// `x, y, w` (`S1`).
pub fn orbit_presentation(
    group: Group,
    flavor: Flavor,
    r: u32,
    s: u32,
    params: &OrbitParams,
) -> Result<GradedPresentation> {
    check_query(group, flavor, r, s)?;
    if params.alphas.len() != params.betas.len()
        || params.gammas.is_some() != (group == Group::Z2)
        || (group == Group::Z2 && params.alphas.len() != (s as usize).div_ceil(2))
        || (group == Group::S1 && params.alphas.len() != 1)
    {
        return Err(Error::InvalidParams(format!(
            "parameters `{}` do not fit s={s}",
            params.to_bits()
        )));
    }
    let h = (s - 1) / 2;
    let q = (r - 1) / 2;
    let top = MilnorParams::new(flavor, r, s)?.manifold_dimension();
    match group {
        Group::Z2 => {
            let (dx, dw, zc) = match flavor {
                Flavor::Real => (2, 1, 1),
                Flavor::Complex => (4, 2, 2),
            };
            let [g1, g2, g3] = params.gammas.expect("checked");
            // [x, y, z, w]
            let mut rels = vec![Polynomial::monomial(mono(&[0, 0, zc + 1, 0]))];
            let mut w2 = Polynomial::monomial(mono(&[0, 0, 0, 2]));
            if g1 == 1 {
                w2.add_term(mono(&[0, 0, zc, 1]));
            }
            if g2 == 1 {
                w2.add_term(mono(&[1, 0, 0, 0]));
            }
            if g3 == 1 {
                w2.add_term(mono(&[0, 1, 0, 0]));
            }
            rels.push(w2);
            let mut xrel = Polynomial::monomial(mono(&[h + 1, 0, 0, 0]));
            for (i, &a) in params.alphas.iter().enumerate() {
                if a == 1 {
                    let i = i as u32;
                    xrel.add_term(mono(&[h - i, i, zc, 1]));
                }
            }
            rels.push(xrel);
            let mut wrel = Polynomial::zero();
            for (i, &b) in params.betas.iter().enumerate() {
                let i = i as u32;
                wrel.add_term(mono(&[i, q - i, 0, 1]));
                if b == 1 {
                    wrel.add_term(mono(&[i, q - i, zc, 0]));
                }
            }
            rels.push(wrel);
            GradedPresentation::new(
                vec![
                    GeneratorSpec::new("x", dx),
                    GeneratorSpec::new("y", dx),
                    GeneratorSpec::new("z", 1),
                    GeneratorSpec::new("w", dw),
                ],
                rels,
                Some(top),
            )
        }
        Group::S1 => {
            // [x, y, w]
            let first = Polynomial::monomial(mono(&[h + 1, 0, 0]));
            let second = Polynomial::from_terms((0..=h).map(|i| mono(&[i, q - i, 1])));
            let mut third = Polynomial::monomial(mono(&[0, 0, 2]));
            if params.alphas[0] == 1 {
                third.add_term(mono(&[1, 0, 0]));
            }
            if params.betas[0] == 1 {
                third.add_term(mono(&[0, 1, 0]));
            }
            GradedPresentation::new(
                vec![
                    GeneratorSpec::new("x", 2),
                    GeneratorSpec::new("y", 2),
                    GeneratorSpec::new("w", 1),
                ],
                vec![first, second, third],
                Some(top),
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamSearch {
    All,
    Single(OrbitParams),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitVerdict {
    /// `None` for a user-supplied presentation.
    pub params: Option<OrbitParams>,
    pub matches: bool,
    pub computed_dims: Vec<usize>,
    pub expected_dims: Vec<usize>,
    pub finite: bool,
}

#[derive(Clone, Debug)]
pub struct OrbitSearch {
    pub group: Group,
    pub flavor: Flavor,
    pub r: u32,
    pub s: u32,
    pub survivor: PageSequenceResult,
    pub verdicts: Vec<OrbitVerdict>,
}

impl OrbitSearch {
    pub fn matching(&self) -> impl Iterator<Item = &OrbitVerdict> {
        self.verdicts.iter().filter(|v| v.matches)
    }

    pub fn expected_dims(&self) -> &[usize] {
        self.verdicts
            .first()
            .map_or(&[][..], |v| v.expected_dims.as_slice())
    }
}

/// Compares a presentation's Poincaré table through `top + max generator
/// degree` against `expected` and certifies finiteness by a zero run.
pub fn compare_presentation(
    pres: &GradedPresentation,
    expected_full: &[usize],
    params: Option<OrbitParams>,
) -> Result<OrbitVerdict> {
    let alg = GradedAlgebra::with_default_window(pres.clone(), expected_full.len().saturating_sub(1));
    let window = alg.max_degree();
    let computed_dims = alg.poincare_table(window)?;
    let expected_dims: Vec<usize> = (0..=window)
        .map(|n| expected_full.get(n).copied().unwrap_or(0))
        .collect();
    let finite = alg.finiteness().is_some();
    Ok(OrbitVerdict {
        params,
        matches: finite && computed_dims == expected_dims,
        computed_dims,
        expected_dims,
        finite,
    })
}

fn survivor(group: Group, flavor: Flavor, r: u32, s: u32) -> Result<PageSequenceResult> {
    let params = MilnorParams::new(flavor, r, s)?;
    enumerate_admissible_cases(group, &params)?
        .into_iter()
        .next()
        .map(|c| c.result)
        .ok_or(Error::NoSurvivor)
}

pub fn verify_orbit_dims(
    group: Group,
    flavor: Flavor,
    r: u32,
    s: u32,
    search: ParamSearch,
) -> Result<OrbitSearch> {
    check_query(group, flavor, r, s)?;
    let survivor = survivor(group, flavor, r, s)?;
    let candidates = match search {
        ParamSearch::All => OrbitParams::all(group, s)?,
        ParamSearch::Single(p) => vec![p],
    };
    let verdicts = candidates
        .into_par_iter()
        .map(|p| {
            let pres = orbit_presentation(group, flavor, r, s, &p)?;
            compare_presentation(&pres, &survivor.tot_dims, Some(p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitSearch {
        group,
        flavor,
        r,
        s,
        survivor,
        verdicts,
    })
}

/// Checks a user-supplied ring against the surviving `E_∞`.
pub fn verify_custom_presentation(
    group: Group,
    flavor: Flavor,
    r: u32,
    s: u32,
    pres: &GradedPresentation,
) -> Result<OrbitVerdict> {
    check_rs(r, s)?;
    let survivor = survivor(group, flavor, r, s)?;
    let pres = if pres.top_hint().is_none() {
        pres.clone()
            .with_top_hint(Some(MilnorParams::new(flavor, r, s)?.manifold_dimension()))
    } else {
        pres.clone()
    };
    compare_presentation(&pres, &survivor.tot_dims, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoindexReport {
    pub sw_class: String,
    pub coindex: u32,
    pub genus_lower: u32,
    /// No equivariant map `S^k → X` for `k` at least this.
    pub no_equivariant_map_above: u32,
}

/// Co-index as the nilpotency order of the degree-1 class `sw_class`.
pub fn coindex_and_genus(orbit: &GradedPresentation, sw_class: &str) -> Result<CoindexReport> {
    let idx = orbit
        .generator_index(sw_class)
        .ok_or_else(|| Error::UnknownGenerator(sw_class.to_string()))?;
    if orbit.generators()[idx].degree != 1 {
        return Err(Error::InvalidPresentation(format!(
            "`{sw_class}` is not a degree-1 generator"
        )));
    }
    let alg = GradedAlgebra::with_default_window(orbit.clone(), 64);
    let bound = alg.max_degree() as u32;
    let coindex = match alg.nilpotency_order(&alg.generator(sw_class)?, bound)? {
        NilpotencyOrder::Exact(n) => n,
        NilpotencyOrder::BoundReached(b) => return Err(Error::NilpotencyBoundReached { bound: b }),
    };
    Ok(CoindexReport {
        sw_class: sw_class.to_string(),
        coindex,
        genus_lower: coindex + 1,
        no_equivariant_map_above: coindex + 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerVerdict {
    pub params: OrbitParams,
    /// `dim H^0, H^1, H^2` of the orbit space.
    pub orbit_dims: [usize; 3],
    pub fiber_h1: usize,
    pub euler_class_zero: bool,
    pub conclusion: String,
    /// For `s = 1` the relation `x = 0` leaves `H^2` one-dimensional.
    pub s_equals_one_variant: bool,
    /// The bookkeeping gives the same answer for every matching vector.
    pub consistent_across_matches: bool,
}

/// Gysin segment `0 → H¹(X/G) → H¹(X) → H⁰(X/G) → H²(X/G)` for circle
/// actions on real Milnor manifolds: the last map is cup with the Euler
/// class, which vanishes when the middle map is onto.
pub fn gysin_euler_report(r: u32, s: u32) -> Result<EulerVerdict> {
    let search = verify_orbit_dims(Group::S1, Flavor::Real, r, s, ParamSearch::All)?;
    let fiber_h1 = milnor_algebra(&MilnorParams::new(Flavor::Real, r, s)?).dimension(1)?;
    let bookkeep = |v: &OrbitVerdict| {
        let d = [v.computed_dims[0], v.computed_dims[1], v.computed_dims[2]];
        let zero = fiber_h1.checked_sub(d[1]) == Some(d[0]) && d[0] == 1;
        (d, zero)
    };
    let mut matches = search.matching();
    let first = matches.next().ok_or(Error::NoMatchingParameters)?;
    let (orbit_dims, euler_class_zero) = bookkeep(first);
    let consistent_across_matches = matches.all(|v| bookkeep(v) == (orbit_dims, euler_class_zero));
    Ok(EulerVerdict {
        params: first.params.clone().expect("searched vectors carry params"),
        orbit_dims,
        fiber_h1,
        euler_class_zero,
        conclusion: if euler_class_zero {
            "Euler class zero".into()
        } else {
            "undetermined".into()
        },
        s_equals_one_variant: s == 1,
        consistent_across_matches,
    })
}

/// A conclusion that holds for every `Y` satisfying the hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalClause {
    pub k: usize,
    pub hypothesis: String,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceRule {
    pub p: u32,
    /// Largest `m` with `genus > m(p-1)`: every map `X → ℝ^m` has a
    /// nonempty coincidence set `A(f, p)`.
    pub max_euclidean_dim: u32,
    pub maps_to_r2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorsukUlamReport {
    pub volovikov: Option<VolovikovIndex>,
    pub coindex: Option<CoindexReport>,
    /// All matching presentations give the same co-index.
    pub coindex_consistent: Option<bool>,
    /// No equivariant map `X → S^k` for `k` up to this value.
    pub no_map_to_sphere_up_to: Option<u32>,
    pub conditional_clauses: Vec<ConditionalClause>,
    pub coincidence: Option<CoincidenceRule>,
}

fn conditional_clauses(volovikov: VolovikovIndex, dim_x: usize) -> Vec<ConditionalClause> {
    let m = match volovikov {
        VolovikovIndex::Page(i) => i.saturating_sub(1),
        VolovikovIndex::Infinite => dim_x + 1,
    };
    // H^{k+1}(B_Z2) is nonzero in every degree.
    (1..m)
        .map(|k| ConditionalClause {
            k,
            hypothesis: format!("H^{}(Y/G)=0", k + 1),
            conclusion: "no Z2-equivariant map X -> Y".into(),
        })
        .collect()
}

/// Index-theoretic consequences for a free involution; empty for circle
/// actions, where no degree-1 characteristic class is available.
pub fn borsuk_ulam_report(group: Group, flavor: Flavor, r: u32, s: u32) -> Result<BorsukUlamReport> {
    let search = verify_orbit_dims(group, flavor, r, s, ParamSearch::All)?;
    let volovikov = search.survivor.volovikov;
    if group == Group::S1 {
        return Ok(BorsukUlamReport {
            volovikov,
            coindex: None,
            coindex_consistent: None,
            no_map_to_sphere_up_to: None,
            conditional_clauses: Vec::new(),
            coincidence: None,
        });
    }
    let reports = search
        .matching()
        .map(|v| {
            let p = v.params.as_ref().expect("searched vectors carry params");
            coindex_and_genus(&orbit_presentation(group, flavor, r, s, p)?, "z")
        })
        .collect::<Result<Vec<_>>>()?;
    let coindex = reports.first().cloned();
    let coindex_consistent = coindex
        .as_ref()
        .map(|c| reports.iter().all(|o| o.coindex == c.coindex));
    let coincidence = coindex.as_ref().map(|c| {
        let max_euclidean_dim = c.genus_lower - 1;
        CoincidenceRule {
            p: 2,
            max_euclidean_dim,
            maps_to_r2: max_euclidean_dim >= 2,
        }
    });
    Ok(BorsukUlamReport {
        volovikov,
        no_map_to_sphere_up_to: coindex.as_ref().map(|c| c.genus_lower - 2),
        coindex,
        coindex_consistent,
        conditional_clauses: volovikov
            .map(|v| conditional_clauses(v, search.survivor.dim_x))
            .unwrap_or_default(),
        coincidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(p: &GradedPresentation) -> Vec<String> {
        p.relations().iter().map(|r| p.format_polynomial(r)).collect()
    }

    #[test]
    fn zero_parameter_presentations() {
        let p = orbit_presentation(Group::Z2, Flavor::Real, 5, 3, &OrbitParams::zero(Group::Z2, 3)).unwrap();
        assert_eq!(text(&p), vec!["z^2", "w^2", "x^2", "y^2w + xyw"]);
        let c = orbit_presentation(Group::Z2, Flavor::Complex, 3, 1, &OrbitParams::zero(Group::Z2, 1)).unwrap();
        assert_eq!(text(&c), vec!["z^3", "w^2", "x", "yw"]);
        let s1 = OrbitParams::parse(Group::S1, 1, "01").unwrap();
        let q = orbit_presentation(Group::S1, Flavor::Real, 3, 1, &s1).unwrap();
        assert_eq!(text(&q), vec!["x", "yw", "w^2 + y"]);
    }

    #[test]
    fn params_bits() {
        let all = OrbitParams::all(Group::Z2, 3).unwrap();
        assert_eq!(all.len(), 128);
        assert_eq!(all[5].to_bits(), "0000101");
        assert_eq!(OrbitParams::parse(Group::Z2, 3, "1010011").unwrap().to_bits(), "1010011");
        assert!(OrbitParams::parse(Group::Z2, 3, "101").is_err());
        assert!(OrbitParams::parse(Group::S1, 1, "0x").is_err());
        assert_eq!(OrbitParams::all(Group::S1, 5).unwrap().len(), 4);
    }

    #[test]
    fn rejects_even_and_unsupported() {
        let p = OrbitParams::zero(Group::S1, 1);
        assert_eq!(
            orbit_presentation(Group::S1, Flavor::Real, 4, 1, &p),
            Err(Error::EvenParameter { r: 4, s: 1 })
        );
        assert!(matches!(
            orbit_presentation(Group::S1, Flavor::Complex, 3, 1, &p),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn circle_example() {
        let search = verify_orbit_dims(Group::S1, Flavor::Real, 3, 1, ParamSearch::All).unwrap();
        let matched: Vec<String> = search
            .matching()
            .map(|v| v.params.as_ref().unwrap().to_bits())
            .collect();
        assert_eq!(matched, vec!["01", "11"]);
        for v in &search.verdicts {
            if v.params.as_ref().unwrap().betas[0] == 0 {
                assert!(!v.finite);
            }
        }
        let m = search.matching().next().unwrap();
        assert_eq!(m.computed_dims[..4], [1, 1, 1, 0]);
    }

    #[test]
    fn real_involution_search() {
        let search = verify_orbit_dims(Group::Z2, Flavor::Real, 5, 3, ParamSearch::All).unwrap();
        assert_eq!(search.verdicts.len(), 128);
        let matches: Vec<_> = search.matching().collect();
        assert!(!matches.is_empty());
        for v in matches {
            assert_eq!(v.computed_dims[..8], [1, 2, 3, 4, 4, 3, 2, 1]);
            assert!(v.computed_dims[8..].iter().all(|&d| d == 0));
        }
        assert!(!search.verdicts[0].matches);
    }

    #[test]
    fn coindex_values() {
        let real = verify_orbit_dims(Group::Z2, Flavor::Real, 5, 3, ParamSearch::All).unwrap();
        let p = real.matching().next().unwrap().params.clone().unwrap();
        let pres = orbit_presentation(Group::Z2, Flavor::Real, 5, 3, &p).unwrap();
        let c = coindex_and_genus(&pres, "z").unwrap();
        assert_eq!((c.coindex, c.genus_lower, c.no_equivariant_map_above), (1, 2, 2));
        let trivial = GradedPresentation::from_text("gen z 1\nrel z\ntop 0\n").unwrap();
        assert_eq!(coindex_and_genus(&trivial, "z").unwrap().coindex, 0);
        assert!(coindex_and_genus(&pres, "x").is_err());
        assert!(coindex_and_genus(&pres, "q").is_err());
    }

    #[test]
    fn euler_reports() {
        let e = gysin_euler_report(5, 3).unwrap();
        assert_eq!(e.orbit_dims, [1, 1, 2]);
        assert!(e.euler_class_zero && e.consistent_across_matches);
        assert_eq!(e.conclusion, "Euler class zero");
        let e = gysin_euler_report(3, 1).unwrap();
        assert_eq!(e.orbit_dims, [1, 1, 1]);
        assert!(e.euler_class_zero && e.s_equals_one_variant);
    }

    #[test]
    fn borsuk_ulam() {
        let c = borsuk_ulam_report(Group::Z2, Flavor::Complex, 5, 3).unwrap();
        assert_eq!(c.volovikov, Some(VolovikovIndex::Page(3)));
        let ci = c.coindex.as_ref().unwrap();
        assert_eq!((ci.coindex, ci.genus_lower), (2, 3));
        assert_eq!(c.coindex_consistent, Some(true));
        assert_eq!(c.conditional_clauses.len(), 1);
        assert_eq!(c.conditional_clauses[0].hypothesis, "H^2(Y/G)=0");
        assert!(c.coincidence.as_ref().unwrap().maps_to_r2);
        let r = borsuk_ulam_report(Group::Z2, Flavor::Real, 5, 3).unwrap();
        assert_eq!(r.volovikov, Some(VolovikovIndex::Page(2)));
        assert_eq!(r.coindex.as_ref().unwrap().no_equivariant_map_above, 2);
        assert!(r.conditional_clauses.is_empty());
        assert!(!r.coincidence.as_ref().unwrap().maps_to_r2);
    }
}
