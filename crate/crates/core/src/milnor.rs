//! Cohomology rings of the real and complex Milnor manifolds.
//!
//! `H*(ℝH_{r,s}) = F₂[a,b]/(a^{s+1}, Σ_{i≤s} a^i b^{r-i})` with `a, b` in
//! degree 1, and the complex ring has the same shape on `g, h` in degree 2.

use serde::{Deserialize, Serialize};

use crate::algebra::{GeneratorSpec, GradedAlgebra, GradedPresentation, Monomial, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Real,
    Complex,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Real => "real",
            Flavor::Complex => "complex",
        }
    }

    /// Degree of the two ring generators.
    pub fn generator_degree(self) -> usize {
        match self {
            Flavor::Real => 1,
            Flavor::Complex => 2,
        }
    }

    /// Generator names of the ring.
    pub fn generator_names(self) -> [&'static str; 2] {
        match self {
            Flavor::Real => ["a", "b"],
            Flavor::Complex => ["g", "h"],
        }
    }
}

/// Complex generators `g, h` are the classes the orbit-space arguments call
/// `a, b`.
pub const COMPLEX_ALIASES: [(&str, &str); 2] = [("g", "a"), ("h", "b")];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MilnorParams {
    pub flavor: Flavor,
    pub r: u32,
    pub s: u32,
}

impl MilnorParams {
    /// Requires `1 ≤ s ≤ r`; `s = 0` (a projective space) is rejected.
    pub fn new(flavor: Flavor, r: u32, s: u32) -> Result<Self> {
        check_rs(r, s)?;
        Ok(Self { flavor, r, s })
    }

    /// Real dimension of the manifold.
    pub fn manifold_dimension(&self) -> usize {
        let n = (self.r + self.s - 1) as usize;
        match self.flavor {
            Flavor::Real => n,
            Flavor::Complex => 2 * n,
        }
    }

    pub fn both_odd(&self) -> bool {
        self.r % 2 == 1 && self.s % 2 == 1
    }
}

pub(crate) fn check_rs(r: u32, s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::SIsZero { s });
    }
    if s > r {
        return Err(Error::SExceedsR { r, s });
    }
    Ok(())
}

pub fn milnor_presentation(p: &MilnorParams) -> GradedPresentation {
    let deg = p.flavor.generator_degree();
    let [ga, gb] = p.flavor.generator_names();
    let (r, s) = (p.r, p.s);
    let first = Polynomial::monomial(Monomial(vec![s + 1, 0]));
    let second = Polynomial::from_terms((0..=s).map(|i| Monomial(vec![i, r - i])));
    GradedPresentation::new(
        vec![GeneratorSpec::new(ga, deg), GeneratorSpec::new(gb, deg)],
        vec![first, second],
        Some(p.manifold_dimension()),
    )
    .expect("Milnor relations are homogeneous")
}

/// The quotient computed through `top + generator degree`, enough to certify
/// that it vanishes above the top.
pub fn milnor_algebra(p: &MilnorParams) -> GradedAlgebra {
    GradedAlgebra::with_default_window(milnor_presentation(p), 0)
}

/// Closed-form dimension of `H^q`: the number of `a^i b^j` with `i + j = q`,
/// `i ≤ s`, `j ≤ r - 1` (degrees doubled in the complex case).
pub fn dimension_formula(p: &MilnorParams, q: usize) -> usize {
    let q = match p.flavor {
        Flavor::Real => q,
        Flavor::Complex if q.is_multiple_of(2) => q / 2,
        Flavor::Complex => return 0,
    };
    (0..=p.s as usize)
        .filter(|&i| i <= q && q - i < p.r as usize)
        .count()
}

/// `χ(ℂH_{r,s}) = r(s+1)`.
pub fn euler_char_complex(r: u32, s: u32) -> Result<i64> {
    check_rs(r, s)?;
    Ok(r as i64 * (s as i64 + 1))
}

/// Alternating sum of a Betti table.
pub fn euler_characteristic(table: &[usize]) -> i64 {
    table
        .iter()
        .enumerate()
        .map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ObstructionVerdict {
    /// A free circle action would give free `Z_p` actions for every prime
    /// `p`, forcing `p | χ`; `witness_prime` does not divide `χ`.
    NoFreeS1Action { euler_characteristic: i64, witness_prime: u64 },
    NotObstructed { euler_characteristic: i64 },
}

impl ObstructionVerdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, ObstructionVerdict::NoFreeS1Action { .. })
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Floyd's test on a bare Euler characteristic.
pub fn floyd_obstruction_for_euler(chi: i64) -> ObstructionVerdict {
    if chi == 0 {
        return ObstructionVerdict::NotObstructed {
            euler_characteristic: 0,
        };
    }
    let witness_prime = (2..)
        .find(|&p| is_prime(p) && !chi.unsigned_abs().is_multiple_of(p))
        .expect("some prime does not divide a nonzero integer");
    ObstructionVerdict::NoFreeS1Action {
        euler_characteristic: chi,
        witness_prime,
    }
}

pub fn floyd_s1_obstruction(r: u32, s: u32) -> Result<ObstructionVerdict> {
    Ok(floyd_obstruction_for_euler(euler_char_complex(r, s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations() {
        let p = milnor_presentation(&MilnorParams::new(Flavor::Real, 5, 3).unwrap());
        assert_eq!(
            p.to_text(),
            "gen a 1\ngen b 1\nrel a^4\nrel b^5 + ab^4 + a^2b^3 + a^3b^2\ntop 7\n"
        );
        let c = milnor_presentation(&MilnorParams::new(Flavor::Complex, 3, 1).unwrap());
        assert_eq!(c.to_text(), "gen g 2\ngen h 2\nrel g^2\nrel h^3 + gh^2\ntop 6\n");
    }

    #[test]
    fn standing_assumption() {
        assert_eq!(
            MilnorParams::new(Flavor::Real, 3, 4),
            Err(Error::SExceedsR { r: 3, s: 4 })
        );
        assert_eq!(MilnorParams::new(Flavor::Complex, 3, 0), Err(Error::SIsZero { s: 0 }));
    }

    #[test]
    fn closed_form_dimensions() {
        let p = MilnorParams::new(Flavor::Real, 5, 3).unwrap();
        assert_eq!(dimension_formula(&p, 2), 3);
        assert_eq!(dimension_formula(&p, 0), 1);
        assert_eq!(dimension_formula(&p, 8), 0);
        let q = MilnorParams::new(Flavor::Real, 3, 1).unwrap();
        assert_eq!(dimension_formula(&q, 2), 2);
        let c = MilnorParams::new(Flavor::Complex, 3, 1).unwrap();
        let table: Vec<usize> = (0..=6).map(|d| dimension_formula(&c, d)).collect();
        assert_eq!(table, vec![1, 0, 2, 0, 2, 0, 1]);
        assert_eq!(milnor_algebra(&c).poincare_table(6).unwrap(), table);
    }

    #[test]
    fn euler_and_floyd() {
        assert_eq!(euler_char_complex(3, 1), Ok(6));
        assert_eq!(euler_char_complex(5, 3), Ok(20));
        let c = MilnorParams::new(Flavor::Complex, 3, 1).unwrap();
        let table = milnor_algebra(&c).poincare_table(6).unwrap();
        assert_eq!(euler_characteristic(&table), 6);
        assert_eq!(
            floyd_s1_obstruction(3, 1).unwrap(),
            ObstructionVerdict::NoFreeS1Action {
                euler_characteristic: 6,
                witness_prime: 5
            }
        );
        assert!(floyd_s1_obstruction(5, 3).unwrap().is_obstructed());
        assert!(!floyd_obstruction_for_euler(0).is_obstructed());
    }
}
