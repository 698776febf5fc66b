//! Finitely presented graded-commutative algebras over F₂.
//!
//! Quotients are computed one degree at a time by elimination over the span
//! of relation multiples; there is no Gröbner basis engine. Coefficients are
//! mod 2, so commutative polynomial semantics apply throughout.

mod poly;
mod presentation;
mod quotient;

pub use poly::{display_cmp, monomials_with_degrees, Monomial, Polynomial};
pub use presentation::{GeneratorSpec, GradedPresentation};
pub use quotient::{DegreeBasis, Element, Finiteness, GradedAlgebra, NilpotencyOrder};

use crate::error::Result;

/// A relation whose image under some map is a nonzero class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWitness {
    pub relation_index: usize,
    pub relation: Polynomial,
    pub image: Element,
}

/// All monomials of degree `d` in graded-lexicographic order of `gens`.
pub fn monomials_of_degree(gens: &[GeneratorSpec], d: usize) -> Vec<Monomial> {
    let degrees: Vec<usize> = gens.iter().map(|g| g.degree).collect();
    monomials_with_degrees(&degrees, d)
}

pub fn degree_basis(p: &GradedPresentation, d: usize) -> DegreeBasis {
    GradedAlgebra::new(p.clone(), d)
        .degree_basis(d)
        .expect("degree inside window")
        .clone()
}

pub fn poincare_table(p: &GradedPresentation, d_max: usize) -> Vec<usize> {
    GradedAlgebra::new(p.clone(), d_max)
        .poincare_table(d_max)
        .expect("degrees inside window")
}

pub fn reduce(p: &GradedPresentation, f: &Polynomial) -> Result<Element> {
    let d = f.homogeneous_degree(&p.degrees()).unwrap_or(0);
    GradedAlgebra::new(p.clone(), d).reduce(f)
}

/// Product of two coset elements; `window` bounds the degrees computed.
pub fn multiply(p: &GradedPresentation, u: &Element, v: &Element, window: usize) -> Result<Element> {
    GradedAlgebra::new(p.clone(), window).multiply(u, v)
}

pub fn nilpotency_order(p: &GradedPresentation, u: &Element, bound: u32) -> Result<NilpotencyOrder> {
    GradedAlgebra::new(p.clone(), u.degree * bound as usize).nilpotency_order(u, bound)
}
