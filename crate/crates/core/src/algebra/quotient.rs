use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::poly::{monomials_with_degrees, Monomial, Polynomial};
use super::presentation::GradedPresentation;
use crate::error::{Error, Result};
use crate::f2core::{EchelonForm, F2Vector};

/// Coset representatives of one graded component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBasis {
    pub degree: usize,
    pub dimension: usize,
    pub representatives: Vec<Monomial>,
}

/// A homogeneous element of the quotient, in the coordinates of the
/// [`DegreeBasis`] of its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub degree: usize,
    pub coords: F2Vector,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(self.degree, other.degree, "adding elements of different degrees");
        Element {
            degree: self.degree,
            coords: &self.coords ^ &other.coords,
        }
    }
}

/// Outcome of a nilpotency search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NilpotencyOrder {
    /// Largest `n` with `uⁿ ≠ 0`.
    Exact(u32),
    /// `u^bound` is still nonzero.
    BoundReached(u32),
}

/// Certificate that a quotient vanishes above `top`: every degree in
/// `zero_run_start .. zero_run_start + width` is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Finiteness {
    pub top: usize,
    pub zero_run_start: usize,
    pub width: usize,
}

#[derive(Debug, Clone)]
struct Component {
    /// Enumeration order.
    monomials: Vec<Monomial>,
    column_of: HashMap<Monomial, usize>,
    /// Span of the ideal in this degree. Column `c` is monomial
    /// `monomials[n - 1 - c]`, so pivots fall on monomials late in the
    /// enumeration order and representatives are the early ones.
    ideal: EchelonForm,
    /// Coordinate index → column.
    rep_columns: Vec<usize>,
    /// Column → coordinate index, for non-pivot columns.
    coord_of_column: Vec<Option<usize>>,
    basis: DegreeBasis,
}

impl Component {
    fn column(&self, m: &Monomial) -> usize {
        self.column_of[m]
    }

    fn monomial_at(&self, col: usize) -> &Monomial {
        &self.monomials[self.monomials.len() - 1 - col]
    }

    fn vector_of(&self, p: &Polynomial) -> F2Vector {
        F2Vector::from_ones(self.monomials.len(), p.terms().map(|t| self.column(t)))
    }

    fn coordinates(&self, v: &F2Vector) -> F2Vector {
        let reduced = self.ideal.reduce(v);
        F2Vector::from_ones(
            self.basis.dimension,
            reduced
                .ones()
                .map(|c| self.coord_of_column[c].expect("reduced vectors avoid pivots")),
        )
    }
}

/// The quotient `F₂[generators]/(relations)` computed degreewise up to a
/// fixed window.
#[derive(Debug, Clone)]
pub struct GradedAlgebra {
    presentation: GradedPresentation,
    degrees: Vec<usize>,
    components: Vec<Component>,
}

impl GradedAlgebra {
    /// Computes every component of degree `≤ max_degree`.
    pub fn new(presentation: GradedPresentation, max_degree: usize) -> Self {
        let degrees = presentation.degrees();
        let mut components: Vec<Component> = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let monomials = monomials_with_degrees(&degrees, d);
            let n = monomials.len();
            let column_of: HashMap<Monomial, usize> = monomials
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), n - 1 - i))
                .collect();
            // The ideal in degree d is spanned by g·I_{d - deg g} and the
            // relations of degree d.
            let mut rows = Vec::new();
            for (gi, &gd) in degrees.iter().enumerate() {
                if gd > d {
                    continue;
                }
                let lower = &components[d - gd];
                let g = Monomial::generator(degrees.len(), gi);
                for row in lower.ideal.rows() {
                    rows.push(F2Vector::from_ones(
                        n,
                        row.ones().map(|c| column_of[&lower.monomial_at(c).mul(&g)]),
                    ));
                }
            }
            for rel in presentation.relations() {
                if rel.homogeneous_degree(&degrees) == Some(d) {
                    rows.push(F2Vector::from_ones(n, rel.terms().map(|t| column_of[t])));
                }
            }
            let ideal = EchelonForm::from_rows(n, rows);
            let mut rep_columns = ideal.free_columns();
            rep_columns.reverse();
            let mut coord_of_column = vec![None; n];
            for (i, &c) in rep_columns.iter().enumerate() {
                coord_of_column[c] = Some(i);
            }
            let representatives: Vec<Monomial> = rep_columns
                .iter()
                .map(|&c| monomials[n - 1 - c].clone())
                .collect();
            components.push(Component {
                basis: DegreeBasis {
                    degree: d,
                    dimension: representatives.len(),
                    representatives,
                },
                monomials,
                column_of,
                ideal,
                rep_columns,
                coord_of_column,
            });
        }
        Self {
            presentation,
            degrees,
            components,
        }
    }

    /// Window reaching `top_hint + max generator degree` (or `fallback` when
    /// the presentation carries no hint).
    pub fn with_default_window(presentation: GradedPresentation, fallback: usize) -> Self {
        let window = presentation
            .top_hint()
            .map_or(fallback, |t| t + presentation.max_generator_degree());
        Self::new(presentation, window)
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.presentation
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    fn component(&self, d: usize) -> Result<&Component> {
        self.components.get(d).ok_or(Error::DegreeOutOfWindow {
            degree: d,
            window: self.max_degree(),
        })
    }

    pub fn degree_basis(&self, d: usize) -> Result<&DegreeBasis> {
        Ok(&self.component(d)?.basis)
    }

    pub fn dimension(&self, d: usize) -> Result<usize> {
        Ok(self.component(d)?.basis.dimension)
    }

    /// Dimensions of degrees `0..=d_max`.
    pub fn poincare_table(&self, d_max: usize) -> Result<Vec<usize>> {
        (0..=d_max).map(|d| self.dimension(d)).collect()
    }

    /// Looks for `width` consecutive zero degrees (width = largest generator
    /// degree) inside the window. Every monomial above such a run has a
    /// divisor inside it, so the quotient vanishes from the run onwards.
    pub fn finiteness(&self) -> Option<Finiteness> {
        let width = self.presentation.max_generator_degree();
        let dims: Vec<usize> = self.components.iter().map(|c| c.basis.dimension).collect();
        (1..dims.len()).find_map(|start| {
            let end = start + width;
            (end <= dims.len() && dims[start..end].iter().all(|&d| d == 0)).then(|| Finiteness {
                top: (0..start).rev().find(|&d| dims[d] > 0).unwrap_or(0),
                zero_run_start: start,
                width,
            })
        })
    }

    pub fn zero(&self, degree: usize) -> Result<Element> {
        Ok(Element {
            degree,
            coords: F2Vector::zeros(self.dimension(degree)?),
        })
    }

    pub fn unit(&self) -> Element {
        Element {
            degree: 0,
            coords: F2Vector::unit(1, 0),
        }
    }

    pub fn reduce_monomial(&self, m: &Monomial) -> Result<Element> {
        let d = m.degree(&self.degrees);
        let comp = self.component(d)?;
        let v = F2Vector::unit(comp.monomials.len(), comp.column(m));
        Ok(Element {
            degree: d,
            coords: comp.coordinates(&v),
        })
    }

    /// Normal form of a homogeneous polynomial. The zero polynomial reduces
    /// to the zero element of degree 0.
    pub fn reduce(&self, f: &Polynomial) -> Result<Element> {
        if f.is_zero() {
            return self.zero(0);
        }
        let d = f
            .homogeneous_degree(&self.degrees)
            .ok_or(Error::NotHomogeneous)?;
        self.reduce_in_degree(f, d)
    }

    /// Normal form of `f` viewed in degree `d` (`f` may be zero).
    pub fn reduce_in_degree(&self, f: &Polynomial, d: usize) -> Result<Element> {
        if f.terms().any(|t| t.degree(&self.degrees) != d) {
            return Err(Error::NotHomogeneous);
        }
        let comp = self.component(d)?;
        Ok(Element {
            degree: d,
            coords: comp.coordinates(&comp.vector_of(f)),
        })
    }

    /// The sum of the representatives selected by `e`.
    pub fn to_polynomial(&self, e: &Element) -> Polynomial {
        let basis = &self.components[e.degree].basis;
        Polynomial::from_terms(e.coords.ones().map(|i| basis.representatives[i].clone()))
    }

    pub fn format_element(&self, e: &Element) -> String {
        self.presentation.format_polynomial(&self.to_polynomial(e))
    }

    pub fn generator(&self, name: &str) -> Result<Element> {
        let i = self
            .presentation
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        self.reduce_monomial(&Monomial::generator(self.degrees.len(), i))
    }

    pub fn multiply(&self, u: &Element, v: &Element) -> Result<Element> {
        let d = u.degree + v.degree;
        let comp = self.component(d)?;
        let bu = &self.components[u.degree].basis;
        let bv = &self.components[v.degree].basis;
        let mut acc = F2Vector::zeros(comp.monomials.len());
        for i in u.coords.ones() {
            for j in v.coords.ones() {
                acc.flip(comp.column(&bu.representatives[i].mul(&bv.representatives[j])));
            }
        }
        Ok(Element {
            degree: d,
            coords: comp.coordinates(&acc),
        })
    }

    pub fn power(&self, u: &Element, n: u32) -> Result<Element> {
        let mut acc = self.unit();
        for _ in 0..n {
            acc = self.multiply(&acc, u)?;
        }
        Ok(acc)
    }

    /// Largest `n ≤ bound` with `uⁿ ≠ 0`; `Exact(0)` for `u = 0`.
    pub fn nilpotency_order(&self, u: &Element, bound: u32) -> Result<NilpotencyOrder> {
        if u.degree == 0 {
            return Err(Error::InvalidPresentation(
                "nilpotency order needs an element of positive degree".into(),
            ));
        }
        let mut acc = u.clone();
        for n in 1..=bound {
            if acc.is_zero() {
                return Ok(NilpotencyOrder::Exact(n - 1));
            }
            if n == bound {
                break;
            }
            acc = self.multiply(&acc, u)?;
        }
        Ok(NilpotencyOrder::BoundReached(bound))
    }

    /// Substitutes `images[i]` for generator `i` in `f` and reduces.
    pub fn evaluate(&self, f: &Polynomial, images: &[Element]) -> Result<Element> {
        assert_eq!(images.len(), self.degrees.len(), "one image per generator");
        let d = f
            .terms()
            .next()
            .map_or(0, |t| t.exponents().iter().zip(images).map(|(&e, im)| e as usize * im.degree).sum());
        let mut acc = self.zero(d)?;
        for term in f.terms() {
            let mut prod = self.unit();
            for (&e, im) in term.exponents().iter().zip(images) {
                for _ in 0..e {
                    prod = self.multiply(&prod, im)?;
                }
            }
            if prod.degree != d {
                return Err(Error::NotHomogeneous);
            }
            acc = acc.add(&prod);
        }
        Ok(acc)
    }

    /// Number of monomials of degree `d` (the ambient dimension before
    /// quotienting).
    pub fn monomial_count(&self, d: usize) -> Result<usize> {
        Ok(self.component(d)?.monomials.len())
    }

    /// Column index of every representative, in coordinate order; exposed for
    /// cross-checks against independent elimination.
    pub fn representative_columns(&self, d: usize) -> Result<&[usize]> {
        Ok(&self.component(d)?.rep_columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(r: u32, s: u32) -> GradedAlgebra {
        let p = crate::milnor::milnor_presentation(&crate::milnor::MilnorParams::new(
            crate::milnor::Flavor::Real,
            r,
            s,
        )
        .unwrap());
        GradedAlgebra::with_default_window(p, 0)
    }

    #[test]
    fn unit_basis() {
        let alg = real(5, 3);
        let b = alg.degree_basis(0).unwrap();
        assert_eq!(b.dimension, 1);
        assert!(b.representatives[0].is_one());
    }

    #[test]
    fn representatives_of_real_5_3() {
        let alg = real(5, 3);
        let p = alg.presentation();
        let b = alg.degree_basis(4).unwrap();
        let expected: Vec<Monomial> = [(3, 1), (2, 2), (1, 3), (0, 4)]
            .iter()
            .map(|&(i, j)| p.monomial(&[("a", i), ("b", j)]).unwrap())
            .collect();
        assert_eq!(b.representatives, expected);
        assert_eq!(alg.poincare_table(7).unwrap(), vec![1, 2, 3, 4, 4, 3, 2, 1]);
    }

    #[test]
    fn representative_of_real_3_1_in_degree_3() {
        let alg = real(3, 1);
        let b = alg.degree_basis(3).unwrap();
        assert_eq!(b.dimension, 1);
        assert_eq!(
            b.representatives[0],
            alg.presentation().monomial(&[("a", 1), ("b", 2)]).unwrap()
        );
    }

    #[test]
    fn reduction_by_relations() {
        let alg = real(5, 3);
        let p = alg.presentation();
        let b5 = Polynomial::monomial(p.monomial(&[("b", 5)]).unwrap());
        let expect = p.parse_polynomial("ab^4 + a^2b^3 + a^3b^2").unwrap();
        let red = alg.reduce(&b5).unwrap();
        assert_eq!(alg.to_polynomial(&red), expect);
        let a4 = Polynomial::monomial(p.monomial(&[("a", 4)]).unwrap());
        assert!(alg.reduce(&a4).unwrap().is_zero());
        let one = alg.reduce(&p.parse_polynomial("1").unwrap()).unwrap();
        assert_eq!(one, alg.unit());
    }

    #[test]
    fn non_homogeneous_rejected() {
        let alg = real(5, 3);
        let f = alg.presentation().parse_polynomial("a + b^2").unwrap();
        assert_eq!(alg.reduce(&f), Err(Error::NotHomogeneous));
    }

    #[test]
    fn products() {
        let alg = real(5, 3);
        let p = alg.presentation();
        let r = |s: &str| alg.reduce(&p.parse_polynomial(s).unwrap()).unwrap();
        let apb = r("a + b");
        assert_eq!(alg.multiply(&apb, &apb).unwrap(), r("a^2 + b^2"));
        assert_eq!(alg.multiply(&r("a^2b^3"), &r("b^2")).unwrap(), r("a^3b^4"));
        assert_eq!(alg.multiply(&r("ab"), &alg.unit()).unwrap(), r("ab"));
        let top = r("a^3b^4");
        assert!(matches!(
            alg.multiply(&top, &r("a^3b^4")),
            Err(Error::DegreeOutOfWindow { .. })
        ));
    }

    #[test]
    fn nilpotency() {
        let alg = real(5, 3);
        let a = alg.generator("a").unwrap();
        assert_eq!(alg.nilpotency_order(&a, 8).unwrap(), NilpotencyOrder::Exact(3));
        assert_eq!(alg.nilpotency_order(&a, 2).unwrap(), NilpotencyOrder::BoundReached(2));
        let zero = alg.zero(1).unwrap();
        assert_eq!(alg.nilpotency_order(&zero, 4).unwrap(), NilpotencyOrder::Exact(0));
    }

    #[test]
    fn finiteness_certificate() {
        let alg = real(5, 3);
        let f = alg.finiteness().unwrap();
        assert_eq!(f.top, 7);
        assert_eq!(f.zero_run_start, 8);
        let poly = GradedPresentation::from_text("gen y 2\ngen w 1\nrel w^2\n").unwrap();
        assert!(GradedAlgebra::new(poly, 12).finiteness().is_none());
    }
}
