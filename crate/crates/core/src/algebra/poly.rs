use std::cmp::Ordering;
use std::collections::BTreeSet;

/// Exponent vector indexed by the generator order of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n_gens: usize) -> Self {
        Monomial(vec![0; n_gens])
    }

    pub fn generator(n_gens: usize, index: usize) -> Self {
        let mut m = Self::one(n_gens);
        m.0[index] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self, degrees: &[usize]) -> usize {
        self.0
            .iter()
            .zip(degrees)
            .map(|(&e, &d)| e as usize * d)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * n).collect())
    }

    /// `self / g`, if `g` divides.
    pub fn divide_by_generator(&self, index: usize) -> Option<Monomial> {
        let mut m = self.clone();
        m.0[index] = m.0[index].checked_sub(1)?;
        Some(m)
    }
}

/// Display order: higher degree first, then exponent vectors ascending, so
/// `b^5 + ab^4 + a^2b^3` reads in increasing powers of the first generator.
pub fn display_cmp(a: &Monomial, b: &Monomial, degrees: &[usize]) -> Ordering {
    b.degree(degrees)
        .cmp(&a.degree(degrees))
        .then_with(|| a.0.cmp(&b.0))
}

/// A polynomial with coefficients in F₂, stored as its set of terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m);
        p
    }

    /// Sum of the given monomials; repeated terms cancel in pairs.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero();
        for t in terms {
            p.add_term(t);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_term(t.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.add_term(a.mul(b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|t| t.mul(m)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// The common degree of all terms; `None` for the zero polynomial or a
    /// non-homogeneous one.
    pub fn homogeneous_degree(&self, degrees: &[usize]) -> Option<usize> {
        let mut it = self.terms.iter().map(|t| t.degree(degrees));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, degrees: &[usize]) -> bool {
        self.is_zero() || self.homogeneous_degree(degrees).is_some()
    }

    /// Terms sorted for display.
    pub fn sorted_terms(&self, degrees: &[usize]) -> Vec<&Monomial> {
        let mut v: Vec<&Monomial> = self.terms.iter().collect();
        v.sort_by(|a, b| display_cmp(a, b, degrees));
        v
    }
}

/// All monomials of total degree `d`, exponent vectors in descending
/// lexicographic order of the declared generator order.
pub fn monomials_with_degrees(degrees: &[usize], d: usize) -> Vec<Monomial> {
    fn go(degrees: &[usize], at: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if at == degrees.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = degrees[at];
        for e in (0..=left / g).rev() {
            cur[at] = e as u32;
            go(degrees, at + 1, left - e * g, cur, out);
        }
        cur[at] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; degrees.len()];
    go(degrees, 0, d, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_mod_two() {
        let a = Monomial(vec![1, 0]);
        let p = Polynomial::from_terms([a.clone(), a.clone(), Monomial(vec![0, 1])]);
        assert_eq!(p.len(), 1);
        assert!(!p.contains(&a));
    }

    #[test]
    fn frobenius() {
        let a_plus_b = Polynomial::from_terms([Monomial(vec![1, 0]), Monomial(vec![0, 1])]);
        let sq = a_plus_b.mul(&a_plus_b);
        assert_eq!(
            sq,
            Polynomial::from_terms([Monomial(vec![2, 0]), Monomial(vec![0, 2])])
        );
    }

    #[test]
    fn enumeration_order() {
        let ms = monomials_with_degrees(&[1, 1], 3);
        let exps: Vec<_> = ms.iter().map(|m| m.0.clone()).collect();
        assert_eq!(exps, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert!(monomials_with_degrees(&[2, 2], 3).is_empty());
        assert_eq!(monomials_with_degrees(&[2, 2], 0), vec![Monomial(vec![0, 0])]);
    }
}
