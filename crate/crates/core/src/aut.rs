//! Degree-preserving ring maps of a two-generator ring, and the involutive
//! automorphisms among them.

use rayon::prelude::*;

use crate::algebra::{Element, GradedAlgebra, RelationWitness};
use crate::error::{Error, Result};
use crate::f2core::{F2Matrix, F2Vector};

/// Images of the algebra generators, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorAssignment {
    pub images: Vec<Element>,
}

impl GeneratorAssignment {
    pub fn identity(alg: &GradedAlgebra) -> Result<Self> {
        let images = alg
            .presentation()
            .generators()
            .iter()
            .map(|g| alg.generator(&g.name))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { images })
    }

    /// `(generator, image)` pairs in normal form.
    pub fn describe(&self, alg: &GradedAlgebra) -> Vec<(String, String)> {
        alg.presentation()
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, im)| (g.name.clone(), alg.format_element(im)))
            .collect()
    }

    /// Image of an arbitrary element under the ring map.
    pub fn apply(&self, alg: &GradedAlgebra, e: &Element) -> Result<Element> {
        if e.is_zero() {
            return alg.zero(e.degree);
        }
        alg.evaluate(&alg.to_polynomial(e), &self.images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, alg: &GradedAlgebra, other: &GeneratorAssignment) -> Result<Self> {
        let images = other
            .images
            .iter()
            .map(|im| self.apply(alg, im))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { images })
    }
}

/// A generator assignment extends to a ring map iff every relation maps to
/// zero. Returns the first relation that does not.
pub fn check_generator_assignment(
    alg: &GradedAlgebra,
    a: &GeneratorAssignment,
) -> Result<Option<RelationWitness>> {
    let pres = alg.presentation();
    for (g, im) in pres.generators().iter().zip(&a.images) {
        if im.degree != g.degree {
            return Err(Error::InvalidPresentation(format!(
                "image of `{}` has degree {} instead of {}",
                g.name, im.degree, g.degree
            )));
        }
    }
    for (i, rel) in pres.relations().iter().enumerate() {
        let image = alg.evaluate(rel, &a.images)?;
        if !image.is_zero() {
            return Ok(Some(RelationWitness {
                relation_index: i,
                relation: rel.clone(),
                image,
            }));
        }
    }
    Ok(None)
}

/// Why a candidate assignment was discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    RelationNotKilled(RelationWitness),
    NotInvertible,
    NotInvolutive,
}

#[derive(Clone, Debug)]
pub struct AutomorphismSearch {
    pub candidates: Vec<(GeneratorAssignment, Option<Rejection>)>,
}

impl AutomorphismSearch {
    pub fn survivors(&self) -> Vec<&GeneratorAssignment> {
        self.candidates
            .iter()
            .filter(|(_, r)| r.is_none())
            .map(|(a, _)| a)
            .collect()
    }
}

fn nonzero_elements(dim: usize, degree: usize) -> Vec<Element> {
    (1u64..1 << dim)
        .map(|v| Element {
            degree,
            coords: F2Vector::from_ones(dim, (0..dim).filter(|i| v >> i & 1 == 1)),
        })
        .collect()
}

fn classify(alg: &GradedAlgebra, a: &GeneratorAssignment, identity: &GeneratorAssignment) -> Result<Option<Rejection>> {
    if let Some(w) = check_generator_assignment(alg, a)? {
        return Ok(Some(Rejection::RelationNotKilled(w)));
    }
    let d = a.images[0].degree;
    let m = F2Matrix::from_columns(alg.dimension(d)?, &a.images.iter().map(|e| e.coords.clone()).collect::<Vec<_>>());
    if m.rank() != a.images.len() {
        return Ok(Some(Rejection::NotInvertible));
    }
    if a.compose(alg, a)? != *identity {
        return Ok(Some(Rejection::NotInvolutive));
    }
    Ok(None)
}

/// Every assignment of the two generators to nonzero classes of their
/// degree, classified. Requires the two-generator, equal-degree shape.
pub fn search_involutions(alg: &GradedAlgebra) -> Result<AutomorphismSearch> {
    let pres = alg.presentation();
    let degrees = pres.degrees();
    if degrees.len() != 2 || degrees[0] != degrees[1] {
        return Err(Error::NotMilnorShape);
    }
    let d = degrees[0];
    let pool = nonzero_elements(alg.dimension(d)?, d);
    let identity = GeneratorAssignment::identity(alg)?;
    let pairs: Vec<GeneratorAssignment> = pool
        .iter()
        .flat_map(|a| {
            pool.iter().map(move |b| GeneratorAssignment {
                images: vec![a.clone(), b.clone()],
            })
        })
        .collect();
    let candidates = pairs
        .into_par_iter()
        .map(|a| {
            let verdict = classify(alg, &a, &identity)?;
            Ok((a, verdict))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AutomorphismSearch { candidates })
}

pub fn involutive_automorphisms(alg: &GradedAlgebra) -> Result<Vec<GeneratorAssignment>> {
    Ok(search_involutions(alg)?
        .survivors()
        .into_iter()
        .cloned()
        .collect())
}

/// Contains the identity and is closed under composition. Inverses come
/// for free since every member is an involution.
pub fn is_group(alg: &GradedAlgebra, set: &[GeneratorAssignment]) -> Result<bool> {
    if !set.contains(&GeneratorAssignment::identity(alg)?) {
        return Ok(false);
    }
    for f in set {
        for g in set {
            if !set.contains(&f.compose(alg, g)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
