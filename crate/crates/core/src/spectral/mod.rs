//! Leray–Serre spectral sequence of the Borel fibration `X → X_G → B_G` with
//! simple coefficients, for `G = Z2` and `G = S1`.
//!
//! `E_2^{k,l} = H^k(B_G) ⊗ H^l(X)`. A [`DifferentialSpec`] sends each fiber
//! generator to zero or to the base class at its page; the Leibniz rule
//! extends it to the whole page. Later differentials are never guessed: a run
//! only accepts them when they vanish for structural reasons.

mod differential;
mod page;
mod run;

use serde::{Deserialize, Serialize};

use crate::algebra::GradedPresentation;
use crate::error::{Error, Result};

pub use differential::{
    apply_differential, check_derivation_well_defined, d_squared_is_zero, derivation_image,
    turn_page, DifferentialBlock, DifferentialData, RankRow,
};
pub use page::{build_e2, BigradedPage, ColumnMode, Subquotient, Window};
pub use run::{
    enumerate_admissible_cases, enumerate_cases, enumerate_cases_for, run_borel_ss, run_borel_ss_with, volovikov_index,
    CaseRun, FailureReason, PageSequenceResult, RunOptions, UndeterminedDifferential,
    VolovikovIndex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Z2,
    S1,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Z2 => "z2",
            Group::S1 => "s1",
        }
    }
}

/// `H*(B_G; F₂)`: `F₂[t]` with `|t| = 1` for `Z2`, `F₂[u]` with `|u| = 2` for `S1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseRing {
    pub group: Group,
    pub generator: &'static str,
    pub generator_degree: usize,
}

impl BaseRing {
    pub fn new(group: Group) -> Self {
        match group {
            Group::Z2 => Self {
                group,
                generator: "t",
                generator_degree: 1,
            },
            Group::S1 => Self {
                group,
                generator: "u",
                generator_degree: 2,
            },
        }
    }

    pub fn dim(&self, k: usize) -> usize {
        usize::from(k.is_multiple_of(self.generator_degree))
    }

    /// Name of the basis class in degree `k`, e.g. `t^2` or `u`.
    pub fn class_name(&self, k: usize) -> String {
        match k / self.generator_degree {
            0 => "1".to_string(),
            1 => self.generator.to_string(),
            n => format!("{}^{}", self.generator, n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorImage {
    Zero,
    /// The base class `t^r ⊗ 1` (or `u^{r/2} ⊗ 1`) at page `r`.
    BaseClass,
}

/// Images of the fiber generators under `d_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DifferentialSpec {
    pub page: usize,
    pub images: Vec<GeneratorImage>,
}

impl DifferentialSpec {
    pub fn trivial(page: usize, n_generators: usize) -> Self {
        Self {
            page,
            images: vec![GeneratorImage::Zero; n_generators],
        }
    }

    /// Bit `j` of `mask` selects generator `j`.
    pub fn from_mask(page: usize, n_generators: usize, mask: u32) -> Self {
        Self {
            page,
            images: (0..n_generators)
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        GeneratorImage::BaseClass
                    } else {
                        GeneratorImage::Zero
                    }
                })
                .collect(),
        }
    }

    /// Two-generator case names: `i` hits only the first generator, `ii`
    /// only the second, `iii` both.
    pub fn from_case(case: &str, page: usize) -> Option<Self> {
        let mask = match case {
            "trivial" => 0,
            "i" => 1,
            "ii" => 2,
            "iii" => 3,
            _ => return None,
        };
        Some(Self::from_mask(page, 2, mask))
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&i| i == GeneratorImage::Zero)
    }

    pub fn active(&self) -> Vec<bool> {
        self.images
            .iter()
            .map(|&i| i == GeneratorImage::BaseClass)
            .collect()
    }

    pub fn case_label(&self) -> String {
        let active = self.active();
        match active.as_slice() {
            [false, false] => "trivial".into(),
            [true, false] => "i".into(),
            [false, true] => "ii".into(),
            [true, true] => "iii".into(),
            bits => bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        }
    }

    /// Nonzero images must be transgressions: a generator of degree `d`
    /// hits the base row only at page `d + 1`, and the base must be nonzero
    /// in that degree.
    pub fn validate(&self, base: &BaseRing, fiber: &GradedPresentation) -> Result<()> {
        if self.page < 2 {
            return Err(Error::InvalidDifferential(format!(
                "page {} is below 2",
                self.page
            )));
        }
        if self.images.len() != fiber.n_generators() {
            return Err(Error::InvalidDifferential(format!(
                "{} images for {} fiber generators",
                self.images.len(),
                fiber.n_generators()
            )));
        }
        for (g, image) in fiber.generators().iter().zip(&self.images) {
            if *image == GeneratorImage::Zero {
                continue;
            }
            if g.degree + 1 != self.page {
                return Err(Error::InvalidDifferential(format!(
                    "generator `{}` of degree {} cannot reach the base row at page {}",
                    g.name, g.degree, self.page
                )));
            }
            if base.dim(self.page) == 0 {
                return Err(Error::InvalidDifferential(format!(
                    "H^{}(B_G) is zero",
                    self.page
                )));
            }
        }
        Ok(())
    }

    /// Human-readable form such as `d2(a)=t^2⊗1, d2(b)=0`.
    pub fn describe(&self, base: &BaseRing, fiber: &GradedPresentation) -> String {
        fiber
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, im)| match im {
                GeneratorImage::Zero => format!("d{}({})=0", self.page, g.name),
                GeneratorImage::BaseClass => format!(
                    "d{}({})={}⊗1",
                    self.page,
                    g.name,
                    base.class_name(self.page)
                ),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}
