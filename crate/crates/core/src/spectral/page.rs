use std::sync::Arc;

use super::BaseRing;
use crate::algebra::GradedAlgebra;
use crate::error::{Error, Result};
use crate::f2core::{complement_basis, CoordinateSolver, EchelonForm, F2Vector};

/// `Z / B` inside the `E_2` entry of the same bidegree, with chosen
/// representatives of a complement of `B` in `Z`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    cycles: EchelonForm,
    boundaries: EchelonForm,
    reps: Vec<F2Vector>,
    solver: CoordinateSolver,
}

impl Subquotient {
    pub fn new(ambient: usize, cycles: EchelonForm, boundaries: EchelonForm) -> Self {
        debug_assert!(boundaries.rows().iter().all(|b| cycles.contains(b)));
        let reps = complement_basis(ambient, boundaries.rows(), cycles.rows());
        let stacked: Vec<F2Vector> = reps.iter().chain(boundaries.rows()).cloned().collect();
        let solver = CoordinateSolver::new(ambient, &stacked).expect("complement is independent");
        Self {
            ambient,
            cycles,
            boundaries,
            reps,
            solver,
        }
    }

    pub fn full(ambient: usize) -> Self {
        let cycles = EchelonForm::from_rows(
            ambient,
            (0..ambient).map(|i| F2Vector::unit(ambient, i)).collect(),
        );
        Self::new(ambient, cycles, EchelonForm::empty(ambient))
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn representatives(&self) -> &[F2Vector] {
        &self.reps
    }

    pub fn cycles(&self) -> &EchelonForm {
        &self.cycles
    }

    pub fn boundaries(&self) -> &EchelonForm {
        &self.boundaries
    }

    /// Class of a cycle in the representative basis; `None` if `v` is not a
    /// cycle.
    pub fn coordinates(&self, v: &F2Vector) -> Option<F2Vector> {
        let all = self.solver.solve(v)?;
        Some(F2Vector::from_ones(
            self.reps.len(),
            all.ones().filter(|&i| i < self.reps.len()),
        ))
    }

    pub fn lift(&self, coords: &F2Vector) -> F2Vector {
        let mut v = F2Vector::zeros(self.ambient);
        for i in coords.ones() {
            v ^= &self.reps[i];
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub k_max: usize,
    pub l_max: usize,
}

/// How many base columns are materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColumnMode {
    /// A few columns; the rest follow from `E^{k,l} ≅ E^{k+|base gen|,l}`,
    /// which holds on every page for `k` at or beyond the last nonzero
    /// differential's page.
    #[default]
    Periodic,
    /// Every column through `k_max`, for cross-validation.
    Full,
}

/// One page `E_r` of the spectral sequence over a window of bidegrees.
#[derive(Clone, Debug)]
pub struct BigradedPage {
    pub(crate) page_number: usize,
    pub(crate) base: BaseRing,
    pub(crate) fiber: Arc<GradedAlgebra>,
    pub(crate) fiber_top: usize,
    pub(crate) window: Window,
    pub(crate) columns: Vec<Vec<Subquotient>>,
    pub(crate) last_nonzero_page: Option<usize>,
}

impl BigradedPage {
    pub fn page_number(&self) -> usize {
        self.page_number
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn fiber(&self) -> &GradedAlgebra {
        &self.fiber
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Number of materialized columns.
    pub fn stored_columns(&self) -> usize {
        self.columns.len()
    }

    /// Page of the last nonzero differential, `None` while the page still
    /// equals `E_2`.
    pub fn last_nonzero_page(&self) -> Option<usize> {
        self.last_nonzero_page
    }

    pub(crate) fn column_index(&self, k: usize) -> usize {
        let stored = self.columns.len();
        if k < stored {
            return k;
        }
        let g = self.base.generator_degree;
        let steps = (k - stored + 1).div_ceil(g);
        k - steps * g
    }

    /// Entry `E_r^{k,l}`; `None` above the fiber's top degree, where the
    /// page is zero.
    pub fn entry(&self, k: usize, l: usize) -> Option<&Subquotient> {
        if l > self.window.l_max {
            return None;
        }
        Some(&self.columns[self.column_index(k)][l])
    }

    pub fn dim(&self, k: usize, l: usize) -> usize {
        self.entry(k, l).map_or(0, Subquotient::dim)
    }

    /// `dim E_r^{k,l}` for `0 ≤ k ≤ k_max`, `0 ≤ l ≤ l_max`, indexed `[k][l]`.
    pub fn dims(&self) -> Vec<Vec<usize>> {
        (0..=self.window.k_max)
            .map(|k| (0..=self.window.l_max).map(|l| self.dim(k, l)).collect())
            .collect()
    }

    /// `Σ_{k+l=n} dim E^{k,l}` for `0 ≤ n ≤ k_max`.
    pub fn tot_dims(&self) -> Vec<usize> {
        (0..=self.window.k_max)
            .map(|n| {
                (0..=n.min(self.window.l_max))
                    .map(|l| self.dim(n - l, l))
                    .sum()
            })
            .collect()
    }

    /// Names of the `E_2`-level classes `(base class) ⊗ (fiber monomial)`
    /// spanning the ambient space at `(k, l)`.
    pub fn e2_basis_names(&self, k: usize, l: usize) -> Vec<String> {
        if self.base.dim(k) == 0 || l > self.fiber_top {
            return Vec::new();
        }
        let basis = self.fiber.degree_basis(l).expect("inside fiber window");
        basis
            .representatives
            .iter()
            .map(|m| {
                format!(
                    "{}⊗{}",
                    self.base.class_name(k),
                    self.fiber.presentation().format_monomial(m)
                )
            })
            .collect()
    }
}

/// Columns needed so that a full period of columns lies beyond the page of
/// any transgression of the fiber generators.
pub(crate) fn periodic_columns(base: &BaseRing, fiber: &GradedAlgebra) -> usize {
    let g = base.generator_degree;
    let max_gen = fiber.presentation().max_generator_degree();
    (2 * g + 2).max(max_gen + 1 + g)
}

/// `E_2^{k,l} = H^k(B_G) ⊗ H^l(X)`.
pub fn build_e2(
    base: BaseRing,
    fiber: Arc<GradedAlgebra>,
    window: Window,
    mode: ColumnMode,
) -> Result<BigradedPage> {
    let finite = fiber.finiteness().ok_or(Error::InfiniteFiber {
        window: fiber.max_degree(),
    })?;
    if finite.top > window.l_max {
        return Err(Error::InfiniteFiber {
            window: window.l_max,
        });
    }
    let fiber_top = finite.top;
    let stored = match mode {
        ColumnMode::Periodic => periodic_columns(&base, &fiber),
        ColumnMode::Full => (window.k_max + 1).max(periodic_columns(&base, &fiber)),
    };
    let fiber_dims: Vec<usize> = (0..=window.l_max)
        .map(|l| {
            if l > fiber_top {
                0
            } else {
                fiber.dimension(l).expect("inside fiber window")
            }
        })
        .collect();
    let columns = (0..stored)
        .map(|k| {
            fiber_dims
                .iter()
                .map(|&d| Subquotient::full(base.dim(k) * d))
                .collect()
        })
        .collect();
    Ok(BigradedPage {
        page_number: 2,
        base,
        fiber,
        fiber_top,
        window,
        columns,
        last_nonzero_page: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milnor::{milnor_algebra, Flavor, MilnorParams};
    use crate::spectral::Group;

    fn fiber(flavor: Flavor, r: u32, s: u32) -> Arc<GradedAlgebra> {
        Arc::new(milnor_algebra(&MilnorParams::new(flavor, r, s).unwrap()))
    }

    #[test]
    fn e2_is_tensor_product() {
        let f = fiber(Flavor::Real, 5, 3);
        let window = Window { k_max: 12, l_max: 7 };
        let page = build_e2(BaseRing::new(Group::Z2), f.clone(), window, ColumnMode::Periodic).unwrap();
        let betti = f.poincare_table(7).unwrap();
        for k in 0..=12 {
            for l in 0..=7 {
                assert_eq!(page.dim(k, l), betti[l]);
            }
        }
        assert_eq!(page.dim(3, 8), 0);
    }

    #[test]
    fn circle_base_kills_odd_columns() {
        let f = fiber(Flavor::Real, 3, 1);
        let window = Window { k_max: 9, l_max: 3 };
        let page = build_e2(BaseRing::new(Group::S1), f, window, ColumnMode::Full).unwrap();
        for k in (1..=9).step_by(2) {
            for l in 0..=3 {
                assert_eq!(page.dim(k, l), 0);
            }
        }
        assert_eq!(page.dim(2, 1), 2);
        assert_eq!(page.e2_basis_names(2, 1), vec!["u⊗a", "u⊗b"]);
    }

    #[test]
    fn narrow_fiber_window_rejected() {
        let f = fiber(Flavor::Real, 5, 3);
        let window = Window { k_max: 12, l_max: 5 };
        assert!(matches!(
            build_e2(BaseRing::new(Group::Z2), f, window, ColumnMode::Periodic),
            Err(Error::InfiniteFiber { .. })
        ));
    }

    #[test]
    fn subquotient_coordinates() {
        let ambient = 3;
        let cycles = EchelonForm::from_rows(
            ambient,
            vec![F2Vector::from_bits([1u8, 1, 0]), F2Vector::from_bits([0u8, 0, 1])],
        );
        let boundaries = EchelonForm::from_rows(ambient, vec![F2Vector::from_bits([0u8, 0, 1])]);
        let sq = Subquotient::new(ambient, cycles, boundaries);
        assert_eq!(sq.dim(), 1);
        assert_eq!(
            sq.coordinates(&F2Vector::from_bits([1u8, 1, 1])),
            Some(F2Vector::from_bits([1u8]))
        );
        assert_eq!(
            sq.coordinates(&F2Vector::from_bits([0u8, 0, 1])),
            Some(F2Vector::from_bits([0u8]))
        );
        assert_eq!(sq.coordinates(&F2Vector::from_bits([1u8, 0, 0])), None);
    }
}
