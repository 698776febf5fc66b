use super::page::{BigradedPage, Subquotient};
use super::DifferentialSpec;
use crate::algebra::{GradedAlgebra, Monomial, Polynomial, RelationWitness};
use crate::error::{Error, Result};
use crate::f2core::{F2Matrix, F2Vector};

/// `D(m) = Σ_{g active} ∂m/∂g` over F₂: the fiber part of `d_r(1 ⊗ m)`
/// when every active generator transgresses to the same base class.
pub fn derivation_image(active: &[bool], m: &Monomial) -> Polynomial {
    Polynomial::from_terms(
        active
            .iter()
            .enumerate()
            .filter(|&(g, &on)| on && m.0[g] % 2 == 1)
            .filter_map(|(g, _)| m.divide_by_generator(g)),
    )
}

fn derivation_of(active: &[bool], f: &Polynomial) -> Polynomial {
    f.terms()
        .fold(Polynomial::zero(), |acc, t| acc.add(&derivation_image(active, t)))
}

/// The Leibniz extension respects the relations iff `D(rel)` vanishes in the
/// quotient for every relation. Returns the first relation that fails.
pub fn check_derivation_well_defined(
    fiber: &GradedAlgebra,
    spec: &DifferentialSpec,
) -> Result<Option<RelationWitness>> {
    if spec.is_trivial() {
        return Ok(None);
    }
    let active = spec.active();
    let shift = spec.page - 1;
    let pres = fiber.presentation();
    for (i, rel) in pres.relations().iter().enumerate() {
        let e = pres.relation_degree(i);
        if e < shift {
            continue;
        }
        let image = fiber.reduce_in_degree(&derivation_of(&active, rel), e - shift)?;
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

/// Matrix of `D: H^l → H^{l-shift}` in representative bases.
fn derivation_matrix(fiber: &GradedAlgebra, active: &[bool], l: usize, shift: usize) -> Result<F2Matrix> {
    let source = fiber.degree_basis(l)?;
    if l < shift {
        return Ok(F2Matrix::zeros(0, source.dimension));
    }
    let target_dim = fiber.dimension(l - shift)?;
    let columns = source
        .representatives
        .iter()
        .map(|m| {
            fiber
                .reduce_in_degree(&derivation_image(active, m), l - shift)
                .map(|e| e.coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(F2Matrix::from_columns(target_dim, &columns))
}

/// `d_r: E_r^{k,l} → E_r^{k+r,l-r+1}` in the representative bases of the two
/// subquotients.
#[derive(Clone, Debug)]
pub struct DifferentialBlock {
    pub source: (usize, usize),
    pub target: Option<(usize, usize)>,
    pub matrix: F2Matrix,
    pub rank: usize,
    /// Kernel in source-page coordinates.
    pub kernel: Vec<F2Vector>,
    /// Images of the source representatives in `E_2` coordinates of the
    /// target.
    pub images: Vec<F2Vector>,
}

impl DifferentialBlock {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }
}

/// One row of a rank table: `d_r` restricted to a column, by fiber degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RankRow {
    pub q: usize,
    pub source_dim: usize,
    pub kernel: usize,
    pub image: usize,
}

#[derive(Clone, Debug)]
pub struct DifferentialData {
    pub spec: DifferentialSpec,
    blocks: Vec<Vec<DifferentialBlock>>,
    period: usize,
}

impl DifferentialData {
    pub fn page(&self) -> usize {
        self.spec.page
    }

    fn column_index(&self, k: usize) -> usize {
        let stored = self.blocks.len();
        if k < stored {
            return k;
        }
        let steps = (k - stored + 1).div_ceil(self.period);
        k - steps * self.period
    }

    pub fn block(&self, k: usize, l: usize) -> Option<&DifferentialBlock> {
        self.blocks[self.column_index(k)].get(l)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|b| b.rank == 0)
    }

    /// `(dim, ker, im)` of `d_r` out of `E_r^{k,q}` for each `q`.
    pub fn rank_table(&self, k: usize) -> Vec<RankRow> {
        self.blocks[self.column_index(k)]
            .iter()
            .enumerate()
            .map(|(q, b)| RankRow {
                q,
                source_dim: b.matrix.col_count(),
                kernel: b.kernel_dim(),
                image: b.rank,
            })
            .collect()
    }

    /// Whether some nonzero component lands in the bottom row.
    pub fn hits_base_row(&self) -> bool {
        let l = self.spec.page - 1;
        self.blocks.iter().any(|col| col.get(l).is_some_and(|b| b.rank > 0))
    }
}

/// `d_r` on `E_r` determined by the generator images. Only valid while `E_r`
/// still equals `E_2` as an algebra.
pub fn apply_differential(page: &BigradedPage, spec: &DifferentialSpec) -> Result<DifferentialData> {
    let r = spec.page;
    if r != page.page_number {
        return Err(Error::InvalidDifferential(format!(
            "differential for page {r} applied to page {}",
            page.page_number
        )));
    }
    spec.validate(&page.base, page.fiber.presentation())?;
    if !spec.is_trivial() && page.last_nonzero_page.is_some() {
        return Err(Error::InvalidDifferential(
            "generator images determine a differential only before any nonzero one".into(),
        ));
    }
    let active = spec.active();
    let shift = r - 1;
    let l_max = page.window.l_max;
    let mats = (0..=l_max)
        .map(|l| {
            if l > page.fiber_top || spec.is_trivial() {
                Ok(None)
            } else {
                derivation_matrix(&page.fiber, &active, l, shift).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut blocks = Vec::with_capacity(page.columns.len());
    for (k, column) in page.columns.iter().enumerate() {
        let mut col_blocks = Vec::with_capacity(column.len());
        for (l, src) in column.iter().enumerate() {
            col_blocks.push(block_at(page, &mats, src, k, l, shift)?);
        }
        blocks.push(col_blocks);
    }
    Ok(DifferentialData {
        spec: spec.clone(),
        blocks,
        period: page.base.generator_degree,
    })
}

fn block_at(
    page: &BigradedPage,
    mats: &[Option<F2Matrix>],
    src: &Subquotient,
    k: usize,
    l: usize,
    shift: usize,
) -> Result<DifferentialBlock> {
    let r = shift + 1;
    if l < shift {
        let n = src.dim();
        return Ok(DifferentialBlock {
            source: (k, l),
            target: None,
            matrix: F2Matrix::zeros(0, n),
            rank: 0,
            kernel: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
            images: Vec::new(),
        });
    }
    let (tk, tl) = (k + r, l - shift);
    let tgt = page.entry(tk, tl).expect("target row inside window");
    let mut images = Vec::with_capacity(src.dim());
    let mut coords = Vec::with_capacity(src.dim());
    for rep in src.representatives() {
        let img = match &mats[l] {
            Some(m) if src.ambient() > 0 && tgt.ambient() > 0 => m.mul_vec(rep),
            _ => F2Vector::zeros(tgt.ambient()),
        };
        let c = tgt.coordinates(&img).ok_or_else(|| {
            Error::InvalidDifferential(format!(
                "image of a class at ({k},{l}) is not a cycle at ({tk},{tl})"
            ))
        })?;
        images.push(img);
        coords.push(c);
    }
    let matrix = F2Matrix::from_columns(tgt.dim(), &coords);
    let rr = matrix.row_reduce();
    Ok(DifferentialBlock {
        source: (k, l),
        target: Some((tk, tl)),
        matrix,
        rank: rr.rank,
        kernel: rr.kernel_basis,
        images,
    })
}

/// `d_r ∘ d_r = 0` on every stored block.
pub fn d_squared_is_zero(diff: &DifferentialData) -> bool {
    diff.blocks.iter().flatten().all(|b| match b.target {
        None => true,
        Some((tk, tl)) => match diff.block(tk, tl) {
            Some(next) if next.target.is_some() => next.matrix.mul(&b.matrix).is_zero(),
            _ => true,
        },
    })
}

/// `E_{r+1} = ker d_r / im d_r`.
pub fn turn_page(page: &BigradedPage, diff: &DifferentialData) -> Result<BigradedPage> {
    let r = diff.page();
    if r != page.page_number {
        return Err(Error::InvalidDifferential(format!(
            "differential for page {r} applied to page {}",
            page.page_number
        )));
    }
    let nonzero = !diff.is_zero();
    let stored = page.columns.len();
    if nonzero && stored < r + page.base.generator_degree {
        return Err(Error::WindowTooNarrow(format!(
            "{stored} stored columns cannot carry a period past page {r}"
        )));
    }
    let mut columns = Vec::with_capacity(stored);
    for (k, column) in page.columns.iter().enumerate() {
        let mut new_col = Vec::with_capacity(column.len());
        for (l, entry) in column.iter().enumerate() {
            let block = &diff.blocks[k][l];
            let mut cycles = entry.boundaries().clone();
            for c in &block.kernel {
                cycles.insert(&entry.lift(c));
            }
            let mut boundaries = entry.boundaries().clone();
            if k >= r {
                if let Some(incoming) = diff.blocks[k - r].get(l + r - 1) {
                    for img in &incoming.images {
                        boundaries.insert(img);
                    }
                }
            }
            new_col.push(Subquotient::new(entry.ambient(), cycles, boundaries));
        }
        columns.push(new_col);
    }
    Ok(BigradedPage {
        page_number: r + 1,
        base: page.base,
        fiber: page.fiber.clone(),
        fiber_top: page.fiber_top,
        window: page.window,
        columns,
        last_nonzero_page: if nonzero { Some(r) } else { page.last_nonzero_page },
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::milnor::{milnor_algebra, Flavor, MilnorParams};
    use crate::spectral::{build_e2, BaseRing, ColumnMode, Group, Window};

    fn real(r: u32, s: u32) -> Arc<GradedAlgebra> {
        Arc::new(milnor_algebra(&MilnorParams::new(Flavor::Real, r, s).unwrap()))
    }

    #[test]
    fn witness_for_case_i() {
        let f = real(5, 3);
        let spec = DifferentialSpec::from_case("i", 2).unwrap();
        let w = check_derivation_well_defined(&f, &spec).unwrap().unwrap();
        assert_eq!(w.relation_index, 1);
        assert_eq!(f.format_element(&w.image), "b^4 + a^2b^2");
        let spec = DifferentialSpec::from_case("ii", 2).unwrap();
        let w = check_derivation_well_defined(&f, &spec).unwrap().unwrap();
        assert_eq!(f.format_element(&w.image), "b^4 + a^2b^2");
        let spec = DifferentialSpec::from_case("iii", 2).unwrap();
        assert!(check_derivation_well_defined(&f, &spec).unwrap().is_none());
    }

    #[test]
    fn even_s_kills_case_iii() {
        let f = real(5, 2);
        let spec = DifferentialSpec::from_case("iii", 2).unwrap();
        let w = check_derivation_well_defined(&f, &spec).unwrap().unwrap();
        assert_eq!(w.relation_index, 0);
        assert_eq!(f.format_element(&w.image), "a^2");
    }

    #[test]
    fn leibniz_on_products() {
        let f = real(5, 3);
        let ab = f.presentation().monomial(&[("a", 1), ("b", 1)]).unwrap();
        let d = derivation_image(&[true, true], &ab);
        assert_eq!(d, f.presentation().parse_polynomial("a + b").unwrap());
        let a2b = f.presentation().monomial(&[("a", 2), ("b", 1)]).unwrap();
        assert_eq!(
            f.presentation().format_polynomial(&derivation_image(&[true, true], &a2b)),
            "a^2"
        );
    }

    #[test]
    fn rank_rows_and_page_three() {
        let f = real(5, 3);
        let window = Window { k_max: 12, l_max: 7 };
        let e2 = build_e2(BaseRing::new(Group::Z2), f, window, ColumnMode::Periodic).unwrap();
        let spec = DifferentialSpec::from_case("iii", 2).unwrap();
        let d = apply_differential(&e2, &spec).unwrap();
        assert!(d_squared_is_zero(&d));
        let rows = d.rank_table(0);
        assert_eq!((rows[2].kernel, rows[2].image), (2, 1));
        assert_eq!((rows[4].kernel, rows[4].image), (2, 2));
        let e3 = turn_page(&e2, &d).unwrap();
        for k in 2..=12 {
            for l in 0..=7 {
                assert_eq!(e3.dim(k, l), 0, "E3^({k},{l})");
            }
        }
        assert_eq!(e3.tot_dims()[..8], [1, 2, 3, 4, 4, 3, 2, 1]);
    }
}
