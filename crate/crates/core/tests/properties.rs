use std::sync::Arc;

use proptest::prelude::*;

use milnor_borel::algebra::{
    monomials_with_degrees, Element, GeneratorSpec, GradedAlgebra, GradedPresentation, Monomial,
    Polynomial,
};
use milnor_borel::f2core::{binom_mod2, F2Matrix, F2Vector};
use milnor_borel::milnor::{milnor_algebra, milnor_presentation, Flavor, MilnorParams};
use milnor_borel::spectral::{
    run_borel_ss_with, BaseRing, ColumnMode, DifferentialSpec, Group, RunOptions,
};

fn matrix() -> impl Strategy<Value = F2Matrix> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0u8..2, c), r).prop_map(move |rows| {
            F2Matrix::from_rows(c, rows.into_iter().map(F2Vector::from_bits).collect())
        })
    })
}

fn odd_pair() -> impl Strategy<Value = (u32, u32)> {
    (1u32..=4).prop_flat_map(|a| (Just(2 * a + 1), (0..=a).prop_map(|b| 2 * b + 1)))
}

fn any_pair(max_r: u32) -> impl Strategy<Value = (u32, u32)> {
    (1u32..=max_r).prop_flat_map(|r| (Just(r), 1..=r))
}

fn pascal_mod2(n: usize) -> Vec<Vec<bool>> {
    let mut rows = vec![vec![true]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![true; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] ^ prev[j];
        }
        rows.push(row);
    }
    rows
}

/// Dimension of the degree-`d` component, by spanning every multiple of
/// every relation.
fn brute_force_dimension(p: &GradedPresentation, d: usize) -> usize {
    let degrees = p.degrees();
    let basis = monomials_with_degrees(&degrees, d);
    let index = |m: &Monomial| basis.iter().position(|b| b == m).unwrap();
    let mut span = F2Matrix::zeros(0, basis.len());
    for rel in p.relations() {
        let e = rel.homogeneous_degree(&degrees).unwrap();
        if e > d {
            continue;
        }
        for m in monomials_with_degrees(&degrees, d - e) {
            let prod = rel.mul_monomial(&m);
            span.push_row(F2Vector::from_ones(basis.len(), prod.terms().map(index)));
        }
    }
    basis.len() - span.rank()
}

fn random_element(alg: &GradedAlgebra, d: usize, bits: &[u8]) -> Element {
    let n = alg.dimension(d).unwrap();
    Element {
        degree: d,
        coords: F2Vector::from_bits(bits.iter().copied().cycle().take(n)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in matrix()) {
        let e = m.echelon();
        let kernel = e.kernel_basis();
        prop_assert_eq!(e.rank() + kernel.len(), m.col_count());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn transpose_preserves_rank(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn lucas_matches_pascal(n in 0u64..200, k in 0u64..200) {
        let table = pascal_mod2(200);
        let expected = k <= n && table[n as usize][k as usize];
        prop_assert_eq!(binom_mod2(n, k), expected);
        if k <= n {
            prop_assert_eq!(binom_mod2(n, k), binom_mod2(n, n - k));
        }
    }

    #[test]
    fn betti_tables_follow_closed_form((r, s) in any_pair(9), complex in any::<bool>()) {
        let flavor = if complex { Flavor::Complex } else { Flavor::Real };
        let p = MilnorParams::new(flavor, r, s).unwrap();
        let alg = milnor_algebra(&p);
        let step = flavor.generator_degree();
        let dim = p.manifold_dimension();
        let table = alg.poincare_table(dim + step).unwrap();
        for (q, &got) in table.iter().enumerate() {
            let expected = if q % step == 0 {
                let q = q / step;
                (0..=q).filter(|&i| i <= s as usize && q - i < r as usize).count()
            } else {
                0
            };
            prop_assert_eq!(got, expected);
        }
        let core = &table[..=dim];
        prop_assert_eq!(core.iter().sum::<usize>(), (r * (s + 1)) as usize);
        prop_assert!(core.iter().eq(core.iter().rev()));
    }

    #[test]
    fn quotient_matches_brute_force((r, s) in any_pair(6), d in 0usize..10) {
        let p = milnor_presentation(&MilnorParams::new(Flavor::Real, r, s).unwrap());
        let alg = GradedAlgebra::new(p.clone(), 12);
        prop_assert_eq!(alg.dimension(d).unwrap(), brute_force_dimension(&p, d));
    }

    #[test]
    fn random_presentations_match_brute_force(
        degs in prop::collection::vec(1usize..3, 1..4),
        rels in prop::collection::vec((0usize..6, prop::collection::vec(0u8..2, 12)), 0..4),
    ) {
        let gens: Vec<GeneratorSpec> = degs
            .iter()
            .enumerate()
            .map(|(i, &d)| GeneratorSpec::new(["x", "y", "z"][i], d))
            .collect();
        let relations: Vec<Polynomial> = rels
            .iter()
            .filter_map(|(d, bits)| {
                let ms = monomials_with_degrees(&degs, d + 1);
                let f = Polynomial::from_terms(
                    ms.into_iter().zip(bits.iter().cycle()).filter(|(_, &b)| b == 1).map(|(m, _)| m),
                );
                (!f.is_zero()).then_some(f)
            })
            .collect();
        let p = GradedPresentation::new(gens, relations, None).unwrap();
        let alg = GradedAlgebra::new(p.clone(), 8);
        for d in 0..=8 {
            prop_assert_eq!(alg.dimension(d).unwrap(), brute_force_dimension(&p, d));
        }
    }

    #[test]
    fn generator_order_is_irrelevant((r, s) in any_pair(7)) {
        let p = milnor_presentation(&MilnorParams::new(Flavor::Real, r, s).unwrap());
        let swapped_gens: Vec<GeneratorSpec> = p.generators().iter().rev().cloned().collect();
        let swapped_rels: Vec<Polynomial> = p
            .relations()
            .iter()
            .map(|f| {
                Polynomial::from_terms(f.terms().map(|m| {
                    Monomial(m.exponents().iter().rev().copied().collect())
                }))
            })
            .collect();
        let q = GradedPresentation::new(swapped_gens, swapped_rels, None).unwrap();
        let n = (r + s) as usize + 2;
        prop_assert_eq!(
            GradedAlgebra::new(p, n).poincare_table(n).unwrap(),
            GradedAlgebra::new(q, n).poincare_table(n).unwrap()
        );
    }

    #[test]
    fn ring_axioms(
        (r, s) in any_pair(7),
        d1 in 0usize..5, d2 in 0usize..5, d3 in 0usize..5,
        b1 in prop::collection::vec(0u8..2, 1..8),
        b2 in prop::collection::vec(0u8..2, 1..8),
        b3 in prop::collection::vec(0u8..2, 1..8),
    ) {
        let alg = GradedAlgebra::new(milnor_presentation(&MilnorParams::new(Flavor::Real, r, s).unwrap()), 16);
        let (u, v, w) = (random_element(&alg, d1, &b1), random_element(&alg, d2, &b2), random_element(&alg, d3, &b3));
        prop_assert_eq!(alg.multiply(&u, &v).unwrap(), alg.multiply(&v, &u).unwrap());
        let left = alg.multiply(&alg.multiply(&u, &v).unwrap(), &w).unwrap();
        let right = alg.multiply(&u, &alg.multiply(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let v2 = random_element(&alg, d1, &b2);
        let distributed = alg.multiply(&u.add(&v2), &w).unwrap();
        prop_assert_eq!(distributed, alg.multiply(&u, &w).unwrap().add(&alg.multiply(&v2, &w).unwrap()));
    }

    #[test]
    fn reduction_is_idempotent((r, s) in any_pair(7), d in 0usize..8, bits in prop::collection::vec(0u8..2, 1..16)) {
        let p = milnor_presentation(&MilnorParams::new(Flavor::Real, r, s).unwrap());
        let alg = GradedAlgebra::new(p.clone(), 10);
        let ms = monomials_with_degrees(&p.degrees(), d);
        let f = Polynomial::from_terms(
            ms.into_iter().zip(bits.iter().cycle()).filter(|(_, &b)| b == 1).map(|(m, _)| m),
        );
        let once = alg.reduce_in_degree(&f, d).unwrap();
        let twice = alg.reduce_in_degree(&alg.to_polynomial(&once), d).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn presentation_text_round_trips((r, s) in any_pair(9), complex in any::<bool>()) {
        let flavor = if complex { Flavor::Complex } else { Flavor::Real };
        let p = milnor_presentation(&MilnorParams::new(flavor, r, s).unwrap());
        let back = GradedPresentation::from_text(&p.to_text()).unwrap();
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn periodic_and_full_agree((r, s) in odd_pair(), case in 0usize..4, circle in any::<bool>()) {
        let group = if circle { Group::S1 } else { Group::Z2 };
        let params = MilnorParams::new(Flavor::Real, r, s).unwrap();
        let fiber = Arc::new(milnor_algebra(&params));
        let label = ["trivial", "i", "ii", "iii"][case];
        let spec = DifferentialSpec::from_case(label, 2).unwrap();
        let dim = params.manifold_dimension();
        let base = BaseRing::new(group);
        let run = |mode| {
            run_borel_ss_with(base, fiber.clone(), &spec, dim, RunOptions { mode, window: None })
        };
        match (run(ColumnMode::Periodic), run(ColumnMode::Full)) {
            (Ok(p), Ok(f)) => {
                prop_assert_eq!(&p.tot_dims, &f.tot_dims);
                prop_assert_eq!(p.admissible, f.admissible);
                prop_assert_eq!(p.failure_reason, f.failure_reason);
                prop_assert_eq!(p.volovikov, f.volovikov);
                for res in [&p, &f] {
                    prop_assert!(res.d_squared_zero);
                    prop_assert!(res.pages_monotone);
                }
                let w = p.e2.window();
                for k in 0..=w.k_max {
                    for l in 0..=w.l_max {
                        prop_assert_eq!(p.final_page.dim(k, l), f.final_page.dim(k, l));
                    }
                }
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.code(), b.code()),
            (a, b) => prop_assert!(false, "modes disagree: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn single_generator_cases_are_symmetric((r, s) in any_pair(9)) {
        let params = MilnorParams::new(Flavor::Real, r, s).unwrap();
        let fiber = Arc::new(milnor_algebra(&params));
        let dim = params.manifold_dimension();
        let go = |label| {
            let spec = DifferentialSpec::from_case(label, 2).unwrap();
            run_borel_ss_with(BaseRing::new(Group::Z2), fiber.clone(), &spec, dim, RunOptions::default()).unwrap()
        };
        let (i, ii) = (go("i"), go("ii"));
        prop_assert_eq!(i.admissible, ii.admissible);
        prop_assert_eq!(i.failure_reason, ii.failure_reason);
        prop_assert_eq!(i.witness.is_some(), ii.witness.is_some());
    }
}
