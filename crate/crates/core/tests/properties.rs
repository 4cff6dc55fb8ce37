mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tl_core::complex::ChainComplex;
use tl_core::davis::{
    adjacent_index, build_davis, coinvariants, retraction_from_algebra, AdjacentSide,
};
use tl_core::diagram::catalan;
use tl_core::innermost::{cup_basis, left_action_matrix, innermost_sets};
use tl_core::lattice::homology_via_kernel;
use tl_core::smith::{cokernel, homology_step, smith_normal_form};
use tl_core::tor::{bar_complex, bar_tor, cup_module, trivial_module, DEFAULT_BUDGET};
use tl_core::{
    enumerate, AlgebraElement, Coefficient, DiagramBasis, Fp, InnermostSet, ModulePresentation, PlanarDiagram,
    Ring, SparseMatrix, TemperleyLieb,
};

use common::{brute_force_innermost, brute_force_matchings, minor_gcd, right_cups_of};

fn z(v: i64) -> BigInt {
    BigInt::from(v)
}

fn tl(s: usize, a: i64) -> TemperleyLieb<BigInt> {
    TemperleyLieb::new(s, Ring::integers(a)).unwrap()
}

fn dense(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| z(v)).collect()).collect()
}

fn matrix(rows: &[Vec<i64>], cols: usize) -> SparseMatrix<BigInt> {
    SparseMatrix::from_dense(&dense(rows), cols)
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r).prop_map(move |m| (r, c, m))
    })
}

fn random_element<T: Coefficient>(alg: &TemperleyLieb<T>, rng: &mut ChaCha8Rng, terms: usize) -> AlgebraElement<T> {
    let mut x = AlgebraElement::zero(alg.strands());
    for _ in 0..terms {
        let d = rng.gen_range(0..alg.dimension());
        x.add_term(d, alg.ring().int(rng.gen_range(-3..=3)));
    }
    x
}

// enumeration and diagram combinatorics

#[test]
fn enumeration_matches_brute_force_matchings() {
    for s in 1..=8 {
        let ours: BTreeSet<Vec<usize>> = enumerate(s).unwrap().iter().map(|d| d.partners().collect()).collect();
        let oracle = brute_force_matchings(s);
        assert_eq!(ours.len() as u64, catalan(s));
        assert_eq!(ours, oracle, "s = {s}");
    }
}

#[test]
fn enumeration_is_sorted_by_partner_sequence() {
    for s in 1..=7 {
        let all = enumerate(s).unwrap();
        let seqs: Vec<Vec<usize>> = all.iter().map(|d| d.partners().collect()).collect();
        assert!(seqs.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn defining_relations_hold_diagrammatically() {
    for s in 2..=8 {
        let g = s - 1;
        let u = |i: usize| PlanarDiagram::generator(s, i).unwrap();
        for i in 0..g {
            let sq = u(i).multiply(&u(i)).unwrap();
            assert_eq!((sq.diagram, sq.loop_count), (u(i), 1));
            for j in 0..g {
                if i.abs_diff(j) >= 2 {
                    let ij = u(i).multiply(&u(j)).unwrap();
                    let ji = u(j).multiply(&u(i)).unwrap();
                    assert_eq!(ij, ji);
                    assert_eq!(ij.loop_count, 0);
                } else if i.abs_diff(j) == 1 {
                    let (d, loops) = PlanarDiagram::from_word(s, &[i, j, i]).unwrap();
                    assert_eq!((d, loops), (u(i), 0));
                }
            }
        }
    }
}

#[test]
fn right_cups_are_innermost_and_match_partner_reading() {
    for s in 1..=8 {
        for d in enumerate(s).unwrap() {
            let cups = d.right_cups();
            assert!(cups.windows(2).all(|w| w[1] - w[0] >= 2));
            let partners: Vec<usize> = d.partners().collect();
            assert_eq!(cups, right_cups_of(&partners));
        }
    }
}

#[test]
fn left_multiplication_preserves_right_cups() {
    for s in 1..=5 {
        let basis = DiagramBasis::new(s).unwrap();
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let (ab, _) = basis.product(a, b);
                let f_b: BTreeSet<usize> = basis.diagram(b).right_cups().into_iter().collect();
                let f_ab: BTreeSet<usize> = basis.diagram(ab).right_cups().into_iter().collect();
                assert!(f_b.is_subset(&f_ab));
            }
        }
    }
}

#[test]
fn products_of_nonidentity_diagrams_are_not_the_identity() {
    for s in 1..=5 {
        let basis = DiagramBasis::new(s).unwrap();
        let ideal = basis.augmentation_ideal();
        for &a in &ideal {
            for &b in &ideal {
                let (ab, loops) = basis.product(a, b);
                if ab == basis.identity_index() {
                    assert!(loops >= 1);
                }
                assert_ne!(ab, basis.identity_index());
            }
        }
    }
}

#[test]
fn associativity_with_loop_counts() {
    for s in 1..=6 {
        let all = enumerate(s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
        for _ in 0..1000 {
            let [x, y, w] = [0; 3].map(|_| &all[rng.gen_range(0..all.len())]);
            let xy = x.multiply(y).unwrap();
            let left = xy.diagram.multiply(w).unwrap();
            let yw = y.multiply(w).unwrap();
            let right = x.multiply(&yw.diagram).unwrap();
            assert_eq!(left.diagram, right.diagram);
            assert_eq!(left.loop_count + xy.loop_count, right.loop_count + yw.loop_count);
        }
    }
}

// innermost sets and cup modules

#[test]
fn innermost_sets_match_subset_filter() {
    for s in 1..=9 {
        let ours: Vec<Vec<usize>> = innermost_sets(s).iter().map(|f| f.members().to_vec()).collect();
        assert_eq!(ours, brute_force_innermost(s), "s = {s}");
    }
    let counts: Vec<usize> = (2..=6).map(|s| innermost_sets(s).len()).collect();
    assert_eq!(counts, vec![2, 3, 5, 8, 13]);
}

#[test]
fn cup_basis_sizes_match_brute_force_and_shrink() {
    for s in 1..=6 {
        let basis = DiagramBasis::new(s).unwrap();
        let oracle = brute_force_matchings(s);
        for f in innermost_sets(s) {
            let cup = cup_basis(&basis, &f).unwrap();
            let expected = oracle
                .iter()
                .filter(|p| {
                    let cups = right_cups_of(p);
                    f.members().iter().all(|m| cups.contains(m))
                })
                .count();
            assert_eq!(cup.len(), expected);
            for g in innermost_sets(s) {
                if f.members().iter().all(|m| g.contains(*m)) {
                    assert!(cup_basis(&basis, &g).unwrap().len() <= cup.len());
                }
            }
        }
    }
}

#[test]
fn cup_modules_are_closed_under_left_multiplication() {
    for s in 1..=5 {
        let basis = DiagramBasis::new(s).unwrap();
        for f in innermost_sets(s) {
            let cup = cup_basis(&basis, &f).unwrap();
            for d in 0..basis.len() {
                for &c in cup.diagrams() {
                    let (e, _) = basis.product(d, c);
                    assert!(f.is_subset_of(&basis.diagram(e).right_cups()));
                }
            }
        }
    }
}

#[test]
fn davis_ranks_from_brute_force_cup_counts() {
    for s in 1..=7 {
        let oracle = brute_force_matchings(s);
        let mut ranks = BTreeMap::new();
        for f in brute_force_innermost(s) {
            let count = oracle
                .iter()
                .filter(|p| {
                    let cups = right_cups_of(p);
                    f.iter().all(|m| cups.contains(m))
                })
                .count();
            *ranks.entry(f.len()).or_insert(0) += count;
        }
        let expected: Vec<usize> = ranks.into_values().collect();
        assert_eq!(build_davis(&tl(s, 0)).complex().ranks(), expected.as_slice());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn left_action_respects_products(s in 1usize..=5, a in -2i64..=3, seed in any::<u64>()) {
        let alg = tl(s, a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&alg, &mut rng, 3);
        let y = random_element(&alg, &mut rng, 3);
        let xy = alg.multiply(&x, &y).unwrap();
        for f in innermost_sets(s) {
            let cup = cup_basis(alg.basis(), &f).unwrap();
            let mx = left_action_matrix(&alg, &x, &cup).unwrap();
            let my = left_action_matrix(&alg, &y, &cup).unwrap();
            prop_assert_eq!(left_action_matrix(&alg, &xy, &cup).unwrap(), mx.mul(&my).unwrap());
        }
    }

    #[test]
    fn augmentation_is_a_ring_map(s in 1usize..=5, a in -2i64..=3, seed in any::<u64>()) {
        let alg = tl(s, a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&alg, &mut rng, 4);
        let y = random_element(&alg, &mut rng, 4);
        prop_assert_eq!(alg.augment(&x.add(&y).unwrap()), alg.augment(&x) + alg.augment(&y));
        prop_assert_eq!(alg.augment(&alg.multiply(&x, &y).unwrap()), alg.augment(&x) * alg.augment(&y));
        prop_assert_eq!(alg.augment(&alg.identity()), z(1));
    }

    #[test]
    fn element_multiplication_is_associative(s in 1usize..=5, a in -2i64..=3, seed in any::<u64>()) {
        let alg = tl(s, a);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [x, y, w] = [0; 3].map(|_| random_element(&alg, &mut rng, 3));
        let left = alg.multiply(&alg.multiply(&x, &y).unwrap(), &w).unwrap();
        let right = alg.multiply(&x, &alg.multiply(&y, &w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

// Smith normal form

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_factors_match_minor_gcds((r, c, m) in small_matrix()) {
        let snf = smith_normal_form(&matrix(&m, c));
        let factors = &snf.invariant_factors;
        for w in factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "chain {:?}", factors);
        }
        let d = dense(&m);
        for k in 1..=3.min(r).min(c) {
            let expected = minor_gcd(&d, k);
            let product: BigInt = if k <= factors.len() {
                factors[..k].iter().product()
            } else {
                z(0)
            };
            prop_assert_eq!(product, expected, "k = {}", k);
        }
    }

    #[test]
    fn rational_rank_equals_integer_factor_count((_r, c, m) in small_matrix()) {
        let integral = smith_normal_form(&matrix(&m, c));
        let q: Vec<Vec<BigRational>> = m
            .iter()
            .map(|row| row.iter().map(|&v| BigRational::from_integer(z(v))).collect())
            .collect();
        let rational = smith_normal_form(&SparseMatrix::from_dense(&q, c));
        prop_assert_eq!(rational.rank(), integral.rank());
    }

    #[test]
    fn homology_step_matches_kernel_route((_r, c, m) in small_matrix(), k in 1usize..=4) {
        // d_in = m (r x c); d_out built from a kernel of m's transpose so
        // that d_out · d_in = 0
        let d_in = matrix(&m, c);
        let left_kernel = tl_core::lattice::kernel_basis(&d_in.transpose(), &z(1));
        let take = left_kernel.len().min(k);
        let rows: Vec<Vec<BigInt>> = left_kernel[..take].to_vec();
        let d_out = SparseMatrix::from_dense(&rows, d_in.rows());
        let fast = homology_step(&d_out, &d_in).unwrap();
        let slow = homology_via_kernel(&d_out, &d_in, &z(1)).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn cokernel_of_diagonal(entries in prop::collection::vec(0i64..=12, 1..6)) {
        let n = entries.len();
        let m = SparseMatrix::from_triplets(n, n, entries.iter().enumerate().map(|(i, &v)| (i, i, z(v)))).unwrap();
        let free = entries.iter().filter(|&&v| v == 0).count();
        let factors = entries.iter().filter(|&&v| v > 1).map(|&v| z(v)).collect();
        prop_assert_eq!(cokernel(&m), ModulePresentation::new(free, factors));
    }
}

#[test]
fn zero_maps_give_full_homology() {
    let h = homology_step(&SparseMatrix::<BigInt>::zero(2, 5), &SparseMatrix::zero(5, 3)).unwrap();
    assert_eq!(h, ModulePresentation::free(5));
}

// chain complexes

fn random_complex(rng: &mut ChaCha8Rng) -> ChainComplex<Fp> {
    let field = tl_core::PrimeField::new(5).unwrap();
    let n0 = rng.gen_range(1..5);
    let n1 = rng.gen_range(1..5);
    let n2 = rng.gen_range(1..5);
    let d2: Vec<Vec<Fp>> = (0..n1)
        .map(|_| (0..n2).map(|_| field.element(rng.gen_range(0..5))).collect())
        .collect();
    let d2 = SparseMatrix::from_dense(&d2, n2);
    // rows of d1 are left-kernel vectors of d2
    let kernel = tl_core::lattice::kernel_basis(&d2.transpose(), &field.element(1));
    let rows: Vec<Vec<Fp>> = (0..n0)
        .map(|i| kernel.get(i).cloned().unwrap_or_else(|| vec![Fp::zero(); n1]))
        .collect();
    let d1 = SparseMatrix::from_dense(&rows, n1);
    ChainComplex::new(vec![n0, n1, n2], vec![d1, d2]).unwrap()
}

#[test]
fn euler_characteristic_is_alternating_homology_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let c = random_complex(&mut rng);
        let h = c.homology().unwrap();
        let alt: i64 = h
            .iter()
            .enumerate()
            .map(|(k, m)| if k % 2 == 0 { m.free_rank as i64 } else { -(m.free_rank as i64) })
            .sum();
        assert_eq!(alt, c.euler_characteristic());
    }
}

#[test]
fn homology_is_invariant_under_basis_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in 2..=5 {
        let c = build_davis(&tl(s, 0)).complex().clone();
        let h = c.homology().unwrap();
        let perms: Vec<Vec<usize>> = c
            .ranks()
            .iter()
            .map(|&n| {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            })
            .collect();
        assert_eq!(c.restrict(&perms).unwrap().homology().unwrap(), h);
    }
}

// Davis complex, retractions, coinvariants

#[test]
fn iterated_retractions_split_the_inclusion_into_the_algebra() {
    for s in 2..=6 {
        for a in [0, 2, -1] {
            let alg = tl(s, a);
            for f in innermost_sets(s) {
                if f.is_unique_maximal() {
                    continue;
                }
                let (retraction, inclusion) = retraction_from_algebra(&alg, &f).unwrap();
                let n = cup_basis(alg.basis(), &f).unwrap().len();
                assert_eq!(retraction.mul(&inclusion).unwrap(), SparseMatrix::identity(n, &z(1)), "s={s} F={f}");
            }
        }
    }
}

#[test]
fn zero_in_a_set_forces_the_right_case() {
    for s in 3..=8 {
        let f = InnermostSet::new(s - 1, vec![0]).unwrap();
        if f.is_unique_maximal() {
            continue;
        }
        assert_eq!(adjacent_index(&f).unwrap().side, AdjacentSide::Right);
    }
}

/// Coinvariants with relations from every non-identity diagram.
fn coinvariants_by_all_diagrams<T: Coefficient>(alg: &TemperleyLieb<T>, f: &InnermostSet) -> ModulePresentation {
    let cup = cup_basis(alg.basis(), f).unwrap();
    let mut columns = Vec::new();
    for d in alg.basis().augmentation_ideal() {
        for &c in cup.diagrams() {
            let (e, loops) = alg.basis().product(d, c);
            columns.push(vec![(cup.position(e).unwrap(), alg.ring().loop_weight(loops))]);
        }
    }
    cokernel(&SparseMatrix::from_columns(cup.len(), columns))
}

#[test]
fn generator_relations_span_the_whole_ideal_action() {
    for s in 1..=6 {
        for a in [0, 2, -1, 3] {
            let alg = tl(s, a);
            for f in innermost_sets(s) {
                assert_eq!(coinvariants(&alg, &f).unwrap(), coinvariants_by_all_diagrams(&alg, &f));
            }
        }
        let alg = TemperleyLieb::new(s, Ring::prime_field(3, 2).unwrap()).unwrap();
        for f in innermost_sets(s) {
            assert_eq!(coinvariants(&alg, &f).unwrap(), coinvariants_by_all_diagrams(&alg, &f));
        }
    }
}

// bar complex

#[test]
fn bar_complexes_square_to_zero() {
    for s in 1..=4 {
        for a in [0, 2, -1] {
            let alg = tl(s, a);
            let top = if s == 4 { 3 } else { 4 };
            assert!(bar_complex(&alg, &trivial_module(&alg), top).verify_d_squared());
            for f in innermost_sets(s) {
                let m = cup_module(&alg, &f).unwrap();
                assert!(m.is_module(&alg));
                assert!(bar_complex(&alg, &m, 3).verify_d_squared(), "s={s} a={a} F={f}");
            }
        }
    }
}

#[test]
fn two_strand_bar_complex_by_hand() {
    // one non-identity diagram U_0 with U_0 U_0 = a U_0: every chain group
    // is R, d_k = Σ_{t=1}^{k-1} (-1)^t a, i.e. 0 for odd k and -a for even k
    for a in [0i64, 2, 3, -1, 6] {
        let alg = tl(2, a);
        let top = 5;
        let diffs = (1..=top)
            .map(|k| {
                let v = if k % 2 == 0 { -a } else { 0 };
                SparseMatrix::from_triplets(1, 1, [(0, 0, z(v))]).unwrap()
            })
            .collect();
        let by_hand = ChainComplex::new(vec![1; top + 1], diffs).unwrap().homology().unwrap();
        let tor = bar_tor(&alg, &trivial_module(&alg), top, DEFAULT_BUDGET).unwrap();
        assert_eq!(tor.reliable(), &by_hand[..top]);
    }
}

#[test]
fn regular_module_is_acyclic() {
    for s in 1..=4 {
        let alg = tl(s, 2);
        let regular = cup_module(&alg, &InnermostSet::empty(s - 1)).unwrap();
        let tor = bar_tor(&alg, &regular, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(tor.homology[0], ModulePresentation::free(1));
        assert!(tor.reliable()[1..].iter().all(ModulePresentation::is_zero));
    }
}

#[test]
fn prime_field_agrees_with_universal_coefficients() {
    for s in 2..=4 {
        for p in [2u64, 3, 5] {
            for a in 0..p as i64 {
                let over_fp = TemperleyLieb::new(s, Ring::prime_field(p, a).unwrap()).unwrap();
                let direct = bar_tor(&over_fp, &trivial_module(&over_fp), 3, DEFAULT_BUDGET).unwrap();
                let integral = tl(s, a);
                let reduced = bar_tor(&integral, &trivial_module(&integral), 3, DEFAULT_BUDGET)
                    .unwrap()
                    .reduce_mod(p);
                assert_eq!(direct.reliable(), reduced.reliable(), "s={s} p={p} a={a}");
            }
        }
    }
}

#[test]
fn rationals_see_only_free_ranks() {
    for s in 2..=4 {
        let q = TemperleyLieb::new(s, Ring::rationals(BigRational::from_integer(z(2)))).unwrap();
        let over_q = bar_tor(&q, &trivial_module(&q), 3, DEFAULT_BUDGET).unwrap();
        let over_z = bar_tor(&tl(s, 2), &trivial_module(&tl(s, 2)), 3, DEFAULT_BUDGET).unwrap();
        for (hq, hz) in over_q.reliable().iter().zip(over_z.reliable()) {
            assert_eq!(hq, &ModulePresentation::free(hz.free_rank));
        }
    }
}
