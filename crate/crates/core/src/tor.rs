//! `H_*(TL, N) = Tor^TL_*(1, N)`.
//!
//! Two routes: the reduced bar complex, which works for any left module
//! given by action matrices but must be truncated, and the Davis route for
//! odd strand counts, where every cup module is a retract of `TL` so the
//! Davis complex is a finite projective resolution of `1` and Tor is the
//! homology of its coinvariants.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::TemperleyLieb;
use crate::coeff::Coefficient;
use crate::complex::ChainComplex;
use crate::davis::{build_davis, coinvariant_orders, retraction_after_inclusion};
use crate::error::TorError;
use crate::innermost::{cup_basis, diagram_action_matrix, innermost_sets, InnermostSet};
use crate::lattice::{kernel_basis, subquotient, Lattice};
use crate::matrix::SparseMatrix;
use crate::smith::{universal_coefficients, ModulePresentation};

/// Default cap on the nonzero entries of one bar differential.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

/// A left `TL`-module, free of finite rank over the coefficient ring, given
/// by the action matrix of every basis diagram.
#[derive(Clone, Debug)]
pub struct LeftModuleData<T> {
    rank: usize,
    action: Vec<SparseMatrix<T>>,
}

impl<T: Coefficient> LeftModuleData<T> {
    /// `action[d]` is the matrix of the basis diagram with index `d`.
    pub fn new(alg: &TemperleyLieb<T>, rank: usize, action: Vec<SparseMatrix<T>>) -> Result<Self, TorError> {
        if action.len() != alg.dimension() || action.iter().any(|m| m.shape() != (rank, rank)) {
            return Err(TorError::ModuleShape {
                rank,
                actions: action.len(),
                basis: alg.dimension(),
            });
        }
        Ok(LeftModuleData { rank, action })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, diagram: usize) -> &SparseMatrix<T> {
        &self.action[diagram]
    }

    /// Checks `action(id) = 1` and `action(U_i)·action(D) = a^k action(U_i D)`
    /// for every generator and basis diagram; generators span the algebra,
    /// so this forces multiplicativity.
    pub fn is_module(&self, alg: &TemperleyLieb<T>) -> bool {
        let basis = alg.basis();
        let one = alg.ring().one();
        if self.action[basis.identity_index()] != SparseMatrix::identity(self.rank, &one) {
            return false;
        }
        (0..basis.generator_count()).into_par_iter().all(|g| {
            let u = basis.generator_index(g).expect("generator");
            (0..basis.len()).all(|d| {
                let (e, loops) = basis.product(u, d);
                let lhs = self.action[u].mul(&self.action[d]).expect("square");
                lhs == self.action[e].scale(&alg.ring().loop_weight(loops))
            })
        })
    }
}

/// The trivial module `1`: identity acts by 1, every other diagram by 0.
pub fn trivial_module<T: Coefficient>(alg: &TemperleyLieb<T>) -> LeftModuleData<T> {
    let one = alg.ring().one();
    let id = alg.basis().identity_index();
    let action = (0..alg.dimension())
        .map(|d| {
            if d == id {
                SparseMatrix::identity(1, &one)
            } else {
                SparseMatrix::zero(1, 1)
            }
        })
        .collect();
    LeftModuleData { rank: 1, action }
}

/// The cup module `⟨F⟩` with the left action on its diagram basis.
pub fn cup_module<T: Coefficient>(alg: &TemperleyLieb<T>, set: &InnermostSet) -> Result<LeftModuleData<T>, TorError> {
    let cup = cup_basis(alg.basis(), set)?;
    let action = (0..alg.dimension())
        .into_par_iter()
        .map(|d| diagram_action_matrix(alg, d, &cup))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LeftModuleData {
        rank: cup.len(),
        action,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TorMethod {
    Bar,
    Davis,
}

impl std::fmt::Display for TorMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TorMethod::Bar => "bar",
            TorMethod::Davis => "davis",
        })
    }
}

/// Homology in degrees `0..homology.len()`. Degrees above
/// `reliable_through` are only partially known (the top degree of a
/// truncated bar complex reports cycles, not homology).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorResult {
    pub homology: Vec<ModulePresentation>,
    pub method: TorMethod,
    pub reliable_through: Option<usize>,
    /// Degree asked for; larger than the top degree when the size budget
    /// stopped the bar complex early.
    pub requested_degree: usize,
}

impl TorResult {
    pub fn top_degree(&self) -> usize {
        self.homology.len() - 1
    }

    pub fn is_reliable(&self, degree: usize) -> bool {
        self.reliable_through.is_some_and(|r| degree <= r)
    }

    /// Reliable degrees only.
    pub fn reliable(&self) -> &[ModulePresentation] {
        match self.reliable_through {
            Some(r) => &self.homology[..=r],
            None => &[],
        }
    }

    pub fn budget_limited(&self) -> bool {
        self.top_degree() < self.requested_degree
    }

    /// Reduces integral results to `Z/m` coefficients.
    pub fn reduce_mod(mut self, modulus: u64) -> TorResult {
        self.homology = universal_coefficients(&self.homology, modulus);
        self
    }
}

/// Number of columns of the bar chain module `C_k = TL-hat^{⊗k} ⊗ N`.
pub fn bar_dimension(ideal_rank: usize, module_rank: usize, k: usize) -> u128 {
    (ideal_rank as u128).pow(k as u32) * module_rank as u128
}

/// Upper bound on the nonzero entries of the bar differential `d_k`,
/// counting at least one per column.
fn bar_entry_bound<T: Coefficient>(alg: &TemperleyLieb<T>, module: &LeftModuleData<T>, k: usize) -> u128 {
    let ideal = alg.basis().augmentation_ideal();
    let widest = ideal
        .iter()
        .flat_map(|&x| (0..module.rank).map(move |j| (x, j)))
        .map(|(x, j)| module.action[x].column(j).len())
        .max()
        .unwrap_or(0);
    bar_dimension(ideal.len(), module.rank, k) * (k as u128 - 1 + widest as u128).max(1)
}

/// Differential `d_k` of the reduced bar complex with coefficients in
/// `module`:
///
/// `d(x_1⊗…⊗x_k⊗n) = Σ_{t=1}^{k-1} (-1)^t x_1⊗…⊗x_t x_{t+1}⊗…⊗n + (-1)^k x_1⊗…⊗x_{k-1}⊗x_k n`.
///
/// Basis tensors are indexed in mixed radix, `((i_1 m + i_2) m + …) r + j`,
/// with `i_t` positions in the augmentation-ideal basis (size `m`) and `j`
/// a module basis index (size `r`). A product of two non-identity diagrams
/// is never the identity, so merges stay inside `TL-hat`.
pub fn bar_differential<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    module: &LeftModuleData<T>,
    k: usize,
) -> SparseMatrix<T> {
    assert!(k >= 1);
    let basis = alg.basis();
    let ring = alg.ring();
    let ideal = basis.augmentation_ideal();
    let mut position = vec![usize::MAX; basis.len()];
    for (p, &d) in ideal.iter().enumerate() {
        position[d] = p;
    }
    let m = ideal.len();
    let r = module.rank;
    let cols = m.pow(k as u32) * r;
    let rows = m.pow(k as u32 - 1) * r;

    let columns: Vec<Vec<(usize, T)>> = (0..cols)
        .into_par_iter()
        .map(|c| {
            let j = c % r;
            let mut rest = c / r;
            let mut factors = vec![0usize; k];
            for slot in factors.iter_mut().rev() {
                *slot = rest % m;
                rest /= m;
            }
            let encode = |fs: &mut dyn Iterator<Item = usize>, j: usize| fs.fold(0usize, |acc, f| acc * m + f) * r + j;

            let mut col = Vec::with_capacity(k);
            for t in 1..k {
                let (e, loops) = basis.product(ideal[factors[t - 1]], ideal[factors[t]]);
                let w = ring.signed_loop_weight(t % 2 == 1, loops);
                if w.is_zero() {
                    continue;
                }
                let merged = position[e];
                debug_assert_ne!(merged, usize::MAX, "product left the augmentation ideal");
                let mut fs = factors[..t - 1]
                    .iter()
                    .copied()
                    .chain(std::iter::once(merged))
                    .chain(factors[t + 1..].iter().copied());
                col.push((encode(&mut fs, j), w));
            }
            let act = module.action(ideal[factors[k - 1]]);
            let prefix = encode(&mut factors[..k - 1].iter().copied(), 0);
            for (i, v) in act.column(j) {
                let v = if k % 2 == 1 { -v.clone() } else { v.clone() };
                col.push((prefix + i, v));
            }
            col
        })
        .collect();
    SparseMatrix::from_columns(rows, columns)
}

/// The reduced bar complex in degrees `0..=top`, marked truncated.
pub fn bar_complex<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    module: &LeftModuleData<T>,
    top: usize,
) -> ChainComplex<T> {
    let m = alg.dimension() - 1;
    let ranks = (0..=top).map(|k| m.pow(k as u32) * module.rank).collect();
    let differentials = (1..=top).map(|k| bar_differential(alg, module, k)).collect();
    ChainComplex::new(ranks, differentials)
        .expect("bar differentials have the declared shapes")
        .mark_truncated()
}

/// Largest degree `≤ max_degree` whose differentials all fit the budget.
pub fn bar_feasible_degree<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    module: &LeftModuleData<T>,
    max_degree: usize,
    budget: u128,
) -> Result<usize, TorError> {
    let mut top = 0;
    for k in 1..=max_degree {
        let entries = bar_entry_bound(alg, module, k);
        if entries > budget {
            if k == 1 {
                return Err(TorError::Budget {
                    degree: k,
                    entries,
                    budget,
                });
            }
            break;
        }
        top = k;
    }
    Ok(top)
}

/// Tor through the reduced bar complex up to `max_degree`; degrees below
/// the top one are exact. If the budget stops the complex early the
/// result says so through [`TorResult::budget_limited`].
pub fn bar_tor<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    module: &LeftModuleData<T>,
    max_degree: usize,
    budget: u128,
) -> Result<TorResult, TorError> {
    let top = bar_feasible_degree(alg, module, max_degree, budget)?;
    let complex = bar_complex(alg, module, top);
    let homology = complex.homology()?;
    Ok(TorResult {
        homology,
        method: TorMethod::Bar,
        reliable_through: top.checked_sub(1),
        requested_degree: max_degree,
    })
}

/// `1 ⊗_TL TL𝔇` in the coordinates of the Davis basis: the Davis
/// differentials, and for each basis element the order of its image in the
/// coinvariants (zero for a free summand).
#[derive(Clone, Debug)]
pub struct CoinvariantComplex<T> {
    pub complex: ChainComplex<T>,
    pub orders: Vec<Vec<T>>,
}

pub fn coinvariant_complex<T: Coefficient>(alg: &TemperleyLieb<T>) -> Result<CoinvariantComplex<T>, TorError> {
    let davis = build_davis(alg);
    let mut orders = Vec::new();
    for degree in 0..=davis.complex().top_degree() {
        let mut o = Vec::with_capacity(davis.complex().rank(degree));
        for block in davis.blocks(degree) {
            o.extend(coinvariant_orders(alg, &block.cup)?);
        }
        orders.push(o);
    }
    Ok(CoinvariantComplex {
        complex: davis.complex().clone(),
        orders,
    })
}

impl<T: Coefficient> CoinvariantComplex<T> {
    /// Homology of the complex of modules `⊕ R/order` with the induced
    /// maps. Coordinates with unit order are zero and are dropped; in each
    /// remaining degree `H = Z / B` with
    /// `Z = {x : d x ∈ relations}` and `B = im d + relations`.
    pub fn homology(&self, one: &T) -> Result<Vec<ModulePresentation>, TorError> {
        let keep: Vec<Vec<usize>> = self
            .orders
            .iter()
            .map(|o| (0..o.len()).filter(|&i| !o[i].is_unit()).collect())
            .collect();
        let reduced = self.complex.restrict(&keep)?;
        let relations: Vec<Vec<(usize, T)>> = keep
            .iter()
            .zip(&self.orders)
            .map(|(kept, o)| {
                kept.iter()
                    .enumerate()
                    .filter(|(_, &i)| !o[i].is_zero())
                    .map(|(p, &i)| (p, o[i].clone()))
                    .collect()
            })
            .collect();
        let top = reduced.top_degree();
        (0..=top)
            .map(|k| {
                let n = reduced.rank(k);
                let cycles = match reduced.differential(k) {
                    None => identity_columns(n, one),
                    Some(d) => {
                        let mut columns: Vec<Vec<(usize, T)>> = (0..d.cols()).map(|c| d.column(c).to_vec()).collect();
                        columns.extend(relations[k - 1].iter().map(|(p, g)| vec![(*p, g.clone())]));
                        let stacked = SparseMatrix::from_columns(d.rows(), columns);
                        kernel_basis(&stacked, one)
                            .into_iter()
                            .map(|v| v[..n].to_vec())
                            .collect()
                    }
                };
                let z = Lattice::span(&cycles, n, one);
                let mut boundaries: Vec<Vec<T>> = match reduced.differential(k + 1) {
                    Some(d) => d.transpose().to_dense(),
                    None => Vec::new(),
                };
                for (p, g) in &relations[k] {
                    let mut v = vec![T::zero(); n];
                    v[*p] = g.clone();
                    boundaries.push(v);
                }
                Ok(subquotient(&z, &boundaries)?)
            })
            .collect()
    }
}

fn identity_columns<T: Coefficient>(n: usize, one: &T) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { one.clone() } else { T::zero() }).collect())
        .collect()
}

/// Checks `retraction ∘ inclusion = id` for every non-empty innermost set;
/// returns the first failing set.
pub fn check_retractions<T: Coefficient>(alg: &TemperleyLieb<T>) -> Result<(), TorError> {
    let sets: Vec<InnermostSet> = innermost_sets(alg.strands())
        .into_iter()
        .filter(|f| !f.is_empty() && !f.is_unique_maximal())
        .collect();
    let one = alg.ring().one();
    sets.par_iter().try_for_each(|f| {
        let composite = retraction_after_inclusion(alg, f)?;
        if composite == SparseMatrix::identity(composite.rows(), &one) {
            Ok(())
        } else {
            Err(TorError::RetractionFailed(f.to_string()))
        }
    })
}

/// Tor with trivial coefficients from the Davis resolution. Odd strand
/// counts only; the retraction hypothesis is re-checked first.
pub fn davis_tor<T: Coefficient>(alg: &TemperleyLieb<T>) -> Result<TorResult, TorError> {
    let s = alg.strands();
    if s.is_multiple_of(2) {
        return Err(TorError::EvenStrands(s));
    }
    check_retractions(alg)?;
    let homology = coinvariant_complex(alg)?.homology(&alg.ring().one())?;
    let top = homology.len() - 1;
    Ok(TorResult {
        homology,
        method: TorMethod::Davis,
        reliable_through: Some(top),
        requested_degree: top,
    })
}

/// Entries `⊕_{|F| = α} H_β(TL, ⟨F⟩)` for `β ≤ max_beta`, computed with the
/// bar complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct He1Page {
    /// `entries[α][β]`
    pub entries: Vec<Vec<ModulePresentation>>,
    /// Largest `β` computed exactly in every column.
    pub reliable_through: Option<usize>,
}

impl He1Page {
    /// Nonzero reliable entries as `(α, β)`.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let Some(r) = self.reliable_through else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (alpha, column) in self.entries.iter().enumerate() {
            for (beta, m) in column.iter().enumerate().take(r + 1) {
                if !m.is_zero() {
                    out.push((alpha, beta));
                }
            }
        }
        out
    }

    pub fn reduce_mod(mut self, modulus: u64) -> He1Page {
        for column in &mut self.entries {
            *column = universal_coefficients(column, modulus);
        }
        self
    }
}

pub fn he1_page<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    max_beta: usize,
    budget: u128,
) -> Result<He1Page, TorError> {
    let sets = innermost_sets(alg.strands());
    let columns = sets.iter().map(InnermostSet::len).max().unwrap_or(0) + 1;
    let mut entries = vec![vec![ModulePresentation::zero(); max_beta + 1]; columns];
    let mut reliable = Some(max_beta);
    for f in &sets {
        let module = cup_module(alg, f)?;
        let tor = bar_tor(alg, &module, max_beta + 1, budget)?;
        reliable = reliable.min(tor.reliable_through);
        for (beta, slot) in entries[f.len()].iter_mut().enumerate() {
            if let Some(h) = tor.homology.get(beta) {
                *slot = slot.direct_sum(h);
            }
        }
    }
    Ok(He1Page {
        entries,
        reliable_through: reliable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Ring;
    use num_bigint::BigInt;

    fn tl(s: usize, a: i64) -> TemperleyLieb<BigInt> {
        TemperleyLieb::new(s, Ring::integers(a)).unwrap()
    }

    fn free(r: usize) -> ModulePresentation {
        ModulePresentation::free(r)
    }

    #[test]
    fn trivial_and_cup_modules_are_modules() {
        let alg = tl(4, 2);
        assert!(trivial_module(&alg).is_module(&alg));
        let m = InnermostSet::new(3, vec![0, 2]).unwrap();
        let cup = cup_module(&alg, &m).unwrap();
        assert_eq!(cup.rank(), 2);
        assert!(cup.is_module(&alg));
    }

    #[test]
    fn broken_action_is_detected() {
        let alg = tl(3, 2);
        let mut n = trivial_module(&alg);
        let u = alg.basis().generator_index(0).unwrap();
        n.action[u] = SparseMatrix::identity(1, &BigInt::from(1));
        assert!(!n.is_module(&alg));
    }

    #[test]
    fn two_strands_with_parameter_two() {
        let alg = tl(2, 2);
        let tor = bar_tor(&alg, &trivial_module(&alg), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            tor.reliable(),
            &[free(1), ModulePresentation::cyclic(2), ModulePresentation::zero(), ModulePresentation::cyclic(2)]
        );
        assert!(!tor.is_reliable(4));
    }

    #[test]
    fn two_strands_with_parameter_zero() {
        let alg = tl(2, 0);
        let tor = bar_tor(&alg, &trivial_module(&alg), 4, DEFAULT_BUDGET).unwrap();
        assert!(tor.reliable().iter().all(|h| *h == free(1)));
    }

    #[test]
    fn bar_d_squared() {
        for s in 2..=4 {
            let alg = tl(s, 3);
            let c = bar_complex(&alg, &trivial_module(&alg), 3);
            assert!(c.verify_d_squared());
        }
        let alg = tl(3, 2);
        let m = cup_module(&alg, &InnermostSet::empty(2)).unwrap();
        assert!(bar_complex(&alg, &m, 3).verify_d_squared());
    }

    #[test]
    fn budget_truncates() {
        let alg = tl(3, 0);
        let n = trivial_module(&alg);
        // bounds 4, 16, 128 for d_1, d_2, d_3
        let tor = bar_tor(&alg, &n, 4, 40).unwrap();
        assert_eq!(tor.top_degree(), 2);
        assert!(tor.budget_limited());
        assert!(matches!(bar_tor(&alg, &n, 4, 3), Err(TorError::Budget { degree: 1, .. })));
    }

    #[test]
    fn davis_route_small() {
        let tor = davis_tor(&tl(3, 0)).unwrap();
        assert_eq!(tor.homology, vec![free(1), ModulePresentation::zero()]);
        let tor = davis_tor(&tl(1, 5)).unwrap();
        assert_eq!(tor.homology, vec![free(1)]);
        assert!(matches!(davis_tor(&tl(4, 0)), Err(TorError::EvenStrands(4))));
    }

    #[test]
    fn he1_small() {
        let page = he1_page(&tl(2, 2), 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(page.entries[1][0], ModulePresentation::cyclic(2));
        assert_eq!(page.entries[0][0], free(1));
        let page = he1_page(&tl(3, 0), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(page.support(), vec![(0, 0)]);
    }
}
