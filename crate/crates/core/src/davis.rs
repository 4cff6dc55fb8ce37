//! The cellular Davis complex of `TL_s(a)` and the module-level facts used
//! to compute homology from it: per-diagram splitting, retractions between
//! cup modules, and coinvariants.
//!
//! In degree `α` the complex has one basis element per marked diagram
//! `(A, F)` with `|F| = α` and `F ⊆ F(A)`. The differential erases one mark
//! at a time with sign `(-1)^{#{s' ∈ F : s' < s}}`.

use std::collections::HashMap;

use crate::algebra::TemperleyLieb;
use crate::coeff::Coefficient;
use crate::complex::ChainComplex;
use crate::error::{AlgebraError, InnermostError};
use crate::innermost::{
    cup_basis, inclusion_matrix, innermost_sets, right_word_matrix, unique_maximal_innermost,
    CupModuleBasis, InnermostSet,
};
use crate::matrix::SparseMatrix;
use crate::smith::{cokernel, ModulePresentation};

/// A diagram (by basis index) with a set of marked innermost right cups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedDiagram {
    pub diagram: usize,
    pub marks: InnermostSet,
}

/// One summand `⟨F⟩` of a Davis chain module, with its offset in the
/// degree's basis.
#[derive(Clone, Debug)]
pub struct DavisBlock {
    pub cup: CupModuleBasis,
    pub offset: usize,
}

#[derive(Clone, Debug)]
pub struct DavisComplex<T> {
    strands: usize,
    blocks: Vec<Vec<DavisBlock>>,
    cells: Vec<Vec<MarkedDiagram>>,
    complex: ChainComplex<T>,
}

impl<T: Coefficient> DavisComplex<T> {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn complex(&self) -> &ChainComplex<T> {
        &self.complex
    }

    /// Basis of each degree, grouped by `F` in innermost-set order.
    pub fn cells(&self) -> &[Vec<MarkedDiagram>] {
        &self.cells
    }

    pub fn blocks(&self, degree: usize) -> &[DavisBlock] {
        &self.blocks[degree]
    }

    pub fn position(&self, cell: &MarkedDiagram) -> Option<usize> {
        let block = self.blocks.get(cell.marks.len())?.iter().find(|b| b.cup.set() == &cell.marks)?;
        block.cup.position(cell.diagram).map(|p| block.offset + p)
    }
}

/// `(-1)^γ` where `γ` counts members of `F` below `s`.
pub fn sign_gamma(set: &InnermostSet, s: usize) -> Result<i8, InnermostError> {
    let gamma = set.rank_of(s)?;
    Ok(if gamma % 2 == 0 { 1 } else { -1 })
}

pub fn build_davis<T: Coefficient>(alg: &TemperleyLieb<T>) -> DavisComplex<T> {
    let basis = alg.basis();
    let one = alg.ring().one();
    let sets = innermost_sets(alg.strands());
    let top = sets.iter().map(InnermostSet::len).max().unwrap_or(0);

    let mut blocks: Vec<Vec<DavisBlock>> = vec![Vec::new(); top + 1];
    let mut cells: Vec<Vec<MarkedDiagram>> = vec![Vec::new(); top + 1];
    for f in &sets {
        let cup = cup_basis(basis, f).expect("set built for this strand count");
        let degree = f.len();
        let offset = cells[degree].len();
        cells[degree].extend(cup.diagrams().iter().map(|&d| MarkedDiagram {
            diagram: d,
            marks: f.clone(),
        }));
        blocks[degree].push(DavisBlock { cup, offset });
    }

    let lookup: Vec<HashMap<&InnermostSet, &DavisBlock>> = blocks
        .iter()
        .map(|bs| bs.iter().map(|b| (b.cup.set(), b)).collect())
        .collect();

    let differentials = (1..=top)
        .map(|alpha| {
            let columns = cells[alpha]
                .iter()
                .map(|cell| {
                    cell.marks
                        .members()
                        .iter()
                        .map(|&s| {
                            let face = cell.marks.without(s).expect("member");
                            let block = lookup[alpha - 1][&face];
                            let row = block.offset
                                + block.cup.position(cell.diagram).expect("fewer marks, larger module");
                            let sign = sign_gamma(&cell.marks, s).expect("member");
                            (row, if sign > 0 { one.clone() } else { -one.clone() })
                        })
                        .collect()
                })
                .collect();
            SparseMatrix::from_columns(cells[alpha - 1].len(), columns)
        })
        .collect();

    let ranks = cells.iter().map(Vec::len).collect();
    let labels = cells
        .iter()
        .map(|cs| {
            cs.iter()
                .map(|c| format!("{}|F={}", basis.diagram(c.diagram), c.marks))
                .collect()
        })
        .collect();
    let complex = ChainComplex::new(ranks, differentials)
        .and_then(|c| c.with_labels(labels))
        .expect("shapes follow from the cell lists");
    DavisComplex {
        strands: alg.strands(),
        blocks,
        cells,
        complex,
    }
}

/// The summand spanned by marked copies `(A, F)` of one diagram `A`.
pub fn subcomplex_of_diagram<T: Coefficient>(dc: &DavisComplex<T>, diagram: usize) -> ChainComplex<T> {
    let selection: Vec<Vec<usize>> = dc
        .cells
        .iter()
        .map(|cs| {
            cs.iter()
                .enumerate()
                .filter(|(_, c)| c.diagram == diagram)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    dc.complex
        .restrict(&selection)
        .expect("selection is closed under the differential")
}

/// Which side of the removed mark the free boundary point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacentSide {
    /// `i - 1 ∉ F` and the removed mark is `i + 1`.
    Left,
    /// `i ∉ F` and the removed mark is `i - 2`.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjacentIndex {
    /// Right boundary point next to the removed mark.
    pub index: usize,
    /// The mark removed, `s`.
    pub removed: usize,
    pub side: AdjacentSide,
}

impl AdjacentIndex {
    /// Word `w` of the retraction `c ↦ c·w` from `⟨F - {s}⟩` to `⟨F⟩`.
    pub fn retraction_word(&self) -> [usize; 2] {
        match self.side {
            AdjacentSide::Left => [self.index, self.index + 1],
            AdjacentSide::Right => [self.index - 1, self.index - 2],
        }
    }
}

/// Finds a right boundary point next to a marked cup but not on one: the
/// point left of the smallest mark when that mark is not `0`, otherwise the
/// first point not covered by any marked cup.
pub fn adjacent_index(set: &InnermostSet) -> Result<AdjacentIndex, InnermostError> {
    let &z = set.members().first().ok_or(InnermostError::Empty)?;
    if set.is_unique_maximal() {
        return Err(InnermostError::Maximal);
    }
    if z != 0 {
        return Ok(AdjacentIndex {
            index: z - 1,
            removed: z,
            side: AdjacentSide::Left,
        });
    }
    let covered = |p: usize| set.contains(p) || (p > 0 && set.contains(p - 1));
    let i = (0..=set.generators())
        .find(|&p| !covered(p))
        .expect("a non-maximal set leaves a boundary point uncovered");
    debug_assert!(i >= 2 && set.contains(i - 2));
    Ok(AdjacentIndex {
        index: i,
        removed: i - 2,
        side: AdjacentSide::Right,
    })
}

/// The retraction `⟨F - {s}⟩ → ⟨F⟩`, `c ↦ c·w`, for the adjacent index of
/// `F`. Rows index `cup_basis(F)`, columns `cup_basis(F - {s})`.
pub fn retraction_matrix<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    set: &InnermostSet,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let adj = adjacent_index(set)?;
    let smaller = set.without(adj.removed)?;
    let target = cup_basis(alg.basis(), set)?;
    let source = cup_basis(alg.basis(), &smaller)?;
    right_word_matrix(alg, &adj.retraction_word(), &source, &target)
}

/// `retraction ∘ inclusion` on `⟨F⟩` for the adjacent-index step.
pub fn retraction_after_inclusion<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    set: &InnermostSet,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let adj = adjacent_index(set)?;
    let smaller = set.without(adj.removed)?;
    let sub = cup_basis(alg.basis(), set)?;
    let sup = cup_basis(alg.basis(), &smaller)?;
    let incl = inclusion_matrix(&sub, &sup, &alg.ring().one())?;
    let retr = right_word_matrix(alg, &adj.retraction_word(), &sup, &sub)?;
    Ok(retr.mul(&incl).expect("shapes agree"))
}

/// A retraction `TL → ⟨F⟩` assembled from adjacent-index steps down to the
/// empty set, together with the inclusion `⟨F⟩ ↪ TL`.
pub fn retraction_from_algebra<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    set: &InnermostSet,
) -> Result<(SparseMatrix<T>, SparseMatrix<T>), AlgebraError> {
    let one = alg.ring().one();
    let target = cup_basis(alg.basis(), set)?;
    let full = cup_basis(alg.basis(), &InnermostSet::empty(set.generators()))?;
    let mut retraction = SparseMatrix::identity(target.len(), &one);
    let mut current = set.clone();
    while !current.is_empty() {
        let step = retraction_matrix(alg, &current)?;
        retraction = retraction.mul(&step).expect("chained cup bases");
        current = current.without(adjacent_index(&current)?.removed)?;
    }
    let inclusion = inclusion_matrix(&target, &full, &one)?;
    Ok((retraction, inclusion))
}

/// For even `s`, the composite `⟨M⟩ ↪ ⟨M - {0}⟩ → ⟨M⟩` with the second map
/// `c ↦ c·U_0`. It equals multiplication by the parameter.
pub fn maximal_set_composite<T: Coefficient>(
    alg: &TemperleyLieb<T>,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let m = unique_maximal_innermost(alg.strands())?;
    let m0 = m.without(0)?;
    let cup_m = cup_basis(alg.basis(), &m)?;
    let cup_m0 = cup_basis(alg.basis(), &m0)?;
    let incl = inclusion_matrix(&cup_m, &cup_m0, &alg.ring().one())?;
    let times_u0 = right_word_matrix(alg, &[0], &cup_m0, &cup_m)?;
    Ok(times_u0.mul(&incl).expect("shapes agree"))
}

/// Relations spanning `TL-hat · ⟨F⟩` inside `⟨F⟩`, one column per distinct
/// `(basis element, loop count)` pair of a product `U_i · c`.
///
/// The generators suffice: every non-identity diagram is `U_i · D` for some
/// generator and diagram, so `TL-hat · N = Σ_i U_i · N` for a left module
/// `N`. Each relation is a single basis element times a loop weight.
pub fn coinvariant_relations<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    cup: &CupModuleBasis,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let basis = alg.basis();
    let mut seen = std::collections::BTreeSet::new();
    for &c in cup.diagrams() {
        for g in 0..basis.generator_count() {
            let u = basis.generator_index(g).expect("generator");
            let (e, loops) = basis.product(u, c);
            let row = cup
                .position(e)
                .ok_or_else(|| AlgebraError::LeftSpan(cup.set().to_string()))?;
            seen.insert((row, loops));
        }
    }
    let columns = seen
        .into_iter()
        .map(|(row, loops)| vec![(row, alg.ring().loop_weight(loops))])
        .collect();
    Ok(SparseMatrix::from_columns(cup.len(), columns))
}

/// `1 ⊗_TL ⟨F⟩ = ⟨F⟩ / (TL-hat · ⟨F⟩)`.
pub fn coinvariants<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    set: &InnermostSet,
) -> Result<ModulePresentation, AlgebraError> {
    let cup = cup_basis(alg.basis(), set)?;
    Ok(cokernel(&coinvariant_relations(alg, &cup)?))
}

/// Per basis element of `⟨F⟩`, the generator of its relation ideal: the
/// gcd of all loop weights hitting it (zero when it is never hit). Because
/// each relation touches a single basis element, the coinvariants are the
/// direct sum of the cyclic modules `R / order`.
pub fn coinvariant_orders<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    cup: &CupModuleBasis,
) -> Result<Vec<T>, AlgebraError> {
    let relations = coinvariant_relations(alg, cup)?;
    let mut orders = vec![T::zero(); cup.len()];
    for (r, _, v) in relations.triplets() {
        orders[r] = orders[r].gcd(v);
    }
    Ok(orders)
}

/// The closed form of `1 ⊗_TL ⟨F⟩`: `R` for `F = ∅`, `R/a` for two strands
/// and `F = {0}`, zero otherwise.
pub fn expected_coinvariants<T: Coefficient>(alg: &TemperleyLieb<T>, set: &InnermostSet) -> ModulePresentation {
    if set.is_empty() {
        return ModulePresentation::free(1);
    }
    if alg.strands() != 2 {
        return ModulePresentation::zero();
    }
    let a = alg.ring().parameter();
    if a.is_zero() {
        ModulePresentation::free(1)
    } else if a.is_unit() {
        ModulePresentation::zero()
    } else {
        let order = a.normalized().invariant_factor().expect("non-units only occur over Z");
        ModulePresentation::new(0, vec![order])
    }
}
