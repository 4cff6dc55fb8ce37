//! Innermost sets of generator indices and the cup modules they index.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::algebra::{AlgebraElement, DiagramBasis, TemperleyLieb};
use crate::coeff::Coefficient;
use crate::error::{AlgebraError, InnermostError};
use crate::matrix::SparseMatrix;

/// A set of generator indices in `0..generators` with pairwise gaps of at
/// least two. Ordered by cardinality, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InnermostSet {
    generators: usize,
    members: Vec<usize>,
}

impl InnermostSet {
    pub fn new(generators: usize, mut members: Vec<usize>) -> Result<Self, InnermostError> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(InnermostError::Repeated(w[0]));
            }
            if w[1] - w[0] < 2 {
                return Err(InnermostError::TooClose(w[0], w[1]));
            }
        }
        if let Some(&last) = members.last() {
            if last >= generators {
                return Err(InnermostError::OutOfRange {
                    index: last,
                    generators,
                });
            }
        }
        Ok(InnermostSet {
            generators,
            members,
        })
    }

    pub fn empty(generators: usize) -> Self {
        InnermostSet {
            generators,
            members: Vec::new(),
        }
    }

    /// Parses a comma-separated index list such as `0,2`; the empty string
    /// (or `{}`) is the empty set.
    pub fn parse(generators: usize, text: &str) -> Result<Self, InnermostError> {
        let t = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if t.is_empty() {
            return Ok(InnermostSet::empty(generators));
        }
        let members = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| InnermostError::Parse(text.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        InnermostSet::new(generators, members)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &[usize]) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// `F - {s}`
    pub fn without(&self, s: usize) -> Result<InnermostSet, InnermostError> {
        if !self.contains(s) {
            return Err(InnermostError::NotAMember(s));
        }
        Ok(InnermostSet {
            generators: self.generators,
            members: self.members.iter().copied().filter(|&m| m != s).collect(),
        })
    }

    /// Number of members smaller than `s`.
    pub fn rank_of(&self, s: usize) -> Result<usize, InnermostError> {
        self.members
            .binary_search(&s)
            .map_err(|_| InnermostError::NotAMember(s))
    }

    /// True for the unique maximal set `{0, 2, ..., g-1}` of an odd
    /// generator count `g`.
    pub fn is_unique_maximal(&self) -> bool {
        self.generators % 2 == 1
            && self.members.len() == self.generators.div_ceil(2)
            && self.members.iter().enumerate().all(|(k, &m)| m == 2 * k)
    }
}

impl Ord for InnermostSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.cmp(&other.members))
            .then_with(|| self.generators.cmp(&other.generators))
    }
}

impl PartialOrd for InnermostSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for InnermostSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for InnermostSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All innermost subsets of the `s - 1` generator indices, ordered by
/// cardinality and then lexicographically.
pub fn innermost_sets(strands: usize) -> Vec<InnermostSet> {
    let g = strands.saturating_sub(1);
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_sets(g, 0, &mut current, &mut out);
    out.sort();
    out
}

fn extend_sets(g: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<InnermostSet>) {
    out.push(InnermostSet {
        generators: g,
        members: current.clone(),
    });
    for next in from..g {
        current.push(next);
        extend_sets(g, next + 2, current, out);
        current.pop();
    }
}

/// `{0, 2, ..., s-2}` for an even strand count.
pub fn unique_maximal_innermost(strands: usize) -> Result<InnermostSet, InnermostError> {
    if strands == 0 || strands % 2 == 1 {
        return Err(InnermostError::OddStrands(strands));
    }
    Ok(InnermostSet {
        generators: strands - 1,
        members: (0..strands - 1).step_by(2).collect(),
    })
}

/// Largest cardinality of an innermost set on `s` strands: `ceil((s-1)/2)`.
pub fn max_innermost_cardinality(strands: usize) -> usize {
    strands.saturating_sub(1).div_ceil(2)
}

/// The diagrams `A` with `F ⊆ F(A)`, spanning the left submodule generated
/// by `∏_{i∈F} U_i`, in canonical basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupModuleBasis {
    set: InnermostSet,
    basis: Vec<usize>,
    index_of: HashMap<usize, usize>,
}

impl CupModuleBasis {
    pub fn set(&self) -> &InnermostSet {
        &self.set
    }

    /// Diagram basis indices of the members.
    pub fn diagrams(&self) -> &[usize] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Position of a diagram (by basis index) in this cup basis.
    pub fn position(&self, diagram: usize) -> Option<usize> {
        self.index_of.get(&diagram).copied()
    }
}

pub fn cup_basis(basis: &DiagramBasis, set: &InnermostSet) -> Result<CupModuleBasis, InnermostError> {
    let g = basis.strands() - 1;
    if set.generators() != g {
        return Err(InnermostError::GeneratorMismatch(set.generators(), g));
    }
    let members: Vec<usize> = (0..basis.len())
        .filter(|&i| set.is_subset_of(&basis.diagram(i).right_cups()))
        .collect();
    let index_of = members.iter().enumerate().map(|(k, &d)| (d, k)).collect();
    Ok(CupModuleBasis {
        set: set.clone(),
        basis: members,
        index_of,
    })
}

/// Matrix of `c ↦ x·c` on a cup basis.
pub fn left_action_matrix<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    x: &AlgebraElement<T>,
    cup: &CupModuleBasis,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let basis = alg.basis();
    let ring = alg.ring();
    let mut columns = Vec::with_capacity(cup.len());
    for &c in cup.diagrams() {
        let mut col = Vec::new();
        for (d, coeff) in x.terms() {
            let (e, loops) = basis.product(d, c);
            let row = cup
                .position(e)
                .ok_or_else(|| AlgebraError::LeftSpan(cup.set().to_string()))?;
            col.push((row, coeff.mul_ref(&ring.loop_weight(loops))));
        }
        columns.push(col);
    }
    Ok(SparseMatrix::from_columns(cup.len(), columns))
}

/// Matrix of left multiplication by a single basis diagram.
pub fn diagram_action_matrix<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    diagram: usize,
    cup: &CupModuleBasis,
) -> Result<SparseMatrix<T>, AlgebraError> {
    left_action_matrix(alg, &alg.basis_element(diagram)?, cup)
}

/// Matrix of `c ↦ c·w` from `source` to `target`, for a word `w` in the
/// generators. Fails if some product leaves the target span.
pub fn right_word_matrix<T: Coefficient>(
    alg: &TemperleyLieb<T>,
    word: &[usize],
    source: &CupModuleBasis,
    target: &CupModuleBasis,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let w = alg.word(word)?;
    let basis = alg.basis();
    let ring = alg.ring();
    let mut columns = Vec::with_capacity(source.len());
    for &c in source.diagrams() {
        let mut col = Vec::new();
        for (d, coeff) in w.terms() {
            let (e, loops) = basis.product(c, d);
            let row = target
                .position(e)
                .ok_or_else(|| AlgebraError::LeftSpan(target.set().to_string()))?;
            col.push((row, coeff.mul_ref(&ring.loop_weight(loops))));
        }
        columns.push(col);
    }
    Ok(SparseMatrix::from_columns(target.len(), columns))
}

/// The inclusion `⟨sub⟩ ↪ ⟨sup⟩` for cup bases with `sup.set ⊆ sub.set`.
pub fn inclusion_matrix<T: Coefficient>(
    sub: &CupModuleBasis,
    sup: &CupModuleBasis,
    one: &T,
) -> Result<SparseMatrix<T>, AlgebraError> {
    let columns = sub
        .diagrams()
        .iter()
        .map(|&d| {
            sup.position(d)
                .map(|row| vec![(row, one.clone())])
                .ok_or_else(|| AlgebraError::LeftSpan(sup.set().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseMatrix::from_columns(sup.len(), columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Ring;
    use crate::diagram::catalan;
    use num_bigint::BigInt;

    fn set(g: usize, m: &[usize]) -> InnermostSet {
        InnermostSet::new(g, m.to_vec()).unwrap()
    }

    #[test]
    fn construction_validates_gaps() {
        assert!(InnermostSet::new(4, vec![0, 2]).is_ok());
        assert_eq!(
            InnermostSet::new(4, vec![1, 2]),
            Err(InnermostError::TooClose(1, 2))
        );
        assert!(matches!(
            InnermostSet::new(3, vec![3]),
            Err(InnermostError::OutOfRange { .. })
        ));
        assert_eq!(InnermostSet::parse(5, "0,3").unwrap(), set(5, &[0, 3]));
        assert!(InnermostSet::parse(5, "").unwrap().is_empty());
        assert!(InnermostSet::parse(5, "a").is_err());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let sets: Vec<String> = innermost_sets(4).iter().map(|f| f.to_string()).collect();
        assert_eq!(sets, ["{}", "{0}", "{1}", "{2}", "{0,2}"]);
        assert_eq!(innermost_sets(2).len(), 2);
        let counts: Vec<usize> = (2..=6).map(|s| innermost_sets(s).len()).collect();
        assert_eq!(counts, [2, 3, 5, 8, 13]);
        assert_eq!(innermost_sets(1), vec![InnermostSet::empty(0)]);
    }

    #[test]
    fn maximal_sets() {
        assert_eq!(unique_maximal_innermost(2).unwrap(), set(1, &[0]));
        assert_eq!(unique_maximal_innermost(6).unwrap(), set(5, &[0, 2, 4]));
        let m = unique_maximal_innermost(4).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.is_unique_maximal());
        assert!(unique_maximal_innermost(5).is_err());
        assert!(!set(4, &[0, 2]).is_unique_maximal());
    }

    #[test]
    fn cup_basis_sizes() {
        let b3 = DiagramBasis::new(3).unwrap();
        let cup = cup_basis(&b3, &set(2, &[1])).unwrap();
        assert_eq!(cup.len(), 2);
        let expected: Vec<usize> = [vec![1], vec![0, 1]]
            .iter()
            .map(|w| {
                let (d, _) = crate::diagram::PlanarDiagram::from_word(3, w).unwrap();
                b3.index_of(&d).unwrap()
            })
            .collect();
        let mut got = cup.diagrams().to_vec();
        got.sort();
        let mut want = expected.clone();
        want.sort();
        assert_eq!(got, want);

        let b4 = DiagramBasis::new(4).unwrap();
        assert_eq!(cup_basis(&b4, &set(3, &[0, 2])).unwrap().len(), 2);
        for s in 1..=6 {
            let b = DiagramBasis::new(s).unwrap();
            let full = cup_basis(&b, &InnermostSet::empty(s - 1)).unwrap();
            assert_eq!(full.len() as u64, catalan(s));
        }
        assert!(cup_basis(&b4, &set(2, &[0])).is_err());
    }

    #[test]
    fn action_matrices() {
        let alg = TemperleyLieb::new(2, Ring::integers(2)).unwrap();
        let cup = cup_basis(alg.basis(), &set(1, &[0])).unwrap();
        let m = left_action_matrix(&alg, &alg.generator(0).unwrap(), &cup).unwrap();
        assert_eq!(m.to_dense(), vec![vec![BigInt::from(2)]]);
        let id = left_action_matrix(&alg, &alg.identity(), &cup).unwrap();
        assert_eq!(id, SparseMatrix::identity(1, &BigInt::from(1)));
    }
}
