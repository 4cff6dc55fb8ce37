//! Bounded chain complexes of finitely generated free modules.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::Coefficient;
use crate::error::ComplexError;
use crate::matrix::SparseMatrix;
use crate::smith::{presentation_from_ranks, smith_normal_form, ModulePresentation, SmithForm};

/// `C_top -> ... -> C_1 -> C_0`, with `d_k : C_k -> C_{k-1}`.
///
/// When `truncated` is set the complex is the bottom part of a longer one,
/// so homology in the top degree only reports cycles.
#[derive(Clone, Debug)]
pub struct ChainComplex<T> {
    ranks: Vec<usize>,
    differentials: Vec<SparseMatrix<T>>,
    labels: Option<Vec<Vec<String>>>,
    truncated: bool,
}

impl<T: Coefficient> ChainComplex<T> {
    /// `differentials[k - 1]` is `d_k`; there must be `ranks.len() - 1` of
    /// them.
    pub fn new(ranks: Vec<usize>, differentials: Vec<SparseMatrix<T>>) -> Result<Self, ComplexError> {
        assert!(!ranks.is_empty(), "a complex has at least degree 0");
        assert_eq!(differentials.len() + 1, ranks.len(), "one differential per positive degree");
        for (k, d) in differentials.iter().enumerate() {
            let degree = k + 1;
            let expected = (ranks[degree - 1], ranks[degree]);
            if d.shape() != expected {
                return Err(ComplexError::Shape {
                    degree,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: expected.0,
                    expected_cols: expected.1,
                });
            }
        }
        Ok(ChainComplex {
            ranks,
            differentials,
            labels: None,
            truncated: false,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, ComplexError> {
        for (k, l) in labels.iter().enumerate() {
            if self.ranks.get(k) != Some(&l.len()) {
                return Err(ComplexError::Labels(k));
            }
        }
        if labels.len() != self.ranks.len() {
            return Err(ComplexError::Labels(labels.len()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn mark_truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    /// `d_k` for `1 <= k <= top`.
    pub fn differential(&self, k: usize) -> Option<&SparseMatrix<T>> {
        k.checked_sub(1).and_then(|i| self.differentials.get(i))
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// First degree `k` with `d_k ∘ d_{k+1} ≠ 0`.
    pub fn first_d_squared_failure(&self) -> Option<usize> {
        (1..self.top_degree()).find(|&k| {
            let composite = self.differentials[k - 1]
                .mul(&self.differentials[k])
                .expect("shapes checked at construction");
            !composite.is_zero()
        })
    }

    pub fn verify_d_squared(&self) -> bool {
        self.first_d_squared_failure().is_none()
    }

    /// Smith forms of `d_1..d_top`, computed in parallel.
    pub fn smith_forms(&self) -> Vec<SmithForm<T>> {
        self.differentials.par_iter().map(smith_normal_form).collect()
    }

    /// `H_k = ker d_k / im d_{k+1}` for every degree `0..=top`, with
    /// `d_0 = 0` and `d_{top+1} = 0`.
    pub fn homology(&self) -> Result<Vec<ModulePresentation>, ComplexError> {
        if let Some(k) = self.first_d_squared_failure() {
            return Err(ComplexError::DSquared(k));
        }
        let forms = self.smith_forms();
        let empty = SmithForm {
            invariant_factors: Vec::new(),
        };
        Ok((0..=self.top_degree())
            .map(|k| {
                let out_rank = if k == 0 { 0 } else { forms[k - 1].rank() };
                let incoming = forms.get(k).unwrap_or(&empty);
                presentation_from_ranks(self.ranks[k], out_rank, incoming)
            })
            .collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Restriction to the given basis elements in each degree (a subcomplex
    /// when the selection is closed under the differential).
    pub fn restrict(&self, selection: &[Vec<usize>]) -> Result<ChainComplex<T>, ComplexError> {
        assert_eq!(selection.len(), self.ranks.len());
        let ranks = selection.iter().map(Vec::len).collect();
        let differentials = (1..=self.top_degree())
            .map(|k| self.differentials[k - 1].submatrix(&selection[k - 1], &selection[k]))
            .collect();
        let mut sub = ChainComplex::new(ranks, differentials)?;
        if let Some(labels) = &self.labels {
            sub.labels = Some(
                selection
                    .iter()
                    .zip(labels)
                    .map(|(sel, l)| sel.iter().map(|&i| l[i].clone()).collect())
                    .collect(),
            );
        }
        sub.truncated = self.truncated;
        Ok(sub)
    }

    /// Degree-wise direct sum.
    pub fn direct_sum(&self, other: &ChainComplex<T>) -> Result<ChainComplex<T>, ComplexError> {
        let top = self.top_degree().max(other.top_degree());
        let ranks: Vec<usize> = (0..=top).map(|k| self.rank(k) + other.rank(k)).collect();
        let pad = |c: &ChainComplex<T>, k: usize| {
            c.differential(k)
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zero(c.rank(k - 1), c.rank(k)))
        };
        let differentials = (1..=top)
            .map(|k| pad(self, k).direct_sum(&pad(other, k)))
            .collect();
        ChainComplex::new(ranks, differentials)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            top_degree: self.top_degree(),
            ranks: self.ranks.clone(),
            truncated: self.truncated,
            differentials: self
                .differentials
                .iter()
                .enumerate()
                .map(|(k, d)| DifferentialJson {
                    degree: k + 1,
                    rows: d.rows(),
                    cols: d.cols(),
                    entries: d.triplets().map(|(r, c, v)| (r, c, v.to_string())).collect(),
                })
                .collect(),
            labels: self.labels.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub top_degree: usize,
    pub ranks: Vec<usize>,
    pub truncated: bool,
    pub differentials: Vec<DifferentialJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DifferentialJson {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)` triples, column-major.
    pub entries: Vec<(usize, usize, String)>,
}
