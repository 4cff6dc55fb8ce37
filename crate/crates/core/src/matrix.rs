use std::collections::BTreeMap;

use crate::coeff::Coefficient;
use crate::error::LinalgError;

/// Sparse matrix stored column-wise. Each column is sorted by row index and
/// holds no explicit zeros, so structural equality is matrix equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, T)>>,
}

impl<T: Coefficient> SparseMatrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, one.clone())]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triples. Duplicate positions
    /// are summed and zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut acc: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            let slot = acc[c].entry(r).or_insert_with(T::zero);
            *slot = slot.add_ref(&v);
        }
        let columns = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseMatrix {
            rows,
            cols,
            columns,
        })
    }

    /// Builds a matrix from prepared columns. Entries within a column may
    /// come in any order; duplicates are summed and zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, T)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|col| normalize_column(col, rows))
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, T)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match self.columns[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => self.columns[c][i].1.clone(),
            Err(_) => T::zero(),
        }
    }

    /// Iterates over nonzero entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            columns[r].push((c, v.clone()));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix<T>) -> Result<SparseMatrix<T>, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::NotComposable {
                out_rows: self.rows,
                out_cols: self.cols,
                in_rows: rhs.rows,
                in_cols: rhs.cols,
            });
        }
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut acc: BTreeMap<usize, T> = BTreeMap::new();
                for (k, b) in rcol {
                    for (i, a) in &self.columns[*k] {
                        let slot = acc.entry(*i).or_insert_with(T::zero);
                        *slot = slot.add_ref(&a.mul_ref(b));
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| (*r, v.mul_ref(factor)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    pub fn add(&self, rhs: &SparseMatrix<T>) -> Result<SparseMatrix<T>, LinalgError> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::NotComposable {
                out_rows: self.rows,
                out_cols: self.cols,
                in_rows: rhs.rows,
                in_cols: rhs.cols,
            });
        }
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut col = a.clone();
                col.extend(b.iter().cloned());
                normalize_column(col, self.rows)
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (new, &old) in rows.iter().enumerate() {
            row_pos[old] = new;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, T)> = self.columns[c]
                    .iter()
                    .filter(|(r, _)| row_pos[*r] != usize::MAX)
                    .map(|(r, v)| (row_pos[*r], v.clone()))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols: cols.len(),
            columns,
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut dense = vec![vec![T::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            dense[r][c] = v.clone();
        }
        dense
    }

    pub fn from_dense(dense: &[Vec<T>], cols: usize) -> Self {
        let rows = dense.len();
        let mut columns: Vec<Vec<(usize, T)>> = vec![Vec::new(); cols];
        for (r, row) in dense.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[c].push((r, v.clone()));
                }
            }
        }
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SparseMatrix<T>) -> Self {
        let mut columns = self.columns.clone();
        columns.extend(
            other
                .columns
                .iter()
                .map(|col| col.iter().map(|(r, v)| (r + self.rows, v.clone())).collect()),
        );
        SparseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }
}

fn normalize_column<T: Coefficient>(mut col: Vec<(usize, T)>, rows: usize) -> Vec<(usize, T)> {
    col.sort_by_key(|(r, _)| *r);
    let mut out: Vec<(usize, T)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        assert!(r < rows, "row {r} out of bounds ({rows} rows)");
        match out.last_mut() {
            Some((last, acc)) if *last == r => *acc = acc.add_ref(&v),
            _ => out.push((r, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}
