//! Dense exact linear algebra over a Euclidean ring: column echelon forms
//! with unimodular transforms, kernel bases, and subquotients `L1 / L2` of
//! lattices. Intended for small problems; large sparse work goes through
//! [`crate::smith`].

use crate::coeff::Coefficient;
use crate::error::LinalgError;
use crate::matrix::SparseMatrix;
use crate::smith::{smith_normal_form, ModulePresentation};

/// A set of column vectors in `R^dim`.
pub type Vectors<T> = Vec<Vec<T>>;

struct Echelon<T> {
    /// Row-major matrix after column operations.
    reduced: Vec<Vec<T>>,
    /// Accumulated column operations (`cols x cols`), if requested.
    transform: Option<Vec<Vec<T>>>,
    /// Number of nonzero (pivot) columns; they come first.
    rank: usize,
    /// Pivot row of each of the first `rank` columns, strictly increasing.
    pivot_rows: Vec<usize>,
}

fn column_echelon<T: Coefficient>(
    mut a: Vec<Vec<T>>,
    cols: usize,
    one: &T,
    track: bool,
) -> Echelon<T> {
    let rows = a.len();
    let mut u = track.then(|| {
        (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { one.clone() } else { T::zero() })
                    .collect::<Vec<T>>()
            })
            .collect::<Vec<_>>()
    });
    let mut next = 0;
    let mut pivot_rows = Vec::new();
    for r in 0..rows {
        if next == cols {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (next..cols).filter(|&j| !a[r][j].is_zero()).collect();
            let Some(&k) = nonzero
                .iter()
                .min_by(|&&x, &&y| a[r][x].cmp_norm(&a[r][y]).then(x.cmp(&y)))
            else {
                break;
            };
            let mut done = true;
            for &j in &nonzero {
                if j == k {
                    continue;
                }
                let (q, rem) = a[r][j].div_rem_euclid(&a[r][k]);
                add_column_multiple(&mut a, j, k, &q);
                if let Some(u) = u.as_mut() {
                    add_column_multiple(u, j, k, &q);
                }
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                swap_columns(&mut a, k, next);
                if let Some(u) = u.as_mut() {
                    swap_columns(u, k, next);
                }
                pivot_rows.push(r);
                next += 1;
                break;
            }
        }
    }
    Echelon {
        reduced: a,
        transform: u,
        rank: next,
        pivot_rows,
    }
}

/// column `j -= q * column k`
fn add_column_multiple<T: Coefficient>(m: &mut [Vec<T>], j: usize, k: usize, q: &T) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[k].is_zero() {
            let src = row[k].clone();
            row[j].sub_mul_assign(q, &src);
        }
    }
}

fn swap_columns<T>(m: &mut [Vec<T>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

fn columns_of<T: Clone>(m: &[Vec<T>], range: std::ops::Range<usize>) -> Vectors<T> {
    range
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn as_rows<T: Coefficient>(vectors: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    (0..dim)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect()
}

/// A basis of `{x : m x = 0}`.
pub fn kernel_basis<T: Coefficient>(m: &SparseMatrix<T>, one: &T) -> Vectors<T> {
    let ech = column_echelon(m.to_dense(), m.cols(), one, true);
    let u = ech.transform.expect("transform tracked");
    columns_of(&u, ech.rank..m.cols())
}

/// A lattice given by an echelon basis, with membership and coordinates.
pub struct Lattice<T> {
    dim: usize,
    basis: Vectors<T>,
    pivot_rows: Vec<usize>,
}

impl<T: Coefficient> Lattice<T> {
    /// The lattice spanned by `generators`, each of length `dim`.
    pub fn span(generators: &[Vec<T>], dim: usize, one: &T) -> Self {
        let ech = column_echelon(as_rows(generators, dim), generators.len(), one, false);
        Lattice {
            dim,
            basis: columns_of(&ech.reduced, 0..ech.rank),
            pivot_rows: ech.pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &Vectors<T> {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis.
    pub fn coordinates(&self, v: &[T]) -> Result<Vec<T>, LinalgError> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (b, &p) in self.basis.iter().zip(&self.pivot_rows) {
            // entries above the pivot row are already cleared
            let (q, rem) = rest[p].div_rem_euclid(&b[p]);
            if !rem.is_zero() {
                return Err(LinalgError::NotInLattice);
            }
            for (x, y) in rest.iter_mut().zip(b) {
                x.sub_mul_assign(&q, y);
            }
            coords.push(q);
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Err(LinalgError::NotInLattice);
        }
        Ok(coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `outer / inner`, where `inner` is spanned by `inner_generators`, which
/// must lie in `outer`.
pub fn subquotient<T: Coefficient>(
    outer: &Lattice<T>,
    inner_generators: &[Vec<T>],
) -> Result<ModulePresentation, LinalgError> {
    let k = outer.rank();
    let mut columns = Vec::with_capacity(inner_generators.len());
    for g in inner_generators {
        let coords = outer.coordinates(g)?;
        columns.push(coords.into_iter().enumerate().collect::<Vec<_>>());
    }
    let m = SparseMatrix::from_columns(k, columns);
    let snf = smith_normal_form(&m);
    Ok(ModulePresentation {
        free_rank: k - snf.rank(),
        torsion: snf.torsion(),
    })
}

/// `ker(d_out) / im(d_in)` computed literally: a kernel basis of `d_out`,
/// the image of `d_in` written in that basis, and the Smith form of the
/// coordinate matrix. Dense; used to cross-check [`crate::smith::homology_step`].
pub fn homology_via_kernel<T: Coefficient>(
    d_out: &SparseMatrix<T>,
    d_in: &SparseMatrix<T>,
    one: &T,
) -> Result<ModulePresentation, LinalgError> {
    crate::smith::check_composable(d_out, d_in)?;
    let n = d_in.rows();
    let kernel = Lattice::span(&kernel_basis(d_out, one), n, one);
    let image = d_in.transpose().to_dense();
    subquotient(&kernel, &image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn zmat(rows: &[&[i64]]) -> SparseMatrix<BigInt> {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| z(v)).collect()).collect();
        SparseMatrix::from_dense(&dense, cols)
    }

    #[test]
    fn kernel_of_row_vector() {
        let m = zmat(&[&[2, 3, 0]]);
        let k = kernel_basis(&m, &z(1));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(z(2) * &v[0] + z(3) * &v[1], z(0));
        }
        // saturated: (3, -2, 0) and (0, 0, 1) generate, index 1
        let lat = Lattice::span(&k, 3, &z(1));
        assert!(lat.coordinates(&[z(3), z(-2), z(0)]).is_ok());
        assert!(lat.coordinates(&[z(0), z(0), z(1)]).is_ok());
        assert!(lat.coordinates(&[z(1), z(0), z(0)]).is_err());
    }

    #[test]
    fn subquotient_of_index_two() {
        let outer = Lattice::span(&[vec![z(1), z(0)], vec![z(0), z(1)]], 2, &z(1));
        let h = subquotient(&outer, &[vec![z(2), z(0)]]).unwrap();
        assert_eq!(h, ModulePresentation::new(1, vec![z(2)]));
    }

    #[test]
    fn kernel_route_matches_small_examples() {
        let h = homology_via_kernel(&SparseMatrix::zero(1, 1), &zmat(&[&[2]]), &z(1)).unwrap();
        assert_eq!(h, ModulePresentation::cyclic(2));
        // Z --(1,1)--> Z^2 --(1,-1)--> Z
        let d_in = zmat(&[&[1], &[1]]);
        let d_out = zmat(&[&[1, -1]]);
        assert!(homology_via_kernel(&d_out, &d_in, &z(1)).unwrap().is_zero());
    }
}
