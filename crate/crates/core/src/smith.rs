//! Smith normal form over a Euclidean coefficient ring, and the module
//! presentations (free rank plus torsion) built from it.
//!
//! Elimination runs on a sparse row store. Unit pivots are taken first,
//! chosen by a Markowitz rule (sparsest column, then sparsest row, ties by
//! index) to limit fill-in; each removes one row and one column and
//! contributes an invariant factor 1. When no unit is left, the nonzero
//! entry of smallest norm (ties by `(row, col)`) is used as a pivot and
//! Euclidean row/column reduction is repeated until it divides its whole
//! row and column. The resulting diagonal is then brought into a
//! divisibility chain by gcd/lcm exchanges.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::Coefficient;
use crate::error::LinalgError;
use crate::matrix::SparseMatrix;

/// Invariant factors `d_1 | d_2 | ... | d_r`, all nonzero and normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub invariant_factors: Vec<T>,
}

impl<T: Coefficient> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// The non-unit factors as positive integers. Empty over a field.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_unit())
            .filter_map(Coefficient::invariant_factor)
            .collect()
    }
}

pub fn smith_normal_form<T: Coefficient>(m: &SparseMatrix<T>) -> SmithForm<T> {
    let mut elim = Eliminator::new(m);
    elim.run();
    SmithForm {
        invariant_factors: normalize_diagonal(elim.diagonal),
    }
}

pub fn rank<T: Coefficient>(m: &SparseMatrix<T>) -> usize {
    smith_normal_form(m).rank()
}

/// Invariant factors over `Z/modulus` of an integer matrix, from its integer
/// Smith form: each `d` becomes `gcd(d, m)`, and factors equal to `m` vanish.
pub fn invariant_factors_mod(m: &SparseMatrix<BigInt>, modulus: u64) -> Vec<BigInt> {
    let m_big = BigInt::from(modulus);
    smith_normal_form(m)
        .invariant_factors
        .into_iter()
        .map(|d| Integer::gcd(&d, &m_big))
        .filter(|g| *g != m_big)
        .collect()
}

struct Eliminator<T> {
    rows: Vec<Vec<(u32, T)>>,
    cols: Vec<BTreeSet<u32>>,
    candidates: BTreeSet<(u32, u32)>,
    queued: Vec<Option<u32>>,
    stalled: Vec<bool>,
    diagonal: Vec<T>,
}

impl<T: Coefficient> Eliminator<T> {
    fn new(m: &SparseMatrix<T>) -> Self {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); m.rows()];
        let mut cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.cols()];
        for (r, c, v) in m.triplets() {
            rows[r].push((c as u32, v.clone()));
            cols[c].insert(r as u32);
        }
        let mut elim = Eliminator {
            rows,
            cols,
            candidates: BTreeSet::new(),
            queued: vec![None; m.cols()],
            stalled: vec![false; m.cols()],
            diagonal: Vec::new(),
        };
        for c in 0..m.cols() {
            elim.requeue(c);
        }
        elim
    }

    fn run(&mut self) {
        loop {
            if let Some((r, c)) = self.find_unit_pivot() {
                self.eliminate_unit(r, c);
            } else if let Some((r, c)) = self.find_min_norm_pivot() {
                self.eliminate_euclid(r, c);
            } else {
                break;
            }
        }
    }

    fn entry(&self, r: usize, c: usize) -> &T {
        let row = &self.rows[r];
        let i = row
            .binary_search_by_key(&(c as u32), |(col, _)| *col)
            .expect("entry tracked in column index");
        &row[i].1
    }

    fn requeue(&mut self, c: usize) {
        if let Some(k) = self.queued[c].take() {
            self.candidates.remove(&(k, c as u32));
        }
        let len = self.cols[c].len() as u32;
        if len > 0 && !self.stalled[c] {
            self.candidates.insert((len, c as u32));
            self.queued[c] = Some(len);
        }
    }

    fn find_unit_pivot(&mut self) -> Option<(usize, usize)> {
        loop {
            let &(_, c) = self.candidates.first()?;
            let c = c as usize;
            let best = self.cols[c]
                .iter()
                .map(|&r| r as usize)
                .filter(|&r| self.entry(r, c).is_unit())
                .min_by_key(|&r| (self.rows[r].len(), r));
            match best {
                Some(r) => return Some((r, c)),
                None => {
                    self.stalled[c] = true;
                    self.requeue(c);
                }
            }
        }
    }

    fn find_min_norm_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &T)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let better = match best {
                    None => true,
                    Some((_, _, b)) => v.cmp_norm(b).is_lt(),
                };
                if better {
                    best = Some((r, *c as usize, v));
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    /// Removes row `r` from the store and returns it.
    fn take_row(&mut self, r: usize) -> Vec<(u32, T)> {
        let row = std::mem::take(&mut self.rows[r]);
        for (c, _) in &row {
            self.cols[*c as usize].remove(&(r as u32));
            self.requeue(*c as usize);
        }
        row
    }

    /// `rows[target] -= factor * source`
    fn axpy_row(&mut self, target: usize, factor: &T, source: &[(u32, T)]) {
        let old = std::mem::take(&mut self.rows[target]);
        let mut merged: Vec<(u32, T)> = Vec::with_capacity(old.len() + source.len());
        let mut touched: Vec<u32> = Vec::new();
        let mut a = old.into_iter().peekable();
        let mut b = source.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => merged.push(a.next().unwrap()),
                (Some((ca, _)), Some((cb, _))) if ca < cb => merged.push(a.next().unwrap()),
                (Some((ca, _)), Some((cb, _))) if ca == cb => {
                    let (c, mut v) = a.next().unwrap();
                    let (_, s) = b.next().unwrap();
                    v.sub_mul_assign(factor, s);
                    if v.is_zero() {
                        self.cols[c as usize].remove(&(target as u32));
                        touched.push(c);
                    } else {
                        if self.stalled[c as usize] && v.is_unit() {
                            touched.push(c);
                        }
                        merged.push((c, v));
                    }
                }
                _ => {
                    let (c, s) = b.next().unwrap();
                    let mut v = T::zero();
                    v.sub_mul_assign(factor, s);
                    if !v.is_zero() {
                        self.cols[*c as usize].insert(target as u32);
                        touched.push(*c);
                        merged.push((*c, v));
                    }
                }
            }
        }
        self.rows[target] = merged;
        for c in touched {
            let c = c as usize;
            if self.stalled[c] && self.column_has_unit(c) {
                self.stalled[c] = false;
            }
            self.requeue(c);
        }
    }

    fn column_has_unit(&self, c: usize) -> bool {
        self.cols[c]
            .iter()
            .any(|&r| self.entry(r as usize, c).is_unit())
    }

    fn eliminate_unit(&mut self, r: usize, c: usize) {
        let pivot = self.entry(r, c).clone();
        let inverse = pivot.unit_inverse().expect("unit pivot");
        let pivot_row = self.take_row(r);
        let targets: Vec<u32> = self.cols[c].iter().copied().collect();
        for i in targets {
            let factor = self.entry(i as usize, c).mul_ref(&inverse);
            self.axpy_row(i as usize, &factor, &pivot_row);
        }
        debug_assert!(self.cols[c].is_empty());
        self.diagonal.push(pivot);
    }

    fn eliminate_euclid(&mut self, mut r: usize, mut c: usize) {
        loop {
            // Column phase: reduce the pivot column modulo the pivot.
            loop {
                let pivot = self.entry(r, c).clone();
                let source = self.rows[r].clone();
                let others: Vec<u32> = self.cols[c]
                    .iter()
                    .copied()
                    .filter(|&i| i as usize != r)
                    .collect();
                for i in others {
                    let (q, _) = self.entry(i as usize, c).div_rem_euclid(&pivot);
                    if !q.is_zero() {
                        self.axpy_row(i as usize, &q, &source);
                    }
                }
                let best = self.cols[c]
                    .iter()
                    .map(|&i| i as usize)
                    .min_by(|&x, &y| {
                        self.entry(x, c)
                            .cmp_norm(self.entry(y, c))
                            .then(x.cmp(&y))
                    })
                    .expect("pivot column nonempty");
                if self.entry(best, c).cmp_norm(&pivot).is_lt() {
                    r = best;
                } else {
                    break;
                }
            }
            // Row phase: column operations only touch row r, because the
            // pivot column is now zero outside it.
            let pivot = self.entry(r, c).clone();
            let old = std::mem::take(&mut self.rows[r]);
            let mut reduced = Vec::with_capacity(old.len());
            let mut touched = Vec::new();
            for (j, w) in old {
                if j as usize == c {
                    reduced.push((j, w));
                    continue;
                }
                let (_, rem) = w.div_rem_euclid(&pivot);
                if rem.is_zero() {
                    self.cols[j as usize].remove(&(r as u32));
                    touched.push(j);
                } else {
                    if rem.is_unit() {
                        touched.push(j);
                    }
                    reduced.push((j, rem));
                }
            }
            self.rows[r] = reduced;
            for j in touched {
                let j = j as usize;
                if self.stalled[j] && self.column_has_unit(j) {
                    self.stalled[j] = false;
                }
                self.requeue(j);
            }
            if self.rows[r].len() == 1 {
                self.take_row(r);
                self.diagonal.push(pivot);
                return;
            }
            c = self.rows[r]
                .iter()
                .filter(|(j, _)| *j as usize != c)
                .min_by(|x, y| x.1.cmp_norm(&y.1).then(x.0.cmp(&y.0)))
                .map(|(j, _)| *j as usize)
                .expect("row has another entry");
        }
    }
}

/// Turns a diagonal of nonzero elements into invariant factors.
fn normalize_diagonal<T: Coefficient>(diagonal: Vec<T>) -> Vec<T> {
    let mut units = Vec::new();
    let mut rest = Vec::new();
    for d in diagonal {
        let d = d.normalized();
        if d.is_unit() {
            units.push(d);
        } else {
            rest.push(d);
        }
    }
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            let prod = rest[i].mul_ref(&rest[j]);
            let (l, _) = prod.div_rem_euclid(&g);
            rest[i] = g.normalized();
            rest[j] = l.normalized();
        }
    }
    // gcd with a unit can surface after exchanges
    let (mut more_units, chain): (Vec<T>, Vec<T>) = rest.into_iter().partition(T::is_unit);
    units.append(&mut more_units);
    units.extend(chain);
    units
}

/// A finitely generated module: `R^free_rank ⊕ R/t_1 ⊕ ... ⊕ R/t_k`.
///
/// Torsion factors are positive integers greater than one forming a
/// divisibility chain. Over a field the torsion list is empty; over a
/// composite `Z/m` the free part counts copies of `Z/m` and the factors are
/// proper divisors of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModulePresentation {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModulePresentation {
    pub fn zero() -> Self {
        ModulePresentation::default()
    }

    pub fn free(rank: usize) -> Self {
        ModulePresentation {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Normalizes arbitrary positive factors into a chain, dropping units.
    pub fn new(free_rank: usize, factors: Vec<BigInt>) -> Self {
        ModulePresentation {
            free_rank,
            torsion: integer_chain(factors),
        }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        ModulePresentation::new(0, vec![order.into()])
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &ModulePresentation) -> ModulePresentation {
        let mut factors = self.torsion.clone();
        factors.extend(other.torsion.iter().cloned());
        ModulePresentation::new(self.free_rank + other.free_rank, factors)
    }

    /// `M ⊗ Z/m` for an abelian group `M`, as a `Z/m`-module.
    pub fn tensor_mod(&self, m: u64) -> ModulePresentation {
        let m = BigInt::from(m);
        let mut free = self.free_rank;
        let mut factors = Vec::new();
        for t in &self.torsion {
            let g = Integer::gcd(t, &m);
            if g == m {
                free += 1;
            } else {
                factors.push(g);
            }
        }
        ModulePresentation::new(free, factors)
    }

    /// `Tor(M, Z/m)` for an abelian group `M`, as a `Z/m`-module.
    pub fn tor_mod(&self, m: u64) -> ModulePresentation {
        let mut t = self.clone();
        t.free_rank = 0;
        t.tensor_mod(m)
    }

    /// Renders as e.g. `Z^2 ⊕ Z/2`, with `0` for the zero module.
    pub fn render(&self, ring_symbol: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(ring_symbol.to_string()),
            r => parts.push(format!("{ring_symbol}^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("{ring_symbol}/{t}"));
        }
        parts.join(" ⊕ ")
    }
}

impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("R"))
    }
}

fn integer_chain(factors: Vec<BigInt>) -> Vec<BigInt> {
    let mut rest: Vec<BigInt> = factors
        .into_iter()
        .map(|t| num_traits::Signed::abs(&t))
        .filter(|t| !t.is_one())
        .collect();
    assert!(
        rest.iter().all(|t| !t.is_zero()),
        "zero torsion factor; count it as free rank"
    );
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = Integer::gcd(&rest[i], &rest[j]);
            let l = rest[i].lcm(&rest[j]);
            rest[i] = g;
            rest[j] = l;
        }
    }
    rest.retain(|t| !t.is_one());
    rest
}

/// Presentation of `coker(m)`: the target modulo the image.
pub fn cokernel<T: Coefficient>(m: &SparseMatrix<T>) -> ModulePresentation {
    let snf = smith_normal_form(m);
    ModulePresentation {
        free_rank: m.rows() - snf.rank(),
        torsion: snf.torsion(),
    }
}

/// `ker(d_out) / im(d_in)` at the middle term of `A --d_in--> B --d_out--> C`.
///
/// Uses `H ≅ Z ⊕ coker(d_in)_tors` with free rank
/// `dim B - rank d_out - rank d_in`: the kernel of `d_out` is a direct
/// summand of `B` because `B / ker` embeds in the free module `C`, so the
/// torsion of `ker/im` equals the torsion of `B/im`.
pub fn homology_step<T: Coefficient>(
    d_out: &SparseMatrix<T>,
    d_in: &SparseMatrix<T>,
) -> Result<ModulePresentation, LinalgError> {
    check_composable(d_out, d_in)?;
    let out_rank = rank(d_out);
    let snf_in = smith_normal_form(d_in);
    Ok(presentation_from_ranks(d_in.rows(), out_rank, &snf_in))
}

pub(crate) fn check_composable<T: Coefficient>(
    d_out: &SparseMatrix<T>,
    d_in: &SparseMatrix<T>,
) -> Result<(), LinalgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinalgError::NotComposable {
            out_rows: d_out.rows(),
            out_cols: d_out.cols(),
            in_rows: d_in.rows(),
            in_cols: d_in.cols(),
        });
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(LinalgError::NonzeroComposite);
    }
    Ok(())
}

pub(crate) fn presentation_from_ranks<T: Coefficient>(
    middle: usize,
    out_rank: usize,
    snf_in: &SmithForm<T>,
) -> ModulePresentation {
    ModulePresentation {
        free_rank: middle - out_rank - snf_in.rank(),
        torsion: snf_in.torsion(),
    }
}

/// Universal coefficients: from integral homology `H_0, H_1, ...` of a free
/// complex to the homology of the complex reduced mod `m`,
/// `H_k ⊗ Z/m ⊕ Tor(H_{k-1}, Z/m)`.
pub fn universal_coefficients(integral: &[ModulePresentation], m: u64) -> Vec<ModulePresentation> {
    integral
        .iter()
        .enumerate()
        .map(|(k, h)| {
            let tensor = h.tensor_mod(m);
            match k.checked_sub(1) {
                Some(prev) => tensor.direct_sum(&integral[prev].tor_mod(m)),
                None => tensor,
            }
        })
        .collect()
}
