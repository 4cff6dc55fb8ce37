//! Independent oracles shared by the integration tests. None of these use
//! the library's own enumeration or elimination code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// All perfect matchings of `2s` boundary points with no crossing chords,
/// found by generating every matching and filtering. Points `0..s` are on
/// the left, `s..2s` on the right; around the boundary the order is
/// `L0..L(s-1), R(s-1)..R0`.
pub fn brute_force_matchings(s: usize) -> BTreeSet<Vec<usize>> {
    let n = 2 * s;
    let pos = |p: usize| if p < s { p } else { 3 * s - 1 - p };
    let mut out = BTreeSet::new();
    let mut partner = vec![usize::MAX; n];
    all_matchings(&mut partner, &mut |m| {
        let chords: Vec<(usize, usize)> = (0..n)
            .filter(|&p| p < m[p])
            .map(|p| {
                let (x, y) = (pos(p), pos(m[p]));
                (x.min(y), x.max(y))
            })
            .collect();
        let crossing = chords.iter().any(|&(a, b)| {
            chords.iter().any(|&(c, d)| a < c && c < b && b < d)
        });
        if !crossing {
            out.insert(m.to_vec());
        }
    });
    out
}

fn all_matchings(partner: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    let Some(first) = partner.iter().position(|&p| p == usize::MAX) else {
        visit(partner);
        return;
    };
    for other in first + 1..partner.len() {
        if partner[other] == usize::MAX {
            partner[first] = other;
            partner[other] = first;
            all_matchings(partner, visit);
            partner[first] = usize::MAX;
            partner[other] = usize::MAX;
        }
    }
}

/// Innermost sets by filtering all subsets of `0..s-1` for pairwise gaps
/// of at least two, ordered by size then lexicographically.
pub fn brute_force_innermost(s: usize) -> Vec<Vec<usize>> {
    let g = s.saturating_sub(1);
    let mut sets: Vec<Vec<usize>> = (0u32..1 << g)
        .map(|mask| (0..g).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|m| m.windows(2).all(|w| w[1] - w[0] >= 2))
        .collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets
}

/// Right cups read directly off a partner vector.
pub fn right_cups_of(partners: &[usize]) -> Vec<usize> {
    let s = partners.len() / 2;
    (0..s.saturating_sub(1))
        .filter(|&i| partners[s + i] == s + i + 1)
        .collect()
}

/// Determinant by cofactor expansion.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][c] * determinant(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// gcd of all `k x k` minors (zero if there are none or all vanish).
pub fn minor_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            g = g.gcd(&determinant(&sub));
        }
    }
    g.abs()
}
