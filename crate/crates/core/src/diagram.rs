//! Planar Temperley–Lieb diagrams as noncrossing perfect matchings.
//!
//! A diagram on `s` strands has boundary points `L0..L(s-1)` on the left and
//! `R0..R(s-1)` on the right, numbered `0..s` and `s..2s` respectively. The
//! diagram is stored as the partner of each point. Products glue the right
//! boundary of the left factor to the left boundary of the right factor.

use std::fmt;
use std::str::FromStr;

use crate::error::DiagramError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarDiagram {
    partners: Vec<u16>,
}

/// A product diagram together with the number of closed loops removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationResult {
    pub diagram: PlanarDiagram,
    pub loop_count: u32,
}

impl PlanarDiagram {
    /// Validates a partner sequence: a fixed-point-free involution that is
    /// noncrossing for the circle order `L0..L(s-1), R(s-1)..R0`.
    pub fn from_partners(partners: Vec<usize>) -> Result<Self, DiagramError> {
        let n = partners.len();
        if n == 0 {
            return Err(DiagramError::ZeroStrands);
        }
        if !n.is_multiple_of(2) {
            return Err(DiagramError::Malformed(format!("odd number of points {n}")));
        }
        for (i, &p) in partners.iter().enumerate() {
            if p >= n {
                return Err(DiagramError::Malformed(format!("partner {p} out of range")));
            }
            if p == i || partners[p] != i {
                return Err(DiagramError::Malformed(format!("point {i} is not matched")));
            }
        }
        let d = PlanarDiagram {
            partners: partners.into_iter().map(|p| p as u16).collect(),
        };
        if !d.is_noncrossing() {
            return Err(DiagramError::Malformed("arcs cross".into()));
        }
        Ok(d)
    }

    pub fn identity(strands: usize) -> Result<Self, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::ZeroStrands);
        }
        let s = strands as u16;
        let partners = (0..2 * s).map(|p| if p < s { p + s } else { p - s }).collect();
        Ok(PlanarDiagram { partners })
    }

    /// The diagram of `U_i`: cups joining `Li, L(i+1)` and `Ri, R(i+1)`,
    /// all other strands straight through.
    pub fn generator(strands: usize, index: usize) -> Result<Self, DiagramError> {
        if strands == 0 {
            return Err(DiagramError::ZeroStrands);
        }
        if index + 2 > strands {
            return Err(DiagramError::GeneratorOutOfRange { index, strands });
        }
        let mut d = PlanarDiagram::identity(strands)?;
        let s = strands as u16;
        let i = index as u16;
        for (a, b) in [(i, i + 1), (s + i, s + i + 1)] {
            d.partners[a as usize] = b;
            d.partners[b as usize] = a;
        }
        Ok(d)
    }

    pub fn strands(&self) -> usize {
        self.partners.len() / 2
    }

    pub fn partner(&self, point: usize) -> usize {
        self.partners[point] as usize
    }

    pub fn partners(&self) -> impl Iterator<Item = usize> + '_ {
        self.partners.iter().map(|&p| p as usize)
    }

    pub fn is_identity(&self) -> bool {
        let s = self.strands();
        (0..s).all(|i| self.partner(i) == i + s)
    }

    /// Position of a point on the boundary circle.
    fn circle_position(&self, point: usize) -> usize {
        let s = self.strands();
        if point < s {
            point
        } else {
            3 * s - 1 - point
        }
    }

    fn is_noncrossing(&self) -> bool {
        let s = self.strands();
        let mut by_position = vec![0usize; 2 * s];
        for p in 0..2 * s {
            by_position[self.circle_position(p)] = p;
        }
        let mut stack: Vec<usize> = Vec::new();
        for &p in &by_position {
            let q = self.partner(p);
            if self.circle_position(q) > self.circle_position(p) {
                stack.push(p);
            } else if stack.pop() != Some(q) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Positions `i` with an arc `Ri -- R(i+1)`.
    pub fn right_cups(&self) -> Vec<usize> {
        let s = self.strands();
        (0..s.saturating_sub(1))
            .filter(|&i| self.partner(s + i) == s + i + 1)
            .collect()
    }

    /// Positions `i` with an arc `Li -- L(i+1)`.
    pub fn left_cups(&self) -> Vec<usize> {
        let s = self.strands();
        (0..s.saturating_sub(1))
            .filter(|&i| self.partner(i) == i + 1)
            .collect()
    }

    /// Number of strands running from the left to the right boundary.
    pub fn through_strands(&self) -> usize {
        let s = self.strands();
        (0..s).filter(|&i| self.partner(i) >= s).count()
    }

    /// Stacks `self` to the left of `other` and traces the glued arcs.
    pub fn multiply(&self, other: &PlanarDiagram) -> Result<MultiplicationResult, DiagramError> {
        let s = self.strands();
        if other.strands() != s {
            return Err(DiagramError::StrandMismatch(s, other.strands()));
        }
        let mut result = vec![u16::MAX; 2 * s];
        let mut visited = vec![false; s];

        // Follows a path that enters the middle at interface point `m`,
        // coming from `self` (so it continues into `other`) when
        // `into_other` is set. Returns the external endpoint in result
        // numbering.
        let walk = |mut m: usize, mut into_other: bool, visited: &mut [bool]| -> usize {
            loop {
                visited[m] = true;
                if into_other {
                    let q = other.partner(m);
                    if q >= s {
                        return q;
                    }
                    m = q;
                    into_other = false;
                } else {
                    let p = self.partner(s + m);
                    if p < s {
                        return p;
                    }
                    m = p - s;
                    into_other = true;
                }
            }
        };

        for start in 0..2 * s {
            if result[start] != u16::MAX {
                continue;
            }
            let end = if start < s {
                let p = self.partner(start);
                if p < s {
                    p
                } else {
                    walk(p - s, true, &mut visited)
                }
            } else {
                let q = other.partner(start);
                if q >= s {
                    q
                } else {
                    walk(q, false, &mut visited)
                }
            };
            result[start] = end as u16;
            result[end] = start as u16;
        }

        let mut loop_count = 0;
        for m0 in 0..s {
            if visited[m0] {
                continue;
            }
            loop_count += 1;
            let mut m = m0;
            loop {
                visited[m] = true;
                // closed loops alternate between right cups of `self` and
                // left cups of `other`
                let p = self.partner(s + m) - s;
                visited[p] = true;
                m = other.partner(p);
                if m == m0 {
                    break;
                }
            }
        }
        Ok(MultiplicationResult {
            diagram: PlanarDiagram { partners: result },
            loop_count,
        })
    }

    /// Left-to-right product of generator diagrams.
    pub fn from_word(strands: usize, word: &[usize]) -> Result<(PlanarDiagram, u32), DiagramError> {
        let mut acc = PlanarDiagram::identity(strands)?;
        let mut loops = 0;
        for &i in word {
            let g = PlanarDiagram::generator(strands, i)?;
            let r = acc.multiply(&g)?;
            acc = r.diagram;
            loops += r.loop_count;
        }
        Ok((acc, loops))
    }

    /// Mirror image exchanging left and right boundaries.
    pub fn reflect(&self) -> PlanarDiagram {
        let s = self.strands();
        let swap = |p: usize| if p < s { p + s } else { p - s };
        let mut partners = vec![0u16; 2 * s];
        for p in 0..2 * s {
            partners[swap(p)] = swap(self.partner(p)) as u16;
        }
        PlanarDiagram { partners }
    }
}

/// All diagrams on `strands` strands, sorted by partner sequence.
pub fn enumerate(strands: usize) -> Result<Vec<PlanarDiagram>, DiagramError> {
    if strands == 0 {
        return Err(DiagramError::ZeroStrands);
    }
    let s = strands;
    let point_at = |pos: usize| if pos < s { pos } else { 3 * s - 1 - pos };
    let mut out: Vec<PlanarDiagram> = circle_matchings(0, 2 * s)
        .into_iter()
        .map(|pairs| {
            let mut partners = vec![0u16; 2 * s];
            for (x, y) in pairs {
                partners[point_at(x)] = point_at(y) as u16;
                partners[point_at(y)] = point_at(x) as u16;
            }
            PlanarDiagram { partners }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Noncrossing perfect matchings of circle positions `lo..hi`: position
/// `lo` pairs with some `p`, splitting the rest into inside and outside.
fn circle_matchings(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if lo >= hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in (lo + 1..hi).step_by(2) {
        let inside = circle_matchings(lo + 1, p);
        let outside = circle_matchings(p + 1, hi);
        for a in &inside {
            for b in &outside {
                let mut pairs = Vec::with_capacity(1 + a.len() + b.len());
                pairs.push((lo, p));
                pairs.extend_from_slice(a);
                pairs.extend_from_slice(b);
                out.push(pairs);
            }
        }
    }
    out
}

pub fn catalan(n: usize) -> u64 {
    let mut c = 1u64;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.partners.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PlanarDiagram {
    type Err = DiagramError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| DiagramError::Malformed(format!("expected [..], got `{text}`")))?;
        let partners = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| DiagramError::Malformed(format!("bad entry `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PlanarDiagram::from_partners(partners)
    }
}
