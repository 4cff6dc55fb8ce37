//! `TL_s(a)` as a free module on the diagram basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::coeff::{Coefficient, Ring};
use crate::diagram::{enumerate, PlanarDiagram};
use crate::error::{AlgebraError, DiagramError};

/// Above this many basis diagrams the product table is not materialized.
const TABLE_LIMIT: usize = 2000;

/// The canonical diagram basis of `TL_s`, with index lookup and a lazily
/// built product table.
#[derive(Debug)]
pub struct DiagramBasis {
    strands: usize,
    diagrams: Vec<PlanarDiagram>,
    index: HashMap<PlanarDiagram, usize>,
    identity: usize,
    generators: Vec<usize>,
    table: OnceLock<Vec<(u32, u32)>>,
}

impl DiagramBasis {
    pub fn new(strands: usize) -> Result<Self, DiagramError> {
        let diagrams = enumerate(strands)?;
        let index: HashMap<PlanarDiagram, usize> = diagrams
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i))
            .collect();
        let identity = index[&PlanarDiagram::identity(strands)?];
        let generators = (0..strands.saturating_sub(1))
            .map(|i| PlanarDiagram::generator(strands, i).map(|g| index[&g]))
            .collect::<Result<_, _>>()?;
        Ok(DiagramBasis {
            strands,
            diagrams,
            index,
            identity,
            generators,
            table: OnceLock::new(),
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn diagram(&self, i: usize) -> &PlanarDiagram {
        &self.diagrams[i]
    }

    pub fn diagrams(&self) -> &[PlanarDiagram] {
        &self.diagrams
    }

    pub fn index_of(&self, d: &PlanarDiagram) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    /// Basis index of `U_i`.
    pub fn generator_index(&self, i: usize) -> Option<usize> {
        self.generators.get(i).copied()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Indices of all non-identity diagrams, in basis order; they span the
    /// augmentation ideal.
    pub fn augmentation_ideal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| i != self.identity).collect()
    }

    /// Product of basis diagrams `i * j`: the index of the composite and the
    /// number of closed loops.
    pub fn product(&self, i: usize, j: usize) -> (usize, u32) {
        let n = self.len();
        if n <= TABLE_LIMIT {
            let table = self.table.get_or_init(|| self.build_table());
            let (k, loops) = table[i * n + j];
            (k as usize, loops)
        } else {
            self.compute_product(i, j)
        }
    }

    fn compute_product(&self, i: usize, j: usize) -> (usize, u32) {
        let r = self.diagrams[i]
            .multiply(&self.diagrams[j])
            .expect("basis diagrams share a strand count");
        (self.index[&r.diagram], r.loop_count)
    }

    fn build_table(&self) -> Vec<(u32, u32)> {
        use rayon::prelude::*;
        let n = self.len();
        (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (k, loops) = self.compute_product(ij / n, ij % n);
                (k as u32, loops)
            })
            .collect()
    }
}

/// A finite linear combination of basis diagrams, keyed by basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<T> {
    strands: usize,
    coeffs: BTreeMap<usize, T>,
}

impl<T: Coefficient> AlgebraElement<T> {
    pub fn zero(strands: usize) -> Self {
        AlgebraElement {
            strands,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn coefficient(&self, index: usize) -> T {
        self.coeffs.get(&index).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c * [index]`.
    pub fn add_term(&mut self, index: usize, c: T) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(index).or_insert_with(T::zero);
        *slot = slot.add_ref(&c);
        if slot.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn add(&self, other: &AlgebraElement<T>) -> Result<AlgebraElement<T>, AlgebraError> {
        if self.strands != other.strands {
            return Err(DiagramError::StrandMismatch(self.strands, other.strands).into());
        }
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &T) -> AlgebraElement<T> {
        let mut out = AlgebraElement::zero(self.strands);
        for (i, c) in self.terms() {
            out.add_term(i, c.mul_ref(factor));
        }
        out
    }

    /// JSON-ready rendering: strand count and `(index, coefficient)` pairs.
    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            strands: self.strands,
            terms: self
                .coeffs
                .iter()
                .map(|(i, c)| (*i, c.to_string()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ElementJson {
    pub strands: usize,
    pub terms: Vec<(usize, String)>,
}

/// `TL_s(a)` over a concrete coefficient ring.
#[derive(Clone, Debug)]
pub struct TemperleyLieb<T: Coefficient> {
    basis: Arc<DiagramBasis>,
    ring: Ring<T>,
}

impl<T: Coefficient> TemperleyLieb<T> {
    pub fn new(strands: usize, ring: Ring<T>) -> Result<Self, DiagramError> {
        Ok(TemperleyLieb {
            basis: Arc::new(DiagramBasis::new(strands)?),
            ring,
        })
    }

    pub fn with_basis(basis: Arc<DiagramBasis>, ring: Ring<T>) -> Self {
        TemperleyLieb { basis, ring }
    }

    pub fn basis(&self) -> &DiagramBasis {
        &self.basis
    }

    pub fn shared_basis(&self) -> Arc<DiagramBasis> {
        Arc::clone(&self.basis)
    }

    pub fn ring(&self) -> &Ring<T> {
        &self.ring
    }

    pub fn strands(&self) -> usize {
        self.basis.strands()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_element(&self, index: usize) -> Result<AlgebraElement<T>, AlgebraError> {
        if index >= self.dimension() {
            return Err(AlgebraError::BadIndex(index));
        }
        let mut x = AlgebraElement::zero(self.strands());
        x.add_term(index, self.ring.one());
        Ok(x)
    }

    pub fn identity(&self) -> AlgebraElement<T> {
        self.basis_element(self.basis.identity_index())
            .expect("identity is a basis diagram")
    }

    pub fn generator(&self, i: usize) -> Result<AlgebraElement<T>, AlgebraError> {
        let idx = self
            .basis
            .generator_index(i)
            .ok_or(DiagramError::GeneratorOutOfRange {
                index: i,
                strands: self.strands(),
            })?;
        self.basis_element(idx)
    }

    pub fn diagram_element(&self, d: &PlanarDiagram) -> Result<AlgebraElement<T>, AlgebraError> {
        if d.strands() != self.strands() {
            return Err(DiagramError::StrandMismatch(self.strands(), d.strands()).into());
        }
        let idx = self.basis.index_of(d).expect("every diagram is in the basis");
        self.basis_element(idx)
    }

    /// The product of generators `U_{w_1} ... U_{w_k}`, with loop factors.
    pub fn word(&self, word: &[usize]) -> Result<AlgebraElement<T>, AlgebraError> {
        let (d, loops) = PlanarDiagram::from_word(self.strands(), word)?;
        Ok(self.diagram_element(&d)?.scale(&self.ring.loop_weight(loops)))
    }

    /// Bilinear extension of diagram composition; each closed loop
    /// contributes a factor of the parameter.
    pub fn multiply(
        &self,
        x: &AlgebraElement<T>,
        y: &AlgebraElement<T>,
    ) -> Result<AlgebraElement<T>, AlgebraError> {
        for e in [x, y] {
            if e.strands() != self.strands() {
                return Err(DiagramError::StrandMismatch(self.strands(), e.strands()).into());
            }
        }
        let mut out = AlgebraElement::zero(self.strands());
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let (k, loops) = self.basis.product(i, j);
                let w = self.ring.loop_weight(loops);
                out.add_term(k, a.mul_ref(b).mul_ref(&w));
            }
        }
        Ok(out)
    }

    /// The augmentation: coefficient of the identity diagram.
    pub fn augment(&self, x: &AlgebraElement<T>) -> T {
        x.coefficient(self.basis.identity_index())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn tl(s: usize, a: i64) -> TemperleyLieb<BigInt> {
        TemperleyLieb::new(s, Ring::integers(a)).unwrap()
    }

    #[test]
    fn square_of_generator_scales_by_parameter() {
        let alg = tl(2, 2);
        let u0 = alg.generator(0).unwrap();
        let sq = alg.multiply(&u0, &u0).unwrap();
        assert_eq!(sq, u0.scale(&BigInt::from(2)));
    }

    #[test]
    fn zero_parameter_kills_loop_terms() {
        let alg = tl(3, 0);
        let u0 = alg.generator(0).unwrap();
        let u1 = alg.generator(1).unwrap();
        let x = alg.multiply(&u0.add(&u1).unwrap(), &u0).unwrap();
        assert_eq!(x, alg.word(&[1, 0]).unwrap());
    }

    #[test]
    fn augmentation_values() {
        let alg = tl(3, 5);
        assert_eq!(alg.augment(&alg.identity()), BigInt::from(1));
        assert_eq!(alg.augment(&alg.generator(1).unwrap()), BigInt::from(0));
    }

    #[test]
    fn product_table_matches_direct_composition() {
        let basis = DiagramBasis::new(4).unwrap();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                assert_eq!(basis.product(i, j), basis.compute_product(i, j));
            }
        }
    }

    #[test]
    fn element_json() {
        let alg = tl(2, 1);
        let x = alg.generator(0).unwrap().scale(&BigInt::from(-3));
        let json = x.to_json();
        assert_eq!(json.strands, 2);
        assert_eq!(json.terms, vec![(alg.basis().generator_index(0).unwrap(), "-3".to_string())]);
    }

    #[test]
    fn strand_mismatch() {
        let a = tl(2, 1);
        let b = tl(3, 1);
        assert!(a.multiply(&a.identity(), &b.identity()).is_err());
    }
}
