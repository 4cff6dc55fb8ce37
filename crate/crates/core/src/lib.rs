//! Temperley-Lieb algebras `TL_s(a)` on planar diagrams, their Davis
//! complexes and `Tor^{TL}(1, N)` over `Z`, `Q` and prime fields.
//!
//! Everything numeric is generic over [`Coefficient`]; the aliases below fix
//! the common choices.

pub mod algebra;
pub mod coeff;
pub mod complex;
pub mod davis;
pub mod diagram;
pub mod error;
pub mod innermost;
pub mod lattice;
pub mod matrix;
pub mod smith;
pub mod tor;
pub mod verify;

pub use algebra::{AlgebraElement, DiagramBasis, TemperleyLieb};
pub use coeff::{Coefficient, Fp, PrimeField, Ring, RingSpec, RingVisitor};
pub use complex::ChainComplex;
pub use davis::{build_davis, DavisComplex, MarkedDiagram};
pub use diagram::{enumerate, PlanarDiagram};
pub use innermost::{innermost_sets, unique_maximal_innermost, CupModuleBasis, InnermostSet};
pub use matrix::SparseMatrix;
pub use smith::{smith_normal_form, ModulePresentation, SmithForm};
pub use tor::{bar_tor, cup_module, davis_tor, he1_page, trivial_module, LeftModuleData, TorMethod, TorResult};
pub use verify::{verify_theorems, Claim, Report, VerifyOptions};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub type IntegerRing = Ring<BigInt>;
pub type RationalRing = Ring<BigRational>;
pub type PrimeFieldRing = Ring<Fp>;

pub type IntegerTL = TemperleyLieb<BigInt>;
pub type RationalTL = TemperleyLieb<BigRational>;
pub type PrimeFieldTL = TemperleyLieb<Fp>;

pub type IntegerMatrix = SparseMatrix<BigInt>;
pub type IntegerComplex = ChainComplex<BigInt>;
pub type RationalComplex = ChainComplex<BigRational>;
pub type PrimeFieldComplex = ChainComplex<Fp>;
