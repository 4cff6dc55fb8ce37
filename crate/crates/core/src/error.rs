use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("modulus {0} out of range")]
    BadModulus(u64),
    #[error("unknown ring `{0}` (expected Z, Q, Fp:<prime> or Zmod:<m>)")]
    UnknownRing(String),
    #[error("cannot parse parameter `{0}` in this ring")]
    BadParameter(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("maps are not composable: {out_rows}x{out_cols} after {in_rows}x{in_cols}")]
    NotComposable {
        out_rows: usize,
        out_cols: usize,
        in_rows: usize,
        in_cols: usize,
    },
    #[error("composite of outgoing and incoming maps is nonzero")]
    NonzeroComposite,
    #[error("matrix entry ({row}, {col}) outside {rows}x{cols}")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("vector is not in the span of the lattice basis")]
    NotInLattice,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("strand count must be at least 1")]
    ZeroStrands,
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("generator index {index} out of range for {strands} strands")]
    GeneratorOutOfRange { index: usize, strands: usize },
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InnermostError {
    #[error("index {index} out of range for {generators} generators")]
    OutOfRange { index: usize, generators: usize },
    #[error("indices {0} and {1} are closer than 2")]
    TooClose(usize, usize),
    #[error("repeated index {0}")]
    Repeated(usize),
    #[error("cannot parse innermost set `{0}`")]
    Parse(String),
    #[error("{0} is not an element of the set")]
    NotAMember(usize),
    #[error("the set is empty")]
    Empty,
    #[error("the set is the unique maximal innermost set")]
    Maximal,
    #[error("unique maximal innermost set requires an even strand count, got {0}")]
    OddStrands(usize),
    #[error("set has {0} generators, algebra has {1}")]
    GeneratorMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Innermost(#[from] InnermostError),
    #[error("diagram index {0} out of range")]
    BadIndex(usize),
    #[error("product left the cup module spanned by {0}")]
    LeftSpan(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("differential d_{degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("d_{0} composed with the differential above it is nonzero")]
    DSquared(usize),
    #[error("label count mismatch in degree {0}")]
    Labels(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Innermost(#[from] InnermostError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("the Davis resolution route needs an odd strand count, got {0}; use the bar complex")]
    EvenStrands(usize),
    #[error("retraction hypothesis failed for F = {0}")]
    RetractionFailed(String),
    #[error("bar complex exceeds the size budget already in degree {degree} ({entries} entries > {budget})")]
    Budget {
        degree: usize,
        entries: u128,
        budget: u128,
    },
    #[error("module rank {rank} but {actions} action matrices for {basis} basis diagrams")]
    ModuleShape {
        rank: usize,
        actions: usize,
        basis: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("theorem {theorem} needs {requirement}")]
    Precondition { theorem: char, requirement: String },
    #[error(transparent)]
    Tor(#[from] TorError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
