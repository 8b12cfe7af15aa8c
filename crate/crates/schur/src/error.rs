use thiserror::Error;

/// Errors produced by group construction, S-ring validation and the search
/// procedures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclic factor {0}: factors must be at least 2")]
    InvalidFactor(u64),

    #[error("empty factor list: a group needs at least one cyclic factor")]
    EmptyFactorList,

    #[error("element {0} out of range for group of order {1}")]
    ElementOutOfRange(usize, usize),

    #[error("group order {order} exceeds the supported bound {bound} for {what}")]
    SizeLimit {
        what: &'static str,
        order: usize,
        bound: usize,
    },

    #[error("the given sets do not partition the group: {0}")]
    NotAPartition(String),

    #[error("the identity element does not form a singleton class")]
    IdentityNotSingleton,

    #[error("class {class} is not inverse-closed: its inverse set is not a class")]
    NotInverseClosed { class: usize },

    #[error("module closure fails for classes ({x},{y}): elements {z} and {z_other} of one class have {count} and {count_other} representations")]
    NotModuleClosed {
        x: usize,
        y: usize,
        z: usize,
        z_other: usize,
        count: u32,
        count_other: u32,
    },

    #[error("subgroup L is not contained in U")]
    NotContained,

    #[error("U/L is not a section of A-subgroups")]
    NotASection,

    #[error("the set is not an A-set of this S-ring")]
    NotAnASet,

    #[error("the radical of the empty set is undefined")]
    EmptySet,

    #[error("{m} is not coprime to the group order {order}")]
    NotCoprime { m: i64, order: usize },

    #[error("{p} does not divide the group order {order}")]
    NotADivisor { p: usize, order: usize },

    #[error("unsupported group shape: expected a p-group of shape Cp^k or Cp x Cp^k with p in {{2,3}}, got {0}")]
    UnsupportedShape(String),

    #[error("the map is not an automorphism of the group")]
    NotAnAutomorphism,

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("not an algebraic isomorphism: c^{z}_{{{x},{y}}} = {lhs} but the image triple has {rhs}")]
    AlgisoViolation {
        x: usize,
        y: usize,
        z: usize,
        lhs: u32,
        rhs: u32,
    },

    #[error("the point map is not a combinatorial isomorphism: pair ({u},{w}) and ({u2},{w2}) share a color but their images do not")]
    NotAnIsomorphism {
        u: usize,
        w: usize,
        u2: usize,
        w2: usize,
    },

    #[error("table row K_{index} for p={p} requires k >= {min_k}, got k={k}")]
    InadmissibleK {
        p: usize,
        index: usize,
        min_k: usize,
        k: usize,
    },

    #[error("no table row K_{index} for p={p}")]
    NoSuchTableRow { p: usize, index: usize },

    #[error("no classification statement matches this S-ring; this would falsify the catalogue")]
    ClassificationFailure,

    #[error("shape-verification hypothesis failed: {0}")]
    HypothesisFailed(&'static str),

    #[error("no automorphism of the sub-ring lifts the required quotient action")]
    AutLifting,

    #[error("argument does not satisfy the stated precondition: {0}")]
    Precondition(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
