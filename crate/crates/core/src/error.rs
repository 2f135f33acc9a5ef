use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed Coxeter matrix input: {0}")]
    Malformed(String),
    #[error("entry ({row},{col}) out of range for rank {rank}")]
    IndexOutOfRange { row: usize, col: usize, rank: usize },
    #[error("asymmetric entries at ({row},{col}) and ({col},{row})")]
    Asymmetric { row: usize, col: usize },
    #[error("diagonal entry ({index},{index}) must be 1")]
    DiagonalNotOne { index: usize },
    #[error("off-diagonal entry ({row},{col}) = {value} must be at least 2")]
    ExponentTooSmall { row: usize, col: usize, value: u32 },
    #[error("rank must be at least 1")]
    EmptyRank,

    #[error("generator subset {0:?} is not a single irreducible component")]
    NotIrreducible(Vec<usize>),
    #[error("group is affine: it has no non-affine special subgroups")]
    GroupIsAffine,
    #[error("group is not spherical")]
    NotSpherical,
    #[error("group is not a product of irreducible Euclidean groups")]
    NotAffineEuclidean,
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("no element of the ball reached exact status")]
    NoExactValues,
    #[error("exact reflection length {value} exceeds the affine bound {bound}")]
    AffineBoundViolated { value: u32, bound: u32 },
    #[error("truncated reflection length increased from {before} to {after} when the depth grew")]
    MonotonicityViolated { before: u32, after: u32 },
    #[error("word does not lie in the computed ball of radius {radius}")]
    OutsideBall { radius: usize },
    #[error("quasimorphism certificates apply only to free Coxeter groups")]
    NotFreeCoxeter,

    #[error("letter {letter} outside alphabet 1..={alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },
    #[error("counting pattern must be nonempty")]
    EmptyPattern,
    #[error("window {window} is shorter than the pattern length {pattern}")]
    WindowTooSmall { window: usize, pattern: usize },
    #[error("exhaustive window search would visit {pairs} pairs (cap {cap}); use a smaller window or sampling")]
    WindowTooLarge { pairs: u128, cap: u128 },
    #[error("power counts did not become linear within {cap} powers")]
    HomogenizeNotStable { cap: usize },
    #[error("defect window was not stabilized; refusing to certify")]
    NotStabilized,

    #[error("unsupported triangle parameters ({p}, {q}): entries would be irrational")]
    UnsupportedParameters { p: String, q: String },
    #[error("generator {0} has no ideal vertex opposite to it")]
    NoIdealVertex(usize),
    #[error("horoballs overlap at height {height}: {detail}")]
    HoroballOverlap { height: String, detail: String },
    #[error("no prime up to {cap} works: {diagnostics}")]
    SearchExhausted { cap: u64, diagnostics: String },
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("warp profile precondition failed: {0}")]
    WarpPrecondition(String),
    #[error("no bridge in the schedule is convex; best violation {best_violation:e}")]
    WarpConstructionFailed { best_violation: f64 },
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    BoundsInconsistent { lower: u32, upper: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
