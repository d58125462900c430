use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid family (a={a}, b={b}): need 1 <= a <= b")]
    InvalidFamily { a: u64, b: u64 },
    #[error("triple generators must be positive (x={x}, d={d})")]
    NonPositiveGenerator { x: u64, d: u64 },
    #[error("({x}, {y}, {z}) is not a ({a},{b})-triple")]
    NotATriple {
        a: u32,
        b: u32,
        x: u64,
        y: u64,
        z: u64,
    },
    #[error("color {color} at position {position} is out of range for r={r}")]
    ColorOutOfRange { position: usize, color: u32, r: u32 },
    #[error("a coloring must cover at least one integer")]
    EmptyColoring,
    #[error("domain size {0} exceeds the cap of 2^31")]
    DomainTooLarge(u64),
    #[error("number of colors must be in 1..={max}, got {r}")]
    InvalidColorCount { r: u32, max: u32 },
    #[error("gamma coloring needs c >= 3, got {0}")]
    InvalidGamma(u32),
    #[error("brute force is capped at r^n <= 2^24 (r={r}, n={n})")]
    BruteForceCap { r: u32, n: u32 },
    #[error("integer overflow while building a triple")]
    Overflow,
    #[error("linear equation has no nonzero coefficient")]
    ZeroEquation,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    /// A stored or external result contradicts a fresh computation.
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
    /// Failure inside a caller-supplied result source.
    #[error("{0}")]
    Oracle(String),
    #[error("inconsistent bounds for ({a},{b}): lower {lower} exceeds upper {upper}")]
    InconsistentBounds {
        a: u32,
        b: u32,
        lower: String,
        upper: String,
    },
}
