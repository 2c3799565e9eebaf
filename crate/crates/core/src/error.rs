use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {q} is {residue} mod 4; this construction needs {expected} mod 4")]
    WrongResidueClass { q: u64, residue: u64, expected: u64 },

    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },

    #[error("entry ({row}, {col}) is {value}, expected +1 or -1")]
    NonSignEntries { row: usize, col: usize, value: i64 },

    #[error("rows {0} and {1} are not orthogonal")]
    NotHadamard(usize, usize),

    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("no registry order >= {n} within bound {bound}")]
    RegistryExhausted { n: usize, bound: usize },

    #[error("order {order} cannot be built with recipe {recipe}")]
    NoRecipe { order: usize, recipe: String },

    #[error("bad spin pair ({i}, {j}) for {n} spins")]
    BadPair { i: usize, j: usize, n: usize },

    #[error("bad neighbourhood size k={k} for {n} spins")]
    BadK { k: usize, n: usize },

    #[error("need at least {min} spins, got {n}")]
    TooFewSpins { n: usize, min: usize },

    #[error("simulation supports at most {cap} spins, got {n}")]
    TooManySpins { n: usize, cap: usize },

    #[error("interval duration must be positive, got {0}")]
    NonPositiveDuration(f64),

    #[error("coupling constant is zero")]
    ZeroCoupling,

    #[error("spins {i} and {j} are not coupled")]
    UncoupledPair { i: usize, j: usize },

    #[error("coupling ({i}, {j}) lies outside the {topology} topology")]
    TopologyMismatch { i: usize, j: usize, topology: String },

    #[error("a decoupling program needs an explicit interval duration")]
    MissingDuration,

    #[error("interval duration is fixed by the target coupling for {0}")]
    DurationNotAllowed(String),

    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("invalid pulse program: {0}")]
    InvalidProgram(String),

    #[error("builder produced an invalid sign matrix: {0}")]
    Construction(String),

    #[error("target {target} does not fit a {n}-spin diagonal simulation")]
    TargetShapeMismatch { target: String, n: usize },

    #[error("progression {a} mod {q} is not coprime")]
    BadProgression { a: u64, q: u64 },

    #[error("x = {0} is below the domain of the bound")]
    DomainTooSmall(f64),

    #[error("sieve covers 2..={limit}, query needs {needed}")]
    SieveTooSmall { limit: u64, needed: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
