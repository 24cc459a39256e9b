use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown L-function `{0}`")]
    UnknownDescriptor(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact integer overflow at n = {n} (prime power {p}^{a})")]
    Overflow { n: u64, p: u64, a: u32 },

    #[error("exact integer overflow: {0}")]
    ExactOverflow(String),

    #[error("argument {t} outside covered range (limit {limit})")]
    OutOfRange { t: f64, limit: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("coefficient file: {0}")]
    Ingest(String),

    #[error("insufficient truncation order: need coefficients through (s-1)^{need}, have through (s-1)^{have}")]
    Truncation { need: i32, have: i32 },

    #[error("Stieltjes constant gamma_{index} computed as {computed:e}, reference {reference:e}")]
    StieltjesMismatch {
        index: usize,
        computed: f64,
        reference: f64,
    },

    #[error("Stieltjes table holds gamma_0..gamma_{available}, requested order {requested}")]
    StieltjesOrder { requested: usize, available: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("interval enclosure failed to separate from zero for {0}")]
    Separation(String),

    #[error("imaginary part {0:e} does not vanish")]
    ImaginaryResidue(f64),

    #[error("quadrature did not converge: achieved relative error {achieved:e}")]
    Quadrature { achieved: f64 },

    #[error("Rankin-Selberg constant unresolved for `{0}`")]
    Unresolved(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
