use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("periods are linearly dependent over the reals")]
    DegenerateLattice,
    #[error("{k}*delta lies within tolerance of the period lattice")]
    DeltaInLattice { k: usize },
    #[error("context self-test failed: {0}")]
    SelfTestFailed(String),
    #[error("value overflows the working precision")]
    Overflow,
    #[error("operation needs the {0} case")]
    WrongCase(&'static str),
    #[error("index {0} is out of range")]
    BadIndex(usize),
    #[error("denominator near a lattice zero at u = {re}{im:+}i")]
    NearSingularity { re: f64, im: f64 },
    #[error("balancing condition violated by {deficit:e}")]
    UnbalancedParams { deficit: f64 },
    #[error("size {size} exceeds the limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("no termination witness for a series truncated at {kmax}")]
    NonTerminating { kmax: usize },
    #[error("sampler gave up after {0} rejections")]
    SamplerExhausted(usize),
    #[error("invalid sizes: {0}")]
    BadSize(String),
}

pub type Result<T> = core::result::Result<T, Error>;
