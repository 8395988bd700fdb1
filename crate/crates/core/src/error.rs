use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Invalid(String),
    #[error("lagrangian contains antifield variable `{0}`")]
    AntifieldInLagrangian(String),
    #[error("lagrangian must be {0}")]
    LagrangianNotEven(&'static str),
    #[error("stage {stage} operator `{name}` has antifield number {found}, expected {expected}")]
    AntifieldNumberMismatch {
        stage: usize,
        name: String,
        expected: u32,
        found: String,
    },
    #[error("stage {stage} cannot be registered before stage {missing}")]
    StageOrder { stage: usize, missing: usize },
    #[error("nilpotency fails on `{generator}`: residual {residual}")]
    NotNilpotent { generator: String, residual: String },
    #[error("{0}")]
    Parse(#[from] crate::dsl::ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
