use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("incomplete results: {0}")]
    Incomplete(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(
        "{} holds a campaign with a different configuration; use another output directory",
        path.display()
    )]
    ManifestMismatch { path: PathBuf },
    #[error("{cell} used {used} evaluations, budget is {budget}")]
    Budget { cell: String, used: usize, budget: usize },
    #[error("{cell}: {source}")]
    Optimize { cell: String, source: agto_core::OptimizeError },
    #[error(transparent)]
    Hpo(#[from] agto_hpo::HpoError),
    #[error("evaluator: {0}")]
    Evaluator(#[from] agto_hpo::EvalError),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
