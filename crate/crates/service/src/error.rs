use boardmind_core::EngineError;
use thiserror::Error;

use crate::session::SessionStatus;

#[derive(Debug, Clone, Error)]
pub enum ServiceError {
    #[error("no session `{0}`")]
    NotFound(String),
    #[error("session is {}", .0.as_str())]
    Conflict(SessionStatus),
    #[error("{message}")]
    Illegal { rule: &'static str, message: String },
    #[error("{0}")]
    Validation(String),
    #[error("engine failure: {0}")]
    Engine(EngineError),
}

impl From<EngineError> for ServiceError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::IllegalMove { ref violation, .. } => {
                ServiceError::Illegal { rule: violation.code(), message: e.to_string() }
            }
            EngineError::Config(m) => ServiceError::Validation(m),
            EngineError::Parse(p) => ServiceError::Validation(p.to_string()),
            other => ServiceError::Engine(other),
        }
    }
}
