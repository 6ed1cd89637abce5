use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use dynrank_core::Error as CoreError;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    BadRequest(String),
    #[error("missing or invalid voter token")]
    Unauthorized,
    #[error("storage: {0}")]
    Io(#[from] std::io::Error),
}

impl From<CoreError> for ServiceError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::UnknownCandidate(_) => ServiceError::NotFound(msg),
            CoreError::AlreadyImplemented(_)
            | CoreError::DepthViolation { .. }
            | CoreError::UnsupportedImplemented(_)
            | CoreError::DuplicateCandidate(_) => ServiceError::Conflict(msg),
            _ => ServiceError::BadRequest(msg),
        }
    }
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Unauthorized => StatusCode::UNAUTHORIZED,
            ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}
