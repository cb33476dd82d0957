use crate::store::StoreError;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use ecoloom::model::{ParseError, ValidationReport};
use ecoloom_eol::EolError;
use serde_json::{json, Value};

/// JSON error body: `{"error": "...", ...}`.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, message: impl std::fmt::Display) -> Self {
        Self {
            status,
            body: json!({ "error": message.to_string() }),
        }
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no {what} with id `{id}`"))
    }

    pub fn bad_request(message: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    pub fn unprocessable(message: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, message)
    }

    pub fn invalid_model(report: &ValidationReport) -> Self {
        Self {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: json!({
                "error": format!("model has {} validation violation(s)", report.violations.len()),
                "violations": report.violations,
            }),
        }
    }

    pub fn internal(message: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::InvalidId(_) => ApiError::bad_request(e),
            StoreError::Io(_) => ApiError::internal(e),
        }
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Malformed(_) => ApiError::bad_request(e),
            _ => ApiError::unprocessable(e),
        }
    }
}

impl From<EolError> for ApiError {
    fn from(e: EolError) -> Self {
        let status = match e {
            EolError::InvalidRequest(_) => StatusCode::BAD_REQUEST,
            EolError::NotFound(_) => StatusCode::NOT_FOUND,
            EolError::Network(_) | EolError::Malformed(_) => StatusCode::BAD_GATEWAY,
            EolError::Fixture(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e)
    }
}
