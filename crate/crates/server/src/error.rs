use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use thiserror::Error;

use crate::schema::ErrorJson;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ServiceError {
    #[error("{0}")]
    InvalidConfig(String),
    #[error("unknown match `{0}`")]
    UnknownMatch(String),
    #[error("{0}")]
    Unauthorized(String),
    #[error("{0}")]
    WrongPhase(String),
    #[error("{0}")]
    StaleRound(String),
    #[error("{0}")]
    IllegalBid(String),
    #[error("{0}")]
    IllegalMove(String),
    #[error("{0}")]
    BadRequest(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::InvalidConfig(_) => "invalid_config",
            ServiceError::UnknownMatch(_) => "unknown_match",
            ServiceError::Unauthorized(_) => "unauthorized",
            ServiceError::WrongPhase(_) => "wrong_phase",
            ServiceError::StaleRound(_) => "stale_round",
            ServiceError::IllegalBid(_) => "illegal_bid",
            ServiceError::IllegalMove(_) => "illegal_move",
            ServiceError::BadRequest(_) => "bad_request",
        }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::InvalidConfig(_) | ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::UnknownMatch(_) => StatusCode::NOT_FOUND,
            ServiceError::Unauthorized(_) => StatusCode::FORBIDDEN,
            ServiceError::WrongPhase(_) | ServiceError::StaleRound(_) => StatusCode::CONFLICT,
            ServiceError::IllegalBid(_) | ServiceError::IllegalMove(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }

    pub fn to_json(&self) -> ErrorJson {
        ErrorJson {
            error: self.code().to_string(),
            message: self.to_string(),
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.to_json())).into_response()
    }
}
