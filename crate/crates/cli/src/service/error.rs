use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use planadv_core::dialogue::DialogueError;
use planadv_core::schemes::CqView;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    ParseError,
    IllegalMove,
    NotFound,
    Terminated,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::ParseError => StatusCode::BAD_REQUEST,
            ErrorCode::IllegalMove | ErrorCode::Terminated => StatusCode::CONFLICT,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourcePosition {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub line: usize,
    pub col: usize,
}

/// Body of every non-2xx response.
#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<SourcePosition>,
    /// The moves that would have been accepted, on `illegal_move`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legal: Option<Vec<CqView>>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            position: None,
            legal: None,
        }
    }

    pub fn not_found(what: impl std::fmt::Display) -> Self {
        ApiError::new(ErrorCode::NotFound, format!("{what} not found"))
    }

    pub fn parse(message: impl Into<String>, position: Option<SourcePosition>) -> Self {
        ApiError {
            position,
            ..ApiError::new(ErrorCode::ParseError, message)
        }
    }

    pub fn json(err: &serde_json::Error) -> Self {
        ApiError::parse(
            format!("invalid request body: {err}"),
            (err.line() > 0).then(|| SourcePosition {
                file: None,
                line: err.line(),
                col: err.column().max(1),
            }),
        )
    }

    pub fn dialogue(err: &DialogueError, legal: Vec<CqView>) -> Self {
        match err {
            DialogueError::Terminated => ApiError::new(ErrorCode::Terminated, err.to_string()),
            _ => ApiError {
                legal: Some(legal),
                ..ApiError::new(ErrorCode::IllegalMove, err.to_string())
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}
