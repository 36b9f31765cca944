//! HTTP annotation service and the request handling it shares with the
//! batch CLI.

use std::sync::Arc;
use std::time::Instant;

use annotext_core::doc::{AnnotationKind, DocError, Document, Selection};
use annotext_core::pipeline::{Clock, Pipeline, PipelineError};
use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response as HttpResponse};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::wire::Response;

/// Microseconds since the clock was created.
#[derive(Debug, Clone, Copy)]
pub struct SystemClock(Instant);

impl SystemClock {
    pub fn new() -> Self {
        SystemClock(Instant::now())
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now_micros(&self) -> u64 {
        self.0.elapsed().as_micros() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotateRequest {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    /// Kinds to annotate; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code,
            message: message.into(),
        }
    }

    pub fn body(&self) -> serde_json::Value {
        json!({"error": {"code": self.code, "message": self.message}})
    }
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Doc(DocError::OversizeInput { .. }) => ApiError::bad_request("oversize_input", e.to_string()),
            PipelineError::UnsupportedLanguage(_) => ApiError::bad_request("unsupported_language", e.to_string()),
            PipelineError::LanguageDetection(_) => ApiError::bad_request("language_detection", e.to_string()),
            PipelineError::InvalidConfig(detail) => {
                tracing::error!("pipeline misconfigured: {detail}");
                ApiError {
                    status: StatusCode::INTERNAL_SERVER_ERROR,
                    code: "internal",
                    message: "internal error".into(),
                }
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> HttpResponse {
        (self.status, Json(self.body())).into_response()
    }
}

/// Parses kind names such as `entity` or `KLOUT_TOPIC`.
pub fn parse_selection<S: AsRef<str>>(names: &[S]) -> Result<Selection, ApiError> {
    names
        .iter()
        .map(|n| {
            AnnotationKind::parse(n.as_ref())
                .ok_or_else(|| ApiError::bad_request("unknown_annotation_kind", format!("unknown annotation kind {:?}", n.as_ref())))
        })
        .collect()
}

/// Validates and runs one request.
pub fn run_request(pipeline: &Pipeline, req: &AnnotateRequest, clock: &dyn Clock) -> Result<(Document, Selection), ApiError> {
    if req.text.trim().is_empty() {
        return Err(ApiError::bad_request("empty_text", "text is empty"));
    }
    let selection = match &req.select {
        Some(names) => parse_selection(names)?,
        None => Selection::all(),
    };
    let doc = pipeline.annotate(&req.text, req.language.as_deref(), selection, clock)?;
    Ok((doc, selection))
}

pub fn annotate(pipeline: &Pipeline, req: &AnnotateRequest) -> Result<Response, ApiError> {
    let (doc, selection) = run_request(pipeline, req, &SystemClock::new())?;
    Ok(Response::from_document(&doc, selection))
}

async fn annotate_handler(State(pipeline): State<Arc<Pipeline>>, body: Bytes) -> Result<Json<Response>, ApiError> {
    let req: AnnotateRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request("invalid_request", e.to_string()))?;
    let response = tokio::task::spawn_blocking(move || annotate(&pipeline, &req))
        .await
        .map_err(|e| {
            tracing::error!("annotation task failed: {e}");
            ApiError {
                status: StatusCode::INTERNAL_SERVER_ERROR,
                code: "internal",
                message: "internal error".into(),
            }
        })??;
    Ok(Json(response))
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({"status": "ok"}))
}

/// Request bodies may be this many times the input limit, leaving room for
/// JSON escaping so oversize text gets a proper error from the pipeline.
const BODY_SLACK: usize = 8;

pub fn router(pipeline: Arc<Pipeline>) -> Router {
    let body_limit = pipeline.config.max_input_bytes.saturating_mul(BODY_SLACK).max(64 << 10);
    Router::new()
        .route("/v1/annotate", post(annotate_handler))
        .route("/healthz", get(health))
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(pipeline)
}

pub async fn serve(pipeline: Arc<Pipeline>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(pipeline))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
