//! JSON-over-HTTP front end: assessment, weight mapping, contour grids and
//! the embedded case-study dataset.
//!
//! Every request body is parsed by hand from raw bytes so that malformed input
//! produces the same field-level errors as the CLI.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use pmcda::case_study::{dataset, Variant};
use pmcda::contours::{contour_grid, two_criterion_weights, MAX_INTERACTIVE_GRID};
use pmcda::dataset::parse_json;
use pmcda::mapping::{map_weight_vector, MappingRequest};
use pmcda::{assess, Dataset, Error, Limits, Model};
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;
use tower_http::services::ServeDir;

pub const DEFAULT_MAX_SAMPLES: usize = 200_000;

#[derive(Debug, Clone)]
pub struct Config {
    /// Concurrent compute jobs.
    pub workers: usize,
    /// Largest `samples` accepted by `/assess`.
    pub max_samples: usize,
    /// Directory served for any other GET path (the web client bundle).
    pub static_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_samples: DEFAULT_MAX_SAMPLES,
            static_dir: None,
        }
    }
}

#[derive(Clone)]
struct AppState {
    limits: Limits,
    permits: Arc<Semaphore>,
}

pub fn router(config: Config) -> Router {
    let state = AppState {
        limits: Limits {
            max_samples: Some(config.max_samples),
        },
        permits: Arc::new(Semaphore::new(config.workers.max(1))),
    };
    let api = Router::new()
        .route("/assess", post(assess_handler))
        .route("/map-weights", post(map_weights_handler))
        .route("/contours", post(contours_handler))
        .route("/case-study", get(case_study_handler))
        .route("/health", get(|| async { "ok" }))
        .with_state(state);
    match config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Error body: `{"error": {"kind", "field"?, "message"}}`.
#[derive(Debug)]
pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self.0 {
            Error::InfeasibleWeights { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "infeasible_weights"),
            Error::Io(_) | Error::RootFinding(_) => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
            _ => (StatusCode::BAD_REQUEST, "invalid_request"),
        };
        let message = match &self.0 {
            Error::Field { message, .. } | Error::InfeasibleWeights { message, .. } => message.clone(),
            other => other.to_string(),
        };
        let body = serde_json::json!({
            "error": { "kind": kind, "field": self.0.field_name(), "message": message }
        });
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Runs CPU-bound work on the blocking pool once a worker slot is free.
async fn compute<T, F>(state: &AppState, f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> pmcda::Result<T> + Send + 'static,
    T: Send + 'static,
{
    let _permit = state
        .permits
        .acquire()
        .await
        .map_err(|_| Error::Io("worker pool closed".into()))?;
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| Error::Io(format!("worker failed: {e}")))?
        .map_err(ApiError)
}

fn body_text(body: &Bytes) -> Result<&str, ApiError> {
    std::str::from_utf8(body).map_err(|_| Error::field("body", "request body is not UTF-8").into())
}

async fn assess_handler(State(state): State<AppState>, body: Bytes) -> ApiResult<pmcda::AssessResponse> {
    let d: Dataset = parse_json(body_text(&body)?)?;
    let limits = state.limits;
    compute(&state, move || assess(&d, limits)).await.map(Json)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapWeightsRequest {
    pub linear: Vec<f64>,
    #[serde(default)]
    pub c: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct MappedEntry {
    pub model: Model,
    pub weights: Vec<f64>,
    pub interaction_mass: f64,
    pub floored: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct MapWeightsResponse {
    pub linear: Vec<f64>,
    pub c: f64,
    pub mappings: Vec<MappedEntry>,
}

fn interaction_mass(c: Option<f64>) -> pmcda::Result<f64> {
    let c = c.unwrap_or(pmcda::assess::DEFAULT_INTERACTION_MASS);
    if !(0.0..1.0).contains(&c) {
        return Err(Error::field("c", format!("interaction mass {c} outside [0, 1)")));
    }
    Ok(c)
}

async fn map_weights_handler(body: Bytes) -> ApiResult<MapWeightsResponse> {
    let req: MapWeightsRequest = parse_json(body_text(&body)?)?;
    let c = interaction_mass(req.c)?;
    let mut mappings = Vec::new();
    for target in Model::ALL {
        let m = map_weight_vector(&MappingRequest {
            linear_weights: req.linear.clone(),
            interaction_mass: c,
            target,
        })
        .map_err(|e| Error::InfeasibleWeights {
            field: "linear".into(),
            message: e.to_string(),
        })?;
        mappings.push(MappedEntry {
            model: m.weights.model(),
            weights: m.weights.weights().to_vec(),
            interaction_mass: m.weights.interaction_mass(),
            floored: m.floored,
        });
    }
    Ok(Json(MapWeightsResponse {
        linear: req.linear,
        c,
        mappings,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContoursRequest {
    pub model: Model,
    pub w: f64,
    #[serde(default)]
    pub c: Option<f64>,
    pub grid: usize,
}

/// `loss[r][b]` is the loss at `(axis[b], axis[r])`; `null` is an infinite loss.
#[derive(Debug, Serialize)]
pub struct ContoursResponse {
    pub model: Model,
    pub weights: Vec<f64>,
    pub interaction_mass: f64,
    pub size: usize,
    pub axis: Vec<f64>,
    pub loss: Vec<Vec<Option<f64>>>,
}

async fn contours_handler(body: Bytes) -> ApiResult<ContoursResponse> {
    let req: ContoursRequest = parse_json(body_text(&body)?)?;
    if req.grid > MAX_INTERACTIVE_GRID {
        return Err(Error::field("grid", format!("at most {MAX_INTERACTIVE_GRID} points per side")).into());
    }
    let c = match req.model {
        Model::Multilinear => interaction_mass(req.c)?,
        _ => 0.0,
    };
    let w = two_criterion_weights(req.model, req.w, c)?;
    let g = contour_grid(&w, req.grid)?;
    Ok(Json(ContoursResponse {
        model: g.model,
        weights: w.weights().to_vec(),
        interaction_mass: w.interaction_mass(),
        size: g.size,
        axis: g.points[..g.size].iter().map(|p| p.benefit).collect(),
        loss: g.points.chunks(g.size).map(|row| row.iter().map(|p| p.loss).collect()).collect(),
    }))
}

/// The case-study dataset exactly as published.
async fn case_study_handler() -> Json<Dataset> {
    Json(dataset(Variant::AsReported))
}
