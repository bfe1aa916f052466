//! HTTP endpoints.
//!
//! | method | path               | success                        |
//! |--------|--------------------|--------------------------------|
//! | GET    | `/api/genres`      | genre names and dataset size   |
//! | POST   | `/api/search`      | ranked playlist for proportions|
//! | GET    | `/api/songs/{id}`  | one song                       |
//! | POST   | `/api/reload`      | re-read the dataset file       |
//!
//! Every error body is `{"error": <code>, "detail": <text>}`; reload
//! failures add a `violations` array.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use genrebar_core::{normalize, DatasetError, GenreError, SongRecord};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::state::{AppState, LoadError, Snapshot};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRequest {
    pub proportions: Vec<f64>,
    #[serde(default)]
    pub k: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SongPayload {
    pub id: String,
    pub title: String,
    pub artist: String,
    pub proportions: Vec<f64>,
}

impl From<&SongRecord> for SongPayload {
    fn from(song: &SongRecord) -> Self {
        Self {
            id: song.id.clone(),
            title: song.title.clone(),
            artist: song.artist.clone(),
            proportions: song.genres.weights().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchEntryPayload {
    #[serde(flatten)]
    pub song: SongPayload,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub snapshot: u64,
    pub query: Vec<f64>,
    pub k: usize,
    pub entries: Vec<SearchEntryPayload>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenresResponse {
    pub snapshot: u64,
    pub genres: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReloadResponse {
    pub status: String,
    pub snapshot: u64,
    pub genres: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordProblem {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub violations: Vec<RecordProblem>,
}

/// An error response with a stable code.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, detail: impl Into<String>) -> Self {
        Self {
            status,
            body: ErrorBody {
                error: code.to_owned(),
                detail: detail.into(),
                violations: Vec::new(),
            },
        }
    }

    fn no_dataset() -> Self {
        Self::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "NoDataset",
            "no dataset is loaded",
        )
    }
}

impl From<GenreError> for ApiError {
    fn from(err: GenreError) -> Self {
        let status = match err {
            GenreError::EmptyDataset => StatusCode::SERVICE_UNAVAILABLE,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, err.code(), err.to_string())
    }
}

impl From<LoadError> for ApiError {
    fn from(err: LoadError) -> Self {
        match err {
            LoadError::Io { .. } => Self::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "DatasetUnreadable",
                err.to_string(),
            ),
            LoadError::Invalid(errors) => {
                let mut api = Self::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    errors[0].code(),
                    errors[0].to_string(),
                );
                api.body.violations = errors.iter().map(record_problem).collect();
                api
            }
        }
    }
}

fn record_problem(err: &DatasetError) -> RecordProblem {
    match err {
        DatasetError::ValidationFailed { index, id, .. } => RecordProblem {
            message: err.to_string(),
            index: Some(*index),
            id: Some(id.clone()),
        },
        other => RecordProblem {
            message: other.to_string(),
            index: None,
            id: None,
        },
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn current(state: &AppState) -> Result<Arc<Snapshot>, ApiError> {
    state.snapshot().ok_or_else(ApiError::no_dataset)
}

async fn genres(State(state): State<Arc<AppState>>) -> ApiResult<GenresResponse> {
    let snap = current(&state)?;
    Ok(Json(GenresResponse {
        snapshot: snap.generation,
        genres: snap.dataset.space().names().to_vec(),
        count: snap.dataset.len(),
    }))
}

/// Runs a search request against one snapshot.
pub fn run_search(
    snap: &Snapshot,
    request: &SearchRequest,
    default_k: usize,
    max_k: usize,
) -> Result<SearchResponse, GenreError> {
    let k = match request.k {
        None => default_k,
        Some(k) if k >= 1 && k as u64 <= max_k as u64 => k as usize,
        Some(k) => return Err(GenreError::InvalidK(k.max(0) as usize)),
    };
    let query = normalize(&request.proportions, snap.dataset.space())?;
    let result = match &snap.index {
        Some(index) => index.search(&query, k)?,
        None => return Err(GenreError::EmptyDataset),
    };
    let entries = result
        .entries
        .iter()
        .map(|e| SearchEntryPayload {
            song: snap
                .dataset
                .get(&e.song_id)
                .expect("result ids come from the snapshot")
                .into(),
            distance: e.distance,
        })
        .collect();
    Ok(SearchResponse {
        snapshot: snap.generation,
        query: query.into_weights(),
        k,
        entries,
    })
}

async fn search(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<SearchResponse> {
    let request: SearchRequest = serde_json::from_slice(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "MalformedRequest", e.to_string()))?;
    let snap = current(&state)?;
    let config = state.config();
    let response = run_search(&snap, &request, config.default_k, config.max_k).map_err(|e| {
        if let GenreError::InvalidK(_) = e {
            let detail = format!("k must be between 1 and {}", config.max_k);
            return ApiError::new(StatusCode::BAD_REQUEST, "InvalidK", detail);
        }
        e.into()
    })?;
    Ok(Json(response))
}

async fn song(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<SongPayload> {
    let snap = current(&state)?;
    match snap.dataset.get(&id) {
        Some(song) => Ok(Json(song.into())),
        None => Err(ApiError::new(
            StatusCode::NOT_FOUND,
            "NotFound",
            format!("no song with id {id:?}"),
        )),
    }
}

async fn reload(State(state): State<Arc<AppState>>) -> ApiResult<ReloadResponse> {
    let snap = state.reload().await?;
    Ok(Json(ReloadResponse {
        status: "reloaded".into(),
        snapshot: snap.generation,
        genres: snap.dataset.space().names().to_vec(),
        count: snap.dataset.len(),
    }))
}

async fn api_not_found(uri: Uri) -> ApiError {
    ApiError::new(
        StatusCode::NOT_FOUND,
        "NotFound",
        format!("no endpoint at {}", uri.path()),
    )
}

async fn missing_webui(State(state): State<Arc<AppState>>) -> ApiError {
    let location = state
        .config()
        .webui_dir
        .as_ref()
        .map(|d| d.display().to_string())
        .unwrap_or_else(|| "(none configured)".into());
    ApiError::new(
        StatusCode::NOT_FOUND,
        "NotFound",
        format!(
            "web UI bundle not found at {location}; build it or pass --webui <dir>. \
             The JSON API is available under /api/"
        ),
    )
}

/// All routes. Static web UI files are served from `webui_dir` when it exists.
pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/genres", get(genres))
        .route("/search", post(search))
        .route("/songs/{id}", get(song))
        .route("/reload", post(reload))
        .fallback(api_not_found);

    let router = Router::new().nest("/api", api);
    let router = match state.config().webui_dir.as_ref().filter(|d| d.is_dir()) {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router.fallback(missing_webui),
    };
    router.with_state(state)
}
