//! JSON-over-HTTP backend for the genre bar playlist prototype.
//!
//! The only mutable state is the published [`state::Snapshot`]; a reload
//! builds a new snapshot off to the side and swaps it in atomically, so a
//! request always sees exactly one dataset version.

pub mod api;
pub mod config;
pub mod state;

use std::sync::Arc;

pub use api::{router, run_search, SearchRequest, SearchResponse};
pub use config::{ConfigError, ServiceConfig, DEFAULT_K, DEFAULT_MAX_K, DEFAULT_PORT};
pub use state::{read_dataset, AppState, LoadError, Snapshot};

/// Serves the API on an already bound listener until the process exits.
pub async fn serve(listener: tokio::net::TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}
