use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use arc_swap::ArcSwapOption;
use genrebar_core::{parse_dataset_report, Dataset, DatasetError, SearchIndex};
use thiserror::Error;
use tokio::sync::Mutex;

use crate::config::ServiceConfig;

/// One immutable published version of the dataset and its index.
#[derive(Debug)]
pub struct Snapshot {
    pub generation: u64,
    pub dataset: Arc<Dataset>,
    /// `None` for a dataset without songs.
    pub index: Option<SearchIndex>,
}

impl Snapshot {
    pub fn new(generation: u64, dataset: Dataset) -> Self {
        let dataset = Arc::new(dataset);
        let index = SearchIndex::new(dataset.clone()).ok();
        Self {
            generation,
            dataset,
            index,
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{}", .0[0])]
    Invalid(Vec<DatasetError>),
}

/// Reads and validates a dataset file.
pub fn read_dataset(path: &Path) -> Result<Dataset, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset_report(&text).map_err(LoadError::Invalid)
}

/// Shared service state. Readers take the current snapshot without locking;
/// reloads are serialized and publish a whole new snapshot at once.
pub struct AppState {
    config: ServiceConfig,
    snapshot: ArcSwapOption<Snapshot>,
    generation: AtomicU64,
    reload_lock: Mutex<()>,
}

impl AppState {
    /// State with no dataset loaded; data endpoints answer 503 until a reload succeeds.
    pub fn new(config: ServiceConfig) -> Arc<Self> {
        Arc::new(Self {
            config,
            snapshot: ArcSwapOption::empty(),
            generation: AtomicU64::new(0),
            reload_lock: Mutex::new(()),
        })
    }

    /// Loads the configured dataset before returning.
    pub fn load(config: ServiceConfig) -> Result<Arc<Self>, LoadError> {
        let dataset = read_dataset(&config.dataset_path)?;
        let state = Self::new(config);
        state.publish(dataset);
        Ok(state)
    }

    pub fn with_dataset(config: ServiceConfig, dataset: Dataset) -> Arc<Self> {
        let state = Self::new(config);
        state.publish(dataset);
        state
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn snapshot(&self) -> Option<Arc<Snapshot>> {
        self.snapshot.load_full()
    }

    fn publish(&self, dataset: Dataset) -> Arc<Snapshot> {
        self.publish_snapshot(Snapshot::new(0, dataset))
    }

    fn publish_snapshot(&self, mut snapshot: Snapshot) -> Arc<Snapshot> {
        snapshot.generation = self.generation.fetch_add(1, Ordering::SeqCst) + 1;
        let snapshot = Arc::new(snapshot);
        self.snapshot.store(Some(snapshot.clone()));
        snapshot
    }

    /// Re-reads the dataset file and swaps it in. On failure the current
    /// snapshot stays published.
    pub async fn reload(self: &Arc<Self>) -> Result<Arc<Snapshot>, LoadError> {
        let _guard = self.reload_lock.lock().await;
        let path = self.config.dataset_path.clone();
        let prepared =
            tokio::task::spawn_blocking(move || read_dataset(&path).map(|d| Snapshot::new(0, d)))
                .await
                .expect("dataset loader panicked")?;
        let snapshot = self.publish_snapshot(prepared);
        tracing::info!(
            generation = snapshot.generation,
            songs = snapshot.dataset.len(),
            "dataset reloaded"
        );
        Ok(snapshot)
    }
}
