//! Exact top-k retrieval by Euclidean distance on genre vectors.
//!
//! [`search_top_k`] is the reference path: it scores every song. The
//! kd-tree in [`crate::index`] must reproduce its output exactly.

use std::cmp::Ordering;

use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{GenreError, Result};
use crate::genre::{squared_euclidean, GenreVector};

/// One ranked hit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchEntry {
    pub song_id: String,
    pub distance: f64,
}

/// Songs ranked by nondecreasing distance, ties by ascending id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub query: GenreVector,
    pub k_requested: usize,
    pub entries: Vec<SearchEntry>,
}

impl SearchResult {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.song_id.as_str())
    }
}

/// A scored candidate: distance plus position in the dataset.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scored {
    pub distance: f64,
    pub position: usize,
}

/// Ranking order: distance first, then song id.
pub(crate) fn rank_order(dataset: &Dataset, a: &Scored, b: &Scored) -> Ordering {
    a.distance.total_cmp(&b.distance).then_with(|| {
        let songs = dataset.songs();
        songs[a.position].id.cmp(&songs[b.position].id)
    })
}

pub(crate) fn check_query(dataset: &Dataset, query: &GenreVector, k: usize) -> Result<()> {
    if k < 1 {
        return Err(GenreError::InvalidK(k));
    }
    if query.dim() != dataset.space().len() {
        return Err(GenreError::DimensionMismatch {
            expected: dataset.space().len(),
            actual: query.dim(),
        });
    }
    if dataset.is_empty() {
        return Err(GenreError::EmptyDataset);
    }
    Ok(())
}

pub(crate) fn into_result(
    dataset: &Dataset,
    query: &GenreVector,
    k: usize,
    ranked: impl IntoIterator<Item = Scored>,
) -> SearchResult {
    let entries = ranked
        .into_iter()
        .map(|s| SearchEntry {
            song_id: dataset.songs()[s.position].id.clone(),
            distance: s.distance,
        })
        .collect();
    SearchResult {
        query: query.clone(),
        k_requested: k,
        entries,
    }
}

/// Exhaustive top-k: the `min(k, N)` songs closest to `query`.
pub fn search_top_k(dataset: &Dataset, query: &GenreVector, k: usize) -> Result<SearchResult> {
    check_query(dataset, query, k)?;
    let q = query.weights();
    let mut scored: Vec<Scored> = dataset
        .songs()
        .iter()
        .enumerate()
        .map(|(position, song)| Scored {
            distance: squared_euclidean(q, song.genres.weights()).sqrt(),
            position,
        })
        .collect();

    let take = k.min(scored.len());
    if take < scored.len() {
        scored.select_nth_unstable_by(take - 1, |a, b| rank_order(dataset, a, b));
        scored.truncate(take);
    }
    scored.sort_unstable_by(|a, b| rank_order(dataset, a, b));
    Ok(into_result(dataset, query, k, scored))
}
