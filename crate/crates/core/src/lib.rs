//! Soft music genre datasets.
//!
//! Songs carry a proportion per genre (a point on the probability simplex).
//! This crate provides the vector types, exact top-k Euclidean search with a
//! kd-tree accelerator, the interaction model of the stacked genre bar, and
//! the `genrebar/1` dataset format.

pub mod bar;
pub mod dataset;
pub mod error;
pub mod fixture;
pub mod genre;
pub mod index;
pub mod io;
pub mod search;

pub use bar::{
    apply_drag, handles_from_vector, segment_pixel_widths, text_bar, vector_from_handles, BarState,
    DragEvent, STEP,
};
pub use dataset::{Dataset, SongRecord};
pub use error::GenreError;
pub use fixture::{generate_fixture, toy_dataset, FixtureSpec};
pub use genre::{
    distance, normalize, validate_vector, GenreSpace, GenreVector, ValidationReport, Violation,
    SUM_TOLERANCE,
};
pub use index::{build_index, search_top_k_indexed, SearchIndex};
pub use io::{parse_dataset, parse_dataset_report, serialize_dataset, DatasetError};
pub use search::{search_top_k, SearchEntry, SearchResult};
