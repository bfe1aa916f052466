//! The `genrebar/1` dataset document.
//!
//! ```json
//! {
//!   "version": "genrebar/1",
//!   "genres": ["Blues", "Country", "Jazz"],
//!   "songs": [
//!     {"id": "song-0001", "title": "…", "artist": "…", "weights": [0.500000, 0.250000, 0.250000]}
//!   ]
//! }
//! ```
//!
//! [`serialize_dataset`] emits exactly this layout: two-space indent, one
//! song per line, songs sorted by id, weights with six decimals and a
//! trailing newline. [`parse_dataset`] accepts any JSON with the same keys.

use std::fmt;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::dataset::{Dataset, SongRecord};
use crate::error::GenreError;
use crate::genre::{
    absorb_residue, validate_with_tolerance, GenreSpace, GenreVector, Violation, SUM_TOLERANCE,
};

pub const FORMAT_VERSION: &str = "genrebar/1";

/// Decimal digits written per weight.
pub const WEIGHT_DECIMALS: usize = 6;

/// Sum tolerance for weights read from a document.
///
/// Rounding each of K weights to six decimals moves the sum by up to
/// `K * 0.5e-6`, so files get that much slack on top of [`SUM_TOLERANCE`].
pub fn document_sum_tolerance(k: usize) -> f64 {
    SUM_TOLERANCE + k as f64 * 0.5e-6
}

/// Problem with a single song record.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordViolation {
    EmptyId,
    DuplicateId,
    Weights(Violation),
}

impl fmt::Display for RecordViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordViolation::EmptyId => f.write_str("id is empty"),
            RecordViolation::DuplicateId => f.write_str("id already used by an earlier record"),
            RecordViolation::Weights(v) => write!(f, "weights: {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown format version {0:?} (expected \"genrebar/1\")")]
    UnknownVersion(String),

    #[error("invalid genre list: {0}")]
    InvalidGenres(GenreError),

    #[error("record {} ({}): {}", .index, .id, join(.violations))]
    ValidationFailed {
        index: usize,
        id: String,
        violations: Vec<RecordViolation>,
    },
}

fn join(violations: &[RecordViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl DatasetError {
    pub fn code(&self) -> &'static str {
        match self {
            DatasetError::MalformedDocument { .. } => "MalformedDocument",
            DatasetError::UnknownVersion(_) => "UnknownVersion",
            DatasetError::InvalidGenres(_) => "InvalidGenres",
            DatasetError::ValidationFailed { .. } => "ValidationFailed",
        }
    }
}

impl From<serde_json::Error> for DatasetError {
    fn from(err: serde_json::Error) -> Self {
        DatasetError::MalformedDocument {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct Header {
    version: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[allow(dead_code)]
    version: String,
    genres: Vec<String>,
    songs: Vec<RawSong>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSong {
    id: String,
    title: String,
    artist: String,
    weights: Vec<f64>,
}

/// Parses a document, stopping at the first problem.
pub fn parse_dataset(document: &str) -> Result<Dataset, DatasetError> {
    parse_dataset_report(document).map_err(|mut errors| errors.swap_remove(0))
}

/// Parses a document, collecting a problem for every bad record.
///
/// The error list is never empty. Document-level failures (syntax, version,
/// genre list) end parsing early and are reported alone.
pub fn parse_dataset_report(document: &str) -> Result<Dataset, Vec<DatasetError>> {
    let header: Header = serde_json::from_str(document).map_err(|e| vec![e.into()])?;
    if header.version != FORMAT_VERSION {
        return Err(vec![DatasetError::UnknownVersion(header.version)]);
    }
    let raw: RawDocument = serde_json::from_str(document).map_err(|e| vec![e.into()])?;
    let space = GenreSpace::new(&raw.genres).map_err(|e| vec![DatasetError::InvalidGenres(e)])?;
    let tolerance = document_sum_tolerance(space.len());

    let mut errors = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut songs = Vec::with_capacity(raw.songs.len());
    for (index, song) in raw.songs.into_iter().enumerate() {
        let mut violations = Vec::new();
        if song.id.is_empty() {
            violations.push(RecordViolation::EmptyId);
        } else if !seen.insert(song.id.clone()) {
            violations.push(RecordViolation::DuplicateId);
        }
        let report = validate_with_tolerance(&song.weights, space.len(), tolerance);
        violations.extend(report.violations.into_iter().map(RecordViolation::Weights));
        if !violations.is_empty() {
            errors.push(DatasetError::ValidationFailed {
                index,
                id: song.id,
                violations,
            });
            continue;
        }
        let genres = load_weights(song.weights, &space);
        songs.push(SongRecord::new(song.id, song.title, song.artist, genres));
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Dataset::new(space, songs).map_err(|e| vec![DatasetError::InvalidGenres(e)])
}

/// Largest deviation of a weight sum from one that is treated as decimal
/// rounding noise rather than an unnormalized record.
const FLOAT_NOISE: f64 = 1e-12;

/// Weights that sum to one up to float noise are kept as written, with the
/// last-bit residue absorbed by the largest component (the same step that
/// produced them when the document was generated); anything else inside the
/// tolerance is re-normalized.
fn load_weights(mut weights: Vec<f64>, space: &GenreSpace) -> GenreVector {
    if (weights.iter().sum::<f64>() - 1.0).abs() <= FLOAT_NOISE {
        absorb_residue(&mut weights);
        return GenreVector::from_weights_unchecked(weights);
    }
    space
        .normalize(&weights)
        .expect("validated weights have positive mass")
}

/// Canonical text form of `dataset`. Equal datasets give identical bytes.
pub fn serialize_dataset(dataset: &Dataset) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": {},", json_string(FORMAT_VERSION));
    let genres: Vec<String> = dataset
        .space()
        .names()
        .iter()
        .map(|g| json_string(g))
        .collect();
    let _ = writeln!(out, "  \"genres\": [{}],", genres.join(", "));

    let mut songs: Vec<&SongRecord> = dataset.songs().iter().collect();
    songs.sort_by(|a, b| a.id.cmp(&b.id));
    if songs.is_empty() {
        out.push_str("  \"songs\": []\n");
    } else {
        out.push_str("  \"songs\": [\n");
        for (i, song) in songs.iter().enumerate() {
            let weights: Vec<String> = song
                .genres
                .weights()
                .iter()
                .map(|&w| format!("{:.*}", WEIGHT_DECIMALS, if w == 0.0 { 0.0 } else { w }))
                .collect();
            let _ = write!(
                out,
                "    {{\"id\": {}, \"title\": {}, \"artist\": {}, \"weights\": [{}]}}",
                json_string(&song.id),
                json_string(&song.title),
                json_string(&song.artist),
                weights.join(", ")
            );
            out.push_str(if i + 1 < songs.len() { ",\n" } else { "\n" });
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
