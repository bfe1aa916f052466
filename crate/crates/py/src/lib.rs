//! Python bindings for `genrebar-core`.
//!
//! Errors surface as `genrebar.GenrebarError` (a `ValueError` subclass) whose
//! `code` attribute carries the stable error code.

use std::num::NonZeroUsize;
use std::sync::Arc;

use genrebar_core as core;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyType;

pyo3::create_exception!(genrebar, GenrebarError, PyValueError);

fn error(code: &str, detail: impl std::fmt::Display) -> PyErr {
    Python::attach(|py| {
        let err = GenrebarError::new_err(format!("{code}: {detail}"));
        if let Err(e) = err.value(py).setattr("code", code) {
            return e;
        }
        err
    })
}

fn genre_err(err: core::GenreError) -> PyErr {
    error(err.code(), err)
}

fn dataset_err(err: core::DatasetError) -> PyErr {
    error(err.code(), err)
}

/// Ordered, unique genre names.
#[pyclass(name = "GenreSpace", module = "genrebar", frozen)]
struct PyGenreSpace(core::GenreSpace);

#[pymethods]
impl PyGenreSpace {
    #[new]
    fn new(names: Vec<String>) -> PyResult<Self> {
        core::GenreSpace::new(names).map(Self).map_err(genre_err)
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    fn normalize(&self, raw: Vec<f64>) -> PyResult<PyGenreVector> {
        normalize(raw, self)
    }

    fn uniform(&self) -> PyGenreVector {
        PyGenreVector(self.0.uniform())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("GenreSpace({:?})", self.0.names())
    }
}

/// A point on the probability simplex: non-negative weights summing to one.
#[pyclass(name = "GenreVector", module = "genrebar", frozen, from_py_object)]
#[derive(Clone)]
struct PyGenreVector(core::GenreVector);

#[pymethods]
impl PyGenreVector {
    /// Validates `weights` as given; use `normalize` for raw proportions.
    #[new]
    fn new(weights: Vec<f64>, space: &PyGenreSpace) -> PyResult<Self> {
        core::GenreVector::new(weights, &space.0)
            .map(Self)
            .map_err(genre_err)
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.0.weights().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.dim()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("GenreVector({:?})", self.0.weights())
    }
}

/// One song and its genre proportions.
#[pyclass(name = "Song", module = "genrebar", frozen, get_all, from_py_object)]
#[derive(Clone)]
struct PySong {
    id: String,
    title: String,
    artist: String,
    genres: PyGenreVector,
}

impl From<&core::SongRecord> for PySong {
    fn from(song: &core::SongRecord) -> Self {
        Self {
            id: song.id.clone(),
            title: song.title.clone(),
            artist: song.artist.clone(),
            genres: PyGenreVector(song.genres.clone()),
        }
    }
}

#[pymethods]
impl PySong {
    #[new]
    fn new(id: String, title: String, artist: String, genres: PyGenreVector) -> Self {
        Self {
            id,
            title,
            artist,
            genres,
        }
    }

    fn __repr__(&self) -> String {
        format!("Song({:?}, {:?}, {:?})", self.id, self.title, self.artist)
    }
}

/// An immutable collection of songs over one genre space.
#[pyclass(name = "Dataset", module = "genrebar", frozen)]
struct PyDataset(Arc<core::Dataset>);

#[pymethods]
impl PyDataset {
    #[new]
    fn new(space: &PyGenreSpace, songs: Vec<PySong>) -> PyResult<Self> {
        let songs = songs
            .into_iter()
            .map(|s| core::SongRecord::new(s.id, s.title, s.artist, s.genres.0))
            .collect();
        core::Dataset::new(space.0.clone(), songs)
            .map(|d| Self(Arc::new(d)))
            .map_err(genre_err)
    }

    /// Parses a `genrebar/1` JSON document.
    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, document: &str) -> PyResult<Self> {
        parse_dataset(document)
    }

    /// Canonical `genrebar/1` JSON text.
    fn to_json(&self) -> String {
        core::serialize_dataset(&self.0)
    }

    #[getter]
    fn space(&self) -> PyGenreSpace {
        PyGenreSpace(self.0.space().clone())
    }

    #[getter]
    fn songs(&self) -> Vec<PySong> {
        self.0.songs().iter().map(PySong::from).collect()
    }

    fn get(&self, id: &str) -> Option<PySong> {
        self.0.get(id).map(PySong::from)
    }

    /// Normalizes `proportions` and returns the `k` nearest songs.
    #[pyo3(signature = (proportions, k = 5))]
    fn search(&self, proportions: Vec<f64>, k: usize) -> PyResult<Vec<(String, f64)>> {
        let query = core::normalize(&proportions, self.0.space()).map_err(genre_err)?;
        core::search_top_k(&self.0, &query, k)
            .map(entries)
            .map_err(genre_err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset({} songs, genres={:?})",
            self.0.len(),
            self.0.space().names()
        )
    }
}

fn entries(result: core::SearchResult) -> Vec<(String, f64)> {
    result
        .entries
        .into_iter()
        .map(|e| (e.song_id, e.distance))
        .collect()
}

/// Spatial index answering the same queries as `search_top_k`.
#[pyclass(name = "SearchIndex", module = "genrebar", frozen)]
struct PySearchIndex(core::SearchIndex);

#[pymethods]
impl PySearchIndex {
    #[new]
    fn new(dataset: &PyDataset) -> PyResult<Self> {
        core::SearchIndex::new(dataset.0.clone())
            .map(Self)
            .map_err(genre_err)
    }

    #[pyo3(signature = (query, k = 5))]
    fn search(&self, query: &PyGenreVector, k: usize) -> PyResult<Vec<(String, f64)>> {
        self.0.search(&query.0, k).map(entries).map_err(genre_err)
    }
}

/// A genre vector together with its draggable handle positions.
#[pyclass(name = "BarState", module = "genrebar", frozen)]
struct PyBarState(core::BarState);

#[pymethods]
impl PyBarState {
    #[new]
    fn new(vector: PyGenreVector) -> Self {
        Self(core::BarState::new(vector.0))
    }

    #[getter]
    fn vector(&self) -> PyGenreVector {
        PyGenreVector(self.0.vector().clone())
    }

    #[getter]
    fn handles(&self) -> Vec<f64> {
        self.0.handles().to_vec()
    }

    /// Returns the state after dragging one handle; `self` is unchanged.
    fn apply_drag(&self, handle_index: usize, target_position: f64) -> PyResult<Self> {
        core::apply_drag(&self.0, core::DragEvent::new(handle_index, target_position))
            .map(Self)
            .map_err(genre_err)
    }

    fn pixel_widths(&self, total_width: u32) -> Vec<u32> {
        self.0.pixel_widths(total_width)
    }

    fn __repr__(&self) -> String {
        format!(
            "BarState(weights={:?}, handles={:?})",
            self.0.vector().weights(),
            self.0.handles()
        )
    }
}

/// Scales non-negative proportions onto the simplex.
#[pyfunction]
fn normalize(raw: Vec<f64>, space: &PyGenreSpace) -> PyResult<PyGenreVector> {
    core::normalize(&raw, &space.0)
        .map(PyGenreVector)
        .map_err(genre_err)
}

/// Euclidean distance between two genre vectors.
#[pyfunction]
fn distance(u: &PyGenreVector, v: &PyGenreVector) -> PyResult<f64> {
    core::distance(&u.0, &v.0).map_err(genre_err)
}

/// Exhaustive top-`k` search: `(song_id, distance)` pairs, nearest first,
/// ties broken by id.
#[pyfunction]
#[pyo3(signature = (dataset, query, k = 5))]
fn search_top_k(
    dataset: &PyDataset,
    query: &PyGenreVector,
    k: usize,
) -> PyResult<Vec<(String, f64)>> {
    core::search_top_k(&dataset.0, &query.0, k)
        .map(entries)
        .map_err(genre_err)
}

/// Integer segment widths summing to `total_width`.
#[pyfunction]
fn segment_pixel_widths(vector: &PyGenreVector, total_width: u32) -> Vec<u32> {
    core::segment_pixel_widths(&vector.0, total_width)
}

#[pyfunction]
fn parse_dataset(document: &str) -> PyResult<PyDataset> {
    core::parse_dataset(document)
        .map(|d| PyDataset(Arc::new(d)))
        .map_err(dataset_err)
}

#[pyfunction]
fn serialize_dataset(dataset: &PyDataset) -> String {
    core::serialize_dataset(&dataset.0)
}

/// Deterministic synthetic dataset for `seed`.
#[pyfunction]
fn generate_fixture(seed: u64, n_songs: usize, genres: Vec<String>) -> PyResult<PyDataset> {
    let n_songs = NonZeroUsize::new(n_songs)
        .ok_or_else(|| error("InvalidSongs", "n_songs must be at least 1"))?;
    let space = core::GenreSpace::new(genres).map_err(genre_err)?;
    let spec = core::FixtureSpec::new(seed, n_songs, space);
    Ok(PyDataset(Arc::new(core::generate_fixture(&spec))))
}

/// The six-song Blues/Country/Jazz example dataset.
#[pyfunction]
fn toy_dataset() -> PyDataset {
    PyDataset(Arc::new(core::toy_dataset()))
}

#[pymodule]
pub fn genrebar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GenrebarError", m.py().get_type::<GenrebarError>())?;
    m.add("FORMAT_VERSION", core::io::FORMAT_VERSION)?;
    m.add("SUM_TOLERANCE", core::SUM_TOLERANCE)?;
    m.add("STEP", core::STEP)?;
    m.add_class::<PyGenreSpace>()?;
    m.add_class::<PyGenreVector>()?;
    m.add_class::<PySong>()?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PySearchIndex>()?;
    m.add_class::<PyBarState>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(search_top_k, m)?)?;
    m.add_function(wrap_pyfunction!(segment_pixel_widths, m)?)?;
    m.add_function(wrap_pyfunction!(parse_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(serialize_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(generate_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(toy_dataset, m)?)?;
    Ok(())
}
