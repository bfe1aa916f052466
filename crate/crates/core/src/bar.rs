//! Headless model of the genre bar: a horizontally stacked bar whose K
//! segments encode a [`GenreVector`] and whose K−1 segment boundaries
//! ("handles") act as slider thumbs.
//!
//! Handle `i` sits at the cumulative sum of the first `i + 1` weights.
//! Dragging a handle moves mass only between the two segments it separates.
//! Handles may meet (a genre can reach 0%) but never cross.

use serde::{Deserialize, Serialize};

use crate::error::{GenreError, Result};
use crate::genre::{argmax, GenreSpace, GenreVector};

/// Drag positions snap to this grid (0.1%).
pub const STEP: f64 = 0.001;

const STEPS_PER_UNIT: f64 = 1000.0;

/// A drop of handle `handle_index` at `target_position` (bar coordinates, unclamped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragEvent {
    pub handle_index: usize,
    pub target_position: f64,
}

impl DragEvent {
    pub fn new(handle_index: usize, target_position: f64) -> Self {
        Self {
            handle_index,
            target_position,
        }
    }
}

/// Slider state: the current vector and its handle positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarState {
    vector: GenreVector,
    handles: Vec<f64>,
}

impl BarState {
    pub fn new(vector: GenreVector) -> Self {
        let handles = handles_from_vector(&vector);
        Self { vector, handles }
    }

    pub fn vector(&self) -> &GenreVector {
        &self.vector
    }

    pub fn handles(&self) -> &[f64] {
        &self.handles
    }

    pub fn apply_drag(&self, event: DragEvent) -> Result<BarState> {
        apply_drag(self, event)
    }

    pub fn pixel_widths(&self, total_width: u32) -> Vec<u32> {
        segment_pixel_widths(&self.vector, total_width)
    }
}

/// Cumulative sums of the first K−1 weights.
pub fn handles_from_vector(vector: &GenreVector) -> Vec<f64> {
    let weights = vector.weights();
    let mut acc = 0.0;
    weights[..weights.len() - 1]
        .iter()
        .map(|w| {
            acc += w;
            acc.min(1.0)
        })
        .collect()
}

/// Inverse of [`handles_from_vector`]: segment widths between consecutive handles.
pub fn vector_from_handles(handles: &[f64], space: &GenreSpace) -> Result<GenreVector> {
    if handles.len() + 1 != space.len() {
        return Err(GenreError::DimensionMismatch {
            expected: space.len() - 1,
            actual: handles.len(),
        });
    }
    for (index, &value) in handles.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(GenreError::OutOfRangeHandle { index, value });
        }
        if index > 0 && value < handles[index - 1] {
            return Err(GenreError::NonMonotonicHandles { index });
        }
    }
    let weights = (0..space.len()).map(|i| segment(handles, i)).collect();
    Ok(GenreVector::from_weights_unchecked(weights))
}

/// Width of segment `i` given the handles, with boundaries at 0 and 1.
fn segment(handles: &[f64], i: usize) -> f64 {
    let lo = if i == 0 { 0.0 } else { handles[i - 1] };
    let hi = handles.get(i).copied().unwrap_or(1.0);
    hi - lo
}

fn quantize(position: f64) -> f64 {
    (position * STEPS_PER_UNIT).round() / STEPS_PER_UNIT
}

/// Moves one handle, snapped to [`STEP`] and clamped between its neighbors.
///
/// Only the two segments adjacent to the handle change; every other weight
/// is carried over bit for bit.
pub fn apply_drag(state: &BarState, event: DragEvent) -> Result<BarState> {
    let handles = &state.handles;
    let j = event.handle_index;
    if j >= handles.len() {
        return Err(GenreError::HandleIndexOutOfRange {
            index: j,
            handles: handles.len(),
        });
    }
    if event.target_position.is_nan() {
        return Ok(state.clone());
    }
    let lower = if j == 0 { 0.0 } else { handles[j - 1] };
    let upper = handles.get(j + 1).copied().unwrap_or(1.0);
    let position = quantize(event.target_position).clamp(lower, upper);
    if position == handles[j] {
        return Ok(state.clone());
    }

    let mut handles = handles.clone();
    handles[j] = position;
    let mut weights = state.vector.weights().to_vec();
    weights[j] = segment(&handles, j);
    weights[j + 1] = segment(&handles, j + 1);
    Ok(BarState {
        vector: GenreVector::from_weights_unchecked(weights),
        handles,
    })
}

/// Integer segment widths summing exactly to `total_width`.
///
/// Each width starts as `round(w_i * total_width)`. Any residue is handed
/// out one pixel at a time, largest weight first, to segments that stay
/// within one pixel of their exact width. For K ≤ 3 this always lands the
/// whole residue on the largest segment.
pub fn segment_pixel_widths(vector: &GenreVector, total_width: u32) -> Vec<u32> {
    let weights = vector.weights();
    let total = f64::from(total_width);
    let exact: Vec<f64> = weights.iter().map(|w| w * total).collect();
    let mut widths: Vec<i64> = exact.iter().map(|x| x.round() as i64).collect();
    let mut residue = i64::from(total_width) - widths.iter().sum::<i64>();

    let mut by_weight: Vec<usize> = (0..weights.len()).collect();
    by_weight.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    debug_assert_eq!(by_weight.first().copied(), Some(argmax(weights)));

    while residue != 0 {
        let step = residue.signum();
        let pick = by_weight.iter().copied().find(|&i| {
            let next = widths[i] + step;
            next >= 0 && (next as f64 - exact[i]).abs() <= 1.0
        });
        // Fall back to the largest segment if rounding noise left no candidate.
        let i = pick.unwrap_or(by_weight[0]);
        widths[i] += step;
        residue -= step;
    }
    widths.into_iter().map(|w| w.max(0) as u32).collect()
}

/// Fixed-width text rendering of a vector, one fill character per genre.
pub fn text_bar(vector: &GenreVector, width: u32) -> String {
    const FILL: [char; 8] = ['#', '=', '-', '+', '*', '~', 'o', '%'];
    segment_pixel_widths(vector, width)
        .iter()
        .enumerate()
        .flat_map(|(i, &w)| std::iter::repeat_n(FILL[i % FILL.len()], w as usize))
        .collect()
}
