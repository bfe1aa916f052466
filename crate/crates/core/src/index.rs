//! kd-tree over an immutable dataset snapshot.
//!
//! Correctness is defined by equivalence with [`crate::search::search_top_k`]:
//! same ids, same order, same distances. Distances are computed with the
//! same routine as the brute-force path, and a subtree is skipped only when
//! its splitting plane is strictly farther than the current k-th candidate,
//! so equal-distance ties with smaller ids are never pruned away.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::dataset::Dataset;
use crate::error::{GenreError, Result};
use crate::genre::{squared_euclidean, GenreVector};
use crate::search::{check_query, into_result, Scored, SearchResult};

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Acceleration structure for exact top-k queries.
#[derive(Debug, Clone)]
pub struct SearchIndex {
    dataset: Arc<Dataset>,
    dim: usize,
    /// Dataset positions in tree order.
    order: Vec<usize>,
    /// Coordinates laid out in tree order, `dim` per point.
    points: Vec<f64>,
    nodes: Vec<Node>,
    root: usize,
}

impl SearchIndex {
    pub fn new(dataset: Arc<Dataset>) -> Result<Self> {
        if dataset.is_empty() {
            return Err(GenreError::EmptyDataset);
        }
        let dim = dataset.space().len();
        let mut builder = Builder {
            dataset: &dataset,
            order: (0..dataset.len()).collect(),
            nodes: Vec::new(),
        };
        let root = builder.build(0, dataset.len());
        let Builder { order, nodes, .. } = builder;

        let mut points = Vec::with_capacity(order.len() * dim);
        for &pos in &order {
            points.extend_from_slice(dataset.songs()[pos].genres.weights());
        }
        Ok(Self {
            dim,
            order,
            points,
            nodes,
            root,
            dataset,
        })
    }

    /// The snapshot this index was built from.
    pub fn dataset(&self) -> &Arc<Dataset> {
        &self.dataset
    }

    pub fn search(&self, query: &GenreVector, k: usize) -> Result<SearchResult> {
        check_query(&self.dataset, query, k)?;
        let mut heap = BinaryHeap::with_capacity(k.min(self.order.len()) + 1);
        self.visit(self.root, query.weights(), k, &mut heap);
        let mut ranked: Vec<Candidate<'_>> = heap.into_vec();
        ranked.sort_unstable();
        Ok(into_result(
            &self.dataset,
            query,
            k,
            ranked.into_iter().map(|c| Scored {
                distance: c.distance,
                position: c.position,
            }),
        ))
    }

    fn visit<'a>(
        &'a self,
        node: usize,
        query: &[f64],
        k: usize,
        heap: &mut BinaryHeap<Candidate<'a>>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for slot in start..end {
                    let point = &self.points[slot * self.dim..(slot + 1) * self.dim];
                    let position = self.order[slot];
                    let candidate = Candidate {
                        distance: squared_euclidean(query, point).sqrt(),
                        id: &self.dataset.songs()[position].id,
                        position,
                    };
                    if heap.len() < k {
                        heap.push(candidate);
                    } else if heap.peek().is_some_and(|worst| candidate < *worst) {
                        heap.pop();
                        heap.push(candidate);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = query[axis] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.visit(near, query, k, heap);
                let plane = (diff * diff).sqrt();
                let must_visit =
                    heap.len() < k || heap.peek().is_some_and(|worst| plane <= worst.distance);
                if must_visit {
                    self.visit(far, query, k, heap);
                }
            }
        }
    }
}

struct Builder<'a> {
    dataset: &'a Dataset,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn coord(&self, position: usize, axis: usize) -> f64 {
        self.dataset.songs()[position].genres.weights()[axis]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }

        let dim = self.dataset.space().len();
        let (mut axis, mut spread) = (0, 0.0);
        for a in 0..dim {
            let (lo, hi) = self.order[start..end]
                .iter()
                .map(|&p| self.coord(p, a))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                    (lo.min(c), hi.max(c))
                });
            if hi - lo > spread {
                axis = a;
                spread = hi - lo;
            }
        }
        if spread == 0.0 {
            // all points coincide
            return id;
        }

        let mid = start + (end - start) / 2;
        let songs = self.dataset.songs();
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            songs[a].genres.weights()[axis].total_cmp(&songs[b].genres.weights()[axis])
        });
        let value = self.coord(self.order[mid], axis);

        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }
}

/// Heap entry ordered like the brute-force ranking (distance, then id).
#[derive(Debug)]
struct Candidate<'a> {
    distance: f64,
    id: &'a str,
    position: usize,
}

impl PartialEq for Candidate<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate<'_> {}

impl PartialOrd for Candidate<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then_with(|| self.id.cmp(other.id))
    }
}

/// Builds an index over a private copy of `dataset`.
pub fn build_index(dataset: &Dataset) -> Result<SearchIndex> {
    SearchIndex::new(Arc::new(dataset.clone()))
}

pub fn search_top_k_indexed(
    index: &SearchIndex,
    query: &GenreVector,
    k: usize,
) -> Result<SearchResult> {
    index.search(query, k)
}
