//! Deterministic synthetic datasets.

use std::num::NonZeroUsize;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::dataset::{Dataset, SongRecord};
use crate::genre::{absorb_residue, argmax, GenreSpace, GenreVector};

/// Inputs of [`generate_fixture`].
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub seed: u64,
    pub n_songs: NonZeroUsize,
    pub space: GenreSpace,
}

impl FixtureSpec {
    pub fn new(seed: u64, n_songs: NonZeroUsize, space: GenreSpace) -> Self {
        Self {
            seed,
            n_songs,
            space,
        }
    }
}

const ADJECTIVES: &[&str] = &[
    "Midnight", "Dusty", "Blue", "Lonesome", "Electric", "Velvet", "Golden", "Rusty", "Smoky",
    "Silver", "Crooked", "Sweet", "Lazy", "Wild", "Quiet", "Restless",
];
const NOUNS: &[&str] = &[
    "Highway",
    "River",
    "Train",
    "Porch",
    "Saloon",
    "Moon",
    "Harbor",
    "Ramble",
    "Shuffle",
    "Waltz",
    "Crossroads",
    "Heartache",
    "Serenade",
    "Stomp",
    "Lullaby",
    "Swing",
];
const FIRST_NAMES: &[&str] = &[
    "Ada", "Bessie", "Cal", "Dolly", "Earl", "Fats", "Gus", "Hattie", "Ike", "June", "Lefty",
    "Mabel", "Nat", "Odetta", "Pearl", "Roscoe",
];
const LAST_NAMES: &[&str] = &[
    "Abbott", "Baker", "Carter", "Dixon", "Ellis", "Fuller", "Greer", "Hooker", "Irving", "Jordan",
    "King", "Lomax", "Monroe", "Nelson", "Owens", "Parker",
];

/// Micro-units per unit weight; matches the six serialized decimals.
const MICRO: i64 = 1_000_000;

/// Songs drawn uniformly from the simplex (normalized unit exponentials),
/// snapped to the six-decimal grid of the file format so that fixtures
/// survive a serialize/parse round trip unchanged.
pub fn generate_fixture(spec: &FixtureSpec) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n_songs.get();
    let width = n.to_string().len().max(4);
    let k = spec.space.len();

    let songs = (1..=n)
        .map(|i| {
            let genres = loop {
                let raw: Vec<f64> = (0..k).map(|_| rng.sample(Exp1)).collect();
                if let Some(v) = snap_to_grid(&raw) {
                    break v;
                }
            };
            let title = format!(
                "{} {}",
                ADJECTIVES.choose(&mut rng).unwrap(),
                NOUNS.choose(&mut rng).unwrap()
            );
            let artist = format!(
                "{} {}",
                FIRST_NAMES.choose(&mut rng).unwrap(),
                LAST_NAMES.choose(&mut rng).unwrap()
            );
            SongRecord::new(format!("song-{i:0width$}"), title, artist, genres)
        })
        .collect();
    Dataset::new(spec.space.clone(), songs).expect("generated ids are unique")
}

/// Normalizes `raw` onto multiples of 1e-6, largest component absorbing the
/// integer residue, then fixes the float sum to exactly 1.
fn snap_to_grid(raw: &[f64]) -> Option<GenreVector> {
    let total: f64 = raw.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let mut micros: Vec<i64> = raw
        .iter()
        .map(|r| (r / total * MICRO as f64).round() as i64)
        .collect();
    let largest = argmax(raw);
    micros[largest] += MICRO - micros.iter().sum::<i64>();
    let mut weights: Vec<f64> = micros.iter().map(|&m| m as f64 / MICRO as f64).collect();
    absorb_residue(&mut weights);
    Some(GenreVector::from_weights_unchecked(weights))
}

/// The six-song Blues/Country/Jazz toy dataset: two mixed songs, the three
/// pure-genre vertices and the centroid.
pub fn toy_dataset() -> Dataset {
    let space = GenreSpace::new(["Blues", "Country", "Jazz"]).expect("valid space");
    let v = |w: [f64; 3]| GenreVector::new(w.to_vec(), &space).expect("valid vector");
    let songs = vec![
        SongRecord::new(
            "song-0001",
            "Half Past Midnight",
            "Lena Marsh",
            v([0.5, 0.25, 0.25]),
        ),
        SongRecord::new(
            "song-0002",
            "Dust on the Dial",
            "The Prairie Lights",
            v([0.223, 0.60, 0.177]),
        ),
        SongRecord::new(
            "song-0003",
            "Delta Morning",
            "Willie Cole",
            v([1.0, 0.0, 0.0]),
        ),
        SongRecord::new(
            "song-0004",
            "Gravel Road Home",
            "June Harlan",
            v([0.0, 1.0, 0.0]),
        ),
        SongRecord::new(
            "song-0005",
            "Blue Note Alley",
            "Ray Ostrowski Trio",
            v([0.0, 0.0, 1.0]),
        ),
        SongRecord::new("song-0006", "Three Rivers", "The Crossing", space.uniform()),
    ];
    Dataset::new(space, songs).expect("toy ids are unique")
}
