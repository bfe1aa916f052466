use std::num::NonZeroUsize;

use genrebar_core::{
    apply_drag, build_index, distance, generate_fixture, handles_from_vector, normalize,
    parse_dataset, search_top_k, segment_pixel_widths, serialize_dataset, validate_vector,
    vector_from_handles, BarState, Dataset, DragEvent, FixtureSpec, GenreSpace, GenreVector,
    SongRecord,
};
use proptest::prelude::*;

fn space_of(k: usize) -> GenreSpace {
    GenreSpace::new((0..k).map(|i| format!("genre-{i}"))).unwrap()
}

/// Raw nonnegative inputs with at least one positive entry.
fn raw_weights(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..1000.0f64], k)
        .prop_filter("needs positive mass", |v| v.iter().any(|&x| x > 0.0))
}

fn simplex_point(k: usize) -> impl Strategy<Value = GenreVector> {
    raw_weights(k).prop_map(move |raw| normalize(&raw, &space_of(k)).unwrap())
}

/// Exhaustive reference ranking, written independently of the library:
/// score everything, sort everything, keep the first k.
fn oracle(dataset: &Dataset, query: &[f64], k: usize) -> Vec<(String, f64)> {
    let mut all: Vec<(String, f64)> = dataset
        .songs()
        .iter()
        .map(|s| {
            let mut sq = 0.0;
            for (a, b) in query.iter().zip(s.genres.weights()) {
                sq += (a - b) * (a - b);
            }
            (s.id.clone(), f64::sqrt(sq))
        })
        .collect();
    all.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

fn entries(result: &genrebar_core::SearchResult) -> Vec<(String, f64)> {
    result
        .entries
        .iter()
        .map(|e| (e.song_id.clone(), e.distance))
        .collect()
}

/// Dataset with coarse coordinates so exact distance ties are common.
fn dataset_strategy() -> impl Strategy<Value = (Dataset, GenreVector, usize)> {
    (2usize..=6, 1usize..=120).prop_flat_map(|(k, n)| {
        let point = prop::collection::vec(0u8..=4, k)
            .prop_filter("mass", |v| v.iter().any(|&x| x > 0))
            .prop_map(|v| v.into_iter().map(f64::from).collect::<Vec<_>>());
        let ids = prop::collection::hash_set("[a-z]{1,6}", n);
        (
            Just(k),
            ids,
            prop::collection::vec(point.clone(), n),
            point,
            1usize..=130,
        )
            .prop_map(|(k, ids, points, query, top)| {
                let space = space_of(k);
                let songs = ids
                    .into_iter()
                    .zip(points)
                    .map(|(id, p)| SongRecord::new(id, "", "", space.normalize(&p).unwrap()))
                    .collect();
                let dataset = Dataset::new(space.clone(), songs).unwrap();
                (dataset, space.normalize(&query).unwrap(), top)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_output_is_exactly_valid(raw in (2usize..=8).prop_flat_map(raw_weights)) {
        let space = space_of(raw.len());
        let v = normalize(&raw, &space).unwrap();
        prop_assert!(validate_vector(v.weights(), &space).is_valid());
        prop_assert_eq!(v.weights().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn normalize_is_idempotent(raw in (2usize..=8).prop_flat_map(raw_weights)) {
        let space = space_of(raw.len());
        let once = normalize(&raw, &space).unwrap();
        let twice = normalize(once.weights(), &space).unwrap();
        for (a, b) in once.weights().iter().zip(twice.weights()) {
            prop_assert!((a - b).abs() <= 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn normalize_is_scale_invariant(
        raw in (2usize..=8).prop_flat_map(raw_weights),
        scale in prop_oneof![1e-6..1.0f64, 1.0..1e6f64],
    ) {
        let space = space_of(raw.len());
        let scaled: Vec<f64> = raw.iter().map(|x| x * scale).collect();
        let a = normalize(&raw, &space).unwrap();
        let b = normalize(&scaled, &space).unwrap();
        for (x, y) in a.weights().iter().zip(b.weights()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn distance_is_a_metric(
        (u, v, w) in (2usize..=6).prop_flat_map(|k| (simplex_point(k), simplex_point(k), simplex_point(k)))
    ) {
        let uv = distance(&u, &v).unwrap();
        let vu = distance(&v, &u).unwrap();
        prop_assert!(uv >= 0.0);
        prop_assert_eq!(uv, vu);
        prop_assert_eq!(distance(&u, &u).unwrap(), 0.0);
        let uw = distance(&u, &w).unwrap();
        let wv = distance(&w, &v).unwrap();
        prop_assert!(uv <= uw + wv + 1e-12);
        prop_assert!(uv <= 2f64.sqrt() + 1e-12);
    }

    #[test]
    fn search_paths_agree_with_oracle((dataset, query, k) in dataset_strategy()) {
        let expected = oracle(&dataset, query.weights(), k);
        let brute = search_top_k(&dataset, &query, k).unwrap();
        let indexed = build_index(&dataset).unwrap().search(&query, k).unwrap();
        prop_assert_eq!(brute.entries.len(), k.min(dataset.len()));
        prop_assert_eq!(&entries(&brute), &expected);
        prop_assert_eq!(&entries(&indexed), &expected);
    }

    #[test]
    fn search_prefix_and_permutation((dataset, query, k) in dataset_strategy(), seed in any::<u64>()) {
        let full = search_top_k(&dataset, &query, k).unwrap();
        prop_assert!(full.entries.windows(2).all(|w| w[0].distance <= w[1].distance));
        for j in 1..=full.entries.len() {
            let prefix = search_top_k(&dataset, &query, j).unwrap();
            prop_assert_eq!(&prefix.entries[..], &full.entries[..j]);
        }

        // rotate storage order
        let mut songs = dataset.songs().to_vec();
        let shift = (seed as usize) % songs.len();
        songs.rotate_left(shift);
        songs.reverse();
        let permuted = Dataset::new(dataset.space().clone(), songs).unwrap();
        prop_assert_eq!(search_top_k(&permuted, &query, k).unwrap(), full.clone());
        prop_assert_eq!(search_top_k(&dataset, &query, k).unwrap(), full);
    }

    #[test]
    fn handles_round_trip(v in (2usize..=8).prop_flat_map(simplex_point)) {
        let space = space_of(v.dim());
        let handles = handles_from_vector(&v);
        prop_assert_eq!(handles.len(), v.dim() - 1);
        prop_assert!(handles.windows(2).all(|w| w[0] <= w[1]));
        let back = vector_from_handles(&handles, &space).unwrap();
        for (a, b) in back.weights().iter().zip(v.weights()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn drag_sequences_stay_on_simplex(
        v in (2usize..=6).prop_flat_map(simplex_point),
        drags in prop::collection::vec((0usize..5, -0.5..1.5f64), 1..60),
    ) {
        let mut state = BarState::new(v);
        let handles = state.handles().len();
        for (h, target) in drags {
            let event = DragEvent::new(h % handles, target);
            let next = apply_drag(&state, event).unwrap();
            let before = state.vector().weights();
            let after = next.vector().weights();
            let changed: Vec<usize> = (0..after.len()).filter(|&i| before[i] != after[i]).collect();
            prop_assert!(changed.len() <= 2);
            if let [a, b] = changed[..] {
                prop_assert_eq!(b, a + 1);
                prop_assert!(((before[a] + before[b]) - (after[a] + after[b])).abs() <= 1e-12);
            }
            prop_assert!(after.iter().all(|w| (0.0..=1.0).contains(w)));
            prop_assert!((after.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let mut acc = 0.0;
            for (i, h) in next.handles().iter().enumerate() {
                acc += after[i];
                prop_assert!((acc - h).abs() <= 1e-12);
            }
            state = next;
        }
    }

    #[test]
    fn pixel_widths_are_exact_and_close(
        v in (2usize..=8).prop_flat_map(simplex_point),
        width in 8u32..=4000,
    ) {
        let widths = segment_pixel_widths(&v, width);
        prop_assert_eq!(widths.iter().sum::<u32>(), width);
        for (px, w) in widths.iter().zip(v.weights()) {
            prop_assert!((f64::from(*px) - w * f64::from(width)).abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn fixtures_round_trip(seed in any::<u64>(), n in 1usize..=40, k in 2usize..=6) {
        let spec = FixtureSpec::new(seed, NonZeroUsize::new(n).unwrap(), space_of(k));
        let dataset = generate_fixture(&spec);
        for song in dataset.songs() {
            prop_assert!(validate_vector(song.genres.weights(), dataset.space()).is_valid());
        }
        let text = serialize_dataset(&dataset);
        prop_assert_eq!(&text, &serialize_dataset(&generate_fixture(&spec)));
        let back = parse_dataset(&text).unwrap();
        prop_assert_eq!(back.space(), dataset.space());
        prop_assert_eq!(back.len(), dataset.len());
        for (a, b) in back.songs().iter().zip(dataset.songs()) {
            prop_assert_eq!(&a.id, &b.id);
            prop_assert_eq!(&a.title, &b.title);
            prop_assert_eq!(&a.artist, &b.artist);
            for (x, y) in a.genres.weights().iter().zip(b.genres.weights()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
        prop_assert_eq!(serialize_dataset(&back), text);
    }
}

#[test]
fn fixture_component_means_are_uniform() {
    let spec = FixtureSpec::new(42, NonZeroUsize::new(10_000).unwrap(), space_of(3));
    let dataset = generate_fixture(&spec);
    for axis in 0..3 {
        let mean = dataset
            .songs()
            .iter()
            .map(|s| s.genres.weights()[axis])
            .sum::<f64>()
            / dataset.len() as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.01, "axis {axis}: {mean}");
    }
}

#[test]
fn index_equivalence_on_large_random_sets() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for k in 2..=6 {
        let space = space_of(k);
        let spec = FixtureSpec::new(
            rng.random(),
            NonZeroUsize::new(2000).unwrap(),
            space.clone(),
        );
        let dataset = generate_fixture(&spec);
        let index = build_index(&dataset).unwrap();
        for _ in 0..50 {
            let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
            let q = normalize(&raw, &space).unwrap();
            let top = rng.random_range(1..=25);
            let expected = oracle(&dataset, q.weights(), top);
            assert_eq!(entries(&index.search(&q, top).unwrap()), expected);
        }
    }
}
