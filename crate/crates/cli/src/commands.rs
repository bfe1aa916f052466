use std::io::Write;
use std::num::NonZeroUsize;
use std::path::Path;

use genrebar_core::bar::text_bar;
use genrebar_core::{
    generate_fixture, normalize, parse_dataset_report, search_top_k, serialize_dataset, Dataset,
    DatasetError, FixtureSpec, GenreError, GenreSpace,
};
use genrebar_service::{AppState, LoadError, ServiceConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_ENV: u8 = 2;

/// Width of the text genre bar, in characters.
const BAR_WIDTH: u32 = 40;

fn fail(code: &str, detail: impl std::fmt::Display) -> u8 {
    eprintln!("error[{code}]: {detail}");
    EXIT_DOMAIN
}

fn read(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|err| {
        eprintln!(
            "error[DatasetUnreadable]: cannot read {}: {err}",
            path.display()
        );
        EXIT_ENV
    })
}

fn load(path: &Path) -> Result<Dataset, u8> {
    let text = read(path)?;
    parse_dataset_report(&text).map_err(|errors| report_errors(&errors))
}

fn report_errors(errors: &[DatasetError]) -> u8 {
    for err in errors {
        eprintln!("error[{}]: {err}", err.code());
    }
    EXIT_DOMAIN
}

pub fn validate(path: &Path) -> u8 {
    match load(path) {
        Ok(dataset) => {
            println!(
                "OK ({} songs, {} genres)",
                dataset.len(),
                dataset.space().len()
            );
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn parse_proportions(csv: &str) -> Result<Vec<f64>, String> {
    csv.split(',')
        .map(|field| {
            let field = field.trim();
            field
                .parse::<f64>()
                .map_err(|_| format!("{field:?} is not a number"))
        })
        .collect()
}

pub fn query(path: &Path, proportions: &str, k: usize, porcelain: bool) -> u8 {
    if k == 0 {
        let err = GenreError::InvalidK(k);
        return fail(err.code(), err);
    }
    let raw = match parse_proportions(proportions) {
        Ok(raw) => raw,
        Err(detail) => return fail("MalformedRequest", detail),
    };
    let dataset = match load(path) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let result = normalize(&raw, dataset.space()).and_then(|q| search_top_k(&dataset, &q, k));
    let result = match result {
        Ok(r) => r,
        Err(err) => return fail(err.code(), err),
    };

    let mut out = std::io::stdout().lock();
    if porcelain {
        for (rank, entry) in result.entries.iter().enumerate() {
            let song = dataset
                .get(&entry.song_id)
                .expect("ids come from the dataset");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{:.6}\t{}",
                rank + 1,
                song.id,
                song.title,
                song.artist,
                entry.distance,
                text_bar(&song.genres, BAR_WIDTH)
            );
        }
        return EXIT_OK;
    }

    let legend: Vec<String> = dataset
        .space()
        .names()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let fill = text_bar(&unit(dataset.space(), i), 1);
            format!("{fill} {name} {:.1}%", result.query.weights()[i] * 100.0)
        })
        .collect();
    let _ = writeln!(out, "query  {}", text_bar(&result.query, BAR_WIDTH));
    let _ = writeln!(out, "       {}", legend.join("  "));
    let _ = writeln!(out);

    let id_width = result
        .entries
        .iter()
        .map(|e| e.song_id.len())
        .max()
        .unwrap_or(2)
        .max(2);
    let title_width = result
        .entries
        .iter()
        .filter_map(|e| dataset.get(&e.song_id))
        .map(|s| s.title.chars().count())
        .max()
        .unwrap_or(5)
        .max(5);
    let _ = writeln!(
        out,
        "{:>4}  {:<id_width$}  {:<title_width$}  {:>8}  bar",
        "rank", "id", "title", "distance"
    );
    for (rank, entry) in result.entries.iter().enumerate() {
        let song = dataset
            .get(&entry.song_id)
            .expect("ids come from the dataset");
        let _ = writeln!(
            out,
            "{:>4}  {:<id_width$}  {:<title_width$}  {:>8.6}  {}",
            rank + 1,
            song.id,
            song.title,
            entry.distance,
            text_bar(&song.genres, BAR_WIDTH)
        );
    }
    EXIT_OK
}

fn unit(space: &GenreSpace, axis: usize) -> genrebar_core::GenreVector {
    let mut raw = vec![0.0; space.len()];
    raw[axis] = 1.0;
    normalize(&raw, space).expect("unit vector is valid")
}

pub fn gen(seed: u64, songs: usize, genres: &str) -> u8 {
    let Some(n_songs) = NonZeroUsize::new(songs) else {
        return fail("InvalidSongs", "--songs must be at least 1");
    };
    let space = match GenreSpace::new(genres.split(',')) {
        Ok(space) => space,
        Err(err) => return fail(err.code(), err),
    };
    let dataset = generate_fixture(&FixtureSpec::new(seed, n_songs, space));
    let mut out = std::io::stdout().lock();
    if out
        .write_all(serialize_dataset(&dataset).as_bytes())
        .is_err()
    {
        return EXIT_ENV;
    }
    EXIT_OK
}

pub fn serve(config: ServiceConfig, host: &str) -> u8 {
    if let Err(err) = config.validate() {
        return fail("InvalidConfig", err);
    }
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .try_init();

    let state = match AppState::load(config.clone()) {
        Ok(state) => state,
        Err(LoadError::Invalid(errors)) => {
            report_errors(&errors);
            return EXIT_ENV;
        }
        Err(err @ LoadError::Io { .. }) => {
            eprintln!("error[DatasetUnreadable]: {err}");
            return EXIT_ENV;
        }
    };

    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(err) => {
            eprintln!("error[Runtime]: {err}");
            return EXIT_ENV;
        }
    };
    runtime.block_on(async move {
        let listener = match tokio::net::TcpListener::bind((host, config.port)).await {
            Ok(l) => l,
            Err(err) => {
                eprintln!(
                    "error[BindFailed]: cannot listen on {host}:{}: {err}",
                    config.port
                );
                return EXIT_ENV;
            }
        };
        let addr = listener
            .local_addr()
            .map(|a| a.to_string())
            .unwrap_or_default();
        println!("listening on http://{addr}");
        let _ = std::io::stdout().flush();
        match config.webui_dir.as_ref().filter(|d| d.is_dir()) {
            Some(dir) => tracing::info!("serving web UI from {}", dir.display()),
            None => tracing::warn!("web UI bundle not found; serving the API only"),
        }
        match genrebar_service::serve(listener, state).await {
            Ok(()) => EXIT_OK,
            Err(err) => {
                eprintln!("error[ServeFailed]: {err}");
                EXIT_ENV
            }
        }
    })
}
