use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use genrebar_core::{serialize_dataset, toy_dataset};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genrebar"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn toy_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy.json")
}

fn toy_file(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("toy.json");
    std::fs::write(&path, serialize_dataset(&toy_dataset())).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn checked_in_toy_dataset_is_canonical() {
    let expected = serialize_dataset(&toy_dataset());
    if std::env::var_os("GENREBAR_BLESS").is_some() {
        std::fs::write(toy_path(), &expected).unwrap();
    }
    let on_disk = std::fs::read_to_string(toy_path()).unwrap();
    assert_eq!(
        on_disk, expected,
        "rerun with GENREBAR_BLESS=1 to refresh data/toy.json"
    );
}

#[test]
fn validate_reports_ok_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let toy = toy_file(&dir);
    let ok = run(&["validate", &toy]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "OK (6 songs, 3 genres)");

    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(&toy).unwrap().replace(
        "[0.500000, 0.250000, 0.250000]",
        "[0.500000, 0.600000, 0.250000]",
    );
    std::fs::write(&bad, text).unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("song-0001"), "{}", stderr(&out));
    assert!(stderr(&out).contains("ValidationFailed"));

    let missing = run(&["validate", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn query_ranks_toy_mix() {
    let dir = tempfile::tempdir().unwrap();
    let toy = toy_file(&dir);
    let out = run(&["query", &toy, "--proportions", "0.223,0.60,0.177"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let first = text
        .lines()
        .find(|l| l.trim_start().starts_with("1 "))
        .unwrap();
    assert!(
        first.contains("song-0002") && first.contains("0.000000"),
        "{first}"
    );
    // header + legend + blank + column header + 5 rows
    assert_eq!(text.lines().count(), 9);
}

fn porcelain_ids(toy: &str, proportions: &str, k: &str) -> Vec<(String, String)> {
    let out = run(&[
        "query",
        toy,
        "--proportions",
        proportions,
        "-k",
        k,
        "--porcelain",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    stdout(&out)
        .lines()
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            assert_eq!(cols.len(), 6);
            assert_eq!(cols[5].chars().count(), 40);
            (cols[1].to_owned(), cols[4].to_owned())
        })
        .collect()
}

#[test]
fn percentages_rank_like_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let toy = toy_file(&dir);
    let fractions = porcelain_ids(&toy, "0.223,0.60,0.177", "6");
    let percents = porcelain_ids(&toy, "22.3,60,17.7", "6");
    assert_eq!(fractions, percents);
    let ids: Vec<&str> = fractions.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(
        ids,
        [
            "song-0002",
            "song-0006",
            "song-0001",
            "song-0004",
            "song-0003",
            "song-0005"
        ]
    );
}

#[test]
fn query_errors() {
    let dir = tempfile::tempdir().unwrap();
    let toy = toy_file(&dir);
    let out = run(&["query", &toy, "--proportions", "1,1,1", "-k", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("InvalidK"));

    let out = run(&["query", &toy, "--proportions", "0,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ZeroMass"));

    let out = run(&["query", &toy, "--proportions", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("DimensionMismatch"));

    let out = run(&["query", &toy, "--proportions", "-1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("NegativeWeight"));

    let out = run(&["query", &toy, "--proportions", "a,b,c"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("MalformedRequest"));
}

#[test]
fn gen_is_deterministic_and_valid() {
    let args = [
        "gen",
        "--seed",
        "42",
        "--songs",
        "3",
        "--genres",
        "Blues,Country,Jazz",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    assert_eq!(
        run(&["gen", "--songs", "3", "--genres", "Blues"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["gen", "--songs", "0", "--genres", "a,b"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["gen", "--songs", "x", "--genres", "a,b"])
            .status
            .code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let out = run(&[
        "gen",
        "--seed",
        "7",
        "--songs",
        "100",
        "--genres",
        "Blues,Country,Jazz",
    ]);
    std::fs::write(&path, &out.stdout).unwrap();
    let check = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(stdout(&check).trim(), "OK (100 songs, 3 genres)");
}

fn http_get(addr: &str, path: &str) -> (u16, String) {
    let mut stream = TcpStream::connect(addr).unwrap();
    write!(
        stream,
        "GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n"
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    let status = response[9..12].parse().unwrap();
    let body = response.split("\r\n\r\n").nth(1).unwrap_or("").to_owned();
    (status, body)
}

struct Server(std::process::Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

#[test]
fn serve_answers_api_without_webui() {
    let dir = tempfile::tempdir().unwrap();
    let toy = toy_file(&dir);
    let mut child = bin()
        .args(["serve", "--dataset", &toy, "--port", "0", "--webui"])
        .arg(dir.path().join("no-such-bundle"))
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stdout.take().unwrap())
        .read_line(&mut line)
        .unwrap();
    let _server = Server(child);
    let addr = line
        .trim()
        .strip_prefix("listening on http://")
        .unwrap()
        .to_owned();

    let (status, body) = http_get(&addr, "/api/genres");
    assert_eq!(status, 200);
    let json: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(
        json["genres"],
        serde_json::json!(["Blues", "Country", "Jazz"])
    );
    assert_eq!(json["count"], 6);

    let (status, body) = http_get(&addr, "/");
    assert_eq!(status, 404);
    assert!(body.contains("web UI bundle not found"), "{body}");
}

#[test]
fn serve_fails_fast_on_bad_dataset_or_busy_port() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"version\": \"genrebar/1\"").unwrap();
    let out = run(&["serve", "--dataset", bad.to_str().unwrap(), "--port", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let busy = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let toy = toy_file(&dir);
    let out = run(&["serve", "--dataset", &toy, "--port", &port]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("BindFailed"));
}

#[test]
fn serve_reads_environment() {
    let dir = tempfile::tempdir().unwrap();
    let busy = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let out = bin()
        .arg("serve")
        .env("GENREBAR_DATASET", toy_file(&dir))
        .env("GENREBAR_PORT", &port)
        .output()
        .unwrap();
    // dataset from the environment loads; the port from the environment is taken
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains(&format!(":{port}")),
        "{}",
        stderr(&out)
    );
}
