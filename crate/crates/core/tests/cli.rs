use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use num_rational::BigRational;

use frugal_sampling::cli::{run, EXIT_FORMAT, EXIT_INPUT, EXIT_OK, EXIT_VERIFY};
use frugal_sampling::verify::{chi_square, ExactDistribution, DEFAULT_ALPHA};
use frugal_sampling::Outcome;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn frugal(args: &[&str], stdin: &str) -> Output {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("frugal").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {out:?}"))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn stream_three_lines_uses_five_bits() {
    let a = frugal(&["stream", "-e", "1/2", "--seed", "11"], "a\nb\nc\n");
    assert_eq!(a.code, EXIT_OK, "{}", a.err);
    assert_eq!(field(&a.out, "bits"), "5");
    assert_eq!(field(&a.out, "items"), "3");
    let b = frugal(&["stream", "-e", "1/2", "--seed", "11"], "a\nb\nc\n");
    assert_eq!(a.out, b.out);
}

#[test]
fn stream_single_and_empty_inputs() {
    for seed in 0..40 {
        let o = frugal(&["stream", "--seed", &seed.to_string()], "only\n");
        assert_eq!(field(&o.out, "sample"), "only");
    }
    let o = frugal(&["stream", "--seed", "1"], "");
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(field(&o.out, "sample"), "BOT");
    assert_eq!(field(&o.out, "items"), "0");
}

#[test]
fn stream_checkpoints_and_stats() {
    let input: String = (1..=10).map(|i| format!("item{i}\n")).collect();
    let o = frugal(
        &["stream", "--seed", "4", "--checkpoint", "3", "--stats"],
        &input,
    );
    let cps: Vec<&str> = o
        .out
        .lines()
        .filter(|l| l.starts_with("checkpoint="))
        .collect();
    assert_eq!(cps.len(), 3);
    assert!(cps[0].starts_with("checkpoint=3 sample="));
    assert_eq!(field(&o.out, "max_buffered"), "1");
}

#[test]
fn stream_reads_files_and_reports_missing_ones() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "in.txt", "x\ny\n");
    let o = frugal(&["stream", "--seed", "2", "--input", &p], "");
    assert_eq!(field(&o.out, "items"), "2");
    let missing = dir.path().join("nope.txt");
    let o = frugal(&["stream", "--input", missing.to_str().unwrap()], "");
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn bad_epsilon_is_an_input_error() {
    for e in ["0.25", "1/1", "0/3", "3/2", "x"] {
        assert_eq!(
            frugal(&["stream", "-e", e, "--seed", "1"], "a\n").code,
            EXIT_INPUT,
            "{e}"
        );
    }
}

#[test]
fn weighted_zero_and_malformed_lines() {
    let o = frugal(&["weighted", "--seed", "1"], "0\tx\n");
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(field(&o.out, "sample"), "BOT");
    assert_eq!(field(&o.out, "skipped"), "1");
    let o = frugal(&["weighted", "--seed", "1"], "5\tpay load\n");
    assert_eq!(field(&o.out, "sample"), "pay load");
    let o = frugal(&["weighted", "--seed", "1"], "1\ta\n2\tb\nnotab\n");
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.err.contains("line 3"), "{}", o.err);
    let o = frugal(&["weighted", "--seed", "1"], "1\ta\n-4\tb\n");
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.err.contains("line 2"), "{}", o.err);
}

#[test]
fn weighted_one_three_over_seeds() {
    let mut obs = BTreeMap::new();
    for seed in 0..100_000u64 {
        let o = frugal(
            &["weighted", "-e", "1/2", "--seed", &seed.to_string()],
            "1\ta\n3\tb\n",
        );
        let item = match field(&o.out, "sample") {
            "a" => Outcome::Item(1),
            "b" => Outcome::Item(2),
            _ => Outcome::Bot,
        };
        *obs.entry(item).or_insert(0u64) += 1;
    }
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let expected = ExactDistribution::from_probabilities([
        (Outcome::Item(1), q(1, 4)),
        (Outcome::Item(2), q(3, 4)),
    ])
    .unwrap();
    let c = chi_square(&obs, &expected, DEFAULT_ALPHA).unwrap();
    assert!(c.pass, "{c:?}");
}

#[test]
fn succinct_additive_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.txt", "1\n3\n");
    let idx = dir.path().join("i.ssmp");
    let idx = idx.to_str().unwrap();
    let b = frugal(
        &[
            "succinct",
            "build",
            "--weights",
            &w,
            "--mode",
            "add",
            "-e",
            "1/4",
            "--output",
            idx,
        ],
        "",
    );
    assert_eq!(b.code, EXIT_OK, "{}", b.err);
    let i = frugal(
        &["succinct", "inspect", "--index", idx, "--weights", &w],
        "",
    );
    assert_eq!(i.code, EXIT_OK);
    assert_eq!(field(&i.out, "max_add_deviation"), "0");
    assert_eq!(field(&i.out, "mode"), "add");
    assert_eq!(field(&i.out, "n"), "2");
    let plain = frugal(&["succinct", "inspect", "--index", idx], "");
    assert!(!plain.out.contains("deviation"));
}

#[test]
fn succinct_single_weight_always_one() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.txt", "9\n");
    let idx = dir.path().join("i.ssmp");
    let idx = idx.to_str().unwrap();
    for mode in ["mult", "add"] {
        let b = frugal(
            &[
                "succinct",
                "build",
                "--weights",
                &w,
                "--mode",
                mode,
                "-e",
                "1/4",
                "--output",
                idx,
            ],
            "",
        );
        assert_eq!(b.code, EXIT_OK, "{}", b.err);
        let q = frugal(
            &[
                "succinct", "query", "--index", idx, "--trials", "200", "--seed", "3",
            ],
            "",
        );
        assert_eq!(q.out.lines().count(), 200);
        assert!(q.out.lines().all(|l| l == "1"));
    }
}

#[test]
fn succinct_mult_forty_five_three() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.txt", "45\n3\n");
    let idx = dir.path().join("i.ssmp");
    let idx = idx.to_str().unwrap();
    let b = frugal(
        &[
            "succinct",
            "build",
            "--weights",
            &w,
            "--mode",
            "mult",
            "-e",
            "1/4",
            "--width",
            "6",
            "--output",
            idx,
        ],
        "",
    );
    assert_eq!(b.code, EXIT_OK, "{}", b.err);
    let i = frugal(
        &["succinct", "inspect", "--index", idx, "--weights", &w],
        "",
    );
    assert_eq!(field(&i.out, "w"), "6");
    // max(|44*48/(47*45) - 1|, |48/47 - 1|) = max(1/705, 1/47)
    assert_eq!(field(&i.out, "max_mult_deviation"), "1/47");
    assert_eq!(field(&i.out, "violations"), "0");
}

#[test]
fn succinct_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(dir.path(), "w.txt", "4\n2\n7\n");
    let idx = dir.path().join("i.ssmp");
    let idx_s = idx.to_str().unwrap();
    let b = frugal(
        &[
            "succinct",
            "build",
            "--weights",
            &w,
            "--mode",
            "add",
            "-e",
            "3/8",
            "--output",
            idx_s,
        ],
        "",
    );
    assert_eq!(b.code, EXIT_INPUT);
    let b = frugal(
        &[
            "succinct",
            "build",
            "--weights",
            &w,
            "--mode",
            "mult",
            "-e",
            "1/3",
            "--output",
            idx_s,
        ],
        "",
    );
    assert_eq!(b.code, EXIT_INPUT);
    let b = frugal(
        &[
            "succinct",
            "build",
            "--weights",
            &w,
            "--mode",
            "mult",
            "-e",
            "1/8",
            "--output",
            idx_s,
        ],
        "",
    );
    assert_eq!(b.code, EXIT_OK);
    let mut bytes = fs::read(&idx).unwrap();
    let last = bytes.len() - 6;
    bytes[last] ^= 0x10;
    let bad = dir.path().join("bad.ssmp");
    fs::write(&bad, &bytes).unwrap();
    let q = frugal(&["succinct", "query", "--index", bad.to_str().unwrap()], "");
    assert_eq!(q.code, EXIT_FORMAT);
    let i = frugal(&["succinct", "inspect", "--index", w.as_str()], "");
    assert_eq!(i.code, EXIT_FORMAT);
}

#[test]
fn bench_bits_examples() {
    let o = frugal(
        &[
            "bench-bits",
            "--n",
            "1,3",
            "-e",
            "1/2",
            "--trials",
            "8",
            "--seed",
            "5",
        ],
        "",
    );
    assert_eq!(o.code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(o.out.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["strategy", "n", "trials", "mean_bits", "max_bits"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let get = |s: &str, n: &str| {
        rows.iter()
            .find(|r| &r[0] == s && &r[1] == n)
            .unwrap()
            .clone()
    };
    assert_eq!(&get("doubling", "3")[3], "5.0");
    assert_eq!(&get("doubling", "3")[4], "5");
    assert_eq!(&get("basic", "1")[4], "0");
    // Worst case equals the mean: one value for every trial.
    let d = frugal(
        &[
            "bench-bits",
            "--n",
            "1000",
            "--strategies",
            "doubling",
            "--trials",
            "20",
        ],
        "",
    );
    let row = csv::Reader::from_reader(d.out.as_bytes())
        .records()
        .next()
        .unwrap()
        .unwrap();
    assert_eq!(
        row[3].parse::<f64>().unwrap(),
        row[4].parse::<f64>().unwrap()
    );
}

#[test]
fn verify_enum_outputs() {
    let o = frugal(&["verify-enum", "--n", "3", "-e", "1/2"], "");
    assert_eq!(
        (o.code, o.out.trim()),
        (EXIT_OK, "10/32 10/32 10/32 bot=2/32 PASS")
    );
    let o = frugal(&["verify-enum", "--n", "1", "-e", "1/2"], "");
    assert_eq!(o.out.trim(), "1 bot=0 PASS");
    let o = frugal(
        &["verify-enum", "--n", "3", "-e", "1/2", "--inject-fault"],
        "",
    );
    assert_eq!(o.code, EXIT_VERIFY);
    assert!(o.out.trim().ends_with("FAIL"));
    let o = frugal(&["verify-enum", "--n", "5000", "-e", "1/2"], "");
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn json_and_csv_are_well_formed() {
    let runs: [&[&str]; 4] = [
        &[
            "stream",
            "--seed",
            "1",
            "--format",
            "json",
            "--checkpoint",
            "1",
        ],
        &["weighted", "--seed", "1", "--format", "json"],
        &["bench-bits", "--n", "2", "--format", "json", "--seed", "1"],
        &["verify-enum", "--n", "2", "--format", "json"],
    ];
    for args in runs {
        let stdin = if args[0] == "weighted" {
            "2\t\"q,x\"\n"
        } else {
            "a,\"b\"\nc\n"
        };
        let o = frugal(args, stdin);
        assert_eq!(o.code, EXIT_OK, "{args:?}: {}", o.err);
        assert_eq!(o.out.trim().lines().count(), 1, "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
        assert!(v.is_object());
    }
    let o = frugal(&["stream", "--seed", "1", "--format", "csv"], "a,\"b\"\n");
    let mut rdr = csv::Reader::from_reader(o.out.as_bytes());
    let rec = rdr.records().next().unwrap().unwrap();
    assert_eq!(&rec[1], "a,\"b\"");
}

#[test]
fn binary_honours_seed_environment() {
    let bin = env!("CARGO_BIN_EXE_frugal");
    let go = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(bin);
        c.args(args).env_remove("SAMPLER_SEED");
        if let Some(s) = env {
            c.env("SAMPLER_SEED", s);
        }
        let input: String = (0..50).map(|i| format!("{i}\n")).collect();
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "in.txt", &input);
        let out = c.args(["--input", &p]).output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let from_env = go(Some("42"), &["stream", "--checkpoint", "5"]);
    let from_flag = go(None, &["stream", "--checkpoint", "5", "--seed", "42"]);
    assert_eq!(from_env, from_flag);
    let flag_wins = go(Some("7"), &["stream", "--checkpoint", "5", "--seed", "42"]);
    assert_eq!(flag_wins, from_flag);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_frugal");
    let code = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(code(&["verify-enum", "--n", "2"]), EXIT_OK);
    assert_eq!(
        code(&["verify-enum", "--n", "2", "--inject-fault"]),
        EXIT_VERIFY
    );
    assert_eq!(code(&["verify-enum", "--n", "2", "-e", "5/4"]), EXIT_INPUT);
    assert_eq!(code(&["no-such-command"]), EXIT_INPUT);
}
