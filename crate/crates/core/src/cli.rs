//! The `frugal` command line.
//!
//! ```text
//! frugal stream      [-e num/den] [--seed N] [--input FILE] [--checkpoint K] [--stats]
//! frugal weighted    [-e num/den] [--seed N] [--input FILE] [--checkpoint K] [--stats]
//! frugal succinct build   --weights FILE --mode mult|add -e num/den --output FILE [--width W]
//! frugal succinct query   --index FILE [--trials T] [--seed N]
//! frugal succinct inspect --index FILE [--weights FILE]
//! frugal bench-bits  --n 10,100 --strategies basic,vitter,doubling [--trials T]
//! frugal verify-enum --n N [-e num/den]
//! ```
//!
//! Every command takes `--format text|csv|json`. Without `--seed` the seed
//! comes from `SAMPLER_SEED`, then from the operating system.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 input error, 3 index file
//! format error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::baselines::{BasicReservoir, VitterReservoir};
use crate::streaming::{StreamSampler, StreamState, WeightedError, WeightedSampler};
use crate::succinct::{FormatError, Mode, SuccinctError, SuccinctIndex};
use crate::verify::{self, Audit, ExactDistribution, VerifyError};
use crate::{BitTape, ErrorParam, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "frugal", version, about = "Randomness-frugal sampling tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Uniform sample of newline-delimited items.
    Stream(StreamArgs),
    /// Weighted sample of "weight<TAB>payload" lines.
    Weighted(StreamArgs),
    /// Build, query or inspect a succinct sampling index.
    #[command(subcommand)]
    Succinct(SuccinctCommand),
    /// Random bits used by each reservoir strategy.
    BenchBits(BenchArgs),
    /// Exact tape enumeration of the uniform stream sampler.
    VerifyEnum(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Error parameter as an exact fraction.
    #[arg(short, long, default_value = "1/4")]
    epsilon: String,
    #[arg(long, env = "SAMPLER_SEED")]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct StreamArgs {
    #[command(flatten)]
    common: Common,
    /// Read items from a file instead of stdin.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Also report the held sample after every K items.
    #[arg(long, value_name = "K")]
    checkpoint: Option<u64>,
    /// Report the largest number of payloads held at once.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Subcommand)]
enum SuccinctCommand {
    Build(BuildArgs),
    Query(QueryArgs),
    Inspect(InspectArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Mult,
    Add,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    common: Common,
    /// One non-negative integer weight per line.
    #[arg(long)]
    weights: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, short)]
    output: PathBuf,
    /// Weight width in bits (multiplicative mode); defaults to the smallest that fits.
    #[arg(long)]
    width: Option<u32>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 1)]
    trials: u64,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    index: PathBuf,
    /// Original weights to audit the index against.
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated stream lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_enum, default_values_t = [Strategy::Basic, Strategy::Vitter, Strategy::Doubling])]
    strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 10)]
    trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Basic,
    Vitter,
    Doubling,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    n: u64,
    /// Move one tape from item 1 to bot before checking.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure {
            code: EXIT_FORMAT,
            message: e.to_string(),
        }
    }
}

impl From<SuccinctError> for Failure {
    fn from(e: SuccinctError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::BudgetExceeded { .. } => Failure::input(e.to_string()),
            other => Failure {
                code: EXIT_VERIFY,
                message: other.to_string(),
            },
        }
    }
}

type CmdResult = Result<i32, Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, S>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { stdin, out: stdout };
    let result = match cli.command {
        Command::Stream(a) => cmd_stream(&a, &mut io),
        Command::Weighted(a) => cmd_weighted(&a, &mut io),
        Command::Succinct(SuccinctCommand::Build(a)) => cmd_build(&a, &mut io),
        Command::Succinct(SuccinctCommand::Query(a)) => cmd_query(&a, &mut io),
        Command::Succinct(SuccinctCommand::Inspect(a)) => cmd_inspect(&a, &mut io),
        Command::BenchBits(a) => cmd_bench(&a, &mut io),
        Command::VerifyEnum(a) => cmd_verify(&a, &mut io),
    };
    let _ = io.out.flush();
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn parse_eps(s: &str) -> Result<ErrorParam, Failure> {
    s.parse()
        .map_err(|e: crate::param::ParamError| Failure::input(e.to_string()))
}

fn seed_of(common: &Common) -> u64 {
    common.seed.unwrap_or_else(rand::random)
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<Vec<u8>, Failure> {
    match path {
        Some(p) => fs::read(p).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

/// Newline-delimited records; a final newline does not start an empty record.
fn lines(data: &[u8]) -> impl Iterator<Item = &[u8]> {
    let body = data.strip_suffix(b"\n").unwrap_or(data);
    let empty = data.is_empty();
    body.split(|&b| b == b'\n').filter(move |_| !empty)
}

const BOT: &[u8] = b"BOT";

fn sample_bytes(s: Option<&Vec<u8>>) -> &[u8] {
    s.map_or(BOT, |v| v.as_slice())
}

fn sample_json(s: Option<&Vec<u8>>) -> serde_json::Value {
    match s {
        Some(v) => json!(String::from_utf8_lossy(v)),
        None => serde_json::Value::Null,
    }
}

struct Checkpoint {
    items: u64,
    sample: Option<Vec<u8>>,
}

struct StreamReport {
    checkpoints: Vec<Checkpoint>,
    sample: Option<Vec<u8>>,
    items: u64,
    bits: u64,
    skipped: Option<u64>,
    max_buffered: Option<usize>,
}

fn write_stream_report(
    r: &StreamReport,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    match format {
        Format::Text => {
            for c in &r.checkpoints {
                write!(out, "checkpoint={} sample=", c.items)?;
                out.write_all(sample_bytes(c.sample.as_ref()))?;
                writeln!(out)?;
            }
            out.write_all(b"sample=")?;
            out.write_all(sample_bytes(r.sample.as_ref()))?;
            writeln!(out)?;
            writeln!(out, "items={}", r.items)?;
            if let Some(s) = r.skipped {
                writeln!(out, "skipped={s}")?;
            }
            writeln!(out, "bits={}", r.bits)?;
            if let Some(m) = r.max_buffered {
                writeln!(out, "max_buffered={m}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["items", "sample", "bits"])?;
            for c in &r.checkpoints {
                w.write_record([
                    c.items.to_string().as_bytes(),
                    sample_bytes(c.sample.as_ref()),
                    b"",
                ])?;
            }
            w.write_record([
                r.items.to_string().as_bytes(),
                sample_bytes(r.sample.as_ref()),
                r.bits.to_string().as_bytes(),
            ])?;
            w.flush()?;
        }
        Format::Json => {
            let mut v = json!({
                "sample": sample_json(r.sample.as_ref()),
                "items": r.items,
                "bits": r.bits,
                "checkpoints": r.checkpoints.iter().map(|c| json!({
                    "items": c.items,
                    "sample": sample_json(c.sample.as_ref()),
                })).collect::<Vec<_>>(),
            });
            if let Some(s) = r.skipped {
                v["skipped"] = json!(s);
            }
            if let Some(m) = r.max_buffered {
                v["max_buffered"] = json!(m);
            }
            writeln!(out, "{v}")?;
        }
    }
    Ok(())
}

fn at_checkpoint(every: Option<u64>, items: u64) -> bool {
    matches!(every, Some(k) if k > 0 && items.is_multiple_of(k))
}

fn cmd_stream(a: &StreamArgs, io: &mut Io) -> CmdResult {
    let eps = parse_eps(&a.common.epsilon)?;
    let data = read_input(&a.input, io.stdin)?;
    let mut tape = BitTape::seeded(seed_of(&a.common));
    let mut sampler = StreamSampler::new(eps);
    let mut checkpoints = Vec::new();
    for line in lines(&data) {
        sampler
            .process(line.to_vec(), &mut tape)
            .expect("seeded tapes never run out");
        if at_checkpoint(a.checkpoint, sampler.items_seen()) {
            checkpoints.push(Checkpoint {
                items: sampler.items_seen(),
                sample: sampler.current_sample().cloned(),
            });
        }
    }
    let report = StreamReport {
        checkpoints,
        sample: sampler.current_sample().cloned(),
        items: sampler.items_seen(),
        bits: tape.bits_consumed(),
        skipped: None,
        max_buffered: a.stats.then(|| sampler.max_buffered()),
    };
    write_stream_report(&report, a.common.format.unwrap_or(Format::Text), io.out)?;
    Ok(EXIT_OK)
}

fn parse_weighted_line(line: &[u8], number: usize) -> Result<(u64, &[u8]), Failure> {
    let tab = line
        .iter()
        .position(|&b| b == b'\t')
        .ok_or_else(|| Failure::input(format!("line {number}: expected weight<TAB>payload")))?;
    let weight = std::str::from_utf8(&line[..tab])
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .ok_or_else(|| {
            Failure::input(format!(
                "line {number}: weight is not a non-negative integer"
            ))
        })?;
    Ok((weight, &line[tab + 1..]))
}

fn cmd_weighted(a: &StreamArgs, io: &mut Io) -> CmdResult {
    let eps = parse_eps(&a.common.epsilon)?;
    let data = read_input(&a.input, io.stdin)?;
    let records = lines(&data)
        .enumerate()
        .map(|(i, l)| parse_weighted_line(l, i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    let mut tape = BitTape::seeded(seed_of(&a.common));
    let mut sampler = WeightedSampler::new(eps);
    let mut checkpoints = Vec::new();
    for (k, (weight, payload)) in records.into_iter().enumerate() {
        match sampler.process(payload.to_vec(), weight, &mut tape) {
            Ok(_) | Err(WeightedError::ZeroWeight) => {}
            Err(WeightedError::Tape(_)) => unreachable!("seeded tapes never run out"),
        }
        let items = k as u64 + 1;
        if at_checkpoint(a.checkpoint, items) {
            checkpoints.push(Checkpoint {
                items,
                sample: sampler.current_sample().cloned(),
            });
        }
    }
    let report = StreamReport {
        checkpoints,
        sample: sampler.current_sample().cloned(),
        items: sampler.state().t() + sampler.skipped(),
        bits: tape.bits_consumed(),
        skipped: Some(sampler.skipped()),
        max_buffered: a.stats.then(|| sampler.max_buffered()),
    };
    write_stream_report(&report, a.common.format.unwrap_or(Format::Text), io.out)?;
    Ok(EXIT_OK)
}

fn read_weights(path: &PathBuf) -> Result<Vec<u64>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let w = line.parse::<u64>().map_err(|_| {
            Failure::input(format!(
                "{}: line {}: not a non-negative integer",
                path.display(),
                i + 1
            ))
        })?;
        out.push(w);
    }
    Ok(out)
}

fn audit_of(index: &SuccinctIndex, weights: &[u64]) -> Result<(Audit, Audit), Failure> {
    if weights.len() != index.len() {
        return Err(Failure::input(format!(
            "index has {} items but {} weights were given",
            index.len(),
            weights.len()
        )));
    }
    let dist = verify::exact_index_distribution(index);
    let eps = index.eps();
    Ok((
        verify::audit_multiplicative(weights, &dist, eps),
        verify::audit_additive(weights, &dist, eps),
    ))
}

fn write_index_report(
    index: &SuccinctIndex,
    audit: Option<&(Audit, Audit)>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let violations = audit.map(|(m, a)| match index.mode() {
        Mode::Mult => m.violations.len(),
        Mode::Add => a.violations.len(),
    });
    let fields: Vec<(&str, String)> = [
        ("mode", index.mode().name().to_string()),
        ("n", index.len().to_string()),
        ("w", index.width().to_string()),
        ("epsilon", index.eps().to_string()),
        ("payload_bits", index.payload_bits().to_string()),
    ]
    .into_iter()
    .chain(audit.into_iter().flat_map(|(m, a)| {
        [
            ("max_mult_deviation", m.max_ratio_deviation.to_string()),
            ("max_add_deviation", a.max_abs_deviation.to_string()),
        ]
    }))
    .chain(violations.map(|v| ("violations", v.to_string())))
    .collect();
    match format {
        Format::Text => {
            for (k, v) in &fields {
                writeln!(out, "{k}={v}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(fields.iter().map(|(k, _)| *k))?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
            w.flush()?;
        }
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
    }
    Ok(if violations.unwrap_or(0) > 0 {
        EXIT_VERIFY
    } else {
        EXIT_OK
    })
}

fn cmd_build(a: &BuildArgs, io: &mut Io) -> CmdResult {
    let eps = parse_eps(&a.common.epsilon)?;
    let weights = read_weights(&a.weights)?;
    let mode = match a.mode {
        ModeArg::Mult => Mode::Mult,
        ModeArg::Add => Mode::Add,
    };
    let index = SuccinctIndex::build(mode, &weights, eps, a.width)?;
    fs::write(&a.output, index.to_bytes())
        .map_err(|e| Failure::input(format!("{}: {e}", a.output.display())))?;
    let audit = audit_of(&index, &weights)?;
    write_index_report(
        &index,
        Some(&audit),
        a.common.format.unwrap_or(Format::Text),
        io.out,
    )
}

fn load_index(path: &PathBuf) -> Result<SuccinctIndex, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(SuccinctIndex::from_bytes(&bytes)?)
}

fn cmd_query(a: &QueryArgs, io: &mut Io) -> CmdResult {
    let index = load_index(&a.index)?;
    let mut tape = BitTape::seeded(seed_of(&a.common));
    let items = (0..a.trials)
        .map(|_| index.sample(&mut tape).map(|i| i as u64 + 1))
        .collect::<Result<Vec<_>, _>>()
        .expect("seeded tapes never run out");
    match a.common.format.unwrap_or(Format::Text) {
        Format::Text => {
            for i in &items {
                writeln!(io.out, "{i}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *io.out);
            w.write_record(["item"])?;
            for i in &items {
                w.write_record([i.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => writeln!(
            io.out,
            "{}",
            json!({ "items": items, "bits": tape.bits_consumed() })
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_inspect(a: &InspectArgs, io: &mut Io) -> CmdResult {
    let index = load_index(&a.index)?;
    let audit = match &a.weights {
        Some(p) => Some(audit_of(&index, &read_weights(p)?)?),
        None => None,
    };
    write_index_report(
        &index,
        audit.as_ref(),
        a.common.format.unwrap_or(Format::Text),
        io.out,
    )
}

/// Bits one strategy spends on a stream of `n` items.
pub fn strategy_bits(strategy: Strategy, n: u64, eps: ErrorParam, tape: &mut BitTape) -> u64 {
    let start = tape.bits_consumed();
    match strategy {
        Strategy::Basic => {
            let mut r = BasicReservoir::new();
            for i in 0..n {
                r.step(i, tape).expect("seeded tapes never run out");
            }
        }
        Strategy::Vitter => {
            let mut r = VitterReservoir::new();
            for i in 0..n {
                r.step(i, tape).expect("seeded tapes never run out");
            }
        }
        Strategy::Doubling => {
            let mut s = StreamState::new(eps);
            for _ in 0..n {
                s.process(tape).expect("seeded tapes never run out");
            }
        }
    }
    tape.bits_consumed() - start
}

/// Bits for trials `0..trials`, trial `k` on its own tape seeded `seed + k`,
/// spread over the available cores.
fn trial_bits(strategy: Strategy, n: u64, eps: ErrorParam, seed: u64, trials: u64) -> Vec<u64> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |p| p.get() as u64)
        .min(trials);
    let mut out = vec![0u64; trials as usize];
    let chunk = trials.div_ceil(workers) as usize;
    std::thread::scope(|scope| {
        for (c, slots) in out.chunks_mut(chunk).enumerate() {
            scope.spawn(move || {
                for (k, slot) in slots.iter_mut().enumerate() {
                    let trial = (c * chunk + k) as u64;
                    *slot = strategy_bits(
                        strategy,
                        n,
                        eps,
                        &mut BitTape::seeded(seed.wrapping_add(trial)),
                    );
                }
            });
        }
    });
    out
}

#[derive(Debug, Serialize)]
struct BenchRow {
    strategy: Strategy,
    n: u64,
    trials: u64,
    mean_bits: f64,
    max_bits: u64,
}

fn cmd_bench(a: &BenchArgs, io: &mut Io) -> CmdResult {
    let eps = parse_eps(&a.common.epsilon)?;
    if a.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    let seed = seed_of(&a.common);
    let mut rows = Vec::new();
    for &strategy in &a.strategies {
        for &n in &a.n {
            let bits = trial_bits(strategy, n, eps, seed, a.trials);
            let total: u64 = bits.iter().sum();
            let max = bits.iter().copied().max().unwrap_or(0);
            rows.push(BenchRow {
                strategy,
                n,
                trials: a.trials,
                mean_bits: total as f64 / a.trials as f64,
                max_bits: max,
            });
        }
    }
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *io.out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => writeln!(
            io.out,
            "{}",
            json!({ "epsilon": eps.to_string(), "rows": rows })
        )?,
        Format::Text => {
            for r in &rows {
                let name = serde_json::to_value(r.strategy).unwrap();
                writeln!(
                    io.out,
                    "strategy={} n={} trials={} mean_bits={} max_bits={}",
                    name.as_str().unwrap(),
                    r.n,
                    r.trials,
                    r.mean_bits,
                    r.max_bits
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// `m/s`, or `0` and `1` at the extremes.
fn mass_string(dist: &ExactDistribution, o: Outcome) -> String {
    let m = dist.mass(o);
    if m == num_bigint::BigUint::default() {
        "0".into()
    } else if &m == dist.denominator() {
        "1".into()
    } else {
        format!("{m}/{}", dist.denominator())
    }
}

fn cmd_verify(a: &VerifyArgs, io: &mut Io) -> CmdResult {
    let eps = parse_eps(&a.common.epsilon)?;
    if a.n == 0 {
        return Err(Failure::input("--n must be at least 1"));
    }
    let mut dist = verify::enumerate_uniform(a.n, eps)?;
    if a.inject_fault {
        let moved = dist.outcomes().map(|(o, m)| {
            let m = m.clone();
            match o {
                Outcome::Item(1) => (o, m - 1u32),
                Outcome::Bot => (o, m + 1u32),
                _ => (o, m),
            }
        });
        dist =
            ExactDistribution::from_masses(dist.denominator().clone(), moved.collect::<Vec<_>>())?;
    }
    let check = verify::check_uniform_shares(&dist, a.n, eps);
    let items: Vec<String> = (1..=a.n)
        .map(|i| mass_string(&dist, Outcome::Item(i)))
        .collect();
    let bot = mass_string(&dist, Outcome::Bot);
    let verdict = if check.is_ok() { "PASS" } else { "FAIL" };
    match a.common.format.unwrap_or(Format::Text) {
        Format::Text => writeln!(io.out, "{} bot={bot} {verdict}", items.join(" "))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *io.out);
            w.write_record(["outcome", "mass"])?;
            for (i, m) in items.iter().enumerate() {
                w.write_record([(i + 1).to_string(), m.clone()])?;
            }
            w.write_record(["bot".to_string(), bot.clone()])?;
            w.write_record(["verdict".to_string(), verdict.to_string()])?;
            w.flush()?;
        }
        Format::Json => writeln!(
            io.out,
            "{}",
            json!({
                "n": a.n,
                "epsilon": eps.to_string(),
                "bits": dist.denominator().bits() - 1,
                "items": items,
                "bot": bot,
                "pass": check.is_ok(),
            })
        )?,
    }
    Ok(match check {
        Ok(()) => EXIT_OK,
        Err(_) => EXIT_VERIFY,
    })
}
