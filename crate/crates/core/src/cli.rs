//! Command-line harness. Every experiment is a subcommand that prints an
//! RFC-4180-style CSV table (header row, `.` decimals) either to stdout or
//! to `--output`. All randomness flows from `--seed` (overridable with the
//! `NC_SEED` environment variable), so fixed flags give byte-identical
//! output; `bench` wall-clock columns are the one necessarily nondeterministic
//! exception.
//!
//! Exit codes: 0 success, 1 flag/validation errors, 2 a `roundtrip` check
//! failed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::analysis;
use crate::codec::{self, encode, CodeConfig, EncoderMode, Generation};
use crate::decoder::DecoderState;
use crate::gf::Field;
use crate::recoder::RecodePolicy;
use crate::rlnc::{rlnc_encode, RlncDecoderState};
use crate::rng::derive_rng;
use crate::sim;

#[derive(Debug, Parser)]
#[command(
    name = "perpetual",
    about = "Perpetual sparse network codes: experiments and analysis tables",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic tables: overhead bounds or per-packet row-operation bounds.
    Bounds(BoundsArgs),
    /// Monte-Carlo mean overhead across a width range.
    Overhead(OverheadArgs),
    /// Measured row operations per decoded symbol versus the bounds.
    Ops(OpsArgs),
    /// Two-hop relay run: analytic versus empirical repair-kind distribution.
    Twohop(TwohopArgs),
    /// Encode/decode/recode correctness sweep; exits 2 on any failure.
    Roundtrip(RoundtripArgs),
    /// Wall-clock encode/decode throughput for both codecs.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 32)]
    g: u16,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Width or inclusive range `start:end[:step]`.
    #[arg(long = "w-range", default_value = "1:31")]
    w_range: String,
    /// Which table: `overhead` (alpha/beta/upper) or `ops` (per-packet
    /// row-operation bounds by phase).
    #[arg(long, default_value = "overhead")]
    table: String,
}

#[derive(Debug, Args)]
struct OverheadArgs {
    #[arg(long, default_value_t = 32)]
    g: u16,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long = "w-range", default_value = "12")]
    w_range: String,
    #[arg(long, default_value = "random")]
    mode: String,
    #[arg(long, default_value_t = 5000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "symbol-size", default_value_t = 8)]
    symbol_size: usize,
}

#[derive(Debug, Args)]
struct OpsArgs {
    #[arg(long, default_value_t = 32)]
    g: u16,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long = "w-range", default_value = "12")]
    w_range: String,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "symbol-size", default_value_t = 8)]
    symbol_size: usize,
    /// Measure the dense baseline instead; the `w` column then reports `g`
    /// and the bound columns are left empty.
    #[arg(long)]
    rlnc: bool,
}

#[derive(Debug, Args)]
struct TwohopArgs {
    #[arg(long, default_value_t = 512)]
    g: u16,
    #[arg(long, default_value_t = 48)]
    w: u16,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 12)]
    mu: u16,
    /// Defaults to 2*mu.
    #[arg(long = "delta-max")]
    delta_max: Option<u16>,
    #[arg(long = "eps-ar", default_value_t = 0.3)]
    eps_ar: f64,
    #[arg(long = "eps-rb", default_value_t = 0.3)]
    eps_rb: f64,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "symbol-size", default_value_t = 8)]
    symbol_size: usize,
}

#[derive(Debug, Args)]
struct RoundtripArgs {
    /// Seeded repetitions per grid point.
    #[arg(long, default_value_t = 25)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 512)]
    g: u16,
    /// Comma-separated widths to measure.
    #[arg(long = "w-list", default_value = "48")]
    w_list: String,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long = "symbol-size", default_value_t = 1400)]
    symbol_size: usize,
    /// Generations per measurement.
    #[arg(long, default_value_t = 2)]
    generations: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Skip the dense baseline (no gain column values).
    #[arg(long = "no-rlnc")]
    no_rlnc: bool,
}

/// Entry point used by the binary: parse, run, map errors to exit codes.
pub fn run_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn execute(cli: Cli) -> Result<i32, String> {
    let mut out = String::new();
    let code = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a, &mut out)?,
        Command::Overhead(a) => cmd_overhead(a, &mut out)?,
        Command::Ops(a) => cmd_ops(a, &mut out)?,
        Command::Twohop(a) => cmd_twohop(a, &mut out)?,
        Command::Roundtrip(a) => cmd_roundtrip(a, &mut out)?,
        Command::Bench(a) => cmd_bench(a, &mut out)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, out).map_err(|e| e.to_string())?,
        None => print!("{out}"),
    }
    Ok(code)
}

fn env_seed(cli_seed: u64) -> u64 {
    match std::env::var("NC_SEED") {
        Ok(v) => v.parse().unwrap_or(cli_seed),
        Err(_) => cli_seed,
    }
}

fn parse_field(q: u32) -> Result<Field, String> {
    Field::from_q(q).ok_or_else(|| format!("unsupported field size {q}; use 2 or 256"))
}

/// `start:end[:step]` inclusive, or a single value.
fn parse_w_range(spec: &str, g: u16) -> Result<Vec<u16>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> Result<u16, String> {
        s.parse::<u16>().map_err(|_| format!("bad width value {s:?}"))
    };
    let (start, end, step) = match parts.as_slice() {
        [one] => {
            let v = parse(one)?;
            (v, v, 1)
        }
        [a, b] => (parse(a)?, parse(b)?, 1),
        [a, b, s] => (parse(a)?, parse(b)?, parse(s)?.max(1)),
        _ => return Err(format!("bad width range {spec:?}")),
    };
    if start > end {
        return Err(format!("empty width range {spec:?}"));
    }
    if end >= g {
        return Err(format!("width {end} must be below the generation size {g}"));
    }
    Ok((start..=end).step_by(step as usize).collect())
}

fn make_config(g: u16, w: u16, q: u32, symbol_size: usize) -> Result<CodeConfig, String> {
    let field = parse_field(q)?;
    CodeConfig::new(g, w, field, symbol_size).map_err(|e| e.to_string())
}

fn cmd_bounds(a: &BoundsArgs, out: &mut String) -> Result<i32, String> {
    let widths = parse_w_range(&a.w_range, a.g)?;
    parse_field(a.q)?;
    match a.table.as_str() {
        "overhead" => {
            out.push_str("g,w,q,alpha,beta,upper\n");
            for w in widths {
                let b = analysis::overhead_upper(a.g as u32, w as u32, a.q);
                let _ = writeln!(
                    out,
                    "{},{},{},{:.6},{:.6},{:.6}",
                    a.g, w, a.q, b.alpha, b.beta, b.upper
                );
            }
        }
        "ops" => {
            out.push_str("g,w,q,fly,forward1,forward2,total\n");
            for w in widths {
                let b = analysis::op_bounds(a.g as u32, w as u32, a.q);
                let _ = writeln!(
                    out,
                    "{},{},{},{:.6},{:.6},{:.6},{:.6}",
                    a.g, w, a.q, b.fly, b.forward1, b.forward2, b.total
                );
            }
        }
        other => return Err(format!("unknown table {other:?}; use overhead or ops")),
    }
    Ok(0)
}

fn cmd_overhead(a: &OverheadArgs, out: &mut String) -> Result<i32, String> {
    let widths = parse_w_range(&a.w_range, a.g)?;
    let seed = env_seed(a.seed);
    let mode = EncoderMode::parse(&a.mode)
        .ok_or_else(|| format!("unknown mode {:?}; use random, sequential or systematic", a.mode))?;
    if a.trials == 0 {
        return Err("trials must be at least 1".into());
    }
    out.push_str(
        "g,w,q,mode,trials,seed,mean_overhead,stddev,ops_fly_per_symbol,ops_final_per_symbol,dependent_total\n",
    );
    for w in widths {
        let cfg = make_config(a.g, w, a.q, a.symbol_size)?;
        let s = sim::run_unicast(&cfg, &mode, a.trials, seed);
        if s.failures > 0 {
            return Err(format!("{} trials failed to converge at w={w}", s.failures));
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{}",
            a.g,
            w,
            a.q,
            a.mode,
            a.trials,
            seed,
            s.mean_overhead,
            s.stddev_overhead,
            s.ops_fly_per_symbol,
            s.ops_final_per_symbol,
            s.dependent_total
        );
    }
    Ok(0)
}

fn cmd_ops(a: &OpsArgs, out: &mut String) -> Result<i32, String> {
    let seed = env_seed(a.seed);
    if a.trials == 0 {
        return Err("trials must be at least 1".into());
    }
    out.push_str("g,w,q,fly_meas,final_meas,fly_bound,total_bound\n");
    if a.rlnc {
        let cfg = make_config(a.g, 1, a.q, a.symbol_size)?;
        let s = sim::run_unicast_rlnc(&cfg, a.trials, seed);
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{:.6},,",
            a.g,
            a.g,
            a.q,
            s.ops_fly_per_symbol,
            s.ops_final_per_symbol
        );
        return Ok(0);
    }
    let widths = parse_w_range(&a.w_range, a.g)?;
    for w in widths {
        let cfg = make_config(a.g, w, a.q, a.symbol_size)?;
        let s = sim::run_unicast(&cfg, &EncoderMode::random(), a.trials, seed);
        let b = analysis::op_bounds(a.g as u32, w as u32, a.q);
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6},{:.6}",
            a.g, w, a.q, s.ops_fly_per_symbol, s.ops_final_per_symbol, b.fly, b.total
        );
    }
    Ok(0)
}

fn cmd_twohop(a: &TwohopArgs, out: &mut String) -> Result<i32, String> {
    let seed = env_seed(a.seed);
    let cfg = make_config(a.g, a.w, a.q, a.symbol_size)?;
    let delta_max = a.delta_max.unwrap_or(a.mu.saturating_mul(2));
    let policy = RecodePolicy::new(a.mu, delta_max).map_err(|e| e.to_string())?;
    if delta_max > a.w {
        return Err(format!(
            "delta-max {delta_max} exceeds the width {}; recoded packets would not fit the wire format",
            a.w
        ));
    }
    if !(0.0..1.0).contains(&a.eps_ar) || !(0.0..1.0).contains(&a.eps_rb) {
        return Err("erasure probabilities must be in [0, 1)".into());
    }
    if a.trials == 0 {
        return Err("trials must be at least 1".into());
    }
    let stats = sim::run_two_hop(&cfg, &policy, a.eps_ar, a.eps_rb, a.trials, seed);
    if stats.failures > 0 {
        return Err(format!("{} trials failed to converge", stats.failures));
    }
    let hist = stats.recode_histogram.as_ref().unwrap();
    let repairs = hist.repairs_total().max(1) as f64;
    let dist = analysis::recode_delta_distribution(a.g as u32, a.mu as u32, delta_max as u32);
    out.push_str("kind,delta,analytic_p,empirical_p\n");
    let _ = writeln!(
        out,
        "passive,,{:.6},{:.6}",
        dist.p_passive_total,
        hist.passive as f64 / repairs
    );
    for &(delta, p) in &dist.p_active_by_delta {
        let emp = hist
            .active_by_delta
            .get(&(delta as u16))
            .copied()
            .unwrap_or(0) as f64
            / repairs;
        let _ = writeln!(out, "active,{delta},{p:.6},{emp:.6}");
    }
    let _ = writeln!(
        out,
        "reencode,,{:.6},{:.6}",
        dist.p_reencode_total,
        hist.reencoded as f64 / repairs
    );
    Ok(0)
}

fn cmd_roundtrip(a: &RoundtripArgs, out: &mut String) -> Result<i32, String> {
    let seed = env_seed(a.seed);
    let mut failures = 0u32;
    let mut grid_point = 0u64;
    for &g in &[8u16, 32, 128] {
        for w in [3u16, g / 4, g / 2] {
            for q in [2u32, 256] {
                for mode_name in ["random", "sequential", "systematic"] {
                    grid_point += 1;
                    let cfg = make_config(g, w, q, 32)?;
                    let mode = EncoderMode::parse(mode_name).unwrap();
                    let stats =
                        sim::run_unicast(&cfg, &mode, a.trials, seed.wrapping_add(grid_point));
                    let ok = stats.failures == 0;
                    if !ok {
                        failures += 1;
                    }
                    let _ = writeln!(
                        out,
                        "{} roundtrip g={g} w={w} q={q} mode={mode_name} trials={} overhead={:.3}",
                        if ok { "PASS" } else { "FAIL" },
                        a.trials,
                        stats.mean_overhead
                    );
                }
            }
        }
    }
    // Corrupted packets must be rejected without derailing the stream.
    let cfg = make_config(32, 12, 2, 32)?;
    let mut rng = derive_rng(seed, 0xC0);
    let gen = Generation::random(&cfg, &mut rng);
    let mut dec = DecoderState::new(cfg);
    let mut mode = EncoderMode::random();
    let mut rejected = 0u32;
    let mut n = 0u64;
    while !dec.is_decoded() && n < 5000 {
        n += 1;
        let pkt = encode(&gen, &cfg, &mut mode, &mut rng);
        let mut bytes = codec::serialize(&pkt, &cfg);
        if n.is_multiple_of(5) {
            // Deterministic corruption: truncate or blow up the width field.
            if n.is_multiple_of(10) {
                bytes.truncate(bytes.len() / 2);
            } else {
                bytes[0] = 0xFF;
                bytes[1] = 0xFF;
            }
            match codec::deserialize(&bytes, &cfg) {
                Err(_) => rejected += 1,
                Ok(_) => failures += 1,
            }
            continue;
        }
        let parsed = codec::deserialize(&bytes, &cfg).map_err(|e| e.to_string())?;
        dec.consume(&parsed).map_err(|e| e.to_string())?;
    }
    let corrupt_ok = dec.is_decoded() && rejected > 0;
    if !corrupt_ok {
        failures += 1;
    }
    let _ = writeln!(
        out,
        "{} corrupted-packet injection: rejected={rejected} decoded={}",
        if corrupt_ok { "PASS" } else { "FAIL" },
        dec.is_decoded()
    );
    // Recoding path end to end.
    let cfg = make_config(64, 12, 2, 32)?;
    let policy = RecodePolicy::new(4, 8).map_err(|e| e.to_string())?;
    let stats = sim::run_two_hop(&cfg, &policy, 0.2, 0.2, a.trials.min(50), seed);
    let recode_ok = stats.failures == 0;
    if !recode_ok {
        failures += 1;
    }
    let _ = writeln!(
        out,
        "{} two-hop recoding g=64 w=12 overhead={:.3}",
        if recode_ok { "PASS" } else { "FAIL" },
        stats.mean_overhead
    );
    let _ = writeln!(out, "{failures} failures");
    Ok(if failures == 0 { 0 } else { 2 })
}

struct BenchMeasurement {
    enc_mbps: f64,
    dec_mbps: f64,
}

fn bench_perpetual(cfg: &CodeConfig, generations: u64, seed: u64) -> BenchMeasurement {
    let mut enc_time = 0.0f64;
    let mut dec_time = 0.0f64;
    let mut enc_bytes = 0usize;
    let mut dec_bytes = 0usize;
    for t in 0..generations {
        let mut rng = derive_rng(seed, t);
        let gen = Generation::random(cfg, &mut rng);
        let mut mode = EncoderMode::random();
        let mut dec = DecoderState::new(*cfg);
        while !dec.is_decoded() {
            let t0 = Instant::now();
            let pkt = encode(&gen, cfg, &mut mode, &mut rng);
            enc_time += t0.elapsed().as_secs_f64();
            enc_bytes += cfg.symbol_size;
            let t1 = Instant::now();
            dec.consume(&pkt).unwrap();
            dec_time += t1.elapsed().as_secs_f64();
        }
        assert_eq!(dec.extract().unwrap(), gen);
        dec_bytes += cfg.g() * cfg.symbol_size;
    }
    BenchMeasurement {
        enc_mbps: enc_bytes as f64 / enc_time / 1e6,
        dec_mbps: dec_bytes as f64 / dec_time / 1e6,
    }
}

fn bench_rlnc(cfg: &CodeConfig, generations: u64, seed: u64) -> BenchMeasurement {
    let mut enc_time = 0.0f64;
    let mut dec_time = 0.0f64;
    let mut enc_bytes = 0usize;
    let mut dec_bytes = 0usize;
    for t in 0..generations {
        let mut rng = derive_rng(seed, t);
        let gen = Generation::random(cfg, &mut rng);
        let mut dec = RlncDecoderState::new(*cfg);
        while !dec.is_decoded() {
            let t0 = Instant::now();
            let pkt = rlnc_encode(&gen, cfg, &mut rng);
            enc_time += t0.elapsed().as_secs_f64();
            enc_bytes += cfg.symbol_size;
            let t1 = Instant::now();
            dec.consume(&pkt).unwrap();
            dec_time += t1.elapsed().as_secs_f64();
        }
        assert_eq!(dec.extract().unwrap(), gen);
        dec_bytes += cfg.g() * cfg.symbol_size;
    }
    BenchMeasurement {
        enc_mbps: enc_bytes as f64 / enc_time / 1e6,
        dec_mbps: dec_bytes as f64 / dec_time / 1e6,
    }
}

fn cmd_bench(a: &BenchArgs, out: &mut String) -> Result<i32, String> {
    let seed = env_seed(a.seed);
    if a.generations == 0 {
        return Err("generations must be at least 1".into());
    }
    let widths: Result<Vec<u16>, String> = a
        .w_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u16>()
                .map_err(|_| format!("bad width {s:?}"))
        })
        .collect();
    let widths = widths?;
    for &w in &widths {
        if w == 0 || w >= a.g {
            return Err(format!("width {w} must be in 1..{}", a.g));
        }
    }
    out.push_str("codec,g,w,q,enc_MBps,dec_MBps,gain_pct\n");
    let baseline = if a.no_rlnc {
        None
    } else {
        let cfg = make_config(a.g, 1, a.q, a.symbol_size)?;
        let m = bench_rlnc(&cfg, a.generations, seed);
        let _ = writeln!(
            out,
            "rlnc,{},{},{},{:.2},{:.2},",
            a.g, a.g, a.q, m.enc_mbps, m.dec_mbps
        );
        Some(m)
    };
    for &w in &widths {
        let cfg = make_config(a.g, w, a.q, a.symbol_size)?;
        let m = bench_perpetual(&cfg, a.generations, seed);
        match &baseline {
            Some(b) => {
                let gain = (m.dec_mbps / b.dec_mbps - 1.0) * 100.0;
                let _ = writeln!(
                    out,
                    "perpetual,{},{},{},{:.2},{:.2},{:.1}",
                    a.g, w, a.q, m.enc_mbps, m.dec_mbps, gain
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "perpetual,{},{},{},{:.2},{:.2},",
                    a.g, w, a.q, m.enc_mbps, m.dec_mbps
                );
            }
        }
    }
    Ok(0)
}
