//! Acceptance suite: every release gate as its own test, printing one
//! PASS/FAIL line per checked claim (visible with `--nocapture` or on
//! failure). Tolerances are pinned here, not tuned elsewhere.

use std::process::Command;

use perpetual::analysis;
use perpetual::codec::{
    deserialize, encode, serialize, vector_bits, CodeConfig, EncoderMode, Generation,
};
use perpetual::decoder::DecoderState;
use perpetual::gf::Field;
use perpetual::recoder::{recode_active, RecodePolicy};
use perpetual::rng::derive_rng;
use perpetual::sim;

fn cfg(g: u16, w: u16, q: u32, symbol_size: usize) -> CodeConfig {
    CodeConfig::new(g, w, Field::from_q(q).unwrap(), symbol_size).unwrap()
}

fn check(ok: bool, line: &str, failures: &mut Vec<String>) {
    println!("{} {line}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        failures.push(line.to_string());
    }
}

/// A1: bit-exact decode across the full parameter grid, all encoder modes,
/// both fields, 1000 seeded trials per point.
#[test]
fn a1_round_trip_grid() {
    let mut failures = Vec::new();
    for &g in &[8u16, 32, 128] {
        let mut widths = vec![3u16, g / 4, g / 2];
        widths.dedup();
        for &w in &widths {
            for &q in &[2u32, 256] {
                for mode_name in ["random", "sequential", "systematic"] {
                    let c = cfg(g, w, q, 8);
                    let mode = EncoderMode::parse(mode_name).unwrap();
                    let seed = 0xA1_0000
                        ^ (g as u64) << 20
                        ^ (w as u64) << 12
                        ^ (q as u64) << 2
                        ^ mode_name.len() as u64;
                    // run_unicast verifies extraction bit-exactly per trial.
                    let stats = sim::run_unicast(&c, &mode, 1000, seed);
                    check(
                        stats.failures == 0,
                        &format!("A1 g={g} w={w} q={q} mode={mode_name}: 1000/1000 decoded"),
                        &mut failures,
                    );
                }
            }
        }
    }
    assert!(failures.is_empty(), "A1 failures: {failures:?}");
}

/// A2: Monte-Carlo mean overhead at the published operating points, within
/// the larger of 10% relative or 0.1 packets (15% at g=512).
#[test]
fn a2_overhead_reproduction() {
    let mut failures = Vec::new();
    let points: &[(u16, u16, f64, f64, u64)] = &[
        (32, 6, 8.24, 0.10, 20_000),
        (32, 8, 4.15, 0.10, 20_000),
        (32, 12, 1.70, 0.10, 20_000),
        (32, 16, 1.65, 0.10, 20_000),
        (128, 24, 1.65, 0.10, 20_000),
        (512, 48, 1.68, 0.15, 4_000),
    ];
    for &(g, w, target, rel, trials) in points {
        let c = cfg(g, w, 2, 8);
        let stats = sim::run_unicast(&c, &EncoderMode::random(), trials, 42);
        let tol = (target * rel).max(0.1);
        let ok = stats.failures == 0 && (stats.mean_overhead - target).abs() <= tol;
        check(
            ok,
            &format!(
                "A2 g={g} w={w}: measured {:.3} vs {target} (band +/-{tol:.3}, {trials} trials)",
                stats.mean_overhead
            ),
            &mut failures,
        );
    }
    assert!(failures.is_empty(), "A2 failures: {failures:?}");
}

/// A3: the dense baseline. Analytic series value, and Monte-Carlo agreement
/// with it at two generation sizes.
#[test]
fn a3_rlnc_baseline() {
    let mut failures = Vec::new();
    let alpha = analysis::rlnc_overhead_lower(32, 2);
    check(
        (alpha - 1.6067).abs() <= 0.001,
        &format!("A3 analytic series at g=32 q=2: {alpha:.5} vs 1.6067 +/- 0.001"),
        &mut failures,
    );
    for &(g, trials) in &[(32u16, 30_000u64), (128, 8_000)] {
        let c = cfg(g, 1, 2, 8);
        let stats = sim::run_unicast_rlnc(&c, trials, 42);
        let expect = analysis::rlnc_overhead_lower(g as u32, 2);
        let ok = stats.failures == 0 && (stats.mean_overhead - expect).abs() <= 0.05;
        check(
            ok,
            &format!(
                "A3 Monte-Carlo g={g}: {:.4} vs analytic {expect:.4} +/- 0.05",
                stats.mean_overhead
            ),
            &mut failures,
        );
    }
    assert!(failures.is_empty(), "A3 failures: {failures:?}");
}

/// A4: measured row operations per symbol sit under the analytic bounds
/// (with 5% slack) for widths at or above the overhead knee.
#[test]
fn a4_complexity_bounds() {
    let mut failures = Vec::new();
    let grid: &[(u16, u16, u64)] = &[(32, 12, 3000), (32, 16, 3000), (128, 24, 2000), (128, 32, 2000)];
    for &(g, w, trials) in grid {
        let c = cfg(g, w, 2, 8);
        let stats = sim::run_unicast(&c, &EncoderMode::random(), trials, 7);
        let b = analysis::op_bounds(g as u32, w as u32, 2);
        let total = stats.ops_fly_per_symbol + stats.ops_final_per_symbol;
        let fly_ok = stats.ops_fly_per_symbol <= b.fly * 1.05;
        let total_ok = total <= b.total * 1.05;
        check(
            fly_ok,
            &format!(
                "A4 g={g} w={w}: fly {:.3} <= {:.3}",
                stats.ops_fly_per_symbol,
                b.fly * 1.05
            ),
            &mut failures,
        );
        check(
            total_ok,
            &format!("A4 g={g} w={w}: total {total:.3} <= {:.3}", b.total * 1.05),
            &mut failures,
        );
        let final_bound = 2.0 * (b.forward1 + b.forward2) * 1.05;
        check(
            stats.ops_final_per_symbol <= final_bound,
            &format!(
                "A4 g={g} w={w}: final {:.3} <= {final_bound:.3}",
                stats.ops_final_per_symbol
            ),
            &mut failures,
        );
    }
    assert!(failures.is_empty(), "A4 failures: {failures:?}");
}

/// A5: recoding probability formulas against their oracles.
#[test]
fn a5_recoding_formulas() {
    let mut failures = Vec::new();
    let p = analysis::p_unseen(0.3, 12);
    check(
        (p - 0.98616).abs() <= 1e-5,
        &format!("A5 p_unseen(0.3, 12) = {p:.6} vs 0.98616 +/- 1e-5"),
        &mut failures,
    );
    check(
        analysis::p_passive(512, 12, 512) == 1.0,
        "A5 p_passive at full rank is exactly 1",
        &mut failures,
    );
    check(
        analysis::p_active(512, 12, 16, 512) == 1.0,
        "A5 p_active at full rank is exactly 1",
        &mut failures,
    );
    // Log-space binomials against exact big-integer values for g <= 64.
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    let exact = |n: u32, k: u32| -> f64 {
        let mut num = BigUint::from(1u32);
        let mut den = BigUint::from(1u32);
        for i in 0..k {
            num *= BigUint::from(n - i);
            den *= BigUint::from(i + 1);
        }
        (num / den).to_f64().unwrap()
    };
    let mut worst: f64 = 0.0;
    for g in 2..=64u32 {
        for r in 1..g {
            for (mu, delta) in [(2u32, 3u32), (3, 5)] {
                if delta >= g || mu > delta || r < mu {
                    continue;
                }
                // Reconstruct the inner sum both ways through p_active.
                let via_log = analysis::p_active(r, mu, delta, g);
                // Exact route: hypergeometric miss probability.
                let total = exact(g, r);
                let mut miss = 0.0;
                for j in 0..mu {
                    if r >= j && g - delta >= r - j && delta >= j {
                        miss += exact(delta, j) * exact(g - delta, r - j) / total;
                    }
                }
                let exact_p = 1.0 - miss.clamp(0.0, 1.0).powi(g as i32);
                let denom = exact_p.abs().max(1e-30);
                worst = worst.max((via_log - exact_p).abs() / denom);
            }
        }
    }
    check(
        worst <= 1e-9,
        &format!("A5 log-space binomials vs exact integers: worst rel err {worst:.2e} <= 1e-9"),
        &mut failures,
    );
    assert!(failures.is_empty(), "A5 failures: {failures:?}");
}

/// A6, analytic half: the repair-kind distribution reproduces the reported
/// shares at g=512, mu=12, delta_max=24.
#[test]
fn a6_recode_distribution_analytic() {
    let mut failures = Vec::new();
    let d = analysis::recode_delta_distribution(512, 12, 24);
    let source_width = d.p_passive_total + d.p_reencode_total;
    check(
        (source_width - 0.30).abs() <= 0.05,
        &format!("A6 passive+reencode mass {source_width:.4} vs 0.30 +/- 0.05"),
        &mut failures,
    );
    check(
        (d.p_reencode_total - 0.20).abs() <= 0.05,
        &format!("A6 reencode mass {:.4} vs 0.20 +/- 0.05", d.p_reencode_total),
        &mut failures,
    );
    check(
        (d.p_active_by_delta[0].1 - 1.0 / 3.0).abs() <= 0.05,
        &format!(
            "A6 mass at delta=mu {:.4} vs 1/3 +/- 0.05",
            d.p_active_by_delta[0].1
        ),
        &mut failures,
    );
    check(
        (d.total_mass() - 1.0).abs() <= 1e-9,
        "A6 distribution masses sum to 1",
        &mut failures,
    );
    assert!(failures.is_empty(), "A6 analytic failures: {failures:?}");
}

/// A6, empirical half: the two-hop relay's emitted repair kinds against the
/// analytic allocation, category by category at +/- 0.05.
///
/// Two categories are expected to miss, and the gap is structural rather
/// than a scheduling artifact. The on-the-fly insertion walk spreads pivot
/// candidates out (a packet whose slot is taken walks forward to the next
/// hole), so mid-fill decoder states hold far fewer dense pivot ranges than
/// the uniformly-random-subset model behind the active-recoding formula
/// assumes: active recoding becomes feasible ~35 ranks later than predicted
/// and the per-delta transitions compress. On top of that, the analytic
/// allocation counts every opportunity as servable exactly once, while a
/// blind relay's repairs are partially redundant with one another at the
/// sink, so the deferred/re-encoded share of *emitted* packets sits near
/// 0.40 against the predicted 0.21 no matter how the schedule is arranged.
/// The passive share and the dominant delta bins do match.
#[test]
fn a6_two_hop_empirical_vs_analytic() {
    let c = cfg(512, 48, 2, 8);
    let policy = RecodePolicy::new(12, 24).unwrap();
    let stats = sim::run_two_hop(&c, &policy, 0.3, 0.3, 300, 5);
    assert_eq!(stats.failures, 0, "two-hop trials must converge");
    let hist = stats.recode_histogram.as_ref().unwrap();
    let repairs = hist.repairs_total() as f64;
    let dist = analysis::recode_delta_distribution(512, 12, 24);

    let mut failures = Vec::new();
    let emp_passive = hist.passive as f64 / repairs;
    check(
        (emp_passive - dist.p_passive_total).abs() <= 0.05,
        &format!(
            "A6 empirical passive {emp_passive:.4} vs analytic {:.4} +/- 0.05",
            dist.p_passive_total
        ),
        &mut failures,
    );
    for &(delta, p) in &dist.p_active_by_delta {
        let emp = hist
            .active_by_delta
            .get(&(delta as u16))
            .copied()
            .unwrap_or(0) as f64
            / repairs;
        check(
            (emp - p).abs() <= 0.05,
            &format!("A6 empirical active delta={delta}: {emp:.4} vs analytic {p:.4} +/- 0.05"),
            &mut failures,
        );
    }
    let emp_re = hist.reencoded as f64 / repairs;
    check(
        (emp_re - dist.p_reencode_total).abs() <= 0.05,
        &format!(
            "A6 empirical reencode {emp_re:.4} vs analytic {:.4} +/- 0.05",
            dist.p_reencode_total
        ),
        &mut failures,
    );
    assert!(
        failures.is_empty(),
        "A6 empirical-vs-analytic gaps (structural; see test doc comment): {failures:?}"
    );
}

/// A7: exact wire sizes, the compact-representation bit count, and byte
/// equality against ten pinned golden packets.
#[test]
fn a7_wire_format() {
    let mut failures = Vec::new();
    check(
        vector_bits(&cfg(32, 12, 2, 1)) == 17,
        "A7 vector_bits(g=32, w=12, q=2) == 17",
        &mut failures,
    );
    for &(g, w, q, ss) in &[(32u16, 12u16, 2u32, 16usize), (64, 4, 256, 8), (8, 3, 2, 4)] {
        let c = cfg(g, w, q, ss);
        let gen = Generation::random(&c, &mut derive_rng(0x77, g as u64));
        let mut rng = derive_rng(0x78, g as u64);
        let mut mode = EncoderMode::random();
        let mut all = true;
        for _ in 0..50 {
            let pkt = encode(&gen, &c, &mut mode, &mut rng);
            let bytes = serialize(&pkt, &c);
            let coeff_bytes = c.field.packed_len(pkt.vector.width() as usize);
            all &= bytes.len() == 4 + coeff_bytes + ss;
            all &= deserialize(&bytes, &c).unwrap() == pkt;
        }
        check(
            all,
            &format!("A7 wire size == 4 + coeff_bytes + symbol_size at g={g} q={q}"),
            &mut failures,
        );
    }
    // Golden packets: regenerate with the pinned recipe and compare bytes.
    let golden = include_str!("data/golden_packets.hex");
    let mut produced = Vec::new();
    let c2 = cfg(32, 12, 2, 16);
    let gen2 = Generation::random(&c2, &mut derive_rng(0xA7, 0));
    let mut rng = derive_rng(0xA7, 1);
    let mut mode = EncoderMode::random();
    for _ in 0..5 {
        let pkt = encode(&gen2, &c2, &mut mode, &mut rng);
        produced.push(hex(&serialize(&pkt, &c2)));
    }
    let c256 = cfg(64, 4, 256, 8);
    let gen256 = Generation::random(&c256, &mut derive_rng(0xA7, 2));
    let mut rng = derive_rng(0xA7, 3);
    let mut mode = EncoderMode::random();
    for _ in 0..5 {
        let pkt = encode(&gen256, &c256, &mut mode, &mut rng);
        produced.push(hex(&serialize(&pkt, &c256)));
    }
    let golden_lines: Vec<&str> = golden.lines().filter(|l| !l.is_empty()).collect();
    check(
        golden_lines == produced.iter().map(String::as_str).collect::<Vec<_>>(),
        "A7 ten pinned seeded packets serialize byte-identically",
        &mut failures,
    );
    assert!(failures.is_empty(), "A7 failures: {failures:?}");
}

fn hex(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}

/// A8: at large generations the banded decoder needs at least 4x fewer row
/// operations per symbol than the dense baseline, and the benchmark reports
/// positive throughput gains for both encode and decode.
#[test]
fn a8_performance_direction() {
    let mut failures = Vec::new();
    for &(g, w, trials, rlnc_trials) in &[(512u16, 48u16, 300u64, 200u64), (2048, 96, 30, 12)] {
        let c = cfg(g, w, 2, 8);
        let perp = sim::run_unicast(&c, &EncoderMode::random(), trials, 7);
        let rl = sim::run_unicast_rlnc(&c, rlnc_trials, 7);
        let perp_ops = perp.ops_fly_per_symbol + perp.ops_final_per_symbol;
        let rl_ops = rl.ops_fly_per_symbol + rl.ops_final_per_symbol;
        let ratio = rl_ops / perp_ops;
        check(
            ratio >= 4.0,
            &format!("A8 g={g} w={w}: dense/banded op ratio {ratio:.2} >= 4"),
            &mut failures,
        );
    }
    for &(g, w) in &[(512u16, 48u16), (2048, 96)] {
        let out = Command::new(env!("CARGO_BIN_EXE_perpetual"))
            .args([
                "bench",
                "--g",
                &g.to_string(),
                "--w-list",
                &w.to_string(),
                "--symbol-size",
                "256",
                "--generations",
                "2",
                "--seed",
                "3",
            ])
            .output()
            .expect("bench run");
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let mut rlnc_row = None;
        let mut perp_row = None;
        for line in text.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            match f[0] {
                "rlnc" => rlnc_row = Some((f[4].parse::<f64>().unwrap(), f[5].parse::<f64>().unwrap())),
                "perpetual" => perp_row = Some((f[4].parse::<f64>().unwrap(), f[5].parse::<f64>().unwrap())),
                _ => {}
            }
        }
        let (re, rd) = rlnc_row.unwrap();
        let (pe, pd) = perp_row.unwrap();
        check(
            pe > re && pd > rd,
            &format!("A8 bench g={g} w={w}: encode {pe:.0} > {re:.0} MB/s, decode {pd:.0} > {rd:.0} MB/s"),
            &mut failures,
        );
    }
    assert!(failures.is_empty(), "A8 failures: {failures:?}");
}

/// A9a: the band property holds after every consume across 10^4 fuzzed
/// packets at g=64, including recoded packets and duplicates.
#[test]
fn a9_band_property_fuzz() {
    let c = cfg(64, 8, 2, 4);
    let mut total_packets = 0u64;
    let mut seed = 0u64;
    while total_packets < 10_000 {
        seed += 1;
        let mut rng = derive_rng(0xA9, seed);
        let gen = Generation::random(&c, &mut rng);
        let mut mode = EncoderMode::random();
        let mut relay = DecoderState::new(c);
        let mut dec = DecoderState::new(c);
        let mut last = None;
        while !dec.is_decoded() && total_packets < 10_000 {
            let roll = rng.next_u32() % 10;
            let pkt = if roll < 6 {
                let p = encode(&gen, &c, &mut mode, &mut rng);
                let _ = relay.consume(&p);
                last = Some(p.clone());
                p
            } else if roll < 8 {
                match recode_active(&relay, &c, &mut rng) {
                    Some(p) => p,
                    None => encode(&gen, &c, &mut mode, &mut rng),
                }
            } else {
                // Duplicate injection.
                last.clone().unwrap_or_else(|| encode(&gen, &c, &mut mode, &mut rng))
            };
            dec.consume(&pkt).unwrap();
            total_packets += 1;
            assert!(
                dec.band_property_holds(),
                "band property violated at packet {total_packets}"
            );
        }
    }
    println!("PASS A9 band property across {total_packets} fuzzed packets");
}

use rand_core::RngCore;

/// A9b: forced final-decoding failures never wedge the decoder; every run
/// still reaches a correct decode.
#[test]
fn a9_no_wedged_states() {
    for run in 0..500u64 {
        let c = cfg(16, 4, 2, 4);
        let mut rng = derive_rng(0xA9B, run);
        let gen = Generation::random(&c, &mut rng);
        let mut mode = EncoderMode::random();
        let mut dec = DecoderState::new(c);
        let mut history: Vec<perpetual::codec::Packet> = Vec::new();
        let mut n = 0u64;
        while !dec.is_decoded() {
            n += 1;
            assert!(n < 5000, "run {run} wedged");
            // One third fresh, one third replays, one third crafted
            // combinations that can occupy a slot without adding rank.
            let roll = rng.next_u32() % 3;
            let pkt = if roll == 0 || history.len() < 4 {
                let p = encode(&gen, &c, &mut mode, &mut rng);
                history.push(p.clone());
                p
            } else if roll == 1 {
                history[(rng.next_u32() as usize) % history.len()].clone()
            } else {
                // XOR two earlier packets with nearby pivots when possible.
                let a = &history[(rng.next_u32() as usize) % history.len()];
                let da = a.vector.expand(&c);
                let b = &history[(rng.next_u32() as usize) % history.len()];
                let db = b.vector.expand(&c);
                let mut dense = da.clone();
                dense.madd(&db, 1);
                let sym: Vec<u8> = a.symbol.iter().zip(&b.symbol).map(|(x, y)| x ^ y).collect();
                match dense.next_nonzero(a.vector.pivot as usize) {
                    Some(p)
                        if dense.get(p) == 1
                            && span_within(&dense, p, 2 * c.width as usize) =>
                    {
                        perpetual::codec::Packet {
                            vector: perpetual::codec::CodingVector::from_dense(&dense, p as u16),
                            symbol: sym,
                        }
                    }
                    _ => {
                        let p = encode(&gen, &c, &mut mode, &mut rng);
                        history.push(p.clone());
                        p
                    }
                }
            };
            if dec.consume(&pkt).is_ok() {
                assert!(dec.band_property_holds());
            }
        }
        assert_eq!(dec.extract().unwrap(), gen, "run {run} produced wrong data");
    }
    println!("PASS A9 500 duplicate-injection runs recovered and decoded");
}

fn span_within(dense: &perpetual::codec::DenseVector, pivot: usize, max_width: usize) -> bool {
    let g = dense.len();
    for off in (max_width + 1)..g {
        if dense.get((pivot + off) % g) != 0 {
            return false;
        }
    }
    true
}

/// A9c: CLI output is byte-identical under a fixed seed. Wall-clock bench
/// columns are the documented exception; its deterministic columns are
/// compared structurally.
#[test]
fn a9_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_perpetual");
    let runs: &[&[&str]] = &[
        &["bounds", "--g", "32", "--w-range", "4:16:4"],
        &["bounds", "--g", "32", "--w-range", "8:12", "--table", "ops"],
        &["overhead", "--g", "16", "--w-range", "5", "--trials", "200", "--seed", "9"],
        &["ops", "--g", "16", "--w-range", "5", "--trials", "200", "--seed", "9"],
        &[
            "twohop", "--g", "64", "--w", "12", "--mu", "4", "--delta-max", "8", "--trials", "40",
            "--seed", "9",
        ],
        &["roundtrip", "--trials", "5", "--seed", "9"],
    ];
    for args in runs {
        let run = |args: &[&str]| {
            let out = Command::new(bin).args(args).output().expect("cli run");
            assert!(out.status.success(), "{args:?} failed");
            out.stdout
        };
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b, "nondeterministic output for {args:?}");
        println!("PASS A9 deterministic output: {}", args.join(" "));
    }
    // Exit codes: malformed flags exit 1 with no partial CSV on stdout.
    let bad = Command::new(bin)
        .args(["overhead", "--g", "32", "--w-range", "40"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1), "validation errors must exit 1");
    assert!(bad.stdout.is_empty(), "no partial output on errors");
    let unknown = Command::new(bin).args(["--nonsense"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1), "flag errors must exit 1");
    println!("PASS A9 validation errors exit 1 with no partial output");

    // NC_SEED overrides --seed.
    let with_flag = Command::new(bin)
        .args(["overhead", "--g", "16", "--w-range", "5", "--trials", "100", "--seed", "1"])
        .env("NC_SEED", "77")
        .output()
        .unwrap();
    let with_seed = Command::new(bin)
        .args(["overhead", "--g", "16", "--w-range", "5", "--trials", "100", "--seed", "77"])
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_seed.stdout, "NC_SEED must override --seed");
    println!("PASS A9 NC_SEED overrides --seed");
}

/// Supplementary sandwich invariant: measured overhead sits between the
/// analytic lower and upper bounds at knee widths, and the measured row
/// operations sit under their bounds, for g in 16..128.
#[test]
fn overhead_sandwich_at_knee() {
    let mut failures = Vec::new();
    for &(g, w, trials) in &[(16u16, 8u16, 20_000u64), (32, 12, 20_000), (64, 16, 12_000), (128, 24, 12_000)] {
        let c = cfg(g, w, 2, 8);
        let stats = sim::run_unicast(&c, &EncoderMode::random(), trials, 42);
        let b = analysis::overhead_upper(g as u32, w as u32, 2);
        let ok = stats.mean_overhead >= b.alpha && stats.mean_overhead <= b.upper;
        check(
            ok,
            &format!(
                "sandwich g={g} w={w}: {:.4} in [{:.4}, {:.4}]",
                stats.mean_overhead, b.alpha, b.upper
            ),
            &mut failures,
        );
        let ops = analysis::op_bounds(g as u32, w as u32, 2);
        let total = stats.ops_fly_per_symbol + stats.ops_final_per_symbol;
        check(
            stats.ops_fly_per_symbol <= ops.fly * 1.05 && total <= ops.total * 1.05,
            &format!("ops-bound g={g} w={w}: fly {:.2}<= {:.2}, total {total:.2} <= {:.2}",
                stats.ops_fly_per_symbol, ops.fly * 1.05, ops.total * 1.05),
            &mut failures,
        );
    }
    assert!(failures.is_empty(), "sandwich failures: {failures:?}");
}
