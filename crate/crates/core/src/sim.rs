//! Seeded Monte-Carlo experiments: single-link overhead and row-operation
//! measurements, and the two-hop source/relay/sink scenario with recoding.
//!
//! Trials are independent: trial `i` runs on a ChaCha stream derived from
//! `(seed, i)`, and results are reduced in trial order, so the output is
//! byte-identical no matter how many threads run.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::codec::{encode, CodeConfig, EncoderMode, Generation};
use crate::decoder::{ConsumeKind, DecoderState};
use crate::recoder::{
    active_windows, combine_window, re_encode, recode_passive, RecodeKind, RecodeOutcome,
    RecodePolicy,
};
use crate::rng::{chance, derive_rng};

/// Independent per-packet erasures with probability `eps`.
#[derive(Debug, Clone, Copy)]
pub struct ErasureChannel {
    pub eps: f64,
}

impl ErasureChannel {
    pub fn new(eps: f64) -> Self {
        assert!((0.0..=1.0).contains(&eps));
        ErasureChannel { eps }
    }

    pub fn passes<R: rand_core::RngCore>(&self, rng: &mut R) -> bool {
        !chance(rng, self.eps)
    }
}

/// Counts of every packet kind a relay emitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecodeHistogram {
    pub forwarded: u64,
    pub passive: u64,
    pub active_by_delta: BTreeMap<u16, u64>,
    pub reencoded: u64,
}

impl RecodeHistogram {
    /// Repair packets only (everything the relay generated itself).
    pub fn repairs_total(&self) -> u64 {
        self.passive + self.reencoded + self.active_by_delta.values().sum::<u64>()
    }

    /// All packets the relay sent, forwards included.
    pub fn sent_total(&self) -> u64 {
        self.forwarded + self.repairs_total()
    }

    fn absorb(&mut self, other: &RecodeHistogram) {
        self.forwarded += other.forwarded;
        self.passive += other.passive;
        self.reencoded += other.reencoded;
        for (&d, &c) in &other.active_by_delta {
            *self.active_by_delta.entry(d).or_insert(0) += c;
        }
    }
}

/// Aggregated Monte-Carlo outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunStats {
    pub trials: u64,
    pub mean_overhead: f64,
    pub stddev_overhead: f64,
    pub ops_fly_per_symbol: f64,
    pub ops_final_per_symbol: f64,
    pub dependent_total: u64,
    /// Trials aborted by the transmission guard; must stay zero.
    pub failures: u64,
    /// Two-hop runs only.
    pub recode_histogram: Option<RecodeHistogram>,
}

struct TrialStats {
    overhead: u64,
    ops_fly: u64,
    ops_final: u64,
    dependent: u64,
    failed: bool,
    histogram: Option<RecodeHistogram>,
}

fn aggregate(cfg: &CodeConfig, per_trial: Vec<TrialStats>) -> RunStats {
    let trials = per_trial.len() as u64;
    let g = cfg.g() as f64;
    let mean_overhead =
        per_trial.iter().map(|t| t.overhead as f64).sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        per_trial
            .iter()
            .map(|t| {
                let d = t.overhead as f64 - mean_overhead;
                d * d
            })
            .sum::<f64>()
            / (trials - 1) as f64
    } else {
        0.0
    };
    let mut histogram: Option<RecodeHistogram> = None;
    for t in &per_trial {
        if let Some(h) = &t.histogram {
            histogram.get_or_insert_with(RecodeHistogram::default).absorb(h);
        }
    }
    RunStats {
        trials,
        mean_overhead,
        stddev_overhead: var.sqrt(),
        ops_fly_per_symbol: per_trial.iter().map(|t| t.ops_fly as f64).sum::<f64>()
            / trials as f64
            / g,
        ops_final_per_symbol: per_trial.iter().map(|t| t.ops_final as f64).sum::<f64>()
            / trials as f64
            / g,
        dependent_total: per_trial.iter().map(|t| t.dependent).sum(),
        failures: per_trial.iter().filter(|t| t.failed).count() as u64,
        recode_histogram: histogram,
    }
}

/// Encode and decode over a lossless link until the generation decodes;
/// report packets beyond `g` and row-operation counters.
pub fn run_unicast(cfg: &CodeConfig, mode: &EncoderMode, trials: u64, seed: u64) -> RunStats {
    let per_trial: Vec<TrialStats> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = derive_rng(seed, t);
            let gen = Generation::random(cfg, &mut rng);
            let mut enc_mode = mode.clone();
            let mut dec = DecoderState::new(*cfg);
            let guard = 50 * cfg.g() as u64 + 1000;
            let mut n = 0u64;
            while !dec.is_decoded() && n < guard {
                let pkt = encode(&gen, cfg, &mut enc_mode, &mut rng);
                dec.consume(&pkt).expect("well-formed packet");
                n += 1;
            }
            let failed = !dec.is_decoded();
            if !failed {
                assert_eq!(dec.extract().unwrap(), gen, "decoded data mismatch");
            }
            TrialStats {
                overhead: n.saturating_sub(cfg.g() as u64),
                ops_fly: dec.ops_fly(),
                ops_final: dec.ops_final(),
                dependent: dec.discarded(),
                failed,
                histogram: None,
            }
        })
        .collect();
    aggregate(cfg, per_trial)
}

/// Dense-baseline counterpart of `run_unicast`.
pub fn run_unicast_rlnc(cfg: &CodeConfig, trials: u64, seed: u64) -> RunStats {
    use crate::rlnc::{rlnc_encode, RlncDecoderState};
    let per_trial: Vec<TrialStats> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = derive_rng(seed, t);
            let gen = Generation::random(cfg, &mut rng);
            let mut dec = RlncDecoderState::new(*cfg);
            let guard = 50 * cfg.g() as u64 + 1000;
            let mut n = 0u64;
            while !dec.is_decoded() && n < guard {
                let pkt = rlnc_encode(&gen, cfg, &mut rng);
                dec.consume(&pkt).expect("well-formed packet");
                n += 1;
            }
            let failed = !dec.is_decoded();
            if !failed {
                assert_eq!(dec.extract().unwrap(), gen, "decoded data mismatch");
            }
            TrialStats {
                overhead: n.saturating_sub(cfg.g() as u64),
                ops_fly: dec.ops_forward(),
                ops_final: dec.ops_backward(),
                dependent: dec.discarded(),
                failed,
                histogram: None,
            }
        })
        .collect();
    aggregate(cfg, per_trial)
}

/// One repair attempt at a filling relay, preference-ordered: passive
/// recoding of the row the triggering arrival inserted, then active
/// recoding over the smallest workable range. Among the workable ranges
/// the relay sweeps round-robin instead of drawing blindly: consecutive
/// repairs then combine disjoint stretches of the generation, which keeps
/// them from collapsing onto the same row space downstream (recoding a
/// narrow neighborhood twice is the kind of deterministic repetition that
/// breeds linearly dependent symbols).
fn serve_repair<R: rand_core::RngCore>(
    relay: &DecoderState,
    cfg: &CodeConfig,
    policy: &RecodePolicy,
    passive_avail: &mut Option<u16>,
    inserted: Option<u16>,
    sweep: &mut u16,
    rng: &mut R,
) -> Option<RecodeOutcome> {
    if let Some(row) = *passive_avail {
        if let Some(out) = recode_passive(relay, row, policy.mu) {
            *passive_avail = None;
            return Some(out);
        }
    }
    let g = cfg.g();
    for delta in policy.mu..=policy.delta_max {
        let windows = active_windows(relay, policy.mu, delta);
        if windows.is_empty() {
            continue;
        }
        // First workable range at or after the sweep pointer, circularly.
        let start = windows
            .iter()
            .copied().find(|&s| s >= *sweep)
            .unwrap_or(windows[0]);
        *sweep = ((start as usize + delta as usize + 1) % g) as u16;
        let must = inserted.filter(|&p| {
            let off = (p as usize + g - start as usize) % g;
            off <= delta as usize
        });
        return Some(combine_window(relay, cfg, start, delta, must, rng));
    }
    None
}

/// The two-hop scenario: source A streams random-mode packets to relay R
/// over an erasure channel; R forwards every arrival to sink B and tops the
/// stream up with repair packets at the long-run rate that cancels the R-B
/// erasures. Repairs prefer passive recoding of the row just inserted, then
/// active recoding over the smallest workable range; when neither is
/// possible the repair is deferred and made up with re-encoded packets
/// after R has decoded, which also cover whatever B still misses. Feedback
/// (R and B announcing full rank) is idealized as instant and lossless.
pub fn run_two_hop(
    cfg: &CodeConfig,
    policy: &RecodePolicy,
    eps_ar: f64,
    eps_rb: f64,
    trials: u64,
    seed: u64,
) -> RunStats {
    assert!(eps_rb < 1.0, "the R-B channel may not erase everything");
    // Active recoding widens packets to w + delta; the wire format accepts
    // at most 2w, so the policy cap may not exceed the code width.
    assert!(
        policy.delta_max <= cfg.width,
        "delta_max {} exceeds the code width {}",
        policy.delta_max,
        cfg.width
    );
    let chan_ar = ErasureChannel::new(eps_ar);
    let chan_rb = ErasureChannel::new(eps_rb);
    let repair_rate = 1.0 / (1.0 - eps_rb) - 1.0;
    let per_trial: Vec<TrialStats> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = derive_rng(seed, t);
            let gen = Generation::random(cfg, &mut rng);
            let mut a_mode = EncoderMode::random();
            let mut relay = DecoderState::new(*cfg);
            let mut sink = DecoderState::new(*cfg);
            let mut hist = RecodeHistogram::default();
            let mut credit = 0.0f64;
            // Arrival indices at which owed repairs were minted; an owed
            // repair waits for recoding to become possible, but at most
            // `2 * delta_max` arrivals so relay delay stays bounded. What
            // expires is covered by re-encoding after the relay decodes.
            let mut owed: std::collections::VecDeque<u64> = std::collections::VecDeque::new();
            // Round-robin pointer for active-range selection.
            let mut sweep: u16 = 0;
            let mut arrivals = 0u64;
            let mut b_received = 0u64;
            let mut sent = 0u64;
            let guard = 50 * cfg.g() as u64;

            // Source phase: A transmits until R (or, vacuously, B) decodes.
            'source: while !relay.is_decoded() && !sink.is_decoded() && sent < guard {
                sent += 1;
                let pkt = encode(&gen, cfg, &mut a_mode, &mut rng);
                if !chan_ar.passes(&mut rng) {
                    continue;
                }
                arrivals += 1;
                let out = relay.consume(&pkt).expect("well-formed packet");
                hist.forwarded += 1;
                if chan_rb.passes(&mut rng) && !sink.is_decoded() {
                    b_received += 1;
                    sink.consume(&pkt).expect("well-formed packet");
                }
                credit += repair_rate;
                while credit >= 1.0 {
                    credit -= 1.0;
                    owed.push_back(arrivals);
                }
                let patience = 2 * policy.delta_max as u64;
                while owed
                    .front()
                    .is_some_and(|&born| arrivals - born > patience)
                {
                    owed.pop_front();
                }
                let inserted = match out.kind {
                    ConsumeKind::Inserted(p) => Some(p),
                    _ => None,
                };
                let mut passive_avail = inserted;
                while !owed.is_empty() {
                    if sink.is_decoded() {
                        break 'source;
                    }
                    let repair = if relay.is_decoded() {
                        Some(re_encode(&relay, cfg, &mut rng))
                    } else if relay.rank() < policy.mu {
                        // Too few symbols accumulated: keep waiting.
                        None
                    } else {
                        serve_repair(
                            &relay,
                            cfg,
                            policy,
                            &mut passive_avail,
                            inserted,
                            &mut sweep,
                            &mut rng,
                        )
                    };
                    let Some(repair) = repair else { break };
                    owed.pop_front();
                    match repair.kind {
                        RecodeKind::Passive => hist.passive += 1,
                        RecodeKind::Active { delta } => {
                            *hist.active_by_delta.entry(delta).or_insert(0) += 1;
                        }
                        RecodeKind::ReEncoded => hist.reencoded += 1,
                    }
                    if chan_rb.passes(&mut rng) {
                        b_received += 1;
                        sink.consume(&repair.packet).expect("well-formed packet");
                    }
                }
            }

            // Relay phase: deferred repairs and B's remaining losses are
            // covered by re-encoding until B signals full rank.
            while !sink.is_decoded() && relay.is_decoded() && sent < guard {
                sent += 1;
                let repair = re_encode(&relay, cfg, &mut rng);
                hist.reencoded += 1;
                if chan_rb.passes(&mut rng) {
                    b_received += 1;
                    sink.consume(&repair.packet).expect("well-formed packet");
                }
            }

            let failed = !sink.is_decoded();
            if !failed {
                assert_eq!(sink.extract().unwrap(), gen, "sink data mismatch");
            }
            TrialStats {
                overhead: b_received.saturating_sub(cfg.g() as u64),
                ops_fly: sink.ops_fly(),
                ops_final: sink.ops_final(),
                dependent: sink.discarded(),
                failed,
                histogram: Some(hist),
            }
        })
        .collect();
    aggregate(cfg, per_trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn cfg(g: u16, w: u16, symbol_size: usize) -> CodeConfig {
        CodeConfig::new(g, w, Field::Gf2, symbol_size).unwrap()
    }

    #[test]
    fn identical_seed_gives_identical_stats() {
        let c = cfg(16, 5, 4);
        let a = run_unicast(&c, &EncoderMode::random(), 50, 9);
        let b = run_unicast(&c, &EncoderMode::random(), 50, 9);
        assert_eq!(a, b);
        let p = RecodePolicy::new(3, 5).unwrap();
        let x = run_two_hop(&c, &p, 0.2, 0.2, 20, 11);
        let y = run_two_hop(&c, &p, 0.2, 0.2, 20, 11);
        assert_eq!(x, y);
    }

    #[test]
    fn systematic_lossless_has_zero_overhead_and_zero_ops() {
        let c = CodeConfig::new(32, 0, Field::Gf2, 4).unwrap();
        let s = run_unicast(&c, &EncoderMode::systematic(), 100, 3);
        assert_eq!(s.mean_overhead, 0.0);
        assert_eq!(s.ops_fly_per_symbol, 0.0);
        assert_eq!(s.ops_final_per_symbol, 0.0);
        assert_eq!(s.failures, 0);
    }

    #[test]
    fn transparent_relay_matches_single_link() {
        // No erasures anywhere: B sees exactly A's stream, so its overhead
        // must equal the single-link overhead for the same seed count.
        let c = cfg(16, 8, 4);
        let p = RecodePolicy::new(4, 8).unwrap();
        let two = run_two_hop(&c, &p, 0.0, 0.0, 200, 21);
        let one = run_unicast(&c, &EncoderMode::random(), 200, 22);
        assert_eq!(two.failures, 0);
        assert!(
            (two.mean_overhead - one.mean_overhead).abs() < 0.5,
            "two-hop {} vs single {}",
            two.mean_overhead,
            one.mean_overhead
        );
        // With eps_rb = 0 the repair rate is zero: nothing recoded.
        let h = two.recode_histogram.unwrap();
        assert_eq!(h.repairs_total() - h.reencoded, 0);
    }

    #[test]
    fn lossy_two_hop_decodes_and_histogram_accounts_for_every_send() {
        let c = cfg(64, 12, 4);
        let p = RecodePolicy::new(4, 8).unwrap();
        let s = run_two_hop(&c, &p, 0.3, 0.3, 30, 33);
        assert_eq!(s.failures, 0);
        let h = s.recode_histogram.unwrap();
        assert!(h.repairs_total() > 0);
        assert!(h.forwarded > 0);
    }
}
