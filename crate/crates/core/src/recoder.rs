//! Recoding at a relay: produce fresh coded packets out of a partially
//! filled decoder without ever decoding.
//!
//! Three ways to make a repair packet, in preference order:
//!
//! * **passive** — a stored row that already absorbed at least `mu`
//!   substitutions during on-the-fly decoding is sent as-is; the row
//!   operations were already paid for.
//! * **active** — rows whose pivots sit inside a small circular range are
//!   combined with fresh random coefficients, widening the vector by at
//!   most the range size.
//! * **re-encode** — once the relay has decoded, it encodes exactly like a
//!   source.

use rand_core::RngCore;

use crate::codec::{CodeConfig, CodingVector, DenseVector, Packet};
use crate::decoder::DecoderState;
use crate::gf::{self, gf_inv};
use crate::rng::{gen_element, gen_index};
use crate::CodingError;

/// Recoding knobs: `mu` is the minimum number of symbols a recoded packet
/// should combine, `delta_max` caps the extra vector width active recoding
/// may introduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecodePolicy {
    pub mu: u16,
    pub delta_max: u16,
}

impl RecodePolicy {
    pub fn new(mu: u16, delta_max: u16) -> Result<Self, CodingError> {
        if mu < 2 {
            return Err(CodingError::InvalidConfig("mu must be at least 2".into()));
        }
        if delta_max < mu {
            return Err(CodingError::InvalidConfig(
                "delta_max must be at least mu".into(),
            ));
        }
        Ok(RecodePolicy { mu, delta_max })
    }

    /// Default cap of twice `mu`, leaving some slack for the range search.
    pub fn with_default_cap(mu: u16) -> Result<Self, CodingError> {
        Self::new(mu, mu.saturating_mul(2))
    }
}

/// How a repair packet was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecodeKind {
    Passive,
    Active { delta: u16 },
    ReEncoded,
}

#[derive(Debug, Clone)]
pub struct RecodeOutcome {
    pub packet: Packet,
    pub kind: RecodeKind,
    /// Number of rows with a nonzero share in the packet.
    pub combined: u32,
}

/// Which stored rows the passive step may emit. The library default
/// considers every eligible row; the two-hop relay narrows this to the row
/// inserted by the packet that triggered the repair, so that passive
/// emission follows reception like the counter it is built on.
#[derive(Debug, Clone, Copy)]
pub enum PassiveScope<'a> {
    AnyEligible,
    Rows(&'a [u16]),
    Disabled,
}

fn emit_stored_row(state: &DecoderState, index: u16) -> Packet {
    let vec = state.row_vector(index).unwrap().clone();
    let sym = state.row_symbol(index).unwrap().to_vec();
    Packet {
        vector: CodingVector::from_dense(&vec, index),
        symbol: sym,
    }
}

/// Combine the stored rows selected by `h` (index, coefficient); the first
/// entry carries coefficient 1. Returns the compacted packet and the count
/// of rows actually mixed.
fn combine_rows(state: &DecoderState, cfg: &CodeConfig, h: &[(u16, u8)]) -> (Packet, u32) {
    let mut dense = DenseVector::zero(cfg.field, cfg.g());
    let mut sym = vec![0u8; cfg.symbol_size];
    let mut combined = 0u32;
    for &(idx, coeff) in h {
        if coeff == 0 {
            continue;
        }
        combined += 1;
        dense.madd(state.row_vector(idx).unwrap(), coeff);
        gf::row_madd(cfg.field, &mut sym, state.row_symbol(idx).unwrap(), coeff);
    }
    let base = h[0].0 as usize;
    let pivot = match dense.next_nonzero(base) {
        Some(p) => p,
        None => {
            // Total cancellation can only happen when windows wrap around
            // the whole generation; fall back to the base row itself.
            return (emit_stored_row(state, h[0].0), 1);
        }
    };
    let lead = dense.get(pivot);
    if lead != 1 {
        let inv = gf_inv(cfg.field, lead);
        dense.scale(inv);
        gf::row_scale(cfg.field, &mut sym, inv);
    }
    (
        Packet {
            vector: CodingVector::from_dense(&dense, pivot as u16),
            symbol: sym,
        },
        combined,
    )
}

/// Active recoding: pick a random present pivot, draw coefficients for the
/// present rows in the `w` positions after it, and emit the combination.
/// The result has width at most `2w`. Returns `None` at rank zero.
pub fn recode_active<R: RngCore>(
    state: &DecoderState,
    cfg: &CodeConfig,
    rng: &mut R,
) -> Option<Packet> {
    if state.rank() == 0 {
        return None;
    }
    let g = cfg.g();
    let mut p = gen_index(rng, g as u32) as u16;
    while !state.pivot_present(p) {
        p = gen_index(rng, g as u32) as u16;
    }
    let mut h = vec![(p, 1u8)];
    for off in 1..=cfg.width as usize {
        let idx = ((p as usize + off) % g) as u16;
        if state.pivot_present(idx) {
            let c = gen_element(rng, cfg.field);
            h.push((idx, c));
        }
    }
    Some(combine_rows(state, cfg, &h).0)
}

/// Hybrid recoding with the documented preference order: passive, then
/// active over the smallest workable range, then re-encoding when the
/// state is already decoded. Returns `None` when none of those applies.
pub fn recode_hybrid<R: RngCore>(
    state: &DecoderState,
    cfg: &CodeConfig,
    policy: &RecodePolicy,
    rng: &mut R,
) -> Option<RecodeOutcome> {
    recode_hybrid_scoped(state, cfg, policy, rng, PassiveScope::AnyEligible)
}

/// `recode_hybrid` with control over the passive candidate set.
pub fn recode_hybrid_scoped<R: RngCore>(
    state: &DecoderState,
    cfg: &CodeConfig,
    policy: &RecodePolicy,
    rng: &mut R,
    scope: PassiveScope<'_>,
) -> Option<RecodeOutcome> {
    if state.rank() == 0 {
        return None;
    }
    let g = cfg.g();

    // Passive: reuse a row that absorbed enough substitutions on reception.
    let eligible: Vec<u16> = match scope {
        PassiveScope::AnyEligible => (0..g as u16)
            .filter(|&i| state.subs_count(i).is_some_and(|s| s >= policy.mu as u32))
            .collect(),
        PassiveScope::Rows(rows) => rows
            .iter()
            .copied()
            .filter(|&i| state.subs_count(i).is_some_and(|s| s >= policy.mu as u32))
            .collect(),
        PassiveScope::Disabled => Vec::new(),
    };
    if !eligible.is_empty() {
        let pick = eligible[gen_index(rng, eligible.len() as u32) as usize];
        let subs = state.subs_count(pick).unwrap();
        return Some(RecodeOutcome {
            packet: emit_stored_row(state, pick),
            kind: RecodeKind::Passive,
            combined: subs + 1,
        });
    }

    // Active: smallest extra width `delta` such that some circular range
    // of delta + 1 consecutive indices holds at least `mu` present pivots;
    // among those ranges pick one uniformly.
    for delta in policy.mu..=policy.delta_max {
        let windows = active_windows(state, policy.mu, delta);
        if windows.is_empty() {
            continue;
        }
        let start = windows[gen_index(rng, windows.len() as u32) as usize];
        return Some(combine_window(state, cfg, start, delta, None, rng));
    }

    // Re-encode: only once the generation is decoded; then the relay can
    // encode the same way as the original source.
    if state.is_decoded() {
        return Some(re_encode(state, cfg, rng));
    }
    None
}

/// Passive recoding of one specific stored row, if it absorbed at least
/// `mu` substitutions during its on-the-fly decoding.
pub fn recode_passive(state: &DecoderState, index: u16, mu: u16) -> Option<RecodeOutcome> {
    let subs = state.subs_count(index)?;
    if subs < mu as u32 {
        return None;
    }
    Some(RecodeOutcome {
        packet: emit_stored_row(state, index),
        kind: RecodeKind::Passive,
        combined: subs + 1,
    })
}

/// Start indices of the circular ranges of `delta + 1` consecutive slots
/// holding at least `mu` present pivots: the ranges active recoding may
/// combine at extra width `delta`.
pub fn active_windows(state: &DecoderState, mu: u16, delta: u16) -> Vec<u16> {
    let g = state.config().g();
    let span = delta as usize + 1;
    let mut windows = Vec::new();
    for start in 0..g {
        let mut present = 0u16;
        for off in 0..span {
            if state.pivot_present(((start + off) % g) as u16) {
                present += 1;
            }
        }
        if present >= mu {
            windows.push(start as u16);
        }
    }
    windows
}

/// Count of present pivots inside the range of `delta + 1` slots at `start`.
pub fn window_pivot_count(state: &DecoderState, start: u16, delta: u16) -> u16 {
    let g = state.config().g();
    let mut present = 0u16;
    for off in 0..=(delta as usize) {
        if state.pivot_present(((start as usize + off) % g) as u16) {
            present += 1;
        }
    }
    present
}

/// Combine the present rows in the range of `delta + 1` slots at `start`
/// with random coefficients. The first present row anchors the combination
/// with coefficient 1; `must_include`, when present in the range, is also
/// forced nonzero so a just-arrived dimension cannot be dropped by an
/// unlucky zero draw.
pub fn combine_window<R: RngCore>(
    state: &DecoderState,
    cfg: &CodeConfig,
    start: u16,
    delta: u16,
    must_include: Option<u16>,
    rng: &mut R,
) -> RecodeOutcome {
    let g = cfg.g();
    let mut h: Vec<(u16, u8)> = Vec::new();
    for off in 0..=(delta as usize) {
        let idx = ((start as usize + off) % g) as u16;
        if state.pivot_present(idx) {
            let coeff = if h.is_empty() {
                1
            } else if must_include == Some(idx) {
                loop {
                    let c = gen_element(rng, cfg.field);
                    if c != 0 {
                        break c;
                    }
                }
            } else {
                gen_element(rng, cfg.field)
            };
            h.push((idx, coeff));
        }
    }
    let (packet, combined) = combine_rows(state, cfg, &h);
    RecodeOutcome {
        packet,
        kind: RecodeKind::Active { delta },
        combined,
    }
}

/// Fresh source-style encoding from a decoded state: random pivot, `w`
/// random window coefficients, nominal width `w` on the wire.
pub fn re_encode<R: RngCore>(state: &DecoderState, cfg: &CodeConfig, rng: &mut R) -> RecodeOutcome {
    debug_assert!(state.is_decoded());
    let g = cfg.g();
    let pivot = gen_index(rng, g as u32) as u16;
    let mut vector_coeffs = vec![0u8; cfg.field.packed_len(cfg.width as usize)];
    let mut sym = state.row_symbol(pivot).unwrap().to_vec();
    let mut combined = 1u32;
    for j in 1..=cfg.width {
        let c = gen_element(rng, cfg.field);
        if c != 0 {
            combined += 1;
            match cfg.field {
                crate::gf::Field::Gf2 => {
                    vector_coeffs[(j as usize - 1) / 8] |= 1 << ((j as usize - 1) % 8)
                }
                crate::gf::Field::Gf256 => vector_coeffs[j as usize - 1] = c,
            }
            let idx = ((pivot as usize + j as usize) % g) as u16;
            gf::row_madd(cfg.field, &mut sym, state.row_symbol(idx).unwrap(), c);
        }
    }
    RecodeOutcome {
        packet: Packet {
            vector: CodingVector::new(pivot, cfg.width, cfg.field, vector_coeffs),
            symbol: sym,
        },
        kind: RecodeKind::ReEncoded,
        combined,
    }
}
