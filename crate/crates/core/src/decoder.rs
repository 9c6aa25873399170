//! The banded decoder: per-packet forward substitution at reception time,
//! then a final forward/backward elimination pass once every pivot slot is
//! occupied.
//!
//! Stored rows are kept normalized (leading coefficient 1 at their slot
//! index) and their nonzeros stay confined to a circular window of the
//! widest packet width seen so far, so elimination never causes fill-in.
//!
//! Incoming packets walk the matrix: while the current pivot candidate is
//! occupied, the stored row is substituted in and the candidate advances to
//! the next nonzero coefficient; landing on an empty slot inserts the
//! packet. A walk that exceeds `3g` substitutions has entered a cycle.
//! Such packets are parked in a small stash and re-walked whenever an
//! insertion or a failed final pass changes the matrix, instead of being
//! dropped outright; a packet that reduces to zero is discarded as linearly
//! dependent. Row operations on the coding vector are buffered and replayed
//! on the coded symbol only when the packet survives.

use crate::codec::{CodeConfig, DenseVector, Generation, Packet};
use crate::gf::{gf_inv, Field};
use crate::CodingError;

/// Parked packets are bounded; beyond this a cycling packet is dropped.
const STASH_CAPACITY: usize = 16;

/// How a consumed packet changed the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsumeKind {
    /// A new pivot candidate was identified at this slot.
    Inserted(u16),
    /// The packet was linearly dependent (or parked as unresolvable now).
    Dependent,
    /// This packet completed decoding.
    Decoded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConsumeOutcome {
    pub kind: ConsumeKind,
    pub rank: u16,
}

#[derive(Debug, Clone)]
struct StoredRow {
    vec: DenseVector,
    sym: Vec<u8>,
    /// Stored-row substitutions absorbed while this packet was decoded
    /// on the fly. Drives passive recoding.
    subs: u32,
}

#[derive(Debug, Clone)]
struct WalkPacket {
    vec: DenseVector,
    sym: Vec<u8>,
    candidate: u16,
    subs: u32,
    /// Row operations applied to the vector but not yet to the symbol:
    /// (normalizing inverse, stored row index).
    pending: Vec<(u8, u16)>,
}

enum WalkResult {
    Inserted(u16),
    Dependent,
    Stuck(WalkPacket),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OpsBucket {
    Fly,
    Final,
}

/// Decoder state: the banded coefficient matrix, the symbol matrix, pivot
/// occupancy, rank, per-row substitution counters and row-op counters.
#[derive(Debug, Clone)]
pub struct DecoderState {
    cfg: CodeConfig,
    rows: Vec<Option<StoredRow>>,
    rank: u16,
    w_max: u16,
    decoded: bool,
    ops_fly: u64,
    ops_final: u64,
    discarded: u64,
    stash: Vec<WalkPacket>,
}

impl DecoderState {
    pub fn new(cfg: CodeConfig) -> Self {
        let g = cfg.g();
        DecoderState {
            cfg,
            rows: vec![None; g],
            rank: 0,
            w_max: cfg.width.min(cfg.generation_size - 1),
            decoded: false,
            ops_fly: 0,
            ops_final: 0,
            discarded: 0,
            stash: Vec::new(),
        }
    }

    pub fn config(&self) -> &CodeConfig {
        &self.cfg
    }

    pub fn rank(&self) -> u16 {
        self.rank
    }

    pub fn is_decoded(&self) -> bool {
        self.decoded
    }

    /// Widest packet width consumed so far; all band bounds use this.
    pub fn width_seen(&self) -> u16 {
        self.w_max
    }

    /// Row operations performed during on-the-fly decoding.
    pub fn ops_fly(&self) -> u64 {
        self.ops_fly
    }

    /// Row operations performed during final forward/backward passes.
    pub fn ops_final(&self) -> u64 {
        self.ops_final
    }

    /// Packets found linearly dependent and dropped.
    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn pivot_present(&self, index: u16) -> bool {
        self.rows[index as usize].is_some()
    }

    /// Substitutions absorbed by the stored row at `index`, if occupied.
    pub fn subs_count(&self, index: u16) -> Option<u32> {
        self.rows[index as usize].as_ref().map(|r| r.subs)
    }

    /// Dense copy of the stored coding row at `index`.
    pub fn row_vector(&self, index: u16) -> Option<&DenseVector> {
        self.rows[index as usize].as_ref().map(|r| &r.vec)
    }

    /// Stored coded symbol at `index`.
    pub fn row_symbol(&self, index: u16) -> Option<&[u8]> {
        self.rows[index as usize].as_ref().map(|r| r.sym.as_slice())
    }

    fn field(&self) -> Field {
        self.cfg.field
    }

    fn g(&self) -> usize {
        self.cfg.g()
    }

    /// Consume one packet: expand, forward-substitute, and when every pivot
    /// slot is occupied attempt final decoding.
    pub fn consume(&mut self, packet: &Packet) -> Result<ConsumeOutcome, CodingError> {
        self.validate(packet)?;
        if self.decoded {
            return Ok(ConsumeOutcome {
                kind: ConsumeKind::Decoded,
                rank: self.rank,
            });
        }
        if packet.vector.width() > self.w_max {
            self.w_max = packet.vector.width();
        }
        let dense = packet.vector.expand(&self.cfg);
        let kind = match self.forward_substitute_internal(dense, packet.symbol.clone(), packet.vector.pivot)
        {
            Some(pivot) => ConsumeKind::Inserted(pivot),
            None => ConsumeKind::Dependent,
        };
        if self.rank as usize == self.g() {
            self.try_final();
        }
        let kind = if self.decoded { ConsumeKind::Decoded } else { kind };
        Ok(ConsumeOutcome {
            kind,
            rank: self.rank,
        })
    }

    fn validate(&self, packet: &Packet) -> Result<(), CodingError> {
        if packet.symbol.len() != self.cfg.symbol_size {
            return Err(CodingError::MalformedPacket(format!(
                "symbol is {} bytes, configuration says {}",
                packet.symbol.len(),
                self.cfg.symbol_size
            )));
        }
        if packet.vector.pivot >= self.cfg.generation_size {
            return Err(CodingError::MalformedPacket(format!(
                "pivot {} out of range",
                packet.vector.pivot
            )));
        }
        if packet.vector.width() > self.cfg.max_packet_width()
            || packet.vector.width() as usize >= self.g()
        {
            return Err(CodingError::MalformedPacket(format!(
                "width {} exceeds the recoded maximum",
                packet.vector.width()
            )));
        }
        Ok(())
    }

    /// Forward-substitute a dense row into the matrix. Returns the slot the
    /// row was inserted at, or `None` if it was dependent or parked.
    pub fn forward_substitute(&mut self, dense: DenseVector, symbol: Vec<u8>) -> Option<u16> {
        let start = dense.next_nonzero(0)? as u16;
        self.forward_substitute_internal(dense, symbol, start)
    }

    fn forward_substitute_internal(
        &mut self,
        dense: DenseVector,
        symbol: Vec<u8>,
        start: u16,
    ) -> Option<u16> {
        let pkt = WalkPacket {
            vec: dense,
            sym: symbol,
            candidate: start,
            subs: 0,
            pending: Vec::new(),
        };
        match self.walk(pkt, OpsBucket::Fly) {
            WalkResult::Inserted(p) => {
                self.drain_stash();
                Some(p)
            }
            WalkResult::Dependent => {
                self.discarded += 1;
                None
            }
            WalkResult::Stuck(p) => {
                self.park(p);
                None
            }
        }
    }

    fn park(&mut self, pkt: WalkPacket) {
        debug_assert!(pkt.pending.is_empty());
        if self.stash.len() >= STASH_CAPACITY {
            self.discarded += 1;
            return;
        }
        self.stash.push(pkt);
    }

    /// Re-walk parked packets until none makes progress. Call after the
    /// matrix changes.
    fn drain_stash(&mut self) {
        while !self.stash.is_empty() {
            let entries = std::mem::take(&mut self.stash);
            let mut progress = false;
            for e in entries {
                debug_assert!(e.pending.is_empty());
                match self.walk(e, OpsBucket::Fly) {
                    WalkResult::Inserted(_) => progress = true,
                    WalkResult::Dependent => self.discarded += 1,
                    WalkResult::Stuck(p) => self.stash.push(p),
                }
            }
            if !progress {
                break;
            }
        }
    }

    /// The pivot-candidate walk of on-the-fly decoding.
    fn walk(&mut self, mut pkt: WalkPacket, bucket: OpsBucket) -> WalkResult {
        let g = self.g();
        let cap = 3 * g as u64;
        let mut iters = 0u64;
        let mut c = pkt.candidate as usize;
        loop {
            c = match pkt.vec.next_nonzero(c) {
                Some(i) => i,
                None => return WalkResult::Dependent,
            };
            let coeff = pkt.vec.get(c);
            let inv = gf_inv(self.field(), coeff);
            if self.rows[c].is_some() {
                if iters >= cap {
                    // Cycling: hand the packet back with its symbol brought
                    // up to date with the vector.
                    pkt.candidate = c as u16;
                    pkt.apply_pending_to_symbol(self);
                    return WalkResult::Stuck(pkt);
                }
                pkt.vec.scale(inv);
                let row = self.rows[c].as_ref().unwrap();
                pkt.vec.madd(&row.vec, 1);
                pkt.pending.push((inv, c as u16));
                pkt.subs += 1;
                iters += 1;
                match bucket {
                    OpsBucket::Fly => self.ops_fly += 1,
                    OpsBucket::Final => self.ops_final += 1,
                }
                c = (c + 1) % g;
            } else {
                pkt.vec.scale(inv);
                pkt.apply_pending_to_symbol(self);
                crate::gf::row_scale(self.field(), &mut pkt.sym, inv);
                self.rows[c] = Some(StoredRow {
                    vec: pkt.vec,
                    sym: pkt.sym,
                    subs: pkt.subs,
                });
                self.rank += 1;
                return WalkResult::Inserted(c as u16);
            }
        }
    }

    /// Run final decoding passes while the candidate rank is full. A failed
    /// forward pass frees slots and requeues what it displaced, which can
    /// restore full rank from the stash, so loop until settled.
    fn try_final(&mut self) {
        let guard = self.g() + STASH_CAPACITY + 2;
        for _ in 0..guard {
            if self.rank as usize != self.g() || self.decoded {
                break;
            }
            if self.final_forward() {
                self.final_backward();
                self.decoded = true;
                self.stash.clear();
            }
        }
    }

    /// Bring the matrix to echelon form. Scans each column downwards for a
    /// pivot, normalizing and swapping it into place, then substitutes down
    /// into the bottom `w_max` rows (the only rows that can hold wrapped
    /// coefficients). A column with no pivot means the candidate matrix is
    /// rank deficient: that slot is freed and the displaced row, if any, is
    /// re-walked so its information is not lost. Returns whether the matrix
    /// still has full rank.
    pub fn final_forward(&mut self) -> bool {
        let g = self.g();
        let w = self.w_max as usize;
        let mut residuals: Vec<(usize, StoredRow)> = Vec::new();
        for i in 0..g {
            let mut found = None;
            for j in i..g {
                if let Some(r) = &self.rows[j] {
                    if r.vec.get(i) != 0 {
                        found = Some(j);
                        break;
                    }
                }
            }
            match found {
                Some(j) => {
                    let coeff = self.rows[j].as_ref().unwrap().vec.get(i);
                    if coeff != 1 {
                        let inv = gf_inv(self.field(), coeff);
                        let r = self.rows[j].as_mut().unwrap();
                        r.vec.scale(inv);
                        crate::gf::row_scale(self.cfg.field, &mut r.sym, inv);
                    }
                    if j != i {
                        self.rows.swap(i, j);
                    }
                    let lo = (j + 1).max(g.saturating_sub(w));
                    for k in lo..g {
                        let ck = match &self.rows[k] {
                            Some(rk) => rk.vec.get(i),
                            None => 0,
                        };
                        if ck != 0 {
                            let (pivot_vec, pivot_sym) = {
                                let r = self.rows[i].as_ref().unwrap();
                                (r.vec.clone(), r.sym.clone())
                            };
                            let rk = self.rows[k].as_mut().unwrap();
                            rk.vec.madd(&pivot_vec, ck);
                            crate::gf::row_madd(self.cfg.field, &mut rk.sym, &pivot_sym, ck);
                            self.ops_final += 1;
                        }
                    }
                }
                None => {
                    if let Some(row) = self.rows[i].take() {
                        self.rank -= 1;
                        if !row.vec.is_zero() {
                            residuals.push((i, row));
                        }
                    }
                }
            }
        }
        if self.rank as usize == g {
            return true;
        }
        for (col, row) in residuals {
            let pkt = WalkPacket {
                vec: row.vec,
                sym: row.sym,
                candidate: col as u16,
                subs: row.subs,
                pending: Vec::new(),
            };
            match self.walk(pkt, OpsBucket::Final) {
                WalkResult::Inserted(_) => {}
                WalkResult::Dependent => self.discarded += 1,
                WalkResult::Stuck(p) => self.park(p),
            }
        }
        self.drain_stash();
        false
    }

    /// Clear the remaining upper-band coefficients, bottom row upwards. For
    /// each pivot only the `w_max` rows above it can be nonzero there.
    pub fn final_backward(&mut self) {
        let g = self.g();
        let w = self.w_max as usize;
        for i in (0..g).rev() {
            for j in (i.saturating_sub(w)..i).rev() {
                let cj = self.rows[j].as_ref().map_or(0, |r| r.vec.get(i));
                if cj != 0 {
                    let (pivot_vec, pivot_sym) = {
                        let r = self.rows[i].as_ref().unwrap();
                        (r.vec.clone(), r.sym.clone())
                    };
                    let rj = self.rows[j].as_mut().unwrap();
                    rj.vec.madd(&pivot_vec, cj);
                    crate::gf::row_madd(self.cfg.field, &mut rj.sym, &pivot_sym, cj);
                    self.ops_final += 1;
                }
            }
        }
    }

    /// The decoded generation, in symbol order.
    pub fn extract(&self) -> Result<Generation, CodingError> {
        if !self.decoded {
            return Err(CodingError::NotDecoded);
        }
        let mut data = Vec::with_capacity(self.g() * self.cfg.symbol_size);
        for row in &self.rows {
            data.extend_from_slice(&row.as_ref().unwrap().sym);
        }
        Generation::from_data(&self.cfg, data)
    }

    /// Verification helper: every stored row's nonzeros must lie inside the
    /// circular window `[slot, slot + width_seen]`.
    pub fn band_property_holds(&self) -> bool {
        let g = self.g();
        let w = self.w_max as usize;
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(r) = row {
                if r.vec.get(i) != 1 {
                    return false;
                }
                for off in (w + 1)..g {
                    if r.vec.get((i + off) % g) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl WalkPacket {
    /// Replay the buffered vector operations on the coded symbol.
    fn apply_pending_to_symbol(&mut self, state: &DecoderState) {
        for (inv, row) in self.pending.drain(..) {
            crate::gf::row_scale(state.cfg.field, &mut self.sym, inv);
            let src = &state.rows[row as usize].as_ref().unwrap().sym;
            crate::gf::row_madd(state.cfg.field, &mut self.sym, src, 1);
        }
    }
}
