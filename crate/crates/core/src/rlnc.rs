//! Dense random linear network coding baseline: full-length random coding
//! vectors and textbook Gaussian elimination, used as the overhead and
//! complexity reference point.
//!
//! Dense packets use their own wire format, one flag byte `0x01` followed by
//! the full coefficient vector (bit-packed for GF(2), one byte per element
//! for GF(2^8)) and the coded symbol. Keeping the dense header separate from
//! the compact one makes size comparisons honest.

use rand_core::RngCore;

use crate::codec::{CodeConfig, DenseVector, Generation};
use crate::decoder::{ConsumeKind, ConsumeOutcome};
use crate::gf::{self, gf_inv};
use crate::rng::gen_element;
use crate::CodingError;

const DENSE_FLAG: u8 = 0x01;

/// A dense coded packet: `g` coefficients plus the coded symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlncPacket {
    pub coeffs: DenseVector,
    pub symbol: Vec<u8>,
}

/// Draw all `g` coefficients uniformly (zeros allowed, even the all-zero
/// vector) and combine the generation accordingly.
pub fn rlnc_encode<R: RngCore>(gen: &Generation, cfg: &CodeConfig, rng: &mut R) -> RlncPacket {
    let g = cfg.g();
    let mut coeffs = DenseVector::zero(cfg.field, g);
    let mut symbol = vec![0u8; cfg.symbol_size];
    for i in 0..g {
        let c = gen_element(rng, cfg.field);
        if c != 0 {
            coeffs.set(i, c);
            gf::row_madd(cfg.field, &mut symbol, gen.symbol(i), c);
        }
    }
    RlncPacket { coeffs, symbol }
}

pub fn rlnc_serialize(packet: &RlncPacket, cfg: &CodeConfig) -> Vec<u8> {
    let mut out = Vec::with_capacity(1 + cfg.dense_vector_len() + cfg.symbol_size);
    out.push(DENSE_FLAG);
    out.extend_from_slice(packet.coeffs.as_bytes());
    out.extend_from_slice(&packet.symbol);
    out
}

pub fn rlnc_deserialize(bytes: &[u8], cfg: &CodeConfig) -> Result<RlncPacket, CodingError> {
    let expected = 1 + cfg.dense_vector_len() + cfg.symbol_size;
    if bytes.len() != expected || bytes[0] != DENSE_FLAG {
        return Err(CodingError::MalformedPacket(format!(
            "dense packet must be {expected} bytes with flag {DENSE_FLAG:#04x}"
        )));
    }
    let mut coeffs = DenseVector::zero(cfg.field, cfg.g());
    let coeff_bytes = &bytes[1..1 + cfg.dense_vector_len()];
    match cfg.field {
        crate::gf::Field::Gf2 => {
            for (i, byte) in coeff_bytes.iter().enumerate() {
                for bit in 0..8 {
                    let idx = i * 8 + bit;
                    if idx < cfg.g() {
                        coeffs.set(idx, (byte >> bit) & 1);
                    }
                }
            }
        }
        crate::gf::Field::Gf256 => {
            for (i, &byte) in coeff_bytes.iter().enumerate() {
                coeffs.set(i, byte);
            }
        }
    }
    Ok(RlncPacket {
        coeffs,
        symbol: bytes[1 + cfg.dense_vector_len()..].to_vec(),
    })
}

#[derive(Clone)]
struct DenseRow {
    vec: DenseVector,
    sym: Vec<u8>,
}

/// Gaussian-elimination decoder. Rows are stored forward-reduced with a
/// leading 1, indexed by their leading position; backward elimination runs
/// once the matrix reaches full rank.
pub struct RlncDecoderState {
    cfg: CodeConfig,
    rows: Vec<Option<DenseRow>>,
    rank: u16,
    decoded: bool,
    ops_forward: u64,
    ops_backward: u64,
    discarded: u64,
}

impl RlncDecoderState {
    pub fn new(cfg: CodeConfig) -> Self {
        let g = cfg.g();
        RlncDecoderState {
            cfg,
            rows: vec![None; g],
            rank: 0,
            decoded: false,
            ops_forward: 0,
            ops_backward: 0,
            discarded: 0,
        }
    }

    pub fn rank(&self) -> u16 {
        self.rank
    }

    pub fn is_decoded(&self) -> bool {
        self.decoded
    }

    pub fn ops_forward(&self) -> u64 {
        self.ops_forward
    }

    pub fn ops_backward(&self) -> u64 {
        self.ops_backward
    }

    /// Total row operations, same multiplication-addition metric as the
    /// banded decoder.
    pub fn ops_total(&self) -> u64 {
        self.ops_forward + self.ops_backward
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn consume(&mut self, packet: &RlncPacket) -> Result<ConsumeOutcome, CodingError> {
        if packet.symbol.len() != self.cfg.symbol_size || packet.coeffs.len() != self.cfg.g() {
            return Err(CodingError::MalformedPacket(
                "dense packet does not match the configuration".into(),
            ));
        }
        if self.decoded {
            return Ok(ConsumeOutcome {
                kind: ConsumeKind::Decoded,
                rank: self.rank,
            });
        }
        let mut vec = packet.coeffs.clone();
        let mut sym = packet.symbol.clone();
        let mut lead = 0usize;
        let kind = loop {
            match (lead..self.cfg.g()).find(|&i| vec.get(i) != 0) {
                None => {
                    self.discarded += 1;
                    break ConsumeKind::Dependent;
                }
                Some(i) => {
                    lead = i;
                    match &self.rows[i] {
                        Some(row) => {
                            let c = vec.get(i);
                            vec.madd(&row.vec, c);
                            gf::row_madd(self.cfg.field, &mut sym, &row.sym, c);
                            self.ops_forward += 1;
                        }
                        None => {
                            let inv = gf_inv(self.cfg.field, vec.get(i));
                            vec.scale(inv);
                            gf::row_scale(self.cfg.field, &mut sym, inv);
                            self.rows[i] = Some(DenseRow { vec, sym });
                            self.rank += 1;
                            break ConsumeKind::Inserted(i as u16);
                        }
                    }
                }
            }
        };
        let kind = if self.rank as usize == self.cfg.g() {
            self.backward_eliminate();
            self.decoded = true;
            ConsumeKind::Decoded
        } else {
            kind
        };
        Ok(ConsumeOutcome {
            kind,
            rank: self.rank,
        })
    }

    fn backward_eliminate(&mut self) {
        let g = self.cfg.g();
        for i in (0..g).rev() {
            for j in 0..i {
                let cj = self.rows[j].as_ref().map_or(0, |r| r.vec.get(i));
                if cj != 0 {
                    let (pv, ps) = {
                        let r = self.rows[i].as_ref().unwrap();
                        (r.vec.clone(), r.sym.clone())
                    };
                    let rj = self.rows[j].as_mut().unwrap();
                    rj.vec.madd(&pv, cj);
                    gf::row_madd(self.cfg.field, &mut rj.sym, &ps, cj);
                    self.ops_backward += 1;
                }
            }
        }
    }

    pub fn extract(&self) -> Result<Generation, CodingError> {
        if !self.decoded {
            return Err(CodingError::NotDecoded);
        }
        let mut data = Vec::with_capacity(self.cfg.g() * self.cfg.symbol_size);
        for row in &self.rows {
            data.extend_from_slice(&row.as_ref().unwrap().sym);
        }
        Generation::from_data(&self.cfg, data)
    }
}
