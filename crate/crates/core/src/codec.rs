//! Code configuration, the compact coding-vector representation, the three
//! encoder modes, and the packet wire format.
//!
//! A coding vector is stored as a pivot index plus the `w'` coefficients for
//! the circular offsets that follow it. The coefficient at the pivot itself
//! is an implied 1 and is never stored or transmitted.
//!
//! Wire format (big-endian):
//!
//! ```text
//! bytes 0..2   width w'  (u16)
//! bytes 2..4   pivot p   (u16)
//! next         coefficients for offsets 1..=w'
//!              GF(2):   ceil(w'/8) bytes, offset j at bit (j-1), LSB first
//!              GF(256): w' bytes in offset order
//! next         symbol_size bytes of coded symbol
//! ```
//!
//! The configuration itself never travels in packets; both ends agree on it
//! out of band (CLI flags here).

use rand_core::RngCore;

use crate::gf::{self, Field};
use crate::rng::{gen_element, gen_index};
use crate::CodingError;

/// Everything that defines one generation's code: generation size `g`,
/// width `w`, field, and symbol size in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeConfig {
    pub generation_size: u16,
    pub width: u16,
    pub field: Field,
    pub symbol_size: usize,
}

impl CodeConfig {
    pub fn new(
        generation_size: u16,
        width: u16,
        field: Field,
        symbol_size: usize,
    ) -> Result<Self, CodingError> {
        let cfg = CodeConfig {
            generation_size,
            width,
            field,
            symbol_size,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CodingError> {
        if self.generation_size == 0 {
            return Err(CodingError::InvalidConfig("generation size must be >= 1".into()));
        }
        if self.width >= self.generation_size {
            return Err(CodingError::InvalidConfig(format!(
                "width {} must be smaller than generation size {}",
                self.width, self.generation_size
            )));
        }
        if self.symbol_size == 0 {
            return Err(CodingError::InvalidConfig("symbol size must be >= 1".into()));
        }
        Ok(())
    }

    pub fn g(&self) -> usize {
        self.generation_size as usize
    }

    /// Bytes used by a dense coding vector of `g` elements.
    pub fn dense_vector_len(&self) -> usize {
        self.field.packed_len(self.g())
    }

    /// Serialized packet size for a given on-wire width.
    pub fn wire_len(&self, width: u16) -> usize {
        4 + self.field.packed_len(width as usize) + self.symbol_size
    }

    /// Widest vector a well-formed packet may carry: `w` for source packets,
    /// up to `2w` after one recoding stage.
    pub fn max_packet_width(&self) -> u16 {
        self.width.saturating_mul(2)
    }
}

/// Exact bit count of the compact coding-vector representation: an index
/// into the generation plus `w` field elements. Non-power-of-two sizes
/// round each term up.
pub fn vector_bits(cfg: &CodeConfig) -> u32 {
    let g_bits = 32 - (cfg.generation_size as u32).next_power_of_two().leading_zeros() - 1;
    let g_bits = if (cfg.generation_size as u32).is_power_of_two() {
        g_bits
    } else {
        g_bits + 1
    };
    g_bits + cfg.width as u32 * cfg.field.bits_per_element()
}

/// One generation of `g` source symbols, stored contiguously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    symbol_size: usize,
    data: Vec<u8>,
}

impl Generation {
    pub fn from_data(cfg: &CodeConfig, data: Vec<u8>) -> Result<Self, CodingError> {
        if data.len() != cfg.g() * cfg.symbol_size {
            return Err(CodingError::InvalidConfig(format!(
                "generation payload must be {} bytes, got {}",
                cfg.g() * cfg.symbol_size,
                data.len()
            )));
        }
        Ok(Generation {
            symbol_size: cfg.symbol_size,
            data,
        })
    }

    pub fn random<R: RngCore>(cfg: &CodeConfig, rng: &mut R) -> Self {
        let mut data = vec![0u8; cfg.g() * cfg.symbol_size];
        rng.fill_bytes(&mut data);
        Generation {
            symbol_size: cfg.symbol_size,
            data,
        }
    }

    pub fn symbol(&self, index: usize) -> &[u8] {
        &self.data[index * self.symbol_size..(index + 1) * self.symbol_size]
    }

    pub fn symbol_count(&self) -> usize {
        self.data.len() / self.symbol_size
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }
}

/// Dense length-`g` coefficient vector, bit-packed for GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseVector {
    field: Field,
    len: usize,
    bytes: Vec<u8>,
}

impl DenseVector {
    pub fn zero(field: Field, len: usize) -> Self {
        DenseVector {
            field,
            len,
            bytes: vec![0u8; field.packed_len(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        match self.field {
            Field::Gf2 => (self.bytes[i / 8] >> (i % 8)) & 1,
            Field::Gf256 => self.bytes[i],
        }
    }

    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(i < self.len);
        match self.field {
            Field::Gf2 => {
                debug_assert!(value <= 1);
                let mask = 1u8 << (i % 8);
                if value == 0 {
                    self.bytes[i / 8] &= !mask;
                } else {
                    self.bytes[i / 8] |= mask;
                }
            }
            Field::Gf256 => self.bytes[i] = value,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bytes.iter().all(|&b| b == 0)
    }

    /// First index with a nonzero coefficient, scanning circularly from
    /// `start`. Returns `None` on the zero vector.
    pub fn next_nonzero(&self, start: usize) -> Option<usize> {
        for off in 0..self.len {
            let i = (start + off) % self.len;
            if self.get(i) != 0 {
                return Some(i);
            }
        }
        None
    }

    /// `self <- self + coeff * other`.
    pub fn madd(&mut self, other: &DenseVector, coeff: u8) {
        debug_assert_eq!(self.len, other.len);
        gf::row_madd(self.field, &mut self.bytes, &other.bytes, coeff);
    }

    /// `self <- coeff * self`.
    pub fn scale(&mut self, coeff: u8) {
        gf::row_scale(self.field, &mut self.bytes, coeff);
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// Compact coding vector: pivot index plus the coefficients for the `w'`
/// circular offsets after it. The pivot coefficient is an implied 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingVector {
    pub pivot: u16,
    width: u16,
    field: Field,
    coeffs: Vec<u8>,
}

impl CodingVector {
    pub fn new(pivot: u16, width: u16, field: Field, coeffs: Vec<u8>) -> Self {
        debug_assert_eq!(coeffs.len(), field.packed_len(width as usize));
        CodingVector {
            pivot,
            width,
            field,
            coeffs,
        }
    }

    pub fn width(&self) -> u16 {
        self.width
    }

    /// Coefficient for circular offset `j` in `1..=width`.
    pub fn coeff(&self, j: u16) -> u8 {
        debug_assert!(j >= 1 && j <= self.width);
        let idx = (j - 1) as usize;
        match self.field {
            Field::Gf2 => (self.coeffs[idx / 8] >> (idx % 8)) & 1,
            Field::Gf256 => self.coeffs[idx],
        }
    }

    fn set_coeff(&mut self, j: u16, value: u8) {
        let idx = (j - 1) as usize;
        match self.field {
            Field::Gf2 => {
                let mask = 1u8 << (idx % 8);
                if value == 0 {
                    self.coeffs[idx / 8] &= !mask;
                } else {
                    self.coeffs[idx / 8] |= mask;
                }
            }
            Field::Gf256 => self.coeffs[idx] = value,
        }
    }

    /// Expand into a dense length-`g` vector: 1 at the pivot, the stored
    /// coefficients at the following offsets modulo `g`, zero elsewhere.
    pub fn expand(&self, cfg: &CodeConfig) -> DenseVector {
        let g = cfg.g();
        let mut dense = DenseVector::zero(self.field, g);
        dense.set(self.pivot as usize % g, 1);
        for j in 1..=self.width {
            let c = self.coeff(j);
            if c != 0 {
                dense.set((self.pivot as usize + j as usize) % g, c);
            }
        }
        dense
    }

    /// Compact a dense vector whose first nonzero (scanning circularly from
    /// `pivot`) is at `pivot` itself. The width is trimmed to the last
    /// nonzero offset.
    pub fn from_dense(dense: &DenseVector, pivot: u16) -> Self {
        let g = dense.len();
        debug_assert_eq!(dense.get(pivot as usize), 1, "pivot coefficient must be 1");
        let mut width = 0u16;
        for off in 1..g {
            if dense.get((pivot as usize + off) % g) != 0 {
                width = off as u16;
            }
        }
        let mut cv = CodingVector {
            pivot,
            width,
            field: dense.field(),
            coeffs: vec![0u8; dense.field().packed_len(width as usize)],
        };
        for j in 1..=width {
            cv.set_coeff(j, dense.get((pivot as usize + j as usize) % g));
        }
        cv
    }
}

/// A coded packet: compact coding vector plus the coded symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub vector: CodingVector,
    pub symbol: Vec<u8>,
}

/// Pivot selection mode, with the cursor state the sequential modes need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncoderMode {
    /// Pivot drawn uniformly from `[0, g)`; `w` random coefficients.
    Random,
    /// Pivot cycles 0..g-1 and wraps; `w` random coefficients.
    Sequential { next: u16 },
    /// Pivots 0..g-1 once, then random; no coefficients (width 0), so the
    /// first `g` packets are the source symbols themselves.
    Systematic { sent: u32 },
}

impl EncoderMode {
    pub fn random() -> Self {
        EncoderMode::Random
    }

    pub fn sequential() -> Self {
        EncoderMode::Sequential { next: 0 }
    }

    pub fn systematic() -> Self {
        EncoderMode::Systematic { sent: 0 }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "random" => Some(Self::random()),
            "sequential" => Some(Self::sequential()),
            "systematic" => Some(Self::systematic()),
            _ => None,
        }
    }
}

/// Produce one coded packet: pick the pivot per mode, draw the window
/// coefficients (zeros allowed), and combine the covered source symbols.
pub fn encode<R: RngCore>(
    gen: &Generation,
    cfg: &CodeConfig,
    mode: &mut EncoderMode,
    rng: &mut R,
) -> Packet {
    debug_assert_eq!(gen.symbol_count(), cfg.g());
    debug_assert_eq!(gen.symbol(0).len(), cfg.symbol_size);
    let g = cfg.g();
    let (pivot, width) = match mode {
        EncoderMode::Random => (gen_index(rng, g as u32) as u16, cfg.width),
        EncoderMode::Sequential { next } => {
            let p = *next;
            *next = if (p as usize + 1) < g { p + 1 } else { 0 };
            (p, cfg.width)
        }
        EncoderMode::Systematic { sent } => {
            let p = if (*sent as usize) < g {
                let p = *sent as u16;
                *sent += 1;
                p
            } else {
                gen_index(rng, g as u32) as u16
            };
            (p, 0)
        }
    };

    let mut vector = CodingVector {
        pivot,
        width,
        field: cfg.field,
        coeffs: vec![0u8; cfg.field.packed_len(width as usize)],
    };
    let mut symbol = gen.symbol(pivot as usize).to_vec();
    for j in 1..=width {
        let c = gen_element(rng, cfg.field);
        if c != 0 {
            vector.set_coeff(j, c);
            gf::row_madd(
                cfg.field,
                &mut symbol,
                gen.symbol((pivot as usize + j as usize) % g),
                c,
            );
        }
    }
    Packet { vector, symbol }
}

/// Serialize a packet in the wire format described in the module docs.
pub fn serialize(packet: &Packet, cfg: &CodeConfig) -> Vec<u8> {
    let width = packet.vector.width();
    let mut out = Vec::with_capacity(cfg.wire_len(width));
    out.extend_from_slice(&width.to_be_bytes());
    out.extend_from_slice(&packet.vector.pivot.to_be_bytes());
    out.extend_from_slice(&packet.vector.coeffs);
    out.extend_from_slice(&packet.symbol);
    out
}

/// Parse and validate a packet. The buffer must be exactly one packet.
pub fn deserialize(bytes: &[u8], cfg: &CodeConfig) -> Result<Packet, CodingError> {
    if bytes.len() < 4 {
        return Err(CodingError::MalformedPacket("truncated header".into()));
    }
    let width = u16::from_be_bytes([bytes[0], bytes[1]]);
    let pivot = u16::from_be_bytes([bytes[2], bytes[3]]);
    if pivot >= cfg.generation_size {
        return Err(CodingError::MalformedPacket(format!(
            "pivot {pivot} out of range for generation size {}",
            cfg.generation_size
        )));
    }
    if width > cfg.max_packet_width() || width as usize >= cfg.g() {
        return Err(CodingError::MalformedPacket(format!(
            "width {width} exceeds the recoded maximum {} for width {}",
            cfg.max_packet_width().min(cfg.generation_size - 1),
            cfg.width
        )));
    }
    let expected = cfg.wire_len(width);
    if bytes.len() != expected {
        return Err(CodingError::MalformedPacket(format!(
            "length {} does not match the {expected} bytes implied by width {width}",
            bytes.len()
        )));
    }
    let coeff_len = cfg.field.packed_len(width as usize);
    let coeffs = bytes[4..4 + coeff_len].to_vec();
    if cfg.field == Field::Gf2 && !width.is_multiple_of(8) && !coeffs.is_empty() {
        let spare = coeffs[coeff_len - 1] >> (width % 8);
        if spare != 0 {
            return Err(CodingError::MalformedPacket(
                "nonzero padding bits after the last coefficient".into(),
            ));
        }
    }
    let symbol = bytes[4 + coeff_len..].to_vec();
    Ok(Packet {
        vector: CodingVector::new(pivot, width, cfg.field, coeffs),
        symbol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_rng;

    fn cfg(g: u16, w: u16, field: Field, symbol_size: usize) -> CodeConfig {
        CodeConfig::new(g, w, field, symbol_size).unwrap()
    }

    #[test]
    fn config_rejects_bad_shapes() {
        assert!(CodeConfig::new(8, 8, Field::Gf2, 4).is_err());
        assert!(CodeConfig::new(0, 0, Field::Gf2, 4).is_err());
        assert!(CodeConfig::new(8, 3, Field::Gf2, 0).is_err());
        assert!(CodeConfig::new(8, 0, Field::Gf2, 4).is_ok()); // systematic-only
    }

    #[test]
    fn vector_bits_matches_compact_representation() {
        assert_eq!(vector_bits(&cfg(32, 12, Field::Gf2, 1)), 17);
        assert_eq!(vector_bits(&cfg(2048, 96, Field::Gf2, 1)), 107);
        assert_eq!(vector_bits(&cfg(256, 4, Field::Gf256, 1)), 40);
    }

    #[test]
    fn expand_places_window_with_wraparound() {
        let c = cfg(5, 2, Field::Gf256, 1);
        let cv = CodingVector::new(0, 2, Field::Gf256, vec![0xA, 0xB]);
        let d = cv.expand(&c);
        assert_eq!(
            (0..5).map(|i| d.get(i)).collect::<Vec<_>>(),
            vec![1, 0xA, 0xB, 0, 0]
        );
        let cv = CodingVector::new(4, 1, Field::Gf256, vec![0xC]);
        let d = cv.expand(&c);
        assert_eq!(
            (0..5).map(|i| d.get(i)).collect::<Vec<_>>(),
            vec![0xC, 0, 0, 0, 1]
        );
    }

    #[test]
    fn fig2_wrap_example_covers_expected_indices() {
        // g=8, w=3, pivot 7: nonzeros confined to {7, 0, 1, 2}.
        let c = cfg(8, 3, Field::Gf2, 1);
        let gen = Generation::random(&c, &mut derive_rng(5, 0));
        let mut rng = derive_rng(6, 0);
        for _ in 0..200 {
            let pkt = encode(&gen, &c, &mut EncoderMode::random(), &mut rng);
            if pkt.vector.pivot == 7 {
                let d = pkt.vector.expand(&c);
                for i in 3..7 {
                    assert_eq!(d.get(i), 0, "index {i} outside the wrapped window");
                }
                assert_eq!(d.get(7), 1);
            }
        }
    }

    #[test]
    fn source_vectors_stay_inside_their_window() {
        // One implied 1 at the pivot, at most w other nonzeros, all inside
        // the circular window, for every pivot position.
        for field in [Field::Gf2, Field::Gf256] {
            let c = cfg(16, 5, field, 2);
            let gen = Generation::random(&c, &mut derive_rng(3, 0));
            let mut rng = derive_rng(4, 0);
            let mut mode = EncoderMode::random();
            for _ in 0..500 {
                let pkt = encode(&gen, &c, &mut mode, &mut rng);
                let d = pkt.vector.expand(&c);
                let p = pkt.vector.pivot as usize;
                assert_eq!(d.get(p), 1);
                let mut nonzeros = 0;
                for off in 1..16 {
                    let v = d.get((p + off) % 16);
                    if v != 0 {
                        assert!(off <= 5, "nonzero outside the window at offset {off}");
                        nonzeros += 1;
                    }
                }
                assert!(nonzeros <= 5);
            }
        }
    }

    #[test]
    fn systematic_packets_are_the_source_symbols() {
        let c = cfg(8, 0, Field::Gf256, 16);
        let gen = Generation::random(&c, &mut derive_rng(7, 0));
        let mut mode = EncoderMode::systematic();
        let mut rng = derive_rng(8, 0);
        for k in 0..8 {
            let pkt = encode(&gen, &c, &mut mode, &mut rng);
            assert_eq!(pkt.vector.pivot, k as u16);
            assert_eq!(pkt.vector.width(), 0);
            assert_eq!(pkt.symbol, gen.symbol(k));
        }
        // Afterwards pivots are random but packets stay plain copies.
        let pkt = encode(&gen, &c, &mut mode, &mut rng);
        assert_eq!(pkt.vector.width(), 0);
        assert_eq!(pkt.symbol, gen.symbol(pkt.vector.pivot as usize));
    }

    #[test]
    fn sequential_cursor_wraps() {
        let c = cfg(4, 2, Field::Gf2, 2);
        let gen = Generation::random(&c, &mut derive_rng(9, 0));
        let mut mode = EncoderMode::sequential();
        let mut rng = derive_rng(10, 0);
        let pivots: Vec<u16> = (0..9)
            .map(|_| encode(&gen, &c, &mut mode, &mut rng).vector.pivot)
            .collect();
        assert_eq!(pivots, vec![0, 1, 2, 3, 0, 1, 2, 3, 0]);
    }

    #[test]
    fn all_zero_generation_encodes_to_zero_symbols() {
        let c = cfg(8, 3, Field::Gf2, 8);
        let gen = Generation::from_data(&c, vec![0u8; 64]).unwrap();
        let mut rng = derive_rng(11, 0);
        for _ in 0..50 {
            let pkt = encode(&gen, &c, &mut EncoderMode::random(), &mut rng);
            assert!(pkt.symbol.iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn encoding_is_linear_over_gf2() {
        let c = cfg(16, 5, Field::Gf2, 8);
        let mut rng = derive_rng(12, 0);
        let ga = Generation::random(&c, &mut rng);
        let gb = Generation::random(&c, &mut rng);
        let xor_data: Vec<u8> = ga
            .as_bytes()
            .iter()
            .zip(gb.as_bytes())
            .map(|(a, b)| a ^ b)
            .collect();
        let gx = Generation::from_data(&c, xor_data).unwrap();
        // Same rng stream and mode state for all three encoders.
        for seed in 0..20 {
            let pa = encode(&ga, &c, &mut EncoderMode::random(), &mut derive_rng(13, seed));
            let pb = encode(&gb, &c, &mut EncoderMode::random(), &mut derive_rng(13, seed));
            let px = encode(&gx, &c, &mut EncoderMode::random(), &mut derive_rng(13, seed));
            assert_eq!(pa.vector, pb.vector);
            assert_eq!(pa.vector, px.vector);
            let xored: Vec<u8> = pa.symbol.iter().zip(&pb.symbol).map(|(a, b)| a ^ b).collect();
            assert_eq!(px.symbol, xored);
        }
    }

    #[test]
    fn random_pivot_histogram_is_uniform_within_4_sigma() {
        let c = cfg(32, 4, Field::Gf2, 1);
        let gen = Generation::random(&c, &mut derive_rng(14, 0));
        let mut rng = derive_rng(15, 0);
        let mut mode = EncoderMode::random();
        let n = 100_000;
        let mut hist = [0u32; 32];
        for _ in 0..n {
            hist[encode(&gen, &c, &mut mode, &mut rng).vector.pivot as usize] += 1;
        }
        let mean = n as f64 / 32.0;
        let sigma = (mean * (1.0 - 1.0 / 32.0)).sqrt();
        for (i, &h) in hist.iter().enumerate() {
            assert!((h as f64 - mean).abs() < 4.0 * sigma, "pivot {i}: {h}");
        }
    }

    #[test]
    fn wire_size_is_exact() {
        let c = cfg(32, 12, Field::Gf2, 16);
        let gen = Generation::random(&c, &mut derive_rng(16, 0));
        let pkt = encode(&gen, &c, &mut EncoderMode::random(), &mut derive_rng(17, 0));
        let bytes = serialize(&pkt, &c);
        assert_eq!(bytes.len(), 2 + 2 + 2 + 16);
        assert_eq!(bytes.len(), c.wire_len(pkt.vector.width()));
    }

    #[test]
    fn deserialize_rejects_malformed_packets() {
        let c = cfg(32, 12, Field::Gf2, 16);
        let gen = Generation::random(&c, &mut derive_rng(18, 0));
        let pkt = encode(&gen, &c, &mut EncoderMode::random(), &mut derive_rng(19, 0));
        let bytes = serialize(&pkt, &c);

        assert!(deserialize(&bytes[..bytes.len() - 1], &c).is_err()); // truncated
        let mut too_wide = bytes.clone();
        too_wide[0..2].copy_from_slice(&(2 * 12 + 1u16).to_be_bytes());
        assert!(deserialize(&too_wide, &c).is_err()); // width 2w+1
        let mut bad_pivot = bytes.clone();
        bad_pivot[2..4].copy_from_slice(&32u16.to_be_bytes());
        assert!(deserialize(&bad_pivot, &c).is_err()); // pivot >= g
        assert!(deserialize(&bytes, &c).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn compact_expand_compact_roundtrip(
                g in 2u16..64,
                pivot_frac in 0.0f64..1.0,
                width_frac in 0.0f64..1.0,
                seed in 0u64..1000,
                byte_field in proptest::bool::ANY,
            ) {
                let field = if byte_field { Field::Gf256 } else { Field::Gf2 };
                let c = CodeConfig::new(g, g / 2, field, 1);
                prop_assume!(c.is_ok());
                let c = c.unwrap();
                let pivot = ((pivot_frac * g as f64) as u16).min(g - 1);
                let width = ((width_frac * (g - 1) as f64) as u16).min(g - 1);
                let mut rng = derive_rng(0xC0FFEE, seed);
                let mut dense = DenseVector::zero(field, g as usize);
                dense.set(pivot as usize, 1);
                let mut trailing = 0;
                for j in 1..=width {
                    let v = gen_element(&mut rng, field);
                    if v != 0 {
                        dense.set((pivot as usize + j as usize) % g as usize, v);
                        trailing = j;
                    }
                }
                let cv = CodingVector::from_dense(&dense, pivot);
                prop_assert_eq!(cv.width(), trailing);
                prop_assert_eq!(cv.expand(&c), dense);
            }

            #[test]
            fn serialize_roundtrip_is_byte_identical(
                g in 2u16..80,
                seed in 0u64..2000,
                byte_field in proptest::bool::ANY,
            ) {
                let field = if byte_field { Field::Gf256 } else { Field::Gf2 };
                let w = (g / 3).max(1).min(g - 1);
                let c = CodeConfig::new(g, w, field, 9).unwrap();
                let mut rng = derive_rng(0xBEEF, seed);
                let gen = Generation::random(&c, &mut rng);
                let pkt = encode(&gen, &c, &mut EncoderMode::random(), &mut rng);
                let bytes = serialize(&pkt, &c);
                let back = deserialize(&bytes, &c).unwrap();
                prop_assert_eq!(&back, &pkt);
                prop_assert_eq!(serialize(&back, &c), bytes);
            }
        }
    }
}
