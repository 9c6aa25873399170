//! Finite field arithmetic for GF(2) and GF(2^8), plus bulk row operations
//! on symbol buffers.
//!
//! Both fields have characteristic 2, so addition and subtraction are the
//! same operation (XOR). GF(2^8) uses the irreducible polynomial
//! x^8 + x^4 + x^3 + x^2 + 1 (0x11D) and a 256x256 product table built at
//! first use from the shift-and-reduce definition.

use std::sync::OnceLock;

/// Reduction polynomial for GF(2^8), including the x^8 term.
pub const GF256_POLY: u16 = 0x11D;

/// The two supported coding fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// GF(2): elements are single bits, rows are bit-packed.
    Gf2,
    /// GF(2^8): elements are bytes.
    Gf256,
}

impl Field {
    /// Field size `q`.
    pub fn q(self) -> u32 {
        match self {
            Field::Gf2 => 2,
            Field::Gf256 => 256,
        }
    }

    /// Parse from the numeric field size used on the command line.
    pub fn from_q(q: u32) -> Option<Field> {
        match q {
            2 => Some(Field::Gf2),
            256 => Some(Field::Gf256),
            _ => None,
        }
    }

    /// Bits needed to store one element.
    pub fn bits_per_element(self) -> u32 {
        match self {
            Field::Gf2 => 1,
            Field::Gf256 => 8,
        }
    }

    /// Bytes needed to store `n` elements (bit-packed for GF(2)).
    pub fn packed_len(self, n: usize) -> usize {
        match self {
            Field::Gf2 => n.div_ceil(8),
            Field::Gf256 => n,
        }
    }
}

/// Multiply two GF(2^8) elements by shift-and-reduce. This is the defining
/// implementation; the table below is generated from it.
pub fn gf256_mul_shift(a: u8, b: u8) -> u8 {
    let mut acc: u16 = 0;
    let mut a = a as u16;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x100 != 0 {
            a ^= GF256_POLY;
        }
    }
    acc as u8
}

struct Gf256Tables {
    mul: Box<[u8; 256 * 256]>,
    inv: [u8; 256],
}

fn tables() -> &'static Gf256Tables {
    static TABLES: OnceLock<Gf256Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut mul = vec![0u8; 256 * 256].into_boxed_slice();
        let mut inv = [0u8; 256];
        for a in 0..256usize {
            for b in 0..256usize {
                let p = gf256_mul_shift(a as u8, b as u8);
                mul[a * 256 + b] = p;
                if p == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        let mul: Box<[u8; 256 * 256]> = mul.try_into().unwrap();
        Gf256Tables { mul, inv }
    })
}

/// Field addition. XOR in both supported fields.
pub fn gf_add(field: Field, a: u8, b: u8) -> u8 {
    debug_assert!(field != Field::Gf2 || (a <= 1 && b <= 1));
    a ^ b
}

/// Field multiplication.
pub fn gf_mul(field: Field, a: u8, b: u8) -> u8 {
    match field {
        Field::Gf2 => a & b,
        Field::Gf256 => tables().mul[a as usize * 256 + b as usize],
    }
}

/// Multiplicative inverse. Panics on zero, which has no inverse.
pub fn gf_inv(field: Field, a: u8) -> u8 {
    assert!(a != 0, "zero has no multiplicative inverse");
    match field {
        Field::Gf2 => 1,
        Field::Gf256 => tables().inv[a as usize],
    }
}

/// In-place `dst <- dst + coeff * src`, elementwise over the field.
///
/// For GF(2) the buffers may be bit-packed or plain bytes; either way the
/// operation is a plain XOR of the underlying bytes. Callers skip zero
/// coefficients, and `coeff` must be nonzero here.
pub fn row_madd(field: Field, dst: &mut [u8], src: &[u8], coeff: u8) {
    assert_eq!(dst.len(), src.len(), "row length mismatch");
    assert!(coeff != 0, "row_madd requires a nonzero coefficient");
    match field {
        Field::Gf2 => {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
        }
        Field::Gf256 => {
            if coeff == 1 {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            } else {
                let row = &tables().mul[coeff as usize * 256..coeff as usize * 256 + 256];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= row[*s as usize];
                }
            }
        }
    }
}

/// In-place `dst <- coeff * dst`. A no-op for coeff 1.
pub fn row_scale(field: Field, dst: &mut [u8], coeff: u8) {
    assert!(coeff != 0, "row_scale requires a nonzero coefficient");
    if coeff == 1 || field == Field::Gf2 {
        return;
    }
    let row = &tables().mul[coeff as usize * 256..coeff as usize * 256 + 256];
    for d in dst.iter_mut() {
        *d = row[*d as usize];
    }
}
