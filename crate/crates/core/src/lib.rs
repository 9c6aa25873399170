//! Perpetual sparse network codes.
//!
//! A perpetual code encodes a generation of `g` symbols with coding vectors
//! that carry an implied 1 at a pivot index followed by `w` random
//! coefficients, wrapping circularly. The band structure keeps encoding and
//! decoding cheap (no fill-in during elimination) and survives recoding at
//! relays, where dense sparse codes densify. This crate implements:
//!
//! * [`gf`] — GF(2) and GF(2^8) arithmetic and bulk row operations;
//! * [`codec`] — configuration, encoder modes, compact vectors, wire format;
//! * [`decoder`] — on-the-fly forward substitution and final decoding;
//! * [`recoder`] — passive/active/hybrid recoding and re-encoding;
//! * [`rlnc`] — a dense random linear code as the comparison baseline;
//! * [`analysis`] — closed-form overhead, complexity and recoding bounds;
//! * [`sim`] — seeded Monte-Carlo single-link and two-hop experiments;
//! * [`cli`] — the command-line harness behind the `perpetual` binary.

pub mod analysis;
pub mod cli;
pub mod codec;
pub mod decoder;
pub mod gf;
pub mod recoder;
pub mod rlnc;
pub mod rng;
pub mod sim;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum CodingError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed packet: {0}")]
    MalformedPacket(String),
    #[error("generation is not decoded yet")]
    NotDecoded,
}
