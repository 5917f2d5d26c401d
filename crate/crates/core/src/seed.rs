//! Seed derivation.
//!
//! Every random stream in an experiment comes from one user seed. A stream is
//! named by a tag (usually the subcommand or experiment name) and an index
//! (usually the trial number):
//!
//! ```text
//! derive_seed(master, tag, index) = mix(mix(master ^ fnv1a(tag)) ^ index)
//! ```
//!
//! where `fnv1a` is the 64-bit FNV-1a hash of the tag's UTF-8 bytes and `mix`
//! is the SplitMix64 output function. Streams with different `(tag, index)`
//! are independent for practical purposes and do not depend on the order in
//! which trials are executed.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    mix(mix(master ^ fnv1a(tag.as_bytes())) ^ index)
}
