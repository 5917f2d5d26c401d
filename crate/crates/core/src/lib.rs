//! Pseudolinear wiretap codes for the binary adversarial wiretap channel of
//! type II, with exact semantic-leakage computation, the linear-code attack,
//! and soft-covering experiments.
//!
//! Coordinates are 0-based inside the library; [`channel::ReadSet`] and
//! [`channel::FlipSet`] convert from and serialize to the 1-based form used in
//! artifacts.

pub mod bitlinalg;
pub mod channel;
pub mod codes;
pub mod error;
pub mod gf2m;
pub mod infotheory;
pub mod leakage;
pub mod reliability;
pub mod seed;
pub mod softcover;

pub use bitlinalg::{BitMatrix, BitVector};
pub use channel::{Dmc, FlipSet, ReadSet};
pub use codes::{Codebook, CosetCode, LinearCode, PseudolinearCode, WiretapCode};
pub use error::{Error, Result};
pub use gf2m::{Field, FieldElement};
pub use infotheory::{JointPmf, Pmf};
