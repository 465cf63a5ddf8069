//! Projective systematic authentication codes built on Reed-Muller codes.
//!
//! A source `s` of `M` bits is encoded into a sub-code of RM(m, r), the
//! codeword is read at `l` secret coordinates, and the result is masked by
//! a secret `l`-bit pad to give the tag. The crate builds the codes, tags
//! and verifies messages, and computes the impersonation and substitution
//! probabilities exactly, both in closed form and by exhaustive enumeration.
//!
//! ```
//! use rmacode::{AuthConfig, BitVector, generate_tag, sample_key, verify, Message};
//!
//! let config = AuthConfig::rm(4, 1, 4, 3).unwrap();
//! let key = sample_key(&config, 42);
//! let source: BitVector = "1011".parse().unwrap();
//! let tag = generate_tag(&config, &source, &key).unwrap();
//! assert!(verify(&config, &Message::new(source, tag), &key).unwrap());
//! ```
//!
//! The `k1` half of a key is stored as its `l` coordinates (or an `n`-bit
//! indicator in key files); a compressed `ceil(log2 C(n, l))`-bit encoding
//! is possible but not implemented.

pub mod attack;
pub mod auth;
pub mod bits;
pub mod cli;
pub mod deception;
pub mod error;
pub mod rm_code;
pub mod subsets;

pub use attack::{
    best_substitution_strategy, run_impersonation, run_substitution, AttackOutcome, SubstitutionStrategy,
};
pub use auth::{
    decode_message, encode_message, generate_tag, project, sample_key, verify, AuthConfig, AuthKey, Message,
};
pub use bits::BitVector;
pub use deception::{
    authentication_matrix, count_tags_by_weight, p_deception_from_definitions, p_impersonation,
    p_substitution_bruteforce, p_substitution_closed_form, tag_distribution, wt_range, DeceptionReport, Limits,
    Method, TagDistribution,
};
pub use error::{Error, Result};
pub use rm_code::{RmCode, SubcodeParams};
