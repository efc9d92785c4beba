//! Secure exact-repair regenerating codes built by layering a systematic
//! Reed–Solomon code over all `t`-subsets of nodes.
//!
//! Any `n-1` nodes recover the message, any single failed node is repaired
//! exactly from the other `n-1`, and an eavesdropper watching the repair of
//! `ℓ` nodes learns nothing about the message. [`secrecy`] checks that last
//! claim by rank computation and, for tiny fields, by enumerating every
//! input. [`region`] computes the rate points and outer bounds for comparison.
//!
//! ```
//! use secure_regen::layered::{CodeParams, LayeredCode};
//!
//! let code = LayeredCode::new(CodeParams::with_default_field(7, 1, 3).unwrap()).unwrap();
//! let d = code.dimensions();
//! assert_eq!((d.message_symbols, d.alpha, d.beta), (40, 15, 5));
//! ```

pub mod cli;
pub mod field;
pub mod layered;
pub mod mds;
pub mod region;
pub mod secrecy;

pub use field::{FieldSpec, GaloisField, Symbol};
pub use layered::{CodeParams, LayeredCode, NodeShare};
pub use region::{RatePoint, Rational, SystemParams};
