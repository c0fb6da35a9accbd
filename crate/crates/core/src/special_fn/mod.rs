//! Special-function kernel used by the rest of the crate.
//!
//! Everything here is a pure function of its arguments.

mod factorial;
mod kummer;
mod normal;
mod root;

pub use factorial::{ln_factorial, ln_factorial_remainder, LnFactorial, DEFAULT_EXACT_THRESHOLD};
pub use kummer::{kummer_m, KummerParams, KUMMER_MAX_TERMS, KUMMER_MAX_Z};
pub use normal::{erfc, phi_cdf, phi_inv, phi_pdf};
pub use root::{find_root, find_root_with, RootOptions};
