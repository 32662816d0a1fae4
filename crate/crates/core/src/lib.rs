//! Secrecy gain of unimodular lattices, computed exactly.
//!
//! For a unimodular lattice `Λ` of dimension `n` the secrecy function
//! `Ξ(y) = Θ_{ℤⁿ}(iy) / Θ_Λ(iy)` is the reciprocal of a rational polynomial
//! `D` in `z = ϑ₂⁴ϑ₄⁴/ϑ₃⁸`. The crate builds `D` from Gram matrices, from
//! modular-form coefficients or from the extremal theta series, and decides
//! with Sturm sequences whether `D` attains its minimum over `[0, 1/4]` at
//! `z = 1/4`, which is the point `y = 1`.
//!
//! ```
//! use unimodular_secrecy::rat::q;
//! use unimodular_secrecy::secrecy::SecrecyProfile;
//! use unimodular_secrecy::verifier::{verify_min_at_quarter, VerdictStatus};
//!
//! let leech = SecrecyProfile::extremal(24).unwrap();
//! assert_eq!(leech.gain_at_one, q(256, 63));
//!
//! let v = verify_min_at_quarter(&leech.denominator).unwrap();
//! assert_eq!(v.status, VerdictStatus::ConfirmedStrict);
//! ```

pub mod dd;
pub mod error;
pub mod poly;
pub mod rat;
pub mod theta_numeric;
pub mod lattice;
pub mod qseries;
pub mod secrecy;
pub mod verifier;
pub mod catalog;
pub mod descriptor;
pub mod cli;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/theta.md")]
    mod theta {}
    #[doc = include_str!("../../../book/src/modular.md")]
    mod modular {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/secrecy.md")]
    mod secrecy {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
