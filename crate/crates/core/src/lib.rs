//! Budaghyan-Helleseth commutative presemifields over F_{q^{2l}}.
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature (default)
//! pulls in `std` and rayon to split exhaustive scans across threads; results
//! are identical either way.
//!
//! Layout, bottom-up:
//!
//! * [`field`]: the tower F_p ⊂ F_q ⊂ F_{q^l} ⊂ F_{q^{2l}}, Frobenius, traces,
//!   discrete logs and the canonical constants β, ω.
//! * [`linmap`]: linearized polynomials Σ c_i x^{p^i} as maps.
//! * [`biform`]: canonical bilinear forms Σ c x^{p^i} y^{p^j}; all identity
//!   checks reduce to comparing these.
//! * [`bh`]: the presemifield BH(q, l, d), its semifield isotope and
//!   exhaustive table checks.
//! * [`nuclei`]: center, middle nucleus, κ(a, b) and ξ.
//! * [`isotopy`]: isotopism certificates, their builders, strong autotopisms
//!   and the monomial search.
//! * [`census`]: isotopism-class counts per (q, l).

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod arith;
pub mod bh;
pub mod biform;
pub mod census;
pub mod error;
pub mod field;
pub mod fp;
pub mod isotopy;
pub mod linmap;
pub mod nuclei;

mod par;

pub use bh::{BhParams, MulTable, PresemifieldReport, Semifield};
pub use biform::BiForm;
pub use census::ClassCensus;
pub use error::{Error, Result};
pub use field::{make_field, CanonicalConstants, FieldElement, FieldSpec};
pub use isotopy::{IsotopismCert, Level};
pub use linmap::PLinearMap;
pub use nuclei::NucleusReport;
