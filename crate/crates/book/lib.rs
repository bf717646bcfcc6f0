//! The guide in `book/` as doctests: each chapter becomes the doc comment of
//! an empty module, so `cargo test` runs every Rust listing in it.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../book/src/terms.md")]
pub mod terms {}
#[doc = include_str!("../../book/src/ordinal-terms.md")]
pub mod ordinal_terms {}
#[doc = include_str!("../../book/src/forests.md")]
pub mod forests {}
#[doc = include_str!("../../book/src/collapsing.md")]
pub mod collapsing {}
#[doc = include_str!("../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../book/src/cli.md")]
pub mod cli {}
