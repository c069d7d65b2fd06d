//! Every chapter of the book under `book/src` is included here as a module
//! doc, so `cargo test --doc` runs its Rust snippets.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tables.md")]
pub mod tables {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/affordances.md")]
pub mod affordances {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/queries.md")]
pub mod queries {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/laws.md")]
pub mod laws {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
