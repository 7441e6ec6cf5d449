//! Compiles the guide chapters' code blocks as doc-tests, so the book in
//! `book/` can never drift from the library. `cargo test --doc` runs them.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/hyperboloid.md")]
mod hyperboloid {}

#[doc = include_str!("../../../book/src/volumes.md")]
mod volumes {}

#[doc = include_str!("../../../book/src/parameters.md")]
mod parameters {}

#[doc = include_str!("../../../book/src/packing.md")]
mod packing {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
