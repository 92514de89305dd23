//! The guide chapters, compiled as documentation so their snippets run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/orbits.md")]
pub mod orbits {}
#[doc = include_str!("../../../book/src/filtration.md")]
pub mod filtration {}
#[doc = include_str!("../../../book/src/exchange.md")]
pub mod exchange {}
#[doc = include_str!("../../../book/src/cover.md")]
pub mod cover {}
#[doc = include_str!("../../../book/src/params.md")]
pub mod params {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
