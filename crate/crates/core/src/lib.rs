pub mod ball;
pub mod census;
pub mod counting;
mod error;
pub mod field;
pub mod lfunc;
pub mod numeric;
pub mod series;
pub mod tauberian;
pub mod verify;

pub use error::{Error, Result};
pub use field::FieldParams;

// The guide's code samples run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/census.md")]
mod book_census {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/series.md")]
mod book_series {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/euler-products.md")]
mod book_euler_products {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/counting.md")]
mod book_counting {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tauberian.md")]
mod book_tauberian {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/appendix-lemmas.md")]
mod book_appendix_lemmas {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
