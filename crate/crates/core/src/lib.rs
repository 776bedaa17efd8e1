// `!(x > 0.0)` is used deliberately so that NaN is rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chart;
pub mod corpus;
pub mod error;
pub mod fields;
pub mod geodesic;
pub mod greens;
pub mod pipeline;
pub mod prime;
pub mod quad;
pub mod specfile;
pub mod spline;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    pub mod surfaces {}
    #[doc = include_str!("../../../book/src/charts.md")]
    pub mod charts {}
    #[doc = include_str!("../../../book/src/prime.md")]
    pub mod prime {}
    #[doc = include_str!("../../../book/src/greens.md")]
    pub mod greens {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
