//! Exact equivariant Gauss sums of finite quadratic modules.
//!
//! [`fqm`] builds forms from block expressions, [`orthogroup`] enumerates
//! O(A) and its orbits, [`oracle`] evaluates the sums by brute force and
//! [`closedform`] evaluates them from the block structure. [`weil`] covers
//! the invariant Weil representation, and [`sweep`] generates the families
//! used to check closed forms against the oracle.

pub mod closedform;
pub mod error;
pub mod exactmath;
pub mod fqm;
pub mod limits;
pub mod oracle;
pub mod orthogroup;
pub mod sweep;
pub mod weil;

pub use error::{Error, Result};
pub use limits::Limits;

// The guide's code blocks run as doctests so the book cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/cyclotomic.md")]
    mod cyclotomic {}
    #[doc = include_str!("../../../book/src/orbits.md")]
    mod orbits {}
    #[doc = include_str!("../../../book/src/gauss-sums.md")]
    mod gauss_sums {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/weil.md")]
    mod weil {}
}
