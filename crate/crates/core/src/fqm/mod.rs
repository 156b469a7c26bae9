//! Finite quadratic modules: the block grammar, realization as generator
//! data, evaluation of q and the pairing, direct sums and p-parts.

mod block;
mod enumeration;
mod form;
mod parse;

pub use block::{Block, BlockExpr, Term};
pub use enumeration::Enumeration;
pub use form::{Element, FqForm, PartEmbedding};
pub use parse::parse_form;

/// Parses and realizes a form in one step.
pub fn form_from_str(text: &str) -> crate::Result<FqForm> {
    Ok(parse_form(text)?.realize())
}
