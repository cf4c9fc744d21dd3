//! Graded exterior algebra over declared generators.
//!
//! A [`DerivationContext`] fixes the generators and the differential rule
//! table; it covers coordinate charts (generators are `d` of coordinates),
//! jet-valued forms on the (x, t) plane and free differential graded
//! algebras with prescribed differentials.

mod context;
mod form;
mod matrix;
mod span;

pub use context::{DdReport, DerivationContext, ScalarDifferential};
pub use form::{Basis, BasisBuilder, Form, GenId};
pub use matrix::{levi_civita, Mat2, MatrixForm};
pub use span::{expand, SpanResult, SpanSolver};

use thiserror::Error;

use crate::coeff::CoeffError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("form belongs to a different context")]
    BasisMismatch,
    #[error("matrix is not traceless (trace {0})")]
    NotTraceless(String),
    #[error("d(d({generator})) = {residual}, not 0")]
    DdNonzero { generator: String, residual: String },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Pull a form back along a map that sends each source generator to a form
/// over `target` and each coefficient through `coeff`.
pub fn pullback<E>(
    form: &Form,
    target: &std::sync::Arc<Basis>,
    images: &[Form],
    mut coeff: impl FnMut(&crate::coeff::Scalar) -> Result<crate::coeff::Scalar, E>,
) -> Result<Form, E> {
    let mut out = Form::zero(target, form.degree());
    for (mono, c) in form.terms() {
        let mut acc = Form::scalar(target, coeff(c)?);
        for g in mono {
            acc = acc.wedge(&images[*g as usize]);
        }
        out = &out + &acc;
    }
    Ok(out)
}
