//! Sparse polynomial engine: the pairing `(f, g) = f(∂) g`, the apolar inner
//! product, linear substitution and one-forms.

mod monomial;
mod oneform;
mod polynomial;

use thiserror::Error;

pub use monomial::{monomials_of_degree, Monomial, MAX_VARS};
pub use oneform::OneForm;
pub use polynomial::{coefficient_matrix, same_span, span_rank, Polynomial, FLOAT_REL_TOL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable counts differ: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("variable index {0} out of range for {1} variables")]
    IndexOutOfRange(usize, usize),
    #[error("{rows}x{cols} matrix cannot act on {nvars} variables")]
    DimensionMismatch { nvars: usize, rows: usize, cols: usize },
}

/// `f(∂) g`.
pub fn apply_diff<F: crate::scalars::Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    f.apply_diff(g)
}

/// `<f, g> = f(∂) g |_{x=0}`.
pub fn apolar_inner<F: crate::scalars::Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> F {
    f.apolar_inner(g)
}

#[cfg(test)]
mod tests;
