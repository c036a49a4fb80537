//! Independent construction of canonical systems by solving the annihilation
//! conditions `f_j(∂) f = 0` degree by degree on spaces of invariants.

use rayon::prelude::*;
use thiserror::Error;

use crate::canonical::{InvariantSystem, Provenance};
use crate::groups::{GroupError, ReflectionGroup};
use crate::linalg::Matrix;
use crate::polys::{coefficient_matrix, monomials_of_degree, Polynomial};
use crate::scalars::Field;

/// Largest degree the oracle will expand.
pub const MAX_ORACLE_DEGREE: u32 = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("degree {0} exceeds the oracle limit {MAX_ORACLE_DEGREE}")]
    DegreeCap(u32),
    #[error("degree {degree}: solution space has dimension {got}, expected {expected}")]
    SolutionDimension { degree: u32, got: usize, expected: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A basis of the homogeneous invariants of one degree.
#[derive(Debug, Clone)]
pub struct GradedInvariantBasis<F: Field> {
    pub degree: u32,
    pub basis: Vec<Polynomial<F>>,
}

/// Reynolds images of all degree-`d` monomials (pulled back to the root
/// span), reduced to a basis in row echelon form.
pub fn invariant_basis<F: Field>(group: &ReflectionGroup<F>, d: u32) -> Result<GradedInvariantBasis<F>, OracleError> {
    if d > MAX_ORACLE_DEGREE {
        return Err(OracleError::DegreeCap(d));
    }
    group.elements()?;
    let rs = group.root_system();
    let n = group.nvars();
    let images: Vec<Polynomial<F>> = monomials_of_degree(n, d)
        .par_iter()
        .map(|m| {
            let p = Polynomial::from_terms(n, [(*m, F::one())]);
            group.reynolds(&rs.restrict(&p)).expect("enumerated")
        })
        .filter(|p| !p.is_negligible_against(1.0))
        .collect();
    if images.is_empty() {
        return Ok(GradedInvariantBasis { degree: d, basis: Vec::new() });
    }
    let (m, monos) = coefficient_matrix(&images);
    let (r, pivots) = m.rref();
    let basis = (0..pivots.len())
        .map(|i| Polynomial::from_terms(n, monos.iter().zip(r.row(i)).map(|(mo, c)| (*mo, c.clone()))))
        .collect();
    Ok(GradedInvariantBasis { degree: d, basis })
}

/// Coefficients of `t^0..t^max` in `prod_i 1/(1 - t^{m_i})`.
pub fn hilbert_dims(degrees: &[u32], max: u32) -> Vec<u64> {
    let mut c = vec![0u64; max as usize + 1];
    c[0] = 1;
    for &m in degrees {
        let m = m as usize;
        for k in m..c.len() {
            c[k] += c[k - m];
        }
    }
    c
}

/// Solve for the canonical system degree by degree.
///
/// At degree `d` the unknown is a combination of the invariant basis; every
/// previously accepted `f` of lower degree contributes the linear conditions
/// `f(∂) g = 0`. The solution space must have exactly the multiplicity of `d`
/// in the degree table; it is then orthogonalized under the apolar product.
pub fn flatto_solve<F: Field>(group: &ReflectionGroup<F>) -> Result<InvariantSystem<F>, OracleError> {
    let t = group.root_system().group_type();
    let n = group.nvars();
    let degrees = t.degrees();
    let mut accepted: Vec<Polynomial<F>> = Vec::new();
    let mut i = 0;
    while i < degrees.len() {
        let d = degrees[i];
        let multiplicity = degrees[i..].iter().take_while(|&&m| m == d).count();
        let basis = invariant_basis(group, d)?.basis;
        let solutions = if accepted.is_empty() {
            basis
        } else {
            let constraints = constraint_matrix(&accepted, &basis);
            constraints
                .nullspace()
                .into_iter()
                .map(|coeffs| {
                    let mut f = Polynomial::zero(n);
                    for (c, b) in coeffs.iter().zip(&basis) {
                        if !c.is_zero() {
                            f = &f + &b.scale(c);
                        }
                    }
                    f
                })
                .collect()
        };
        if solutions.len() != multiplicity {
            return Err(OracleError::SolutionDimension {
                degree: d,
                got: solutions.len(),
                expected: multiplicity,
            });
        }
        accepted.extend(orthogonalize(solutions));
        i += multiplicity;
    }
    Ok(InvariantSystem::from_polys(t, n, accepted, Provenance::Oracle))
}

/// Rows: one linear condition per (earlier polynomial, output monomial);
/// columns: basis elements.
fn constraint_matrix<F: Field>(accepted: &[Polynomial<F>], basis: &[Polynomial<F>]) -> Matrix<F> {
    let mut rows: Vec<Vec<F>> = Vec::new();
    for f in accepted {
        let outputs: Vec<Polynomial<F>> = basis.par_iter().map(|b| f.apply_diff(b)).collect();
        if outputs.iter().all(Polynomial::is_zero) {
            continue;
        }
        let (m, _) = coefficient_matrix(&outputs);
        rows.extend(m.transpose().to_rows());
    }
    if rows.is_empty() {
        return Matrix::zeros(1, basis.len());
    }
    Matrix::from_rows(rows)
}

fn orthogonalize<F: Field>(block: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let mut out: Vec<(Polynomial<F>, F)> = Vec::new();
    for g in block {
        let mut f = g.clone();
        for (e, c) in &out {
            let coeff = g.apolar_inner(e).checked_div(c).expect("positive norm");
            f = &f - &e.scale(&coeff);
        }
        let c = f.apolar_inner(&f);
        out.push((f, c));
    }
    out.into_iter().map(|(f, _)| f).collect()
}
