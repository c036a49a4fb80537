//! Canonical systems of basic invariants: `f_i(∂) f_j = δ_ij` up to the
//! positive norms `c_i`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::groups::{GroupError, GroupType, ReflectionGroup};
use crate::polys::{apply_diff, span_rank, OneForm, Polynomial};
use crate::scalars::{Field, FieldKind};
use crate::seeds::{scalar_multiple, SeedError, SeedSystem};

/// Relative tolerance used when verifying float systems.
pub const FLOAT_VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CanonicalError {
    #[error("candidate {0} vanished; the seeds are not a valid system of basic invariants")]
    ZeroCandidate(usize),
    #[error("candidates of degree {0} are linearly dependent")]
    DependentCandidates(u32),
    #[error("entry {0} became zero during orthogonalization")]
    ZeroAfterOrthogonalization(usize),
    #[error("both pairings with the product of variables vanish; the degree-{0} seeds are degenerate")]
    DegenerateCombination(u32),
    #[error("refined construction is not available for {0}")]
    RefinedUnsupported(GroupType),
    #[error(transparent)]
    Seeds(#[from] SeedError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Generic,
    Refined,
}

/// Which construction produced a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Candidates followed by graded Gram-Schmidt.
    Generic,
    /// Candidates alone; all degrees distinct.
    RefinedDistinct,
    /// Even-rank D: the product of the variables is placed directly.
    RefinedProduct,
    Oracle,
    /// Read from a file.
    External,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Generic => "generic",
            Provenance::RefinedDistinct => "refined-distinct",
            Provenance::RefinedProduct => "refined-product",
            Provenance::Oracle => "oracle",
            Provenance::External => "external",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [
            Provenance::Generic,
            Provenance::RefinedDistinct,
            Provenance::RefinedProduct,
            Provenance::Oracle,
            Provenance::External,
        ]
        .into_iter()
        .find(|p| p.label() == s)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry<F: Field> {
    pub poly: Polynomial<F>,
    pub degree: u32,
    /// `c = <f, f>`.
    pub norm: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSystem<F: Field> {
    pub group: GroupType,
    pub ambient: usize,
    pub entries: Vec<Entry<F>>,
    pub provenance: Provenance,
}

impl<F: Field> InvariantSystem<F> {
    pub fn from_polys(group: GroupType, ambient: usize, polys: Vec<Polynomial<F>>, provenance: Provenance) -> Self {
        let entries = polys
            .into_iter()
            .map(|p| Entry {
                degree: p.homogeneous_degree().unwrap_or(0),
                norm: p.apolar_inner(&p),
                poly: p,
            })
            .collect();
        InvariantSystem {
            group,
            ambient,
            entries,
            provenance,
        }
    }

    pub fn field(&self) -> FieldKind {
        F::KIND
    }

    pub fn polys(&self) -> Vec<Polynomial<F>> {
        self.entries.iter().map(|e| e.poly.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.degree).collect()
    }

    /// Entries of degree `d`.
    pub fn block(&self, d: u32) -> Vec<Polynomial<F>> {
        self.entries.iter().filter(|e| e.degree == d).map(|e| e.poly.clone()).collect()
    }

    /// Whether both systems span the same space in every degree.
    pub fn same_spans(&self, other: &Self) -> bool {
        let mut degrees = self.degrees();
        degrees.dedup();
        self.degrees() == other.degrees()
            && degrees
                .iter()
                .all(|&d| crate::polys::same_span(&self.block(d), &other.block(d)))
    }

    /// Unit-normalized float copies `f_i / sqrt(c_i)`.
    pub fn float_view(&self) -> Vec<Polynomial<f64>> {
        self.entries
            .iter()
            .map(|e| {
                let s = 1.0 / e.norm.to_f64().sqrt();
                e.poly.map_coeffs(|c| c.to_f64() * s)
            })
            .collect()
    }
}

/// `φ(f) = ((f, Δ), Δ)`.
pub fn phi<F: Field>(f: &Polynomial<F>, delta: &Polynomial<F>) -> Polynomial<F> {
    apply_diff(&apply_diff(f, delta), delta)
}

/// Componentwise `φ`.
pub fn phi_tilde<F: Field>(omega: &OneForm<F>, delta: &Polynomial<F>) -> OneForm<F> {
    OneForm::new(omega.components().par_iter().map(|c| phi(c, delta)).collect())
}

/// `ε(Σ h_k dx_k) = Σ x_k h_k`.
pub fn epsilon<F: Field>(omega: &OneForm<F>) -> Polynomial<F> {
    let n = omega.nvars();
    let mut out = Polynomial::zero(n);
    for (k, h) in omega.components().iter().enumerate() {
        out = &out + &(&Polynomial::var(n, k) * h);
    }
    out
}

/// `λ` with `η = λ ω`, if any.
pub fn oneform_eigenvalue<F: Field>(omega: &OneForm<F>, eta: &OneForm<F>) -> Option<F> {
    let k = omega.components().iter().position(|c| !c.is_zero())?;
    let lambda = scalar_multiple(&eta.components()[k], &omega.components()[k])?;
    omega
        .components()
        .iter()
        .zip(eta.components())
        .all(|(o, e)| o.scale(&lambda).same_as(e))
        .then_some(lambda)
}

/// `Σ_j x_j φ(∂_j h)`, i.e. `ε(φ̃(dh))`.
pub fn candidate<F: Field>(h: &Polynomial<F>, delta: &Polynomial<F>) -> Polynomial<F> {
    epsilon(&phi_tilde(&OneForm::differential(h), delta)).pruned()
}

/// Candidates for every seed; fails on a vanishing candidate or a dependent
/// degree block.
pub fn candidate_system<F: Field>(
    seeds: &[Polynomial<F>],
    delta: &Polynomial<F>,
) -> Result<Vec<Polynomial<F>>, CanonicalError> {
    let cands: Vec<Polynomial<F>> = seeds.par_iter().map(|h| candidate(h, delta)).collect();
    check_blocks(&cands)?;
    Ok(cands)
}

fn check_blocks<F: Field>(polys: &[Polynomial<F>]) -> Result<(), CanonicalError> {
    for (i, g) in polys.iter().enumerate() {
        if g.is_negligible_against(1.0) {
            return Err(CanonicalError::ZeroCandidate(i));
        }
    }
    let mut degrees: Vec<u32> = polys.iter().filter_map(|p| p.homogeneous_degree()).collect();
    degrees.dedup();
    for d in degrees {
        let block: Vec<_> = polys.iter().filter(|p| p.homogeneous_degree() == Some(d)).cloned().collect();
        if span_rank(&block) < block.len() {
            return Err(CanonicalError::DependentCandidates(d));
        }
    }
    Ok(())
}

/// Gram-Schmidt under the apolar product without normalization, applied
/// within each block of equal degree in input order.
pub fn gram_schmidt_graded<F: Field>(cands: &[Polynomial<F>]) -> Result<Vec<Polynomial<F>>, CanonicalError> {
    let mut out: Vec<Polynomial<F>> = Vec::with_capacity(cands.len());
    let mut norms: Vec<F> = Vec::with_capacity(cands.len());
    for (i, g) in cands.iter().enumerate() {
        let d = g.homogeneous_degree();
        let mut f = g.clone();
        for (prev, c) in out.iter().zip(&norms) {
            if prev.homogeneous_degree() != d {
                continue;
            }
            let coeff = g.apolar_inner(prev).checked_div(c).expect("nonzero norm");
            f = &f - &prev.scale(&coeff);
        }
        let f = f.pruned();
        let norm = f.apolar_inner(&f);
        if f.is_negligible_against(g.max_abs_coeff()) || norm.is_negligible() {
            return Err(CanonicalError::ZeroAfterOrthogonalization(i));
        }
        out.push(f);
        norms.push(norm);
    }
    Ok(out)
}

/// Build a canonical system from seeds.
///
/// `Generic` runs candidates then graded Gram-Schmidt. `Refined` skips the
/// orthogonalization when all degrees differ, and for even-rank D places
/// `x_1⋯x_n` directly and replaces the two degree-`n` seeds by the single
/// combination `b h_l - a h_{l+1}` orthogonal to it.
pub fn canonical_system<F: Field>(
    group: &ReflectionGroup<F>,
    seeds: &SeedSystem<F>,
    mode: Mode,
) -> Result<InvariantSystem<F>, CanonicalError> {
    let rs = group.root_system();
    let t = rs.group_type();
    let delta = rs.delta();
    let degrees = seeds.degrees();
    let distinct = degrees.windows(2).all(|w| w[0] != w[1]);
    let (polys, provenance) = match mode {
        Mode::Generic => {
            let cands = candidate_system(seeds.polys(), &delta)?;
            (gram_schmidt_graded(&cands)?, Provenance::Generic)
        }
        Mode::Refined if distinct => (candidate_system(seeds.polys(), &delta)?, Provenance::RefinedDistinct),
        Mode::Refined => match t {
            GroupType::D(n) if n % 2 == 0 => (refined_product(seeds, &delta, n)?, Provenance::RefinedProduct),
            _ => return Err(CanonicalError::RefinedUnsupported(t)),
        },
    };
    Ok(InvariantSystem::from_polys(t, group.nvars(), polys, provenance))
}

fn refined_product<F: Field>(
    seeds: &SeedSystem<F>,
    delta: &Polynomial<F>,
    n: usize,
) -> Result<Vec<Polynomial<F>>, CanonicalError> {
    let d = n as u32;
    let pair: Vec<usize> = (0..seeds.len()).filter(|&i| seeds.degrees()[i] == d).collect();
    let [l, l1] = pair[..] else {
        return Err(CanonicalError::DependentCandidates(d));
    };
    let h = seeds.polys();
    let product = crate::seeds::product_of_variables::<F>(n);
    let a = product.apolar_inner(&h[l]);
    let b = product.apolar_inner(&h[l1]);
    if a.is_zero() && b.is_zero() {
        return Err(CanonicalError::DegenerateCombination(d));
    }
    let combo = &h[l].scale(&b) - &h[l1].scale(&a);
    let mut inputs: Vec<Polynomial<F>> = h.to_vec();
    inputs[l] = combo;
    let out: Vec<Polynomial<F>> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, p)| if i == l1 { product.clone() } else { candidate(p, delta) })
        .collect();
    check_blocks(&out)?;
    Ok(out)
}

/// Result of one pairing `(f_i, f_j) = f_i(∂) f_j`.
#[derive(Debug, Clone)]
pub struct PairCheck<F: Field> {
    pub i: usize,
    pub j: usize,
    pub value: Polynomial<F>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct VerificationReport<F: Field> {
    pub pairs: Vec<PairCheck<F>>,
    /// Per entry: fixed by every generator and a polynomial on the root span.
    pub invariant: Vec<bool>,
    pub homogeneous: Vec<bool>,
    pub degrees_ok: bool,
    pub norms_positive: Vec<bool>,
    pub passed: bool,
}

impl<F: Field> VerificationReport<F> {
    /// Human-readable reasons for failure.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in self.pairs.iter().filter(|p| !p.ok) {
            let what = if p.i == p.j {
                "is not a positive constant"
            } else {
                "is not zero"
            };
            out.push(format!(
                "pair ({}, {}): (f{}, f{}) = {} {what}",
                p.i + 1,
                p.j + 1,
                p.i + 1,
                p.j + 1,
                p.value
            ));
        }
        for (i, ok) in self.invariant.iter().enumerate() {
            if !ok {
                out.push(format!("entry {} is not invariant", i + 1));
            }
        }
        for (i, ok) in self.homogeneous.iter().enumerate() {
            if !ok {
                out.push(format!("entry {} is not homogeneous of its stated degree", i + 1));
            }
        }
        for (i, ok) in self.norms_positive.iter().enumerate() {
            if !ok {
                out.push(format!("norm of entry {} is not positive or does not match", i + 1));
            }
        }
        if !self.degrees_ok {
            out.push("degrees differ from the table of the group".into());
        }
        out
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairCheck<F>> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }
}

/// Check every ordered pairing, invariance, homogeneity, norms and degrees.
///
/// Exact fields are checked exactly. Float systems are compared after
/// dividing each entry by the square root of its norm, with tolerance
/// [`FLOAT_VERIFY_TOL`].
pub fn verify_canonical<F: Field>(sys: &InvariantSystem<F>, group: &ReflectionGroup<F>) -> VerificationReport<F> {
    let n = sys.entries.len();
    let rs = group.root_system();
    let scales: Vec<f64> = sys
        .entries
        .iter()
        .map(|e| {
            let c = e.norm.to_f64();
            if c > 0.0 {
                1.0 / c.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let indices: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let pairs: Vec<PairCheck<F>> = indices
        .par_iter()
        .map(|&(i, j)| {
            let (fi, fj) = (&sys.entries[i], &sys.entries[j]);
            let value = apply_diff(&fi.poly, &fj.poly);
            let ok = if i == j {
                let constant = value.homogeneous_degree().unwrap_or(0) == 0;
                let c = value.constant_term();
                if F::is_exact() {
                    constant && c == fi.norm && c.is_positive()
                } else {
                    let unit = c.to_f64() * scales[i] * scales[j];
                    constant && (unit - 1.0).abs() <= FLOAT_VERIFY_TOL && c.is_positive()
                }
            } else if F::is_exact() {
                value.is_zero()
            } else {
                value.max_abs_coeff() * scales[i] * scales[j] <= FLOAT_VERIFY_TOL
            };
            PairCheck { i, j, value, ok }
        })
        .collect();
    let invariant = sys
        .entries
        .iter()
        .map(|e| group.is_invariant(&e.poly) && rs.is_on_root_span(&e.poly))
        .collect();
    let homogeneous = sys
        .entries
        .iter()
        .map(|e| e.poly.homogeneous_degree() == Some(e.degree))
        .collect();
    let norms_positive: Vec<bool> = sys.entries.iter().map(|e| e.norm.is_positive()).collect();
    let degrees_ok = sys.degrees() == sys.group.degrees();
    let passed = pairs.iter().all(|p| p.ok)
        && norms_positive.iter().all(|&b| b)
        && degrees_ok
        && sys.entries.len() == sys.group.rank();
    let mut report = VerificationReport {
        pairs,
        invariant,
        homogeneous,
        degrees_ok,
        norms_positive,
        passed,
    };
    report.passed &= report.invariant.iter().all(|&b| b) && report.homogeneous.iter().all(|&b| b);
    report
}

/// Largest deviation of the float view from the identity pairing: returns
/// `(max |(u_i,u_i) - 1|, max coefficient of (u_i,u_j), i != j)`.
pub fn float_view_deviation<F: Field>(sys: &InvariantSystem<F>) -> (f64, f64) {
    let units = sys.float_view();
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    for (i, ui) in units.iter().enumerate() {
        for (j, uj) in units.iter().enumerate() {
            let v = apply_diff(ui, uj);
            if i == j {
                diag = diag.max((v.constant_term() - 1.0).abs());
            } else {
                off = off.max(v.max_abs_coeff());
            }
        }
    }
    (diag, off)
}

#[cfg(test)]
mod tests;
