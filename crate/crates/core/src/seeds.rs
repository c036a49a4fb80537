//! Systems of basic invariants used as input to the canonical construction.

use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::groups::{GroupError, GroupType, ReflectionGroup};
use crate::linalg::Matrix;
use crate::polys::{span_rank, Monomial, Polynomial};
use crate::scalars::Field;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeedError {
    #[error("expected {expected} seed polynomials, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("seed {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("seed {0} is not invariant under the group")]
    NotInvariant(usize),
    #[error("seed {0} is not a polynomial on the span of the roots")]
    NotOnRootSpan(usize),
    #[error("seed degrees {got:?} differ from the degrees {expected:?} of the group")]
    Degrees { got: Vec<u32>, expected: Vec<u32> },
    #[error("seeds are algebraically dependent (Jacobian determinant vanishes)")]
    Dependent,
    #[error("no candidate produced a new invariant of degree {0}")]
    NoCandidate(u32),
    #[error("seed polynomials have {got} variables, the group acts on {expected}")]
    VarCount { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// How a seed system was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedProvenance {
    PowerSum,
    Reynolds,
    UserSupplied,
}

impl SeedProvenance {
    pub fn label(self) -> &'static str {
        match self {
            SeedProvenance::PowerSum => "power-sum",
            SeedProvenance::Reynolds => "reynolds",
            SeedProvenance::UserSupplied => "user-supplied",
        }
    }
}

impl fmt::Display for SeedProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which default construction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedSelector {
    PowerSums,
    Reynolds,
}

/// Homogeneous invariants `h_1..h_n` sorted by degree (stable in the order
/// produced).
#[derive(Debug, Clone)]
pub struct SeedSystem<F: Field> {
    polys: Vec<Polynomial<F>>,
    degrees: Vec<u32>,
    provenance: SeedProvenance,
}

impl<F: Field> SeedSystem<F> {
    pub fn polys(&self) -> &[Polynomial<F>] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn provenance(&self) -> SeedProvenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Wrap polynomials without validation.
    pub fn unchecked(polys: Vec<Polynomial<F>>, provenance: SeedProvenance) -> Self {
        let mut polys = polys;
        polys.sort_by_key(|p| p.homogeneous_degree().unwrap_or(0));
        let degrees = polys.iter().map(|p| p.homogeneous_degree().unwrap_or(0)).collect();
        SeedSystem {
            polys,
            degrees,
            provenance,
        }
    }
}

/// Outcome of the algebraic-independence test.
#[derive(Debug, Clone)]
pub struct JacobianCertificate<F: Field> {
    pub is_independent: bool,
    /// `det[∂_j h_i]`, completed by the complement directions in ambient
    /// models.
    pub witness: Polynomial<F>,
    /// `Some(c)` when `witness = c·Δ`.
    pub delta_multiple: Option<F>,
}

/// `p_k = sum_j x_j^k`.
pub fn power_sum<F: Field>(nvars: usize, k: u32) -> Polynomial<F> {
    let mut p = Polynomial::zero(nvars);
    for j in 0..nvars {
        let mut e = vec![0; nvars];
        e[j] = k;
        p.add_term(Monomial::new(&e), F::one());
    }
    p
}

/// `x_1 x_2 ... x_n`.
pub fn product_of_variables<F: Field>(nvars: usize) -> Polynomial<F> {
    Polynomial::monomial(nvars, &vec![1; nvars], F::one())
}

/// `Re (x + i y)^m` with exact binomial coefficients.
pub fn dihedral_real_part<F: Field>(m: u32) -> Polynomial<F> {
    let mut p = Polynomial::zero(2);
    let mut binom: i64 = 1;
    for j in 0..=m {
        if j % 2 == 0 {
            let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
            p.add_term(Monomial::new(&[m - j, j]), F::from_i64(sign * binom));
        }
        binom = binom * (m - j) as i64 / (j + 1) as i64;
    }
    p
}

fn closed_form_power_sums<F: Field>(group: &ReflectionGroup<F>) -> Option<Vec<Polynomial<F>>> {
    let rs = group.root_system();
    let n = rs.ambient_dim();
    match rs.group_type() {
        GroupType::A(r) => Some((2..=r as u32 + 1).map(|k| rs.restrict(&power_sum(n, k))).collect()),
        GroupType::B(r) => Some((1..=r as u32).map(|i| power_sum(n, 2 * i)).collect()),
        GroupType::D(r) => {
            let mut v: Vec<_> = (1..r as u32).map(|i| power_sum(n, 2 * i)).collect();
            v.push(product_of_variables(n));
            Some(v)
        }
        GroupType::I2(m) if n == 2 => {
            let q = power_sum(2, 2);
            Some(vec![q, dihedral_real_part(m)])
        }
        _ => None,
    }
}

/// Candidate directions for orbit power sums, in the order they are tried.
fn candidate_vectors<F: Field>(group: &ReflectionGroup<F>, selector: SeedSelector) -> Vec<Vec<F>> {
    let rs = group.root_system();
    let n = rs.ambient_dim();
    let p = rs.projection();
    let e = |coeffs: &[i64]| -> Vec<F> {
        let mut v = vec![F::zero(); n];
        for (vi, c) in v.iter_mut().zip(coeffs) {
            *vi = F::from_i64(*c);
        }
        p.mul_vec(&v)
    };
    let ramp: Vec<i64> = (1..=n as i64).collect();
    let weights = rs.fundamental_weights();
    let mut out = match selector {
        SeedSelector::PowerSums => {
            let mut v = vec![e(&[1])];
            v.extend(weights);
            v.push(e(&[1, 1]));
            v.push(e(&ramp));
            v
        }
        SeedSelector::Reynolds => {
            let mut v = vec![e(&[1, 1]), e(&[1, 2]), e(&[1, 1, 1]), e(&ramp), e(&vec![1; n]), e(&[1])];
            v.extend(weights);
            v
        }
    };
    out.retain(|v| v.iter().any(|x| !x.is_negligible()));
    let mut seen = Vec::new();
    out.retain(|v| {
        let k: Vec<F::Key> = v.iter().map(F::key).collect();
        if seen.contains(&k) {
            false
        } else {
            seen.push(k);
            true
        }
    });
    out
}

/// All products of `seeds` of total degree `d`.
fn decomposables<F: Field>(seeds: &[Polynomial<F>], degrees: &[u32], d: u32, nvars: usize) -> Vec<Polynomial<F>> {
    fn go<F: Field>(
        seeds: &[Polynomial<F>],
        degrees: &[u32],
        start: usize,
        left: u32,
        acc: Polynomial<F>,
        out: &mut Vec<Polynomial<F>>,
    ) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..seeds.len() {
            if degrees[i] <= left && degrees[i] > 0 {
                let next = &acc * &seeds[i];
                go(seeds, degrees, i, left - degrees[i], next, out);
            }
        }
    }
    let mut out = Vec::new();
    go(seeds, degrees, 0, d, Polynomial::one(nvars), &mut out);
    out
}

/// Default seed system for the group.
///
/// Closed forms are used where they exist (power sums for A, B, D and the
/// planar dihedral models); otherwise each degree is filled by orbit power
/// sums `(1/|Wv|) Σ (u·x)^m`, the Reynolds average of `(v·x)^m`, trying a
/// fixed list of directions `v` until the result is not generated by the
/// invariants already chosen.
pub fn seed_invariants<F: Field>(
    group: &ReflectionGroup<F>,
    selector: SeedSelector,
) -> Result<SeedSystem<F>, SeedError> {
    let provenance = match selector {
        SeedSelector::PowerSums => SeedProvenance::PowerSum,
        SeedSelector::Reynolds => SeedProvenance::Reynolds,
    };
    if selector == SeedSelector::PowerSums {
        if let Some(polys) = closed_form_power_sums(group) {
            let sys = SeedSystem::unchecked(polys, provenance);
            validate_seeds(group, &sys)?;
            return Ok(sys);
        }
    }
    let t = group.root_system().group_type();
    let n = group.nvars();
    let candidates = candidate_vectors(group, selector);
    let mut chosen: Vec<Polynomial<F>> = Vec::new();
    let mut chosen_degrees: Vec<u32> = Vec::new();
    let degrees = t.degrees();
    let mut i = 0;
    while i < degrees.len() {
        let d = degrees[i];
        let multiplicity = degrees.iter().filter(|&&m| m == d).count();
        let mut span = decomposables(&chosen, &chosen_degrees, d, n);
        let mut base_rank = span_rank(&span);
        let mut found = 0;
        for v in &candidates {
            if found == multiplicity {
                break;
            }
            let p = group.orbit_power_sum(v, d);
            if p.is_negligible_against(1.0) {
                continue;
            }
            span.push(p.clone());
            let r = span_rank(&span);
            if r > base_rank {
                base_rank = r;
                chosen.push(p);
                chosen_degrees.push(d);
                found += 1;
            } else {
                span.pop();
            }
        }
        if found < multiplicity {
            return Err(SeedError::NoCandidate(d));
        }
        i += multiplicity;
    }
    let sys = SeedSystem::unchecked(chosen, provenance);
    validate_seeds(group, &sys)?;
    Ok(sys)
}

/// Accept a user-supplied system after the same checks as the defaults.
pub fn user_seeds<F: Field>(group: &ReflectionGroup<F>, polys: Vec<Polynomial<F>>) -> Result<SeedSystem<F>, SeedError> {
    let sys = SeedSystem::unchecked(polys, SeedProvenance::UserSupplied);
    validate_seeds(group, &sys)?;
    Ok(sys)
}

/// Count, homogeneity, invariance, degree table and algebraic independence.
pub fn validate_seeds<F: Field>(group: &ReflectionGroup<F>, sys: &SeedSystem<F>) -> Result<(), SeedError> {
    let rs = group.root_system();
    let t = rs.group_type();
    if sys.len() != t.rank() {
        return Err(SeedError::WrongCount {
            expected: t.rank(),
            got: sys.len(),
        });
    }
    for (i, h) in sys.polys.iter().enumerate() {
        if h.nvars() != group.nvars() {
            return Err(SeedError::VarCount {
                expected: group.nvars(),
                got: h.nvars(),
            });
        }
        if h.is_zero() || !h.is_homogeneous() {
            return Err(SeedError::NotHomogeneous(i));
        }
        if !rs.is_on_root_span(h) {
            return Err(SeedError::NotOnRootSpan(i));
        }
        if !group.is_invariant(h) {
            return Err(SeedError::NotInvariant(i));
        }
    }
    if sys.degrees != t.degrees() {
        return Err(SeedError::Degrees {
            got: sys.degrees.clone(),
            expected: t.degrees(),
        });
    }
    if !independent_at_points(group, sys.polys()) {
        return Err(SeedError::Dependent);
    }
    Ok(())
}

/// Rows `∇h_i` followed by the complement directions.
fn jacobian_rows<F: Field>(group: &ReflectionGroup<F>, polys: &[Polynomial<F>]) -> Vec<Vec<Polynomial<F>>> {
    let n = group.nvars();
    let mut rows: Vec<Vec<Polynomial<F>>> = polys
        .iter()
        .map(|h| (0..n).map(|j| h.partial(j).expect("index in range")).collect())
        .collect();
    for k in group.root_system().complement() {
        rows.push(k.iter().map(|c| Polynomial::constant(n, c.clone())).collect());
    }
    rows
}

fn sample_point<F: Field>(n: usize, k: i64) -> Vec<F> {
    (0..n as i64).map(|j| F::from_i64((k + 2) * (j + 1) + j * j * (k + 1) + 1)).collect()
}

/// Nonvanishing of the Jacobian at one of a few fixed points. A nonzero
/// value proves independence; when every sample vanishes the symbolic
/// determinant decides.
pub fn independent_at_points<F: Field>(group: &ReflectionGroup<F>, polys: &[Polynomial<F>]) -> bool {
    let n = group.nvars();
    let rows = jacobian_rows(group, polys);
    if rows.len() != n {
        return false;
    }
    for k in 0..4 {
        let pt = sample_point::<F>(n, k);
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.eval(&pt)).collect()).collect());
        if let Ok(det) = m.determinant() {
            let scale = m.to_rows().iter().flatten().map(|x| x.to_f64().abs()).fold(1.0, f64::max);
            let nonzero = if F::is_exact() {
                !det.is_zero()
            } else {
                det.to_f64().abs() > 1e-9 * scale.powi(n as i32)
            };
            if nonzero {
                return true;
            }
        }
    }
    !symbolic_determinant(&rows).is_negligible_against(1.0)
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// rows, memoized over the set of remaining columns.
pub fn symbolic_determinant<F: Field>(rows: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = rows.len();
    let nvars = rows.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    let mut memo: FxHashMap<u32, Polynomial<F>> = FxHashMap::default();
    fn minor<F: Field>(
        rows: &[Vec<Polynomial<F>>],
        row: usize,
        cols: u32,
        nvars: usize,
        memo: &mut FxHashMap<u32, Polynomial<F>>,
    ) -> Polynomial<F> {
        if row == rows.len() {
            return Polynomial::one(nvars);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Polynomial::zero(nvars);
        let mut sign_neg = false;
        for j in 0..rows.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &rows[row][j];
            if !entry.is_zero() {
                let sub = minor(rows, row + 1, cols & !(1 << j), nvars, memo);
                let term = entry * &sub;
                acc = if sign_neg { &acc - &term } else { &acc + &term };
            }
            sign_neg = !sign_neg;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    minor(rows, 0, (1u32 << n) - 1, nvars, &mut memo)
}

/// Symbolic Jacobian determinant, with a comparison against Δ.
pub fn jacobian_certificate<F: Field>(group: &ReflectionGroup<F>, polys: &[Polynomial<F>]) -> JacobianCertificate<F> {
    let n = group.nvars();
    let rows = jacobian_rows(group, polys);
    if rows.len() != n {
        return JacobianCertificate {
            is_independent: false,
            witness: Polynomial::zero(n),
            delta_multiple: None,
        };
    }
    let witness = symbolic_determinant(&rows);
    let is_independent = !witness.is_negligible_against(1.0);
    let delta = group.root_system().delta();
    let delta_multiple = if is_independent {
        scalar_multiple(&witness, &delta)
    } else {
        None
    };
    JacobianCertificate {
        is_independent,
        witness,
        delta_multiple,
    }
}

/// `Some(c)` with `f = c·g`, comparing leading terms.
pub fn scalar_multiple<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Option<F> {
    let (mf, cf) = f.leading_term()?;
    let (mg, cg) = g.leading_term()?;
    if mf != mg {
        return None;
    }
    let c = cf.checked_div(&cg).ok()?;
    g.scale(&c).same_as(f).then_some(c)
}
