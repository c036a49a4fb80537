use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::monomial::{Monomial, MAX_VARS};
use super::PolyError;
use crate::linalg::Matrix;
use crate::scalars::Field;

/// Work size (term pairs) above which `apply_diff` fans out over threads.
const PARALLEL_PAIR_THRESHOLD: usize = 1 << 16;

/// Relative tolerance for comparing float-coefficient polynomials.
pub const FLOAT_REL_TOL: f64 = 1e-8;

/// Sparse multivariate polynomial with coefficients in `F`.
///
/// No zero coefficient is ever stored, so two equal polynomials have equal
/// term maps.
#[derive(Clone)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: FxHashMap<Monomial, F>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        Polynomial {
            nvars,
            terms: FxHashMap::default(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::ONE, c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(i), F::one());
        p
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: F) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::new(exps), c);
        p
    }

    /// `sum_j coeffs[j] x_j`.
    pub fn linear_form(coeffs: &[F]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(j), c.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, F)> {
        let mut v: Vec<(Monomial, F)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by_key(|t| std::cmp::Reverse(t.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::ONE)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(Monomial, F)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.cmp(b.0))
            .map(|(m, c)| (*m, c.clone()))
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        out.terms.reserve(self.len() * other.len() / 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `j` (0-based).
    pub fn partial(&self, j: usize) -> Result<Self, PolyError> {
        if j >= self.nvars {
            return Err(PolyError::IndexOutOfRange(j, self.nvars));
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(j);
            if e > 0 {
                out.add_term(m.lower(j).expect("positive exponent"), c.clone() * F::from_i64(e as i64));
            }
        }
        Ok(out)
    }

    /// The polynomial `self(∂) g`: substitute `∂_j` for `x_j` in `self` and
    /// apply the resulting operator to `g`.
    pub fn apply_diff(&self, g: &Self) -> Self {
        assert_eq!(self.nvars, g.nvars, "variable count mismatch");
        let nvars = self.nvars;
        if self.is_zero() || g.is_zero() {
            return Self::zero(nvars);
        }
        let f_terms: Vec<(&Monomial, &F)> = self.terms.iter().collect();
        let g_terms: Vec<(&Monomial, &F)> = g.terms.iter().collect();
        let table = FallingFactorials::<F>::new(g.max_exponent());

        let accumulate = |chunk: &[(&Monomial, &F)]| {
            let mut acc: FxHashMap<Monomial, F> = FxHashMap::default();
            for (ma, ca) in chunk {
                for (mb, cb) in &g_terms {
                    let Some(rest) = mb.checked_div(ma) else { continue };
                    let mut c = (*ca).clone() * *cb;
                    table.apply(&mut c, ma, mb, nvars);
                    match acc.get_mut(&rest) {
                        Some(v) => *v += &c,
                        None => {
                            acc.insert(rest, c);
                        }
                    }
                }
            }
            acc
        };

        let total = f_terms.len() * g_terms.len();
        let merged = if total >= PARALLEL_PAIR_THRESHOLD && f_terms.len() > 1 {
            let chunk = f_terms.len().div_ceil(rayon::current_num_threads() * 4).max(1);
            f_terms
                .par_chunks(chunk)
                .map(accumulate)
                .reduce(FxHashMap::default, |mut a, b| {
                    for (m, c) in b {
                        match a.get_mut(&m) {
                            Some(v) => *v += &c,
                            None => {
                                a.insert(m, c);
                            }
                        }
                    }
                    a
                })
        } else {
            accumulate(&f_terms)
        };
        let mut out = Self::zero(nvars);
        out.terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    /// Apolar inner product `<f, g> = f(∂) g |_{x=0}`.
    pub fn apolar_inner(&self, g: &Self) -> F {
        assert_eq!(self.nvars, g.nvars, "variable count mismatch");
        let (small, large) = if self.len() <= g.len() { (self, g) } else { (g, self) };
        let mut acc = F::zero();
        for (m, c) in &small.terms {
            if let Some(d) = large.terms.get(m) {
                let w = F::from_bigint(&BigInt::from(m.factorial_weight()));
                acc += &(c.clone() * d * &w);
            }
        }
        acc
    }

    /// `f(M x)`: every variable `x_i` is replaced by `sum_j M[i][j] x_j`.
    pub fn substitute_linear(&self, m: &Matrix<F>) -> Result<Self, PolyError> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                nvars: self.nvars,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let forms: Vec<Vec<(usize, F)>> = (0..self.nvars)
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j, c.clone()))
                    .collect()
            })
            .collect();
        let terms: Vec<(Monomial, F)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        Ok(self.horner(terms, 0, &forms))
    }

    /// Horner expansion in variable `i`: `f = sum_k x_i^k f_k` becomes
    /// `(..(f_K L_i + f_{K-1}) L_i + ..) + f_0` with each `f_k` substituted
    /// recursively in the remaining variables.
    fn horner(&self, terms: Vec<(Monomial, F)>, i: usize, forms: &[Vec<(usize, F)>]) -> Self {
        let n = self.nvars;
        if i == n {
            let mut out = Self::zero(n);
            for (_, c) in terms {
                out.add_term(Monomial::ONE, c);
            }
            return out;
        }
        let max_k = terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Monomial, F)>> = vec![Vec::new(); max_k + 1];
        for (m, c) in terms {
            let k = m.exp(i) as usize;
            let mut rest = m;
            for _ in 0..k {
                rest = rest.lower(i).expect("positive exponent");
            }
            buckets[k].push((rest, c));
        }
        let mut acc = Self::zero(n);
        for bucket in buckets.into_iter().rev() {
            if !acc.is_zero() {
                acc = acc.mul_linear(&forms[i]);
            }
            if !bucket.is_empty() {
                let part = self.horner(bucket, i + 1, forms);
                for (m, c) in part.terms {
                    acc.add_term(m, c);
                }
            }
        }
        acc
    }

    fn mul_linear(&self, form: &[(usize, F)]) -> Self {
        let mut out = Self::zero(self.nvars);
        out.terms.reserve(self.len() * form.len());
        for (m, c) in &self.terms {
            for (j, l) in form {
                out.add_term(m.raise(*j), c.clone() * l);
            }
        }
        out
    }

    pub fn eval(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.nvars);
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t *= x;
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Largest absolute coefficient under the float embedding.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    fn max_exponent(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.raw().iter().map(|&e| e as u32))
            .max()
            .unwrap_or(0)
    }

    /// Equality for exact fields; for floats, agreement up to a relative
    /// tolerance of [`FLOAT_REL_TOL`] in the largest coefficient.
    pub fn same_as(&self, other: &Self) -> bool {
        if F::is_exact() {
            return self == other;
        }
        let scale = self.max_abs_coeff().max(other.max_abs_coeff()).max(1.0);
        (self - other).max_abs_coeff() <= FLOAT_REL_TOL * scale
    }

    /// Zero test with the same tolerance as [`Polynomial::same_as`], measured
    /// against `reference`.
    pub fn is_negligible_against(&self, reference: f64) -> bool {
        if F::is_exact() {
            return self.is_zero();
        }
        self.max_abs_coeff() <= FLOAT_REL_TOL * reference.max(1.0)
    }

    /// For floats, drop coefficients below `1e-12` of the largest one; exact
    /// polynomials are returned unchanged.
    pub fn pruned(mut self) -> Self {
        if !F::is_exact() {
            let cut = 1e-12 * self.max_abs_coeff();
            self.terms.retain(|_, c| c.to_f64().abs() > cut);
        }
        self
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

/// Table of `b! / (b - a)!` as field elements, combined per variable.
struct FallingFactorials<F> {
    // small[b][a] as u128 when it fits
    small: Vec<Vec<Option<u128>>>,
    _marker: std::marker::PhantomData<F>,
}

impl<F: Field> FallingFactorials<F> {
    fn new(max: u32) -> Self {
        let max = max as usize;
        let mut small = vec![vec![None; max + 1]; max + 1];
        for (b, row) in small.iter_mut().enumerate() {
            let mut acc: Option<u128> = Some(1);
            row[0] = acc;
            for (a, slot) in row.iter_mut().enumerate().take(b + 1).skip(1) {
                acc = acc.and_then(|v| v.checked_mul((b - a + 1) as u128));
                *slot = acc;
            }
        }
        FallingFactorials {
            small,
            _marker: std::marker::PhantomData,
        }
    }

    /// Multiply `c` by `prod_i b_i!/(b_i - a_i)!`.
    #[inline]
    fn apply(&self, c: &mut F, a: &Monomial, b: &Monomial, nvars: usize) {
        let mut acc: u128 = 1;
        let mut big: Option<BigInt> = None;
        for i in 0..nvars {
            let (ai, bi) = (a.exp(i) as usize, b.exp(i) as usize);
            if ai == 0 {
                continue;
            }
            match self.small[bi][ai] {
                Some(v) => match acc.checked_mul(v) {
                    Some(p) => acc = p,
                    None => {
                        let cur = big.take().unwrap_or_else(|| BigInt::from(1));
                        big = Some(cur * BigInt::from(acc) * BigInt::from(v));
                        acc = 1;
                    }
                },
                None => {
                    let mut f = BigInt::from(1);
                    for k in (bi - ai + 1)..=bi {
                        f *= k;
                    }
                    let cur = big.take().unwrap_or_else(|| BigInt::from(1));
                    big = Some(cur * f);
                }
            }
        }
        match big {
            None => {
                if acc != 1 {
                    if let Ok(small) = i64::try_from(acc) {
                        *c *= &F::from_i64(small);
                    } else {
                        *c *= &F::from_bigint(&BigInt::from(acc));
                    }
                }
            }
            Some(b) => {
                *c *= &F::from_bigint(&(b * BigInt::from(acc)));
            }
        }
    }
}

/// Stack the coefficient vectors of `polys` as rows over the union of their
/// monomials (descending graded-lex column order).
pub fn coefficient_matrix<F: Field>(polys: &[Polynomial<F>]) -> (Matrix<F>, Vec<Monomial>) {
    let monos: BTreeSet<Monomial> = polys.iter().flat_map(|p| p.terms.keys().copied()).collect();
    let monos: Vec<Monomial> = monos.into_iter().rev().collect();
    let index: FxHashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut m = Matrix::zeros(polys.len(), monos.len());
    for (r, p) in polys.iter().enumerate() {
        for (mo, c) in &p.terms {
            m[(r, index[mo])] = c.clone();
        }
    }
    (m, monos)
}

/// Dimension of the linear span of `polys`.
pub fn span_rank<F: Field>(polys: &[Polynomial<F>]) -> usize {
    if polys.is_empty() {
        return 0;
    }
    coefficient_matrix(polys).0.rank()
}

/// Whether two families span the same linear space.
pub fn same_span<F: Field>(a: &[Polynomial<F>], b: &[Polynomial<F>]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    if ra != rb {
        return false;
    }
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    span_rank(&all) == ra
}

impl<'a, F: Field> Add<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&i| m.exp(i) > 0)
                .map(|i| match m.exp(i) {
                    1 => format!("x{}", i + 1),
                    e => format!("x{}^{}", i + 1, e),
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
