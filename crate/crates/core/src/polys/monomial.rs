use std::cmp::Ordering;
use std::fmt;

/// Upper bound on the number of variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector `x^a` with cached total degree.
///
/// Unused trailing slots are always zero, so monomials over different variable
/// counts never compare equal by accident of padding.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    degree: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        degree: 0,
    };

    /// Panics if there are more than `MAX_VARS` exponents or one exceeds 255.
    pub fn new(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables supported");
        let mut m = Monomial::ONE;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u8::try_from(e).expect("exponent exceeds 255");
            m.degree += e as u16;
        }
        m
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn raw(&self) -> &[u8; MAX_VARS] {
        &self.exps
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent exceeds 255");
        }
        m.degree += other.degree;
        m
    }

    /// `self / other` when `other` divides `self`.
    #[inline]
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_sub(*b)?;
        }
        m.degree -= other.degree;
        Some(m)
    }

    /// Lower the exponent of variable `i` by one.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        let mut m = *self;
        m.exps[i] = m.exps[i].checked_sub(1)?;
        m.degree -= 1;
        Some(m)
    }

    pub fn raise(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.exps[i] = m.exps[i].checked_add(1).expect("exponent exceeds 255");
        m.degree += 1;
        m
    }

    /// Product of factorials of the exponents: `<x^a, x^a>`.
    pub fn factorial_weight(&self) -> num_bigint::BigUint {
        let mut acc = num_bigint::BigUint::from(1u32);
        for &e in &self.exps {
            for k in 2..=e as u32 {
                acc *= k;
            }
        }
        acc
    }
}

/// Graded lexicographic: higher degree first is the caller's choice; this
/// ordering is ascending (lower degree, then lexicographically smaller).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "x^{:?}", &self.exps[..last])
    }
}

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// descending graded-lex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur.push(left);
            out.push(Monomial::new(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(i + 1, nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}
