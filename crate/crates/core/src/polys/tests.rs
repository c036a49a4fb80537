use proptest::prelude::*;

use super::*;
use crate::linalg::Matrix;
use crate::scalars::{Field, Rational};

type P = Polynomial<Rational>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn poly(nvars: usize, terms: &[(i64, &[u32])]) -> P {
    P::from_terms(nvars, terms.iter().map(|(c, e)| (Monomial::new(e), Rational::from_i64(*c))))
}

#[test]
fn arithmetic_examples() {
    let x_plus_y = poly(2, &[(1, &[1, 0]), (1, &[0, 1])]);
    let x_minus_y = poly(2, &[(1, &[1, 0]), (-1, &[0, 1])]);
    assert_eq!(&x_plus_y * &x_minus_y, poly(2, &[(1, &[2, 0]), (-1, &[0, 2])]));

    let r = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]).scale(&q(1, 2));
    assert_eq!(r.coeff(&Monomial::new(&[2, 0])), q(1, 2));
    assert_eq!(r.coeff(&Monomial::new(&[0, 2])), q(1, 2));

    let zero = P::zero(2);
    assert!((&x_plus_y * &zero).is_zero());
    assert_eq!((&x_plus_y * &zero).len(), 0);

    assert_eq!(
        x_plus_y.checked_add(&P::zero(3)),
        Err(PolyError::VarCountMismatch(2, 3))
    );
}

#[test]
fn homogeneous_product_degree() {
    let f = poly(2, &[(1, &[2, 0]), (3, &[1, 1])]);
    let g = poly(2, &[(1, &[0, 3]), (-2, &[3, 0])]);
    assert_eq!((&f * &g).homogeneous_degree(), Some(5));
    assert_eq!(poly(2, &[(1, &[1, 0]), (1, &[0, 0])]).homogeneous_degree(), None);
}

#[test]
fn partial_examples() {
    let x2y = poly(2, &[(1, &[2, 1])]);
    assert_eq!(x2y.partial(0).unwrap(), poly(2, &[(2, &[1, 1])]));
    assert!(poly(2, &[(1, &[2, 0])]).partial(1).unwrap().is_zero());
    assert_eq!(poly(1, &[(1, &[3])]).partial(0).unwrap(), poly(1, &[(3, &[2])]));
    assert_eq!(x2y.partial(2), Err(PolyError::IndexOutOfRange(2, 2)));
}

#[test]
fn apply_diff_examples() {
    let x2 = poly(1, &[(1, &[2])]);
    let x4 = poly(1, &[(1, &[4])]);
    assert_eq!(apply_diff(&x2, &x4), poly(1, &[(12, &[2])]));

    let xy = poly(2, &[(1, &[1, 1])]);
    let r2 = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    assert!(apply_diff(&xy, &r2).is_zero());

    let x = poly(1, &[(1, &[1])]);
    assert_eq!(apply_diff(&x, &x), P::one(1));

    // deg f > deg g gives zero
    assert!(apply_diff(&x4, &x2).is_zero());
}

#[test]
fn apolar_inner_examples() {
    let x2 = poly(2, &[(1, &[2, 0])]);
    let xy = poly(2, &[(1, &[1, 1])]);
    assert_eq!(apolar_inner(&x2, &x2), Rational::from_i64(2));
    assert_eq!(apolar_inner(&xy, &xy), Rational::from_i64(1));
    assert_eq!(apolar_inner(&x2, &xy), Rational::from_i64(0));
}

#[test]
fn apolar_inner_is_constant_term_of_apply_diff() {
    let f = poly(3, &[(2, &[1, 2, 0]), (-1, &[0, 0, 3]), (5, &[3, 0, 0])]);
    let g = poly(3, &[(7, &[1, 2, 0]), (4, &[0, 0, 3]), (1, &[2, 1, 0])]);
    assert_eq!(apolar_inner(&f, &g), apply_diff(&f, &g).constant_term());
}

#[test]
fn substitution_examples() {
    let r2 = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let rot = Matrix::from_rows(vec![
        vec![q(0, 1), q(-1, 1)],
        vec![q(1, 1), q(0, 1)],
    ]);
    assert_eq!(r2.substitute_linear(&rot).unwrap(), r2);

    let x = poly(2, &[(1, &[1, 0])]);
    let flip = Matrix::from_rows(vec![vec![q(-1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
    assert_eq!(x.substitute_linear(&flip).unwrap(), poly(2, &[(-1, &[1, 0])]));

    let xy = poly(2, &[(1, &[1, 1])]);
    let swap = Matrix::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
    assert_eq!(xy.substitute_linear(&swap).unwrap(), xy);

    let bad = Matrix::<Rational>::identity(3);
    assert!(matches!(
        xy.substitute_linear(&bad),
        Err(PolyError::DimensionMismatch { nvars: 2, rows: 3, cols: 3 })
    ));
}

#[test]
fn differential_examples() {
    let r2 = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let d = OneForm::differential(&r2);
    assert_eq!(d.components()[0], poly(2, &[(2, &[1, 0])]));
    assert_eq!(d.components()[1], poly(2, &[(2, &[0, 1])]));

    assert!(OneForm::differential(&P::constant(2, q(7, 1))).is_zero());

    let xy = poly(2, &[(1, &[1, 1])]);
    let d = OneForm::differential(&xy);
    assert_eq!(d.components()[0], poly(2, &[(1, &[0, 1])]));
    assert_eq!(d.components()[1], poly(2, &[(1, &[1, 0])]));
}

#[test]
fn oneform_inner_examples() {
    let dx = OneForm::differential(&poly(2, &[(1, &[1, 0])]));
    let dy = OneForm::differential(&poly(2, &[(1, &[0, 1])]));
    assert_eq!(dx.inner(&dx), Rational::from_i64(1));
    assert_eq!(dx.inner(&dy), Rational::from_i64(0));
    let r2 = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let d = OneForm::differential(&r2);
    // <2x,2x> + <2y,2y> = 4 + 4, also deg * <f,f> = 2 * 4
    assert_eq!(d.inner(&d), Rational::from_i64(8));
    assert_eq!(d.inner(&d), Rational::from_i64(2) * r2.apolar_inner(&r2));
}

#[test]
fn span_helpers() {
    let a = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let b = poly(2, &[(1, &[2, 0]), (-1, &[0, 2])]);
    let c = poly(2, &[(1, &[2, 0])]);
    let d = poly(2, &[(1, &[0, 2])]);
    assert_eq!(span_rank(&[a.clone(), b.clone(), c.clone()]), 2);
    assert!(same_span(&[a.clone(), b], &[c, d.clone()]));
    assert!(!same_span(&[a], &[d]));
}

// ---------------------------------------------------------------------------
// properties

fn arb_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = P> {
    prop::collection::vec(
        (
            prop::collection::vec(0u32..=max_deg, nvars),
            -9i64..=9,
            1i64..=4,
        ),
        0..=max_terms,
    )
    .prop_map(move |ts| {
        P::from_terms(
            nvars,
            ts.into_iter().map(|(e, n, d)| (Monomial::new(&e), q(n, d))),
        )
    })
}

fn arb_homogeneous(nvars: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = P> {
    let monos = monomials_of_degree(nvars, deg);
    let k = monos.len();
    prop::collection::vec((0..k, -9i64..=9), 1..=max_terms).prop_map(move |ts| {
        P::from_terms(nvars, ts.into_iter().map(|(i, c)| (monos[i], Rational::from_i64(c))))
    })
}

fn arb_orthogonal_3() -> impl Strategy<Value = Matrix<Rational>> {
    // signed permutation matrices
    (0usize..6, prop::collection::vec(prop::bool::ANY, 3)).prop_map(|(p, signs)| {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut m = Matrix::zeros(3, 3);
        for (i, &j) in perms[p].iter().enumerate() {
            m[(i, j)] = Rational::from_i64(if signs[i] { -1 } else { 1 });
        }
        m
    })
}

fn arb_matrix_3() -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(-3i64..=3, 9).prop_map(|v| {
        Matrix::from_rows(v.chunks(3).map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn apolar_inner_symmetric(f in arb_poly(3, 3, 6), g in arb_poly(3, 3, 6)) {
        prop_assert_eq!(f.apolar_inner(&g), g.apolar_inner(&f));
    }

    #[test]
    fn apolar_inner_positive_definite(f in arb_poly(3, 3, 6)) {
        if !f.is_zero() {
            prop_assert!(f.apolar_inner(&f).is_positive());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pairings_are_bilinear(
        f in arb_poly(3, 3, 5),
        g in arb_poly(3, 3, 5),
        h in arb_poly(3, 4, 5),
        a in -5i64..5,
    ) {
        let a = Rational::from_i64(a);
        let lhs = (&f.scale(&a) + &g).apply_diff(&h);
        let rhs = &f.apply_diff(&h).scale(&a) + &g.apply_diff(&h);
        prop_assert_eq!(lhs, rhs);
        let lhs = h.apply_diff(&(&f.scale(&a) + &g));
        let rhs = &h.apply_diff(&f).scale(&a) + &h.apply_diff(&g);
        prop_assert_eq!(lhs, rhs);
        let lhs = (&f.scale(&a) + &g).apolar_inner(&h);
        let rhs = f.apolar_inner(&h) * &a + g.apolar_inner(&h);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_pairing_scales_by_degree(
        d in 1u32..5,
        seed_f in 0usize..1000,
        seed_g in 0usize..1000,
    ) {
        let monos = monomials_of_degree(3, d);
        let f = P::from_terms(3, monos.iter().enumerate().map(|(i, m)| (*m, Rational::from_i64(((i * 7 + seed_f) % 11) as i64 - 5))));
        let g = P::from_terms(3, monos.iter().enumerate().map(|(i, m)| (*m, Rational::from_i64(((i * 3 + seed_g) % 13) as i64 - 6))));
        let lhs = OneForm::differential(&f).inner(&OneForm::differential(&g));
        prop_assert_eq!(lhs, Rational::from_i64(d as i64) * f.apolar_inner(&g));
    }

    #[test]
    fn differential_pairing_vanishes_across_degrees(f in arb_homogeneous(3, 2, 4), g in arb_homogeneous(3, 3, 4)) {
        let lhs = OneForm::differential(&f).inner(&OneForm::differential(&g));
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn leibniz_rule(f in arb_poly(2, 3, 4), g in arb_poly(2, 3, 4)) {
        let lhs = OneForm::differential(&(&f * &g));
        let df = OneForm::differential(&f);
        let dg = OneForm::differential(&g);
        for j in 0..2 {
            let rhs = &(&f * &dg.components()[j]) + &(&g * &df.components()[j]);
            prop_assert_eq!(&lhs.components()[j], &rhs);
        }
    }

    #[test]
    fn substitution_composes(f in arb_poly(3, 3, 5), a in arb_matrix_3(), b in arb_matrix_3()) {
        let lhs = f.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
        let rhs = f.substitute_linear(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn orthogonal_substitution_preserves_pairing(
        f in arb_poly(3, 3, 5),
        g in arb_poly(3, 3, 5),
        w in arb_orthogonal_3(),
    ) {
        let wf = f.substitute_linear(&w).unwrap();
        let wg = g.substitute_linear(&w).unwrap();
        prop_assert_eq!(wf.apolar_inner(&wg), f.apolar_inner(&g));
        prop_assert_eq!(wf.apply_diff(&wg), f.apply_diff(&g).substitute_linear(&w).unwrap());
    }
}
