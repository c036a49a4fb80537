use super::*;
use crate::groups::{RootSystem, DEFAULT_MAX_GROUP_ORDER};
use crate::polys::{same_span, Monomial};
use crate::scalars::{QSqrt5, Rational};
use crate::seeds::{product_of_variables, seed_invariants, SeedProvenance, SeedSelector};
use crate::test_util::{random_homogeneous, random_word, rng};

type Q = Rational;

fn group<F: Field>(t: GroupType) -> ReflectionGroup<F> {
    ReflectionGroup::new(RootSystem::build(t).unwrap()).unwrap()
}

fn poly(nvars: usize, terms: &[(i64, &[u32])]) -> Polynomial<Q> {
    Polynomial::from_terms(nvars, terms.iter().map(|(c, e)| (Monomial::new(e), Q::from_i64(*c))))
}

fn build<F: Field>(t: GroupType, mode: Mode) -> (ReflectionGroup<F>, InvariantSystem<F>) {
    let g = group::<F>(t);
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
    let sys = canonical_system(&g, &seeds, mode).unwrap();
    (g, sys)
}

#[test]
fn phi_examples() {
    let b2 = RootSystem::<Q>::build(GroupType::B(2)).unwrap().delta();
    assert!(phi(&poly(2, &[(1, &[2, 0]), (1, &[0, 2])]), &b2).is_zero());
    let b1 = RootSystem::<Q>::build(GroupType::B(1)).unwrap().delta();
    let x = poly(1, &[(1, &[1])]);
    assert_eq!(phi(&x, &b1), x);
    assert!(phi(&Polynomial::zero(2), &b2).is_zero());
}

#[test]
fn phi_tilde_examples() {
    let b2 = RootSystem::<Q>::build(GroupType::B(2)).unwrap().delta();
    let q = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let dq = OneForm::differential(&q);
    let image = phi_tilde(&dq, &b2);
    let lambda = oneform_eigenvalue(&dq, &image).unwrap();
    assert!(!lambda.is_zero());
    assert!(phi_tilde(&OneForm::<Q>::zero(2), &b2).is_zero());
}

#[test]
fn d4_product_is_eigenvector() {
    let delta = RootSystem::<Q>::build(GroupType::D(4)).unwrap().delta();
    let omega = OneForm::differential(&product_of_variables::<Q>(4));
    let lambda = oneform_eigenvalue(&omega, &phi_tilde(&omega, &delta)).unwrap();
    assert!(!lambda.is_zero());
}

#[test]
fn epsilon_examples() {
    let form = OneForm::new(vec![poly(2, &[(1, &[0, 1])]), poly(2, &[(1, &[1, 0])])]);
    assert_eq!(epsilon(&form), poly(2, &[(2, &[1, 1])]));
    let q = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    assert_eq!(epsilon(&OneForm::differential(&q)), q.scale(&Q::from_i64(2)));
    assert!(epsilon(&OneForm::<Q>::zero(3)).is_zero());
}

#[test]
fn candidate_examples() {
    let b1 = RootSystem::<Q>::build(GroupType::B(1)).unwrap().delta();
    assert_eq!(candidate(&poly(1, &[(1, &[2])]), &b1), poly(1, &[(2, &[2])]));

    let (_, sys) = build::<Q>(GroupType::B(2), Mode::Generic);
    let q = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let harmonic = poly(2, &[(1, &[4, 0]), (-6, &[2, 2]), (1, &[0, 4])]);
    assert!(same_span(&[sys.entries[0].poly.clone()], &[q]));
    assert!(same_span(&[sys.entries[1].poly.clone()], &[harmonic]));
}

#[test]
fn gram_schmidt_examples() {
    let g = group::<Q>(GroupType::B(3));
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
    let delta = g.root_system().delta();
    let cands = candidate_system(seeds.polys(), &delta).unwrap();
    assert_eq!(gram_schmidt_graded(&cands).unwrap(), cands);

    let single = vec![poly(2, &[(1, &[3, 1])])];
    assert_eq!(gram_schmidt_graded(&single).unwrap(), single);

    let g = group::<Q>(GroupType::D(4));
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
    let cands = candidate_system(seeds.polys(), &g.root_system().delta()).unwrap();
    let out = gram_schmidt_graded(&cands).unwrap();
    assert!(out[1].apolar_inner(&out[2]).is_zero());

    let dup = vec![poly(1, &[(1, &[2])]), poly(1, &[(3, &[2])])];
    assert_eq!(gram_schmidt_graded(&dup).unwrap_err(), CanonicalError::ZeroAfterOrthogonalization(1));
}

#[test]
fn b1_system_and_float_view() {
    let (g, sys) = build::<Q>(GroupType::B(1), Mode::Generic);
    assert_eq!(sys.entries.len(), 1);
    assert!(same_span(&[sys.entries[0].poly.clone()], &[poly(1, &[(1, &[2])])]));
    let c = &sys.entries[0].norm;
    let lead = sys.entries[0].poly.coeff(&Monomial::new(&[2]));
    assert_eq!(c.clone(), lead.clone() * &lead * &Q::from_i64(2));
    let unit = &sys.float_view()[0];
    assert!((unit.coeff(&Monomial::new(&[2])).abs() - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    assert!(verify_canonical(&sys, &g).passed);

    let single = InvariantSystem::from_polys(GroupType::B(1), 1, vec![poly(1, &[(1, &[2])])], Provenance::External);
    let report = verify_canonical(&single, &g);
    assert!(report.passed);
    assert_eq!(single.entries[0].norm, Q::from_i64(2));
}

#[test]
fn d4_refined_and_generic_agree() {
    let (g, refined) = build::<Q>(GroupType::D(4), Mode::Refined);
    assert_eq!(refined.provenance, Provenance::RefinedProduct);
    assert_eq!(refined.degrees(), vec![2, 4, 4, 6]);
    assert!(refined.polys().contains(&product_of_variables(4)));
    assert!(verify_canonical(&refined, &g).passed);
    let (_, generic) = build::<Q>(GroupType::D(4), Mode::Generic);
    assert!(verify_canonical(&generic, &g).passed);
    assert!(refined.same_spans(&generic));
}

#[test]
fn refined_distinct_degrees_skip_orthogonalization() {
    let (g, sys) = build::<Q>(GroupType::B(3), Mode::Refined);
    assert_eq!(sys.provenance, Provenance::RefinedDistinct);
    let report = verify_canonical(&sys, &g);
    assert!(report.passed, "{:?}", report.failures());
    assert!(report.pairs.iter().filter(|p| p.i != p.j).all(|p| p.value.is_zero()));
    let (_, generic) = build::<Q>(GroupType::B(3), Mode::Generic);
    assert_eq!(sys.polys(), generic.polys());
}

#[test]
fn raw_seeds_fail_verification() {
    let g = group::<Q>(GroupType::B(2));
    let seeds = vec![poly(2, &[(1, &[2, 0]), (1, &[0, 2])]), poly(2, &[(1, &[4, 0]), (1, &[0, 4])])];
    let sys = InvariantSystem::from_polys(GroupType::B(2), 2, seeds, Provenance::External);
    let report = verify_canonical(&sys, &g);
    assert!(!report.passed);
    let bad = report.pair(0, 1).unwrap();
    assert!(!bad.ok);
    assert_eq!(bad.value, poly(2, &[(12, &[2, 0]), (12, &[0, 2])]));
    assert!(report.failures()[0].starts_with("pair (1, 2)"));
}

#[test]
fn small_types_verify() {
    for t in [GroupType::A(2), GroupType::A(3), GroupType::B(2), GroupType::I2(3), GroupType::I2(4), GroupType::I2(6)] {
        for mode in [Mode::Generic, Mode::Refined] {
            let (g, sys) = build::<Q>(t, mode);
            let report = verify_canonical(&sys, &g);
            assert!(report.passed, "{t} {mode:?}: {:?}", report.failures());
        }
    }
    let (g, sys) = build::<QSqrt5>(GroupType::I2(5), Mode::Generic);
    assert!(verify_canonical(&sys, &g).passed);
    for m in [5, 7, 8] {
        let (g, sys) = build::<f64>(GroupType::I2(m), Mode::Generic);
        let report = verify_canonical(&sys, &g);
        assert!(report.passed, "I2({m}): {:?}", report.failures());
    }
}

#[test]
fn float_view_is_orthonormal() {
    let (_, sys) = build::<Q>(GroupType::B(3), Mode::Generic);
    let (diag, off) = float_view_deviation(&sys);
    assert!(diag < 1e-10 && off < 1e-10, "{diag} {off}");
}

#[test]
fn phi_properties_b2_a2() {
    let mut r = rng(3);
    for t in [GroupType::B(2), GroupType::A(2), GroupType::I2(6)] {
        let mut g = group::<Q>(t);
        g.enumerate(DEFAULT_MAX_GROUP_ORDER).unwrap();
        let rs = g.root_system().clone();
        let delta = rs.delta();
        let n = g.nvars();
        let seeds = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
        for k in 0..12 {
            let d = 1 + k % 6;
            let f = random_homogeneous::<Q>(&mut r, n, d, 4);
            let h = random_homogeneous::<Q>(&mut r, n, d, 4);
            let pf = phi(&f, &delta);
            assert!(pf.is_zero() || pf.homogeneous_degree() == Some(d));
            assert_eq!(phi(&(&f + &h), &delta), &pf + &phi(&h, &delta));
            assert_eq!(pf.apolar_inner(&h), f.apolar_inner(&phi(&h, &delta)));
            let w = g.word(&random_word(&mut r, t.rank(), 5));
            assert_eq!(w.act(&pf), phi(&w.act(&f), &delta));

            let seed = &seeds.polys()[k as usize % seeds.len()];
            let ideal = seed * &f;
            assert!(phi(&ideal, &delta).is_zero());
            assert!(apply_diff(&ideal, &delta).is_zero());
        }
    }
}

#[test]
fn phi_tilde_symmetric_on_seed_differentials() {
    let g = group::<Q>(GroupType::B(3));
    let delta = g.root_system().delta();
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
    let forms: Vec<OneForm<Q>> = seeds.polys().iter().map(OneForm::differential).collect();
    for a in &forms {
        for b in &forms {
            assert_eq!(phi_tilde(a, &delta).inner(b), a.inner(&phi_tilde(b, &delta)));
        }
    }
}

#[test]
fn root_scaling_changes_entries_by_scalars() {
    let g = group::<Q>(GroupType::B(3));
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
    let base = canonical_system(&g, &seeds, Mode::Generic).unwrap();
    let rs = g.root_system();
    let scales: Vec<Q> = (0..rs.positive_roots().len()).map(|i| Q::new(i as i64 + 2, 3)).collect();
    let delta = rs.delta_scaled(&scales);
    let cands = candidate_system(seeds.polys(), &delta).unwrap();
    let scaled = gram_schmidt_graded(&cands).unwrap();
    for (a, b) in base.polys().iter().zip(&scaled) {
        let c = scalar_multiple(b, a).unwrap();
        assert!(c.is_positive());
    }
}

#[test]
fn seed_choice_does_not_change_spans() {
    for t in [GroupType::B(3), GroupType::A(3)] {
        let g = group::<Q>(t);
        let a = seed_invariants(&g, SeedSelector::PowerSums).unwrap();
        let b = seed_invariants(&g, SeedSelector::Reynolds).unwrap();
        assert_eq!(b.provenance(), SeedProvenance::Reynolds);
        let sa = canonical_system(&g, &a, Mode::Generic).unwrap();
        let sb = canonical_system(&g, &b, Mode::Generic).unwrap();
        assert!(verify_canonical(&sb, &g).passed);
        assert!(sa.same_spans(&sb), "{t}");
    }
}

#[test]
fn dependent_seeds_give_zero_candidate() {
    let g = group::<Q>(GroupType::B(2));
    let q = poly(2, &[(1, &[2, 0]), (1, &[0, 2])]);
    let seeds = crate::seeds::SeedSystem::unchecked(vec![q.clone(), &q * &q], SeedProvenance::UserSupplied);
    assert!(matches!(
        canonical_system(&g, &seeds, Mode::Generic),
        Err(CanonicalError::ZeroCandidate(1))
    ));
}
