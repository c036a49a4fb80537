//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use canon_core::canonical::{
    epsilon, float_view_deviation, oneform_eigenvalue, phi, phi_tilde, verify_canonical,
    InvariantSystem, Mode, Provenance,
};
use canon_core::groups::{GroupType, ReflectionGroup, RootSystem, DEFAULT_MAX_GROUP_ORDER};
use canon_core::oracle::flatto_solve;
use canon_core::pipeline::{construct, RunConfig, SeedSpec};
use canon_core::polys::{apolar_inner, apply_diff, Monomial, OneForm, Polynomial};
use canon_core::scalars::{Field, QSqrt5, Rational};
use canon_core::seeds::{product_of_variables, seed_invariants, SeedSelector};

/// Float-view tolerance for criterion 9.
const FLOAT_VIEW_TOL: f64 = 1e-10;
const RANDOM_POLYS: usize = 200;
const RANDOM_ELEMENTS: usize = 10;
const IDEAL_SAMPLES: usize = 50;
const MAX_RANDOM_DEGREE: u32 = 8;

type Q = Rational;
type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn FnOnce(&mut StdRng) -> Outcome>);

const CANONICITY_GROUPS: [GroupType; 11] = [
    GroupType::A(2),
    GroupType::A(3),
    GroupType::B(2),
    GroupType::B(3),
    GroupType::B(4),
    GroupType::D(4),
    GroupType::D(5),
    GroupType::I2(4),
    GroupType::I2(6),
    GroupType::H3,
    GroupType::F4,
];

const SMALL_GROUPS: [GroupType; 7] = [
    GroupType::A(2),
    GroupType::A(3),
    GroupType::B(2),
    GroupType::B(3),
    GroupType::I2(4),
    GroupType::I2(6),
    GroupType::H3,
];

fn group<F: Field>(t: GroupType) -> ReflectionGroup<F> {
    let mut g = ReflectionGroup::new(RootSystem::build(t).expect("root system")).expect("group");
    g.enumerate(DEFAULT_MAX_GROUP_ORDER).expect("enumerable");
    g
}

fn built<F: Field>(t: GroupType, mode: Mode, seed: SeedSpec) -> Result<(ReflectionGroup<F>, InvariantSystem<F>), String> {
    let mut cfg = RunConfig::new(t);
    cfg.mode = mode;
    cfg.seed = seed;
    construct::<F>(&cfg).map_err(|e| format!("{t}: {e}"))
}

fn random_poly<F: Field>(rng: &mut StdRng, nvars: usize, d: u32) -> Polynomial<F> {
    let terms = rng.gen_range(1..=6);
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        for _ in 0..d {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        let c = loop {
            let c: i64 = rng.gen_range(-5..=5);
            if c != 0 {
                break c;
            }
        };
        p.add_term(Monomial::new(&exps), F::from_i64(c));
    }
    p
}

fn random_word(rng: &mut StdRng, generators: usize) -> Vec<usize> {
    let len = rng.gen_range(1..=12);
    (0..len).map(|_| rng.gen_range(0..generators)).collect()
}

/// A random element `Σ h_i q_i` of the ideal generated by the seeds.
fn random_ideal_element<F: Field>(rng: &mut StdRng, seeds: &[Polynomial<F>], n: usize) -> Polynomial<F> {
    let summands = rng.gen_range(1..=2);
    let mut f = Polynomial::zero(n);
    for _ in 0..summands {
        let h = &seeds[rng.gen_range(0..seeds.len())];
        let qd = rng.gen_range(0..=3);
        let q = random_poly::<F>(rng, n, qd);
        f = &f + &(h * &q);
    }
    f
}

fn canonicity_one<F: Field>(t: GroupType) -> Result<(), String> {
    let (g, sys) = built::<F>(t, Mode::Generic, SeedSpec::PowerSums)?;
    let report = verify_canonical(&sys, &g);
    for p in &report.pairs {
        if p.i != p.j && !p.value.is_zero() {
            return Err(format!("{t}: ({}, {}) is not the zero polynomial", p.i + 1, p.j + 1));
        }
        if p.i == p.j && !(p.value.homogeneous_degree() == Some(0) && p.value.constant_term().is_positive()) {
            return Err(format!("{t}: ({0}, {0}) is not a positive constant", p.i + 1));
        }
    }
    if !report.passed {
        return Err(format!("{t}: {}", report.failures().join("; ")));
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    for t in CANONICITY_GROUPS {
        let start = Instant::now();
        if t == GroupType::H3 {
            canonicity_one::<QSqrt5>(t)?;
        } else {
            canonicity_one::<Q>(t)?;
        }
        let limit = if t.rank() <= 3 { 10.0 } else { 300.0 };
        let secs = start.elapsed().as_secs_f64();
        if secs > limit {
            return Err(format!("{t} took {secs:.1}s, limit {limit}s"));
        }
    }
    Ok(format!("{} groups verified exactly", CANONICITY_GROUPS.len()))
}

fn criterion_2() -> Outcome {
    let expected: [(GroupType, &[u32]); 5] = [
        (GroupType::A(2), &[2, 3]),
        (GroupType::B(3), &[2, 4, 6]),
        (GroupType::D(4), &[2, 4, 4, 6]),
        (GroupType::H3, &[2, 6, 10]),
        (GroupType::F4, &[2, 6, 8, 12]),
    ];
    for (t, want) in expected {
        let got = if t == GroupType::H3 {
            built::<QSqrt5>(t, Mode::Generic, SeedSpec::PowerSums)?.1.degrees()
        } else {
            built::<Q>(t, Mode::Generic, SeedSpec::PowerSums)?.1.degrees()
        };
        if got != want {
            return Err(format!("{t}: degrees {got:?}, expected {want:?}"));
        }
    }
    for n in 4..=6 {
        let mut want: Vec<u32> = (1..n as u32).map(|k| 2 * k).collect();
        want.push(n as u32);
        want.sort();
        let got = built::<Q>(GroupType::D(n), Mode::Generic, SeedSpec::PowerSums)?.1.degrees();
        if got != want {
            return Err(format!("D{n}: degrees {got:?}, expected {want:?}"));
        }
    }
    Ok("degree multisets match".into())
}

fn oracle_one<F: Field>(t: GroupType) -> Result<(), String> {
    let (mut g, main) = built::<F>(t, Mode::Generic, SeedSpec::PowerSums)?;
    g.enumerate(DEFAULT_MAX_GROUP_ORDER).map_err(|e| e.to_string())?;
    let oracle = flatto_solve(&g).map_err(|e| format!("{t}: {e}"))?;
    if !main.same_spans(&oracle) {
        return Err(format!("{t}: per-degree spans differ"));
    }
    if !verify_canonical(&main, &g).passed || !verify_canonical(&oracle, &g).passed {
        return Err(format!("{t}: verification failed"));
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    for t in [GroupType::A(2), GroupType::B(2), GroupType::B(3), GroupType::I2(6), GroupType::D(4)] {
        oracle_one::<Q>(t)?;
    }
    oracle_one::<QSqrt5>(GroupType::H3)?;
    let secs = start.elapsed().as_secs_f64();
    if secs > 120.0 {
        return Err(format!("took {secs:.1}s, limit 120s"));
    }
    Ok("6 groups agree with the oracle".into())
}

fn phi_suite<F: Field>(t: GroupType, rng: &mut StdRng) -> Result<(), String> {
    let g = group::<F>(t);
    let rs = g.root_system();
    let delta = rs.delta();
    let n = g.nvars();
    let elements: Vec<_> = (0..RANDOM_ELEMENTS)
        .map(|_| g.word(&random_word(rng, g.generators().len())))
        .collect();
    for k in 0..RANDOM_POLYS {
        let d = rng.gen_range(1..=MAX_RANDOM_DEGREE);
        let f = rs.restrict(&random_poly::<F>(rng, n, d));
        let h = rs.restrict(&random_poly::<F>(rng, n, d));
        let pf = phi(&f, &delta);
        if !pf.is_zero() && pf.homogeneous_degree() != Some(d) {
            return Err(format!("{t}: sample {k}: degree not preserved"));
        }
        if apolar_inner(&pf, &h) != apolar_inner(&f, &phi(&h, &delta)) {
            return Err(format!("{t}: sample {k}: not self-adjoint"));
        }
        for w in &elements {
            if phi(&w.act(&f), &delta) != w.act(&pf) {
                return Err(format!("{t}: sample {k}: not equivariant"));
            }
        }
    }
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).map_err(|e| format!("{t}: {e}"))?;
    for k in 0..IDEAL_SAMPLES {
        let h = &seeds.polys()[rng.gen_range(0..seeds.len())];
        let qd = rng.gen_range(0..=4);
        let q = random_poly::<F>(rng, n, qd);
        if !phi(&(h * &q), &delta).is_zero() {
            return Err(format!("{t}: ideal sample {k} not in the kernel"));
        }
    }
    Ok(())
}

fn criterion_4(rng: &mut StdRng) -> Outcome {
    for t in SMALL_GROUPS {
        if t == GroupType::H3 {
            phi_suite::<QSqrt5>(t, rng)?;
        } else {
            phi_suite::<Q>(t, rng)?;
        }
    }
    Ok(format!("{} groups x {RANDOM_POLYS} polynomials, no failures", SMALL_GROUPS.len()))
}

fn steinberg_one<F: Field>(t: GroupType, rng: &mut StdRng) -> Result<(), String> {
    let g = group::<F>(t);
    let delta = g.root_system().delta();
    let n = g.nvars();
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).map_err(|e| format!("{t}: {e}"))?;
    for k in 0..IDEAL_SAMPLES {
        let f = random_ideal_element(rng, seeds.polys(), n);
        if !apply_diff(&f, &delta).is_zero() {
            return Err(format!("{t}: ideal sample {k} does not annihilate the antiinvariant"));
        }
    }
    let lowest = &seeds.polys()[0];
    let linear = lowest.partial(0).map_err(|e| e.to_string())?;
    let witness = apply_diff(&linear, &delta);
    if witness.is_zero() || apply_diff(&witness, &delta).is_zero() {
        return Err(format!("{t}: seed-derived harmonic witness annihilates the antiinvariant"));
    }
    Ok(())
}

fn criterion_5(rng: &mut StdRng) -> Outcome {
    for t in SMALL_GROUPS {
        if t == GroupType::H3 {
            steinberg_one::<QSqrt5>(t, rng)?;
        } else {
            steinberg_one::<Q>(t, rng)?;
        }
    }
    let g = group::<Q>(GroupType::B(2));
    let delta = g.root_system().delta();
    let quartic = |c: [i64; 5]| {
        Polynomial::from_terms(
            2,
            (0..5u32).map(|k| (Monomial::new(&[4 - k, k]), Q::from_i64(c[k as usize]))),
        )
    };
    let harmonic_invariant = quartic([1, 0, -6, 0, 1]);
    if !g.is_invariant(&harmonic_invariant) || !apply_diff(&harmonic_invariant, &delta).is_zero() {
        return Err("harmonic degree-4 B2 invariant lies in the ideal but does not annihilate".into());
    }
    let harmonic_witness = quartic([0, 1, 0, -1, 0]);
    if g.is_invariant(&harmonic_witness) || apply_diff(&harmonic_witness, &delta).is_zero() {
        return Err("harmonic degree-4 B2 witness x^3y - xy^3 annihilates the antiinvariant".into());
    }
    Ok("ideal elements annihilate, witnesses do not".into())
}

fn criterion_6() -> Outcome {
    let g = group::<Q>(GroupType::D(4));
    let delta = g.root_system().delta();
    let omega = OneForm::differential(&product_of_variables::<Q>(4));
    let image = phi_tilde(&omega, &delta);
    let lambda = oneform_eigenvalue(&omega, &image).ok_or("d(x1x2x3x4) is not an eigenvector")?;
    if lambda.is_zero() || image != omega.scale(&lambda) {
        return Err(format!("eigenvalue {lambda} rejected"));
    }
    let (gg, generic) = built::<Q>(GroupType::D(4), Mode::Generic, SeedSpec::PowerSums)?;
    let (_, refined) = built::<Q>(GroupType::D(4), Mode::Refined, SeedSpec::PowerSums)?;
    if refined.provenance != Provenance::RefinedProduct {
        return Err(format!("refined build has provenance {}", refined.provenance));
    }
    if !generic.same_spans(&refined) {
        return Err("refined and generic spans differ".into());
    }
    if !verify_canonical(&generic, &gg).passed || !verify_canonical(&refined, &gg).passed {
        return Err("verification failed".into());
    }
    Ok(format!("eigenvalue {lambda}, refined and generic agree"))
}

fn differential_one<F: Field>(t: GroupType) -> Result<usize, String> {
    let g = group::<F>(t);
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).map_err(|e| format!("{t}: {e}"))?;
    let mut checked = 0;
    for (i, h) in seeds.polys().iter().enumerate() {
        let d = seeds.degrees()[i];
        let dh = OneForm::differential(h);
        if epsilon(&dh) != h.scale(&F::from_i64(d as i64)) {
            return Err(format!("{t}: epsilon(dh{}) != {d} h{}", i + 1, i + 1));
        }
        for (j, k) in seeds.polys().iter().enumerate() {
            if seeds.degrees()[j] != d {
                continue;
            }
            let lhs = dh.inner(&OneForm::differential(k));
            if lhs != h.apolar_inner(k) * F::from_i64(d as i64) {
                return Err(format!("{t}: <dh{}, dh{}> != {d} <h{}, h{}>", i + 1, j + 1, i + 1, j + 1));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_7() -> Outcome {
    let mut pairs = 0;
    for t in CANONICITY_GROUPS {
        pairs += if t == GroupType::H3 {
            differential_one::<QSqrt5>(t)?
        } else {
            differential_one::<Q>(t)?
        };
    }
    Ok(format!("{pairs} equal-degree pairs"))
}

fn criterion_8() -> Outcome {
    for t in [GroupType::B(3), GroupType::D(4)] {
        let (_, power) = built::<Q>(t, Mode::Generic, SeedSpec::PowerSums)?;
        let (_, reynolds) = built::<Q>(t, Mode::Generic, SeedSpec::Reynolds)?;
        if !power.same_spans(&reynolds) {
            return Err(format!("{t}: seed choices give different spans"));
        }
    }
    Ok("B3 and D4 agree across seed choices".into())
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for t in CANONICITY_GROUPS {
        let (diag, off) = if t == GroupType::H3 {
            float_view_deviation(&built::<QSqrt5>(t, Mode::Generic, SeedSpec::PowerSums)?.1)
        } else {
            float_view_deviation(&built::<Q>(t, Mode::Generic, SeedSpec::PowerSums)?.1)
        };
        if diag > FLOAT_VIEW_TOL || off > FLOAT_VIEW_TOL {
            return Err(format!("{t}: diagonal {diag:e}, off-diagonal {off:e}"));
        }
        worst = worst.max(diag).max(off);
    }
    Ok(format!("worst deviation {worst:e}"))
}

fn criterion_10() -> Outcome {
    let g = group::<Q>(GroupType::B(2));
    let seeds = seed_invariants(&g, SeedSelector::PowerSums).map_err(|e| e.to_string())?;
    let raw = InvariantSystem::from_polys(GroupType::B(2), 2, seeds.polys().to_vec(), Provenance::External);
    let report = verify_canonical(&raw, &g);
    if report.passed {
        return Err("raw seeds were accepted".into());
    }
    let expected = Polynomial::from_terms(
        2,
        [
            (Monomial::new(&[2, 0]), Q::from_i64(12)),
            (Monomial::new(&[0, 2]), Q::from_i64(12)),
        ],
    );
    let pair = report.pair(0, 1).ok_or("pair (1, 2) missing")?;
    if pair.ok || pair.value != expected {
        return Err(format!("(f1, f2) = {}", pair.value));
    }
    let reported = report.failures();
    if !reported.iter().any(|s| s.starts_with("pair (1, 2)")) {
        return Err(format!("failures do not name pair (1, 2): {reported:?}"));
    }
    Ok(format!("rejected with (f1, f2) = {}", pair.value))
}

fn main() -> ExitCode {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let criteria: Vec<Criterion> = vec![
        ("exact canonicity", Box::new(|_| criterion_1())),
        ("degree tables", Box::new(|_| criterion_2())),
        ("oracle equivalence", Box::new(|_| criterion_3())),
        ("phi properties", Box::new(criterion_4)),
        ("ideal annihilates the antiinvariant", Box::new(criterion_5)),
        ("D4 eigenvector", Box::new(|_| criterion_6())),
        ("epsilon and differential identities", Box::new(|_| criterion_7())),
        ("uniqueness across seeds", Box::new(|_| criterion_8())),
        ("float-normalized view", Box::new(|_| criterion_9())),
        ("negative control", Box::new(|_| criterion_10())),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut rng);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.1}s)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
