use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::polys::{monomials_of_degree, Polynomial};
use crate::scalars::Field;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Homogeneous polynomial of degree `d` with up to `terms` small integer
/// coefficients.
pub fn random_homogeneous<F: Field>(rng: &mut StdRng, nvars: usize, d: u32, terms: usize) -> Polynomial<F> {
    let monos = monomials_of_degree(nvars, d);
    let mut p = Polynomial::zero(nvars);
    for _ in 0..terms {
        let m = monos[rng.gen_range(0..monos.len())];
        p.add_term(m, F::from_i64(rng.gen_range(-5..=5)));
    }
    p
}

pub fn random_word(rng: &mut StdRng, generators: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..generators)).collect()
}
