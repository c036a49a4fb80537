use rustc_hash::FxHashSet;

use super::{GroupError, GroupType};
use crate::linalg::{dot, Matrix};
use crate::polys::Polynomial;
use crate::scalars::Field;

/// A root system in its ambient model.
#[derive(Clone, Debug)]
pub struct RootSystem<F> {
    group_type: GroupType,
    ambient: usize,
    simple_roots: Vec<Vec<F>>,
    positive_roots: Vec<Vec<F>>,
    /// Basis of the pointwise-fixed complement of the root span.
    complement: Vec<Vec<F>>,
    /// Orthogonal projection onto the root span.
    projection: Matrix<F>,
    gram_inverse: Matrix<F>,
}

/// `s_a(x) = x - 2 (x, a)/(a, a) a` as a matrix.
pub fn reflection_matrix<F: Field>(alpha: &[F]) -> Result<Matrix<F>, GroupError> {
    let n = alpha.len();
    let norm = dot(alpha, alpha);
    let Some(inv) = norm.inv() else {
        return Err(GroupError::ZeroRoot);
    };
    let two_over = F::from_i64(2) * inv;
    let mut m = Matrix::<F>::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)].clone() - two_over.clone() * &alpha[i] * &alpha[j];
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn ints<F: Field>(v: &[i64]) -> Vec<F> {
    v.iter().map(|&x| F::from_i64(x)).collect()
}

fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

fn add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

fn cross<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    vec![
        a[1].clone() * &b[2] - a[2].clone() * &b[1],
        a[2].clone() * &b[0] - a[0].clone() * &b[2],
        a[0].clone() * &b[1] - a[1].clone() * &b[0],
    ]
}

/// Golden ratio and its inverse, when the field has sqrt5.
fn golden<F: Field>() -> Option<(F, F)> {
    let s5 = F::sqrt5()?;
    let half = F::from_ratio(1, 2);
    let tau = half.clone() + s5 * &half;
    let tau_inv = tau.clone() - F::one();
    Some((tau, tau_inv))
}

fn h3_simple<F: Field>(tau: &F, tau_inv: &F) -> Vec<Vec<F>> {
    vec![
        ints(&[0, 2, 0]),
        vec![tau_inv.clone(), -tau.clone(), -F::one()],
        ints(&[0, 0, 2]),
    ]
}

struct Model<F> {
    ambient: usize,
    simple: Vec<Vec<F>>,
    complement: Vec<Vec<F>>,
}

fn model<F: Field>(t: GroupType) -> Result<Model<F>, GroupError> {
    let plain = |ambient, simple| Model {
        ambient,
        simple,
        complement: Vec::new(),
    };
    let chain = |n: usize| -> Vec<Vec<F>> {
        (0..n.saturating_sub(1))
            .map(|i| sub(&unit(n, i), &unit(n, i + 1)))
            .collect()
    };
    let no_sqrt5 = |hint| GroupError::FieldUnsupported {
        group: t,
        field: F::KIND,
        hint,
    };
    Ok(match t {
        GroupType::A(n) => {
            // permutation model on the sum-zero hyperplane of R^{n+1}
            let mut simple = chain(n + 1);
            simple.truncate(n);
            Model {
                ambient: n + 1,
                simple,
                complement: vec![vec![F::one(); n + 1]],
            }
        }
        GroupType::B(n) => {
            let mut simple = chain(n);
            simple.push(unit(n, n - 1));
            plain(n, simple)
        }
        GroupType::D(n) => {
            let mut simple = chain(n);
            simple.push(add(&unit(n, n - 2), &unit(n, n - 1)));
            plain(n, simple)
        }
        GroupType::I2(3) => Model {
            ambient: 3,
            simple: vec![ints(&[1, -1, 0]), ints(&[0, 1, -1])],
            complement: vec![ints(&[1, 1, 1])],
        },
        GroupType::I2(4) => plain(2, vec![ints(&[1, -1]), ints(&[0, 1])]),
        GroupType::I2(6) => Model {
            ambient: 3,
            simple: vec![ints(&[1, -1, 0]), ints(&[-2, 1, 1])],
            complement: vec![ints(&[1, 1, 1])],
        },
        GroupType::I2(5) if F::sqrt5().is_some() => {
            // the parabolic I2(5) inside the H3 model
            let (tau, tau_inv) = golden::<F>().expect("sqrt5");
            let h3 = h3_simple(&tau, &tau_inv);
            let normal = cross(&h3[0], &h3[1]);
            Model {
                ambient: 3,
                simple: vec![h3[0].clone(), h3[1].clone()],
                complement: vec![normal],
            }
        }
        GroupType::I2(m) => {
            let angle = std::f64::consts::PI / m as f64;
            let (Some(s), Some(c)) = (F::from_f64(angle.sin()), F::from_f64(angle.cos())) else {
                return Err(no_sqrt5(" (use --field float)"));
            };
            // mirrors are the lines at angles k*pi/m
            plain(2, vec![ints(&[0, 1]), vec![s, -c]])
        }
        GroupType::H3 => {
            let (tau, tau_inv) = golden::<F>().ok_or_else(|| no_sqrt5(" (H-types need Q(sqrt5))"))?;
            plain(3, h3_simple(&tau, &tau_inv))
        }
        GroupType::H4 => {
            let (tau, tau_inv) = golden::<F>().ok_or_else(|| no_sqrt5(" (H-types need Q(sqrt5))"))?;
            plain(
                4,
                vec![
                    ints(&[0, 0, 0, 2]),
                    vec![F::zero(), tau_inv.clone(), -F::one(), -tau.clone()],
                    ints(&[0, 0, 2, 0]),
                    vec![tau_inv, -tau, -F::one(), F::zero()],
                ],
            )
        }
        GroupType::F4 => {
            let half = F::from_ratio(1, 2);
            plain(
                4,
                vec![
                    ints(&[0, 1, -1, 0]),
                    ints(&[0, 0, 1, -1]),
                    ints(&[0, 0, 0, 1]),
                    vec![half.clone(), -half.clone(), -half.clone(), -half],
                ],
            )
        }
        GroupType::E(6) => {
            let h = F::from_ratio(1, 2);
            let mut a1 = vec![-h.clone(); 8];
            a1[0] = h.clone();
            a1[7] = h;
            Model {
                ambient: 8,
                simple: vec![
                    a1,
                    ints(&[1, 1, 0, 0, 0, 0, 0, 0]),
                    ints(&[-1, 1, 0, 0, 0, 0, 0, 0]),
                    ints(&[0, -1, 1, 0, 0, 0, 0, 0]),
                    ints(&[0, 0, -1, 1, 0, 0, 0, 0]),
                    ints(&[0, 0, 0, -1, 1, 0, 0, 0]),
                ],
                complement: vec![ints(&[0, 0, 0, 0, 0, 1, -1, 0]), ints(&[0, 0, 0, 0, 0, 0, 1, 1])],
            }
        }
        GroupType::E(_) => {
            t.validate()?;
            unreachable!("validate rejects E7 and E8")
        }
    })
}

impl<F: Field> RootSystem<F> {
    /// Build the root system of `t`: the simple roots come from the model,
    /// everything else from closure under the simple reflections.
    pub fn build(t: GroupType) -> Result<Self, GroupError> {
        t.validate()?;
        let Model {
            ambient,
            simple,
            complement,
        } = model::<F>(t)?;
        let n = simple.len();
        let gram = Matrix::from_rows(
            simple
                .iter()
                .map(|a| simple.iter().map(|b| dot(a, b)).collect())
                .collect(),
        );
        let gram_inverse = gram.inverse()?;
        let projection = projection_onto_complement_of(ambient, &complement)?;

        let reflections: Vec<Matrix<F>> = simple
            .iter()
            .map(|a| reflection_matrix(a))
            .collect::<Result<_, _>>()?;

        // closure of the simple roots under the simple reflections
        let key = |v: &[F]| v.iter().map(F::key).collect::<Vec<_>>();
        let mut seen: FxHashSet<Vec<F::Key>> = simple.iter().map(|v| key(v)).collect();
        let mut all: Vec<Vec<F>> = simple.clone();
        let mut i = 0;
        while i < all.len() {
            for s in &reflections {
                let image = s.mul_vec(&all[i]);
                if seen.insert(key(&image)) {
                    all.push(image);
                }
            }
            i += 1;
            if all.len() > 4 * t.num_positive_roots() + 4 {
                return Err(GroupError::Inconsistent(format!("{t}: root closure does not terminate")));
            }
        }

        let mut rs = RootSystem {
            group_type: t,
            ambient,
            simple_roots: simple,
            positive_roots: Vec::new(),
            complement,
            projection,
            gram_inverse,
        };
        for root in all {
            let c = rs.simple_coordinates(&root);
            let nonneg = c.iter().all(|x| x.is_positive() || x.is_negligible());
            let nonpos = c.iter().all(|x| !x.is_positive() || x.is_negligible());
            if !(nonneg || nonpos) {
                return Err(GroupError::Inconsistent(format!(
                    "{t}: root {root:?} has mixed-sign simple coordinates"
                )));
            }
            if nonneg {
                rs.positive_roots.push(root);
            }
        }
        if rs.positive_roots.len() != t.num_positive_roots() || rs.simple_roots.len() != t.rank() {
            return Err(GroupError::Inconsistent(format!(
                "{t}: found {} positive roots, expected {}",
                rs.positive_roots.len(),
                t.num_positive_roots()
            )));
        }
        debug_assert_eq!(n, t.rank());
        Ok(rs)
    }

    pub fn group_type(&self) -> GroupType {
        self.group_type
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Number of polynomial variables.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn simple_roots(&self) -> &[Vec<F>] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Vec<F>] {
        &self.positive_roots
    }

    pub fn complement(&self) -> &[Vec<F>] {
        &self.complement
    }

    pub fn projection(&self) -> &Matrix<F> {
        &self.projection
    }

    /// Coordinates of `v` in the basis of simple roots (`v` must lie in the
    /// root span).
    pub fn simple_coordinates(&self, v: &[F]) -> Vec<F> {
        let rhs: Vec<F> = self.simple_roots.iter().map(|a| dot(a, v)).collect();
        self.gram_inverse.mul_vec(&rhs)
    }

    /// Fundamental weights: `(w_i, a_j) = delta_ij` inside the root span.
    pub fn fundamental_weights(&self) -> Vec<Vec<F>> {
        (0..self.rank())
            .map(|i| {
                let mut w = vec![F::zero(); self.ambient];
                for (k, a) in self.simple_roots.iter().enumerate() {
                    let c = &self.gram_inverse[(i, k)];
                    for (wj, aj) in w.iter_mut().zip(a) {
                        *wj += &(c.clone() * aj);
                    }
                }
                w
            })
            .collect()
    }

    /// `Δ = prod_{a > 0} L_a` with `L_a(x) = sum_j a_j x_j`.
    pub fn delta(&self) -> Polynomial<F> {
        self.delta_scaled(&vec![F::one(); self.positive_roots.len()])
    }

    /// Δ with each linear form `L_a` multiplied by `scales[i]`.
    pub fn delta_scaled(&self, scales: &[F]) -> Polynomial<F> {
        assert_eq!(scales.len(), self.positive_roots.len());
        let mut acc = Polynomial::one(self.ambient);
        for (root, s) in self.positive_roots.iter().zip(scales) {
            let form: Vec<F> = root.iter().map(|x| x.clone() * s).collect();
            acc = &acc * &Polynomial::linear_form(&form);
        }
        acc
    }

    /// Pull `f` back along the orthogonal projection onto the root span.
    pub fn restrict(&self, f: &Polynomial<F>) -> Polynomial<F> {
        if self.complement.is_empty() {
            return f.clone();
        }
        f.substitute_linear(&self.projection).expect("matching dimension")
    }

    /// Whether `f` is a polynomial on the root span, i.e. constant along the
    /// complement.
    pub fn is_on_root_span(&self, f: &Polynomial<F>) -> bool {
        let reference = f.max_abs_coeff();
        self.complement.iter().all(|k| {
            let mut d = Polynomial::zero(self.ambient);
            for (j, kj) in k.iter().enumerate() {
                if !kj.is_zero() {
                    d = &d + &f.partial(j).expect("index").scale(kj);
                }
            }
            d.is_negligible_against(reference)
        })
    }
}

fn projection_onto_complement_of<F: Field>(n: usize, complement: &[Vec<F>]) -> Result<Matrix<F>, GroupError> {
    let id = Matrix::identity(n);
    if complement.is_empty() {
        return Ok(id);
    }
    // P = I - K^T (K K^T)^{-1} K
    let k = Matrix::from_rows(complement.to_vec());
    let kkt = k.mul(&k.transpose())?;
    let correction = k.transpose().mul(&kkt.inverse()?)?.mul(&k)?;
    let mut p = id;
    for i in 0..n {
        for j in 0..n {
            let v = p[(i, j)].clone() - &correction[(i, j)];
            p[(i, j)] = v;
        }
    }
    Ok(p)
}
