use rayon::prelude::*;
use rustc_hash::FxHashSet;

use super::{reflection_matrix, GroupError, RootSystem};
use crate::linalg::{dot, Matrix};
use crate::polys::Polynomial;
use crate::scalars::Field;

/// An orthogonal matrix together with its determinant (always ±1).
#[derive(Clone, Debug)]
pub struct GroupElement<F> {
    pub matrix: Matrix<F>,
    pub det: i8,
}

impl<F: Field> GroupElement<F> {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            matrix: Matrix::identity(n),
            det: 1,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        GroupElement {
            matrix: self.matrix.mul(&other.matrix).expect("square matrices of equal size"),
            det: self.det * other.det,
        }
    }

    /// `w·f = f(w⁻¹ x)`; for orthogonal `w` this is `f(wᵀ x)`.
    pub fn act(&self, f: &Polynomial<F>) -> Polynomial<F> {
        f.substitute_linear(&self.matrix.transpose())
            .expect("element acts on the polynomial ring of its model")
    }

    fn key(&self) -> Vec<F::Key> {
        let n = self.matrix.rows();
        (0..n)
            .flat_map(|i| self.matrix.row(i).iter().map(F::key).collect::<Vec<_>>())
            .collect()
    }
}

/// A finite reflection group generated by the simple reflections of a root
/// system.
#[derive(Clone, Debug)]
pub struct ReflectionGroup<F> {
    roots: RootSystem<F>,
    generators: Vec<GroupElement<F>>,
    elements: Option<Vec<GroupElement<F>>>,
}

impl<F: Field> ReflectionGroup<F> {
    pub fn new(roots: RootSystem<F>) -> Result<Self, GroupError> {
        let generators = roots
            .simple_roots()
            .iter()
            .map(|a| {
                Ok(GroupElement {
                    matrix: reflection_matrix(a)?,
                    det: -1,
                })
            })
            .collect::<Result<_, GroupError>>()?;
        Ok(ReflectionGroup {
            roots,
            generators,
            elements: None,
        })
    }

    pub fn root_system(&self) -> &RootSystem<F> {
        &self.roots
    }

    pub fn generators(&self) -> &[GroupElement<F>] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.roots.ambient_dim()
    }

    /// Product of generators, left to right.
    pub fn word(&self, letters: &[usize]) -> GroupElement<F> {
        letters
            .iter()
            .fold(GroupElement::identity(self.nvars()), |acc, &i| {
                acc.compose(&self.generators[i % self.generators.len()])
            })
    }

    /// Breadth-first closure of the generators. Refuses up front when the
    /// classical order exceeds `cap`.
    pub fn enumerate(&mut self, cap: u128) -> Result<&[GroupElement<F>], GroupError> {
        if self.elements.is_none() {
            let t = self.roots.group_type();
            let order = t.order();
            if order > cap {
                return Err(GroupError::OrderCap { group: t, order, cap });
            }
            let id = GroupElement::identity(self.nvars());
            let mut seen: FxHashSet<Vec<F::Key>> = FxHashSet::default();
            seen.insert(id.key());
            let mut all = vec![id];
            let mut i = 0;
            while i < all.len() {
                for g in &self.generators {
                    let next = all[i].compose(g);
                    if seen.insert(next.key()) {
                        all.push(next);
                    }
                }
                i += 1;
                if all.len() as u128 > order {
                    break;
                }
            }
            if all.len() as u128 != order {
                return Err(GroupError::Inconsistent(format!(
                    "{t}: closure produced {} elements, expected {order}",
                    all.len()
                )));
            }
            self.elements = Some(all);
        }
        Ok(self.elements.as_deref().expect("just enumerated"))
    }

    pub fn elements(&self) -> Result<&[GroupElement<F>], GroupError> {
        self.elements.as_deref().ok_or(GroupError::NotEnumerated)
    }

    /// `(1/|W|) Σ_w w·f`.
    pub fn reynolds(&self, f: &Polynomial<F>) -> Result<Polynomial<F>, GroupError> {
        let elements = self.elements()?;
        let n = self.nvars();
        let sum = elements
            .par_iter()
            .map(|w| w.act(f))
            .reduce(|| Polynomial::zero(n), |a, b| &a + &b);
        let inv = F::from_i64(elements.len() as i64).inv().expect("nonempty group");
        Ok(sum.scale(&inv))
    }

    /// Orbit of a vector under the group, by closure under the generators.
    pub fn orbit(&self, v: &[F]) -> Vec<Vec<F>> {
        let key = |v: &[F]| v.iter().map(F::key).collect::<Vec<_>>();
        let mut seen: FxHashSet<Vec<F::Key>> = FxHashSet::default();
        seen.insert(key(v));
        let mut all = vec![v.to_vec()];
        let mut i = 0;
        while i < all.len() {
            for g in &self.generators {
                let image = g.matrix.mul_vec(&all[i]);
                if seen.insert(key(&image)) {
                    all.push(image);
                }
            }
            i += 1;
        }
        all
    }

    /// `(1/|Wv|) Σ_{u ∈ Wv} (u·x)^k`, which equals the Reynolds average of
    /// `(v·x)^k` without enumerating the group.
    pub fn orbit_power_sum(&self, v: &[F], k: u32) -> Polynomial<F> {
        let orbit = self.orbit(v);
        let n = self.nvars();
        let sum = orbit
            .par_iter()
            .map(|u| Polynomial::linear_form(u).pow(k))
            .reduce(|| Polynomial::zero(n), |a, b| &a + &b);
        let inv = F::from_i64(orbit.len() as i64).inv().expect("nonempty orbit");
        sum.scale(&inv).pruned()
    }

    /// Whether every generator fixes `f`.
    pub fn is_invariant(&self, f: &Polynomial<F>) -> bool {
        self.generators.iter().all(|g| g.act(f).same_as(f))
    }

    /// Whether every generator maps `f` to `-f`.
    pub fn is_antiinvariant(&self, f: &Polynomial<F>) -> bool {
        self.generators.iter().all(|g| g.act(f).same_as(&-f))
    }

    /// Whether `v` is fixed by the group (lies in the complement of the
    /// root span).
    pub fn fixes(&self, v: &[F]) -> bool {
        self.roots.simple_roots().iter().all(|a| dot(a, v).is_negligible())
    }
}
