use super::polynomial::Polynomial;
use crate::scalars::Field;

/// Element `sum_j g_j dx_j` of S ⊗ V*; component `j` is the coefficient of
/// `dx_j`.
#[derive(Clone)]
pub struct OneForm<F> {
    components: Vec<Polynomial<F>>,
}

impl<F: Field> std::fmt::Debug for OneForm<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

impl<F: Field> PartialEq for OneForm<F> {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl<F: Field> OneForm<F> {
    pub fn zero(nvars: usize) -> Self {
        OneForm {
            components: (0..nvars).map(|_| Polynomial::zero(nvars)).collect(),
        }
    }

    /// Panics unless there is one component per variable.
    pub fn new(components: Vec<Polynomial<F>>) -> Self {
        let n = components.len();
        assert!(components.iter().all(|c| c.nvars() == n), "one component per variable");
        OneForm { components }
    }

    /// `dh = sum_j (∂_j h) dx_j`.
    pub fn differential(h: &Polynomial<F>) -> Self {
        OneForm {
            components: (0..h.nvars())
                .map(|j| h.partial(j).expect("index in range"))
                .collect(),
        }
    }

    pub fn components(&self) -> &[Polynomial<F>] {
        &self.components
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Common degree of all nonzero components.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self
            .components
            .iter()
            .filter(|c| !c.is_zero())
            .map(Polynomial::homogeneous_degree);
        let first = degs.next()??;
        degs.all(|d| d == Some(first)).then_some(first)
    }

    /// `(w1, w2) = sum_j <g_j, h_j>`.
    pub fn inner(&self, other: &Self) -> F {
        assert_eq!(self.nvars(), other.nvars());
        let mut acc = F::zero();
        for (a, b) in self.components.iter().zip(&other.components) {
            acc += &a.apolar_inner(b);
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&Polynomial<F>) -> Polynomial<F>) -> Self {
        OneForm {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|p| p.scale(c))
    }
}
