use serde::{Deserialize, Serialize};

use super::poly::{DiffPoly, Jet};

/// `∫ density dx` over the circle, defined modulo total derivatives and
/// constants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalFunctional {
    pub density: DiffPoly,
}

impl LocalFunctional {
    pub fn new(density: DiffPoly) -> Self {
        LocalFunctional { density }
    }

    /// Euler operator `E_i = Σ_k (-∂)^k ∂/∂u^{i,(k)}`.
    pub fn variational_derivative(&self, field: usize) -> DiffPoly {
        variational_derivative(&self.density, field)
    }

    /// Gradient over `fields` coordinate fields.
    pub fn gradient(&self, fields: usize) -> Vec<DiffPoly> {
        (0..fields).map(|i| self.variational_derivative(i)).collect()
    }

    /// Whether the densities differ by a total derivative plus a constant.
    pub fn functional_eq(&self, other: &LocalFunctional) -> bool {
        functional_equal(&self.density, &other.density)
    }

    /// Zero as a functional.
    pub fn is_trivial(&self) -> bool {
        let fields = self.density.field_bound();
        (0..fields).all(|i| self.variational_derivative(i).is_zero())
    }
}

pub fn variational_derivative(density: &DiffPoly, field: usize) -> DiffPoly {
    let Some(top) = density.max_order(field) else {
        return DiffPoly::zero();
    };
    let mut out = DiffPoly::zero();
    for k in (0..=top).rev() {
        // Horner in -∂: out = ∂f/∂u^{(k)} - ∂(out)
        out = &density.partial(Jet::new(field, k)) - &out.total_derivative();
    }
    out
}

/// Equality of `∫ f` and `∫ g`.
pub fn functional_equal(f: &DiffPoly, g: &DiffPoly) -> bool {
    LocalFunctional::new(f - g).is_trivial()
}
