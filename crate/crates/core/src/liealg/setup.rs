use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::{q, Q};

use super::{verify_good_grading, Grading, LieAlgebra, SL2Triple};

/// Everything a user chooses; [`derive_subspaces`] turns it into a
/// [`GradedSetup`].
#[derive(Clone, Debug)]
pub struct SetupInputs {
    pub algebra: LieAlgebra,
    pub triple: SL2Triple,
    pub grading: Grading,
    /// Vectors spanning the isotropic subspace `l` of `g_-1`.
    pub isotropic: Vec<Vector>,
    pub a: Vector,
    /// Basis `ξ_1..ξ_m` of `g_f` fixing the slice coordinates. Defaults to
    /// the echelon basis of `ker ad f`, which depends only on the triple.
    pub slice_basis: Option<Vec<Vector>>,
    /// Basis of `[g_-, e]` completing the slice basis to a basis of `b_-`.
    pub transverse_basis: Option<Vec<Vector>>,
    /// Basis `ξ_{m+1}..ξ_n` of `[e, g]`, fixing the constraint coordinates.
    pub image_basis: Option<Vec<Vector>>,
}

impl SetupInputs {
    pub fn new(algebra: LieAlgebra, triple: SL2Triple, grading: Grading, a: Vector) -> Self {
        SetupInputs {
            algebra,
            triple,
            grading,
            isotropic: Vec::new(),
            a,
            slice_basis: None,
            transverse_basis: None,
            image_basis: None,
        }
    }

    pub fn with_isotropic(mut self, iso: Vec<Vector>) -> Self {
        self.isotropic = iso;
        self
    }

    pub fn with_slice_basis(mut self, basis: Vec<Vector>) -> Self {
        self.slice_basis = Some(basis);
        self
    }

    pub fn with_transverse_basis(mut self, basis: Vec<Vector>) -> Self {
        self.transverse_basis = Some(basis);
        self
    }

    pub fn with_image_basis(mut self, basis: Vec<Vector>) -> Self {
        self.image_basis = Some(basis);
        self
    }
}

/// A validated reduction setup. Immutable; all basis-dependent data is
/// computed once at construction.
#[derive(Clone, Debug)]
pub struct GradedSetup {
    algebra: LieAlgebra,
    triple: SL2Triple,
    grading: Grading,
    isotropic: Vec<Vector>,
    a: Vector,
    ell_prime: Vec<Vector>,
    n_minus: Vec<Vector>,
    g_minus: Vec<Vector>,
    b_minus: Vec<Vector>,
    ker_e: Vec<Vector>,
    /// `ξ_1..ξ_n`: slice basis of `g_f`, then a basis of `[e, g]`.
    xi: Vec<Vector>,
    /// `ξ^1..ξ^n` with `<ξ_I|ξ^J> = δ`.
    xi_dual: Vec<Vector>,
    m: usize,
    ge: Vec<Vector>,
    s_basis: Vec<Vector>,
    s_dual: Vec<Vector>,
}

impl GradedSetup {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }
    pub fn triple(&self) -> &SL2Triple {
        &self.triple
    }
    pub fn grading(&self) -> &Grading {
        &self.grading
    }
    pub fn isotropic(&self) -> &[Vector] {
        &self.isotropic
    }
    pub fn a(&self) -> &Vector {
        &self.a
    }
    pub fn ell_prime(&self) -> &[Vector] {
        &self.ell_prime
    }
    pub fn n_minus(&self) -> &[Vector] {
        &self.n_minus
    }
    pub fn g_minus(&self) -> &[Vector] {
        &self.g_minus
    }
    pub fn b_minus(&self) -> &[Vector] {
        &self.b_minus
    }
    pub fn ker_e(&self) -> &[Vector] {
        &self.ker_e
    }
    /// Basis of `g_f` defining the slice coordinates.
    pub fn g_f(&self) -> &[Vector] {
        &self.xi[..self.m]
    }
    /// `dim g_f`, the number of slice coordinates.
    pub fn slice_dim(&self) -> usize {
        self.m
    }
    pub fn xi(&self) -> &[Vector] {
        &self.xi
    }
    pub fn xi_dual(&self) -> &[Vector] {
        &self.xi_dual
    }
    /// Basis of `[g_-, e]`.
    pub fn ge(&self) -> &[Vector] {
        &self.ge
    }
    /// Basis of `b_-`: slice basis followed by the `[g_-, e]` basis. The
    /// S-coordinates are coefficients in this basis.
    pub fn s_basis(&self) -> &[Vector] {
        &self.s_basis
    }
    /// Dual vectors `β^k` with `<s_l|β^k> = δ`, chosen in a fixed complement
    /// of `n_-`.
    pub fn s_dual(&self) -> &[Vector] {
        &self.s_dual
    }

    /// Symplectic form `<e|[x,y]>` on `g_-1`.
    pub fn omega(&self, x: &[Q], y: &[Q]) -> Q {
        self.algebra.form(&self.triple.e, &self.algebra.bracket(x, y))
    }

    /// Closed-form check that `b_- = [g_-, e] ⊕ g_f`.
    pub fn check_slodowy_decomposition(&self) -> bool {
        let n = self.algebra.dim();
        let mut union = self.ge.clone();
        union.extend(self.g_f().iter().cloned());
        linalg::rank_of(n, &union) == self.ge.len() + self.m
            && union.len() == self.b_minus.len()
            && union.iter().all(|v| linalg::in_span(n, &self.b_minus, v))
    }
}

fn all_pairs_close(g: &LieAlgebra, basis: &[Vector]) -> bool {
    let n = g.dim();
    basis.iter().all(|x| {
        basis
            .iter()
            .all(|y| linalg::in_span(n, basis, &g.bracket(x, y)))
    })
}

fn is_basis_of(n: usize, candidate: &[Vector], space: &[Vector]) -> bool {
    candidate.len() == space.len()
        && linalg::rank_of(n, candidate) == candidate.len()
        && candidate.iter().all(|v| linalg::in_span(n, space, v))
}

/// Dual basis of `basis` inside the span of `complement`: returns `β^k` with
/// `<basis_l|β^k> = δ_lk`.
fn dual_in(g: &LieAlgebra, basis: &[Vector], complement: &[Vector]) -> Result<Vec<Vector>> {
    let n = g.dim();
    let k = basis.len();
    let mut gram = Matrix::zeros(k, k);
    for (i, b) in basis.iter().enumerate() {
        for (j, c) in complement.iter().enumerate() {
            gram[(i, j)] = g.form(b, c);
        }
    }
    let inv = gram
        .inverse()
        .map_err(|_| Error::DegenerateForm("pairing with complement is degenerate".into()))?;
    let cm = Matrix::from_cols(n, complement);
    let duals = cm.mul(&inv);
    Ok((0..k).map(|j| duals.col(j)).collect())
}

/// Validates the inputs and derives `l'`, `n_-`, `g_-`, `b_-`, `g_f` and
/// the dual bases. Errors name the first violated condition.
pub fn derive_subspaces(inputs: SetupInputs) -> Result<GradedSetup> {
    let SetupInputs {
        algebra: g,
        triple,
        grading,
        isotropic,
        a,
        slice_basis,
        transverse_basis,
        image_basis,
    } = inputs;
    let n = g.dim();
    g.validate()?;
    triple.validate(&g)?;
    if grading.deg.len() != n {
        return Err(Error::InvalidGrading(format!(
            "grading has {} degrees for a {n}-dimensional algebra",
            grading.deg.len()
        )));
    }
    let report = verify_good_grading(&g, &triple, &grading);
    if let Some(why) = report.first_failure() {
        return Err(Error::InvalidGrading(why));
    }
    if a.len() != n || isotropic.iter().any(|v| v.len() != n) {
        return Err(Error::ShapeMismatch("element has wrong length".into()));
    }

    let omega = |x: &[Q], y: &[Q]| g.form(&triple.e, &g.bracket(x, y));
    for v in &isotropic {
        if !grading.in_piece(v, -1) {
            return Err(Error::NotIsotropic(format!(
                "{} is not in g_-1",
                g.format_element(v)
            )));
        }
    }
    for x in &isotropic {
        for y in &isotropic {
            if omega(x, y) != q(0) {
                return Err(Error::NotIsotropic(format!(
                    "<e|[{}, {}]> != 0",
                    g.format_element(x),
                    g.format_element(y)
                )));
            }
        }
    }
    let ell = linalg::independent_subset(n, &isotropic);

    let g_m1: Vec<Vector> = grading.piece(-1).iter().map(|&i| g.basis_vector(i)).collect();
    let ell_prime: Vec<Vector> = if ell.is_empty() {
        g_m1.clone()
    } else if g_m1.is_empty() {
        Vec::new()
    } else {
        let mut cond = Matrix::zeros(ell.len(), g_m1.len());
        for (r, l) in ell.iter().enumerate() {
            for (c, b) in g_m1.iter().enumerate() {
                cond[(r, c)] = omega(b, l);
            }
        }
        let basis = Matrix::from_cols(n, &g_m1);
        cond.nullspace().iter().map(|x| basis.mul_vec(x)).collect()
    };
    let low: Vec<Vector> = (0..n)
        .filter(|&i| grading.deg[i] <= -2)
        .map(|i| g.basis_vector(i))
        .collect();
    let n_minus: Vec<Vector> = ell_prime.iter().chain(&low).cloned().collect();
    let g_minus: Vec<Vector> = ell.iter().chain(&low).cloned().collect();
    if !all_pairs_close(&g, &n_minus) {
        return Err(Error::SetupInvariant("n_- is not a subalgebra".into()));
    }
    if !all_pairs_close(&g, &g_minus) {
        return Err(Error::SetupInvariant("g_- is not a subalgebra".into()));
    }
    for x in &n_minus {
        if !linalg::is_zero_vec(&g.bracket(&a, x)) {
            return Err(Error::ConditionOnA(format!(
                "n_- is not contained in ker ad a: [a, {}] != 0",
                g.format_element(x)
            )));
        }
    }

    let b_minus = if n_minus.is_empty() {
        (0..n).map(|i| g.basis_vector(i)).collect()
    } else {
        let rows: Vec<Vector> = n_minus.iter().map(|v| g.form_matrix().mul_vec(v)).collect();
        Matrix::from_rows(&rows).nullspace()
    };

    let g_f_default = g.kernel_of_ad(&triple.f);
    let ker_e = g.kernel_of_ad(&triple.e);
    if g_f_default.len() != ker_e.len() {
        return Err(Error::SetupInvariant("dim g_f != dim ker ad e".into()));
    }
    let slice = match slice_basis {
        Some(b) => {
            if !is_basis_of(n, &b, &g_f_default) {
                return Err(Error::SetupInvariant("slice basis is not a basis of g_f".into()));
            }
            b
        }
        None => g_f_default,
    };
    let m = slice.len();

    let ge_raw: Vec<Vector> = g_minus.iter().map(|x| g.bracket(x, &triple.e)).collect();
    let ge_span = linalg::independent_subset(n, &ge_raw);
    let ge = match transverse_basis {
        Some(b) => {
            if !is_basis_of(n, &b, &ge_span) {
                return Err(Error::SetupInvariant(
                    "transverse basis is not a basis of [g_-, e]".into(),
                ));
            }
            b
        }
        None => ge_span,
    };

    let im_e = linalg::independent_subset(
        n,
        &(0..n)
            .map(|j| g.bracket(&triple.e, &g.basis_vector(j)))
            .collect::<Vec<_>>(),
    );
    let im_e = match image_basis {
        Some(b) => {
            if !is_basis_of(n, &b, &im_e) {
                return Err(Error::SetupInvariant("image basis is not a basis of [e, g]".into()));
            }
            b
        }
        None => im_e,
    };
    let mut xi = slice.clone();
    xi.extend(im_e);
    if linalg::rank_of(n, &xi) != n {
        return Err(Error::SetupInvariant("g_f and [e, g] do not span g".into()));
    }
    let xi_dual = dual_in(&g, &xi, &(0..n).map(|i| g.basis_vector(i)).collect::<Vec<_>>())?;

    let mut s_basis = slice.clone();
    s_basis.extend(ge.iter().cloned());
    // complement of n_- spanned by unit vectors, chosen greedily
    let mut complement = Vec::new();
    let mut span = n_minus.clone();
    for i in 0..n {
        let u = g.basis_vector(i);
        let mut trial = span.clone();
        trial.push(u.clone());
        if linalg::rank_of(n, &trial) == trial.len() {
            span = trial;
            complement.push(u);
        }
    }
    let s_dual = dual_in(&g, &s_basis, &complement)?;

    let setup = GradedSetup {
        algebra: g,
        triple,
        grading,
        isotropic: ell,
        a,
        ell_prime,
        n_minus,
        g_minus,
        b_minus,
        ker_e,
        xi,
        xi_dual,
        m,
        ge,
        s_basis,
        s_dual,
    };
    if !setup.check_slodowy_decomposition() {
        return Err(Error::SetupInvariant("b_- != [g_-, e] ⊕ g_f".into()));
    }
    Ok(setup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_sl_n, dynkin_grading, sl2_from_partition};

    fn sl3_min(a: &str, iso: &[&str]) -> Result<GradedSetup> {
        let g = build_sl_n(3).unwrap();
        let t = sl2_from_partition(&g, 3, &[2, 1]).unwrap();
        let gr = dynkin_grading(&g, &t.h).unwrap();
        let a = g.parse_element(a).unwrap();
        let iso = iso.iter().map(|s| g.parse_element(s).unwrap()).collect();
        derive_subspaces(SetupInputs::new(g, t, gr, a).with_isotropic(iso))
    }

    #[test]
    fn accepts_reference_isotropic_choice() {
        let s = sl3_min("e21+e32", &["e21+e32"]).unwrap();
        assert_eq!(s.ell_prime().len(), 1);
        assert_eq!(s.n_minus().len(), 2);
        assert_eq!(s.b_minus().len(), 6);
        assert_eq!(s.slice_dim(), 4);
        assert!(s.check_slodowy_decomposition());
    }

    #[test]
    fn accepts_lowest_root_a() {
        assert!(sl3_min("e31", &["e21+e32"]).is_ok());
        assert!(sl3_min("e31", &[]).is_ok());
    }

    #[test]
    fn rejects_a_not_centralizing() {
        let r = sl3_min("e21", &[]);
        assert!(matches!(r, Err(Error::ConditionOnA(_))), "{r:?}");
    }

    #[test]
    fn rejects_mismatched_sign_choice() {
        assert!(matches!(
            sl3_min("e21-e32", &["e21+e32"]),
            Err(Error::ConditionOnA(_))
        ));
        assert!(sl3_min("e21-e32", &["e21-e32"]).is_ok());
    }

    #[test]
    fn rejects_non_isotropic() {
        let r = sl3_min("e31", &["e21", "e32"]);
        assert!(matches!(r, Err(Error::NotIsotropic(_))), "{r:?}");
        let r = sl3_min("e31", &["e31"]);
        assert!(matches!(r, Err(Error::NotIsotropic(_))), "{r:?}");
    }

    #[test]
    fn dual_bases() {
        let s = sl3_min("e31", &["e21+e32"]).unwrap();
        let g = s.algebra();
        for (i, x) in s.xi().iter().enumerate() {
            for (j, y) in s.xi_dual().iter().enumerate() {
                assert_eq!(g.form(x, y), q(if i == j { 1 } else { 0 }));
            }
        }
        // duals of the slice basis span ker ad e
        let n = g.dim();
        let duals = &s.xi_dual()[..s.slice_dim()];
        assert_eq!(linalg::rank_of(n, duals), s.ker_e().len());
        assert!(duals.iter().all(|v| linalg::in_span(n, s.ker_e(), v)));
        for (k, b) in s.s_basis().iter().enumerate() {
            for (l, d) in s.s_dual().iter().enumerate() {
                assert_eq!(g.form(b, d), q(if k == l { 1 } else { 0 }));
            }
        }
    }
}
