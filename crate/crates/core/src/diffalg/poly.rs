use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::rational::{binomial, q, Q};

/// The jet variable `u^{field,(order)}` (0-based field index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub field: u32,
    pub order: u32,
}

impl Jet {
    pub fn new(field: usize, order: usize) -> Self {
        Jet {
            field: field as u32,
            order: order as u32,
        }
    }
}

/// Product of jet variables with the formal parameters `λ^lam ε^eps`.
/// `vars` is sorted by jet with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub(crate) vars: Vec<(Jet, u32)>,
    pub(crate) lam: u32,
    pub(crate) eps: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_parts(mut vars: Vec<(Jet, u32)>, lam: u32, eps: u32) -> Self {
        vars.retain(|(_, e)| *e > 0);
        vars.sort();
        let mut merged: Vec<(Jet, u32)> = Vec::with_capacity(vars.len());
        for (j, e) in vars {
            match merged.last_mut() {
                Some((lj, le)) if *lj == j => *le += e,
                _ => merged.push((j, e)),
            }
        }
        Monomial {
            vars: merged,
            lam,
            eps,
        }
    }

    pub fn vars(&self) -> &[(Jet, u32)] {
        &self.vars
    }

    pub fn lam(&self) -> u32 {
        self.lam
    }

    pub fn eps(&self) -> u32 {
        self.eps
    }

    /// Polynomial degree in the jet variables.
    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|(_, e)| e).sum()
    }

    /// Total number of x-derivatives, `Σ order · exponent`.
    pub fn weight(&self) -> u32 {
        self.vars.iter().map(|(j, e)| j.order * e).sum()
    }

    pub fn exponent(&self, jet: Jet) -> u32 {
        self.vars
            .binary_search_by(|(j, _)| j.cmp(&jet))
            .map(|i| self.vars[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut k) = (0, 0);
        while i < self.vars.len() && k < other.vars.len() {
            match self.vars[i].0.cmp(&other.vars[k].0) {
                Ordering::Less => {
                    vars.push(self.vars[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    vars.push(other.vars[k]);
                    k += 1;
                }
                Ordering::Equal => {
                    vars.push((self.vars[i].0, self.vars[i].1 + other.vars[k].1));
                    i += 1;
                    k += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[k..]);
        Monomial {
            vars,
            lam: self.lam + other.lam,
            eps: self.eps + other.eps,
        }
    }

    /// Lower the exponent of `jet` by one; caller guarantees it is present.
    fn without_one(&self, jet: Jet) -> Monomial {
        let mut vars = self.vars.clone();
        let i = vars.binary_search_by(|(j, _)| j.cmp(&jet)).expect("jet present");
        if vars[i].1 == 1 {
            vars.remove(i);
        } else {
            vars[i].1 -= 1;
        }
        Monomial {
            vars,
            lam: self.lam,
            eps: self.eps,
        }
    }

    fn with_one(&self, jet: Jet) -> Monomial {
        self.mul(&Monomial {
            vars: vec![(jet, 1)],
            lam: 0,
            eps: 0,
        })
    }
}

// Graded by degree in the jet variables, then lexicographic in
// (field, order), then by the parameter exponents.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.vars.cmp(&other.vars))
            .then_with(|| self.lam.cmp(&other.lam))
            .then_with(|| self.eps.cmp(&other.eps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A differential polynomial with exact rational coefficients, in jet
/// variables and the central parameters `λ`, `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    /// The jet variable `u^{field,(order)}`.
    pub fn var(field: usize, order: usize) -> Self {
        Self::term(Q::one(), Monomial::from_parts(vec![(Jet::new(field, order), 1)], 0, 0))
    }

    pub fn lam() -> Self {
        Self::term(Q::one(), Monomial::from_parts(Vec::new(), 1, 0))
    }

    pub fn eps() -> Self {
        Self::term(Q::one(), Monomial::from_parts(Vec::new(), 0, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term when the polynomial is a pure rational number.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (*m == Monomial::one()).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.mul(mono), x * c))
                .collect(),
        }
    }

    /// Total x-derivative: `u^{i,(k)} -> u^{i,(k+1)}`, parameters constant.
    pub fn total_derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for &(jet, e) in &m.vars {
                let up = Jet {
                    field: jet.field,
                    order: jet.order + 1,
                };
                let mono = m.without_one(jet).with_one(up);
                out.add_term(mono, c * q(e as i64));
            }
        }
        out
    }

    pub fn derivative_n(&self, n: usize) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            if p.is_zero() {
                break;
            }
            p = p.total_derivative();
        }
        p
    }

    /// Partial derivative with respect to one jet variable.
    pub fn partial(&self, jet: Jet) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(jet);
            if e > 0 {
                out.add_term(m.without_one(jet), c * q(e as i64));
            }
        }
        out
    }

    /// Every jet variable that occurs.
    pub fn jets(&self) -> Vec<Jet> {
        let mut js: Vec<Jet> = self
            .terms
            .keys()
            .flat_map(|m| m.vars.iter().map(|(j, _)| *j))
            .collect();
        js.sort();
        js.dedup();
        js
    }

    /// Highest derivative order of `field`, if it occurs.
    pub fn max_order(&self, field: usize) -> Option<usize> {
        self.jets()
            .iter()
            .filter(|j| j.field as usize == field)
            .map(|j| j.order as usize)
            .max()
    }

    /// One more than the largest field index present.
    pub fn field_bound(&self) -> usize {
        self.jets()
            .iter()
            .map(|j| j.field as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn lam_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.lam).max()
    }

    pub fn eps_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.eps).max()
    }

    /// Coefficient of `λ^lam ε^eps`, as a polynomial free of both.
    pub fn coeff(&self, lam: u32, eps: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.lam == lam && m.eps == eps)
                .map(|(m, c)| {
                    (
                        Monomial {
                            vars: m.vars.clone(),
                            lam: 0,
                            eps: 0,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Coefficient of `λ^lam`, keeping `ε`.
    pub fn lam_coeff(&self, lam: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.lam == lam)
                .map(|(m, c)| {
                    (
                        Monomial {
                            vars: m.vars.clone(),
                            lam: 0,
                            eps: m.eps,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Substitutes numbers for `λ` and/or `ε`.
    pub fn eval_params(&self, lam: Option<&Q>, eps: Option<&Q>) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut mono = m.clone();
            if let Some(l) = lam {
                c *= pow(l, m.lam);
                mono.lam = 0;
            }
            if let Some(e) = eps {
                c *= pow(e, m.eps);
                mono.eps = 0;
            }
            out.add_term(mono, c);
        }
        out
    }

    /// Keeps the terms whose monomial satisfies `pred`.
    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renames or kills fields: `map(i) = Some(j)` sends `u^i` to `u^j`,
    /// `None` sets `u^i` and all its derivatives to zero.
    pub fn map_fields(&self, map: impl Fn(usize) -> Option<usize>) -> DiffPoly {
        let mut out = DiffPoly::zero();
        'terms: for (m, c) in &self.terms {
            let mut vars = Vec::with_capacity(m.vars.len());
            for &(j, e) in &m.vars {
                match map(j.field as usize) {
                    Some(f) => vars.push((Jet::new(f, j.order as usize), e)),
                    None => continue 'terms,
                }
            }
            out.add_term(Monomial::from_parts(vars, m.lam, m.eps), c.clone());
        }
        out
    }

    /// Differential substitution: `u^{j,(k)} -> ∂_x^k images[j]`. Fields
    /// without an image are left untouched.
    pub fn substitute(&self, images: &[DiffPoly]) -> DiffPoly {
        let mut cache: BTreeMap<Jet, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::term(
                c.clone(),
                Monomial {
                    vars: Vec::new(),
                    lam: m.lam,
                    eps: m.eps,
                },
            );
            for &(jet, e) in &m.vars {
                let img = cache
                    .entry(jet)
                    .or_insert_with(|| match images.get(jet.field as usize) {
                        Some(p) => p.derivative_n(jet.order as usize),
                        None => DiffPoly::term(
                            Q::one(),
                            Monomial::from_parts(vec![(jet, 1)], 0, 0),
                        ),
                    })
                    .clone();
                for _ in 0..e {
                    acc = &acc * &img;
                }
            }
            out += acc;
        }
        out
    }

    /// Largest number of x-derivatives in any term.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// Whether every term has `ε`-degree equal to its x-derivative count
    /// plus `shift`.
    pub fn is_eps_homogeneous(&self, shift: i64) -> bool {
        self.terms
            .keys()
            .all(|m| m.eps as i64 == m.weight() as i64 + shift)
    }
}

fn pow(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        self += rhs;
        self
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for DiffPoly {
    fn add_assign(&mut self, rhs: DiffPoly) {
        if self.terms.is_empty() {
            *self = rhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, rhs: DiffPoly) -> DiffPoly {
        self -= &rhs;
        self
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        if self.is_zero() || rhs.is_zero() {
            return DiffPoly::zero();
        }
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

impl From<Q> for DiffPoly {
    fn from(c: Q) -> Self {
        DiffPoly::constant(c)
    }
}

/// Leibniz expansion coefficient used by operator composition.
pub(crate) fn leibniz(k: usize, j: usize) -> Q {
    binomial(k, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn u(k: usize) -> DiffPoly {
        DiffPoly::var(0, k)
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(u(0).total_derivative(), u(1));
        assert_eq!((&u(0) * &u(0)).total_derivative(), (&u(0) * &u(1)).scale(&q(2)));
        assert!(DiffPoly::lam().total_derivative().is_zero());
        assert!(DiffPoly::eps().total_derivative().is_zero());
    }

    #[test]
    fn arithmetic_cancels() {
        let p = &u(0) + &DiffPoly::lam();
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        let sq = &p * &p;
        assert_eq!(sq.coeff(1, 0), u(0).scale(&q(2)));
        assert_eq!(sq.lam_degree(), Some(2));
    }

    #[test]
    fn partial_derivatives() {
        let p = &(&u(1) * &u(1)) * &DiffPoly::var(1, 0);
        assert_eq!(p.partial(Jet::new(0, 1)), (&u(1) * &DiffPoly::var(1, 0)).scale(&q(2)));
        assert!(p.partial(Jet::new(0, 0)).is_zero());
    }

    #[test]
    fn substitution_and_renaming() {
        // u -> v^2 sends u' to 2 v v'
        let img = vec![&DiffPoly::var(1, 0) * &DiffPoly::var(1, 0)];
        let got = u(1).substitute(&img);
        let v = DiffPoly::var(1, 0);
        assert_eq!(got, (&v * &DiffPoly::var(1, 1)).scale(&q(2)));
        let killed = (&u(0) + &DiffPoly::var(1, 2)).map_fields(|f| (f == 1).then_some(0));
        assert_eq!(killed, u(2));
    }

    #[test]
    fn parameter_evaluation() {
        let p = &(&DiffPoly::lam() * &DiffPoly::eps()) + &u(0);
        let e = p.eval_params(Some(&frac(1, 2)), Some(&q(3)));
        assert_eq!(e, &u(0) + &DiffPoly::constant(frac(3, 2)));
    }

    #[test]
    fn canonical_order_is_graded() {
        let a = Monomial::from_parts(vec![(Jet::new(1, 0), 1)], 0, 0);
        let b = Monomial::from_parts(vec![(Jet::new(0, 0), 2)], 0, 0);
        assert!(a < b);
        let c = Monomial::from_parts(vec![(Jet::new(0, 3), 1)], 0, 0);
        assert!(c < a);
    }
}
