//! Normal-ordered differential operators on `Ω*(M) = C∞(ΠTM)`.
//!
//! Each term is `c · m · ∂_{v1}…∂_{vk}`: a multiplication monomial on the
//! left and a canonically ordered derivative word on the right. Derivative
//! symbols carry the parity of their variable and supercommute among
//! themselves, so a word is stored as a [`Monomial`] in the differentiated
//! variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::manifold::Manifold;
use crate::parity::Parity;
use crate::phase::{poisson_bracket, schouten_bracket, HigherPoissonStructure};
use crate::poly::{integer, Monomial, Poly, Rational, VarKind};
use crate::report::{BracketReport, Residual};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffOperator {
    terms: BTreeMap<(Monomial, Monomial), Rational>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator::default()
    }

    pub fn identity() -> Self {
        DiffOperator::multiplication(&Poly::one())
    }

    /// Left multiplication by `p`.
    pub fn multiplication(p: &Poly) -> Self {
        let mut op = DiffOperator::zero();
        for (m, c) in p.terms() {
            op.add_term(c.clone(), m.clone(), Monomial::one());
        }
        op
    }

    /// `∂/∂v`.
    pub fn derivative(v: crate::poly::Var) -> Self {
        let mut op = DiffOperator::zero();
        op.add_term(Rational::one(), Monomial::one(), Monomial::var(v));
        op
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &Rational)> {
        self.terms.iter().map(|((m, w), c)| (m, w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, c: Rational, mult: Monomial, word: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((mult, word)) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for ((m, w), k) in &self.terms {
            out.add_term(k * c, m.clone(), w.clone());
        }
        out
    }

    /// Length of the longest derivative word.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, w)| w.factors().iter().map(|(_, e)| *e).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// `Some(parity)` if every term has that parity (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(|(m, w)| m.parity() + w.parity());
        let first = ps.next().unwrap_or(Parity::Even);
        ps.all(|p| p == first).then_some(first)
    }

    pub fn homogeneous_parts(&self) -> Vec<(Parity, DiffOperator)> {
        let mut even = DiffOperator::zero();
        let mut odd = DiffOperator::zero();
        for ((m, w), c) in &self.terms {
            let target = if (m.parity() + w.parity()).is_odd() {
                &mut odd
            } else {
                &mut even
            };
            target.terms.insert((m.clone(), w.clone()), c.clone());
        }
        let mut out = Vec::new();
        if !even.is_zero() {
            out.push((Parity::Even, even));
        }
        if !odd.is_zero() {
            out.push((Parity::Odd, odd));
        }
        out
    }

    /// Action on a form: derivatives first (rightmost first), then the
    /// multiplication part.
    pub fn apply(&self, omega: &Poly) -> Poly {
        let mut out = Poly::zero();
        // group terms sharing a word so each derivative is taken once
        let mut by_word: BTreeMap<&Monomial, Vec<(&Monomial, &Rational)>> = BTreeMap::new();
        for ((m, w), c) in &self.terms {
            by_word.entry(w).or_default().push((m, c));
        }
        for (word, mults) in by_word {
            let mut derived = omega.clone();
            for &(v, e) in word.factors().iter().rev() {
                for _ in 0..e {
                    derived = derived.partial(v);
                }
            }
            if derived.is_zero() {
                continue;
            }
            for (m, c) in mults {
                out += &(&Poly::term(c.clone(), m.clone()) * &derived);
            }
        }
        out
    }

    /// `m · self` for a multiplication monomial `m` with coefficient `c`.
    fn left_multiply(&self, c: &Rational, m: &Monomial) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for ((mult, word), k) in &self.terms {
            if let Some((neg, prod)) = m.mul(mult) {
                let coef = c * k;
                out.add_term(if neg { -coef } else { coef }, prod, word.clone());
            }
        }
        out
    }

    /// `∂_v ∘ self`, normal ordered with the graded Heisenberg relation.
    fn left_derivative(&self, v: crate::poly::Var) -> DiffOperator {
        let mut out = DiffOperator::zero();
        let dv = Monomial::var(v);
        for ((mult, word), c) in &self.terms {
            if let Some((k, rest)) = mult.left_derivative(v) {
                out.add_term(c * integer(k), rest, word.clone());
            }
            if let Some((neg, w)) = dv.mul(word) {
                let flip = v.parity().times(mult.parity()).is_odd() != neg;
                out.add_term(if flip { -c.clone() } else { c.clone() }, mult.clone(), w);
            }
        }
        out
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        // cache `word ∘ other` per distinct word of `self`
        let mut words: BTreeMap<&Monomial, DiffOperator> = BTreeMap::new();
        for (_, w) in self.terms.keys() {
            words.entry(w).or_insert_with(|| {
                let mut acc = other.clone();
                for &(v, e) in w.factors().iter().rev() {
                    for _ in 0..e {
                        acc = acc.left_derivative(v);
                    }
                }
                acc
            });
        }
        let mut out = DiffOperator::zero();
        for ((m, w), c) in &self.terms {
            out += &words[w].left_multiply(c, m);
        }
        out
    }

    /// Graded commutator `AB - (-1)^{|A||B|} BA`, extended bilinearly.
    pub fn commutator(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (pa, a) in self.homogeneous_parts() {
            for (pb, b) in other.homogeneous_parts() {
                out += &a.compose(&b);
                if pa.times(pb).is_odd() {
                    out += &b.compose(&a);
                } else {
                    out -= &b.compose(&a);
                }
            }
        }
        out
    }

    /// Total symbol: `∂/∂x ↦ p(x)`, `∂/∂d(x) ↦ pi(x)` in each normal-ordered
    /// term, multiplication part on the left.
    pub fn total_symbol(&self) -> Poly {
        let mut out = Poly::zero();
        for ((m, w), c) in &self.terms {
            let symbol = w.map_vars_ordered(|v| match v.kind() {
                VarKind::Base => v.with_kind(VarKind::Momentum),
                VarKind::AntitangentFiber => v.with_kind(VarKind::FormMomentum),
                other => panic!("derivative along a {other:?} variable"),
            });
            if let Some((neg, prod)) = m.mul(&symbol) {
                out.add_term(if neg { -c.clone() } else { c.clone() }, prod);
            }
        }
        out
    }
}

impl AddAssign<&DiffOperator> for DiffOperator {
    fn add_assign(&mut self, rhs: &DiffOperator) {
        for ((m, w), c) in &rhs.terms {
            self.add_term(c.clone(), m.clone(), w.clone());
        }
    }
}

impl SubAssign<&DiffOperator> for DiffOperator {
    fn sub_assign(&mut self, rhs: &DiffOperator) {
        for ((m, w), c) in &rhs.terms {
            self.add_term(-c.clone(), m.clone(), w.clone());
        }
    }
}

impl Add for &DiffOperator {
    type Output = DiffOperator;

    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;

    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;

    fn neg(self) -> DiffOperator {
        self.scale(&-Rational::one())
    }
}

/// `d = Σ_A d(x^A) ∂/∂x^A`.
pub fn exterior_derivative(manifold: &Manifold) -> DiffOperator {
    let mut op = DiffOperator::zero();
    for i in 0..manifold.dim() {
        op.add_term(
            Rational::one(),
            Monomial::var(manifold.d(i)),
            Monomial::var(manifold.x(i)),
        );
    }
    op
}

/// `i_X = Σ_k (-1)^k X̂k(x, ∂/∂d(x))`, summed over degree components.
/// On multivectors over even coordinates the sign is `(-1)^{X̃}`.
pub fn interior_product(x: &Poly) -> DiffOperator {
    let mut op = DiffOperator::zero();
    for (m, c) in x.terms() {
        let (neg, mult, svars) = m.split_left(|v| v.kind() != VarKind::AnticotangentFiber);
        let word = svars.map_vars_ordered(|v| v.with_kind(VarKind::AntitangentFiber));
        let flip = neg != (m.degree_in(VarKind::AnticotangentFiber) % 2 == 1);
        op.add_term(if flip { -c.clone() } else { c.clone() }, mult, word);
    }
    op
}

/// `L_X = [d, i_X]` for a multivector given as a raw polynomial.
pub fn lie_derivative_poly(manifold: &Manifold, x: &Poly) -> DiffOperator {
    exterior_derivative(manifold).commutator(&interior_product(x))
}

/// `L_X = [d, i_X]`.
pub fn lie_derivative(x: &crate::phase::MultivectorField) -> DiffOperator {
    lie_derivative_poly(x.manifold(), x.body())
}

/// `L_{[[X,Y]]} = [L_X, L_Y]`.
pub fn check_lie_morphism(manifold: &Manifold, x: &Poly, y: &Poly) -> BracketReport {
    let lhs = lie_derivative_poly(manifold, &schouten_bracket(x, y));
    let rhs = lie_derivative_poly(manifold, x).commutator(&lie_derivative_poly(manifold, y));
    BracketReport::new(
        "lie_morphism",
        vec![manifold.render(x), manifold.render(y)],
        Residual::Operator(&lhs - &rhs),
    )
}

/// `L_P ∘ L_P = 0`.
pub fn check_nilpotent(p: &HigherPoissonStructure) -> BracketReport {
    let l = p.lie_derivative();
    BracketReport::new(
        "nilpotent",
        vec![p.manifold().render(p.body())],
        Residual::Operator(l.compose(l)),
    )
}

/// `[d, L_X] = 0`.
pub fn check_naturality(manifold: &Manifold, x: &Poly) -> BracketReport {
    let residual = exterior_derivative(manifold).commutator(&lie_derivative_poly(manifold, x));
    BracketReport::new(
        "naturality",
        vec![manifold.render(x)],
        Residual::Operator(residual),
    )
}

/// `{K_P, K_P} = 0` with `K_P` the total symbol of `L_P`.
pub fn check_symbol_squares_to_zero(p: &HigherPoissonStructure) -> BracketReport {
    let k = p.lie_derivative().total_symbol();
    BracketReport::new(
        "symbol_squares_to_zero",
        vec![p.manifold().render(p.body())],
        Residual::Poly(poisson_bracket(&k, &k)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn apply_examples() {
        let m = fixtures::f1().manifold().clone();
        let x = Poly::var(m.x(0));
        let omega = &x * &Poly::var(m.d(1));
        assert_eq!(DiffOperator::identity().apply(&omega), omega);
        assert_eq!(DiffOperator::derivative(m.x(0)).apply(&x.pow(2)), Poly::int(2) * x.clone());
        let op = DiffOperator::multiplication(&Poly::var(m.d(0))).compose(&DiffOperator::derivative(m.x(0)));
        assert_eq!(op.apply(&omega), Poly::var(m.d(0)) * Poly::var(m.d(1)));
    }

    #[test]
    fn compose_examples() {
        let m = fixtures::f1().manifold().clone();
        let x = DiffOperator::multiplication(&Poly::var(m.x(0)));
        let dx = DiffOperator::derivative(m.x(0));
        assert_eq!(dx.compose(&x), &x.compose(&dx) + &DiffOperator::identity());

        let d = DiffOperator::multiplication(&Poly::var(m.d(0)));
        let dd = DiffOperator::derivative(m.d(0));
        assert_eq!(dd.compose(&d), &DiffOperator::identity() - &d.compose(&dd));

        assert_eq!(dx.compose(&DiffOperator::identity()), dx);
    }

    #[test]
    fn commutator_examples() {
        let m = fixtures::f1().manifold().clone();
        let a = DiffOperator::derivative(m.d(0));
        assert_eq!(a.commutator(&a), a.compose(&a).scale(&integer(2)));
        assert!(DiffOperator::derivative(m.x(0))
            .commutator(&DiffOperator::derivative(m.x(1)))
            .is_zero());
        let f1 = fixtures::f1();
        assert_eq!(
            exterior_derivative(&m).commutator(&interior_product(f1.body())),
            *f1.lie_derivative()
        );
    }

    #[test]
    fn exterior_derivative_examples() {
        let m = fixtures::f1().manifold().clone();
        let d = exterior_derivative(&m);
        let x = Poly::var(m.x(0));
        assert_eq!(d.apply(&x.pow(2)), Poly::int(2) * x.clone() * Poly::var(m.d(0)));
        assert!(d.apply(&Poly::var(m.d(0))).is_zero());
        assert!(d.compose(&d).is_zero());
    }

    #[test]
    fn interior_product_examples() {
        let f1 = fixtures::f1();
        let m = f1.manifold();
        assert_eq!(interior_product(&Poly::one()), DiffOperator::identity());
        assert_eq!(
            interior_product(&Poly::var(m.s(0))),
            -&DiffOperator::derivative(m.d(0))
        );
        let top = Poly::var(m.d(0)) * Poly::var(m.d(1));
        let value = interior_product(f1.body()).apply(&top);
        // ∂/∂d(x) ∂/∂d(y) (d(x) d(y)) = ∂/∂d(x) (-d(x)) = -1
        assert_eq!(value, Poly::int(-1));
        assert_eq!(interior_product(f1.body()).order(), 2);
    }

    #[test]
    fn lie_derivative_examples() {
        let f1 = fixtures::f1();
        assert!(f1.lie_derivative().apply(&Poly::one()).is_zero());
        let f3 = fixtures::f3();
        let m3 = f3.manifold();
        assert_eq!(f3.lie_derivative().apply(&Poly::one()), Poly::var(m3.d(0)));

        // a vector field acts as a derivation
        let m = f1.manifold();
        let v = Poly::var(m.x(1)) * Poly::var(m.s(0));
        let l = lie_derivative_poly(m, &v);
        let a = Poly::var(m.x(0)).pow(2) * Poly::var(m.d(1));
        let b = &Poly::var(m.x(0)) * &Poly::var(m.d(0));
        let lhs = l.apply(&(&a * &b));
        let pa = a.parity().unwrap();
        let lp = l.parity().unwrap();
        let mut rhs = &l.apply(&a) * &b;
        let tail = &a * &l.apply(&b);
        if lp.times(pa).is_odd() {
            rhs -= &tail;
        } else {
            rhs += &tail;
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_identity_checks_on_fixtures() {
        let f1 = fixtures::f1();
        let m = f1.manifold();
        assert!(check_lie_morphism(m, f1.body(), f1.body()).passed);
        assert!(check_lie_morphism(m, &Poly::var(m.s(0)), &Poly::var(m.s(1))).passed);
        assert!(check_lie_morphism(m, &Poly::var(m.x(0)), &Poly::var(m.s(0))).passed);
        for p in [fixtures::f1(), fixtures::f2(), fixtures::f4()] {
            assert!(check_nilpotent(&p).passed);
            assert!(check_symbol_squares_to_zero(&p).passed);
            assert!(check_naturality(p.manifold(), p.body()).passed);
        }
        assert!(check_naturality(m, &Poly::one()).passed);
    }

    #[test]
    fn total_symbol_examples() {
        let f1 = fixtures::f1();
        let m = f1.manifold();
        assert_eq!(DiffOperator::identity().total_symbol(), Poly::one());
        let expected = &(Poly::var(m.d(0)) * Poly::var(m.p(0))) + &(Poly::var(m.d(1)) * Poly::var(m.p(1)));
        assert_eq!(exterior_derivative(m).total_symbol(), expected);
    }
}
