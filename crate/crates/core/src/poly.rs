//! Exact graded-commutative polynomials.
//!
//! A [`Poly`] is a finite sum of [`Monomial`]s with rational coefficients.
//! Monomials are kept in a canonical form: factors sorted by the global
//! variable order, no repeated variable, odd variables with exponent one.
//! Reordering factors into that form picks up the Koszul sign
//! `(-1)^{|u||v|}` for every transposition of adjacent factors `u`, `v`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::parity::Parity;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Which family a variable belongs to. The declaration order of the variants
/// is the global variable order used by canonical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Base coordinate `x`.
    Base,
    /// Antitangent fibre coordinate `d(x)`.
    AntitangentFiber,
    /// Anticotangent fibre coordinate `s(x)`.
    AnticotangentFiber,
    /// Momentum `p(x)` conjugate to a base coordinate.
    Momentum,
    /// Momentum `pi(x)` conjugate to `d(x)`.
    FormMomentum,
    /// Momentum `piup(x)` conjugate to `s(x)`.
    MultivectorMomentum,
    /// Formal deformation parameter.
    Hbar,
}

impl VarKind {
    /// Parity shift relative to the attached base coordinate.
    fn shift(self) -> Parity {
        match self {
            VarKind::Base | VarKind::Momentum | VarKind::Hbar => Parity::Even,
            VarKind::AntitangentFiber
            | VarKind::AnticotangentFiber
            | VarKind::FormMomentum
            | VarKind::MultivectorMomentum => Parity::Odd,
        }
    }

    pub fn prefix(self) -> Option<&'static str> {
        match self {
            VarKind::Base | VarKind::Hbar => None,
            VarKind::AntitangentFiber => Some("d"),
            VarKind::AnticotangentFiber => Some("s"),
            VarKind::Momentum => Some("p"),
            VarKind::FormMomentum => Some("pi"),
            VarKind::MultivectorMomentum => Some("piup"),
        }
    }
}

/// A graded variable attached to the base coordinate with the given index.
///
/// The parity is cached so that polynomial arithmetic never needs to consult
/// the coordinate system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    kind: VarKind,
    index: u16,
    parity: Parity,
}

impl Var {
    /// Variable of `kind` attached to base coordinate `index` of parity
    /// `base_parity`.
    pub fn new(kind: VarKind, index: usize, base_parity: Parity) -> Self {
        let index = u16::try_from(index).expect("too many coordinates");
        if kind == VarKind::Hbar {
            return Self::hbar();
        }
        Var {
            kind,
            index,
            parity: base_parity + kind.shift(),
        }
    }

    pub fn hbar() -> Self {
        Var {
            kind: VarKind::Hbar,
            index: 0,
            parity: Parity::Even,
        }
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn index(&self) -> usize {
        self.index as usize
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Parity of the base coordinate this variable is attached to.
    pub fn base_parity(&self) -> Parity {
        self.parity + self.kind.shift()
    }

    /// Same base coordinate, different family.
    pub fn with_kind(&self, kind: VarKind) -> Var {
        Var::new(kind, self.index(), self.base_parity())
    }
}

/// Canonically ordered product of variables, without coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn parity(&self) -> Parity {
        self.factors
            .iter()
            .filter(|(v, _)| v.parity().is_odd())
            .map(|_| Parity::Odd)
            .sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |(_, e)| *e)
    }

    /// Total exponent of variables of the given kind.
    pub fn degree_in(&self, kind: VarKind) -> u32 {
        self.factors
            .iter()
            .filter(|(v, _)| v.kind() == kind)
            .map(|(_, e)| *e)
            .sum()
    }

    pub fn contains_kind(&self, kind: VarKind) -> bool {
        self.factors.iter().any(|(v, _)| v.kind() == kind)
    }

    /// Canonical product `self * other`. Returns `None` when an odd variable
    /// would appear twice, otherwise whether the Koszul sign is negative.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut negative = false;
        // number of odd factors of `self` not yet emitted
        let mut odd_left = self.factors.iter().filter(|(v, _)| v.parity().is_odd()).count();
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    if a.parity().is_odd() {
                        odd_left -= 1;
                    }
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    if b.parity().is_odd() && odd_left % 2 == 1 {
                        negative = !negative;
                    }
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a.parity().is_odd() {
                        return None;
                    }
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        for &(b, eb) in &other.factors[j..] {
            // every remaining odd factor of `self` was emitted already
            out.push((b, eb));
        }
        Some((negative, Monomial { factors: out }))
    }

    /// Left partial derivative. Returns the integer factor (exponent times
    /// Koszul sign) and the remaining monomial, or `None` if `v` is absent.
    pub fn left_derivative(&self, v: Var) -> Option<(i64, Monomial)> {
        let pos = self.factors.iter().position(|(w, _)| *w == v)?;
        let (_, e) = self.factors[pos];
        let mut factor = i64::from(e);
        if v.parity().is_odd() {
            let odd_before = self.factors[..pos]
                .iter()
                .filter(|(w, _)| w.parity().is_odd())
                .count();
            if odd_before % 2 == 1 {
                factor = -factor;
            }
        }
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some((factor, Monomial { factors }))
    }

    /// Replace every variable by `f(v)`, keeping the factor order. The caller
    /// must preserve the global order (e.g. by mapping kinds monotonically).
    pub(crate) fn map_vars_ordered(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|&(v, e)| (f(v), e)).collect(),
        }
    }

    /// Split into the factors satisfying `pred` and the rest, both in order.
    /// Returns the Koszul sign of moving the selected factors to the left.
    pub(crate) fn split_left(&self, pred: impl Fn(Var) -> bool) -> (bool, Monomial, Monomial) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut negative = false;
        let mut odd_right = 0usize;
        for &(v, e) in &self.factors {
            if pred(v) {
                if v.parity().is_odd() && odd_right % 2 == 1 {
                    negative = !negative;
                }
                left.push((v, e));
            } else {
                if v.parity().is_odd() {
                    odd_right += 1;
                }
                right.push((v, e));
            }
        }
        (negative, Monomial { factors: left }, Monomial { factors: right })
    }
}

/// One factor of an unnormalized product.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Var(Var),
    Coef(Rational),
}

/// Exact polynomial in graded-commuting variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(integer(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(c, m);
        p
    }

    /// Canonical form of a raw product of variables and coefficients, read
    /// left to right.
    pub fn normalize(raw: &[Factor]) -> Self {
        let mut coef = Rational::one();
        let mut mono = Monomial::one();
        for f in raw {
            match f {
                Factor::Coef(c) => coef *= c,
                Factor::Var(v) => match mono.mul(&Monomial::var(*v)) {
                    None => return Poly::zero(),
                    Some((neg, m)) => {
                        if neg {
                            coef = -coef;
                        }
                        mono = m;
                    }
                },
            }
        }
        Poly::term(coef, mono)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
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

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Some(parity)` if every term has that parity (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let mut parities = self.terms.keys().map(Monomial::parity);
        let first = parities.next().unwrap_or(Parity::Even);
        parities.all(|p| p == first).then_some(first)
    }

    /// Even and odd parts.
    pub fn parity_parts(&self) -> (Poly, Poly) {
        let (even, odd) = self.filter_split(|m| m.parity().is_even());
        (even, odd)
    }

    /// Non-zero homogeneous parts tagged with their parity.
    pub fn homogeneous_parts(&self) -> Vec<(Parity, Poly)> {
        let (even, odd) = self.parity_parts();
        let mut out = Vec::new();
        if !even.is_zero() {
            out.push((Parity::Even, even));
        }
        if !odd.is_zero() {
            out.push((Parity::Odd, odd));
        }
        out
    }

    pub fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn filter_split(&self, pred: impl Fn(&Monomial) -> bool) -> (Poly, Poly) {
        let mut yes = Poly::zero();
        let mut no = Poly::zero();
        for (m, c) in &self.terms {
            let target = if pred(m) { &mut yes } else { &mut no };
            target.terms.insert(m.clone(), c.clone());
        }
        (yes, no)
    }

    /// Variables occurring in the polynomial, in global order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| *v))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    /// Left partial derivative with respect to `v`.
    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.left_derivative(v) {
                out.add_term(c * integer(k), rest);
            }
        }
        out
    }

    /// Right partial derivative, `∂_R = (-1)^{|v|(|t|+|v|)} ∂_L` on each
    /// homogeneous term `t`.
    pub fn right_partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.left_derivative(v) {
                let flip = v.parity().times(m.parity() + v.parity()).is_odd();
                let k = if flip { -k } else { k };
                out.add_term(c * integer(k), rest);
            }
        }
        out
    }

    /// Simultaneous substitution of variables by polynomials of the same
    /// parity. Variables without an image are kept.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Poly>) -> Result<Poly> {
        for (v, image) in assignment {
            match image.parity() {
                Some(p) if p == v.parity() || image.is_zero() => {}
                _ => {
                    return Err(Error::ParityMismatch {
                        variable: format!("{v:?}"),
                    })
                }
            }
        }
        Ok(self.substitute_unchecked(assignment))
    }

    pub(crate) fn substitute_unchecked(&self, assignment: &BTreeMap<Var, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for &(v, e) in m.factors() {
                let image = match assignment.get(&v) {
                    Some(p) => p.clone(),
                    None => Poly::var(v),
                };
                for _ in 0..e {
                    acc = &acc * &image;
                    if acc.is_zero() {
                        break;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Set every variable of the given kinds to zero.
    pub fn restrict_zero(&self, kinds: &[VarKind]) -> Poly {
        self.filter(|m| !kinds.iter().any(|k| m.contains_kind(*k)))
    }

    /// Coefficient of `hbar^k`.
    pub fn hbar_coefficient(&self, k: u32) -> Poly {
        let h = Var::hbar();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exponent(h) == k {
                let factors = m
                    .factors()
                    .iter()
                    .filter(|(v, _)| *v != h)
                    .cloned()
                    .collect();
                out.add_term(c.clone(), Monomial { factors });
            }
        }
        out
    }

    /// Largest power of `hbar` present.
    pub fn hbar_degree(&self) -> u32 {
        let h = Var::hbar();
        self.terms.keys().map(|m| m.exponent(h)).max().unwrap_or(0)
    }

    /// Part of homogeneous total degree `r` in the variables of `kind`.
    pub fn degree_part(&self, kind: VarKind, r: u32) -> Poly {
        self.filter(|m| m.degree_in(kind) == r)
    }

    pub fn max_degree(&self, kind: VarKind) -> u32 {
        self.terms.keys().map(|m| m.degree_in(kind)).max().unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(c.clone(), m.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(-c.clone(), m.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(if neg { -c } else { c }, m);
                }
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Mul<&Rational> for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Rational) -> Poly {
        self.scale(rhs)
    }
}

/// Debug-oriented rendering with anonymous variable names; use
/// [`crate::dsl::print`] for user-facing output.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            for (v, e) in m.factors() {
                let name = match v.kind().prefix() {
                    Some(p) => format!("{p}(#{})", v.index()),
                    None if v.kind() == VarKind::Hbar => "hbar".to_string(),
                    None => format!("#{}", v.index()),
                };
                write!(f, "*{name}")?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
