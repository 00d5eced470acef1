//! Canonical structures on the bundles over a base manifold.
//!
//! Bracket conventions are fixed by generator values, graded antisymmetry
//! and the graded Leibniz rule in the second argument:
//!
//! * Schouten bracket on `ΠT*M`: `[[x, s(x)]] = 1`,
//!   `[[X,Y]] = -(-1)^{(|X|+1)(|Y|+1)} [[Y,X]]`,
//!   `[[X,YZ]] = [[X,Y]]Z + (-1)^{(|X|+1)|Y|} Y[[X,Z]]`.
//! * Canonical even bracket on `T*(ΠTM)` and `T*(ΠT*M)`: every momentum
//!   paired with its coordinate gives `{p(x), x} = {pi(x), d(x)} =
//!   {piup(x), s(x)} = 1`, so `{p(x), .}` acts as `∂/∂x`. This is the
//!   orientation under which the total symbol of an operator commutator is
//!   the bracket of the symbols.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::manifold::{same_manifold, Bundle, CoordinateSystem, Manifold};
use crate::operator::DiffOperator;
use crate::parity::Parity;
use crate::poly::{Poly, Var, VarKind};

/// Base coordinates (as `Var`s of kind `Base`) touched by any of the inputs.
fn base_coordinates<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> BTreeSet<Var> {
    polys
        .into_iter()
        .flat_map(|p| p.variables())
        .filter(|v| v.kind() != VarKind::Hbar)
        .map(|v| v.with_kind(VarKind::Base))
        .collect()
}

/// The Schouten–Nijenhuis bracket of two polynomials on `ΠT*M`.
pub fn schouten_bracket(x: &Poly, y: &Poly) -> Poly {
    let bases = base_coordinates([x, y]);
    let mut out = Poly::zero();
    for (xp, xh) in x.homogeneous_parts() {
        let shifted = xp.flip();
        for &base in &bases {
            let s = base.with_kind(VarKind::AnticotangentFiber);
            let a = base.parity();
            let dx = xh.partial(base);
            if !dx.is_zero() {
                let term = &dx * &y.partial(s);
                if shifted.times(a).is_odd() {
                    out -= &term;
                } else {
                    out += &term;
                }
            }
            let ds = xh.partial(s);
            if !ds.is_zero() {
                let term = &ds * &y.partial(base);
                if shifted.times(a.flip()).is_odd() {
                    out += &term;
                } else {
                    out -= &term;
                }
            }
        }
    }
    out
}

/// Conjugate pairs (coordinate, momentum) of the canonical even bracket.
fn conjugate_pairs(bases: &BTreeSet<Var>) -> Vec<(Var, Var)> {
    let mut pairs = Vec::new();
    for &b in bases {
        pairs.push((b, b.with_kind(VarKind::Momentum)));
        pairs.push((
            b.with_kind(VarKind::AntitangentFiber),
            b.with_kind(VarKind::FormMomentum),
        ));
        pairs.push((
            b.with_kind(VarKind::AnticotangentFiber),
            b.with_kind(VarKind::MultivectorMomentum),
        ));
    }
    pairs
}

/// Canonical even Poisson bracket on the cotangent bundles, on raw
/// polynomials. Works for `T*(ΠTM)` and `T*(ΠT*M)` alike since their
/// conjugate pairs are disjoint.
pub fn poisson_bracket(f: &Poly, g: &Poly) -> Poly {
    let bases = base_coordinates([f, g]);
    let mut out = Poly::zero();
    for (fp, fh) in f.homogeneous_parts() {
        for (q, mom) in conjugate_pairs(&bases) {
            let c = q.parity();
            let df_mom = fh.partial(mom);
            if !df_mom.is_zero() {
                let term = &df_mom * &g.partial(q);
                if c.times(fp.flip()).is_odd() {
                    out -= &term;
                } else {
                    out += &term;
                }
            }
            let df_q = fh.partial(q);
            if !df_q.is_zero() {
                let term = &df_q * &g.partial(mom);
                if c.times(fp).is_odd() {
                    out += &term;
                } else {
                    out -= &term;
                }
            }
        }
    }
    out
}

/// Canonical Poisson bracket on a cotangent-type chart.
pub fn canonical_poisson(f: &Poly, g: &Poly, system: &CoordinateSystem) -> Result<Poly> {
    if !system.bundle().is_cotangent() {
        return Err(Error::WrongBundle {
            expected: "a cotangent bundle",
            found: system.bundle().label().to_string(),
        });
    }
    system.check(f)?;
    system.check(g)?;
    Ok(poisson_bracket(f, g))
}

/// Part of multivector degree `r`.
pub fn degree_component(x: &Poly, r: u32) -> Poly {
    x.degree_part(VarKind::AnticotangentFiber, r)
}

/// `Σ_i hbar^i · degree_component(x, i)`.
pub fn deform(x: &Poly) -> Poly {
    let h = Poly::var(Var::hbar());
    let mut out = Poly::zero();
    for r in 0..=x.max_degree(VarKind::AnticotangentFiber) {
        let part = degree_component(x, r);
        if !part.is_zero() {
            out += &(&h.pow(r) * &part);
        }
    }
    out
}

/// Pull a function on `T*(ΠTM)` back to `T*(ΠT*M)` along the canonical
/// double vector bundle morphism: `d(x) ↦ (-1)^{|x|} piup(x)`,
/// `pi(x) ↦ s(x)`, base coordinates and `p(x)` fixed.
pub fn r_pullback(k: &Poly) -> Poly {
    let mut map = BTreeMap::new();
    for v in k.variables() {
        match v.kind() {
            VarKind::AntitangentFiber => {
                let image = Poly::var(v.with_kind(VarKind::MultivectorMomentum));
                let image = if v.base_parity().is_odd() { -image } else { image };
                map.insert(v, image);
            }
            VarKind::FormMomentum => {
                map.insert(v, Poly::var(v.with_kind(VarKind::AnticotangentFiber)));
            }
            _ => {}
        }
    }
    let out = k.substitute(&map);
    out.expect("pullback images are parity preserving")
}

/// A multivector field: a polynomial on `ΠT*M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivectorField {
    manifold: Arc<Manifold>,
    body: Poly,
}

impl MultivectorField {
    pub fn new(manifold: Arc<Manifold>, body: Poly) -> Result<Self> {
        CoordinateSystem::new(manifold.clone(), Bundle::PiTStar).check(&body)?;
        Ok(MultivectorField { manifold, body })
    }

    pub fn manifold(&self) -> &Arc<Manifold> {
        &self.manifold
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn parity(&self) -> Option<Parity> {
        self.body.parity()
    }

    pub fn degree(&self) -> u32 {
        self.body.max_degree(VarKind::AnticotangentFiber)
    }

    pub fn schouten(&self, other: &MultivectorField) -> Result<MultivectorField> {
        if !same_manifold(&self.manifold, &other.manifold) {
            return Err(Error::MixedCoordinateSystems);
        }
        Ok(MultivectorField {
            manifold: self.manifold.clone(),
            body: schouten_bracket(&self.body, &other.body),
        })
    }

    pub fn degree_component(&self, r: u32) -> MultivectorField {
        MultivectorField {
            manifold: self.manifold.clone(),
            body: degree_component(&self.body, r),
        }
    }

    pub fn deform(&self) -> MultivectorField {
        MultivectorField {
            manifold: self.manifold.clone(),
            body: deform(&self.body),
        }
    }
}

/// A differential form: a polynomial on `ΠTM`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    manifold: Arc<Manifold>,
    body: Poly,
}

impl DifferentialForm {
    pub fn new(manifold: Arc<Manifold>, body: Poly) -> Result<Self> {
        CoordinateSystem::new(manifold.clone(), Bundle::PiT).check(&body)?;
        Ok(DifferentialForm { manifold, body })
    }

    pub fn manifold(&self) -> &Arc<Manifold> {
        &self.manifold
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn into_body(self) -> Poly {
        self.body
    }

    /// Polynomial degree in the `d(x)` variables, if homogeneous.
    pub fn form_degree(&self) -> Option<u32> {
        form_degree(&self.body)
    }
}

/// Homogeneous form degree of a polynomial on `ΠTM` (`None` if mixed; zero
/// counts as every degree and reports `Some(0)`).
pub fn form_degree(p: &Poly) -> Option<u32> {
    let mut degrees = p.terms().map(|(m, _)| m.degree_in(VarKind::AntitangentFiber));
    let first = degrees.next().unwrap_or(0);
    degrees.all(|d| d == first).then_some(first)
}

/// An even multivector field satisfying `[[P,P]] = 0`.
#[derive(Debug, Clone)]
pub struct HigherPoissonStructure {
    manifold: Arc<Manifold>,
    body: Poly,
    components: BTreeMap<u32, Poly>,
    lie: OnceLock<DiffOperator>,
    lie_deformed: OnceLock<DiffOperator>,
    lie_components: OnceLock<BTreeMap<u32, DiffOperator>>,
}

impl PartialEq for HigherPoissonStructure {
    fn eq(&self, other: &Self) -> bool {
        same_manifold(&self.manifold, &other.manifold) && self.body == other.body
    }
}

impl HigherPoissonStructure {
    /// Validates parity and the master equation.
    pub fn new(manifold: Arc<Manifold>, body: Poly) -> Result<Self> {
        let chart = CoordinateSystem::new(manifold.clone(), Bundle::PiTStar);
        chart.check(&body)?;
        if body.variables().iter().any(|v| v.kind() == VarKind::Hbar) {
            return Err(Error::WrongBundle {
                expected: Bundle::PiTStar.label(),
                found: "hbar".into(),
            });
        }
        if body.parity() != Some(Parity::Even) {
            return Err(Error::OddStructure);
        }
        let master = schouten_bracket(&body, &body);
        if !master.is_zero() {
            return Err(Error::MasterEquation {
                residual: manifold.render(&master),
            });
        }
        let components = (0..=body.max_degree(VarKind::AnticotangentFiber))
            .map(|r| (r, degree_component(&body, r)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(HigherPoissonStructure {
            manifold,
            body,
            components,
            lie: OnceLock::new(),
            lie_deformed: OnceLock::new(),
            lie_components: OnceLock::new(),
        })
    }

    pub fn manifold(&self) -> &Arc<Manifold> {
        &self.manifold
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn field(&self) -> MultivectorField {
        MultivectorField {
            manifold: self.manifold.clone(),
            body: self.body.clone(),
        }
    }

    /// Top multivector degree.
    pub fn degree(&self) -> u32 {
        self.components.keys().next_back().copied().unwrap_or(0)
    }

    /// The degree-`r` component (zero if absent).
    pub fn component(&self, r: u32) -> Poly {
        self.components.get(&r).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> &BTreeMap<u32, Poly> {
        &self.components
    }

    /// `L_P`, cached.
    pub fn lie_derivative(&self) -> &DiffOperator {
        self.lie
            .get_or_init(|| crate::operator::lie_derivative_poly(&self.manifold, &self.body))
    }

    /// `L_{P[hbar]}`, cached.
    pub fn deformed_lie_derivative(&self) -> &DiffOperator {
        self.lie_deformed
            .get_or_init(|| crate::operator::lie_derivative_poly(&self.manifold, &deform(&self.body)))
    }

    /// `L_{P_r}` for the degree-`r` component alone (zero operator if absent).
    pub fn component_lie_derivative(&self, r: u32) -> DiffOperator {
        let cache = self.lie_components.get_or_init(|| {
            self.components
                .iter()
                .map(|(r, c)| (*r, crate::operator::lie_derivative_poly(&self.manifold, c)))
                .collect()
        });
        cache.get(&r).cloned().unwrap_or_default()
    }
}

/// An odd vector field on `ΠT*M`, stored by components along each coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    components: BTreeMap<Var, Poly>,
}

impl VectorField {
    pub fn new(components: BTreeMap<Var, Poly>) -> Self {
        let components = components.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        VectorField { components }
    }

    pub fn zero() -> Self {
        VectorField {
            components: BTreeMap::new(),
        }
    }

    /// Component along `z` (the value of the field on the coordinate `z`).
    pub fn component(&self, z: Var) -> Poly {
        self.components.get(&z).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> &BTreeMap<Var, Poly> {
        &self.components
    }

    /// Action as a left derivation: `Σ_z Q(z) ∂G/∂z`.
    pub fn apply(&self, g: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (z, qz) in &self.components {
            let dz = g.partial(*z);
            if !dz.is_zero() {
                out += &(qz * &dz);
            }
        }
        out
    }
}

/// `Q_P = -[[P, .]]` on `ΠT*M`.
pub fn hamiltonian_vector_field(p: &HigherPoissonStructure) -> VectorField {
    let chart = CoordinateSystem::new(p.manifold().clone(), Bundle::PiTStar);
    let components = chart
        .variables()
        .into_iter()
        .map(|z| (z, -schouten_bracket(p.body(), &Poly::var(z))))
        .collect();
    VectorField::new(components)
}

/// Linear Hamiltonian of a vector field on `ΠT*M`:
/// `H_Q = -Σ_z Q(z)·mom(z)`, coefficient written left of the momentum.
/// With the bracket orientation of this module `Q(G) = -{H_Q, G}` on
/// momentum-free `G` (see [`hamiltonian_action`]).
pub fn linear_hamiltonian(q: &VectorField) -> Poly {
    let mut out = Poly::zero();
    for (z, qz) in q.components() {
        let momentum = match z.kind() {
            VarKind::Base => z.with_kind(VarKind::Momentum),
            VarKind::AnticotangentFiber => z.with_kind(VarKind::MultivectorMomentum),
            other => panic!("vector field component along a {other:?} variable"),
        };
        out -= &(qz * &Poly::var(momentum));
    }
    out
}

/// Action of a linear Hamiltonian on momentum-free functions:
/// `Q(G) = -{H_Q, G}`.
pub fn hamiltonian_action(h: &Poly, g: &Poly) -> Poly {
    -poisson_bracket(h, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn schouten_generator_values() {
        let f = fixtures::f1();
        let m = f.manifold();
        assert_eq!(schouten_bracket(&Poly::var(m.x(0)), &Poly::var(m.s(0))), Poly::one());
        assert!(schouten_bracket(&Poly::var(m.x(0)), &Poly::var(m.x(1))).is_zero());
        assert!(schouten_bracket(&Poly::var(m.s(0)), &Poly::var(m.s(1))).is_zero());
        assert!(schouten_bracket(&Poly::var(m.x(0)), &Poly::var(m.s(1))).is_zero());
    }

    #[test]
    fn master_equation_on_fixtures() {
        for p in [fixtures::f1(), fixtures::f2(), fixtures::f3(), fixtures::f4()] {
            assert!(schouten_bracket(p.body(), p.body()).is_zero());
        }
    }

    #[test]
    fn poisson_generator_values() {
        let m = fixtures::f1().manifold().clone();
        let x = Poly::var(m.x(0));
        let px = Poly::var(m.p(0));
        assert_eq!(poisson_bracket(&px, &x), Poly::one());
        assert_eq!(poisson_bracket(&x, &px), -Poly::one());
        assert!(poisson_bracket(&x, &x).is_zero());
        let dp = Poly::var(m.d(0)) * px.clone();
        assert_eq!(poisson_bracket(&dp, &Poly::var(m.pi(0))), px);
        assert_eq!(poisson_bracket(&Poly::var(m.pi(0)), &Poly::var(m.d(0))), Poly::one());
    }

    #[test]
    fn canonical_poisson_requires_cotangent_chart() {
        let m = fixtures::f1().manifold().clone();
        let sys = CoordinateSystem::new(m.clone(), Bundle::PiT);
        let x = Poly::var(m.x(0));
        assert!(matches!(
            canonical_poisson(&x, &x, &sys),
            Err(Error::WrongBundle { .. })
        ));
        let cot = CoordinateSystem::new(m.clone(), Bundle::CotPiT);
        assert_eq!(canonical_poisson(&Poly::var(m.p(0)), &x, &cot).unwrap(), Poly::one());
    }

    #[test]
    fn degree_components_and_deformation() {
        let f1 = fixtures::f1();
        let m = f1.manifold();
        let p1 = f1.body().clone();
        assert_eq!(degree_component(&p1, 2), p1);
        assert!(degree_component(&p1, 1).is_zero());
        let mixed = &Poly::var(m.x(0)) + &p1;
        assert_eq!(degree_component(&mixed, 0), Poly::var(m.x(0)));

        let h2 = Poly::var(Var::hbar()).pow(2);
        assert_eq!(deform(&p1), &h2 * &p1);
        assert_eq!(deform(&Poly::var(m.x(0))), Poly::var(m.x(0)));
        let f2 = fixtures::f2();
        assert_eq!(deform(f2.body()).hbar_coefficient(3), f2.body().clone());
    }

    #[test]
    fn structure_validation() {
        let m = fixtures::f1().manifold().clone();
        assert_eq!(
            HigherPoissonStructure::new(m.clone(), Poly::var(m.s(0))).unwrap_err(),
            Error::OddStructure
        );
        let bad = &(Poly::var(m.s(0)) * Poly::var(m.s(1))) + &(Poly::var(m.x(0)).pow(2) * Poly::var(m.x(1)));
        // [[s(x)s(y), x^2 y]] is nonzero, so the master equation fails
        assert!(matches!(
            HigherPoissonStructure::new(m.clone(), bad),
            Err(Error::MasterEquation { .. })
        ));
    }

    #[test]
    fn hamiltonian_vector_field_examples() {
        let f1 = fixtures::f1();
        let m = f1.manifold();
        let q = hamiltonian_vector_field(&f1);
        assert_eq!(
            q.component(m.x(0)),
            -schouten_bracket(f1.body(), &Poly::var(m.x(0)))
        );
        assert!(q.apply(&Poly::int(7)).is_zero());

        let f3 = fixtures::f3();
        let q3 = hamiltonian_vector_field(&f3);
        assert_eq!(q3.component(f3.manifold().s(0)), -Poly::one());
    }

    #[test]
    fn linear_hamiltonian_examples() {
        let m = fixtures::f1().manifold().clone();
        let q = VectorField::new([(m.x(0), Poly::one())].into());
        assert_eq!(linear_hamiltonian(&q), -Poly::var(m.p(0)));
        assert!(linear_hamiltonian(&VectorField::zero()).is_zero());
        let g = Poly::var(m.x(0)).pow(3);
        assert_eq!(hamiltonian_action(&linear_hamiltonian(&q), &g), q.apply(&g));
    }

    #[test]
    fn r_pullback_examples() {
        let f2 = fixtures::f2();
        let m = f2.manifold();
        assert_eq!(r_pullback(&Poly::var(m.pi(0))), Poly::var(m.s(0)));
        assert_eq!(r_pullback(&Poly::var(m.d(0))), Poly::var(m.piup(0)));
        assert_eq!(r_pullback(&Poly::var(m.d(2))), -Poly::var(m.piup(2)));
    }
}
