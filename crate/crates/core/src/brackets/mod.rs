//! The three bracket hierarchies generated by a higher Poisson structure.
//!
//! All of them are derived brackets of an odd generator evaluated against
//! an abelian subalgebra:
//!
//! * higher Poisson: `{f1,…,fr} = [[…[[P,f1]],…,fr]]` restricted to `M`;
//! * Koszul–Schouten: `[a1,…,ar] = […[[L_P,a1],a2]…,ar](1)`;
//! * higher Schouten: the leading `hbar` coefficient of the Koszul–Schouten
//!   brackets of the deformed structure.

mod checks;
mod jacobiator;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_d_derivation_rule, check_kp_hamiltonian, check_leibniz_defect, check_lemma_poisson,
    check_prop3, check_strict_leibniz, check_theorem_symbol_form, explicit_pullback_symbol,
    explicit_symbol,
};
pub use jacobiator::{jacobiator, unshuffles};

use crate::error::{Error, Result};
use crate::manifold::{same_manifold, Bundle, CoordinateSystem};
use crate::operator::DiffOperator;
use crate::parity::Parity;
use crate::phase::{poisson_bracket, schouten_bracket, DifferentialForm, HigherPoissonStructure};
use crate::poly::{Poly, VarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HierarchyKind {
    HigherPoisson,
    KoszulSchouten,
    HigherSchouten,
}

impl HierarchyKind {
    pub fn all() -> [HierarchyKind; 3] {
        [
            HierarchyKind::HigherPoisson,
            HierarchyKind::KoszulSchouten,
            HierarchyKind::HigherSchouten,
        ]
    }

    pub fn label(self) -> &'static str {
        match self {
            HierarchyKind::HigherPoisson => "poisson",
            HierarchyKind::KoszulSchouten => "ks",
            HierarchyKind::HigherSchouten => "schouten",
        }
    }

    /// Parity used for Koszul signs when permuting arguments. Poisson
    /// brackets come from the odd Schouten bracket, so their arguments are
    /// graded by shifted parity.
    pub fn sign_parity(self, p: Parity) -> Parity {
        match self {
            HierarchyKind::HigherPoisson => p.flip(),
            _ => p,
        }
    }
}

/// A bracket hierarchy attached to a structure.
#[derive(Debug, Clone, Copy)]
pub struct BracketHierarchy<'a> {
    pub kind: HierarchyKind,
    pub source: &'a HigherPoissonStructure,
}

impl<'a> BracketHierarchy<'a> {
    pub fn new(kind: HierarchyKind, source: &'a HigherPoissonStructure) -> Self {
        BracketHierarchy { kind, source }
    }

    /// Arity above which every bracket vanishes.
    pub fn max_arity(&self) -> u32 {
        self.source.degree()
    }

    pub fn bracket(&self, args: &[Poly]) -> Result<Poly> {
        match self.kind {
            HierarchyKind::HigherPoisson => higher_poisson_bracket(self.source, args),
            HierarchyKind::KoszulSchouten => ks_bracket(self.source, args),
            HierarchyKind::HigherSchouten => higher_schouten_bracket_by_component(self.source, args),
        }
    }

    /// Argument validation for this hierarchy.
    pub fn check_argument(&self, a: &Poly) -> Result<()> {
        match self.kind {
            HierarchyKind::HigherPoisson => check_base_function(self.source, a),
            _ => check_form(self.source, a),
        }
    }
}

pub(crate) fn check_base_function(p: &HigherPoissonStructure, f: &Poly) -> Result<()> {
    let chart = CoordinateSystem::new(p.manifold().clone(), Bundle::Base);
    let render = || p.manifold().render(f);
    if f.variables().iter().any(|v| v.kind() != VarKind::Base) {
        return Err(Error::NotABaseFunction(render()));
    }
    chart.check(f)
}

pub(crate) fn check_form(p: &HigherPoissonStructure, a: &Poly) -> Result<()> {
    CoordinateSystem::new(p.manifold().clone(), Bundle::PiT).check(a)
}

/// `[…[[op, a1], a2]…, ar](1)` for an operator of parity `op_parity`,
/// with arguments acting by multiplication.
pub fn derived_bracket(op: &DiffOperator, op_parity: Parity, args: &[Poly]) -> Poly {
    fn go(op: &DiffOperator, op_parity: Parity, args: &[(Parity, Poly)], omega: &Poly) -> Poly {
        match args.split_last() {
            None => op.apply(omega),
            Some(((last_parity, last), rest)) => {
                let tau = op_parity + rest.iter().map(|(p, _)| *p).sum::<Parity>();
                let shifted = go(op, op_parity, rest, &(last * omega));
                let inner = go(op, op_parity, rest, omega);
                if inner.is_zero() {
                    return shifted;
                }
                let tail = last * &inner;
                if tau.times(*last_parity).is_odd() {
                    shifted + tail
                } else {
                    shifted - tail
                }
            }
        }
    }

    // multilinear expansion over parity-homogeneous parts
    let mut combos: Vec<Vec<(Parity, Poly)>> = vec![Vec::new()];
    for a in args {
        let parts = a.homogeneous_parts();
        if parts.is_empty() {
            return Poly::zero();
        }
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |part| {
                    let mut next = prefix.clone();
                    next.push(part.clone());
                    next
                })
            })
            .collect();
    }
    let mut out = Poly::zero();
    for combo in combos {
        out += &go(op, op_parity, &combo, &Poly::one());
    }
    out
}

/// `{f1,…,fr}_P = [[…[[P,f1]],…,fr]]|_M`; `r = 0` gives `P|_M`.
pub fn higher_poisson_bracket(p: &HigherPoissonStructure, args: &[Poly]) -> Result<Poly> {
    for f in args {
        check_base_function(p, f)?;
    }
    let mut acc = p.body().clone();
    for f in args {
        acc = schouten_bracket(&acc, f);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc.restrict_zero(&[VarKind::AnticotangentFiber]))
}

/// Higher Koszul–Schouten bracket `[a1,…,ar]_P`; `r = 0` gives `L_P(1)`.
pub fn ks_bracket(p: &HigherPoissonStructure, args: &[Poly]) -> Result<Poly> {
    for a in args {
        check_form(p, a)?;
    }
    Ok(derived_bracket(p.lie_derivative(), Parity::Odd, args))
}

/// [`ks_bracket`] on typed forms; all forms must share the structure's
/// manifold.
pub fn ks_bracket_forms(p: &HigherPoissonStructure, args: &[DifferentialForm]) -> Result<DifferentialForm> {
    if args.iter().any(|a| !same_manifold(a.manifold(), p.manifold())) {
        return Err(Error::MixedCoordinateSystems);
    }
    let raw: Vec<Poly> = args.iter().map(|a| a.body().clone()).collect();
    DifferentialForm::new(p.manifold().clone(), ks_bracket(p, &raw)?)
}

/// Higher Schouten bracket as the `hbar^r` coefficient of the
/// Koszul–Schouten bracket of `P[hbar]`.
pub fn higher_schouten_bracket(p: &HigherPoissonStructure, args: &[Poly]) -> Result<Poly> {
    for a in args {
        check_form(p, a)?;
    }
    let full = derived_bracket(p.deformed_lie_derivative(), Parity::Odd, args);
    Ok(full.hbar_coefficient(args.len() as u32))
}

/// Higher Schouten bracket as the Koszul–Schouten bracket of the degree-`r`
/// component of `P` alone.
pub fn higher_schouten_bracket_by_component(p: &HigherPoissonStructure, args: &[Poly]) -> Result<Poly> {
    for a in args {
        check_form(p, a)?;
    }
    let op = p.component_lie_derivative(args.len() as u32);
    Ok(derived_bracket(&op, Parity::Odd, args))
}

/// Higher Schouten bracket through the total symbol:
/// `{…{{K_P, a1}, a2}…, ar}` on the zero section of `T*(ΠTM)`.
pub fn higher_schouten_bracket_by_symbol(p: &HigherPoissonStructure, args: &[Poly]) -> Result<Poly> {
    for a in args {
        check_form(p, a)?;
    }
    let mut acc = p.lie_derivative().total_symbol();
    for a in args {
        acc = poisson_bracket(&acc, a);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc.restrict_zero(&[VarKind::Momentum, VarKind::FormMomentum]))
}
