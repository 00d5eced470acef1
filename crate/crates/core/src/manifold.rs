//! Coordinate charts: a base supermanifold and the bundles built over it.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::poly::{Factor, Poly, Var, VarKind};

/// Identifiers that cannot name a base coordinate.
pub const RESERVED: &[&str] = &[
    "manifold", "let", "even", "odd", "s", "d", "p", "pi", "piup", "hbar",
];

/// A single global chart on a supermanifold: named base coordinates with
/// parities, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Manifold {
    coords: Vec<(String, Parity)>,
}

impl Manifold {
    pub fn new<S: Into<String>>(coords: impl IntoIterator<Item = (S, Parity)>) -> Result<Arc<Self>> {
        let coords: Vec<(String, Parity)> = coords.into_iter().map(|(n, p)| (n.into(), p)).collect();
        for (i, (name, _)) in coords.iter().enumerate() {
            if RESERVED.contains(&name.as_str()) {
                return Err(Error::InvalidManifold(format!("`{name}` is reserved")));
            }
            if coords[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidManifold(format!("`{name}` declared twice")));
            }
        }
        Ok(Arc::new(Manifold { coords }))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(String, Parity)] {
        &self.coords
    }

    pub fn name(&self, index: usize) -> &str {
        &self.coords[index].0
    }

    pub fn parity(&self, index: usize) -> Parity {
        self.coords[index].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|(n, _)| n == name)
    }

    pub fn var(&self, kind: VarKind, index: usize) -> Var {
        Var::new(kind, index, self.parity(index))
    }

    pub fn x(&self, index: usize) -> Var {
        self.var(VarKind::Base, index)
    }

    pub fn d(&self, index: usize) -> Var {
        self.var(VarKind::AntitangentFiber, index)
    }

    pub fn s(&self, index: usize) -> Var {
        self.var(VarKind::AnticotangentFiber, index)
    }

    pub fn p(&self, index: usize) -> Var {
        self.var(VarKind::Momentum, index)
    }

    pub fn pi(&self, index: usize) -> Var {
        self.var(VarKind::FormMomentum, index)
    }

    pub fn piup(&self, index: usize) -> Var {
        self.var(VarKind::MultivectorMomentum, index)
    }

    /// All variables of one family, in declaration order.
    pub fn vars(&self, kind: VarKind) -> Vec<Var> {
        (0..self.dim()).map(|i| self.var(kind, i)).collect()
    }

    /// Whether `v` is one of this chart's variables (with the right parity).
    pub fn declares(&self, v: Var) -> bool {
        v.kind() == VarKind::Hbar || (v.index() < self.dim() && self.parity(v.index()) == v.base_parity())
    }

    pub fn var_name(&self, v: Var) -> String {
        if v.kind() == VarKind::Hbar {
            return "hbar".to_string();
        }
        let base = self
            .coords
            .get(v.index())
            .map_or_else(|| format!("#{}", v.index()), |(n, _)| n.clone());
        match v.kind().prefix() {
            Some(prefix) => format!("{prefix}({base})"),
            None => base,
        }
    }

    /// Canonical text rendering of a polynomial over this chart.
    pub fn render(&self, p: &Poly) -> String {
        crate::dsl::print(self, p)
    }
}

/// The bundles over a base manifold that the engine works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bundle {
    /// `M` itself: functions of the base coordinates.
    Base,
    /// `ΠTM`: differential forms.
    PiT,
    /// `ΠT*M`: multivector fields.
    PiTStar,
    /// `T*(ΠTM)`: symbols of operators on forms.
    CotPiT,
    /// `T*(ΠT*M)`.
    CotPiTStar,
}

impl Bundle {
    pub fn allows(self, kind: VarKind) -> bool {
        use VarKind::*;
        match kind {
            Base | Hbar => true,
            AntitangentFiber => matches!(self, Bundle::PiT | Bundle::CotPiT),
            AnticotangentFiber => matches!(self, Bundle::PiTStar | Bundle::CotPiTStar),
            Momentum => matches!(self, Bundle::CotPiT | Bundle::CotPiTStar),
            FormMomentum => self == Bundle::CotPiT,
            MultivectorMomentum => self == Bundle::CotPiTStar,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Bundle::Base => "M",
            Bundle::PiT => "ΠTM",
            Bundle::PiTStar => "ΠT*M",
            Bundle::CotPiT => "T*(ΠTM)",
            Bundle::CotPiTStar => "T*(ΠT*M)",
        }
    }

    pub fn is_cotangent(self) -> bool {
        matches!(self, Bundle::CotPiT | Bundle::CotPiTStar)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A chart on one bundle over a base manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSystem {
    manifold: Arc<Manifold>,
    bundle: Bundle,
}

impl CoordinateSystem {
    pub fn new(manifold: Arc<Manifold>, bundle: Bundle) -> Self {
        CoordinateSystem { manifold, bundle }
    }

    pub fn manifold(&self) -> &Arc<Manifold> {
        &self.manifold
    }

    pub fn bundle(&self) -> Bundle {
        self.bundle
    }

    /// Every coordinate of the bundle, in global order (without `hbar`).
    pub fn variables(&self) -> Vec<Var> {
        use VarKind::*;
        [Base, AntitangentFiber, AnticotangentFiber, Momentum, FormMomentum, MultivectorMomentum]
            .into_iter()
            .filter(|k| self.bundle.allows(*k))
            .flat_map(|k| self.manifold.vars(k))
            .collect()
    }

    pub fn declares(&self, v: Var) -> bool {
        self.bundle.allows(v.kind()) && self.manifold.declares(v)
    }

    /// Canonical form of a raw product whose variables must belong to this
    /// chart.
    pub fn normalize(&self, raw: &[Factor]) -> Result<Poly> {
        for f in raw {
            if let Factor::Var(v) = f {
                if !self.declares(*v) {
                    return Err(Error::UnknownVariable(self.manifold.var_name(*v)));
                }
            }
        }
        Ok(Poly::normalize(raw))
    }

    /// Check that `p` only uses variables of this chart.
    pub fn check(&self, p: &Poly) -> Result<()> {
        for v in p.variables() {
            if !self.manifold.declares(v) {
                return Err(Error::UnknownVariable(self.manifold.var_name(v)));
            }
            if !self.bundle.allows(v.kind()) {
                return Err(Error::WrongBundle {
                    expected: self.bundle.label(),
                    found: self.manifold.var_name(v),
                });
            }
        }
        Ok(())
    }

    pub fn same_chart(&self, other: &CoordinateSystem) -> bool {
        self.bundle == other.bundle && (Arc::ptr_eq(&self.manifold, &other.manifold) || self.manifold == other.manifold)
    }
}

/// Manifolds are compared structurally when the `Arc`s differ.
pub(crate) fn same_manifold(a: &Arc<Manifold>, b: &Arc<Manifold>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Arc<Manifold> {
        Manifold::new([("x", Parity::Even), ("y", Parity::Even)]).unwrap()
    }

    #[test]
    fn rejects_reserved_and_duplicate_names() {
        assert!(Manifold::new([("s", Parity::Even)]).is_err());
        assert!(Manifold::new([("x", Parity::Even), ("x", Parity::Odd)]).is_err());
    }

    #[test]
    fn bundle_variable_sets() {
        let m = plane();
        let cot = CoordinateSystem::new(m.clone(), Bundle::CotPiT);
        assert_eq!(cot.variables().len(), 8);
        let pit = CoordinateSystem::new(m.clone(), Bundle::PiT);
        assert!(pit.declares(m.d(1)));
        assert!(!pit.declares(m.s(1)));
    }

    #[test]
    fn normalize_rejects_undeclared() {
        let m = plane();
        let sys = CoordinateSystem::new(m.clone(), Bundle::PiTStar);
        let stranger = Var::new(VarKind::Base, 5, Parity::Even);
        assert!(matches!(
            sys.normalize(&[Factor::Var(stranger)]),
            Err(Error::UnknownVariable(_))
        ));
        assert!(sys.normalize(&[Factor::Var(m.s(0)), Factor::Var(m.x(1))]).is_ok());
    }

    #[test]
    fn names() {
        let m = plane();
        assert_eq!(m.var_name(m.s(1)), "s(y)");
        assert_eq!(m.var_name(m.piup(0)), "piup(x)");
        assert_eq!(m.var_name(Var::hbar()), "hbar");
    }
}
