//! Small reference structures used throughout the tests and benches.

use crate::manifold::Manifold;
use crate::parity::Parity;
use crate::phase::HigherPoissonStructure;
use crate::poly::Poly;

/// `M = R²`, `P = s(x)·s(y)`.
pub fn f1() -> HigherPoissonStructure {
    let m = Manifold::new([("x", Parity::Even), ("y", Parity::Even)]).unwrap();
    let p = Poly::var(m.s(0)) * Poly::var(m.s(1));
    HigherPoissonStructure::new(m, p).unwrap()
}

/// `M = R^{2|1}`, `P = s(x)·s(y)·s(th)`.
pub fn f2() -> HigherPoissonStructure {
    let m = Manifold::new([("x", Parity::Even), ("y", Parity::Even), ("th", Parity::Odd)]).unwrap();
    let p = Poly::var(m.s(0)) * Poly::var(m.s(1)) * Poly::var(m.s(2));
    HigherPoissonStructure::new(m, p).unwrap()
}

/// `M = R`, `P = x`.
pub fn f3() -> HigherPoissonStructure {
    let m = Manifold::new([("x", Parity::Even)]).unwrap();
    let p = Poly::var(m.x(0));
    HigherPoissonStructure::new(m, p).unwrap()
}

/// `M = R²`, `P = x·s(x)·s(y)`.
pub fn f4() -> HigherPoissonStructure {
    let m = Manifold::new([("x", Parity::Even), ("y", Parity::Even)]).unwrap();
    let p = Poly::var(m.x(0)) * Poly::var(m.s(0)) * Poly::var(m.s(1));
    HigherPoissonStructure::new(m, p).unwrap()
}

/// All four fixtures with their labels.
pub fn all() -> Vec<(&'static str, HigherPoissonStructure)> {
    vec![("F1", f1()), ("F2", f2()), ("F3", f3()), ("F4", f4())]
}
