#![allow(dead_code)]

use std::sync::Arc;

use superbracket::parity::Parity;
use superbracket::poly::{Monomial, Poly, Var, VarKind};
use superbracket::{fixtures, Manifold};

pub fn f1_vars() -> Arc<Manifold> {
    fixtures::f1().manifold().clone()
}

pub fn f2_vars() -> Arc<Manifold> {
    fixtures::f2().manifold().clone()
}

pub fn kinds(m: &Manifold, kinds: &[VarKind]) -> Vec<Var> {
    kinds.iter().flat_map(|k| m.vars(*k)).collect()
}

fn parity_of(p: &Poly) -> Parity {
    p.parity().expect("homogeneous")
}

/// Split a monomial into single-variable factors in written order.
fn factors(m: &Monomial) -> Vec<Var> {
    m.factors()
        .iter()
        .flat_map(|(v, e)| std::iter::repeat(*v).take(*e as usize))
        .collect()
}

fn product(vars: &[Var]) -> Poly {
    vars.iter().fold(Poly::one(), |acc, v| acc * Poly::var(*v))
}

/// A graded bracket determined only by its values on generators, graded
/// antisymmetry `[Y,X] = -(-1)^{(X̃+k)(Ỹ+k)}[X,Y]` and the Leibniz rule
/// `[X,YZ] = [X,Y]Z + (-1)^{(X̃+k)Ỹ} Y[X,Z]`, where `k` is the parity of
/// the bracket.
pub struct AxiomaticBracket<F: Fn(Var, Var) -> Poly> {
    pub shift: Parity,
    pub generator: F,
}

impl<F: Fn(Var, Var) -> Poly> AxiomaticBracket<F> {
    pub fn eval(&self, x: &Poly, y: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let b = self.monomials(&factors(mx), &factors(my));
                out += &b.scale(&(cx * cy));
            }
        }
        out
    }

    fn monomials(&self, xs: &[Var], ys: &[Var]) -> Poly {
        if xs.is_empty() || ys.is_empty() {
            return Poly::zero();
        }
        if ys.len() > 1 {
            // [X, y1 Y'] = [X,y1]Y' + (-1)^{(X̃+k)ỹ1} y1 [X,Y']
            let x_parity = parity_of(&product(xs)) + self.shift;
            let (y1, rest) = (ys[0], &ys[1..]);
            let first = self.monomials(xs, &[y1]) * product(rest);
            let second = Poly::var(y1) * self.monomials(xs, rest);
            return if x_parity.times(y1.parity()).is_odd() {
                first - second
            } else {
                first + second
            };
        }
        if xs.len() > 1 {
            // swap to put the product in the second slot
            let xp = parity_of(&product(xs)) + self.shift;
            let yp = ys[0].parity() + self.shift;
            let swapped = self.monomials(ys, xs);
            return if xp.times(yp).is_odd() { swapped } else { -swapped };
        }
        (self.generator)(xs[0], ys[0])
    }
}

/// Schouten bracket from `[[x^A, s_B]] = δ` and odd-bracket axioms.
pub fn schouten_oracle(x: &Poly, y: &Poly) -> Poly {
    AxiomaticBracket {
        shift: Parity::Odd,
        generator: |u: Var, v: Var| match (u.kind(), v.kind()) {
            (VarKind::Base, VarKind::AnticotangentFiber) if u.index() == v.index() => Poly::one(),
            (VarKind::AnticotangentFiber, VarKind::Base) if u.index() == v.index() => {
                // [[s, x]] = -(-1)^{(s̃+1)(x̃+1)} [[x, s]] = -(-1)^{x̃(x̃+1)} = -1
                -Poly::one()
            }
            _ => Poly::zero(),
        },
    }
    .eval(x, y)
}

fn momentum_of(v: Var) -> Option<Var> {
    match v.kind() {
        VarKind::Base => Some(v.with_kind(VarKind::Momentum)),
        VarKind::AntitangentFiber => Some(v.with_kind(VarKind::FormMomentum)),
        VarKind::AnticotangentFiber => Some(v.with_kind(VarKind::MultivectorMomentum)),
        _ => None,
    }
}

/// Canonical even bracket from `{mom(q), q} = 1` and even-bracket axioms.
pub fn poisson_oracle(f: &Poly, g: &Poly) -> Poly {
    AxiomaticBracket {
        shift: Parity::Even,
        generator: |u: Var, v: Var| {
            if momentum_of(v) == Some(u) {
                Poly::one()
            } else if momentum_of(u) == Some(v) {
                // {q, mom} = -(-1)^{q̃ q̃} {mom, q}
                if u.parity().is_odd() {
                    Poly::one()
                } else {
                    -Poly::one()
                }
            } else {
                Poly::zero()
            }
        },
    }
    .eval(f, g)
}
