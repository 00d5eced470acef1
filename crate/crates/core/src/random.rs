//! Seeded random polynomials for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::manifold::Manifold;
use crate::parity::Parity;
use crate::poly::{rational, Monomial, Poly, Var, VarKind};

/// Reproducible sampler of polynomials over the variables of one manifold.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    manifold: Arc<Manifold>,
    seed: u64,
}

impl Sampler {
    pub fn new(manifold: Arc<Manifold>, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            manifold,
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn manifold(&self) -> &Arc<Manifold> {
        &self.manifold
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn parity(&mut self) -> Parity {
        Parity::from_bool(self.rng.gen_bool(0.5))
    }

    fn coefficient(&mut self) -> crate::poly::Rational {
        let mut n = self.rng.gen_range(1..=3);
        if self.rng.gen_bool(0.5) {
            n = -n;
        }
        let d = if self.rng.gen_bool(0.2) { 2 } else { 1 };
        rational(n, d)
    }

    /// A monomial with base exponents ≤ 2 and at most `max_fiber` fiber
    /// factors drawn from `fiber`.
    fn monomial(&mut self, fiber: VarKind, max_fiber: u32) -> Monomial {
        let m = self.manifold.clone();
        let mut p = Poly::one();
        for i in 0..m.dim() {
            let max = if m.parity(i).is_odd() { 1 } else { 2 };
            let e = self.rng.gen_range(0..=max);
            if e > 0 && self.rng.gen_bool(0.5) {
                p = p * Poly::var(m.x(i)).pow(e);
            }
        }
        let k = self.rng.gen_range(0..=max_fiber);
        let mut fibers: Vec<Var> = m.vars(fiber);
        fibers.shuffle(&mut self.rng);
        let mut taken = 0;
        for v in fibers {
            if taken == k {
                break;
            }
            // even fiber variables may repeat
            let e = if v.parity().is_even() && k - taken >= 2 && self.rng.gen_bool(0.3) { 2 } else { 1 };
            p = p * Poly::var(v).pow(e);
            taken += e;
        }
        let mono = p.terms().next().map(|(mono, _)| mono.clone());
        mono.unwrap_or_else(Monomial::one)
    }

    fn homogeneous(&mut self, fiber: VarKind, max_fiber: u32, parity: Parity, terms: usize) -> Poly {
        let mut out = Poly::zero();
        for _ in 0..terms * 8 {
            if out.len() >= terms {
                break;
            }
            let mono = self.monomial(fiber, max_fiber);
            if mono.parity() == parity {
                let c = self.coefficient();
                out.add_term(c, mono);
            }
        }
        out
    }

    /// Parity-homogeneous function on `M`; zero if no such monomial exists.
    pub fn base_function(&mut self, parity: Parity) -> Poly {
        let terms = self.rng.gen_range(1..=3);
        self.homogeneous(VarKind::Base, 0, parity, terms)
    }

    /// Parity-homogeneous differential form of form degree ≤ `max_degree`.
    pub fn form(&mut self, parity: Parity, max_degree: u32) -> Poly {
        let terms = self.rng.gen_range(1..=3);
        self.homogeneous(VarKind::AntitangentFiber, max_degree, parity, terms)
    }

    /// Parity-homogeneous multivector of degree ≤ `max_degree`.
    pub fn multivector(&mut self, parity: Parity, max_degree: u32) -> Poly {
        let terms = self.rng.gen_range(1..=3);
        self.homogeneous(VarKind::AnticotangentFiber, max_degree, parity, terms)
    }

    /// Parity-homogeneous polynomial in the given variables, at most
    /// `max_factors` distinct factors per term and exponents ≤ 2.
    pub fn polynomial(&mut self, vars: &[Var], parity: Parity, max_factors: usize) -> Poly {
        let terms = self.rng.gen_range(1..=3);
        let mut out = Poly::zero();
        for _ in 0..terms * 8 {
            if out.len() >= terms {
                break;
            }
            let k = self.rng.gen_range(0..=max_factors.min(vars.len()));
            let chosen: Vec<Var> = vars.choose_multiple(&mut self.rng, k).cloned().collect();
            let mut p = Poly::constant(self.coefficient());
            for v in chosen {
                let e = if v.parity().is_even() { self.rng.gen_range(1..=2) } else { 1 };
                p = p * Poly::var(v).pow(e);
            }
            if p.parity() == Some(parity) {
                out += &p;
            }
        }
        out
    }

    /// Random-parity function, retrying a few times to get something nonzero.
    pub fn any_base_function(&mut self) -> Poly {
        for _ in 0..8 {
            let parity = self.parity();
            let f = self.base_function(parity);
            if !f.is_zero() {
                return f;
            }
        }
        self.base_function(Parity::Even)
    }

    pub fn any_form(&mut self, max_degree: u32) -> Poly {
        for _ in 0..8 {
            let parity = self.parity();
            let f = self.form(parity, max_degree);
            if !f.is_zero() {
                return f;
            }
        }
        self.form(Parity::Even, max_degree)
    }

    pub fn any_multivector(&mut self, max_degree: u32) -> Poly {
        for _ in 0..8 {
            let parity = self.parity();
            let f = self.multivector(parity, max_degree);
            if !f.is_zero() {
                return f;
            }
        }
        self.multivector(Parity::Even, max_degree)
    }
}
