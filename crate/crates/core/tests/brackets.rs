mod common;

use proptest::prelude::*;
use rand::Rng;
use superbracket::brackets::{
    check_d_derivation_rule, check_leibniz_defect, check_lemma_poisson, check_prop3,
    check_strict_leibniz, check_theorem_symbol_form, derived_bracket, higher_poisson_bracket,
    higher_schouten_bracket, higher_schouten_bracket_by_component, jacobiator, ks_bracket,
    BracketHierarchy, HierarchyKind,
};
use superbracket::parity::Parity;
use superbracket::phase::form_degree;
use superbracket::poly::{Poly, VarKind};
use superbracket::random::Sampler;
use superbracket::{fixtures, HigherPoissonStructure};

fn signed(negative: bool, p: Poly) -> Poly {
    if negative {
        -p
    } else {
        p
    }
}

fn fixture(i: usize) -> HigherPoissonStructure {
    fixtures::all().swap_remove(i % 4).1
}

/// Random form of a single form degree.
fn pure_form(s: &mut Sampler, degree: u32) -> Poly {
    for _ in 0..16 {
        let parity = s.parity();
        let f = s.form(parity, 3).degree_part(VarKind::AntitangentFiber, degree);
        if !f.is_zero() {
            return f;
        }
    }
    Poly::zero()
}

fn args_for(s: &mut Sampler, kind: HierarchyKind, n: usize) -> Vec<Poly> {
    (0..n)
        .map(|_| match kind {
            HierarchyKind::HigherPoisson => s.any_base_function(),
            _ => s.any_form(2),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hierarchies_are_graded_symmetric(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        for kind in HierarchyKind::all() {
            let h = BracketHierarchy::new(kind, &p);
            let mut args = args_for(&mut s, kind, 3);
            let i = s.rng().gen_range(0..2);
            let base = h.bracket(&args).unwrap();
            let (a, b) = (args[i].parity().unwrap(), args[i + 1].parity().unwrap());
            let sign = kind.sign_parity(a).times(kind.sign_parity(b)).is_odd();
            args.swap(i, i + 1);
            prop_assert_eq!(h.bracket(&args).unwrap(), signed(sign, base), "{:?}", kind);
        }
    }

    #[test]
    fn ks_brackets_terminate_above_degree(seed in any::<u64>()) {
        for (p, r) in [(fixtures::f1(), 3usize), (fixtures::f2(), 4)] {
            let mut s = Sampler::new(p.manifold().clone(), seed);
            let args: Vec<Poly> = (0..r).map(|_| s.any_form(2)).collect();
            prop_assert!(ks_bracket(&p, &args).unwrap().is_zero());
        }
    }

    #[test]
    fn next_bracket_is_the_leibniz_defect(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        let k = s.rng().gen_range(0..=2);
        let prefix: Vec<Poly> = (0..k).map(|_| s.any_form(2)).collect();
        let (b, c) = (s.any_form(2), s.any_form(2));
        let r = check_leibniz_defect(&p, &prefix, &b, &c).unwrap();
        prop_assert!(r.passed, "{}", r.residual.render(p.manifold()));
    }

    #[test]
    fn schouten_brackets_obey_strict_leibniz(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        let k = s.rng().gen_range(1..=3);
        let args: Vec<Poly> = (0..k).map(|_| s.any_form(2)).collect();
        let extra = s.any_form(2);
        let r = check_strict_leibniz(&p, &args, &extra).unwrap();
        prop_assert!(r.passed, "{}", r.residual.render(p.manifold()));
    }

    #[test]
    fn exterior_derivative_is_a_derivation_of_the_brackets(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        let k = s.rng().gen_range(0..=3);
        let args: Vec<Poly> = (0..k).map(|_| s.any_form(2)).collect();
        let r = check_d_derivation_rule(&p, &args).unwrap();
        prop_assert!(r.passed, "{}", r.residual.render(p.manifold()));
    }

    #[test]
    fn poisson_and_ks_hierarchies_are_related(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        let k = s.rng().gen_range(1..=3);
        let args: Vec<Poly> = (0..k).map(|_| s.any_base_function()).collect();
        let r = check_lemma_poisson(&p, &args).unwrap();
        prop_assert!(r.passed, "{}", r.residual.render(p.manifold()));
        let r = check_prop3(&p, &args).unwrap();
        prop_assert!(r.passed, "{}", r.residual.render(p.manifold()));
    }

    #[test]
    fn three_routes_to_the_schouten_brackets(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        let k = s.rng().gen_range(1..=3);
        let args: Vec<Poly> = (0..k).map(|_| s.any_form(2)).collect();
        let r = check_theorem_symbol_form(&p, &args).unwrap();
        prop_assert!(r.passed, "{}", r.residual.render(p.manifold()));
    }

    #[test]
    fn jacobiators_vanish(seed in any::<u64>(), which in 0usize..4, n in 1usize..=3) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        for kind in HierarchyKind::all() {
            let args = args_for(&mut s, kind, n);
            let r = jacobiator(&p, kind, &args, n).unwrap();
            prop_assert!(r.passed, "{:?}: {}", kind, r.residual.render(p.manifold()));
        }
    }

    #[test]
    fn form_degree_bookkeeping(seed in any::<u64>(), which in 0usize..4) {
        let p = fixture(which);
        let mut s = Sampler::new(p.manifold().clone(), seed);
        let r = s.rng().gen_range(0..=3usize);
        let degrees: Vec<u32> = (0..r).map(|_| s.rng().gen_range(0..=2)).collect();
        let args: Vec<Poly> = degrees.iter().map(|&d| pure_form(&mut s, d)).collect();
        let total: u32 = degrees.iter().sum();
        // each degree-k component shifts form degree by 1 - k
        let mut sum = Poly::zero();
        for (&k, _) in p.components() {
            let part = derived_bracket(&p.component_lie_derivative(k), Parity::Odd, &args);
            if !part.is_zero() {
                prop_assert_eq!(form_degree(&part), Some(total + 1 - k));
            }
            sum += &part;
        }
        prop_assert_eq!(&sum, &ks_bracket(&p, &args).unwrap());
        // the r-th Schouten bracket and the top KS bracket shift by 1 - r
        let schouten = higher_schouten_bracket(&p, &args).unwrap();
        if !schouten.is_zero() {
            prop_assert_eq!(form_degree(&schouten) .map(|d| d as i64), Some(total as i64 + 1 - r as i64));
        }
        if r as u32 == p.degree() {
            let top = ks_bracket(&p, &args).unwrap();
            if !top.is_zero() {
                prop_assert_eq!(form_degree(&top).map(|d| d as i64), Some(total as i64 + 1 - r as i64));
            }
        }
    }
}

#[test]
fn jacobiators_at_arity_four() {
    for (label, p) in fixtures::all() {
        let mut s = Sampler::new(p.manifold().clone(), 4);
        for kind in HierarchyKind::all() {
            for _ in 0..3 {
                let args = args_for(&mut s, kind, 4);
                let r = jacobiator(&p, kind, &args, 4).unwrap();
                assert!(r.passed, "{label} {kind:?}: {}", r.residual.render(p.manifold()));
            }
        }
    }
}

#[test]
fn classical_jacobi_by_hand() {
    let f1 = fixtures::f1();
    let m = f1.manifold().clone();
    let (x, y) = (Poly::var(m.x(0)), Poly::var(m.x(1)));
    let xy = &x * &y;
    let b = |f: &Poly, g: &Poly| higher_poisson_bracket(&f1, &[f.clone(), g.clone()]).unwrap();
    // shifted parities are all odd: unshuffle signs +, -, +
    let expanded = b(&b(&x, &y), &xy) - b(&b(&x, &xy), &y) + b(&b(&y, &xy), &x);
    assert!(expanded.is_zero());
    let r = jacobiator(&f1, HierarchyKind::HigherPoisson, &[x, y, xy], 3).unwrap();
    assert!(r.passed);
}

#[test]
fn classical_sanity_on_the_plane() {
    let f1 = fixtures::f1();
    let m = f1.manifold().clone();
    let (x, y) = (Poly::var(m.x(0)), Poly::var(m.x(1)));
    let xy = higher_poisson_bracket(&f1, &[x.clone(), y.clone()]).unwrap();
    assert_eq!(xy, Poly::int(-1));
    // [df, dg] = d{f, g}
    let f = &x * &x + y.clone();
    let g = &x * &y;
    let d = superbracket::operator::exterior_derivative(&m);
    let lhs = ks_bracket(&f1, &[d.apply(&f), d.apply(&g)]).unwrap();
    let rhs = d.apply(&higher_poisson_bracket(&f1, &[f, g]).unwrap());
    assert_eq!(lhs, rhs);
    assert!(!rhs.is_zero());
}

#[test]
fn curved_structure_has_nonzero_zero_bracket() {
    let f3 = fixtures::f3();
    let m = f3.manifold().clone();
    assert_eq!(ks_bracket(&f3, &[]).unwrap(), Poly::var(m.d(0)));
    let x = Poly::var(m.x(0));
    // Φ1(Φ0) ≠ 0 would break J^0; the curvature enters J^1 through Φ2(Φ0, x)
    assert!(ks_bracket(&f3, &[Poly::var(m.d(0))]).unwrap().is_zero());
    for kind in HierarchyKind::all() {
        assert!(jacobiator(&f3, kind, &[], 0).unwrap().passed);
        assert!(jacobiator(&f3, kind, &[x.clone()], 1).unwrap().passed);
    }
}

#[test]
fn schouten_routes_agree_on_fixtures() {
    for (_, p) in fixtures::all() {
        let m = p.manifold().clone();
        let args: Vec<Poly> = (0..m.dim()).map(|i| Poly::var(m.d(i))).collect();
        assert_eq!(
            higher_schouten_bracket(&p, &args).unwrap(),
            higher_schouten_bracket_by_component(&p, &args).unwrap()
        );
    }
}
