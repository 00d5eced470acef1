use superbracket::brackets::{
    check_d_derivation_rule, check_kp_hamiltonian, check_leibniz_defect, check_lemma_poisson,
    check_prop3, check_strict_leibniz, check_theorem_symbol_form,
};
use superbracket::operator::{
    check_lie_morphism, check_naturality, check_nilpotent, check_symbol_squares_to_zero,
};
use superbracket::phase::schouten_bracket;
use superbracket::random::Sampler;
use superbracket::{BracketReport, HigherPoissonStructure, Poly, Residual};

const TRIALS: usize = 3;
const MAX_ARITY: usize = 3;

/// Every identity of the engine evaluated on `p`, with random arguments
/// drawn from `seed`.
pub fn verify_suite(p: &HigherPoissonStructure, seed: u64) -> Vec<BracketReport> {
    let m = p.manifold().clone();
    let mut s = Sampler::new(m.clone(), seed);
    let mut out = Vec::new();
    let mut push = |r: superbracket::Result<BracketReport>| {
        out.push(r.expect("sampled arguments are homogeneous").with_seed(seed));
    };

    push(Ok(BracketReport::new(
        "master_equation",
        vec![m.render(p.body())],
        Residual::Poly(schouten_bracket(p.body(), p.body())),
    )));
    push(Ok(check_nilpotent(p)));
    push(Ok(check_symbol_squares_to_zero(p)));
    push(Ok(check_kp_hamiltonian(p)));

    for _ in 0..TRIALS {
        let x = s.any_multivector(3);
        let y = s.any_multivector(3);
        push(Ok(check_lie_morphism(&m, &x, &y)));
        push(Ok(check_naturality(&m, &x)));
    }

    let functions = |s: &mut Sampler, n: usize| -> Vec<Poly> { (0..n).map(|_| s.any_base_function()).collect() };
    let forms = |s: &mut Sampler, n: usize| -> Vec<Poly> { (0..n).map(|_| s.any_form(2)).collect() };

    push(check_prop3(p, &[]));
    for r in 1..=MAX_ARITY {
        for _ in 0..TRIALS {
            let fs = functions(&mut s, r);
            push(check_lemma_poisson(p, &fs));
            push(check_prop3(p, &fs));

            let args = forms(&mut s, r);
            push(check_d_derivation_rule(p, &args));
            push(check_theorem_symbol_form(p, &args));
            let extra = s.any_form(2);
            push(check_strict_leibniz(p, &args, &extra));

            let prefix = forms(&mut s, r - 1);
            let b = s.any_form(2);
            let c = s.any_form(2);
            push(check_leibniz_defect(p, &prefix, &b, &c));
        }
    }
    out
}
