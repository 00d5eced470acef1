use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::operator::{exterior_derivative, interior_product, lie_derivative_poly};
use crate::parity::Parity;
use crate::phase::{
    hamiltonian_vector_field, linear_hamiltonian, r_pullback, HigherPoissonStructure,
};
use crate::poly::{Poly, Var, VarKind};
use crate::report::{BracketReport, Residual};

use super::{
    check_base_function, check_form, higher_poisson_bracket, higher_schouten_bracket,
    higher_schouten_bracket_by_component, higher_schouten_bracket_by_symbol, ks_bracket,
};

fn homogeneous(p: &HigherPoissonStructure, a: &Poly) -> Result<Parity> {
    a.parity()
        .ok_or_else(|| Error::Inhomogeneous(p.manifold().render(a)))
}

fn render_all(p: &HigherPoissonStructure, args: &[Poly]) -> Vec<String> {
    args.iter().map(|a| p.manifold().render(a)).collect()
}

fn signed(negative: bool, p: Poly) -> Poly {
    if negative {
        -p
    } else {
        p
    }
}

/// `τ = 1 + Σ ã_i` over a prefix of arguments.
fn tau(p: &HigherPoissonStructure, prefix: &[Poly]) -> Result<Parity> {
    let mut t = Parity::Odd;
    for a in prefix {
        t += homogeneous(p, a)?;
    }
    Ok(t)
}

/// Strict Leibniz rule of the Schouten brackets in the last slot:
/// `(a…, a_r β) = (a…, a_r) β + (-1)^{τ ã_r} a_r (a…, β)`,
/// `τ = 1 + Σ_{i<r} ã_i`.
pub fn check_strict_leibniz(
    p: &HigherPoissonStructure,
    args: &[Poly],
    extra: &Poly,
) -> Result<BracketReport> {
    let Some((last, prefix)) = args.split_last() else {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    };
    let t = tau(p, prefix)?;
    let last_parity = homogeneous(p, last)?;
    homogeneous(p, extra)?;

    let with = |tail: Poly| -> Result<Poly> {
        let mut v = prefix.to_vec();
        v.push(tail);
        higher_schouten_bracket(p, &v)
    };
    let lhs = with(last * extra)?;
    let first = with(last.clone())? * extra.clone();
    let second = signed(t.times(last_parity).is_odd(), last * &with(extra.clone())?);
    let mut rendered = render_all(p, args);
    rendered.push(p.manifold().render(extra));
    Ok(BracketReport::new(
        "strict_leibniz",
        rendered,
        Residual::Poly(lhs - first - second),
    ))
}

/// The `(r+1)`-bracket is the Leibniz defect of the `r`-bracket:
/// `[a…, bc] = [a…, b] c + (-1)^{τ b̃} b [a…, c] + [a…, b, c]`.
pub fn check_leibniz_defect(
    p: &HigherPoissonStructure,
    prefix: &[Poly],
    b: &Poly,
    c: &Poly,
) -> Result<BracketReport> {
    let t = tau(p, prefix)?;
    let b_parity = homogeneous(p, b)?;
    homogeneous(p, c)?;
    let with = |tail: &[Poly]| -> Result<Poly> {
        let mut v = prefix.to_vec();
        v.extend_from_slice(tail);
        ks_bracket(p, &v)
    };
    let lhs = with(&[b * c])?;
    let first = with(&[b.clone()])? * c.clone();
    let second = signed(t.times(b_parity).is_odd(), b * &with(&[c.clone()])?);
    let higher = with(&[b.clone(), c.clone()])?;
    let mut rendered = render_all(p, prefix);
    rendered.push(p.manifold().render(b));
    rendered.push(p.manifold().render(c));
    Ok(BracketReport::new(
        "leibniz_defect",
        rendered,
        Residual::Poly(lhs - first - second - higher),
    ))
}

/// `d[a_1,…,a_r] + Σ_i (-1)^{ε_i} [a_1,…,d a_i,…,a_r] = 0`,
/// `ε_i = Σ_{k<i} ã_k`.
pub fn check_d_derivation_rule(p: &HigherPoissonStructure, args: &[Poly]) -> Result<BracketReport> {
    let d = exterior_derivative(p.manifold());
    let mut total = d.apply(&ks_bracket(p, args)?);
    let mut eps = Parity::Even;
    for (i, a) in args.iter().enumerate() {
        let mut shifted = args.to_vec();
        shifted[i] = d.apply(a);
        total += &signed(eps.is_odd(), ks_bracket(p, &shifted)?);
        eps += homogeneous(p, a)?;
    }
    Ok(BracketReport::new(
        "d_derivation_rule",
        render_all(p, args),
        Residual::Poly(total),
    ))
}

/// `{f_1,…,f_r} = -L_{P̂r}(f_1 df_2…df_r) = i_{P̂r}(df_1…df_r)`.
pub fn check_lemma_poisson(p: &HigherPoissonStructure, args: &[Poly]) -> Result<BracketReport> {
    if args.is_empty() {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    for f in args {
        check_base_function(p, f)?;
    }
    let m = p.manifold();
    let d = exterior_derivative(m);
    let component = p.component(args.len() as u32);
    let bracket = higher_poisson_bracket(p, args)?;

    let mut mixed = args[0].clone();
    let mut exact = d.apply(&args[0]);
    for f in &args[1..] {
        let df = d.apply(f);
        mixed = mixed * df.clone();
        exact = exact * df;
    }
    let by_lie = -lie_derivative_poly(m, &component).apply(&mixed);
    let by_interior = interior_product(&component).apply(&exact);
    let restrict = |q: Poly| q.restrict_zero(&[VarKind::AntitangentFiber]);
    Ok(BracketReport::new(
        "lemma_poisson",
        render_all(p, args),
        Residual::Parts(vec![
            ("poisson-lie".into(), Residual::Poly(&bracket - &restrict(by_lie))),
            ("poisson-interior".into(), Residual::Poly(bracket - restrict(by_interior))),
        ]),
    ))
}

/// The four relations between the Poisson and Koszul–Schouten hierarchies:
/// 1. `[f_1, df_2,…,df_r] = -{f_1,…,f_r}` (r ≥ 1);
/// 2. `[f_1,…,f_r] = 0` (r > 1);
/// 3. `[∅] = d{∅}`;
/// 4. `[df_1,…,df_r] = d{f_1,…,f_r}` (r ≥ 1).
pub fn check_prop3(p: &HigherPoissonStructure, args: &[Poly]) -> Result<BracketReport> {
    for f in args {
        check_base_function(p, f)?;
    }
    let d = exterior_derivative(p.manifold());
    let r = args.len();
    let exact: Vec<Poly> = args.iter().map(|f| d.apply(f)).collect();
    let mut parts = Vec::new();
    let poisson = higher_poisson_bracket(p, args)?;
    if r >= 1 {
        let mut mixed = exact.clone();
        mixed[0] = args[0].clone();
        parts.push(("item1".to_string(), Residual::Poly(ks_bracket(p, &mixed)? + poisson.clone())));
    }
    if r > 1 {
        parts.push(("item2".to_string(), Residual::Poly(ks_bracket(p, args)?)));
    }
    let empty = d.apply(&higher_poisson_bracket(p, &[])?);
    parts.push(("item3".to_string(), Residual::Poly(ks_bracket(p, &[])? - empty)));
    if r >= 1 {
        parts.push(("item4".to_string(), Residual::Poly(ks_bracket(p, &exact)? - d.apply(&poisson))));
    }
    Ok(BracketReport::new("prop3", render_all(p, args), Residual::Parts(parts)))
}

/// The Schouten bracket computed by the `hbar` limit, by the degree-`r`
/// component alone and through nested canonical brackets with `K_P`.
pub fn check_theorem_symbol_form(p: &HigherPoissonStructure, args: &[Poly]) -> Result<BracketReport> {
    if args.is_empty() {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    for a in args {
        check_form(p, a)?;
    }
    let by_hbar = higher_schouten_bracket(p, args)?;
    let by_component = higher_schouten_bracket_by_component(p, args)?;
    let by_symbol = higher_schouten_bracket_by_symbol(p, args)?;
    Ok(BracketReport::new(
        "theorem_symbol_form",
        render_all(p, args),
        Residual::Parts(vec![
            ("hbar-component".into(), Residual::Poly(&by_hbar - &by_component)),
            ("hbar-symbol".into(), Residual::Poly(by_hbar - by_symbol)),
        ]),
    ))
}

/// Closed form of the total symbol of `L_P` on `T*(ΠTM)`:
/// `K_P = Σ_B d(x^B)·∂P/∂x^B|_{s→π} - Σ_B (P ∂_R/∂s_B)|_{s→π}·p_B`.
pub fn explicit_symbol(p: &HigherPoissonStructure) -> Poly {
    let m = p.manifold();
    let to_pi: BTreeMap<Var, Poly> = (0..m.dim()).map(|i| (m.s(i), Poly::var(m.pi(i)))).collect();
    let lift = |q: Poly| q.substitute(&to_pi).expect("parity preserving");
    let mut out = Poly::zero();
    for i in 0..m.dim() {
        out += &(Poly::var(m.d(i)) * lift(p.body().partial(m.x(i))));
        out -= &(lift(p.body().right_partial(m.s(i))) * Poly::var(m.p(i)));
    }
    out
}

/// Closed form of the pullback of `K_P` to `T*(ΠT*M)`:
/// `Σ_B (-1)^{B̃} ∂P/∂x^B·π^B - Σ_B (P ∂_R/∂s_B)·p_B`.
pub fn explicit_pullback_symbol(p: &HigherPoissonStructure) -> Poly {
    let m = p.manifold();
    let mut out = Poly::zero();
    for i in 0..m.dim() {
        let first = p.body().partial(m.x(i)) * Poly::var(m.piup(i));
        out += &signed(m.parity(i).is_odd(), first);
        out -= &(p.body().right_partial(m.s(i)) * Poly::var(m.p(i)));
    }
    out
}

/// `R*K_P` is the linear Hamiltonian of `Q_P = -[[P, .]]`; both sides are
/// also compared with the closed forms of `K_P` and `R*K_P`.
pub fn check_kp_hamiltonian(p: &HigherPoissonStructure) -> BracketReport {
    let k = p.lie_derivative().total_symbol();
    let pulled = r_pullback(&k);
    let hamiltonian = linear_hamiltonian(&hamiltonian_vector_field(p));
    BracketReport::new(
        "kp_hamiltonian",
        vec![p.manifold().render(p.body())],
        Residual::Parts(vec![
            ("pullback-hamiltonian".into(), Residual::Poly(&pulled - &hamiltonian)),
            ("pullback-explicit".into(), Residual::Poly(pulled - explicit_pullback_symbol(p))),
            ("symbol-explicit".into(), Residual::Poly(k - explicit_symbol(p))),
        ]),
    )
}
