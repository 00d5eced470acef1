use std::fmt::Write;

use num_traits::{One, Signed};

use crate::manifold::Manifold;
use crate::operator::DiffOperator;
use crate::poly::{Monomial, Poly, Rational};

/// Canonical rendering of a polynomial.
///
/// Terms appear in canonical order joined by ` + ` / ` - `; unit
/// coefficients are omitted, so `-s(x)*s(y)` is printed rather than
/// `-1 * s(x)*s(y)`. Zero prints as `0`.
pub fn print(manifold: &Manifold, p: &Poly) -> String {
    let terms: Vec<(Rational, String)> = p
        .terms()
        .map(|(m, c)| (c.clone(), monomial(manifold, m)))
        .collect();
    join_terms(terms)
}

/// Rendering of a normal-ordered operator; derivatives print as `D(v)`.
pub fn print_operator(manifold: &Manifold, op: &DiffOperator) -> String {
    let terms: Vec<(Rational, String)> = op
        .terms()
        .map(|(m, w, c)| {
            let mut body = monomial(manifold, m);
            for (v, e) in w.factors() {
                for _ in 0..*e {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    write!(body, "D({})", manifold.var_name(*v)).unwrap();
                }
            }
            (c.clone(), body)
        })
        .collect();
    join_terms(terms)
}

fn monomial(manifold: &Manifold, m: &Monomial) -> String {
    let mut out = String::new();
    for (v, e) in m.factors() {
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(&manifold.var_name(*v));
        if *e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
    out
}

fn join_terms(terms: Vec<(Rational, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, body)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let magnitude = c.abs();
        if body.is_empty() {
            write!(out, "{magnitude}").unwrap();
        } else if magnitude.is_one() {
            out.push_str(&body);
        } else {
            write!(out, "{magnitude}*{body}").unwrap();
        }
    }
    out
}
