use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::parity::Parity;
use crate::phase::HigherPoissonStructure;
use crate::poly::Poly;
use crate::report::{BracketReport, Residual};

use super::{BracketHierarchy, HierarchyKind};

/// All `(i, n-i)` unshuffles of `0..n` as `(first block, second block)`,
/// first blocks in lexicographic order.
pub fn unshuffles(n: usize, i: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    fn choose(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for j in start..=n - k {
            prefix.push(j);
            choose(j + 1, n, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut firsts = Vec::new();
    if i <= n {
        choose(0, n, i, &mut Vec::new(), &mut firsts);
    }
    firsts
        .into_iter()
        .map(|first| {
            let second = (0..n).filter(|j| !first.contains(j)).collect();
            (first, second)
        })
        .collect()
}

/// Koszul sign of moving `first` in front of `second`: one factor `-1`
/// for each odd pair that changes relative order.
fn koszul_negative(first: &[usize], second: &[usize], parities: &[Parity]) -> bool {
    let mut negative = false;
    for &k in first {
        for &j in second {
            if j < k && parities[j].times(parities[k]).is_odd() {
                negative = !negative;
            }
        }
    }
    negative
}

/// The `n`-th Jacobiator
/// `Σ_{i=0..n} Σ_σ ε(σ) Φ_{n-i+1}(Φ_i(a_σ(1),…,a_σ(i)), a_σ(i+1),…,a_σ(n))`
/// of one hierarchy, including the curvature term `i = 0`.
pub fn jacobiator(
    p: &HigherPoissonStructure,
    kind: HierarchyKind,
    args: &[Poly],
    n: usize,
) -> Result<BracketReport> {
    if n != args.len() {
        return Err(Error::ArityMismatch { expected: n, found: args.len() });
    }
    let hierarchy = BracketHierarchy::new(kind, p);
    let mut parities = Vec::with_capacity(n);
    for a in args {
        hierarchy.check_argument(a)?;
        let parity = a
            .parity()
            .ok_or_else(|| Error::Inhomogeneous(p.manifold().render(a)))?;
        parities.push(kind.sign_parity(parity));
    }

    let mut inner_cache: HashMap<Vec<usize>, Poly> = HashMap::new();
    let mut total = Poly::zero();
    for i in 0..=n {
        for (first, second) in unshuffles(n, i) {
            let inner = match inner_cache.get(&first) {
                Some(v) => v.clone(),
                None => {
                    let inner_args: Vec<Poly> = first.iter().map(|&k| args[k].clone()).collect();
                    let v = hierarchy.bracket(&inner_args)?;
                    inner_cache.insert(first.clone(), v.clone());
                    v
                }
            };
            if inner.is_zero() {
                continue;
            }
            let mut outer_args = Vec::with_capacity(second.len() + 1);
            outer_args.push(inner);
            outer_args.extend(second.iter().map(|&k| args[k].clone()));
            let term = hierarchy.bracket(&outer_args)?;
            if koszul_negative(&first, &second, &parities) {
                total -= &term;
            } else {
                total += &term;
            }
        }
    }
    let rendered = args.iter().map(|a| p.manifold().render(a)).collect();
    Ok(BracketReport::new(
        format!("jacobiator_{}_{}", kind.label(), n),
        rendered,
        Residual::Poly(total),
    ))
}
