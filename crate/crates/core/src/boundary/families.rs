//! The two automaton families acting on the boundary: proximal maps `g_k`
//! pushing `Ω^0` towards the base point, and minimality maps steering a
//! transversal towards a target transversal.

use crate::codes::{swap_perm, SlidingBlockCode1D};
use crate::marker::{MarkerRule, MarkerScheme};
use crate::symbolic::{Alphabet, BarOmegaPoint, Symbol};

use super::BoundaryError;

/// Start-marker length used by default: `2^k`.
pub fn default_marker_len(k: usize) -> usize {
    1 << k
}

/// The proximal involution `g_k` on `Ω^target`.
///
/// For target 0 the rules are `0^(2^k) [0^k <-> 1^k] 1^y 0` for `0 < y < k`
/// and, over larger alphabets, `0^(2^k) [0^k <-> 1^k] 1^y a` for `0 <= y < k`
/// and every `a` outside `{0, 1}`. Other targets relabel symbols by the
/// transposition `0 <-> target`.
pub fn proximal_scheme(k: usize, alphabet: Alphabet, target: Symbol) -> Result<MarkerScheme, BoundaryError> {
    if k < 2 {
        return Err(BoundaryError::BadParameter(format!("proximal family needs k >= 2, got {k}")));
    }
    let start = vec![0; default_marker_len(k)];
    let zeros = vec![0; k];
    let ones = vec![1; k];
    let mut rules = Vec::new();
    for y in 1..k {
        let end = [vec![1; y], vec![0]].concat();
        rules.push(MarkerRule::swap(start.clone(), zeros.clone(), ones.clone(), end)?);
    }
    for y in 0..k {
        for a in 2..alphabet.size() as Symbol {
            let end = [vec![1; y], vec![a]].concat();
            rules.push(MarkerRule::swap(start.clone(), zeros.clone(), ones.clone(), end)?);
        }
    }
    let base = MarkerScheme::new(alphabet, rules)?;
    if !alphabet.contains(target) {
        return Err(BoundaryError::BadParameter(format!("target symbol {target} outside alphabet")));
    }
    Ok(match target {
        0 => base,
        a => base.permute_symbols(&swap_perm(alphabet, 0, a)),
    })
}

/// Compiled `g_k` for `Ω^target`. For a nonzero target it is built as the
/// conjugate of the `Ω^0` map by the transposition `0 <-> target`.
pub fn proximal_code(k: usize, alphabet: Alphabet, target: Symbol) -> Result<SlidingBlockCode1D, BoundaryError> {
    let base = proximal_scheme(k, alphabet, 0)?.compile()?;
    let code = if target == 0 {
        base
    } else {
        let swap = SlidingBlockCode1D::symbol_perm(alphabet, swap_perm(alphabet, 0, target))?;
        base.conjugate(&swap, &swap)
    };
    Ok(code.with_label(if target == 0 { format!("prox:{k}") } else { format!("prox:{k}@{target}") }))
}

/// The minimality map: for every symbol `a` whose `k`-prefixes differ,
/// `a^L [a^k <-> y_1..y_k] a x_1..x_k` with `L = marker_len(k)`.
pub fn minimal_scheme(
    k: usize,
    source: &BarOmegaPoint,
    target: &BarOmegaPoint,
    marker_len: impl Fn(usize) -> usize,
) -> Result<MarkerScheme, BoundaryError> {
    if k < 1 {
        return Err(BoundaryError::BadParameter("minimality family needs k >= 1".into()));
    }
    let alphabet = source.alphabet();
    if target.alphabet() != alphabet {
        return Err(BoundaryError::BadParameter("source and target alphabets differ".into()));
    }
    let mut rules = Vec::new();
    for a in alphabet.symbols() {
        let x = &source.point(a).window(k + 1)[1..];
        let y = &target.point(a).window(k + 1)[1..];
        if x == y {
            continue;
        }
        if y[0] == a || x[0] == a {
            return Err(BoundaryError::PrefixDegenerate(a));
        }
        let start = vec![a; marker_len(k)];
        let end = [&[a][..], x].concat();
        rules.push(MarkerRule::swap(start, vec![a; k], y.to_vec(), end)?);
    }
    Ok(MarkerScheme::new(alphabet, rules)?)
}
