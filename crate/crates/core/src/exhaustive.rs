//! Pruned exhaustive search over cell assignments.
//!
//! Rules are evaluated on partial assignments (`None` = not yet chosen).
//! A rule returns `Some(v)` only when `v` is its output for every
//! completion, so a branch is closed as soon as both sides are decided.
//! This enumerates the same window space as a flat loop over `|A|^n`
//! words, but skips subtrees whose outcome is already fixed.
//!
//! Rules that report the unknown cells they read (see [`note_unknown_read`])
//! steer branching to those cells; otherwise cells are taken in the given
//! static order.

use std::cell::Cell;
use std::mem::size_of;

use crate::symbolic::Symbol;

pub type Partial = Option<Symbol>;

/// Default cap on visited search nodes.
pub const DEFAULT_BUDGET: u64 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BudgetExceeded {
    pub visited: u64,
}

thread_local! {
    /// Address range of the assignment currently searched.
    static ROOT: Cell<(usize, usize)> = const { Cell::new((0, 0)) };
    /// First unknown root cell read since the last evaluation.
    static MISS: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Records a read of an unknown cell. Reads outside the searched assignment
/// (intermediate buffers, padded copies) are ignored.
pub(crate) fn note_unknown_read(slot: &Partial) {
    let addr = slot as *const Partial as usize;
    let (base, len) = ROOT.with(Cell::get);
    if addr >= base && addr < base + len * size_of::<Partial>() {
        MISS.with(|m| {
            if m.get().is_none() {
                m.set(Some((addr - base) / size_of::<Partial>()));
            }
        });
    }
}

/// Reads a cell, recording it when unknown.
#[inline]
pub(crate) fn read_cell(w: &[Partial], i: usize) -> Partial {
    let v = w[i];
    if v.is_none() {
        note_unknown_read(&w[i]);
    }
    v
}

/// Cell indices of a window of `n` cells, center first, then alternating
/// outward (left before right).
pub(crate) fn center_out_order(n: usize) -> Vec<usize> {
    let c = n / 2;
    let mut order = vec![c];
    for d in 1..=c.max(n - c) {
        if d <= c {
            order.push(c - d);
        }
        if c + d < n {
            order.push(c + d);
        }
    }
    order
}

/// Searches for a full assignment of `order.len()` cells on which the two
/// sides of `eval` differ. Unassigned cells of a returned witness are 0.
pub(crate) fn find_disagreement<F>(
    n_cells: usize,
    alphabet: usize,
    order: &[usize],
    budget: u64,
    eval: F,
) -> Result<Option<Vec<Symbol>>, BudgetExceeded>
where
    F: Fn(&[Partial]) -> (Partial, Partial),
{
    let mut cells: Vec<Partial> = vec![None; n_cells];
    let mut visited = 0u64;
    let saved = ROOT.with(|r| r.replace((cells.as_ptr() as usize, n_cells)));
    let found = descend(&mut cells, alphabet, order, budget, &mut visited, &eval);
    ROOT.with(|r| r.set(saved));
    found
}

fn descend<F>(
    cells: &mut Vec<Partial>,
    alphabet: usize,
    order: &[usize],
    budget: u64,
    visited: &mut u64,
    eval: &F,
) -> Result<Option<Vec<Symbol>>, BudgetExceeded>
where
    F: Fn(&[Partial]) -> (Partial, Partial),
{
    *visited += 1;
    if *visited > budget {
        return Err(BudgetExceeded { visited: *visited });
    }
    MISS.with(|m| m.set(None));
    match eval(cells) {
        (Some(a), Some(b)) if a == b => return Ok(None),
        (Some(_), Some(_)) => return Ok(Some(cells.iter().map(|c| c.unwrap_or(0)).collect())),
        _ => {}
    }
    let hint = MISS.with(Cell::take).filter(|&i| i < cells.len() && cells[i].is_none());
    let Some(next) = hint.or_else(|| order.iter().copied().find(|&i| cells[i].is_none())) else {
        panic!("rule undecided on a complete assignment");
    };
    for s in 0..alphabet {
        cells[next] = Some(s as Symbol);
        if let Some(w) = descend(cells, alphabet, order, budget, visited, eval)? {
            cells[next] = None;
            return Ok(Some(w));
        }
    }
    cells[next] = None;
    Ok(None)
}
