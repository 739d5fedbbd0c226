//! The example programs, written in both encodings.
//!
//! Each non-deterministic program appears twice: a `_nd` version
//! returning the [`NDTree`] of every result, and a `_plan` version that
//! takes a [`ChoicePlan`] and returns the single result the plan selects.
//! Deterministic counterparts (`sort`, `min_det`) and the free-variable
//! programs realized by split enumeration (`ndins_split_nd`,
//! `last_splits`) round out the set.

mod nat;
mod registry;

pub use nat::{add, double_int, double_nat, even_int, even_nat, Nat};
pub use registry::{find_example, registry, ExampleError, ExampleInstance, ExampleSpec};

use crate::plan::ChoicePlan;
use crate::tree::NDTree;
use thiserror::Error;

/// All ways to insert `x` into `xs`:
/// at the front, or anywhere in the tail.
pub fn ndinsert_nd<A: Clone>(x: &A, xs: &[A]) -> NDTree<Vec<A>> {
    match xs.split_first() {
        None => NDTree::val(vec![x.clone()]),
        Some((y, ys)) => NDTree::choice(
            NDTree::val(cons(x, xs)),
            ndinsert_nd(x, ys).map_det(&|rest| cons(y, rest)),
        ),
    }
}

/// All permutations of `xs`, built by non-deterministic insertion.
pub fn perm_nd<A: Clone>(xs: &[A]) -> NDTree<Vec<A>> {
    match xs.split_first() {
        None => NDTree::val(Vec::new()),
        Some((x, rest)) => perm_nd(rest).bind_nd(&|p| ndinsert_nd(x, p)),
    }
}

/// The one insertion of `x` into `xs` selected by the plan: each
/// consulted bit decides front-insertion vs descending into the tail.
pub fn ndinsert_plan<A: Clone>(p: &ChoicePlan, x: &A, xs: &[A]) -> Vec<A> {
    match xs.split_first() {
        None => vec![x.clone()],
        Some((y, ys)) => {
            if p.choose() {
                cons(x, xs)
            } else {
                cons(y, &ndinsert_plan(&p.lchoice(), x, ys))
            }
        }
    }
}

/// The one permutation of `xs` selected by the plan. The insertion and
/// the recursive call fork the plan so their choices stay independent.
pub fn perm_plan<A: Clone>(p: &ChoicePlan, xs: &[A]) -> Vec<A> {
    match xs.split_first() {
        None => Vec::new(),
        Some((y, ys)) => ndinsert_plan(&p.lchoice(), y, &perm_plan(&p.rchoice(), ys)),
    }
}

/// Insertion via free list variables `ys`, `zs` with `xs == ys ++ zs`:
/// realized by enumerating every split of `xs`, one value per split.
pub fn ndins_split_nd<A: Clone>(x: &A, xs: &[A]) -> NDTree<Vec<A>> {
    let leaves = (0..=xs.len()).map(|i| {
        let mut out = Vec::with_capacity(xs.len() + 1);
        out.extend_from_slice(&xs[..i]);
        out.push(x.clone());
        out.extend_from_slice(&xs[i..]);
        NDTree::val(out)
    });
    join_leaves(leaves, NDTree::fail())
}

/// Planned form of [`ndins_split_nd`]: the plan picks the split.
pub fn ndins_split_plan<A: Clone>(p: &ChoicePlan, x: &A, xs: &[A]) -> Vec<A> {
    let i = select_index(p, xs.len() + 1);
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.extend_from_slice(&xs[..i]);
    out.push(x.clone());
    out.extend_from_slice(&xs[i..]);
    out
}

/// `n` or its successor, non-deterministically.
pub fn eo_nd(n: u64) -> NDTree<u64> {
    NDTree::choice(NDTree::val(n), NDTree::val(n + 1))
}

/// Planned form of [`eo_nd`].
pub fn eo_plan(p: &ChoicePlan, n: u64) -> u64 {
    if p.choose() {
        n
    } else {
        n + 1
    }
}

/// Deterministic sorted insertion with strict `<`; equal keys go to the
/// tail side.
pub fn insert(x: i64, xs: &[i64]) -> Vec<i64> {
    match xs.split_first() {
        None => vec![x],
        Some((y, ys)) => {
            if x < *y {
                cons(&x, xs)
            } else {
                cons(y, &insert(x, ys))
            }
        }
    }
}

/// Insertion sort.
pub fn sort(xs: &[i64]) -> Vec<i64> {
    match xs.split_first() {
        None => Vec::new(),
        Some((x, rest)) => insert(*x, &sort(rest)),
    }
}

/// Non-deterministic minimum: one candidate per list position, where
/// positions holding a non-minimal element fail. Failed candidates stay
/// visible as `Fail` leaves; the empty list is a single failure.
pub fn min_nd(xs: &[i64]) -> NDTree<i64> {
    let leaves = (0..xs.len()).map(|i| {
        if xs.iter().all(|y| xs[i] <= *y) {
            NDTree::val(xs[i])
        } else {
            NDTree::fail()
        }
    });
    join_leaves(leaves, NDTree::fail())
}

/// Planned form of [`min_nd`]: the plan picks one position; the result
/// is `Some` only if that element is minimal. Empty lists yield `None`
/// under every plan.
pub fn min_plan(p: &ChoicePlan, xs: &[i64]) -> Option<i64> {
    if xs.is_empty() {
        return None;
    }
    let i = select_index(p, xs.len());
    xs.iter().all(|y| xs[i] <= *y).then(|| xs[i])
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("minimum of an empty list")]
pub struct EmptyListError;

/// Deterministic minimum by list traversal. Errors on empty input.
pub fn min_det(xs: &[i64]) -> Result<i64, EmptyListError> {
    match xs {
        [] => Err(EmptyListError),
        [x] => Ok(*x),
        [x, rest @ ..] => {
            let z = min_det(rest)?;
            Ok(if *x <= z { *x } else { z })
        }
    }
}

/// Last element via free variables `ys`, `x` with `ys ++ [x] == xs`:
/// candidate splits are enumerated per position; only the split whose
/// prefix-plus-element reassembles `xs` yields a value. Empty input has
/// no candidates and yields a lone failure.
pub fn last_splits<A: Clone + PartialEq>(xs: &[A]) -> NDTree<A> {
    let leaves = (0..xs.len()).map(|i| {
        // candidate ys = xs[..i], x = xs[i]; keep it iff ys ++ [x] == xs
        let mut reassembled = xs[..i].to_vec();
        reassembled.push(xs[i].clone());
        if reassembled[..] == xs[..] {
            NDTree::val(xs[i].clone())
        } else {
            NDTree::fail()
        }
    });
    join_leaves(leaves, NDTree::fail())
}

/// Planned form of [`last_splits`].
pub fn last_plan<A: Clone>(p: &ChoicePlan, xs: &[A]) -> Option<A> {
    if xs.is_empty() {
        return None;
    }
    let i = select_index(p, xs.len());
    (i + 1 == xs.len()).then(|| xs[i].clone())
}

fn cons<A: Clone>(x: &A, xs: &[A]) -> Vec<A> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.push(x.clone());
    out.extend_from_slice(xs);
    out
}

fn join_leaves<A>(leaves: impl Iterator<Item = NDTree<A>>, empty: NDTree<A>) -> NDTree<A> {
    let mut leaves: Vec<NDTree<A>> = leaves.collect();
    match leaves.pop() {
        None => empty,
        Some(last) => leaves
            .into_iter()
            .rev()
            .fold(last, |acc, leaf| NDTree::choice(leaf, acc)),
    }
}

// Plan-driven selection of one index out of n: each consulted bit picks
// the current candidate or moves on; the final candidate needs no bit.
fn select_index(p: &ChoicePlan, n: usize) -> usize {
    debug_assert!(n > 0);
    let mut plan = p.clone();
    for i in 0..n - 1 {
        if plan.choose() {
            return i;
        }
        plan = plan.lchoice();
    }
    n - 1
}
