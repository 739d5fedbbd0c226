//! Choice trees: the set-of-values encoding of non-determinism.
//!
//! An [`NDTree`] represents every value a non-deterministic computation
//! could produce. `Val` holds a single value, `Choice` joins the value
//! sets of its children, and `Fail` is the empty set (a failed branch).
//! Trees are immutable; combinators build fresh trees.
//!
//! A [`Witness`] is a left/right path locating one value inside a tree,
//! acting as a checkable membership certificate.

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// One step of a [`Witness`] path: descend into the left or right child
/// of a `Choice` node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Left,
    Right,
}

/// A binary tree of non-deterministic outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NDTree<A> {
    /// A single deterministic value.
    Val(A),
    /// A non-deterministic choice between two subtrees.
    Choice(Box<NDTree<A>>, Box<NDTree<A>>),
    /// A failed branch; contributes no values.
    Fail,
}

impl<A> NDTree<A> {
    /// Tree holding exactly the value `x`.
    pub fn val(x: A) -> Self {
        NDTree::Val(x)
    }

    /// Choice node over `l` and `r`. Its values are those of `l`
    /// followed by those of `r`.
    pub fn choice(l: NDTree<A>, r: NDTree<A>) -> Self {
        NDTree::Choice(Box::new(l), Box::new(r))
    }

    /// The empty tree: no values.
    pub fn fail() -> Self {
        NDTree::Fail
    }

    /// Applies a deterministic function to every value, preserving the
    /// tree shape: choice structure, failure leaves and value order are
    /// unchanged.
    pub fn map_det<B>(&self, f: &impl Fn(&A) -> B) -> NDTree<B> {
        match self {
            NDTree::Val(x) => NDTree::Val(f(x)),
            NDTree::Choice(l, r) => NDTree::choice(l.map_det(f), r.map_det(f)),
            NDTree::Fail => NDTree::Fail,
        }
    }

    /// Applies a non-deterministic function to every value: each `Val`
    /// leaf is replaced by the whole tree `f` returns for it. Choice and
    /// failure structure above the leaves is preserved.
    pub fn bind_nd<B>(&self, f: &impl Fn(&A) -> NDTree<B>) -> NDTree<B> {
        match self {
            NDTree::Val(x) => f(x),
            NDTree::Choice(l, r) => NDTree::choice(l.bind_nd(f), r.bind_nd(f)),
            NDTree::Fail => NDTree::Fail,
        }
    }

    /// True iff every value in the tree satisfies `p`. Vacuously true on
    /// trees without values.
    pub fn satisfy(&self, p: &impl Fn(&A) -> bool) -> bool {
        match self {
            NDTree::Val(x) => p(x),
            NDTree::Choice(l, r) => l.satisfy(p) && r.satisfy(p),
            NDTree::Fail => true,
        }
    }

    /// All values, left to right.
    pub fn values(&self) -> Vec<A>
    where
        A: Clone,
    {
        let mut out = Vec::new();
        self.collect_values(&mut out);
        out
    }

    fn collect_values(&self, out: &mut Vec<A>)
    where
        A: Clone,
    {
        match self {
            NDTree::Val(x) => out.push(x.clone()),
            NDTree::Choice(l, r) => {
                l.collect_values(out);
                r.collect_values(out);
            }
            NDTree::Fail => {}
        }
    }

    /// Number of `Val` leaves.
    pub fn value_count(&self) -> usize {
        match self {
            NDTree::Val(_) => 1,
            NDTree::Choice(l, r) => l.value_count() + r.value_count(),
            NDTree::Fail => 0,
        }
    }

    /// Maximum nesting depth of `Choice` nodes (leaves have depth 0).
    pub fn depth(&self) -> usize {
        match self {
            NDTree::Choice(l, r) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }

    /// The leftmost witness locating `x`, if `x` occurs among the values.
    pub fn member(&self, x: &A) -> Option<Witness>
    where
        A: PartialEq,
    {
        match self {
            NDTree::Val(y) => (y == x).then(Witness::empty),
            NDTree::Choice(l, r) => l
                .member(x)
                .map(|w| w.prepended(Step::Left))
                .or_else(|| r.member(x).map(|w| w.prepended(Step::Right))),
            NDTree::Fail => None,
        }
    }

    /// True iff following `w` from the root descends through `Choice`
    /// nodes only and ends at `Val(x)`.
    pub fn check_witness(&self, x: &A, w: &Witness) -> bool
    where
        A: PartialEq,
    {
        let mut node = self;
        for step in w.steps() {
            match node {
                NDTree::Choice(l, r) => {
                    node = match step {
                        Step::Left => l,
                        Step::Right => r,
                    }
                }
                _ => return false,
            }
        }
        matches!(node, NDTree::Val(y) if y == x)
    }
}

impl NDTree<bool> {
    /// True iff every value of a boolean tree is true. Equivalent to
    /// `satisfy` with the identity predicate.
    pub fn always(&self) -> bool {
        self.satisfy(&|b| *b)
    }
}

/// Free-function form of [`NDTree::always`].
pub fn always(t: &NDTree<bool>) -> bool {
    t.always()
}

/// Errors from witness-transforming operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness does not locate the given value in the tree")]
    InvalidWitness,
    #[error("outer witness does not locate the given value in the outer tree")]
    InvalidOuter,
    #[error("inner witness does not locate the mapped value in the inner tree")]
    InvalidInner,
}

/// Transports a witness through [`NDTree::map_det`]: if `w` locates `x`
/// in `t`, the same path locates `f(x)` in the mapped tree, because the
/// map preserves shape. Rejects invalid input witnesses.
pub fn map_witness<A, B>(
    f: &impl Fn(&A) -> B,
    x: &A,
    t: &NDTree<A>,
    w: &Witness,
) -> Result<Witness, WitnessError>
where
    A: PartialEq,
{
    let _ = f;
    if !t.check_witness(x, w) {
        return Err(WitnessError::InvalidWitness);
    }
    Ok(w.clone())
}

/// Transports witnesses through [`NDTree::bind_nd`]: given `w_outer`
/// locating `x` in `t` and `w_inner` locating `f_det(x)` in `f_nd(x)`,
/// their concatenation locates `f_det(x)` in `bind_nd(f_nd, t)` — the
/// bind grafts `f_nd(x)` exactly where `Val(x)` used to be.
pub fn bind_witness<A, B>(
    x: &A,
    t: &NDTree<A>,
    f_det: &impl Fn(&A) -> B,
    f_nd: &impl Fn(&A) -> NDTree<B>,
    w_outer: &Witness,
    w_inner: &Witness,
) -> Result<Witness, WitnessError>
where
    A: PartialEq,
    B: PartialEq,
{
    if !t.check_witness(x, w_outer) {
        return Err(WitnessError::InvalidOuter);
    }
    if !f_nd(x).check_witness(&f_det(x), w_inner) {
        return Err(WitnessError::InvalidInner);
    }
    Ok(w_outer.concat(w_inner))
}

/// A left/right path certifying that a value occurs in an [`NDTree`].
///
/// The empty path certifies membership in a `Val` leaf itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Witness {
    steps: Vec<Step>,
}

impl Witness {
    pub fn empty() -> Self {
        Witness { steps: Vec::new() }
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        Witness { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn prepended(mut self, step: Step) -> Self {
        self.steps.insert(0, step);
        self
    }

    pub fn concat(&self, other: &Witness) -> Witness {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Witness { steps }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::Left => "L",
                Step::Right => "R",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid witness character {0:?}, expected 'L' or 'R'")]
pub struct ParseWitnessError(char);

impl FromStr for Witness {
    type Err = ParseWitnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Step::Left),
                'R' => Ok(Step::Right),
                other => Err(ParseWitnessError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Witness::from_steps)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

// Wire form: Val(x) as {"val": x}, Choice(l, r) as {"l": .., "r": ..},
// Fail as the string "fail".
impl<A: Serialize> Serialize for NDTree<A> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            NDTree::Val(x) => {
                let mut m = serializer.serialize_map(Some(1))?;
                m.serialize_entry("val", x)?;
                m.end()
            }
            NDTree::Choice(l, r) => {
                let mut m = serializer.serialize_map(Some(2))?;
                m.serialize_entry("l", l)?;
                m.serialize_entry("r", r)?;
                m.end()
            }
            NDTree::Fail => serializer.serialize_str("fail"),
        }
    }
}

impl<'de, A: Deserialize<'de>> Deserialize<'de> for NDTree<A> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TreeVisitor<A>(std::marker::PhantomData<A>);

        impl<'de, A: Deserialize<'de>> Visitor<'de> for TreeVisitor<A> {
            type Value = NDTree<A>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("\"fail\", {\"val\": ..} or {\"l\": .., \"r\": ..}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "fail" {
                    Ok(NDTree::Fail)
                } else {
                    Err(E::custom(format!("unknown tree literal {v:?}")))
                }
            }

            fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> Result<Self::Value, M::Error> {
                let mut val: Option<A> = None;
                let mut l: Option<NDTree<A>> = None;
                let mut r: Option<NDTree<A>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "val" => val = Some(map.next_value()?),
                        "l" => l = Some(map.next_value()?),
                        "r" => r = Some(map.next_value()?),
                        other => return Err(de::Error::custom(format!("unknown key {other:?}"))),
                    }
                }
                match (val, l, r) {
                    (Some(x), None, None) => Ok(NDTree::Val(x)),
                    (None, Some(l), Some(r)) => Ok(NDTree::choice(l, r)),
                    _ => Err(de::Error::custom("expected {\"val\"} or {\"l\", \"r\"}")),
                }
            }
        }

        deserializer.deserialize_any(TreeVisitor(std::marker::PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn coin() -> NDTree<bool> {
        NDTree::choice(NDTree::val(true), NDTree::val(false))
    }

    #[test]
    fn val_holds_one_value() {
        let t = NDTree::val(3);
        assert_eq!(t.values(), vec![3]);
        assert_eq!(t.member(&3), Some(Witness::empty()));
    }

    #[test]
    fn choice_concatenates_values() {
        assert_eq!(coin().values(), vec![true, false]);
        let t = NDTree::choice(NDTree::fail(), NDTree::val(1));
        assert_eq!(t.values(), vec![1]);
        let t = NDTree::choice(
            NDTree::val(0),
            NDTree::choice(NDTree::val(1), NDTree::val(2)),
        );
        assert_eq!(t.values(), vec![0, 1, 2]);
    }

    #[test]
    fn fail_has_no_values() {
        let t: NDTree<i64> = NDTree::fail();
        assert_eq!(t.values(), Vec::<i64>::new());
        assert!(t.satisfy(&|_| false));
        assert_eq!(t.member(&7), None);
    }

    #[test]
    fn map_det_applies_elementwise() {
        let t = NDTree::choice(NDTree::val(1), NDTree::val(2));
        assert_eq!(t.map_det(&|x| x + 1).values(), vec![2, 3]);
        assert_eq!(t.map_det(&|x| *x), t);
    }

    #[test]
    fn bind_replaces_leaves() {
        let eo = |n: &i64| NDTree::choice(NDTree::val(*n), NDTree::val(n + 1));
        assert_eq!(NDTree::val(0).bind_nd(&eo).values(), vec![0, 1]);

        // left unit: bind val == identity
        let t = NDTree::choice(coin(), NDTree::fail());
        assert_eq!(t.bind_nd(&|x| NDTree::val(*x)), t);
    }

    #[test]
    fn satisfy_checks_all_values() {
        let is_even = |x: &i64| x % 2 == 0;
        assert!(NDTree::choice(NDTree::val(0), NDTree::val(2)).satisfy(&is_even));
        assert!(!NDTree::choice(NDTree::val(0), NDTree::val(1)).satisfy(&is_even));
        assert_eq!(NDTree::val(5).satisfy(&is_even), is_even(&5));
    }

    #[test]
    fn always_is_satisfy_with_identity() {
        assert!(NDTree::choice(NDTree::val(true), NDTree::val(true)).always());
        assert!(!NDTree::choice(NDTree::val(true), NDTree::val(false)).always());
    }

    #[test]
    fn member_returns_leftmost_witness() {
        assert_eq!(
            coin().member(&true),
            Some(Witness::from_steps(vec![Step::Left]))
        );
        assert_eq!(
            coin().member(&false),
            Some(Witness::from_steps(vec![Step::Right]))
        );
        assert_eq!(NDTree::val(3).member(&2), None);

        // duplicated value: the left occurrence wins
        let t = NDTree::choice(NDTree::val(7), NDTree::val(7));
        assert_eq!(t.member(&7), Some(Witness::from_steps(vec![Step::Left])));
    }

    #[test]
    fn check_witness_validates_paths() {
        assert!(coin().check_witness(&true, &Witness::from_steps(vec![Step::Left])));
        assert!(!coin().check_witness(&true, &Witness::from_steps(vec![Step::Right])));
        assert!(NDTree::val(9).check_witness(&9, &Witness::empty()));
        // too long and too short paths
        assert!(!coin().check_witness(&true, &Witness::empty()));
        assert!(!NDTree::<i64>::val(9).check_witness(&9, &Witness::from_steps(vec![Step::Left])));
    }

    #[test]
    fn map_witness_preserves_path() {
        let t = NDTree::choice(NDTree::val(1), NDTree::val(2));
        let w = Witness::from_steps(vec![Step::Left]);
        let succ = |x: &i64| x + 1;
        let w2 = map_witness(&succ, &1, &t, &w).unwrap();
        assert_eq!(w2, w);
        assert!(t.map_det(&succ).check_witness(&2, &w2));

        // identity keeps the witness valid
        let wid = map_witness(&|x: &i64| *x, &1, &t, &w).unwrap();
        assert!(t.map_det(&|x| *x).check_witness(&1, &wid));

        assert_eq!(
            map_witness(&succ, &2, &t, &w),
            Err(WitnessError::InvalidWitness)
        );
    }

    #[test]
    fn bind_witness_concatenates() {
        let eo = |n: &i64| NDTree::choice(NDTree::val(*n), NDTree::val(n + 1));
        let t = NDTree::val(0);
        let w_outer = t.member(&0).unwrap();
        let w_inner = eo(&0).member(&0).unwrap();
        let w = bind_witness(&0, &t, &|n| *n, &eo, &w_outer, &w_inner).unwrap();
        assert_eq!(w, Witness::from_steps(vec![Step::Left]));
        assert!(t.bind_nd(&eo).check_witness(&0, &w));

        // both empty on singleton trees
        let id_tree = |n: &i64| NDTree::val(*n);
        let w = bind_witness(
            &0,
            &t,
            &|n| *n,
            &id_tree,
            &Witness::empty(),
            &Witness::empty(),
        )
        .unwrap();
        assert!(w.is_empty());

        assert_eq!(
            bind_witness(&1, &t, &|n| *n, &eo, &w_outer, &w_inner),
            Err(WitnessError::InvalidOuter)
        );
        assert_eq!(
            bind_witness(
                &0,
                &t,
                &|n| *n,
                &eo,
                &w_outer,
                &Witness::from_steps(vec![Step::Right])
            ),
            Err(WitnessError::InvalidInner)
        );
    }

    #[test]
    fn functor_composition() {
        let t = NDTree::choice(
            NDTree::choice(NDTree::val(1), NDTree::fail()),
            NDTree::val(3),
        );
        let f = |x: &i64| x * 2;
        let g = |x: &i64| x + 1;
        assert_eq!(t.map_det(&g).map_det(&f), t.map_det(&|x| f(&g(x))));
    }

    #[test]
    fn json_golden_forms() {
        let t = NDTree::choice(NDTree::val(1), NDTree::choice(NDTree::fail(), NDTree::val(2)));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"l":{"val":1},"r":{"l":"fail","r":{"val":2}}}"#);
        let back: NDTree<i64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);

        let w = Witness::from_steps(vec![Step::Left, Step::Right]);
        assert_eq!(serde_json::to_string(&w).unwrap(), r#""LR""#);
        assert_eq!(serde_json::from_str::<Witness>(r#""LR""#).unwrap(), w);
        assert_eq!("LR".parse::<Witness>().unwrap(), w);
        assert!("LX".parse::<Witness>().is_err());
    }

    fn arb_tree() -> impl Strategy<Value = NDTree<i64>> {
        let leaf = prop_oneof![
            (0i64..8).prop_map(NDTree::val),
            Just(NDTree::fail()),
        ];
        leaf.prop_recursive(5, 64, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| NDTree::choice(l, r))
        })
    }

    proptest! {
        // satisfy agrees with the all-values oracle
        #[test]
        fn satisfy_matches_value_enumeration(t in arb_tree(), k in 1i64..5) {
            let p = |x: &i64| x % k == 0;
            prop_assert_eq!(t.satisfy(&p), t.values().iter().all(|x| p(x)));
        }

        // mapping commutes with enumeration, preserving order
        #[test]
        fn values_of_map_are_mapped_values(t in arb_tree()) {
            let f = |x: &i64| x * 3 - 1;
            prop_assert_eq!(
                t.map_det(&f).values(),
                t.values().iter().map(|x| f(x)).collect::<Vec<_>>()
            );
        }

        // bind enumerates the ordered concatenation of the per-value trees
        #[test]
        fn values_of_bind_concatenate(t in arb_tree()) {
            let f = |x: &i64| {
                if x % 3 == 0 {
                    NDTree::fail()
                } else {
                    NDTree::choice(NDTree::val(*x), NDTree::val(x + 10))
                }
            };
            let expected: Vec<i64> = t
                .values()
                .iter()
                .flat_map(|x| f(x).values())
                .collect();
            prop_assert_eq!(t.bind_nd(&f).values(), expected);
        }

        // member finds a witness exactly when the value occurs, and every
        // witness it returns checks out
        #[test]
        fn member_agrees_with_values(t in arb_tree(), x in 0i64..8) {
            match t.member(&x) {
                Some(w) => {
                    prop_assert!(t.values().contains(&x));
                    prop_assert!(t.check_witness(&x, &w));
                }
                None => prop_assert!(!t.values().contains(&x)),
            }
        }

        #[test]
        fn serde_round_trip(t in arb_tree()) {
            let json = serde_json::to_string(&t).unwrap();
            let back: NDTree<i64> = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
