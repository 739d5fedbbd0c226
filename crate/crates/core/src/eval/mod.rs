//! A miniature first-order functional-logic core language.
//!
//! Programs are rewrite rules over constructor terms; rules may overlap,
//! and every applicable rule fires, which together with the built-in `?`
//! choice gives non-deterministic evaluation. [`eval`] runs a closed
//! expression under a selectable choice semantics (call-time vs
//! run-time) and strategy (eager vs lazy), returning the multiset of
//! computed values plus counts of failed and fuel-exhausted branches.

mod machine;
mod parser;
mod syntax;

pub use parser::{parse_expr_in, parse_program, ParseError};
pub use syntax::{ChoiceId, CoreExpr, CoreProgram, CoreRule, Pattern, Value};

use machine::{expr_to_ctree, extract_tree, Quirks};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// How copies of a shared choice behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// Shared arguments denote one value per call; copies of a choice
    /// select the same alternative.
    CallTime,
    /// Copies of a choice select independently, as in plain term
    /// rewriting.
    RunTime,
}

/// When expressions are reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Arguments and `let` bindings are normalized before use; failures
    /// in them propagate.
    Eager,
    /// Only demanded positions are reduced; failures in unneeded
    /// positions are ignored.
    Lazy,
}

/// Evaluation mode: semantics, strategy, and the step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub semantics: Semantics,
    pub strategy: Strategy,
    /// Maximum number of reduction steps (rule applications plus choice
    /// reductions) for the whole evaluation.
    pub fuel: u64,
}

pub const DEFAULT_FUEL: u64 = 10_000;

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            semantics: Semantics::CallTime,
            strategy: Strategy::Lazy,
            fuel: DEFAULT_FUEL,
        }
    }
}

impl EvalConfig {
    pub fn new(semantics: Semantics, strategy: Strategy, fuel: u64) -> Self {
        EvalConfig {
            semantics,
            strategy,
            fuel,
        }
    }
}

/// The observable outcome of an evaluation: a multiset of ground values
/// plus how many branches failed or ran out of fuel.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultSet {
    values: Vec<Value>,
    pub failed: u64,
    pub fuel_exhausted: u64,
}

impl ResultSet {
    pub(crate) fn push_value(&mut self, v: Value) {
        self.values.push(v);
    }

    /// Values in traversal order (a multiset; duplicates preserved).
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Values sorted by their rendered form, duplicates preserved.
    pub fn sorted_values(&self) -> Vec<&Value> {
        let mut out: Vec<&Value> = self.values.iter().collect();
        out.sort_by_key(|v| v.to_string());
        out
    }

    pub fn value_set(&self) -> BTreeSet<Value> {
        self.values.iter().cloned().collect()
    }

    pub fn value_multiset(&self) -> BTreeMap<Value, usize> {
        let mut out = BTreeMap::new();
        for v in &self.values {
            *out.entry(v.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn is_multiset_subset_of(&self, other: &ResultSet) -> bool {
        let big = other.value_multiset();
        self.value_multiset()
            .iter()
            .all(|(v, n)| big.get(v).is_some_and(|m| m >= n))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "values": self.sorted_values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "failed": self.failed,
            "fuel_exhausted": self.fuel_exhausted,
        })
    }
}

impl fmt::Display for ResultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.sorted_values().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(
            f,
            "}} failed={} fuel_exhausted={}",
            self.failed, self.fuel_exhausted
        )
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("expression is not closed: unbound variable {name:?}")]
    OpenExpression { name: String },
    #[error("unknown function {name:?}")]
    UnknownFunction { name: String },
    #[error("{name} expects {expected} argument(s), got {found}")]
    FunArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("constructor {name} used with {found} argument(s), expected {expected}")]
    CtorArity {
        name: String,
        expected: usize,
        found: usize,
    },
}

/// Evaluates a closed expression under the given mode.
pub fn eval(prog: &CoreProgram, expr: &CoreExpr, cfg: &EvalConfig) -> Result<ResultSet, EvalError> {
    machine::run(prog, expr, cfg, Quirks::default())
}

pub(crate) fn eval_with_quirks(
    prog: &CoreProgram,
    expr: &CoreExpr,
    cfg: &EvalConfig,
    force_eager: bool,
    ignore_choice_ids: bool,
    unshared_bindings: bool,
) -> Result<ResultSet, EvalError> {
    machine::run(
        prog,
        expr,
        cfg,
        Quirks {
            force_eager,
            ignore_choice_ids,
            unshared_bindings,
        },
    )
}

/// Results of evaluating one expression under all four mode
/// combinations.
#[derive(Debug, Clone)]
pub struct SemanticsReport {
    /// Mode order: (CallTime, Eager), (CallTime, Lazy),
    /// (RunTime, Eager), (RunTime, Lazy).
    pub modes: Vec<(EvalConfig, ResultSet)>,
}

impl SemanticsReport {
    pub fn result(&self, semantics: Semantics, strategy: Strategy) -> &ResultSet {
        self.modes
            .iter()
            .find(|(cfg, _)| cfg.semantics == semantics && cfg.strategy == strategy)
            .map(|(_, rs)| rs)
            .expect("all four modes present")
    }

    /// Call-time values are a subset of run-time values per strategy.
    pub fn calltime_within_runtime(&self, strategy: Strategy) -> bool {
        let ct = self.result(Semantics::CallTime, strategy).value_set();
        let rt = self.result(Semantics::RunTime, strategy).value_set();
        ct.is_subset(&rt)
    }

    pub fn all_value_sets_equal(&self) -> bool {
        let first = self.modes[0].1.value_set();
        self.modes.iter().all(|(_, rs)| rs.value_set() == first)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let modes: Vec<serde_json::Value> = self
            .modes
            .iter()
            .map(|(cfg, rs)| {
                json!({
                    "semantics": match cfg.semantics {
                        Semantics::CallTime => "calltime",
                        Semantics::RunTime => "runtime",
                    },
                    "strategy": match cfg.strategy {
                        Strategy::Eager => "eager",
                        Strategy::Lazy => "lazy",
                    },
                    "result": rs.to_json(),
                })
            })
            .collect();
        json!({
            "modes": modes,
            "calltime_within_runtime_eager": self.calltime_within_runtime(Strategy::Eager),
            "calltime_within_runtime_lazy": self.calltime_within_runtime(Strategy::Lazy),
            "all_value_sets_equal": self.all_value_sets_equal(),
        })
    }
}

impl fmt::Display for SemanticsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (cfg, rs) in &self.modes {
            let sem = match cfg.semantics {
                Semantics::CallTime => "calltime",
                Semantics::RunTime => "runtime",
            };
            let strat = match cfg.strategy {
                Strategy::Eager => "eager",
                Strategy::Lazy => "lazy",
            };
            writeln!(f, "{sem:9} {strat:6} {rs}")?;
        }
        writeln!(
            f,
            "calltime within runtime: eager={} lazy={}",
            self.calltime_within_runtime(Strategy::Eager),
            self.calltime_within_runtime(Strategy::Lazy),
        )?;
        write!(f, "all value sets equal: {}", self.all_value_sets_equal())
    }
}

/// Evaluates under all four semantics/strategy combinations.
pub fn compare_semantics(
    prog: &CoreProgram,
    expr: &CoreExpr,
    fuel: u64,
) -> Result<SemanticsReport, EvalError> {
    let mut modes = Vec::new();
    for semantics in [Semantics::CallTime, Semantics::RunTime] {
        for strategy in [Strategy::Eager, Strategy::Lazy] {
            let cfg = EvalConfig::new(semantics, strategy, fuel);
            let rs = eval(prog, expr, &cfg)?;
            modes.push((cfg, rs));
        }
    }
    Ok(SemanticsReport { modes })
}

/// Lazy-vs-eager contrast on `head (0 : tail [])`.
#[derive(Debug, Clone)]
pub struct LazinessDemo {
    /// Lazy, call-time result: the failure in the unneeded tail is
    /// ignored.
    pub lazy: ResultSet,
    /// Eager result: normalizing the list argument hits the failure.
    pub eager: ResultSet,
}

/// Runs the laziness/failure demonstration against a program defining
/// `head`, `tail`, and the list constructors, with `tail` failing on the
/// empty list.
pub fn eval_lazy_failure_demo(prog: &CoreProgram) -> Result<LazinessDemo, EvalError> {
    let expr = CoreExpr::fun(
        "head",
        vec![CoreExpr::ctor(
            "Cons",
            vec![
                CoreExpr::numeral(0),
                CoreExpr::fun("tail", vec![CoreExpr::ctor("Nil", vec![])]),
            ],
        )],
    );
    let lazy = eval(
        prog,
        &expr,
        &EvalConfig::new(Semantics::CallTime, Strategy::Lazy, DEFAULT_FUEL),
    )?;
    let eager = eval(
        prog,
        &expr,
        &EvalConfig::new(Semantics::CallTime, Strategy::Eager, DEFAULT_FUEL),
    )?;
    Ok(LazinessDemo { lazy, eager })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PullTabError {
    #[error("pull-tab target must be a function or constructor application")]
    NotAnApplication,
    #[error("argument index {index} out of range for {count} argument(s)")]
    ArgOutOfRange { index: usize, count: usize },
    #[error("argument at index {index} is not a choice")]
    ArgNotAChoice { index: usize },
}

/// One pull-tab step: lifts the choice at `arg_index` out of an
/// application by duplicating the application over both alternatives,
/// preserving the choice's id.
pub fn pull_tab(app: &CoreExpr, arg_index: usize) -> Result<CoreExpr, PullTabError> {
    let (name, args, is_fun) = match app {
        CoreExpr::Fun(name, args) => (name, args, true),
        CoreExpr::Ctor(name, args) => (name, args, false),
        _ => return Err(PullTabError::NotAnApplication),
    };
    let choice = args.get(arg_index).ok_or(PullTabError::ArgOutOfRange {
        index: arg_index,
        count: args.len(),
    })?;
    let CoreExpr::Choice(id, l, r) = choice else {
        return Err(PullTabError::ArgNotAChoice { index: arg_index });
    };
    let rebuild = |alt: &CoreExpr| {
        let mut new_args = args.clone();
        new_args[arg_index] = alt.clone();
        if is_fun {
            CoreExpr::Fun(name.clone(), new_args)
        } else {
            CoreExpr::Ctor(name.clone(), new_args)
        }
    };
    Ok(CoreExpr::Choice(
        *id,
        Box::new(rebuild(l)),
        Box::new(rebuild(r)),
    ))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("extraction input contains a choice without an id")]
    UnlabelledChoice,
    #[error("extraction input is not a ground normal form: {expr}")]
    NotGround { expr: String },
}

/// Enumerates the values of a choice-rooted normal form: boolean
/// assignments to the choice ids present, following every id
/// consistently, discarding paths that hit failure.
pub fn extract_values(expr: &CoreExpr) -> Result<ResultSet, ExtractError> {
    let tree = expr_to_ctree(expr)?;
    Ok(extract_tree(&tree, false))
}

/// Program texts used by the documentation, tests, and demos.
pub mod corpus {
    /// Peano arithmetic: `add`, `double`, `even`.
    pub const PEANO: &str = "\
add 0 y = y
add (S x) y = S (add x y)
double x = add x x
even 0 = True
even (S 0) = False
even (S (S x)) = even x
";

    /// Head/tail list operations where `tail []` fails.
    pub const LISTS: &str = "\
head (Cons x xs) = x
tail (Cons x xs) = xs
tail Nil = fail
";

    /// Non-deterministic insertion and permutations.
    pub const PERM: &str = "\
ndinsert x Nil = Cons x Nil
ndinsert x (Cons y ys) = Cons x (Cons y ys) ? Cons y (ndinsert x ys)
perm Nil = Nil
perm (Cons x xs) = ndinsert x (perm xs)
";
}
