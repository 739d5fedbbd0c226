//! The evaluator.
//!
//! Evaluation produces a tree of outcomes whose internal nodes are
//! id-labelled choices and whose leaves are ground values, failures, or
//! fuel-exhaustion markers. The strategy decides *when* things are
//! evaluated; the choice semantics decides whether re-evaluating a
//! shared expression repeats the same choice or makes a fresh one:
//!
//! * Call-time choice shares bindings call-by-need: a thunk is reduced
//!   once and its choice ids are cached, so every consumer sees the same
//!   ids and extraction keeps their selections consistent.
//! * Run-time choice never caches: each occurrence of a binding reduces
//!   again with freshly minted ids, so copies choose independently.
//!
//! Under the eager strategy arguments and `let` bindings are normalized
//! before use, committing one value per path, which makes the two
//! semantics coincide.

use super::syntax::{ChoiceId, CoreExpr, CoreProgram, Pattern, Value};
use super::{EvalConfig, EvalError, ResultSet, Strategy};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

// Bounds Rust stack growth on runaway programs; hitting it is reported
// as fuel exhaustion.
const DEPTH_LIMIT: u32 = 2_000;

/// Outcome tree: choices keep their ids so extraction can make
/// consistent selections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CTree<T> {
    Leaf(T),
    Fail,
    Exhausted,
    Ch(ChoiceId, Box<CTree<T>>, Box<CTree<T>>),
}

/// Evaluator quirk switches, used only by the law suite's mutant battery.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Quirks {
    /// Route every evaluation through the eager strategy.
    pub force_eager: bool,
    /// Extraction follows both sides of every choice, ignoring id
    /// consistency.
    pub ignore_choice_ids: bool,
    /// Disable thunk caching, so call-time behaves like run-time.
    pub unshared_bindings: bool,
}

pub(crate) fn run(
    prog: &CoreProgram,
    expr: &CoreExpr,
    cfg: &EvalConfig,
    quirks: Quirks,
) -> Result<ResultSet, EvalError> {
    validate_expr(prog, expr)?;
    let sharing = matches!(cfg.semantics, super::Semantics::CallTime) && !quirks.unshared_bindings;
    let mut machine = Machine {
        prog,
        sharing,
        next_id: 0,
        steps_left: cfg.fuel,
        depth: 0,
    };
    let strategy = if quirks.force_eager {
        Strategy::Eager
    } else {
        cfg.strategy
    };
    let tree = match strategy {
        Strategy::Eager => machine.eager(expr, &Rc::new(HashMap::new())),
        Strategy::Lazy => {
            let root = new_thunk(expr, Rc::new(HashMap::new()));
            let head = machine.hnf(&root);
            machine.full_from_tree(&head)
        }
    };
    Ok(extract_tree(&tree, quirks.ignore_choice_ids))
}

/// Walks an outcome tree, following each choice id consistently within
/// one path: the first occurrence of an id branches, later occurrences
/// follow the side already taken.
pub(crate) fn extract_tree(tree: &CTree<Value>, ignore_ids: bool) -> ResultSet {
    let mut rs = ResultSet::default();
    let mut assignment: HashMap<ChoiceId, bool> = HashMap::new();
    walk(tree, &mut assignment, &mut rs, ignore_ids);
    rs
}

fn walk(
    tree: &CTree<Value>,
    assignment: &mut HashMap<ChoiceId, bool>,
    rs: &mut ResultSet,
    ignore_ids: bool,
) {
    match tree {
        CTree::Leaf(v) => rs.push_value(v.clone()),
        CTree::Fail => rs.failed += 1,
        CTree::Exhausted => rs.fuel_exhausted += 1,
        CTree::Ch(id, l, r) => {
            if ignore_ids {
                walk(l, assignment, rs, ignore_ids);
                walk(r, assignment, rs, ignore_ids);
                return;
            }
            match assignment.get(id) {
                Some(true) => walk(l, assignment, rs, ignore_ids),
                Some(false) => walk(r, assignment, rs, ignore_ids),
                None => {
                    assignment.insert(*id, true);
                    walk(l, assignment, rs, ignore_ids);
                    assignment.insert(*id, false);
                    walk(r, assignment, rs, ignore_ids);
                    assignment.remove(id);
                }
            }
        }
    }
}

/// Checks that an expression is closed and only references known
/// functions and arity-consistent constructors.
pub(crate) fn validate_expr(prog: &CoreProgram, expr: &CoreExpr) -> Result<(), EvalError> {
    let mut ctors = prog.ctor_arities();
    check_expr(prog, expr, &mut Vec::new(), &mut ctors)
}

fn check_expr(
    prog: &CoreProgram,
    expr: &CoreExpr,
    scope: &mut Vec<String>,
    ctors: &mut HashMap<String, usize>,
) -> Result<(), EvalError> {
    match expr {
        CoreExpr::Var(name) => {
            if scope.iter().any(|s| s == name) {
                Ok(())
            } else {
                Err(EvalError::OpenExpression { name: name.clone() })
            }
        }
        CoreExpr::Fun(name, args) => {
            let arity = prog
                .fun_arity(name)
                .ok_or_else(|| EvalError::UnknownFunction { name: name.clone() })?;
            if arity != args.len() {
                return Err(EvalError::FunArity {
                    name: name.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            for a in args {
                check_expr(prog, a, scope, ctors)?;
            }
            Ok(())
        }
        CoreExpr::Ctor(name, args) => {
            match ctors.get(name) {
                None => {
                    ctors.insert(name.clone(), args.len());
                }
                Some(&expected) if expected != args.len() => {
                    return Err(EvalError::CtorArity {
                        name: name.clone(),
                        expected,
                        found: args.len(),
                    })
                }
                _ => {}
            }
            for a in args {
                check_expr(prog, a, scope, ctors)?;
            }
            Ok(())
        }
        CoreExpr::Choice(_, l, r) => {
            check_expr(prog, l, scope, ctors)?;
            check_expr(prog, r, scope, ctors)
        }
        CoreExpr::Fail => Ok(()),
        CoreExpr::Let(x, bound, body) => {
            check_expr(prog, bound, scope, ctors)?;
            scope.push(x.clone());
            let out = check_expr(prog, body, scope, ctors);
            scope.pop();
            out
        }
    }
}

// ---- lazy machinery ----

type Env<'p> = Rc<HashMap<&'p str, ThunkRef<'p>>>;
type ThunkRef<'p> = Rc<RefCell<Thunk<'p>>>;

enum Thunk<'p> {
    Expr(&'p CoreExpr, Env<'p>),
    Done(Rc<CTree<HnfLeaf<'p>>>),
}

/// Head normal form: a constructor applied to unevaluated thunks.
#[derive(Clone)]
struct HnfLeaf<'p> {
    ctor: &'p str,
    args: Vec<ThunkRef<'p>>,
}

fn new_thunk<'p>(expr: &'p CoreExpr, env: Env<'p>) -> ThunkRef<'p> {
    Rc::new(RefCell::new(Thunk::Expr(expr, env)))
}

// Scrutinee memo for one function application: all rules of the
// application observe one reduction of each matched position, even when
// thunk caching is off.
type ScrutMemo<'p> = HashMap<*const RefCell<Thunk<'p>>, Rc<CTree<HnfLeaf<'p>>>>;

type Bindings<'p> = HashMap<&'p str, ThunkRef<'p>>;

struct Machine<'p> {
    prog: &'p CoreProgram,
    sharing: bool,
    next_id: u64,
    steps_left: u64,
    depth: u32,
}

// Grafts `f`'s tree onto every leaf, keeping choice ids; this is the
// pull-tab step iterated over a whole tree.
fn ctree_bind<'p, T, U, F>(m: &mut Machine<'p>, tree: &CTree<T>, f: &mut F) -> CTree<U>
where
    F: FnMut(&mut Machine<'p>, &T) -> CTree<U>,
{
    match tree {
        CTree::Leaf(x) => f(m, x),
        CTree::Fail => CTree::Fail,
        CTree::Exhausted => CTree::Exhausted,
        CTree::Ch(id, l, r) => {
            let l = ctree_bind(m, l, f);
            let r = ctree_bind(m, r, f);
            CTree::Ch(*id, Box::new(l), Box::new(r))
        }
    }
}

impl<'p> Machine<'p> {
    fn mint(&mut self) -> ChoiceId {
        let id = ChoiceId(self.next_id);
        self.next_id += 1;
        id
    }

    // one reduction step of fuel; false once the budget is gone
    fn tick(&mut self) -> bool {
        if self.steps_left == 0 {
            false
        } else {
            self.steps_left -= 1;
            true
        }
    }

    fn out_of_fuel(&self) -> bool {
        self.steps_left == 0
    }

    fn hnf(&mut self, t: &ThunkRef<'p>) -> Rc<CTree<HnfLeaf<'p>>> {
        let (expr, env) = match &*t.borrow() {
            Thunk::Done(tree) => return Rc::clone(tree),
            Thunk::Expr(expr, env) => (*expr, Rc::clone(env)),
        };
        let tree = Rc::new(self.hnf_expr(expr, &env));
        if self.sharing {
            *t.borrow_mut() = Thunk::Done(Rc::clone(&tree));
        }
        tree
    }

    fn hnf_expr(&mut self, expr: &'p CoreExpr, env: &Env<'p>) -> CTree<HnfLeaf<'p>> {
        if self.out_of_fuel() {
            return CTree::Exhausted;
        }
        match expr {
            CoreExpr::Var(x) => {
                let t = Rc::clone(env.get(x.as_str()).expect("validated: variable in scope"));
                (*self.hnf(&t)).clone()
            }
            CoreExpr::Ctor(name, args) => CTree::Leaf(HnfLeaf {
                ctor: name,
                args: args.iter().map(|a| new_thunk(a, Rc::clone(env))).collect(),
            }),
            CoreExpr::Fun(name, args) => {
                let args: Vec<ThunkRef<'p>> =
                    args.iter().map(|a| new_thunk(a, Rc::clone(env))).collect();
                self.apply(name, &args)
            }
            CoreExpr::Choice(id, l, r) => {
                if !self.tick() {
                    return CTree::Exhausted;
                }
                let id = id.unwrap_or_else(|| self.mint());
                let lt = self.hnf_expr(l, env);
                let rt = self.hnf_expr(r, env);
                CTree::Ch(id, Box::new(lt), Box::new(rt))
            }
            CoreExpr::Fail => CTree::Fail,
            CoreExpr::Let(x, bound, body) => {
                let bt = new_thunk(bound, Rc::clone(env));
                let mut inner = (**env).clone();
                inner.insert(x.as_str(), bt);
                self.hnf_expr(body, &Rc::new(inner))
            }
        }
    }

    fn apply(&mut self, name: &str, args: &[ThunkRef<'p>]) -> CTree<HnfLeaf<'p>> {
        if self.depth >= DEPTH_LIMIT {
            return CTree::Exhausted;
        }
        self.depth += 1;
        let out = self.apply_inner(name, args);
        self.depth -= 1;
        out
    }

    fn apply_inner(&mut self, name: &str, args: &[ThunkRef<'p>]) -> CTree<HnfLeaf<'p>> {
        let rule_idxs: Vec<usize> = self.prog.rules_of(name).to_vec();
        let mut memo: ScrutMemo<'p> = HashMap::new();
        let matches = self.match_rules(&rule_idxs, args, &mut memo);
        ctree_bind(self, &matches, &mut |m, applicable| {
            m.fire_rules(applicable)
        })
    }

    // Matches every rule against the arguments, producing per path the
    // list of applicable rules with their bindings.
    fn match_rules(
        &mut self,
        rule_idxs: &[usize],
        args: &[ThunkRef<'p>],
        memo: &mut ScrutMemo<'p>,
    ) -> CTree<Vec<(usize, Bindings<'p>)>> {
        let mut acc: CTree<Vec<(usize, Bindings<'p>)>> = CTree::Leaf(Vec::new());
        for &idx in rule_idxs {
            let rule = &self.prog.rules[idx];
            let work: Vec<(&'p Pattern, ThunkRef<'p>)> = rule
                .patterns
                .iter()
                .zip(args.iter().cloned())
                .collect();
            acc = ctree_bind(self, &acc, &mut |m, found: &Vec<(usize, Bindings<'p>)>| {
                let found = found.clone();
                let mtree = m.match_work(&work, Bindings::new(), memo);
                ctree_bind(m, &mtree, &mut |_, opt| {
                    let mut found = found.clone();
                    if let Some(binds) = opt {
                        found.push((idx, binds.clone()));
                    }
                    CTree::Leaf(found)
                })
            });
        }
        acc
    }

    // Sequential left-to-right matching over a worklist of
    // (pattern, thunk) pairs. A `None` leaf means this rule does not
    // apply on this path.
    fn match_work(
        &mut self,
        work: &[(&'p Pattern, ThunkRef<'p>)],
        acc: Bindings<'p>,
        memo: &mut ScrutMemo<'p>,
    ) -> CTree<Option<Bindings<'p>>> {
        let Some(((pat, thunk), rest)) = work.split_first() else {
            return CTree::Leaf(Some(acc));
        };
        match pat {
            Pattern::Var(x) => {
                let mut acc = acc;
                acc.insert(x.as_str(), Rc::clone(thunk));
                self.match_work(rest, acc, memo)
            }
            Pattern::Ctor(cname, subpats) => {
                let scrut = self.hnf_scrut(thunk, memo);
                ctree_bind(self, &scrut, &mut |m, leaf: &HnfLeaf<'p>| {
                    if leaf.ctor != cname.as_str() {
                        return CTree::Leaf(None);
                    }
                    debug_assert_eq!(leaf.args.len(), subpats.len());
                    let mut deeper: Vec<(&'p Pattern, ThunkRef<'p>)> = subpats
                        .iter()
                        .zip(leaf.args.iter().cloned())
                        .collect();
                    deeper.extend(rest.iter().map(|(p, t)| (*p, Rc::clone(t))));
                    m.match_work(&deeper, acc.clone(), memo)
                })
            }
        }
    }

    fn hnf_scrut(
        &mut self,
        t: &ThunkRef<'p>,
        memo: &mut ScrutMemo<'p>,
    ) -> Rc<CTree<HnfLeaf<'p>>> {
        let key = Rc::as_ptr(t);
        if let Some(tree) = memo.get(&key) {
            return Rc::clone(tree);
        }
        let tree = self.hnf(t);
        memo.insert(key, Rc::clone(&tree));
        tree
    }

    // Applies every applicable rule; several applicable rules branch
    // under fresh choice ids, none at all is a failure.
    fn fire_rules(&mut self, applicable: &[(usize, Bindings<'p>)]) -> CTree<HnfLeaf<'p>> {
        match applicable {
            [] => CTree::Fail,
            [(idx, binds)] => self.instantiate(*idx, binds),
            [(idx, binds), rest @ ..] => {
                let id = self.mint();
                let head = self.instantiate(*idx, binds);
                let tail = self.fire_rules(rest);
                CTree::Ch(id, Box::new(head), Box::new(tail))
            }
        }
    }

    fn instantiate(&mut self, rule_idx: usize, binds: &Bindings<'p>) -> CTree<HnfLeaf<'p>> {
        if !self.tick() {
            return CTree::Exhausted;
        }
        let rule = &self.prog.rules[rule_idx];
        let env: Env<'p> = Rc::new(binds.clone());
        self.hnf_expr(&rule.rhs, &env)
    }

    // ---- full normalization of lazy results ----

    fn full_from_tree(&mut self, tree: &CTree<HnfLeaf<'p>>) -> CTree<Value> {
        ctree_bind(self, tree, &mut |m, leaf: &HnfLeaf<'p>| m.full_leaf(leaf))
    }

    fn full_leaf(&mut self, leaf: &HnfLeaf<'p>) -> CTree<Value> {
        self.full_args(leaf.ctor, &leaf.args, 0, Vec::new())
    }

    fn full_args(
        &mut self,
        name: &str,
        args: &[ThunkRef<'p>],
        index: usize,
        collected: Vec<Value>,
    ) -> CTree<Value> {
        if index == args.len() {
            return CTree::Leaf(Value::node(name, collected));
        }
        let head = self.hnf(&args[index]);
        let full = self.full_from_tree(&head);
        ctree_bind(self, &full, &mut |m, v: &Value| {
            let mut collected = collected.clone();
            collected.push(v.clone());
            m.full_args(name, args, index + 1, collected)
        })
    }

    // ---- eager strategy ----

    fn eager(&mut self, expr: &'p CoreExpr, env: &Rc<HashMap<&'p str, Value>>) -> CTree<Value> {
        if self.out_of_fuel() {
            return CTree::Exhausted;
        }
        match expr {
            CoreExpr::Var(x) => CTree::Leaf(
                env.get(x.as_str())
                    .expect("validated: variable in scope")
                    .clone(),
            ),
            CoreExpr::Fail => CTree::Fail,
            CoreExpr::Ctor(name, args) => {
                self.eager_args(args, env, 0, Vec::new(), &mut |_, values| {
                    CTree::Leaf(Value::node(name.clone(), values))
                })
            }
            CoreExpr::Fun(name, args) => {
                let name = name.as_str();
                self.eager_args(args, env, 0, Vec::new(), &mut |m, values| {
                    m.eager_apply(name, &values)
                })
            }
            CoreExpr::Choice(id, l, r) => {
                if !self.tick() {
                    return CTree::Exhausted;
                }
                let id = id.unwrap_or_else(|| self.mint());
                let lt = self.eager(l, env);
                let rt = self.eager(r, env);
                CTree::Ch(id, Box::new(lt), Box::new(rt))
            }
            CoreExpr::Let(x, bound, body) => {
                let bt = self.eager(bound, env);
                ctree_bind(self, &bt, &mut |m, v: &Value| {
                    let mut inner = (**env).clone();
                    inner.insert(x.as_str(), v.clone());
                    m.eager(body, &Rc::new(inner))
                })
            }
        }
    }

    // Normalizes arguments left to right, branching over their choices,
    // then hands each path's committed values to the continuation.
    fn eager_args<F>(
        &mut self,
        args: &'p [CoreExpr],
        env: &Rc<HashMap<&'p str, Value>>,
        index: usize,
        collected: Vec<Value>,
        k: &mut F,
    ) -> CTree<Value>
    where
        F: FnMut(&mut Machine<'p>, Vec<Value>) -> CTree<Value>,
    {
        if index == args.len() {
            return k(self, collected);
        }
        let head = self.eager(&args[index], env);
        ctree_bind(self, &head, &mut |m, v: &Value| {
            let mut collected = collected.clone();
            collected.push(v.clone());
            m.eager_args(args, env, index + 1, collected, k)
        })
    }

    fn eager_apply(&mut self, name: &str, args: &[Value]) -> CTree<Value> {
        if self.depth >= DEPTH_LIMIT {
            return CTree::Exhausted;
        }
        self.depth += 1;
        let out = self.eager_apply_inner(name, args);
        self.depth -= 1;
        out
    }

    fn eager_apply_inner(&mut self, name: &str, args: &[Value]) -> CTree<Value> {
        let rule_idxs: Vec<usize> = self.prog.rules_of(name).to_vec();
        let mut applicable: Vec<(usize, HashMap<&'p str, Value>)> = Vec::new();
        for idx in rule_idxs {
            let rule = &self.prog.rules[idx];
            let mut binds: HashMap<&'p str, Value> = HashMap::new();
            if rule
                .patterns
                .iter()
                .zip(args)
                .all(|(p, v)| match_value(p, v, &mut binds))
            {
                applicable.push((idx, binds));
            }
        }
        self.fire_rules_eager(&applicable)
    }

    fn fire_rules_eager(&mut self, applicable: &[(usize, HashMap<&'p str, Value>)]) -> CTree<Value> {
        match applicable {
            [] => CTree::Fail,
            [(idx, binds)] => self.instantiate_eager(*idx, binds),
            [(idx, binds), rest @ ..] => {
                let id = self.mint();
                let head = self.instantiate_eager(*idx, binds);
                let tail = self.fire_rules_eager(rest);
                CTree::Ch(id, Box::new(head), Box::new(tail))
            }
        }
    }

    fn instantiate_eager(&mut self, rule_idx: usize, binds: &HashMap<&'p str, Value>) -> CTree<Value> {
        if !self.tick() {
            return CTree::Exhausted;
        }
        let rule = &self.prog.rules[rule_idx];
        let env = Rc::new(binds.clone());
        self.eager(&rule.rhs, &env)
    }
}

fn match_value<'p>(pat: &'p Pattern, v: &Value, binds: &mut HashMap<&'p str, Value>) -> bool {
    match pat {
        Pattern::Var(x) => {
            binds.insert(x.as_str(), v.clone());
            true
        }
        Pattern::Ctor(name, subpats) => {
            name.as_str() == v.name
                && subpats.len() == v.args.len()
                && subpats
                    .iter()
                    .zip(&v.args)
                    .all(|(p, a)| match_value(p, a, binds))
        }
    }
}

/// Converts a choice-rooted normal form into the internal outcome tree.
/// Choices must be id-labelled; everything else must be a ground
/// constructor term or `fail`.
pub(crate) fn expr_to_ctree(expr: &CoreExpr) -> Result<CTree<Value>, super::ExtractError> {
    match expr {
        CoreExpr::Choice(Some(id), l, r) => Ok(CTree::Ch(
            *id,
            Box::new(expr_to_ctree(l)?),
            Box::new(expr_to_ctree(r)?),
        )),
        CoreExpr::Choice(None, _, _) => Err(super::ExtractError::UnlabelledChoice),
        CoreExpr::Fail => Ok(CTree::Fail),
        other => expr_to_value(other)
            .map(CTree::Leaf)
            .ok_or_else(|| super::ExtractError::NotGround {
                expr: other.to_string(),
            }),
    }
}

/// Reads a ground constructor expression as a value.
pub(crate) fn expr_to_value(expr: &CoreExpr) -> Option<Value> {
    match expr {
        CoreExpr::Ctor(name, args) => {
            let args = args
                .iter()
                .map(expr_to_value)
                .collect::<Option<Vec<_>>>()?;
            Some(Value::node(name.clone(), args))
        }
        _ => None,
    }
}
