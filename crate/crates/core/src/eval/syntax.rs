//! Abstract syntax of the core language.
//!
//! A program is a set of rewrite rules over constructor terms. Rules for
//! the same function may overlap; overlapping applicable rules fire
//! non-deterministically. The expression language has variables,
//! constructor and function application, binary choice, explicit
//! failure, and non-recursive `let`.

use std::collections::HashMap;
use std::fmt;

/// Identifier attached to a choice when it is first reduced. All copies
/// of a shared choice carry the same id, so value extraction can keep
/// their selections consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceId(pub u64);

impl fmt::Display for ChoiceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A core-language expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreExpr {
    Var(String),
    /// Constructor application, e.g. `Cons 0 Nil`.
    Ctor(String, Vec<CoreExpr>),
    /// Defined-function application.
    Fun(String, Vec<CoreExpr>),
    /// Binary choice. The id is `None` in surface programs and is minted
    /// when the choice is first reduced; pre-labelled choices appear in
    /// normal forms fed to [`extract_values`](super::extract_values).
    Choice(Option<ChoiceId>, Box<CoreExpr>, Box<CoreExpr>),
    Fail,
    /// Non-recursive let: the bound name is visible in the body only.
    Let(String, Box<CoreExpr>, Box<CoreExpr>),
}

impl CoreExpr {
    pub fn var(name: impl Into<String>) -> Self {
        CoreExpr::Var(name.into())
    }

    pub fn ctor(name: impl Into<String>, args: Vec<CoreExpr>) -> Self {
        CoreExpr::Ctor(name.into(), args)
    }

    pub fn fun(name: impl Into<String>, args: Vec<CoreExpr>) -> Self {
        CoreExpr::Fun(name.into(), args)
    }

    pub fn choice(l: CoreExpr, r: CoreExpr) -> Self {
        CoreExpr::Choice(None, Box::new(l), Box::new(r))
    }

    pub fn choice_with_id(id: ChoiceId, l: CoreExpr, r: CoreExpr) -> Self {
        CoreExpr::Choice(Some(id), Box::new(l), Box::new(r))
    }

    /// Peano numeral: `S` applied `n` times to `0`.
    pub fn numeral(n: u64) -> Self {
        let mut e = CoreExpr::Ctor("0".to_string(), Vec::new());
        for _ in 0..n {
            e = CoreExpr::Ctor("S".to_string(), vec![e]);
        }
        e
    }
}

/// A rule pattern: a variable or a constructor applied to sub-patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Var(String),
    Ctor(String, Vec<Pattern>),
}

impl Pattern {
    pub(crate) fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Pattern::Var(v) => out.push(v),
            Pattern::Ctor(_, ps) => {
                for p in ps {
                    p.collect_vars(out);
                }
            }
        }
    }
}

/// One rewrite rule `f p1 ... pn = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreRule {
    pub fun: String,
    pub patterns: Vec<Pattern>,
    pub rhs: CoreExpr,
    /// Source line, for diagnostics.
    pub line: usize,
}

/// A validated program: rules grouped per function, with consistent
/// constructor and function arities.
#[derive(Debug, Clone, Default)]
pub struct CoreProgram {
    pub rules: Vec<CoreRule>,
    rules_by_fun: HashMap<String, Vec<usize>>,
    fun_arity: HashMap<String, usize>,
    ctor_arity: HashMap<String, usize>,
}

impl CoreProgram {
    pub(crate) fn assemble(
        rules: Vec<CoreRule>,
        fun_arity: HashMap<String, usize>,
        ctor_arity: HashMap<String, usize>,
    ) -> Self {
        let mut rules_by_fun: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            rules_by_fun.entry(rule.fun.clone()).or_default().push(i);
        }
        CoreProgram {
            rules,
            rules_by_fun,
            fun_arity,
            ctor_arity,
        }
    }

    pub fn rules_of(&self, fun: &str) -> &[usize] {
        self.rules_by_fun.get(fun).map_or(&[], Vec::as_slice)
    }

    pub fn fun_arity(&self, fun: &str) -> Option<usize> {
        self.fun_arity.get(fun).copied()
    }

    pub fn ctor_arity(&self, ctor: &str) -> Option<usize> {
        self.ctor_arity.get(ctor).copied()
    }

    pub(crate) fn ctor_arities(&self) -> HashMap<String, usize> {
        self.ctor_arity.clone()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.fun_arity.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// A ground constructor term: the result of a successful evaluation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value {
    pub name: String,
    pub args: Vec<Value>,
}

impl Value {
    pub fn leaf(name: impl Into<String>) -> Self {
        Value {
            name: name.into(),
            args: Vec::new(),
        }
    }

    pub fn node(name: impl Into<String>, args: Vec<Value>) -> Self {
        Value {
            name: name.into(),
            args,
        }
    }

    /// The numeral this value denotes, if it is a pure `S`/`0` chain.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut cur = self;
        loop {
            match (cur.name.as_str(), cur.args.len()) {
                ("0", 0) => return Some(n),
                ("S", 1) => {
                    n += 1;
                    cur = &cur.args[0];
                }
                _ => return None,
            }
        }
    }

    /// The element list this value denotes, if it is a `Cons`/`Nil` spine.
    pub fn as_list(&self) -> Option<Vec<&Value>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match (cur.name.as_str(), cur.args.len()) {
                ("Nil", 0) => return Some(out),
                ("Cons", 2) => {
                    out.push(&cur.args[0]);
                    cur = &cur.args[1];
                }
                _ => return None,
            }
        }
    }

    /// Converts a `Cons`/`Nil` spine of numerals to a vector of integers.
    pub fn as_numeral_list(&self) -> Option<Vec<u64>> {
        self.as_list()?.into_iter().map(Value::as_numeral).collect()
    }

    pub fn from_numeral(n: u64) -> Self {
        let mut v = Value::leaf("0");
        for _ in 0..n {
            v = Value::node("S", vec![v]);
        }
        v
    }

    pub fn from_numeral_list(xs: &[u64]) -> Self {
        let mut v = Value::leaf("Nil");
        for x in xs.iter().rev() {
            v = Value::node("Cons", vec![Value::from_numeral(*x), v]);
        }
        v
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        if let Some(items) = self.as_list() {
            f.write_str("[")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                item.fmt_prec(f, false)?;
            }
            return f.write_str("]");
        }
        if self.args.is_empty() {
            return f.write_str(&self.name);
        }
        if nested {
            f.write_str("(")?;
        }
        f.write_str(&self.name)?;
        for arg in &self.args {
            f.write_str(" ")?;
            arg.fmt_prec(f, true)?;
        }
        if nested {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

impl fmt::Display for CoreExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, f, 0)
    }
}

// precedence: 0 = choice position, 1 = application argument
fn fmt_expr(e: &CoreExpr, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match e {
        CoreExpr::Var(v) => f.write_str(v),
        CoreExpr::Fail => f.write_str("fail"),
        CoreExpr::Ctor(name, args) | CoreExpr::Fun(name, args) => {
            if args.is_empty() {
                f.write_str(name)
            } else {
                if prec >= 1 {
                    f.write_str("(")?;
                }
                f.write_str(name)?;
                for a in args {
                    f.write_str(" ")?;
                    fmt_expr(a, f, 1)?;
                }
                if prec >= 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
        CoreExpr::Choice(id, l, r) => {
            if prec >= 1 {
                f.write_str("(")?;
            }
            fmt_expr(l, f, 1)?;
            match id {
                Some(id) => write!(f, " ?{id} ")?,
                None => f.write_str(" ? ")?,
            }
            fmt_expr(r, f, 0)?;
            if prec >= 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
        CoreExpr::Let(x, bound, body) => {
            if prec >= 1 {
                f.write_str("(")?;
            }
            write!(f, "let {x} = ")?;
            fmt_expr(bound, f, 0)?;
            f.write_str(" in ")?;
            fmt_expr(body, f, 0)?;
            if prec >= 1 {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeral_sugar_round_trips() {
        for n in [0, 1, 2, 7] {
            let v = Value::from_numeral(n);
            assert_eq!(v.as_numeral(), Some(n));
            assert_eq!(v.to_string(), n.to_string());
        }
        assert_eq!(
            Value::node("S", vec![Value::leaf("True")]).as_numeral(),
            None
        );
    }

    #[test]
    fn list_sugar_round_trips() {
        let v = Value::from_numeral_list(&[1, 2, 3]);
        assert_eq!(v.as_numeral_list(), Some(vec![1, 2, 3]));
        assert_eq!(v.to_string(), "[1,2,3]");
        assert_eq!(Value::leaf("Nil").to_string(), "[]");
    }

    #[test]
    fn plain_terms_display_with_parens() {
        let v = Value::node(
            "Pair",
            vec![Value::node("S", vec![Value::leaf("True")]), Value::leaf("0")],
        );
        assert_eq!(v.to_string(), "Pair (S True) 0");
    }

    #[test]
    fn expr_display() {
        let e = CoreExpr::fun(
            "double",
            vec![CoreExpr::choice(CoreExpr::numeral(0), CoreExpr::numeral(1))],
        );
        assert_eq!(e.to_string(), "double (0 ? S 0)");
    }
}
