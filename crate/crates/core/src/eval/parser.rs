//! Parser for the core-language text format.
//!
//! One rule per line: `f p1 ... pn = expr`. Constructors are
//! capitalized, functions and variables lowercase; `?` is infix choice
//! (lowest precedence, right-associative), `:` is infix list cons,
//! `fail` the failure expression, `let x = e in e` non-recursive
//! binding, and `--` starts a comment. Nonnegative integer literals are
//! sugar for Peano numerals over the constructors `0` and `S`;
//! `[a,b,c]` is sugar for `Cons`/`Nil` spines. Both sugars also work in
//! patterns.

use super::syntax::{CoreExpr, CoreProgram, CoreRule, Pattern};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

/// Parse or validation failure, with a 1-based source position.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: non-linear pattern: variable {var:?} occurs twice")]
    NonLinearPattern { line: usize, var: String },
    #[error("line {line}: unbound identifier {name:?}")]
    Unbound { line: usize, name: String },
    #[error("line {line}: unknown function {name:?}")]
    UnknownFunction { line: usize, name: String },
    #[error("line {line}: {name} expects {expected} argument(s), got {found} (partial application is not supported)")]
    FunArity {
        line: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: constructor {name} used with {found} argument(s), previously with {expected}")]
    CtorArity {
        line: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("rules for {name} disagree on arity: {first} vs {second}")]
    RuleArity {
        name: String,
        first: usize,
        second: usize,
    },
    #[error("line {line}: variable {name:?} cannot be applied to arguments")]
    AppliedVariable { line: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LIdent(String),
    UIdent(String),
    Num(u64),
    Question,
    Equals,
    Colon,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    KwLet,
    KwIn,
    KwFail,
}

#[derive(Debug, Clone)]
struct SpannedTok {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex_line(text: &str, line: usize) -> Result<Vec<SpannedTok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            break; // comment to end of line
        }
        let tok = match c {
            '?' => Tok::Question,
            '=' => Tok::Equals,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<u64>().map_err(|_| ParseError::Syntax {
                    line,
                    col,
                    msg: format!("numeral {text} is out of range"),
                })?;
                out.push(SpannedTok {
                    tok: Tok::Num(n),
                    line,
                    col,
                });
                continue;
            }
            _ if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "let" => Tok::KwLet,
                    "in" => Tok::KwIn,
                    "fail" => Tok::KwFail,
                    _ if c.is_uppercase() => Tok::UIdent(word),
                    _ => Tok::LIdent(word),
                };
                out.push(SpannedTok { tok, line, col });
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push(SpannedTok { tok, line, col });
        i += 1;
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<SpannedTok>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(toks: Vec<SpannedTok>, line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<SpannedTok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.col)
            .unwrap_or_else(|| self.toks.last().map(|t| t.col + 1).unwrap_or(1))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.tok == tok => Ok(()),
            _ => Err(ParseError::Syntax {
                line: self.line,
                col: self.col(),
                msg: format!("expected {what}"),
            }),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

// ---- patterns ----

fn parse_pattern_atom(c: &mut Cursor) -> Result<Pattern, ParseError> {
    match c.next().map(|t| t.tok) {
        Some(Tok::LIdent(v)) => Ok(Pattern::Var(v)),
        Some(Tok::UIdent(name)) => Ok(Pattern::Ctor(name, Vec::new())),
        Some(Tok::Num(n)) => Ok(numeral_pattern(n)),
        Some(Tok::LBracket) => {
            let mut items = Vec::new();
            if c.peek() == Some(&Tok::RBracket) {
                c.next();
            } else {
                loop {
                    items.push(parse_pattern_inner(c)?);
                    match c.next().map(|t| t.tok) {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RBracket) => break,
                        _ => return Err(c.err("expected ',' or ']' in list pattern")),
                    }
                }
            }
            Ok(list_pattern(items))
        }
        Some(Tok::LParen) => {
            let p = parse_pattern_inner(c)?;
            c.expect(Tok::RParen, "')'")?;
            Ok(p)
        }
        _ => Err(c.err("expected a pattern")),
    }
}

// inside parentheses: constructor applications and infix cons
fn parse_pattern_inner(c: &mut Cursor) -> Result<Pattern, ParseError> {
    let head = match c.peek() {
        Some(Tok::UIdent(_)) => {
            let Some(SpannedTok { tok: Tok::UIdent(name), .. }) = c.next() else {
                unreachable!()
            };
            let mut args = Vec::new();
            while matches!(
                c.peek(),
                Some(Tok::LIdent(_) | Tok::UIdent(_) | Tok::Num(_) | Tok::LParen | Tok::LBracket)
            ) {
                args.push(parse_pattern_atom(c)?);
            }
            Pattern::Ctor(name, args)
        }
        _ => parse_pattern_atom(c)?,
    };
    if c.peek() == Some(&Tok::Colon) {
        c.next();
        let tail = parse_pattern_inner(c)?;
        Ok(Pattern::Ctor("Cons".to_string(), vec![head, tail]))
    } else {
        Ok(head)
    }
}

fn numeral_pattern(n: u64) -> Pattern {
    let mut p = Pattern::Ctor("0".to_string(), Vec::new());
    for _ in 0..n {
        p = Pattern::Ctor("S".to_string(), vec![p]);
    }
    p
}

fn list_pattern(items: Vec<Pattern>) -> Pattern {
    let mut p = Pattern::Ctor("Nil".to_string(), Vec::new());
    for item in items.into_iter().rev() {
        p = Pattern::Ctor("Cons".to_string(), vec![item, p]);
    }
    p
}

// ---- expressions ----

fn parse_expr_toks(c: &mut Cursor) -> Result<CoreExpr, ParseError> {
    parse_choice(c)
}

fn parse_choice(c: &mut Cursor) -> Result<CoreExpr, ParseError> {
    let left = parse_cons(c)?;
    if c.peek() == Some(&Tok::Question) {
        c.next();
        let right = parse_choice(c)?;
        Ok(CoreExpr::choice(left, right))
    } else {
        Ok(left)
    }
}

fn parse_cons(c: &mut Cursor) -> Result<CoreExpr, ParseError> {
    let head = parse_app(c)?;
    if c.peek() == Some(&Tok::Colon) {
        c.next();
        let tail = parse_cons(c)?;
        Ok(CoreExpr::ctor("Cons", vec![head, tail]))
    } else {
        Ok(head)
    }
}

fn parse_app(c: &mut Cursor) -> Result<CoreExpr, ParseError> {
    let head_is_symbol = matches!(c.peek(), Some(Tok::LIdent(_) | Tok::UIdent(_)));
    let head = parse_atom(c)?;
    if !head_is_symbol {
        return Ok(head);
    }
    let mut args = Vec::new();
    while matches!(
        c.peek(),
        Some(
            Tok::LIdent(_)
                | Tok::UIdent(_)
                | Tok::Num(_)
                | Tok::LParen
                | Tok::LBracket
                | Tok::KwFail
        )
    ) {
        args.push(parse_atom(c)?);
    }
    if args.is_empty() {
        return Ok(head);
    }
    match head {
        CoreExpr::Var(name) => Ok(CoreExpr::Fun(name, args)),
        CoreExpr::Ctor(name, existing) if existing.is_empty() => Ok(CoreExpr::Ctor(name, args)),
        _ => Err(c.err("only function or constructor names can be applied")),
    }
}

fn parse_atom(c: &mut Cursor) -> Result<CoreExpr, ParseError> {
    match c.next().map(|t| t.tok) {
        Some(Tok::LIdent(v)) => Ok(CoreExpr::Var(v)),
        Some(Tok::UIdent(name)) => Ok(CoreExpr::Ctor(name, Vec::new())),
        Some(Tok::Num(n)) => Ok(CoreExpr::numeral(n)),
        Some(Tok::KwFail) => Ok(CoreExpr::Fail),
        Some(Tok::LBracket) => {
            let mut items = Vec::new();
            if c.peek() == Some(&Tok::RBracket) {
                c.next();
            } else {
                loop {
                    items.push(parse_expr_toks(c)?);
                    match c.next().map(|t| t.tok) {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RBracket) => break,
                        _ => return Err(c.err("expected ',' or ']' in list")),
                    }
                }
            }
            let mut e = CoreExpr::ctor("Nil", Vec::new());
            for item in items.into_iter().rev() {
                e = CoreExpr::ctor("Cons", vec![item, e]);
            }
            Ok(e)
        }
        Some(Tok::LParen) => {
            let e = parse_expr_toks(c)?;
            c.expect(Tok::RParen, "')'")?;
            Ok(e)
        }
        Some(Tok::KwLet) => {
            let name = match c.next().map(|t| t.tok) {
                Some(Tok::LIdent(v)) => v,
                _ => return Err(c.err("expected a variable name after 'let'")),
            };
            c.expect(Tok::Equals, "'=' in let binding")?;
            let bound = parse_expr_toks(c)?;
            match c.next().map(|t| t.tok) {
                Some(Tok::KwIn) => {}
                _ => return Err(c.err("expected 'in'")),
            }
            let body = parse_expr_toks(c)?;
            Ok(CoreExpr::Let(name, Box::new(bound), Box::new(body)))
        }
        _ => Err(c.err("expected an expression")),
    }
}

// ---- program assembly and validation ----

/// Parses and validates a whole program.
pub fn parse_program(text: &str) -> Result<CoreProgram, ParseError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(toks, line_no);
        rules.push(parse_rule(&mut c)?);
    }

    // function arities come from left-hand sides
    let mut fun_arity: HashMap<String, usize> = HashMap::new();
    for rule in &rules {
        match fun_arity.get(&rule.fun) {
            None => {
                fun_arity.insert(rule.fun.clone(), rule.patterns.len());
            }
            Some(&n) if n != rule.patterns.len() => {
                return Err(ParseError::RuleArity {
                    name: rule.fun.clone(),
                    first: n,
                    second: rule.patterns.len(),
                })
            }
            _ => {}
        }
    }

    // constructor arities: first use fixes the arity
    let mut ctor_arity: HashMap<String, usize> = HashMap::new();
    for rule in &rules {
        for p in &rule.patterns {
            record_pattern_ctors(p, rule.line, &mut ctor_arity)?;
        }
        record_expr_ctors(&rule.rhs, rule.line, &mut ctor_arity)?;
    }

    // linearity, scoping, resolution of 0-ary function references
    let resolved: Vec<CoreRule> = rules
        .into_iter()
        .map(|rule| {
            let mut vars = Vec::new();
            for p in &rule.patterns {
                p.collect_vars(&mut vars);
            }
            let mut seen = HashSet::new();
            for v in &vars {
                if !seen.insert(*v) {
                    return Err(ParseError::NonLinearPattern {
                        line: rule.line,
                        var: v.to_string(),
                    });
                }
            }
            let bound: HashSet<String> = vars.into_iter().map(str::to_string).collect();
            let rhs = resolve_expr(rule.rhs, &bound, &fun_arity, rule.line)?;
            Ok(CoreRule { rhs, ..rule })
        })
        .collect::<Result<_, _>>()?;

    Ok(CoreProgram::assemble(resolved, fun_arity, ctor_arity))
}

/// Parses a closed expression and validates it against `prog`'s
/// functions and constructor arities.
pub fn parse_expr_in(prog: &CoreProgram, text: &str) -> Result<CoreExpr, ParseError> {
    let toks = lex_line(text, 1)?;
    let mut c = Cursor::new(toks, 1);
    if c.at_end() {
        return Err(c.err("empty expression"));
    }
    let expr = parse_expr_toks(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after expression"));
    }
    let mut ctor_arity = prog.ctor_arities();
    record_expr_ctors(&expr, 1, &mut ctor_arity)?;
    let fun_arity: HashMap<String, usize> = prog
        .functions()
        .map(|(name, arity)| (name.to_string(), arity))
        .collect();
    resolve_expr(expr, &HashSet::new(), &fun_arity, 1)
}

fn parse_rule(c: &mut Cursor) -> Result<CoreRule, ParseError> {
    let fun = match c.next().map(|t| t.tok) {
        Some(Tok::LIdent(name)) => name,
        _ => return Err(c.err("a rule must start with a lowercase function name")),
    };
    let mut patterns = Vec::new();
    while c.peek() != Some(&Tok::Equals) {
        if c.at_end() {
            return Err(c.err("expected '=' in rule"));
        }
        patterns.push(parse_pattern_atom(c)?);
    }
    c.expect(Tok::Equals, "'='")?;
    let rhs = parse_expr_toks(c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after rule"));
    }
    Ok(CoreRule {
        fun,
        patterns,
        rhs,
        line: c.line,
    })
}

fn record_ctor(
    name: &str,
    arity: usize,
    line: usize,
    ctor_arity: &mut HashMap<String, usize>,
) -> Result<(), ParseError> {
    match ctor_arity.get(name) {
        None => {
            ctor_arity.insert(name.to_string(), arity);
            Ok(())
        }
        Some(&expected) if expected == arity => Ok(()),
        Some(&expected) => Err(ParseError::CtorArity {
            line,
            name: name.to_string(),
            expected,
            found: arity,
        }),
    }
}

fn record_pattern_ctors(
    p: &Pattern,
    line: usize,
    ctor_arity: &mut HashMap<String, usize>,
) -> Result<(), ParseError> {
    if let Pattern::Ctor(name, ps) = p {
        record_ctor(name, ps.len(), line, ctor_arity)?;
        for p in ps {
            record_pattern_ctors(p, line, ctor_arity)?;
        }
    }
    Ok(())
}

fn record_expr_ctors(
    e: &CoreExpr,
    line: usize,
    ctor_arity: &mut HashMap<String, usize>,
) -> Result<(), ParseError> {
    match e {
        CoreExpr::Ctor(name, args) => {
            record_ctor(name, args.len(), line, ctor_arity)?;
            for a in args {
                record_expr_ctors(a, line, ctor_arity)?;
            }
        }
        CoreExpr::Fun(_, args) => {
            for a in args {
                record_expr_ctors(a, line, ctor_arity)?;
            }
        }
        CoreExpr::Choice(_, l, r) => {
            record_expr_ctors(l, line, ctor_arity)?;
            record_expr_ctors(r, line, ctor_arity)?;
        }
        CoreExpr::Let(_, b, body) => {
            record_expr_ctors(b, line, ctor_arity)?;
            record_expr_ctors(body, line, ctor_arity)?;
        }
        CoreExpr::Var(_) | CoreExpr::Fail => {}
    }
    Ok(())
}

// Resolves identifier references: bound names stay variables, unbound
// names must be defined functions (0-ary references become calls), and
// every call must be saturated.
fn resolve_expr(
    e: CoreExpr,
    bound: &HashSet<String>,
    fun_arity: &HashMap<String, usize>,
    line: usize,
) -> Result<CoreExpr, ParseError> {
    match e {
        CoreExpr::Var(name) => {
            if bound.contains(&name) {
                Ok(CoreExpr::Var(name))
            } else if let Some(&arity) = fun_arity.get(&name) {
                if arity == 0 {
                    Ok(CoreExpr::Fun(name, Vec::new()))
                } else {
                    Err(ParseError::FunArity {
                        line,
                        name,
                        expected: arity,
                        found: 0,
                    })
                }
            } else {
                Err(ParseError::Unbound { line, name })
            }
        }
        CoreExpr::Fun(name, args) => {
            if bound.contains(&name) {
                return Err(ParseError::AppliedVariable { line, name });
            }
            let expected = *fun_arity
                .get(&name)
                .ok_or_else(|| ParseError::UnknownFunction {
                    line,
                    name: name.clone(),
                })?;
            if expected != args.len() {
                return Err(ParseError::FunArity {
                    line,
                    name,
                    expected,
                    found: args.len(),
                });
            }
            let args = args
                .into_iter()
                .map(|a| resolve_expr(a, bound, fun_arity, line))
                .collect::<Result<_, _>>()?;
            Ok(CoreExpr::Fun(name, args))
        }
        CoreExpr::Ctor(name, args) => {
            let args = args
                .into_iter()
                .map(|a| resolve_expr(a, bound, fun_arity, line))
                .collect::<Result<_, _>>()?;
            Ok(CoreExpr::Ctor(name, args))
        }
        CoreExpr::Choice(id, l, r) => Ok(CoreExpr::Choice(
            id,
            Box::new(resolve_expr(*l, bound, fun_arity, line)?),
            Box::new(resolve_expr(*r, bound, fun_arity, line)?),
        )),
        CoreExpr::Fail => Ok(CoreExpr::Fail),
        CoreExpr::Let(x, b, body) => {
            let b = resolve_expr(*b, bound, fun_arity, line)?;
            let mut inner = bound.clone();
            inner.insert(x.clone());
            let body = resolve_expr(*body, &inner, fun_arity, line)?;
            Ok(CoreExpr::Let(x, Box::new(b), Box::new(body)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PEANO: &str = "\
-- Peano arithmetic
add 0 y = y
add (S x) y = S (add x y)
double x = add x x
even 0 = True
even (S 0) = False
even (S (S x)) = even x
";

    #[test]
    fn parses_peano_program() {
        let prog = parse_program(PEANO).unwrap();
        assert_eq!(prog.rules.len(), 6);
        assert_eq!(prog.fun_arity("add"), Some(2));
        assert_eq!(prog.fun_arity("double"), Some(1));
        assert_eq!(prog.ctor_arity("S"), Some(1));
        assert_eq!(prog.ctor_arity("0"), Some(0));
        assert_eq!(prog.rules_of("even").len(), 3);
    }

    #[test]
    fn parses_choice_rule() {
        let prog = parse_program("f x = x ? S x").unwrap();
        let rule = &prog.rules[0];
        assert!(matches!(rule.rhs, CoreExpr::Choice(None, _, _)));
    }

    #[test]
    fn choice_is_right_associative_and_loose() {
        let prog = parse_program("f x = x ? x ? S x").unwrap();
        match &prog.rules[0].rhs {
            CoreExpr::Choice(_, l, r) => {
                assert!(matches!(**l, CoreExpr::Var(_)));
                assert!(matches!(**r, CoreExpr::Choice(_, _, _)));
            }
            other => panic!("unexpected rhs {other:?}"),
        }
    }

    #[test]
    fn non_linear_pattern_is_rejected() {
        let err = parse_program("f (Pair x x) = x").unwrap_err();
        assert!(matches!(err, ParseError::NonLinearPattern { var, .. } if var == "x"));
    }

    #[test]
    fn unbound_and_unknown_names_are_rejected() {
        assert!(matches!(
            parse_program("f x = y").unwrap_err(),
            ParseError::Unbound { name, .. } if name == "y"
        ));
        assert!(matches!(
            parse_program("f x = g x").unwrap_err(),
            ParseError::UnknownFunction { name, .. } if name == "g"
        ));
    }

    #[test]
    fn arity_errors_are_rejected() {
        assert!(matches!(
            parse_program("f x = f x x").unwrap_err(),
            ParseError::FunArity { .. }
        ));
        assert!(matches!(
            parse_program("f x = Cons x\ng y = Cons y y y").unwrap_err(),
            ParseError::CtorArity { .. }
        ));
        assert!(matches!(
            parse_program("f x = x\nf x y = x").unwrap_err(),
            ParseError::RuleArity { .. }
        ));
        assert!(matches!(
            parse_program("f x = x x").unwrap_err(),
            ParseError::AppliedVariable { .. }
        ));
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_program("f x = )").unwrap_err() {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 7);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_program("f x").is_err());
        assert!(parse_program("F x = x").is_err());
    }

    #[test]
    fn numerals_desugar_to_peano() {
        let prog = parse_program(PEANO).unwrap();
        let e = parse_expr_in(&prog, "add 2 1").unwrap();
        assert_eq!(
            e,
            CoreExpr::fun("add", vec![CoreExpr::numeral(2), CoreExpr::numeral(1)])
        );
    }

    #[test]
    fn list_sugar_desugars_to_cons() {
        let prog = parse_program("head (Cons x xs) = x\ntail (Cons x xs) = xs\ntail Nil = fail")
            .unwrap();
        let e = parse_expr_in(&prog, "head (0 : tail [])").unwrap();
        assert_eq!(
            e,
            CoreExpr::fun(
                "head",
                vec![CoreExpr::ctor(
                    "Cons",
                    vec![
                        CoreExpr::numeral(0),
                        CoreExpr::fun("tail", vec![CoreExpr::ctor("Nil", vec![])]),
                    ]
                )]
            )
        );
        let e2 = parse_expr_in(&prog, "head [1,2]").unwrap();
        assert_eq!(e2.to_string(), "head (Cons (S 0) (Cons (S (S 0)) Nil))");
    }

    #[test]
    fn let_expressions_parse_and_scope() {
        let prog = parse_program("coin = 0 ? 1\nuse x = let y = coin in Pair y y").unwrap();
        assert!(matches!(
            prog.rules[1].rhs,
            CoreExpr::Let(ref n, _, _) if n == "y"
        ));
        // the bound name is not visible in its own definition
        assert!(matches!(
            parse_program("f x = let y = y in x").unwrap_err(),
            ParseError::Unbound { name, .. } if name == "y"
        ));
    }

    #[test]
    fn zero_ary_function_references_resolve() {
        let prog = parse_program("coin = 0 ? 1\nmain = coin").unwrap();
        assert_eq!(prog.rules[1].rhs, CoreExpr::fun("coin", vec![]));
        let e = parse_expr_in(&prog, "coin").unwrap();
        assert_eq!(e, CoreExpr::fun("coin", vec![]));
    }

    #[test]
    fn expr_validation_requires_closedness() {
        let prog = parse_program(PEANO).unwrap();
        assert!(matches!(
            parse_expr_in(&prog, "add x 1").unwrap_err(),
            ParseError::Unbound { .. }
        ));
        assert!(matches!(
            parse_expr_in(&prog, "boom 1").unwrap_err(),
            ParseError::UnknownFunction { .. }
        ));
        assert!(parse_expr_in(&prog, "add 1").is_err());
        assert!(parse_expr_in(&prog, "").is_err());
        assert!(parse_expr_in(&prog, "add 1 2 )").is_err());
    }

    #[test]
    fn ctor_arity_checked_against_program() {
        let prog = parse_program("head (Cons x xs) = x").unwrap();
        assert!(matches!(
            parse_expr_in(&prog, "head (Cons 1)").unwrap_err(),
            ParseError::CtorArity { .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let prog = parse_program("\n-- nothing here\n\nid x = x  -- trailing\n").unwrap();
        assert_eq!(prog.rules.len(), 1);
    }
}
