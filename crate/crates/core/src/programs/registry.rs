//! Name → program registry for the command-line front end.
//!
//! Every example can be asked for its value tree (`nd` encoding) and for
//! a plan-indexed output function (`plan` encoding); outputs are plain
//! JSON values so the front end can print and sort them uniformly.

use super::{
    double_int, eo_nd, eo_plan, even_int, last_plan, last_splits, min_nd, min_plan,
    ndins_split_nd, ndins_split_plan, ndinsert_nd, ndinsert_plan, perm_nd, perm_plan, sort,
};
use crate::plan::ChoicePlan;
use crate::tree::NDTree;
use serde_json::{json, Value};
use thiserror::Error;

type PlanFn = Box<dyn Fn(&ChoicePlan) -> Value + Send + Sync>;

/// A registered example instantiated with concrete arguments.
pub struct ExampleInstance {
    /// The set-of-values encoding of the run.
    pub nd: NDTree<Value>,
    /// The planned-choices encoding of the run. For programs that can
    /// fail, unsuccessful plans map to JSON `null`.
    pub plan_fn: PlanFn,
}

/// A registered example program.
pub struct ExampleSpec {
    pub name: &'static str,
    pub usage: &'static str,
    pub build: fn(&[String]) -> Result<ExampleInstance, ExampleError>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExampleError {
    #[error("unknown example {0:?}; known examples: perm, ndinsert, ndins, eo, double-even, sort, min, last")]
    Unknown(String),
    #[error("bad arguments: {0}")]
    BadArgs(String),
}

/// All registered examples.
pub fn registry() -> &'static [ExampleSpec] {
    &[
        ExampleSpec {
            name: "perm",
            usage: "perm [1,2,3]",
            build: build_perm,
        },
        ExampleSpec {
            name: "ndinsert",
            usage: "ndinsert 1 [2,3]",
            build: build_ndinsert,
        },
        ExampleSpec {
            name: "ndins",
            usage: "ndins 1 [2,3]",
            build: build_ndins,
        },
        ExampleSpec {
            name: "eo",
            usage: "eo 4",
            build: build_eo,
        },
        ExampleSpec {
            name: "double-even",
            usage: "double-even 4",
            build: build_double_even,
        },
        ExampleSpec {
            name: "sort",
            usage: "sort [3,1,2]",
            build: build_sort,
        },
        ExampleSpec {
            name: "min",
            usage: "min [3,1,2]",
            build: build_min,
        },
        ExampleSpec {
            name: "last",
            usage: "last [1,2,3]",
            build: build_last,
        },
    ]
}

/// Looks up an example by name.
pub fn find_example(name: &str) -> Result<&'static ExampleSpec, ExampleError> {
    registry()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| ExampleError::Unknown(name.to_string()))
}

fn int_list_json(xs: &[i64]) -> Value {
    json!(xs)
}

/// Parses the bracketed list syntax `[1,2,3]` (or `[]`).
pub(crate) fn parse_int_list(s: &str) -> Result<Vec<i64>, ExampleError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ExampleError::BadArgs(format!("expected a list like [1,2,3], got {s:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| ExampleError::BadArgs(format!("bad integer {part:?} in list {s:?}")))
        })
        .collect()
}

fn parse_nat(s: &str) -> Result<u64, ExampleError> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| ExampleError::BadArgs(format!("expected a natural number, got {s:?}")))
}

fn parse_int(s: &str) -> Result<i64, ExampleError> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| ExampleError::BadArgs(format!("expected an integer, got {s:?}")))
}

fn expect_args<'a, const N: usize>(
    args: &'a [String],
    usage: &str,
) -> Result<[&'a str; N], ExampleError> {
    if args.len() != N {
        return Err(ExampleError::BadArgs(format!(
            "expected {N} argument(s), e.g. `{usage}`"
        )));
    }
    let mut out = [""; N];
    for (slot, arg) in out.iter_mut().zip(args) {
        *slot = arg.as_str();
    }
    Ok(out)
}

fn build_perm(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [list] = expect_args::<1>(args, "perm [1,2,3]")?;
    let xs = parse_int_list(list)?;
    let nd = perm_nd(&xs).map_det(&|v| int_list_json(v));
    Ok(ExampleInstance {
        nd,
        plan_fn: Box::new(move |p| int_list_json(&perm_plan(p, &xs))),
    })
}

fn build_ndinsert(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [x, list] = expect_args::<2>(args, "ndinsert 1 [2,3]")?;
    let x = parse_int(x)?;
    let xs = parse_int_list(list)?;
    let nd = ndinsert_nd(&x, &xs).map_det(&|v| int_list_json(v));
    Ok(ExampleInstance {
        nd,
        plan_fn: Box::new(move |p| int_list_json(&ndinsert_plan(p, &x, &xs))),
    })
}

fn build_ndins(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [x, list] = expect_args::<2>(args, "ndins 1 [2,3]")?;
    let x = parse_int(x)?;
    let xs = parse_int_list(list)?;
    let nd = ndins_split_nd(&x, &xs).map_det(&|v| int_list_json(v));
    Ok(ExampleInstance {
        nd,
        plan_fn: Box::new(move |p| int_list_json(&ndins_split_plan(p, &x, &xs))),
    })
}

fn build_eo(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [n] = expect_args::<1>(args, "eo 4")?;
    let n = parse_nat(n)?;
    Ok(ExampleInstance {
        nd: eo_nd(n).map_det(&|m| json!(m)),
        plan_fn: Box::new(move |p| json!(eo_plan(p, n))),
    })
}

fn build_double_even(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [n] = expect_args::<1>(args, "double-even 4")?;
    let n = parse_nat(n)?;
    Ok(ExampleInstance {
        nd: eo_nd(n).map_det(&|m| json!(even_int(double_int(*m)))),
        plan_fn: Box::new(move |p| json!(even_int(double_int(eo_plan(p, n))))),
    })
}

fn build_sort(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [list] = expect_args::<1>(args, "sort [3,1,2]")?;
    let xs = parse_int_list(list)?;
    let sorted = sort(&xs);
    Ok(ExampleInstance {
        nd: NDTree::val(int_list_json(&sorted)),
        plan_fn: Box::new(move |_| int_list_json(&sorted)),
    })
}

fn build_min(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [list] = expect_args::<1>(args, "min [3,1,2]")?;
    let xs = parse_int_list(list)?;
    let nd = min_nd(&xs).map_det(&|m| json!(m));
    Ok(ExampleInstance {
        nd,
        plan_fn: Box::new(move |p| match min_plan(p, &xs) {
            Some(m) => json!(m),
            None => Value::Null,
        }),
    })
}

fn build_last(args: &[String]) -> Result<ExampleInstance, ExampleError> {
    let [list] = expect_args::<1>(args, "last [1,2,3]")?;
    let xs = parse_int_list(list)?;
    let nd = last_splits(&xs).map_det(&|m| json!(m));
    Ok(ExampleInstance {
        nd,
        plan_fn: Box::new(move |p| match last_plan(p, &xs) {
            Some(m) => json!(m),
            None => Value::Null,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{enumerate_plans, PlanBudget};
    use std::collections::BTreeSet;

    #[test]
    fn registry_has_the_documented_names() {
        let names: Vec<&str> = registry().iter().map(|e| e.name).collect();
        assert_eq!(
            names,
            vec!["perm", "ndinsert", "ndins", "eo", "double-even", "sort", "min", "last"]
        );
        assert!(find_example("perm").is_ok());
        assert!(matches!(
            find_example("nosuch"),
            Err(ExampleError::Unknown(_))
        ));
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_int_list("[1,2,3]").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_int_list("[]").unwrap(), Vec::<i64>::new());
        assert_eq!(parse_int_list(" [ 1 , -2 ] ").unwrap(), vec![1, -2]);
        assert!(parse_int_list("1,2").is_err());
        assert!(parse_int_list("[1,x]").is_err());
    }

    #[test]
    fn instances_produce_matching_encodings() {
        let args = vec!["[1,2,3]".to_string()];
        let inst = (find_example("perm").unwrap().build)(&args).unwrap();
        assert_eq!(inst.nd.value_count(), 6);
        let sweep =
            enumerate_plans(&PlanBudget::default(), |p| (inst.plan_fn)(p).to_string()).unwrap();
        let nd_set: BTreeSet<String> =
            inst.nd.values().iter().map(|v| v.to_string()).collect();
        assert_eq!(sweep.output_set(), nd_set);
    }

    #[test]
    fn min_instance_reports_failures_as_null() {
        let args = vec!["[3,1,2]".to_string()];
        let inst = (find_example("min").unwrap().build)(&args).unwrap();
        assert_eq!(inst.nd.values(), vec![serde_json::json!(1)]);
        let sweep = enumerate_plans(&PlanBudget::default(), |p| (inst.plan_fn)(p)).unwrap();
        assert!(sweep.outputs().any(|v| v.is_null()));
    }

    #[test]
    fn bad_arguments_are_rejected() {
        let build = find_example("eo").unwrap().build;
        assert!(build(&["x".to_string()]).is_err());
        assert!(build(&[]).is_err());
        let build = find_example("perm").unwrap().build;
        assert!(build(&["notalist".to_string()]).is_err());
    }
}
