//! Planned choices: the oracle encoding of non-determinism.
//!
//! Instead of returning every possible value, a computation takes a
//! [`ChoicePlan`] and consults it at each would-be non-deterministic
//! choice. The plan assigns a boolean to every *address* — a finite
//! string over {L, R} — and carries a current address. [`ChoicePlan::choose`]
//! reads the bit at the current address; [`ChoicePlan::lchoice`] and
//! [`ChoicePlan::rchoice`] fork the plan into two sub-plans whose
//! consulted address sets are disjoint (prefix `L` vs prefix `R`), so
//! independent sub-computations cannot interfere.
//!
//! [`enumerate_plans`] turns the abstract oracle into an exhaustive test
//! driver: it discovers which addresses a computation actually consults
//! and enumerates every bit assignment over them, so the sweep reaches
//! every output the computation can produce.

use crate::tree::Step;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// A position in the binary address space of choices: a finite sequence
/// of left/right forks from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(Vec<Step>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn child(&self, step: Step) -> Address {
        let mut steps = self.0.clone();
        steps.push(step);
        Address(steps)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::Left => "L",
                Step::Right => "R",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid address character {0:?}, expected 'L' or 'R'")]
pub struct ParseAddressError(char);

impl FromStr for Address {
    type Err = ParseAddressError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Step::Left),
                'R' => Ok(Step::Right),
                other => Err(ParseAddressError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Address)
    }
}

#[derive(Debug, Default)]
struct PlanTable {
    bits: BTreeMap<Address, bool>,
    default: bool,
}

type Trace = Arc<Mutex<BTreeSet<Address>>>;

/// A total assignment of booleans to choice addresses, positioned at a
/// current address. Immutable: the fork operations return fresh plans
/// sharing the same table.
#[derive(Debug, Clone)]
pub struct ChoicePlan {
    table: Arc<PlanTable>,
    at: Address,
    trace: Option<Trace>,
}

impl ChoicePlan {
    /// Plan with the given explicit bits; unlisted addresses read the
    /// default bit.
    pub fn new(bits: BTreeMap<Address, bool>, default: bool) -> Self {
        ChoicePlan {
            table: Arc::new(PlanTable { bits, default }),
            at: Address::root(),
            trace: None,
        }
    }

    /// Plan answering `default` at every address.
    pub fn uniform(default: bool) -> Self {
        ChoicePlan::new(BTreeMap::new(), default)
    }

    /// Parses the literal syntax `addr=bit,…`: comma-separated pairs
    /// where the address is a (possibly empty) string over {L, R} and
    /// the bit is `0` or `1`. The key `default` sets the bit for
    /// unlisted addresses. Example: `=1,L=0,RL=1,default=0`.
    pub fn from_literal(s: &str) -> Result<Self, PlanError> {
        let mut bits = BTreeMap::new();
        let mut default = false;
        let text = s.trim();
        if !text.is_empty() {
            for part in text.split(',') {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| PlanError::bad_literal(s, format!("missing '=' in {part:?}")))?;
                let bit = match value.trim() {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(PlanError::bad_literal(s, format!("bit must be 0 or 1, got {other:?}")))
                    }
                };
                let key = key.trim();
                if key == "default" {
                    default = bit;
                } else {
                    let addr: Address = key
                        .parse()
                        .map_err(|e: ParseAddressError| PlanError::bad_literal(s, e.to_string()))?;
                    bits.insert(addr, bit);
                }
            }
        }
        Ok(ChoicePlan::new(bits, default))
    }

    /// Renders the plan's explicit bits in the literal syntax.
    pub fn literal(&self) -> String {
        let mut parts: Vec<String> = self
            .table
            .bits
            .iter()
            .map(|(a, b)| format!("{a}={}", *b as u8))
            .collect();
        parts.push(format!("default={}", self.table.default as u8));
        parts.join(",")
    }

    /// The bit planned for the current address.
    pub fn choose(&self) -> bool {
        if let Some(trace) = &self.trace {
            trace.lock().unwrap().insert(self.at.clone());
        }
        *self.table.bits.get(&self.at).unwrap_or(&self.table.default)
    }

    /// Sub-plan for the left fork: same table, current address extended
    /// by `L`. Its consulted addresses are disjoint from the right fork's.
    pub fn lchoice(&self) -> ChoicePlan {
        ChoicePlan {
            table: Arc::clone(&self.table),
            at: self.at.child(Step::Left),
            trace: self.trace.clone(),
        }
    }

    /// Sub-plan for the right fork.
    pub fn rchoice(&self) -> ChoicePlan {
        ChoicePlan {
            table: Arc::clone(&self.table),
            at: self.at.child(Step::Right),
            trace: self.trace.clone(),
        }
    }

    /// The plan's current address.
    pub fn current(&self) -> &Address {
        &self.at
    }

    fn traced(bits: BTreeMap<Address, bool>, default: bool) -> (ChoicePlan, Trace) {
        let trace: Trace = Arc::new(Mutex::new(BTreeSet::new()));
        let plan = ChoicePlan {
            table: Arc::new(PlanTable { bits, default }),
            at: Address::root(),
            trace: Some(Arc::clone(&trace)),
        };
        (plan, trace)
    }

    fn untraced(&self) -> ChoicePlan {
        ChoicePlan {
            table: Arc::clone(&self.table),
            at: self.at.clone(),
            trace: None,
        }
    }
}

impl fmt::Display for ChoicePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

/// Limits for [`enumerate_plans`]: how deep addresses may go and how
/// many distinct consulted addresses the sweep is willing to enumerate
/// (each consulted address doubles the number of plans).
#[derive(Debug, Clone, Copy)]
pub struct PlanBudget {
    pub max_depth: usize,
    pub max_addresses: usize,
}

impl Default for PlanBudget {
    fn default() -> Self {
        PlanBudget {
            max_depth: 16,
            max_addresses: 20,
        }
    }
}

impl PlanBudget {
    pub fn with_depth(max_depth: usize) -> Self {
        PlanBudget {
            max_depth,
            ..PlanBudget::default()
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("computation consults {found} addresses, more than the budget of {limit}")]
    TooManyAddresses { found: usize, limit: usize },
    #[error("computation consults address {address} deeper than the budget of {limit}")]
    AddressTooDeep { address: String, limit: usize },
    #[error("bad plan literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },
}

impl PlanError {
    fn bad_literal(literal: &str, reason: String) -> Self {
        PlanError::BadLiteral {
            literal: literal.to_string(),
            reason,
        }
    }
}

/// One plan of a sweep together with the output it produced.
#[derive(Debug, Clone)]
pub struct PlanRun<T> {
    pub plan: ChoicePlan,
    pub output: T,
}

/// The result of exhaustively sweeping a plan-indexed computation.
#[derive(Debug, Clone)]
pub struct PlanSweep<T> {
    /// One run per enumerated plan, in binary counting order over the
    /// sorted consulted addresses (all-false first).
    pub runs: Vec<PlanRun<T>>,
    /// Every address the computation consulted across all runs.
    pub consulted: BTreeSet<Address>,
    /// Length of the deepest consulted address.
    pub depth_used: usize,
    /// Discovery iterations until the consulted set closed.
    pub iterations: usize,
}

impl<T> PlanSweep<T> {
    pub fn outputs(&self) -> impl Iterator<Item = &T> {
        self.runs.iter().map(|r| &r.output)
    }

    /// Distinct outputs, sorted.
    pub fn output_set(&self) -> BTreeSet<T>
    where
        T: Ord + Clone,
    {
        self.outputs().cloned().collect()
    }
}

/// Runs `f` under every plan it can distinguish, within `budget`.
///
/// Starts from the all-default plan, records which addresses `f`
/// consults, enumerates all bit assignments over that set, and repeats
/// until no new addresses appear. Every output reachable by any plan
/// whose consulted addresses fit the budget appears in the sweep,
/// because a run's behaviour depends only on the bits it consults.
pub fn enumerate_plans<T>(
    budget: &PlanBudget,
    f: impl Fn(&ChoicePlan) -> T,
) -> Result<PlanSweep<T>, PlanError> {
    let mut consulted: BTreeSet<Address> = BTreeSet::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if consulted.len() > budget.max_addresses {
            return Err(PlanError::TooManyAddresses {
                found: consulted.len(),
                limit: budget.max_addresses,
            });
        }
        for addr in &consulted {
            if addr.len() > budget.max_depth {
                return Err(PlanError::AddressTooDeep {
                    address: addr.to_string(),
                    limit: budget.max_depth,
                });
            }
        }

        let addresses: Vec<Address> = consulted.iter().cloned().collect();
        let mut runs = Vec::with_capacity(1 << addresses.len());
        let mut seen: BTreeSet<Address> = BTreeSet::new();
        for mask in 0u64..(1u64 << addresses.len()) {
            let bits: BTreeMap<Address, bool> = addresses
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), mask >> i & 1 == 1))
                .collect();
            let (plan, trace) = ChoicePlan::traced(bits, false);
            let output = f(&plan);
            seen.extend(trace.lock().unwrap().iter().cloned());
            runs.push(PlanRun {
                plan: plan.untraced(),
                output,
            });
        }

        if seen.is_subset(&consulted) {
            let depth_used = consulted.iter().map(Address::len).max().unwrap_or(0);
            return Ok(PlanSweep {
                runs,
                consulted,
                depth_used,
                iterations,
            });
        }
        consulted.extend(seen);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_reads_current_address() {
        let p = ChoicePlan::uniform(false);
        assert!(!p.choose());
        let p = ChoicePlan::from_literal("=1").unwrap();
        assert!(p.choose());
        // lchoice moves to address "L"; the root bit is no longer seen
        let p = ChoicePlan::from_literal("=1,L=0").unwrap();
        assert!(!p.lchoice().choose());
    }

    #[test]
    fn forks_consult_disjoint_addresses() {
        let p = ChoicePlan::uniform(false);
        assert_eq!(p.lchoice().rchoice().current().to_string(), "LR");
        assert_ne!(
            p.lchoice().current(),
            p.rchoice().current(),
        );
        let (traced, trace) = ChoicePlan::traced(BTreeMap::new(), false);
        traced.lchoice().choose();
        traced.lchoice().lchoice().choose();
        traced.rchoice().choose();
        let consulted: Vec<String> =
            trace.lock().unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(consulted, vec!["L", "LL", "R"]);
    }

    #[test]
    fn same_plan_twice_is_deterministic() {
        let p = ChoicePlan::from_literal("L=1,R=0,default=1").unwrap();
        let run = |p: &ChoicePlan| (p.choose(), p.lchoice().choose(), p.rchoice().choose());
        assert_eq!(run(&p), run(&p));
    }

    #[test]
    fn literal_round_trip() {
        let p = ChoicePlan::from_literal("=1,L=0,RL=1,default=0").unwrap();
        assert_eq!(p.literal(), "=1,L=0,RL=1,default=0");
        assert!(p.choose());
        assert!(!p.lchoice().choose());
        assert!(p.rchoice().lchoice().choose());
        // unlisted address falls back to the default
        assert!(!p.rchoice().choose());

        assert!(ChoicePlan::from_literal("L=2").is_err());
        assert!(ChoicePlan::from_literal("X=1").is_err());
        assert!(ChoicePlan::from_literal("L").is_err());
    }

    #[test]
    fn enumeration_covers_single_address() {
        let sweep = enumerate_plans(&PlanBudget::default(), |p| p.choose()).unwrap();
        assert_eq!(sweep.runs.len(), 2);
        let outputs: BTreeSet<bool> = sweep.output_set();
        assert_eq!(outputs.len(), 2);
        assert_eq!(sweep.depth_used, 0);
    }

    #[test]
    fn enumeration_discovers_nested_addresses() {
        // consults the root; only when it is true consults "L"
        let f = |p: &ChoicePlan| {
            if p.choose() {
                if p.lchoice().choose() {
                    2
                } else {
                    1
                }
            } else {
                0
            }
        };
        let sweep = enumerate_plans(&PlanBudget::default(), f).unwrap();
        assert_eq!(sweep.output_set(), BTreeSet::from([0, 1, 2]));
        assert_eq!(sweep.consulted.len(), 2);
        assert_eq!(sweep.depth_used, 1);
    }

    #[test]
    fn budget_overflow_is_an_error() {
        // consults 21 distinct addresses
        let f = |p: &ChoicePlan| {
            let mut q = p.clone();
            let mut n = 0u32;
            for _ in 0..21 {
                n += q.choose() as u32;
                q = q.lchoice();
            }
            n
        };
        match enumerate_plans(&PlanBudget::default(), f) {
            Err(PlanError::TooManyAddresses { found, limit }) => {
                assert!(found > limit);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn depth_overflow_is_an_error() {
        let f = |p: &ChoicePlan| p.lchoice().lchoice().lchoice().choose();
        match enumerate_plans(&PlanBudget { max_depth: 2, max_addresses: 20 }, f) {
            Err(PlanError::AddressTooDeep { address, .. }) => assert_eq!(address, "LLL"),
            other => panic!("expected depth error, got {other:?}"),
        }
    }

    #[test]
    fn independence_of_forks() {
        // output depends only on lchoice-side bits
        let f = |p: &ChoicePlan| {
            let q = p.lchoice();
            (q.choose(), q.lchoice().choose())
        };
        let base = ChoicePlan::from_literal("L=1,LL=0").unwrap();
        let expected = f(&base);
        // mutate rchoice-side bits arbitrarily; output unchanged
        for literal in ["L=1,LL=0,R=1", "L=1,LL=0,R=1,RL=1,RR=0", "L=1,LL=0,RLLR=1"] {
            let p = ChoicePlan::from_literal(literal).unwrap();
            assert_eq!(f(&p), expected);
        }
    }
}
