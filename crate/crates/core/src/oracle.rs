//! Ground truth for generated expressions.
//!
//! Two independent checks against the canonical path sum of a graph:
//! exact comparison of monomial multisets, and randomized identity testing
//! where the graph side is evaluated by dynamic programming and never
//! expanded.

use std::collections::BTreeMap;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::{Expr, Monomial};
use crate::field::PrimeField;
use crate::graph::{enumerate_paths, EdgeLabel, LabeledDigraph, Terminal};

/// Evaluates the path sum of `g` without expanding it: the source holds 1
/// and every other vertex sums `value(tail) * label` over its in-edges.
pub fn dp_eval(g: &LabeledDigraph, assignment: &BTreeMap<EdgeLabel, u64>, field: PrimeField) -> Result<u64> {
    let order = g.topological_order().expect("st-dag is acyclic");
    let mut value: BTreeMap<Terminal, u64> = BTreeMap::new();
    for v in order {
        let here = if v == g.source() {
            field.reduce(1)
        } else {
            let mut acc = 0;
            for e in g.in_edges(v) {
                let w = *assignment.get(&e.label).ok_or(Error::UnboundLabel(e.label))?;
                let tail = value.get(&e.tail).copied().unwrap_or(0);
                acc = field.add(acc, field.mul(tail, field.reduce(w)));
            }
            acc
        };
        value.insert(v, here);
    }
    Ok(value[&g.sink()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Fingerprint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub assignment_digest: String,
    pub expression_value: u64,
    pub graph_value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A path whose monomial the expression does not produce.
    MissingFromExpression {
        monomial: String,
    },
    /// A monomial of the expression that is not a path.
    ExtraInExpression {
        monomial: String,
    },
    /// A monomial the expression produces more than once.
    Duplicate {
        monomial: String,
    },
    UnequalTrial(TrialRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Detail {
    Exact {
        expression_monomials: usize,
        graph_monomials: usize,
    },
    Fingerprint {
        degree_bound: u64,
        /// Per-trial chance that a wrong expression still matches.
        false_pass_bound: f64,
        transcript: Vec<TrialRecord>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub result: Outcome,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
    pub prime: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub detail: Detail,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }
}

/// Compares `expand(e)` with the path monomials of `g` as multisets and
/// rejects duplicate monomials in the expansion.
pub fn check_exact(e: &Expr, g: &LabeledDigraph, limit: u64) -> Result<VerificationReport> {
    let mut graph_side = enumerate_paths(g, limit)?;
    let mut expr_side = e.expand(limit)?;
    graph_side.sort_unstable();
    expr_side.sort_unstable();

    let detail = Detail::Exact {
        expression_monomials: expr_side.len(),
        graph_monomials: graph_side.len(),
    };
    let witness = multiset_witness(&expr_side, &graph_side);
    Ok(VerificationReport {
        mode: Mode::Exact,
        result: if witness.is_none() {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        trials: None,
        seed: None,
        prime: None,
        witness,
        detail,
    })
}

fn multiset_witness(expr_side: &[Monomial], graph_side: &[Monomial]) -> Option<Witness> {
    if let Some(w) = expr_side.windows(2).find(|w| w[0] == w[1]) {
        return Some(Witness::Duplicate {
            monomial: w[0].to_string(),
        });
    }
    let (mut i, mut j) = (0, 0);
    while i < expr_side.len() && j < graph_side.len() {
        match expr_side[i].cmp(&graph_side[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                return Some(Witness::ExtraInExpression {
                    monomial: expr_side[i].to_string(),
                })
            }
            std::cmp::Ordering::Greater => {
                return Some(Witness::MissingFromExpression {
                    monomial: graph_side[j].to_string(),
                })
            }
        }
    }
    if let Some(m) = expr_side.get(i) {
        return Some(Witness::ExtraInExpression {
            monomial: m.to_string(),
        });
    }
    graph_side.get(j).map(|m| Witness::MissingFromExpression {
        monomial: m.to_string(),
    })
}

/// Seeded source of nonzero field elements.
///
/// SplitMix64 seeded with `seed` as its raw state. Each draw takes the next
/// 64-bit output `x` and yields `1 + x mod (P - 1)`, rejecting `x` at or
/// above `Z = 2^64 - 1 - ((2^64 - 1) mod (P - 1))` so every nonzero residue
/// is equally likely.
pub struct AssignmentSampler {
    rng: SplitMix64,
    field: PrimeField,
}

impl AssignmentSampler {
    pub fn new(seed: u64, field: PrimeField) -> Self {
        AssignmentSampler {
            rng: SplitMix64::seed_from_u64(seed),
            field,
        }
    }

    pub fn next_element(&mut self) -> u64 {
        let bound = self.field.prime() - 1;
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return 1 + x % bound;
            }
        }
    }

    /// One value per label, drawn in ascending label order.
    pub fn assignment(&mut self, labels: impl IntoIterator<Item = EdgeLabel>) -> BTreeMap<EdgeLabel, u64> {
        let mut labels: Vec<EdgeLabel> = labels.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        labels.into_iter().map(|l| (l, self.next_element())).collect()
    }
}

/// First 16 hex digits of SHA-256 over `label=value;` in label order.
pub fn assignment_digest(assignment: &BTreeMap<EdgeLabel, u64>) -> String {
    let mut hasher = Sha256::new();
    for (label, value) in assignment {
        hasher.update(format!("{label}={value};"));
    }
    hasher.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Randomized identity test of `e` against the path sum of `g`.
///
/// Stops at the first disagreeing trial.
pub fn check_fingerprint(
    e: &Expr,
    g: &LabeledDigraph,
    trials: u32,
    seed: u64,
    field: PrimeField,
) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let (_, degree) = g.path_length_bounds();
    if u128::from(field.prime()) <= 2 * u128::from(degree) {
        return Err(Error::PrimeTooSmall {
            prime: field.prime(),
            degree,
        });
    }
    let mut sampler = AssignmentSampler::new(seed, field);
    let mut transcript = Vec::new();
    let mut witness = None;
    for trial in 0..trials {
        let sigma = sampler.assignment(g.labels());
        let record = TrialRecord {
            trial,
            assignment_digest: assignment_digest(&sigma),
            expression_value: e.eval(&sigma, field)?,
            graph_value: dp_eval(g, &sigma, field)?,
        };
        let unequal = record.expression_value != record.graph_value;
        transcript.push(record.clone());
        if unequal {
            witness = Some(Witness::UnequalTrial(record));
            break;
        }
    }
    Ok(VerificationReport {
        mode: Mode::Fingerprint,
        result: if witness.is_none() {
            Outcome::Pass
        } else {
            Outcome::Fail
        },
        trials: Some(trials),
        seed: Some(seed),
        prime: Some(field.prime()),
        witness,
        detail: Detail::Fingerprint {
            degree_bound: degree,
            false_pass_bound: degree as f64 / field.prime() as f64,
            transcript,
        },
    })
}
