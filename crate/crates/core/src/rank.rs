//! Ranking functions and the fixpoint computation that decides whether one
//! exists.
//!
//! A ranking function `ψ` over a labelling without `out` arguments satisfies
//!
//! 1. `ψ(u) > ψ(v)` for every attack `(u, v)` touching an `in` argument, and
//! 2. `ψ(u) ≥ min { ψ(v) | v ∈ Att(u) ∩ U }` for every `undec` argument `u`,
//!    the minimum over an empty set being `+∞`.
//!
//! [`rank`] sweeps the arguments in name order, raising each value to the
//! least one compatible with its neighbours, until a sweep changes nothing.
//! Values never decrease; a value above `|A|` proves that no ranking exists.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{ArgumentId, Framework};
use crate::semantics::{Label, Labelling};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingFunction {
    values: BTreeMap<ArgumentId, i64>,
}

impl RankingFunction {
    pub fn new(values: BTreeMap<ArgumentId, i64>) -> Self {
        RankingFunction { values }
    }

    pub fn from_pairs(pairs: &[(&str, i64)]) -> Result<Self> {
        Ok(RankingFunction {
            values: pairs
                .iter()
                .map(|(n, v)| Ok((ArgumentId::new(*n)?, *v)))
                .collect::<Result<_>>()?,
        })
    }

    pub fn get(&self, arg: &str) -> Option<i64> {
        self.values.get(arg).copied()
    }

    pub fn values(&self) -> &BTreeMap<ArgumentId, i64> {
        &self.values
    }

    /// Checks both ranking conditions for `labelling` on `framework`.
    pub fn validate(
        &self,
        framework: &Framework,
        labelling: &Labelling,
    ) -> Result<std::result::Result<(), RankViolation>> {
        let labels = no_out_labels(framework, labelling)?;
        let psi = framework
            .arguments()
            .iter()
            .map(|a| {
                self.get(a.as_str())
                    .ok_or_else(|| Error::Precondition(format!("ranking has no value for {a}")))
            })
            .collect::<Result<Vec<_>>>()?;
        for &(u, v) in framework.attack_indices() {
            if (labels[u] == Label::In || labels[v] == Label::In) && psi[u] <= psi[v] {
                return Ok(Err(RankViolation::Attack(
                    framework.name(u).clone(),
                    framework.name(v).clone(),
                )));
            }
        }
        for u in 0..framework.len() {
            if labels[u] != Label::Undec {
                continue;
            }
            let floor = framework
                .attackers_idx(u)
                .iter()
                .filter(|&&v| labels[v] == Label::Undec)
                .map(|&v| psi[v])
                .min();
            if floor.is_none_or(|m| psi[u] < m) {
                return Ok(Err(RankViolation::Undec(framework.name(u).clone())));
            }
        }
        Ok(Ok(()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankViolation {
    /// Condition 1 fails on this attack.
    Attack(ArgumentId, ArgumentId),
    /// Condition 2 fails at this `undec` argument.
    Undec(ArgumentId),
}

impl fmt::Display for RankViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankViolation::Attack(u, v) => write!(
                f,
                "attack ({u},{v}) touches an in argument but is not rank-decreasing"
            ),
            RankViolation::Undec(u) => write!(
                f,
                "undec argument {u} ranks below all of its undec attackers"
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankFailureKind {
    /// An `undec` argument has no `undec` attacker.
    NoUndecAttacker,
    /// A value exceeded the number of arguments.
    BoundExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankOutcome {
    Yes(RankingFunction),
    No {
        argument: ArgumentId,
        kind: RankFailureKind,
    },
}

impl RankOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, RankOutcome::Yes(_))
    }
}

fn no_out_labels(framework: &Framework, labelling: &Labelling) -> Result<Vec<Label>> {
    let labels = labelling.to_indexed(framework)?;
    if let Some(v) = labels.iter().position(|&l| l == Label::Out) {
        return Err(Error::Precondition(format!(
            "ranking is defined on in/undec arguments only, but {} is out",
            framework.name(v)
        )));
    }
    Ok(labels)
}

/// Decides whether a ranking function exists for a labelling without `out`
/// arguments and returns the least one when it does.
pub fn rank(framework: &Framework, labelling: &Labelling) -> Result<RankOutcome> {
    rank_traced(framework, labelling, |_| {})
}

/// As [`rank`], calling `after_sweep` with the value vector (in name order)
/// after every completed sweep.
pub fn rank_traced(
    framework: &Framework,
    labelling: &Labelling,
    after_sweep: impl FnMut(&[i64]),
) -> Result<RankOutcome> {
    let labels = no_out_labels(framework, labelling)?;
    Ok(match rank_idx(framework, &labels, after_sweep) {
        Ok(psi) => RankOutcome::Yes(RankingFunction {
            values: framework.arguments().iter().cloned().zip(psi).collect(),
        }),
        Err((v, kind)) => RankOutcome::No {
            argument: framework.name(v).clone(),
            kind,
        },
    })
}

pub(crate) fn rank_idx(
    framework: &Framework,
    labels: &[Label],
    mut after_sweep: impl FnMut(&[i64]),
) -> std::result::Result<Vec<i64>, (usize, RankFailureKind)> {
    let n = framework.len();
    let bound = n as i64;
    let mut psi = vec![0i64; n];
    // An argument is re-evaluated only after a value it depends on changed;
    // otherwise its aggregate is unchanged and the update is a no-op.
    let mut dirty = vec![true; n];
    let max_sweeps = (n + 2) * (n + 2);
    for _ in 0..max_sweeps {
        let mut changed = false;
        for u in 0..n {
            if !std::mem::take(&mut dirty[u]) {
                continue;
            }
            let targets = framework.targets_idx(u);
            let new = match labels[u] {
                Label::In => targets.iter().map(|&v| psi[v] + 1).fold(psi[u], i64::max),
                Label::Undec => {
                    let floor = framework
                        .attackers_idx(u)
                        .iter()
                        .filter(|&&v| labels[v] == Label::Undec)
                        .map(|&v| psi[v])
                        .min();
                    let Some(floor) = floor else {
                        return Err((u, RankFailureKind::NoUndecAttacker));
                    };
                    targets
                        .iter()
                        .filter(|&&v| labels[v] == Label::In)
                        .map(|&v| psi[v] + 1)
                        .fold(psi[u].max(floor), i64::max)
                }
                Label::Out => unreachable!("out arguments are rejected up front"),
            };
            if new > bound {
                return Err((u, RankFailureKind::BoundExceeded));
            }
            if new != psi[u] {
                psi[u] = new;
                changed = true;
                mark_dependents(framework, labels, u, &mut dirty);
            }
        }
        after_sweep(&psi);
        if !changed {
            return Ok(psi);
        }
    }
    panic!("ranking fixpoint did not settle within {max_sweeps} sweeps");
}

fn mark_dependents(framework: &Framework, labels: &[Label], v: usize, dirty: &mut [bool]) {
    for &u in framework.attackers_idx(v) {
        // in attackers take a max over all targets; undec ones over in targets
        if labels[u] == Label::In || labels[v] == Label::In {
            dirty[u] = true;
        }
    }
    if labels[v] == Label::Undec {
        for &w in framework.targets_idx(v) {
            if labels[w] == Label::Undec {
                dirty[w] = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rank_sample() -> (Framework, Labelling) {
        let f = Framework::from_names(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("b", "a"),
                ("f", "b"),
                ("e", "b"),
                ("c", "e"),
                ("d", "c"),
                ("e", "c"),
            ],
        )
        .unwrap();
        let l = Labelling::from_names(&["a", "b", "d", "f"], &[], &["c", "e"]).unwrap();
        (f, l)
    }

    #[test]
    fn sample_graph_ranks() {
        let (f, l) = rank_sample();
        let RankOutcome::Yes(psi) = rank(&f, &l).unwrap() else {
            panic!("expected a ranking");
        };
        let expected = RankingFunction::from_pairs(&[
            ("a", 0),
            ("b", 1),
            ("c", 2),
            ("d", 3),
            ("e", 2),
            ("f", 2),
        ])
        .unwrap();
        assert_eq!(psi, expected);
        assert_eq!(psi.validate(&f, &l).unwrap(), Ok(()));
    }

    #[test]
    fn extra_attack_breaks_ranking() {
        let (f, l) = rank_sample();
        let mut atts: Vec<(String, String)> = f
            .attacks()
            .into_iter()
            .map(|(s, d)| (s.to_string(), d.to_string()))
            .collect();
        atts.push(("b".into(), "d".into()));
        let refs: Vec<(&str, &str)> = atts.iter().map(|(s, d)| (s.as_str(), d.as_str())).collect();
        let g = Framework::from_names(&["a", "b", "c", "d", "e", "f"], &refs).unwrap();
        assert!(matches!(
            rank(&g, &l).unwrap(),
            RankOutcome::No {
                kind: RankFailureKind::BoundExceeded,
                ..
            }
        ));
    }

    #[test]
    fn single_in_argument() {
        let f = Framework::from_names(&["a"], &[]).unwrap();
        let l = Labelling::from_names(&["a"], &[], &[]).unwrap();
        assert_eq!(
            rank(&f, &l).unwrap(),
            RankOutcome::Yes(RankingFunction::from_pairs(&[("a", 0)]).unwrap())
        );
    }

    #[test]
    fn undec_without_undec_attacker() {
        let f = Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let l = Labelling::from_names(&["b"], &[], &["a"]).unwrap();
        assert_eq!(
            rank(&f, &l).unwrap(),
            RankOutcome::No {
                argument: ArgumentId::new("a").unwrap(),
                kind: RankFailureKind::NoUndecAttacker
            }
        );
    }

    #[test]
    fn self_attacking_in_argument_overflows() {
        let f = Framework::from_names(&["a"], &[("a", "a")]).unwrap();
        let l = Labelling::from_names(&["a"], &[], &[]).unwrap();
        assert!(matches!(
            rank(&f, &l).unwrap(),
            RankOutcome::No {
                kind: RankFailureKind::BoundExceeded,
                ..
            }
        ));
        let undec = Labelling::from_names(&[], &[], &["a"]).unwrap();
        assert!(rank(&f, &undec).unwrap().is_yes());
    }

    #[test]
    fn out_labels_rejected() {
        let f = Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let l = Labelling::from_names(&["a"], &["b"], &[]).unwrap();
        assert!(matches!(rank(&f, &l), Err(Error::Precondition(_))));
    }

    #[test]
    fn validator_rejects_bad_rankings() {
        let (f, l) = rank_sample();
        let flat = RankingFunction::from_pairs(&[
            ("a", 0),
            ("b", 0),
            ("c", 0),
            ("d", 0),
            ("e", 0),
            ("f", 0),
        ])
        .unwrap();
        assert!(matches!(
            flat.validate(&f, &l).unwrap(),
            Err(RankViolation::Attack(..))
        ));
        let low_c = RankingFunction::from_pairs(&[
            ("a", 0),
            ("b", 1),
            ("c", 1),
            ("d", 3),
            ("e", 2),
            ("f", 2),
        ])
        .unwrap();
        assert_eq!(
            low_c.validate(&f, &l).unwrap(),
            Err(RankViolation::Undec(ArgumentId::new("c").unwrap()))
        );
    }

    #[test]
    fn values_never_decrease_across_sweeps() {
        let (f, l) = rank_sample();
        let mut prev = vec![0; f.len()];
        let mut sweeps = 0;
        rank_traced(&f, &l, |psi| {
            assert!(psi.iter().zip(&prev).all(|(new, old)| new >= old));
            prev = psi.to_vec();
            sweeps += 1;
        })
        .unwrap();
        assert_eq!(sweeps, 3);
    }
}
