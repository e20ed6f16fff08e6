//! Labellings and complete semantics.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ArgumentId, Framework};

/// Default cap on the number of arguments for [`enumerate_complete`].
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    In,
    Out,
    Undec,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        })
    }
}

/// Total assignment of labels to arguments, viewable as the triple `(I, O, U)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labelling {
    labels: BTreeMap<ArgumentId, Label>,
}

impl Labelling {
    pub fn new() -> Self {
        Labelling::default()
    }

    /// Builds a labelling from its `(I, O, U)` sets. A name in two sets is an error.
    pub fn from_sets<I, O, U>(ins: I, outs: O, undecs: U) -> Result<Self>
    where
        I: IntoIterator<Item = ArgumentId>,
        O: IntoIterator<Item = ArgumentId>,
        U: IntoIterator<Item = ArgumentId>,
    {
        let mut labelling = Labelling::new();
        for (label, set) in [
            (Label::In, ins.into_iter().collect::<Vec<_>>()),
            (Label::Out, outs.into_iter().collect()),
            (Label::Undec, undecs.into_iter().collect()),
        ] {
            for arg in set {
                if let Some(prev) = labelling.labels.insert(arg.clone(), label) {
                    if prev != label {
                        return Err(Error::LabelOverlap(arg.to_string()));
                    }
                }
            }
        }
        Ok(labelling)
    }

    pub fn from_names(ins: &[&str], outs: &[&str], undecs: &[&str]) -> Result<Self> {
        let conv = |v: &[&str]| {
            v.iter()
                .map(|n| ArgumentId::new(*n))
                .collect::<Result<Vec<_>>>()
        };
        Labelling::from_sets(conv(ins)?, conv(outs)?, conv(undecs)?)
    }

    /// Every argument of `framework` labelled `label`.
    pub fn uniform(framework: &Framework, label: Label) -> Self {
        Labelling {
            labels: framework
                .arguments()
                .iter()
                .map(|a| (a.clone(), label))
                .collect(),
        }
    }

    pub fn set(&mut self, arg: ArgumentId, label: Label) {
        self.labels.insert(arg, label);
    }

    pub fn get(&self, arg: &str) -> Option<Label> {
        self.labels.get(arg).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, Label)> {
        self.labels.iter().map(|(a, l)| (a, *l))
    }

    /// Arguments carrying `label`, sorted by name.
    pub fn with_label(&self, label: Label) -> Vec<ArgumentId> {
        self.iter()
            .filter(|(_, l)| *l == label)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn in_set(&self) -> Vec<ArgumentId> {
        self.with_label(Label::In)
    }

    pub fn out_set(&self) -> Vec<ArgumentId> {
        self.with_label(Label::Out)
    }

    pub fn undec_set(&self) -> Vec<ArgumentId> {
        self.with_label(Label::Undec)
    }

    /// Labels aligned with `framework`'s argument indices. Fails unless the
    /// labelling covers exactly the framework's arguments.
    pub fn to_indexed(&self, framework: &Framework) -> Result<Vec<Label>> {
        if let Some((extra, _)) = self
            .labels
            .iter()
            .find(|(a, _)| !framework.contains(a.as_str()))
        {
            return Err(Error::LabellingMismatch(format!(
                "{extra} is not an argument of the framework"
            )));
        }
        framework
            .arguments()
            .iter()
            .map(|a| {
                self.get(a.as_str()).ok_or_else(|| {
                    Error::LabellingMismatch(format!("argument {a} is not labelled"))
                })
            })
            .collect()
    }

    pub(crate) fn from_indexed(framework: &Framework, labels: &[Label]) -> Self {
        Labelling {
            labels: framework
                .arguments()
                .iter()
                .cloned()
                .zip(labels.iter().copied())
                .collect(),
        }
    }

    /// Canonical sort key: sorted in-set, then sorted out-set.
    fn sort_key(&self) -> (Vec<ArgumentId>, Vec<ArgumentId>) {
        (self.in_set(), self.out_set())
    }
}

/// Which clause of the complete-labelling definition an argument breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// Labelled `in` but some attacker is not `out`, or all attackers are `out`
    /// yet not labelled `in`.
    In,
    /// Labelled `out` without an `in` attacker, or has an `in` attacker yet not
    /// labelled `out`.
    Out,
    /// Labelled `undec` where `in` or `out` is forced.
    Undec,
}

impl Clause {
    pub fn number(self) -> u8 {
        match self {
            Clause::In => 1,
            Clause::Out => 2,
            Clause::Undec => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub argument: ArgumentId,
    pub clause: Clause,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.clause {
            Clause::In => "in-clause",
            Clause::Out => "out-clause",
            Clause::Undec => "undec-clause",
        };
        write!(f, "{} violates the {what}", self.argument)
    }
}

/// Label an argument must carry given its attackers' labels.
fn forced_label(framework: &Framework, labels: &[Label], v: usize) -> Label {
    let attackers = framework.attackers_idx(v);
    if attackers.iter().any(|&b| labels[b] == Label::In) {
        Label::Out
    } else if attackers.iter().all(|&b| labels[b] == Label::Out) {
        Label::In
    } else {
        Label::Undec
    }
}

pub(crate) fn first_violation_idx(
    framework: &Framework,
    labels: &[Label],
) -> Option<(usize, Clause)> {
    (0..framework.len()).find_map(|v| {
        let want = forced_label(framework, labels, v);
        let have = labels[v];
        if want == have {
            return None;
        }
        // Attribute the violation to the clause whose "iff" is broken.
        let clause = match (have, want) {
            (Label::In, _) | (_, Label::In) => Clause::In,
            (Label::Out, _) | (_, Label::Out) => Clause::Out,
            _ => Clause::Undec,
        };
        Some((v, clause))
    })
}

pub(crate) fn is_complete_idx(framework: &Framework, labels: &[Label]) -> bool {
    first_violation_idx(framework, labels).is_none()
}

/// Checks whether `labelling` is complete in `framework`; `Ok(Err(v))` names
/// the first violating argument in name order.
pub fn check_complete(
    framework: &Framework,
    labelling: &Labelling,
) -> Result<std::result::Result<(), Violation>> {
    let labels = labelling.to_indexed(framework)?;
    Ok(match first_violation_idx(framework, &labels) {
        None => Ok(()),
        Some((v, clause)) => Err(Violation {
            argument: framework.name(v).clone(),
            clause,
        }),
    })
}

pub fn is_complete(framework: &Framework, labelling: &Labelling) -> Result<bool> {
    Ok(check_complete(framework, labelling)?.is_ok())
}

/// All complete labellings, sorted by in-set then out-set.
pub fn enumerate_complete(framework: &Framework, cap: usize) -> Result<Vec<Labelling>> {
    if framework.len() > cap {
        return Err(Error::SizeLimit {
            what: "framework",
            size: framework.len(),
            cap,
        });
    }
    let mut search = Search {
        framework,
        labels: vec![None; framework.len()],
        found: Vec::new(),
    };
    // Unattacked arguments are necessarily in.
    for v in 0..framework.len() {
        if framework.attackers_idx(v).is_empty() {
            search.labels[v] = Some(Label::In);
        }
    }
    if (0..framework.len()).all(|v| search.locally_consistent(v)) {
        search.branch(0);
    }
    let mut out: Vec<Labelling> = search
        .found
        .into_iter()
        .map(|labels| Labelling::from_indexed(framework, &labels))
        .collect();
    out.sort_by_cached_key(Labelling::sort_key);
    Ok(out)
}

struct Search<'a> {
    framework: &'a Framework,
    labels: Vec<Option<Label>>,
    found: Vec<Vec<Label>>,
}

impl Search<'_> {
    fn branch(&mut self, from: usize) {
        let Some(v) = (from..self.labels.len()).find(|&v| self.labels[v].is_none()) else {
            let labels: Vec<Label> = self
                .labels
                .iter()
                .map(|l| l.expect("all assigned"))
                .collect();
            debug_assert!(is_complete_idx(self.framework, &labels));
            self.found.push(labels);
            return;
        };
        for label in [Label::In, Label::Out, Label::Undec] {
            self.labels[v] = Some(label);
            let touched = std::iter::once(v).chain(self.framework.targets_idx(v).iter().copied());
            if touched
                .collect::<Vec<_>>()
                .into_iter()
                .all(|w| self.locally_consistent(w))
            {
                self.branch(v + 1);
            }
        }
        self.labels[v] = None;
    }

    /// Partial check of `v`'s clause against whatever is assigned so far.
    fn locally_consistent(&self, v: usize) -> bool {
        let Some(label) = self.labels[v] else {
            return true;
        };
        let attackers = self.framework.attackers_idx(v);
        let mut any_in = false;
        let mut any_undec = false;
        let mut all_assigned = true;
        for &b in attackers {
            match self.labels[b] {
                Some(Label::In) => any_in = true,
                Some(Label::Undec) => any_undec = true,
                Some(Label::Out) => {}
                None => all_assigned = false,
            }
        }
        match label {
            Label::In => !any_in && !any_undec,
            Label::Out => any_in || !all_assigned,
            Label::Undec => !any_in && (any_undec || !all_assigned),
        }
    }
}
