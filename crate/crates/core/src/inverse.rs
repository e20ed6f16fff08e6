//! Polynomial-time deciders for the inverse problems: given a framework and
//! a target labelling, is there a CC-wise total order under which the
//! labelling is complete after reduction `i`?
//!
//! Every YES carries a witness order built constructively; every NO carries a
//! certificate naming the violated condition and a witnessing argument or
//! attack.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{ArgumentId, Framework};
use crate::preferences::{pref_bits_to_order, CcOrder};
use crate::rank::{rank_idx, RankFailureKind};
use crate::reductions::{reduce_idx, Reduction};
use crate::semantics::{first_violation_idx, is_complete_idx, Label, Labelling};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        })
    }
}

/// Why a NO answer holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Reductions 1/3, condition 1: an attack links an `in` argument to a
    /// non-`out` one.
    InLinkedToNonOut,
    /// Reductions 1/3, condition 2: an `out` argument neither attacks nor is
    /// attacked by an `in` argument.
    OutWithoutInNeighbour,
    /// Reduction 1, condition 3: a connected component of the `undec`
    /// sub-framework is acyclic.
    AcyclicUndecComponent,
    /// Reduction 3, condition 3: an `undec` argument has no `undec` neighbour.
    IsolatedUndec,
    /// Reduction 2: the labelling is not complete; the condition number is the
    /// violated clause (1 in, 2 out, 3 undec).
    NotComplete,
    /// Reduction 4, condition 1: an `out` argument has no `in` attacker.
    OutWithoutInAttacker,
    /// Reduction 4, condition 2: no ranking satisfies the rank-decrease
    /// constraints around `in` arguments.
    RankBoundExceeded,
    /// Reduction 4, condition 3: an `undec` argument has no `undec` attacker.
    UndecWithoutUndecAttacker,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub condition: u8,
    /// One argument, an attack `[src, dst]`, or a component's members.
    pub witness: Vec<ArgumentId>,
    pub reason: Reason,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.witness.iter().map(|a| a.as_str()).collect();
        write!(
            f,
            "condition {} ({:?}) witnessed by [{}]",
            self.condition,
            self.reason,
            names.join(",")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decision {
    pub reduction: Reduction,
    pub verdict: Verdict,
    pub witness: Option<CcOrder>,
    pub certificate: Option<Certificate>,
}

impl Decision {
    pub fn yes(reduction: Reduction, witness: CcOrder) -> Self {
        Decision {
            reduction,
            verdict: Verdict::Yes,
            witness: Some(witness),
            certificate: None,
        }
    }

    pub fn no(reduction: Reduction, certificate: Certificate) -> Self {
        Decision {
            reduction,
            verdict: Verdict::No,
            witness: None,
            certificate: Some(certificate),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

/// Dispatches to the decider for `reduction`.
pub fn decide(
    framework: &Framework,
    labelling: &Labelling,
    reduction: Reduction,
) -> Result<Decision> {
    match reduction {
        Reduction::Reflection => decide_ex1(framework, labelling),
        Reduction::WeakRemoval => decide_ex2(framework, labelling),
        Reduction::Combined => decide_ex3(framework, labelling),
        Reduction::Removal => decide_ex4(framework, labelling),
    }
}

/// Whether `labelling` is complete in the reduction of `framework` under `order`.
pub fn verify_witness(
    framework: &Framework,
    labelling: &Labelling,
    reduction: Reduction,
    order: &CcOrder,
) -> Result<bool> {
    let labels = labelling.to_indexed(framework)?;
    let ranks = order.ranks(framework)?;
    let reduced = framework.with_attack_indices(reduce_idx(framework, &ranks, reduction));
    Ok(is_complete_idx(&reduced, &labels))
}

struct Instance<'a> {
    framework: &'a Framework,
    labels: Vec<Label>,
    reduction: Reduction,
}

impl<'a> Instance<'a> {
    fn new(framework: &'a Framework, labelling: &Labelling, reduction: Reduction) -> Result<Self> {
        Ok(Instance {
            framework,
            labels: labelling.to_indexed(framework)?,
            reduction,
        })
    }

    fn name(&self, v: usize) -> ArgumentId {
        self.framework.name(v).clone()
    }

    fn no(&self, condition: u8, reason: Reason, witness: &[usize]) -> Decision {
        Decision::no(
            self.reduction,
            Certificate {
                condition,
                witness: witness.iter().map(|&v| self.name(v)).collect(),
                reason,
            },
        )
    }

    /// Complete already: every reduction of the all-equivalent order is the
    /// framework itself.
    fn trivial_yes(&self) -> Option<Decision> {
        is_complete_idx(self.framework, &self.labels)
            .then(|| Decision::yes(self.reduction, CcOrder::all_equivalent(self.framework)))
    }

    fn yes_from_bits(&self, bits: &[bool]) -> Decision {
        let order = pref_bits_to_order(self.framework, bits)
            .expect("witness construction yields a consistent preference function");
        Decision::yes(self.reduction, order)
    }

    /// Condition 1 shared by reductions 1 and 3.
    fn in_linked_to_non_out(&self) -> Option<Decision> {
        let l = &self.labels;
        self.framework
            .attack_indices()
            .iter()
            .find(|&&(u, v)| {
                matches!(
                    (l[u], l[v]),
                    (Label::In, Label::In) | (Label::In, Label::Undec) | (Label::Undec, Label::In)
                )
            })
            .map(|&(u, v)| self.no(1, Reason::InLinkedToNonOut, &[u, v]))
    }

    /// Condition 2 shared by reductions 1 and 3.
    fn out_without_in_neighbour(&self) -> Option<Decision> {
        let f = self.framework;
        (0..f.len())
            .find(|&a| {
                self.labels[a] == Label::Out
                    && !f
                        .attackers_idx(a)
                        .iter()
                        .chain(f.targets_idx(a))
                        .any(|&b| self.labels[b] == Label::In)
            })
            .map(|a| self.no(2, Reason::OutWithoutInNeighbour, &[a]))
    }

    /// Indices of the `undec` arguments.
    fn undec(&self) -> Vec<usize> {
        (0..self.framework.len())
            .filter(|&v| self.labels[v] == Label::Undec)
            .collect()
    }

    /// Bits with attacks touching `out` arguments set so that exactly the
    /// attacks into `out` survive in direction; everything else starts at 1.
    fn out_bits(&self) -> Vec<bool> {
        self.framework
            .attack_indices()
            .iter()
            .map(|&(u, v)| {
                if self.labels[u] == Label::Out || self.labels[v] == Label::Out {
                    self.labels[v] == Label::Out
                } else {
                    true
                }
            })
            .collect()
    }

    /// Sets the bits of attacks inside one `undec` component from layer
    /// ranks: 1 iff the source is not deeper than the target.
    fn apply_layers(&self, bits: &mut [bool], undec: &[usize], layer: &[usize]) {
        let mut local = vec![usize::MAX; self.framework.len()];
        for (i, &v) in undec.iter().enumerate() {
            local[v] = i;
        }
        for (k, &(u, v)) in self.framework.attack_indices().iter().enumerate() {
            let (lu, lv) = (local[u], local[v]);
            if lu != usize::MAX
                && lv != usize::MAX
                && layer[lu] != usize::MAX
                && layer[lv] != usize::MAX
            {
                bits[k] = layer[lu] <= layer[lv];
            }
        }
    }
}

/// Breadth-first layers over undirected adjacency in `fu`, starting from
/// `seed` (layer 0) and confined to `component`. Entries outside stay `usize::MAX`.
fn layers(fu: &Framework, component: &[usize], seed: &[usize]) -> Vec<usize> {
    let mut layer = vec![usize::MAX; fu.len()];
    let mut queue = VecDeque::new();
    for &s in seed {
        layer[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &w in fu.attackers_idx(v).iter().chain(fu.targets_idx(v)) {
            if layer[w] == usize::MAX {
                layer[w] = layer[v] + 1;
                queue.push_back(w);
            }
        }
    }
    debug_assert!(component.iter().all(|&v| layer[v] != usize::MAX));
    layer
}

/// Shortest directed cycle among `component`'s vertices; ties go to the
/// smallest starting argument.
fn shortest_cycle(fu: &Framework, component: &[usize]) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    let mut prev = vec![usize::MAX; fu.len()];
    let mut touched = Vec::new();
    for &s in component {
        for &t in &touched {
            prev[t] = usize::MAX;
        }
        touched.clear();
        let limit = best.as_ref().map_or(usize::MAX, Vec::len);
        let mut queue = VecDeque::from([(s, 1usize)]);
        prev[s] = s;
        touched.push(s);
        let mut closing = None;
        'bfs: while let Some((v, len)) = queue.pop_front() {
            if len >= limit {
                break;
            }
            for &w in fu.targets_idx(v) {
                if w == s {
                    closing = Some(v);
                    break 'bfs;
                }
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    touched.push(w);
                    queue.push_back((w, len + 1));
                }
            }
        }
        if let Some(mut v) = closing {
            let mut cycle = vec![v];
            while v != s {
                v = prev[v];
                cycle.push(v);
            }
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
    }
    best
}

/// Reduction 1 (attack reflection).
///
/// YES iff (1) no attack links an `in` argument to a non-`out` one, (2) every
/// `out` argument is adjacent to an `in` argument, and (3) every connected
/// component of the `undec` sub-framework contains a cycle.
pub fn decide_ex1(framework: &Framework, labelling: &Labelling) -> Result<Decision> {
    let inst = Instance::new(framework, labelling, Reduction::Reflection)?;
    if let Some(d) = inst.trivial_yes() {
        return Ok(d);
    }
    if let Some(d) = inst
        .in_linked_to_non_out()
        .or_else(|| inst.out_without_in_neighbour())
    {
        return Ok(d);
    }
    let undec = inst.undec();
    let fu = framework.restrict_idx(&undec);
    let mut bits = inst.out_bits();
    for component in fu.components_idx() {
        let Some(cycle) = shortest_cycle(&fu, &component) else {
            let members: Vec<usize> = component.iter().map(|&v| undec[v]).collect();
            return Ok(inst.no(3, Reason::AcyclicUndecComponent, &members));
        };
        let layer = layers(&fu, &component, &cycle);
        inst.apply_layers(&mut bits, &undec, &layer);
    }
    Ok(inst.yes_from_bits(&bits))
}

/// Reduction 2 (weak attack removal): YES iff the labelling is already complete.
pub fn decide_ex2(framework: &Framework, labelling: &Labelling) -> Result<Decision> {
    let inst = Instance::new(framework, labelling, Reduction::WeakRemoval)?;
    if let Some(d) = inst.trivial_yes() {
        return Ok(d);
    }
    let (v, clause) =
        first_violation_idx(framework, &inst.labels).expect("labelling is not complete");
    Ok(inst.no(clause.number(), Reason::NotComplete, &[v]))
}

/// Reduction 3 (reflection plus weak removal).
///
/// As reduction 1, with condition 3 relaxed to: every `undec` argument
/// attacks or is attacked by another `undec` argument.
pub fn decide_ex3(framework: &Framework, labelling: &Labelling) -> Result<Decision> {
    let inst = Instance::new(framework, labelling, Reduction::Combined)?;
    if let Some(d) = inst.trivial_yes() {
        return Ok(d);
    }
    if let Some(d) = inst
        .in_linked_to_non_out()
        .or_else(|| inst.out_without_in_neighbour())
    {
        return Ok(d);
    }
    let undec = inst.undec();
    let fu = framework.restrict_idx(&undec);
    if let Some(v) =
        (0..fu.len()).find(|&v| fu.attackers_idx(v).is_empty() && fu.targets_idx(v).is_empty())
    {
        return Ok(inst.no(3, Reason::IsolatedUndec, &[undec[v]]));
    }
    let mut bits = inst.out_bits();
    for component in fu.components_idx() {
        if component.iter().all(|&v| !fu.attackers_idx(v).is_empty()) {
            // already self-sustaining; the default bits (all 1) keep it intact
            continue;
        }
        if let Some(cycle) = shortest_cycle(&fu, &component) {
            let layer = layers(&fu, &component, &cycle);
            inst.apply_layers(&mut bits, &undec, &layer);
            continue;
        }
        // Acyclic, so no mutual attacks: reflecting one attack (u,v) keeps the
        // original and adds (v,u), seeding a two-cycle.
        let (u, v) = fu
            .attack_indices()
            .iter()
            .copied()
            .find(|&(u, _)| component.contains(&u))
            .expect("a non-isolated component has an attack");
        let layer = layers(&fu, &component, &[u, v]);
        inst.apply_layers(&mut bits, &undec, &layer);
        let seed = framework
            .attack_indices()
            .binary_search(&(undec[u], undec[v]))
            .expect("seed attack exists");
        bits[seed] = false;
    }
    Ok(inst.yes_from_bits(&bits))
}

/// Reduction 4 (attack removal).
///
/// Every `out` argument needs an `in` attacker; the rest reduces to finding a
/// ranking function on the `in`/`undec` sub-framework. The witness drops every
/// attack that strictly decreases the ranking.
pub fn decide_ex4(framework: &Framework, labelling: &Labelling) -> Result<Decision> {
    let inst = Instance::new(framework, labelling, Reduction::Removal)?;
    if let Some(d) = inst.trivial_yes() {
        return Ok(d);
    }
    let l = &inst.labels;
    if let Some(a) = (0..framework.len()).find(|&a| {
        l[a] == Label::Out
            && !framework
                .attackers_idx(a)
                .iter()
                .any(|&b| l[b] == Label::In)
    }) {
        return Ok(inst.no(1, Reason::OutWithoutInAttacker, &[a]));
    }
    let kept: Vec<usize> = (0..framework.len())
        .filter(|&v| l[v] != Label::Out)
        .collect();
    let sub = framework.restrict_idx(&kept);
    let sub_labels: Vec<Label> = kept.iter().map(|&v| l[v]).collect();
    let psi_sub = match rank_idx(&sub, &sub_labels, |_| {}) {
        Ok(psi) => psi,
        Err((v, RankFailureKind::BoundExceeded)) => {
            return Ok(inst.no(2, Reason::RankBoundExceeded, &[kept[v]]))
        }
        Err((v, RankFailureKind::NoUndecAttacker)) => {
            return Ok(inst.no(3, Reason::UndecWithoutUndecAttacker, &[kept[v]]))
        }
    };
    let mut psi = vec![0i64; framework.len()];
    for (i, &v) in kept.iter().enumerate() {
        psi[v] = psi_sub[i];
    }
    let bits: Vec<bool> = framework
        .attack_indices()
        .iter()
        .map(|&(u, v)| {
            if l[u] == Label::Out || l[v] == Label::Out {
                l[v] == Label::Out
            } else {
                psi[u] <= psi[v]
            }
        })
        .collect();
    Ok(inst.yes_from_bits(&bits))
}
