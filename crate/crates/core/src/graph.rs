//! Abstract argumentation frameworks and the graph queries used throughout
//! the crate.
//!
//! Arguments are stored sorted by name and addressed internally by their
//! position in that order, so index order and name order coincide.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of an argument: a nonempty string of ASCII letters, digits and
/// underscores.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(ArgumentId(name))
        } else {
            Err(Error::InvalidArgumentName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl TryFrom<String> for ArgumentId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        ArgumentId::new(value)
    }
}

impl From<ArgumentId> for String {
    fn from(value: ArgumentId) -> Self {
        value.0
    }
}

impl Borrow<str> for ArgumentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An attack `(source, target)` by argument name.
pub type Attack = (ArgumentId, ArgumentId);

/// An abstract argumentation framework `(arguments, attacks)`.
///
/// Immutable once built. Self-attacks are allowed; duplicate attacks collapse.
#[derive(Clone, Debug)]
pub struct Framework {
    names: Vec<ArgumentId>,
    index: HashMap<ArgumentId, usize>,
    attacks: Vec<(usize, usize)>,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl PartialEq for Framework {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.attacks == other.attacks
    }
}

impl Eq for Framework {}

impl Default for Framework {
    fn default() -> Self {
        Framework::empty()
    }
}

impl Framework {
    pub fn empty() -> Self {
        Framework {
            names: Vec::new(),
            index: HashMap::new(),
            attacks: Vec::new(),
            attackers: Vec::new(),
            targets: Vec::new(),
        }
    }

    /// Builds a framework, rejecting attacks whose endpoints are not arguments.
    pub fn new<A, C>(arguments: A, attacks: C) -> Result<Self>
    where
        A: IntoIterator<Item = ArgumentId>,
        C: IntoIterator<Item = Attack>,
    {
        let names: Vec<ArgumentId> = arguments
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<ArgumentId, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut pairs = Vec::new();
        for (src, dst) in attacks {
            let s = *index
                .get(&src)
                .ok_or_else(|| Error::UnknownArgument(src.to_string()))?;
            let d = *index
                .get(&dst)
                .ok_or_else(|| Error::UnknownArgument(dst.to_string()))?;
            pairs.push((s, d));
        }
        Ok(Self::from_parts(names, index, pairs))
    }

    /// Convenience constructor from string slices.
    pub fn from_names(arguments: &[&str], attacks: &[(&str, &str)]) -> Result<Self> {
        let args = arguments
            .iter()
            .map(|a| ArgumentId::new(*a))
            .collect::<Result<Vec<_>>>()?;
        let atts = attacks
            .iter()
            .map(|(s, d)| Ok((ArgumentId::new(*s)?, ArgumentId::new(*d)?)))
            .collect::<Result<Vec<_>>>()?;
        Framework::new(args, atts)
    }

    /// Same arguments as `self`, different attack set (given by indices).
    pub(crate) fn with_attack_indices(
        &self,
        attacks: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        Self::from_parts(
            self.names.clone(),
            self.index.clone(),
            attacks.into_iter().collect(),
        )
    }

    fn from_parts(
        names: Vec<ArgumentId>,
        index: HashMap<ArgumentId, usize>,
        mut attacks: Vec<(usize, usize)>,
    ) -> Self {
        attacks.sort_unstable();
        attacks.dedup();
        let n = names.len();
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        for &(s, d) in &attacks {
            targets[s].push(d);
            attackers[d].push(s);
        }
        for list in &mut attackers {
            list.sort_unstable();
        }
        Framework {
            names,
            index,
            attacks,
            attackers,
            targets,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Arguments in name order.
    pub fn arguments(&self) -> &[ArgumentId] {
        &self.names
    }

    /// Attacks in `(source, target)` name order.
    pub fn attacks(&self) -> Vec<Attack> {
        self.attacks
            .iter()
            .map(|&(s, d)| (self.names[s].clone(), self.names[d].clone()))
            .collect()
    }

    pub fn attack_count(&self) -> usize {
        self.attacks.len()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn has_attack(&self, src: &str, dst: &str) -> bool {
        match (self.index.get(src), self.index.get(dst)) {
            (Some(&s), Some(&d)) => self.has_attack_idx(s, d),
            _ => false,
        }
    }

    pub fn name(&self, idx: usize) -> &ArgumentId {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArgument(name.to_string()))
    }

    pub(crate) fn attack_indices(&self) -> &[(usize, usize)] {
        &self.attacks
    }

    pub(crate) fn attackers_idx(&self, idx: usize) -> &[usize] {
        &self.attackers[idx]
    }

    pub(crate) fn targets_idx(&self, idx: usize) -> &[usize] {
        &self.targets[idx]
    }

    pub(crate) fn has_attack_idx(&self, src: usize, dst: usize) -> bool {
        self.targets[src].binary_search(&dst).is_ok()
    }

    /// Direct attackers of `a`, sorted by name.
    pub fn attackers(&self, a: &str) -> Result<Vec<ArgumentId>> {
        let idx = self.index_of(a)?;
        Ok(self.attackers[idx]
            .iter()
            .map(|&b| self.names[b].clone())
            .collect())
    }

    /// Whether `set` defends `b`: every attacker of `b` is attacked by a member of `set`.
    pub fn defends<S: AsRef<str>>(&self, set: &[S], b: &str) -> Result<bool> {
        let members = set
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<BTreeSet<_>>>()?;
        let b = self.index_of(b)?;
        Ok(self.attackers[b]
            .iter()
            .all(|&c| self.attackers[c].iter().any(|s| members.contains(s))))
    }

    /// Connected component id per argument index, ids numbered in order of
    /// each component's smallest member.
    pub(crate) fn component_ids(&self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in self.targets[v].iter().chain(&self.attackers[v]) {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub(crate) fn components_idx(&self) -> Vec<Vec<usize>> {
        let (comp, count) = self.component_ids();
        let mut out = vec![Vec::new(); count];
        for (v, c) in comp.into_iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Partition of the arguments into maximal weakly connected sets.
    pub fn connected_components(&self) -> Vec<Vec<ArgumentId>> {
        self.components_idx()
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.names[v].clone()).collect())
            .collect()
    }

    /// The sub-framework induced by `set`.
    pub fn restrict<S: AsRef<str>>(&self, set: &[S]) -> Result<Framework> {
        let keep = set
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(self.restrict_idx(&keep.into_iter().collect::<Vec<_>>()))
    }

    /// Restriction to sorted, deduplicated indices.
    pub(crate) fn restrict_idx(&self, keep: &[usize]) -> Framework {
        let mut remap = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let names: Vec<ArgumentId> = keep.iter().map(|&v| self.names[v].clone()).collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let attacks = self
            .attacks
            .iter()
            .filter(|&&(s, d)| remap[s] != usize::MAX && remap[d] != usize::MAX)
            .map(|&(s, d)| (remap[s], remap[d]))
            .collect();
        Self::from_parts(names, index, attacks)
    }

    /// Whether the attack graph has a directed cycle (self-attacks included).
    pub fn has_cycle(&self) -> bool {
        // Kahn: a cycle remains iff some vertex never reaches in-degree zero.
        let mut indeg: Vec<usize> = self.attackers.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &self.targets[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen < self.len()
    }

    pub(crate) fn is_bidirectional_idx(&self, src: usize, dst: usize) -> bool {
        self.has_attack_idx(dst, src)
    }

    /// Attacks whose converse is also an attack. A self-attack is its own converse.
    pub fn bidirectional_attacks(&self) -> Vec<Attack> {
        self.attacks
            .iter()
            .filter(|&&(s, d)| self.is_bidirectional_idx(s, d))
            .map(|&(s, d)| (self.names[s].clone(), self.names[d].clone()))
            .collect()
    }
}

/// Strongly connected components of a graph given as adjacency lists.
/// Returns the component id of every vertex.
pub(crate) fn scc_ids(adj: &[Vec<usize>]) -> Vec<usize> {
    // Iterative Tarjan.
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn running_example() -> Framework {
        Framework::from_names(
            &["a", "b", "c", "d"],
            &[
                ("a", "b"),
                ("a", "c"),
                ("c", "a"),
                ("b", "c"),
                ("c", "b"),
                ("d", "c"),
                ("c", "d"),
            ],
        )
        .unwrap()
    }

    fn names(v: &[ArgumentId]) -> Vec<&str> {
        v.iter().map(|a| a.as_str()).collect()
    }

    #[test]
    fn argument_names_are_validated() {
        assert!(ArgumentId::new("a_1").is_ok());
        assert!(ArgumentId::new("").is_err());
        assert!(ArgumentId::new("a-b").is_err());
        assert!(ArgumentId::new("é").is_err());
    }

    #[test]
    fn attackers_of_c_in_running_example() {
        let f = running_example();
        assert_eq!(names(&f.attackers("c").unwrap()), ["a", "b", "d"]);
        let lone = Framework::from_names(&["x"], &[]).unwrap();
        assert!(lone.attackers("x").unwrap().is_empty());
        let selfish = Framework::from_names(&["x"], &[("x", "x")]).unwrap();
        assert_eq!(names(&selfish.attackers("x").unwrap()), ["x"]);
        assert!(matches!(f.attackers("z"), Err(Error::UnknownArgument(_))));
    }

    #[test]
    fn defends() {
        let f = running_example();
        assert!(f.defends(&["a", "d"], "a").unwrap());
        let g = Framework::from_names(&["x", "y"], &[("x", "y")]).unwrap();
        assert!(g.defends::<&str>(&[], "x").unwrap());
        assert!(!g.defends::<&str>(&[], "y").unwrap());
        assert!(g.defends(&["q"], "y").is_err());
    }

    #[test]
    fn components() {
        let f = running_example();
        assert_eq!(f.connected_components().len(), 1);
        let g = Framework::from_names(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        let comps = g.connected_components();
        let cc: Vec<Vec<&str>> = comps.iter().map(|c| names(c)).collect();
        assert_eq!(cc, vec![vec!["a", "b"], vec!["c", "d"]]);
        let h = Framework::from_names(&["x", "y", "z"], &[]).unwrap();
        assert_eq!(h.connected_components().len(), 3);
    }

    #[test]
    fn restrict_filters_attacks() {
        let f = running_example();
        let r = f.restrict(&["a", "b"]).unwrap();
        assert_eq!(
            r,
            Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap()
        );
        let all: Vec<&str> = f.arguments().iter().map(|a| a.as_str()).collect();
        assert_eq!(f.restrict(&all).unwrap(), f);
        assert!(f.restrict::<&str>(&[]).unwrap().is_empty());
        assert!(f.restrict(&["nope"]).is_err());
    }

    #[test]
    fn cycles() {
        let g =
            Framework::from_names(&["a", "b", "c"], &[("a", "c"), ("c", "b"), ("b", "a")]).unwrap();
        assert!(g.has_cycle());
        assert!(!Framework::from_names(&["a"], &[]).unwrap().has_cycle());
        assert!(Framework::from_names(&["a"], &[("a", "a")])
            .unwrap()
            .has_cycle());
        assert!(!Framework::from_names(&["a", "b"], &[("a", "b")])
            .unwrap()
            .has_cycle());
    }

    #[test]
    fn bidirectional() {
        let f = running_example();
        let bi = f.bidirectional_attacks();
        let got: Vec<(&str, &str)> = bi.iter().map(|(s, d)| (s.as_str(), d.as_str())).collect();
        assert_eq!(
            got,
            [
                ("a", "c"),
                ("b", "c"),
                ("c", "a"),
                ("c", "b"),
                ("c", "d"),
                ("d", "c")
            ]
        );
        let g = Framework::from_names(&["x", "y"], &[("x", "y")]).unwrap();
        assert!(g.bidirectional_attacks().is_empty());
        let h = Framework::from_names(&["x"], &[("x", "x")]).unwrap();
        assert_eq!(h.bidirectional_attacks().len(), 1);
    }

    #[test]
    fn unknown_endpoint_rejected() {
        assert!(Framework::from_names(&["a"], &[("a", "b")]).is_err());
    }

    #[test]
    fn tarjan_groups_cycles() {
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![]];
        let ids = scc_ids(&adj);
        assert_eq!(ids[0], ids[1]);
        assert_eq!(ids[1], ids[2]);
        assert_ne!(ids[2], ids[3]);
    }
}
