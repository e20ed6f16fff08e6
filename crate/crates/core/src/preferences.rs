//! CC-wise total orders, preference functions, and the conversions between
//! them.
//!
//! Direction convention: an attack `(a, b)` mapped to 1 means `b ⪯ a` (the
//! source is at least as preferred as the target); mapped to 0 it means
//! `a ≺ b`. Every attack thus induces one edge of the *constraint graph*
//! `F̄₀ ∪ F₁`, where an edge `x → y` reads "`y ⪯ x`", strict when it comes from
//! `F̄₀`. A function is consistent iff no cycle of that graph uses a strict edge.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{scc_ids, ArgumentId, Attack, Framework};

/// A preference relation that is a total preorder inside every connected
/// component and relates nothing across components.
///
/// Stored per component as equivalence classes, least preferred first.
/// The representation is canonical: classes are sorted internally and
/// components are ordered by their smallest member, so structural equality is
/// equality of relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CcOrder {
    components: Vec<Vec<Vec<ArgumentId>>>,
}

impl CcOrder {
    pub fn new(components: Vec<Vec<Vec<ArgumentId>>>) -> Self {
        let mut components: Vec<Vec<Vec<ArgumentId>>> = components
            .into_iter()
            .map(|classes| {
                classes
                    .into_iter()
                    .map(|mut class| {
                        class.sort();
                        class
                    })
                    .collect()
            })
            .collect();
        components.sort_by_cached_key(|classes| classes.iter().flatten().min().cloned());
        CcOrder { components }
    }

    /// Convenience constructor: one string per component in the textual
    /// syntax, e.g. `"a < b < c = d"`.
    pub fn parse_lines(lines: &[&str]) -> Result<Self> {
        crate::io::parse_order(&lines.join("\n"))
    }

    /// The order under which all arguments of each component are equivalent.
    pub fn all_equivalent(framework: &Framework) -> Self {
        CcOrder::new(
            framework
                .connected_components()
                .into_iter()
                .map(|c| vec![c])
                .collect(),
        )
    }

    /// Builds the order induced by integer ranks (higher is more preferred),
    /// compared only within connected components.
    pub(crate) fn from_ranks(framework: &Framework, ranks: &[i64]) -> Self {
        let components = framework
            .components_idx()
            .into_iter()
            .map(|comp| {
                let mut by_rank: BTreeMap<i64, Vec<ArgumentId>> = BTreeMap::new();
                for v in comp {
                    by_rank
                        .entry(ranks[v])
                        .or_default()
                        .push(framework.name(v).clone());
                }
                by_rank.into_values().collect()
            })
            .collect();
        CcOrder::new(components)
    }

    pub fn components(&self) -> &[Vec<Vec<ArgumentId>>] {
        &self.components
    }

    /// Class position of every argument of `framework` within its component.
    /// Fails unless the order is a valid CC-wise total order on `framework`.
    pub fn ranks(&self, framework: &Framework) -> Result<Vec<usize>> {
        let n = framework.len();
        let (comp_of, comp_count) = framework.component_ids();
        let mut rank = vec![usize::MAX; n];
        let mut covered = vec![false; comp_count];
        for classes in &self.components {
            let mut component = None;
            for (pos, class) in classes.iter().enumerate() {
                if class.is_empty() {
                    return Err(Error::InvalidOrder("empty equivalence class".into()));
                }
                for arg in class {
                    let v = framework.index_of(arg.as_str()).map_err(|_| {
                        Error::InvalidOrder(format!("{arg} is not an argument of the framework"))
                    })?;
                    if rank[v] != usize::MAX {
                        return Err(Error::InvalidOrder(format!("{arg} appears more than once")));
                    }
                    match component {
                        None => component = Some(comp_of[v]),
                        Some(c) if c != comp_of[v] => {
                            return Err(Error::InvalidOrder(format!(
                                "{arg} is ordered against arguments of another connected component"
                            )))
                        }
                        Some(_) => {}
                    }
                    rank[v] = pos;
                }
            }
            match component {
                None => return Err(Error::InvalidOrder("empty component".into())),
                Some(c) => covered[c] = true,
            }
        }
        if let Some(v) = rank.iter().position(|&r| r == usize::MAX) {
            return Err(Error::InvalidOrder(format!(
                "argument {} is not ordered",
                framework.name(v)
            )));
        }
        debug_assert!(covered.iter().all(|&c| c));
        Ok(rank)
    }
}

impl fmt::Display for CcOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::emit_order(self))
    }
}

/// Whether `order` partitions every connected component of `framework` into
/// totally ordered classes.
pub fn validate_order(framework: &Framework, order: &CcOrder) -> bool {
    order.ranks(framework).is_ok()
}

/// A map from attacks to bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PreferenceFunction {
    bits: BTreeMap<Attack, bool>,
}

impl PreferenceFunction {
    pub fn new(bits: BTreeMap<Attack, bool>) -> Self {
        PreferenceFunction { bits }
    }

    /// The function assigning `bit` to every attack.
    pub fn constant(framework: &Framework, bit: bool) -> Self {
        PreferenceFunction {
            bits: framework.attacks().into_iter().map(|a| (a, bit)).collect(),
        }
    }

    /// Assigns 0 exactly to the listed attacks and 1 to all others.
    pub fn zeros_at(framework: &Framework, zeros: &[(&str, &str)]) -> Result<Self> {
        let mut f = PreferenceFunction::constant(framework, true);
        for (s, d) in zeros {
            let key = (ArgumentId::new(*s)?, ArgumentId::new(*d)?);
            match f.bits.get_mut(&key) {
                Some(bit) => *bit = false,
                None => {
                    return Err(Error::PreferenceDomain(format!(
                        "({s},{d}) is not an attack"
                    )))
                }
            }
        }
        Ok(f)
    }

    pub(crate) fn from_indexed(framework: &Framework, bits: &[bool]) -> Self {
        PreferenceFunction {
            bits: framework
                .attacks()
                .into_iter()
                .zip(bits.iter().copied())
                .collect(),
        }
    }

    pub fn get(&self, src: &str, dst: &str) -> Option<bool> {
        let key = (ArgumentId::new(src).ok()?, ArgumentId::new(dst).ok()?);
        self.bits.get(&key).copied()
    }

    pub fn bits(&self) -> &BTreeMap<Attack, bool> {
        &self.bits
    }

    /// `F₀`: the attacks mapped to 0.
    pub fn zeros(&self) -> Vec<Attack> {
        self.bits
            .iter()
            .filter(|(_, b)| !**b)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// `F₁`: the attacks mapped to 1.
    pub fn ones(&self) -> Vec<Attack> {
        self.bits
            .iter()
            .filter(|(_, b)| **b)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// Bits aligned with `framework`'s attack indices; the domain must be
    /// exactly the framework's attack set.
    pub(crate) fn to_indexed(&self, framework: &Framework) -> Result<Vec<bool>> {
        if self.bits.len() != framework.attack_count() {
            return Err(Error::PreferenceDomain(format!(
                "{} bits for {} attacks",
                self.bits.len(),
                framework.attack_count()
            )));
        }
        framework
            .attacks()
            .into_iter()
            .map(|a| {
                self.bits.get(&a).copied().ok_or_else(|| {
                    Error::PreferenceDomain(format!("no bit for attack ({},{})", a.0, a.1))
                })
            })
            .collect()
    }

    /// Copy with every unidirectional attack set to 1 (bidirectional ones kept).
    pub fn weakened(&self, framework: &Framework) -> Self {
        PreferenceFunction {
            bits: self
                .bits
                .iter()
                .map(|((s, d), b)| {
                    let bidirectional = framework.has_attack(d.as_str(), s.as_str());
                    ((s.clone(), d.clone()), *b || !bidirectional)
                })
                .collect(),
        }
    }
}

/// Edges of the constraint graph `F̄₀ ∪ F₁`, one per attack: `(from, to, strict)`.
fn constraint_edges(framework: &Framework, bits: &[bool]) -> Vec<(usize, usize, bool)> {
    framework
        .attack_indices()
        .iter()
        .zip(bits)
        .map(|(&(a, b), &bit)| if bit { (a, b, false) } else { (b, a, true) })
        .collect()
}

fn adjacency(n: usize, edges: &[(usize, usize, bool)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(x, y, _) in edges {
        adj[x].push(y);
    }
    adj
}

/// Returns the vertices of an inconsistent cycle if there is one.
pub(crate) fn inconsistent_cycle_idx(framework: &Framework, bits: &[bool]) -> Option<Vec<usize>> {
    let edges = constraint_edges(framework, bits);
    let adj = adjacency(framework.len(), &edges);
    let comp = scc_ids(&adj);
    let &(x, y, _) = edges
        .iter()
        .find(|&&(x, y, strict)| strict && comp[x] == comp[y])?;
    // Close the cycle with a shortest path y ⇝ x inside the component.
    let mut prev = vec![usize::MAX; framework.len()];
    let mut queue = VecDeque::from([y]);
    prev[y] = y;
    while let Some(v) = queue.pop_front() {
        if v == x {
            break;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX && comp[w] == comp[x] {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![x];
    let mut cur = x;
    while cur != y {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    // path runs y ⇝ x; the strict edge x → y closes it.
    path.rotate_right(1);
    if x == y {
        path.truncate(1);
    }
    Some(path)
}

/// Checks the no-inconsistent-cycle condition. `Ok(Err(cycle))` reports a
/// cycle of the constraint graph that passes through a strict edge.
pub fn check_consistent(
    framework: &Framework,
    f: &PreferenceFunction,
) -> Result<std::result::Result<(), Vec<ArgumentId>>> {
    let bits = f.to_indexed(framework)?;
    Ok(match inconsistent_cycle_idx(framework, &bits) {
        None => Ok(()),
        Some(cycle) => Err(cycle
            .into_iter()
            .map(|v| framework.name(v).clone())
            .collect()),
    })
}

pub fn is_consistent(framework: &Framework, f: &PreferenceFunction) -> Result<bool> {
    Ok(check_consistent(framework, f)?.is_ok())
}

pub(crate) fn order_bits(framework: &Framework, ranks: &[usize]) -> Vec<bool> {
    framework
        .attack_indices()
        .iter()
        .map(|&(a, b)| ranks[a] >= ranks[b])
        .collect()
}

/// `f((a,b)) = 0` iff `a ≺ b`.
pub fn order_to_pref_fn(framework: &Framework, order: &CcOrder) -> Result<PreferenceFunction> {
    let ranks = order.ranks(framework)?;
    Ok(PreferenceFunction::from_indexed(
        framework,
        &order_bits(framework, &ranks),
    ))
}

/// Least integer ranks satisfying every constraint edge, or the offending
/// cycle when the bits are inconsistent.
pub(crate) fn least_ranks(
    framework: &Framework,
    bits: &[bool],
) -> std::result::Result<Vec<i64>, Vec<usize>> {
    if let Some(cycle) = inconsistent_cycle_idx(framework, bits) {
        return Err(cycle);
    }
    let edges = constraint_edges(framework, bits);
    let adj = adjacency(framework.len(), &edges);
    let comp = scc_ids(&adj);
    let comp_count = comp.iter().copied().max().map_or(0, |m| m + 1);
    // Tarjan numbers components in reverse topological order, so every
    // component's successors carry smaller ids.
    let mut out: Vec<Vec<(usize, bool)>> = vec![Vec::new(); comp_count];
    for &(x, y, strict) in &edges {
        if comp[x] != comp[y] {
            out[comp[x]].push((comp[y], strict));
        }
    }
    let mut rank = vec![0i64; comp_count];
    for c in 0..comp_count {
        rank[c] = out[c]
            .iter()
            .map(|&(d, strict)| {
                debug_assert!(d < c);
                rank[d] + i64::from(strict)
            })
            .max()
            .unwrap_or(0);
    }
    Ok(comp.iter().map(|&c| rank[c]).collect())
}

/// Totalises a consistent preference function into a CC-wise total order.
///
/// Constraint-graph SCCs become equivalence classes; classes are ranked by
/// the least assignment satisfying every constraint, so unconstrained
/// arguments sink to the lowest admissible rank.
pub fn pref_fn_to_order(framework: &Framework, f: &PreferenceFunction) -> Result<CcOrder> {
    let bits = f.to_indexed(framework)?;
    pref_bits_to_order(framework, &bits)
}

pub(crate) fn pref_bits_to_order(framework: &Framework, bits: &[bool]) -> Result<CcOrder> {
    match least_ranks(framework, bits) {
        Ok(ranks) => Ok(CcOrder::from_ranks(framework, &ranks)),
        Err(cycle) => Err(Error::Inconsistent {
            cycle: cycle
                .into_iter()
                .map(|v| framework.name(v).to_string())
                .collect(),
        }),
    }
}
