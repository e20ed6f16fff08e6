//! The four preference-based reductions, and the equivalent graphs built
//! directly from a preference function.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Framework;
use crate::preferences::{inconsistent_cycle_idx, CcOrder, PreferenceFunction};

/// Which reduction turns attacks into defeats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Reduction {
    /// Attack reflection: a strictly preferred target reverses the attack.
    Reflection = 1,
    /// Weak attack removal: strict preference deletes one side of a mutual attack.
    WeakRemoval = 2,
    /// Union of reductions 1 and 2.
    Combined = 3,
    /// Attack removal: attacks from strictly less preferred sources vanish.
    Removal = 4,
}

impl Reduction {
    pub const ALL: [Reduction; 4] = [
        Reduction::Reflection,
        Reduction::WeakRemoval,
        Reduction::Combined,
        Reduction::Removal,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for Reduction {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Reduction::Reflection),
            2 => Ok(Reduction::WeakRemoval),
            3 => Ok(Reduction::Combined),
            4 => Ok(Reduction::Removal),
            other => Err(Error::InvalidReduction(other)),
        }
    }
}

impl From<Reduction> for u8 {
    fn from(r: Reduction) -> u8 {
        r.index()
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Attack indices surviving (or created by) reduction `i` under class ranks.
pub(crate) fn reduce_idx(
    framework: &Framework,
    ranks: &[usize],
    reduction: Reduction,
) -> Vec<(usize, usize)> {
    // b ⪯ a  <=>  ranks[b] <= ranks[a]
    let mut out = Vec::with_capacity(framework.attack_count());
    for &(a, b) in framework.attack_indices() {
        let kept = ranks[b] <= ranks[a];
        let bidirectional = framework.is_bidirectional_idx(a, b);
        let reflection = ranks[a] < ranks[b];
        match reduction {
            Reduction::Reflection => {
                if kept {
                    out.push((a, b));
                }
                if reflection {
                    out.push((b, a));
                }
            }
            Reduction::WeakRemoval => {
                if kept || !bidirectional {
                    out.push((a, b));
                }
            }
            Reduction::Combined => {
                if kept || !bidirectional {
                    out.push((a, b));
                }
                if reflection {
                    out.push((b, a));
                }
            }
            Reduction::Removal => {
                if kept {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Applies reduction `reduction` to `framework` under `order`.
pub fn reduce(framework: &Framework, order: &CcOrder, reduction: Reduction) -> Result<Framework> {
    let ranks = order.ranks(framework)?;
    Ok(framework.with_attack_indices(reduce_idx(framework, &ranks, reduction)))
}

pub(crate) fn graph_from_bits(
    framework: &Framework,
    bits: &[bool],
    reduction: Reduction,
) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(framework.attack_count());
    for (&(a, b), &bit) in framework.attack_indices().iter().zip(bits) {
        let bidirectional = framework.is_bidirectional_idx(a, b);
        match reduction {
            // F̄₀ ∪ F₁
            Reduction::Reflection | Reduction::WeakRemoval => {
                out.push(if bit { (a, b) } else { (b, a) })
            }
            // (C \ C↔) ∪ F̄₀ ∪ F₁
            Reduction::Combined => {
                if !bidirectional {
                    out.push((a, b));
                }
                out.push(if bit { (a, b) } else { (b, a) });
            }
            // F₁
            Reduction::Removal => {
                if bit {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Builds the inverting preference graph (1), weakened preference sub-graph
/// (2), combined preference graph (3) or filtering preference sub-graph (4)
/// of `framework` for the preference function `f`.
///
/// Reduction 2 requires `f` to map every unidirectional attack to 1.
pub fn graph_from_pref_fn(
    framework: &Framework,
    f: &PreferenceFunction,
    reduction: Reduction,
) -> Result<Framework> {
    let bits = f.to_indexed(framework)?;
    if let Some(cycle) = inconsistent_cycle_idx(framework, &bits) {
        return Err(Error::Inconsistent {
            cycle: cycle
                .into_iter()
                .map(|v| framework.name(v).to_string())
                .collect(),
        });
    }
    if reduction == Reduction::WeakRemoval {
        if let Some((&(a, b), _)) = framework
            .attack_indices()
            .iter()
            .zip(&bits)
            .find(|(&(a, b), &bit)| !bit && !framework.is_bidirectional_idx(a, b))
        {
            return Err(Error::WpsgConstraint {
                src: framework.name(a).to_string(),
                dst: framework.name(b).to_string(),
            });
        }
    }
    Ok(framework.with_attack_indices(graph_from_bits(framework, &bits, reduction)))
}
