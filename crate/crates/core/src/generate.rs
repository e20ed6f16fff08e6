//! Seeded random instances for differential testing and benchmarks.
//!
//! All generators draw from ChaCha8 so a seed fixes the output on every
//! platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ArgumentId, Framework};
use crate::semantics::{enumerate_complete, Label, Labelling};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Argument names `a0, a1, ...`.
pub fn argument_names(n: usize) -> Vec<ArgumentId> {
    (0..n)
        .map(|i| ArgumentId::new(format!("a{i}")).expect("valid name"))
        .collect()
}

/// Each of the `n * n` ordered pairs, self-attacks included, becomes an
/// attack with probability `p`.
pub fn random_framework<R: Rng>(rng: &mut R, n: usize, p: f64) -> Framework {
    let names = argument_names(n);
    let mut attacks = Vec::new();
    for s in &names {
        for d in &names {
            if rng.gen_bool(p) {
                attacks.push((s.clone(), d.clone()));
            }
        }
    }
    Framework::new(names, attacks).expect("generated names are declared")
}

/// Framework with exactly `m` distinct attacks drawn uniformly, no
/// self-attacks. `m` is clamped to `n * (n - 1)`.
pub fn random_framework_with_attacks<R: Rng>(rng: &mut R, n: usize, m: usize) -> Framework {
    let names = argument_names(n);
    let m = m.min(n * n.saturating_sub(1));
    let mut chosen = std::collections::BTreeSet::new();
    while chosen.len() < m {
        let s = rng.gen_range(0..n);
        let d = rng.gen_range(0..n);
        if s != d {
            chosen.insert((s, d));
        }
    }
    let attacks = chosen
        .into_iter()
        .map(|(s, d)| (names[s].clone(), names[d].clone()));
    Framework::new(names.clone(), attacks).expect("generated names are declared")
}

/// Independent uniform label per argument.
pub fn random_labelling<R: Rng>(rng: &mut R, framework: &Framework) -> Labelling {
    let mut l = Labelling::new();
    for a in framework.arguments() {
        let label = *[Label::In, Label::Out, Label::Undec]
            .choose(rng)
            .expect("non-empty");
        l.set(a.clone(), label);
    }
    l
}

/// A complete labelling drawn uniformly from the enumeration, or `None` when
/// the framework exceeds `cap`.
pub fn random_complete_labelling<R: Rng>(
    rng: &mut R,
    framework: &Framework,
    cap: usize,
) -> Option<Labelling> {
    let all = enumerate_complete(framework, cap).ok()?;
    all.choose(rng).cloned()
}
