//! Brute-force ground truth: try every CC-wise total order.

use crate::error::{Error, Result};
use crate::graph::{ArgumentId, Framework};
use crate::preferences::CcOrder;
use crate::reductions::{reduce_idx, Reduction};
use crate::semantics::{is_complete_idx, Labelling};

/// Default cap on the size of a single connected component.
pub const DEFAULT_COMPONENT_CAP: usize = 8;

/// All weak orders (ordered set partitions) of `elements`, as lists of
/// classes from least to most preferred.
///
/// Elements are placed one at a time: each joins an existing class or opens
/// a new class at any of the gaps between classes.
pub fn weak_orders<T: Clone>(elements: &[T]) -> Vec<Vec<Vec<T>>> {
    let mut out = vec![Vec::new()];
    for e in elements {
        let mut next = Vec::new();
        for classes in &out {
            for i in 0..classes.len() {
                let mut joined: Vec<Vec<T>> = classes.clone();
                joined[i].push(e.clone());
                next.push(joined);
            }
            for gap in 0..=classes.len() {
                let mut opened = classes.clone();
                opened.insert(gap, vec![e.clone()]);
                next.push(opened);
            }
        }
        out = next;
    }
    out
}

/// Ordered Bell number: the count of weak orders on `n` elements.
pub fn ordered_bell(n: usize) -> u128 {
    // a(n) = sum_{k=1..n} C(n,k) a(n-k)
    let mut a = vec![1u128; n + 1];
    for m in 1..=n {
        let mut binom = 1u128;
        let mut total = 0u128;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            total += binom * a[m - k];
        }
        a[m] = total;
    }
    a[n]
}

/// Iterator over every CC-wise total order of a framework, varying the last
/// component fastest.
pub struct Orders<'a> {
    framework: &'a Framework,
    per_component: Vec<Vec<Vec<Vec<usize>>>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for Orders<'_> {
    type Item = CcOrder;

    fn next(&mut self) -> Option<CcOrder> {
        if self.done {
            return None;
        }
        let order = CcOrder::new(
            self.per_component
                .iter()
                .zip(&self.cursor)
                .map(|(choices, &i)| {
                    choices[i]
                        .iter()
                        .map(|class| {
                            class
                                .iter()
                                .map(|&v| self.framework.name(v).clone())
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        );
        self.done = true;
        for pos in (0..self.cursor.len()).rev() {
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.per_component[pos].len() {
                self.done = false;
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(order)
    }
}

fn check_cap(framework: &Framework, cap: usize) -> Result<Vec<Vec<usize>>> {
    let components = framework.components_idx();
    if let Some(big) = components.iter().map(Vec::len).max().filter(|&m| m > cap) {
        return Err(Error::SizeLimit {
            what: "largest connected component",
            size: big,
            cap,
        });
    }
    Ok(components)
}

/// Every CC-wise total order of `framework`. The number yielded is the
/// product of the ordered Bell numbers of the component sizes.
pub fn enumerate_orders(framework: &Framework, cap: usize) -> Result<Orders<'_>> {
    let components = check_cap(framework, cap)?;
    let per_component: Vec<_> = components.iter().map(|c| weak_orders(c)).collect();
    Ok(Orders {
        framework,
        cursor: vec![0; per_component.len()],
        per_component,
        done: false,
    })
}

/// Searches every order for one under which `labelling` is complete in the
/// reduced framework; returns the first such order.
pub fn brute_force_ex(
    framework: &Framework,
    labelling: &Labelling,
    reduction: Reduction,
    cap: usize,
) -> Result<Option<CcOrder>> {
    let labels = labelling.to_indexed(framework)?;
    for order in enumerate_orders(framework, cap)? {
        let ranks = order.ranks(framework)?;
        let reduced = framework.with_attack_indices(reduce_idx(framework, &ranks, reduction));
        if is_complete_idx(&reduced, &labels) {
            return Ok(Some(order));
        }
    }
    Ok(None)
}

/// Names of all arguments in an order, for tests and diagnostics.
pub fn order_members(order: &CcOrder) -> Vec<ArgumentId> {
    let mut all: Vec<ArgumentId> = order
        .components()
        .iter()
        .flatten()
        .flatten()
        .cloned()
        .collect();
    all.sort();
    all
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::graph::tests::running_example;
    use crate::preferences::validate_order;

    #[test]
    fn counts() {
        let two = Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let orders: Vec<_> = enumerate_orders(&two, 8).unwrap().collect();
        assert_eq!(orders.len(), 3);
        let want: HashSet<CcOrder> = ["a < b", "b < a", "a = b"]
            .iter()
            .map(|s| CcOrder::parse_lines(&[s]).unwrap())
            .collect();
        assert_eq!(orders.into_iter().collect::<HashSet<_>>(), want);

        let three = Framework::from_names(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(enumerate_orders(&three, 8).unwrap().count(), 13);

        let singles = Framework::from_names(&["a", "b"], &[]).unwrap();
        assert_eq!(enumerate_orders(&singles, 8).unwrap().count(), 1);

        let empty = Framework::empty();
        assert_eq!(enumerate_orders(&empty, 8).unwrap().count(), 1);
    }

    #[test]
    fn ordered_bell_numbers() {
        assert_eq!(
            (0..=5).map(ordered_bell).collect::<Vec<_>>(),
            [1, 1, 3, 13, 75, 541]
        );
        for n in 0..=6 {
            assert_eq!(
                weak_orders(&(0..n).collect::<Vec<_>>()).len() as u128,
                ordered_bell(n)
            );
        }
    }

    #[test]
    fn product_law_and_no_duplicates() {
        let f = Framework::from_names(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("c", "d"), ("d", "e")],
        )
        .unwrap();
        let orders: Vec<_> = enumerate_orders(&f, 8).unwrap().collect();
        assert_eq!(orders.len() as u128, ordered_bell(2) * ordered_bell(3));
        assert_eq!(orders.iter().collect::<HashSet<_>>().len(), orders.len());
        assert!(orders.iter().all(|o| validate_order(&f, o)));
        assert!(orders.iter().all(|o| order_members(o).len() == 5));
    }

    #[test]
    fn cap_enforced() {
        let f = running_example();
        assert!(matches!(
            enumerate_orders(&f, 3),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn brute_force_examples() {
        let f = Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
        let l1 = Labelling::from_names(&[], &[], &["a", "b"]).unwrap();
        assert!(brute_force_ex(&f, &l1, Reduction::Combined, 8)
            .unwrap()
            .is_some());
        assert!(brute_force_ex(&f, &l1, Reduction::Reflection, 8)
            .unwrap()
            .is_none());
        let e = running_example();
        let c = Labelling::from_names(&["a", "d"], &["b", "c"], &[]).unwrap();
        assert!(brute_force_ex(&e, &c, Reduction::WeakRemoval, 8)
            .unwrap()
            .is_some());
    }
}
