use std::collections::BTreeSet;

use proptest::prelude::*;

use prefarg::io;
use prefarg::oracle::brute_force_ex;
use prefarg::{
    decide, enumerate_complete, is_complete, is_consistent, order_to_pref_fn, pref_fn_to_order,
    rank, reduce, verify_witness, ArgumentId, CcOrder, Framework, Label, Labelling, RankOutcome,
    Reduction,
};

fn names(n: usize) -> Vec<ArgumentId> {
    (0..n)
        .map(|i| ArgumentId::new(format!("v{i}")).unwrap())
        .collect()
}

fn framework_from(n: usize, mask: &[bool]) -> Framework {
    let ids = names(n);
    let attacks = (0..n * n)
        .filter(|&k| mask[k])
        .map(|k| (ids[k / n].clone(), ids[k % n].clone()));
    Framework::new(ids.clone(), attacks).unwrap()
}

fn arb_framework(max: usize) -> impl Strategy<Value = Framework> {
    (0..=max).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.35), n * n)
            .prop_map(move |m| framework_from(n, &m))
    })
}

fn arb_labels(n: usize) -> impl Strategy<Value = Vec<Label>> {
    prop::collection::vec(
        prop_oneof![Just(Label::In), Just(Label::Out), Just(Label::Undec)],
        n,
    )
}

fn labelling_from(f: &Framework, labels: &[Label]) -> Labelling {
    let mut l = Labelling::new();
    for (a, &lab) in f.arguments().iter().zip(labels) {
        l.set(a.clone(), lab);
    }
    l
}

fn arb_instance(max: usize) -> impl Strategy<Value = (Framework, Labelling)> {
    arb_framework(max).prop_flat_map(|f| {
        let n = f.len();
        arb_labels(n).prop_map(move |ls| {
            let l = labelling_from(&f, &ls);
            (f.clone(), l)
        })
    })
}

/// An order given by a rank per argument, classes formed by equal ranks.
fn arb_framework_and_order(max: usize) -> impl Strategy<Value = (Framework, CcOrder)> {
    arb_framework(max).prop_flat_map(|f| {
        let n = f.len();
        prop::collection::vec(0..4usize, n).prop_map(move |ranks| {
            let comps = f
                .connected_components()
                .into_iter()
                .map(|members| {
                    let mut classes: Vec<Vec<ArgumentId>> = vec![Vec::new(); 4];
                    for m in members {
                        let i = f.index_of(m.as_str()).unwrap();
                        classes[ranks[i]].push(m);
                    }
                    classes.into_iter().filter(|c| !c.is_empty()).collect()
                })
                .collect();
            (f.clone(), CcOrder::new(comps))
        })
    })
}

fn attack_set(f: &Framework) -> BTreeSet<(ArgumentId, ArgumentId)> {
    f.attacks().into_iter().collect()
}

/// Grounded labelling by naive fixpoint iteration.
fn grounded(f: &Framework) -> Labelling {
    let mut l = Labelling::uniform(f, Label::Undec);
    loop {
        let mut changed = false;
        for a in f.arguments() {
            if l.get(a.as_str()) != Some(Label::Undec) {
                continue;
            }
            let att = f.attackers(a.as_str()).unwrap();
            let next = if att.iter().all(|b| l.get(b.as_str()) == Some(Label::Out)) {
                Label::In
            } else if att.iter().any(|b| l.get(b.as_str()) == Some(Label::In)) {
                Label::Out
            } else {
                continue;
            };
            l.set(a.clone(), next);
            changed = true;
        }
        if !changed {
            return l;
        }
    }
}

fn rename(f: &Framework, l: &Labelling) -> (Framework, Labelling) {
    // Reverses the name order so index-dependent tie-breaking changes.
    let map = |a: &ArgumentId| {
        ArgumentId::new(format!(
            "z{}",
            1000 - a.as_str()[1..].parse::<usize>().unwrap()
        ))
        .unwrap()
    };
    let g = Framework::new(
        f.arguments().iter().map(map),
        f.attacks().iter().map(|(s, d)| (map(s), map(d))),
    )
    .unwrap();
    let mut m = Labelling::new();
    for (a, lab) in l.iter() {
        m.set(map(a), lab);
    }
    (g, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn complete_labellings_are_complete_partitions(f in arb_framework(7)) {
        let all = enumerate_complete(&f, 20).unwrap();
        prop_assert!(!all.is_empty());
        for l in &all {
            prop_assert!(is_complete(&f, l).unwrap());
            prop_assert_eq!(l.len(), f.len());
            let total = l.in_set().len() + l.out_set().len() + l.undec_set().len();
            prop_assert_eq!(total, f.len());
        }
        prop_assert!(all.contains(&grounded(&f)));
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn restriction_keeps_inner_attacks(f in arb_framework(6), keep in prop::collection::vec(any::<bool>(), 6)) {
        let subset: Vec<&str> = f
            .arguments()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(a, _)| a.as_str())
            .collect();
        let r = f.restrict(&subset).unwrap();
        prop_assert_eq!(r.len(), subset.len());
        let inner: BTreeSet<_> = f
            .attacks()
            .into_iter()
            .filter(|(s, d)| subset.contains(&s.as_str()) && subset.contains(&d.as_str()))
            .collect();
        prop_assert_eq!(attack_set(&r), inner);
    }

    #[test]
    fn order_to_pref_fn_round_trip((f, ord) in arb_framework_and_order(6)) {
        let pf = order_to_pref_fn(&f, &ord).unwrap();
        prop_assert!(is_consistent(&f, &pf).unwrap());
        let back = pref_fn_to_order(&f, &pf).unwrap();
        prop_assert_eq!(order_to_pref_fn(&f, &back).unwrap(), pf);
        for r in Reduction::ALL {
            prop_assert_eq!(reduce(&f, &back, r).unwrap(), reduce(&f, &ord, r).unwrap());
        }
    }

    #[test]
    fn reduction_relations((f, ord) in arb_framework_and_order(6)) {
        let c = attack_set(&f);
        let red: Vec<_> = Reduction::ALL.iter().map(|&r| reduce(&f, &ord, r).unwrap()).collect();
        for g in &red {
            prop_assert_eq!(g.arguments(), f.arguments());
        }
        let union: BTreeSet<_> = attack_set(&red[0]).union(&attack_set(&red[1])).cloned().collect();
        prop_assert_eq!(attack_set(&red[2]), union);
        prop_assert!(attack_set(&red[3]).is_subset(&c));
        prop_assert!(attack_set(&red[1]).is_subset(&c));
        for (s, d) in &c {
            if !c.contains(&(d.clone(), s.clone())) {
                prop_assert!(red[1].has_attack(s.as_str(), d.as_str()));
            }
            if s == d {
                for g in &red {
                    prop_assert!(g.has_attack(s.as_str(), d.as_str()));
                }
            }
        }
    }

    #[test]
    fn all_equivalent_order_changes_nothing(f in arb_framework(6)) {
        let ord = CcOrder::all_equivalent(&f);
        for r in Reduction::ALL {
            prop_assert_eq!(reduce(&f, &ord, r).unwrap(), f.clone());
        }
    }

    #[test]
    fn deciders_match_oracle((f, l) in arb_instance(5)) {
        let mut yes = [false; 4];
        for (k, r) in Reduction::ALL.into_iter().enumerate() {
            let d = decide(&f, &l, r).unwrap();
            let o = brute_force_ex(&f, &l, r, 8).unwrap();
            prop_assert_eq!(d.is_yes(), o.is_some(), "reduction {}", r);
            match &d.witness {
                Some(w) => prop_assert!(verify_witness(&f, &l, r, w).unwrap()),
                None => prop_assert!(d.certificate.is_some()),
            }
            yes[k] = d.is_yes();
        }
        prop_assert_eq!(yes[1], yes[0] && yes[3]);
        prop_assert_eq!(yes[1], yes[2] && yes[3]);
        prop_assert!(!yes[0] || yes[2]);
    }

    #[test]
    fn complete_labellings_always_solvable(f in arb_framework(6), pick in any::<prop::sample::Index>()) {
        let all = enumerate_complete(&f, 20).unwrap();
        let l = &all[pick.index(all.len())];
        for r in Reduction::ALL {
            let d = decide(&f, l, r).unwrap();
            prop_assert!(d.is_yes());
            prop_assert_eq!(d.witness.unwrap(), CcOrder::all_equivalent(&f));
        }
    }

    #[test]
    fn verdicts_survive_renaming((f, l) in arb_instance(6)) {
        let (g, m) = rename(&f, &l);
        for r in Reduction::ALL {
            let d = decide(&f, &l, r).unwrap();
            let e = decide(&g, &m, r).unwrap();
            prop_assert_eq!(d.verdict, e.verdict);
            if let Some(w) = &e.witness {
                prop_assert!(verify_witness(&g, &m, r, w).unwrap());
            }
        }
    }

    #[test]
    fn rank_success_is_validated((f, l) in arb_instance(7)) {
        let mut no_out = Labelling::new();
        for (a, lab) in l.iter() {
            no_out.set(a.clone(), if lab == Label::Out { Label::Undec } else { lab });
        }
        if let RankOutcome::Yes(psi) = rank(&f, &no_out).unwrap() {
            prop_assert_eq!(psi.validate(&f, &no_out).unwrap(), Ok(()));
        }
    }

    #[test]
    fn text_formats_round_trip((f, ord) in arb_framework_and_order(8), labels in arb_labels(8)) {
        prop_assert_eq!(io::parse_apx(&io::emit_apx(&f)).unwrap(), f.clone());
        prop_assert_eq!(io::parse_order(&io::emit_order(&ord)).unwrap(), ord.clone());
        let l = labelling_from(&f, &labels);
        prop_assert_eq!(io::parse_labelling(&io::emit_labelling(&l)).unwrap(), l);
        let pf = order_to_pref_fn(&f, &ord).unwrap();
        prop_assert_eq!(io::parse_pref_fn(&io::emit_pref_fn(&pf)).unwrap(), pf);
    }
}
