//! Inverse problems for preference-based argumentation.
//!
//! Given an abstract argumentation framework and a target labelling, decide
//! whether some CC-wise total preference order makes the labelling complete
//! after one of four preference-based reductions, and produce that order.
//!
//! ```
//! use prefarg::{decide, verify_witness, Framework, Labelling, Reduction};
//!
//! let f = Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap();
//! let l = Labelling::from_names(&["b"], &["a"], &[]).unwrap();
//! let d = decide(&f, &l, Reduction::Reflection).unwrap();
//! assert!(d.is_yes());
//! assert!(verify_witness(&f, &l, Reduction::Reflection, d.witness.as_ref().unwrap()).unwrap());
//! assert_eq!(d.witness.unwrap().to_string(), "a < b\n");
//! ```

pub mod error;
pub mod generate;
pub mod graph;
pub mod inverse;
pub mod io;
pub mod oracle;
pub mod preferences;
pub mod rank;
pub mod reductions;
pub mod semantics;

pub use error::{Error, Result};
pub use graph::{ArgumentId, Attack, Framework};
pub use inverse::{
    decide, decide_ex1, decide_ex2, decide_ex3, decide_ex4, verify_witness, Certificate, Decision,
    Reason, Verdict,
};
pub use oracle::{brute_force_ex, enumerate_orders};
pub use preferences::{
    check_consistent, is_consistent, order_to_pref_fn, pref_fn_to_order, validate_order, CcOrder,
    PreferenceFunction,
};
pub use rank::{rank, RankOutcome, RankingFunction};
pub use reductions::{graph_from_pref_fn, reduce, Reduction};
pub use semantics::{check_complete, enumerate_complete, is_complete, Label, Labelling};
