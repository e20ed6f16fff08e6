//! Text formats: APX frameworks, JSON labellings, order files, preference
//! functions, Graphviz output and decision reports.
//!
//! All emitters are deterministic and list arguments in name order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_valid_name, ArgumentId, Attack, Framework};
use crate::inverse::{Certificate, Decision, Verdict};
use crate::preferences::{CcOrder, PreferenceFunction};
use crate::reductions::Reduction;
use crate::semantics::{Label, Labelling};

// ---------------------------------------------------------------------------
// APX

struct FactScanner<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> FactScanner<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.rest.strip_prefix(c) {
            Some(r) => {
                self.rest = r;
                Ok(())
            }
            None => Err(self.err(format!("expected '{c}'"))),
        }
    }

    fn word(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let end = self
            .rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest.len());
        if end == 0 {
            let found: String = self.rest.chars().take(10).collect();
            return Err(self.err(format!("expected an identifier, found {found:?}")));
        }
        let (w, r) = self.rest.split_at(end);
        self.rest = r;
        Ok(w)
    }
}

/// Parses the APX dialect: `arg(x).` and `att(x,y).` facts, `%` comments.
/// Several facts may share a line; repeated facts are harmless.
pub fn parse_apx(text: &str) -> Result<Framework> {
    let mut args = BTreeSet::new();
    let mut attacks: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('%').next().unwrap_or("");
        let mut scan = FactScanner {
            rest: content,
            line: i + 1,
        };
        loop {
            scan.skip_ws();
            if scan.rest.is_empty() {
                break;
            }
            match scan.word()? {
                "arg" => {
                    scan.expect('(')?;
                    let name = scan.word()?;
                    scan.expect(')')?;
                    scan.expect('.')?;
                    args.insert(ArgumentId::new(name)?);
                }
                "att" => {
                    scan.expect('(')?;
                    let src = scan.word()?;
                    scan.expect(',')?;
                    let dst = scan.word()?;
                    scan.expect(')')?;
                    scan.expect('.')?;
                    attacks.push((scan.line, src.to_string(), dst.to_string()));
                }
                other => return Err(scan.err(format!("unknown fact {other:?}"))),
            }
        }
    }
    let mut pairs = Vec::with_capacity(attacks.len());
    for (line, src, dst) in attacks {
        for name in [&src, &dst] {
            if !args.contains(name.as_str()) {
                return Err(Error::UndeclaredArgument {
                    line,
                    name: name.clone(),
                });
            }
        }
        pairs.push((ArgumentId::new(src)?, ArgumentId::new(dst)?));
    }
    Framework::new(args, pairs)
}

pub fn emit_apx(framework: &Framework) -> String {
    let mut out = String::new();
    for a in framework.arguments() {
        let _ = writeln!(out, "arg({a}).");
    }
    for (s, d) in framework.attacks() {
        let _ = writeln!(out, "att({s},{d}).");
    }
    out
}

// ---------------------------------------------------------------------------
// Labellings

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabellingJson {
    #[serde(rename = "in", default)]
    ins: Vec<ArgumentId>,
    #[serde(rename = "out", default)]
    outs: Vec<ArgumentId>,
    #[serde(rename = "undec", default)]
    undecs: Vec<ArgumentId>,
}

/// Parses `{"in": [...], "out": [...], "undec": [...]}`.
pub fn parse_labelling(text: &str) -> Result<Labelling> {
    let raw: LabellingJson = serde_json::from_str(text)?;
    Labelling::from_sets(raw.ins, raw.outs, raw.undecs)
}

pub fn emit_labelling(labelling: &Labelling) -> String {
    let raw = LabellingJson {
        ins: labelling.with_label(Label::In),
        outs: labelling.with_label(Label::Out),
        undecs: labelling.with_label(Label::Undec),
    };
    serde_json::to_string(&raw).expect("labelling serialises")
}

// ---------------------------------------------------------------------------
// Orders

/// Parses one component per line, classes separated by `<` (least preferred
/// first) and members by `=`, e.g. `a < b < c = d`. Blank lines and `%`
/// comments are skipped.
pub fn parse_order(text: &str) -> Result<CcOrder> {
    let mut components = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut classes = Vec::new();
        for class in line.split('<') {
            let members = class
                .split('=')
                .map(|m| {
                    let m = m.trim();
                    if is_valid_name(m) {
                        Ok(ArgumentId::new(m)?)
                    } else {
                        Err(Error::Parse {
                            line: i + 1,
                            message: format!("invalid argument name {m:?} in order"),
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            classes.push(members);
        }
        components.push(classes);
    }
    Ok(CcOrder::new(components))
}

pub fn emit_order(order: &CcOrder) -> String {
    let mut out = String::new();
    for classes in order.components() {
        let line: Vec<String> = classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(ArgumentId::as_str)
                    .collect::<Vec<_>>()
                    .join(" = ")
            })
            .collect();
        out.push_str(&line.join(" < "));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Preference functions

/// Parses a JSON object mapping `"src>dst"` keys to 0 or 1.
pub fn parse_pref_fn(text: &str) -> Result<PreferenceFunction> {
    let raw: BTreeMap<String, u8> = serde_json::from_str(text)?;
    let mut bits = BTreeMap::new();
    for (key, bit) in raw {
        let (s, d) = key.split_once('>').ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("attack key {key:?} is not of the form \"src>dst\""),
        })?;
        let bit = match bit {
            0 => false,
            1 => true,
            other => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("bit for {key:?} must be 0 or 1, not {other}"),
                })
            }
        };
        bits.insert((ArgumentId::new(s)?, ArgumentId::new(d)?), bit);
    }
    Ok(PreferenceFunction::new(bits))
}

pub fn emit_pref_fn(f: &PreferenceFunction) -> String {
    let raw: BTreeMap<String, u8> = f
        .bits()
        .iter()
        .map(|((s, d), b)| (format!("{s}>{d}"), u8::from(*b)))
        .collect();
    serde_json::to_string(&raw).expect("preference function serialises")
}

// ---------------------------------------------------------------------------
// Graphviz

/// Graphviz description of `framework`. Labelled arguments are filled green
/// (in), red (out) or gray (undec); highlighted attacks are drawn red.
pub fn emit_dot(
    framework: &Framework,
    labelling: Option<&Labelling>,
    highlight: &[Attack],
) -> String {
    let highlight: BTreeSet<&Attack> = highlight.iter().collect();
    let mut out = String::from("digraph framework {\n    node [shape=circle];\n");
    for a in framework.arguments() {
        match labelling.and_then(|l| l.get(a.as_str())) {
            Some(label) => {
                let color = match label {
                    Label::In => "green",
                    Label::Out => "red",
                    Label::Undec => "gray",
                };
                let _ = writeln!(out, "    \"{a}\" [style=filled, fillcolor={color}];");
            }
            None => {
                let _ = writeln!(out, "    \"{a}\";");
            }
        }
    }
    for attack in framework.attacks() {
        let (s, d) = &attack;
        if highlight.contains(&attack) {
            let _ = writeln!(out, "    \"{s}\" -> \"{d}\" [color=red];");
        } else {
            let _ = writeln!(out, "    \"{s}\" -> \"{d}\";");
        }
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Decisions

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultFormat {
    Json,
    Text,
}

#[derive(Serialize, Deserialize)]
struct DecisionJson {
    verdict: Verdict,
    /// Classes of all components, least preferred first, components in
    /// canonical order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Vec<ArgumentId>>>,
    /// Number of classes in each witness component.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness_components: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    reduction: Reduction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

fn decision_json(decision: &Decision, elapsed: Option<Duration>) -> DecisionJson {
    DecisionJson {
        verdict: decision.verdict,
        witness: decision
            .witness
            .as_ref()
            .map(|w| w.components().iter().flatten().cloned().collect()),
        witness_components: decision
            .witness
            .as_ref()
            .map(|w| w.components().iter().map(Vec::len).collect()),
        certificate: decision.certificate.clone(),
        reduction: decision.reduction,
        elapsed_ms: elapsed.map(|d| (d.as_secs_f64() * 1e6).round() / 1e3),
    }
}

/// JSON value of a decision, for embedding in larger reports.
pub fn decision_value(decision: &Decision, elapsed: Option<Duration>) -> serde_json::Value {
    serde_json::to_value(decision_json(decision, elapsed)).expect("decision serialises")
}

pub fn emit_result(decision: &Decision, format: ResultFormat, elapsed: Option<Duration>) -> String {
    match format {
        ResultFormat::Json => {
            serde_json::to_string(&decision_json(decision, elapsed)).expect("decision serialises")
        }
        ResultFormat::Text => {
            let mut out = format!("reduction {}: {}", decision.reduction, decision.verdict);
            if let Some(cert) = &decision.certificate {
                let _ = write!(out, " ({cert})");
            }
            if let Some(t) = elapsed {
                let _ = write!(out, " in {:.3} ms", t.as_secs_f64() * 1e3);
            }
            out.push('\n');
            if let Some(w) = &decision.witness {
                out.push_str(&emit_order(w));
            }
            out
        }
    }
}

/// Parses the JSON form of [`emit_result`]; timing is dropped.
pub fn parse_result(text: &str) -> Result<Decision> {
    let raw: DecisionJson = serde_json::from_str(text)?;
    let witness = match (raw.witness, raw.witness_components) {
        (None, _) => None,
        (Some(classes), Some(sizes)) => {
            if sizes.iter().sum::<usize>() != classes.len() {
                return Err(Error::Parse {
                    line: 1,
                    message: "witness_components does not match the witness".into(),
                });
            }
            let mut rest = classes.into_iter();
            Some(CcOrder::new(
                sizes
                    .iter()
                    .map(|&k| rest.by_ref().take(k).collect())
                    .collect(),
            ))
        }
        // A bare class list is a single component.
        (Some(classes), None) => Some(CcOrder::new(if classes.is_empty() {
            vec![]
        } else {
            vec![classes]
        })),
    };
    Ok(Decision {
        reduction: raw.reduction,
        verdict: raw.verdict,
        witness,
        certificate: raw.certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::running_example;
    use crate::inverse::Reason;

    #[test]
    fn apx_basic() {
        let f = parse_apx("arg(a). arg(b). att(a,b).").unwrap();
        assert_eq!(
            f,
            Framework::from_names(&["a", "b"], &[("a", "b")]).unwrap()
        );
    }

    #[test]
    fn apx_running_example_with_comments_and_spacing() {
        let text = "% example\narg(a).\narg( b ).\n  arg(c). arg(d).\n\natt(a,b). att(a,c).\natt(c , a).\natt(b,c).att(c,b).\natt(d,c). att(c,d). % trailing\natt(a,b).\n";
        assert_eq!(parse_apx(text).unwrap(), running_example());
    }

    #[test]
    fn apx_errors() {
        assert!(matches!(
            parse_apx("att(a,b)."),
            Err(Error::UndeclaredArgument { line: 1, .. })
        ));
        assert!(matches!(
            parse_apx("arg(a).\narg(b)"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_apx("arg(a).\nfoo(b)."),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_apx("arg(a-b)."),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn apx_emit() {
        let f = Framework::from_names(&["b", "a"], &[("b", "a")]).unwrap();
        assert_eq!(emit_apx(&f), "arg(a).\narg(b).\natt(b,a).\n");
    }

    #[test]
    fn labelling_json() {
        let l = parse_labelling(r#"{"in":["a","d"],"out":["b","c"],"undec":[]}"#).unwrap();
        assert_eq!(
            l,
            Labelling::from_names(&["a", "d"], &["b", "c"], &[]).unwrap()
        );
        assert_eq!(
            emit_labelling(&l),
            r#"{"in":["a","d"],"out":["b","c"],"undec":[]}"#
        );
        assert!(parse_labelling(r#"{"in":[],"out":[],"undec":[]}"#)
            .unwrap()
            .is_empty());
        assert!(matches!(
            parse_labelling(r#"{"in":["a"],"out":["a"],"undec":[]}"#),
            Err(Error::LabelOverlap(_))
        ));
        assert!(matches!(
            parse_labelling(r#"{"in":[],"maybe":[]}"#),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn order_text() {
        let o = parse_order("% comment\na < b < c = d\n\n").unwrap();
        assert_eq!(emit_order(&o), "a < b < c = d\n");
        assert!(parse_order("a < < b").is_err());
        assert!(parse_order("a <").is_err());
        assert_eq!(parse_order("").unwrap(), CcOrder::default());
    }

    #[test]
    fn pref_fn_json() {
        let f = running_example();
        let pf = PreferenceFunction::zeros_at(&f, &[("a", "b")]).unwrap();
        let text = emit_pref_fn(&pf);
        assert!(text.contains("\"a>b\":0"));
        assert_eq!(parse_pref_fn(&text).unwrap(), pf);
        assert!(parse_pref_fn(r#"{"a>b":2}"#).is_err());
        assert!(parse_pref_fn(r#"{"ab":1}"#).is_err());
    }

    #[test]
    fn dot_output() {
        let f = Framework::from_names(&["a"], &[]).unwrap();
        let l = Labelling::from_names(&["a"], &[], &[]).unwrap();
        let dot = emit_dot(&f, Some(&l), &[]);
        assert_eq!(dot.matches("fillcolor=green").count(), 1);
        assert!(!dot.contains("->"));

        let e = running_example();
        let c = Labelling::from_names(&["a", "d"], &["b", "c"], &[]).unwrap();
        let dot = emit_dot(&e, Some(&c), &[]);
        assert_eq!(dot.matches("fillcolor=green").count(), 2);
        assert_eq!(dot.matches("fillcolor=red").count(), 2);
        assert_eq!(dot, emit_dot(&e, Some(&c), &[]));

        let plain = emit_dot(
            &e,
            None,
            &[(ArgumentId::new("a").unwrap(), ArgumentId::new("b").unwrap())],
        );
        assert!(!plain.contains("fillcolor"));
        assert!(plain.contains("\"a\" -> \"b\" [color=red];"));
    }

    #[test]
    fn result_json_shapes() {
        let yes = Decision::yes(Reduction::Reflection, parse_order("a < b").unwrap());
        let text = emit_result(&yes, ResultFormat::Json, None);
        assert!(
            text.starts_with(r#"{"verdict":"yes","witness":[["a"],["b"]]"#),
            "{text}"
        );
        assert_eq!(parse_result(&text).unwrap(), yes);

        let no = Decision::no(
            Reduction::Reflection,
            Certificate {
                condition: 3,
                witness: vec![ArgumentId::new("x").unwrap()],
                reason: Reason::AcyclicUndecComponent,
            },
        );
        let text = emit_result(&no, ResultFormat::Json, Some(Duration::from_millis(2)));
        assert!(
            text.starts_with(r#"{"verdict":"no","certificate":{"condition":3,"witness":["x"]"#),
            "{text}"
        );
        assert_eq!(parse_result(&text).unwrap(), no);

        let human = emit_result(&yes, ResultFormat::Text, None);
        assert_eq!(human, "reduction 1: yes\na < b\n");
    }
}
