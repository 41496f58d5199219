//! JSON documents read and written by the command-line tool.
//!
//! Every document carries a `kind` tag. Parsing is strict: unknown fields are
//! rejected, and semantic errors name the offending field.

use std::collections::BTreeMap;
use std::sync::Arc;

use causal_games::automata::{ProcessSpec, TableAutomaton, TableTransition};
use causal_games::coloring::{Coloring, ColoringConstraint, ColoringError};
use causal_games::pcp::{PcpError, PcpInstance};
use causal_games::traces::{DependencyAlphabet, Letter, ProcessId, Trace, TraceError};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: field `{field}`: {message}")]
    InFile { path: String, field: String, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// Attaches the file a field error came from.
    pub fn in_file(self, path: &str) -> CliError {
        match self {
            CliError::Field { field, message } => CliError::InFile {
                path: path.to_string(),
                field,
                message,
            },
            other => other,
        }
    }
}

pub fn field(name: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Field {
        field: name.into(),
        message: message.to_string(),
    }
}

/// Any document. Serializes with its `kind` tag; parse with [`Document::parse`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    Pcp(PcpDoc),
    BcpConstraint(ConstraintDoc),
    Coloring(ColoringDoc),
    Automaton(AutomatonDoc),
    Game(GameDoc),
    Strategy(StrategyDoc),
    Trace(TraceDoc),
    Verdict(VerdictDoc),
}

const KINDS: [&str; 8] = ["pcp", "bcp-constraint", "coloring", "automaton", "game", "strategy", "trace", "verdict"];

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Pcp(_) => "pcp",
            Document::BcpConstraint(_) => "bcp-constraint",
            Document::Coloring(_) => "coloring",
            Document::Automaton(_) => "automaton",
            Document::Game(_) => "game",
            Document::Strategy(_) => "strategy",
            Document::Trace(_) => "trace",
            Document::Verdict(_) => "verdict",
        }
    }

    pub fn parse(text: &str) -> Result<Document, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| field("document", e))?;
        Document::from_value(value)
    }

    /// Reads the `kind` tag first, then the body with its own field paths.
    pub fn from_value(value: Value) -> Result<Document, CliError> {
        let Value::Object(mut map) = value else {
            return Err(field("document", "expected an object"));
        };
        let kind = match map.remove("kind") {
            Some(Value::String(k)) => k,
            Some(_) => return Err(field("kind", "expected a string")),
            None => return Err(field("kind", "missing field `kind`")),
        };
        let body = Value::Object(map);
        Ok(match kind.as_str() {
            "pcp" => Document::Pcp(body_of(body)?),
            "bcp-constraint" => Document::BcpConstraint(body_of(body)?),
            "coloring" => Document::Coloring(body_of(body)?),
            "automaton" => Document::Automaton(body_of(body)?),
            "game" => Document::Game(body_of(body)?),
            "strategy" => Document::Strategy(body_of(body)?),
            "trace" => Document::Trace(body_of(body)?),
            "verdict" => Document::Verdict(body_of(body)?),
            other => {
                return Err(field(
                    "kind",
                    format!("unknown kind `{other}`, expected one of {}", KINDS.join(", ")),
                ))
            }
        })
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

fn body_of<T: DeserializeOwned>(body: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(body).map_err(|e| {
        let path = e.path().to_string();
        let join = |f: &str| if path == "." { f.to_string() } else { format!("{path}.{f}") };
        let message = e.into_inner().to_string();
        // Errors of embedded documents already name their field.
        if let Some((inner, rest)) = message.strip_prefix("field `").and_then(|m| m.split_once("`: ")) {
            return field(join(inner), rest);
        }
        // Missing fields are reported against their parent; unknown ones name themselves.
        let missing = message.strip_prefix("missing field `").and_then(|rest| rest.split('`').next());
        match missing {
            Some(f) => field(join(f), &message),
            None if path == "." => field("document", &message),
            None => field(path.clone(), &message),
        }
    })
}

/// Serde adapters for a document nested inside another, kind tag included.
macro_rules! embedded {
    ($module:ident, $ty:ty, $variant:ident, $kind:literal) => {
        pub mod $module {
            use super::*;

            pub fn serialize<S: serde::Serializer>(doc: &$ty, s: S) -> Result<S::Ok, S::Error> {
                Document::$variant(doc.clone()).serialize(s)
            }

            pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                use serde::de::Error;
                match Document::from_value(Value::deserialize(d)?).map_err(D::Error::custom)? {
                    Document::$variant(doc) => Ok(doc),
                    other => {
                        Err(D::Error::custom(format!(
                            "field `kind`: expected `{}`, got `{}`",
                            $kind,
                            other.kind()
                        )))
                    }
                }
            }
        }
    };
}

embedded!(embedded_constraint, ConstraintDoc, BcpConstraint, "bcp-constraint");
embedded!(embedded_coloring, ColoringDoc, Coloring, "coloring");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileDoc {
    pub top: String,
    pub bottom: String,
}

/// Tile correspondence instance; tiles are numbered from 1 in every document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcpDoc {
    pub alphabet: Vec<String>,
    pub tiles: Vec<TileDoc>,
}

impl PcpDoc {
    pub fn to_instance(&self) -> Result<PcpInstance, CliError> {
        let mut alphabet = Vec::new();
        for (i, s) in self.alphabet.iter().enumerate() {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => alphabet.push(c),
                _ => return Err(field(format!("alphabet[{i}]"), "symbols are single characters")),
            }
        }
        let tiles = self
            .tiles
            .iter()
            .map(|t| (t.top.chars().collect(), t.bottom.chars().collect()))
            .collect();
        PcpInstance::new(alphabet, tiles).map_err(|e| match e {
            PcpError::EmptyWord { tile, side } => field(format!("tiles[{tile}].{side}"), "empty word"),
            PcpError::UnknownSymbol { tile, symbol } => {
                field(format!("tiles[{tile}]"), format!("symbol `{symbol}` is not in the alphabet"))
            }
            PcpError::DuplicateSymbol(c) => field("alphabet", format!("duplicate symbol `{c}`")),
            other => field("tiles", other),
        })
    }

    pub fn from_instance(inst: &PcpInstance) -> Self {
        PcpDoc {
            alphabet: inst.alphabet().iter().map(|c| c.to_string()).collect(),
            tiles: inst
                .tiles()
                .iter()
                .map(|(u, v)| TileDoc {
                    top: u.iter().collect(),
                    bottom: v.iter().collect(),
                })
                .collect(),
        }
    }
}

/// Sizes of the color set built from a tile instance, before and after pruning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruningDoc {
    pub raw_colors: usize,
    pub kept_colors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub colors: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub final_: Vec<String>,
    pub squares: Vec<[String; 2]>,
    pub upper: Vec<[String; 2]>,
    pub lower: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pruning: Option<PruningDoc>,
}

impl ConstraintDoc {
    pub fn to_constraint(&self) -> Result<ColoringConstraint, CliError> {
        let mut k = ColoringConstraint::new(self.colors.clone()).map_err(|e| field("colors", e))?;
        let color = |k: &ColoringConstraint, name: &str, at: String| k.color_of(name).map_err(|e| field(at, e));
        for (i, c) in self.initial.iter().enumerate() {
            let c = color(&k, c, format!("initial[{i}]"))?;
            k.allow_initial(c);
        }
        for (i, c) in self.final_.iter().enumerate() {
            let c = color(&k, c, format!("final[{i}]"))?;
            k.allow_final(c);
        }
        for (name, pairs) in [("squares", &self.squares), ("upper", &self.upper), ("lower", &self.lower)] {
            for (i, [c, d]) in pairs.iter().enumerate() {
                let c = color(&k, c, format!("{name}[{i}][0]"))?;
                let d = color(&k, d, format!("{name}[{i}][1]"))?;
                match name {
                    "squares" => k.squares_mut().insert(c, d),
                    "upper" => k.upper_mut().insert(c, d),
                    _ => k.lower_mut().insert(c, d),
                }
            }
        }
        Ok(k)
    }

    pub fn from_constraint(k: &ColoringConstraint) -> Self {
        let name = |c: usize| k.color_name(c).to_string();
        let pairs = |set: &causal_games::coloring::PairSet| set.iter().map(|(c, d)| [name(c), name(d)]).collect();
        ConstraintDoc {
            colors: k.colors().to_vec(),
            initial: k.initial().map(name).collect(),
            final_: k.final_colors().map(name).collect(),
            squares: pairs(k.squares()),
            upper: pairs(k.upper()),
            lower: pairs(k.lower()),
            pruning: None,
        }
    }
}

/// A grid coloring; `cells` lists color names with `x` major, so the cell
/// `(x, y)` sits at index `x * m + y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringDoc {
    pub n: usize,
    pub m: usize,
    pub cells: Vec<String>,
}

impl ColoringDoc {
    pub fn to_coloring(&self, k: &ColoringConstraint) -> Result<Coloring, CliError> {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| k.color_of(c).map_err(|e| field(format!("cells[{i}]"), e)))
            .collect::<Result<Vec<_>, _>>()?;
        Coloring::new(self.n, self.m, cells).map_err(|e| match e {
            ColoringError::EmptyGrid { .. } => field("n", e),
            other => field("cells", other),
        })
    }

    pub fn from_coloring(f: &Coloring, k: &ColoringConstraint) -> Self {
        ColoringDoc {
            n: f.n(),
            m: f.m(),
            cells: f.cells().iter().map(|&c| k.color_name(c).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterDoc {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetDoc {
    pub processes: Vec<String>,
    pub letters: Vec<LetterDoc>,
}

impl AlphabetDoc {
    pub fn to_alphabet(&self) -> Result<Arc<DependencyAlphabet>, CliError> {
        let mut letters = Vec::new();
        for (i, l) in self.letters.iter().enumerate() {
            let mut dom = Vec::new();
            for (j, p) in l.domain.iter().enumerate() {
                let id = self
                    .processes
                    .iter()
                    .position(|q| q == p)
                    .ok_or_else(|| field(format!("letters[{i}].domain[{j}]"), format!("unknown process `{p}`")))?;
                dom.push(ProcessId(id as u8));
            }
            letters.push((l.name.clone(), dom));
        }
        let al = DependencyAlphabet::new(self.processes.clone(), letters).map_err(|e| match &e {
            TraceError::EmptyDomain(_) | TraceError::TooManyLetters(_) => field("letters", e),
            TraceError::Duplicate { kind: "letter", .. } => field("letters", e),
            _ => field("processes", e),
        })?;
        Ok(Arc::new(al))
    }

    pub fn from_alphabet(al: &DependencyAlphabet) -> Self {
        AlphabetDoc {
            processes: al.process_names().to_vec(),
            letters: al
                .letters()
                .map(|a| LetterDoc {
                    name: al.letter_name(a).to_string(),
                    domain: al.domain(a).iter().map(|p| al.process_name(p).to_string()).collect(),
                })
                .collect(),
        }
    }
}

/// A trace as any linearization, letters separated by spaces; emitted in
/// canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub alphabet: AlphabetDoc,
    pub word: String,
}

/// Parses a space-separated word; `ε` or an empty string is the empty word.
pub fn parse_word(al: &Arc<DependencyAlphabet>, text: &str, at: &str) -> Result<Vec<Letter>, CliError> {
    text.split_whitespace()
        .filter(|t| *t != "ε")
        .map(|t| al.letter(t).ok_or_else(|| field(at, format!("unknown letter `{t}`"))))
        .collect()
}

pub fn render_word(al: &DependencyAlphabet, word: &[Letter]) -> String {
    word.iter().map(|&a| al.letter_name(a)).collect::<Vec<_>>().join(" ")
}

impl TraceDoc {
    pub fn to_trace(&self) -> Result<Trace, CliError> {
        let al = self.alphabet.to_alphabet().map_err(|e| prefix_field(e, "alphabet"))?;
        let word = parse_word(&al, &self.word, "word")?;
        causal_games::traces::normalize(&al, &word).map_err(|e| field("word", e))
    }

    pub fn from_trace(t: &Trace) -> Self {
        TraceDoc {
            alphabet: AlphabetDoc::from_alphabet(t.alphabet()),
            word: render_word(t.alphabet(), t.letters()),
        }
    }
}

/// Nests a field error under `outer`.
pub fn prefix_field(e: CliError, outer: &str) -> CliError {
    match e {
        CliError::Field { field: f, message } => CliError::Field {
            field: format!("{outer}.{f}"),
            message,
        },
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessDoc {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    #[serde(rename = "final")]
    pub final_: Vec<String>,
}

/// Local states of the letter's domain, in the order processes are declared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub letter: String,
    pub from: Vec<String>,
    pub to: Vec<String>,
}

/// An asynchronous automaton given by its transition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDoc {
    pub processes: Vec<ProcessDoc>,
    pub letters: Vec<LetterDoc>,
    pub transitions: Vec<TransitionDoc>,
}

impl AutomatonDoc {
    pub fn to_automaton(&self) -> Result<TableAutomaton, CliError> {
        let alphabet = AlphabetDoc {
            processes: self.processes.iter().map(|p| p.name.clone()).collect(),
            letters: self.letters.clone(),
        }
        .to_alphabet()?;
        let specs = self
            .processes
            .iter()
            .map(|p| ProcessSpec {
                states: p.states.clone(),
                initial: p.initial.clone(),
                finals: p.final_.clone(),
            })
            .collect();
        let transitions = self
            .transitions
            .iter()
            .map(|t| TableTransition {
                letter: t.letter.clone(),
                from: t.from.clone(),
                to: t.to.clone(),
            })
            .collect();
        TableAutomaton::new(alphabet, specs, transitions).map_err(|e| {
            use causal_games::automata::AutomatonError as E;
            let at = match &e {
                E::BadProcessSpec { process, .. } => self.process_field(process),
                E::UnknownState { process, state } => {
                    let in_spec = self
                        .processes
                        .iter()
                        .find(|p| &p.name == process)
                        .is_some_and(|p| p.initial == *state || p.final_.contains(state));
                    if in_spec {
                        self.process_field(process)
                    } else {
                        "transitions".to_string()
                    }
                }
                E::BadTransition { letter, .. } | E::Nondeterministic(letter) => {
                    match self.transitions.iter().position(|t| &t.letter == letter) {
                        Some(i) => format!("transitions[{i}]"),
                        None => "transitions".to_string(),
                    }
                }
                _ => "transitions".to_string(),
            };
            field(at, e)
        })
    }

    fn process_field(&self, name: &str) -> String {
        match self.processes.iter().position(|p| p.name == name) {
            Some(i) => format!("processes[{i}]"),
            None => "processes".to_string(),
        }
    }

    pub fn from_automaton(aut: &TableAutomaton) -> Self {
        use causal_games::automata::AsyncAutomaton;
        let al = aut.alphabet();
        AutomatonDoc {
            processes: al
                .process_names()
                .iter()
                .zip(aut.specs())
                .map(|(name, s)| ProcessDoc {
                    name: name.clone(),
                    states: s.states.clone(),
                    initial: s.initial.clone(),
                    final_: s.finals.clone(),
                })
                .collect(),
            letters: AlphabetDoc::from_alphabet(al).letters,
            transitions: aut
                .transitions()
                .iter()
                .map(|t| TransitionDoc {
                    letter: t.letter.clone(),
                    from: t.from.clone(),
                    to: t.to.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameParams {
    #[serde(with = "embedded_constraint")]
    pub constraint: ConstraintDoc,
}

/// Either the builtin `coloring-game` with its constraint, or an explicit
/// automaton with its environment letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GameParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automaton: Option<AutomatonDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyParams {
    #[serde(with = "embedded_coloring")]
    pub coloring: ColoringDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewEntry {
    /// Canonical word of the view; empty for the empty view.
    pub view: String,
    pub allowed: Vec<String>,
}

/// A builtin (`block-all`, `allow-all`, `coloring-strategy`) or a table from
/// process names to the letters allowed at each listed view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<StrategyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<BTreeMap<String, Vec<ViewEntry>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// 1-based tile indices.
    Sequence(Vec<usize>),
    /// A play, as its canonical word.
    Play(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDoc {
    pub result: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plays: Option<usize>,
}

impl VerdictDoc {
    pub fn new(result: &str) -> Self {
        VerdictDoc {
            result: result.to_string(),
            witness: None,
            reason: None,
            detail: None,
            depth: None,
            plays: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_is_required_and_checked() {
        let err = Document::parse(r#"{"alphabet": [], "tiles": []}"#).unwrap_err();
        assert!(err.to_string().contains("kind"), "{err}");
        let err = Document::parse(r#"{"kind": "tiles"}"#).unwrap_err();
        assert!(err.to_string().contains("tiles"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = Document::parse(r#"{"kind": "coloring", "n": 1, "m": 1, "cells": ["c"], "extra": 1}"#).unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
        let err = Document::parse(r#"{"kind": "pcp", "alphabet": ["a"], "tiles": [{"top": "a", "bottom": "a", "x": 1}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains('x'), "{err}");
    }

    #[test]
    fn empty_top_names_the_tile() {
        let doc = Document::parse(r#"{"kind": "pcp", "alphabet": ["a"], "tiles": [{"top": "a", "bottom": "a"}, {"top": "", "bottom": "a"}]}"#)
            .unwrap();
        let Document::Pcp(p) = doc else { panic!() };
        let err = p.to_instance().unwrap_err();
        assert_eq!(err.to_string(), "field `tiles[1].top`: empty word");
    }

    #[test]
    fn constraint_round_trip() {
        let k = ColoringConstraint::from_names(&["G", "R", "B"], &["G", "R"], &["B"], &[("B", "G")], &[("G", "B")], &[]).unwrap();
        let doc = ConstraintDoc::from_constraint(&k);
        assert_eq!(doc.to_constraint().unwrap(), k);
        let d = Document::BcpConstraint(doc);
        assert_eq!(Document::parse(&d.emit()).unwrap(), d);
    }

    #[test]
    fn four_by_two_coloring_cells() {
        let k = ColoringConstraint::from_names(&["G", "R", "B"], &["G", "R"], &["B"], &[], &[], &[]).unwrap();
        let f = Coloring::from_fn(4, 2, |x, y| match (x, y) {
            (0, 0) => 0,
            (3, 1) => 2,
            _ => 1,
        })
        .unwrap();
        let doc = ColoringDoc::from_coloring(&f, &k);
        assert_eq!(doc.cells, ["G", "R", "R", "R", "R", "R", "R", "B"]);
        assert_eq!(doc.to_coloring(&k).unwrap(), f);
    }

    #[test]
    fn trace_documents_normalize() {
        let doc = TraceDoc {
            alphabet: AlphabetDoc {
                processes: vec!["1".into(), "2".into()],
                letters: vec![
                    LetterDoc {
                        name: "a".into(),
                        domain: vec!["1".into()],
                    },
                    LetterDoc {
                        name: "b".into(),
                        domain: vec!["2".into()],
                    },
                ],
            },
            word: "b a".into(),
        };
        let t = doc.to_trace().unwrap();
        assert_eq!(TraceDoc::from_trace(&t).word, "a b");
        let mut bad = doc.clone();
        bad.alphabet.letters[0].domain = vec!["9".into()];
        assert_eq!(bad.to_trace().unwrap_err().to_string(), "field `alphabet.letters[0].domain[0]`: unknown process `9`");
    }
}
