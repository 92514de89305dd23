//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a mathematical verdict of false or fail, 2 usage,
//! parse or input errors. With `--json` every document carries
//! `"schema": "sympcap/1"`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cover::{self, CoverDatum, Sign, TameElement, TameField};
use crate::dsl;
use crate::error::Error;
use crate::exact::{self, Rational};
use crate::exchange::corpus::{self, CorpusEntry, EntryOutcome};
use crate::exchange::{self, ExchangeTriple, RootGroupSet};
use crate::field::{DeclaredSquares, FieldHandle, Rationals};
use crate::filtration::{self, RootCharacter};
use crate::orbits::{self, OrbitPoset, SymplecticPartition};
use crate::params::{self, ExceptionalCharacter, ParamSet};
use crate::rootsys::WeylElement;

#[derive(Parser, Debug)]
#[command(
    name = "sympcap",
    version,
    about = "Symplectic orbit, root-exchange and cover-parameter computations"
)]
struct Cli {
    /// Emit JSON documents instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symplectic partitions and orbit invariants.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// The dominance poset for a fixed total, cached under SYMPCAP_CACHE_DIR.
    Poset {
        #[arg(long = "two-r")]
        two_r: u64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// The grading of positive roots attached to an orbit.
    Filtration {
        #[arg(long)]
        partition: String,
    },
    /// Characters on V_2 and their stabilizers.
    #[command(subcommand)]
    Character(CharacterCmd),
    /// Root-exchange checks.
    #[command(subcommand)]
    Exchange(ExchangeCmd),
    /// The shipped exchange corpus.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Cover lattices, tame symbols and the torus cocycle.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Satake parameter transfer.
    #[command(subcommand)]
    Lift(LiftCmd),
    /// The dimension equation dim π + dim of the unipotent part = n².
    Dimeq {
        #[arg(long)]
        m: u64,
        /// dim π as a rational; defaults to m².
        #[arg(long)]
        dim: Option<String>,
        #[arg(long, default_value_t = 0)]
        min_n: u64,
        #[arg(long)]
        max_n: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum OrbitCmd {
    /// Orbit dimension.
    Dim {
        #[arg(long)]
        partition: String,
        /// Use the transpose formula instead of the grading.
        #[arg(long)]
        transpose: bool,
    },
    /// Gelfand–Kirillov dimension, half the orbit dimension.
    Gk {
        #[arg(long)]
        partition: String,
    },
    /// The neutral element h.
    H {
        #[arg(long)]
        partition: String,
    },
    /// Whether a partition of an even total is symplectic.
    Check {
        #[arg(long)]
        partition: String,
    },
    /// All symplectic partitions of 2r.
    List {
        #[arg(long = "two-r")]
        two_r: u64,
    },
    /// Dominance comparison of two orbits.
    Compare {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Orbits greater than or incomparable to the given one.
    NotBelow {
        #[arg(long)]
        partition: String,
    },
}

#[derive(Args, Debug)]
struct CharacterData {
    #[arg(long)]
    partition: String,
    /// Comma-separated rationals, family data in order.
    #[arg(long, allow_hyphen_values = true)]
    data: String,
}

#[derive(Subcommand, Debug)]
enum CharacterCmd {
    /// The family character of an orbit.
    Generic(CharacterData),
    /// Dimension of the stabilizer in the Levi; exit 1 when not generic.
    Stabilizer(CharacterData),
    /// Parses "root: coeff" lines into a character carried on V_2 of the orbit.
    Parse {
        #[arg(long)]
        partition: String,
        #[arg(long, allow_hyphen_values = true)]
        text: String,
    },
    /// Whether ⟨ε_1, …, ε_n⟩ is split; exit 1 unless split is proven.
    Split {
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        /// Rationals adjoined as squares to ℚ.
        #[arg(long, allow_hyphen_values = true)]
        squares: Option<String>,
    },
    /// Dimension and a representative root of the Heisenberg center for (2m, 1^{2r−2m}).
    Heisenberg {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Args, Debug)]
struct StateArgs {
    #[arg(long)]
    rank: usize,
    /// Root set C, e.g. "{a2, 2*e1}".
    #[arg(long = "c")]
    c: String,
    /// Character on C as "root: coeff" entries separated by ';' or newlines.
    #[arg(long, allow_hyphen_values = true)]
    psi: String,
}

#[derive(Subcommand, Debug)]
enum ExchangeCmd {
    /// The four triple conditions; exit 1 on failure.
    Triple {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// The six quadruple properties; exit 1 on failure.
    Quadruple {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long = "x", allow_hyphen_values = true)]
        x: String,
        #[arg(long = "y", allow_hyphen_values = true)]
        y: String,
    },
    /// Conjugates (C, ψ) by a word in the simple reflections.
    Conjugate {
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated simple reflection indices, applied right to left.
        #[arg(long)]
        word: String,
    },
    /// Replays the corpus.
    Corpus(CorpusRun),
}

#[derive(Args, Debug)]
struct CorpusRun {
    /// Replay every entry.
    #[arg(long)]
    run_all: bool,
    /// Replay one entry.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    /// Entry names and kinds.
    List,
    /// One entry as JSON.
    Show {
        #[arg(long)]
        name: String,
    },
    /// Replays entries.
    Run(CorpusRun),
    /// Single mutations of an entry that still pass; exit 1 when any survive.
    Mutations {
        #[arg(long)]
        name: String,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 4)]
    n: u64,
}

#[derive(Subcommand, Debug)]
enum CoverCmd {
    /// Bases of Y_{Q,n} and Y^sc_{Q,n}.
    Lattice {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        n: u64,
    },
    /// n_α, modified coroots and the Cartan type of the dual group.
    Dual {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        n: u64,
    },
    /// Tame Hilbert symbol exponent.
    Hilbert {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// σ_D on two torus elements given as comma-separated tame elements.
    Sigma {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// The distinguished character on y_i(a), as a μ_4 exponent.
    Distinguished {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
enum LiftCmd {
    /// Parameters of the theta lift from rank m to rank n.
    Theta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        params: String,
    },
    /// Shimura squaring.
    Square {
        #[arg(long)]
        params: String,
    },
    /// Arthur composition with S_{2k}.
    Arthur {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        params: String,
    },
    /// Temperedness; exit 1 when not tempered.
    Tempered {
        #[arg(long)]
        params: String,
    },
    /// Equality up to inversion classes; exit 1 when not equivalent.
    Equivalent {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Exceptionality of a character; defaults to χ_Θ. Exit 1 when not exceptional.
    Exceptional {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 4)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        exponents: Option<String>,
    },
    /// CAP triple datum.
    Cap {
        #[arg(long)]
        m: usize,
        #[arg(long = "n-pi")]
        n_pi: usize,
        #[arg(long)]
        n: usize,
    },
}

/// Usage or input failure, reported with exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Usage {
        Usage(e.to_string())
    }
}

/// Result of a subcommand: the document to print and the verdict.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn new(text: impl Into<String>, json: Value, ok: bool) -> Outcome {
        Outcome {
            text: text.into(),
            json,
            ok,
        }
    }
}

type CmdResult = std::result::Result<Outcome, Usage>;

/// Adds the schema tag to an object, or wraps a non-object under "result".
pub fn with_schema(v: Value) -> Value {
    match v {
        Value::Object(mut m) => {
            let mut out = serde_json::Map::new();
            out.insert("schema".into(), json!(crate::SCHEMA));
            out.append(&mut m);
            Value::Object(out)
        }
        other => json!({ "schema": crate::SCHEMA, "result": other }),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output serializes")
}

fn dsl_error(input: &str, e: Error) -> Usage {
    match e {
        Error::Parse(p) => Usage(p.annotate(input)),
        other => Usage(other.to_string()),
    }
}

fn partition(text: &str) -> std::result::Result<SymplecticPartition, Usage> {
    let t = text.trim().trim_start_matches('[').trim_end_matches(']');
    t.parse::<SymplecticPartition>().map_err(Usage::from)
}

fn rationals(text: &str) -> std::result::Result<Vec<Rational>, Usage> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| exact::parse_rational(s).ok_or_else(|| Usage(format!("not a rational: {s:?}"))))
        .collect()
}

fn param_set(text: &str) -> std::result::Result<ParamSet, Usage> {
    serde_json::from_str(text).map_err(|e| Usage(format!("parameter set: {e}")))
}

fn root_set(text: &str, rank: usize) -> std::result::Result<RootGroupSet, Usage> {
    let roots = dsl::parse_root_list(text, Some(rank)).map_err(|e| Usage(e.annotate(text)))?;
    if roots.is_empty() {
        return Ok(RootGroupSet::empty(rank));
    }
    RootGroupSet::new(rank, roots).map_err(Usage::from)
}

fn state(s: &StateArgs) -> std::result::Result<(RootGroupSet, RootCharacter), Usage> {
    let c = root_set(&s.c, s.rank)?;
    let psi = dsl::parse_character(&s.psi, Some(s.rank), Some(c.roots().clone())).map_err(|e| dsl_error(&s.psi, e))?;
    Ok((c, psi))
}

fn root(text: &str, rank: usize) -> std::result::Result<crate::rootsys::Root, Usage> {
    dsl::parse_root(text, Some(rank)).map_err(|e| Usage(e.annotate(text)))
}

fn roots_text(roots: &BTreeSet<crate::rootsys::Root>) -> String {
    let v: Vec<String> = roots.iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn character_text(psi: &RootCharacter) -> String {
    psi.support()
        .iter()
        .map(|(a, c)| format!("{a}: {c}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn params_text(p: &ParamSet) -> String {
    let v: Vec<String> = p.entries.iter().map(|e| format!("q^{}·{}", e.s, e.u)).collect();
    format!("sign {}: [{}]", p.sign, v.join(", "))
}

fn orbit(cmd: &OrbitCmd) -> CmdResult {
    Ok(match cmd {
        OrbitCmd::Dim {
            partition: p,
            transpose,
        } => {
            let l = partition(p)?;
            let d = if *transpose {
                orbits::orbit_dimension_transpose(&l)
            } else {
                orbits::orbit_dimension(&l)
            };
            Outcome::new(d.to_string(), json!({ "orbit": l, "dimension": d }), true)
        }
        OrbitCmd::Gk { partition: p } => {
            let l = partition(p)?;
            let d = orbits::gk_dimension(&l);
            Outcome::new(
                d.to_string(),
                json!({ "orbit": l, "gk_dimension": d.to_string() }),
                true,
            )
        }
        OrbitCmd::H { partition: p } => {
            let l = partition(p)?;
            let h = orbits::h_of_orbit(&l);
            Outcome::new(format!("{h:?}"), json!({ "orbit": l, "h": h }), true)
        }
        OrbitCmd::Check { partition: p } => {
            let t = p.trim().trim_start_matches('[').trim_end_matches(']');
            match t.parse::<SymplecticPartition>() {
                Ok(l) => Outcome::new("symplectic", json!({ "orbit": l, "symplectic": true }), true),
                Err(Error::NotSymplectic(s)) => Outcome::new(
                    format!("{s} is not symplectic"),
                    json!({ "partition": s, "symplectic": false }),
                    false,
                ),
                Err(e) => return Err(e.into()),
            }
        }
        OrbitCmd::List { two_r } => {
            let all = orbits::enumerate_symplectic_partitions(*two_r)?;
            let text = all.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            Outcome::new(text, json!({ "two_r": two_r, "partitions": all }), true)
        }
        OrbitCmd::Compare { left, right } => {
            let (a, b) = (partition(left)?, partition(right)?);
            let d = orbits::dominance_compare(&a, &b)?;
            let name = format!("{d:?}").to_lowercase();
            Outcome::new(name.clone(), json!({ "left": a, "right": b, "dominance": name }), true)
        }
        OrbitCmd::NotBelow { partition: p } => {
            let l = partition(p)?;
            let v = orbits::orbits_not_below(&l);
            let text = v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            Outcome::new(text, json!({ "orbit": l, "not_below": v }), true)
        }
    })
}

fn cache_dir(explicit: &Option<PathBuf>) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| std::env::var_os("SYMPCAP_CACHE_DIR").map(PathBuf::from))
}

fn character(cmd: &CharacterCmd) -> CmdResult {
    Ok(match cmd {
        CharacterCmd::Generic(d) => {
            let l = partition(&d.partition)?;
            let psi = filtration::family_character(&l, &rationals(&d.data)?)?;
            Outcome::new(character_text(&psi), to_value(&psi), true)
        }
        CharacterCmd::Stabilizer(d) => {
            let l = partition(&d.partition)?;
            let psi = filtration::family_character(&l, &rationals(&d.data)?)?;
            let dim = filtration::stabilizer_dimension(&l, &psi)?;
            let generic = filtration::is_generic_character(&l, &psi)?;
            Outcome::new(
                dim.to_string(),
                json!({ "orbit": l, "stabilizer_dimension": dim, "generic": generic }),
                generic,
            )
        }
        CharacterCmd::Parse { partition: p, text } => {
            let l = partition(p)?;
            let carrier = filtration::v2_roots(&l);
            let psi = dsl::parse_character(&text.replace("\\n", "\n"), Some(l.rank()), Some(carrier))
                .map_err(|e| dsl_error(text, e))?;
            let generic = filtration::is_generic_character(&l, &psi)?;
            let mut v = to_value(&psi);
            v["generic"] = json!(generic);
            Outcome::new(character_text(&psi), v, true)
        }
        CharacterCmd::Split { eps, squares } => {
            let eps = rationals(eps)?;
            let field: Box<dyn FieldHandle> = match squares {
                Some(s) => Box::new(DeclaredSquares::new(rationals(s)?)?),
                None => Box::new(Rationals),
            };
            let v = filtration::split_form_check(&eps, field.as_ref())?;
            Outcome::new(
                v.to_string(),
                json!({ "field": field.name(), "verdict": v }),
                v == filtration::SplitVerdict::Split,
            )
        }
        CharacterCmd::Heisenberg { m, rank } => {
            let (dim, center) = filtration::heisenberg_quotient(*m, *rank)?;
            Outcome::new(
                format!("{dim} {center}"),
                json!({ "dimension": dim, "center": center }),
                true,
            )
        }
    })
}

fn run_corpus(run: &CorpusRun) -> CmdResult {
    let entries = corpus::load_corpus()?;
    let selected: Vec<&CorpusEntry> = match (&run.name, run.run_all) {
        (Some(n), _) => {
            let e = entries
                .iter()
                .find(|e| &e.name == n)
                .ok_or_else(|| Usage(format!("no corpus entry {n:?}")))?;
            vec![e]
        }
        (None, true) => entries.iter().collect(),
        (None, false) => return Err(Usage("pass --run-all or --name".into())),
    };
    let outcomes: Vec<EntryOutcome> = selected.iter().map(|e| e.run()).collect();
    let ok = outcomes.iter().all(EntryOutcome::as_expected);
    let text = outcomes
        .iter()
        .map(|o| {
            let verdict = if o.pass { "pass" } else { "fail" };
            let detail = match (&o.error, o.failed.is_empty()) {
                (Some(e), _) => format!(" ({e})"),
                (None, false) => format!(" (conditions {:?})", o.failed),
                _ => String::new(),
            };
            format!("{}: {verdict}{detail}", o.name)
        })
        .chain(std::iter::once(format!(
            "{} of {} as expected",
            outcomes.iter().filter(|o| o.as_expected()).count(),
            outcomes.len()
        )))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::new(
        text,
        json!({ "entries": outcomes, "all_as_expected": ok }),
        ok,
    ))
}

fn exchange_cmd(cmd: &ExchangeCmd) -> CmdResult {
    Ok(match cmd {
        ExchangeCmd::Triple {
            state: s,
            alpha,
            gamma,
            beta,
        } => {
            let (c, psi) = state(s)?;
            let t = ExchangeTriple::new(root(alpha, s.rank)?, root(gamma, s.rank)?, root(beta, s.rank)?);
            let rep = exchange::check_exchange_triple(&c, &psi, &t)?;
            let text = if rep.pass {
                "pass".to_string()
            } else {
                format!("fail\n{}", rep.violations.join("\n"))
            };
            Outcome::new(text, to_value(&rep), rep.pass)
        }
        ExchangeCmd::Quadruple { state: s, x, y } => {
            let (c, psi) = state(s)?;
            let rep = exchange::check_exchange_quadruple(&c, &psi, &root_set(x, s.rank)?, &root_set(y, s.rank)?)?;
            let text = if rep.pass {
                "pass".to_string()
            } else {
                format!("fail\n{}", rep.violations.join("\n"))
            };
            Outcome::new(text, to_value(&rep), rep.pass)
        }
        ExchangeCmd::Conjugate { state: s, word } => {
            let (c, psi) = state(s)?;
            let w: Vec<usize> = word
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Usage(format!("bad reflection index {t:?}")))
                })
                .collect::<std::result::Result<_, _>>()?;
            let w = WeylElement::from_word(&w, s.rank)?;
            let (c2, p2) = exchange::conjugate(&w, &c, &psi)?;
            let text = format!("C = {}\n{}", roots_text(c2.roots()), character_text(&p2));
            Outcome::new(text, json!({ "C": c2, "psi": p2 }), true)
        }
        ExchangeCmd::Corpus(run) => run_corpus(run)?,
    })
}

fn corpus_cmd(cmd: &CorpusCmd) -> CmdResult {
    Ok(match cmd {
        CorpusCmd::List => {
            let entries = corpus::load_corpus()?;
            let text = entries
                .iter()
                .map(|e| format!("{} (rank {})", e.name, e.rank))
                .collect::<Vec<_>>()
                .join("\n");
            let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
            Outcome::new(text, json!({ "names": names }), true)
        }
        CorpusCmd::Show { name } => {
            let entries = corpus::load_corpus()?;
            let e = entries
                .iter()
                .find(|e| &e.name == name)
                .ok_or_else(|| Usage(format!("no corpus entry {name:?}")))?;
            let v = to_value(e);
            Outcome::new(serde_json::to_string_pretty(&v).expect("serializes"), v, true)
        }
        CorpusCmd::Run(run) => run_corpus(run)?,
        CorpusCmd::Mutations { name } => {
            let entries = corpus::load_corpus()?;
            let e = entries
                .iter()
                .find(|e| &e.name == name)
                .ok_or_else(|| Usage(format!("no corpus entry {name:?}")))?;
            let all = e.mutations();
            let survivors: Vec<String> = all
                .iter()
                .filter(|(_, m)| m.run().pass)
                .map(|(d, _)| d.clone())
                .collect();
            let text = format!(
                "{} of {} mutations still pass\n{}",
                survivors.len(),
                all.len(),
                survivors.join("\n")
            );
            Outcome::new(
                text.trim_end().to_string(),
                json!({ "mutations": all.len(), "survivors": survivors }),
                survivors.is_empty(),
            )
        }
    })
}

fn tame_list(text: &str, f: &TameField) -> std::result::Result<Vec<TameElement>, Usage> {
    text.split(',')
        .map(|t| TameElement::parse(t, f).map_err(Usage::from))
        .collect()
}

fn cover_cmd(cmd: &CoverCmd) -> CmdResult {
    Ok(match cmd {
        CoverCmd::Lattice { rank, n } => {
            let l = cover::lattice_y_qn(&CoverDatum::standard(*rank, *n)?);
            let text = format!(
                "Y_Qn basis {:?}\nY_sc basis {:?}\n[Y : Y_Qn] = {}\n[Y_Qn : Y_sc] = {}",
                l.y_qn, l.y_sc, l.index_in_y, l.sc_index
            );
            Outcome::new(text, to_value(&l), true)
        }
        CoverCmd::Dual { rank, n } => {
            let d = cover::dual_root_datum(&CoverDatum::standard(*rank, *n)?);
            Outcome::new(
                format!("{}{} n_alpha {:?}", d.cartan_type, d.rank, d.n_alpha),
                to_value(&d),
                true,
            )
        }
        CoverCmd::Hilbert { field, x, y } => {
            let f = TameField::new(field.q, field.n)?;
            let e = cover::tame_hilbert(&TameElement::parse(x, &f)?, &TameElement::parse(y, &f)?, &f);
            Outcome::new(
                e.to_string(),
                json!({ "exponent": e, "zeta": f.zeta(), "field": f }),
                true,
            )
        }
        CoverCmd::Sigma { field, t, s } => {
            let f = TameField::new(field.q, field.n)?;
            let e = cover::sigma_d(&tame_list(t, &f)?, &tame_list(s, &f)?, &f)?;
            Outcome::new(e.to_string(), json!({ "exponent": e, "field": f }), true)
        }
        CoverCmd::Distinguished {
            field,
            sign,
            i,
            rank,
            a,
        } => {
            let f = TameField::new(field.q, field.n)?;
            let sign: Sign = sign.parse()?;
            let e = cover::distinguished_char_eval(sign, *i, *rank, &TameElement::parse(a, &f)?, &f)?;
            Outcome::new(e.to_string(), json!({ "exponent": e, "field": f }), true)
        }
    })
}

fn lift_cmd(cmd: &LiftCmd) -> CmdResult {
    let ps = |p: ParamSet| {
        let text = params_text(&p);
        Outcome::new(text, to_value(&p), true)
    };
    Ok(match cmd {
        LiftCmd::Theta { m, n, params: p } => ps(params::theta_lift_params(*m, *n, &param_set(p)?)?),
        LiftCmd::Square { params: p } => ps(params::shimura_square(&param_set(p)?)),
        LiftCmd::Arthur { k, params: p } => ps(params::arthur_compose(&param_set(p)?, *k)),
        LiftCmd::Tempered { params: p } => {
            let t = params::is_tempered(&param_set(p)?);
            Outcome::new(t.to_string(), json!({ "tempered": t }), t)
        }
        LiftCmd::Equivalent { left, right } => {
            let e = params::nearly_equivalent(&param_set(left)?, &param_set(right)?)?;
            Outcome::new(e.to_string(), json!({ "nearly_equivalent": e }), e)
        }
        LiftCmd::Exceptional { rank, n, exponents } => {
            let chi = match exponents {
                Some(e) => ExceptionalCharacter {
                    exponents: rationals(e)?,
                    sign: Sign::Plus,
                },
                None => params::chi_theta(*rank),
            };
            let rep = params::is_exceptional(&chi, &CoverDatum::standard(*rank, *n)?)?;
            let vals: Vec<String> = rep.values.iter().map(ToString::to_string).collect();
            Outcome::new(
                format!("{} [{}]", rep.exceptional, vals.join(", ")),
                to_value(&rep),
                rep.exceptional,
            )
        }
        LiftCmd::Cap { m, n_pi, n } => {
            let c = params::cap_triple(*m, *n_pi, *n);
            let ex: Vec<String> = c.exponents.iter().map(ToString::to_string).collect();
            Outcome::new(
                format!("{} {:?} [{}]", c.parabolic, c.base, ex.join(", ")),
                to_value(&c),
                true,
            )
        }
    })
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Orbit(c) => orbit(c),
        Command::Poset { two_r, cache_dir: dir } => {
            let p = OrbitPoset::load_or_build(*two_r, cache_dir(dir).as_deref())?;
            let text = p
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let below: Vec<String> = p
                        .covers
                        .iter()
                        .filter(|c| c[0] == i)
                        .map(|c| p.nodes[c[1]].to_string())
                        .collect();
                    format!("{n} covers {}", below.join(" "))
                })
                .collect::<Vec<_>>()
                .join("\n");
            let v: Value = serde_json::from_str(&p.to_json()).expect("poset JSON");
            Ok(Outcome::new(text, v, true))
        }
        Command::Filtration { partition: p } => {
            let l = partition(p)?;
            let g = filtration::grade_orbit(&l);
            let text = g
                .levels
                .iter()
                .map(|(k, v)| {
                    format!(
                        "{k}: {}",
                        v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::new(text, g.to_json(), true))
        }
        Command::Character(c) => character(c),
        Command::Exchange(c) => exchange_cmd(c),
        Command::Corpus(c) => corpus_cmd(c),
        Command::Cover(c) => cover_cmd(c),
        Command::Lift(c) => lift_cmd(c),
        Command::Dimeq { m, dim, min_n, max_n } => {
            let d = match dim {
                Some(t) => exact::parse_rational(t).ok_or_else(|| Usage(format!("not a rational: {t:?}")))?,
                None => exact::int((m * m) as i64),
            };
            let hi = max_n.unwrap_or(2 * m + 2);
            let rep = orbits::dimension_equation_solve(*m, &d, *min_n..=hi)?;
            let ok = !rep.solutions.is_empty();
            Ok(Outcome::new(format!("{:?}", rep.solutions), to_value(&rep), ok))
        }
    }
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli.command) {
        Ok(o) => {
            let printed = if cli.json {
                serde_json::to_string_pretty(&with_schema(o.json)).expect("serializes")
            } else {
                o.text
            };
            let _ = writeln!(out, "{printed}");
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
