//! The `tracecat` command line.
//!
//! Exit codes: 0 on success, 1 when a check fails or two machines differ,
//! 2 on usage, parse, shape and input errors. Diagnostics go to the error
//! stream.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::axioms::{check_all_axioms, check_all_laws, check_axiom, check_law, AxiomId, AxiomReport, Law};
use crate::category::{Morphism, TracedCategory};
use crate::diagram::workspace::{stoch_row_text, to_json_string, transducer_from_json};
use crate::diagram::{
    eval_term, parse_term, shape_check, InstanceKind, InstanceVisitor, IntoMorph, Morph, Term, Workspace,
};
use crate::error::Error;
use crate::finfun::pfn::token_path;
use crate::finfun::TokenExit;
use crate::games::{
    copycat_plays, format_play, interleaving_ok, par_hide, safety_check, unfold_g_plays, unfold_plays, Move,
    Play, PlaySet,
};
use crate::int::{check_all_g_laws, check_execution_formula, check_g_law, GLaw, GMorphism, GObject, Int};
use crate::object::ObjectExpr;
use crate::transducer::{bisim_equiv, circulate, minimize, orbit, LoopExit};

#[derive(Parser, Debug)]
#[command(
    name = "tracecat",
    version,
    about = "Traced monoidal categories, the Int construction and plays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a diagram term in a workspace.
    Eval(EvalArgs),
    /// Print the type `dom -> cod` of a term.
    Shape(TermArgs),
    /// Run the randomised law checks against an instance.
    Check(CheckArgs),
    /// Decide behavioural equivalence of two transducer files.
    Bisim { a: PathBuf, b: PathBuf },
    /// Enumerate plays of a transducer term, or of a copycat.
    Plays(PlaysArgs),
    /// Compose two play-set files by parallel composition plus hiding.
    ParHide {
        s: PathBuf,
        t: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Check that every play of a play set is allowed by a property.
    Safety { plays: PathBuf, property: PathBuf },
    /// Check a three-component play against the interleaving condition.
    Interleaving {
        /// Space-separated `component:polarity:label` moves.
        play: String,
    },
    /// Show each input's token path around the loop of `tr[U](t)`.
    TraceLog(TermArgs),
}

#[derive(Args, Debug)]
struct TermArgs {
    #[arg(long)]
    workspace: PathBuf,
    #[arg(long)]
    term: String,
    /// Must match the workspace's instance when given.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    term: TermArgs,
    /// A JSON array of input elements to run through the result.
    #[arg(long)]
    run: Option<PathBuf>,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Quotient a transducer result by bisimilarity.
    #[arg(long)]
    minimize: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    instance: String,
    /// An axiom or law name, or `all` (trace axioms), `laws`, `g-laws`, `everything`.
    #[arg(long, default_value = "all")]
    axiom: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PlaysArgs {
    #[arg(long)]
    workspace: PathBuf,
    #[arg(long, conflicts_with = "copycat", required_unless_present = "copycat")]
    term: Option<String>,
    /// Copycat plays on this object instead of a term.
    #[arg(long)]
    copycat: Option<String>,
    #[arg(long)]
    depth: usize,
    /// Read the term as a G-morphism from `POS,NEG` (objects like `X*Y` or `I`).
    #[arg(long, requires = "g_dst")]
    g_src: Option<String>,
    #[arg(long, requires = "g_src")]
    g_dst: Option<String>,
}

/// A command's outcome short of a usage error.
enum Outcome {
    Ok,
    Failed,
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn cli_main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

type CliResult = std::result::Result<Outcome, Error>;

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Validation(format!("cannot write output: {e}")))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Eval(a) => eval(a, out),
        Command::Shape(a) => {
            let (ws, t) = load_term(&a)?;
            let (dom, cod) = shape_check(&t, &ws)?;
            emit(out, &format!("{dom} -> {cod}\n"))?;
            Ok(Outcome::Ok)
        }
        Command::Check(a) => check(a, out),
        Command::Bisim { a, b } => {
            let f = transducer_from_json(&read(&a)?)?;
            let g = transducer_from_json(&read(&b)?)?;
            let r = bisim_equiv(&f, &g)?;
            match (r.equivalent, r.witness) {
                (true, _) => {
                    emit(out, "bisimilar\n")?;
                    Ok(Outcome::Ok)
                }
                (false, w) => {
                    let word: Vec<String> = w
                        .unwrap_or_default()
                        .iter()
                        .map(|&x| f.dom().union_label(x))
                        .collect();
                    let word = if word.is_empty() {
                        "ε".to_string()
                    } else {
                        word.join(" ")
                    };
                    emit(out, &format!("not bisimilar; witness: {word}\n"))?;
                    Ok(Outcome::Failed)
                }
            }
        }
        Command::Plays(a) => plays(a, out),
        Command::ParHide { s, t, depth } => {
            let s: PlaySet = read(&s)?.parse()?;
            let t: PlaySet = read(&t)?.parse()?;
            emit(out, &par_hide(&s, &t, depth)?.to_string())?;
            Ok(Outcome::Ok)
        }
        Command::Safety { plays, property } => {
            let s: PlaySet = read(&plays)?.parse()?;
            let p: PlaySet = read(&property)?.parse()?;
            match safety_check(&s, &p) {
                Ok(()) => {
                    emit(out, "safe\n")?;
                    Ok(Outcome::Ok)
                }
                Err(w) => {
                    emit(out, &format!("unsafe; witness: {}\n", format_play(&w)))?;
                    Ok(Outcome::Failed)
                }
            }
        }
        Command::Interleaving { play } => {
            let play = play
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<Play, Error>>()?;
            if let Some(m) = play.iter().find(|m: &&Move| !(1..=3).contains(&m.component)) {
                return Err(Error::Validation(format!(
                    "move {m} is not in component 1, 2 or 3"
                )));
            }
            let ok = interleaving_ok(&play);
            emit(out, if ok { "true\n" } else { "false\n" })?;
            Ok(if ok { Outcome::Ok } else { Outcome::Failed })
        }
        Command::TraceLog(a) => trace_log(a, out),
    }
}

fn load_term(a: &TermArgs) -> Result<(Workspace, Term), Error> {
    let ws = Workspace::from_json(&read(&a.workspace)?)?;
    if let Some(i) = &a.instance {
        let kind: InstanceKind = i.parse()?;
        if kind != ws.instance {
            return Err(Error::Validation(format!(
                "--instance {kind} does not match the workspace instance {}",
                ws.instance
            )));
        }
    }
    Ok((ws, parse_term(&a.term)?))
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> CliResult {
    let (ws, t) = load_term(&a.term)?;
    let mut m = eval_term(&t, &ws)?;
    if a.minimize {
        match &m {
            Morph::Transducer(t) => m = Morph::Transducer(minimize(t)),
            other => {
                return Err(Error::Unsupported(format!(
                    "--minimize applies to transducers, not {}",
                    other.kind()
                )))
            }
        }
    }
    if let Some(path) = &a.run {
        let inputs: Vec<String> = serde_json::from_str(&read(path)?)?;
        emit(out, &run_inputs(&m, &inputs)?)?;
    } else if a.json {
        emit(out, &(to_json_string(&m.to_json()) + "\n"))?;
    } else {
        emit(out, &m.to_text())?;
    }
    Ok(Outcome::Ok)
}

/// Feeds `inputs` to a morphism: a transducer runs them as one word, any
/// other morphism is applied to each element separately.
fn run_inputs(m: &Morph, inputs: &[String]) -> Result<String, Error> {
    let dom = m.dom();
    let mut text = String::new();
    if let Morph::Transducer(t) = m {
        let xs = inputs
            .iter()
            .map(|x| dom.union_index(x))
            .collect::<Result<Vec<_>, _>>()?;
        let o = orbit(t, &xs);
        let outs: Vec<String> = o.outputs().iter().map(|&y| t.cod().union_label(y)).collect();
        let states: Vec<&str> = o.states.iter().map(|&q| t.states()[q].as_str()).collect();
        text += &format!(
            "outputs:{}\n",
            outs.iter().map(|y| format!(" {y}")).collect::<String>()
        );
        text += &format!(
            "states:{}\n",
            states.iter().map(|q| format!(" {q}")).collect::<String>()
        );
        text += &format!("halted: {}\n", if o.halted { "yes" } else { "no" });
        return Ok(text);
    }
    for x in inputs {
        let line = match m {
            Morph::Pfn(_) | Morph::PInj(_) => {
                let f = m.as_pfn().expect("function table");
                match f.apply(dom.union_index(x)?) {
                    Some(y) => f.cod().union_label(y),
                    None => "undefined".to_string(),
                }
            }
            Morph::Rel(r) => {
                let img: Vec<String> = r
                    .image(dom.union_index(x)?)
                    .iter()
                    .map(|&y| r.cod().union_label(y))
                    .collect();
                format!("{{{}}}", img.join(", "))
            }
            Morph::Stoch(k) => stoch_row_text(k, dom.union_index(x)?),
            Morph::Cpo(f) => f.cod().product_label(f.apply(dom.product_index(x)?)),
            Morph::Transducer(_) => unreachable!(),
        };
        text += &format!("{x} -> {line}\n");
    }
    Ok(text)
}

struct Check<'a> {
    axiom: &'a str,
    samples: usize,
    seed: u64,
}

impl InstanceVisitor for Check<'_> {
    type Output = Result<Vec<AxiomReport>, Error>;

    fn visit<C: TracedCategory>(self, cat: &C) -> Self::Output
    where
        C::Mor: IntoMorph,
    {
        let (n, s) = (self.samples, self.seed);
        let int = Int { base: cat };
        Ok(match self.axiom {
            "all" => check_all_axioms(cat, n, s),
            "laws" => check_all_laws(cat, n, s),
            "g-laws" => check_all_g_laws(&int, n, s),
            "everything" => {
                let mut r = check_all_axioms(cat, n, s);
                r.extend(check_all_laws(cat, n, s));
                r.extend(check_all_g_laws(&int, n, s));
                r
            }
            name => {
                if let Some(a) = AxiomId::ALL.into_iter().find(|a| a.as_str() == name) {
                    vec![check_axiom(cat, a, n, s)]
                } else if let Some(l) = Law::ALL.into_iter().find(|l| l.as_str() == name) {
                    vec![check_law(cat, l, n, s)]
                } else if let Some(l) = GLaw::ALL.into_iter().find(|l| l.as_str() == name) {
                    vec![check_g_law(&int, l, n, s)]
                } else {
                    return Err(Error::Validation(format!(
                        "unknown axiom {name:?}; expected a trace axiom, a law, a G law, \
                         all, laws, g-laws, everything or g-execution-formula"
                    )));
                }
            }
        })
    }
}

fn check(a: CheckArgs, out: &mut dyn Write) -> CliResult {
    let kind: InstanceKind = a.instance.parse()?;
    let reports = if a.axiom == "g-execution-formula" {
        if kind != InstanceKind::PInj {
            return Err(Error::Unsupported(
                "g-execution-formula is defined for pinj only".into(),
            ));
        }
        vec![check_execution_formula(a.samples, a.seed)]
    } else {
        kind.visit(Check {
            axiom: &a.axiom,
            samples: a.samples,
            seed: a.seed,
        })?
    };
    let mut text = String::new();
    for r in &reports {
        text += &format!("{r}\n");
    }
    emit(out, &text)?;
    Ok(if reports.iter().all(AxiomReport::passed) {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

/// Parses `POS,NEG` where each side is `I` or `X*Y*…` over workspace wires.
fn g_object(text: &str, ws: &Workspace) -> Result<GObject, Error> {
    let side = |s: &str| -> Result<ObjectExpr, Error> {
        let s = s.trim();
        if s == "I" {
            return Ok(ObjectExpr::unit());
        }
        let names: Vec<String> = s.split('*').map(|n| n.trim().to_string()).collect();
        ws.object(&crate::diagram::ObjRef(names))
    };
    let (p, n) = text
        .split_once(',')
        .ok_or_else(|| Error::Validation(format!("expected POS,NEG, got {text:?}")))?;
    Ok(GObject::new(side(p)?, side(n)?))
}

fn plays(a: PlaysArgs, out: &mut dyn Write) -> CliResult {
    let ws = Workspace::from_json(&read(&a.workspace)?)?;
    if ws.instance != InstanceKind::Transducer {
        return Err(Error::Unsupported(format!(
            "plays needs a transducer workspace, not {}",
            ws.instance
        )));
    }
    let set = if let Some(obj) = &a.copycat {
        match (&a.g_src, &a.g_dst) {
            (Some(_), _) | (_, Some(_)) => {
                return Err(Error::Unsupported(
                    "--copycat takes a plain object; use a sym term for G".into(),
                ))
            }
            _ => copycat_plays(&g_object(&format!("{obj},I"), &ws)?.pos, a.depth),
        }
    } else {
        let t = parse_term(a.term.as_deref().expect("clap requires --term"))?;
        let Morph::Transducer(m) = eval_term(&t, &ws)? else {
            unreachable!()
        };
        match (&a.g_src, &a.g_dst) {
            (Some(s), Some(d)) => {
                let g = GMorphism::new(g_object(s, &ws)?, g_object(d, &ws)?, m)?;
                unfold_g_plays(&g, a.depth)
            }
            _ => unfold_plays(&m, a.depth),
        }
    };
    emit(out, &set.to_string())?;
    Ok(Outcome::Ok)
}

fn trace_log(a: TermArgs, out: &mut dyn Write) -> CliResult {
    let (ws, t) = load_term(&a)?;
    let Term::Trace(u, body) = &t else {
        return Err(Error::Validation(format!(
            "trace-log needs a term of the form tr[U](t), got `{t}`"
        )));
    };
    let (a_obj, b_obj) = shape_check(&t, &ws)?;
    let u_obj = ws.object(u)?;
    let (na, nb) = (a_obj.union_size(), b_obj.union_size());
    let ulabel = |i: usize| u_obj.union_label(i);
    let mut text = String::new();
    match eval_term(body, &ws)? {
        m @ (Morph::Pfn(_) | Morph::PInj(_)) => {
            let f = m.as_pfn().expect("function table");
            for x in 0..na {
                let p = token_path(f, na, nb, x);
                let mut hops = vec![a_obj.union_label(x)];
                hops.extend(p.loop_elems.iter().map(|&u| ulabel(u)));
                hops.push(match p.exit {
                    TokenExit::Exit(y) => b_obj.union_label(y),
                    TokenExit::Stuck => "stuck".into(),
                    TokenExit::Cycle => "cycle".into(),
                });
                text += &format!("{}\n", hops.join(" -> "));
            }
        }
        Morph::Transducer(f) => {
            for q in 0..f.num_states() {
                for x in 0..na {
                    let (steps, exit) = circulate(&f, na, nb, q, x);
                    let mut hops = vec![format!("{} {}", f.states()[q], a_obj.union_label(x))];
                    hops.extend(
                        steps
                            .iter()
                            .map(|s| format!("{}@{}", ulabel(s.feedback), f.states()[s.state])),
                    );
                    hops.push(match exit {
                        LoopExit::Exit { output, state } => {
                            format!("{}@{}", b_obj.union_label(output), f.states()[state])
                        }
                        LoopExit::Stuck => "stuck".into(),
                        LoopExit::Cycle => "cycle".into(),
                    });
                    text += &format!("{}\n", hops.join(" -> "));
                }
            }
        }
        other => {
            return Err(Error::Unsupported(format!(
                "trace-log follows single tokens; {} is not deterministic",
                other.kind()
            )))
        }
    }
    emit(out, &text)?;
    Ok(Outcome::Ok)
}
