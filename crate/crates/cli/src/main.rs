use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use roadsync::composer::{run_composition, verify_c1_c2_c3_with, BatchInput, Composition, Preprocessed};
use roadsync::graph::parse_graph_and_colors;
use roadsync::letters::render_word;
use roadsync::reduction::{augment_tautologies, build_reduction, verify_reduction, Cnf3};
use roadsync::srcp::{kernelize, srcp_decide, srcp_oracle_with, srcp_search, DEFAULT_MAX_COLORINGS};
use roadsync::srcpw::{decide_with_witness, k3_witness, srcp_k3_decide, FixedWordClass};
use roadsync::sync::{is_synchronizing, pin_bound, shortest_reset_word, syn_decide};
use roadsync::{cerny_automaton, Coloring, Dfa, Error, Multigraph, Word};

#[derive(Parser)]
#[command(name = "roadsync", version, about = "Reset words, road colorings and their reductions")]
struct Cli {
    /// Print one JSON object {answer, witness_word, witness_coloring, report}.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronization of a single automaton.
    #[command(subcommand)]
    Sync(SyncCmd),
    /// Road colorings with a reset word of bounded length.
    #[command(subcommand)]
    Srcp(SrcpCmd),
    /// Out-degree 2 graphs synchronized by one fixed word of length 3.
    #[command(subcommand)]
    Srcpw(SrcpwCmd),
    /// Write instances to files.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Check constructions end to end on small inputs.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Convert to other formats.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Subcommand)]
enum SyncCmd {
    /// YES if some word resets the automaton (of length <= --limit if given).
    Check(SyncArgs),
    /// Length and word of the lexicographically least shortest reset word.
    Shortest(SyncArgs),
}

#[derive(Args)]
struct SyncArgs {
    /// Automaton in the `dfa` format; `-` reads stdin.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    limit: Option<usize>,
    /// Largest automaton the subset search accepts.
    #[arg(long, default_value_t = 64)]
    max_states: usize,
}

#[derive(Subcommand)]
enum SrcpCmd {
    /// YES if some coloring has a reset word of length <= k.
    Decide(SrcpArgs),
    /// Shrink the out-degree to at most t * (z(t) - 1).
    Kernel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The polynomial decision for out-degree 2 and k = 3.
    K3 {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct SrcpArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// Enumerate every coloring instead of searching.
    #[arg(long)]
    oracle: bool,
    /// Cap on colorings enumerated by --oracle.
    #[arg(long, default_value_t = DEFAULT_MAX_COLORINGS)]
    max_colorings: u128,
    /// Workers for --oracle; the answer does not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum SrcpwCmd {
    /// Membership in the class of one word: aaa, aab, aba or abb.
    Decide {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        word: FixedWordClass,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// The Cerny automaton with n states.
    Cerny {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose a batch of instances into one automaton.
    Compose {
        #[arg(long)]
        batch: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file with state and letter names.
        #[arg(long)]
        names: Option<PathBuf>,
    },
    /// The out-degree 2 graph of a 3-CNF formula (k = 4).
    SatReduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        names: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check C1, C2 and C3 of the composed automaton by enumeration.
    Compose {
        #[arg(long)]
        batch: PathBuf,
        /// Cap on the words enumerated.
        #[arg(long, default_value_t = roadsync::composer::MAX_VERIFY_WORDS)]
        max_words: u128,
    },
    /// Build the graph of a formula and check the reduction.
    SatReduce {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    /// Graphviz DOT for a graph, a colored graph or an automaton.
    Dot {
        #[arg(long = "in")]
        input: PathBuf,
        /// JSON names file as written by `gen`.
        #[arg(long)]
        names: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced. `lines` is the plain-text form.
#[derive(Default)]
struct Output {
    answer: Option<bool>,
    lines: Vec<String>,
    /// Summary lines; they go to stderr when a file body goes to stdout.
    notes: Vec<String>,
    /// A file body was printed to stdout.
    body_on_stdout: bool,
    witness_word: Option<Word>,
    witness_coloring: Option<Coloring>,
    report: Option<Value>,
    /// Exit with status 1 after printing (a failed verification).
    failed: bool,
}

impl Output {
    fn answer(answer: bool) -> Self {
        Output { answer: Some(answer), lines: vec![yes_no(answer).into()], ..Default::default() }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or appends it to the printed lines.
fn emit(out: &Option<PathBuf>, text: &str, o: &mut Output) -> CliResult<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            o.body_on_stdout = true;
            o.lines.extend(text.lines().map(String::from));
            Ok(())
        }
    }
}

fn read_dfa(path: &Path) -> CliResult<Dfa> {
    Ok(Dfa::parse(&read(path)?)?)
}

fn read_graph(path: &Path) -> CliResult<Multigraph> {
    Ok(parse_graph_and_colors(&read(path)?)?.0)
}

fn sync_cmd(cmd: SyncCmd) -> CliResult<Output> {
    let (args, shortest) = match cmd {
        SyncCmd::Check(a) => (a, false),
        SyncCmd::Shortest(a) => (a, true),
    };
    let a = read_dfa(&args.input)?;
    if (shortest || args.limit.is_some()) && a.t() > args.max_states {
        return Err(Error::SizeLimit(format!(
            "{} states, more than --max-states {}",
            a.t(),
            args.max_states
        ))
        .into());
    }
    if !shortest {
        let answer = match args.limit {
            Some(k) => syn_decide(&a, k),
            None => is_synchronizing(&a),
        };
        return Ok(Output::answer(answer));
    }
    Ok(match shortest_reset_word(&a, args.limit) {
        Some(w) => Output {
            answer: Some(true),
            lines: vec![w.len().to_string(), render_word(&w, a.alphabet_size())],
            witness_word: Some(w),
            ..Default::default()
        },
        None => Output::answer(false),
    })
}

fn push_witness(o: &mut Output, g: &Multigraph, c: Coloring, word: Option<(Word, usize)>) -> CliResult<()> {
    if let Some((w, letters)) = word {
        o.lines.push(format!("word {}", render_word(&w, letters)));
        o.witness_word = Some(w);
    }
    o.lines.extend(g.to_text_with_coloring(&c)?.lines().map(String::from));
    o.witness_coloring = Some(c);
    Ok(())
}

fn srcp_cmd(cmd: SrcpCmd) -> CliResult<Output> {
    match cmd {
        SrcpCmd::Decide(args) => {
            let g = read_graph(&args.input)?;
            let d = g.out_degree_uniform().unwrap_or(0);
            if args.oracle {
                let found = srcp_oracle_with(&g, args.k, args.max_colorings, args.threads)?;
                let mut o = Output::answer(found.is_some());
                if let Some((c, w)) = found {
                    push_witness(&mut o, &g, c, Some((w, d)))?;
                }
                return Ok(o);
            }
            let answer = srcp_decide(&g, args.k)?;
            let mut o = Output::answer(answer);
            // Below z(t) the exact search also yields a witness.
            if answer && (args.k as u64) < pin_bound(g.t() as u64) {
                if let Some(w) = srcp_search(&g, args.k)? {
                    push_witness(&mut o, &g, w.coloring, Some((w.word, d)))?;
                }
            }
            Ok(o)
        }
        SrcpCmd::Kernel { input, k, out } => {
            let g = read_graph(&input)?;
            let kern = kernelize(&g, k)?;
            let mut o = Output {
                answer: kern.resolved,
                report: Some(json!({
                    "k": kern.k,
                    "t": kern.graph.t(),
                    "out_degree": kern.graph.out_degree_uniform(),
                    "resolved": kern.resolved,
                    "aperiodicity_preserved": kern.aperiodicity_preserved,
                })),
                ..Default::default()
            };
            if let Some(r) = kern.resolved {
                o.notes.push(yes_no(r).into());
            }
            o.notes.push(format!("k {}", kern.k));
            emit(&out, &kern.graph.to_text()?, &mut o)?;
            Ok(o)
        }
        SrcpCmd::K3 { input } => {
            let g = read_graph(&input)?;
            let answer = srcp_k3_decide(&g)?;
            let mut o = Output::answer(answer);
            if let Some((c, class)) = k3_witness(&g)? {
                push_witness(&mut o, &g, c, Some((class.word().to_vec(), 2)))?;
            }
            Ok(o)
        }
    }
}

fn srcpw_cmd(cmd: SrcpwCmd) -> CliResult<Output> {
    let SrcpwCmd::Decide { input, word } = cmd;
    let g = read_graph(&input)?;
    let found = decide_with_witness(&g, word)?;
    let mut o = Output::answer(found.is_some());
    if let Some(c) = found {
        push_witness(&mut o, &g, c, Some((word.word().to_vec(), 2)))?;
    }
    Ok(o)
}

fn names_json(states: &[String], letters: Option<&[String]>, extra: Value) -> String {
    let mut v = json!({ "states": states });
    if let Some(l) = letters {
        v["letters"] = json!(l);
    }
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    serde_json::to_string_pretty(&v).expect("plain JSON") + "\n"
}

fn gen_cmd(cmd: GenCmd) -> CliResult<Output> {
    let mut o = Output::default();
    match cmd {
        GenCmd::Cerny { n, out } => {
            emit(&out, &cerny_automaton(n)?.to_text(), &mut o)?;
        }
        GenCmd::Compose { batch, out, names } => {
            let raw = BatchInput::parse(&read(&batch)?)?;
            match run_composition(&raw)? {
                Composition::Trivial { answer, dfa, d } => {
                    o.answer = Some(answer);
                    o.notes.push(format!("settled early: {}", yes_no(answer)));
                    o.notes.push(format!("bound {d}"));
                    o.report = Some(
                        json!({ "states": dfa.t(), "letters": dfa.alphabet_size(), "bound": d, "early": true }),
                    );
                    if let Some(p) = &names {
                        let states: Vec<String> = (1..=dfa.t()).map(|s| s.to_string()).collect();
                        write(p, &names_json(&states, None, json!({ "bound": d })))?;
                    }
                    emit(&out, &dfa.to_text(), &mut o)?;
                }
                Composition::Composed(ca) => {
                    o.notes.push(format!(
                        "{} states, {} letters, bound {}",
                        ca.dfa.t(),
                        ca.dfa.alphabet_size(),
                        ca.d_prime
                    ));
                    o.report = Some(json!({
                        "states": ca.dfa.t(),
                        "letters": ca.dfa.alphabet_size(),
                        "bound": ca.d_prime,
                        "early": false,
                    }));
                    if let Some(p) = &names {
                        write(
                            p,
                            &names_json(
                                &ca.state_names,
                                Some(&ca.letter_names),
                                json!({ "bound": ca.d_prime }),
                            ),
                        )?;
                    }
                    emit(&out, &ca.dfa.to_text(), &mut o)?;
                }
            }
        }
        GenCmd::SatReduce { input, out, names } => {
            let f = augment_tautologies(&Cnf3::parse_dimacs(&read(&input)?)?);
            let rg = build_reduction(&f)?;
            o.notes.push(format!("{} vertices, k 4", rg.graph.t()));
            o.report = Some(json!({ "vertices": rg.graph.t(), "k": 4, "clauses": f.m() }));
            if let Some(p) = &names {
                write(p, &names_json(&rg.names, None, json!({ "k": 4 })))?;
            }
            emit(&out, &rg.graph.to_text()?, &mut o)?;
        }
    }
    Ok(o)
}

fn verify_cmd(cmd: VerifyCmd) -> CliResult<Output> {
    match cmd {
        VerifyCmd::Compose { batch, max_words } => {
            let raw = BatchInput::parse(&read(&batch)?)?;
            let composed = match run_composition(&raw)? {
                Composition::Trivial { answer, .. } => {
                    let mut o = Output::answer(answer);
                    o.lines.push("settled before composing".into());
                    o.report = Some(json!({ "early": true }));
                    return Ok(o);
                }
                Composition::Composed(ca) => ca,
            };
            let Preprocessed::Batch(b) = roadsync::composer::preprocess(&raw)? else {
                unreachable!("composition ran");
            };
            let r = verify_c1_c2_c3_with(&composed, &b, max_words)?;
            let mut o = Output::answer(r.composed);
            o.lines.extend([
                format!("c1 {}", r.c1),
                format!("c2 {}", r.c2),
                format!("c3 {}", r.c3),
                format!("items {}", yes_no(r.expected)),
                format!("reset words of length {} {}", composed.d_prime, r.reset_words_found),
                format!("assembled words {}", r.assembled_words),
            ]);
            o.failed = !r.all_hold();
            o.report = Some(json!({
                "c1": r.c1,
                "c2": r.c2,
                "c3": r.c3,
                "expected": r.expected,
                "composed": r.composed,
                "reset_words_found": r.reset_words_found,
                "assembled_words": r.assembled_words,
                "all_hold": r.all_hold(),
            }));
            Ok(o)
        }
        VerifyCmd::SatReduce { input } => {
            let f = Cnf3::parse_dimacs(&read(&input)?)?;
            let r = verify_reduction(&f)?;
            let mut o = Output::answer(r.srcp);
            o.lines.extend([
                format!("vertices {}", r.vertices),
                format!("satisfiable {}", r.satisfiable),
                format!("size {}", r.size_ok),
                format!("degree {}", r.degree_ok),
                format!("literal edges {}", r.literal_edges_ok),
                format!("strongly connected {}", r.strongly_connected),
                format!("D4 not 3-reachable {}", r.d4_not_3_reachable),
                format!("D4 only common 4-target {}", r.d4_only_common_4_target),
                format!("reset shapes {}", r.reset_shapes.join(" ")),
            ]);
            if let Some(w) = r.witness_ok {
                o.lines.push(format!("witness {w}"));
            }
            if let Some(d) = r.d_rigid {
                o.lines.push(format!("D part rigid {d}"));
            }
            o.failed = !r.all_hold();
            o.report = Some(json!({
                "vertices": r.vertices,
                "satisfiable": r.satisfiable,
                "srcp": r.srcp,
                "size_ok": r.size_ok,
                "degree_ok": r.degree_ok,
                "literal_edges_ok": r.literal_edges_ok,
                "strongly_connected": r.strongly_connected,
                "d4_not_3_reachable": r.d4_not_3_reachable,
                "d4_only_common_4_target": r.d4_only_common_4_target,
                "reset_shapes": r.reset_shapes,
                "witness_ok": r.witness_ok,
                "d_rigid": r.d_rigid,
                "all_hold": r.all_hold(),
            }));
            Ok(o)
        }
    }
}

fn read_names(path: &Path) -> CliResult<Vec<String>> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Lib(Error::Invalid(format!("{}: {e}", path.display()))))?;
    let list = v.get("states").unwrap_or(&v);
    list.as_array()
        .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| {
            Failure::Lib(Error::Invalid("names file needs a list of strings under `states`".into()))
        })
}

fn export_cmd(cmd: ExportCmd) -> CliResult<Output> {
    let ExportCmd::Dot { input, names, out } = cmd;
    let text = read(&input)?;
    let (g, c) = if text.lines().any(|l| l.trim_start().starts_with("dfa")) {
        // An automaton is a graph whose slot j carries letter j.
        let a = Dfa::parse(&text)?;
        let g = Multigraph::new((0..a.t()).map(|s| a.row(s)).collect())?;
        let c = Coloring::identity(a.t(), a.alphabet_size());
        (g, Some(c))
    } else {
        parse_graph_and_colors(&text)?
    };
    let names = names.map(|p| read_names(&p)).transpose()?;
    if let Some(n) = &names {
        if n.len() != g.t() {
            return Err(Error::Invalid(format!("{} names for {} vertices", n.len(), g.t())).into());
        }
    }
    let mut o = Output::default();
    emit(&out, &g.to_dot(c.as_ref(), names.as_deref()), &mut o)?;
    Ok(o)
}

/// Prints to stdout, stopping quietly if the reader has gone away.
fn print_lines(lines: &[String]) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    for l in lines {
        if writeln!(out, "{l}").is_err() {
            return;
        }
    }
}

fn run(cli: Cli) -> CliResult<Output> {
    match cli.command {
        Command::Sync(c) => sync_cmd(c),
        Command::Srcp(c) => srcp_cmd(c),
        Command::Srcpw(c) => srcpw_cmd(c),
        Command::Gen(c) => gen_cmd(c),
        Command::Verify(c) => verify_cmd(c),
        Command::Export(c) => export_cmd(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(o) => {
            if json {
                let v = json!({
                    "answer": o.answer,
                    "witness_word": o.witness_word,
                    "witness_coloring": o.witness_coloring.as_ref().map(|c| c.slot_letters().to_vec()),
                    "report": o.report,
                });
                print_lines(&[v.to_string()]);
            } else {
                if o.body_on_stdout {
                    for n in &o.notes {
                        eprintln!("{n}");
                    }
                } else {
                    print_lines(&o.notes);
                }
                print_lines(&o.lines);
            }
            if o.failed {
                eprintln!("verification failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::SizeLimit(_)) { 2 } else { 1 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
