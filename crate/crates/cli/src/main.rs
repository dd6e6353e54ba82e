//! `handlebody`: classify free handlebody actions, build their closed
//! extensions, and compute first homology of the resulting manifolds.
//!
//! Exit status: 0 on success, 1 on domain errors, 2 on unreadable input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use handlebody_core::action::{actions_equivalent, classify_actions, ActionError, ClassifyOptions};
use handlebody_core::cover::{reidemeister_schreier, CoverError};
use handlebody_core::format::{read_action, read_diagram, read_group, read_presentation, InputError};
use handlebody_core::homology::{h1_from_presentation, AbelianGroupStructure, GroupPresentation};
use handlebody_core::hyperbolic::build_hyperbolic_diagram;
use handlebody_core::seifert::{build_seifert_extension, seifert_presentation, ExtensionError, ScriptStage, SeifertInvariants};
use handlebody_core::selftest::{run_all_with, DEFAULT_SEED};
use handlebody_core::surgery::{h1_from_surgery, SurgeryDiagram};
use handlebody_core::{Element, FiniteGroup, HandlebodyAction};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "handlebody", version, about = "Free finite group actions on handlebodies and their closed extensions")]
struct Cli {
    /// Write a JSON report to PATH ("-" for standard output, replacing the text report).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition generating tuples of a group into equivalence classes.
    Classify {
        #[arg(long, value_name = "FILE")]
        group: PathBuf,
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also identify tuples related by automorphisms of the group.
        /// This is coarser than equivalence of handlebody actions.
        #[arg(long)]
        aut: bool,
    },
    /// Decide whether two actions are equivalent and print a witness.
    Equivalent {
        #[arg(long = "action", value_name = "FILE", num_args = 1, required = true)]
        actions: Vec<PathBuf>,
    },
    /// Extend an action over a closed 3-manifold.
    Extend {
        #[command(subcommand)]
        kind: ExtendKind,
    },
    /// Same as `extend seifert`.
    #[command(name = "extend-seifert")]
    ExtendSeifert(SeifertArgs),
    /// Same as `extend hyperbolic`.
    #[command(name = "extend-hyperbolic")]
    ExtendHyperbolic(HyperbolicArgs),
    /// First homology of a presentation or a surgery diagram.
    Homology {
        #[arg(long, value_name = "FILE", conflicts_with = "diagram", required_unless_present = "diagram")]
        presentation: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        diagram: Option<PathBuf>,
    },
    /// Presentation and first homology of the regular cover.
    Cover {
        #[arg(long, value_name = "FILE")]
        action: PathBuf,
        /// Use the Seifert-fibered attaching words with this twist order.
        #[arg(long, conflicts_with = "presentation", required_unless_present = "presentation")]
        n: Option<u64>,
        #[arg(long, value_name = "FILE")]
        presentation: Option<PathBuf>,
        /// Include the rewritten relators in the report.
        #[arg(long)]
        relators: bool,
    },
    /// Run the acceptance grid.
    Selftest,
}

#[derive(Subcommand)]
enum ExtendKind {
    Seifert(SeifertArgs),
    Hyperbolic(HyperbolicArgs),
}

#[derive(Args)]
struct SeifertArgs {
    #[arg(long, value_name = "FILE")]
    action: PathBuf,
    #[arg(long)]
    n: u64,
    /// Show normalized invariants in the text report.
    #[arg(long)]
    normalized: bool,
}

#[derive(Args)]
struct HyperbolicArgs {
    #[arg(long, value_name = "FILE")]
    action: PathBuf,
    #[arg(long)]
    n: u64,
}

enum Failure {
    Input(String),
    Domain(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ExtensionError> for Failure {
    fn from(e: ExtensionError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<ActionError> for Failure {
    fn from(e: ActionError) -> Self {
        match e {
            ActionError::Group(_) | ActionError::Word(_) | ActionError::ImageCount { .. } | ActionError::NotGenerating => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Text for standard output and the JSON document.
struct Report {
    text: String,
    /// Serialized in struct field order.
    json: String,
    ok: bool,
}

fn report<T: Serialize>(text: String, json: &T) -> Report {
    Report { text, json: serde_json::to_string_pretty(json).expect("serializable") + "\n", ok: true }
}

#[derive(Serialize)]
struct H1 {
    text: String,
    #[serde(flatten)]
    structure: AbelianGroupStructure,
}

impl From<AbelianGroupStructure> for H1 {
    fn from(h: AbelianGroupStructure) -> Self {
        H1 { text: h.to_string(), structure: h }
    }
}

fn labels(group: &FiniteGroup, t: &[Element]) -> Vec<String> {
    t.iter().map(|&a| group.label(a)).collect()
}

fn classify(group: &Path, genus: usize, workers: usize, aut: bool) -> Result<Report, Failure> {
    #[derive(Serialize)]
    struct Class {
        representative: Vec<Element>,
        labels: Vec<String>,
        orbit_size: u64,
    }
    #[derive(Serialize)]
    struct Out {
        group_order: usize,
        genus: usize,
        equivalence: &'static str,
        class_count: usize,
        generating_tuples: u64,
        classes: Vec<Class>,
    }
    let g = read_group(group)?;
    let options = ClassifyOptions { workers: workers.max(1), coarsen_by_automorphisms: aut, ..Default::default() };
    let c = classify_actions(&g, genus, &options)?;
    let equivalence = if aut {
        "Nielsen moves and all automorphisms of G (coarser than equivalence of actions)"
    } else {
        "Nielsen moves and simultaneous conjugation"
    };
    let out = Out {
        group_order: g.order(),
        genus,
        equivalence,
        class_count: c.classes.len(),
        generating_tuples: c.generating_tuples,
        classes: c
            .classes
            .iter()
            .map(|k| Class {
                representative: k.representative.clone(),
                labels: labels(&g, &k.representative),
                orbit_size: k.orbit_size,
            })
            .collect(),
    };
    let mut text = format!(
        "{} equivalence class{} ({} generating tuple{})\n",
        out.class_count,
        if out.class_count == 1 { "" } else { "es" },
        out.generating_tuples,
        if out.generating_tuples == 1 { "" } else { "s" },
    );
    if aut {
        text.push_str("note: classes are taken up to automorphisms of the group\n");
    }
    for k in &out.classes {
        let idx: Vec<String> = k.representative.iter().map(|e| e.0.to_string()).collect();
        text.push_str(&format!("  [{}]  {}  orbit {}\n", idx.join(", "), k.labels.join(" "), k.orbit_size));
    }
    Ok(report(text, &out))
}

fn equivalent(paths: &[PathBuf]) -> Result<Report, Failure> {
    #[derive(Serialize)]
    struct Out {
        equivalent: bool,
        moves: Vec<String>,
        conjugator: Option<Element>,
        conjugator_label: Option<String>,
    }
    let [p1, p2] = paths else {
        return Err(Failure::Input(format!("expected exactly two --action files, got {}", paths.len())));
    };
    let (a1, a2) = (read_action(p1)?, read_action(p2)?);
    let out = match actions_equivalent(&a1, &a2)? {
        Some(w) => Out {
            equivalent: true,
            moves: w.moves.iter().map(ToString::to_string).collect(),
            conjugator: Some(w.conjugator),
            conjugator_label: Some(a1.group().label(w.conjugator)),
        },
        None => Out { equivalent: false, moves: Vec::new(), conjugator: None, conjugator_label: None },
    };
    let text = if out.equivalent {
        format!(
            "equivalent\nmoves: {}\nconjugator: {} ({})\n",
            if out.moves.is_empty() { "(none)".to_string() } else { out.moves.join(" ") },
            out.conjugator.expect("set").0,
            out.conjugator_label.as_deref().unwrap_or(""),
        )
    } else {
        "not equivalent\n".to_string()
    };
    Ok(report(text, &out))
}

#[derive(Serialize)]
struct PresentationOut {
    generators: usize,
    relators: Vec<String>,
}

impl From<&GroupPresentation> for PresentationOut {
    fn from(p: &GroupPresentation) -> Self {
        PresentationOut { generators: p.generator_count(), relators: p.relators().iter().map(ToString::to_string).collect() }
    }
}

fn extend_seifert(args: &SeifertArgs) -> Result<Report, Failure> {
    #[derive(Serialize)]
    struct Invariants<'a> {
        unnormalized: &'a SeifertInvariants,
        normalized: &'a SeifertInvariants,
    }
    #[derive(Serialize)]
    struct Out<'a> {
        g: usize,
        n: u64,
        group_order: usize,
        presentation: PresentationOut,
        induced_images: &'a [Element],
        script: &'a [ScriptStage],
        diagram: &'a SurgeryDiagram,
        invariants: Invariants<'a>,
        euler_number: String,
        h1: H1,
        cover_genus: i64,
    }
    let action = read_action(&args.action)?;
    let ext = build_seifert_extension(&action, args.n)?;
    let out = Out {
        g: action.quotient_genus(),
        n: ext.n,
        group_order: action.group().order(),
        presentation: (&ext.presentation).into(),
        induced_images: &ext.induced_images,
        script: &ext.script,
        diagram: &ext.diagram,
        invariants: Invariants { unnormalized: &ext.invariants_unnormalized, normalized: &ext.invariants_normalized },
        euler_number: ext.euler_number.to_string(),
        h1: ext.h1.clone().into(),
        cover_genus: ext.cover_genus,
    };
    let (which, inv) = if args.normalized {
        ("normalized", &ext.invariants_normalized)
    } else {
        ("unnormalized", &ext.invariants_unnormalized)
    };
    let mut text = format!("Seifert-fibered extension, g = {}, n = {}\n", out.g, out.n);
    text.push_str(&format!("relators: {}\n", out.presentation.relators.join(", ")));
    for stage in &ext.script {
        text.push_str(&format!("  {}: {}\n", stage.step, stage.coefficients.join(", ")));
    }
    text.push_str(&format!("invariants ({which}): {inv}\n"));
    text.push_str(&format!("euler number: {}\n", out.euler_number));
    text.push_str(&format!("H1(Y) = {}\n", out.h1.text));
    text.push_str(&format!("genus of the invariant handlebody: {}\n", out.cover_genus));
    Ok(report(text, &out))
}

fn extend_hyperbolic(args: &HyperbolicArgs) -> Result<Report, Failure> {
    let action = read_action(&args.action)?;
    let h = build_hyperbolic_diagram(&action, args.n)?;
    let mut text = format!("hyperbolic extension, g = {}, n = {}\n", h.g, h.n);
    for c in h.diagram.components() {
        text.push_str(&format!("  {}: {}\n", c.label, c.coefficient));
    }
    text.push_str(&format!("chain: {} (clasp {})\n", h.chain_order.join(" - "), h.clasp_component));
    text.push_str(&format!("cover degree: {}\n", h.cover_degree));
    text.push_str(&format!("note: {}\n", h.notice));
    Ok(report(text, &h))
}

fn homology(presentation: Option<&Path>, diagram: Option<&Path>) -> Result<Report, Failure> {
    #[derive(Serialize)]
    struct Out {
        source: &'static str,
        h1: H1,
        #[serde(skip_serializing_if = "Option::is_none")]
        determinant: Option<String>,
    }
    let out = match (presentation, diagram) {
        (Some(p), _) => Out { source: "presentation", h1: h1_from_presentation(&read_presentation(p)?).into(), determinant: None },
        (None, Some(d)) => {
            let d = read_diagram(d)?;
            Out {
                source: "diagram",
                h1: h1_from_surgery(&d).into(),
                determinant: Some(d.relation_matrix().determinant().to_string()),
            }
        }
        (None, None) => return Err(Failure::Input("need --presentation or --diagram".into())),
    };
    Ok(report(format!("H1 = {}\n", out.h1.text), &out))
}

fn cover(action: &Path, n: Option<u64>, presentation: Option<&Path>, relators: bool) -> Result<Report, Failure> {
    #[derive(Serialize)]
    struct Out {
        group_order: usize,
        base_generators: usize,
        base_relators: usize,
        generators: usize,
        relators: usize,
        tree_edges_removed: usize,
        handlebody_genus: i64,
        h1: H1,
        #[serde(skip_serializing_if = "Option::is_none")]
        relator_list: Option<Vec<String>>,
    }
    let a: HandlebodyAction = read_action(action)?;
    let base = match (n, presentation) {
        (_, Some(p)) => read_presentation(p)?,
        (Some(n), None) => seifert_presentation(a.quotient_genus(), n)?,
        (None, None) => return Err(Failure::Input("need --n or --presentation".into())),
    };
    let c = reidemeister_schreier(&base, &a)?;
    let p = &c.presentation;
    let out = Out {
        group_order: a.group().order(),
        base_generators: base.generator_count(),
        base_relators: base.relators().len(),
        generators: p.generator_count(),
        relators: p.relators().len(),
        tree_edges_removed: c.tree_edges_removed,
        handlebody_genus: a.total_genus(),
        h1: h1_from_presentation(p).into(),
        relator_list: relators.then(|| p.relators().iter().map(ToString::to_string).collect()),
    };
    let mut text = format!(
        "cover of degree {}: {} generators, {} relators\ngenus of the invariant handlebody: {}\nH1 = {}\n",
        out.group_order, out.generators, out.relators, out.handlebody_genus, out.h1.text
    );
    if let Some(list) = &out.relator_list {
        for r in list {
            text.push_str(&format!("  {r}\n"));
        }
    }
    Ok(report(text, &out))
}

fn selftest(seed: u64, echo: bool) -> Report {
    let mut text = String::new();
    let reports = run_all_with(seed, |r| {
        if echo {
            println!("{r}");
        } else {
            text.push_str(&format!("{r}\n"));
        }
    });
    let failed = reports.iter().filter(|r| !r.passed).count();
    let summary = format!("{} of {} criteria passed\n", reports.len() - failed, reports.len());
    if echo {
        print!("{summary}");
    } else {
        text.push_str(&summary);
    }
    let mut r = report(text, &reports);
    r.ok = failed == 0;
    r
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let json_to_stdout = cli.json.as_deref() == Some(Path::new("-"));
    match &cli.command {
        Command::Classify { group, genus, workers, aut } => classify(group, *genus, *workers, *aut),
        Command::Equivalent { actions } => equivalent(actions),
        Command::Extend { kind: ExtendKind::Seifert(a) } | Command::ExtendSeifert(a) => extend_seifert(a),
        Command::Extend { kind: ExtendKind::Hyperbolic(a) } | Command::ExtendHyperbolic(a) => extend_hyperbolic(a),
        Command::Homology { presentation, diagram } => homology(presentation.as_deref(), diagram.as_deref()),
        Command::Cover { action, n, presentation, relators } => cover(action, *n, presentation.as_deref(), *relators),
        Command::Selftest => Ok(selftest(cli.seed, !json_to_stdout)),
    }
}

fn emit(cli: &Cli, r: &Report) -> std::io::Result<()> {
    match cli.json.as_deref() {
        Some(p) if p == Path::new("-") => std::io::stdout().write_all(r.json.as_bytes()),
        Some(p) => {
            print!("{}", r.text);
            fs::write(p, &r.json)
        }
        None => {
            print!("{}", r.text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if let Err(e) = emit(&cli, &r) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
