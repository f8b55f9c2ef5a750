//! `cdesc` — batch front door for the cubical descent engine.
//!
//! Loads a fixture document, runs one command against it, and prints a
//! deterministic report: identical fixture, options, and seed yield
//! byte-identical output.  Exit status 0 means every requested check
//! passed; 1 means some check failed; 2 means the invocation or the
//! fixture could not be processed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use cdesc_core::fixture::{load_fixture, resolve, Bundle};
use cdesc_core::gysin::{gysin_complex, sigma_label};
use cdesc_core::motive::{cone_classes, realize_e, MotiveClass};
use cdesc_core::verify::{
    axioms_suite, descent_suite, duality_suite, functoriality_suite, independence_suite,
    manin_suite, saturation_suite, splitting_suite, SuiteReport,
};

/// Exact verification engine for cubical descent data: motivic classes,
/// Gysin complexes, blow-up identities, and the descent axiom suite.
#[derive(Parser)]
#[command(name = "cdesc", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class of an atom or declared space: raw, reduced, realized
    Class {
        /// Registered atom or declared space to evaluate
        #[arg(long)]
        atom: String,
        #[command(flatten)]
        io: Io,
    },
    /// Print the Gysin complex of a bundled normal-crossings pair
    Gysin {
        /// Name of a bundled pair
        #[arg(long)]
        pair: String,
        #[command(flatten)]
        io: Io,
    },
    /// Euler characteristics of the open complement of a bundled pair
    Euler {
        /// Name of a bundled pair
        #[arg(long)]
        pair: String,
        #[command(flatten)]
        io: Io,
    },
    /// Cone classes chi_c = 1 + [Y]*L - [Y] and chi = 1 over a base atom
    Serre {
        /// Registered atom to take the cone over
        #[arg(long)]
        atom: String,
        #[command(flatten)]
        io: Io,
    },
    /// Run a verification suite against the fixture
    Verify {
        /// Which suite to run
        #[arg(value_enum)]
        target: Target,
        /// Restrict the manin target to one realized square
        #[arg(long)]
        square: Option<String>,
        /// Seed for the randomized suites
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Case count for the randomized suites
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[command(flatten)]
        io: Io,
    },
}

#[derive(Args)]
struct Io {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Fixture document to load
    fixture: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Axioms,
    Manin,
    Functoriality,
    Descent,
    Duality,
    Independence,
    Splitting,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Axioms => "axioms",
            Target::Manin => "manin",
            Target::Functoriality => "functoriality",
            Target::Descent => "descent",
            Target::Duality => "duality",
            Target::Independence => "independence",
            Target::Splitting => "splitting",
        }
    }
}

/// One finished command: what ran, on what, what came out.
#[derive(serde::Serialize)]
struct Report {
    command: &'static str,
    inputs: Value,
    results: Value,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let io = match &cli.command {
        Command::Class { io, .. }
        | Command::Gysin { io, .. }
        | Command::Euler { io, .. }
        | Command::Serre { io, .. }
        | Command::Verify { io, .. } => io,
    };
    let bundle = load(&io.fixture)?;
    let fixture_name = io.fixture.display().to_string();
    let format = io.format;

    let (report, text) = match cli.command {
        Command::Class { ref atom, .. } => class_command(&bundle, &fixture_name, atom)?,
        Command::Gysin { ref pair, .. } => gysin_command(&bundle, &fixture_name, pair)?,
        Command::Euler { ref pair, .. } => euler_command(&bundle, &fixture_name, pair)?,
        Command::Serre { ref atom, .. } => serre_command(&bundle, &fixture_name, atom)?,
        Command::Verify {
            target,
            ref square,
            seed,
            cases,
            ..
        } => verify_command(
            &bundle,
            &fixture_name,
            target,
            square.as_deref(),
            seed,
            cases,
        )?,
    };

    // A consumer that stops reading early (e.g. piping into `head`) closes
    // the pipe; that must end the run with the computed status, not a panic.
    if let Err(e) = emit(&report, &text, format) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(format!("error: cannot write report: {e}"));
        }
    }
    Ok(report.pass)
}

fn emit(report: &Report, text: &str, format: Format) -> std::io::Result<()> {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            out.write_all(text.as_bytes())?;
            writeln!(out, "result: {}", if report.pass { "PASS" } else { "FAIL" })?;
        }
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            out.write_all(s.as_bytes())?;
        }
    }
    out.flush()
}

fn load(path: &PathBuf) -> Result<Bundle, String> {
    let fixture = load_fixture(path).map_err(|e| format!("error: {e}"))?;
    resolve(&fixture).map_err(|issues| {
        let mut msg = format!("error: fixture {} failed validation:", path.display());
        for issue in &issues {
            let _ = write!(msg, "\n  - {issue}");
        }
        msg
    })
}

fn list(names: impl Iterator<Item = impl AsRef<str>>) -> String {
    let v: Vec<String> = names.map(|n| n.as_ref().to_string()).collect();
    if v.is_empty() {
        "(none)".into()
    } else {
        v.join(", ")
    }
}

fn class_command(bundle: &Bundle, fixture: &str, name: &str) -> Result<(Report, String), String> {
    let reg = &bundle.registry;
    let (kind, dim, raw) = if reg.contains(name) {
        let atom = reg.get(name).expect("atom present");
        ("atom", Some(atom.dim), MotiveClass::atom(name))
    } else if bundle.spaces.contains(name) {
        let raw = bundle
            .spaces
            .class_raw(reg, name)
            .map_err(|e| format!("error: {e}"))?;
        ("space", None, raw)
    } else {
        return Err(format!(
            "error: '{name}' is neither a registered atom nor a declared space\n  atoms: {}\n  spaces: {}",
            list(reg.names()),
            list(bundle.spaces.names()),
        ));
    };
    let reduced = bundle.relations.reduce(&raw);
    let e = realize_e(reg, &reduced).map_err(|e| format!("error: {e}"))?;

    let mut text = format!("fixture: {fixture}\nname: {name}\n");
    match dim {
        Some(d) => {
            let _ = writeln!(text, "kind: {kind} (dim {d})");
        }
        None => {
            let _ = writeln!(text, "kind: {kind}");
        }
    }
    let _ = writeln!(text, "class = {raw}");
    let _ = writeln!(text, "reduced = {reduced}");
    let _ = writeln!(text, "E = {e}");

    let mut results = Map::new();
    results.insert("name".into(), json!(name));
    results.insert("kind".into(), json!(kind));
    if let Some(d) = dim {
        results.insert("dim".into(), json!(d));
    }
    results.insert("class".into(), json!(raw.to_string()));
    results.insert("reduced".into(), json!(reduced.to_string()));
    results.insert("e_polynomial".into(), json!(e.to_string()));

    let report = Report {
        command: "class",
        inputs: json!({ "fixture": fixture, "atom": name }),
        results: Value::Object(results),
        pass: true,
    };
    Ok((report, text))
}

fn lookup_pair<'a>(
    bundle: &'a Bundle,
    name: &str,
) -> Result<&'a cdesc_core::gysin::SncPair, String> {
    bundle.pairs.get(name).ok_or_else(|| {
        format!(
            "error: no bundled pair named '{name}'\n  pairs: {}",
            list(bundle.pairs.keys())
        )
    })
}

fn gysin_command(bundle: &Bundle, fixture: &str, name: &str) -> Result<(Report, String), String> {
    let pair = lookup_pair(bundle, name)?;
    let g = gysin_complex(pair).map_err(|e| format!("error: {e}"))?;
    let euler_matches = g.euler() == pair.chi_open();
    let chi_open = bundle.relations.reduce(&pair.chi_open());
    let chi_c_open = bundle.relations.reduce(&pair.chi_c_open());

    let mut text = format!("fixture: {fixture}\npair: {name}\n");
    let _ = writeln!(text, "ambient: {} (dim {})", pair.ambient(), pair.dim());
    let _ = writeln!(text, "components: {}", pair.component_labels().join(", "));
    let _ = writeln!(text, "open part: {}", pair.open_part());
    let _ = writeln!(text, "strata:");
    let mut strata = Map::new();
    for (sigma, atom, d) in pair.strata_lattice() {
        let _ = writeln!(text, "  {} = {atom} (dim {d})", sigma_label(&sigma));
        strata.insert(sigma_label(&sigma), json!(atom));
    }
    let _ = writeln!(text, "levels:");
    let mut levels = Vec::new();
    for p in 0..=g.top_level() {
        let c = g.level_class(p);
        let _ = writeln!(text, "  G_{p} = {c}");
        levels.push(json!(c.to_string()));
    }
    let _ = writeln!(text, "gamma^2 = 0: ok");
    let _ = writeln!(
        text,
        "euler(G) = chi_open: {}",
        if euler_matches { "ok" } else { "FAIL" }
    );
    let _ = writeln!(text, "chi_open = {chi_open}");
    let _ = writeln!(text, "chi_c_open = {chi_c_open}");

    let report = Report {
        command: "gysin",
        inputs: json!({ "fixture": fixture, "pair": name }),
        results: json!({
            "ambient": pair.ambient(),
            "dim": pair.dim(),
            "open_part": pair.open_part(),
            "components": pair.component_labels(),
            "strata": Value::Object(strata),
            "levels": levels,
            "gamma_squared_zero": true,
            "euler_matches_chi_open": euler_matches,
            "chi_open": chi_open.to_string(),
            "chi_c_open": chi_c_open.to_string(),
        }),
        pass: euler_matches,
    };
    Ok((report, text))
}

fn euler_command(bundle: &Bundle, fixture: &str, name: &str) -> Result<(Report, String), String> {
    let pair = lookup_pair(bundle, name)?;
    let raw_open = pair.chi_open();
    let raw_c = pair.chi_c_open();
    let chi_open = bundle.relations.reduce(&raw_open);
    let chi_c_open = bundle.relations.reduce(&raw_c);

    let mut text = format!("fixture: {fixture}\npair: {name}\n");
    let _ = writeln!(text, "ambient: {} (dim {})", pair.ambient(), pair.dim());
    let _ = writeln!(text, "open part: {}", pair.open_part());
    let _ = writeln!(text, "chi_open = {chi_open}  (raw {raw_open})");
    let _ = writeln!(text, "chi_c_open = {chi_c_open}  (raw {raw_c})");

    let report = Report {
        command: "euler",
        inputs: json!({ "fixture": fixture, "pair": name }),
        results: json!({
            "ambient": pair.ambient(),
            "dim": pair.dim(),
            "open_part": pair.open_part(),
            "chi_open": chi_open.to_string(),
            "chi_open_raw": raw_open.to_string(),
            "chi_c_open": chi_c_open.to_string(),
            "chi_c_open_raw": raw_c.to_string(),
        }),
        pass: true,
    };
    Ok((report, text))
}

fn serre_command(bundle: &Bundle, fixture: &str, atom: &str) -> Result<(Report, String), String> {
    let reg = &bundle.registry;
    reg.get(atom).map_err(|_| {
        format!(
            "error: unknown atom '{atom}'\n  atoms: {}",
            list(reg.names())
        )
    })?;
    let cone = cone_classes(reg, &bundle.relations, atom).map_err(|e| format!("error: {e}"))?;
    let raw = MotiveClass::int(1)
        .add(&MotiveClass::atom(atom).twist(1))
        .sub(&MotiveClass::atom(atom));
    let e_c = realize_e(reg, &cone.chi_c).map_err(|e| format!("error: {e}"))?;
    let e_chi = realize_e(reg, &cone.chi).map_err(|e| format!("error: {e}"))?;
    let differ = cone.chi_c != cone.chi;
    let witness = cone.chi_c.sub(&cone.chi);

    let mut text = format!("fixture: {fixture}\natom: {atom}\n");
    let _ = writeln!(text, "chi_c = {}  (raw {raw})", cone.chi_c);
    let _ = writeln!(text, "chi = {}", cone.chi);
    let _ = writeln!(text, "E(chi_c) = {e_c}");
    let _ = writeln!(text, "E(chi) = {e_chi}");
    if differ {
        let _ = writeln!(
            text,
            "chi_c and chi differ in K0: yes (chi_c - chi = {witness})"
        );
    } else {
        let _ = writeln!(text, "chi_c and chi differ in K0: no");
    }

    let report = Report {
        command: "serre",
        inputs: json!({ "fixture": fixture, "atom": atom }),
        results: json!({
            "chi_c": cone.chi_c.to_string(),
            "chi_c_raw": raw.to_string(),
            "chi": cone.chi.to_string(),
            "e_chi_c": e_c.to_string(),
            "e_chi": e_chi.to_string(),
            "differ": differ,
            "difference": witness.to_string(),
        }),
        pass: true,
    };
    Ok((report, text))
}

fn verify_command(
    bundle: &Bundle,
    fixture: &str,
    target: Target,
    square: Option<&str>,
    seed: u64,
    cases: usize,
) -> Result<(Report, String), String> {
    if square.is_some() && target != Target::Manin {
        return Err("error: --square only applies to 'verify manin'".into());
    }
    let suites: Vec<SuiteReport> = match target {
        Target::Axioms => vec![axioms_suite(seed, cases), saturation_suite(seed, cases)],
        Target::Splitting => vec![splitting_suite(seed, cases)],
        Target::Functoriality => vec![functoriality_suite(bundle, seed, cases)],
        Target::Descent => vec![descent_suite(bundle)],
        Target::Duality => vec![duality_suite(bundle)],
        Target::Independence => vec![independence_suite(bundle)],
        Target::Manin => {
            let mut suite = manin_suite(bundle);
            if let Some(sq) = square {
                let wanted = format!("sequence:{sq}");
                suite.lines.retain(|l| l.name == wanted);
                if suite.lines.is_empty() {
                    return Err(format!(
                        "error: no realized square named '{sq}'\n  squares: {}",
                        list(bundle.squares.keys())
                    ));
                }
                suite.cases = 1;
            }
            vec![suite]
        }
    };
    let pass = suites.iter().all(|s| s.pass());

    let randomized = matches!(
        target,
        Target::Axioms | Target::Splitting | Target::Functoriality
    );
    let mut text = format!("fixture: {fixture}\n");
    if randomized {
        let _ = writeln!(
            text,
            "verify target: {} (seed {seed}, {cases} cases)",
            target.name()
        );
    } else {
        let _ = writeln!(text, "verify target: {}", target.name());
    }
    for s in &suites {
        let noun = if s.cases == 1 { "case" } else { "cases" };
        let _ = writeln!(text, "suite {}: {} {noun}", s.suite, s.cases);
        for l in &s.lines {
            if l.pass {
                let _ = writeln!(text, "  {} ok", l.name);
            } else {
                let _ = writeln!(text, "  {} FAIL: {}", l.name, l.detail);
            }
        }
    }

    let mut inputs = Map::new();
    inputs.insert("fixture".into(), json!(fixture));
    inputs.insert("target".into(), json!(target.name()));
    if let Some(sq) = square {
        inputs.insert("square".into(), json!(sq));
    }
    if randomized {
        inputs.insert("seed".into(), json!(seed));
        inputs.insert("cases".into(), json!(cases));
    }

    let report = Report {
        command: "verify",
        inputs: Value::Object(inputs),
        results: json!({ "suites": suites }),
        pass,
    };
    Ok((report, text))
}
