use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use nonhaus_core::adjunction::{fmt_tuple, AdjunctionSystem};
use nonhaus_core::cochain::{assemble_global, integrate, integrate_by_classes, stokes_defect, GlobalCochain};
use nonhaus_core::cohomology::{
    build_bicomplex, de_rham_compare, euler_inclusion_exclusion, mv_report, total_betti, MvReport,
};
use nonhaus_core::document::{parse_system, CochainDocument};
use nonhaus_core::flavor::FlavorRegistry;
use nonhaus_core::geometry::{gauss_bonnet_report, validate_metric, GaussBonnetReport};
use nonhaus_core::rational::format_q;
use nonhaus_core::validation::ValidationReport;
use nonhaus_core::Error;

#[derive(Parser, Debug)]
#[command(name = "nonhaus", version, about = "Cohomology, integrals and curvature of glued cell complexes")]
struct Cli {
    /// Print the full report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Print nothing on success
    #[arg(long, global = true)]
    quiet: bool,

    /// Largest intersection arity used in bicomplexes
    #[arg(long, global = true, env = "NH_MAX_TUPLE")]
    max_tuple: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check complexes, gluing axioms, structural hypotheses and metrics
    Validate { system: PathBuf },
    /// List Hausdorff-violating pairs
    Hausdorff { system: PathBuf },
    /// Betti numbers of the total complex
    Betti {
        system: PathBuf,
        #[arg(long, default_value = "dr")]
        flavor: String,
    },
    /// Euler characteristic by inclusion-exclusion and from Betti numbers
    Euler { system: PathBuf },
    /// Integrate a top-degree cochain
    Integrate { system: PathBuf, cochain: PathBuf },
    /// Both sides of Stokes' formula with the frontier term
    StokesCheck { system: PathBuf, cochain: PathBuf },
    /// Mayer-Vietoris sequence of a binary system
    MvReport {
        system: PathBuf,
        #[arg(long, default_value = "dr")]
        flavor: String,
    },
    /// Compare the two flavors
    Compare { system: PathBuf },
    /// Gauss-Bonnet ledger with frontier counterterms
    GaussBonnet { system: PathBuf },
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    status: &'static str,
    payload: Value,
    diagnostics: Vec<String>,
}

enum Failure {
    Invalid(Value, Vec<String>),
    Precondition(String),
    Input(String),
}

impl Failure {
    fn status(&self) -> (&'static str, u8) {
        match self {
            Failure::Invalid(..) => ("invalid", 1),
            Failure::Precondition(_) => ("precondition-failed", 2),
            Failure::Input(_) => ("input-error", 3),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(r) => Failure::Invalid(Value::Null, issues(&r)),
            Error::Parse { .. } | Error::UnknownCell { .. } | Error::UnknownFlavor(_) => Failure::Input(e.to_string()),
            other => Failure::Precondition(other.to_string()),
        }
    }
}

/// Human-readable text and machine payload.
struct Output {
    text: String,
    payload: Value,
}

type Outcome = Result<Output, Failure>;

fn issues(r: &ValidationReport) -> Vec<String> {
    r.issues
        .iter()
        .map(|i| format!("[{}] {}: {}", i.rule, i.location, i.message))
        .collect()
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AdjunctionSystem, Failure> {
    let system = parse_system(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let report = system.validate();
    if !report.is_valid() {
        return Err(Failure::Invalid(Value::Null, issues(&report)));
    }
    Ok(system)
}

fn load_cochain(system: &AdjunctionSystem, path: &Path) -> Result<GlobalCochain, Failure> {
    let doc = CochainDocument::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let components = doc
        .to_components(system)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(assemble_global(system, components)?)
}

fn vector(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cmd_validate(path: &Path) -> Outcome {
    let system = parse_system(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut report = system.validate();
    let structural = report.is_valid();
    let metric = system.edge_lengths().is_some().then(|| validate_metric(&system));
    if let Some(m) = &metric {
        report.extend(m.clone());
    }
    let (closure, regular) = if structural {
        let c: serde_json::Map<String, Value> = system
            .closure_intersection_check()
            .into_iter()
            .map(|(t, ok)| (fmt_tuple(&t), json!(ok)))
            .collect();
        let r: serde_json::Map<String, Value> = system
            .regular_open_check()
            .into_iter()
            .map(|((i, j), ok)| (fmt_tuple(&[i, j]), json!(ok)))
            .collect();
        (Value::Object(c), Value::Object(r))
    } else {
        (Value::Null, Value::Null)
    };
    let payload = json!({
        "valid": report.is_valid(),
        "issues": report.issues,
        "closure_intersection": closure,
        "regular_open": regular,
        "metric_checked": metric.is_some(),
    });
    if !report.is_valid() {
        return Err(Failure::Invalid(payload, issues(&report)));
    }
    let mut text = format!("valid: {} pieces\n", system.len());
    if let Value::Object(c) = &payload["closure_intersection"] {
        for (t, ok) in c {
            text += &format!("closure-intersection {t}: {}\n", if ok.as_bool() == Some(true) { "holds" } else { "fails" });
        }
    }
    if let Value::Object(r) = &payload["regular_open"] {
        for (t, ok) in r {
            text += &format!("region {t} regular open: {}\n", ok.as_bool() == Some(true));
        }
    }
    Ok(Output { text, payload })
}

fn cmd_hausdorff(path: &Path) -> Outcome {
    let system = load(path)?;
    let pairs = system.hausdorff_pairs();
    let glued = system.glued_cell_classes().len();
    let closure = system.closure_cell_classes().len();
    let list: Vec<Value> = pairs
        .iter()
        .map(|p| {
            json!({
                "left": {"piece": p.left.0 + 1, "cell": p.left.1},
                "right": {"piece": p.right.0 + 1, "cell": p.right.1},
            })
        })
        .collect();
    let mut text = format!(
        "{} Hausdorff-violating pairs; {glued} glued classes, {closure} closure classes\n",
        pairs.len()
    );
    for p in &pairs {
        text += &format!("  ({}, {}) ~ ({}, {})\n", p.left.0 + 1, p.left.1, p.right.0 + 1, p.right.1);
    }
    Ok(Output {
        text,
        payload: json!({"pairs": list, "glued_classes": glued, "closure_classes": closure}),
    })
}

fn cmd_betti(path: &Path, flavor: &str, max_tuple: Option<usize>) -> Outcome {
    let registry = FlavorRegistry::default();
    let flavor = registry.get(flavor)?;
    let system = load(path)?;
    let betti = total_betti(&build_bicomplex(&system, flavor, max_tuple)?);
    Ok(Output {
        text: format!("betti ({}): {}\n", flavor.name(), vector(&betti)),
        payload: json!(betti),
    })
}

fn cmd_euler(path: &Path, max_tuple: Option<usize>) -> Outcome {
    let system = load(path)?;
    let formula = euler_inclusion_exclusion(&system);
    let registry = FlavorRegistry::default();
    let betti = total_betti(&build_bicomplex(&system, registry.get("sing")?, max_tuple)?);
    let alternating: i64 = betti
        .iter()
        .enumerate()
        .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    Ok(Output {
        text: format!(
            "inclusion-exclusion: {formula}\nalternating Betti sum (sing {}): {alternating}\nmatch: {}\n",
            vector(&betti),
            formula == alternating
        ),
        payload: json!({
            "inclusion_exclusion": formula,
            "betti": betti,
            "alternating_sum": alternating,
            "match": formula == alternating,
        }),
    })
}

fn cmd_integrate(path: &Path, cochain: &Path) -> Outcome {
    let system = load(path)?;
    let w = load_cochain(&system, cochain)?;
    let value = integrate(&system, &w)?;
    let direct = integrate_by_classes(&system, &w)?;
    Ok(Output {
        text: format!("integral: {}\nby classes: {}\n", format_q(&value), format_q(&direct)),
        payload: json!({
            "integral": format_q(&value),
            "by_classes": format_q(&direct),
            "match": value == direct,
        }),
    })
}

fn cmd_stokes(path: &Path, cochain: &Path) -> Outcome {
    let system = load(path)?;
    let w = load_cochain(&system, cochain)?;
    let (lhs, rhs) = stokes_defect(&system, &w)?;
    Ok(Output {
        text: format!(
            "integral of dw: {}\nminus frontier integral: {}\nequal: {}\n",
            format_q(&lhs),
            format_q(&rhs),
            lhs == rhs
        ),
        payload: json!({"lhs": format_q(&lhs), "rhs": format_q(&rhs), "equal": lhs == rhs}),
    })
}

fn mv_text(r: &MvReport) -> String {
    let mut text = format!("flavor {}\n q | H(M) | H(M1)+H(M2) | H(M12) | rank | ker | coker(prev)\n", r.flavor);
    for row in &r.rows {
        text += &format!(
            "{:>2} | {:>4} | {:>11} | {:>6} | {:>4} | {:>3} | {:>11}\n",
            row.degree, row.total, row.pieces, row.intersection, row.rank, row.kernel, row.cokernel_prev
        );
    }
    text += &format!("alternating sum: {}\nmatches total complex: {}\n", r.alternating_sum, r.matches_total);
    text
}

fn cmd_mv(path: &Path, flavor: &str) -> Outcome {
    let registry = FlavorRegistry::default();
    let flavor = registry.get(flavor)?;
    let system = load(path)?;
    let report = mv_report(&system, flavor)?;
    Ok(Output {
        text: mv_text(&report),
        payload: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn cmd_compare(path: &Path) -> Outcome {
    let system = load(path)?;
    let r = de_rham_compare(&system)?;
    let dr = r.dr.as_deref().map_or_else(|| "undefined".to_string(), vector);
    let mut text = format!("dr:   {dr}\nsing: {}\n", vector(&r.sing));
    if let Some(e) = &r.dr_error {
        text += &format!("dr unavailable: {e}\n");
    }
    text += &format!(
        "regions regular open: {}\nunions regular open: {}\nverdict: {}\n",
        r.regions_regular_open,
        r.unions_regular_open,
        serde_json::to_value(r.verdict).expect("verdict serializes").as_str().unwrap_or_default()
    );
    Ok(Output {
        text,
        payload: serde_json::to_value(&r).expect("report serializes"),
    })
}

fn gb_payload(r: &GaussBonnetReport) -> Value {
    let tuples: Vec<Value> = r
        .ledger
        .tuples
        .iter()
        .map(|t| {
            json!({
                "tuple": t.tuple.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "chi": t.chi,
                "interior_defects": t.interior_defects,
                "turning": t.turning,
                "turning_total": t.turning_total,
            })
        })
        .collect();
    let defects: Vec<Value> = r
        .ledger
        .vertex_defects
        .iter()
        .map(|d| json!({"piece": d.piece + 1, "vertex": d.vertex, "defect": d.defect}))
        .collect();
    json!({
        "chi": r.chi,
        "lhs": r.lhs,
        "curvature": r.curvature,
        "counterterms": r.counterterms,
        "rhs": r.rhs,
        "residual": r.residual,
        "balanced": r.balanced(),
        "tuples": tuples,
        "vertex_defects": defects,
    })
}

fn cmd_gauss_bonnet(path: &Path) -> Outcome {
    let system = load(path)?;
    let r = gauss_bonnet_report(&system)?;
    let mut text = String::from(" tuple | chi | interior defects | turning\n");
    for t in &r.ledger.tuples {
        text += &format!(
            "{:>6} | {:>3} | {:>16.12} | {:>12.12}\n",
            fmt_tuple(&t.tuple),
            t.chi,
            t.interior_defects,
            t.turning_total
        );
    }
    text += &format!(
        "chi: {}\nlhs (2 pi chi): {:.12}\ncurvature: {:.12}\ncounterterms: {:.12}\nrhs: {:.12}\nresidual: {:.3e}\n",
        r.chi, r.lhs, r.curvature, r.counterterms, r.rhs, r.residual
    );
    if !r.balanced() {
        return Err(Failure::Precondition(format!("ledger does not balance: residual {:e}", r.residual)));
    }
    Ok(Output {
        text,
        payload: gb_payload(&r),
    })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { system } => cmd_validate(system),
        Command::Hausdorff { system } => cmd_hausdorff(system),
        Command::Betti { system, flavor } => cmd_betti(system, flavor, cli.max_tuple),
        Command::Euler { system } => cmd_euler(system, cli.max_tuple),
        Command::Integrate { system, cochain } => cmd_integrate(system, cochain),
        Command::StokesCheck { system, cochain } => cmd_stokes(system, cochain),
        Command::MvReport { system, flavor } => cmd_mv(system, flavor),
        Command::Compare { system } => cmd_compare(system),
        Command::GaussBonnet { system } => cmd_gauss_bonnet(system),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let outcome = run(&cli);
    let (status, code, payload, diagnostics, text) = match outcome {
        Ok(o) => ("ok", 0, o.payload, Vec::new(), Some(o.text)),
        Err(f) => {
            let (status, code) = f.status();
            let (payload, diagnostics) = match f {
                Failure::Invalid(p, d) => (p, d),
                Failure::Precondition(m) | Failure::Input(m) => (Value::Null, vec![m]),
            };
            (status, code, payload, diagnostics, None)
        }
    };
    if cli.json {
        if !cli.quiet || code != 0 {
            let report = Report {
                command: echo,
                status,
                payload,
                diagnostics,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
    } else {
        if let Some(text) = text.filter(|_| !cli.quiet) {
            print!("{text}");
        }
        for d in &diagnostics {
            eprintln!("{status}: {d}");
        }
    }
    ExitCode::from(code)
}
