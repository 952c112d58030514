//! Command-line front end: `dhmono report` and `dhmono matrices`.
//!
//! Exit codes: 0 when no certificate FAILs, 1 when at least one does, 2 for
//! usage errors. Progress goes to stderr; stdout carries only the report.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::certificate::{Certificate, Status};
use crate::curve::{coefficient_matrix, BranchConfig, MonodromyClass, Preset};
use crate::density::{
    component_separation, irreducibility_certificate, lie_closure_certificate, no_characters_certificate,
    noncompactness_search, open_orbit_certificate,
};
use crate::exactmath::{matrix_to_json, CycMatrix};
use crate::homology::{build_basis, span_certificate};
use crate::reps::{nontrivial_orbits, CharOrbit};
use crate::twist::admissible_squares;

pub const CHECKS: [&str; 7] = [
    "span",
    "irreducibility",
    "lie_closure",
    "separation",
    "no_characters",
    "open_orbit",
    "noncompactness",
];

#[derive(Parser, Debug)]
#[command(name = "dhmono", version, about = "Certificates for dihedral-Heisenberg monodromy of hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the selected checks and write a certificate report.
    Report(RunArgs),
    /// Dump passing matrices, loop monodromies, twist matrices and Gram matrices.
    Matrices(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 6)]
    genus: u32,
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// irr, span or span-bc-equal
    #[arg(long, default_value = "irr")]
    preset: String,
    /// Character orbit "b,c"; repeatable. Defaults to every nontrivial orbit.
    #[arg(long = "orbit", value_name = "B,C")]
    orbit: Vec<String>,
    /// "all" selects every nontrivial orbit.
    #[arg(long)]
    orbits: Option<String>,
    /// Comma-separated check names, or "all".
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 4)]
    max_word_length: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Validated run parameters.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub genus: u32,
    pub n: u32,
    pub preset: Preset,
    pub orbits: Vec<CharOrbit>,
    pub checks: Vec<String>,
    pub seed: u64,
    pub format: Format,
    pub max_word_length: usize,
    pub out: Option<PathBuf>,
}

fn parse_orbit(s: &str, n: u32) -> Result<CharOrbit> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("orbit must be written b,c; got {s:?}");
    }
    let b: i64 = parts[0].parse().with_context(|| format!("bad orbit entry {:?}", parts[0]))?;
    let c: i64 = parts[1].parse().with_context(|| format!("bad orbit entry {:?}", parts[1]))?;
    Ok(CharOrbit::new(n, b, c))
}

impl RunSpec {
    fn from_args(a: &RunArgs) -> Result<RunSpec> {
        let preset = Preset::parse(&a.preset)
            .with_context(|| format!("unknown preset {:?}; expected irr, span or span-bc-equal", a.preset))?;
        if a.genus < 6 {
            bail!("genus must be at least 6 for preset configurations (got {})", a.genus);
        }
        if a.n < 3 || a.n.is_multiple_of(2) {
            bail!("n must be odd and at least 3 (got {})", a.n);
        }
        let orbits = match (&a.orbits, a.orbit.is_empty()) {
            (Some(all), _) if all == "all" => nontrivial_orbits(a.n),
            (Some(other), _) => bail!("--orbits only accepts \"all\" (got {other:?})"),
            (None, true) => nontrivial_orbits(a.n),
            (None, false) => {
                let mut v = Vec::new();
                for s in &a.orbit {
                    let u = parse_orbit(s, a.n)?;
                    if !v.contains(&u) {
                        v.push(u);
                    }
                }
                v
            }
        };
        let checks: Vec<String> = if a.checks == "all" {
            CHECKS.iter().map(|s| s.to_string()).collect()
        } else {
            let mut out = Vec::new();
            for c in a.checks.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                if !CHECKS.contains(&c) {
                    bail!("unknown check {c:?}; known checks: {}", CHECKS.join(", "));
                }
                out.push(c.to_string());
            }
            out
        };
        Ok(RunSpec {
            genus: a.genus,
            n: a.n,
            preset,
            orbits,
            checks,
            seed: a.seed,
            format: a.format,
            max_word_length: a.max_word_length,
            out: a.out.clone(),
        })
    }

    fn wants(&self, check: &str) -> bool {
        self.checks.iter().any(|c| c == check)
    }

    fn to_json(&self) -> Value {
        json!({
            "genus": self.genus,
            "n": self.n,
            "preset": self.preset.name(),
            "orbits": self.orbits.iter().map(|u| [u.b, u.c]).collect::<Vec<_>>(),
            "checks": self.checks,
            "seed": self.seed,
            "max_word_length": self.max_word_length,
        })
    }

    fn config(&self) -> Result<BranchConfig> {
        Ok(BranchConfig::preset(self.genus, self.n, self.preset)?)
    }
}

/// Runs every requested check. Orbit-level checks run in parallel; the
/// result order depends only on the spec.
pub fn run_report(spec: &RunSpec) -> Result<Vec<Certificate>> {
    let cfg = spec.config()?;
    let seed = spec.seed;
    let per_orbit = ["span", "irreducibility", "lie_closure", "no_characters"];
    let mut jobs: Vec<(&str, CharOrbit)> = Vec::new();
    for check in per_orbit {
        if !spec.wants(check) {
            continue;
        }
        if check == "lie_closure" {
            jobs.push((check, CharOrbit::trivial(spec.n)));
        }
        for u in &spec.orbits {
            jobs.push((check, *u));
        }
    }
    let total = jobs.len();
    let mut certs: Vec<Certificate> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (check, u))| {
            eprintln!("[{}/{total}] {check} {u}", k + 1);
            let c = match *check {
                "span" => span_certificate(&cfg, u, seed),
                "irreducibility" => irreducibility_certificate(&cfg, u, seed),
                "lie_closure" => lie_closure_certificate(&cfg, u, seed),
                _ => no_characters_certificate(&cfg, u, seed),
            };
            eprintln!("      {check} {u}: {:?} in {} ms", c.status, c.runtime_ms);
            c
        })
        .collect();
    let nontrivial: Vec<CharOrbit> = spec.orbits.iter().copied().filter(|u| !u.is_trivial()).collect();
    let mut with_trivial = vec![CharOrbit::trivial(spec.n)];
    with_trivial.extend(nontrivial.iter().copied());
    if spec.wants("separation") {
        eprintln!("separation over {} orbits", nontrivial.len());
        certs.push(component_separation(&cfg, &nontrivial, seed));
    }
    if spec.wants("open_orbit") {
        eprintln!("open orbit over {} factors", with_trivial.len());
        certs.push(open_orbit_certificate(&cfg, &with_trivial, None, seed));
    }
    if spec.wants("noncompactness") {
        eprintln!("noncompactness search up to length {}", spec.max_word_length);
        certs.push(noncompactness_search(&cfg, &with_trivial, spec.max_word_length, seed));
    }
    Ok(certs)
}

/// 0 when nothing FAILs, 1 otherwise.
pub fn exit_code(certs: &[Certificate]) -> i32 {
    if certs.iter().any(|c| c.status == Status::Fail) {
        1
    } else {
        0
    }
}

pub fn report_json(spec: &RunSpec, certs: &[Certificate]) -> Value {
    let count = |s: Status| certs.iter().filter(|c| c.status == s).count();
    json!({
        "tool": "dhmono",
        "version": env!("CARGO_PKG_VERSION"),
        "run": spec.to_json(),
        "certificates": certs,
        "summary": {
            "pass": count(Status::Pass),
            "fail": count(Status::Fail),
            "inconclusive": count(Status::Inconclusive),
        },
        "exit_code": exit_code(certs),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn report_csv(certs: &[Certificate]) -> String {
    let mut out = String::from("check,params,status,seed,runtime_ms\n");
    for c in certs {
        let status = serde_json::to_value(c.status).expect("status serializes");
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            c.check,
            csv_field(&c.params.to_string()),
            status.as_str().unwrap_or_default(),
            c.seed,
            c.runtime_ms
        ));
    }
    out
}

struct NamedMatrix {
    orbit: CharOrbit,
    name: String,
    matrix: CycMatrix,
}

/// Matrices for one orbit, in a fixed order, plus their JSON record.
fn orbit_matrices(cfg: &BranchConfig, u: &CharOrbit) -> Result<(Value, Vec<NamedMatrix>)> {
    let mut named = Vec::new();
    let mut push = |name: String, m: &CycMatrix| {
        named.push(NamedMatrix {
            orbit: *u,
            name,
            matrix: m.clone(),
        })
    };
    let passing: Vec<Value> = (1..=cfg.num_cuts())
        .map(|m| {
            let x = cfg.passing_of_cut(m);
            let mat = coefficient_matrix(u, &x);
            push(format!("passing_{m}"), &mat);
            json!({ "cut": m, "element": x.to_json(), "matrix": matrix_to_json(&mat) })
        })
        .collect();
    let monodromies: Vec<Value> = cfg
        .loops()
        .iter()
        .map(|l| {
            let mc = MonodromyClass::of_element(u, &l.monodromy);
            push(format!("M_({},{})", l.i, l.j), &mc.matrix);
            json!({
                "i": l.i,
                "j": l.j,
                "element": l.monodromy.to_json(),
                "kind": mc.kind,
                "k": mc.k,
                "matrix": matrix_to_json(&mc.matrix),
            })
        })
        .collect();
    let basis = build_basis(cfg, u)?;
    let twists: Vec<Value> = admissible_squares(&basis)
        .iter()
        .map(|t| {
            let a = t.nilpotent();
            push(format!("D2_({},{})", t.i, t.j), &t.matrix);
            push(format!("A_({},{})", t.i, t.j), &a);
            json!({
                "i": t.i,
                "j": t.j,
                "kind": t.kind,
                "d_squared": matrix_to_json(&t.matrix),
                "a": matrix_to_json(&a),
            })
        })
        .collect();
    push("gram".to_string(), &basis.gram);
    let record = json!({
        "orbit": [u.b, u.c],
        "homology_dim": basis.dim(),
        "passing": passing,
        "monodromies": monodromies,
        "twists": twists,
        "gram": matrix_to_json(&basis.gram),
    });
    Ok((record, named))
}

pub fn matrices_output(spec: &RunSpec) -> Result<String> {
    let cfg = spec.config()?;
    let results = spec
        .orbits
        .par_iter()
        .map(|u| {
            eprintln!("matrices for orbit {u}");
            orbit_matrices(&cfg, u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match spec.format {
        Format::Json => {
            let v = json!({
                "run": spec.to_json(),
                "config": cfg.to_json(),
                "orbits": results.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv => {
            let mut out = String::from("orbit,matrix,row,col,coefficients\n");
            for (_, named) in &results {
                for nm in named {
                    for i in 0..nm.matrix.rows() {
                        for j in 0..nm.matrix.cols() {
                            let coeffs: Vec<String> = nm.matrix[(i, j)]
                                .coeffs()
                                .iter()
                                .map(|c| c.to_string())
                                .collect();
                            out.push_str(&format!(
                                "\"{},{}\",{},{},{},{}\n",
                                nm.orbit.b,
                                nm.orbit.c,
                                csv_field(&nm.name),
                                i,
                                j,
                                coeffs.join(";")
                            ));
                        }
                    }
                }
            }
            out
        }
    })
}

fn emit(spec: &RunSpec, text: &str) -> Result<()> {
    match &spec.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (args, is_report) = match &cli.command {
        Command::Report(a) => (a, true),
        Command::Matrices(a) => (a, false),
    };
    let spec = match RunSpec::from_args(args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let result = if is_report {
        run_report(&spec).and_then(|certs| {
            let text = match spec.format {
                Format::Json => serde_json::to_string_pretty(&report_json(&spec, &certs))? + "\n",
                Format::Csv => report_csv(&certs),
            };
            emit(&spec, &text)?;
            Ok(exit_code(&certs))
        })
    } else {
        matrices_output(&spec).and_then(|text| emit(&spec, &text).map(|_| 0))
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
