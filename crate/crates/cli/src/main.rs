use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use zvoa::affine_sl2::{fusion_oracle, fusion_table, hom_lattice};
use zvoa::fock::{FockSpace, FockVector};
use zvoa::json::*;
use zvoa::scalars::{int, parse_rational};
use zvoa::series::Window;
use zvoa::vertexops::{
    axiom_suite, integrality_scan_with, intertwiner, pairing_from_intertwiner, symmetry_suite, vertex_descendant,
    IntertwinerSpec, ScanOptions, SuiteOptions,
};
use zvoa::{CosetLabel, Cyclotomic, DualVector, Error, EvenLattice, Rational};

#[derive(Parser)]
#[command(name = "zvoa", version, about = "Exact computations with lattice and affine sl2 vertex operator algebras")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct LatticeArg {
    /// Lattice file `{"name", "gram"}`, or a built-in name `A1`, `A2`, ..., `An`.
    #[arg(long)]
    lattice: String,
}

#[derive(Args, Clone)]
struct WindowArg {
    /// Inclusive exponent range `LO HI`.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-2i64, 2])]
    window: Vec<i64>,
}

#[derive(Args, Clone)]
struct SpecArg {
    /// Coset representative of the first module, as `"p/q"` entries separated by commas or a JSON array.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// Coset representative of the second module.
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    /// Overall factor: a rational `"p/q"` or a JSON cyclotomic `{"N", "coords"}`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    scale: String,
}

#[derive(Subcommand)]
enum Command {
    /// Smith data, dual Gram matrix, field order and cosets of a lattice.
    LatticeInfo(LatticeArg),
    /// Re-verifies bimultiplicativity and the sign conditions of the cocycle.
    CocycleCheck(LatticeArg),
    /// The series `Y(u,x) v` with `u` in `V_L`.
    Vertex {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Vector as inline JSON, a JSON file, or a charge for `iota(e_charge)`.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        window: WindowArg,
    },
    /// The series `Y(u,x) v` for the intertwiner of type `(beta, gamma)`.
    Intertwine {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        spec: SpecArg,
        /// Use `scale * Y_beta` without the integral normalization.
        #[arg(long)]
        raw: bool,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        window: WindowArg,
    },
    /// The invariant pairing of `u` and `v`, computed directly and through intertwiners.
    Pair {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// The integral basis of `V_{beta+L}` or the dual basis of its graded dual.
    DualBasis {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "2")]
        cutoff: String,
        /// Emit the integral basis instead of the dual basis.
        #[arg(long)]
        standard: bool,
    },
    /// Coordinates of every intertwiner coefficient against the integral dual basis.
    IntegralityScan {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value = "2")]
        cutoff: String,
        /// Output weight cutoff; defaults to `--cutoff`.
        #[arg(long)]
        out_cutoff: Option<String>,
        /// Worker threads; defaults to `ZVOA_THREADS`.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Runs the axiom identities, and optionally the symmetry checks, on seeded random instances.
    AxiomCheck {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "3")]
        max_weight: String,
        #[arg(long, default_value_t = 2)]
        span: i64,
        /// Number of symmetry instances to add.
        #[arg(long, default_value_t = 0)]
        symmetries: usize,
    },
    /// The lattice of integral intertwining maps for affine sl2.
    AffineHom {
        #[arg(long)]
        level: u32,
        #[arg(long, num_args = 3, value_names = ["L1", "L2", "L3"])]
        weights: Vec<u32>,
    },
    /// Ranks of all integral intertwining lattices at a level.
    FusionTable {
        #[arg(long)]
        level: u32,
    },
}

struct Outcome {
    value: Value,
    pass: bool,
}

fn ok(value: Value) -> Outcome {
    Outcome { value, pass: true }
}

fn builtin(name: &str) -> Option<Vec<Vec<i64>>> {
    let n: usize = name.strip_prefix('A')?.parse().ok().filter(|&n| (1..=16).contains(&n))?;
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect(),
    )
}

fn read_json(path: &Path) -> zvoa::Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("malformed JSON in {}: {e}", path.display())))
}

fn load_lattice(arg: &LatticeArg) -> zvoa::Result<Arc<EvenLattice>> {
    let path = Path::new(&arg.lattice);
    if path.exists() {
        return lattice_from_json(&read_json(path)?);
    }
    match builtin(&arg.lattice) {
        Some(g) => {
            let gram = g.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
            EvenLattice::new(gram, Some(arg.lattice.clone()))
        }
        None => Err(Error::Parse(format!("no lattice file or built-in lattice named {}", arg.lattice))),
    }
}

fn parse_dual(l: &EvenLattice, s: &str) -> zvoa::Result<DualVector> {
    let v = if s.trim_start().starts_with('[') {
        let j: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        dual_vector_from_json(&j)?
    } else {
        DualVector(s.split(',').map(parse_rational).collect::<zvoa::Result<_>>()?)
    };
    l.require_dual(&v)?;
    Ok(v)
}

fn parse_coset(l: &EvenLattice, s: &str) -> zvoa::Result<CosetLabel> {
    l.coset(&parse_dual(l, s)?)
}

fn parse_scale(l: &EvenLattice, s: &str) -> zvoa::Result<Cyclotomic> {
    if s.trim_start().starts_with('{') {
        let j: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cyclotomic_from_json(&j, l.field())
    } else {
        Ok(Cyclotomic::from_rational(l.field(), parse_rational(s)?))
    }
}

fn parse_cutoff(s: &str) -> zvoa::Result<Rational> {
    let c = parse_rational(s)?;
    if c < int(0) {
        return Err(Error::Parse(format!("cutoff {s} is negative")));
    }
    Ok(c)
}

fn parse_vector(fs: &FockSpace, s: &str) -> zvoa::Result<FockVector> {
    let t = s.trim_start();
    if t.starts_with('{') {
        let j: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        return fock_vector_from_json(fs, &j);
    }
    let path = Path::new(s);
    if path.exists() {
        return fock_vector_from_json(fs, &read_json(path)?);
    }
    fs.iota(&parse_dual(fs.lattice(), s)?)
}

fn window(w: &WindowArg) -> zvoa::Result<Window> {
    Window::new(w.window[0], w.window[1])
}

fn run(cmd: Command) -> zvoa::Result<Outcome> {
    match cmd {
        Command::LatticeInfo(l) => {
            let lat = load_lattice(&l)?;
            Ok(ok(lattice_info_to_json(&lat)))
        }
        Command::CocycleCheck(l) => {
            let lat = load_lattice(&l)?;
            let a = lat.cocycle_audit();
            Ok(Outcome {
                pass: a.pass(),
                value: json!({
                    "pass": a.pass(),
                    "smith_compatible": a.smith_compatible,
                    "bimultiplicative": a.bimultiplicative,
                    "commutator_on_lattice": a.commutator_on_lattice,
                    "sign_condition": a.sign_condition,
                    "checked": a.checked,
                    "failures": a.failures,
                }),
            })
        }
        Command::Vertex { lattice, u, v, window: w } => {
            let fs = FockSpace::new(load_lattice(&lattice)?);
            let (u, v) = (parse_vector(&fs, &u)?, parse_vector(&fs, &v)?);
            Ok(ok(series_to_json(&vertex_descendant(&fs, &u, &v, window(&w)?)?)))
        }
        Command::Intertwine { lattice, spec, raw, u, v, window: w } => {
            let fs = FockSpace::new(load_lattice(&lattice)?);
            let l = fs.lattice();
            let (beta, gamma) = (parse_coset(l, &spec.beta)?, parse_coset(l, &spec.gamma)?);
            let scale = parse_scale(l, &spec.scale)?;
            let s = if raw {
                IntertwinerSpec::raw(&beta, &gamma, scale)
            } else {
                IntertwinerSpec::normalized(&fs, &beta, &gamma, &scale)
            };
            let (u, v) = (parse_vector(&fs, &u)?, parse_vector(&fs, &v)?);
            Ok(ok(series_to_json(&intertwiner(&fs, &s, &u, &v, window(&w)?)?)))
        }
        Command::Pair { lattice, u, v } => {
            let fs = FockSpace::new(load_lattice(&lattice)?);
            let (u, v) = (parse_vector(&fs, &u)?, parse_vector(&fs, &v)?);
            let direct = fs.pair(&u, &v)?;
            let via = pairing_from_intertwiner(&fs, &u, &v)?;
            let agree = direct == via;
            Ok(Outcome {
                pass: agree,
                value: json!({
                    "value": cyclotomic_to_json(&direct),
                    "via_intertwiner": cyclotomic_to_json(&via),
                    "agree": agree,
                }),
            })
        }
        Command::DualBasis { lattice, beta, cutoff, standard } => {
            let fs = FockSpace::new(load_lattice(&lattice)?);
            let coset = parse_coset(fs.lattice(), &beta)?;
            let cutoff = parse_cutoff(&cutoff)?;
            let b = if standard {
                fs.integral_basis(&coset, &cutoff)?
            } else {
                fs.dual_basis(&coset, &cutoff)?
            };
            Ok(ok(basis_to_json(&b)))
        }
        Command::IntegralityScan { lattice, spec, cutoff, out_cutoff, threads } => {
            let fs = FockSpace::new(load_lattice(&lattice)?);
            let l = fs.lattice();
            let (beta, gamma) = (parse_coset(l, &spec.beta)?, parse_coset(l, &spec.gamma)?);
            let scale = parse_scale(l, &spec.scale)?;
            let opts = ScanOptions {
                out_cutoff: out_cutoff.as_deref().map(parse_cutoff).transpose()?,
                threads,
            };
            let r = integrality_scan_with(&fs, &beta, &gamma, &scale, &parse_cutoff(&cutoff)?, &opts)?;
            Ok(Outcome {
                pass: r.pass,
                value: scan_report_to_json(&r),
            })
        }
        Command::AxiomCheck { lattice, instances, seed, max_weight, span, symmetries } => {
            let fs = FockSpace::new(load_lattice(&lattice)?);
            if span < 0 {
                return Err(Error::Parse("span must be nonnegative".into()));
            }
            let opts = SuiteOptions {
                instances,
                seed,
                max_weight: parse_cutoff(&max_weight)?,
                span,
            };
            let cases = axiom_suite(&fs, &opts)?;
            let sym = symmetry_suite(&fs, &SuiteOptions { instances: symmetries, ..opts })?;
            let pass = cases.iter().all(|c| c.report.pass) && sym.iter().all(|c| c.report.pass());
            let cases: Vec<Value> = cases
                .iter()
                .map(|c| {
                    let mut r = check_report_to_json(&c.report);
                    r["instance"] = json!(c.index);
                    r["beta"] = coset_to_json(&c.beta);
                    r["gamma"] = coset_to_json(&c.gamma);
                    r["parameters"] = json!(c.detail);
                    r
                })
                .collect();
            let sym: Vec<Value> = sym
                .iter()
                .map(|c| {
                    let mut r = symmetry_report_to_json(&c.report);
                    r["instance"] = json!(c.index);
                    r["beta"] = coset_to_json(&c.beta);
                    r["gamma"] = coset_to_json(&c.gamma);
                    r
                })
                .collect();
            Ok(Outcome {
                pass,
                value: json!({ "pass": pass, "seed": seed, "cases": cases, "symmetries": sym }),
            })
        }
        Command::AffineHom { level, weights } => {
            let h = hom_lattice(level, weights[0], weights[1], weights[2])?;
            let mut v = hom_lattice_to_json(&h);
            let oracle = fusion_oracle(level, weights[0], weights[1], weights[2])?;
            v["oracle_rank"] = json!(oracle);
            Ok(Outcome {
                pass: oracle == h.rank,
                value: v,
            })
        }
        Command::FusionTable { level } => {
            let rows: Vec<Value> = fusion_table(level)?
                .into_iter()
                .map(|(w, r)| json!({ "weights": w, "rank": r }))
                .collect();
            Ok(ok(json!({ "level": level, "table": rows })))
        }
    }
}

fn emit(out: Option<&Path>, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn error_value(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = emit(None, &error_value("Usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    let out = cli.out.clone();
    let (value, code) = match run(cli.cmd) {
        Ok(o) => (o.value, if o.pass { 0 } else { 1 }),
        Err(e) => (error_value(e.kind(), &e.to_string()), 2),
    };
    if let Err(e) = emit(out.as_deref(), &value) {
        let _ = emit(None, &error_value("Io", &e.to_string()));
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
