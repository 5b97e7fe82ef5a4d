use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dlab_core::automorphisms::{hom_gd_count, isom_count};
use dlab_core::classify::classify;
use dlab_core::coweights::{dominance_leq, frob_type_check, inv_lattice_pair, Coweight};
use dlab_core::dieudonne::{braid, braid_plus_superspecial, superspecial, UnitaryDieudonne};
use dlab_core::json::{mat_to_json, module_from_json, module_to_json, pair_from_json, pair_to_json};
use dlab_core::lattice::{enumerate_lattices, GenBraid};
use dlab_core::pairs::{component_counts, field_of_order, incidence_count, normal_form, normal_pair, xi};
use dlab_core::slopes::{newton_slopes, v_square_type};
use dlab_core::strata::strata_table;
use dlab_core::{Error, Result, Ring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dlab", version, about = "Unitary Dieudonne spaces and modules of signature (n-1, 1)")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for tabular reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on brute-force enumerations (overrides DLAB_MAX_ENUM).
    #[arg(long, global = true)]
    max_enum: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct Input {
    /// Input JSON file; stdin when omitted.
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a space, module or pair as JSON.
    #[command(subcommand)]
    Gen(GenCmd),
    /// EO class rho of a space (modules are reduced first).
    Classify(Input),
    /// Newton slopes of a module, as "slope:multiplicity,...".
    Slopes(Input),
    /// Number of unitary automorphisms over F_{p^{2k}}.
    AutCount {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Number of graded F/V-compatible maps SRC -> DST over F_{p^{2k}}.
    HomCount {
        src: PathBuf,
        dst: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Codimension and Newton polygon of every EO stratum.
    StrataTable {
        #[arg(long)]
        n: usize,
    },
    /// Normal form of an isogeny pair.
    NormalForm(Input),
    /// Incidence points of an isogeny pair, total and per component.
    IncidenceCount(Input),
    /// Lattices of a generalized braid reachable from N.
    EnumLattices(GenBraidArgs),
    /// Compare the V^2-type of B(2) + S^(n-2) with the norm of mu.
    FrobType {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
    /// Coweight of a lattice pair, from divisor vectors or from a module's V^2.
    Inv {
        #[arg(long, value_delimiter = ',', requires = "g1")]
        g0: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',', requires = "g0")]
        g1: Option<Vec<u32>>,
        #[command(flatten)]
        input: Input,
    },
    /// Whether coweight A lies below B in the dominance order.
    Dominance {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<i64>,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    /// Degree of the residue field over F_p.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Witt vector length; 1 gives a space over the field.
    #[arg(long, default_value_t = 1)]
    precision: u32,
}

#[derive(Args)]
struct GenBraidArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    l: u32,
    #[arg(long)]
    a: usize,
    #[arg(long, default_value_t = 3)]
    p: u64,
}

#[derive(Subcommand)]
enum GenCmd {
    /// The braid B(n).
    Braid {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// S^m.
    Superspecial {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// B(rho) + S^(n-rho).
    BraidSum {
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// B(rho) + S^(n-rho) after a seeded random graded symplectic base change.
    RandomSpace {
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Generalized braid with its module over W_precision(F_p).
    Genbraid {
        #[command(flatten)]
        params: GenBraidArgs,
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
    /// Normal pair of invariant (m, l) over F_q, optionally randomly transported.
    Pair {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        c: u32,
        #[arg(long)]
        random: bool,
    },
}

fn read_json(input: &Input) -> Result<Value> {
    let text = match &input.file {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Error::Schema(format!("stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))
}

fn read_module(input: &Input) -> Result<UnitaryDieudonne> {
    module_from_json(&read_json(input)?)
}

fn ring(f: &FieldArgs) -> Result<Ring> {
    if f.precision <= 1 { Ring::field(f.p, f.degree) } else { Ring::witt(f.p, f.degree, f.precision) }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn gen(cmd: &GenCmd, seed: u64) -> Result<String> {
    let module = match cmd {
        GenCmd::Braid { n, field } => braid(&ring(field)?, *n)?,
        GenCmd::Superspecial { m, field } => superspecial(&ring(field)?, *m)?,
        GenCmd::BraidSum { rho, n, field } => braid_plus_superspecial(&ring(field)?, *rho, *n)?,
        GenCmd::RandomSpace { rho, n, field } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            braid_plus_superspecial(&ring(field)?, *rho, *n)?.random_symplectic_base_change(&mut rng)?
        }
        GenCmd::Genbraid { params, precision } => {
            let gb = GenBraid::new(params.p, params.m, params.l, params.a)?;
            let w = Ring::witt(params.p, 1, *precision)?;
            return Ok(pretty(&json!({
                "m": gb.m,
                "l": gb.l,
                "a": gb.a,
                "p": gb.p,
                "dual_length": gb.dual_length(),
                "module": module_to_json(&gb.to_module(&w)?),
            })));
        }
        GenCmd::Pair { n, m, l, q, c, random } => {
            let k = field_of_order(*q)?;
            let mut pm = normal_pair(&k, *n, *m, *l, *c)?;
            if *random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let psi = dlab_core::dieudonne::random_invertible(&k, *n, &mut rng);
                let psi_p = dlab_core::dieudonne::random_invertible(&k, *n, &mut rng);
                pm = pm.transport(&psi, &psi_p)?;
            }
            return Ok(pretty(&pair_to_json(&pm)));
        }
    };
    Ok(pretty(&module_to_json(&module)))
}

fn parse_coweight(x: &[i64]) -> Result<Coweight> {
    Coweight::new(x.to_vec())
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.cmd {
        Cmd::Gen(g) => gen(g, cli.seed),
        Cmd::Classify(input) => {
            let m = read_module(input)?;
            let sp = if m.ring().is_field() { m } else { m.reduce() };
            Ok(classify(&sp)?.to_string())
        }
        Cmd::Slopes(input) => Ok(newton_slopes(&read_module(input)?)?.to_compact()),
        Cmd::AutCount { k, input } => {
            let sp = read_module(input)?;
            Ok(isom_count(&sp, &sp, *k)?.to_string())
        }
        Cmd::HomCount { src, dst, k } => {
            let a = read_module(&Input { file: Some(src.clone()) })?;
            let b = read_module(&Input { file: Some(dst.clone()) })?;
            Ok(hom_gd_count(&a.graded, &b.graded, *k)?.to_string())
        }
        Cmd::StrataTable { n } => {
            let rows = strata_table(*n)?;
            Ok(match cli.format {
                Format::Json => pretty(&serde_json::to_value(&rows).expect("rows serialize")),
                Format::Tsv => {
                    let mut out = vec!["rho\tcodim\tpolygon\tsupersingular".to_string()];
                    out.extend(rows.iter().map(|r| format!("{}\t{}\t{}\t{}", r.rho, r.codim, r.polygon, r.supersingular)));
                    out.join("\n")
                }
            })
        }
        Cmd::NormalForm(input) => {
            let pm = pair_from_json(&read_json(input)?)?;
            let nf = normal_form(&pm)?;
            let inv = xi(&pm);
            let k = &pm.ring;
            Ok(pretty(&json!({
                "xi": {"m": inv.m, "l": inv.l},
                "psi": mat_to_json(k, &nf.psi),
                "psi_prime": mat_to_json(k, &nf.psi_prime),
                "u": mat_to_json(k, &nf.u),
                "v": mat_to_json(k, &nf.v),
            })))
        }
        Cmd::IncidenceCount(input) => {
            let pm = pair_from_json(&read_json(input)?)?;
            let total = incidence_count(&pm)?;
            let comps: Vec<Value> = component_counts(&pm)?
                .into_iter()
                .map(|(c, n)| json!({"component": serde_json::to_value(c).expect("enum serializes"), "points": n}))
                .collect();
            Ok(pretty(&json!({"points": total, "components": comps})))
        }
        Cmd::EnumLattices(args) => {
            let gb = GenBraid::new(args.p, args.m, args.l, args.a)?;
            let recs = enumerate_lattices(&gb)?;
            Ok(match cli.format {
                Format::Json => {
                    let rows: Vec<Value> = recs
                        .iter()
                        .map(|r| {
                            json!({
                                "alpha": r.alpha,
                                "beta": r.beta,
                                "lambda": r.lambda,
                                "index": [r.lattice.index(0), r.lattice.index(1)],
                            })
                        })
                        .collect();
                    pretty(&json!({"dual_length": gb.dual_length(), "lattices": rows}))
                }
                Format::Tsv => {
                    let mut out = vec!["alpha\tbeta\tlambda\tindex0\tindex1".to_string()];
                    out.extend(recs.iter().map(|r| {
                        format!("{}\t{}\t{}\t{}\t{}", r.alpha, r.beta, r.lambda, r.lattice.index(0), r.lattice.index(1))
                    }));
                    out.join("\n")
                }
            })
        }
        Cmd::FrobType { n, p, precision } => {
            let t = frob_type_check(*n, *p, *precision)?;
            if t.ok {
                Ok(format!("OK: {}", t.coweight))
            } else {
                Err(Error::InvariantViolation(format!("type {} differs from {}", t.coweight, t.expected)))
            }
        }
        Cmd::Inv { g0, g1, input } => {
            let x = match (g0, g1) {
                (Some(a), Some(b)) => inv_lattice_pair(a, b)?,
                _ => {
                    let (a, b) = v_square_type(&read_module(input)?)?;
                    inv_lattice_pair(&a, &b)?
                }
            };
            Ok(x.to_string())
        }
        Cmd::Dominance { a, b } => Ok(dominance_leq(&parse_coweight(a)?, &parse_coweight(b)?)?.to_string()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InsufficientPrecision(_) | Error::SnapAmbiguity(..) => 2,
        Error::CapExceeded(_) | Error::ExtensionBoundExceeded(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.max_enum {
        std::env::set_var("DLAB_MAX_ENUM", cap.to_string());
    }
    match run(&cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.code(), "detail": e.to_string()}));
            ExitCode::from(exit_code(&e))
        }
    }
}
