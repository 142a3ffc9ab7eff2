use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pinwheel::chains::enumerate_chains;
use pinwheel::complex::{chain_hyperplanes, chain_to_face_vertices, face_product_decomposition, hyperplanes_to_chain};
use pinwheel::cosets::{act_on_coset, chain_to_coset, coset_elements, coset_to_chain};
use pinwheel::dot::{covering_pairs, hasse_dot, stratum_dot};
use pinwheel::strata::{chain_to_stratum, stratum_to_chain};
use pinwheel::verify::{run_suite, SizeCaps, SUITES};
use pinwheel::{Chain, GenPerm, PinwheelStratum, TCosetHandle, YPoint};

/// Decorated nested chains and their strata, T-cosets and Δ-faces.
#[derive(Parser)]
#[command(name = "pinwheel", version)]
struct Cli {
    /// Worker threads for enumeration and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all chains for (r, n).
    Chains {
        #[command(flatten)]
        size: Size,
        /// Keep only chains of this dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// JSON array (the default).
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// One line per chain.
        #[arg(long)]
        table: bool,
    },
    /// Chain to T-coset handle, or a handle back to its chain.
    Coset {
        #[command(flatten)]
        input: ObjectInput,
        /// Also list every element of the coset.
        #[arg(long)]
        elements: bool,
    },
    /// Chain to Δ-face data, or a face back to its chain.
    Face {
        #[command(flatten)]
        input: ObjectInput,
        #[arg(long)]
        vertices: bool,
        /// Product decomposition of the face.
        #[arg(long)]
        factors: bool,
    },
    /// Chain to pinwheel stratum, or a stratum back to its chain.
    Stratum {
        #[command(flatten)]
        input: ObjectInput,
        /// Draw the full dual graph as DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Covering relations of the refinement order.
    Hasse {
        #[command(flatten)]
        size: Size,
        /// DOT output; otherwise JSON with 0-based node indices.
        #[arg(long)]
        dot: bool,
    },
    /// Right action of a matrix on a chain, coset, stratum or point.
    Act {
        /// Matrix JSON: {"r","n","cols":[{"col","row","exp"}]}.
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        target: ActTarget,
    },
    /// Run verification suites; exits with status 1 on any violation.
    Verify {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Lift all size caps.
        #[arg(long)]
        no_caps: bool,
        /// Print reports as JSON instead of summaries.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Size {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ObjectInput {
    /// Chain JSON file, `-` for stdin.
    #[arg(long)]
    chain: Option<PathBuf>,
    /// Coset handle JSON file.
    #[arg(long)]
    coset: Option<PathBuf>,
    /// Face JSON file (only its "chain" field is read).
    #[arg(long)]
    face: Option<PathBuf>,
    /// Stratum JSON file.
    #[arg(long)]
    stratum: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ActTarget {
    #[arg(long)]
    chain: Option<PathBuf>,
    #[arg(long)]
    coset: Option<PathBuf>,
    /// Zero-dimensional stratum JSON file.
    #[arg(long)]
    stratum: Option<PathBuf>,
    /// Point JSON: {"coords":[{"mag":["num","den"],"branch":int}]}.
    #[arg(long)]
    vertex: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Threeway,
    Equivariance,
    Products,
    Nonempty,
    All,
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = read_input(path)?;
    serde_json::from_str(&text).with_context(|| format!("malformed {what} JSON in {}", path.display()))
}

fn read_face_chain(path: &Path) -> Result<Chain> {
    let v: Value = read_json(path, "face")?;
    let chain = v.get("chain").context("face JSON has no \"chain\" field")?;
    serde_json::from_value(chain.clone()).with_context(|| format!("malformed chain in face {}", path.display()))
}

/// Resolves any of the four object inputs to its chain.
fn input_chain(input: &ObjectInput) -> Result<Chain> {
    if let Some(p) = &input.chain {
        read_json(p, "chain")
    } else if let Some(p) = &input.coset {
        Ok(coset_to_chain(&read_json::<TCosetHandle>(p, "coset")?))
    } else if let Some(p) = &input.face {
        read_face_chain(p)
    } else if let Some(p) = &input.stratum {
        Ok(stratum_to_chain(&read_json::<PinwheelStratum>(p, "stratum")?))
    } else {
        unreachable!("clap requires one input")
    }
}

/// Pretty JSON with every non-ASCII character escaped.
fn ascii_json(v: &impl serde::Serialize) -> String {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        if ch.is_ascii() {
            out.push(ch);
        } else {
            let mut buf = [0u16; 2];
            for unit in ch.encode_utf16(&mut buf) {
                out.push_str(&format!("\\u{unit:04x}"));
            }
        }
    }
    out
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", ascii_json(v));
}

fn face_json(c: &Chain, vertices: bool, factors: bool) -> Value {
    let mut out = json!({ "chain": c, "dimension": c.dimension() });
    if vertices {
        out["vertices"] = serde_json::to_value(chain_to_face_vertices(c)).expect("serializable");
    }
    if factors {
        let list: Vec<Value> = face_product_decomposition(c)
            .iter()
            .map(|f| {
                let mut v = serde_json::to_value(f).expect("serializable");
                v["name"] = json!(f.to_string());
                v
            })
            .collect();
        out["factors"] = Value::Array(list);
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Chains { size, dim, json: _, table } => {
            let chains: Vec<Chain> = enumerate_chains(size.r, size.n)?
                .into_iter()
                .filter(|c| dim.is_none_or(|d| c.dimension() == d))
                .collect();
            if table {
                for c in &chains {
                    println!("{}\t{}", c.dimension(), c);
                }
            } else {
                print_json(&chains);
            }
        }
        Command::Coset { input, elements } => {
            if input.coset.is_some() {
                print_json(&input_chain(&input)?);
            } else {
                let h = chain_to_coset(&input_chain(&input)?);
                if elements {
                    print_json(&json!({ "coset": h, "elements": coset_elements(&h) }));
                } else {
                    print_json(&h);
                }
            }
        }
        Command::Face {
            input,
            vertices,
            factors,
        } => {
            if input.face.is_some() {
                let c = input_chain(&input)?;
                // a face is also determined by its hyperplanes; cross-check
                let back = hyperplanes_to_chain(c.r(), c.n(), &chain_hyperplanes(&c))?;
                if back.as_ref() != Some(&c) {
                    bail!("face chain does not match its hyperplanes");
                }
                print_json(&c);
            } else {
                print_json(&face_json(&input_chain(&input)?, vertices, factors));
            }
        }
        Command::Stratum { input, dot } => {
            if input.stratum.is_some() {
                print_json(&input_chain(&input)?);
            } else {
                let s = chain_to_stratum(&input_chain(&input)?);
                if dot {
                    print!("{}", stratum_dot(&s));
                } else {
                    print_json(&s);
                }
            }
        }
        Command::Hasse { size, dot } => {
            if dot {
                print!("{}", hasse_dot(size.r, size.n)?);
            } else {
                let chains = enumerate_chains(size.r, size.n)?;
                let covers = covering_pairs(&chains);
                print_json(&json!({ "chains": chains, "covers": covers }));
            }
        }
        Command::Act { matrix, target } => {
            let a: GenPerm = read_json(&matrix, "matrix")?;
            if let Some(p) = &target.chain {
                let c: Chain = read_json(p, "chain")?;
                print_json(&c.act(&a)?);
            } else if let Some(p) = &target.coset {
                let h: TCosetHandle = read_json(p, "coset")?;
                print_json(&act_on_coset(&h, &a)?);
            } else if let Some(p) = &target.stratum {
                let s: PinwheelStratum = read_json(p, "stratum")?;
                print_json(&pinwheel::strata::act_on_zero_dim_stratum(&s, &a)?);
            } else if let Some(p) = &target.vertex {
                let x: YPoint = read_json(p, "point")?;
                x.check_branches(a.r())?;
                print_json(&a.act_on_tuple(&x)?);
            }
        }
        Command::Verify {
            size,
            suite,
            no_caps,
            json,
        } => {
            let caps = if no_caps { SizeCaps::unlimited() } else { SizeCaps::default() };
            let names: Vec<&str> = match suite {
                Suite::Threeway => vec!["threeway"],
                Suite::Equivariance => vec!["equivariance"],
                Suite::Products => vec!["products"],
                Suite::Nonempty => vec!["nonempty"],
                Suite::All => SUITES.to_vec(),
            };
            let mut reports = Vec::new();
            for name in names {
                let rep = run_suite(name, size.r, size.n, &caps).expect("known suite")?;
                if !json {
                    println!("{rep}");
                }
                reports.push(rep);
            }
            if json {
                print_json(&reports);
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
