use clap::{Args, Parser, Subcommand};
use qmaps::decomposition::irreducible_components;
use qmaps::enumeration::{enumerate, parse_class, sample_irreducible_randomized_size, sample_quadrangulation, Budget, EnumError};
use qmaps::ghp::{mm_space_of_map, order_leq, OrderBudget};
use qmaps::map_kernel::{deserialize, serialize, PlanarMap};
use qmaps_experiments::order::{random_opening, GROWTH_WARNING};
use qmaps_experiments::{
    run_condensation, run_counts, run_exchangeable, run_order_demos, run_profile_match, ExpError, ExperimentConfig,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qmaps", version, about = "Random quadrangulations: enumeration, sampling, decomposition and experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Size parameter.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated size ladder.
    #[arg(long, value_delimiter = ',')]
    ladder: Option<Vec<usize>>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest size the command may touch.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count (or list) rooted maps of a class.
    Enumerate {
        #[command(flatten)]
        c: Common,
        /// general, simple, irreducible or hexagon.
        #[arg(long, default_value = "general")]
        class: String,
        /// Print PMAP records instead of counts.
        #[arg(long)]
        list: bool,
    },
    /// Draw a uniform quadrangulation, or an irreducible one of random size.
    Sample {
        #[command(flatten)]
        c: Common,
        /// general or irreducible.
        #[arg(long, default_value = "general")]
        class: String,
    },
    /// Component sizes of a map read from a file or sampled.
    Decompose {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exact order search between a map and a random opening of it, or
    /// between two given maps.
    OrderCheck {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        input2: Option<PathBuf>,
    },
    ExpCondensation {
        #[command(flatten)]
        c: Common,
    },
    ExpProfile {
        #[command(flatten)]
        c: Common,
    },
    ExpCounts {
        #[command(flatten)]
        c: Common,
    },
    ExpOrder {
        #[command(flatten)]
        c: Common,
    },
    ExpExchangeable {
        #[command(flatten)]
        c: Common,
    },
}

fn config(name: &str, c: &Common, n: Option<usize>, ladder: &[usize], replicas: usize, budget: usize) -> ExperimentConfig {
    ExperimentConfig {
        experiment: name.into(),
        n: c.n.or(n),
        ladder: c.ladder.clone().unwrap_or_else(|| ladder.to_vec()),
        replicas: c.replicas.unwrap_or(replicas),
        seed: c.seed,
        out: c.out.clone(),
        budget: c.budget.unwrap_or(budget),
    }
}

fn read_map(p: &PathBuf) -> Result<PlanarMap, ExpError> {
    let text = std::fs::read_to_string(p).map_err(|e| ExpError::Input(format!("{}: {e}", p.display())))?;
    deserialize(&text).map_err(|e| ExpError::Input(format!("{}: {e}", p.display())))
}

fn enum_error(e: EnumError) -> ExpError {
    match e {
        EnumError::Budget { .. } => ExpError::Budget(e.to_string()),
        EnumError::Unsupported(_) => ExpError::Input(e.to_string()),
    }
}

fn sampled_or_read(c: &Common, input: Option<&PathBuf>) -> Result<PlanarMap, ExpError> {
    match input {
        Some(p) => read_map(p),
        None => {
            let n = c.n.ok_or_else(|| ExpError::Input("give --input or --n".into()))?;
            if n > c.budget.unwrap_or(10_000_000) {
                return Err(ExpError::Budget(format!("size {n} exceeds the budget")));
            }
            sample_quadrangulation(n, c.seed).map_err(|e| ExpError::Input(e.to_string()))
        }
    }
}

fn run(cmd: Cmd) -> Result<(String, Option<PathBuf>), ExpError> {
    Ok(match cmd {
        Cmd::Enumerate { c, class, list } => {
            let class = parse_class(&class).ok_or_else(|| ExpError::Input(format!("unknown class {class}")))?;
            let budget = Budget { quadrangulation: c.budget.unwrap_or(7), hexagon: c.budget.unwrap_or(10) };
            let sizes = c.ladder.clone().unwrap_or_else(|| vec![c.n.unwrap_or(4)]);
            let cfg = config("enumerate", &c, None, &sizes, 1, budget.quadrangulation);
            let mut s = if list { String::new() } else { cfg.header() + "\nclass,n,count\n" };
            for n in sizes {
                let t = enumerate(class, n, &budget, list).map_err(enum_error)?;
                if list {
                    s.push_str(&t.pmap_records());
                } else {
                    let _ = writeln!(s, "{}", t.csv_row());
                }
            }
            (s, c.out)
        }
        Cmd::Sample { c, class } => {
            let n = c.n.ok_or_else(|| ExpError::Input("--n is required".into()))?;
            let budget = c.budget.unwrap_or(10_000_000);
            let map = match class.as_str() {
                "general" => {
                    if n > budget {
                        return Err(ExpError::Budget(format!("size {n} exceeds the budget {budget}")));
                    }
                    sample_quadrangulation(n, c.seed).map_err(|e| ExpError::Input(e.to_string()))?
                }
                "irreducible" => {
                    if 9 * n > budget {
                        return Err(ExpError::Budget(format!("host size {} exceeds the budget {budget}", 9 * n)));
                    }
                    sample_irreducible_randomized_size(n, c.seed).map_err(|e| ExpError::Invariant(e.to_string()))?.map
                }
                other => return Err(ExpError::Input(format!("cannot sample class {other}"))),
            };
            (serialize(&map), c.out)
        }
        Cmd::Decompose { c, input } => {
            let q = sampled_or_read(&c, input.as_ref())?;
            if !q.is_quadrangulation() {
                return Err(ExpError::Input("not a quadrangulation".into()));
            }
            let rep = irreducible_components(&q);
            let cfg = config("decompose", &c, Some(q.num_faces()), &[], 1, 10_000_000);
            let mut s = cfg.header();
            let _ = write!(
                s,
                "\n# faces={} l_s={} l_irr={} unique_largest={}\ncomponent,faces\n",
                q.num_faces(),
                rep.l_s,
                rep.l_irr,
                rep.unique_largest
            );
            for (i, size) in rep.sizes.iter().enumerate() {
                let _ = writeln!(s, "{i},{size}");
            }
            (s, c.out)
        }
        Cmd::OrderCheck { c, input, input2 } => {
            let (a, b, opened) = match (input, input2) {
                (Some(p), Some(p2)) => (read_map(&p)?, read_map(&p2)?, false),
                (p, None) => {
                    let m = sampled_or_read(&c, p.as_ref())?;
                    let mut rng = qmaps::enumeration::sampling::rng_from_seed(c.seed);
                    let o = random_opening(&m, &mut rng);
                    (m, o, true)
                }
                (None, Some(_)) => return Err(ExpError::Input("--input2 needs --input".into())),
            };
            let (x, x2) = (mm_space_of_map(&a), mm_space_of_map(&b));
            let budget = OrderBudget::default();
            let fwd = order_leq(&x, &x2, &budget).map_err(|e| ExpError::Budget(e.to_string()))?;
            let back = order_leq(&x2, &x, &budget).map_err(|e| ExpError::Budget(e.to_string()))?;
            if opened && fwd.is_none() {
                return Err(ExpError::Invariant("no order witness for an opening".into()));
            }
            let cfg = config("order-check", &c, None, &[], 1, 10_000_000);
            let v = serde_json::json!({
                "header": cfg.header(),
                "warning": if opened { Some(GROWTH_WARNING) } else { None },
                "first_leq_second": fwd.as_ref().map(|w| w.map.clone()),
                "second_leq_first": back.as_ref().map(|w| w.map.clone()),
            });
            (serde_json::to_string_pretty(&v).expect("plain values") + "\n", c.out)
        }
        Cmd::ExpCondensation { c } => {
            let cfg = config("condensation", &c, None, &[20_000], 30, 1_000_000);
            (run_condensation(&cfg)?.to_csv(&cfg), cfg.out)
        }
        Cmd::ExpProfile { c } => {
            let cfg = config("profile", &c, None, &[6250, 12_500, 25_000, 50_000], 20, 1_000_000);
            (run_profile_match(&cfg)?.to_csv(&cfg), cfg.out)
        }
        Cmd::ExpCounts { c } => {
            let cfg = config("counts", &c, Some(6), &[100, 1000, 10_000, 100_000], 1, 7);
            let rep = run_counts(&cfg)?;
            if !rep.all_match() {
                return Err(ExpError::Invariant(format!("enumeration disagrees with a formula:\n{}", rep.to_csv(&cfg))));
            }
            (rep.to_csv(&cfg), cfg.out)
        }
        Cmd::ExpOrder { c } => {
            let cfg = config("order", &c, Some(2), &[4], 3, 8);
            (run_order_demos(&cfg)?.to_json(&cfg), cfg.out)
        }
        Cmd::ExpExchangeable { c } => {
            let cfg = config("exchangeable", &c, Some(7), &[100, 1000, 10_000], 20, 100_000);
            (run_exchangeable(&cfg)?.to_csv(&cfg), cfg.out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((text, out)) => {
            let res = match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
