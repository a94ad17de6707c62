//! The `qmod` command-line interface. Exit codes: 0 success, 2 bad usage
//! or invalid input, 3 inconclusive search under --strict.

use crate::algebra::{Place, QuaternionAlgebra};
use crate::cache::Cache;
use crate::error::Result;
use crate::order::{
    find_anticommuting_basis, saturate_to_maximal, standard_order, QuatOrder, SearchOutcome,
    DEFAULT_SEARCH_HEIGHT,
};
use crate::report::{moduli_bound_report, SearchBounds};
use crate::tree::{tree_distance, PlaneLattice};
use crate::util::{format_rational, parse_rational};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "qmod",
    about = "Exact invariants of rational quaternion algebras, their orders, and the Galois bounds on moduli fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ramification set, discriminant and division verdict of (a, b / Q)
    Algebra(AlgebraArgs),
    /// Moduli-field bound report for the algebra of discriminant D
    Bound(BoundArgs),
    /// Order computations
    #[command(subcommand)]
    Order(OrderCommand),
    /// Local lattice computations
    #[command(subcommand)]
    Tree(TreeCommand),
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(short, long, allow_negative_numbers = true)]
    a: i64,
    #[arg(short, long, allow_negative_numbers = true)]
    b: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(
        short = 'D',
        long = "discriminant",
        visible_alias = "d",
        allow_negative_numbers = true
    )]
    d: i64,
    /// Uniform height bound for the polarization / Atkin-Lehner / twist searches
    #[arg(long)]
    search_bound: Option<u32>,
    /// Exit 3 when any search is inconclusive
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: bool,
    /// Cache file (JSON lines); defaults to $QMOD_CACHE when set
    #[arg(long)]
    cache: Option<String>,
}

#[derive(Subcommand)]
enum OrderCommand {
    /// Saturate the standard order Z<i,j> of (a, b / Q) to a maximal order
    Maximal(OrderMaximalArgs),
    /// Distance ideal of two maximal orders given as JSON files
    Distance(OrderDistanceArgs),
    /// Search an order for an anticommuting pair of square roots of a, b
    Basis(OrderBasisArgs),
}

#[derive(Args)]
struct OrderMaximalArgs {
    #[arg(short, long, allow_negative_numbers = true)]
    a: i64,
    #[arg(short, long, allow_negative_numbers = true)]
    b: i64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    cache: Option<String>,
}

#[derive(Args)]
struct OrderDistanceArgs {
    /// First order (JSON file)
    #[arg(long)]
    o1: String,
    /// Second order (JSON file)
    #[arg(long)]
    o2: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OrderBasisArgs {
    /// Order as a JSON file; otherwise built from -a/-b by saturation
    #[arg(long)]
    order: Option<String>,
    #[arg(short, long, allow_negative_numbers = true)]
    a: Option<i64>,
    #[arg(short, long, allow_negative_numbers = true)]
    b: Option<i64>,
    /// Coordinate-height bound of the search
    #[arg(long, default_value_t = DEFAULT_SEARCH_HEIGHT)]
    bound: u32,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum TreeCommand {
    /// Tree distance between the vertices of two plane lattices at p
    Distance(TreeDistanceArgs),
}

#[derive(Args)]
struct TreeDistanceArgs {
    #[arg(short, long)]
    p: i64,
    /// First lattice, rows separated by ';', entries by ',' (e.g. "1,0;0,9")
    #[arg(long)]
    l1: String,
    #[arg(long)]
    l2: String,
    #[arg(long)]
    json: bool,
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; keep its exit code for help and
            // version, use 2 for genuine usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Algebra(args) => cmd_algebra(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Order(OrderCommand::Maximal(args)) => cmd_order_maximal(args),
        Command::Order(OrderCommand::Distance(args)) => cmd_order_distance(args),
        Command::Order(OrderCommand::Basis(args)) => cmd_order_basis(args),
        Command::Tree(TreeCommand::Distance(args)) => cmd_tree_distance(args),
    }
}

fn place_str(v: &Place) -> String {
    v.to_string()
}

fn cmd_algebra(args: AlgebraArgs) -> Result<i32> {
    let alg = QuaternionAlgebra::new(args.a, args.b)?;
    let ramified: Vec<String> = alg.ramified_places().iter().map(place_str).collect();
    let payload = serde_json::json!({
        "a": args.a,
        "b": args.b,
        "ramified_places": ramified,
        "discriminant": alg.discriminant().to_string(),
        "division": alg.is_division(),
    });
    if args.json {
        println!("{}", serde_json::to_string(&payload)?);
    } else {
        println!("algebra ({}, {} / Q)", args.a, args.b);
        println!(
            "  ramified places: {}",
            if ramified.is_empty() {
                "none".to_string()
            } else {
                ramified.join(", ")
            }
        );
        println!("  reduced discriminant: {}", alg.discriminant());
        println!(
            "  {}",
            if alg.is_division() {
                "division algebra"
            } else {
                "split: isomorphic to M2(Q)"
            }
        );
    }
    Ok(EXIT_OK)
}

fn cmd_bound(args: BoundArgs) -> Result<i32> {
    let bounds = match args.search_bound {
        Some(h) => SearchBounds::uniform(h),
        None => SearchBounds::default(),
    };
    let cache = Cache::from_flag_or_env(args.cache.as_deref());
    let key = format!("bound:{}:{:?}", args.d, bounds);
    let payload = match cache.as_ref().and_then(|c| c.get(&key).ok().flatten()) {
        Some(hit) => hit,
        None => {
            let report = moduli_bound_report(&BigInt::from(args.d), None, bounds)?;
            let value = serde_json::to_value(&report)?;
            if let Some(c) = &cache {
                c.put(&key, value.clone())?;
            }
            value
        }
    };
    let conclusive = payload
        .get("conclusive")
        .and_then(|v| v.as_bool())
        .unwrap_or(false);
    if args.json {
        println!("{}", serde_json::to_string(&payload)?);
    } else {
        print_bound_human(&payload);
    }
    if args.strict && !conclusive {
        return Ok(EXIT_INCONCLUSIVE);
    }
    Ok(EXIT_OK)
}

fn print_bound_human(v: &serde_json::Value) {
    let d = v.get("D").and_then(|x| x.as_i64()).unwrap_or_default();
    let twisting = v
        .get("twisting")
        .and_then(|t| t.get("is_twisting"))
        .and_then(|x| x.as_bool())
        .unwrap_or(false);
    println!("discriminant D = {d}");
    if twisting {
        let params: Vec<String> = v["twisting"]["params"]
            .as_array()
            .map(|a| a.iter().map(|x| x.to_string()).collect())
            .unwrap_or_default();
        println!("  twisting: yes, parameters m = {}", params.join(", "));
    } else {
        println!("  twisting: no");
    }
    println!(
        "  Atkin-Lehner group: order {}, reps found: {}",
        v["W"]["order"],
        v["W"]["reps"]
            .as_array()
            .map(|a| a
                .iter()
                .filter(|r| r["found"].as_bool() == Some(true))
                .count())
            .unwrap_or(0)
    );
    println!(
        "  U0 order {}, V0 order {}, W0 order {} (elements {})",
        v["U0"]["order"], v["V0"]["order"], v["W0"]["order"], v["W0"]["elements"]
    );
    println!(
        "  Galois bound over the base moduli field: C2^{} ({})",
        if v["bounds"]["applied"] == "twisting" {
            &v["bounds"]["twisting_exponent"]
        } else {
            &v["bounds"]["nontwisting_exponent"]
        },
        v["bounds"]["applied"].as_str().unwrap_or("?")
    );
    println!(
        "  field of definition rule: {} with Gal(L/K) among {}",
        v["prop42"]["compositum"].as_str().unwrap_or("?"),
        v["prop42"]["galois_LK_options"]
    );
    println!(
        "  conclusive: {}",
        v.get("conclusive")
            .and_then(|x| x.as_bool())
            .unwrap_or(false)
    );
}

fn cmd_order_maximal(args: OrderMaximalArgs) -> Result<i32> {
    let cache = Cache::from_flag_or_env(args.cache.as_deref());
    let key = format!("order-maximal:{},{}", args.a, args.b);
    let payload = match cache.as_ref().and_then(|c| c.get(&key).ok().flatten()) {
        Some(hit) => hit,
        None => {
            let alg = QuaternionAlgebra::new(args.a, args.b)?;
            let maximal = saturate_to_maximal(&standard_order(&alg))?;
            let value = serde_json::json!({
                "order": maximal.to_json()?,
                "reduced_discriminant": maximal.reduced_discriminant().to_string(),
            });
            if let Some(c) = &cache {
                c.put(&key, value.clone())?;
            }
            value
        }
    };
    if args.json {
        println!("{}", serde_json::to_string(&payload)?);
    } else {
        println!(
            "maximal order of ({}, {} / Q), reduced discriminant {}",
            args.a,
            args.b,
            payload["reduced_discriminant"].as_str().unwrap_or("?")
        );
        for row in payload["order"]["basis"].as_array().into_iter().flatten() {
            let cells: Vec<String> = row
                .as_array()
                .map(|r| {
                    r.iter()
                        .map(|c| c.as_str().unwrap_or("?").to_string())
                        .collect()
                })
                .unwrap_or_default();
            println!("  [{}]", cells.join(", "));
        }
    }
    Ok(EXIT_OK)
}

fn read_order(path: &str) -> Result<QuatOrder> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    // accept both a bare order object and the `order maximal` output
    let obj = value.get("order").unwrap_or(&value);
    QuatOrder::from_json(obj)
}

fn cmd_order_distance(args: OrderDistanceArgs) -> Result<i32> {
    let o1 = read_order(&args.o1)?;
    let o2 = read_order(&args.o2)?;
    let rho = crate::order::distance_ideal(&o1, &o2)?;
    if args.json {
        println!(
            "{}",
            serde_json::json!({ "distance_ideal": rho.generator.to_string() })
        );
    } else {
        println!("{}", rho.generator);
    }
    Ok(EXIT_OK)
}

fn cmd_order_basis(args: OrderBasisArgs) -> Result<i32> {
    let order = match (&args.order, args.a, args.b) {
        (Some(path), _, _) => read_order(path)?,
        (None, Some(a), Some(b)) => {
            let alg = QuaternionAlgebra::new(a, b)?;
            saturate_to_maximal(&standard_order(&alg))?
        }
        _ => {
            return Err(crate::error::Error::invalid(
                "order basis",
                "provide --order FILE or both -a and -b",
            ))
        }
    };
    let outcome = find_anticommuting_basis(&order, args.bound)?;
    match outcome {
        SearchOutcome::Found((iota, eta)) => {
            let fmt = |q: &crate::algebra::Quaternion| -> Vec<String> {
                q.coords().iter().map(format_rational).collect()
            };
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "found": true,
                        "iota": fmt(&iota),
                        "eta": fmt(&eta),
                    })
                );
            } else {
                println!("found anticommuting pair");
                println!("  iota = {iota}");
                println!("  eta  = {eta}");
            }
            Ok(EXIT_OK)
        }
        SearchOutcome::Inconclusive => {
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({ "found": false, "inconclusive": true })
                );
            } else {
                println!("INCONCLUSIVE (height bound {})", args.bound);
            }
            Ok(if args.strict {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
    }
}

fn parse_plane_lattice(text: &str, p: i64) -> Result<PlaneLattice> {
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 2 {
        return Err(crate::error::Error::invalid(
            "lattice",
            "expected two rows separated by ';'",
        ));
    }
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return Err(crate::error::Error::invalid(
                "lattice",
                "expected two entries per row",
            ));
        }
        out.push(vec![parse_rational(cells[0])?, parse_rational(cells[1])?]);
    }
    PlaneLattice::new(out, BigInt::from(p))
}

fn cmd_tree_distance(args: TreeDistanceArgs) -> Result<i32> {
    if !crate::arith::is_prime(&BigInt::from(args.p)) {
        return Err(crate::error::Error::invalid(
            "prime",
            format!("{} is not prime", args.p),
        ));
    }
    let l1 = parse_plane_lattice(&args.l1, args.p)?;
    let l2 = parse_plane_lattice(&args.l2, args.p)?;
    let d = tree_distance(&l1, &l2)?;
    if args.json {
        println!("{}", serde_json::json!({ "p": args.p, "distance": d }));
    } else {
        println!("{d}");
    }
    Ok(EXIT_OK)
}
