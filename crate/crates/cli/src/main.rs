//! `wsep`: command-line front end for the W-separator toolkit.
//!
//! Exit codes: 0 when the requested target was met, 1 when a run finished
//! without meeting it (best result still reported), 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wsep_cli::campaign::{self, Config};
use wsep_cli::gen::{generate, GeneratorSpec, Shape};
use wsep_cli::verify::{verify_suite, Scope, SuiteConfig};
use wsep_cli::{load_instance, parse_event_name, parse_rational, parse_vertex_set};
use wsep_core::emo::{
    run as emo_run, Algorithm, EventName, Fitness, Population, RunTrace, Seed, StopSpec,
};
use wsep_core::graph::VertexSet;
use wsep_core::lp::{coordinate_bounds_over_optima, lp_value_of, persistent_ones, LpCache, Rational};
use wsep_core::reducible::{
    degree_reduce, find_strictly_reducible_pair, kernel_size_check, minimize_pair,
    packing_after_deletion, packing_from_pair, reducible_sequence, verify_reducible_pair,
};
use wsep_core::separator::{brute_force_opt, OptOutcome};

#[derive(Parser)]
#[command(
    name = "wsep",
    version,
    about = "Exact, approximate, and evolutionary solvers for small-component vertex deletion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a W-separator exactly or by evolutionary search
    Solve(SolveArgs),
    /// Exact fractional relaxation value and persistent vertices
    Lp(LpArgs),
    /// Degree and crown reductions with certificates
    Reduce(ReduceArgs),
    /// Build a verified packing from a reducible pair
    Pack(PackArgs),
    /// One traced evolutionary run
    Evolve(EvolveArgs),
    /// Run a campaign config and emit rows plus aggregates
    Bench(BenchArgs),
    /// Cross-module verification sweeps on enumerated graphs
    Verify(VerifyArgs),
    /// Generate a benchmark instance with a certificate
    Gen(GenArgs),
}

fn w_parser() -> clap::builder::RangedU64ValueParser {
    clap::value_parser!(u64).range(1..)
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = w_parser())]
    w: u64,
    /// oracle | semo | semo-alt
    #[arg(long, default_value = "oracle")]
    mode: String,
    /// f1 | f2 | f3
    #[arg(long, default_value = "f2")]
    fitness: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Approximation slack as p/q; target becomes 1 + eps(3W-1)/2 times OPT
    #[arg(long)]
    epsilon: Option<String>,
    /// Write the JSON record here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LpArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = w_parser())]
    w: u64,
    /// Restrict to this comma-separated vertex set
    #[arg(long)]
    restrict: Option<String>,
    /// Also report the exact coordinate range of this vertex over all optima
    #[arg(long)]
    bounds: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = w_parser())]
    w: u64,
    /// Budget for the high-degree rule and the kernel check
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PackArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = w_parser())]
    w: u64,
    /// Head vertices of a known pair (requires --crown)
    #[arg(long)]
    head: Option<String>,
    /// Crown vertices of a known pair (requires --head)
    #[arg(long)]
    crown: Option<String>,
    /// Deleted vertices; switches to the deletion-resilient construction
    #[arg(long)]
    delete: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = w_parser())]
    w: u64,
    /// semo | semo-alt
    #[arg(long, default_value = "semo-alt")]
    algorithm: String,
    /// f1 | f2 | f3
    #[arg(long, default_value = "f2")]
    fitness: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// Stop once all these milestones fired (comma-separated names)
    #[arg(long)]
    until: Option<String>,
    /// Arm optimum/approx milestones from branch and bound (n <= 16)
    #[arg(long)]
    oracle: bool,
    /// Arm optimum/approx milestones with a known optimum
    #[arg(long)]
    opt: Option<usize>,
    /// Approximation slack as p/q (needs --oracle or --opt)
    #[arg(long)]
    epsilon: Option<String>,
    /// Arm the head milestone from the reducible sequence
    #[arg(long)]
    heads: bool,
    /// Write the full trace JSON here
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the config's rows output path
    #[arg(long)]
    rows: Option<PathBuf>,
    /// Override the config's aggregates output path
    #[arg(long)]
    aggregates: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// graph | lp | reducible | emo | all
    #[arg(long, default_value = "all")]
    scope: String,
    /// Exhaustive enumeration limit on the vertex count
    #[arg(long, default_value_t = 5)]
    size: usize,
    /// Component bounds to sweep
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
    w: Vec<usize>,
    /// Random points sampled per instance
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// planted | gnp | path | grid | crown
    #[arg(long)]
    kind: String,
    #[arg(long, value_parser = w_parser())]
    w: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability p/q for gnp
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    separator_size: Option<usize>,
    #[arg(long)]
    components_per: Option<usize>,
    #[arg(long)]
    component_size: Option<usize>,
    #[arg(long)]
    attach_degree: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    heads: Option<usize>,
    #[arg(long)]
    components: Option<usize>,
    #[arg(long)]
    tail: Option<usize>,
    /// Write the edge list here
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Lp(args) => lp(args),
        Command::Reduce(args) => reduce(args),
        Command::Pack(args) => pack(args),
        Command::Evolve(args) => evolve(args),
        Command::Bench(args) => bench(args),
        Command::Verify(args) => verify(args),
        Command::Gen(args) => gen(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_fitness(name: &str) -> Result<Fitness> {
    match name {
        "f1" => Ok(Fitness::F1),
        "f2" => Ok(Fitness::F2),
        "f3" => Ok(Fitness::F3),
        _ => bail!("unknown fitness {name:?} (f1|f2|f3)"),
    }
}

fn parse_algorithm(name: &str) -> Result<Algorithm> {
    match name {
        "semo" => Ok(Algorithm::Semo),
        "semo-alt" => Ok(Algorithm::SemoAlt),
        _ => bail!("unknown algorithm {name:?} (semo|semo-alt)"),
    }
}

fn ids(set: &VertexSet) -> Vec<usize> {
    set.to_vec()
}

fn approx_factor(eps: &Rational, w: usize) -> Rational {
    let one = Rational::from_integer(1.into());
    let three_w = Rational::from_integer((3 * w as i64).into());
    let half = Rational::new(1.into(), 2.into());
    one + eps * (three_w - Rational::from_integer(1.into())) * half
}

fn best_feasible(population: &Population) -> Option<(usize, String)> {
    population
        .members()
        .iter()
        .filter(|m| m.uncovered.is_empty())
        .map(|m| (m.point.count_ones(), m.point.to_string()))
        .min()
}

fn solve(args: SolveArgs) -> Result<u8> {
    let w = args.w as usize;
    let inst = load_instance(&args.graph, w)?;
    if args.mode == "oracle" {
        let outcome = brute_force_opt(&inst, None, None)
            .map_err(|e| anyhow!("exact search gave up: {e}"))?;
        let OptOutcome::Exact { opt, witness } = outcome else {
            bail!("exact search returned no optimum despite having no cap");
        };
        emit(
            &json!({
                "mode": "oracle",
                "n": inst.n(),
                "m": inst.graph.m(),
                "w": w,
                "opt": opt,
                "witness": witness.to_string(),
                "feasible": true,
            }),
            args.out.as_deref(),
        )?;
        return Ok(0);
    }

    let algorithm = parse_algorithm(&args.mode)?;
    let fitness = parse_fitness(&args.fitness)?;
    let epsilon = args.epsilon.as_deref().map(parse_rational).transpose().map_err(|e| anyhow!(e))?;
    if let Some(eps) = &epsilon {
        if eps < &Rational::from_integer(0.into()) {
            bail!("epsilon must be nonnegative");
        }
    }
    let opt = (inst.n() <= 16)
        .then(|| brute_force_opt(&inst, None, None).ok().and_then(|o| o.opt()))
        .flatten();

    let mut stop = StopSpec::budget(args.budget);
    stop.opt = opt;
    match (&epsilon, opt) {
        (Some(eps), Some(o)) => {
            stop.rho = Some(approx_factor(eps, w));
            stop.until = vec![EventName::Approx];
            let _ = o;
        }
        (None, Some(_)) => stop.until = vec![EventName::Optimum],
        _ => {}
    }
    let trace = emo_run(&inst, fitness, algorithm, Seed::new(args.seed), &stop);
    let best = best_feasible(&trace.final_population);

    let mut cache = LpCache::new();
    let (target, met) = match (&epsilon, opt) {
        (None, None) => ("feasible separator".to_string(), best.is_some()),
        (None, Some(o)) => (
            format!("optimum {o}"),
            best.as_ref().is_some_and(|(size, _)| *size == o),
        ),
        (Some(eps), Some(o)) => {
            let bound = approx_factor(eps, w) * Rational::from_integer(o.into());
            (
                format!("size within {bound} (factor over optimum {o})"),
                best.as_ref()
                    .is_some_and(|(size, _)| Rational::from_integer((*size).into()) <= bound),
            )
        }
        (Some(eps), None) => {
            let lower = lp_value_of(&inst, &VertexSet::full(inst.n()), &mut cache);
            let bound = approx_factor(eps, w) * &lower;
            (
                format!("size within {bound} (factor over LP bound {lower})"),
                best.as_ref()
                    .is_some_and(|(size, _)| Rational::from_integer((*size).into()) <= bound),
            )
        }
    };

    emit(
        &json!({
            "mode": args.mode,
            "fitness": args.fitness,
            "n": inst.n(),
            "m": inst.graph.m(),
            "w": w,
            "seed": args.seed,
            "iterations": trace.iterations,
            "opt": opt,
            "target": target,
            "met": met,
            "size": best.as_ref().map(|(s, _)| *s),
            "witness": best.as_ref().map(|(_, p)| p.clone()),
            "feasible": best.is_some(),
        }),
        args.out.as_deref(),
    )?;
    Ok(if met { 0 } else { 1 })
}

fn lp(args: LpArgs) -> Result<u8> {
    let w = args.w as usize;
    let inst = load_instance(&args.graph, w)?;
    let restrict = match &args.restrict {
        Some(text) => parse_vertex_set(text, inst.n()).map_err(|e| anyhow!(e))?,
        None => VertexSet::full(inst.n()),
    };
    let mut cache = LpCache::new();
    let value = lp_value_of(&inst, &restrict, &mut cache);
    let persistent = persistent_ones(&inst, &restrict, &mut cache);
    let mut record = json!({
        "n": inst.n(),
        "m": inst.graph.m(),
        "w": w,
        "restrict": ids(&restrict),
        "lp": value.to_string(),
        "persistent_ones": ids(&persistent),
    });
    if let Some(v) = args.bounds {
        if v >= inst.n() {
            bail!("vertex {v} out of range for n={}", inst.n());
        }
        let (lo, hi) = coordinate_bounds_over_optima(&inst, &restrict, v, &mut cache);
        record["bounds"] = json!({
            "vertex": v,
            "min": lo.to_string(),
            "max": hi.to_string(),
        });
    }
    emit(&record, args.out.as_deref())?;
    Ok(0)
}

fn reduce(args: ReduceArgs) -> Result<u8> {
    let w = args.w as usize;
    let inst = load_instance(&args.graph, w)?;
    let degree = args.k.map(|k| {
        let red = degree_reduce(&inst, k);
        let kernel_ok = red.budget >= 0 && kernel_size_check(&red.residual, red.budget as usize);
        json!({
            "k": k,
            "forced": ids(&red.forced),
            "budget": red.budget,
            "residual_n": red.residual.n(),
            "kernel_ok": kernel_ok,
            "no_instance": red.budget < 0,
        })
    });
    let pairs = reducible_sequence(&inst);
    let mut heads = VertexSet::new(inst.n());
    for pair in &pairs {
        heads.union_with(&pair.head);
    }
    let record = json!({
        "n": inst.n(),
        "m": inst.graph.m(),
        "w": w,
        "degree": degree,
        "crown": {
            "pairs": pairs.iter().map(|p| json!({
                "head": ids(&p.head),
                "crown": ids(&p.crown),
                "strict": p.strict(),
            })).collect::<Vec<_>>(),
            "heads": ids(&heads),
        },
    });
    emit(&record, args.out.as_deref())?;
    Ok(0)
}

fn pack(args: PackArgs) -> Result<u8> {
    let w = args.w as usize;
    let inst = load_instance(&args.graph, w)?;
    let pair = match (&args.head, &args.crown) {
        (Some(h), Some(c)) => {
            let head = parse_vertex_set(h, inst.n()).map_err(|e| anyhow!(e))?;
            let crown = parse_vertex_set(c, inst.n()).map_err(|e| anyhow!(e))?;
            match verify_reducible_pair(&inst, &head, &crown) {
                Some(pair) => pair,
                None => {
                    eprintln!("the supplied (head, crown) split is not a reducible pair");
                    return Ok(1);
                }
            }
        }
        (None, None) => match find_strictly_reducible_pair(&inst) {
            Some(found) => minimize_pair(&inst, &found),
            None => {
                eprintln!("no strictly reducible pair found");
                return Ok(1);
            }
        },
        _ => bail!("--head and --crown must be given together"),
    };
    let packing = match &args.delete {
        None => packing_from_pair(&inst, &pair),
        Some(text) => {
            let s = parse_vertex_set(text, inst.n()).map_err(|e| anyhow!(e))?;
            match packing_after_deletion(&inst, &pair, &s) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("no packing construction applies: {e}");
                    return Ok(1);
                }
            }
        }
    };
    emit(
        &json!({
            "n": inst.n(),
            "w": w,
            "head": ids(&pair.head),
            "crown": ids(&pair.crown),
            "strict": pair.strict(),
            "size": packing.size(),
            "parts": packing.parts.iter().map(ids).collect::<Vec<_>>(),
        }),
        args.out.as_deref(),
    )?;
    Ok(0)
}

fn evolve(args: EvolveArgs) -> Result<u8> {
    let w = args.w as usize;
    let inst = load_instance(&args.graph, w)?;
    let algorithm = parse_algorithm(&args.algorithm)?;
    let fitness = parse_fitness(&args.fitness)?;
    let mut stop = StopSpec::budget(args.budget);
    if let Some(until) = &args.until {
        for name in until.split(',') {
            stop.until.push(parse_event_name(name.trim()).map_err(|e| anyhow!(e))?);
        }
    }
    stop.opt = args.opt.or_else(|| {
        (args.oracle && inst.n() <= 16)
            .then(|| brute_force_opt(&inst, None, None).ok().and_then(|o| o.opt()))
            .flatten()
    });
    if let Some(eps) = &args.epsilon {
        let eps = parse_rational(eps).map_err(|e| anyhow!(e))?;
        if stop.opt.is_none() {
            bail!("--epsilon needs --opt or --oracle to know the optimum");
        }
        stop.rho = Some(approx_factor(&eps, w));
    }
    if args.heads {
        let mut heads = VertexSet::new(inst.n());
        for pair in reducible_sequence(&inst) {
            heads.union_with(&pair.head);
        }
        if !heads.is_empty() {
            stop.heads = Some(heads);
        }
    }
    let seed = Seed::with_stream(args.seed, args.stream);
    let trace: RunTrace = emo_run(&inst, fitness, algorithm, seed, &stop);
    if let Some(path) = &args.trace {
        std::fs::write(path, trace.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let met = stop.until.iter().all(|name| trace.event(*name).is_some());
    let best = best_feasible(&trace.final_population);
    emit(
        &json!({
            "n": inst.n(),
            "w": w,
            "algorithm": args.algorithm,
            "fitness": args.fitness,
            "seed": args.seed,
            "stream": args.stream,
            "iterations": trace.iterations,
            "events": trace.events.iter().map(|e| json!({
                "name": e.name.to_string(),
                "iteration": e.iteration,
                "point": e.point.to_string(),
            })).collect::<Vec<_>>(),
            "population": trace.final_population.len(),
            "best_feasible_size": best.as_ref().map(|(s, _)| *s),
            "best_feasible": best.as_ref().map(|(_, p)| p.clone()),
            "until_met": met,
        }),
        args.out.as_deref(),
    )?;
    Ok(if met { 0 } else { 1 })
}

fn bench(args: BenchArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let config = Config::from_toml(&text)?;
    let outcome = campaign::run_campaign(&config)?;
    let rows_path = args
        .rows
        .or_else(|| config.output.rows.as_ref().map(PathBuf::from));
    let agg_path = args
        .aggregates
        .or_else(|| config.output.aggregates.as_ref().map(PathBuf::from));
    if let Some(path) = &rows_path {
        std::fs::write(path, campaign::rows_to_csv(&outcome.rows))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &agg_path {
        std::fs::write(path, campaign::aggregates_to_csv(&outcome.aggregates))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if rows_path.is_none() && agg_path.is_none() {
        print!("{}", campaign::aggregates_to_csv(&outcome.aggregates));
    } else {
        println!(
            "{} rows, {} aggregates written",
            outcome.rows.len(),
            outcome.aggregates.len()
        );
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<u8> {
    let scope: Scope = args.scope.parse().map_err(|e: String| anyhow!(e))?;
    if args.w.iter().any(|&w| w == 0) {
        bail!("W values must be positive");
    }
    let report = verify_suite(&SuiteConfig {
        scope,
        size_limit: args.size,
        ws: args.w,
        sample_points: args.points,
        seed: args.seed,
    });
    print!("{}", report.render());
    Ok(if report.passed() { 0 } else { 1 })
}

fn gen(args: GenArgs) -> Result<u8> {
    let need = |name: &str, value: Option<usize>| {
        value.ok_or_else(|| anyhow!("--kind {} needs --{name}", args.kind))
    };
    let shape = match args.kind.as_str() {
        "path" => Shape::Path {
            n: need("n", args.n)?,
        },
        "grid" => Shape::Grid {
            rows: need("rows", args.rows)?,
            cols: need("cols", args.cols)?,
        },
        "gnp" => Shape::Gnp {
            n: need("n", args.n)?,
            p: args
                .p
                .as_deref()
                .ok_or_else(|| anyhow!("--kind gnp needs --p"))?
                .parse()?,
        },
        "planted" => Shape::Planted {
            separator_size: need("separator-size", args.separator_size)?,
            components_per: need("components-per", args.components_per)?,
            component_size: need("component-size", args.component_size)?,
            attach_degree: args.attach_degree.unwrap_or(1),
        },
        "crown" => Shape::Crown {
            heads: need("heads", args.heads)?,
            components: need("components", args.components)?,
            component_size: need("component-size", args.component_size)?,
            tail: args.tail.unwrap_or(0),
        },
        other => bail!("unknown generator kind {other:?}"),
    };
    let spec = GeneratorSpec {
        shape,
        w: args.w as usize,
        seed: args.seed,
    };
    let generated = generate(&spec)?;
    std::fs::write(&args.out, generated.instance.graph.to_edge_list_string())
        .with_context(|| format!("writing {}", args.out.display()))?;
    let cert = &generated.certificate;
    emit(
        &json!({
            "kind": args.kind,
            "n": generated.instance.n(),
            "m": generated.instance.graph.m(),
            "w": spec.w,
            "seed": spec.seed,
            "lower": cert.lower,
            "upper": cert.upper,
            "exact": cert.exact(),
            "pair": cert.pair.as_ref().map(|p| json!({
                "head": ids(&p.head),
                "crown": ids(&p.crown),
                "strict": p.strict(),
            })),
            "graph": args.out.display().to_string(),
        }),
        None,
    )?;
    Ok(0)
}
