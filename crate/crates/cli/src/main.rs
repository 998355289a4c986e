use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hdta::compose::{tensor, ClockPolicy};
use hdta::convert::{one_dta_to_ta, ta_to_1dta, unfold_to_ta};
use hdta::format::dot::{region_graph_dot, zone_graph_dot};
use hdta::format::{parse_hdta, parse_model, parse_ta, write_hdta, write_ta, ModelFile};
use hdta::hdta::{
    bounded_search, region_graph, region_reach, trace_json_lines, zone_graph_export, zone_reach,
    ReachResult, RegionOptions, SuccessorRule, ZoneOptions,
};
use hdta::milner::{gen_milner, BenchSpec};
use hdta::HdtaModel;

#[derive(Parser)]
#[command(
    name = "hdta",
    version,
    about = "Higher-dimensional timed automata toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model file (HDTA or timed automaton).
    Validate { file: PathBuf },
    /// Decide whether a final state is reachable. Exit code 0: reachable,
    /// 1: unreachable, 2: error.
    Reach {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Zone)]
        engine: Engine,
        /// Write the explored states (or, for the concrete engine, the
        /// witness run) as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Successor rule of the zone engine.
        #[arg(long, value_enum, default_value_t = Rule::Exact)]
        rule: Rule,
        /// Largest model constant the region engine accepts.
        #[arg(long, default_value_t = 16)]
        max_region_constant: i64,
        /// Discrete-move bound of the concrete engine.
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Full normalized zone graph as DOT.
    Zonegraph {
        file: PathBuf,
        /// Write DOT here instead of standard output.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Rule::Exact)]
        rule: Rule,
    },
    /// Region graph as DOT.
    Regiongraph {
        file: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        max_region_constant: i64,
    },
    /// Tensor product of two HDTA.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Prefix clocks declared by both factors with `l.` and `r.`
        /// instead of failing.
        #[arg(long)]
        rename_clocks: bool,
    },
    /// Convert between timed automata and HDTA.
    Convert {
        #[arg(value_enum)]
        direction: Direction,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// For hdta-to-ta: accept models of any dimension by turning every
        /// cube into a location.
        #[arg(long)]
        unfold: bool,
    },
    /// Benchmarks.
    Bench {
        #[command(subcommand)]
        bench: Bench,
    },
}

#[derive(Subcommand)]
enum Bench {
    /// Scheduler family: zone-graph statistics for N = 1, 2, ... up to
    /// `--n`, stopping once the time budget is spent.
    Milner {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        d: i64,
        #[arg(long = "D", default_value_t = 30)]
        big_d: i64,
        /// Also run the interleaved one-dimensional variant.
        #[arg(long)]
        interleaved: bool,
        #[arg(long, default_value_t = 60)]
        budget_secs: u64,
        /// Write the generated HDTA variant for the largest N here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Zone,
    Region,
    Concrete,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    /// Intersect with the target invariant before delaying.
    Exact,
    /// Delay first, then intersect.
    Published,
}

impl From<Rule> for SuccessorRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Exact => SuccessorRule::Exact,
            Rule::Published => SuccessorRule::OverApprox,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    TaToHdta,
    HdtaToTa,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_hdta(path: &Path) -> Result<HdtaModel> {
    parse_hdta(&read(path)?).map_err(|e| anyhow!("{}:\n{e}", path.display()))
}

fn validate(file: &Path) -> Result<()> {
    match parse_model(&read(file)?).map_err(|e| anyhow!("{}:\n{e}", file.display()))? {
        ModelFile::Hdta(m) => {
            let counts: Vec<String> = m.grade_counts().iter().map(|c| c.to_string()).collect();
            println!(
                "valid HDTA: {} cubes (per dimension {}), {} clocks, dimension {}",
                m.len(),
                counts.join("/"),
                m.clocks().len(),
                m.dimension()
            );
        }
        ModelFile::Ta(ta) => println!(
            "valid timed automaton: {} locations, {} edges, {} clocks",
            ta.locations.len(),
            ta.edges.len(),
            ta.clocks.len()
        ),
    }
    Ok(())
}

fn report(m: &HdtaModel, engine: &str, r: &ReachResult) -> Result<()> {
    println!(
        "{}",
        if r.reachable {
            "reachable"
        } else {
            "unreachable"
        }
    );
    println!(
        "engine {engine}: explored {}, stored {}, subsumed {}, peak waiting {}",
        r.stats.explored, r.stats.stored, r.stats.subsumed, r.stats.peak_waiting
    );
    if let Some(w) = &r.witness {
        println!("witness:");
        print!("{}", w.render(m)?);
    } else if r.reachable {
        println!("no concrete witness along the symbolic path");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn reach(
    file: &Path,
    engine: Engine,
    trace: Option<&Path>,
    rule: Rule,
    max_region_constant: i64,
    depth: usize,
) -> Result<bool> {
    let m = load_hdta(file)?;
    match engine {
        Engine::Zone => {
            let opts = ZoneOptions {
                rule: rule.into(),
                record: trace.is_some(),
                ..Default::default()
            };
            let r = zone_reach(&m, opts);
            report(&m, "zone", &r)?;
            if let Some(p) = trace {
                write(p, &trace_json_lines(&r.trace))?;
            }
            Ok(r.reachable)
        }
        Engine::Region => {
            let opts = RegionOptions {
                max_constant: max_region_constant,
                record: trace.is_some(),
            };
            let r = region_reach(&m, opts)?;
            report(&m, "region", &r)?;
            if let Some(p) = trace {
                write(p, &trace_json_lines(&r.trace))?;
            }
            Ok(r.reachable)
        }
        Engine::Concrete => {
            let r = bounded_search(&m, depth);
            println!("{}", if r.found { "reachable" } else { "unreachable" });
            println!(
                "engine concrete: depth {depth}, quarter-unit delays, {} states",
                r.states
            );
            if let Some(w) = &r.witness {
                println!("witness:");
                print!("{}", w.render(&m)?);
                if let Some(p) = trace {
                    let lines: String = w
                        .to_json_lines(&m)?
                        .iter()
                        .map(|v| format!("{v}\n"))
                        .collect();
                    write(p, &lines)?;
                }
            } else if let Some(p) = trace {
                write(p, "")?;
            }
            Ok(r.found)
        }
    }
}

fn emit(dot: Option<&Path>, text: &str) -> Result<()> {
    match dot {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn bench_milner(
    n: usize,
    d: i64,
    big_d: i64,
    interleaved: bool,
    budget: Duration,
    emit: Option<&Path>,
) -> Result<()> {
    BenchSpec { n, d, big_d }.check()?;
    println!("# scheduler family, d={d}, D={big_d}, budget {budget:?}");
    if interleaved {
        println!(
            "{:>3} {:>8} {:>10} {:>9} {:>8} {:>10} {:>9} {:>7}",
            "N", "cubes", "explored", "time", "cubes_i", "explored_i", "time_i", "ratio"
        );
    } else {
        println!(
            "{:>3} {:>8} {:>10} {:>10} {:>9}",
            "N", "cubes", "explored", "stored", "time"
        );
    }
    let start = Instant::now();
    let mut last = None;
    for k in 1..=n {
        if start.elapsed() > budget {
            println!("# budget spent; stopped before N={k}");
            break;
        }
        let models = gen_milner(BenchSpec { n: k, d, big_d })?;
        let t = Instant::now();
        let h = zone_reach(&models.hdta, ZoneOptions::default());
        let th = t.elapsed();
        if !h.reachable {
            bail!("N={k}: the HDTA variant does not reach its final state");
        }
        if interleaved {
            let t = Instant::now();
            let i = zone_reach(&models.interleaved, ZoneOptions::default());
            let ti = t.elapsed();
            println!(
                "{:>3} {:>8} {:>10} {:>9.3?} {:>8} {:>10} {:>9.3?} {:>7.3}",
                k,
                models.hdta.len(),
                h.stats.explored,
                th,
                models.interleaved.len(),
                i.stats.explored,
                ti,
                h.stats.explored as f64 / i.stats.explored.max(1) as f64
            );
        } else {
            println!(
                "{:>3} {:>8} {:>10} {:>10} {:>9.3?}",
                k,
                models.hdta.len(),
                h.stats.explored,
                h.stats.stored,
                th
            );
        }
        last = Some(models.hdta);
    }
    if let (Some(p), Some(m)) = (emit, last) {
        write(p, &write_hdta(&m))?;
    }
    Ok(())
}

/// `Ok(true)` maps to exit code 0, `Ok(false)` to 1.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate { file } => validate(&file).map(|_| true),
        Command::Reach {
            file,
            engine,
            trace,
            rule,
            max_region_constant,
            depth,
        } => reach(
            &file,
            engine,
            trace.as_deref(),
            rule,
            max_region_constant,
            depth,
        ),
        Command::Zonegraph { file, dot, rule } => {
            let m = load_hdta(&file)?;
            let g = zone_graph_export(
                &m,
                ZoneOptions {
                    rule: rule.into(),
                    ..Default::default()
                },
            );
            emit(dot.as_deref(), &zone_graph_dot(&m, &g))?;
            if dot.is_some() {
                println!("{} nodes, {} edges", g.nodes.len(), g.edges.len());
            }
            Ok(true)
        }
        Command::Regiongraph {
            file,
            dot,
            max_region_constant,
        } => {
            let m = load_hdta(&file)?;
            let g = region_graph(
                &m,
                RegionOptions {
                    max_constant: max_region_constant,
                    ..Default::default()
                },
            )?;
            emit(dot.as_deref(), &region_graph_dot(&m, &g))?;
            if dot.is_some() {
                println!("{} nodes, {} edges", g.nodes.len(), g.edges.len());
            }
            Ok(true)
        }
        Command::Product {
            left,
            right,
            output,
            rename_clocks,
        } => {
            let policy = if rename_clocks {
                ClockPolicy::Prefix
            } else {
                ClockPolicy::Reject
            };
            let p = tensor(&load_hdta(&left)?, &load_hdta(&right)?, policy)?;
            write(&output, &write_hdta(&p))?;
            println!("{} cubes, dimension {}", p.len(), p.dimension());
            Ok(true)
        }
        Command::Convert {
            direction,
            input,
            output,
            unfold,
        } => {
            let text = read(&input)?;
            match direction {
                Direction::TaToHdta => {
                    let ta = parse_ta(&text).map_err(|e| anyhow!("{}:\n{e}", input.display()))?;
                    write(&output, &write_hdta(&ta_to_1dta(&ta)?))?;
                }
                Direction::HdtaToTa => {
                    let m = parse_hdta(&text).map_err(|e| anyhow!("{}:\n{e}", input.display()))?;
                    let ta = if unfold {
                        unfold_to_ta(&m)
                    } else {
                        one_dta_to_ta(&m)?
                    };
                    write(&output, &write_ta(&ta))?;
                }
            }
            Ok(true)
        }
        Command::Bench {
            bench:
                Bench::Milner {
                    n,
                    d,
                    big_d,
                    interleaved,
                    budget_secs,
                    emit,
                },
        } => bench_milner(
            n,
            d,
            big_d,
            interleaved,
            Duration::from_secs(budget_secs),
            emit.as_deref(),
        )
        .map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
