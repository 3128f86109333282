//! `k3lab`: command line reports over the exact-arithmetic library.
//!
//! Every invocation runs one task, prints its report to stdout, and exits
//! 0 when all checks pass, 1 when a check fails, and 2 when the request
//! itself is malformed. Wall time goes to stderr so report bytes stay
//! identical across machines and thread counts.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use k3lab_core::report::{dispatch, ReportFormat, TaskSpec};

#[derive(Parser)]
#[command(name = "k3lab", version, about = "Exact reports on a family of quartic surfaces")]
struct Cli {
    /// Also write the canonical JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Stdout encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pencil {
    Plus,
    Minus,
}

impl Pencil {
    fn name(self) -> &'static str {
        match self {
            Pencil::Plus => "plus",
            Pencil::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Chain,
    Brute,
    Both,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Chain => "chain",
            Method::Brute => "brute",
            Method::Both => "both",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Quadric systems: equations, minors, smoothness, solution families.
    Buchi {
        #[command(subcommand)]
        cmd: BuchiCmd,
    },
    /// The two-parameter quartic family: lines, graphs, quadrics, symmetry.
    Kummer {
        #[command(subcommand)]
        cmd: KummerCmd,
    },
    /// Intersection lattices, discriminant forms, Mordell-Weil groups.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Point counts, zeta factors, and Galois-image data.
    Arith {
        #[command(subcommand)]
        cmd: ArithCmd,
    },
    /// Run the staged verification battery.
    SelfTest {
        /// quick caps the arithmetic at small primes; full lifts the caps.
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
    },
}

#[derive(Subcommand)]
enum BuchiCmd {
    /// Print the quadric system and its coefficient matrix.
    System {
        #[arg(long)]
        n: usize,
    },
    /// Compare closed-form and expansion minor determinants.
    Minors {
        #[arg(long)]
        n: usize,
        /// Check every column triple (the default when no triple is given).
        #[arg(long, conflicts_with_all = ["a", "b", "c"])]
        all: bool,
        #[arg(long, requires = "b", requires = "c")]
        a: Option<usize>,
        #[arg(long, requires = "a", requires = "c")]
        b: Option<usize>,
        #[arg(long, requires = "a", requires = "b")]
        c: Option<usize>,
    },
    /// Decide smoothness over one prime (0 means characteristic zero).
    Smooth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
    /// Evaluate the one-parameter solution family at a rational point.
    Family {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Search integer solutions up to a coordinate bound.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum KummerCmd {
    /// Print the three family quadrics at a member.
    System {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// List the 32 lines of a member.
    Lines {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Analyze the line intersection graph of a member.
    Graph {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Rank-four elimination quadrics and rank-three obstructions.
    Quadrics {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Brute-force the coordinate automorphisms of a member.
    Auts {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Classify a member by its symmetry locus.
    Locus {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Fiber decompositions of the distinguished member's conic pencils.
    Fibers {
        #[arg(long, value_enum)]
        which: Pencil,
        /// One base point (a scalar, field-element JSON, or "inf");
        /// omit to decompose every special fiber.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// Branch points and elliptic quotients of the genus-two curve.
    Genus2 {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Print the 34-class intersection matrix.
    Gram,
    /// Invariants of the intersection lattice, compared to a reference.
    Invariants {
        /// Reference lattice name, e.g. "U(4)+(-4)+E8+E8".
        #[arg(long)]
        name: Option<String>,
    },
    /// Mordell-Weil rank and torsion of one pencil.
    Mw {
        #[arg(long, value_enum)]
        fibration: Pencil,
    },
    /// Verify the recorded pairing tables against reference lattices.
    NsTables,
    /// Run the lattice assembly chain for one symmetry class.
    Chain {
        /// V4, D4, D6, 2D6, or S4t.
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand)]
enum ArithCmd {
    /// Scan for supersingular primes up to a bound.
    Scan {
        #[arg(long)]
        bound: u64,
    },
    /// Count points on the surface over one prime field.
    CountX {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Check the supersingular zeta factor at one prime.
    Zeta {
        #[arg(long)]
        p: u64,
    },
    /// Closure, index, and trace census of the mod-8 matrix group.
    Galois,
    /// Splitting data of the degree-four field.
    K4,
}

fn member_spec(task: &str, t: &str, s: &str) -> TaskSpec {
    TaskSpec::new(task).with("t", t).with("s", s)
}

fn build_spec(command: &Command) -> TaskSpec {
    match command {
        Command::Buchi { cmd } => match cmd {
            BuchiCmd::System { n } => TaskSpec::new("buchi.system").with("n", &n.to_string()),
            BuchiCmd::Minors { n, a, b, c, .. } => {
                let mut spec = TaskSpec::new("buchi.minors").with("n", &n.to_string());
                if let (Some(a), Some(b), Some(c)) = (a, b, c) {
                    spec = spec
                        .with("a", &a.to_string())
                        .with("b", &b.to_string())
                        .with("c", &c.to_string());
                }
                spec
            }
            BuchiCmd::Smooth { n, p } => TaskSpec::new("buchi.smooth")
                .with("n", &n.to_string())
                .with("p", &p.to_string()),
            BuchiCmd::Family { alpha } => TaskSpec::new("buchi.family").with("alpha", alpha),
            BuchiCmd::Search { n, bound } => TaskSpec::new("buchi.search")
                .with("n", &n.to_string())
                .with("bound", &bound.to_string()),
        },
        Command::Kummer { cmd } => match cmd {
            KummerCmd::System { t, s } => member_spec("kummer.system", t, s),
            KummerCmd::Lines { t, s } => member_spec("kummer.lines", t, s),
            KummerCmd::Graph { t, s } => member_spec("kummer.graph", t, s),
            KummerCmd::Quadrics { t, s } => member_spec("kummer.quadrics", t, s),
            KummerCmd::Auts { t, s } => member_spec("kummer.auts", t, s),
            KummerCmd::Locus { t, s } => member_spec("kummer.locus", t, s),
            KummerCmd::Fibers { which, base } => {
                let mut spec = TaskSpec::new("kummer.fibers").with("which", which.name());
                if let Some(base) = base {
                    spec = spec.with("base", base);
                }
                spec
            }
            KummerCmd::Genus2 { t, s } => member_spec("kummer.genus2", t, s),
        },
        Command::Lattice { cmd } => match cmd {
            LatticeCmd::Gram => TaskSpec::new("lattice.gram"),
            LatticeCmd::Invariants { name } => {
                let mut spec = TaskSpec::new("lattice.invariants");
                if let Some(name) = name {
                    spec = spec.with("name", name);
                }
                spec
            }
            LatticeCmd::Mw { fibration } => {
                TaskSpec::new("lattice.mw").with("fibration", fibration.name())
            }
            LatticeCmd::NsTables => TaskSpec::new("lattice.ns-tables"),
            LatticeCmd::Chain { group } => TaskSpec::new("lattice.chain").with("group", group),
        },
        Command::Arith { cmd } => match cmd {
            ArithCmd::Scan { bound } => TaskSpec::new("arith.scan").with("bound", &bound.to_string()),
            ArithCmd::CountX { p, method } => TaskSpec::new("arith.count-x")
                .with("p", &p.to_string())
                .with("method", method.name()),
            ArithCmd::Zeta { p } => TaskSpec::new("arith.zeta").with("p", &p.to_string()),
            ArithCmd::Galois => TaskSpec::new("arith.galois"),
            ArithCmd::K4 => TaskSpec::new("arith.k4"),
        },
        Command::SelfTest { level } => TaskSpec::new("self-test").with(
            "level",
            match level {
                Level::Quick => "quick",
                Level::Full => "full",
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("error: thread pool already initialized");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();

    let mut spec = build_spec(&cli.command);
    spec.output = cli.json.clone();
    spec.threads = cli.threads;
    spec.format = match cli.format {
        Format::Json => ReportFormat::Json,
        Format::Text => ReportFormat::Text,
    };

    let report = match dispatch(&spec) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    print!("{}", report.emit(spec.format));
    if let Some(path) = &spec.output {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());

    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
