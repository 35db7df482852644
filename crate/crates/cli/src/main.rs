use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use bct_core::export::{self, ExportFormat};
use bct_core::orders::{self, DEFAULT_CLOSURE_LIMIT, DEFAULT_REPORT_LIMIT};
use bct_core::resolution::ChargeResolution;
use bct_core::{
    brane, curves, enumerate_bcts, gale_ryser_feasible, resolution, BctFamily, BinaryMatrix, CocharacterSpec,
    FiniteRelation, HwDirection, MarginPair, RelationKind, SweepConfig, TieDiagram,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bct", version, about = "Bruhat orders on binary contingency tables")]
struct Cli {
    /// Lift the member limit on transitive closures.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

// Aliases keep clap from reading these as repeated arguments.
type Ints = Vec<usize>;
type Kinds = Vec<RelationKind>;

#[derive(Args, Clone)]
struct Margins {
    /// Row sums, comma separated.
    #[arg(short = 'r', value_parser = parse_list)]
    r: Ints,
    /// Column sums, comma separated.
    #[arg(short = 'c', value_parser = parse_list)]
    c: Ints,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bruhat,
    Secondary,
    Geometric,
}

impl From<Kind> for RelationKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Bruhat => RelationKind::Bruhat,
            Kind::Secondary => RelationKind::Secondary,
            Kind::Geometric => RelationKind::Geometric,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
    Csv,
}

impl From<Format> for ExportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Dot => ExportFormat::Dot,
            Format::Json => ExportFormat::Json,
            Format::Csv => ExportFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Object {
    Family,
    Relation,
    Hasse,
    Curves,
}

#[derive(Subcommand)]
enum Command {
    /// Gale-Ryser feasibility of the margins.
    Feasible(#[command(flatten)] Margins),
    /// Number of tables with the given margins.
    Count(#[command(flatten)] Margins),
    /// List all tables in canonical order.
    Enumerate {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, value_enum, default_value = "text")]
        format: ListFormat,
    },
    /// Print one relation as (lower, upper) pairs.
    Order {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, value_enum, default_value = "secondary")]
        kind: Kind,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Option<CocharacterSpec>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Hasse diagram of one relation.
    Hasse {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, value_enum, default_value = "secondary")]
        kind: Kind,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Option<CocharacterSpec>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Attractive curve digraph for a cocharacter.
    Curves {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Option<CocharacterSpec>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Compare two relations on one family; exit 1 if they differ.
    Compare {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, value_parser = parse_kinds, default_value = "secondary,geometric")]
        kinds: Kinds,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Option<CocharacterSpec>,
        #[arg(long, default_value_t = DEFAULT_REPORT_LIMIT)]
        report_limit: usize,
    },
    /// Sweep all margin pairs up to a total, or test one pair of tables.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_total: usize,
        #[arg(long, value_parser = parse_kinds, default_value = "secondary,geometric")]
        kinds: Kinds,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Option<CocharacterSpec>,
        #[arg(long, default_value_t = DEFAULT_REPORT_LIMIT)]
        report_limit: usize,
        /// Two matrix files A and B; reports whether A <= B in each relation.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<PathBuf>>,
    },
    /// Brane diagram calculus.
    Brane {
        #[command(subcommand)]
        command: BraneCommand,
    },
    /// Column resolutions of a table.
    Resolve {
        #[arg(long)]
        matrix: PathBuf,
        /// 1-based column to split.
        #[arg(long, required_unless_present = "maximal")]
        column: Option<usize>,
        #[arg(long, value_parser = parse_list, required_unless_present = "maximal")]
        split: Option<Ints>,
        #[arg(long, conflicts_with_all = ["column", "split"])]
        maximal: bool,
    },
    /// Write a computed object in dot, json or csv form.
    Export {
        #[command(flatten)]
        margins: Margins,
        #[arg(long, value_enum)]
        object: Object,
        #[arg(long, value_enum, default_value = "secondary")]
        kind: Kind,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Option<CocharacterSpec>,
        #[arg(long)]
        format: String,
    },
}

#[derive(Subcommand)]
enum BraneCommand {
    /// NS5 and D5 charges of a diagram.
    Charges { diagram: String },
    /// One Hanany-Witten transition at a 1-based position.
    Hw {
        diagram: String,
        #[arg(long)]
        pos: usize,
        #[arg(long, value_parser = parse_direction)]
        dir: HwDirection,
    },
    /// Separated diagram with the given charges.
    Separated(#[command(flatten)] Margins),
    /// Tie diagrams of a diagram.
    Ties {
        diagram: String,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Table of a tie diagram given as a JSON file.
    Tie2bct { diagram: String, ties: PathBuf },
    /// Tie diagram of a table given as a matrix file.
    Bct2tie { diagram: String, matrix: PathBuf },
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

fn parse_sigma(s: &str) -> Result<CocharacterSpec, String> {
    CocharacterSpec::parse_one_line(s).map_err(|e| e.to_string())
}

fn parse_kinds(s: &str) -> Result<Vec<RelationKind>, String> {
    s.split(',').map(|t| t.trim().parse()).collect()
}

fn parse_direction(s: &str) -> Result<HwDirection, String> {
    s.parse().map_err(|e: brane::BraneError| e.to_string())
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct InvalidInput(anyhow::Error);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(InvalidInput(e.into()))
}

struct Limits {
    closure_limit: usize,
}

impl Margins {
    fn pair(&self) -> Result<MarginPair> {
        MarginPair::new(self.r.clone(), self.c.clone()).map_err(invalid)
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(invalid)
}

fn read_matrix(path: &Path) -> Result<BinaryMatrix> {
    BinaryMatrix::parse_any(&read_input(path)?).map_err(|e| invalid(anyhow!("{}: {e}", path.display())))
}

fn sigma_for(sigma: &Option<CocharacterSpec>, cols: usize) -> Result<CocharacterSpec> {
    match sigma {
        None => Ok(CocharacterSpec::identity(cols)),
        Some(s) if s.len() == cols => Ok(s.clone()),
        Some(s) => Err(invalid(anyhow!("permutation of length {} for {} columns", s.len(), cols))),
    }
}

fn timed_family(margins: &MarginPair) -> BctFamily {
    let start = Instant::now();
    let family = enumerate_bcts(margins);
    eprintln!("family size {} enumerated in {:.3?}", family.len(), start.elapsed());
    family
}

fn relation(ctx: &Limits, family: &BctFamily, kind: RelationKind, sigma: &CocharacterSpec) -> Result<FiniteRelation> {
    let start = Instant::now();
    let rel = orders::build_relation(family, kind, sigma, ctx.closure_limit).map_err(invalid)?;
    eprintln!("{} relation: {} pairs in {:.3?}", kind.name(), rel.pair_count(), start.elapsed());
    Ok(rel)
}

macro_rules! out {
    ($($arg:tt)*) => {
        write!(std::io::stdout().lock(), $($arg)*)?
    };
}

macro_rules! outln {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout().lock(), $($arg)*)?
    };
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn print_matrices<'a>(ms: impl IntoIterator<Item = &'a BinaryMatrix>) -> Result<()> {
    let mut first = true;
    for m in ms {
        if !first {
            outln!();
        }
        first = false;
        out!("{}", m.to_text());
    }
    Ok(())
}

fn write_object(ctx: &Limits, margins: &MarginPair, object: Object, kind: RelationKind, sigma: &Option<CocharacterSpec>, format: ExportFormat) -> Result<()> {
    let family = timed_family(margins);
    let sigma = sigma_for(sigma, margins.cols())?;
    let text = match object {
        Object::Family => match format {
            ExportFormat::Json => serde_json::to_string_pretty(&family.to_json())? + "\n",
            ExportFormat::Csv => export::family_csv(&family),
            ExportFormat::Dot => bail!(invalid(anyhow!("families have no dot form"))),
        },
        Object::Relation => {
            let rel = relation(ctx, &family, kind, &sigma)?;
            match format {
                ExportFormat::Json => serde_json::to_string_pretty(&export::relation_json(&family, &rel))? + "\n",
                ExportFormat::Csv => export::relation_csv(&family, &rel),
                ExportFormat::Dot => {
                    let h = orders::hasse(&rel).map_err(invalid)?;
                    export::hasse_dot(&family, &h)
                }
            }
        }
        Object::Hasse => {
            let h = if kind == RelationKind::Secondary {
                orders::secondary_hasse_direct(&family)
            } else {
                orders::hasse(&relation(ctx, &family, kind, &sigma)?).map_err(invalid)?
            };
            match format {
                ExportFormat::Dot => export::hasse_dot(&family, &h),
                ExportFormat::Json => serde_json::to_string_pretty(&export::hasse_json(&family, &h))? + "\n",
                ExportFormat::Csv => export::hasse_csv(&family, &h),
            }
        }
        Object::Curves => {
            let start = Instant::now();
            let digraph = curves::curve_digraph(&family, &sigma);
            eprintln!("{} attractive arcs in {:.3?}", digraph.arcs.len(), start.elapsed());
            match format {
                ExportFormat::Dot => export::curves_dot(&family, &digraph),
                ExportFormat::Json => serde_json::to_string_pretty(&export::curves_json(&family, &digraph))? + "\n",
                ExportFormat::Csv => export::curves_csv(&family, &digraph),
            }
        }
    };
    out!("{text}");
    Ok(())
}

fn verify_pair_files(ctx: &Limits, files: &[PathBuf], kinds: &[RelationKind], sigma: &Option<CocharacterSpec>) -> Result<ExitCode> {
    let a = read_matrix(&files[0])?;
    let b = read_matrix(&files[1])?;
    if a.margins() != b.margins() {
        return Err(invalid(anyhow!("the two tables have different margins")));
    }
    let margins = a.margins();
    let family = timed_family(&margins);
    let sigma = sigma_for(sigma, margins.cols())?;
    let (ia, ib) = (family.position(&a).unwrap(), family.position(&b).unwrap());
    let mut holds = serde_json::Map::new();
    let mut values = Vec::new();
    for &kind in kinds {
        let v = relation(ctx, &family, kind, &sigma)?.leq(ia, ib);
        holds.insert(kind.name().to_string(), json!(v));
        values.push(v);
    }
    let all_equal = values.windows(2).all(|w| w[0] == w[1]);
    print_json(&json!({
        "r": margins.r,
        "c": margins.c,
        "lower": a.to_rows(),
        "upper": b.to_rows(),
        "leq": holds,
        "all_equal": all_equal,
    }))?;
    Ok(if all_equal { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_brane(command: BraneCommand) -> Result<ExitCode> {
    let parse = |s: &str| brane::parse_diagram(s).map_err(invalid);
    match command {
        BraneCommand::Charges { diagram } => {
            let d = parse(&diagram)?;
            let m = d.charges().map_err(invalid)?;
            outln!("r: {}", join(&m.r));
            outln!("c: {}", join(&m.c));
        }
        BraneCommand::Hw { diagram, pos, dir } => {
            let d = parse(&diagram)?;
            if pos == 0 {
                return Err(invalid(anyhow!("positions are 1-based")));
            }
            outln!("{}", d.hw_step(pos - 1, dir).map_err(invalid)?);
        }
        BraneCommand::Separated(margins) => {
            outln!("{}", brane::separated_diagram(&margins.pair()?).map_err(invalid)?);
        }
        BraneCommand::Ties { diagram, count, .. } => {
            let d = parse(&diagram)?;
            let start = Instant::now();
            let ties = brane::enumerate_tie_diagrams(&d);
            eprintln!("{} tie diagrams in {:.3?}", ties.len(), start.elapsed());
            if count {
                outln!("{}", ties.len());
            } else {
                for t in &ties {
                    outln!("{}", t.to_json());
                }
            }
        }
        BraneCommand::Tie2bct { diagram, ties } => {
            let d = parse(&diagram)?;
            let t = TieDiagram::from_json(&read_input(&ties)?).map_err(invalid)?;
            out!("{}", brane::tie_to_bct(&d, &t).map_err(invalid)?.to_text());
        }
        BraneCommand::Bct2tie { diagram, matrix } => {
            let d = parse(&diagram)?;
            let m = read_matrix(&matrix)?;
            outln!("{}", brane::bct_to_tie(&d, &m).map_err(invalid)?.to_json());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = Limits { closure_limit: if cli.allow_large { usize::MAX } else { DEFAULT_CLOSURE_LIMIT } };
    match cli.command {
        Command::Feasible(m) => {
            let pair = MarginPair { r: m.r, c: m.c };
            outln!("{}", gale_ryser_feasible(&pair));
        }
        Command::Count(m) => {
            let family = timed_family(&m.pair()?);
            outln!("{}", family.len());
        }
        Command::Enumerate { margins, format } => {
            let family = timed_family(&margins.pair()?);
            match format {
                ListFormat::Text => print_matrices(family.iter())?,
                ListFormat::Json => outln!("{}", family.to_json()),
            }
        }
        Command::Order { margins, kind, sigma, format } => {
            write_object(&ctx, &margins.pair()?, Object::Relation, kind.into(), &sigma, format.into())?;
        }
        Command::Hasse { margins, kind, sigma, format } => {
            write_object(&ctx, &margins.pair()?, Object::Hasse, kind.into(), &sigma, format.into())?;
        }
        Command::Curves { margins, sigma, format } => {
            write_object(&ctx, &margins.pair()?, Object::Curves, RelationKind::Geometric, &sigma, format.into())?;
        }
        Command::Compare { margins, kinds, sigma, report_limit } => {
            if kinds.len() != 2 {
                return Err(invalid(anyhow!("compare takes exactly two kinds")));
            }
            let margins = margins.pair()?;
            let family = timed_family(&margins);
            let sigma = sigma_for(&sigma, margins.cols())?;
            let first = relation(&ctx, &family, kinds[0], &sigma)?;
            let second = relation(&ctx, &family, kinds[1], &sigma)?;
            let cmp = orders::compare_relations(&first, &second, report_limit.max(1)).map_err(invalid)?;
            let bits = |pairs: &[(usize, usize)]| -> Vec<[String; 2]> {
                pairs.iter().map(|&(u, l)| [family.get(l).bitstring(), family.get(u).bitstring()]).collect()
            };
            print_json(&json!({
                "r": margins.r,
                "c": margins.c,
                "family_size": family.len(),
                "first": cmp.first,
                "second": cmp.second,
                "equal": cmp.equal,
                "only_in_first_count": cmp.only_in_first_count,
                "only_in_second_count": cmp.only_in_second_count,
                "only_in_first": bits(&cmp.only_in_first),
                "only_in_second": bits(&cmp.only_in_second),
            }))?;
            if !cmp.equal {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { max_total, kinds, sigma, report_limit, pair } => {
            if let Some(files) = pair {
                return verify_pair_files(&ctx, &files, &kinds, &sigma);
            }
            if max_total == 0 || report_limit == 0 {
                return Err(invalid(anyhow!("--max-total and --report-limit must be at least 1")));
            }
            let config = SweepConfig { max_total, kinds, sigma, report_limit, closure_limit: ctx.closure_limit };
            let start = Instant::now();
            let report = bct_core::run_sweep(&config);
            eprintln!(
                "{} margin pairs checked, {} skipped, {} discrepancies in {:.3?}",
                report.pairs_checked,
                report.pairs_skipped,
                report.discrepancies,
                start.elapsed()
            );
            print_json(&report)?;
            if !report.all_equal {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Brane { command } => return run_brane(command),
        Command::Resolve { matrix, column, split, maximal } => {
            let m = read_matrix(&matrix)?;
            if maximal {
                print_matrices(resolution::maximal_resolutions(&m).iter())?;
            } else {
                let (column, split) = (column.unwrap(), split.unwrap());
                if column == 0 || split.len() != 2 {
                    return Err(invalid(anyhow!("--column is 1-based and --split takes two parts")));
                }
                let res = ChargeResolution::new(column - 1, split[0], split[1]);
                let fiber = resolution::column_resolutions(&m, res).map_err(invalid)?;
                print_matrices(fiber.iter().map(|x| &x.matrix))?;
            }
        }
        Command::Export { margins, object, kind, sigma, format } => {
            let format: ExportFormat = format.parse().map_err(|e: String| invalid(anyhow!(e)))?;
            write_object(&ctx, &margins.pair()?, object, kind.into(), &sigma, format)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvalidInput>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
