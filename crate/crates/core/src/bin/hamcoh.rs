use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use hamcoh::algebra::{AlgebraSpec, Family, Grading, LiePAlgebra};
use hamcoh::cohomology::{
    self, cocycle_representatives, compute_box, full_table, render_cocycle, render_table,
    verify_propositions, ComputeOptions, PropFlags, RenderOptions,
};
use hamcoh::complex::{boundary_matrix, chain_dims, count_nonempty_boxes, enumerate_chain_basis};
use hamcoh::error::Error;
use hamcoh::linalg::{PivotStrategy, RankOptions};

/// Exact Chevalley-Eilenberg (co)homology of truncated Hamiltonian and
/// Poisson Lie p-algebras over GF(p).
#[derive(Parser)]
#[command(name = "hamcoh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Algebra family: po, h, h1, h2
    #[arg(long)]
    family: String,
    /// Number of indeterminates (even)
    #[arg(long, short)]
    n: usize,
    /// Odd prime characteristic
    #[arg(long, short)]
    p: u32,
    /// Grading: standard or symmetric
    #[arg(long, default_value = "symmetric")]
    grading: String,
}

impl SpecArgs {
    fn spec(&self) -> Result<AlgebraSpec, Error> {
        AlgebraSpec::new(
            Family::from_str(&self.family)?,
            self.n,
            self.p,
            Grading::from_str(&self.grading)?,
        )
    }
}

#[derive(Args, Clone)]
struct ComputeArgs {
    /// Apply proposition pruning: `all` or a comma list of p1,p2,p3
    #[arg(long)]
    props: Option<String>,
    /// Inclusive degree range `lo..hi` for computed boxes
    #[arg(long)]
    k_range: Option<String>,
    /// Inclusive grade range `lo..hi` for computed boxes
    #[arg(long)]
    g_range: Option<String>,
    /// Journal file (JSON lines); computed boxes are appended and reruns resume
    #[arg(long)]
    journal: Option<PathBuf>,
    /// Worker threads (default: HAMCOH_WORKERS env var or all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Abort a box once its elimination working set exceeds this budget
    #[arg(long)]
    memory_budget_mb: Option<usize>,
    /// Pivot strategy: markowitz or min-column
    #[arg(long, default_value = "markowitz")]
    strategy: String,
    /// Deterministic run identifier echoed into JSON output
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enable prop-3 pruning for the po family (after a full verification run)
    #[arg(long)]
    allow_po_pruning: bool,
}

impl ComputeArgs {
    fn flags(&self) -> Result<PropFlags, Error> {
        let Some(s) = &self.props else {
            return Ok(PropFlags::none());
        };
        if s == "all" {
            return Ok(PropFlags::all());
        }
        let mut flags = PropFlags::none();
        for part in s.split(',') {
            match part.trim() {
                "p1" => flags.p1 = true,
                "p2" => flags.p2 = true,
                "p3" => flags.p3 = true,
                other => {
                    return Err(Error::Config(format!(
                        "unknown proposition `{other}` (expected p1, p2, p3 or all)"
                    )))
                }
            }
        }
        Ok(flags)
    }

    fn rank_options(&self) -> Result<RankOptions, Error> {
        let strategy = match self.strategy.as_str() {
            "markowitz" => PivotStrategy::Markowitz,
            "min-column" => PivotStrategy::MinColumn,
            other => {
                return Err(Error::Config(format!("unknown pivot strategy `{other}`")))
            }
        };
        let mut opts = RankOptions { strategy, ..Default::default() };
        if let Some(mb) = self.memory_budget_mb {
            opts = opts.with_memory_budget_mb(mb);
        }
        Ok(opts)
    }

    fn compute_options(&self) -> Result<ComputeOptions, Error> {
        Ok(ComputeOptions {
            flags: self.flags()?,
            k_range: parse_range(self.k_range.as_deref())?,
            g_range: parse_range(self.g_range.as_deref())?,
            rank_options: self.rank_options()?,
            journal: self.journal.clone(),
            allow_po_pruning: self.allow_po_pruning,
        })
    }

    fn init_workers(&self) {
        let workers = self.workers.or_else(|| {
            std::env::var("HAMCOH_WORKERS").ok().and_then(|v| v.parse().ok())
        });
        if let Some(w) = workers {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
        }
    }
}

fn parse_range<T: FromStr + Copy>(s: Option<&str>) -> Result<Option<(T, T)>, Error> {
    let Some(s) = s else { return Ok(None) };
    let err = || Error::Config(format!("range must be written lo..hi, got `{s}`"));
    let (lo, hi) = s.split_once("..").ok_or_else(err)?;
    let lo = lo.trim().parse().map_err(|_| err())?;
    let hi = hi.trim().parse().map_err(|_| err())?;
    Ok(Some((lo, hi)))
}

#[derive(Args, Clone)]
struct RenderArgs {
    /// Output format: text, json or csv
    #[arg(long, default_value = "text")]
    format: String,
    /// Use "." instead of the UTF-8 middle dot
    #[arg(long)]
    ascii: bool,
    /// Merge equal g and -g rows into one `±g` row
    #[arg(long)]
    merged_rows: bool,
    /// Include the k = 0 column
    #[arg(long)]
    include_k0: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print dimensions, grade range and box counts for an algebra
    Info {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        include_k0: bool,
    },
    /// Run structural checks: algebra identities, d.d = 0, propositions
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        /// Also verify the symmetry, duality and mod-p vanishing patterns
        /// on the unpruned table
        #[arg(long)]
        check_props: bool,
        /// Skip the per-box d.d = 0 sweep (it enumerates all 2^N chains)
        #[arg(long)]
        skip_dd: bool,
    },
    /// Compute and render the full cohomology table
    Table {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Compute a single (g, k) box
    Box {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        compute: ComputeArgs,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short, allow_hyphen_values = true)]
        g: i64,
    },
    /// Print cocycle representatives of a (g, k) box
    Cocycles {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short, allow_hyphen_values = true)]
        g: i64,
        #[arg(long)]
        ascii: bool,
    },
    /// Emit basis, grades and structure constants as JSON
    DumpAlgebra {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Export one boundary matrix in coordinate text format
    ExportMatrix {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short, allow_hyphen_values = true)]
        g: i64,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// exit codes: 0 ok, 1 verification failure, 2 config error, 3 resource abort
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Error::MemoryBudget { .. }) => ExitCode::from(3),
        Err(e @ (Error::Config(_) | Error::InvalidSpec(_) | Error::NotOddPrime(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Info { spec, format, include_k0 } => {
            let spec = spec.spec()?;
            cmd_info(&spec, &format, include_k0)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { spec, compute, check_props, skip_dd } => {
            compute.init_workers();
            cmd_verify(&spec.spec()?, &compute, check_props, skip_dd)
        }
        Command::Table { spec, compute, render } => {
            compute.init_workers();
            cmd_table(&spec.spec()?, &compute, &render)
        }
        Command::Box { spec, compute, k, g } => {
            compute.init_workers();
            let alg = LiePAlgebra::build(spec.spec()?)?;
            let entry = compute_box(&alg, k, g, &compute.rank_options()?)?;
            println!("{}", serde_json::to_string_pretty(&entry).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Cocycles { spec, k, g, ascii } => {
            let alg = LiePAlgebra::build(spec.spec()?)?;
            let reps = cocycle_representatives(&alg, k, g)?;
            for rep in &reps {
                println!("{}", render_cocycle(&alg, rep, ascii));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DumpAlgebra { spec } => {
            let alg = LiePAlgebra::build(spec.spec()?)?;
            println!("{}", serde_json::to_string_pretty(&alg.dump_json()).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportMatrix { spec, k, g, out } => {
            let alg = LiePAlgebra::build(spec.spec()?)?;
            if k == 0 {
                return Err(Error::Config("export-matrix requires k >= 1".into()));
            }
            let target = enumerate_chain_basis(&alg, k - 1, g);
            let source = enumerate_chain_basis(&alg, k, g);
            let m = boundary_matrix(&alg, &target, &source)?;
            match out {
                Some(path) => {
                    let mut f = std::fs::File::create(path)?;
                    m.write_coord(alg.field.p(), &mut f)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    m.write_coord(alg.field.p(), &mut stdout.lock())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_info(spec: &AlgebraSpec, format: &str, include_k0: bool) -> Result<(), Error> {
    let n_dim = spec.dim();
    let total_chain_dim: u128 = 1u128 << n_dim;
    // grades come from the monomial basis directly; cheap even for large N
    let basis = hamcoh::algebra::build_basis(spec)?;
    let grades: Vec<i64> = basis
        .iter()
        .map(|m| match spec.grading {
            Grading::Standard => m.standard_grade(),
            Grading::Symmetric => m.symmetric_grade(),
        })
        .collect();
    let grade_range = grades.iter().map(|g| g.abs()).max().unwrap_or(0);
    let boxes = count_nonempty_boxes(&grades, include_k0);
    match format {
        "json" => {
            let v = serde_json::json!({
                "family": spec.family.to_string(),
                "n": spec.n,
                "p": spec.p,
                "grading": spec.grading.to_string(),
                "dim": n_dim,
                "grade_range": grade_range,
                "total_chain_dim": total_chain_dim.to_string(),
                "nonempty_boxes": boxes,
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        "text" => {
            println!("algebra:          {spec}");
            println!("dim N:            {n_dim}");
            println!("grade range r:    {grade_range}");
            println!("total chain dim:  {total_chain_dim}");
            println!("non-empty boxes:  {boxes} (k in [{}, N])", if include_k0 { 0 } else { 1 });
        }
        other => return Err(Error::Config(format!("unknown format `{other}`"))),
    }
    Ok(())
}

fn cmd_verify(
    spec: &AlgebraSpec,
    compute: &ComputeArgs,
    check_props: bool,
    skip_dd: bool,
) -> Result<ExitCode, Error> {
    let alg = LiePAlgebra::build(*spec)?;
    let report = alg.verify();
    print!("{report}");
    let mut ok = report.passed();

    if !skip_dd {
        if alg.dim() <= 16 {
            let dd = dd_zero(&alg)?;
            println!("{} boundary d.d = 0: all boxes", if dd { "PASS" } else { "FAIL" });
            ok &= dd;
        } else {
            println!("SKIP boundary d.d = 0: 2^{} chains (pass --skip-dd to silence)", alg.dim());
        }
    }

    if check_props {
        let table = full_table(
            &alg,
            &ComputeOptions {
                rank_options: compute.rank_options()?,
                journal: compute.journal.clone(),
                ..Default::default()
            },
        )?;
        let prop_report = verify_propositions(&alg, &table);
        print!("{prop_report}");
        ok &= prop_report.passed();
    }

    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dd_zero(alg: &LiePAlgebra) -> Result<bool, Error> {
    let dims = chain_dims(&alg.grades());
    let mut grades: Vec<i64> = dims.keys().map(|&(_, g)| g).collect();
    grades.sort_unstable();
    grades.dedup();
    for &g in &grades {
        for k in 2..=alg.dim() {
            if dims.get(&(k, g)).copied().unwrap_or(0) == 0 {
                continue;
            }
            let ck = enumerate_chain_basis(alg, k, g);
            let ck1 = enumerate_chain_basis(alg, k - 1, g);
            let ck2 = enumerate_chain_basis(alg, k - 2, g);
            let dk = boundary_matrix(alg, &ck1, &ck)?;
            let dk1 = boundary_matrix(alg, &ck2, &ck1)?;
            for j in 0..dk.cols() {
                let mut v = vec![0u32; dk.rows()];
                for (r, c) in dk.column(j) {
                    v[r as usize] = c;
                }
                if dk1.mul_vec(&v, &alg.field).iter().any(|&x| x != 0) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn cmd_table(spec: &AlgebraSpec, compute: &ComputeArgs, render: &RenderArgs) -> Result<ExitCode, Error> {
    let alg = LiePAlgebra::build(*spec)?;
    let table = full_table(&alg, &compute.compute_options()?)?;
    match render.format.as_str() {
        "text" => {
            let opts = RenderOptions {
                ascii: render.ascii,
                merged_rows: render.merged_rows,
                include_k0: render.include_k0,
            };
            print!("{}", render_table(&alg, &table, &opts));
            // H^0 footnote, mirroring the table convention
            if let Some(h0) = table.dim_h(0, 0) {
                if !render.include_k0 {
                    println!("(dim H^0_0 = {h0}, omitted from the table)");
                }
            }
        }
        "json" => {
            let entries: Vec<&cohomology::BoxEntry> = table.entries.values().collect();
            let v = serde_json::json!({
                "spec": {
                    "family": spec.family.to_string(),
                    "n": spec.n,
                    "p": spec.p,
                    "grading": spec.grading.to_string(),
                },
                "n_dim": table.n_dim,
                "seed": compute.seed,
                "homology_orientation": "dim H^k_g reported as homology rank of the boundary in degree k, grade g",
                "entries": entries,
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        "csv" => {
            let mut out = String::from("g,k,dim_c,rank_in,rank_out,dim_h,provenance,wall_time_ms\n");
            for e in table.entries.values() {
                let fmt_opt = |o: Option<u64>| o.map(|v| v.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    e.g,
                    e.k,
                    e.dim_c,
                    fmt_opt(e.rank_in),
                    fmt_opt(e.rank_out),
                    e.dim_h,
                    serde_json::to_value(e.provenance).unwrap().as_str().unwrap(),
                    e.wall_time_ms
                ));
            }
            let mut stdout = std::io::stdout();
            stdout.write_all(out.as_bytes())?;
        }
        other => return Err(Error::Config(format!("unknown format `{other}`"))),
    }
    Ok(ExitCode::SUCCESS)
}
