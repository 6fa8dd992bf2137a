//! Command-line surface.
//!
//! One subcommand per capability; all real work happens in the library.
//! Exit codes: 0 success, 1 malformed input (bad flags or schema), 2
//! precondition failure (empty complex, disconnected support, class
//! violations), 3 internal invariant breach.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axioms::{check_a1, check_a2, check_a3_report, enumerate_axiom_clusters, is_cluster_tree, ClusterSet};
use crate::density::{convergence_experiment, discretize};
use crate::error::Error;
use crate::io;
use crate::metric::{merge_distortion_forests, merge_distortion_points, Distortion};
use crate::rational::rational_to_f64;
use crate::regions::Adjacency;
use crate::tree::{axiom_tree, sweep_forest, sweep_tree, Forest};

#[derive(Parser)]
#[command(
    name = "clustertree",
    version,
    about = "Level-set cluster trees, clustering axioms, and merge distortion for piecewise-constant densities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdjacencyArg {
    Touch,
    Neighbor,
}

impl From<AdjacencyArg> for Adjacency {
    fn from(a: AdjacencyArg) -> Self {
        match a {
            AdjacencyArg::Touch => Adjacency::Touch,
            AdjacencyArg::Neighbor => Adjacency::Neighbor,
        }
    }
}

#[derive(Args)]
struct TreeArgs {
    /// Complex JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Level-set tree: descending sweep over the touch graph.
    Hartigan(TreeArgs),
    /// Finest axiom tree: descending sweep over the neighbor graph.
    AxiomTree(TreeArgs),
    /// One tree per connected component of the chosen adjacency graph.
    Forest {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum, default_value = "neighbor")]
        adjacency: AdjacencyArg,
    },
    /// Check candidate clusters against the three axioms.
    Verify {
        /// Complex JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Clusters JSON file: {"clusters": [[ids]...]}.
        #[arg(long)]
        clusters: PathBuf,
        /// Optional JSON report path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Merge distortion distance between two trees or forests.
    Compare {
        tree1: PathBuf,
        tree2: PathBuf,
        /// Complex with geometry; enables sampled points mode.
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Number of sample points for points mode.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Discretize an analytic density onto a shifted grid.
    Discretize {
        /// Density spec JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Grid cell side length.
        #[arg(long)]
        scale: f64,
        /// Support threshold; defaults to L*scale*sqrt(d).
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long = "samples-per-axis", default_value_t = 11)]
        samples_per_axis: usize,
    },
    /// Discretize at a list of scales and report convergence to the exact
    /// merge heights (densities on the line only).
    Converge {
        /// Density spec JSON file.
        #[arg(long)]
        input: PathBuf,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Strictly decreasing list of scales.
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<f64>,
        #[arg(long = "pair-samples", default_value_t = 1000)]
        pair_samples: usize,
        #[arg(long = "samples-per-axis", default_value_t = 11)]
        samples_per_axis: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the bundled example inputs into a directory.
    Fixtures {
        #[arg(long)]
        output: PathBuf,
    },
}

/// Parses arguments, runs the command, and maps errors to exit codes.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter("CLUSTERTREE_LOG");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .try_init();
}

fn exit_code(e: &Error) -> i32 {
    match e {
        // Malformed input: bad files, bad numbers, schema violations.
        Error::Schema(_)
        | Error::Io(_)
        | Error::InvalidNumber(_)
        | Error::NotDyadic { .. }
        | Error::DimensionMismatch { .. } => 1,
        // Internal invariant breaches; not expected.
        Error::MalformedTree(_) => 3,
        // Everything else is a precondition failure.
        _ => 2,
    }
}

/// Writes atomically: temp file in the destination directory, then rename.
fn write_output(path: Option<&Path>, content: &str) -> crate::error::Result<()> {
    match path {
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let tmp = match dir {
                Some(d) => d.join(format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                )),
                None => PathBuf::from(format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                )),
            };
            {
                let mut f = std::fs::File::create(&tmp)?;
                f.write_all(content.as_bytes())?;
                f.sync_all()?;
            }
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> crate::error::Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn dispatch(command: Command) -> crate::error::Result<()> {
    match command {
        Command::Hartigan(args) => {
            let complex = io::complex_from_json(&read_input(&args.input)?)?;
            let tree = sweep_tree(&complex, Adjacency::Touch)?;
            let rendered = match args.format {
                FormatArg::Json => io::tree_to_json(&tree)?,
                FormatArg::Dot => io::tree_to_dot(&tree),
            };
            write_output(args.output.as_deref(), &rendered)
        }
        Command::AxiomTree(args) => {
            let complex = io::complex_from_json(&read_input(&args.input)?)?;
            let tree = axiom_tree(&complex)?;
            let rendered = match args.format {
                FormatArg::Json => io::tree_to_json(&tree)?,
                FormatArg::Dot => io::tree_to_dot(&tree),
            };
            write_output(args.output.as_deref(), &rendered)
        }
        Command::Forest { tree: args, adjacency } => {
            let complex = io::complex_from_json(&read_input(&args.input)?)?;
            let forest = sweep_forest(&complex, adjacency.into())?;
            log::info!("forest has {} trees", forest.len());
            let rendered = match args.format {
                FormatArg::Json => io::forest_to_json(&forest)?,
                FormatArg::Dot => io::forest_to_dot(&forest),
            };
            write_output(args.output.as_deref(), &rendered)
        }
        Command::Verify {
            input,
            clusters,
            output,
        } => {
            let complex = io::complex_from_json(&read_input(&input)?)?;
            let clusters = io::clusters_from_json(&read_input(&clusters)?)?;
            verify(&complex, &clusters, output.as_deref())
        }
        Command::Compare {
            tree1,
            tree2,
            complex,
            samples,
            seed,
            output,
        } => {
            let f1 = io::forest_from_json(&read_input(&tree1)?)?;
            let f2 = io::forest_from_json(&read_input(&tree2)?)?;
            let complex = complex
                .map(|p| io::complex_from_json(&read_input(&p)?))
                .transpose()?;
            compare(&f1, &f2, complex.as_ref(), samples, seed, output.as_deref())
        }
        Command::Discretize {
            input,
            output,
            scale,
            eta,
            samples_per_axis,
        } => {
            let spec = io::density_from_json(&read_input(&input)?)?;
            let eta = eta.unwrap_or_else(|| {
                spec.lipschitz_bound() * scale * (spec.dim() as f64).sqrt()
            });
            let out = discretize(&spec, eta, scale, samples_per_axis)?;
            log::info!(
                "discretized {} cells, certified sup-norm {:.6}",
                out.complex.len(),
                out.certified_sup_norm
            );
            write_output(output.as_deref(), &io::complex_to_json(&out.complex)?)
        }
        Command::Converge {
            input,
            output,
            scales,
            pair_samples,
            samples_per_axis,
            seed,
        } => {
            let spec = io::density_from_json(&read_input(&input)?)?;
            let report =
                convergence_experiment(&spec, &scales, pair_samples, samples_per_axis, seed)?;
            if !report.all_rows_within_bound() {
                eprintln!("warning: a row exceeded its certified bound");
            }
            write_output(output.as_deref(), &report.to_csv())
        }
        Command::Fixtures { output } => fixtures(&output),
    }
}

fn verify(
    complex: &crate::regions::RegionComplex,
    clusters: &[std::collections::BTreeSet<crate::regions::RegionId>],
    output: Option<&Path>,
) -> crate::error::Result<()> {
    #[derive(serde::Serialize)]
    struct ClusterVerdict {
        cluster: Vec<crate::regions::RegionId>,
        a1: bool,
        a2: bool,
        a3: bool,
        witness: Option<String>,
    }
    #[derive(serde::Serialize)]
    struct Report {
        schema: &'static str,
        verdicts: Vec<ClusterVerdict>,
        nested: bool,
        all_pass: bool,
    }

    let mut verdicts = Vec::new();
    for cluster in clusters {
        let a1 = check_a1(cluster, complex)?;
        let a2 = check_a2(cluster, complex)?;
        let a3_report = check_a3_report(cluster, complex)?;
        let witness = if !a1 {
            Some("not neighbor-connected inside the cluster".to_string())
        } else if !a3_report.holds {
            a3_report.blocking.as_ref().map(|(id, level)| {
                format!(
                    "outside neighbor {id} at level {level} >= cluster minimum {}{}",
                    a3_report.min_inside,
                    if a3_report.tie { " (exact tie)" } else { "" }
                )
            })
        } else {
            None
        };
        let ids: Vec<_> = cluster.iter().copied().collect();
        println!(
            "cluster {:?}: A1={} A2={} A3={}{}",
            ids,
            a1,
            a2,
            a3_report.holds,
            witness
                .as_ref()
                .map(|w| format!("  [{w}]"))
                .unwrap_or_default()
        );
        verdicts.push(ClusterVerdict {
            cluster: ids,
            a1,
            a2,
            a3: a3_report.holds,
            witness,
        });
    }
    let nested = is_cluster_tree(&ClusterSet::new(clusters.iter().cloned()));
    let all_pass = verdicts.iter().all(|v| v.a1 && v.a2 && v.a3);
    println!(
        "{} of {} clusters satisfy all axioms; collection {} nested",
        verdicts.iter().filter(|v| v.a1 && v.a2 && v.a3).count(),
        verdicts.len(),
        if nested { "is" } else { "is NOT" }
    );
    if complex.len() <= crate::axioms::ENUMERATION_CAP {
        let oracle = enumerate_axiom_clusters(complex)?;
        println!("complex admits {} axiom clusters in total", oracle.len());
    }
    if let Some(path) = output {
        let report = Report {
            schema: io::SCHEMA_VERSION,
            verdicts,
            nested,
            all_pass,
        };
        write_output(Some(path), &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

fn compare(
    f1: &Forest,
    f2: &Forest,
    complex: Option<&crate::regions::RegionComplex>,
    samples: Option<usize>,
    seed: u64,
    output: Option<&Path>,
) -> crate::error::Result<()> {
    #[derive(serde::Serialize)]
    struct CompareDoc {
        schema: &'static str,
        d_m: f64,
        d_m_exact: String,
        mode: &'static str,
        witness_pair: Option<(i64, i64)>,
    }

    let distortion: Distortion = match (samples, complex) {
        (Some(n), Some(complex)) => {
            use rand::Rng;
            use rand::SeedableRng;
            let (lo, hi) = complex.bounding_box().ok_or(Error::MissingGeometry)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    lo.iter()
                        .zip(&hi)
                        .map(|(&a, &b)| rng.random_range(a - 0.5..b + 0.5))
                        .collect()
                })
                .collect();
            merge_distortion_points(f1, complex, f2, complex, &points)?
        }
        (Some(_), None) => {
            return Err(Error::Schema(
                "points mode needs --complex with geometry".into(),
            ))
        }
        _ => merge_distortion_forests(f1, f2)?,
    };

    let doc = CompareDoc {
        schema: io::SCHEMA_VERSION,
        d_m: rational_to_f64(&distortion.value),
        d_m_exact: distortion.value.to_string(),
        mode: distortion.mode.name(),
        witness_pair: distortion.witness_pair,
    };
    let rendered = serde_json::to_string_pretty(&doc)?;
    match output {
        Some(path) => write_output(Some(path), &rendered),
        None => write_output(None, &rendered),
    }
}

fn fixtures(dir: &Path) -> crate::error::Result<()> {
    use crate::fixtures as fx;
    std::fs::create_dir_all(dir)?;
    let items: Vec<(&str, String)> = vec![
        (
            "pinch_complex.json",
            io::complex_to_json(&fx::pinch_complex())?,
        ),
        (
            "step_chain_complex.json",
            io::complex_to_json(&fx::step_chain_complex())?,
        ),
        (
            "step_chain_tree.json",
            io::tree_to_json(&fx::step_chain_tree())?,
        ),
        (
            "step_chain_tree_decorated.json",
            io::tree_to_json(&fx::step_chain_tree_decorated())?,
        ),
        (
            "bimodal_1d.json",
            io::density_to_json(&fx::bimodal_mixture_1d())?,
        ),
        (
            "bimodal_2d.json",
            io::density_to_json(&fx::bimodal_mixture_2d())?,
        ),
        (
            "scattered_blobs.json",
            io::complex_to_json(&fx::scattered_blobs(8))?,
        ),
        (
            "pinch_clusters.json",
            serde_json::to_string_pretty(&io::ClustersDoc {
                schema: Some(io::SCHEMA_VERSION.into()),
                clusters: vec![vec![1], vec![2], vec![1, 2], vec![1, 2, 3]],
            })?,
        ),
    ];
    for (name, content) in items {
        write_output(Some(&dir.join(name)), &content)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
