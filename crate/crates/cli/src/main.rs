//! `dpp`: command-line front end for the DPP sampling toolkit.
//!
//! Exit codes: 0 success (including expected 32-bit corruption reports),
//! 2 I/O or parse errors, 3 sampler errors, 4 structural validation
//! failures in 64-bit mode.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;

use dpp_core::blocked::{
    benchmark_csv, benchmark_suite, sample_blocked_with, sample_tiled_parallel_with,
    BenchVariant, BlockingConfig,
};
use dpp_core::elementary::{sample_elementary, sample_spectral, ProjectionKernel};
use dpp_core::io::{read_matrix_market, MmData};
use dpp_core::kernel::Sample;
use dpp_core::kernels::{
    aztec_kernel, decode_spanning_tree, decode_tiling, grid_graph, hex_graph,
    laplacian2d_kernel, random_admissible_hermitian_uniform, random_admissible_nonhermitian,
    ust_kernel, AztecDiamond, UndirectedGraph,
};
use dpp_core::oracle::{chi_square_compare, enumerate_probabilities};
use dpp_core::ppm::{render_spanning_tree, render_tiling};
use dpp_core::sampling::{greedy_map, sample_unblocked_with, SamplerOptions};
use dpp_core::sparse::{greedy_map_sparse, sample_sparse_hermitian_with, symbolic_analyze, SparseKernel};
use dpp_core::{MarginalKernel, RngStream, Scalar, Symmetry};

type C64 = Complex<f64>;

#[derive(Parser)]
#[command(name = "dpp", about = "Determinantal point process sampling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Working precision in bits (32 or 64).
    #[arg(long, default_value_t = 64)]
    precision: u32,
    /// Algorithm variant: unblocked | blocked | tiled | sparse | elementary
    /// | spectral | map.
    #[arg(long, default_value = "unblocked")]
    variant: String,
    /// Panel width for blocked variants.
    #[arg(long)]
    block_size: Option<usize>,
    /// Tile edge for trailing updates.
    #[arg(long)]
    tile_size: Option<usize>,
    /// Worker threads for the tiled variant (default: all).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a DPP from a Matrix Market kernel file or a builder.
    Sample {
        /// Matrix Market kernel file (array or coordinate format).
        kernel: Option<PathBuf>,
        /// Synthesized kernel: grid:WxH | hex:D | aztec:D |
        /// laplacian2d:WxH:SIGMA | random-hermitian:N |
        /// random-nonhermitian:N.
        #[arg(long)]
        builder: Option<String>,
        /// Sample file destination.
        #[arg(long, default_value = "sample.txt")]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sample a uniform spanning tree and render it.
    Ust {
        /// Graph spec: grid:WxH | hex:D.
        spec: String,
        /// Output image (binary P6); the sample file lands next to it.
        #[arg(long, default_value = "ust.ppm")]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sample a uniform domino tiling of the order-d Aztec diamond.
    Aztec {
        /// Diamond order d.
        d: usize,
        /// Output image (binary P6); the sample file lands next to it.
        #[arg(long, default_value = "aztec.ppm")]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Chi-square comparison of a sampler against brute-force enumeration.
    Validate {
        /// Matrix Market kernel file.
        kernel: Option<PathBuf>,
        #[arg(long)]
        builder: Option<String>,
        #[arg(long, default_value_t = 200_000)]
        trials: usize,
        #[arg(long, default_value_t = 1e-3)]
        significance: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Factorization benchmarks as CSV.
    Bench {
        /// Comma-separated problem sizes, e.g. 512,1024.
        #[arg(long, default_value = "1024")]
        sizes: String,
        /// Comma-separated variants, e.g. hermitian64,ldl64.
        #[arg(long = "variant", default_value = "hermitian-64")]
        variants: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// CSV destination (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        block_size: Option<usize>,
        #[arg(long)]
        tile_size: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Deterministic greedy maximum-likelihood subset.
    Map {
        kernel: Option<PathBuf>,
        #[arg(long)]
        builder: Option<String>,
        /// Optional sample file destination.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// Error carrying the process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = std::result::Result<T, Failure>;

fn io_err(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn sampler_err(e: dpp_core::DppError) -> Failure {
    Failure {
        code: 3,
        message: format!("sampler error: {e}"),
    }
}

fn structural_err(message: impl Into<String>) -> Failure {
    Failure {
        code: 4,
        message: message.into(),
    }
}

enum BuiltKernel {
    DenseReal(MarginalKernel<f64>),
    DenseComplex(MarginalKernel<C64>),
    Sparse(SparseKernel<f64>),
}

fn build_kernel(builder: &str, seed: u64) -> CliResult<BuiltKernel> {
    let bad = || io_err(format!("cannot parse builder spec '{builder}'"));
    let (name, rest) = match builder.split_once(':') {
        Some((n, r)) => (n, r),
        None => return Err(bad()),
    };
    match name {
        "grid" | "hex" => {
            let graph = parse_graph_spec(builder)?;
            let proj = ust_kernel(&graph).map_err(sampler_err)?;
            Ok(BuiltKernel::DenseReal(proj.kernel().clone()))
        }
        "aztec" => {
            let d: usize = rest.parse().map_err(|_| bad())?;
            let az = AztecDiamond::new(d);
            Ok(BuiltKernel::DenseComplex(
                aztec_kernel(&az).map_err(sampler_err)?,
            ))
        }
        "laplacian2d" => {
            let mut parts = rest.split(':');
            let dims = parts.next().ok_or_else(bad)?;
            let sigma: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let (w, h) = parse_dims(dims).ok_or_else(bad)?;
            Ok(BuiltKernel::Sparse(
                laplacian2d_kernel(w, h, sigma).map_err(sampler_err)?,
            ))
        }
        "random-hermitian" => {
            let n: usize = rest.parse().map_err(|_| bad())?;
            let mut rng = RngStream::new(seed ^ 0x9e3779b97f4a7c15);
            Ok(BuiltKernel::DenseComplex(
                random_admissible_hermitian_uniform(n, &mut rng).map_err(sampler_err)?,
            ))
        }
        "random-nonhermitian" => {
            let n: usize = rest.parse().map_err(|_| bad())?;
            let mut rng = RngStream::new(seed ^ 0x9e3779b97f4a7c15);
            Ok(BuiltKernel::DenseComplex(
                random_admissible_nonhermitian(n, &mut rng).map_err(sampler_err)?,
            ))
        }
        _ => Err(bad()),
    }
}

fn parse_dims(s: &str) -> Option<(usize, usize)> {
    let (w, h) = s.split_once('x')?;
    Some((w.parse().ok()?, h.parse().ok()?))
}

fn parse_graph_spec(spec: &str) -> CliResult<UndirectedGraph> {
    let bad = || io_err(format!("cannot parse graph spec '{spec}'"));
    let (name, rest) = spec.split_once(':').ok_or_else(bad)?;
    match name {
        "grid" => {
            let (w, h) = parse_dims(rest).ok_or_else(bad)?;
            if w < 1 || h < 1 {
                return Err(bad());
            }
            Ok(grid_graph(w, h))
        }
        "hex" => {
            let d: usize = rest.parse().map_err(|_| bad())?;
            if d < 1 {
                return Err(bad());
            }
            Ok(hex_graph(d))
        }
        _ => Err(bad()),
    }
}

fn load_kernel(path: &Path) -> CliResult<BuiltKernel> {
    let file = File::open(path)
        .map_err(|e| io_err(format!("cannot open {}: {e}", path.display())))?;
    match read_matrix_market(BufReader::new(file)) {
        Ok(MmData::DenseReal(m, sym)) => MarginalKernel::new(m, sym)
            .map(BuiltKernel::DenseReal)
            .map_err(|e| io_err(format!("invalid kernel: {e}"))),
        Ok(MmData::DenseComplex(m, sym)) => MarginalKernel::new(m, sym)
            .map(BuiltKernel::DenseComplex)
            .map_err(|e| io_err(format!("invalid kernel: {e}"))),
        Ok(MmData::SparseReal(k)) => Ok(BuiltKernel::Sparse(k)),
        Ok(MmData::SparseComplex(_)) => Err(io_err(
            "complex sparse kernels are not supported by this command",
        )),
        Err(e) => Err(io_err(format!("cannot parse {}: {e}", path.display()))),
    }
}

fn resolve_kernel(
    kernel: &Option<PathBuf>,
    builder: &Option<String>,
    seed: u64,
) -> CliResult<BuiltKernel> {
    match (kernel, builder) {
        (Some(path), None) => load_kernel(path),
        (None, Some(b)) => build_kernel(b, seed),
        _ => Err(io_err("provide exactly one of KERNEL or --builder")),
    }
}

fn blocking_config(common: &CommonOpts, n: usize) -> BlockingConfig {
    let mut cfg = BlockingConfig::for_order(n);
    if let Some(b) = common.block_size {
        cfg.block_size = b;
    }
    if let Some(t) = common.tile_size {
        cfg.tile_size = t;
    }
    cfg.tile_size = cfg.tile_size.max(cfg.block_size);
    cfg.thread_count = common.threads;
    cfg
}

fn sampler_options(precision: u32) -> SamplerOptions {
    // 32-bit runs clamp out-of-range pivots and keep going, so corrupted
    // large-problem samples surface as structural validation failures
    // rather than hard errors.
    if precision == 32 {
        SamplerOptions::lenient()
    } else {
        SamplerOptions::default()
    }
}

fn run_dense_variant<T: Scalar>(
    kernel: &MarginalKernel<T>,
    common: &CommonOpts,
) -> CliResult<Sample> {
    let opts = sampler_options(common.precision);
    let cfg = blocking_config(common, kernel.order());
    let mut rng = RngStream::new(common.seed);
    let result = match common.variant.as_str() {
        "unblocked" => sample_unblocked_with(kernel, &mut rng, &opts).map(|(s, _)| s),
        "blocked" => sample_blocked_with(kernel, &mut rng, &cfg, &opts).map(|(s, _)| s),
        "tiled" => sample_tiled_parallel_with(kernel, &mut rng, &cfg, &opts).map(|(s, _)| s),
        "spectral" => {
            if common.precision != 64 {
                return Err(io_err("the spectral variant is 64-bit only"));
            }
            sample_spectral(kernel, &mut rng)
        }
        "elementary" => {
            let proj = ProjectionKernel::new(kernel.clone()).map_err(sampler_err)?;
            sample_elementary(&proj, &mut rng).map(|es| {
                let mut kept = es.indices;
                kept.sort_unstable();
                let mut decisions = vec![false; kernel.order()];
                for &i in &kept {
                    decisions[i] = true;
                }
                Sample {
                    kept,
                    log_likelihood: es.log_likelihood,
                    pivots: Vec::new(),
                    decisions,
                }
            })
        }
        "map" => greedy_map(kernel).map(|(s, _)| s),
        other => return Err(io_err(format!("unknown variant '{other}'"))),
    };
    result.map_err(sampler_err)
}

fn sample_built(built: &BuiltKernel, common: &CommonOpts) -> CliResult<Sample> {
    match built {
        BuiltKernel::DenseReal(k) => {
            if common.precision == 32 {
                run_dense_variant(&k.cast::<f32>(), common)
            } else {
                run_dense_variant(k, common)
            }
        }
        BuiltKernel::DenseComplex(k) => {
            if common.precision == 32 {
                run_dense_variant(&k.cast::<Complex<f32>>(), common)
            } else {
                run_dense_variant(k, common)
            }
        }
        BuiltKernel::Sparse(k) => match common.variant.as_str() {
            "unblocked" | "sparse" => {
                let tree = symbolic_analyze(k, None).map_err(sampler_err)?;
                let mut rng = RngStream::new(common.seed);
                let opts = sampler_options(common.precision);
                sample_sparse_hermitian_with(k, &tree, &mut rng, &opts)
                    .map(|(s, _)| s)
                    .map_err(sampler_err)
            }
            "map" => {
                let tree = symbolic_analyze(k, None).map_err(sampler_err)?;
                greedy_map_sparse(k, &tree)
                    .map(|(s, _)| s)
                    .map_err(sampler_err)
            }
            other => Err(io_err(format!(
                "variant '{other}' does not apply to sparse kernels"
            ))),
        },
    }
}

fn write_sample_file(path: &Path, sample: &Sample) -> CliResult<()> {
    let file = File::create(path)
        .map_err(|e| io_err(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "loglik {}", sample.log_likelihood)?;
        let indices: Vec<String> = sample.kept.iter().map(|i| i.to_string()).collect();
        writeln!(w, "{}", indices.join(" "))?;
        Ok(())
    };
    write(&mut w).map_err(|e| io_err(format!("cannot write {}: {e}", path.display())))
}

fn sample_path_for(image: &Path) -> PathBuf {
    image.with_extension("sample.txt")
}

fn cmd_sample(
    kernel: &Option<PathBuf>,
    builder: &Option<String>,
    out: &Path,
    common: &CommonOpts,
) -> CliResult<()> {
    let built = resolve_kernel(kernel, builder, common.seed)?;
    let sample = sample_built(&built, common)?;
    write_sample_file(out, &sample)?;
    println!("loglik {}", sample.log_likelihood);
    println!("kept {}", sample.kept.len());
    Ok(())
}

fn cmd_ust(spec: &str, out: &Path, common: &CommonOpts) -> CliResult<()> {
    let graph = parse_graph_spec(spec)?;
    let proj = ust_kernel(&graph).map_err(sampler_err)?;
    let mut common = common.clone();
    if common.variant == "unblocked" {
        // default to the O(nk^2) projection sampler
        common.variant = "elementary".into();
    }
    let sample = sample_built(&BuiltKernel::DenseReal(proj.kernel().clone()), &common)?;
    let report = decode_spanning_tree(&graph, &sample.kept);
    let valid = report.is_spanning_tree();
    println!(
        "loglik {} edges {} valid {}",
        sample.log_likelihood,
        report.edge_count,
        valid
    );
    let img = render_spanning_tree(&graph, &sample.kept, 8);
    let file = File::create(out)
        .map_err(|e| io_err(format!("cannot write {}: {e}", out.display())))?;
    img.write_p6(&mut BufWriter::new(file)).map_err(sampler_err)?;
    write_sample_file(&sample_path_for(out), &sample)?;
    if !valid {
        if common.precision == 32 {
            println!("corrupted");
            return Ok(());
        }
        return Err(structural_err("sample is not a spanning tree"));
    }
    Ok(())
}

fn cmd_aztec(d: usize, out: &Path, common: &CommonOpts) -> CliResult<()> {
    if d < 1 {
        return Err(io_err("diamond order must be at least 1"));
    }
    let az = AztecDiamond::new(d);
    let kernel = aztec_kernel(&az).map_err(sampler_err)?;
    let mut common = common.clone();
    if common.variant == "elementary" || common.variant == "spectral" || common.variant == "sparse"
    {
        return Err(io_err(format!(
            "variant '{}' requires a hermitian kernel",
            common.variant
        )));
    }
    if common.variant == "unblocked" && az.edge_count() > 1024 {
        common.variant = "tiled".into();
    }
    let sample = sample_built(&BuiltKernel::DenseComplex(kernel), &common)?;
    let report = decode_tiling(&az, &sample.kept);
    println!(
        "loglik {} dominoes {} valid {}",
        sample.log_likelihood,
        sample.kept.len(),
        report.valid
    );
    let img = render_tiling(&az, &report, 8.max(512 / (2 * d)));
    let file = File::create(out)
        .map_err(|e| io_err(format!("cannot write {}: {e}", out.display())))?;
    img.write_p6(&mut BufWriter::new(file)).map_err(sampler_err)?;
    write_sample_file(&sample_path_for(out), &sample)?;
    if !report.valid {
        if common.precision == 32 {
            println!("corrupted");
            return Ok(());
        }
        return Err(structural_err("sample is not a perfect matching"));
    }
    Ok(())
}

fn cmd_validate(
    kernel: &Option<PathBuf>,
    builder: &Option<String>,
    trials: usize,
    significance: f64,
    common: &CommonOpts,
) -> CliResult<()> {
    let built = resolve_kernel(kernel, builder, common.seed)?;
    let dense = match &built {
        BuiltKernel::DenseReal(k) => k.to_c64(),
        BuiltKernel::DenseComplex(k) => k.to_c64(),
        BuiltKernel::Sparse(k) => {
            MarginalKernel::new(k.to_dense(), Symmetry::Hermitian)
                .map_err(|e| io_err(format!("invalid kernel: {e}")))?
                .to_c64()
        }
    };
    let dist = enumerate_probabilities(&dense).map_err(sampler_err)?;
    let mut seed = common.seed;
    let report = chi_square_compare(
        || {
            seed += 1;
            let mut c = common.clone();
            c.seed = seed;
            let s = sample_built(&built, &c).expect("sampler failure during validation");
            s.kept_bitmask()
        },
        &dist,
        trials,
        significance,
    );
    println!("{report}");
    if report.pass {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "chi-square validation failed".into(),
        })
    }
}

fn cmd_bench(
    sizes: &str,
    variants: &str,
    reps: usize,
    out: &Option<PathBuf>,
    block_size: Option<usize>,
    tile_size: Option<usize>,
    threads: Option<usize>,
) -> CliResult<()> {
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| io_err(format!("cannot parse sizes '{sizes}'")))?;
    let variants: Vec<BenchVariant> = variants
        .split(',')
        .map(|v| BenchVariant::parse(v.trim()))
        .collect::<dpp_core::Result<_>>()
        .map_err(|e| io_err(e.to_string()))?;
    let n_max = sizes.iter().copied().max().unwrap_or(1024);
    let mut cfg = BlockingConfig::for_order(n_max);
    if let Some(b) = block_size {
        cfg.block_size = b;
    }
    if let Some(t) = tile_size {
        cfg.tile_size = t;
    }
    cfg.thread_count = threads;
    cfg.validate().map_err(|e| io_err(e.to_string()))?;
    let rows = benchmark_suite(&sizes, &variants, reps, &cfg).map_err(sampler_err)?;
    let csv = benchmark_csv(&rows);
    match out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| io_err(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_map(
    kernel: &Option<PathBuf>,
    builder: &Option<String>,
    out: &Option<PathBuf>,
    common: &CommonOpts,
) -> CliResult<()> {
    let built = resolve_kernel(kernel, builder, common.seed)?;
    let mut c = common.clone();
    c.variant = "map".into();
    let sample = sample_built(&built, &c)?;
    println!("loglik {}", sample.log_likelihood);
    println!("kept {}", sample.kept.len());
    if let Some(path) = out {
        write_sample_file(path, &sample)?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Sample {
            kernel,
            builder,
            out,
            common,
        } => cmd_sample(kernel, builder, out, common),
        Command::Ust { spec, out, common } => cmd_ust(spec, out, common),
        Command::Aztec { d, out, common } => cmd_aztec(*d, out, common),
        Command::Validate {
            kernel,
            builder,
            trials,
            significance,
            common,
        } => cmd_validate(kernel, builder, *trials, *significance, common),
        Command::Bench {
            sizes,
            variants,
            reps,
            out,
            block_size,
            tile_size,
            threads,
        } => cmd_bench(sizes, variants, *reps, out, *block_size, *tile_size, *threads),
        Command::Map {
            kernel,
            builder,
            out,
            common,
        } => cmd_map(kernel, builder, out, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
