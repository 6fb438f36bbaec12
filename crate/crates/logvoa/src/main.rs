use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use logvoa::cache::MatrixCache;
use logvoa::config::{parse_weight, ConfigError, ModuleSel, RunConfig};
use logvoa::suites::{run_verify, Context};
use logvoa_core::fock::enumerate_basis;
use logvoa_core::models::{find_subsingular, FourCosetModule, ModuleKind};
use logvoa_core::{Params, Rational};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "logvoa", version, about = "Exact checks for logarithmic lattice-coset modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and write a report.
    Verify(Common),
    /// Graded dimensions of a module basis.
    Basis(Common),
    /// Graded dimensions of Ker Q ∩ Ker Q̃ on a coset.
    KernelDims {
        #[command(flatten)]
        common: Common,
        /// `VL`, `M`, or a residue k (charge kα/N).
        #[arg(long, default_value = "VL")]
        coset: String,
    },
    /// Solve for the subsingular vector of MV(p,p').
    Subsingular(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    p: u32,
    #[arg(long = "pprime")]
    p_prime: u32,
    #[arg(long, default_value = "6", value_parser = parse_weight)]
    max_weight: Rational,
    #[arg(long, value_enum, default_value = "all")]
    module: ModuleSel,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Include the weight (2p-1)(2p'-1) primary count.
    #[arg(long)]
    stretch: bool,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            p: self.p,
            p_prime: self.p_prime,
            max_weight: self.max_weight,
            module: self.module,
            cache_dir: self.cache_dir.clone(),
            out: self.out.clone(),
            jobs: self.jobs,
            stretch: self.stretch,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, coset) = match &cli.command {
        Command::Verify(c) | Command::Basis(c) | Command::Subsingular(c) => (c, None),
        Command::KernelDims { common, coset } => (common, Some(coset.as_str())),
    };
    let config = common.config();
    let params = match config.validate() {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let code = pool.install(|| match &cli.command {
        Command::Verify(_) => verify(&config, params),
        Command::Basis(_) => basis(&config, params),
        Command::KernelDims { .. } => kernel_dims(&config, params, coset.unwrap_or("VL")),
        Command::Subsingular(_) => subsingular(params),
    });
    eprintln!("elapsed: {:.2?}", start.elapsed());
    code
}

fn config_error(e: ConfigError) -> ExitCode {
    eprintln!("configuration error: {e}");
    ExitCode::from(2)
}

fn open_cache(config: &RunConfig) -> Result<Option<MatrixCache>, ExitCode> {
    match &config.cache_dir {
        None => Ok(None),
        Some(d) => MatrixCache::open(d).map(Some).map_err(|e| {
            eprintln!("cannot open cache {}: {e}", d.display());
            ExitCode::from(2)
        }),
    }
}

fn verify(config: &RunConfig, params: Params) -> ExitCode {
    let cache = match open_cache(config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = run_verify(config, params, cache);
    print!("{}", report.to_text());
    if let Some(path) = &config.out {
        if let Err(e) = std::fs::write(path, report.to_json_string()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn basis(config: &RunConfig, params: Params) -> ExitCode {
    let graded = match config.module {
        ModuleSel::V => FourCosetModule::v(params).basis(config.max_weight),
        ModuleSel::Mv => FourCosetModule::mv(params).basis(config.max_weight),
        ModuleSel::Vl => logvoa_core::fock::GradedBasis::from_monomials(enumerate_basis(0, config.max_weight, &params), &params),
        ModuleSel::M => logvoa_core::fock::GradedBasis::from_monomials(
            enumerate_basis(params.half_alpha().k(), config.max_weight, &params),
            &params,
        ),
        other => {
            eprintln!("basis: --module must be V, MV, VL or M, got {}", other.as_str());
            return ExitCode::from(2);
        }
    };
    for (w, piece) in graded.iter() {
        println!("weight {w}: {}", piece.len());
    }
    ExitCode::SUCCESS
}

fn kernel_dims(config: &RunConfig, params: Params, coset: &str) -> ExitCode {
    let residue = match coset {
        "VL" => 0,
        "M" => params.half_alpha().k(),
        r => match r.parse::<i64>() {
            Ok(k) => k.rem_euclid(params.norm()),
            Err(_) => {
                eprintln!("configuration error: --coset must be VL, M or an integer residue");
                return ExitCode::from(2);
            }
        },
    };
    let cache = match open_cache(config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let ctx = Context { cache, ..Context::new(params, config.max_weight) };
    let weights: Vec<Rational> = logvoa_core::fock::GradedBasis::from_monomials(
        enumerate_basis(residue, config.max_weight, &params),
        &params,
    )
    .weights()
    .collect();
    let rows: Vec<_> = weights.par_iter().map(|&w| (w, ctx.kernel_piece(residue, w, None))).collect();
    let mut failed = false;
    for (w, r) in rows {
        match r {
            Ok(k) => println!("weight {w}: {} (ambient {})", k.dim(), k.ambient_dim),
            Err(e) => {
                failed = true;
                println!("weight {w}: error {e}");
            }
        }
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn subsingular(params: Params) -> ExitCode {
    let engine = logvoa_core::vertex::Engine::new(params);
    match find_subsingular(&engine) {
        Ok(s) => {
            println!("module: {}", ModuleKind::MV.as_str());
            println!("weight: {}", s.weight);
            println!("w = {}", s.w.render(&params));
            println!("Qw = {}", s.qw.render(&params));
            println!("target = {}", s.target.render(&params));
            println!("Q̃Qw = {}", s.qtilde_qw.render(&params));
            println!("N^2 w = {}", s.n2w.render(&params));
            if s.qw == s.target {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("no subsingular vector: {e}");
            ExitCode::from(1)
        }
    }
}
