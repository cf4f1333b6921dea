//! Command-line front end and rate fitting.
//!
//! Results go to the output stream as CSV, diagnostics to the error stream.
//! Exit codes: 0 success, 1 validation or numerical failure, 2 usage error.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};

use crate::designopt::{optimize_from_seeds, Objective, OptResult};
use crate::error::{Error, Result};
use crate::fooling::{build_witness_with, WitnessOptions};
use crate::kernel::{build_coeffs, SpaceSpec};
use crate::pointset::{load_pointset, random_uniform, spiral_points, PointSet};
use crate::quaderr::{
    certificate_from_moments, gram_moments, validate_design, wce_from_moments, wce_heat_oracle, wce_with_table,
    HeatQuadrature,
};
use crate::specfun::{default_t_grid, verify_identities, DEFAULT_IDENTITY_TOL};

/// Header of every result table.
pub const CSV_HEADER: &str = "experiment,d,space,N,t,wce,tail,certificate,witness,seconds";
/// Placeholder for values that were not computed.
const MISSING: f64 = -1.0;
/// Default `remainder / norm²` bound for witnesses built from the command line.
pub const CLI_REMAINDER_TOL: f64 = 1e-2;

/// Least-squares fit of `ln v = a ln N + b ln ln N + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rms_residual: f64,
}

/// The free three-parameter fit and the fit with `a = -1/2` held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFits {
    pub free: RateFit,
    pub fixed_a: RateFit,
}

fn least_squares(rows: &[[f64; 2]], rhs: &[f64], cols: usize) -> Result<Vec<f64>> {
    let m = rows.len();
    let a = DMatrix::from_fn(m, cols + 1, |r, c| if c < cols { rows[r][c] } else { 1.0 });
    let b = DVector::from_column_slice(rhs);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::Degenerate("rate-fit design matrix is rank deficient".into()));
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::Degenerate(format!("least squares failed: {e}")))?;
    Ok(x.iter().copied().collect())
}

/// Fits `value ≈ e^c N^a (ln N)^b` by ordinary least squares in log space.
///
/// Needs at least 4 samples with `N ≥ 3` and positive values; all-equal `N`
/// is a degenerate design.
pub fn rate_fit(samples: &[(usize, f64)]) -> Result<RateFits> {
    if samples.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "rate fit needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    if let Some(&(n, v)) = samples.iter().find(|&&(n, v)| n < 3 || !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("rate fit needs N >= 3 and value > 0, got ({n}, {v})")));
    }
    if samples.iter().all(|&(n, _)| n == samples[0].0) {
        return Err(Error::Degenerate("all sample sizes are equal".into()));
    }
    let rows: Vec<[f64; 2]> = samples
        .iter()
        .map(|&(n, _)| {
            let ln = (n as f64).ln();
            [ln, ln.ln()]
        })
        .collect();
    let y: Vec<f64> = samples.iter().map(|&(_, v)| v.ln()).collect();
    let rms = |a: f64, b: f64, c: f64| {
        let ss: f64 = rows
            .iter()
            .zip(&y)
            .map(|(r, yk)| (yk - a * r[0] - b * r[1] - c).powi(2))
            .sum();
        (ss / rows.len() as f64).sqrt()
    };
    // ln N and ln ln N can be nearly collinear over short ranges; a
    // rank-deficient free fit is reported as degenerate
    let p = least_squares(&rows, &y, 2)?;
    let free = RateFit {
        a: p[0],
        b: p[1],
        c: p[2],
        rms_residual: rms(p[0], p[1], p[2]),
    };
    let shifted: Vec<f64> = rows.iter().zip(&y).map(|(r, yk)| yk + 0.5 * r[0]).collect();
    let only_b: Vec<[f64; 2]> = rows.iter().map(|r| [r[1], 0.0]).collect();
    let q = least_squares(&only_b, &shifted, 1)?;
    let fixed_a = RateFit {
        a: -0.5,
        b: q[0],
        c: q[1],
        rms_residual: rms(-0.5, q[0], q[1]),
    };
    Ok(RateFits { free, fixed_a })
}

/// One line of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub d: usize,
    pub space: String,
    pub n: usize,
    /// Design strength, or -1.
    pub t: i64,
    pub wce: f64,
    /// Bound on the squared truncation error.
    pub tail: f64,
    /// Certified lower bound on `wce²`.
    pub certificate: f64,
    pub witness: f64,
    pub seconds: f64,
}

impl ResultRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:e},{:e},{:e},{:e},{:.3}",
            self.experiment,
            self.d,
            self.space,
            self.n,
            self.t,
            self.wce,
            self.tail,
            self.certificate,
            self.witness,
            self.seconds
        )
    }
}

#[derive(Parser, Debug)]
#[command(name = "sphwce", version, about = "Worst-case cubature errors on spheres")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct PointsArgs {
    /// Point file: one unit vector per line, optional trailing weight.
    #[arg(long)]
    points: PathBuf,
    /// Sphere dimension (`S^d` in `R^{d+1}`).
    #[arg(long)]
    d: usize,
}

#[derive(Args, Debug, Clone)]
struct WitnessArgs {
    /// Also build a fooling witness.
    #[arg(long)]
    witness: bool,
    /// Half the number of packing caps (defaults to N).
    #[arg(long = "M")]
    m: Option<usize>,
    /// Seed of the packing candidates.
    #[arg(long = "witness-seed")]
    witness_seed: Option<u64>,
    /// Truncation degree of the witness norm (defaults to 300/β).
    #[arg(long = "witness-L")]
    witness_l: Option<usize>,
    /// Largest accepted norm remainder as a fraction of the norm².
    #[arg(long = "max-remainder", default_value_t = CLI_REMAINDER_TOL)]
    max_remainder: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Worst-case error of a rule.
    Wce {
        #[command(flatten)]
        pts: PointsArgs,
        /// `log:<gamma>` or `sob:<s>`.
        #[arg(long)]
        space: String,
        #[arg(long = "L")]
        l: usize,
        /// Evaluate pair by pair instead of through the Gram moments.
        #[arg(long)]
        pairwise: bool,
        /// Design strength to report in the t column.
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Report wall-clock seconds instead of 0.
        #[arg(long)]
        timing: bool,
    },
    /// Gram moments `m_0..m_L`.
    Moments {
        #[command(flatten)]
        pts: PointsArgs,
        #[arg(long = "L")]
        l: usize,
    },
    /// Checks whether a rule is a spherical t-design; exit 1 if not.
    ValidateDesign {
        #[command(flatten)]
        pts: PointsArgs,
        #[arg(long)]
        t: usize,
        /// Tolerance on the moments (default 1e-10·N).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Per-degree lower bound on the squared worst-case error.
    Certificate {
        #[command(flatten)]
        pts: PointsArgs,
        #[arg(long)]
        space: String,
        #[arg(long = "L")]
        l: usize,
    },
    /// Bump-function lower bound on the worst-case error.
    Witness {
        #[command(flatten)]
        pts: PointsArgs,
        #[arg(long)]
        space: String,
        #[arg(long = "M")]
        m: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long = "max-remainder", default_value_t = CLI_REMAINDER_TOL)]
        max_remainder: f64,
        #[arg(long)]
        timing: bool,
    },
    /// Writes a point file.
    Generate {
        #[command(subcommand)]
        method: Generate,
        /// Output file (standard output if absent).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Checks the polynomial identities; exit 0 iff all pass.
    Identities {
        #[arg(long)]
        d: usize,
        #[arg(long = "Lmax")]
        l_max: usize,
        #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
        tol: f64,
    },
    /// Worst-case errors over a family of rules plus rate fits.
    Rates {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        space: String,
        /// Comma-separated sizes (random, spiral, distance families).
        #[arg(long = "N", value_delimiter = ',')]
        n: Vec<usize>,
        /// Comma-separated strengths (design family, N = t^d).
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long = "L", default_value_t = 2000)]
        l: usize,
        #[arg(long)]
        seed: u64,
        /// Restarts per optimised rule.
        #[arg(long, default_value_t = 3)]
        restarts: u64,
        #[arg(long = "max-iter", default_value_t = 2000)]
        max_iter: usize,
        #[command(flatten)]
        witness: WitnessArgs,
        #[arg(long)]
        timing: bool,
    },
    /// Sobolev worst-case error through the heat-kernel integral.
    HeatOracle {
        #[command(flatten)]
        pts: PointsArgs,
        /// `sob:<s>`.
        #[arg(long)]
        space: String,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Uniform random points.
    Random {
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Spiral points on S².
    Spiral {
        #[arg(long = "N")]
        n: usize,
    },
    /// Optimised points from seeded random starts.
    Optimize {
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum)]
        objective: ObjectiveKind,
        /// Space of the energy objective.
        #[arg(long)]
        space: Option<String>,
        /// Truncation degree of the energy objective.
        #[arg(long = "L", default_value_t = 200)]
        l: usize,
        /// Exponent of the distance objective.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Strength of the design objective.
        #[arg(long)]
        t: Option<usize>,
        /// Comma-separated restart seeds.
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        #[arg(long = "max-iter", default_value_t = 2000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ObjectiveKind {
    Energy,
    Distance,
    Design,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Random,
    Spiral,
    Design,
    Distance,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run_command<W: Write, E: Write>(args: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be >= 1");
            return 2;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    // the streams may not be Send; buffer them inside the pool
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(cli.command, &mut obuf, &mut ebuf));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn read_points(path: &Path, d: usize) -> Result<PointSet> {
    let f = File::open(path)?;
    load_pointset(BufReader::new(f), d)
}

fn seconds(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

fn witness_value(x: &PointSet, space: &SpaceSpec, args: &WitnessArgs, err: &mut impl Write) -> Result<f64> {
    if !args.witness {
        return Ok(MISSING);
    }
    let seed = args
        .witness_seed
        .ok_or_else(|| Error::InvalidArgument("--witness requires --witness-seed".into()))?;
    let opts = WitnessOptions {
        remainder_tol: args.max_remainder,
        ..Default::default()
    };
    let w = build_witness_with(x, space, args.m.unwrap_or(x.len()), args.witness_l, seed, &opts)?;
    if !w.valid {
        let _ = writeln!(err, "warning: witness failed its validity checks");
    }
    Ok(w.witness)
}

/// Full row for one rule: both wce paths share the Gram moments.
fn evaluate_rule(
    experiment: &str,
    x: &PointSet,
    space: &SpaceSpec,
    degree: usize,
    t: Option<usize>,
    witness: &WitnessArgs,
    err: &mut impl Write,
) -> Result<ResultRow> {
    let table = build_coeffs(space, degree, false)?;
    let moments = gram_moments(x, degree);
    let rep = wce_from_moments(x, &table, &moments);
    let certificate = match certificate_from_moments(x, &table, &moments) {
        Ok(c) => c.bound_sq,
        Err(Error::SignedWeights { .. }) => MISSING,
        Err(e) => return Err(e),
    };
    Ok(ResultRow {
        experiment: experiment.to_string(),
        d: x.d(),
        space: space.to_string(),
        n: x.len(),
        t: t.map_or(-1, |v| v as i64),
        wce: rep.value,
        tail: rep.tail_bound_sq,
        certificate,
        witness: witness_value(x, space, witness, err)?,
        seconds: 0.0,
    })
}

fn dispatch<W: Write, E: Write>(cmd: Command, out: &mut W, err: &mut E) -> CmdResult {
    match cmd {
        Command::Wce {
            pts,
            space,
            l,
            pairwise,
            t,
            witness,
            timing,
        } => {
            let start = Instant::now();
            let sp = SpaceSpec::parse(pts.d, &space)?;
            let x = read_points(&pts.points, pts.d)?;
            let mut row = evaluate_rule("wce", &x, &sp, l, t, &witness, err)?;
            if pairwise {
                let rep = wce_with_table(&x, &build_coeffs(&sp, l, false)?);
                row.experiment = "wce-pairwise".into();
                row.wce = rep.value;
            }
            row.seconds = seconds(start, timing);
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", row.to_csv())?;
            Ok(0)
        }
        Command::Moments { pts, l } => {
            let x = read_points(&pts.points, pts.d)?;
            writeln!(out, "ell,moment")?;
            for (ell, m) in gram_moments(&x, l).iter().enumerate() {
                writeln!(out, "{ell},{m:e}")?;
            }
            Ok(0)
        }
        Command::ValidateDesign { pts, t, tol } => {
            let x = read_points(&pts.points, pts.d)?;
            let rep = validate_design(&x, t, tol)?;
            writeln!(out, "ell,moment")?;
            for (k, m) in rep.residuals.iter().enumerate() {
                writeln!(out, "{},{m:e}", k + 1)?;
            }
            let verdict = if rep.is_design { "is" } else { "is not" };
            writeln!(
                err,
                "rule {verdict} a {t}-design (max moment {:e}, tolerance {:e})",
                rep.max_residual, rep.tol
            )?;
            Ok(if rep.is_design { 0 } else { 1 })
        }
        Command::Certificate { pts, space, l } => {
            let sp = SpaceSpec::parse(pts.d, &space)?;
            let x = read_points(&pts.points, pts.d)?;
            let table = build_coeffs(&sp, l, false)?;
            let moments = gram_moments(&x, l);
            let cert = certificate_from_moments(&x, &table, &moments)?;
            writeln!(out, "ell_star,bound_sq")?;
            writeln!(out, "{},{:e}", cert.ell_star, cert.bound_sq)?;
            Ok(0)
        }
        Command::Witness {
            pts,
            space,
            m,
            seed,
            l,
            max_remainder,
            timing,
        } => {
            let start = Instant::now();
            let sp = SpaceSpec::parse(pts.d, &space)?;
            let x = read_points(&pts.points, pts.d)?;
            let opts = WitnessOptions {
                remainder_tol: max_remainder,
                ..Default::default()
            };
            let w = build_witness_with(&x, &sp, m.unwrap_or(x.len()), l, seed, &opts)?;
            writeln!(out, "N,M,kept,beta,L,integral,norm,remainder_sq,witness,valid,seconds")?;
            writeln!(
                out,
                "{},{},{},{:e},{},{:e},{:e},{:e},{:e},{},{:.3}",
                x.len(),
                m.unwrap_or(x.len()),
                w.kept(),
                w.beta,
                w.degree(),
                w.integral,
                w.norm,
                w.remainder_sq,
                w.witness,
                w.valid,
                seconds(start, timing)
            )?;
            Ok(if w.valid { 0 } else { 1 })
        }
        Command::Generate { method, out: path } => {
            let x = generate(method, err)?;
            match path {
                Some(p) => x.write_to(File::create(p)?)?,
                None => x.write_to(&mut *out)?,
            }
            Ok(0)
        }
        Command::Identities { d, l_max, tol } => {
            let rep = verify_identities(d, l_max, &default_t_grid(), tol)?;
            writeln!(out, "identity,params,max_residual")?;
            for c in &rep.checks {
                writeln!(out, "{},{},{:e}", c.identity, c.params, c.max_residual)?;
            }
            let verdict = if rep.passed { "pass" } else { "FAIL" };
            writeln!(err, "{verdict}: max residual {:e}, tolerance {:e}", rep.max_residual(), rep.tol)?;
            Ok(if rep.passed { 0 } else { 1 })
        }
        Command::Rates {
            family,
            d,
            space,
            n,
            t,
            l,
            seed,
            restarts,
            max_iter,
            witness,
            timing,
        } => rates(
            RatesArgs {
                family,
                d,
                space,
                sizes: n,
                strengths: t,
                degree: l,
                seed,
                restarts,
                max_iter,
                witness,
                timing,
            },
            out,
            err,
        ),
        Command::HeatOracle { pts, space, l, timing } => {
            let start = Instant::now();
            let sp = SpaceSpec::parse(pts.d, &space)?;
            let x = read_points(&pts.points, pts.d)?;
            let rep = wce_heat_oracle(&x, &sp, l, &HeatQuadrature::default())?;
            let row = ResultRow {
                experiment: "heat-oracle".into(),
                d: pts.d,
                space: sp.to_string(),
                n: x.len(),
                t: -1,
                wce: rep.value,
                tail: rep.tail_bound_sq,
                certificate: MISSING,
                witness: MISSING,
                seconds: seconds(start, timing),
            };
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", row.to_csv())?;
            Ok(0)
        }
    }
}

fn generate(method: Generate, err: &mut impl Write) -> Result<PointSet> {
    match method {
        Generate::Random { d, n, seed } => random_uniform(d, n, seed),
        Generate::Spiral { n } => spiral_points(n),
        Generate::Optimize {
            d,
            n,
            objective,
            space,
            l,
            alpha,
            t,
            seeds,
            max_iter,
            tol,
        } => {
            let obj = match objective {
                ObjectiveKind::Energy => {
                    let text = space.ok_or_else(|| Error::InvalidArgument("energy objective needs --space".into()))?;
                    Objective::KernelEnergy {
                        space: SpaceSpec::parse(d, &text)?,
                        degree: l,
                    }
                }
                ObjectiveKind::Distance => Objective::DistanceSum { alpha },
                ObjectiveKind::Design => Objective::DesignResidual {
                    t: t.ok_or_else(|| Error::InvalidArgument("design objective needs --t".into()))?,
                },
            };
            let (seed, res) = optimize_from_seeds(d, n, &obj, &seeds, max_iter, tol)?;
            report_opt(err, seed, &res);
            Ok(res.points)
        }
    }
}

fn report_opt(err: &mut impl Write, seed: u64, res: &OptResult) {
    let _ = writeln!(
        err,
        "best seed {seed}: objective {:e} after {} iterations (converged: {})",
        res.objective(),
        res.iterations,
        res.converged
    );
}

struct RatesArgs {
    family: Family,
    d: usize,
    space: String,
    sizes: Vec<usize>,
    strengths: Vec<usize>,
    degree: usize,
    seed: u64,
    restarts: u64,
    max_iter: usize,
    witness: WitnessArgs,
    timing: bool,
}

/// Equal-weight rule of the given family; the strength is reported for designs.
fn family_rule(a: &RatesArgs, size: usize, err: &mut impl Write) -> Result<(PointSet, Option<usize>)> {
    let seeds: Vec<u64> = (0..a.restarts.max(1)).map(|k| a.seed + k).collect();
    match a.family {
        Family::Random => Ok((random_uniform(a.d, size, a.seed)?, None)),
        Family::Spiral => {
            if a.d != 2 {
                return Err(Error::InvalidArgument("spiral points live on S^2".into()));
            }
            Ok((spiral_points(size)?, None))
        }
        Family::Distance => {
            let (seed, res) =
                optimize_from_seeds(a.d, size, &Objective::DistanceSum { alpha: 1.0 }, &seeds, a.max_iter, 1e-12)?;
            report_opt(err, seed, &res);
            Ok((res.points, None))
        }
        Family::Design => {
            let t = size;
            let n = t.pow(a.d as u32);
            let (seed, res) =
                optimize_from_seeds(a.d, n, &Objective::DesignResidual { t }, &seeds, a.max_iter, 1e-14)?;
            report_opt(err, seed, &res);
            Ok((res.points, Some(t)))
        }
    }
}

fn rates<W: Write, E: Write>(a: RatesArgs, out: &mut W, err: &mut E) -> CmdResult {
    let sp = SpaceSpec::parse(a.d, &a.space)?;
    let list = if a.family == Family::Design {
        &a.strengths
    } else {
        &a.sizes
    };
    if list.is_empty() {
        let flag = if a.family == Family::Design { "--t" } else { "--N" };
        return Err(Failure::Usage(format!("{flag} list is empty")));
    }
    if a.witness.witness && a.witness.witness_seed.is_none() {
        return Err(Failure::Usage("--witness requires --witness-seed".into()));
    }
    let experiment = format!(
        "rates-{}",
        match a.family {
            Family::Random => "random",
            Family::Spiral => "spiral",
            Family::Design => "design",
            Family::Distance => "distance",
        }
    );
    writeln!(out, "{CSV_HEADER}")?;
    let mut samples = Vec::with_capacity(list.len());
    for &size in list {
        let start = Instant::now();
        let (x, t) = family_rule(&a, size, err)?;
        let mut row = evaluate_rule(&experiment, &x, &sp, a.degree, t, &a.witness, err)?;
        row.seconds = seconds(start, a.timing);
        writeln!(out, "{}", row.to_csv())?;
        samples.push((x.len(), row.wce));
    }
    writeln!(out)?;
    writeln!(out, "fit,a,b,c,rms_residual")?;
    match rate_fit(&samples) {
        Ok(f) => {
            for (name, r) in [("free", f.free), ("fixed_a", f.fixed_a)] {
                writeln!(out, "{name},{:e},{:e},{:e},{:e}", r.a, r.b, r.c, r.rms_residual)?;
            }
        }
        Err(e) => writeln!(err, "rate fit skipped: {e}")?,
    }
    Ok(0)
}
