use clap::{Args, ValueEnum};
use halo_core::arith::{is_prime, parse_rational, Rational};
use halo_core::classical::Epsilon;
use halo_core::{Error, Result};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EpsArg {
    Trivial,
    Quadratic,
}

impl From<EpsArg> for Epsilon {
    fn from(e: EpsArg) -> Self {
        match e {
            EpsArg::Trivial => Epsilon::Trivial,
            EpsArg::Quadratic => Epsilon::Quadratic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 3)]
    pub p: u64,
    #[arg(long, default_value_t = 11)]
    pub l: u64,
    /// Component j of weight space.
    #[arg(long, default_value_t = 0)]
    pub component: u32,
    /// p-adic precision M.
    #[arg(long = "prec-p", default_value_t = 8)]
    pub prec_p: u32,
    /// T-adic precision K.
    #[arg(long = "prec-t", default_value_t = 48)]
    pub prec_t: usize,
    #[arg(long, default_value_t = 40)]
    pub nmax: usize,
    /// Boundary valuation v(beta) as a/b; repeatable.
    #[arg(long = "beta")]
    pub beta: Vec<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, value_enum, default_value_t = EpsArg::Trivial)]
    pub eps: EpsArg,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Truncation certification level: dropped Mahler degrees contribute only in m^level.
    #[arg(long = "trunc-level", default_value_t = 6)]
    pub trunc_level: u32,
    /// Number of Mahler degrees kept; derived from --trunc-level when absent.
    #[arg(long)]
    pub ndeg: Option<usize>,
    /// Progressions allowed when covering slope ratios; defaults to (p-1)st.
    #[arg(long = "ap-budget")]
    pub ap_budget: Option<usize>,
}

/// Validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub l: u64,
    pub j: u32,
    pub m: u32,
    pub k_prec: usize,
    pub n_max: usize,
    pub betas: Vec<Rational>,
    pub k: i64,
    pub eps: Epsilon,
    pub out: OutFormat,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
    pub trunc_level: u32,
    pub n_deg: Option<usize>,
    pub ap_budget: Option<usize>,
}

impl RunConfig {
    pub fn reference() -> Self {
        RunConfig {
            p: 3,
            l: 11,
            j: 0,
            m: 8,
            k_prec: 48,
            n_max: 40,
            betas: Vec::new(),
            k: 0,
            eps: Epsilon::Trivial,
            out: OutFormat::Json,
            cache_dir: None,
            jobs: 1,
            trunc_level: 6,
            n_deg: None,
            ap_budget: None,
        }
    }

    pub fn from_args(a: &RunArgs) -> Result<Self> {
        if a.p < 3 || !is_prime(a.p) {
            return Err(Error::Usage(format!("--p {} must be an odd prime", a.p)));
        }
        if !is_prime(a.l) || a.l % 12 != 11 {
            return Err(Error::Usage(format!("--l {} must be a prime congruent to 11 mod 12", a.l)));
        }
        if a.l == a.p {
            return Err(Error::Usage("--p and --l must differ".into()));
        }
        if a.nmax < 1 {
            return Err(Error::Usage("--nmax must be at least 1".into()));
        }
        if a.component as u64 >= a.p - 1 {
            return Err(Error::Usage(format!("--component must lie in 0..{}", a.p - 1)));
        }
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        let betas = a
            .beta
            .iter()
            .map(|s| match parse_rational(s) {
                Some(v) if v > zero && v < one => Ok(v),
                Some(_) => Err(Error::Usage(format!("--beta {s} must lie in (0, 1)"))),
                None => Err(Error::Usage(format!("--beta {s} is not a rational a/b"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RunConfig {
            p: a.p,
            l: a.l,
            j: a.component,
            m: a.prec_p,
            k_prec: a.prec_t,
            n_max: a.nmax,
            betas,
            k: a.k,
            eps: a.eps.into(),
            out: a.out,
            cache_dir: a.cache_dir.clone(),
            jobs: a.jobs.max(1),
            trunc_level: a.trunc_level,
            n_deg: a.ndeg,
            ap_budget: a.ap_budget,
        })
    }
}

impl RunConfig {
    /// Progression budget; the default follows the period-st structure of lambda.
    pub fn ap_budget(&self, st: usize) -> usize {
        self.ap_budget.unwrap_or((self.p - 1) as usize * st)
    }
}
