//! Command configuration and dispatch to the engine.

use std::fmt;
use std::str::FromStr;

use augtor::growth::{fitted_growth_rate, p_component, p_growth, square_prime_probe, GrowthReport};
use augtor::recurrence::recurrence_spec;
use augtor::torsion::{
    betti, characteristic_poly, reduced_analysis, torsion, torsion_snf, Method, MethodChoice,
    ModuleInput,
};
use augtor::{LaurentPoly, PresentationMatrix};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::catalog::{catalog, CatalogEntry, LookupError};
use crate::matrix::LoadError;
use crate::report::{Cell, Format, Report};

/// The subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Betti,
    Torsion,
    Reduced,
    Recurrence,
    Growth,
    PGrowth,
    ProbeSquare,
    Catalog,
}

impl Subcommand {
    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::Betti => "betti",
            Subcommand::Torsion => "torsion",
            Subcommand::Reduced => "reduced",
            Subcommand::Recurrence => "recurrence",
            Subcommand::Growth => "growth",
            Subcommand::PGrowth => "pgrowth",
            Subcommand::ProbeSquare => "probe-square",
            Subcommand::Catalog => "catalog",
        }
    }

    fn default_range(self) -> RRange {
        match self {
            Subcommand::Growth | Subcommand::PGrowth => RRange { start: 1, end: 50 },
            _ => RRange { start: 1, end: 10 },
        }
    }
}

/// Where the module comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Poly(LaurentPoly),
    Matrix(PresentationMatrix),
    Catalog(CatalogEntry),
}

impl Source {
    fn module(&self) -> ModuleInput {
        match self {
            Source::Poly(d) => ModuleInput::Cyclic(d.clone()),
            Source::Catalog(e) => ModuleInput::Cyclic(e.delta.clone()),
            Source::Matrix(a) => match a.as_cyclic() {
                Some(d) => ModuleInput::Cyclic(d.clone()),
                None => ModuleInput::Presentation(a.clone()),
            },
        }
    }

    fn label(&self) -> String {
        match self {
            Source::Poly(d) => d.to_string(),
            Source::Catalog(e) => e.name.clone(),
            Source::Matrix(a) => format!("{}x{} matrix", a.n_rows(), a.n_cols()),
        }
    }

    /// The cyclic generator, or the characteristic polynomial `Delta_0` of
    /// a general presentation.
    fn delta(&self) -> Result<LaurentPoly, CliError> {
        match self.module() {
            ModuleInput::Cyclic(d) => Ok(d),
            ModuleInput::Presentation(a) => Ok(characteristic_poly(&a, 0)?),
            ModuleInput::InvariantFactors(_) => unreachable!("sources are never factor lists"),
        }
    }
}

/// Inclusive range `A..B` of cover degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RRange {
    pub start: u64,
    pub end: u64,
}

impl RRange {
    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }
}

impl fmt::Display for RRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for RRange {
    type Err = String;
    /// Accepts `A..B`, `A..=B` (both inclusive) or a single `N`.
    fn from_str(s: &str) -> Result<Self, String> {
        let bound = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| format!("invalid r bound `{x}` in `{s}`"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (bound(a)?, bound(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = bound(s)?;
                (n, n)
            }
        };
        if start == 0 {
            return Err(format!("r range `{s}` must start at 1 or later"));
        }
        if start > end {
            return Err(format!("r range `{s}` is empty"));
        }
        Ok(RRange { start, end })
    }
}

/// Everything needed to run one command.
#[derive(Clone, Debug)]
pub struct CommandConfig {
    pub subcommand: Subcommand,
    pub source: Option<Source>,
    /// `None` selects the subcommand's default range.
    pub range: Option<RRange>,
    pub method: MethodChoice,
    pub p: Option<u64>,
    pub eps: f64,
    pub format: Format,
    /// Worker pool width; `None` uses one thread per core.
    pub jobs: Option<usize>,
}

impl CommandConfig {
    pub fn new(subcommand: Subcommand, source: Option<Source>) -> Self {
        CommandConfig {
            subcommand,
            source,
            range: None,
            method: MethodChoice::Auto,
            p: None,
            eps: 1e-9,
            format: Format::Table,
            jobs: None,
        }
    }

    pub fn range(&self) -> RRange {
        self.range.unwrap_or(self.subcommand.default_range())
    }
}

/// A failed command.  Usage and input errors exit with 2, engine errors
/// with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error(transparent)]
    Compute(#[from] augtor::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}

/// Run a command and build its report.
pub fn run_command(cfg: &CommandConfig) -> Result<Report, CliError> {
    if cfg.eps.is_nan() || cfg.eps <= 0.0 {
        return Err(CliError::Usage(format!(
            "--eps must be positive, got {}",
            cfg.eps
        )));
    }
    if cfg.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    if cfg.subcommand == Subcommand::Catalog {
        return match &cfg.source {
            None => Ok(catalog_report(&catalog())),
            Some(Source::Catalog(e)) => Ok(catalog_report(std::slice::from_ref(e))),
            Some(_) => Err(CliError::Usage("catalog takes only --name".into())),
        };
    }
    let src = cfg
        .source
        .as_ref()
        .ok_or_else(|| CliError::Usage("one of --poly, --matrix or --name is required".into()))?;
    let mut report = match cfg.subcommand {
        Subcommand::Betti => betti_report(cfg, src)?,
        Subcommand::Torsion => torsion_report(cfg, src)?,
        Subcommand::Reduced => reduced_report(cfg, src)?,
        Subcommand::Recurrence => recurrence_report(src)?,
        Subcommand::Growth => growth_report(cfg, src)?,
        Subcommand::PGrowth => pgrowth_report(cfg, src)?,
        Subcommand::ProbeSquare => probe_report(cfg, src)?,
        Subcommand::Catalog => unreachable!("handled above"),
    };
    report.meta.insert(0, ("input".into(), src.label().into()));
    Ok(report)
}

/// Evaluate `f` at every `r` of the range on a pool of `cfg.jobs` workers,
/// returning results in ascending `r`.
fn sweep<T, F>(cfg: &CommandConfig, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(u64) -> Result<T, CliError> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let rs: Vec<u64> = cfg.range().iter().collect();
    pool.install(|| rs.into_par_iter().map(&f).collect())
}

fn torsion_sequence(cfg: &CommandConfig, src: &Source) -> Result<Vec<(u64, BigInt)>, CliError> {
    let input = src.module();
    sweep(cfg, |r| Ok((r, torsion(&input, r, cfg.method)?.torsion)))
}

fn betti_report(cfg: &CommandConfig, src: &Source) -> Result<Report, CliError> {
    let input = src.module();
    let rows = sweep(cfg, |r| {
        Ok(match &input {
            ModuleInput::Cyclic(d) => (
                r,
                betti(std::slice::from_ref(d), r, false)?,
                "roots_of_unity",
            ),
            other => (
                r,
                torsion_snf(&other.presentation(), r, false)?.betti,
                "snf",
            ),
        })
    })?;
    let mut rep = Report::new("betti", &["r", "betti", "method"]);
    for (r, b, m) in rows {
        rep.push(vec![r.into(), b.into(), m.into()]);
    }
    Ok(rep)
}

fn torsion_report(cfg: &CommandConfig, src: &Source) -> Result<Report, CliError> {
    let input = src.module();
    let rows = sweep(cfg, |r| Ok(torsion(&input, r, cfg.method)?))?;
    let mut rep = Report::new("torsion", &["r", "betti", "torsion", "method"]);
    for p in rows {
        rep.push(vec![
            p.r.into(),
            p.betti.into(),
            p.torsion.into(),
            p.method.as_str().into(),
        ]);
    }
    Ok(rep)
}

fn reduced_report(cfg: &CommandConfig, src: &Source) -> Result<Report, CliError> {
    let force_snf = match cfg.method {
        MethodChoice::Auto => false,
        MethodChoice::Fixed(Method::Snf) => true,
        MethodChoice::Fixed(m) => {
            return Err(CliError::Usage(format!(
                "reduced supports --method auto or snf, not {m}"
            )))
        }
    };
    let input = src.module();
    let rows = sweep(cfg, |r| {
        Ok(match &input {
            ModuleInput::Cyclic(d) if !force_snf => {
                let a = reduced_analysis(d, r)?;
                let row: Vec<Cell> = vec![
                    r.into(),
                    a.betti_reduced.into(),
                    a.torsion_reduced.into(),
                    a.delta.into(),
                    a.delta_prime.into(),
                    "formula".into(),
                ];
                row
            }
            other => {
                let p = torsion_snf(&other.presentation(), r, true)?;
                vec![
                    r.into(),
                    p.betti.into(),
                    p.torsion.into(),
                    Cell::Null,
                    Cell::Null,
                    "snf".into(),
                ]
            }
        })
    })?;
    let mut rep = Report::new(
        "reduced",
        &["r", "betti", "torsion", "delta", "delta_prime", "method"],
    );
    for row in rows {
        rep.push(row);
    }
    Ok(rep)
}

fn recurrence_report(src: &Source) -> Result<Report, CliError> {
    let delta = src.delta()?;
    let spec = recurrence_spec(&delta)?;
    let mut rep = Report::new("recurrence", &["j", "coefficient"]);
    rep.meta("delta", delta.to_string())
        .meta("order", spec.order)
        .meta("sign_mode", spec.sign_mode.to_string())
        .meta("seed_start", spec.seed_start)
        .meta(
            "seed",
            Cell::List(spec.seed.iter().map(Cell::from).collect()),
        );
    for (j, c) in spec.coefficients.iter().enumerate() {
        rep.push(vec![j.into(), c.into()]);
    }
    Ok(rep)
}

fn growth_report(cfg: &CommandConfig, src: &Source) -> Result<Report, CliError> {
    let delta = src.delta()?;
    let seq = torsion_sequence(cfg, src)?;
    let g = GrowthReport::new(&delta, &seq, cfg.eps, cfg.p)?;
    let fitted = if seq.len() >= 2 {
        Some(fitted_growth_rate(&seq)?)
    } else {
        None
    };
    let mut cols = vec!["r", "torsion", "sample"];
    if cfg.p.is_some() {
        cols.push("p_sample");
    }
    let mut rep = Report::new("growth", &cols);
    rep.meta("delta", delta.to_string())
        .meta("mahler", g.mahler.value)
        .meta("mahler_error", g.mahler.error)
        .meta("fitted_rate", fitted);
    if let Some(p) = g.p {
        rep.meta("p", p).meta("content_p", g.content_p.clone());
    }
    for (i, ((r, b), (_, s))) in seq.iter().zip(&g.samples).enumerate() {
        let mut row = vec![(*r).into(), b.into(), (*s).into()];
        if let Some(ps) = &g.p_samples {
            row.push(ps[i].1.into());
        }
        rep.push(row);
    }
    Ok(rep)
}

fn pgrowth_report(cfg: &CommandConfig, src: &Source) -> Result<Report, CliError> {
    let p = cfg
        .p
        .ok_or_else(|| CliError::Usage("pgrowth needs --p".into()))?;
    let delta = src.delta()?;
    let seq = torsion_sequence(cfg, src)?;
    let g = p_growth(&seq, p, &delta)?;
    let mut rep = Report::new("pgrowth", &["r", "p_component", "sample"]);
    rep.meta("delta", delta.to_string())
        .meta("p", p)
        .meta("target", g.target.clone())
        .meta("final_deviation", g.final_deviation);
    for ((r, b), (_, s)) in seq.iter().zip(&g.samples) {
        rep.push(vec![(*r).into(), p_component(b, p)?.into(), (*s).into()]);
    }
    Ok(rep)
}

fn probe_report(cfg: &CommandConfig, src: &Source) -> Result<Report, CliError> {
    let input = src.module();
    let rows = sweep(cfg, |r| {
        let prof = torsion(&input, r, cfg.method)?;
        let probe = square_prime_probe(&prof.torsion)?;
        let digits = prof.torsion.to_string().len();
        let row: Vec<Cell> = vec![
            r.into(),
            digits.into(),
            probe.is_square.into(),
            probe.sqrt_digits.into(),
            probe.sqrt_probable_prime.into(),
            prof.method.as_str().into(),
        ];
        Ok(row)
    })?;
    let mut rep = Report::new(
        "probe-square",
        &[
            "r",
            "digits",
            "is_square",
            "sqrt_digits",
            "sqrt_probable_prime",
            "method",
        ],
    );
    for row in rows {
        rep.push(row);
    }
    Ok(rep)
}

fn catalog_report(entries: &[CatalogEntry]) -> Report {
    let mut rep = Report::new(
        "catalog",
        &["name", "kind", "delta", "linking_number", "provenance"],
    );
    for e in entries {
        rep.push(vec![
            e.name.as_str().into(),
            e.kind.to_string().into(),
            e.delta.to_string().into(),
            e.linking_number.into(),
            e.provenance.as_str().into(),
        ]);
    }
    rep
}
