//! `mct` subcommands. Exit codes: 0 success or member, 1 checked false or
//! non-member, 2 unknown or inconclusive, 3 input or premise error.

use crate::io::{self, IoError, IoResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mct_core::anticommuting::{anticommuting_dilation, clifford_generators, cube_ball_certificate, symmetry_normalize};
use mct_core::bodies::theta::theta_by_bisection;
use mct_core::bodies::{sd_classify, theta_simplex_pointed, ConvexBody, ScaleVector, SdClass};
use mct_core::certificate::Certificate;
use mct_core::dilation::{
    contraction_normal_dilation, halmos, orthogonal_family_dilation, positive_scaling_dilation,
    sd_projection_dilation, symmetric_sd_dilation,
};
use mct_core::matrix_convex::{
    level1_range, matrix_range_of_normal, wmax_membership, wmin_certificate_simplex, Verdict,
};
use mct_core::pathology::{
    ball_covering_tuple, minimal_normal_tuple, minimality_report, reducing_decomposition, simplex_surprise_tuple,
    staircase_normal_tuple, MinimalityVerdict,
};
use mct_core::{MatrixTuple, ToleranceConfig};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mct",
    version,
    about = "Dilation certificates and matrix range diagnostics for tuples of matrices",
    long_about = "Dilation certificates and matrix range diagnostics for tuples of matrices.\n\n\
        Exit codes: 0 success or member, 1 checked false or non-member, 2 unknown or inconclusive, \
        3 input or premise error."
)]
pub struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Absolute and relative tolerance (default 1e-9).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<ToleranceConfig, CliError> {
        let mut cfg = ToleranceConfig::default().with_seed(self.seed);
        if let Some(t) = self.tol {
            cfg = cfg.with_tol(t);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Generate tuples: Clifford generators and the gallery examples.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
        #[command(flatten)]
        common: Common,
    },
    /// Build a dilation certificate for the input tuple.
    Dilate {
        kind: DilateKind,
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated scales, e.g. `2,2`.
        #[arg(long)]
        scales: Option<String>,
        #[arg(long)]
        body: Option<PathBuf>,
        /// Comma-separated group sizes for the grouped constructions.
        #[arg(long)]
        groups: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Membership and structure checks.
    Check {
        kind: CheckKind,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long)]
        scales: Option<String>,
        /// Sampled directions for curved bodies.
        #[arg(long, default_value_t = 720)]
        directions: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Dilation constant θ(K) of a body that is simplex-pointed at 0.
    Theta {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, value_enum, default_value_t = ThetaMethod::Closed)]
        method: ThetaMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Level-one range of a tuple (inner and outer polytopes), or the exact
    /// range of a commuting normal tuple with `--normal`.
    Range {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 360)]
        directions: usize,
        #[arg(long)]
        normal: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute every claim of a certificate from its matrices.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Minimality report and reducing decomposition of a Hermitian tuple.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        body: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum GenWhat {
    /// Pairwise anticommuting Hermitian unitaries F^[d] on C^{2^(d-1)}.
    Clifford {
        #[arg(long)]
        d: usize,
    },
    /// Gallery examples.
    Example {
        which: Example,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Example {
    /// Pair with W1 = the triangle but no joint eigenvalue at 0 (`--p`, `--trunc`).
    SimplexSurprise,
    /// Diagonal tuple piling up at a vertex (`--body`, `--trunc`).
    Staircase,
    /// Irreducible 2x2 summands covering a polygon (`--body`, `--k`).
    BallCovering,
    /// Diagonal tuple of the vertices of a polytope (`--body`).
    MinimalNormal,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DilateKind {
    /// Unitary dilation of a single contraction (`--scales` gives the bound).
    Halmos,
    /// Commuting normal dilation of contractions with norms at most 2d.
    Contractions,
    /// Anticommuting Hermitian dilation; needs sum a_j^-2 <= 1.
    Anticommuting,
    /// Anticommuting symmetries M_j^2 = a_j^2 I from anticommuting Hermitians.
    Symmetrize,
    /// Anticommuting symmetries dilating X with ||X_j|| <= c_j, sum c_j^2 <= 1.
    CubeBall,
    /// Annihilating Hermitian dilation of Hermitian contractions; sum 1/a_j <= 1.
    Orthogonal,
    /// Commuting normal groups with 0 in K, scaled by a (`--groups`, `--body`).
    PositiveScaling,
    /// Sub-POVM groups to commuting annihilating projections (`--groups`).
    SdProjection,
    /// Commuting Hermitian groups over a symmetric body (`--groups`, `--body`).
    SymmetricSd,
    /// Normal dilation with joint spectrum on the vertices of a simplex.
    WminSimplex,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    /// X in Wmax(K): every linear inequality of K holds for X.
    Wmax,
    /// X in Wmin(K) for a simplex K, by certificate.
    Wmin,
    /// Commuting normal within tolerance.
    CommutingNormal,
    /// Minimality of a Hermitian tuple with W1 inside a polytope.
    Minimality,
    /// Three-valued classification of a scale vector.
    Sd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ThetaMethod {
    Closed,
    Bisection,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Core(#[from] mct_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(IoError::Json(e))
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mct: {e}");
            EXIT_ERROR
        }
    }
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> CliResult<&'a Path> {
    p.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn parse_list<T: std::str::FromStr>(s: &str, flag: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| CliError::Usage(format!("--{flag}: cannot parse {x:?}"))))
        .collect()
}

fn scales_or(s: &Option<String>, d: usize, default: impl FnOnce(usize) -> Vec<f64>) -> CliResult<ScaleVector> {
    let values = match s {
        Some(s) => parse_list(s, "scales")?,
        None => default(d),
    };
    Ok(ScaleVector::new(values)?)
}

fn emit(out: Option<&Path>, value: &impl serde::Serialize) -> IoResult<()> {
    io::write_text(out, &io::to_pretty(value)?)
}

fn emit_tuple(out: Option<&Path>, t: &MatrixTuple) -> IoResult<()> {
    io::write_text(out, &serde_json::to_string(&io::tuple_to_json(t))?)
}

fn emit_certificate(out: Option<&Path>, c: &Certificate) -> IoResult<()> {
    io::write_text(out, &serde_json::to_string(&io::certificate_to_json(c))?)
}

fn split_groups(t: &MatrixTuple, groups: &Option<String>) -> CliResult<Vec<MatrixTuple>> {
    let sizes: Vec<usize> = match groups {
        Some(g) => parse_list(g, "groups")?,
        None => vec![1; t.d()],
    };
    Ok(t.split(&sizes)?)
}

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.verb {
        Verb::Gen { what, common } => gen(what, &common),
        Verb::Dilate { kind, input, scales, body, groups, common } => {
            let tol = common.config()?;
            let t = io::read_tuple(&input)?;
            let body = body.map(|b| io::read_body(&b)).transpose()?;
            let need_body = || body.clone().ok_or_else(|| CliError::Usage("missing --body".into()));
            let cert = match kind {
                DilateKind::Halmos => {
                    if t.d() != 1 {
                        return Err(CliError::Usage("halmos takes a single matrix".into()));
                    }
                    let bound = scales_or(&scales, 1, |_| vec![1.0])?.values()[0];
                    halmos(t.get(0), bound, &tol)?
                }
                DilateKind::Contractions => contraction_normal_dilation(&t, &tol)?,
                DilateKind::Anticommuting => {
                    let a = scales_or(&scales, t.d(), |d| vec![(d as f64).sqrt(); d])?;
                    anticommuting_dilation(&t, &a, &[], &tol)?
                }
                DilateKind::Symmetrize => {
                    let a = scales_or(&scales, t.d(), |_| t.iter().map(mct_core::linalg::op_norm).collect())?;
                    symmetry_normalize(&t, &a, &[], &tol)?
                }
                DilateKind::CubeBall => {
                    let c = scales_or(&scales, t.d(), |d| vec![1.0 / (d as f64).sqrt(); d])?;
                    cube_ball_certificate(&t, c.values(), &tol)?
                }
                DilateKind::Orthogonal => {
                    let a = scales_or(&scales, t.d(), |d| vec![d as f64; d])?;
                    orthogonal_family_dilation(&t, &a, &tol)?
                }
                DilateKind::PositiveScaling | DilateKind::SymmetricSd => {
                    let parts = split_groups(&t, &groups)?;
                    let k = need_body()?;
                    let bodies = vec![k; parts.len()];
                    let a = scales_or(&scales, parts.len(), |d| vec![d as f64; d])?;
                    match kind {
                        DilateKind::PositiveScaling => positive_scaling_dilation(&parts, &bodies, &a, &tol)?,
                        _ => symmetric_sd_dilation(&parts, &bodies, &a, &tol)?,
                    }
                }
                DilateKind::SdProjection => {
                    let parts = split_groups(&t, &groups)?;
                    let a = scales_or(&scales, parts.len(), |d| vec![d as f64; d])?;
                    sd_projection_dilation(&parts, &a, &tol)?
                }
                DilateKind::WminSimplex => wmin_certificate_simplex(&t, &need_body()?, &tol)?,
            };
            emit_certificate(common.out.as_deref(), &cert)?;
            Ok(EXIT_OK)
        }
        Verb::Check { kind, input, body, scales, directions, common } => {
            let tol = common.config()?;
            check(kind, &input, &body, &scales, directions, &tol, common.out.as_deref())
        }
        Verb::Theta { body, method, common } => {
            let k = io::read_body(&body)?;
            let r = match method {
                ThetaMethod::Closed => theta_simplex_pointed(&k)?,
                ThetaMethod::Bisection => theta_by_bisection(&k, common.config()?.abs_tol)?,
            };
            match common.out.as_deref() {
                Some(p) => emit(Some(p), &json!({"theta": r.theta, "scales": r.scales, "gauges": r.gauges}))?,
                None => println!("{:?}", r.theta),
            }
            Ok(EXIT_OK)
        }
        Verb::Range { input, directions, normal, common } => {
            let tol = common.config()?;
            let t = io::read_tuple(&input)?;
            let value = if normal {
                json!({"range": io::body_to_json(&matrix_range_of_normal(&t, &tol)?)})
            } else {
                let r = level1_range(&t, directions, tol.seed)?;
                let facets: Vec<Value> = r.outer_facets.iter().map(|f| json!({"a": f.a, "b": f.b})).collect();
                json!({
                    "inner": io::body_to_json(&r.inner),
                    "outer": r.outer.as_ref().map(io::body_to_json),
                    "outer_facets": facets,
                })
            };
            emit(common.out.as_deref(), &value)?;
            Ok(EXIT_OK)
        }
        Verb::Verify { cert, common } => {
            let c = io::read_certificate(&cert)?;
            let report = c.verify(common.tol);
            let mut text = format!("{:<40} {:>12} {:>12}  result\n", "claim", "residual", "bound");
            for check in &report.checks {
                text.push_str(&format!(
                    "{:<40} {:>12.3e} {:>12.3e}  {}\n",
                    check.name,
                    check.residual,
                    check.bound,
                    if check.pass { "ok" } else { "FAIL" }
                ));
            }
            if let Some(concl) = &c.conclusion {
                text.push_str(&format!("conclusion: {concl}\n"));
            }
            io::write_text(common.out.as_deref(), text.trim_end())?;
            Ok(if report.ok() { EXIT_OK } else { EXIT_FALSE })
        }
        Verb::Report { input, body, common } => {
            let tol = common.config()?;
            let t = io::read_tuple(&input)?;
            let k = io::read_body(&body)?;
            let report = minimality_report(&t, &k, &tol)?;
            let blocks = reducing_decomposition(&t, &tol)?;
            let value = json!({
                "verdict": verdict_name(report.verdict),
                "w1_in_k": report.w1_in_k,
                "margin": report.margin,
                "vertex_eigenspace_dims": report
                    .vertex_eigenvectors
                    .iter()
                    .map(|(v, e)| json!({"vertex": v, "dim": e.len()}))
                    .collect::<Vec<_>>(),
                "reducing_blocks": blocks.iter().map(|b| json!({"dim": b.tuple.dim(), "commutant_dim": b.commutant_dim})).collect::<Vec<_>>(),
                "notes": report.notes,
            });
            emit(common.out.as_deref(), &value)?;
            Ok(EXIT_OK)
        }
    }
}

fn verdict_name(v: MinimalityVerdict) -> &'static str {
    match v {
        MinimalityVerdict::MinimalDiagonal => "minimal_diagonal",
        MinimalityVerdict::NotMinimal => "not_minimal",
        MinimalityVerdict::Inconclusive => "inconclusive",
    }
}

fn gen(what: GenWhat, common: &Common) -> CliResult<i32> {
    let out = common.out.as_deref();
    let t = match what {
        GenWhat::Clifford { d } => clifford_generators(d)?.f,
        GenWhat::Example { which, p, trunc, body, k } => {
            let body = || -> CliResult<ConvexBody> { Ok(io::read_body(require(&body, "body")?)?) };
            let trunc = || trunc.ok_or_else(|| CliError::Usage("missing --trunc".into()));
            match which {
                Example::SimplexSurprise => simplex_surprise_tuple(p.unwrap_or(1.0), trunc()?)?,
                Example::Staircase => staircase_normal_tuple(&body()?, trunc()?)?,
                Example::BallCovering => {
                    let k = k.ok_or_else(|| CliError::Usage("missing --k".into()))?;
                    ball_covering_tuple(&body()?, k)?.tuple
                }
                Example::MinimalNormal => minimal_normal_tuple(&body()?)?,
            }
        }
    };
    emit_tuple(out, &t)?;
    Ok(EXIT_OK)
}

fn check(
    kind: CheckKind,
    input: &Option<PathBuf>,
    body: &Option<PathBuf>,
    scales: &Option<String>,
    directions: usize,
    tol: &ToleranceConfig,
    out: Option<&Path>,
) -> CliResult<i32> {
    let (value, code) = match kind {
        CheckKind::Sd => {
            let s = scales.as_deref().ok_or_else(|| CliError::Usage("missing --scales".into()))?;
            let a = ScaleVector::new(parse_list(s, "scales")?)?;
            let (name, code) = match sd_classify(&a) {
                SdClass::SdCertified => ("sd_certified", EXIT_OK),
                SdClass::NotSdCertified => ("not_sd_certified", EXIT_FALSE),
                SdClass::Unknown => ("unknown", EXIT_UNKNOWN),
            };
            (json!({"class": name, "harmonic_sum": a.harmonic_sum(), "square_sum": a.square_sum()}), code)
        }
        CheckKind::CommutingNormal => {
            let t = io::read_tuple(require(input, "in")?)?;
            let ok = t.is_commuting_normal(tol.abs_tol.max(1e-9));
            (
                json!({"commuting_normal": ok, "commutator": t.commutator_residual(), "normality": t.normality_residual()}),
                if ok { EXIT_OK } else { EXIT_FALSE },
            )
        }
        CheckKind::Wmax => {
            let t = io::read_tuple(require(input, "in")?)?;
            let k = io::read_body(require(body, "body")?)?;
            let v = wmax_membership(&t, &k, directions, tol)?;
            let (name, code) = match v.verdict {
                Verdict::Member => ("member", EXIT_OK),
                Verdict::MemberSampled => ("member_sampled", EXIT_OK),
                Verdict::NonMember => ("non_member", EXIT_FALSE),
                Verdict::Unknown => ("unknown", EXIT_UNKNOWN),
            };
            (json!({"verdict": name, "margin": v.margin, "witness": v.witness, "checked": v.checked}), code)
        }
        CheckKind::Wmin => {
            let t = io::read_tuple(require(input, "in")?)?;
            let k = io::read_body(require(body, "body")?)?;
            match wmin_certificate_simplex(&t, &k, tol) {
                Ok(cert) => {
                    let ok = cert.verify(None).ok();
                    (json!({"verdict": if ok { "member" } else { "unknown" }}), if ok { EXIT_OK } else { EXIT_UNKNOWN })
                }
                Err(mct_core::Error::Premise(msg)) => {
                    // Wmin ⊆ Wmax, so a Wmax violation decides non-membership.
                    let v = wmax_membership(&t, &k, directions, tol)?;
                    if v.verdict == Verdict::NonMember {
                        (json!({"verdict": "non_member", "margin": v.margin, "witness": v.witness}), EXIT_FALSE)
                    } else {
                        return Err(mct_core::Error::Premise(msg).into());
                    }
                }
                Err(e) => return Err(e.into()),
            }
        }
        CheckKind::Minimality => {
            let t = io::read_tuple(require(input, "in")?)?;
            let k = io::read_body(require(body, "body")?)?;
            let r = minimality_report(&t, &k, tol)?;
            let code = match r.verdict {
                MinimalityVerdict::MinimalDiagonal => EXIT_OK,
                MinimalityVerdict::NotMinimal => EXIT_FALSE,
                MinimalityVerdict::Inconclusive => EXIT_UNKNOWN,
            };
            (json!({"verdict": verdict_name(r.verdict), "notes": r.notes}), code)
        }
    };
    emit(out, &value)?;
    Ok(code)
}
