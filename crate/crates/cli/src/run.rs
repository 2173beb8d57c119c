use std::collections::BTreeSet;
use std::time::Instant;

use heckespec_core::corner::{verify_cyclic_conjugation, verify_defining_relations};
use heckespec_core::export::{render_report, spectrum_rows, Format, MatrixDump, NamedMatrix, SpectrumTable};
use heckespec_core::hamiltonian::{
    build_hamiltonian, commuting_family_check, commuting_grid_check, verify_intertwiner, verify_l1_closed_form,
    verify_large_q_limit, verify_trace_identity,
};
use heckespec_core::scalar::parse_rational;
use heckespec_core::spectrum::{
    numeric_eigenvalues, predicted_spectrum_with_cap, verify_isospectral_with_cap, verify_spectrum_with_cap,
    IMAGINARY_TOL, SPECTRUM_TOL,
};
use heckespec_core::wedge::{prop43_corner_instance, prop43_negative_control, TensorSpace, WedgeModule};
use heckespec_core::{
    Backend, Basis, CheckRecord, CornerRep, CornerShape, Error, QParam, Rational, Residual, Scalar,
    VerificationReport, DEFAULT_DIM_CAP,
};
use rayon::prelude::*;

use crate::args::{BackendArg, CheckKind, Cli, Command, Common, DumpArgs, FormatArg, VerifyArgs, ALL_CHECKS};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_NON_GENERIC: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// q values of the large-q limit check, always evaluated exactly.
const LIMIT_GRID: [i64; 3] = [10, 100, 1000];

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::NonGenericParameter { .. } | Error::ZeroParameter => EXIT_NON_GENERIC,
                Error::CapacityExceeded { .. } => EXIT_CAPACITY,
                Error::InvalidShape(_) | Error::InvalidArgument(_) | Error::Parse(_) => EXIT_USAGE,
                Error::SingularConjugator | Error::DegenerateWedge { .. } | Error::Eigen(_) => EXIT_MISMATCH,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

/// Rendered output and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

enum QValue {
    Exact(Rational),
    Decimal(f64),
}

fn parse_q(text: &str) -> Result<QValue, CliError> {
    if let Ok(r) = parse_rational(text) {
        return Ok(QValue::Exact(r));
    }
    text.trim()
        .parse::<f64>()
        .map(QValue::Decimal)
        .map_err(|_| CliError::Usage(format!("cannot parse q value {text:?}")))
}

/// Numeric q values in one backend.
trait FromQValue: Scalar {
    fn from_q_value(value: &QValue, text: &str) -> Result<Self, CliError>;
}

impl FromQValue for Rational {
    fn from_q_value(value: &QValue, text: &str) -> Result<Self, CliError> {
        match value {
            QValue::Exact(r) => Ok(r.clone()),
            QValue::Decimal(_) => Err(CliError::Usage(format!(
                "q = {text} is not an exact rational; write it as a/b or use the approximate backend"
            ))),
        }
    }
}

impl FromQValue for f64 {
    fn from_q_value(value: &QValue, _text: &str) -> Result<Self, CliError> {
        Ok(match value {
            QValue::Exact(r) => r.to_f64(),
            QValue::Decimal(x) => *x,
        })
    }
}

fn to_params<S: FromQValue>(texts: &[String], values: &[QValue]) -> Result<Vec<QParam<S>>, CliError> {
    texts
        .iter()
        .zip(values)
        .map(|(t, v)| Ok(QParam::new(S::from_q_value(v, t)?)?))
        .collect()
}

struct Setup {
    shape: CornerShape,
    backend: Backend,
    cap: usize,
    q_texts: Vec<String>,
    q_values: Vec<QValue>,
}

fn setup(common: &Common, allow_empty_shape: bool) -> Result<Setup, CliError> {
    let shape = CornerShape::new(common.k, common.l);
    if !allow_empty_shape && shape.generators() == 0 {
        return Err(CliError::Usage("k + l must be at least 1".into()));
    }
    if common.q.is_empty() {
        return Err(CliError::Usage("at least one --q is required".into()));
    }
    if let Some(t) = common.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage("--tolerance must be positive".into()));
        }
    }
    let q_values = common.q.iter().map(|t| parse_q(t)).collect::<Result<Vec<_>, _>>()?;
    let all_exact = q_values.iter().all(|v| matches!(v, QValue::Exact(_)));
    let backend = match common.backend {
        Some(BackendArg::Exact) => Backend::Exact,
        Some(BackendArg::Approximate) => Backend::Approximate,
        None if all_exact => Backend::Exact,
        None => Backend::Approximate,
    };
    Ok(Setup {
        shape,
        backend,
        cap: common.dim_cap.unwrap_or(DEFAULT_DIM_CAP),
        q_texts: common.q.clone(),
        q_values,
    })
}

fn format_of(arg: Option<FormatArg>, default: Format) -> Format {
    match arg {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Text) => Format::Text,
        None => default,
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Spectrum(common) => {
            let s = setup(common, false)?;
            let format = format_of(common.format, Format::Csv);
            let tol = common.tolerance.unwrap_or(SPECTRUM_TOL);
            let table = match s.backend {
                Backend::Exact => spectrum::<Rational>(&s, tol)?,
                Backend::Approximate => spectrum::<f64>(&s, tol)?,
            };
            Ok(Outcome {
                text: table.render(format),
                pass: table.pass,
            })
        }
        Command::Verify(args) => {
            let s = setup(&args.common, false)?;
            let format = format_of(args.common.format, Format::Json);
            let report = match s.backend {
                Backend::Exact => verify::<Rational>(&s, args)?,
                Backend::Approximate => verify::<f64>(&s, args)?,
            };
            let labels = canonical_labels(&s)?;
            Ok(Outcome {
                text: render_report(&report, s.shape, s.backend, &labels, format),
                pass: report.passed(),
            })
        }
        Command::Dump(args) => {
            let s = setup(&args.common, true)?;
            let format = format_of(args.common.format, Format::Text);
            let text = match s.backend {
                Backend::Exact => dump::<Rational>(&s, args, format)?,
                Backend::Approximate => dump::<f64>(&s, args, format)?,
            };
            Ok(Outcome { text, pass: true })
        }
    }
}

fn canonical_labels(s: &Setup) -> Result<Vec<String>, CliError> {
    Ok(match s.backend {
        Backend::Exact => to_params::<Rational>(&s.q_texts, &s.q_values)?.iter().map(QParam::label).collect(),
        Backend::Approximate => to_params::<f64>(&s.q_texts, &s.q_values)?.iter().map(QParam::label).collect(),
    })
}

fn spectrum<S: FromQValue>(s: &Setup, tol: f64) -> Result<SpectrumTable, CliError> {
    let qs = to_params::<S>(&s.q_texts, &s.q_values)?;
    let prediction = predicted_spectrum_with_cap(s.shape, s.cap)?;
    let per_q = qs
        .par_iter()
        .map(|q| {
            let rep = CornerRep::with_cap(s.shape, q.clone(), s.cap)?;
            let numeric = numeric_eigenvalues(&build_hamiltonian(&rep).matrix.to_f64())?;
            let rows = spectrum_rows(&q.label(), &prediction, &numeric.values)?;
            Ok((rows, numeric.max_imaginary < IMAGINARY_TOL))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let all_real = per_q.iter().all(|(_, real)| *real);
    let rows = per_q.into_iter().flat_map(|(rows, _)| rows).collect();
    let mut table = SpectrumTable::new(s.shape, S::BACKEND, qs.iter().map(QParam::label).collect(), rows, tol);
    table.pass &= all_real;
    Ok(table)
}

/// Checks that make sense for the shape and q list. Tensor-space checks are
/// left out when V^{⊗l} is larger than the dimension cap.
fn default_checks(shape: CornerShape, q_count: usize, has_r: bool, cap: usize) -> Vec<CheckKind> {
    let tensor_fits = TensorSpace::new(shape.generators(), shape.l(), cap).is_ok();
    ALL_CHECKS
        .into_iter()
        .filter(|c| check_applies(*c, shape, q_count, has_r, false).is_ok())
        .filter(|c| tensor_fits || !matches!(c, CheckKind::Wedge | CheckKind::Prop41))
        .collect()
}

fn check_applies(
    check: CheckKind,
    shape: CornerShape,
    q_count: usize,
    has_r: bool,
    explicit: bool,
) -> Result<(), String> {
    let d = shape.generators();
    let base_ok = d >= 2 || explicit;
    match check {
        CheckKind::Relations | CheckKind::Trace | CheckKind::Conjugation | CheckKind::Spectrum => Ok(()),
        CheckKind::Isospectral if q_count < 2 => Err("isospectral needs at least two --q values".into()),
        CheckKind::Isospectral => Ok(()),
        CheckKind::Wedge if shape.l() == 0 => Err("wedge needs l >= 1".into()),
        CheckKind::Wedge => Ok(()),
        CheckKind::Prop41 if shape.l() < 2 => Err("prop41 needs l >= 2".into()),
        CheckKind::Prop41 => Ok(()),
        CheckKind::Prop43 if d < 2 => Err("prop43 needs k + l >= 2".into()),
        CheckKind::Prop43 => Ok(()),
        CheckKind::Commuting if !has_r && q_count < 2 => Err("commuting needs --r or at least two --q values".into()),
        CheckKind::Intertwiner | CheckKind::Commuting | CheckKind::Limit if !base_ok => {
            Err("needs k + l >= 2".into())
        }
        CheckKind::Intertwiner | CheckKind::Commuting | CheckKind::Limit => Ok(()),
    }
}

fn timed<F>(timings: bool, f: F) -> Result<VerificationReport, Error>
where
    F: FnOnce() -> Result<VerificationReport, Error>,
{
    let start = Instant::now();
    let mut report = f()?;
    if timings {
        let elapsed = start.elapsed();
        for c in &mut report.checks {
            c.elapsed = Some(elapsed);
        }
    }
    Ok(report)
}

fn with_r(mut report: VerificationReport, r: &str) -> VerificationReport {
    for c in &mut report.checks {
        c.r = Some(r.to_string());
    }
    report
}

/// Per-q checks for one parameter value.
fn verify_at<S: Scalar>(
    s: &Setup,
    checks: &BTreeSet<CheckKind>,
    q: &QParam<S>,
    r: Option<&QParam<S>>,
    timings: bool,
) -> Result<VerificationReport, Error> {
    let shape = s.shape;
    let base_k = shape.generators() - 1;
    let rep = CornerRep::with_cap(shape, q.clone(), s.cap)?;
    let mut report = VerificationReport::new();
    for check in checks {
        let part = match check {
            CheckKind::Relations => timed(timings, || Ok(verify_defining_relations(&rep)))?,
            CheckKind::Trace => timed(timings, || Ok(verify_trace_identity(&rep)))?,
            CheckKind::Conjugation => timed(timings, || verify_cyclic_conjugation(&rep))?,
            CheckKind::Intertwiner => timed(timings, || {
                let mut r = verify_intertwiner(base_k, q)?;
                r.extend(verify_l1_closed_form(base_k, q)?);
                Ok(r)
            })?,
            CheckKind::Spectrum => timed(timings, || verify_spectrum_with_cap(shape, q, s.cap))?,
            CheckKind::Wedge => timed(timings, || {
                WedgeModule::with_cap(shape.k(), shape.l(), q.clone(), s.cap)?.verify_all()
            })?,
            CheckKind::Prop41 => timed(timings, || {
                let module = WedgeModule::with_cap(shape.k(), shape.l(), q.clone(), s.cap)?;
                let mut r = VerificationReport::new();
                for p in 1..=shape.generators() {
                    r.extend(module.verify_sum_product_identity(p)?);
                }
                Ok(r)
            })?,
            CheckKind::Prop43 => timed(timings, || {
                let mut r = with_r(prop43_corner_instance(base_k, q, q.value())?, &q.label());
                let off = q.value().mul_ref(q.value()) + S::from_int(2);
                r.push(prop43_negative_control(base_k, q, &off)?);
                Ok(r)
            })?,
            CheckKind::Commuting => match r {
                Some(r) => timed(timings, || commuting_family_check(base_k, q, r))?,
                None => continue,
            },
            CheckKind::Isospectral | CheckKind::Limit => continue,
        };
        report.extend(part);
    }
    Ok(report)
}

/// Records compared against zero whose tolerance `--tolerance` replaces.
fn tolerance_applies(record: &CheckRecord) -> bool {
    matches!(record.residual, Residual::Approx(_))
        && record.name != "limit.large_q"
        && record.name != "prop43.negative_control"
}

fn verify<S: FromQValue>(s: &Setup, args: &VerifyArgs) -> Result<VerificationReport, CliError> {
    let qs = to_params::<S>(&s.q_texts, &s.q_values)?;
    let r = args
        .r
        .as_deref()
        .map(|t| Ok::<_, CliError>(QParam::new(S::from_q_value(&parse_q(t)?, t)?)?))
        .transpose()?;
    let checks: BTreeSet<CheckKind> = if args.checks.is_empty() {
        default_checks(s.shape, qs.len(), r.is_some(), s.cap).into_iter().collect()
    } else {
        for c in &args.checks {
            check_applies(*c, s.shape, qs.len(), r.is_some(), true)
                .map_err(|msg| CliError::Usage(format!("check {c:?}: {msg}")))?;
        }
        args.checks.iter().copied().collect()
    };

    Basis::enumerate(s.shape, s.cap)?;
    if checks.contains(&CheckKind::Wedge) || checks.contains(&CheckKind::Prop41) {
        TensorSpace::new(s.shape.generators(), s.shape.l(), s.cap)?;
    }

    let timings = args.common.timings;
    let base_k = s.shape.generators() - 1;
    let mut report = VerificationReport::new();
    for part in qs
        .par_iter()
        .map(|q| verify_at(s, &checks, q, r.as_ref(), timings))
        .collect::<Result<Vec<_>, Error>>()?
    {
        report.extend(part);
    }

    if checks.contains(&CheckKind::Isospectral) {
        let pairs: Vec<(usize, usize)> = (0..qs.len())
            .flat_map(|i| (i + 1..qs.len()).map(move |j| (i, j)))
            .collect();
        for part in pairs
            .par_iter()
            .map(|&(i, j)| timed(timings, || verify_isospectral_with_cap(s.shape, &qs[i], &qs[j], s.cap)))
            .collect::<Result<Vec<_>, Error>>()?
        {
            report.extend(part);
        }
    }
    if checks.contains(&CheckKind::Commuting) && r.is_none() {
        report.extend(timed(timings, || commuting_grid_check(base_k, &qs))?);
    }
    if checks.contains(&CheckKind::Limit) {
        report.extend(timed(timings, || {
            let grid = LIMIT_GRID
                .iter()
                .map(|&q| QParam::<Rational>::from_ratio(q, 1))
                .collect::<Result<Vec<_>, Error>>()?;
            verify_large_q_limit(base_k, &grid)
        })?);
    }

    if let Some(tol) = args.common.tolerance {
        for c in report.checks.iter_mut().filter(|c| tolerance_applies(c)) {
            c.pass = c.residual.passes(tol);
        }
    }
    sort_canonical(&mut report, &qs);
    Ok(report)
}

/// Sorted by check name, then by q value, then by r.
fn sort_canonical<S: Scalar>(report: &mut VerificationReport, qs: &[QParam<S>]) {
    let mut order: Vec<(f64, String)> = qs.iter().map(|q| (q.value().to_f64(), q.label())).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rank = |label: &Option<String>| {
        label
            .as_ref()
            .and_then(|l| order.iter().position(|(_, o)| o == l))
            .unwrap_or(usize::MAX)
    };
    report.checks.sort_by(|a, b| {
        (&a.name, rank(&a.q), &a.q, &a.r).cmp(&(&b.name, rank(&b.q), &b.q, &b.r))
    });
}

enum DumpTarget {
    Sigma(usize),
    Hamiltonian,
    All,
}

fn parse_target(what: &str, generators: usize) -> Result<DumpTarget, CliError> {
    match what {
        "all" => Ok(DumpTarget::All),
        "hamiltonian" => Ok(DumpTarget::Hamiltonian),
        other => {
            let p = other
                .strip_prefix("sigma:")
                .and_then(|p| p.parse::<usize>().ok())
                .ok_or_else(|| CliError::Usage(format!("--what must be sigma:P, hamiltonian or all, got {other:?}")))?;
            if !(1..=generators).contains(&p) {
                return Err(CliError::Usage(format!("sigma:{p} outside 1..={generators}")));
            }
            Ok(DumpTarget::Sigma(p))
        }
    }
}

fn dump<S: FromQValue>(s: &Setup, args: &DumpArgs, format: Format) -> Result<String, CliError> {
    let target = parse_target(&args.what, s.shape.generators())?;
    let qs = to_params::<S>(&s.q_texts, &s.q_values)?;
    let mut pieces = Vec::with_capacity(qs.len());
    for q in &qs {
        let rep = CornerRep::with_cap(s.shape, q.clone(), s.cap)?;
        let sigma = |p: usize| NamedMatrix {
            name: format!("sigma:{p}"),
            matrix: rep.sigma_matrix(p).expect("p validated"),
        };
        let hamiltonian = || NamedMatrix {
            name: "hamiltonian".into(),
            matrix: build_hamiltonian(&rep).matrix,
        };
        let matrices = match target {
            DumpTarget::Sigma(p) => vec![sigma(p)],
            DumpTarget::Hamiltonian => vec![hamiltonian()],
            DumpTarget::All => (1..=s.shape.generators())
                .map(sigma)
                .chain(std::iter::once(hamiltonian()))
                .collect(),
        };
        let dump = MatrixDump {
            shape: s.shape,
            q_label: q.label(),
            basis: rep.basis(),
            matrices,
        };
        pieces.push(dump.render(format));
    }
    Ok(join_dumps(pieces, format))
}

fn join_dumps(pieces: Vec<String>, format: Format) -> String {
    match format {
        Format::Text => pieces.concat(),
        Format::Csv => {
            let mut out = String::new();
            for (i, piece) in pieces.iter().enumerate() {
                let body = if i == 0 { piece.as_str() } else { piece.split_once('\n').map_or("", |(_, b)| b) };
                out.push_str(body);
            }
            out
        }
        Format::Json if pieces.len() == 1 => pieces.concat(),
        Format::Json => {
            let items: Vec<&str> = pieces.iter().map(|p| p.trim_end()).collect();
            format!("[\n{}\n]\n", items.join(",\n"))
        }
    }
}
