//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use heckespec_core::corner::{verify_cyclic_conjugation, verify_defining_relations};
use heckespec_core::hamiltonian::{
    commuting_family_check, commuting_grid_check, large_q_deviation, verify_intertwiner, verify_l1_closed_form,
    verify_large_q_limit, verify_trace_identity,
};
use heckespec_core::spectrum::{verify_isospectral, verify_spectrum, ANNIHILATOR_MAX_DIM};
use heckespec_core::wedge::{prop43_corner_instance, prop43_negative_control, WedgeModule};
use heckespec_core::{CornerRep, CornerShape, QParam, Rational, Result, Scalar, VerificationReport};

const EXACT_GRID: [(i64, i64); 5] = [(1, 2), (2, 3), (1, 1), (3, 2), (2, 1)];
const APPROX_GRID: [f64; 4] = [0.6, 1.1, 2.0, 3.0];
const ISOSPECTRAL_GRID: [f64; 6] = [0.6, 1.0, 1.1, 1.5, 2.0, 3.0];
const COMMUTING_GRID: [(i64, i64); 4] = [(1, 2), (2, 3), (3, 2), (2, 1)];
const RUNTIME_TARGET: Duration = Duration::from_secs(30);

fn exact_grid() -> Vec<QParam<Rational>> {
    EXACT_GRID.iter().map(|&(n, d)| QParam::from_ratio(n, d).unwrap()).collect()
}

fn approx(q: f64) -> QParam<f64> {
    QParam::new(q).unwrap()
}

fn shapes(max_n: usize) -> Vec<CornerShape> {
    (0..=max_n)
        .flat_map(|n| (0..=n).map(move |l| CornerShape::new(n - l, l)))
        .collect()
}

fn nontrivial_shapes(max_n: usize) -> Vec<CornerShape> {
    shapes(max_n).into_iter().filter(|s| s.generators() >= 1).collect()
}

/// Collects reports and tracks whether every record met its condition.
#[derive(Default)]
struct Tally {
    records: usize,
    failures: Vec<String>,
}

impl Tally {
    fn require_exact(&mut self, report: VerificationReport) {
        for c in report.checks {
            self.records += 1;
            if !(c.pass && c.residual.is_exact_zero()) {
                self.failures.push(format!("{} {:?} q={:?}: {}", c.name, c.shape, c.q, c.residual.repr()));
            }
        }
    }

    fn require_pass(&mut self, report: VerificationReport) {
        for c in report.checks {
            self.records += 1;
            if !c.pass {
                self.failures.push(format!("{} {:?} q={:?}: {}", c.name, c.shape, c.q, c.residual.repr()));
            }
        }
    }

    fn error(&mut self, context: &str, e: heckespec_core::Error) {
        self.records += 1;
        self.failures.push(format!("{context}: {e}"));
    }

    fn absorb(&mut self, context: &str, f: impl FnOnce(&mut Tally) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(context, e);
        }
    }

    fn outcome(self, extra: String) -> (bool, String) {
        let pass = self.failures.is_empty() && self.records > 0;
        let mut detail = format!("{} records{extra}", self.records);
        if let Some(first) = self.failures.first() {
            detail.push_str(&format!("; {} failing, first: {first}", self.failures.len()));
        }
        (pass, detail)
    }
}

fn criterion_1() -> (bool, String) {
    let start = Instant::now();
    let mut t = Tally::default();
    for shape in shapes(6) {
        for q in exact_grid() {
            t.absorb("relations", |t| {
                t.require_exact(verify_defining_relations(&CornerRep::new(shape, q)?));
                Ok(())
            });
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= RUNTIME_TARGET {
        t.failures.push(format!("runtime {elapsed:?} over target"));
    }
    t.outcome(format!(", {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_2() -> (bool, String) {
    let mut t = Tally::default();
    for shape in shapes(6) {
        for q in exact_grid() {
            t.absorb("trace", |t| {
                let rep = CornerRep::new(shape, q)?;
                t.require_exact(verify_trace_identity(&rep));
                t.require_exact(verify_cyclic_conjugation(&rep)?);
                Ok(())
            });
        }
    }
    t.outcome(String::new())
}

fn criterion_3() -> (bool, String) {
    let mut t = Tally::default();
    for k in 0..=8 {
        for q in exact_grid() {
            t.absorb("closed form", |t| {
                t.require_exact(verify_l1_closed_form(k, &q)?);
                Ok(())
            });
        }
    }
    t.outcome(String::new())
}

fn criterion_4() -> (bool, String) {
    let mut t = Tally::default();
    let mut worst = 0f64;
    for k in 0..=8 {
        for q in exact_grid() {
            t.absorb("intertwiner exact", |t| {
                t.require_exact(verify_intertwiner(k, &q)?);
                Ok(())
            });
        }
        for q in APPROX_GRID {
            t.absorb("intertwiner approx", |t| {
                let report = verify_intertwiner(k, &approx(q))?;
                worst = report.checks.iter().map(|c| c.residual.magnitude()).fold(worst, f64::max);
                t.require_pass(report);
                Ok(())
            });
        }
    }
    t.outcome(format!(", worst approximate residual {worst:.3e}"))
}

fn criterion_5() -> (bool, String) {
    let mut t = Tally::default();
    let mut annihilators = 0;
    let mut worst = [0f64; 3];
    let mut record = |t: &mut Tally, report: VerificationReport| {
        for c in &report.checks {
            let slot = match c.name.as_str() {
                "spectrum.eigenvalues" => 0,
                "spectrum.eigenvectors" => 1,
                "spectrum.annihilator" => {
                    annihilators += 1;
                    2
                }
                _ => continue,
            };
            worst[slot] = worst[slot].max(c.residual.magnitude());
        }
        t.require_pass(report);
    };
    for shape in nontrivial_shapes(7) {
        for q in exact_grid() {
            match verify_spectrum(shape, &q) {
                Ok(report) => record(&mut t, report),
                Err(e) => t.error("spectrum", e),
            }
        }
        for q in APPROX_GRID {
            match verify_spectrum(shape, &approx(q)) {
                Ok(report) => record(&mut t, report),
                Err(e) => t.error("spectrum", e),
            }
        }
    }
    let expected_annihilators = nontrivial_shapes(7)
        .iter()
        .filter(|s| s.dim() <= ANNIHILATOR_MAX_DIM as u128)
        .count()
        * (EXACT_GRID.len() + APPROX_GRID.len());
    if annihilators != expected_annihilators {
        t.failures.push(format!("{annihilators} annihilator checks, expected {expected_annihilators}"));
    }
    t.outcome(format!(
        ", worst eigenvalue {:.3e}, eigenvector {:.3e}, annihilator {:.3e} ({annihilators} products)",
        worst[0], worst[1], worst[2]
    ))
}

fn criterion_6() -> (bool, String) {
    let mut t = Tally::default();
    let mut worst = 0f64;
    for shape in nontrivial_shapes(6) {
        for (i, &a) in ISOSPECTRAL_GRID.iter().enumerate() {
            for &b in &ISOSPECTRAL_GRID[i + 1..] {
                t.absorb("isospectral", |t| {
                    let report = verify_isospectral(shape, &approx(a), &approx(b))?;
                    worst = report.checks.iter().map(|c| c.residual.magnitude()).fold(worst, f64::max);
                    t.require_pass(report);
                    Ok(())
                });
            }
        }
    }
    t.outcome(format!(", worst deviation {worst:.3e}"))
}

fn criterion_7() -> (bool, String) {
    let mut t = Tally::default();
    let mut smallest_control = f64::INFINITY;
    for shape in shapes(6).into_iter().filter(|s| (1..=3).contains(&s.l())) {
        for q in exact_grid() {
            t.absorb("wedge", |t| {
                let module = WedgeModule::new(shape.k(), shape.l(), q)?;
                t.require_exact(module.verify_wedge_relations());
                t.require_exact(module.verify_wedge_equivalence());
                t.require_exact(module.verify_hamiltonian_via_wedge());
                if shape.l() >= 2 {
                    for p in 1..=shape.generators() {
                        t.require_exact(module.verify_sum_product_identity(p)?);
                    }
                }
                Ok(())
            });
        }
    }
    for base_k in 1..=5 {
        for q in exact_grid() {
            t.absorb("prodtosum", |t| {
                t.require_exact(prop43_corner_instance(base_k, &q, q.value())?);
                let mut alphas = vec![q.value().mul_ref(q.value()) + Rational::from_int(2)];
                let one = Rational::from_int(1);
                if &one != q.value() && one != -q.inverse().clone() {
                    alphas.push(one);
                }
                for alpha in alphas {
                    let control = prop43_negative_control(base_k, &q, &alpha)?;
                    smallest_control = smallest_control.min(control.residual.magnitude());
                    let mut report = VerificationReport::new();
                    report.push(control);
                    t.require_pass(report);
                }
                Ok(())
            });
        }
    }
    t.outcome(format!(", smallest negative-control residual {smallest_control:.3e}"))
}

fn criterion_8() -> (bool, String) {
    let mut t = Tally::default();
    let grid: Vec<QParam<Rational>> = COMMUTING_GRID.iter().map(|&(n, d)| QParam::from_ratio(n, d).unwrap()).collect();
    for k in 0..=6 {
        for (i, q) in grid.iter().enumerate() {
            for (j, r) in grid.iter().enumerate() {
                if i != j {
                    t.absorb("commuting", |t| {
                        t.require_exact(commuting_family_check(k, q, r)?);
                        Ok(())
                    });
                }
            }
        }
        t.absorb("commuting grid", |t| {
            t.require_exact(commuting_grid_check(k, &grid)?);
            Ok(())
        });
    }
    t.outcome(String::new())
}

fn criterion_9() -> (bool, String) {
    let mut t = Tally::default();
    let grid: Vec<QParam<Rational>> = [10, 100, 1000].iter().map(|&q| QParam::from_ratio(q, 1).unwrap()).collect();
    let mut at_1000 = Vec::new();
    for k in 0..=5 {
        t.absorb("limit", |t| {
            t.require_pass(verify_large_q_limit(k, &grid)?);
            at_1000.push(large_q_deviation(k, &grid[2])?.to_f64());
            Ok(())
        });
    }
    let listed = at_1000.iter().map(|d| format!("{d:.6e}")).collect::<Vec<_>>().join(" ");
    t.outcome(format!(", deviation at q=1000 for k=0..5: {listed}"))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_heckespec"))
        .args(args)
        .env_remove("HECKESPEC_DIM_CAP")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_10() -> (bool, String) {
    let reports: [&[&str]; 5] = [
        &["verify", "--k", "2", "--l", "2", "--q", "3/2", "--q", "1/2", "--q", "2"],
        &["verify", "--k", "3", "--l", "2", "--q", "0.6", "--q", "1.1", "--q", "3.0"],
        &["verify", "--k", "2", "--l", "1", "--q", "1.5", "--checks", "spectrum", "--tolerance", "1e-300"],
        &["verify", "--k", "1", "--l", "3", "--q", "2", "--format", "csv"],
        &["verify", "--k", "4", "--l", "1", "--q", "2", "--r", "3/4", "--checks", "commuting,limit"],
    ];
    let artefacts: [&[&str]; 3] = [
        &["spectrum", "--k", "3", "--l", "3", "--q", "1.5", "--q", "2/3"],
        &["spectrum", "--k", "2", "--l", "2", "--q", "2", "--format", "json"],
        &["dump", "--k", "2", "--l", "2", "--q", "3/2", "--format", "json"],
    ];
    let mut failures = Vec::new();
    let mut saw_failure_report = false;
    for args in reports.iter().chain(&artefacts) {
        let first = run_cli(args);
        let second = run_cli(args);
        if first != second {
            failures.push(format!("nondeterministic: {}", args.join(" ")));
        }
        let json_report = args[0] == "verify" && !args.contains(&"csv");
        if json_report {
            let pass = serde_json::from_slice::<serde_json::Value>(&first.1)
                .ok()
                .and_then(|v| v["pass"].as_bool());
            let expected = match pass {
                Some(true) => Some(0),
                Some(false) => {
                    saw_failure_report = true;
                    Some(1)
                }
                None => None,
            };
            if expected.is_none() || first.0 != expected {
                failures.push(format!("exit {:?} for pass={pass:?}: {}", first.0, args.join(" ")));
            }
        } else if first.0 != Some(0) {
            failures.push(format!("exit {:?}: {}", first.0, args.join(" ")));
        }
    }
    if !saw_failure_report {
        failures.push("no failing report exercised".into());
    }
    let runs = 2 * (reports.len() + artefacts.len());
    let mut detail = format!("{runs} invocations");
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first failure: {first}"));
    }
    (failures.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> (bool, String)); 10] = [
        ("defining relations exact on k+l <= 6", criterion_1),
        ("trace identity and per-generator traces", criterion_2),
        ("l=1 closed form equals generic construction, k <= 8", criterion_3),
        ("intertwiner H C = C H_inf, k <= 8", criterion_4),
        ("cosine spectrum, eigenvectors, annihilator, k+l <= 7", criterion_5),
        ("isospectrality across the q grid, k+l <= 6", criterion_6),
        ("wedge construction and prodtosum negative controls", criterion_7),
        ("commuting family C(q)C(r)^-1, k <= 6", criterion_8),
        ("large-q limit of D H D^-1, k <= 5", criterion_9),
        ("CLI determinism and exit codes", criterion_10),
    ];
    let mut all = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run();
        all &= pass;
        println!(
            "{} criterion {}: {title} [{detail}] ({:.2}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failures present");
        ExitCode::FAILURE
    }
}
