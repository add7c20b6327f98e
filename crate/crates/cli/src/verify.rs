//! Batch invariant suites. Every case is a pure function of its inputs; the
//! suites run on separate threads and their rows are merged in suite order,
//! so the report depends only on the configuration and the seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use snake_core::{
    bandwidths, build_snake, expand_dense, measured_bandwidths, moments, moments_from_schur,
    schur_from_moments, szego_quadrature, truncate_para_unitary, GeneratingSequence, LaurentOracle,
    MeasureSpec64, QuadratureRule64, SchurSequence64,
};

use crate::commands::bits_string;
use crate::config::{JobConfig, ShapeSource, Suite};
use crate::error::CliError;
use crate::formats::{to_json, Precision, RuleDoc, SchurDoc, ShapeDoc};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_FACTORS: usize = 10;

const ORACLE_TOL: f64 = 1e-9;
const UNITARY_TOL: f64 = 1e-12;
const EXACTNESS_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-10;
const RECOVERY_TOL: f64 = 1e-8;
/// Node gap below which node-by-node comparison of two rules is meaningless.
const GAP_FLOOR: f64 = 1e-8;
const THETAS: [f64; 3] = [0.0, 0.7, -2.1];
/// Bits of the sample snake; continued with alternating bits.
const SNAKE_BITS: [bool; 9] = [true, false, true, false, false, true, true, false, false];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub suite: &'static str,
    pub case: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub factors: usize,
    pub n: usize,
    pub cases: Vec<CaseResult>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }

    pub fn to_table(&self) -> String {
        let w_suite = self
            .cases
            .iter()
            .map(|c| c.suite.len())
            .chain([5])
            .max()
            .unwrap_or(5);
        let w_case = self
            .cases
            .iter()
            .map(|c| c.case.len())
            .chain([4])
            .max()
            .unwrap_or(4);
        let mut out = format!(
            "{:<w_suite$}  {:<w_case$}  status  detail\n",
            "suite", "case"
        );
        for c in &self.cases {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out += &format!(
                "{:<w_suite$}  {:<w_case$}  {status:<6}  {}\n",
                c.suite, c.case, c.detail
            );
        }
        out += &format!(
            "summary: {} cases, {} passed, {} failed (seed {}, m = {}, n = {})",
            self.cases.len(),
            self.cases.len() - self.failures(),
            self.failures(),
            self.seed,
            self.factors,
            self.n
        );
        out
    }
}

/// Seed from `SNAKE_SEED` (decimal), else the built-in default.
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var("SNAKE_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Validation(format!(
                "SNAKE_SEED must be a decimal integer, got `{text}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

struct SchurCase {
    name: String,
    schur: SchurSequence64,
    measure: MeasureSpec64,
}

struct Inputs {
    n: usize,
    shapes: Vec<(String, GeneratingSequence)>,
    schurs: Vec<SchurCase>,
    seed: u64,
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_alpha(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex64 {
    let r = rmax * rng.gen_range((rmin / rmax).powi(2)..1.0f64).sqrt();
    Complex64::from_polar(
        r,
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

fn snake_pattern(len: usize) -> GeneratingSequence {
    let bits = (0..len)
        .map(|k| match SNAKE_BITS.get(k) {
            Some(&b) => b,
            None => (k - SNAKE_BITS.len()).is_multiple_of(2),
        })
        .collect();
    GeneratingSequence::from_bools(bits)
}

fn inputs(job: &JobConfig, seed: u64) -> Result<Inputs, CliError> {
    let factors = job.m.unwrap_or(DEFAULT_FACTORS);
    let n = job.n;
    if factors < 2 || n < 2 || n > factors {
        return Err(CliError::Validation(format!(
            "verify needs 2 <= n <= m, got n = {n}, m = {factors}"
        )));
    }
    let len = factors - 1;
    let mut shape_rng = rng(seed, 0);
    let mut shapes = vec![
        (
            "hessenberg".to_string(),
            GeneratingSequence::hessenberg(len),
        ),
        ("cmv".to_string(), GeneratingSequence::cmv(len)),
        ("snake".to_string(), snake_pattern(len)),
    ];
    for k in 0..2 {
        let gen = GeneratingSequence::from_bools((0..len).map(|_| shape_rng.gen()).collect());
        shapes.push((format!("random{k}:{}", bits_string(&gen)), gen));
    }
    if matches!(job.shape, ShapeSource::Bits(_) | ShapeSource::Monomials(_)) {
        let gen = job.generating_sequence()?;
        if gen.len() < n - 1 {
            return Err(CliError::Validation(format!(
                "configured shape has {} bits; n = {n} needs at least {}",
                gen.len(),
                n - 1
            )));
        }
        shapes.push(("config".to_string(), gen.prefix(len.min(gen.len()))));
    }
    // One parameter beyond the factors lets the bandwidth suite extend shapes.
    let needed = factors + 1;
    let schurs = if job.schur.is_some() {
        vec![SchurCase {
            name: "config".into(),
            schur: job.schur_sequence(needed)?,
            measure: job.measure()?,
        }]
    } else {
        let mut schur_rng = rng(seed, 1);
        (0..2)
            .map(|k| {
                let alphas: Vec<_> = (0..needed)
                    .map(|_| random_alpha(&mut schur_rng, 0.0, 0.7))
                    .collect();
                let schur = SchurSequence64::new(alphas).expect("radius 0.7");
                SchurCase {
                    name: format!("random{k}"),
                    measure: MeasureSpec64::bernstein_szego(schur.clone()),
                    schur,
                }
            })
            .collect()
    };
    Ok(Inputs {
        n,
        shapes,
        schurs,
        seed,
    })
}

fn case(
    suite: &'static str,
    name: String,
    outcome: Result<(String, bool), CliError>,
) -> CaseResult {
    match outcome {
        Ok((detail, pass)) => CaseResult {
            suite,
            case: name,
            detail,
            pass,
        },
        Err(e) => CaseResult {
            suite,
            case: name,
            detail: format!("error: {e}"),
            pass: false,
        },
    }
}

fn bound(value: f64, tol: f64) -> (String, bool) {
    (format!("{value:.1e} (<= {tol:.0e})"), value <= tol)
}

fn oracle_suite(inp: &Inputs) -> Vec<CaseResult> {
    let n = inp.n;
    let mut rows = Vec::new();
    for sc in &inp.schurs {
        for (shape, gen) in &inp.shapes {
            let run = || -> Result<(String, bool), CliError> {
                let (lo, hi) = gen.span(n - 1);
                let table = moments(&sc.measure, (hi - lo) as usize + 2)?;
                let oracle = LaurentOracle::new(table, gen, n - 1)?;
                let snake = build_snake(&sc.schur, gen)?;
                let diff = oracle.matrix(n)?.max_abs_diff(&expand_dense(&snake, n)?);
                let (d, ok) = bound(diff, ORACLE_TOL);
                Ok((
                    format!("max |Gram-Schmidt - path rule| over {n}x{n}: {d}"),
                    ok,
                ))
            };
            rows.push(case("oracle", format!("{shape}/{}", sc.name), run()));
        }
    }
    rows
}

fn unitarity_suite(inp: &Inputs) -> Vec<CaseResult> {
    let n = inp.n;
    let mut rows = Vec::new();
    for sc in &inp.schurs {
        for (shape, gen) in &inp.shapes {
            let run = || -> Result<(String, bool), CliError> {
                let snake = build_snake(&sc.schur, gen)?;
                let window = snake.materialize_window(gen.len())?.unitarity_defect();
                let mut trunc: f64 = 0.0;
                for theta in THETAS {
                    trunc = trunc.max(
                        truncate_para_unitary(&snake, n, theta)?
                            .matrix
                            .unitarity_defect(),
                    );
                }
                let worst = window.max(trunc);
                let (d, ok) = bound(worst, UNITARY_TOL);
                Ok((
                    format!("window {window:.1e}, truncations {trunc:.1e}: {d}"),
                    ok,
                ))
            };
            rows.push(case("unitarity", format!("{shape}/{}", sc.name), run()));
        }
    }
    rows
}

/// Generic parameters (moduli in [0.1, 0.9]) so that no entry vanishes by
/// accident; one extra bit lets runs ending at the last bit reach full width.
fn bandwidth_suite(inp: &Inputs) -> Vec<CaseResult> {
    let mut r = rng(inp.seed, 2);
    let mut rows = Vec::new();
    for (shape, gen) in &inp.shapes {
        let extended = gen.extended(r.gen());
        let alphas = (0..extended.len() + 1)
            .map(|_| random_alpha(&mut r, 0.1, 0.9))
            .collect();
        let run = || -> Result<(String, bool), CliError> {
            let snake = build_snake(&SchurSequence64::new(alphas)?, &extended)?;
            let size = extended.len() + 1;
            let dense = expand_dense(&snake, size)?;
            let structural = bandwidths(gen);
            let measured = measured_bandwidths(&dense, 0.0);
            Ok((
                format!(
                    "s = {}: structural (lower, upper) = {structural:?}, measured = {measured:?} on {size}x{size}",
                    bits_string(gen)
                ),
                structural == measured,
            ))
        };
        rows.push(case("bandwidth", shape.clone(), run()));
    }
    rows
}

fn roundtrip_suite(inp: &Inputs) -> Vec<CaseResult> {
    let exact = Precision::Exact;
    let mut rows = Vec::new();
    for (shape, gen) in &inp.shapes {
        let run = || -> Result<(String, bool), CliError> {
            let text = to_json(&ShapeDoc::from(gen), exact);
            let doc: ShapeDoc =
                serde_json::from_str(&text).map_err(|e| CliError::Verification(e.to_string()))?;
            let json_ok = GeneratingSequence::try_from(&doc)? == *gen;
            let mono_ok = GeneratingSequence::from_monomials(&gen.exponents())? == *gen;
            Ok((
                format!("shape JSON {json_ok}, monomial order {mono_ok}"),
                json_ok && mono_ok,
            ))
        };
        rows.push(case("roundtrip", format!("shape/{shape}"), run()));
    }
    for sc in &inp.schurs {
        let run = || -> Result<(String, bool), CliError> {
            let text = to_json(&SchurDoc::from(&sc.schur), exact);
            let doc: SchurDoc =
                serde_json::from_str(&text).map_err(|e| CliError::Verification(e.to_string()))?;
            let json_ok = SchurSequence64::try_from(&doc)? == sc.schur;
            let k = inp.n.min(12);
            let prefix = &sc.schur.alphas()[..k];
            let recovered = schur_from_moments(&moments_from_schur(prefix, k)?, k)?;
            let err = recovered
                .alphas()
                .iter()
                .zip(prefix)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let (d, ok) = bound(err, RECOVERY_TOL);
            Ok((
                format!("Schur JSON {json_ok}, moments -> Schur ({k} parameters) {d}"),
                json_ok && ok,
            ))
        };
        rows.push(case("roundtrip", format!("schur/{}", sc.name), run()));
        let (shape, gen) = &inp.shapes[inp.shapes.len() - 1];
        let run = || -> Result<(String, bool), CliError> {
            let rule = szego_quadrature(&build_snake(&sc.schur, gen)?, inp.n, 0.7)?;
            let text = to_json(&RuleDoc::from(&rule), exact);
            let doc: RuleDoc =
                serde_json::from_str(&text).map_err(|e| CliError::Verification(e.to_string()))?;
            let ok = QuadratureRule64::from(&doc) == rule;
            Ok((format!("rule JSON {ok}"), ok))
        };
        rows.push(case(
            "roundtrip",
            format!("rule/{shape}/{}", sc.name),
            run(),
        ));
    }
    rows
}

fn exactness_suite(inp: &Inputs) -> Vec<CaseResult> {
    let n = inp.n;
    let top = n as i64 - 1;
    let mut rows = Vec::new();
    for sc in &inp.schurs {
        let table = moments(&sc.measure, n - 1);
        for theta in &THETAS[..2] {
            let reference = build_snake(&sc.schur, &inp.shapes[0].1)
                .and_then(|s| szego_quadrature(&s, n, *theta));
            for (shape, gen) in &inp.shapes {
                let run = || -> Result<(String, bool), CliError> {
                    let table = table.clone()?;
                    let rule = szego_quadrature(&build_snake(&sc.schur, gen)?, n, *theta)?;
                    let mut defect: f64 = 0.0;
                    for j in -top..=top {
                        defect = defect.max((rule.monomial(j) - table.get(-j)?).norm());
                    }
                    let (d, ok) = bound(defect, EXACTNESS_TOL);
                    let reference = reference.clone()?;
                    let (inv, inv_ok) = if reference.min_node_gap() > GAP_FLOOR {
                        bound(rule.max_deviation(&reference), INVARIANCE_TOL)
                    } else {
                        ("skipped (clustered nodes)".into(), true)
                    };
                    let mass = (rule.weight_sum() - 1.0).abs();
                    let positive = rule.weights.iter().all(|&w| w > 0.0);
                    Ok((
                        format!(
                            "exactness {d}, vs hessenberg {inv}, |sum w - 1| {mass:.1e}, weights positive {positive}"
                        ),
                        ok && inv_ok && positive && mass <= EXACTNESS_TOL,
                    ))
                };
                rows.push(case(
                    "exactness",
                    format!("{shape}/{}/theta={theta}", sc.name),
                    run(),
                ));
            }
        }
    }
    rows
}

pub fn run_suites(job: &JobConfig, seed: u64) -> Result<Report, CliError> {
    let inp = inputs(job, seed)?;
    type SuiteFn = fn(&Inputs) -> Vec<CaseResult>;
    let all: [(Suite, SuiteFn); 5] = [
        (Suite::Oracle, oracle_suite),
        (Suite::Unitarity, unitarity_suite),
        (Suite::Bandwidth, bandwidth_suite),
        (Suite::Roundtrip, roundtrip_suite),
        (Suite::Exactness, exactness_suite),
    ];
    let selected: Vec<SuiteFn> = all
        .into_iter()
        .filter(|(s, _)| job.suite == Suite::All || job.suite == *s)
        .map(|(_, f)| f)
        .collect();
    let cases = std::thread::scope(|scope| {
        let handles: Vec<_> = selected.iter().map(|f| scope.spawn(|| f(&inp))).collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    Ok(Report {
        seed,
        factors: job.m.unwrap_or(DEFAULT_FACTORS),
        n: inp.n,
        cases,
    })
}
