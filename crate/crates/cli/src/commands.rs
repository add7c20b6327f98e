//! One function per subcommand. Each returns the text to emit; writing it is
//! the caller's job.

use serde::Serialize;
use snake_core::{
    bandwidths, build_snake, canonical_arg, entry, expand_dense, measured_bandwidths, moments,
    path, szego_quadrature, GeneratingSequence, QuadratureRule64, SnakeFactorization64,
};

use crate::config::{Format, JobConfig};
use crate::error::CliError;
use crate::formats::{pair, to_json, Precision, RuleDoc};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildDoc {
    pub s: Vec<u8>,
    pub p: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryDoc {
    pub i: usize,
    pub j: usize,
    pub value: [f64; 2],
    pub r: usize,
    pub t: usize,
    /// Inner segments contributing a `rho`.
    pub k: Vec<usize>,
    pub b: Option<u8>,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandwidthDoc {
    pub s: Vec<u8>,
    /// `(lower, upper)` from the longest runs of the generating sequence.
    pub structural: [usize; 2],
    /// `(lower, upper)` of the nonzero pattern of the leading block.
    pub measured: [usize; 2],
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureDoc {
    #[serde(flatten)]
    pub rule: RuleDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness_defect: Option<f64>,
}

/// Snake with exactly the parameters `alpha_0..alpha_m` it needs.
pub fn snake_for(job: &JobConfig) -> Result<SnakeFactorization64, CliError> {
    let gen = job.generating_sequence()?;
    let schur = job.schur_sequence(gen.len() + 1)?;
    Ok(build_snake(&schur, &gen)?)
}

pub fn cmd_build(job: &JobConfig) -> Result<String, CliError> {
    let snake = snake_for(job)?;
    let gen = snake.gen();
    let doc = BuildDoc {
        s: gen.bits(),
        p: gen.ps().to_vec(),
        left: snake.left_factors().to_vec(),
        right: snake.right_factors().to_vec(),
        order: snake.order().to_vec(),
    };
    Ok(match job.format {
        Format::Json => to_json(&doc, job.precision),
        Format::Csv => {
            let row = |name: &str, v: Vec<String>| format!("{name},{}\n", v.join(","));
            let strs = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            let mut out = String::new();
            out += &row("s", doc.s.iter().map(|x| x.to_string()).collect());
            out += &row("p", strs(&doc.p));
            out += &row("left", strs(&doc.left));
            out += &row("right", strs(&doc.right));
            out += &row("order", strs(&doc.order));
            out.trim_end().to_string()
        }
    })
}

pub fn cmd_entry(job: &JobConfig) -> Result<String, CliError> {
    let (Some(i), Some(j)) = (job.i, job.j) else {
        return Err(CliError::Validation("entry needs --i and --j".into()));
    };
    let snake = snake_for(job)?;
    let p = path(snake.gen(), i, j)?;
    let value = entry(&snake, i, j)?;
    let doc = EntryDoc {
        i,
        j,
        value: pair(value),
        r: p.r,
        t: p.t,
        k: p.inner.clone().collect(),
        b: p.b,
        monotone: p.monotone,
    };
    Ok(match job.format {
        Format::Json => to_json(&doc, job.precision),
        Format::Csv => {
            let f = |x| job.precision.format(x);
            let k: Vec<String> = doc.k.iter().map(|x| x.to_string()).collect();
            format!(
                "i,j,re,im,r,t,k,b,monotone\n{},{},{},{},{},{},{},{},{}",
                i,
                j,
                f(value.re),
                f(value.im),
                p.r,
                p.t,
                k.join(" "),
                p.b.map_or(String::new(), |b| b.to_string()),
                p.monotone
            )
        }
    })
}

pub fn cmd_expand(job: &JobConfig) -> Result<String, CliError> {
    let snake = snake_for(job)?;
    let a = expand_dense(&snake, job.n)?;
    Ok(match job.format {
        Format::Json => {
            let rows = (0..a.rows())
                .map(|i| a.row(i).iter().map(|z| pair(*z)).collect())
                .collect();
            to_json(&MatrixDoc { n: job.n, rows }, job.precision)
        }
        Format::Csv => {
            let mut out = String::from("i,j,re,im");
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    let z = a[(i, j)];
                    out += &format!(
                        "\n{i},{j},{},{}",
                        job.precision.format(z.re),
                        job.precision.format(z.im)
                    );
                }
            }
            out
        }
    })
}

/// Structural bandwidths against the nonzero pattern of the full computable
/// block, `(m + 1) x (m + 1)`.
pub fn bandwidth_doc(snake: &SnakeFactorization64) -> Result<BandwidthDoc, CliError> {
    let gen = snake.gen();
    let size = gen.len() + 1;
    let dense = expand_dense(snake, size)?;
    let (sl, su) = bandwidths(gen);
    let (ml, mu) = measured_bandwidths(&dense, 0.0);
    Ok(BandwidthDoc {
        s: gen.bits(),
        structural: [sl, su],
        measured: [ml, mu],
        size,
    })
}

pub fn cmd_bandwidth(job: &JobConfig) -> Result<String, CliError> {
    let doc = bandwidth_doc(&snake_for(job)?)?;
    Ok(match job.format {
        Format::Json => to_json(&doc, job.precision),
        Format::Csv => format!(
            "structural_lower,structural_upper,measured_lower,measured_upper,size\n{},{},{},{},{}",
            doc.structural[0], doc.structural[1], doc.measured[0], doc.measured[1], doc.size
        ),
    })
}

/// `max_{|j| <= n-1} |I_n(z^j) - integral of z^j|` against the measure's
/// moment table.
pub fn exactness_defect(job: &JobConfig, rule: &QuadratureRule64) -> Result<f64, CliError> {
    let top = rule.n as i64 - 1;
    let table = moments(&job.measure()?, rule.n - 1)?;
    let mut worst: f64 = 0.0;
    for j in -top..=top {
        worst = worst.max((rule.monomial(j) - table.get(-j)?).norm());
    }
    Ok(worst)
}

pub fn quadrature_rule(job: &JobConfig) -> Result<QuadratureRule64, CliError> {
    let snake = snake_for(job)?;
    Ok(szego_quadrature(&snake, job.n, job.theta)?)
}

/// Emitted rule, plus the exactness defect when `--verify` is set.
pub fn cmd_quadrature(job: &JobConfig) -> Result<(String, Option<f64>), CliError> {
    let rule = quadrature_rule(job)?;
    let defect = if job.verify {
        Some(exactness_defect(job, &rule)?)
    } else {
        None
    };
    let text = match job.format {
        Format::Json => to_json(
            &QuadratureDoc {
                rule: RuleDoc::from(&rule),
                exactness_defect: defect,
            },
            job.precision,
        ),
        Format::Csv => {
            let mut out = rule_csv(&rule, job.precision);
            if let Some(d) = defect {
                out += &format!(
                    "\n# exactness_defect={}",
                    Precision::Significant(3).format(d)
                );
            }
            out
        }
    };
    Ok((text, defect))
}

/// `arg,modulus,weight` rows in node order.
pub fn rule_csv(rule: &QuadratureRule64, precision: Precision) -> String {
    let snap = f64::EPSILON.sqrt();
    let mut out = String::from("arg,modulus,weight");
    for (z, w) in rule.nodes.iter().zip(&rule.weights) {
        out += &format!(
            "\n{},{},{}",
            precision.format(canonical_arg(*z, snap)),
            precision.format(z.norm()),
            precision.format(*w)
        );
    }
    out
}

/// Shape used in text output.
pub fn bits_string(gen: &GeneratingSequence) -> String {
    gen.bits().iter().map(|b| b.to_string()).collect()
}
