//! JSON documents and number formatting.
//!
//! Field order of every document is part of the output contract and follows
//! the struct declaration order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use snake_core::{GeneratingSequence, MeasureSpec64, QuadratureRule64, SchurSequence64};

use crate::error::CliError;

/// How floating-point values are rounded before they are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Shortest decimal form that parses back to the same `f64`.
    Exact,
    /// Rounded to this many significant digits.
    Significant(u32),
    /// Rounded to this many digits after the decimal point.
    Decimals(u32),
}

impl Precision {
    /// Rounds `x`; negative zero becomes zero so that printed output does not
    /// depend on the sign of a vanishing quantity.
    pub fn round(self, x: f64) -> f64 {
        if !x.is_finite() {
            return x;
        }
        let r = match self {
            Precision::Exact => x,
            Precision::Significant(d) => {
                let d = d.clamp(1, 17) as usize;
                format!("{:.*e}", d - 1, x).parse().unwrap_or(x)
            }
            Precision::Decimals(d) => format!("{:.*}", d as usize, x).parse().unwrap_or(x),
        };
        if r == 0.0 {
            0.0
        } else {
            r
        }
    }

    /// Rounded value in the shortest decimal form.
    pub fn format(self, x: f64) -> String {
        let r = self.round(x);
        if r.is_finite() {
            serde_json::to_string(&r).expect("finite f64 serializes")
        } else {
            r.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeDoc {
    pub s: Vec<u8>,
}

impl From<&GeneratingSequence> for ShapeDoc {
    fn from(gen: &GeneratingSequence) -> Self {
        Self { s: gen.bits() }
    }
}

impl TryFrom<&ShapeDoc> for GeneratingSequence {
    type Error = CliError;
    fn try_from(doc: &ShapeDoc) -> Result<Self, CliError> {
        let bits: Vec<i64> = doc.s.iter().map(|&b| b as i64).collect();
        Ok(GeneratingSequence::new(&bits)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchurDoc {
    pub alphas: Vec<[f64; 2]>,
}

impl From<&SchurSequence64> for SchurDoc {
    fn from(schur: &SchurSequence64) -> Self {
        Self {
            alphas: schur.alphas().iter().map(|a| pair(*a)).collect(),
        }
    }
}

impl TryFrom<&SchurDoc> for SchurSequence64 {
    type Error = CliError;
    fn try_from(doc: &SchurDoc) -> Result<Self, CliError> {
        Ok(SchurSequence64::new(
            doc.alphas.iter().map(|p| complex(*p)).collect(),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub n: usize,
    pub theta: f64,
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl From<&QuadratureRule64> for RuleDoc {
    fn from(rule: &QuadratureRule64) -> Self {
        Self {
            n: rule.n,
            theta: rule.theta,
            nodes: rule.nodes.iter().map(|z| pair(*z)).collect(),
            weights: rule.weights.clone(),
        }
    }
}

impl From<&RuleDoc> for QuadratureRule64 {
    fn from(doc: &RuleDoc) -> Self {
        QuadratureRule64 {
            n: doc.n,
            theta: doc.theta,
            nodes: doc.nodes.iter().map(|p| complex(*p)).collect(),
            weights: doc.weights.clone(),
        }
    }
}

/// Measure descriptor, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeasureDoc {
    Lebesgue {},
    Geronimus {
        a: [f64; 2],
    },
    BernsteinSzego {
        alphas: Vec<[f64; 2]>,
    },
    /// `[theta, weight]` pairs with `theta` in `[-pi, pi)`.
    Grid {
        points: Vec<[f64; 2]>,
    },
}

impl MeasureDoc {
    /// Accepts a bare name (`lebesgue`) or a JSON object.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| CliError::Validation(format!("invalid measure descriptor: {e}")));
        }
        match text {
            "lebesgue" => Ok(MeasureDoc::Lebesgue {}),
            "geronimus" | "bernstein-szego" | "grid" => Err(CliError::Validation(format!(
                "measure `{text}` needs parameters; pass a JSON object such as {}",
                match text {
                    "geronimus" => r#"{"type":"geronimus","a":[0.3,0.4]}"#,
                    "grid" => r#"{"type":"grid","points":[[0.0,1.0],[1.5,2.0]]}"#,
                    _ => r#"{"type":"bernstein-szego","alphas":[[0.6,0.0]]}"#,
                }
            ))),
            other => Err(CliError::Validation(format!(
                "unknown measure `{other}` (expected lebesgue, geronimus, bernstein-szego or grid)"
            ))),
        }
    }

    pub fn to_measure(&self) -> Result<MeasureSpec64, CliError> {
        Ok(match self {
            MeasureDoc::Lebesgue {} => MeasureSpec64::Lebesgue,
            MeasureDoc::Geronimus { a } => MeasureSpec64::geronimus(complex(*a))?,
            MeasureDoc::BernsteinSzego { alphas } => {
                MeasureSpec64::bernstein_szego(SchurSequence64::try_from(&SchurDoc {
                    alphas: alphas.clone(),
                })?)
            }
            MeasureDoc::Grid { points } => {
                MeasureSpec64::grid(points.iter().map(|p| (p[0], p[1])).collect())?
            }
        })
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Serializes `doc` on one line with every float rounded by `precision`.
/// Integer fields are left untouched.
pub fn to_json<T: Serialize>(doc: &T, precision: Precision) -> String {
    let mut value = serde_json::to_value(doc).expect("documents serialize");
    round_floats(&mut value, precision);
    serde_json::to_string(&value).expect("values serialize")
}

fn round_floats(value: &mut Value, precision: Precision) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = precision.round(n.as_f64().expect("f64 number"));
            *value = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_floats(v, precision)),
        Value::Object(map) => map.values_mut().for_each(|v| round_floats(v, precision)),
        _ => {}
    }
}

/// Parses one complex number written as `re`, `imj`, or `re+imj`/`re-imj`
/// (`i` is accepted in place of `j`).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let bad = || format!("`{text}` is not a complex number of the form re+imj");
    let Some(body) = t.strip_suffix('j').or_else(|| t.strip_suffix('i')) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Comma-separated complex list; the error names the first bad position.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    split_csv(text)
        .enumerate()
        .map(|(k, item)| {
            parse_complex(item).map_err(|e| CliError::Validation(format!("alphas[{k}]: {e}")))
        })
        .collect()
}

/// Comma-separated integer list; the error names the first bad position.
pub fn parse_int_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    split_csv(text)
        .enumerate()
        .map(|(k, item)| {
            item.trim().parse::<i64>().map_err(|_| {
                CliError::Validation(format!("{what}[{k}]: `{}` is not an integer", item.trim()))
            })
        })
        .collect()
}

fn split_csv(text: &str) -> impl Iterator<Item = &str> {
    let text = text.trim();
    let mut parts = text.split(',');
    if text.is_empty() {
        parts.next();
    }
    parts
}
