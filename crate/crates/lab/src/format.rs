//! Text formats: series, chains, sparse operators, CSV tables and JSON summaries.
//!
//! Series files hold one `k re im` (circle) or `k1 k2 re im` (torus) line per
//! nonzero coefficient under a `# domain=... exact=0|1` header. Exact
//! coefficients are written as `p/q`, floats in shortest round-trip form, so
//! reading back gives the identical series.

use std::str::FromStr;

use dixlab_core::chain::LaurentChain;
use dixlab_core::metric::DecayFitReport;
use dixlab_core::op::{SingularValueSequence, SparseOperator};
use dixlab_core::seq::{Complex, Domain, FourierSeries, FrequencyIndex, GaussRational, Scalar};
use dixlab_core::trace::{ExtendedLimitProbe, LogMeanSeries};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalars with a two-field text form.
pub trait TextScalar: Scalar {
    fn to_fields(&self) -> [String; 2];
    fn from_fields(re: &str, im: &str) -> Option<Self>;
}

impl TextScalar for Complex {
    fn to_fields(&self) -> [String; 2] {
        // Debug prints the shortest representation that parses back to the same bits.
        [format!("{:?}", self.re), format!("{:?}", self.im)]
    }

    fn from_fields(re: &str, im: &str) -> Option<Self> {
        Some(Complex::new(re.parse().ok()?, im.parse().ok()?))
    }
}

impl TextScalar for GaussRational {
    fn to_fields(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }

    fn from_fields(re: &str, im: &str) -> Option<Self> {
        Some(GaussRational::new(BigRational::from_str(re).ok()?, BigRational::from_str(im).ok()?))
    }
}

/// Fixed-precision float for CSV cells.
pub fn fixed(x: f64) -> String {
    format!("{x:.15e}")
}

fn series_header(domain: Domain, exact: bool) -> String {
    format!("# domain={} exact={}", domain.name(), u8::from(exact))
}

pub fn write_series<I: FrequencyIndex, S: TextScalar>(f: &FourierSeries<I, S>) -> String {
    let mut out = series_header(I::DOMAIN, S::EXACT);
    out.push('\n');
    for (k, c) in f.iter() {
        let coords = k.coords();
        let [re, im] = c.to_fields();
        match I::DOMAIN.dim() {
            1 => out.push_str(&format!("{} {re} {im}\n", coords[0])),
            _ => out.push_str(&format!("{} {} {re} {im}\n", coords[0], coords[1])),
        }
    }
    out
}

fn parse_header(line: usize, text: &str) -> Result<(String, bool)> {
    let body = text
        .strip_prefix('#')
        .ok_or_else(|| Error::format(line, "expected a `# domain=... exact=...` header"))?;
    let (mut domain, mut exact) = (None, None);
    for field in body.split_whitespace() {
        match field.split_once('=') {
            Some(("domain", v)) => domain = Some(v.to_string()),
            Some(("exact", "0")) => exact = Some(false),
            Some(("exact", "1")) => exact = Some(true),
            _ => return Err(Error::format(line, format!("unexpected header field `{field}`"))),
        }
    }
    match (domain, exact) {
        (Some(d), Some(e)) => Ok((d, e)),
        _ => Err(Error::format(line, "header needs both domain= and exact=")),
    }
}

/// Parses one series block: a header line followed by coefficient lines.
fn parse_series_block<I: FrequencyIndex, S: TextScalar>(lines: &[(usize, &str)]) -> Result<FourierSeries<I, S>> {
    let (&(first, header), body) = lines.split_first().ok_or_else(|| Error::format(0, "empty series"))?;
    let (domain, exact) = parse_header(first, header)?;
    if domain != I::DOMAIN.name() {
        return Err(Error::format(first, format!("domain {domain} does not match the requested {}", I::DOMAIN.name())));
    }
    if exact != S::EXACT {
        return Err(Error::format(first, format!("exact={} does not match the requested scalar type", u8::from(exact))));
    }
    let dim = I::DOMAIN.dim();
    let mut terms = std::collections::BTreeMap::new();
    for &(n, text) in body {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != dim + 2 {
            return Err(Error::format(n, format!("expected {} fields, found {}", dim + 2, fields.len())));
        }
        let mut coords = [0i64; 2];
        for (c, f) in coords.iter_mut().zip(&fields[..dim]) {
            *c = f.parse().map_err(|_| Error::format(n, format!("bad frequency `{f}`")))?;
        }
        let value = S::from_fields(fields[dim], fields[dim + 1])
            .ok_or_else(|| Error::format(n, format!("bad coefficient `{} {}`", fields[dim], fields[dim + 1])))?;
        if terms.insert(I::from_coords(coords), value).is_some() {
            return Err(Error::format(n, "repeated frequency"));
        }
    }
    Ok(FourierSeries::from_terms(terms))
}

fn numbered(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

pub fn read_series<I: FrequencyIndex, S: TextScalar>(text: &str) -> Result<FourierSeries<I, S>> {
    parse_series_block(&numbered(text))
}

/// A chain as a term list: a `# chain degree=k exact=0|1` header, then for each
/// term a `term re im` line followed by `k+1` series blocks.
pub fn write_chain<S: TextScalar>(x: &LaurentChain<S>) -> String {
    let mut out = format!("# chain degree={} exact={}\n", x.degree(), u8::from(S::EXACT));
    for (w, factors) in x.terms() {
        let [re, im] = w.to_fields();
        out.push_str(&format!("term {re} {im}\n"));
        for f in factors {
            out.push_str(&write_series(f));
        }
    }
    out
}

pub fn read_chain<S: TextScalar>(text: &str) -> Result<LaurentChain<S>> {
    let lines = numbered(text);
    let (&(first, header), rest) = lines.split_first().ok_or_else(|| Error::format(0, "empty chain"))?;
    let body = header
        .strip_prefix("# chain")
        .ok_or_else(|| Error::format(first, "expected a `# chain degree=... exact=...` header"))?;
    let (mut degree, mut exact) = (None, None);
    for field in body.split_whitespace() {
        match field.split_once('=') {
            Some(("degree", v)) => degree = v.parse::<usize>().ok(),
            Some(("exact", v)) => exact = Some(v == "1"),
            _ => return Err(Error::format(first, format!("unexpected header field `{field}`"))),
        }
    }
    let degree = degree.ok_or_else(|| Error::format(first, "missing or bad degree="))?;
    if exact != Some(S::EXACT) {
        return Err(Error::format(first, "exact= flag does not match the requested scalar type"));
    }

    let mut terms = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        let (n, line) = rest[i];
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "term" {
            return Err(Error::format(n, "expected `term re im`"));
        }
        let weight = S::from_fields(fields[1], fields[2]).ok_or_else(|| Error::format(n, "bad term weight"))?;
        i += 1;
        let mut factors = Vec::new();
        while i < rest.len() && rest[i].1.starts_with("# domain") {
            let start = i;
            i += 1;
            while i < rest.len() && !rest[i].1.starts_with('#') && !rest[i].1.starts_with("term") {
                i += 1;
            }
            factors.push(parse_series_block::<i64, S>(&rest[start..i])?);
        }
        if factors.len() != degree + 1 {
            return Err(Error::format(n, format!("term has {} factors, degree {degree} needs {}", factors.len(), degree + 1)));
        }
        terms.push((weight, factors));
    }
    if terms.is_empty() {
        return Ok(LaurentChain::zero(degree));
    }
    Ok(LaurentChain::from_terms(terms)?)
}

/// Coordinate list: `row col re im` over basis positions of the window.
pub fn write_coo<I: FrequencyIndex, S: TextScalar>(op: &SparseOperator<I, S>) -> String {
    let pos: std::collections::HashMap<I, usize> = op.basis().iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut out = format!(
        "# window={:?} size={} nnz={} exact={}\n",
        op.window(),
        op.basis().len(),
        op.nnz(),
        u8::from(S::EXACT)
    );
    let mut rows: Vec<(usize, usize, [String; 2])> = op.entries().map(|(r, c, v)| (pos[&r], pos[&c], v.to_fields())).collect();
    rows.sort_by_key(|(r, c, _)| (*r, *c));
    for (r, c, [re, im]) in rows {
        out.push_str(&format!("{r} {c} {re} {im}\n"));
    }
    out
}

fn csv_string(comment: Option<&str>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut buf = Vec::new();
    if let Some(c) = comment {
        buf.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::Io { path: "<csv buffer>".into(), source: e })?;
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// `k,mu` with a provenance comment line.
pub fn singular_values_csv(mu: &SingularValueSequence) -> Result<String> {
    csv_string(
        Some(&format!("provenance: {}", mu.provenance())),
        &["k", "mu"],
        mu.values().iter().enumerate().map(|(k, v)| vec![k.to_string(), fixed(*v)]),
    )
}

/// `m,N,value,value_im`; `m` is blank for non-dyadic checkpoints.
pub fn log_mean_csv(series: &LogMeanSeries) -> Result<String> {
    csv_string(
        Some(LogMeanSeries::NORMALIZATION),
        &["m", "N", "value", "value_im"],
        series.points().iter().map(|p| {
            vec![p.m.map(|m| m.to_string()).unwrap_or_default(), p.n.to_string(), fixed(p.value.re), fixed(p.value.im)]
        }),
    )
}

/// `j,norm`.
pub fn decay_csv(report: &DecayFitReport) -> Result<String> {
    csv_string(None, &["j", "norm"], report.js.iter().zip(&report.norms).map(|(j, n)| vec![fixed(*j), fixed(*n)]))
}

/// Generic numeric table with fixed precision.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    csv_string(None, header, rows.iter().map(|r| r.iter().map(|v| fixed(*v)).collect()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub last: f64,
    pub extrap: f64,
    pub residual: f64,
    pub oscillating: bool,
}

impl From<&ExtendedLimitProbe> for ProbeSummary {
    fn from(p: &ExtendedLimitProbe) -> Self {
        Self { min: p.min, max: p.max, mean: p.mean, last: p.last, extrap: p.extrap, residual: p.residual, oscillating: p.oscillating }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecaySummary {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub slope: Option<f64>,
    pub residual: Option<f64>,
}

impl From<&DecayFitReport> for DecaySummary {
    fn from(r: &DecayFitReport) -> Self {
        Self { alpha: r.alpha, beta: r.beta, gamma: r.gamma, slope: r.slope, residual: r.residual }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dixlab_core::seq::{CircleSeries, TorusIndex};

    #[test]
    fn circle_exact_layout() {
        let f = CircleSeries::from_terms([(-1, GaussRational::from_fractions((1, 3), (0, 1))), (2, GaussRational::from_ints(0, -2))]);
        assert_eq!(write_series(&f), "# domain=circle exact=1\n-1 1/3 0\n2 0 -2\n");
    }

    #[test]
    fn torus_float_layout() {
        let f = FourierSeries::from_terms([(TorusIndex::new(1, -2), Complex::new(0.1, -1e-300))]);
        assert_eq!(write_series(&f), "# domain=torus exact=0\n1 -2 0.1 -1e-300\n");
    }

    #[test]
    fn header_mismatches_are_rejected() {
        let text = "# domain=circle exact=1\n0 1 0\n";
        assert!(read_series::<TorusIndex, GaussRational>(text).is_err());
        assert!(read_series::<i64, Complex>(text).is_err());
        assert!(read_series::<i64, GaussRational>("0 1 0\n").is_err());
        assert!(read_series::<i64, GaussRational>("# domain=circle exact=1\n0 1 0\n0 2 0\n").is_err());
    }

    #[test]
    fn fixed_precision_cells() {
        assert_eq!(fixed(-4.0), "-4.000000000000000e0");
        assert_eq!(fixed(0.001), "1.000000000000000e-3");
    }
}
