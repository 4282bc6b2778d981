//! Verification records and their JSON, CSV and human-readable renderings.

use std::fmt::Write as _;
use std::io::{self, Write};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::polymod::ResiduePoly;
use crate::serde_bigint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    Inapplicable,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
            CheckStatus::Inapplicable => "inapplicable",
        }
    }
}

/// Number of leading nonzero coefficients kept in a witness.
pub const WITNESS_TERMS: usize = 16;

/// Bounded fingerprint of a canonical ring element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDigest {
    /// `(exponent, coefficient)` for the first nonzero coefficients.
    pub leading: Vec<(u32, String)>,
    pub nonzero: usize,
    /// SHA-256 over the comma-joined decimal coefficient sequence.
    pub sha256: String,
}

impl PolyDigest {
    pub fn of(a: &ResiduePoly) -> Self {
        let mut joined = String::new();
        for (i, c) in a.coeffs().iter().enumerate() {
            if i > 0 {
                joined.push(',');
            }
            write!(joined, "{c}").expect("write to String");
        }
        let hash = Sha256::digest(joined.as_bytes());
        let sha256 = hash.iter().fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").expect("write to String");
            s
        });
        let nonzero_terms = a
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.sign() != num_bigint::Sign::NoSign);
        PolyDigest {
            leading: nonzero_terms
                .clone()
                .take(WITNESS_TERMS)
                .map(|(i, c)| (i as u32, c.to_string()))
                .collect(),
            nonzero: nonzero_terms.count(),
            sha256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessSide {
    Poly(PolyDigest),
    Int(#[serde(with = "serde_bigint")] BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Comparison { lhs: WitnessSide, rhs: WitnessSide },
    /// The check could not be evaluated.
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckRecord {
    pub fn inapplicable(name: &str) -> Self {
        CheckRecord {
            name: name.to_string(),
            status: CheckStatus::Inapplicable,
            ms: None,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Values the checks for one prime were computed from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportInputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_minus_p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_bigint::option")]
    pub u: Option<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_bigint::option")]
    pub v: Option<BigInt>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none", with = "serde_bigint::option")]
    pub a: Option<BigInt>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none", with = "serde_bigint::option")]
    pub b: Option<BigInt>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none", with = "serde_bigint::option")]
    pub c: Option<BigInt>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none", with = "serde_bigint::option")]
    pub d: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub p: u64,
    pub p_mod_4: u8,
    pub checks: Vec<CheckRecord>,
    pub inputs: ReportInputs,
}

impl VerificationReport {
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
    Csv,
}

/// One JSON object per line.
pub fn write_json<W: Write>(out: &mut W, report: &VerificationReport) -> io::Result<()> {
    serde_json::to_writer(&mut *out, report)?;
    out.write_all(b"\n")
}

pub fn parse_json_lines(text: &str) -> serde_json::Result<Vec<VerificationReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

pub const CSV_HEADER: [&str; 4] = ["p", "check", "status", "ms"];

/// Flat `p,check,status,ms` rows; the caller writes [`CSV_HEADER`] once.
pub fn write_csv_rows<W: Write>(out: &mut csv::Writer<W>, report: &VerificationReport) -> csv::Result<()> {
    for c in &report.checks {
        let ms = c.ms.map(|m| format!("{m:.3}")).unwrap_or_default();
        out.write_record([report.p.to_string().as_str(), &c.name, c.status.as_str(), &ms])?;
    }
    Ok(())
}

pub fn write_human<W: Write>(out: &mut W, report: &VerificationReport) -> io::Result<()> {
    let verdict = if report.has_failures() { "FAIL" } else { "ok" };
    writeln!(out, "p = {} (≡ {} mod 4): {verdict}", report.p, report.p_mod_4)?;
    let i = &report.inputs;
    let mut inputs = Vec::new();
    if let Some(h) = i.h_minus_p {
        inputs.push(format!("h(-p)={h}"));
    }
    if let Some(h) = i.h_p {
        inputs.push(format!("h(p)={h}"));
    }
    for (label, v) in [("u", &i.u), ("v", &i.v), ("A", &i.a), ("B", &i.b), ("C", &i.c), ("D", &i.d)] {
        if let Some(v) = v {
            inputs.push(format!("{label}={v}"));
        }
    }
    if !inputs.is_empty() {
        writeln!(out, "  inputs: {}", inputs.join(" "))?;
    }
    for c in &report.checks {
        let ms = c.ms.map(|m| format!(" ({m:.1} ms)")).unwrap_or_default();
        writeln!(out, "  {:<34} {}{ms}", c.name, c.status.as_str())?;
        match &c.witness {
            Some(Witness::Comparison { lhs, rhs }) => {
                writeln!(out, "    lhs: {}", describe_side(lhs))?;
                writeln!(out, "    rhs: {}", describe_side(rhs))?;
            }
            Some(Witness::Error(e)) => writeln!(out, "    error: {e}")?,
            None => {}
        }
    }
    Ok(())
}

fn describe_side(side: &WitnessSide) -> String {
    match side {
        WitnessSide::Int(n) => n.to_string(),
        WitnessSide::Poly(d) => {
            let terms: Vec<String> = d.leading.iter().map(|(e, c)| format!("{c}q^{e}")).collect();
            let more = if d.nonzero > d.leading.len() { " + ..." } else { "" };
            format!(
                "[{}{more}] ({} nonzero, sha256 {})",
                terms.join(" + "),
                d.nonzero,
                &d.sha256[..16]
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_truncates_and_hashes() {
        let coeffs: Vec<i64> = (1..=20).collect();
        let a = ResiduePoly::from_i64s(23, &[&coeffs[..], &[0, 5]].concat()).unwrap();
        let d = PolyDigest::of(&a);
        assert_eq!(d.leading.len(), WITNESS_TERMS);
        assert_eq!(d.nonzero, 21);
        assert_eq!(d.leading[0], (0, "1".to_string()));
        assert_eq!(d.sha256.len(), 64);
        let b = ResiduePoly::from_i64s(23, &[&coeffs[..], &[0, 6]].concat()).unwrap();
        assert_ne!(PolyDigest::of(&b).sha256, d.sha256);
    }

    #[test]
    fn digest_of_known_sequence() {
        // sha256("-1,0,0,0")
        let a = ResiduePoly::constant(5, -1);
        assert_eq!(
            PolyDigest::of(&a).sha256,
            "2985f65ec05ade1c35ff46e7e16525b9d288612b50c4a0d46663e09260bf826e"
        );
    }
}
