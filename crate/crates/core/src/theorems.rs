//! Assembles both sides of each congruence for a prime, compares them
//! exactly, checks the classical `q -> 1` consequences, and sweeps ranges.

use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_prime, factorial_mod, inv_mod_prime, primes_in};
use crate::cyclotomic::{self, IdentityOutcome, Sides};
use crate::error::{Error, Result};
use crate::polymod::ResiduePoly;
use crate::qnumber::{half_product_with, wilson_product_with, ProductStrategy};
use crate::quadratic::{
    class_number_imag, class_number_imag_forms, fundamental_unit, residue_sets,
    theorem_coefficients_for_unit, PellUnit, ResidueSets, TheoremCoefficients,
};
use crate::report::{CheckRecord, CheckStatus, PolyDigest, ReportInputs, VerificationReport, Witness, WitnessSide};

/// A selectable group of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Target {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    /// Theorem 4 with exponent multiplier 1 instead of 16.
    Theorem4Stated,
    Corollaries,
    ProofIdentities,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::Theorem1,
        Target::Theorem2,
        Target::Theorem3,
        Target::Theorem4,
        Target::Theorem4Stated,
        Target::Corollaries,
        Target::ProofIdentities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Theorem1 => "1",
            Target::Theorem2 => "2",
            Target::Theorem3 => "3",
            Target::Theorem4 => "4",
            Target::Theorem4Stated => "4-stated",
            Target::Corollaries => "corollaries",
            Target::ProofIdentities => "proof-identities",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTarget(pub String);

impl fmt::Display for UnknownTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = Target::ALL.iter().map(|t| t.name()).collect();
        write!(f, "unknown theorem '{}' (expected one of {})", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownTarget {}

impl FromStr for Target {
    type Err = UnknownTarget;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| UnknownTarget(s.to_string()))
    }
}

/// Parses a comma-separated target list such as `1,2,corollaries`.
pub fn parse_targets(list: &str) -> std::result::Result<BTreeSet<Target>, UnknownTarget> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Target::from_str)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub targets: BTreeSet<Target>,
    pub jobs: usize,
    pub fail_fast: bool,
    pub strategy: ProductStrategy,
    /// Record wall-clock time per check. Off by default so that reports are
    /// reproducible byte for byte.
    pub record_timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            targets: Target::ALL.into_iter().collect(),
            jobs: 1,
            fail_fast: false,
            strategy: ProductStrategy::default(),
            record_timings: false,
        }
    }
}

/// Lazily computed objects shared by the checks for one prime.
struct PrimeContext {
    p: u64,
    prime: u32,
    strategy: ProductStrategy,
    sets: ResidueSets,
    wilson: OnceCell<ResiduePoly>,
    half16: OnceCell<ResiduePoly>,
    half1: OnceCell<ResiduePoly>,
    h_minus_p: OnceCell<Result<u64>>,
    unit: OnceCell<Result<PellUnit>>,
    h_p: OnceCell<Result<u64>>,
    coefficients: OnceCell<Result<TheoremCoefficients>>,
}

impl PrimeContext {
    fn new(p: u64, strategy: ProductStrategy) -> Result<Self> {
        let prime = check_odd_prime(p)?;
        if prime < 5 {
            return Err(Error::PrimeTooSmall { p: prime, min: 5 });
        }
        Ok(PrimeContext {
            p,
            prime,
            strategy,
            sets: residue_sets(p)?,
            wilson: OnceCell::new(),
            half16: OnceCell::new(),
            half1: OnceCell::new(),
            h_minus_p: OnceCell::new(),
            unit: OnceCell::new(),
            h_p: OnceCell::new(),
            coefficients: OnceCell::new(),
        })
    }

    fn mod4(&self) -> u32 {
        self.prime % 4
    }

    fn wilson(&self) -> &ResiduePoly {
        self.wilson
            .get_or_init(|| wilson_product_with(self.p, self.strategy).expect("validated prime"))
    }

    fn half16(&self) -> &ResiduePoly {
        self.half16
            .get_or_init(|| half_product_with(self.p, 16, self.strategy).expect("validated prime"))
    }

    fn half1(&self) -> &ResiduePoly {
        self.half1
            .get_or_init(|| half_product_with(self.p, 1, self.strategy).expect("validated prime"))
    }

    fn h_minus_p(&self) -> Result<u64> {
        self.h_minus_p.get_or_init(|| class_number_imag(self.p)).clone()
    }

    fn unit(&self) -> Result<&PellUnit> {
        self.unit
            .get_or_init(|| fundamental_unit(self.p))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn h_p(&self) -> Result<u64> {
        self.h_p
            .get_or_init(|| cyclotomic::class_number_real_exact(self.p))
            .clone()
    }

    fn coefficients(&self) -> Result<&TheoremCoefficients> {
        self.coefficients
            .get_or_init(|| theorem_coefficients_for_unit(self.unit()?, self.h_p()?))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn rhs_theorem3(&self) -> Result<ResiduePoly> {
        let t = self.coefficients()?;
        Ok(&ResiduePoly::constant(self.prime, t.a.clone()) + &self.non_residue_sum(0).scalar_mul(&t.b))
    }

    fn rhs_theorem4(&self) -> Result<ResiduePoly> {
        let t = self.coefficients()?;
        let c_term = ResiduePoly::monomial(self.prime, 1).scalar_mul(&t.c);
        let d_term = self.non_residue_sum(1).scalar_mul(&t.d);
        Ok(-&(&c_term + &d_term))
    }

    /// `sum_{j in N} q^(j + shift)`
    fn non_residue_sum(&self, shift: u64) -> ResiduePoly {
        self.sets
            .non_residues
            .iter()
            .fold(ResiduePoly::zero(self.prime), |acc, &j| {
                &acc + &ResiduePoly::monomial(self.prime, j as u64 + shift)
            })
    }

    fn inputs(&self) -> ReportInputs {
        let mut inputs = ReportInputs::default();
        if self.mod4() == 3 {
            inputs.h_minus_p = self.h_minus_p().ok();
        } else {
            inputs.h_p = self.h_p().ok();
            if let Ok(u) = self.unit() {
                inputs.u = Some(u.x.clone());
                inputs.v = Some(u.y.clone());
            }
            if let Ok(t) = self.coefficients() {
                inputs.a = Some(t.a.clone());
                inputs.b = Some(t.b.clone());
                inputs.c = Some(t.c.clone());
                inputs.d = Some(t.d.clone());
            }
        }
        inputs
    }
}

fn ring_check(name: &str, lhs: &ResiduePoly, rhs: &ResiduePoly) -> CheckRecord {
    // Equality of canonical forms implies equal values at q = 1; the second
    // comparison is kept independent to catch reduction bugs.
    let holds = lhs == rhs && lhs.eval_at_one_mod_p() == rhs.eval_at_one_mod_p();
    record(
        name,
        holds,
        || WitnessSide::Poly(PolyDigest::of(lhs)),
        || WitnessSide::Poly(PolyDigest::of(rhs)),
    )
}

fn int_check(name: &str, lhs: BigInt, rhs: BigInt) -> CheckRecord {
    let holds = lhs == rhs;
    record(name, holds, || WitnessSide::Int(lhs), || WitnessSide::Int(rhs))
}

fn record(
    name: &str,
    holds: bool,
    lhs: impl FnOnce() -> WitnessSide,
    rhs: impl FnOnce() -> WitnessSide,
) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        status: if holds { CheckStatus::Pass } else { CheckStatus::Fail },
        ms: None,
        witness: (!holds).then(|| Witness::Comparison { lhs: lhs(), rhs: rhs() }),
    }
}

fn error_check(name: &str, err: &Error) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        status: CheckStatus::Fail,
        ms: None,
        witness: Some(Witness::Error(err.to_string())),
    }
}

/// `(-1)^((h+1)/2)`, or `None` when `h` is even.
fn half_parity_sign(h: u64) -> Option<i64> {
    if h.is_multiple_of(2) {
        return None;
    }
    Some(if h.div_ceil(2).is_multiple_of(2) { 1 } else { -1 })
}

fn theorem1(ctx: &PrimeContext) -> CheckRecord {
    const NAME: &str = "theorem1";
    if ctx.mod4() != 3 {
        return CheckRecord::inapplicable(NAME);
    }
    ring_check(NAME, ctx.wilson(), &ResiduePoly::constant(ctx.prime, -1))
}

fn theorem2(ctx: &PrimeContext) -> CheckRecord {
    const NAME: &str = "theorem2";
    if ctx.mod4() != 3 {
        return CheckRecord::inapplicable(NAME);
    }
    let h = match ctx.h_minus_p() {
        Ok(h) => h,
        Err(e) => return error_check(NAME, &e),
    };
    let Some(sign) = half_parity_sign(h) else {
        return error_check(NAME, &Error::ClassNumberParity { h });
    };
    let rhs = ResiduePoly::monomial(ctx.prime, 1).scalar_mul(&BigInt::from(sign));
    ring_check(NAME, ctx.half16(), &rhs)
}

fn theorem3(ctx: &PrimeContext) -> CheckRecord {
    const NAME: &str = "theorem3";
    if ctx.mod4() != 1 {
        return CheckRecord::inapplicable(NAME);
    }
    match ctx.rhs_theorem3() {
        Ok(rhs) => ring_check(NAME, ctx.wilson(), &rhs),
        Err(e) => error_check(NAME, &e),
    }
}

fn theorem4(ctx: &PrimeContext, stated: bool) -> CheckRecord {
    let name = if stated { "theorem4-stated" } else { "theorem4" };
    if ctx.mod4() != 1 {
        return CheckRecord::inapplicable(name);
    }
    let lhs = if stated { ctx.half1() } else { ctx.half16() };
    match ctx.rhs_theorem4() {
        Ok(rhs) => ring_check(name, lhs, &rhs),
        Err(e) => error_check(name, &e),
    }
}

/// Named closures so the sweep can time each check separately.
type CheckFn<'a> = Box<dyn Fn(&PrimeContext) -> CheckRecord + 'a>;

fn corollary_checks(ctx: &PrimeContext) -> Vec<CheckFn<'static>> {
    let mut checks: Vec<CheckFn> = vec![Box::new(|ctx: &PrimeContext| {
        int_check(
            "classical-wilson",
            ctx.wilson().eval_at_one_mod_p().into(),
            (ctx.p - 1).into(),
        )
    })];
    checks.push(Box::new(|ctx: &PrimeContext| {
        int_check(
            "half-product-at-one",
            ctx.half16().eval_at_one_mod_p().into(),
            factorial_mod((ctx.p - 1) / 2, ctx.p).into(),
        )
    }));
    if ctx.mod4() == 3 {
        checks.push(Box::new(|ctx: &PrimeContext| {
            const NAME: &str = "mordell";
            let h = match ctx.h_minus_p() {
                Ok(h) => h,
                Err(e) => return error_check(NAME, &e),
            };
            let Some(sign) = half_parity_sign(h) else {
                return error_check(NAME, &Error::ClassNumberParity { h });
            };
            let p = BigInt::from(ctx.p);
            int_check(
                NAME,
                factorial_mod((ctx.p - 1) / 2, ctx.p).into(),
                BigInt::from(sign).mod_floor(&p),
            )
        }));
    } else {
        checks.push(Box::new(|ctx: &PrimeContext| {
            const NAME: &str = "chowla";
            let (h, unit) = match (ctx.h_p(), ctx.unit()) {
                (Ok(h), Ok(u)) => (h, u),
                (Err(e), _) | (_, Err(e)) => return error_check(NAME, &e),
            };
            let Some(sign) = half_parity_sign(h) else {
                return error_check(NAME, &Error::ClassNumberParity { h });
            };
            let p = BigInt::from(ctx.p);
            let rhs = (BigInt::from(sign) * &unit.x * BigInt::from(inv_mod_prime(2, ctx.p))).mod_floor(&p);
            int_check(NAME, factorial_mod((ctx.p - 1) / 2, ctx.p).into(), rhs)
        }));
        checks.push(Box::new(|ctx: &PrimeContext| match ctx.unit() {
            Ok(u) => int_check(
                "unit-norm-minus-one",
                &u.x * &u.x - BigInt::from(ctx.p) * &u.y * &u.y,
                BigInt::from(-4),
            ),
            Err(e) => error_check("unit-norm-minus-one", &e),
        }));
        checks.push(Box::new(|ctx: &PrimeContext| match ctx.h_p() {
            Ok(h) => int_check("h-p-odd", BigInt::from(h % 2), BigInt::from(1)),
            Err(e) => error_check("h-p-odd", &e),
        }));
    }
    checks
}

fn identity_record(o: IdentityOutcome) -> CheckRecord {
    let (lhs, rhs) = match o.sides {
        Sides::Ring(a, b) => (
            WitnessSide::Poly(PolyDigest::of(&a)),
            WitnessSide::Poly(PolyDigest::of(&b)),
        ),
        Sides::Integer(a, b) => (WitnessSide::Int(a), WitnessSide::Int(b)),
    };
    record(o.name, o.holds, || lhs, || rhs)
}

fn proof_identity_checks(ctx: &PrimeContext) -> Vec<CheckFn<'static>> {
    let mut checks: Vec<CheckFn> = Vec::new();
    if ctx.mod4() == 3 {
        checks.push(Box::new(|ctx: &PrimeContext| {
            const NAME: &str = "h-minus-p-forms-oracle";
            match (ctx.h_minus_p(), class_number_imag_forms(ctx.p)) {
                (Ok(a), Ok(b)) => int_check(NAME, a.into(), b.into()),
                (Err(e), _) | (_, Err(e)) => error_check(NAME, &e),
            }
        }));
    } else {
        checks.push(Box::new(|ctx: &PrimeContext| {
            const NAME: &str = "h-p-numeric-oracle";
            match (ctx.h_p(), cyclotomic::class_number_real_numeric(ctx.p)) {
                (Ok(a), Ok(b)) => int_check(NAME, a.into(), b.h.into()),
                (Err(e), _) | (_, Err(e)) => error_check(NAME, &e),
            }
        }));
    }
    checks
}

fn timed(record_timings: bool, f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let start = Instant::now();
    let mut rec = f();
    if record_timings {
        rec.ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rec
}

/// Runs every selected check for one prime `p ≥ 5`.
pub fn verify_prime(p: u64, options: &RunOptions) -> Result<VerificationReport> {
    let ctx = PrimeContext::new(p, options.strategy)?;
    let t = options.record_timings;
    let mut checks = Vec::new();
    for &target in &options.targets {
        match target {
            Target::Theorem1 => checks.push(timed(t, || theorem1(&ctx))),
            Target::Theorem2 => checks.push(timed(t, || theorem2(&ctx))),
            Target::Theorem3 => checks.push(timed(t, || theorem3(&ctx))),
            Target::Theorem4 => checks.push(timed(t, || theorem4(&ctx, false))),
            Target::Theorem4Stated => checks.push(timed(t, || theorem4(&ctx, true))),
            Target::Corollaries => {
                for check in corollary_checks(&ctx) {
                    checks.push(timed(t, || check(&ctx)));
                }
            }
            Target::ProofIdentities => {
                for check in proof_identity_checks(&ctx) {
                    checks.push(timed(t, || check(&ctx)));
                }
                let start = Instant::now();
                let h = if ctx.mod4() == 3 { ctx.h_minus_p().ok() } else { None };
                match cyclotomic::proof_identity_suite(p, h) {
                    Ok(outcomes) => {
                        // The suite shares its intermediate products, so its
                        // time is reported on the first of its records.
                        let mut first = true;
                        for o in outcomes {
                            let mut rec = identity_record(o);
                            if t && first {
                                rec.ms = Some(start.elapsed().as_secs_f64() * 1e3);
                            } else if t {
                                rec.ms = Some(0.0);
                            }
                            first = false;
                            checks.push(rec);
                        }
                    }
                    Err(e) => checks.push(error_check("proof-identity-suite", &e)),
                }
            }
        }
    }
    Ok(VerificationReport {
        p,
        p_mod_4: ctx.mod4() as u8,
        checks,
        inputs: ctx.inputs(),
    })
}

pub fn verify_theorem1(p: u64) -> Result<CheckRecord> {
    Ok(theorem1(&PrimeContext::new(p, ProductStrategy::default())?))
}

pub fn verify_theorem2(p: u64) -> Result<CheckRecord> {
    Ok(theorem2(&PrimeContext::new(p, ProductStrategy::default())?))
}

pub fn verify_theorem3(p: u64) -> Result<CheckRecord> {
    Ok(theorem3(&PrimeContext::new(p, ProductStrategy::default())?))
}

/// Theorem 4 with exponent multiplier `t`; `t = 16` is the proved form.
pub fn verify_theorem4(p: u64, t: u64) -> Result<CheckRecord> {
    let ctx = PrimeContext::new(p, ProductStrategy::default())?;
    if ctx.mod4() != 1 {
        return Ok(CheckRecord::inapplicable(if t == 16 { "theorem4" } else { "theorem4-stated" }));
    }
    Ok(match t {
        16 => theorem4(&ctx, false),
        1 => theorem4(&ctx, true),
        _ => {
            let name = format!("theorem4-t{t}");
            let lhs = half_product_with(p, t, ctx.strategy)?;
            match ctx.rhs_theorem4() {
                Ok(rhs) => ring_check(&name, &lhs, &rhs),
                Err(e) => error_check(&name, &e),
            }
        }
    })
}

pub fn verify_corollaries(p: u64) -> Result<Vec<CheckRecord>> {
    let ctx = PrimeContext::new(p, ProductStrategy::default())?;
    Ok(corollary_checks(&ctx).iter().map(|c| c(&ctx)).collect())
}

/// `A + B sum_{j in N} q^j` for `p ≡ 1 (mod 4)`.
pub fn rhs_theorem3(p: u64) -> Result<ResiduePoly> {
    let ctx = PrimeContext::new(p, ProductStrategy::default())?;
    if ctx.mod4() != 1 {
        return Err(Error::WrongResidueClass { p: ctx.prime, expected: 1 });
    }
    ctx.rhs_theorem3()
}

/// `-C q - D sum_{j in N} q^(j+1)` for `p ≡ 1 (mod 4)`.
pub fn rhs_theorem4(p: u64) -> Result<ResiduePoly> {
    let ctx = PrimeContext::new(p, ProductStrategy::default())?;
    if ctx.mod4() != 1 {
        return Err(Error::WrongResidueClass { p: ctx.prime, expected: 1 });
    }
    ctx.rhs_theorem4()
}

/// Verifies every prime `5 ≤ p` in `[p_min, p_max]` and hands each report to
/// `sink` in ascending order of `p`.
///
/// Primes are verified `options.jobs` at a time; with `fail_fast` the sweep
/// stops after the first prime whose report contains a failure.
pub fn run_range_with<F>(p_min: u64, p_max: u64, options: &RunOptions, mut sink: F) -> Result<()>
where
    F: FnMut(VerificationReport),
{
    if p_min > p_max {
        return Err(Error::InvalidRange { min: p_min, max: p_max });
    }
    let primes = primes_in(p_min.max(5), p_max);
    let jobs = options.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    for chunk in primes.chunks(jobs) {
        let reports: Vec<Result<VerificationReport>> =
            pool.install(|| chunk.par_iter().map(|&p| verify_prime(p, options)).collect());
        for report in reports {
            let report = report?;
            let failed = report.has_failures();
            sink(report);
            if failed && options.fail_fast {
                return Ok(());
            }
        }
    }
    Ok(())
}

pub fn run_range(p_min: u64, p_max: u64, options: &RunOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    run_range_with(p_min, p_max, options, |r| out.push(r))?;
    Ok(out)
}
