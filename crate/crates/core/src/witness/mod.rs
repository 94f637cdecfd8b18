//! Witnesses for non-sum-freedom, their constructions, and K-set verdicts.
//!
//! A witness is an F_q-basis `v` of a subspace `E` with `Δ(v) != 0` and
//! `sum_{0 != u in E} 1/u^(q-1) = 0`, equivalently `Δ_1(v) = 0`.

mod construct;
mod pipeline;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, FieldCtx, FieldError};
use crate::moore::{self, MooreError};
use crate::oracle;
use crate::theta::{self, ThetaError};

pub use construct::{compose_witnesses, dual_witness, gcd_witness, lift_tower, witness_from_factor, FactorChoice};
pub use pipeline::{compute_k, k_set, Effort, ProofMethod, Status, Strategy, Verdict};
pub use search::{derive_seed, search_kernel, search_random, search_sharded, Exhausted, SearchKind};

/// Spans with at most this many points are summed directly as a cross-check.
pub const CROSS_CHECK_LIMIT: u128 = 1 << 20;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "DELTA1")]
    Delta1,
    #[serde(rename = "THETA")]
    Theta,
    #[serde(rename = "EXHAUSTIVE_ZERO_SUM")]
    ExhaustiveZeroSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Random,
    Kernel,
    Tower,
    Factor,
    Compose,
    PaperFixture,
    Gcd,
    Duality,
    Exhaustive,
}

/// Which clause of a witness check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `Δ(basis) = 0`: the vectors are dependent.
    DeltaZero,
    /// `Δ_1 != 0`.
    Delta1Nonzero,
    /// `Θ_k != 0`.
    ThetaNonzero,
    /// The direct sum over the span (or over the trace dual, for THETA) is nonzero.
    SpanSumNonzero,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Clause::DeltaZero => "delta is zero",
            Clause::Delta1Nonzero => "delta_1 is nonzero",
            Clause::ThetaNonzero => "theta_k is nonzero",
            Clause::SpanSumNonzero => "direct sum over the span is nonzero",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("not a witness: {0}")]
    NotAWitness(Clause),
    #[error("record field {field}: {reason}")]
    Record { field: &'static str, reason: String },
    #[error("dimension product {k}*{l} >= n = {n}")]
    DimensionProduct { k: usize, l: usize, n: usize },
    #[error("no room: the F_(2^l)-span already fills the field")]
    NoRoom,
    #[error("input span does not have zero sum")]
    PreconditionSumNonzero,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Moore(#[from] MooreError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

/// Outcome of the individual checks run on a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub delta_nonzero: bool,
    /// Pretty form of the tagged criterion value (`Δ_1`, `Θ_k` or the span sum).
    pub criterion_value: String,
    /// Result of the direct summation cross-check, when it was small enough to run.
    pub span_sum_zero: Option<bool>,
}

/// A self-contained, replayable witness claim. Serialized as one JSON object per line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub p: u32,
    pub q: u32,
    pub n: usize,
    pub modulus: String,
    pub k: usize,
    pub basis: Vec<String>,
    pub criterion: Criterion,
    pub provenance: Provenance,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Checks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
}

/// Checks `basis` against `criterion` and returns the individual outcomes.
///
/// The direct-sum cross-check runs when the summed space has at most `cross_check_limit`
/// points; a nonzero direct sum is reported as `SpanSumNonzero` even if the determinant
/// test passed.
pub fn check_witness_with(
    ctx: &FieldCtx,
    basis: &[Elem],
    criterion: Criterion,
    cross_check_limit: u128,
) -> Result<Checks, WitnessError> {
    for &b in basis {
        ctx.check(b)?;
    }
    if basis.is_empty() {
        return Err(MooreError::EmptyBasis.into());
    }
    let k = basis.len();
    let (delta, delta1) = moore::delta_and_delta1(ctx, basis);
    if delta.is_zero() {
        return Err(WitnessError::NotAWitness(Clause::DeltaZero));
    }
    let points = |dim: usize| (ctx.q() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    let (value, span_sum_zero) = match criterion {
        Criterion::Delta1 => {
            if !delta1.is_zero() {
                return Err(WitnessError::NotAWitness(Clause::Delta1Nonzero));
            }
            let s = (points(k) <= cross_check_limit).then(|| oracle::gq_span_sum(ctx, basis).is_zero());
            (delta1, s)
        }
        Criterion::Theta => {
            if ctx.q() != 2 {
                return Err(ThetaError::RequiresChar2.into());
            }
            let t = theta::eval_theta_k(ctx, k, basis)?;
            if !t.is_zero() {
                return Err(WitnessError::NotAWitness(Clause::ThetaNonzero));
            }
            let dim = ctx.n() - k;
            let s = (dim > 0 && points(dim) <= cross_check_limit).then(|| {
                let dual = moore::trace_dual(ctx, basis);
                oracle::gq_span_sum(ctx, &dual).is_zero()
            });
            (t, s)
        }
        Criterion::ExhaustiveZeroSum => {
            if points(k) > cross_check_limit {
                return Err(WitnessError::Unsupported(format!(
                    "direct summation over {} points exceeds the limit {cross_check_limit}",
                    points(k)
                )));
            }
            let s = oracle::gq_span_sum(ctx, basis);
            (s, Some(s.is_zero()))
        }
    };
    if span_sum_zero == Some(false) {
        return Err(WitnessError::NotAWitness(Clause::SpanSumNonzero));
    }
    Ok(Checks { delta_nonzero: true, criterion_value: ctx.format(value), span_sum_zero })
}

pub fn check_witness(ctx: &FieldCtx, basis: &[Elem], criterion: Criterion) -> Result<Checks, WitnessError> {
    check_witness_with(ctx, basis, criterion, CROSS_CHECK_LIMIT)
}

impl WitnessRecord {
    /// Checks the basis and builds a record carrying the check outcomes.
    pub fn new(
        ctx: &FieldCtx,
        basis: &[Elem],
        criterion: Criterion,
        provenance: Provenance,
        seed: Option<u64>,
    ) -> Result<Self, WitnessError> {
        let checks = check_witness(ctx, basis, criterion)?;
        Ok(WitnessRecord {
            p: ctx.p(),
            q: ctx.q(),
            n: ctx.n(),
            modulus: ctx.modulus_text(),
            k: basis.len(),
            basis: basis.iter().map(|&b| ctx.format(b)).collect(),
            criterion,
            provenance,
            seed,
            checks: Some(checks),
            version: Some(VERSION.to_string()),
        })
    }

    /// Rebuilds the field context named by the record.
    pub fn context(&self) -> Result<FieldCtx, WitnessError> {
        if self.q != self.p {
            return Err(WitnessError::Record {
                field: "q",
                reason: format!("q = {} must equal p = {} (prime base fields only)", self.q, self.p),
            });
        }
        let ctx = FieldCtx::from_modulus_text(self.p, &self.modulus)?;
        if ctx.n() != self.n {
            return Err(WitnessError::Record {
                field: "n",
                reason: format!("modulus has degree {} but n = {}", ctx.n(), self.n),
            });
        }
        Ok(ctx)
    }

    /// Parses the basis in the record's field.
    pub fn elements(&self, ctx: &FieldCtx) -> Result<Vec<Elem>, WitnessError> {
        if self.basis.len() != self.k {
            return Err(WitnessError::Record {
                field: "k",
                reason: format!("basis has {} vectors but k = {}", self.basis.len(), self.k),
            });
        }
        self.basis.iter().map(|s| ctx.parse(s).map_err(WitnessError::from)).collect()
    }

    /// Re-verifies the record from its serialized content alone.
    pub fn verify(&self) -> Result<Checks, WitnessError> {
        let ctx = self.context()?;
        let basis = self.elements(&ctx)?;
        check_witness(&ctx, &basis, self.criterion)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n13() -> FieldCtx {
        FieldCtx::from_modulus_text(2, "X^13 + X^12 + X^11 + X^8 + 1").unwrap()
    }

    fn k4_basis(ctx: &FieldCtx) -> Vec<Elem> {
        ["1", "X + X^2 + X^5 + X^8 + X^11", "X^4 + X^5 + X^7 + X^8 + X^11", "1 + X^2 + X^5 + X^8 + X^10 + X^11"]
            .iter()
            .map(|s| ctx.parse(s).unwrap())
            .collect()
    }

    #[test]
    fn n13_k4_is_a_witness() {
        let ctx = n13();
        let c = check_witness(&ctx, &k4_basis(&ctx), Criterion::Delta1).unwrap();
        assert!(c.delta_nonzero);
        assert_eq!(c.criterion_value, "0");
        assert_eq!(c.span_sum_zero, Some(true));
        let c = check_witness(&ctx, &k4_basis(&ctx), Criterion::ExhaustiveZeroSum).unwrap();
        assert_eq!(c.span_sum_zero, Some(true));
    }

    #[test]
    fn dependent_basis_rejected() {
        let ctx = FieldCtx::new(3, 5, None).unwrap();
        let b = [ctx.one(), ctx.constant(2)];
        assert_eq!(
            check_witness(&ctx, &b, Criterion::Delta1),
            Err(WitnessError::NotAWitness(Clause::DeltaZero))
        );
    }

    #[test]
    fn nonzero_delta1_rejected() {
        let ctx = n13();
        let b = [ctx.one(), ctx.x_pow(1)];
        assert_eq!(
            check_witness(&ctx, &b, Criterion::Delta1),
            Err(WitnessError::NotAWitness(Clause::Delta1Nonzero))
        );
    }

    #[test]
    fn record_roundtrip() {
        let ctx = n13();
        let r = WitnessRecord::new(&ctx, &k4_basis(&ctx), Criterion::Delta1, Provenance::PaperFixture, None).unwrap();
        let line = r.to_json_line();
        assert!(line.contains("\"criterion\":\"DELTA1\""));
        assert!(line.contains("\"provenance\":\"PAPER_FIXTURE\""));
        let back = WitnessRecord::from_json_line(&line).unwrap();
        assert_eq!(back, r);
        back.verify().unwrap();
    }

    #[test]
    fn record_without_extras_parses() {
        let line = r#"{"p":2,"q":2,"n":4,"modulus":"1 + X + X^4","k":2,"basis":["1","X + X^2"],"criterion":"DELTA1","provenance":"RANDOM","seed":7}"#;
        let r = WitnessRecord::from_json_line(line).unwrap();
        assert_eq!(r.checks, None);
        // X + X^2 lies in F_4 for this modulus, so span(1, X + X^2) = F_4.
        r.verify().unwrap();
    }
}
