//! Verdicts for every order `k = 1..n-1` of `g_{q-1}` on `F_{q^n}`.

use serde::{Deserialize, Serialize};

use super::construct::{compose_witnesses, dual_witness, gcd_witness, witness_from_factor};
use super::search::{derive_seed, search_sharded, SearchKind};
use super::{Provenance, WitnessError, WitnessRecord};
use crate::field::FieldCtx;
use crate::oracle::{self, Budget, FnSpec, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProofMethod {
    /// `k = 1` is always sum-free.
    FirstOrder,
    /// `k = 2` with `n` odd.
    Parity,
    Exhaustive,
    DualityOfFirstOrder,
    DualityOfParity,
    DualityOfExhaustive,
}

impl ProofMethod {
    pub fn dual(self) -> Self {
        match self {
            ProofMethod::FirstOrder => ProofMethod::DualityOfFirstOrder,
            ProofMethod::Parity => ProofMethod::DualityOfParity,
            ProofMethod::Exhaustive => ProofMethod::DualityOfExhaustive,
            ProofMethod::DualityOfFirstOrder => ProofMethod::FirstOrder,
            ProofMethod::DualityOfParity => ProofMethod::Parity,
            ProofMethod::DualityOfExhaustive => ProofMethod::Exhaustive,
        }
    }
}

/// What was tried for an order left undecided.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    pub search_samples: u64,
    pub kernel_candidates: u64,
    /// Estimated cost of the cheaper exhaustive scan (at `k` or `n - k`).
    pub exhaustive_cost: Option<u128>,
    pub budget: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    NotSumfree { witness: Box<WitnessRecord> },
    SumfreeProved { method: ProofMethod },
    Unknown { effort: Effort },
}

impl Status {
    /// `✗`, `✓` or `?`, the table symbols for "sum-free?".
    pub fn symbol(&self) -> &'static str {
        match self {
            Status::NotSumfree { .. } => "✗",
            Status::SumfreeProved { .. } => "✓",
            Status::Unknown { .. } => "?",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    #[serde(flatten)]
    pub status: Status,
}

/// Which pipeline stages run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    /// `k = 1`, parity at `k = 2` and the gcd construction.
    pub rules: bool,
    pub factor: bool,
    pub compose: bool,
    pub search: Option<SearchKind>,
    pub search_samples: u64,
    pub shards: u64,
    pub exhaustive: bool,
    /// Transport results between `k` and `n - k`.
    pub duality: bool,
    pub seed: u64,
}

impl Strategy {
    pub fn full(seed: u64) -> Self {
        Strategy {
            rules: true,
            factor: true,
            compose: true,
            search: Some(SearchKind::Kernel),
            search_samples: 4000,
            shards: 8,
            exhaustive: true,
            duality: true,
            seed,
        }
    }

    /// Every order decided by its own exhaustive scan.
    pub fn exhaustive_only() -> Self {
        Strategy {
            rules: false,
            factor: false,
            compose: false,
            search: None,
            search_samples: 0,
            shards: 1,
            exhaustive: true,
            duality: false,
            seed: 0,
        }
    }
}

struct State {
    q: u32,
    n: usize,
    status: Vec<Option<Status>>,
    effort: Vec<Effort>,
}

impl State {
    fn open(&self, k: usize) -> bool {
        (1..self.n).contains(&k) && self.status[k].is_none()
    }

    fn set(&mut self, k: usize, s: Status) {
        if self.open(k) {
            self.status[k] = Some(s);
        }
    }

    fn witness(&self, k: usize) -> Option<&WitnessRecord> {
        match &self.status[k] {
            Some(Status::NotSumfree { witness }) => Some(witness),
            _ => None,
        }
    }
}

fn not_sumfree(w: WitnessRecord) -> Status {
    Status::NotSumfree { witness: Box::new(w) }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn transport(ctx: &FieldCtx, st: &mut State) -> Result<(), WitnessError> {
    for k in 1..st.n {
        if !st.open(st.n - k) {
            continue;
        }
        let moved = match &st.status[k] {
            Some(Status::SumfreeProved { method }) => Some(Status::SumfreeProved { method: method.dual() }),
            Some(Status::NotSumfree { witness }) => {
                let v = witness.elements(ctx)?;
                Some(not_sumfree(dual_witness(ctx, &v)?))
            }
            _ => None,
        };
        if let Some(s) = moved {
            st.set(st.n - k, s);
        }
    }
    Ok(())
}

fn compose_closure(ctx: &FieldCtx, st: &mut State) -> Result<(), WitnessError> {
    let n = st.n;
    loop {
        let mut changed = false;
        for a in 1..n {
            for b in a..n {
                if a * b >= n || !st.open(a + b) {
                    continue;
                }
                let (Some(e), Some(f)) = (st.witness(a), st.witness(b)) else {
                    continue;
                };
                let e = e.elements(ctx)?;
                let f = f.elements(ctx)?;
                st.set(a + b, not_sumfree(compose_witnesses(ctx, &e, &f)?));
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn search_stage(ctx: &FieldCtx, st: &mut State, strategy: &Strategy, kind: SearchKind) -> Result<(), WitnessError> {
    let n = st.n;
    for k in 2..n.saturating_sub(1) {
        for j in [k, n - k] {
            if !st.open(k) || !st.open(j) {
                continue;
            }
            let seed = derive_seed(strategy.seed, j as u64);
            match search_sharded(ctx, j, kind, strategy.search_samples, seed, strategy.shards) {
                Ok(w) => {
                    st.set(j, not_sumfree(w));
                    if strategy.duality {
                        transport(ctx, st)?;
                    }
                    if strategy.compose {
                        compose_closure(ctx, st)?;
                    }
                }
                Err(e) => {
                    st.effort[j].search_samples += e.samples;
                    st.effort[j].kernel_candidates += e.candidates;
                }
            }
        }
    }
    Ok(())
}

fn exhaustive_stage(ctx: &FieldCtx, st: &mut State, strategy: &Strategy, budget: Budget) -> Result<(), WitnessError> {
    let n = st.n;
    let f = FnSpec::GS(st.q as u128 - 1);
    for k in 1..n {
        if !st.open(k) {
            continue;
        }
        let mut j = k;
        if strategy.duality && st.open(n - k) && oracle::exhaustive_cost(ctx, &f, n - k) < oracle::exhaustive_cost(ctx, &f, k) {
            j = n - k;
        }
        let cost = oracle::exhaustive_cost(ctx, &f, j);
        st.effort[k].exhaustive_cost = Some(cost);
        st.effort[n - k].exhaustive_cost = Some(cost);
        match oracle::is_kth_order_sumfree_exhaustive(ctx, &f, j, budget) {
            Ok(r) => {
                let s = match r.counterexample {
                    Some(b) => not_sumfree(WitnessRecord::new(
                        ctx,
                        &b,
                        super::Criterion::Delta1,
                        Provenance::Exhaustive,
                        None,
                    )?),
                    None => Status::SumfreeProved { method: ProofMethod::Exhaustive },
                };
                st.set(j, s);
                if strategy.duality {
                    transport(ctx, st)?;
                }
            }
            Err(OracleError::BudgetExceeded { .. }) => {}
            Err(e) => return Err(WitnessError::Unsupported(e.to_string())),
        }
    }
    Ok(())
}

/// Runs the pipeline: exact rules, factor construction, composition closure, search,
/// exhaustive scans within `budget`, and duality transport. Undecided orders are
/// reported as unknown together with the effort spent.
pub fn compute_k(q: u32, n: usize, strategy: &Strategy, budget: Budget) -> Result<Vec<Verdict>, WitnessError> {
    let ctx = FieldCtx::new(q, n, None)?;
    let mut st = State { q, n, status: vec![None; n.max(1)], effort: vec![Effort::default(); n.max(1)] };
    if strategy.rules {
        for k in 1..n {
            if k == 1 {
                st.set(k, Status::SumfreeProved { method: ProofMethod::FirstOrder });
            } else if k == 2 && n % 2 == 1 {
                st.set(k, Status::SumfreeProved { method: ProofMethod::Parity });
            } else if gcd(k, n) > 1 {
                let w = gcd_witness(&ctx, k, derive_seed(strategy.seed, k as u64))?;
                st.set(k, not_sumfree(w));
            }
        }
        if strategy.duality {
            transport(&ctx, &mut st)?;
        }
    }
    if strategy.factor {
        for k in 2..n {
            if st.open(k) {
                if let Some((w, _)) = witness_from_factor(&ctx, k, derive_seed(strategy.seed, k as u64))? {
                    st.set(k, not_sumfree(w));
                }
            }
        }
    }
    if strategy.compose {
        compose_closure(&ctx, &mut st)?;
    }
    if strategy.duality {
        transport(&ctx, &mut st)?;
    }
    if let Some(kind) = strategy.search {
        search_stage(&ctx, &mut st, strategy, kind)?;
    }
    if strategy.exhaustive {
        exhaustive_stage(&ctx, &mut st, strategy, budget)?;
    }
    if strategy.duality {
        transport(&ctx, &mut st)?;
    }
    Ok((1..n)
        .map(|k| Verdict {
            q,
            n,
            k,
            status: st.status[k].clone().unwrap_or_else(|| Status::Unknown {
                effort: Effort { budget: budget.limit, ..st.effort[k].clone() },
            }),
        })
        .collect())
}

/// The orders with a witness.
pub fn k_set(verdicts: &[Verdict]) -> Vec<usize> {
    verdicts
        .iter()
        .filter(|v| matches!(v.status, Status::NotSumfree { .. }))
        .map(|v| v.k)
        .collect()
}
