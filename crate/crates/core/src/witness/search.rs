//! Randomized and kernel-accelerated witness search with `v_1 = 1`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Criterion, Provenance, WitnessRecord};
use crate::field::{Elem, FieldCtx};
use crate::linalg::FpMatrix;
use crate::moore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchKind {
    Random,
    Kernel,
}

/// A search that used up its sample budget without finding a witness.
#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize, Deserialize)]
#[error("{kind:?} search exhausted after {samples} samples ({candidates} candidate kernels)")]
pub struct Exhausted {
    pub kind: SearchKind,
    pub samples: u64,
    /// Kernel search: samples whose kernel was larger than the forced part.
    pub candidates: u64,
}

/// Seed for sub-task `tag` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(tag);
    r.next_u64()
}

fn emit(ctx: &FieldCtx, basis: &[Elem], provenance: Provenance, seed: u64) -> Option<WitnessRecord> {
    // The record constructor recomputes Δ and Δ_1 and runs the direct sum when small.
    match WitnessRecord::new(ctx, basis, Criterion::Delta1, provenance, Some(seed)) {
        Ok(r) => Some(r),
        Err(e) => {
            debug_assert!(false, "search produced an invalid witness: {e}");
            None
        }
    }
}

/// Samples `v_2, ..., v_k` uniformly with `v_1 = 1` and tests `Δ != 0`, `Δ_1 = 0`.
pub fn search_random(ctx: &FieldCtx, k: usize, samples: u64, seed: u64) -> Result<WitnessRecord, Exhausted> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = vec![ctx.one(); k];
    if k >= 2 && k <= ctx.n() {
        for _ in 0..samples {
            for x in v.iter_mut().skip(1) {
                *x = ctx.random(&mut rng);
            }
            let (d, d1) = moore::delta_and_delta1(ctx, &v);
            if !d.is_zero() && d1.is_zero() {
                if let Some(r) = emit(ctx, &v, Provenance::Random, seed) {
                    return Ok(r);
                }
            }
        }
    }
    Err(Exhausted { kind: SearchKind::Random, samples, candidates: 0 })
}

/// Coefficients `C_e` (indexed by Frobenius exponent `e = 0..=k`) of
/// `x -> Δ_1(v_1, ..., v_{k-1}, x) = sum_e C_e x^(q^e)`.
fn delta1_last_column(ctx: &FieldCtx, prefix: &[Elem]) -> Vec<Elem> {
    let k = prefix.len() + 1;
    let table = moore::frobenius_table(ctx, prefix, k + 1);
    let rows: Vec<usize> = (0..=k).filter(|&r| r != 1).collect();
    let mut coeffs = vec![Elem::ZERO; k + 1];
    let m = k - 1;
    for (t, &r) in rows.iter().enumerate() {
        let minor = if m == 0 {
            ctx.one()
        } else {
            let mut flat = Vec::with_capacity(m * m);
            for &rr in rows.iter().filter(|&&rr| rr != r) {
                flat.extend_from_slice(&table[rr][..m]);
            }
            moore::det_in_place(ctx, &mut flat, m)
        };
        coeffs[r] = if (t + m) % 2 == 0 { minor } else { ctx.neg(minor) };
    }
    coeffs
}

/// Samples `v_2, ..., v_{k-1}` with `v_1 = 1`, then solves `Δ_1 = 0` for `v_k` as an
/// F_q-linear kernel computation.
pub fn search_kernel(ctx: &FieldCtx, k: usize, samples: u64, seed: u64) -> Result<WitnessRecord, Exhausted> {
    let n = ctx.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = 0;
    if k >= 2 && k <= n {
        // pows[e][i] = (X^i)^(q^e)
        let unit: Vec<Elem> = (0..n).map(|i| ctx.basis_element(i)).collect();
        let pows = moore::frobenius_table(ctx, &unit, k + 1);
        let mut prefix = vec![ctx.one(); k - 1];
        for _ in 0..samples {
            for x in prefix.iter_mut().skip(1) {
                *x = ctx.random(&mut rng);
            }
            if moore::coordinate_rank(ctx, &prefix) < k - 1 {
                continue;
            }
            let c = delta1_last_column(ctx, &prefix);
            let cols: Vec<Vec<u32>> = (0..n)
                .map(|i| {
                    let y = ctx.sum((0..=k).map(|e| ctx.mul(c[e], pows[e][i])));
                    ctx.coeffs(y)
                })
                .collect();
            let kernel = FpMatrix::from_columns(ctx.p(), n, &cols).nullspace();
            if kernel.len() < k {
                continue;
            }
            candidates += 1;
            for kv in &kernel {
                let x = ctx.from_coeffs(kv).expect("kernel vector has field length");
                let mut v = prefix.clone();
                v.push(x);
                if moore::moore_delta(ctx, &v).map(|d| !d.is_zero()).unwrap_or(false) {
                    if let Some(r) = emit(ctx, &v, Provenance::Kernel, seed) {
                        return Ok(r);
                    }
                }
            }
        }
    }
    Err(Exhausted { kind: SearchKind::Kernel, samples, candidates })
}

/// Splits `samples` over `shards` independently seeded searches run in parallel; the
/// lowest shard index with a witness wins, so the result does not depend on the thread
/// count. The record's seed is the shard seed, which replays the witness directly.
pub fn search_sharded(
    ctx: &FieldCtx,
    k: usize,
    kind: SearchKind,
    samples: u64,
    seed: u64,
    shards: u64,
) -> Result<WitnessRecord, Exhausted> {
    let shards = shards.max(1);
    let per = samples.div_ceil(shards);
    let run = |s: u64| {
        let sd = derive_seed(seed, s);
        match kind {
            SearchKind::Random => search_random(ctx, k, per, sd),
            SearchKind::Kernel => search_kernel(ctx, k, per, sd),
        }
    };
    let results: Vec<Result<WitnessRecord, Exhausted>> = (0..shards)
        .into_par_iter()
        .map(run)
        .collect();
    let mut effort = Exhausted { kind, samples: 0, candidates: 0 };
    for r in results {
        match r {
            Ok(w) => return Ok(w),
            Err(e) => {
                effort.samples += e.samples;
                effort.candidates += e.candidates;
            }
        }
    }
    Err(effort)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_coefficients_match_direct_delta1() {
        let ctx = FieldCtx::new(3, 5, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 2..=4 {
            let mut prefix = vec![ctx.one()];
            for _ in 1..k - 1 {
                prefix.push(ctx.random(&mut rng));
            }
            let c = delta1_last_column(&ctx, &prefix);
            for _ in 0..5 {
                let x = ctx.random(&mut rng);
                let lx = ctx.sum((0..=k).map(|e| ctx.mul(c[e], ctx.frobenius(x, e))));
                let mut v = prefix.clone();
                v.push(x);
                assert_eq!(lx, moore::moore_delta_i(&ctx, 1, &v).unwrap());
            }
        }
    }

    #[test]
    fn odd_n_order_two_exhausts() {
        let ctx = FieldCtx::new(2, 7, None).unwrap();
        assert!(search_random(&ctx, 2, 500, 1).is_err());
        assert!(search_kernel(&ctx, 2, 50, 1).is_err());
    }

    #[test]
    fn even_n_order_two_kernel_gives_subfield() {
        let ctx = FieldCtx::new(3, 8, None).unwrap();
        let r = search_kernel(&ctx, 2, 10, 5).unwrap();
        let v = r.elements(&ctx).unwrap();
        assert!(ctx.in_subfield(v[1], 2).unwrap());
        assert!(search_random(&ctx, 2, 10_000, 5).is_ok());
    }

    #[test]
    fn sharded_is_deterministic() {
        let ctx = FieldCtx::new(2, 9, None).unwrap();
        let a = search_sharded(&ctx, 3, SearchKind::Kernel, 400, 11, 4).unwrap();
        let b = search_sharded(&ctx, 3, SearchKind::Kernel, 400, 11, 4).unwrap();
        assert_eq!(a, b);
        let replay = search_kernel(&ctx, 3, 100, a.seed.unwrap()).unwrap();
        assert_eq!(replay.basis, a.basis);
    }
}
