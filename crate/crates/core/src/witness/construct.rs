//! Constructive witnesses: subfield multiples, duality, factors of `X^n - 1`,
//! `k + l` composition and the tower lift.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Criterion, Provenance, WitnessError, WitnessRecord};
use crate::field::{Elem, FieldCtx};
use crate::fpoly;
use crate::linalg::FpMatrix;
use crate::moore;

fn zero_sum(ctx: &FieldCtx, v: &[Elem]) -> bool {
    if v.is_empty() {
        return false;
    }
    let (d, d1) = moore::delta_and_delta1(ctx, v);
    !d.is_zero() && d1.is_zero()
}

fn to_elem(ctx: &FieldCtx, c: &[u32]) -> Elem {
    ctx.from_coeffs(c).expect("vector has field length")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `L_E(F)` for the coordinate complement `F` of `E = span(v)`: a zero-sum space of
/// dimension `n - k` whenever `E` has zero sum.
pub fn dual_witness(ctx: &FieldCtx, v: &[Elem]) -> Result<WitnessRecord, WitnessError> {
    if !zero_sum(ctx, v) {
        return Err(WitnessError::PreconditionSumNonzero);
    }
    let comp = moore::coordinate_complement(ctx, v);
    if comp.is_empty() {
        return Err(WitnessError::Unsupported("a basis of the whole field has no dual".into()));
    }
    let l = moore::subspace_poly(ctx, v)?;
    let basis: Vec<Elem> = comp.iter().map(|&c| l.eval(ctx, ctx.basis_element(c))).collect();
    WitnessRecord::new(ctx, &basis, Criterion::Delta1, Provenance::Duality, None)
}

/// A `k`-dimensional F_{q^d}-subspace with `d = gcd(k, n) > 1`; such spaces always have
/// zero sum.
pub fn gcd_witness(ctx: &FieldCtx, k: usize, seed: u64) -> Result<WitnessRecord, WitnessError> {
    let n = ctx.n();
    let d = gcd(k, n);
    if k == 0 || k >= n || d < 2 {
        return Err(WitnessError::Unsupported(format!("gcd({k}, {n}) = {d} gives no subfield construction")));
    }
    let omega = moore::subfield_basis(ctx, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut ys = vec![ctx.one()];
        while ys.len() < k / d {
            ys.push(ctx.random(&mut rng));
        }
        let basis: Vec<Elem> = ys.iter().flat_map(|&y| omega.iter().map(move |&w| (w, y))).map(|(w, y)| ctx.mul(w, y)).collect();
        if moore::coordinate_rank(ctx, &basis) == k {
            return WitnessRecord::new(ctx, &basis, Criterion::Delta1, Provenance::Gcd, Some(seed));
        }
    }
}

/// The factor of `X^n - 1` used by [`witness_from_factor`] and its cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorChoice {
    pub factor: Vec<u32>,
    pub cofactor: Vec<u32>,
}

/// Monic degree-`k` divisors of `X^n - 1` over F_q with zero `X^1` coefficient, in
/// canonical order. Divisors are products over the factorization, repeated factors
/// included.
pub fn qualifying_factors(q: u32, n: usize, k: usize) -> Vec<Vec<u32>> {
    let fac = fpoly::factor_xn_minus_1(q, n);
    let mut exps = vec![0usize; fac.len()];
    let mut out: Vec<Vec<u32>> = Vec::new();
    loop {
        let deg: usize = exps.iter().zip(&fac).map(|(&e, (f, _))| e * (f.len() - 1)).sum();
        if deg == k {
            let mut prod = vec![1u32];
            for (&e, (f, _)) in exps.iter().zip(&fac) {
                for _ in 0..e {
                    prod = fpoly::mul(&prod, f, q);
                }
            }
            if prod.get(1).copied().unwrap_or(0) == 0 {
                out.push(prod);
            }
        }
        let mut i = 0;
        loop {
            if i == exps.len() {
                out.sort_by(|a, b| fpoly::canonical_cmp(a, b));
                out.dedup();
                return out;
            }
            if exps[i] < fac[i].1 {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Builds `(x, x^q, ..., x^(q^(k-1)))` with `x = g(σ)(α)` for a normal element `α`,
/// where `X^n - 1 = f g` and `f` is the first qualifying degree-`k` factor.
pub fn witness_from_factor(ctx: &FieldCtx, k: usize, seed: u64) -> Result<Option<(WitnessRecord, FactorChoice)>, WitnessError> {
    let (q, n) = (ctx.q(), ctx.n());
    if k == 0 || k >= n {
        return Ok(None);
    }
    let Some(f) = qualifying_factors(q, n, k).into_iter().next() else {
        return Ok(None);
    };
    let mut xn1 = vec![0u32; n + 1];
    xn1[0] = q - 1;
    xn1[n] = 1;
    let (g, r) = fpoly::divrem(&xn1, &f, q);
    debug_assert!(fpoly::degree(&r).is_none());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = loop {
        let a = ctx.random_nonzero(&mut rng);
        let orbit: Vec<Elem> = (0..n).map(|i| ctx.frobenius(a, i)).collect();
        if !moore::moore_delta(ctx, &orbit)?.is_zero() {
            break a;
        }
    };
    let x = ctx.sum(g.iter().enumerate().map(|(i, &c)| ctx.scale(ctx.frobenius(alpha, i), c)));
    let basis: Vec<Elem> = (0..k).map(|i| ctx.frobenius(x, i)).collect();
    let rec = WitnessRecord::new(ctx, &basis, Criterion::Delta1, Provenance::Factor, Some(seed))?;
    Ok(Some((rec, FactorChoice { factor: f, cofactor: g })))
}

/// Matrix of the F_q-linear map `x -> y x`.
fn mul_matrix(ctx: &FieldCtx, y: Elem) -> FpMatrix {
    moore::linear_map_matrix(ctx, |x| ctx.mul(x, y))
}

/// A basis of `E ⊕ V` where `L_E(V) = aF` for some `a != 0`; the result has zero sum
/// whenever `E` and `F` do and `k l < n`.
pub fn compose_witnesses(ctx: &FieldCtx, e: &[Elem], f: &[Elem]) -> Result<WitnessRecord, WitnessError> {
    let (k, l, n) = (e.len(), f.len(), ctx.n());
    if k * l >= n {
        return Err(WitnessError::DimensionProduct { k, l, n });
    }
    if !zero_sum(ctx, e) || !zero_sum(ctx, f) {
        return Err(WitnessError::PreconditionSumNonzero);
    }
    let p = ctx.p();
    let le = moore::subspace_poly(ctx, e)?;
    let m = moore::linear_map_matrix(ctx, |x| le.eval(ctx, x));
    // y^T M = 0 cuts out the image of L_E.
    let annihilators = m.left_nullspace();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &fj in f {
        let mf = mul_matrix(ctx, fj);
        for y in &annihilators {
            let row = (0..n)
                .map(|c| (0..n).fold(0u32, |acc, i| fpoly::add_mod(acc, fpoly::mul_mod(y[i], mf.get(i, c), p), p)))
                .collect();
            rows.push(row);
        }
    }
    let a = FpMatrix::from_rows(p, n, &rows)
        .nullspace()
        .into_iter()
        .next()
        .map(|c| to_elem(ctx, &c))
        .expect("k l < n leaves a nonzero solution");
    let mut basis = e.to_vec();
    for &fj in f {
        let u = ctx.mul(a, fj);
        let x = m.solve(&ctx.coeffs(u)).expect("a f_j lies in the image of L_E");
        basis.push(to_elem(ctx, &x));
    }
    WitnessRecord::new(ctx, &basis, Criterion::Delta1, Provenance::Compose, None)
}

/// One step of the tower construction for `q = 2`: from a zero-sum `F` whose
/// F_(2^l)-span is not the whole field, returns a basis of `F_(2^l) ⊕ V` with
/// `L(V) = aF`, `L(x) = x^(2^l) + x`. The output has dimension `dim F + l`.
pub fn lift_tower(ctx: &FieldCtx, f: &[Elem], l: usize) -> Result<Vec<Elem>, WitnessError> {
    let n = ctx.n();
    if ctx.q() != 2 {
        return Err(WitnessError::Unsupported("the tower lift is implemented for q = 2".into()));
    }
    if l < 2 || n % l != 0 {
        return Err(WitnessError::Unsupported(format!("need l >= 2 dividing n = {n}, got l = {l}")));
    }
    if !zero_sum(ctx, f) {
        return Err(WitnessError::PreconditionSumNonzero);
    }
    let omega = moore::subfield_basis(ctx, l);
    let span: Vec<Elem> = f.iter().flat_map(|&x| omega.iter().map(move |&w| (w, x))).map(|(w, x)| ctx.mul(w, x)).collect();
    if moore::coordinate_rank(ctx, &span) == n {
        return Err(WitnessError::NoRoom);
    }
    // a with Tr_{n/l}(a f_j) = 0 for every j.
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &fj in f {
        let tm = moore::linear_map_matrix(ctx, |a| ctx.trace(ctx.mul(a, fj), l).expect("l divides n"));
        rows.extend((0..tm.rows()).map(|r| tm.row(r).to_vec()));
    }
    let a = FpMatrix::from_rows(2, n, &rows)
        .nullspace()
        .into_iter()
        .next()
        .map(|c| to_elem(ctx, &c))
        .ok_or(WitnessError::NoRoom)?;
    let u: Vec<Elem> = f.iter().map(|&x| ctx.mul(a, x)).collect();
    // F_(2^l)-basis of F_(2^l) U chosen among the u's.
    let mut chosen: Vec<Elem> = Vec::new();
    let mut cols: Vec<Elem> = Vec::new();
    for &x in &u {
        let mut trial = cols.clone();
        trial.extend(omega.iter().map(|&w| ctx.mul(w, x)));
        if moore::coordinate_rank(ctx, &trial) == trial.len() {
            chosen.push(x);
            cols = trial;
        }
    }
    let lmap = moore::linear_map_matrix(ctx, |x| ctx.add(ctx.frobenius(x, l), x));
    let w: Vec<Elem> = chosen
        .iter()
        .map(|&x| to_elem(ctx, &lmap.solve(&ctx.coeffs(x)).expect("trace-zero elements lie in the image")))
        .collect();
    let colvecs: Vec<Vec<u32>> = cols.iter().map(|&c| ctx.coeffs(c)).collect();
    let system = FpMatrix::from_columns(2, n, &colvecs);
    let mut out = omega.clone();
    for &x in &u {
        let e = system.solve(&ctx.coeffs(x)).expect("u lies in the F_(2^l)-span of the chosen vectors");
        let lifted = ctx.sum((0..chosen.len()).flat_map(|j| {
            let w = &w;
            let omega = &omega;
            let e = &e;
            (0..l).filter(move |&i| e[j * l + i] == 1).map(move |i| ctx.mul(omega[i], w[j]))
        }));
        out.push(lifted);
    }
    Ok(out)
}
