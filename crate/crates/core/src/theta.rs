//! The Θ_k criterion: 2-adic partitions, monomial symmetric polynomials, the direct θ
//! sum, base-2 weight lemmas, and the explicit identities for Θ_4.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Elem, FieldCtx};
use crate::moore;
use crate::oracle::{Budget, OracleError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error("partition has {parts} parts but only {k} variables")]
    TooManyParts { parts: usize, k: usize },
    #[error("expected {expected} arguments, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("theta is only defined in characteristic 2")]
    RequiresChar2,
    #[error(transparent)]
    Budget(#[from] OracleError),
}

/// A partition into powers of two, parts non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition2 {
    pub parts: Vec<u64>,
}

impl Partition2 {
    pub fn new(mut parts: Vec<u64>) -> Self {
        assert!(parts.iter().all(|p| p.is_power_of_two()), "parts must be powers of two");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition2 { parts }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// `(a_0, ..., a_{width-1})` with `a_c` the number of parts equal to `2^c`.
    pub fn multiplicities(&self, width: usize) -> Vec<usize> {
        let mut a = vec![0; width];
        for &p in &self.parts {
            a[p.trailing_zeros() as usize] += 1;
        }
        a
    }

    /// Number of distinct monomials of `m_λ` in `k` variables.
    pub fn monomial_count(&self, k: usize) -> u128 {
        if self.len() > k {
            return 0;
        }
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        let mut den = fact(k - self.len());
        let mut i = 0;
        while i < self.parts.len() {
            let j = self.parts[i..].iter().take_while(|&&p| p == self.parts[i]).count();
            den *= fact(j);
            i += j;
        }
        fact(k) / den
    }
}

/// `Λ_k`: 2-adic partitions of `2^(k-1)` with at most `k` parts, in decreasing
/// lexicographic order.
pub fn enum_lambda_k(k: usize) -> Vec<Partition2> {
    assert!(k >= 1);
    fn rec(rest: u64, max_part: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition2>) {
        if rest == 0 {
            out.push(Partition2 { parts: cur.clone() });
            return;
        }
        if slots == 0 {
            return;
        }
        let mut p = max_part.min(1 << (63 - rest.leading_zeros()));
        while p >= 1 {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
            p >>= 1;
        }
    }
    let top = 1u64 << (k - 1);
    let mut out = Vec::new();
    rec(top, top, k, &mut Vec::new(), &mut out);
    out
}

fn next_permutation(v: &mut [u64]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every distinct exponent vector of `m_λ` in `k` variables.
pub fn monomial_exponents(lambda: &Partition2, k: usize) -> Result<Vec<Vec<u64>>, ThetaError> {
    if lambda.len() > k {
        return Err(ThetaError::TooManyParts { parts: lambda.len(), k });
    }
    let mut e = lambda.parts.clone();
    e.resize(k, 0);
    e.sort_unstable();
    let mut out = vec![e.clone()];
    while next_permutation(&mut e) {
        out.push(e.clone());
    }
    Ok(out)
}

/// `m_λ(u_1, ..., u_k)`.
pub fn eval_monomial_symmetric(ctx: &FieldCtx, lambda: &Partition2, u: &[Elem]) -> Result<Elem, ThetaError> {
    let exps = monomial_exponents(lambda, u.len())?;
    Ok(exps.iter().fold(Elem::ZERO, |acc, e| {
        let term = e
            .iter()
            .zip(u)
            .filter(|(&ei, _)| ei > 0)
            .fold(ctx.one(), |t, (&ei, &ui)| ctx.mul(t, ctx.pow(ui, ei as u128)));
        ctx.add(acc, term)
    }))
}

fn require_char2(ctx: &FieldCtx) -> Result<(), ThetaError> {
    if ctx.p() != 2 {
        return Err(ThetaError::RequiresChar2);
    }
    Ok(())
}

/// `Θ_k(u) = sum_{λ in Λ_k} m_λ(u)`.
pub fn eval_theta_k(ctx: &FieldCtx, k: usize, u: &[Elem]) -> Result<Elem, ThetaError> {
    require_char2(ctx)?;
    if u.len() != k || k == 0 {
        return Err(ThetaError::WrongArity { expected: k, found: u.len() });
    }
    let mut acc = Elem::ZERO;
    for lambda in enum_lambda_k(k) {
        acc = ctx.add(acc, eval_monomial_symmetric(ctx, &lambda, u)?);
    }
    Ok(acc)
}

/// `θ(u)` by brute force over `b_i in {-inf, 0, ..., n-1}` with
/// `sum 2^(b_i) = 1 mod 2^n - 1`; a `-inf` slot drops its variable.
pub fn eval_theta_direct(ctx: &FieldCtx, k: usize, u: &[Elem], budget: Budget) -> Result<Elem, ThetaError> {
    require_char2(ctx)?;
    if u.len() != k {
        return Err(ThetaError::WrongArity { expected: k, found: u.len() });
    }
    let n = ctx.n();
    let slots = (n + 1) as u128;
    budget.check((k as u128).saturating_mul(slots.saturating_pow(k as u32)))?;
    let modulus = (1u128 << n) - 1;
    // powers[i][b] = u_i^(2^b)
    let powers: Vec<Vec<Elem>> = u
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(n);
            let mut y = x;
            for _ in 0..n {
                row.push(y);
                y = ctx.square(y);
            }
            row
        })
        .collect();
    let mut b = vec![-1i32; k];
    let mut acc = Elem::ZERO;
    loop {
        let s: u128 = b.iter().filter(|&&x| x >= 0).map(|&x| 1u128 << x).sum();
        if s % modulus == 1 % modulus {
            let term = b
                .iter()
                .enumerate()
                .filter(|(_, &x)| x >= 0)
                .fold(ctx.one(), |t, (i, &x)| ctx.mul(t, powers[i][x as usize]));
            acc = ctx.add(acc, term);
        }
        let mut j = 0;
        loop {
            if j == k {
                return Ok(acc);
            }
            b[j] += 1;
            if b[j] == n as i32 {
                b[j] = -1;
                j += 1;
            } else {
                break;
            }
        }
    }
}

pub fn wt2(x: u128) -> u32 {
    x.count_ones()
}

pub fn nu2(x: u128) -> u32 {
    assert!(x >= 1);
    x.trailing_zeros()
}

/// First `l` in `2..=2^n` violating `wt2(1 + l(2^n - 1)) = n + 1 - nu2(l - 1)`.
pub fn weight_lemma_counterexample(n: u32) -> Option<u128> {
    let m = (1u128 << n) - 1;
    (2..=1u128 << n).find(|&l| wt2(1 + l * m) != n + 1 - nu2(l - 1))
}

/// For `k <= n`, the first multiset `b_1 <= ... <= b_k` in `0..n` with
/// `sum 2^(b_i) = 1 mod 2^n - 1` but `sum not in {1, 2^n}`.
pub fn congruence_lemma_counterexample(n: u32, k: usize) -> Option<Vec<u32>> {
    assert!(k as u32 <= n && k >= 1);
    let m = (1u128 << n) - 1;
    let mut b = vec![0u32; k];
    loop {
        let s: u128 = b.iter().map(|&x| 1u128 << x).sum();
        if s % m == 1 % m && s != 1 && s != 1u128 << n {
            return Some(b);
        }
        // next non-decreasing tuple
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if b[i] + 1 < n {
                let v = b[i] + 1;
                for x in &mut b[i..] {
                    *x = v;
                }
                break;
            }
        }
    }
}

/// Elementary symmetric polynomials `s_1..s_4` of four elements.
pub fn elementary_symmetric4(ctx: &FieldCtx, x: [Elem; 4]) -> [Elem; 4] {
    let mut s = [Elem::ZERO; 5];
    s[0] = ctx.one();
    for &xi in &x {
        for j in (1..5).rev() {
            s[j] = ctx.add(s[j], ctx.mul(s[j - 1], xi));
        }
    }
    [s[1], s[2], s[3], s[4]]
}

/// `G(s) = s_4^2 + s_1 (s_1 s_2 + s_3) s_4 + (s_1^4 + s_2^2 + s_1 s_3)^2`.
pub fn theta4_g(ctx: &FieldCtx, s: [Elem; 4]) -> Elem {
    let [s1, s2, s3, s4] = s;
    let a = ctx.square(s4);
    let b = ctx.mul(ctx.mul(s1, ctx.add(ctx.mul(s1, s2), s3)), s4);
    let c = ctx.add(ctx.add(ctx.pow(s1, 4), ctx.square(s2)), ctx.mul(s1, s3));
    ctx.add(ctx.add(a, b), ctx.square(c))
}

/// `Θ_4(x)` through `G(s_1(x), ..., s_4(x))`.
pub fn theta4_via_g(ctx: &FieldCtx, x: [Elem; 4]) -> Elem {
    theta4_g(ctx, elementary_symmetric4(ctx, x))
}

/// `H = X_1^4 + X_2^4 + X_3^4 + X_1^2X_2^2 + X_1^2X_3^2 + X_2^2X_3^2 + X_1X_2X_3(X_1+X_2+X_3)`.
pub fn theta4_h(ctx: &FieldCtx, x1: Elem, x2: Elem, x3: Elem) -> Elem {
    let sq = [ctx.square(x1), ctx.square(x2), ctx.square(x3)];
    let quart = ctx.sum(sq.iter().map(|&s| ctx.square(s)));
    let cross = ctx.sum([ctx.mul(sq[0], sq[1]), ctx.mul(sq[0], sq[2]), ctx.mul(sq[1], sq[2])]);
    let tail = ctx.mul(ctx.mul(ctx.mul(x1, x2), x3), ctx.sum([x1, x2, x3]));
    ctx.sum([quart, cross, tail])
}

/// `X_1X_2X_3(X_1+X_2)(X_1+X_3)(X_2+X_3)(X_1+X_2+X_3)`.
pub fn x4_coefficient_product(ctx: &FieldCtx, x1: Elem, x2: Elem, x3: Elem) -> Elem {
    [x1, x2, x3, ctx.add(x1, x2), ctx.add(x1, x3), ctx.add(x2, x3), ctx.sum([x1, x2, x3])]
        .iter()
        .fold(ctx.one(), |acc, &f| ctx.mul(acc, f))
}

/// Coefficients `(P_0, P_1, P_2, P_4, P_8)` of `Θ_4(x_1, x_2, x_3, T)` as a polynomial in
/// `T` (only these powers occur), recovered from evaluations at `T = 1, X, X^2, X^3`.
pub fn theta4_coefficients_in_x4(ctx: &FieldCtx, x1: Elem, x2: Elem, x3: Elem) -> Option<[Elem; 5]> {
    if ctx.n() < 4 {
        return None;
    }
    let theta = |t: Elem| eval_theta_k(ctx, 4, &[x1, x2, x3, t]).expect("char 2");
    let p0 = theta(Elem::ZERO);
    let ts: Vec<Elem> = (0..4).map(|i| ctx.basis_element(i)).collect();
    // rows: t, t^2, t^4, t^8 for each sample t; independent samples make this a
    // nonsingular Moore matrix
    let rows: Vec<Vec<Elem>> = ts
        .iter()
        .map(|&t| (0..4).map(|e| ctx.frobenius(t, e)).collect())
        .collect();
    let rhs: Vec<Elem> = ts.iter().map(|&t| ctx.sub(theta(t), p0)).collect();
    let sol = solve_field(ctx, &rows, &rhs)?;
    Some([p0, sol[0], sol[1], sol[2], sol[3]])
}

/// Solves a square linear system over the field; `None` if singular.
pub fn solve_field(ctx: &FieldCtx, a: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let n = a.len();
    let mut m: Vec<Vec<Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, &r)| {
            let mut row = row.clone();
            row.push(r);
            row
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(pr, c);
        let inv = ctx.inv0(m[c][c]);
        for j in c..=n {
            m[c][j] = ctx.mul(m[c][j], inv);
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for j in c..=n {
                    let t = ctx.mul(f, m[c][j]);
                    m[r][j] = ctx.sub(m[r][j], t);
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n]).collect())
}

/// One violated identity with its witness point (pretty element forms).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityViolation {
    pub identity: String,
    pub point: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub points: usize,
    pub checks: Vec<(String, usize)>,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const IDENTITY_G: &str = "theta4_equals_G_of_elementary_symmetric";
pub const IDENTITY_H: &str = "theta4_at_x4_zero_equals_H_squared";
pub const IDENTITY_X4: &str = "theta4_x4_coefficient_product";

/// Checks the three Θ_4 identities at `points` random points of `F_{2^n}^4` (plus the
/// zero point).
pub fn verify_theta4_identities(ctx: &FieldCtx, points: usize, seed: u64) -> Result<IdentityReport, ThetaError> {
    require_char2(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = vec![[Elem::ZERO; 4]];
    for _ in 0..points {
        samples.push([ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng)]);
    }
    let mut violations = Vec::new();
    let mut counts = [0usize; 3];
    let fmt = |x: &[Elem]| x.iter().map(|&e| ctx.format(e)).collect::<Vec<_>>();
    for x in &samples {
        let theta = eval_theta_k(ctx, 4, x)?;
        counts[0] += 1;
        if theta != theta4_via_g(ctx, *x) {
            violations.push(IdentityViolation { identity: IDENTITY_G.into(), point: fmt(x) });
        }
        counts[1] += 1;
        let t0 = eval_theta_k(ctx, 4, &[x[0], x[1], x[2], Elem::ZERO])?;
        if t0 != ctx.square(theta4_h(ctx, x[0], x[1], x[2])) {
            violations.push(IdentityViolation { identity: IDENTITY_H.into(), point: fmt(&x[..3]) });
        }
        if let Some(c) = theta4_coefficients_in_x4(ctx, x[0], x[1], x[2]) {
            counts[2] += 1;
            if c[1] != x4_coefficient_product(ctx, x[0], x[1], x[2]) || c[4] != ctx.one() {
                violations.push(IdentityViolation { identity: IDENTITY_X4.into(), point: fmt(&x[..3]) });
            }
        }
    }
    Ok(IdentityReport {
        n: ctx.n(),
        points: samples.len(),
        checks: vec![
            (IDENTITY_G.into(), counts[0]),
            (IDENTITY_H.into(), counts[1]),
            (IDENTITY_X4.into(), counts[2]),
        ],
        violations,
    })
}

/// Zero counts of Θ_4 on `F_{2^n}^4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaCounts {
    pub n: usize,
    /// Points examined (all of `F^4` when exact).
    pub points: u128,
    pub zeros: u128,
    pub zeros_on_delta: u128,
    pub zeros_off_delta: u128,
    pub exact: bool,
}

fn independent_over_f2(x: [Elem; 4]) -> bool {
    // xor basis indexed by leading bit
    let mut basis = [0u128; 128];
    for e in x {
        let mut v = e.raw();
        while v != 0 {
            let h = (127 - v.leading_zeros()) as usize;
            if basis[h] == 0 {
                basis[h] = v;
                break;
            }
            v ^= basis[h];
        }
        if v == 0 {
            return false;
        }
    }
    true
}

fn classify(ctx: &FieldCtx, x: [Elem; 4]) -> (u128, u128) {
    if !theta4_via_g(ctx, x).is_zero() {
        return (0, 0);
    }
    if independent_over_f2(x) {
        (1, 1)
    } else {
        (1, 0)
    }
}

/// Exact counts by full enumeration of `F_{2^n}^4` (guarded by the budget).
pub fn count_theta4_zeros(ctx: &FieldCtx, budget: Budget) -> Result<ThetaCounts, ThetaError> {
    require_char2(ctx)?;
    let q = ctx.order();
    let points = q.saturating_pow(4);
    budget.check(points.saturating_mul(16))?;
    let (zeros, off) = (0..q)
        .into_par_iter()
        .map(|i| {
            let x1 = ctx.from_index(i);
            let mut acc = (0u128, 0u128);
            for j in 0..q {
                let x2 = ctx.from_index(j);
                for k in 0..q {
                    let x3 = ctx.from_index(k);
                    for l in 0..q {
                        let (z, o) = classify(ctx, [x1, x2, x3, ctx.from_index(l)]);
                        acc.0 += z;
                        acc.1 += o;
                    }
                }
            }
            acc
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ThetaCounts {
        n: ctx.n(),
        points,
        zeros,
        zeros_on_delta: zeros - off,
        zeros_off_delta: off,
        exact: true,
    })
}

/// Counts over `samples` uniform random points; an estimate, flagged `exact = false`.
pub fn count_theta4_zeros_sampled(ctx: &FieldCtx, samples: u128, seed: u64) -> Result<ThetaCounts, ThetaError> {
    require_char2(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut zeros, mut off) = (0u128, 0u128);
    for _ in 0..samples {
        let x = [ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng)];
        let (z, o) = classify(ctx, x);
        zeros += z;
        off += o;
    }
    Ok(ThetaCounts {
        n: ctx.n(),
        points: samples,
        zeros,
        zeros_on_delta: zeros - off,
        zeros_off_delta: off,
        exact: false,
    })
}

/// A random point of `F^4` with `Θ_4 = 0` and `Δ != 0`, searched by solving for `x_4`.
///
/// With `x_1, x_2, x_3` fixed, `Θ_4` is `P_0 + L(x_4)` for an F_2-linear `L`, so the
/// solutions in `x_4` form a coset of `ker L`.
pub fn find_theta4_zero_off_delta(ctx: &FieldCtx, tries: usize, seed: u64) -> Option<[Elem; 4]> {
    if ctx.p() != 2 || ctx.n() < 4 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let (x1, x2, x3) = (ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng));
        let p0 = theta4_via_g(ctx, [x1, x2, x3, Elem::ZERO]);
        let lin = |t: Elem| ctx.sub(theta4_via_g(ctx, [x1, x2, x3, t]), p0);
        let mat = moore::linear_map_matrix(ctx, lin);
        let Some(sol) = mat.solve(&ctx.coeffs(ctx.neg(p0))) else {
            continue;
        };
        let base = ctx.from_coeffs(&sol).expect("solution has field length");
        let kernel = moore::linear_kernel(ctx, lin);
        // walk the solution coset (capped at 2^10 points), starting from a random offset
        let dim = kernel.len().min(10);
        let start: u64 = rng.gen();
        for m in 0..1u64 << dim {
            let m = (m ^ start) & ((1u64 << dim) - 1);
            let x4 = (0..dim)
                .filter(|&i| m >> i & 1 == 1)
                .fold(base, |acc, i| ctx.add(acc, kernel[i]));
            let x = [x1, x2, x3, x4];
            if independent_over_f2(x) {
                debug_assert!(theta4_via_g(ctx, x).is_zero());
                return Some(x);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_lists() {
        let parts = |k| enum_lambda_k(k).into_iter().map(|p| p.parts).collect::<Vec<_>>();
        assert_eq!(parts(1), vec![vec![1]]);
        assert_eq!(parts(3), vec![vec![4], vec![2, 2], vec![2, 1, 1]]);
        assert_eq!(
            parts(4),
            vec![vec![8], vec![4, 4], vec![4, 2, 2], vec![4, 2, 1, 1], vec![2, 2, 2, 2]]
        );
        let sizes: Vec<usize> = (1..=4).map(|k| enum_lambda_k(k).len()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 5]);
    }

    #[test]
    fn lambda_4_multiplicity_form() {
        let forms: Vec<Vec<usize>> = enum_lambda_k(4).iter().map(|p| p.multiplicities(4)).collect();
        assert_eq!(
            forms,
            vec![vec![0, 0, 0, 1], vec![0, 0, 2, 0], vec![0, 2, 1, 0], vec![2, 1, 1, 0], vec![0, 4, 0, 0]]
        );
    }

    #[test]
    fn monomial_counts() {
        let counts: Vec<u128> = enum_lambda_k(4).iter().map(|p| p.monomial_count(4)).collect();
        assert_eq!(counts, vec![4, 6, 12, 12, 1]);
        for p in enum_lambda_k(4) {
            assert_eq!(monomial_exponents(&p, 4).unwrap().len() as u128, p.monomial_count(4));
        }
        let p = Partition2::new(vec![4, 2, 1, 1]);
        assert_eq!(monomial_exponents(&p, 3), Err(ThetaError::TooManyParts { parts: 4, k: 3 }));
    }

    #[test]
    fn weights() {
        assert_eq!(wt2(46), 4);
        assert_eq!(nu2(1), 0);
        assert_eq!(nu2(2), 1);
        assert_eq!(weight_lemma_counterexample(4), None);
    }

    #[test]
    fn h_at_ones() {
        let ctx = FieldCtx::new(2, 8, None).unwrap();
        let one = ctx.one();
        assert_eq!(theta4_h(&ctx, one, one, one), one);
    }

    #[test]
    fn odd_characteristic_rejected() {
        let ctx = FieldCtx::new(3, 3, None).unwrap();
        assert_eq!(eval_theta_k(&ctx, 1, &[ctx.one()]), Err(ThetaError::RequiresChar2));
    }
}
