//! Brute-force ground truth: span sums of arbitrary functions, canonical enumeration of
//! subspaces, exhaustive sum-freedom decisions, and the closed-form hyperplane sums
//! used for the first and (n-1)th order criteria.

use std::ops::ControlFlow;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Elem, FieldCtx};
use crate::fpoly;
use crate::moore;

pub const BUDGET_ENV: &str = "SUMFREE_BUDGET";
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("estimated cost {needed} exceeds budget {limit}")]
    BudgetExceeded { needed: u128, limit: u128 },
    #[error("b must be nonzero")]
    BNonzeroRequired,
    #[error("c must lie in the base field")]
    NotInBaseField,
    #[error("order {k} out of range 1..={n}")]
    InvalidOrder { k: usize, n: usize },
    #[error("the hyperplane formulas need n >= 2")]
    DegreeTooSmall,
    #[error("polynomial term X^{0} exceeds the field size")]
    PolyTooLong(u128),
}

/// A cap on the number of elementary field operations an exhaustive op may spend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
}

impl Budget {
    pub fn new(limit: u128) -> Self {
        Budget { limit }
    }

    /// Reads `SUMFREE_BUDGET`, falling back to 10^9.
    pub fn from_env() -> Self {
        let limit = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| parse_count(&s))
            .unwrap_or(DEFAULT_BUDGET);
        Budget { limit }
    }

    pub fn check(&self, needed: u128) -> Result<(), OracleError> {
        if needed > self.limit {
            Err(OracleError::BudgetExceeded { needed, limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Parses `1000000`, `1e9`, `2.5e7` or `1_000_000`.
pub fn parse_count(s: &str) -> Option<u128> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u128>() {
        return Some(v);
    }
    let v: f64 = s.parse().ok()?;
    (v.is_finite() && v >= 0.0 && v < 3.4e38).then_some(v as u128)
}

/// A function `F_{q^n} -> F_{q^n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnSpec {
    /// `x -> x^-1`, `0 -> 0`.
    Inv,
    /// `x -> 1/x^s`, `0 -> 0`.
    GS(u128),
    /// `x -> x^d` with `0^0 = 1`.
    Power(u128),
    /// `sum a_i x^i` stored sparsely as `(i, a_i)`, with `0^0 = 1`.
    Poly(Vec<(u128, Elem)>),
}

impl FnSpec {
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        match self {
            FnSpec::Inv => ctx.inv0(x),
            FnSpec::GS(s) => {
                if x.is_zero() {
                    Elem::ZERO
                } else {
                    ctx.pow(ctx.inv0(x), *s)
                }
            }
            FnSpec::Power(d) => ctx.pow(x, *d),
            FnSpec::Poly(terms) => terms
                .iter()
                .fold(Elem::ZERO, |acc, &(i, a)| ctx.add(acc, ctx.mul(a, ctx.pow(x, i)))),
        }
    }

    /// The reduced polynomial (degree < q^n) representing this function.
    pub fn to_poly(&self, ctx: &FieldCtx) -> Vec<(u128, Elem)> {
        let top = ctx.order() - 1;
        let mut terms = match self {
            FnSpec::Inv => vec![(top - 1, ctx.one())],
            // x^(q^n-1) is 1 off zero and 0 at zero
            FnSpec::GS(s) => vec![(top - (*s % top), ctx.one())],
            FnSpec::Power(d) => {
                let e = if *d == 0 {
                    0
                } else {
                    let r = *d % top;
                    if r == 0 {
                        top
                    } else {
                        r
                    }
                };
                vec![(e, ctx.one())]
            }
            FnSpec::Poly(t) => t.clone(),
        };
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(u128, Elem)> = Vec::new();
        for (i, a) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 = ctx.add(last.1, a),
                _ => merged.push((i, a)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        merged
    }

    /// True when zero sums over affine spans reduce to zero sums over linear subspaces
    /// through the origin (the function `g_{q-1}`).
    pub fn is_gq(&self, ctx: &FieldCtx) -> bool {
        match self {
            FnSpec::Inv => ctx.q() == 2,
            FnSpec::GS(s) => *s == (ctx.q() - 1) as u128,
            _ => false,
        }
    }
}

/// `sum_{a in F_q^k} f(offset + sum a_i v_i)`; a multiset sum if `v` is dependent.
pub fn span_sum(ctx: &FieldCtx, f: &FnSpec, v: &[Elem], offset: Elem) -> Elem {
    span_sum_with(ctx, v, offset, |x| f.eval(ctx, x))
}

pub fn span_sum_with(ctx: &FieldCtx, v: &[Elem], offset: Elem, f: impl Fn(Elem) -> Elem) -> Elem {
    let k = v.len();
    let q = ctx.q();
    let mut digits = vec![0u32; k];
    let mut x = offset;
    let mut acc = Elem::ZERO;
    loop {
        acc = ctx.add(acc, f(x));
        let mut j = 0;
        loop {
            if j == k {
                return acc;
            }
            // on wrap-around the q-th addition returns the coordinate to zero
            x = ctx.add(x, v[j]);
            digits[j] += 1;
            if digits[j] == q {
                digits[j] = 0;
                j += 1;
            } else {
                break;
            }
        }
    }
}

/// `sum_{0 != u in span(v)} 1/u^(q-1)`.
pub fn gq_span_sum(ctx: &FieldCtx, v: &[Elem]) -> Elem {
    let s = (ctx.q() - 1) as u128;
    span_sum_with(ctx, v, Elem::ZERO, |x| {
        if x.is_zero() {
            Elem::ZERO
        } else {
            ctx.pow(ctx.inv0(x), s)
        }
    })
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates `k`-dimensional subspaces of the span of chosen coordinate vectors
/// `X^c`, each exactly once, as reduced row-echelon bases. An optional fixed prefix is
/// prepended to every emitted basis.
#[derive(Clone, Debug)]
pub struct SubspaceIter<'a> {
    ctx: &'a FieldCtx,
    k: usize,
    columns: Vec<usize>,
    prefix: Vec<Elem>,
    pattern: Vec<usize>,
    pattern_index: u128,
    pattern_end: u128,
    free: Vec<(usize, Elem)>,
    digits: Vec<u32>,
    rows: Vec<Elem>,
    out: Vec<Elem>,
    state: IterState,
    emitted: u128,
    expected: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl<'a> SubspaceIter<'a> {
    /// All `k`-dimensional subspaces of `F_{q^n}`.
    pub fn new(ctx: &'a FieldCtx, k: usize) -> Self {
        Self::over_columns(ctx, k, (0..ctx.n()).collect(), Vec::new())
    }

    /// All `k`-dimensional subspaces containing 1 (`k >= 1`).
    pub fn containing_one(ctx: &'a FieldCtx, k: usize) -> Self {
        assert!(k >= 1);
        Self::over_columns(ctx, k - 1, (1..ctx.n()).collect(), vec![ctx.one()])
    }

    pub fn over_columns(ctx: &'a FieldCtx, k: usize, columns: Vec<usize>, prefix: Vec<Elem>) -> Self {
        let patterns = binomial(columns.len(), k);
        let expected = gaussian_binomial(columns.len(), k, ctx.q());
        let state = if k > columns.len() { IterState::Done } else { IterState::Fresh };
        SubspaceIter {
            ctx,
            k,
            columns,
            prefix,
            pattern: (0..k).collect(),
            pattern_index: 0,
            pattern_end: patterns,
            free: Vec::new(),
            digits: Vec::new(),
            rows: Vec::new(),
            out: Vec::new(),
            state,
            emitted: 0,
            expected,
        }
    }

    /// Number of pivot patterns, the unit of work splitting.
    pub fn pattern_count(&self) -> u128 {
        binomial(self.columns.len(), self.k)
    }

    /// Restricts iteration to pivot patterns with index in `start..end`.
    pub fn with_pattern_range(mut self, start: u128, end: u128) -> Self {
        let end = end.min(self.pattern_count());
        for _ in 0..start.min(end) {
            next_combination(&mut self.pattern, self.columns.len());
        }
        self.pattern_index = start.min(end);
        self.pattern_end = end;
        if start >= end {
            self.state = IterState::Done;
        }
        self.expected = 0;
        self
    }

    /// Total number of subspaces this iterator emits when unrestricted.
    pub fn total(&self) -> u128 {
        gaussian_binomial(self.columns.len(), self.k, self.ctx.q())
    }

    /// Pivot columns (as coordinate indices) of the current item.
    pub fn pivots(&self) -> Vec<usize> {
        self.pattern.iter().map(|&i| self.columns[i]).collect()
    }

    fn load_pattern(&mut self) {
        let ctx = self.ctx;
        let n_cols = self.columns.len();
        let mut is_pivot = vec![false; n_cols];
        for &c in &self.pattern {
            is_pivot[c] = true;
        }
        self.rows = self
            .pattern
            .iter()
            .map(|&c| ctx.basis_element(self.columns[c]))
            .collect();
        self.free.clear();
        for (r, &pc) in self.pattern.iter().enumerate() {
            for c in pc + 1..n_cols {
                if !is_pivot[c] {
                    self.free.push((r, ctx.basis_element(self.columns[c])));
                }
            }
        }
        self.digits = vec![0; self.free.len()];
    }

    fn fill_out(&mut self) {
        self.out.clear();
        self.out.extend_from_slice(&self.prefix);
        self.out.extend_from_slice(&self.rows);
    }

    fn advance(&mut self) -> bool {
        let q = self.ctx.q();
        for j in 0..self.free.len() {
            let (r, unit) = self.free[j];
            self.rows[r] = self.ctx.add(self.rows[r], unit);
            self.digits[j] += 1;
            if self.digits[j] < q {
                return true;
            }
            self.digits[j] = 0;
        }
        false
    }

    /// The next basis, borrowed from the iterator.
    pub fn next_ref(&mut self) -> Option<&[Elem]> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                if self.pattern_index >= self.pattern_end {
                    self.state = IterState::Done;
                    return None;
                }
                self.load_pattern();
                self.state = IterState::Running;
            }
            IterState::Running => {
                if !self.advance() {
                    self.pattern_index += 1;
                    if self.pattern_index >= self.pattern_end
                        || !next_combination(&mut self.pattern, self.columns.len())
                    {
                        self.state = IterState::Done;
                        if self.expected > 0 {
                            assert_eq!(self.emitted, self.expected, "subspace count mismatch");
                        }
                        return None;
                    }
                    self.load_pattern();
                }
            }
        }
        self.emitted += 1;
        self.fill_out();
        Some(&self.out)
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        self.next_ref().map(|b| b.to_vec())
    }
}

pub fn enum_subspaces(ctx: &FieldCtx, k: usize) -> SubspaceIter<'_> {
    SubspaceIter::new(ctx, k)
}

/// Result of an exhaustive scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhaustive {
    pub sum_free: bool,
    /// Basis of a zero-sum linear subspace (or affine span offset + span) found first in
    /// canonical order.
    pub counterexample: Option<Vec<Elem>>,
    pub offset: Elem,
    /// Number of subspaces in the scan's scope.
    pub scope: u128,
}

/// Cost estimate (field operations) of the exhaustive decision.
pub fn exhaustive_cost(ctx: &FieldCtx, f: &FnSpec, k: usize) -> u128 {
    let n = ctx.n();
    let q = ctx.q();
    if f.is_gq(ctx) {
        let count = gaussian_binomial(n - 1, k - 1, q);
        let k1 = (k + 1) as u128;
        count.saturating_mul(k1 * k1 * k1)
    } else {
        gaussian_binomial(n, k, q)
            .saturating_mul(ctx.order())
            .saturating_mul(ctx.n() as u128)
    }
}

/// Decides kth order sum-freedom by brute force over every affine span.
///
/// For `g_{q-1}` (and `f_inv` when q = 2) only linear subspaces containing 1 are
/// scanned: offsets never give zero sums, and `E` has a zero sum iff `aE` does.
pub fn is_kth_order_sumfree_exhaustive(
    ctx: &FieldCtx,
    f: &FnSpec,
    k: usize,
    budget: Budget,
) -> Result<Exhaustive, OracleError> {
    let n = ctx.n();
    if k == 0 || k > n {
        return Err(OracleError::InvalidOrder { k, n });
    }
    budget.check(exhaustive_cost(ctx, f, k))?;
    if f.is_gq(ctx) {
        let proto = SubspaceIter::containing_one(ctx, k);
        let scope = proto.total();
        let patterns = proto.pattern_count();
        let found = (0..patterns).into_par_iter().find_map_first(|pi| {
            let mut it = SubspaceIter::containing_one(ctx, k).with_pattern_range(pi, pi + 1);
            while let Some(b) = it.next_ref() {
                let (d, d1) = moore::delta_and_delta1(ctx, b);
                debug_assert!(!d.is_zero());
                if d1.is_zero() {
                    return Some(b.to_vec());
                }
            }
            None
        });
        return Ok(Exhaustive {
            sum_free: found.is_none(),
            counterexample: found,
            offset: Elem::ZERO,
            scope,
        });
    }
    let proto = SubspaceIter::new(ctx, k);
    let scope = proto.total();
    let patterns = proto.pattern_count();
    let found = (0..patterns).into_par_iter().find_map_first(|pi| {
        let mut it = SubspaceIter::new(ctx, k).with_pattern_range(pi, pi + 1);
        let pivots = it.pivots();
        let complement: Vec<Elem> = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|c| ctx.basis_element(c))
            .collect();
        while let Some(b) = it.next_ref() {
            let b = b.to_vec();
            let res = for_each_span_point(ctx, &complement, |offset| {
                if span_sum(ctx, f, &b, offset).is_zero() {
                    ControlFlow::Break(offset)
                } else {
                    ControlFlow::Continue(())
                }
            });
            if let ControlFlow::Break(offset) = res {
                return Some((b, offset));
            }
        }
        None
    });
    Ok(match found {
        Some((b, offset)) => Exhaustive { sum_free: false, counterexample: Some(b), offset, scope },
        None => Exhaustive { sum_free: true, counterexample: None, offset: Elem::ZERO, scope },
    })
}

/// Visits every point of `span(v)` (each tuple once).
pub fn for_each_span_point<B>(
    ctx: &FieldCtx,
    v: &[Elem],
    mut f: impl FnMut(Elem) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let k = v.len();
    let q = ctx.q();
    let mut digits = vec![0u32; k];
    let mut x = Elem::ZERO;
    loop {
        f(x)?;
        let mut j = 0;
        loop {
            if j == k {
                return ControlFlow::Continue(());
            }
            x = ctx.add(x, v[j]);
            digits[j] += 1;
            if digits[j] == q {
                digits[j] = 0;
                j += 1;
            } else {
                break;
            }
        }
    }
}

/// All `(j_0, ..., j_{n-1})` with `sum j_i <= max_total`.
fn bounded_vectors(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for j in 0..=left {
            cur[i] = j;
            rec(i + 1, n, left - j, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, n, max_total, &mut vec![0; n], &mut out);
    out
}

fn coeff_lookup(poly: &[(u128, Elem)], i: u128) -> Elem {
    poly.binary_search_by_key(&i, |t| t.0)
        .map(|pos| poly[pos].1)
        .unwrap_or(Elem::ZERO)
}

fn sorted_poly(ctx: &FieldCtx, f: &FnSpec) -> Result<Vec<(u128, Elem)>, OracleError> {
    let poly = f.to_poly(ctx);
    if let Some(&(i, _)) = poly.iter().find(|t| t.0 >= ctx.order()) {
        return Err(OracleError::PolyTooLong(i));
    }
    Ok(poly)
}

/// One active term of the hyperplane sum: multinomial, coefficient, exponent of b,
/// and the total `sum j_i`.
struct HyperTerm {
    weight: Elem,
    b_exp: u128,
    total: u32,
}

fn hyper_terms(ctx: &FieldCtx, poly: &[(u128, Elem)]) -> Vec<HyperTerm> {
    let q = ctx.q();
    let n = ctx.n();
    let top = ctx.order() - 1;
    let mut out = Vec::new();
    for j in bounded_vectors(n, q - 1) {
        let total: u32 = j.iter().sum();
        if total == 0 {
            continue;
        }
        let b_exp: u128 = j
            .iter()
            .enumerate()
            .map(|(i, &ji)| ji as u128 * (q as u128).pow(i as u32))
            .sum();
        let a = coeff_lookup(poly, top - b_exp);
        if a.is_zero() {
            continue;
        }
        let parts: Vec<u64> = j.iter().map(|&x| x as u64).collect();
        let m = moore::multinomial_mod_p(&parts, ctx.p());
        if m == 0 {
            continue;
        }
        out.push(HyperTerm { weight: ctx.scale(a, m), b_exp, total });
    }
    out
}

fn hyper_value(ctx: &FieldCtx, terms: &[HyperTerm], top_coeff: Elem, b: Elem, c: u32) -> Elem {
    let q = ctx.q();
    let mut acc = ctx.neg(top_coeff);
    if c != 0 {
        // the j = 0 term is a_{q^n-1} c^{q-1} = a_{q^n-1}
        acc = Elem::ZERO;
    }
    for t in terms {
        let e = q - 1 - t.total;
        let cpow = if e == 0 { 1 } else if c == 0 { 0 } else { fpoly::pow_mod(c, e as u64, ctx.p()) };
        if cpow == 0 {
            continue;
        }
        acc = ctx.add(acc, ctx.scale(ctx.mul(t.weight, ctx.pow(b, t.b_exp)), cpow));
    }
    acc
}

/// `sum_{Tr(bx) = c} f(x)` by the closed multinomial formula.
pub fn hyperplane_sum_formula(ctx: &FieldCtx, f: &FnSpec, b: Elem, c: Elem) -> Result<Elem, OracleError> {
    if ctx.n() < 2 {
        return Err(OracleError::DegreeTooSmall);
    }
    if b.is_zero() {
        return Err(OracleError::BNonzeroRequired);
    }
    if !ctx.in_subfield(c, 1).expect("1 divides n") {
        return Err(OracleError::NotInBaseField);
    }
    let poly = sorted_poly(ctx, f)?;
    let terms = hyper_terms(ctx, &poly);
    let top = coeff_lookup(&poly, ctx.order() - 1);
    Ok(hyper_value(ctx, &terms, top, b, ctx.coeff(c, 0)))
}

/// `sum_{Tr(bx) = c} f(x)` by enumerating the field.
pub fn hyperplane_sum_direct(ctx: &FieldCtx, f: &FnSpec, b: Elem, c: Elem) -> Elem {
    let ct = ctx.coeff(c, 0);
    ctx.elements()
        .filter(|&x| ctx.abs_trace(ctx.mul(b, x)) == ct)
        .fold(Elem::ZERO, |acc, x| ctx.add(acc, f.eval(ctx, x)))
}

/// Outcome of the (n-1)th order criterion, with the path that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NMinus1 {
    pub sum_free: bool,
    pub cond1: bool,
    pub cond2: bool,
    /// Set when `cond2` was settled by the permutation test on `L_t`.
    pub lt_fast_path: Option<u32>,
}

/// Decides (n-1)th order sum-freedom of a polynomial function.
pub fn check_n_minus_1_criteria(ctx: &FieldCtx, f: &FnSpec, budget: Budget) -> Result<NMinus1, OracleError> {
    let n = ctx.n();
    if n < 2 {
        return Err(OracleError::DegreeTooSmall);
    }
    let poly = sorted_poly(ctx, f)?;
    let q = ctx.q();
    let top_index = ctx.order() - 1;
    let top = coeff_lookup(&poly, top_index);
    if q == 2 {
        budget.check((n * n * n) as u128)?;
        let a: Vec<Elem> = (0..n).map(|j| coeff_lookup(&poly, top_index - (1u128 << j))).collect();
        let rows: Vec<Vec<Elem>> = (0..n)
            .map(|i| (0..n).map(|j| ctx.frobenius(a[(i + j) % n], i)).collect())
            .collect();
        let cond2 = !moore::det(ctx, &rows).is_zero();
        let cond1 = top.is_zero();
        return Ok(NMinus1 { sum_free: cond1 && cond2, cond1, cond2, lt_fast_path: None });
    }
    let terms = hyper_terms(ctx, &poly);
    budget.check(ctx.order().saturating_mul(q as u128).saturating_mul(terms.len().max(1) as u128))?;
    let full: Vec<&HyperTerm> = terms.iter().filter(|t| t.total == q - 1).collect();
    let cond1 = ctx.elements().skip(1).all(|b| {
        let rhs = full
            .iter()
            .fold(Elem::ZERO, |acc, t| ctx.add(acc, ctx.mul(t.weight, ctx.pow(b, t.b_exp))));
        rhs != top
    });
    let lt = lt_permutation(ctx, &poly, &terms);
    let cond2 = if lt.is_some() {
        true
    } else {
        ctx.elements()
            .skip(1)
            .all(|b| (1..q).all(|c| !hyper_value(ctx, &terms, Elem::ZERO, b, c).is_zero()))
    };
    Ok(NMinus1 { sum_free: cond1 && cond2, cond1, cond2, lt_fast_path: lt })
}

/// If every active term of (cond2) is a single `t q^i` exponent for one fixed `t`, and
/// `L_t(X) = sum_i a_{q^n-1-t q^i} X^{q^i}` permutes the field, returns `t`.
fn lt_permutation(ctx: &FieldCtx, poly: &[(u128, Elem)], terms: &[HyperTerm]) -> Option<u32> {
    let q = ctx.q() as u128;
    let n = ctx.n();
    let mut t_found: Option<u32> = None;
    for term in terms {
        let t = term.total;
        let single = (0..n).any(|i| term.b_exp == t as u128 * q.pow(i as u32));
        if !single || t_found.is_some_and(|x| x != t) {
            return None;
        }
        t_found = Some(t);
    }
    let t = t_found?;
    let top = ctx.order() - 1;
    let coeffs: Vec<Elem> = (0..n)
        .map(|i| coeff_lookup(poly, top - t as u128 * q.pow(i as u32)))
        .collect();
    let l = moore::QPoly { coeffs };
    let rank = moore::linear_map_matrix(ctx, |x| l.eval(ctx, x)).rank();
    (rank == n).then_some(t)
}

/// `g_{i,q}` over F_p with `sum_{x in F_q} (x + X)^i = g_{i,q}(X^q - X)`.
pub fn g_iq(i: usize, q: u32) -> Vec<u32> {
    g_iq_table(i, q).pop().unwrap_or_default()
}

/// `g_{0,q}, ..., g_{max,q}` by the recursion.
pub fn g_iq_table(max: usize, q: u32) -> Vec<Vec<u32>> {
    let qs = q as usize;
    let mut g: Vec<Vec<u32>> = Vec::with_capacity(max + 1);
    for i in 0..=max {
        let v = if i + 1 < qs {
            Vec::new()
        } else if i + 1 == qs {
            vec![q - 1]
        } else {
            let mut shifted = vec![0u32];
            shifted.extend_from_slice(&g[i - qs]);
            fpoly::add(&shifted, &g[i - qs + 1], q)
        };
        g.push(v);
    }
    g
}

/// Evaluates an F_p polynomial at a field element.
pub fn eval_fp_poly(ctx: &FieldCtx, poly: &[u32], x: Elem) -> Elem {
    poly.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), ctx.constant(c)))
}

/// First order sum-freedom via `sum a_i b^i g_{i,q}(d) != 0` for all `b != 0` and
/// `d` of trace zero.
pub fn check_first_order(ctx: &FieldCtx, f: &FnSpec, budget: Budget) -> Result<bool, OracleError> {
    let poly = sorted_poly(ctx, f)?;
    let max = poly.last().map(|t| t.0).unwrap_or(0);
    let order = ctx.order();
    let traceless = order / ctx.q() as u128;
    let max_usize = usize::try_from(max).map_err(|_| OracleError::PolyTooLong(max))?;
    let table_cost = (max as u128 + 1).pow(2) / ctx.q() as u128;
    budget.check(
        table_cost.saturating_add(
            order
                .saturating_mul(traceless)
                .saturating_mul((poly.len() as u128) * (max / ctx.q() as u128 + 1)),
        ),
    )?;
    let table = g_iq_table(max_usize, ctx.q());
    let ds: Vec<Elem> = ctx.elements().filter(|&d| ctx.abs_trace(d) == 0).collect();
    for d in ds {
        let gd: Vec<Elem> = poly
            .iter()
            .map(|&(i, a)| ctx.mul(a, eval_fp_poly(ctx, &table[i as usize], d)))
            .collect();
        for b in ctx.elements().skip(1) {
            let s = poly
                .iter()
                .zip(&gd)
                .fold(Elem::ZERO, |acc, (&(i, _), &g)| ctx.add(acc, ctx.mul(g, ctx.pow(b, i))));
            if s.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(4, 0, 2), 1);
        assert_eq!(gaussian_binomial(4, 4, 2), 1);
        assert_eq!(gaussian_binomial(3, 1, 3), 13);
    }

    #[test]
    fn counts_match_gaussian_binomial() {
        let ctx = FieldCtx::new(2, 4, None).unwrap();
        assert_eq!(enum_subspaces(&ctx, 2).count(), 35);
        assert_eq!(enum_subspaces(&ctx, 0).count(), 1);
        assert_eq!(enum_subspaces(&ctx, 4).count(), 1);
        let f9 = FieldCtx::new(3, 3, None).unwrap();
        assert_eq!(enum_subspaces(&f9, 1).count(), 13);
        assert_eq!(SubspaceIter::containing_one(&f9, 2).count(), 4);
    }

    #[test]
    fn pattern_ranges_partition_the_scan() {
        let ctx = FieldCtx::new(2, 6, None).unwrap();
        let it = SubspaceIter::new(&ctx, 3);
        let total = it.total();
        let pc = it.pattern_count();
        let mut n = 0u128;
        for pi in 0..pc {
            n += SubspaceIter::new(&ctx, 3).with_pattern_range(pi, pi + 1).count() as u128;
        }
        assert_eq!(n, total);
    }

    #[test]
    fn two_element_span() {
        let ctx = FieldCtx::new(2, 5, None).unwrap();
        assert_eq!(span_sum(&ctx, &FnSpec::Inv, &[ctx.one()], Elem::ZERO), ctx.one());
    }

    #[test]
    fn g_iq_seeds() {
        assert_eq!(g_iq(2, 3), vec![2]);
        assert_eq!(g_iq(1, 3), Vec::<u32>::new());
        assert_eq!(g_iq(5, 3), vec![0, 2]);
        assert_eq!(g_iq(1, 2), vec![1]);
    }

    #[test]
    fn parse_budget_forms() {
        assert_eq!(parse_count("1e9"), Some(1_000_000_000));
        assert_eq!(parse_count("1_000"), Some(1000));
        assert_eq!(parse_count("x"), None);
    }
}
