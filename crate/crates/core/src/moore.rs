//! Moore determinants, subspace polynomials and the Carlitz power-sum formula.
//!
//! Conventions: for a basis `v = (v_1, ..., v_k)` the Moore matrix has entry
//! `v_j^(q^i)` in row `i`, column `j`. `delta` uses rows `0..k`; `delta_i(i)` uses the
//! rows `{0, ..., k} \ {i}`, so `delta_i(k) = delta` and `delta_i(0) = delta^q`.

use thiserror::Error;

use crate::field::{Elem, FieldCtx};
use crate::fpoly;
use crate::linalg::FpMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MooreError {
    #[error("basis is empty")]
    EmptyBasis,
    #[error("row index {i} out of range 0..={k}")]
    IndexOutOfRange { i: usize, k: usize },
    #[error("basis vectors are linearly dependent over F_q")]
    DependentBasis,
    #[error("evaluation point lies in the span of the basis")]
    YInSpan,
}

/// Determinant of a `k x k` row-major matrix over the field. Destroys `a`.
pub fn det_in_place(ctx: &FieldCtx, a: &mut [Elem], k: usize) -> Elem {
    debug_assert_eq!(a.len(), k * k);
    let mut d = ctx.one();
    for c in 0..k {
        let Some(pr) = (c..k).find(|&r| !a[r * k + c].is_zero()) else {
            return Elem::ZERO;
        };
        if pr != c {
            for j in c..k {
                a.swap(pr * k + j, c * k + j);
            }
            d = ctx.neg(d);
        }
        let pivot = a[c * k + c];
        d = ctx.mul(d, pivot);
        let inv = ctx.inv0(pivot);
        for r in c + 1..k {
            let x = a[r * k + c];
            if x.is_zero() {
                continue;
            }
            let f = ctx.mul(x, inv);
            for j in c + 1..k {
                let t = ctx.mul(f, a[c * k + j]);
                a[r * k + j] = ctx.sub(a[r * k + j], t);
            }
        }
    }
    d
}

pub fn det(ctx: &FieldCtx, rows: &[Vec<Elem>]) -> Elem {
    let k = rows.len();
    let mut flat: Vec<Elem> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    assert_eq!(flat.len(), k * k);
    det_in_place(ctx, &mut flat, k)
}

/// `table[i][j] = v_j^(q^i)` for `i = 0..rows`.
pub fn frobenius_table(ctx: &FieldCtx, v: &[Elem], rows: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::with_capacity(rows);
    let mut cur = v.to_vec();
    for _ in 0..rows {
        let next = cur.iter().map(|&x| ctx.frob(x)).collect();
        out.push(std::mem::replace(&mut cur, next));
    }
    out
}

fn det_of_rows(ctx: &FieldCtx, table: &[Vec<Elem>], rows: impl Iterator<Item = usize>, k: usize) -> Elem {
    let mut flat = Vec::with_capacity(k * k);
    for r in rows {
        flat.extend_from_slice(&table[r][..k]);
    }
    det_in_place(ctx, &mut flat, k)
}

/// The Moore determinant `Δ(v)`.
pub fn moore_delta(ctx: &FieldCtx, v: &[Elem]) -> Result<Elem, MooreError> {
    let k = v.len();
    if k == 0 {
        return Err(MooreError::EmptyBasis);
    }
    let t = frobenius_table(ctx, v, k);
    Ok(det_of_rows(ctx, &t, 0..k, k))
}

/// `Δ_i(v)`: rows `q^0, ..., q^k` with `q^i` omitted.
pub fn moore_delta_i(ctx: &FieldCtx, i: usize, v: &[Elem]) -> Result<Elem, MooreError> {
    let k = v.len();
    if k == 0 {
        return Err(MooreError::EmptyBasis);
    }
    if i > k {
        return Err(MooreError::IndexOutOfRange { i, k });
    }
    let t = frobenius_table(ctx, v, k + 1);
    Ok(det_of_rows(ctx, &t, (0..=k).filter(|&r| r != i), k))
}

/// All of `Δ_0, ..., Δ_k` from one Frobenius table.
pub fn moore_deltas(ctx: &FieldCtx, v: &[Elem]) -> Result<Vec<Elem>, MooreError> {
    let k = v.len();
    if k == 0 {
        return Err(MooreError::EmptyBasis);
    }
    let t = frobenius_table(ctx, v, k + 1);
    Ok((0..=k)
        .map(|i| det_of_rows(ctx, &t, (0..=k).filter(|&r| r != i), k))
        .collect())
}

/// `(Δ, Δ_1)`, the pair that decides the sum-freedom criterion.
pub fn delta_and_delta1(ctx: &FieldCtx, v: &[Elem]) -> (Elem, Elem) {
    let k = v.len();
    assert!(k > 0);
    let t = frobenius_table(ctx, v, k + 1);
    let d = det_of_rows(ctx, &t, 0..k, k);
    if d.is_zero() {
        return (d, Elem::ZERO);
    }
    let d1 = det_of_rows(ctx, &t, (0..=k).filter(|&r| r != 1), k);
    (d, d1)
}

/// Rank over F_p of the coordinate vectors of `v`.
pub fn coordinate_rank(ctx: &FieldCtx, v: &[Elem]) -> usize {
    if v.is_empty() {
        return 0;
    }
    let cols: Vec<Vec<u32>> = v.iter().map(|&x| ctx.coeffs(x)).collect();
    FpMatrix::from_columns(ctx.p(), ctx.n(), &cols).rank()
}

/// Matrix (in the coordinate basis `1, X, ..., X^(n-1)`) of an F_q-linear map.
pub fn linear_map_matrix(ctx: &FieldCtx, f: impl Fn(Elem) -> Elem) -> FpMatrix {
    let cols: Vec<Vec<u32>> = (0..ctx.n()).map(|i| ctx.coeffs(f(ctx.basis_element(i)))).collect();
    FpMatrix::from_columns(ctx.p(), ctx.n(), &cols)
}

/// An F_q-basis of the kernel of an F_q-linear map.
pub fn linear_kernel(ctx: &FieldCtx, f: impl Fn(Elem) -> Elem) -> Vec<Elem> {
    linear_map_matrix(ctx, f)
        .nullspace()
        .iter()
        .map(|c| ctx.from_coeffs(c).expect("kernel vector has field length"))
        .collect()
}

/// An F_q-basis of the subfield `F_{q^d}`.
pub fn subfield_basis(ctx: &FieldCtx, d: usize) -> Vec<Elem> {
    linear_kernel(ctx, |x| ctx.sub(ctx.frobenius(x, d), x))
}

/// An F_q-basis of `{x : Tr(x u) = 0 for all u in span(v)}`.
pub fn trace_dual(ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
    let rows: Vec<Vec<u32>> = v
        .iter()
        .map(|&u| (0..ctx.n()).map(|j| ctx.abs_trace(ctx.mul(u, ctx.basis_element(j)))).collect())
        .collect();
    if rows.is_empty() {
        return (0..ctx.n()).map(|j| ctx.basis_element(j)).collect();
    }
    FpMatrix::from_rows(ctx.p(), ctx.n(), &rows)
        .nullspace()
        .iter()
        .map(|c| ctx.from_coeffs(c).expect("kernel vector has field length"))
        .collect()
}

/// Coordinate indices complementing the pivots of `span(v)`, so that the unit vectors
/// there span a complement of `span(v)`.
pub fn coordinate_complement(ctx: &FieldCtx, v: &[Elem]) -> Vec<usize> {
    let rows: Vec<Vec<u32>> = v.iter().map(|&x| ctx.coeffs(x)).collect();
    if rows.is_empty() {
        return (0..ctx.n()).collect();
    }
    let mut m = FpMatrix::from_rows(ctx.p(), ctx.n(), &rows);
    let pivots = m.rref();
    (0..ctx.n()).filter(|c| !pivots.contains(c)).collect()
}

/// A linearized polynomial `sum a_i X^(q^i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    pub coeffs: Vec<Elem>,
}

impl QPoly {
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut xp = x;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = ctx.frob(xp);
            }
            if !a.is_zero() {
                acc = ctx.add(acc, ctx.mul(a, xp));
            }
        }
        acc
    }

    /// Reads a dense polynomial as a q-polynomial; `None` if it has other terms.
    pub fn from_dense(ctx: &FieldCtx, dense: &[Elem]) -> Option<QPoly> {
        let q = ctx.q() as usize;
        let mut coeffs = Vec::new();
        let mut next = 1usize;
        for (e, &c) in dense.iter().enumerate() {
            if e == next {
                coeffs.push(c);
                next *= q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(QPoly { coeffs })
    }
}

/// `L_E` for `E = span(v)`, via `L_{E+<v>} = L_E^q - L_E(v)^(q-1) L_E`.
pub fn subspace_poly(ctx: &FieldCtx, v: &[Elem]) -> Result<QPoly, MooreError> {
    let q = ctx.q() as u128;
    let mut a = vec![ctx.one()];
    for &x in v {
        let l = QPoly { coeffs: a.clone() };
        let c = l.eval(ctx, x);
        if c.is_zero() {
            return Err(MooreError::DependentBasis);
        }
        let c = ctx.pow(c, q - 1);
        let k = a.len();
        let mut b = Vec::with_capacity(k + 1);
        b.push(ctx.neg(ctx.mul(c, a[0])));
        for i in 1..k {
            b.push(ctx.sub(ctx.frob(a[i - 1]), ctx.mul(c, a[i])));
        }
        b.push(ctx.frob(a[k - 1]));
        a = b;
    }
    Ok(QPoly { coeffs: a })
}

/// Every element of `span(v)` in odometer order over `F_q^k` (a multiset if dependent).
pub fn span_elements(ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO];
    for &x in v {
        let prev = out.clone();
        let mut mult = x;
        for _ in 1..ctx.q() {
            out.extend(prev.iter().map(|&u| ctx.add(u, mult)));
            mult = ctx.add(mult, x);
        }
    }
    out
}

/// Dense coefficients of `prod_{u in span(v)} (X - u)`.
pub fn span_product_dense(ctx: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
    let mut poly = vec![ctx.one()];
    for u in span_elements(ctx, v) {
        let nu = ctx.neg(u);
        let mut next = vec![Elem::ZERO; poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i + 1] = ctx.add(next[i + 1], c);
            next[i] = ctx.add(next[i], ctx.mul(c, nu));
        }
        poly = next;
    }
    poly
}

/// `L_E` computed as the explicit product over the span.
pub fn subspace_poly_by_product(ctx: &FieldCtx, v: &[Elem]) -> Result<QPoly, MooreError> {
    if coordinate_rank(ctx, v) < v.len() {
        return Err(MooreError::DependentBasis);
    }
    let dense = span_product_dense(ctx, v);
    Ok(QPoly::from_dense(ctx, &dense).expect("subspace polynomial is linearized"))
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u32;
    while k > 0 {
        let (nd, kd) = ((n % p64) as u32, (k % p64) as u32);
        if kd > nd {
            return 0;
        }
        let mut num = 1u32;
        let mut den = 1u32;
        for i in 0..kd {
            num = fpoly::mul_mod(num, nd - i, p);
            den = fpoly::mul_mod(den, i + 1, p);
        }
        acc = fpoly::mul_mod(acc, fpoly::mul_mod(num, fpoly::inv_mod(den, p), p), p);
        n /= p64;
        k /= p64;
    }
    acc
}

/// Multinomial coefficient `(sum l_i)! / prod l_i!` mod p.
pub fn multinomial_mod_p(parts: &[u64], p: u32) -> u32 {
    let mut total = 0u64;
    let mut acc = 1u32;
    for &l in parts {
        total += l;
        acc = fpoly::mul_mod(acc, binomial_mod_p(total, l, p), p);
        if acc == 0 {
            return 0;
        }
    }
    acc
}

/// All `(l_0, ..., l_k)` with `sum l_i q^i = l`.
pub fn compositions(q: u64, k: usize, l: u64) -> Vec<Vec<u64>> {
    fn rec(q: u64, i: usize, rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let w = q.pow(i as u32);
        if i == 0 {
            cur[0] = rest;
            out.push(cur.clone());
            return;
        }
        for c in 0..=rest / w {
            cur[i] = c;
            rec(q, i - 1, rest - c * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; k + 1];
    rec(q, k, l, &mut cur, &mut out);
    out
}

/// `sum_{u in span(v)} 1/(y+u)^(l+1)` by the Carlitz closed form.
pub fn carlitz_power_sum(ctx: &FieldCtx, v: &[Elem], y: Elem, l: u64) -> Result<Elem, MooreError> {
    if v.is_empty() {
        return Err(MooreError::EmptyBasis);
    }
    let k = v.len();
    let di = moore_deltas(ctx, v)?;
    if di[k].is_zero() {
        return Err(MooreError::DependentBasis);
    }
    let mut yv = Vec::with_capacity(k + 1);
    yv.push(y);
    yv.extend_from_slice(v);
    let big = moore_delta(ctx, &yv)?;
    if big.is_zero() {
        return Err(MooreError::YInSpan);
    }
    let inv_big = ctx.inv0(big);
    let ratios: Vec<Elem> = di
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let r = ctx.mul(d, inv_big);
            if i % 2 == 1 {
                ctx.neg(r)
            } else {
                r
            }
        })
        .collect();
    let mut acc = Elem::ZERO;
    for comp in compositions(ctx.q() as u64, k, l) {
        let c = multinomial_mod_p(&comp, ctx.p());
        if c == 0 {
            continue;
        }
        let mut term = ctx.constant(c);
        for (i, &li) in comp.iter().enumerate() {
            if li > 0 {
                term = ctx.mul(term, ctx.pow(ratios[i], li as u128));
            }
        }
        acc = ctx.add(acc, term);
    }
    Ok(ctx.mul(ctx.mul(di[0], inv_big), acc))
}
