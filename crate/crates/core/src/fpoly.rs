//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored ascending (`c[i]` multiplies `X^i`) as `u32` values in
//! `[0, p)`. Every function returns trimmed vectors: no trailing zero coefficients,
//! and the zero polynomial is the empty vector.

use crate::linalg::FpMatrix;

/// Returns true if `n` is prime.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

pub fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse in F_p. Panics on zero.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    pow_mod(a, p as u64 - 2, p)
}

pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn add(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| add_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

pub fn sub(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| sub_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

pub fn scale(f: &[u32], c: u32, p: u32) -> Vec<u32> {
    trim(f.iter().map(|&a| mul_mod(a, c, p)).collect())
}

pub fn mul(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; f.len() + g.len() - 1];
    let p64 = p as u64;
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p64;
        }
    }
    trim(acc.into_iter().map(|c| c as u32).collect())
}

/// Quotient and remainder of `f / g`. Panics if `g` is zero.
pub fn divrem(f: &[u32], g: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let dg = degree(g).expect("division by the zero polynomial");
    let mut r: Vec<u32> = trim(f.to_vec());
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(g[dg], p);
    let mut q = vec![0u32; r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dg;
        q[shift] = c;
        for (j, &gj) in g.iter().enumerate().take(dg + 1) {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(c, gj, p), p);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    divrem(f, g, p).1
}

pub fn monic(f: &[u32], p: u32) -> Vec<u32> {
    match degree(f) {
        None => Vec::new(),
        Some(d) => scale(f, inv_mod(f[d], p), p),
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn mulmod(f: &[u32], g: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(f, g, p), modulus, p)
}

pub fn powmod(base: &[u32], mut e: u128, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem(&[1], modulus, p);
    let mut b = rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, modulus, p);
        }
        b = mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

/// Formal derivative.
pub fn derivative(f: &[u32], p: u32) -> Vec<u32> {
    if f.len() <= 1 {
        return Vec::new();
    }
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, (i as u64 % p as u64) as u32, p))
            .collect(),
    )
}

/// `X^(p^count) mod f`, by repeated p-th powering.
fn x_pow_p_iter(f: &[u32], count: usize, p: u32) -> Vec<u32> {
    let mut x = rem(&[0, 1], f, p);
    for _ in 0..count {
        x = powmod(&x, p as u128, f, p);
    }
    x
}

/// Exact irreducibility test (Rabin): `f` of degree m is irreducible iff
/// `X^(p^m) = X mod f` and `gcd(X^(p^(m/r)) - X, f) = 1` for every prime `r | m`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(m) = degree(f) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let f = monic(f, p);
    let x = vec![0, 1];
    if x_pow_p_iter(&f, m, p) != rem(&x, &f, p) {
        return false;
    }
    for r in prime_divisors(m) {
        let h = sub(&x_pow_p_iter(&f, m / r, p), &x, p);
        if gcd(&h, &f, p) != [1] {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `m` over F_p, ordered as a base-p
/// integer with the constant coefficient least significant.
pub fn find_irreducible(p: u32, m: usize) -> Vec<u32> {
    assert!(m >= 1);
    let mut low = vec![0u32; m];
    loop {
        let mut f = low.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment the base-p counter over the low m coefficients
        let mut i = 0;
        loop {
            assert!(i < m, "no irreducible polynomial of degree {m} found");
            low[i] += 1;
            if low[i] == p {
                low[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Berlekamp factorization of a monic squarefree polynomial into monic irreducibles.
/// Deterministic: splitting uses `gcd(f, h - c)` for every constant `c` in F_p.
pub fn berlekamp(f: &[u32], p: u32) -> Vec<Vec<u32>> {
    let f = monic(f, p);
    let n = match degree(&f) {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f],
        Some(d) => d,
    };
    // Q - I where row i is X^(p*i) mod f
    let mut q = FpMatrix::zeros(p, n, n);
    let xp = powmod(&[0, 1], p as u128, &f, p);
    let mut row = vec![1u32];
    for i in 0..n {
        for (j, &c) in row.iter().enumerate() {
            q.set(j, i, c);
        }
        let d = q.get(i, i);
        q.set(i, i, sub_mod(d, 1, p));
        row = mulmod(&row, &xp, &f, p);
    }
    // kernel of (Q - I) acting on coefficient vectors
    let kernel = q.nullspace();
    if kernel.len() == 1 {
        return vec![f];
    }
    let mut factors = vec![f.clone()];
    for v in kernel.iter() {
        let h = trim(v.clone());
        if degree(&h).unwrap_or(0) == 0 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if degree(&g) == Some(1) {
                next.push(g);
                continue;
            }
            let mut rest = g.clone();
            for c in 0..p {
                if degree(&rest).unwrap_or(0) == 0 {
                    break;
                }
                let hc = sub(&h, &[c], p);
                let d = gcd(&rest, &hc, p);
                let dd = degree(&d).unwrap_or(0);
                if dd > 0 && dd < degree(&rest).unwrap() {
                    next.push(d.clone());
                    rest = divrem(&rest, &d, p).0;
                }
            }
            if degree(&rest).unwrap_or(0) > 0 {
                next.push(monic(&rest, p));
            }
        }
        factors = next;
        if factors.len() == kernel.len() {
            break;
        }
    }
    factors
}

/// Canonical ordering key for polynomials: by degree, then as a base-p integer.
pub fn canonical_cmp(f: &[u32], g: &[u32]) -> std::cmp::Ordering {
    f.len()
        .cmp(&g.len())
        .then_with(|| f.iter().rev().cmp(g.iter().rev()))
}

/// Complete factorization of `X^n - 1` over F_q (q prime) as `(factor, multiplicity)`
/// pairs, sorted canonically.
pub fn factor_xn_minus_1(q: u32, n: usize) -> Vec<(Vec<u32>, usize)> {
    assert!(n >= 1 && is_prime(q));
    // X^n - 1 = (X^n' - 1)^(q^e) with n = q^e * n', and X^n' - 1 squarefree
    let mut np = n;
    let mut mult = 1usize;
    while np % q as usize == 0 {
        np /= q as usize;
        mult *= q as usize;
    }
    let mut base = vec![0u32; np + 1];
    base[0] = q - 1;
    base[np] = 1;
    let mut out: Vec<(Vec<u32>, usize)> =
        berlekamp(&base, q).into_iter().map(|g| (g, mult)).collect();
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    out
}

/// Evaluates the F_p-polynomial `g` at a point, using Horner with the given ring ops.
pub fn horner<T: Copy>(
    g: &[u32],
    x: T,
    zero: T,
    from_const: impl Fn(u32) -> T,
    add: impl Fn(T, T) -> T,
    mul: impl Fn(T, T) -> T,
) -> T {
    let mut acc = zero;
    for &c in g.iter().rev() {
        acc = add(mul(acc, x), from_const(c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_divisors(60), vec![2, 3, 5]);
        assert_eq!(prime_divisors(1), Vec::<usize>::new());
    }

    #[test]
    fn divrem_reconstructs() {
        let p = 5;
        let f = vec![3, 0, 4, 1, 2, 1];
        let g = vec![1, 2, 1];
        let (q, r) = divrem(&f, &g, p);
        assert_eq!(add(&mul(&q, &g, p), &r, p), f);
        assert!(degree(&r).map_or(true, |d| d < 2));
    }

    #[test]
    fn irreducibility_known_cases() {
        // X^13 + X^12 + X^11 + X^8 + 1 and X^21 + X^19 + 1 over F_2
        let mut f13 = vec![0u32; 14];
        for e in [0, 8, 11, 12, 13] {
            f13[e] = 1;
        }
        assert!(is_irreducible(&f13, 2));
        let mut f21 = vec![0u32; 22];
        for e in [0, 19, 21] {
            f21[e] = 1;
        }
        assert!(is_irreducible(&f21, 2));
        // X^4 + 1 = (X + 1)^4
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
        // X^2 + 1 over F_3 is irreducible, over F_5 it is not
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(find_irreducible(2, 1), vec![0, 1]);
        assert_eq!(find_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(find_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(find_irreducible(2, 8), vec![1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(find_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn brute_force_irreducibility_agrees() {
        // an irreducible of degree <= 4 has no factor of degree <= 2
        for p in [2u32, 3] {
            for d in 2..=4usize {
                let count = (p as usize).pow(d as u32);
                for idx in 0..count {
                    let mut f = Vec::with_capacity(d + 1);
                    let mut x = idx;
                    for _ in 0..d {
                        f.push((x % p as usize) as u32);
                        x /= p as usize;
                    }
                    f.push(1);
                    let mut has_factor = false;
                    for gd in 1..=d / 2 {
                        let gc = (p as usize).pow(gd as u32);
                        for gi in 0..gc {
                            let mut g = Vec::new();
                            let mut y = gi;
                            for _ in 0..gd {
                                g.push((y % p as usize) as u32);
                                y /= p as usize;
                            }
                            g.push(1);
                            if rem(&f, &g, p).is_empty() {
                                has_factor = true;
                            }
                        }
                    }
                    assert_eq!(is_irreducible(&f, p), !has_factor, "{f:?} over F_{p}");
                }
            }
        }
    }

    #[test]
    fn factor_small_cyclotomics() {
        assert_eq!(factor_xn_minus_1(2, 4), vec![(vec![1, 1], 4)]);
        assert_eq!(
            factor_xn_minus_1(2, 3),
            vec![(vec![1, 1], 1), (vec![1, 1, 1], 1)]
        );
        // X^5 - 1 = (X + 1)(X^4 + X^3 + X^2 + X + 1) over F_2
        assert_eq!(
            factor_xn_minus_1(2, 5),
            vec![(vec![1, 1], 1), (vec![1, 1, 1, 1, 1], 1)]
        );
    }

    #[test]
    fn factor_xn_minus_1_products_back() {
        for q in [2u32, 3, 5] {
            for n in 1..=24usize {
                let fac = factor_xn_minus_1(q, n);
                let mut prod = vec![1u32];
                for (g, e) in &fac {
                    assert!(is_irreducible(g, q));
                    for _ in 0..*e {
                        prod = mul(&prod, g, q);
                    }
                }
                let mut expect = vec![0u32; n + 1];
                expect[0] = q - 1;
                expect[n] = 1;
                assert_eq!(prod, expect, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn factor_x21_minus_1_degrees() {
        // ord_7(2) = 3 and ord_9(2) = 6
        let degs: Vec<usize> = factor_xn_minus_1(2, 21)
            .iter()
            .map(|(g, _)| degree(g).unwrap())
            .collect();
        assert!(degs.contains(&3));
        assert!(degs.contains(&6));
    }
}
