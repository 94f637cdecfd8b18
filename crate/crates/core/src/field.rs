//! Exact arithmetic in F_{p^m} = F_p[X]/(f).
//!
//! An [`Elem`] is a coefficient vector over F_p packed into a `u128`: coefficient `i`
//! (multiplying `X^i`) occupies lane `i`, each lane `lane_bits` wide. For p = 2 this is
//! plain bit packing. The packing is an implementation detail; the observable value of
//! an element is its coefficient vector, see [`FieldCtx::coeffs`].
//!
//! The base field F_q of every context is the prime field (q = p).

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::fpoly;
use crate::text;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is reducible")]
    Reducible(String),
    #[error("modulus must be monic of degree {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a valid member of this field")]
    CtxMismatch,
    #[error("{d} does not divide the extension degree {m}")]
    NotADivisor { d: usize, m: usize },
    #[error("F_{p}^{m} does not fit the packed representation")]
    Unsupported { p: u32, m: usize },
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// A field element. Only meaningful together with the [`FieldCtx`] that produced it.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u128);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed representation.
    #[inline]
    pub fn raw(self) -> u128 {
        self.0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({:#x})", self.0)
    }
}

/// Discrete log tables for small binary fields.
#[derive(Clone, Debug)]
struct LogTables {
    log: Vec<u32>,
    // doubled so that exp[log a + log b] never needs a reduction
    exp: Vec<u64>,
}

const MAX_TABLE_DEGREE: usize = 16;

/// An immutable field context. Cheap to share across threads.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
    lane_bits: u32,
    lane_mask: u128,
    order: u128,
    // p = 2: the full modulus as a bit pattern (including X^m)
    modulus_bits: u128,
    // odd p: -f_j for j < m, so X^m = sum neg_low[j] X^j
    neg_low: Vec<u32>,
    // odd p: X^(i p) mod f as coefficient vectors
    frob_images: Vec<Vec<u32>>,
    tables: Option<LogTables>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds F_{p^m}. With `modulus = None` the smallest monic irreducible of degree
    /// `m` (as a base-p integer, constant term least significant) is selected.
    pub fn new(p: u32, m: usize, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !fpoly::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let lane_bits = 32 - (p - 1).leading_zeros();
        if m == 0 || m > 64 || m as u32 * lane_bits > 128 {
            return Err(FieldError::Unsupported { p, m });
        }
        let modulus = match modulus {
            None => fpoly::find_irreducible(p, m),
            Some(f) => {
                if f.iter().any(|&c| c >= p) {
                    return Err(FieldError::Parse {
                        input: format!("{f:?}"),
                        reason: format!("coefficient out of range for F_{p}"),
                    });
                }
                let f = fpoly::trim(f);
                if fpoly::degree(&f) != Some(m) || f[m] != 1 {
                    return Err(FieldError::DegreeMismatch {
                        expected: m,
                        found: text::format_poly(&f),
                    });
                }
                if !fpoly::is_irreducible(&f, p) {
                    return Err(FieldError::Reducible(text::format_poly(&f)));
                }
                f
            }
        };
        let lane_mask = (1u128 << lane_bits) - 1;
        let order = (p as u128).pow(m as u32);
        let modulus_bits = if p == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i))
        } else {
            0
        };
        let neg_low = modulus[..m].iter().map(|&c| (p - c) % p).collect();
        let mut ctx = FieldCtx {
            p,
            m,
            modulus,
            lane_bits,
            lane_mask,
            order,
            modulus_bits,
            neg_low,
            frob_images: Vec::new(),
            tables: None,
        };
        if p != 2 {
            let xp = fpoly::powmod(&[0, 1], p as u128, &ctx.modulus, p);
            let mut cur = vec![1u32];
            let mut images = Vec::with_capacity(m);
            for _ in 0..m {
                let mut v = cur.clone();
                v.resize(m, 0);
                images.push(v);
                cur = fpoly::mulmod(&cur, &xp, &ctx.modulus, p);
            }
            ctx.frob_images = images;
        } else if m <= MAX_TABLE_DEGREE {
            ctx.tables = Some(ctx.build_log_tables());
        }
        Ok(ctx)
    }

    /// Builds a context from a modulus written as text (pretty or compact form).
    pub fn from_modulus_text(p: u32, text: &str) -> Result<Self> {
        let f = text::parse_poly(p, text)?;
        let m = fpoly::degree(&f).ok_or_else(|| FieldError::Parse {
            input: text.to_string(),
            reason: "zero modulus".into(),
        })?;
        Self::new(p, m, Some(f))
    }

    fn build_log_tables(&self) -> LogTables {
        let n = self.order as usize;
        let group = n - 1;
        for cand in 1..n as u64 {
            let g = Elem(cand as u128);
            let mut log = vec![u32::MAX; n];
            let mut exp = vec![0u64; 2 * group];
            let mut x = self.one();
            let mut ok = true;
            for i in 0..group {
                let xi = x.0 as usize;
                if log[xi] != u32::MAX {
                    ok = false;
                    break;
                }
                log[xi] = i as u32;
                exp[i] = x.0 as u64;
                exp[i + group] = x.0 as u64;
                x = self.mul_generic(x, g);
            }
            if ok && x == self.one() {
                return LogTables { log, exp };
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Order of the base field F_q (always p here).
    pub fn q(&self) -> u32 {
        self.p
    }

    /// Extension degree over the base field.
    pub fn n(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Ascending coefficients of the monic modulus, length m + 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_text(&self) -> String {
        text::format_poly(&self.modulus)
    }

    /// Number of field elements, p^m.
    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// The image of an F_p constant.
    pub fn constant(&self, c: u32) -> Elem {
        Elem((c % self.p) as u128)
    }

    /// The residue class of `X^i`.
    pub fn x_pow(&self, i: usize) -> Elem {
        if i < self.m {
            return Elem(1u128 << (i as u32 * self.lane_bits));
        }
        let x = self.from_coeffs_reduced(&[0, 1]);
        self.pow(x, i as u128)
    }

    /// Coordinate basis element `X^i` for `i < m`.
    pub fn basis_element(&self, i: usize) -> Elem {
        assert!(i < self.m);
        Elem(1u128 << (i as u32 * self.lane_bits))
    }

    #[inline]
    fn lane(&self, e: Elem, i: usize) -> u32 {
        ((e.0 >> (i as u32 * self.lane_bits)) & self.lane_mask) as u32
    }

    /// Coefficient of `X^i`.
    pub fn coeff(&self, e: Elem, i: usize) -> u32 {
        self.lane(e, i)
    }

    /// Coefficient vector of length m.
    pub fn coeffs(&self, e: Elem) -> Vec<u32> {
        (0..self.m).map(|i| self.lane(e, i)).collect()
    }

    fn pack(&self, c: &[u32]) -> Elem {
        let mut r = 0u128;
        for (i, &v) in c.iter().enumerate().take(self.m) {
            r |= (v as u128) << (i as u32 * self.lane_bits);
        }
        Elem(r)
    }

    /// Element from a coefficient vector of length at most m.
    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.m || c.iter().any(|&v| v >= self.p) {
            return Err(FieldError::CtxMismatch);
        }
        Ok(self.pack(c))
    }

    /// Element from an arbitrary polynomial over F_p, reduced modulo f.
    pub fn from_coeffs_reduced(&self, c: &[u32]) -> Elem {
        let c: Vec<u32> = c.iter().map(|&v| v % self.p).collect();
        let r = fpoly::rem(&c, &self.modulus, self.p);
        self.pack(&r)
    }

    /// Element whose coefficient vector is the base-p expansion of `index`.
    pub fn from_index(&self, mut index: u128) -> Elem {
        if self.p == 2 {
            return Elem(index & ((1u128 << self.m) - 1));
        }
        let mut c = vec![0u32; self.m];
        for v in c.iter_mut() {
            *v = (index % self.p as u128) as u32;
            index /= self.p as u128;
        }
        self.pack(&c)
    }

    pub fn index(&self, e: Elem) -> u128 {
        if self.p == 2 {
            return e.0;
        }
        (0..self.m)
            .rev()
            .fold(0u128, |acc, i| acc * self.p as u128 + self.lane(e, i) as u128)
    }

    /// Checks that `e` is a well-formed element of this field.
    pub fn check(&self, e: Elem) -> Result<()> {
        let used = self.m as u32 * self.lane_bits;
        if used < 128 && e.0 >> used != 0 {
            return Err(FieldError::CtxMismatch);
        }
        if self.p != 2 && (0..self.m).any(|i| self.lane(e, i) >= self.p) {
            return Err(FieldError::CtxMismatch);
        }
        Ok(())
    }

    /// Iterates all field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(move |i| self.from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        if self.p == 2 {
            let bits: u128 = rng.gen();
            return Elem(bits & ((1u128 << self.m) - 1));
        }
        let c: Vec<u32> = (0..self.m).map(|_| rng.gen_range(0..self.p)).collect();
        self.pack(&c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    // ---- additive structure ----

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p as u128;
        let mut r = 0u128;
        for i in 0..self.m {
            let sh = i as u32 * self.lane_bits;
            let mut s = ((a.0 >> sh) & self.lane_mask) + ((b.0 >> sh) & self.lane_mask);
            if s >= p {
                s -= p;
            }
            r |= s << sh;
        }
        Elem(r)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u128;
        let mut r = 0u128;
        for i in 0..self.m {
            let sh = i as u32 * self.lane_bits;
            let v = (a.0 >> sh) & self.lane_mask;
            if v != 0 {
                r |= (p - v) << sh;
            }
        }
        Elem(r)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Multiplies by an F_p scalar.
    pub fn scale(&self, a: Elem, c: u32) -> Elem {
        let c = c % self.p;
        match c {
            0 => Elem::ZERO,
            1 => a,
            _ => {
                let mut r = 0u128;
                for i in 0..self.m {
                    let sh = i as u32 * self.lane_bits;
                    let v = ((a.0 >> sh) & self.lane_mask) as u32;
                    r |= (fpoly::mul_mod(v, c, self.p) as u128) << sh;
                }
                Elem(r)
            }
        }
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    // ---- multiplicative structure ----

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.tables {
            if a.0 == 0 || b.0 == 0 {
                return Elem::ZERO;
            }
            let la = t.log[a.0 as usize] as usize;
            let lb = t.log[b.0 as usize] as usize;
            return Elem(t.exp[la + lb] as u128);
        }
        self.mul_generic(a, b)
    }

    fn mul_generic(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            let prod = clmul(a.0 as u64, b.0 as u64);
            return Elem(self.reduce_binary(prod));
        }
        self.mul_odd(a, b)
    }

    #[inline]
    fn reduce_binary(&self, mut x: u128) -> u128 {
        let m = self.m as u32;
        while x >> m != 0 {
            let top = 127 - x.leading_zeros();
            x ^= self.modulus_bits << (top - m);
        }
        x
    }

    fn mul_odd(&self, a: Elem, b: Elem) -> Elem {
        let m = self.m;
        let mut ca = [0u64; 64];
        let mut cb = [0u64; 64];
        for i in 0..m {
            ca[i] = self.lane(a, i) as u64;
            cb[i] = self.lane(b, i) as u64;
        }
        let mut acc = [0u64; 128];
        for i in 0..m {
            let x = ca[i];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                acc[i + j] += x * cb[j];
            }
        }
        let p = self.p as u64;
        for i in (m..2 * m - 1).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..m {
                acc[i - m + j] += c * self.neg_low[j] as u64;
            }
        }
        let mut r = 0u128;
        for (i, &v) in acc.iter().enumerate().take(m) {
            r |= ((v % p) as u128) << (i as u32 * self.lane_bits);
        }
        Elem(r)
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// `a^e` for any non-negative exponent, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u128) -> Elem {
        if e == 0 {
            return self.one();
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.tables {
            let group = (self.order - 1) as u128;
            let la = t.log[a.0 as usize] as u128;
            let idx = (la * (e % group)) % group;
            return Elem(t.exp[idx as usize] as u128);
        }
        let e = if self.order > 1 {
            // a^(order-1) = 1 for a != 0; keep e >= 1
            let g = self.order - 1;
            let r = e % g;
            if r == 0 {
                g
            } else {
                r
            }
        } else {
            e
        };
        let mut base = a;
        let mut acc = self.one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    #[inline]
    fn inv_nonzero(&self, a: Elem) -> Elem {
        if let Some(t) = &self.tables {
            let group = (self.order - 1) as usize;
            let la = t.log[a.0 as usize] as usize;
            return Elem(t.exp[(group - la) % group] as u128);
        }
        self.pow(a, self.order - 2)
    }

    /// `a^-1`, with `0 -> 0`.
    pub fn inv0(&self, a: Elem) -> Elem {
        if a.is_zero() {
            Elem::ZERO
        } else {
            self.inv_nonzero(a)
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    // ---- Frobenius, trace, subfields ----

    /// `a^q`.
    #[inline]
    pub fn frob(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return self.square(a);
        }
        let m = self.m;
        let p = self.p as u64;
        let mut acc = [0u64; 64];
        for i in 0..m {
            let c = self.lane(a, i) as u64;
            if c == 0 {
                continue;
            }
            for (j, &img) in self.frob_images[i].iter().enumerate() {
                acc[j] += c * img as u64;
            }
        }
        let mut r = 0u128;
        for (j, &v) in acc.iter().enumerate().take(m) {
            r |= ((v % p) as u128) << (j as u32 * self.lane_bits);
        }
        Elem(r)
    }

    /// `a^(q^i)`.
    pub fn frobenius(&self, a: Elem, i: usize) -> Elem {
        let mut x = a;
        for _ in 0..i % self.m {
            x = self.frob(x);
        }
        x
    }

    fn require_divisor(&self, d: usize) -> Result<()> {
        if d == 0 || self.m % d != 0 {
            return Err(FieldError::NotADivisor { d, m: self.m });
        }
        Ok(())
    }

    /// Relative trace onto the subfield F_{q^d}: `sum_j a^(q^(d j))`.
    pub fn trace(&self, a: Elem, d: usize) -> Result<Elem> {
        self.require_divisor(d)?;
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..self.m / d {
            acc = self.add(acc, x);
            for _ in 0..d {
                x = self.frob(x);
            }
        }
        debug_assert_eq!(self.frobenius(acc, d), acc);
        Ok(acc)
    }

    /// Absolute trace onto F_q, as an F_p value.
    pub fn abs_trace(&self, a: Elem) -> u32 {
        let t = self.trace(a, 1).expect("1 divides m");
        self.lane(t, 0)
    }

    /// True iff `a` lies in the subfield F_{q^d}.
    pub fn in_subfield(&self, a: Elem, d: usize) -> Result<bool> {
        self.require_divisor(d)?;
        Ok(self.frobenius(a, d) == a)
    }

    // ---- text ----

    /// Pretty form, e.g. `1 + X^2 + X^5`.
    pub fn format(&self, e: Elem) -> String {
        text::format_poly(&self.coeffs(e))
    }

    /// Compact form: space-separated ascending base-p digits, length m.
    pub fn format_compact(&self, e: Elem) -> String {
        self.coeffs(e)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the pretty form. Terms of degree >= m are reduced modulo f.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let c = text::parse_poly(self.p, s)?;
        Ok(self.from_coeffs_reduced(&c))
    }

    pub fn parse_compact(&self, s: &str) -> Result<Elem> {
        let c = text::parse_compact(self.p, s)?;
        if c.len() != self.m {
            return Err(FieldError::Parse {
                input: s.to_string(),
                reason: format!("expected {} digits, found {}", self.m, c.len()),
            });
        }
        self.from_coeffs(&c)
    }
}

/// Carry-less product of two 64-bit polynomials over F_2.
#[inline]
pub(crate) fn clmul(a: u64, b: u64) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    let a = a as u128;
    let mut tbl = [0u128; 16];
    for (i, t) in tbl.iter_mut().enumerate().skip(1) {
        let mut v = 0u128;
        for bit in 0..4 {
            if i >> bit & 1 == 1 {
                v ^= a << bit;
            }
        }
        *t = v;
    }
    let nibbles = (64 - b.leading_zeros()).div_ceil(4);
    let mut r = 0u128;
    for k in (0..nibbles).rev() {
        r = (r << 4) ^ tbl[((b >> (4 * k)) & 15) as usize];
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 2, Some(vec![1, 1, 1])).unwrap()
    }

    #[test]
    fn omega_squared_is_omega_plus_one() {
        let k = f4();
        let w = k.basis_element(1);
        assert_eq!(k.mul(w, w), k.add(w, k.one()));
    }

    #[test]
    fn inverse_of_one_and_zero() {
        let k = FieldCtx::new(2, 13, None).unwrap();
        assert_eq!(k.inv(k.one()).unwrap(), k.one());
        assert_eq!(k.inv(k.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(k.inv0(k.zero()), k.zero());
        assert_eq!(k.inv0(k.one()), k.one());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        let two = f3.constant(2);
        assert_eq!(f3.pow(two, 2), f3.one());
        assert_eq!(f3.inv0(two), two);
        let f2 = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.order(), 2);
        assert_eq!(f2.mul(f2.one(), f2.one()), f2.one());
        assert_eq!(f2.trace(f2.one(), 1).unwrap(), f2.one());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 2, None).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(2, 4, Some(vec![1, 0, 0, 0, 1])),
            Err(FieldError::Reducible(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 3, Some(vec![1, 1, 1])),
            Err(FieldError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn reference_moduli_are_accepted() {
        let k13 = FieldCtx::from_modulus_text(2, "X^{13}+X^{12}+X^{11}+X^8+1").unwrap();
        assert_eq!(k13.n(), 13);
        assert_eq!(k13.modulus_text(), "1 + X^8 + X^11 + X^12 + X^13");
        let k21 = FieldCtx::from_modulus_text(2, "X^21 + X^19 + 1").unwrap();
        assert_eq!(k21.n(), 21);
    }

    #[test]
    fn default_modulus_is_deterministic() {
        let a = FieldCtx::new(5, 7, None).unwrap();
        let b = FieldCtx::new(5, 7, None).unwrap();
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn trace_of_omega() {
        let k = f4();
        let w = k.basis_element(1);
        assert_eq!(k.trace(w, 1).unwrap(), k.one());
        assert_eq!(k.trace(k.zero(), 1).unwrap(), k.zero());
        assert_eq!(k.trace(w, 3), Err(FieldError::NotADivisor { d: 3, m: 2 }));
    }

    #[test]
    fn trace_balanced_on_f16() {
        let k = FieldCtx::new(2, 4, None).unwrap();
        let ones = k.elements().filter(|&a| k.abs_trace(a) == 1).count();
        assert_eq!(ones, 8);
    }

    #[test]
    fn omega_not_in_prime_subfield() {
        let k = FieldCtx::new(2, 4, None).unwrap();
        // a cube root of unity generates F_4 inside F_16
        let g = k.elements().find(|&a| a != k.one() && !a.is_zero() && k.pow(a, 3) == k.one()).unwrap();
        assert!(!k.in_subfield(g, 1).unwrap());
        assert!(k.in_subfield(g, 2).unwrap());
        assert!(k.in_subfield(k.one(), 1).unwrap());
    }

    #[test]
    fn tables_agree_with_generic_multiplication() {
        let k = FieldCtx::new(2, 8, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let a = k.random(&mut rng);
            let b = k.random(&mut rng);
            assert_eq!(k.mul(a, b), k.mul_generic(a, b));
        }
    }

    #[test]
    fn index_roundtrip_and_text_forms() {
        let k = FieldCtx::new(3, 4, None).unwrap();
        for i in 0..81u128 {
            let e = k.from_index(i);
            assert_eq!(k.index(e), i);
            assert_eq!(k.parse(&k.format(e)).unwrap(), e);
            assert_eq!(k.parse_compact(&k.format_compact(e)).unwrap(), e);
        }
        assert!(k.check(Elem(3)).is_err());
    }
}
