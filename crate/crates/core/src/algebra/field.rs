//! The two-step field tower F_p ⊂ F_ell ⊂ F_{ell^k} with ell = q^3, q = p^m.
//!
//! Elements are stored as a single code, the little-endian radix-p value of
//! their coefficient vector: code = sum f_{i,j} p^(3m*i + j) where (f_{i,0},
//! ..., f_{i,3m-1}) are the F_p-coordinates of the i-th F_ell-coordinate.
//! Constants of F_ell therefore embed by padding (codes below ell), and the
//! canonical element order is simply ascending code.
//!
//! Multiplication, inversion, powers and Frobenius go through exp/log tables
//! built once per context; addition is digit arithmetic on codes. Everything
//! is exact and deterministic: moduli are the lexicographically least monic
//! irreducibles, the table generator is the least element of full
//! multiplicative order.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use super::densepoly::{self, CoeffOps, PrimeOps};
use crate::error::{Error, Result};

/// Hard cap on |F_{ell^k}|: 3^12.
pub const SIZE_CAP: u64 = 531_441;

static CTX_IDS: AtomicU32 = AtomicU32::new(1);

/// An element of F_{ell^k}, tagged with the id of its owning context.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Element {
    ctx: u32,
    code: u32,
}

impl Element {
    /// The canonical code (position in enumeration order).
    pub fn code(self) -> u64 {
        self.code as u64
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

struct Tables {
    order: u64,
    /// exp[i] = code of g^i for 0 <= i < order-1
    exp: Vec<u32>,
    /// log[code] for nonzero codes; log[0] is a sentinel
    log: Vec<u32>,
}

impl Tables {
    fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.order - 1;
        let s = (self.log[x as usize] as u64 + self.log[y as usize] as u64) % n;
        self.exp[s as usize]
    }

    fn inv(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        let n = self.order - 1;
        let s = (n - self.log[x as usize] as u64) % n;
        self.exp[s as usize]
    }

    fn pow(&self, x: u32, e: u64) -> u32 {
        if x == 0 {
            return if e == 0 { self.exp[0] } else { 0 };
        }
        let n = self.order - 1;
        let s = (self.log[x as usize] as u128 * (e % n) as u128 % n as u128) as u64;
        self.exp[s as usize]
    }
}

/// Digit-wise addition of two radix-p codes.
fn digit_add(p: u32, mut x: u32, mut y: u32) -> u32 {
    if p == 2 {
        return x ^ y;
    }
    let mut out = 0u32;
    let mut base = 1u32;
    while x != 0 || y != 0 {
        out += (x % p + y % p) % p * base;
        x /= p;
        y /= p;
        base *= p;
    }
    out
}

fn digit_neg(p: u32, mut x: u32) -> u32 {
    if p == 2 {
        return x;
    }
    let mut out = 0u32;
    let mut base = 1u32;
    while x != 0 {
        let d = x % p;
        if d != 0 {
            out += (p - d) * base;
        }
        x /= p;
        base *= p;
    }
    out
}

/// CoeffOps view of F_ell used while scanning for the outer modulus.
struct InnerOps<'a> {
    p: u32,
    t: &'a Tables,
}

impl CoeffOps for InnerOps<'_> {
    fn order(&self) -> u64 {
        self.t.order
    }
    fn add(&self, x: u32, y: u32) -> u32 {
        digit_add(self.p, x, y)
    }
    fn sub(&self, x: u32, y: u32) -> u32 {
        digit_add(self.p, x, digit_neg(self.p, y))
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        self.t.mul(x, y)
    }
    fn inv(&self, x: u32) -> u32 {
        self.t.inv(x)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Build exp/log tables for a field of the given order, where `mul` is an
/// exact multiplication on codes. The generator is the least code of full
/// multiplicative order.
fn build_tables(order: u64, mul: impl Fn(u32, u32) -> u32) -> Tables {
    let n = order - 1;
    let factors = prime_factors(n);
    let pow = |x: u32, mut e: u64| -> u32 {
        let mut base = x;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let g = (2..order as u32)
        .find(|&g| factors.iter().all(|&r| pow(g, n / r) != 1))
        .unwrap_or(1); // order 2: the only nonzero element is 1
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; order as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp[i as usize] = x;
        log[x as usize] = i as u32;
        x = mul(x, g);
    }
    debug_assert_eq!(x, 1, "generator order mismatch");
    Tables { order, exp, log }
}

struct CtxInner {
    id: u32,
    p: u32,
    m: u32,
    k: u32,
    q: u64,
    ell: u64,
    size: u64,
    /// Monic irreducible of degree 3m over F_p, coefficients (c0..c_{3m-1}, 1).
    inner_modulus: Vec<u32>,
    /// Monic irreducible of degree k over F_ell, coefficients as F_ell codes.
    outer_modulus: Vec<u32>,
    inner: Tables,
    outer: Tables,
}

/// Context handle for a concrete F_p ⊂ F_ell ⊂ F_{ell^k}. Cheap to clone.
#[derive(Clone)]
pub struct FieldCtx(Arc<CtxInner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for FieldCtx {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Construct the field tower for the given (p, m, k).
    ///
    /// Both moduli are the lexicographically least monic irreducibles of
    /// their degree, found by exhaustive scan, so the same parameters always
    /// produce the same field.
    pub fn new(p: u32, m: u32, k: u32) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::BadFieldParam("m >= 1 required".into()));
        }
        if k < 1 {
            return Err(Error::BadFieldParam("k >= 1 required".into()));
        }
        let size128 = (p as u128)
            .checked_pow(3 * m * k)
            .ok_or(Error::SizeCapExceeded {
                size: u128::MAX,
                cap: SIZE_CAP,
            })?;
        if size128 > SIZE_CAP as u128 {
            return Err(Error::SizeCapExceeded {
                size: size128,
                cap: SIZE_CAP,
            });
        }
        let size = size128 as u64;
        let q = (p as u64).pow(m);
        let ell = q.pow(3);
        // mu_{q-1} lives in F_ell and in every extension of it
        debug_assert!((ell - 1) % (q - 1).max(1) == 0);
        debug_assert!((size - 1) % (q - 1).max(1) == 0);

        // F_ell = F_p[t]/(inner_modulus)
        let fp = PrimeOps { p };
        let inner_modulus = densepoly::least_monic_irreducible(&fp, (3 * m) as usize);
        let inner_mul = |x: u32, y: u32| -> u32 {
            let xv = code_digits(p, x, (3 * m) as usize);
            let yv = code_digits(p, y, (3 * m) as usize);
            let prod = densepoly::rem_monic(&fp, &densepoly::mul(&fp, &xv, &yv), &inner_modulus);
            digits_code(p, &prod)
        };
        let inner = build_tables(ell, inner_mul);

        // F_{ell^k} = F_ell[u]/(outer_modulus)
        let iops = InnerOps { p, t: &inner };
        let outer_modulus = densepoly::least_monic_irreducible(&iops, k as usize);
        let outer_mul = |x: u32, y: u32| -> u32 {
            let xv = code_digits(ell as u32, x, k as usize);
            let yv = code_digits(ell as u32, y, k as usize);
            let prod =
                densepoly::rem_monic(&iops, &densepoly::mul(&iops, &xv, &yv), &outer_modulus);
            digits_code(ell as u32, &prod)
        };
        let outer = build_tables(size, outer_mul);

        Ok(FieldCtx(Arc::new(CtxInner {
            id: CTX_IDS.fetch_add(1, Ordering::Relaxed),
            p,
            m,
            k,
            q,
            ell,
            size,
            inner_modulus,
            outer_modulus,
            inner,
            outer,
        })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    /// q = p^m
    pub fn q(&self) -> u64 {
        self.0.q
    }
    /// ell = q^3
    pub fn ell(&self) -> u64 {
        self.0.ell
    }
    /// |F_{ell^k}|
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Coefficients (c0, ..., c_{3m-1}) of the monic inner modulus.
    pub fn inner_modulus(&self) -> &[u32] {
        &self.0.inner_modulus[..self.0.inner_modulus.len() - 1]
    }

    /// Coefficients of the monic outer modulus, as F_ell codes.
    pub fn outer_modulus(&self) -> &[u32] {
        &self.0.outer_modulus[..self.0.outer_modulus.len() - 1]
    }

    /// Re-run the exhaustive irreducibility scans on both stored moduli.
    pub fn verify_moduli(&self) -> bool {
        let fp = PrimeOps { p: self.0.p };
        let iops = InnerOps {
            p: self.0.p,
            t: &self.0.inner,
        };
        densepoly::is_irreducible(&fp, &self.0.inner_modulus)
            && densepoly::is_irreducible(&iops, &self.0.outer_modulus)
    }

    fn guard(&self, x: Element) -> Result<()> {
        if x.ctx != self.0.id {
            Err(Error::CtxMismatch)
        } else {
            Ok(())
        }
    }

    fn el(&self, code: u32) -> Element {
        Element {
            ctx: self.0.id,
            code,
        }
    }

    pub fn zero(&self) -> Element {
        self.el(0)
    }

    pub fn one(&self) -> Element {
        self.el(1)
    }

    /// The image of an integer under Z -> F_p ⊂ F_{ell^k}.
    pub fn from_int(&self, i: i64) -> Element {
        let p = self.0.p as i64;
        self.el(i.rem_euclid(p) as u32)
    }

    pub fn element_from_code(&self, code: u64) -> Result<Element> {
        if code >= self.0.size {
            return Err(Error::BadElementCode(code));
        }
        Ok(self.el(code as u32))
    }

    /// Nested coefficient view: k outer coordinates, each 3m integers mod p.
    pub fn coeffs(&self, x: Element) -> Vec<Vec<u32>> {
        let d = (3 * self.0.m) as usize;
        code_digits(self.0.ell as u32, x.code, self.0.k as usize)
            .into_iter()
            .map(|c| code_digits(self.0.p, c, d))
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[Vec<u32>]) -> Result<Element> {
        if coeffs.len() != self.0.k as usize {
            return Err(Error::BadCoefficients(format!(
                "expected {} outer coordinates, got {}",
                self.0.k,
                coeffs.len()
            )));
        }
        let d = (3 * self.0.m) as usize;
        let mut outer = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.len() != d || c.iter().any(|&f| f >= self.0.p) {
                return Err(Error::BadCoefficients(format!(
                    "each coordinate must be {} integers below {}",
                    d, self.0.p
                )));
            }
            outer.push(digits_code(self.0.p, c));
        }
        Ok(self.el(digits_code(self.0.ell as u32, &outer)))
    }

    pub fn add(&self, x: Element, y: Element) -> Element {
        debug_assert_eq!(x.ctx, self.0.id);
        debug_assert_eq!(y.ctx, self.0.id);
        self.el(digit_add(self.0.p, x.code, y.code))
    }

    pub fn neg(&self, x: Element) -> Element {
        debug_assert_eq!(x.ctx, self.0.id);
        self.el(digit_neg(self.0.p, x.code))
    }

    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        debug_assert_eq!(x.ctx, self.0.id);
        debug_assert_eq!(y.ctx, self.0.id);
        self.el(self.0.outer.mul(x.code, y.code))
    }

    pub fn inv(&self, x: Element) -> Result<Element> {
        self.guard(x)?;
        if x.code == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.el(self.0.outer.inv(x.code)))
    }

    pub fn div(&self, x: Element, y: Element) -> Result<Element> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e for a nonnegative integer e (0^0 = 1).
    pub fn pow(&self, x: Element, e: u64) -> Element {
        debug_assert_eq!(x.ctx, self.0.id);
        self.el(self.0.outer.pow(x.code, e))
    }

    /// The p-power Frobenius x -> x^p.
    pub fn frobenius(&self, x: Element) -> Element {
        self.pow(x, self.0.p as u64)
    }

    /// Checked arithmetic for boundary code: verifies context tags.
    pub fn try_add(&self, x: Element, y: Element) -> Result<Element> {
        self.guard(x)?;
        self.guard(y)?;
        Ok(self.add(x, y))
    }

    pub fn try_sub(&self, x: Element, y: Element) -> Result<Element> {
        self.guard(x)?;
        self.guard(y)?;
        Ok(self.sub(x, y))
    }

    pub fn try_mul(&self, x: Element, y: Element) -> Result<Element> {
        self.guard(x)?;
        self.guard(y)?;
        Ok(self.mul(x, y))
    }

    pub fn try_inv(&self, x: Element) -> Result<Element> {
        self.inv(x)
    }

    /// All field elements in canonical order: ascending code, zero first.
    pub fn enumerate(&self) -> impl Iterator<Item = Element> + '_ {
        let id = self.0.id;
        (0..self.0.size).map(move |c| Element {
            ctx: id,
            code: c as u32,
        })
    }

    /// The r-th roots of unity, in canonical order. r must divide the
    /// multiplicative group order.
    pub fn roots_of_unity(&self, r: u64) -> Result<Vec<Element>> {
        let n = self.0.size - 1;
        if r == 0 || !n.is_multiple_of(r) {
            return Err(Error::RootOrderNotDivisor { r, order: n });
        }
        let step = n / r;
        let mut out: Vec<Element> = (0..r)
            .map(|j| self.el(self.0.outer.exp[(j * step) as usize]))
            .collect();
        out.sort();
        Ok(out)
    }

    /// All x with x^r = rhs, in canonical order.
    ///
    /// For rhs = 0 the unique solution is 0. Otherwise the set is empty or
    /// has exactly gcd(r, |F*|) elements and is closed under multiplication
    /// by the corresponding roots of unity.
    pub fn kummer_solve(&self, r: u64, rhs: Element) -> Result<Vec<Element>> {
        self.guard(rhs)?;
        if r == 0 {
            return Err(Error::RootOrderNotDivisor {
                r,
                order: self.0.size - 1,
            });
        }
        if rhs.code == 0 {
            return Ok(vec![self.zero()]);
        }
        let n = self.0.size - 1;
        let g = gcd(r % n, n);
        let g = if g == 0 { n } else { g };
        let target = self.0.outer.log[rhs.code as usize] as u64;
        if !target.is_multiple_of(g) {
            return Ok(Vec::new()); // rhs^(n/g) != 1: no r-th roots
        }
        // solve r*t = target (mod n): t0 = (target/g) * (r/g)^-1 (mod n/g)
        let nn = n / g;
        let rr = (r % n) / g;
        let t0 = if nn == 1 {
            0
        } else {
            (target / g) % nn * mod_inverse(rr % nn, nn) % nn
        };
        let mut out: Vec<Element> = (0..g)
            .map(|j| self.el(self.0.outer.exp[((t0 + j * nn) % n) as usize]))
            .collect();
        out.sort();
        Ok(out)
    }

    /// All y with v*y^q + y = w, by F_p-linear algebra on the additive map
    /// y -> v*y^q + y (a 3mk-dimensional matrix over F_p).
    ///
    /// The solution set is empty or a coset of the map's kernel, whose size
    /// is a power of p.
    pub fn additive_affine_solve(&self, v: Element, w: Element, q: u64) -> Result<Vec<Element>> {
        self.guard(v)?;
        self.guard(w)?;
        if q != self.0.q {
            return Err(Error::QMismatch {
                given: q,
                expected: self.0.q,
            });
        }
        let p = self.0.p;
        let d = (3 * self.0.m * self.0.k) as usize;
        // columns of the matrix: images of the code basis p^j
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(d);
        for j in 0..d {
            let basis = self.el(p.pow(j as u32));
            let image = self.add(self.mul(v, self.pow(basis, q)), basis);
            cols.push(code_digits(p, image.code, d));
        }
        let rhs = code_digits(p, w.code, d);
        let sols = solve_fp_affine(p, d, &cols, &rhs);
        Ok(sols
            .into_iter()
            .map(|digits| self.el(digits_code(p, &digits)))
            .collect())
    }
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FieldCtx(p={}, m={}, k={}, size={})",
            self.0.p, self.0.m, self.0.k, self.0.size
        )
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 {
        b
    } else {
        gcd(b % a, a)
    }
}

/// Inverse of a modulo n, for gcd(a, n) = 1.
fn mod_inverse(a: u64, n: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, a as i128);
    while new_r != 0 {
        let qt = r / new_r;
        (t, new_t) = (new_t, t - qt * new_t);
        (r, new_r) = (new_r, r - qt * new_r);
    }
    debug_assert_eq!(r, 1, "not invertible");
    t.rem_euclid(n as i128) as u64
}

/// Little-endian radix-`base` digits of `code`, padded to `len`.
fn code_digits(base: u32, mut code: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = code % base;
        code /= base;
    }
    debug_assert_eq!(code, 0, "code out of range");
    out
}

fn digits_code(base: u32, digits: &[u32]) -> u32 {
    let mut out = 0u64;
    for &d in digits.iter().rev() {
        out = out * base as u64 + d as u64;
    }
    out as u32
}

/// Solve M*x = rhs over F_p where M is given by columns; returns every
/// solution vector (possibly empty), in ascending code order.
fn solve_fp_affine(p: u32, d: usize, cols: &[Vec<u32>], rhs: &[u32]) -> Vec<Vec<u32>> {
    let fp = PrimeOps { p };
    // rows of the augmented matrix [M | rhs]
    let mut rows: Vec<Vec<u32>> = (0..d)
        .map(|i| {
            let mut row: Vec<u32> = (0..d).map(|j| cols[j][i]).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0usize;
    for c in 0..d {
        if let Some(pr) = (r..d).find(|&i| rows[i][c] != 0) {
            rows.swap(r, pr);
            let inv = fp.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = fp.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                        *x = fp.sub(*x, fp.mul(f, pv));
                    }
                }
            }
            pivot_col_of_row.push(c);
            r += 1;
        }
    }
    // consistency: a zero row with nonzero rhs means no solution
    for row in &rows[r..d] {
        if row[d] != 0 {
            return Vec::new();
        }
    }
    let free_cols: Vec<usize> = (0..d).filter(|c| !pivot_col_of_row.contains(c)).collect();
    // particular solution: free vars zero
    let mut particular = vec![0u32; d];
    for (row, &pc) in pivot_col_of_row.iter().enumerate() {
        particular[pc] = rows[row][d];
    }
    // kernel basis: one vector per free column
    let mut kernel: Vec<Vec<u32>> = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![0u32; d];
        v[fc] = 1;
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = fp.sub(0, rows[row][fc]);
        }
        kernel.push(v);
    }
    // enumerate the coset particular + span(kernel)
    let mut out = Vec::new();
    let combos = (p as u64).pow(kernel.len() as u32);
    for mut idx in 0..combos {
        let mut sol = particular.clone();
        for kv in &kernel {
            let c = (idx % p as u64) as u32;
            idx /= p as u64;
            if c != 0 {
                for (s, &k) in sol.iter_mut().zip(kv.iter()) {
                    *s = fp.add(*s, fp.mul(c, k));
                }
            }
        }
        out.push(sol);
    }
    out.sort_by_key(|digits| digits_code(p, digits));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f8_modulus_and_order() {
        let f = FieldCtx::new(2, 1, 1).unwrap();
        assert_eq!(f.size(), 8);
        // t^3 + t^2 + 1
        assert_eq!(f.inner_modulus(), &[1, 0, 1]);
        let els: Vec<u64> = f.enumerate().map(|e| e.code()).collect();
        assert_eq!(&els[..3], &[0, 1, 2]); // 0, 1, t
    }

    #[test]
    fn f27_modulus() {
        let f = FieldCtx::new(3, 1, 1).unwrap();
        assert_eq!(f.size(), 27);
        // t^3 + 2t^2 + 1
        assert_eq!(f.inner_modulus(), &[1, 0, 2]);
    }

    #[test]
    fn k_zero_is_rejected() {
        assert!(matches!(
            FieldCtx::new(2, 1, 0),
            Err(Error::BadFieldParam(_))
        ));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(FieldCtx::new(6, 1, 1), Err(Error::NotPrime(6))));
    }

    #[test]
    fn size_cap_enforced() {
        assert!(matches!(
            FieldCtx::new(3, 1, 13),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn f8_inverse_of_t() {
        // with t^3 = t^2 + 1: t * (t^2 + t) = 1
        let f = FieldCtx::new(2, 1, 1).unwrap();
        let t = f.element_from_code(2).unwrap();
        let expect = f.element_from_code(6).unwrap(); // t^2 + t
        assert_eq!(f.inv(t).unwrap(), expect);
        assert_eq!(f.inv(f.one()).unwrap(), f.one());
        assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn pow_group_order_is_one() {
        let f = FieldCtx::new(2, 1, 1).unwrap();
        for x in f.enumerate().skip(1) {
            assert_eq!(f.pow(x, f.size() - 1), f.one());
        }
    }

    #[test]
    fn frobenius_is_additive_on_f8() {
        let f = FieldCtx::new(2, 1, 1).unwrap();
        for x in f.enumerate() {
            for y in f.enumerate() {
                assert_eq!(
                    f.frobenius(f.add(x, y)),
                    f.add(f.frobenius(x), f.frobenius(y))
                );
            }
        }
    }

    #[test]
    fn frobenius_orbit_closes() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let iters = 3 * f.m() * f.k();
        for x in f.enumerate() {
            let mut y = x;
            for _ in 0..iters {
                y = f.frobenius(y);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn roots_of_unity_examples() {
        let f27 = FieldCtx::new(3, 1, 1).unwrap();
        let mu2: Vec<u64> = f27
            .roots_of_unity(2)
            .unwrap()
            .iter()
            .map(|e| e.code())
            .collect();
        assert_eq!(mu2, vec![1, 2]); // 1 and -1

        let f8 = FieldCtx::new(2, 1, 1).unwrap();
        assert_eq!(f8.roots_of_unity(1).unwrap(), vec![f8.one()]);
        assert_eq!(f8.roots_of_unity(7).unwrap().len(), 7);
        assert!(f8.roots_of_unity(3).is_err());
    }

    #[test]
    fn kummer_square_roots_in_f27() {
        let f = FieldCtx::new(3, 1, 1).unwrap();
        let sols = f.kummer_solve(2, f.one()).unwrap();
        let codes: Vec<u64> = sols.iter().map(|e| e.code()).collect();
        assert_eq!(codes, vec![1, 2]);
        assert_eq!(f.kummer_solve(2, f.zero()).unwrap(), vec![f.zero()]);
        // a non-square: certified by rhs^13 != 1
        let non_square = f
            .enumerate()
            .skip(1)
            .find(|&x| f.pow(x, 13) != f.one())
            .unwrap();
        assert!(f.kummer_solve(2, non_square).unwrap().is_empty());
    }

    #[test]
    fn additive_solver_examples() {
        // v = 0: affine-linear, unique solution w
        let f8 = FieldCtx::new(2, 1, 1).unwrap();
        let w = f8.element_from_code(5).unwrap();
        assert_eq!(f8.additive_affine_solve(f8.zero(), w, 2).unwrap(), vec![w]);
        // y^2 + y = 1 has no solution in F_8 (trace obstruction)
        assert!(f8
            .additive_affine_solve(f8.one(), f8.one(), 2)
            .unwrap()
            .is_empty());
        // ... and exactly 2 solutions in F_64
        let f64 = FieldCtx::new(2, 1, 2).unwrap();
        let sols = f64.additive_affine_solve(f64.one(), f64.one(), 2).unwrap();
        assert_eq!(sols.len(), 2);
        for y in sols {
            assert_eq!(f64.add(f64.mul(f64.one(), f64.pow(y, 2)), y), f64.one());
        }
        // q mismatch is an error
        assert!(f8.additive_affine_solve(f8.one(), f8.one(), 4).is_err());
    }

    #[test]
    fn ctx_mismatch_detected() {
        let f = FieldCtx::new(2, 1, 1).unwrap();
        let g = FieldCtx::new(2, 1, 1).unwrap();
        let x = f.one();
        let y = g.one();
        assert!(matches!(f.try_add(x, y), Err(Error::CtxMismatch)));
        assert!(f.try_add(x, f.one()).is_ok());
    }

    #[test]
    fn coeff_round_trip() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        for x in f.enumerate() {
            let c = f.coeffs(x);
            assert_eq!(c.len(), 2);
            assert_eq!(c[0].len(), 3);
            assert_eq!(f.from_coeffs(&c).unwrap(), x);
        }
    }

    #[test]
    fn moduli_reverify() {
        for (p, m, k) in [(2, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 1), (5, 1, 1)] {
            let f = FieldCtx::new(p, m, k).unwrap();
            assert!(f.verify_moduli(), "moduli of ({p},{m},{k})");
        }
    }
}
