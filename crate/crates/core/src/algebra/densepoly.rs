//! Dense univariate polynomials over a small coded field.
//!
//! Only used while constructing a [`FieldCtx`](super::FieldCtx): scanning for
//! the lexicographically least monic irreducible modulus and bootstrapping the
//! exp/log tables. Coefficients are field codes (`u32`), arithmetic is
//! delegated to a [`CoeffOps`] implementation.

pub trait CoeffOps {
    /// Number of field elements; codes run over `0..order`.
    fn order(&self) -> u64;
    fn add(&self, x: u32, y: u32) -> u32;
    fn sub(&self, x: u32, y: u32) -> u32;
    fn mul(&self, x: u32, y: u32) -> u32;
    /// Multiplicative inverse of a nonzero code.
    fn inv(&self, x: u32) -> u32;
}

/// The prime field F_p on codes 0..p.
pub struct PrimeOps {
    pub p: u32,
}

impl CoeffOps for PrimeOps {
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn add(&self, x: u32, y: u32) -> u32 {
        (x + y) % self.p
    }
    fn sub(&self, x: u32, y: u32) -> u32 {
        (x + self.p - y) % self.p
    }
    fn mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 * y as u64) % self.p as u64) as u32
    }
    fn inv(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        // Fermat: x^(p-2); p is small so the loop is fine.
        let mut acc = 1u32;
        for _ in 0..self.p - 2 {
            acc = self.mul(acc, x);
        }
        acc
    }
}

/// Trailing zero coefficients stripped; empty vec is the zero polynomial.
pub fn normalize(coeffs: &mut Vec<u32>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

pub fn deg(coeffs: &[u32]) -> Option<usize> {
    if coeffs.is_empty() {
        None
    } else {
        Some(coeffs.len() - 1)
    }
}

pub fn mul<F: CoeffOps>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    normalize(&mut out);
    out
}

/// Remainder of `a` modulo a monic `modulus` (leading coefficient 1).
pub fn rem_monic<F: CoeffOps>(f: &F, a: &[u32], modulus: &[u32]) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut r = a.to_vec();
    normalize(&mut r);
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for (j, &mc) in modulus.iter().enumerate() {
                let idx = shift + j;
                r[idx] = f.sub(r[idx], f.mul(lead, mc));
            }
        }
        r.pop();
        normalize(&mut r);
    }
    r
}

/// Remainder of `a` modulo an arbitrary nonzero `b`.
pub fn rem<F: CoeffOps>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let db = deg(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]);
    let mut r = a.to_vec();
    normalize(&mut r);
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            let c = f.mul(lead, lead_inv);
            for (j, &bc) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = f.sub(r[idx], f.mul(c, bc));
            }
        }
        r.pop();
        normalize(&mut r);
    }
    r
}

/// Decode the big-endian coefficient scan index into a monic polynomial.
///
/// Index digit order matches the lexicographic order on the coefficient
/// sequence (c0, c1, ..., c_{d-1}), c0 compared first.
pub fn monic_from_scan_index(index: u64, degree: usize, order: u64) -> Vec<u32> {
    let mut coeffs = vec![0u32; degree + 1];
    coeffs[degree] = 1;
    let mut rest = index;
    for slot in (0..degree).rev() {
        // slot runs c_{d-1} down to c_0: c_0 gets the most significant digit
        coeffs[degree - 1 - slot] = (rest / order.pow(slot as u32)) as u32 % order as u32;
        rest %= order.pow(slot as u32);
    }
    coeffs
}

/// Exhaustive trial division: no monic factor of degree 1..=d/2.
pub fn is_irreducible<F: CoeffOps>(f: &F, poly: &[u32]) -> bool {
    let d = deg(poly).expect("zero polynomial");
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false; // divisible by x
    }
    for fd in 1..=d / 2 {
        let count = f.order().pow(fd as u32);
        for idx in 0..count {
            let cand = monic_from_scan_index(idx, fd, f.order());
            if rem(f, poly, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of the given degree in coefficient-lex order.
pub fn least_monic_irreducible<F: CoeffOps>(f: &F, degree: usize) -> Vec<u32> {
    let count = f.order().checked_pow(degree as u32).expect("scan overflow");
    for idx in 0..count {
        let cand = monic_from_scan_index(idx, degree, f.order());
        if is_irreducible(f, &cand) {
            return cand;
        }
    }
    unreachable!("a monic irreducible of every degree exists over a finite field")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_index_is_coefficient_lex() {
        // degree 3 over F_2: index 5 -> (c0,c1,c2) = (1,0,1)
        let p = monic_from_scan_index(5, 3, 2);
        assert_eq!(p, vec![1, 0, 1, 1]);
        let p = monic_from_scan_index(0, 3, 2);
        assert_eq!(p, vec![0, 0, 0, 1]);
    }

    #[test]
    fn least_irreducible_cubic_over_f2() {
        // x^3 + x^2 + 1: earlier candidates all have a root or a zero constant term
        let f = PrimeOps { p: 2 };
        assert_eq!(least_monic_irreducible(&f, 3), vec![1, 0, 1, 1]);
    }

    #[test]
    fn least_irreducible_cubic_over_f3() {
        // x^3 + 2x^2 + 1
        let f = PrimeOps { p: 3 };
        assert_eq!(least_monic_irreducible(&f, 3), vec![1, 0, 2, 1]);
    }

    #[test]
    fn rem_by_monic_matches_general_rem() {
        let f = PrimeOps { p: 5 };
        let a = vec![3, 1, 4, 1, 2, 4];
        let m = vec![2, 0, 1, 1]; // monic cubic
        assert_eq!(rem_monic(&f, &a, &m), rem(&f, &a, &m));
    }
}
