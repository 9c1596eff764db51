//! Table-driven arithmetic for the finite field GF(q), q = p^e ≤ 2^16.
//!
//! Elements are encoded as integers in `0..q`: the base-p digit vector of the
//! polynomial representative, little-endian (digit i is the coefficient of
//! x^i). Zero encodes as 0 and one as 1, so the prime subfield occupies the
//! encodings `0..p`. Multiplication and inversion go through exp/log tables
//! built once per field from a fixed generator, trading O(q) memory for O(1)
//! operations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported field order. A table-size guard, not an algorithmic limit.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfError {
    /// The requested order has two or more distinct prime factors, or is < 2,
    /// or exceeds [`MAX_ORDER`].
    NotAPrimePower { q: u64 },
    DivisionByZero,
    /// An encoding outside `0..q` was supplied.
    OutOfRange { value: u64, q: u32 },
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::NotAPrimePower { q } => write!(f, "{q} is not a prime power in 2..=2^16"),
            GfError::DivisionByZero => write!(f, "division by zero field element"),
            GfError::OutOfRange { value, q } => {
                write!(f, "encoding {value} is out of range for GF({q})")
            }
        }
    }
}

impl core::error::Error for GfError {}

/// An element of some GF(q), stored by its integer encoding.
///
/// Elements carry no field reference; all arithmetic happens through the
/// owning [`Gf`]. Mixing elements of different fields is a caller bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(q) with its reduction polynomial and multiplication tables.
///
/// Immutable after construction; every operation is pure, so a shared
/// reference can be used from any number of threads.
#[derive(Clone)]
pub struct Gf {
    p: u32,
    e: u32,
    q: u32,
    /// Monic irreducible of degree e over GF(p); little-endian, length e+1.
    reduction_poly: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1); doubled so log sums need no reduction.
    exp: Vec<u16>,
    /// log[v] for v in 1..q; log[0] is a sentinel.
    log: Vec<u16>,
    generator: u16,
}

const LOG_SENTINEL: u16 = u16::MAX;

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.reduction_poly == other.reduction_poly
    }
}

impl Eq for Gf {}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl Gf {
    /// Builds GF(q) with the lexicographically smallest monic irreducible
    /// reduction polynomial of degree e (coefficients compared constant term
    /// first). Deterministic: two calls with the same q yield identical
    /// tables.
    pub fn new(q: u64) -> Result<Gf, GfError> {
        if q < 2 || q > MAX_ORDER as u64 {
            return Err(GfError::NotAPrimePower { q });
        }
        let q = q as u32;
        let (p, e) = factor_prime_power(q).ok_or(GfError::NotAPrimePower { q: q as u64 })?;
        let reduction_poly = smallest_irreducible(p, e);
        let mut field = Gf {
            p,
            e,
            q,
            reduction_poly,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        field.build_tables();
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Little-endian coefficients of the reduction polynomial, length e+1.
    pub fn reduction_poly(&self) -> &[u32] {
        &self.reduction_poly
    }

    pub fn generator(&self) -> Elem {
        Elem(self.generator)
    }

    /// Checked construction of an element from its integer encoding.
    pub fn elem(&self, value: u64) -> Result<Elem, GfError> {
        if value < self.q as u64 {
            Ok(Elem(value as u16))
        } else {
            Err(GfError::OutOfRange { value, q: self.q })
        }
    }

    /// All q elements in increasing encoding order: 0 first, 1 second.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(|v| Elem(v as u16))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let mut out = 0u32;
        let mut place = 1u32;
        let (mut av, mut bv) = (a.0 as u32, b.0 as u32);
        while av != 0 || bv != 0 {
            let d = (av % self.p + bv % self.p) % self.p;
            out += d * place;
            av /= self.p;
            bv /= self.p;
            place *= self.p;
        }
        Elem(out as u16)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut out = 0u32;
        let mut place = 1u32;
        let mut av = a.0 as u32;
        while av != 0 {
            let d = av % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            av /= self.p;
            place *= self.p;
        }
        Elem(out as u16)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Elem(self.exp[i])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let i = (self.q as usize - 1) - self.log[a.0 as usize] as usize;
        Ok(Elem(self.exp[i]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if a.is_zero() {
            return if k == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let ord = (self.q - 1) as u64;
        let i = (self.log[a.0 as usize] as u64 * (k % ord)) % ord;
        Elem(self.exp[i as usize])
    }

    /// True iff a = b² for some b. Every element of a characteristic-2 field
    /// is a square.
    pub fn is_square(&self, a: Elem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.log[a.0 as usize].is_multiple_of(2)
    }

    /// Absolute trace into the prime subfield: a + a^p + ... + a^(p^(e-1)).
    /// The result encodes an element of GF(p), i.e. a value in 0..p.
    pub fn absolute_trace(&self, a: Elem) -> u32 {
        let mut acc = Elem::ZERO;
        let mut x = a;
        for _ in 0..self.e {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!((acc.0 as u32) < self.p);
        acc.0 as u32
    }

    /// Base-p digits of an encoding, little-endian, length e.
    pub(crate) fn digits(&self, a: Elem) -> Vec<u32> {
        let mut out = vec![0u32; self.e as usize];
        let mut v = a.0 as u32;
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn encode_digits(&self, digits: &[u32]) -> Elem {
        let mut v = 0u32;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        Elem(v as u16)
    }

    /// Polynomial product reduced by the reduction polynomial; used only to
    /// bootstrap the tables.
    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let e = self.e as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] += x as u64 * y as u64;
            }
        }
        for c in prod.iter_mut() {
            *c %= self.p as u64;
        }
        // Reduce: x^e = -(low-degree part of reduction polynomial).
        for deg in (e..2 * e - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &r) in self.reduction_poly.iter().enumerate().take(e) {
                let sub = c * r as u64 % self.p as u64;
                let cur = prod[deg - e + i];
                prod[deg - e + i] = (cur + self.p as u64 - sub) % self.p as u64;
            }
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
        self.encode_digits(&digits)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let ord = q - 1;
        let candidates: Vec<u16> = if q == 2 {
            vec![1]
        } else {
            (2..self.q).map(|v| v as u16).collect()
        };
        for g in candidates {
            let mut chain = Vec::with_capacity(ord);
            chain.push(1u16);
            let mut x = Elem(1);
            loop {
                x = self.slow_mul(x, Elem(g));
                if x.0 == 1 {
                    break;
                }
                chain.push(x.0);
            }
            if chain.len() == ord {
                let mut exp = vec![0u16; 2 * ord];
                let mut log = vec![LOG_SENTINEL; q];
                for (i, &v) in chain.iter().enumerate() {
                    exp[i] = v;
                    exp[i + ord] = v;
                    log[v as usize] = i as u16;
                }
                self.exp = exp;
                self.log = log;
                self.generator = g;
                return;
            }
        }
        unreachable!("every finite field has a multiplicative generator");
    }
}

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..).find(|&d| q.is_multiple_of(d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Some((p, e))
    } else {
        None
    }
}

/// The lexicographically smallest monic irreducible of degree e over GF(p),
/// comparing coefficient sequences constant term first. Little-endian output
/// of length e+1.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1]; // x itself
    }
    let e = e as usize;
    let mut lower = vec![0u32; e];
    loop {
        let mut poly = lower.clone();
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
        // Advance the coefficient odometer: the highest-degree coefficient
        // varies fastest so the constant term is the most significant key.
        let mut i = e;
        loop {
            debug_assert!(i > 0, "no irreducible of degree {e} over GF({p})?");
            i -= 1;
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
        }
    }
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if poly[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        let mut lower = vec![0u32; d];
        loop {
            let mut divisor = lower.clone();
            divisor.push(1);
            if divides(&divisor, poly, p) {
                return false;
            }
            let mut i = d;
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                lower[i] += 1;
                if lower[i] < p {
                    break;
                }
                lower[i] = 0;
            }
            if done {
                break;
            }
        }
    }
    true
}

/// Remainder test for monic divisor over GF(p).
fn divides(divisor: &[u32], poly: &[u32], p: u32) -> bool {
    let dd = divisor.len() - 1;
    let mut rem: Vec<u64> = poly.iter().map(|&c| c as u64).collect();
    for deg in (dd..poly.len()).rev() {
        let c = rem[deg];
        if c == 0 {
            continue;
        }
        rem[deg] = 0;
        for (i, &r) in divisor.iter().enumerate().take(dd) {
            let sub = c * r as u64 % p as u64;
            let cur = rem[deg - dd + i];
            rem[deg - dd + i] = (cur + p as u64 - sub) % p as u64;
        }
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_spec() {
        let f = Gf::new(5).unwrap();
        assert_eq!((f.p(), f.e(), f.q()), (5, 1, 5));
        assert_eq!(f.reduction_poly(), &[0, 1]);
    }

    #[test]
    fn gf4_reduction_poly_is_x2_x_1() {
        let f = Gf::new(4).unwrap();
        assert_eq!((f.p(), f.e()), (2, 2));
        assert_eq!(f.reduction_poly(), &[1, 1, 1]);
    }

    #[test]
    fn non_prime_powers_rejected() {
        assert_eq!(Gf::new(6).unwrap_err(), GfError::NotAPrimePower { q: 6 });
        assert_eq!(Gf::new(1).unwrap_err(), GfError::NotAPrimePower { q: 1 });
        assert_eq!(Gf::new(0).unwrap_err(), GfError::NotAPrimePower { q: 0 });
        assert_eq!(Gf::new(12).unwrap_err(), GfError::NotAPrimePower { q: 12 });
        assert!(Gf::new(1 << 17).is_err());
    }

    #[test]
    fn addition_examples() {
        let f5 = Gf::new(5).unwrap();
        assert_eq!(f5.add(Elem(3), Elem(4)), Elem(2));

        let f4 = Gf::new(4).unwrap();
        for a in f4.elements() {
            assert_eq!(f4.add(a, a), Elem::ZERO);
        }

        // GF(9): x + 2x = 3x = 0.
        let f9 = Gf::new(9).unwrap();
        assert_eq!(f9.add(Elem(3), Elem(6)), Elem::ZERO);
    }

    #[test]
    fn multiplication_examples() {
        let f5 = Gf::new(5).unwrap();
        assert_eq!(f5.mul(Elem(2), Elem(3)), Elem(1));

        // GF(4) with x²+x+1: x·x = x+1.
        let f4 = Gf::new(4).unwrap();
        assert_eq!(f4.mul(Elem(2), Elem(2)), Elem(3));
        for b in f4.elements() {
            assert_eq!(f4.mul(Elem::ZERO, b), Elem::ZERO);
        }
    }

    #[test]
    fn full_gf4_multiplication_table() {
        // Hand-derived from x² = x+1: rows/cols in encoding order 0,1,x,x+1.
        let expect = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        let f = Gf::new(4).unwrap();
        for a in 0..4u16 {
            for b in 0..4u16 {
                assert_eq!(f.mul(Elem(a), Elem(b)), Elem(expect[a as usize][b as usize]));
            }
        }
    }

    #[test]
    fn inversion_examples() {
        let f5 = Gf::new(5).unwrap();
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        assert_eq!(f5.inv(Elem(1)).unwrap(), Elem(1));
        assert_eq!(f5.inv(Elem::ZERO).unwrap_err(), GfError::DivisionByZero);

        let f4 = Gf::new(4).unwrap();
        assert_eq!(f4.inv(Elem(2)).unwrap(), Elem(3));
    }

    #[test]
    fn element_enumeration() {
        let f2 = Gf::new(2).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1)]);
        let f4 = Gf::new(4).unwrap();
        assert_eq!(
            f4.elements().collect::<Vec<_>>(),
            vec![Elem(0), Elem(1), Elem(2), Elem(3)]
        );
        assert_eq!(Gf::new(9).unwrap().elements().count(), 9);
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Gf::new(q).unwrap();
            let elems: Vec<Elem> = f.elements().collect();
            for &a in &elems {
                assert_eq!(f.add(a, Elem::ZERO), a);
                assert_eq!(f.mul(a, Elem::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                for &b in &elems {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &elems {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Gf::new(q).unwrap();
            let p = f.p() as u64;
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.pow(f.add(a, b), p),
                        f.add(f.pow(a, p), f.pow(b, p))
                    );
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81, 128, 243, 256, 1024] {
            let f = Gf::new(q).unwrap();
            let g = f.generator();
            let mut seen = vec![false; q as usize];
            let mut x = Elem::ONE;
            for _ in 0..q - 1 {
                assert!(!seen[x.value() as usize]);
                seen[x.value() as usize] = true;
                x = f.mul(x, g);
            }
            assert_eq!(x, Elem::ONE);
            assert_eq!(seen.iter().filter(|&&s| s).count() as u64, q - 1);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        for q in [4u64, 8, 9, 27, 64, 121, 125] {
            let a = Gf::new(q).unwrap();
            let b = Gf::new(q).unwrap();
            assert_eq!(a.reduction_poly(), b.reduction_poly());
            assert_eq!(a.generator(), b.generator());
        }
    }

    #[test]
    fn largest_supported_order() {
        let f = Gf::new(1 << 16).unwrap();
        assert_eq!((f.p(), f.e()), (2, 16));
        let a = f.elem(54321).unwrap();
        let b = f.elem(12345).unwrap();
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        assert_eq!(f.mul(a, b), f.mul(b, a));
        assert_eq!(
            f.mul(a, f.add(b, Elem::ONE)),
            f.add(f.mul(a, b), a)
        );
    }

    #[test]
    fn trace_and_squares() {
        let f4 = Gf::new(4).unwrap();
        // Tr(x) = x + x² = x + (x+1) = 1.
        assert_eq!(f4.absolute_trace(Elem(2)), 1);
        assert_eq!(f4.absolute_trace(Elem(1)), 0);

        let f5 = Gf::new(5).unwrap();
        let squares: Vec<bool> = f5.elements().map(|a| f5.is_square(a)).collect();
        assert_eq!(squares, vec![true, true, false, false, true]);
    }
}
