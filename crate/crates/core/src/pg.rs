//! Points, hyperplanes, and codimension-2 subspaces of PG(k,q).
//!
//! Every projective object is stored by a canonical representative whose
//! leftmost nonzero coordinate is 1, so equality of objects is equality of
//! vectors. Enumerations are lexicographic on the coordinate encodings and
//! frozen as a compatibility contract: identical runs produce identical
//! orderings on every platform.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::{Elem, Gf};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgError {
    ZeroVector,
    /// Coordinate vector length does not match k+1.
    WrongLength { expected: usize, got: usize },
}

impl fmt::Display for PgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgError::ZeroVector => write!(f, "the zero vector spans no projective point"),
            PgError::WrongLength { expected, got } => {
                write!(f, "expected {expected} coordinates, got {got}")
            }
        }
    }
}

impl core::error::Error for PgError {}

/// θ(k,q) = (q^(k+1) - 1)/(q - 1): the number of points of PG(k,q).
pub fn theta(k: usize, q: u64) -> u64 {
    let mut total = 0u128;
    let mut term = 1u128;
    for _ in 0..=k {
        total += term;
        term = term.checked_mul(q as u128).expect("theta(k,q) overflows");
    }
    u64::try_from(total).expect("theta(k,q) overflows")
}

/// Gaussian binomial [k+1 choose 2]_q: the number of codimension-2 subspaces
/// (equivalently lines) of PG(k,q).
pub fn codim2_count(k: usize, q: u64) -> u64 {
    let num = (pow(q, k + 1) - 1) * (pow(q, k) - 1);
    let den = (q as u128 * q as u128 - 1) * (q as u128 - 1);
    debug_assert_eq!(num % den, 0);
    u64::try_from(num / den).expect("codim-2 count overflows")
}

/// True iff PG(k,q) is small enough for the full-enumeration operations:
/// the raw vector scan q^(k+1) stays within 2^24.
pub fn enumerable(k: usize, q: u64) -> bool {
    let mut scan = 1u128;
    for _ in 0..=k {
        scan = scan.saturating_mul(q as u128);
        if scan > 1 << 24 {
            return false;
        }
    }
    true
}

fn pow(q: u64, e: usize) -> u128 {
    let mut out = 1u128;
    for _ in 0..e {
        out = out.checked_mul(q as u128).expect("power overflows");
    }
    out
}

/// A point of PG(k,q): k+1 coordinates, leftmost nonzero coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A hyperplane of PG(k,q), stored dually by the canonical covector of its
/// defining linear form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    covector: Vec<Elem>,
}

impl Hyperplane {
    pub fn covector(&self) -> &[Elem] {
        &self.covector
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.covector.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A codimension-2 subspace, stored dually: the two RREF rows span the
/// 2-space of linear forms vanishing on it. The RREF is canonical, so two
/// subspaces are equal iff their matrices are identical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codim2Subspace {
    rows: [Vec<Elem>; 2],
}

impl Codim2Subspace {
    pub fn dual_basis(&self) -> (&[Elem], &[Elem]) {
        (&self.rows[0], &self.rows[1])
    }
}

impl fmt::Display for Codim2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{c}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Visits every canonical vector of the given length (leftmost nonzero entry
/// equal to 1) in lexicographic order by entry encodings. The visitor returns
/// false to stop the scan early.
pub(crate) fn scan_canonical_vectors<F: FnMut(&[Elem]) -> bool>(
    field: &Gf,
    len: usize,
    mut visit: F,
) {
    let q = field.q() as u16;
    let mut buf = vec![Elem::ZERO; len];
    // Lexicographic order puts later leading positions first: the vector
    // (0,...,0,1) is the minimum.
    for lead in (0..len).rev() {
        for c in buf.iter_mut() {
            *c = Elem::ZERO;
        }
        buf[lead] = Elem::ONE;
        loop {
            if !visit(&buf) {
                return;
            }
            // Tail odometer, last coordinate fastest.
            let mut i = len;
            let mut done = false;
            loop {
                if i == lead + 1 {
                    done = true;
                    break;
                }
                i -= 1;
                let next = buf[i].value() + 1;
                if next < q {
                    buf[i] = field.elem(next as u64).unwrap();
                    break;
                }
                buf[i] = Elem::ZERO;
            }
            if done {
                break;
            }
        }
    }
}

/// The projective space PG(k,q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjSpace {
    k: usize,
    field: Gf,
}

impl ProjSpace {
    /// For desk-scale parameters the constructor cross-checks the canonical
    /// enumeration against θ(k,q) without materializing the points.
    pub fn new(k: usize, field: Gf) -> ProjSpace {
        let space = ProjSpace { k, field };
        let q = space.q();
        if k <= 7 && q <= 9 {
            let mut count = 0u64;
            space.scan_canonical(|_| count += 1);
            assert_eq!(count, theta(k, q), "canonical point enumeration is off");
        }
        space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// Number of points (= number of hyperplanes, by duality).
    pub fn point_count(&self) -> u64 {
        theta(self.k, self.q())
    }

    pub fn codim2_count(&self) -> u64 {
        codim2_count(self.k, self.q())
    }

    /// θ(k-1,q): the number of points in a hyperplane, and dually the number
    /// of hyperplanes through a point.
    pub fn hyperplanes_per_point(&self) -> u64 {
        theta(self.k - 1, self.q())
    }

    /// Visits every canonical (k+1)-vector in lexicographic order by
    /// coordinate encoding.
    fn scan_canonical<F: FnMut(&[Elem])>(&self, mut visit: F) {
        scan_canonical_vectors(&self.field, self.k + 1, |v| {
            visit(v);
            true
        });
    }

    /// All θ(k,q) canonical points, lexicographic by coordinate encoding.
    pub fn points(&self) -> Vec<ProjPoint> {
        let mut out = Vec::with_capacity(self.point_count() as usize);
        self.scan_canonical(|coords| {
            out.push(ProjPoint {
                coords: coords.to_vec(),
            })
        });
        out
    }

    /// All hyperplanes as canonical covectors, in the same order as points.
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        let mut out = Vec::with_capacity(self.point_count() as usize);
        self.scan_canonical(|covector| {
            out.push(Hyperplane {
                covector: covector.to_vec(),
            })
        });
        out
    }

    /// Scales a nonzero vector so its leftmost nonzero coordinate is 1.
    pub fn canonicalize(&self, raw: &[Elem]) -> Result<Vec<Elem>, PgError> {
        if raw.len() != self.k + 1 {
            return Err(PgError::WrongLength {
                expected: self.k + 1,
                got: raw.len(),
            });
        }
        let lead = raw
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(PgError::ZeroVector)?;
        let scale = self.field.inv(raw[lead]).expect("leading entry is nonzero");
        Ok(raw.iter().map(|&c| self.field.mul(scale, c)).collect())
    }

    pub fn point_from(&self, raw: &[Elem]) -> Result<ProjPoint, PgError> {
        Ok(ProjPoint {
            coords: self.canonicalize(raw)?,
        })
    }

    pub fn hyperplane_from(&self, raw: &[Elem]) -> Result<Hyperplane, PgError> {
        Ok(Hyperplane {
            covector: self.canonicalize(raw)?,
        })
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = Elem::ZERO;
        for (&x, &y) in a.iter().zip(b) {
            acc = self.field.add(acc, self.field.mul(x, y));
        }
        acc
    }

    /// True iff the point lies on the hyperplane: covector · coords = 0.
    pub fn incident(&self, pt: &ProjPoint, h: &Hyperplane) -> bool {
        self.dot(&h.covector, &pt.coords).is_zero()
    }

    /// True iff the point lies on the codimension-2 subspace: both dual
    /// forms vanish on it.
    pub fn in_codim2(&self, pt: &ProjPoint, sub: &Codim2Subspace) -> bool {
        self.dot(&sub.rows[0], &pt.coords).is_zero() && self.dot(&sub.rows[1], &pt.coords).is_zero()
    }

    /// All codimension-2 subspaces, each exactly once via its canonical RREF
    /// dual basis. Deterministic order: pivot pair lexicographic, then the
    /// free entries as an odometer.
    pub fn codim2_subspaces(&self) -> Vec<Codim2Subspace> {
        assert!(self.k >= 2, "codimension 2 needs k >= 2");
        let len = self.k + 1;
        let q = self.field.q() as u16;
        let mut out = Vec::with_capacity(self.codim2_count() as usize);
        for p0 in 0..len - 1 {
            for p1 in p0 + 1..len {
                // Free positions: row 0 beyond p0 except column p1; row 1
                // beyond p1. RREF forces everything else.
                let free0: Vec<usize> = (p0 + 1..len).filter(|&c| c != p1).collect();
                let free1: Vec<usize> = (p1 + 1..len).collect();
                let nfree = free0.len() + free1.len();
                let mut vals = vec![0u16; nfree];
                loop {
                    let mut r0 = vec![Elem::ZERO; len];
                    let mut r1 = vec![Elem::ZERO; len];
                    r0[p0] = Elem::ONE;
                    r1[p1] = Elem::ONE;
                    for (i, &c) in free0.iter().enumerate() {
                        r0[c] = self.field.elem(vals[i] as u64).unwrap();
                    }
                    for (i, &c) in free1.iter().enumerate() {
                        r1[c] = self.field.elem(vals[free0.len() + i] as u64).unwrap();
                    }
                    out.push(Codim2Subspace { rows: [r0, r1] });

                    let mut i = nfree;
                    let mut done = false;
                    loop {
                        if i == 0 {
                            done = true;
                            break;
                        }
                        i -= 1;
                        vals[i] += 1;
                        if vals[i] < q {
                            break;
                        }
                        vals[i] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
        }
        out
    }

    /// The canonical subspace cut out by a rank-2 set of linear forms;
    /// `None` when the forms do not span a 2-space.
    pub fn codim2_from_forms(&self, forms: &[Vec<Elem>]) -> Option<Codim2Subspace> {
        let mut rows = forms.to_vec();
        if linalg::rref(&self.field, &mut rows) != 2 {
            return None;
        }
        rows.truncate(2);
        let r1 = rows.pop().unwrap();
        let r0 = rows.pop().unwrap();
        Some(Codim2Subspace { rows: [r0, r1] })
    }

    /// The canonical codimension-2 subspace in which two distinct
    /// hyperplanes meet.
    pub fn span_of(&self, a: &Hyperplane, b: &Hyperplane) -> Codim2Subspace {
        assert_ne!(a, b, "a codimension-2 subspace needs two distinct hyperplanes");
        let mut rows = vec![a.covector.clone(), b.covector.clone()];
        let rank = linalg::rref(&self.field, &mut rows);
        debug_assert_eq!(rank, 2);
        let r1 = rows.pop().unwrap();
        let r0 = rows.pop().unwrap();
        Codim2Subspace { rows: [r0, r1] }
    }

    /// The pencil of the subspace: the q+1 hyperplanes containing it, i.e.
    /// the canonical covectors in the projective line of forms spanned by
    /// the dual basis.
    pub fn pencil(&self, sub: &Codim2Subspace) -> Vec<Hyperplane> {
        let mut out = Vec::with_capacity(self.field.q() as usize + 1);
        for lambda in self.field.elements() {
            let covector: Vec<Elem> = sub.rows[0]
                .iter()
                .zip(&sub.rows[1])
                .map(|(&a, &b)| self.field.add(a, self.field.mul(lambda, b)))
                .collect();
            // RREF rows make these combinations canonical already.
            debug_assert_eq!(self.canonicalize(&covector).as_deref(), Ok(&covector[..]));
            out.push(Hyperplane { covector });
        }
        out.push(Hyperplane {
            covector: sub.rows[1].clone(),
        });
        out
    }
}
