//! Non-singular quadratic forms over PG(k,q), their point sets, tangent
//! hyperplanes, and the classification of hyperplane and codimension-2
//! sections by cardinality.
//!
//! The hyperbolic and elliptic cases are handled simultaneously through a
//! [`Sign`]: `Plus` selects the hyperbolic row of every two-case formula and
//! `Minus` the elliptic row. Sections are classified purely by how many
//! quadric points they contain — the section sizes are complete invariants,
//! and cardinality sidesteps characteristic-2 polarity subtleties entirely.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::{Elem, Gf};
use crate::pg::{enumerable, theta, Codim2Subspace, Hyperplane, ProjPoint, ProjSpace};
use crate::sigma::HyperplaneFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

impl Kind {
    /// Projective dimension of the ambient space for parameter n.
    pub fn dimension(self, n: u32) -> usize {
        match self {
            Kind::Hyperbolic | Kind::Elliptic => 2 * n as usize + 1,
            Kind::Parabolic => 2 * n as usize,
        }
    }

    pub fn sign(self) -> Option<Sign> {
        match self {
            Kind::Hyperbolic => Some(Sign::Plus),
            Kind::Elliptic => Some(Sign::Minus),
            Kind::Parabolic => None,
        }
    }
}

/// Which row of a two-case (±/∓) formula to read: `Plus` is the hyperbolic
/// case, `Minus` the elliptic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// x ± 1 read under this sign.
    fn pm(self, x: u128) -> u128 {
        match self {
            Sign::Plus => x + 1,
            Sign::Minus => x - 1,
        }
    }

    /// x ∓ 1 read under this sign.
    fn mp(self, x: u128) -> u128 {
        match self {
            Sign::Plus => x - 1,
            Sign::Minus => x + 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadricError {
    UnsupportedSize { k: usize, q: u64 },
    NotOnQuadric,
    /// A section count matched neither expected value. Impossible for
    /// non-singular standard forms; surfacing it loudly catches construction
    /// bugs instead of folding them into a classification bucket.
    UnexpectedSectionSize { observed: u64, expected: Vec<u64> },
    /// Point count disagrees with the non-singular formula.
    SingularForm { expected: u64, observed: u64 },
    KindDimensionMismatch { kind: Kind, k: usize },
}

impl fmt::Display for QuadricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadricError::UnsupportedSize { k, q } => {
                write!(f, "PG({k},{q}) is beyond the supported enumeration size")
            }
            QuadricError::NotOnQuadric => write!(f, "point does not lie on the quadric"),
            QuadricError::UnexpectedSectionSize { observed, expected } => {
                write!(f, "section size {observed} not in {expected:?}")
            }
            QuadricError::SingularForm { expected, observed } => {
                write!(f, "form is singular: {observed} points, expected {expected}")
            }
            QuadricError::KindDimensionMismatch { kind, k } => {
                write!(f, "{kind:?} quadric cannot live in projective dimension {k}")
            }
        }
    }
}

impl core::error::Error for QuadricError {}

/// The full catalogue of closed-form counts attached to Q±(2n+1,q): point
/// counts, hyperplane and codimension-2 section sizes, and the derived
/// quantities of the canonical parabolic hyperplane family.
///
/// `c4` is absent for (n=1, Minus): an elliptic quadric of PG(3,q) carries
/// no lines, so the fourth codimension-2 section type does not exist there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub n: u32,
    pub q: u64,
    pub sign: Sign,
    /// |Q±(2n+1,q)| = (q^(n+1) ∓ 1)(q^n ± 1)/(q - 1).
    pub quadric_size: u64,
    /// q^n (q^(n+1) ∓ 1): hyperplanes meeting the quadric in h1 points.
    pub parabolic_hyperplanes: u64,
    /// Parabolic section size (q^(2n) - 1)/(q - 1).
    pub h1: u64,
    /// Tangent-cone section size 1 + q(q^n ∓ 1)(q^(n-1) ± 1)/(q - 1).
    pub h2: u64,
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub c4: Option<u64>,
    /// Members of the canonical family through an on-quadric point:
    /// q^n (q^n ∓ 1).
    pub black_degree: u64,
    /// Members through an off-quadric point: q^(2n).
    pub white_degree: u64,
    /// |Σ±| = q^n (q^(n+1) ∓ 1).
    pub sigma_size: u64,
    /// Quadric points in a member hyperplane: (q^(2n) - 1)/(q - 1).
    pub black_in_sigma_plane: u64,
    /// Quadric points in a non-member: (q^(2n) ± q^(n+1) ∓ q^n - 1)/(q - 1).
    pub black_in_other_plane: u64,
}

fn upow(q: u128, e: u32) -> u128 {
    let mut out = 1u128;
    for _ in 0..e {
        out = out.checked_mul(q).expect("count table overflows 128-bit arithmetic");
    }
    out
}

/// True iff every closed form at (n, q) fits 128-bit arithmetic.
pub fn count_table_supported(n: u32, q: u64) -> bool {
    let mut acc = 1u128;
    for _ in 0..2 * n + 2 {
        match acc.checked_mul(q as u128) {
            Some(next) => acc = next,
            None => return false,
        }
    }
    // Headroom for the numerator products mp(q^(n+1))·pm(q^n).
    acc.checked_mul(acc).is_some()
}

fn exact_div(num: u128, den: u128) -> u128 {
    debug_assert_eq!(num % den, 0, "{num} is not divisible by {den}");
    num / den
}

impl CountTable {
    /// Evaluates every closed form exactly. Requires n ≥ 1 and q ≥ 2.
    pub fn new(n: u32, q: u64, sign: Sign) -> CountTable {
        assert!(n >= 1 && q >= 2);
        let qe = |e: u32| upow(q as u128, e);
        let qm1 = q as u128 - 1;

        let quadric_size = exact_div(sign.mp(qe(n + 1)) * sign.pm(qe(n)), qm1);
        let parabolic_hyperplanes = qe(n) * sign.mp(qe(n + 1));
        let h1 = exact_div(qe(2 * n) - 1, qm1);
        let h2 = 1 + exact_div(qe(1) * sign.mp(qe(n)) * sign.pm(qe(n - 1)), qm1);
        let c1 = exact_div(sign.pm(qe(n)) * sign.mp(qe(n - 1)), qm1);
        let c2 = 1 + exact_div(qe(1) * (qe(2 * n - 2) - 1), qm1);
        let c3 = exact_div(sign.mp(qe(n)) * sign.pm(qe(n - 1)), qm1);
        let c4 = if n >= 2 {
            Some(1 + qe(1) + exact_div(qe(2) * sign.mp(qe(n - 1)) * sign.pm(qe(n - 2)), qm1))
        } else {
            match sign {
                // The (q^(n-1) ∓ 1) factor vanishes, leaving a line: q+1.
                Sign::Plus => Some(1 + qe(1)),
                // No lines on an elliptic quadric of PG(3,q).
                Sign::Minus => None,
            }
        };
        let black_degree = qe(n) * sign.mp(qe(n));
        let white_degree = qe(2 * n);
        let black_in_other_plane = match sign {
            Sign::Plus => exact_div(qe(2 * n) + qe(n + 1) - qe(n) - 1, qm1),
            Sign::Minus => exact_div(qe(2 * n) - qe(n + 1) + qe(n) - 1, qm1),
        };

        CountTable {
            n,
            q,
            sign,
            quadric_size: quadric_size as u64,
            parabolic_hyperplanes: parabolic_hyperplanes as u64,
            h1: h1 as u64,
            h2: h2 as u64,
            c1: c1 as u64,
            c2: c2 as u64,
            c3: c3 as u64,
            c4: c4.map(|v| v as u64),
            black_degree: black_degree as u64,
            white_degree: white_degree as u64,
            sigma_size: parabolic_hyperplanes as u64,
            black_in_sigma_plane: h1 as u64,
            black_in_other_plane: black_in_other_plane as u64,
        }
    }

    /// The two possible hyperplane section sizes.
    pub fn hyperplane_sections(&self) -> [u64; 2] {
        [self.h1, self.h2]
    }

    /// The possible codimension-2 section sizes (c4 omitted when undefined).
    pub fn codim2_sections(&self) -> Vec<u64> {
        let mut out = vec![self.c1, self.c2, self.c3];
        if let Some(c4) = self.c4 {
            out.push(c4);
        }
        out
    }
}

/// Shorthand for [`CountTable::new`].
pub fn expected_counts(n: u32, q: u64, sign: Sign) -> CountTable {
    CountTable::new(n, q, sign)
}

/// How a hyperplane meets Q±(2n+1,q): in h1 points (a parabolic section) or
/// in h2 points (the tangent cone at some quadric point).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperplaneSection {
    Parabolic,
    TangentCone,
}

/// The codimension-2 section bucket, identified by cardinality alone. When
/// two buckets share a cardinality for some (n,q), the lower-numbered one is
/// reported; only the value set matters downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codim2Section {
    C1,
    C2,
    C3,
    C4,
}

/// A quadratic form Q(x) = Σ over i ≤ j of coeffs\[i\]\[j\]·x_i·x_j on a
/// projective space, with its intended non-singular type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    space: ProjSpace,
    kind: Kind,
    /// Upper-triangular (k+1)×(k+1); entries below the diagonal are zero.
    coeffs: Vec<Vec<Elem>>,
}

impl fmt::Display for QuadraticForm {
    /// Renders the polynomial, e.g. `x0*x1 + 2*x2^2 + x2*x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate().skip(i) {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if c != Elem::ONE {
                    write!(f, "{c}*")?;
                }
                if i == j {
                    write!(f, "x{i}^2")?;
                } else {
                    write!(f, "x{i}*x{j}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl QuadraticForm {
    /// Validates shape and non-singularity (the enumerated point count must
    /// match the closed-form count for `kind`).
    pub fn from_coeffs(
        space: ProjSpace,
        kind: Kind,
        coeffs: Vec<Vec<Elem>>,
    ) -> Result<QuadraticForm, QuadricError> {
        let k = space.k();
        let q = space.q();
        let dim_ok = match kind {
            Kind::Hyperbolic | Kind::Elliptic => k % 2 == 1,
            Kind::Parabolic => k.is_multiple_of(2) && k >= 2,
        };
        if !dim_ok {
            return Err(QuadricError::KindDimensionMismatch { kind, k });
        }
        if !enumerable(k, q) {
            return Err(QuadricError::UnsupportedSize { k, q });
        }
        assert_eq!(coeffs.len(), k + 1);
        for (i, row) in coeffs.iter().enumerate() {
            assert_eq!(row.len(), k + 1);
            assert!(row[..i].iter().all(|c| c.is_zero()), "not upper-triangular");
        }

        let form = QuadraticForm { space, kind, coeffs };
        let expected = form.expected_size();
        let observed = form.point_set().len() as u64;
        if observed != expected {
            return Err(QuadricError::SingularForm { expected, observed });
        }
        Ok(form)
    }

    fn expected_size(&self) -> u64 {
        let k = self.space.k();
        let q = self.space.q();
        match self.kind {
            Kind::Hyperbolic => CountTable::new((k as u32 - 1) / 2, q, Sign::Plus).quadric_size,
            Kind::Elliptic => CountTable::new((k as u32 - 1) / 2, q, Sign::Minus).quadric_size,
            // |Q(2n,q)| = (q^(2n) - 1)/(q - 1) = θ(2n-1, q).
            Kind::Parabolic => theta(k - 1, q),
        }
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn coeffs(&self) -> &[Vec<Elem>] {
        &self.coeffs
    }

    /// Q at a coordinate vector. Scaling the input by λ scales the value by
    /// λ², so vanishing is a projective invariant.
    pub fn evaluate_raw(&self, coords: &[Elem]) -> Elem {
        let f = self.space.field();
        let mut acc = Elem::ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            if coords[i].is_zero() {
                continue;
            }
            for (j, &c) in row.iter().enumerate().skip(i) {
                if !c.is_zero() {
                    let term = f.mul(c, f.mul(coords[i], coords[j]));
                    acc = f.add(acc, term);
                }
            }
        }
        acc
    }

    pub fn evaluate(&self, pt: &ProjPoint) -> Elem {
        self.evaluate_raw(pt.coords())
    }

    /// All canonical points with Q = 0, in enumeration order.
    pub fn point_set(&self) -> Vec<ProjPoint> {
        self.space
            .points()
            .into_iter()
            .filter(|p| self.evaluate(p).is_zero())
            .collect()
    }

    /// The symmetrized matrix of the bilinearization
    /// B(x,y) = Q(x+y) - Q(x) - Q(y).
    #[allow(clippy::needless_range_loop)]
    fn bilinear_matrix(&self) -> Vec<Vec<Elem>> {
        let f = self.space.field();
        let m = self.coeffs.len();
        let mut b = vec![vec![Elem::ZERO; m]; m];
        for i in 0..m {
            for j in i..m {
                let c = self.coeffs[i][j];
                if i == j {
                    b[i][i] = f.add(c, c);
                } else {
                    b[i][j] = c;
                    b[j][i] = c;
                }
            }
        }
        b
    }
}

/// The standard non-singular form of the given kind:
///
/// - Hyperbolic: x₀x₁ + x₂x₃ + … + x_{2n}x_{2n+1}
/// - Parabolic:  x₀² + x₁x₂ + … + x_{2n-1}x_{2n}
/// - Elliptic:   N(x₀,x₁) + x₂x₃ + … + x_{2n}x_{2n+1}
///
/// where N is an irreducible binary form: x₀² - d·x₁² for odd q with d the
/// smallest-encoding non-square, and x₀² + x₀x₁ + c·x₁² for even q with c
/// the smallest-encoding element of absolute trace 1.
pub fn standard_form(kind: Kind, n: u32, field: Gf) -> Result<QuadraticForm, QuadricError> {
    assert!(n >= 1);
    let k = kind.dimension(n);
    let q = field.q() as u64;
    if !enumerable(k, q) {
        return Err(QuadricError::UnsupportedSize { k, q });
    }
    let space = ProjSpace::new(k, field);
    let f = space.field().clone();
    let mut coeffs = vec![vec![Elem::ZERO; k + 1]; k + 1];
    match kind {
        Kind::Hyperbolic => {
            for i in 0..=n as usize {
                coeffs[2 * i][2 * i + 1] = Elem::ONE;
            }
        }
        Kind::Parabolic => {
            coeffs[0][0] = Elem::ONE;
            for i in 1..=n as usize {
                coeffs[2 * i - 1][2 * i] = Elem::ONE;
            }
        }
        Kind::Elliptic => {
            coeffs[0][0] = Elem::ONE;
            if f.p() == 2 {
                let c = f
                    .elements()
                    .find(|&c| f.absolute_trace(c) == 1)
                    .expect("half the field has absolute trace 1");
                coeffs[0][1] = Elem::ONE;
                coeffs[1][1] = c;
            } else {
                let d = f
                    .elements()
                    .find(|&d| !f.is_square(d))
                    .expect("odd-order fields have non-squares");
                coeffs[1][1] = f.neg(d);
            }
            for i in 1..=n as usize {
                coeffs[2 * i][2 * i + 1] = Elem::ONE;
            }
        }
    }
    QuadraticForm::from_coeffs(space, kind, coeffs)
}

/// A hyperbolic or elliptic quadric with its cached point set and count
/// table, ready for section classification sweeps.
#[derive(Debug, Clone)]
pub struct Quadric {
    form: QuadraticForm,
    table: CountTable,
    points: Vec<ProjPoint>,
    bilinear: Vec<Vec<Elem>>,
}

impl Quadric {
    pub fn new(form: QuadraticForm) -> Result<Quadric, QuadricError> {
        let sign = form
            .kind()
            .sign()
            .ok_or(QuadricError::KindDimensionMismatch {
                kind: form.kind(),
                k: form.space().k(),
            })?;
        let n = (form.space().k() as u32 - 1) / 2;
        let table = CountTable::new(n, form.space().q(), sign);
        let points = form.point_set();
        let bilinear = form.bilinear_matrix();
        Ok(Quadric {
            form,
            table,
            points,
            bilinear,
        })
    }

    pub fn standard(kind: Kind, n: u32, field: Gf) -> Result<Quadric, QuadricError> {
        Quadric::new(standard_form(kind, n, field)?)
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn space(&self) -> &ProjSpace {
        self.form.space()
    }

    pub fn sign(&self) -> Sign {
        self.table.sign
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    /// Number of quadric points incident with the hyperplane.
    pub fn section_size(&self, h: &Hyperplane) -> u64 {
        let space = self.space();
        self.points.iter().filter(|p| space.incident(p, h)).count() as u64
    }

    pub fn classify_hyperplane(&self, h: &Hyperplane) -> Result<HyperplaneSection, QuadricError> {
        let size = self.section_size(h);
        if size == self.table.h1 {
            Ok(HyperplaneSection::Parabolic)
        } else if size == self.table.h2 {
            Ok(HyperplaneSection::TangentCone)
        } else {
            Err(QuadricError::UnexpectedSectionSize {
                observed: size,
                expected: self.table.hyperplane_sections().to_vec(),
            })
        }
    }

    pub fn codim2_section_size(&self, sub: &Codim2Subspace) -> u64 {
        let space = self.space();
        self.points.iter().filter(|p| space.in_codim2(p, sub)).count() as u64
    }

    pub fn classify_codim2(&self, sub: &Codim2Subspace) -> Result<Codim2Section, QuadricError> {
        let size = self.codim2_section_size(sub);
        if size == self.table.c1 {
            Ok(Codim2Section::C1)
        } else if size == self.table.c2 {
            Ok(Codim2Section::C2)
        } else if size == self.table.c3 {
            Ok(Codim2Section::C3)
        } else if self.table.c4 == Some(size) {
            Ok(Codim2Section::C4)
        } else {
            Err(QuadricError::UnexpectedSectionSize {
                observed: size,
                expected: self.table.codim2_sections(),
            })
        }
    }

    /// The unique tangent hyperplane at an on-quadric point: the covector
    /// B(pt, ·). Total in every characteristic — in characteristic 2 the
    /// bilinearization is alternating but still non-degenerate in odd
    /// projective dimension.
    pub fn polar_hyperplane(&self, pt: &ProjPoint) -> Result<Hyperplane, QuadricError> {
        if !self.form.evaluate(pt).is_zero() {
            return Err(QuadricError::NotOnQuadric);
        }
        let f = self.space().field();
        let m = self.bilinear.len();
        let mut covector = vec![Elem::ZERO; m];
        for (j, w) in covector.iter_mut().enumerate() {
            let mut acc = Elem::ZERO;
            for (i, &x) in pt.coords().iter().enumerate() {
                acc = f.add(acc, f.mul(x, self.bilinear[i][j]));
            }
            *w = acc;
        }
        self.space()
            .hyperplane_from(&covector)
            .map_err(|_| QuadricError::SingularForm {
                expected: self.table.quadric_size,
                observed: 0,
            })
    }

    /// The canonical family Σ±: all hyperplanes meeting the quadric in h1
    /// points. Size = q^n (q^(n+1) ∓ 1).
    pub fn parabolic_family(&self) -> HyperplaneFamily {
        let members: Vec<Hyperplane> = self
            .space()
            .hyperplanes()
            .into_iter()
            .filter(|h| self.section_size(h) == self.table.h1)
            .collect();
        HyperplaneFamily::new(self.space().clone(), self.sign(), members)
            .expect("canonical family is nonempty and canonical")
    }
}
