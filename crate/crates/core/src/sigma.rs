//! Analysis of hyperplane families Σ± of PG(2n+1,q): the two point/subspace
//! axioms, the black/white point partition, the derived counting ladder, and
//! final classification with regenerating witnesses.
//!
//! A family is tested against two axioms:
//!
//! - (P1) every point lies on q^n(q^n ∓ 1) or q^(2n) members;
//! - (P2) every codimension-2 subspace inside at least one member lies inside
//!   at least q-1 members.
//!
//! Points meeting the first degree are *black*, the second *white*. Every
//! counting identity that provably follows from the axioms is re-verified on
//! the actual family; a discrepancy is a first-class report entry, never a
//! silent pass.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::Elem;
use crate::linalg;
use crate::pg::{scan_canonical_vectors, Codim2Subspace, Hyperplane, ProjPoint, ProjSpace};
use crate::quadric::{CountTable, Kind, QuadraticForm, Quadric, Sign};

const FIT_CANDIDATE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaError {
    EmptyFamily,
    /// Families live in odd projective dimension 2n+1.
    EvenDimension { k: usize },
    /// The smallest supported ambient space is PG(3,q) (n = 1).
    DimensionTooSmall { k: usize },
    DuplicateMember,
    NonCanonicalMember,
    /// The operation needs the black/white partition, but (P1) fails.
    P1Violated,
    /// The operation is specific to PG(3,q).
    WrongDimension { k: usize },
    NotAnOvoid,
    /// classify requires both (P1) and (P2).
    PreconditionFailed,
}

impl fmt::Display for SigmaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaError::EmptyFamily => write!(f, "hyperplane family is empty"),
            SigmaError::EvenDimension { k } => {
                write!(f, "families need odd projective dimension, got {k}")
            }
            SigmaError::DimensionTooSmall { k } => {
                write!(f, "families need projective dimension at least 3, got {k}")
            }
            SigmaError::DuplicateMember => write!(f, "duplicate member hyperplane"),
            SigmaError::NonCanonicalMember => write!(f, "member covector is not canonical"),
            SigmaError::P1Violated => write!(f, "point degrees violate the two-degree axiom"),
            SigmaError::WrongDimension { k } => {
                write!(f, "operation needs PG(3,q), got dimension {k}")
            }
            SigmaError::NotAnOvoid => write!(f, "point set is not an ovoid"),
            SigmaError::PreconditionFailed => {
                write!(f, "classification requires both axioms to hold")
            }
        }
    }
}

impl core::error::Error for SigmaError {}

/// A candidate family Σ±: a set of distinct canonical hyperplanes of an
/// odd-dimensional space, read under a fixed sign convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneFamily {
    space: ProjSpace,
    sign: Sign,
    members: Vec<Hyperplane>,
}

/// Point partition induced by the degree axiom (P1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P1Report {
    pub holds: bool,
    /// Points of degree q^n(q^n ∓ 1), in enumeration order.
    pub black: Vec<ProjPoint>,
    /// Points of degree q^(2n), in enumeration order.
    pub white: Vec<ProjPoint>,
    /// Points with neither degree, with their observed degrees.
    pub violations: Vec<(ProjPoint, u64)>,
}

/// Pencil multiplicity statistics for the covering axiom (P2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P2Report {
    pub holds: bool,
    /// s ↦ number of codimension-2 subspaces lying in exactly s members,
    /// over the subspaces covered by at least one member.
    pub multiplicity_histogram: BTreeMap<u64, u64>,
    /// Subspaces in no member at all; exempt from the axiom.
    pub uncovered: u64,
    /// Covered subspaces with 1 ≤ s ≤ q-2.
    pub violations: Vec<(Codim2Subspace, u64)>,
}

/// The verdict of the classification, carrying a witness that regenerates
/// the family exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    ParabolicOfHyperbolic {
        form: QuadraticForm,
    },
    ParabolicOfElliptic {
        form: QuadraticForm,
    },
    OvoidSecant {
        ovoid: Vec<ProjPoint>,
        /// An elliptic form whose point set is exactly the ovoid, when one
        /// was found. `None` never asserts non-classicality.
        classical: Option<QuadraticForm>,
    },
    LineTransversal {
        line: Codim2Subspace,
    },
    Unknown,
}

impl Classification {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Classification::ParabolicOfHyperbolic { .. } => VerdictKind::ParabolicOfHyperbolic,
            Classification::ParabolicOfElliptic { .. } => VerdictKind::ParabolicOfElliptic,
            Classification::OvoidSecant { .. } => VerdictKind::OvoidSecant,
            Classification::LineTransversal { .. } => VerdictKind::LineTransversal,
            Classification::Unknown => VerdictKind::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictKind {
    ParabolicOfHyperbolic,
    ParabolicOfElliptic,
    OvoidSecant,
    LineTransversal,
    Unknown,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::ParabolicOfHyperbolic => "parabolic_of_hyperbolic",
            VerdictKind::ParabolicOfElliptic => "parabolic_of_elliptic",
            VerdictKind::OvoidSecant => "ovoid_secant",
            VerdictKind::LineTransversal => "line_transversal",
            VerdictKind::Unknown => "unknown",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// A counting identity that provably follows from the axioms but failed on
/// the observed family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremViolation {
    /// |Σ| must be divisible by q^n under (P1).
    SizeNotDivisible { members: u64, modulus: u64 },
    /// b·(black degree) + w·(white degree) must equal |Σ|·θ(2n,q).
    IncidenceIdentity { lhs: u128, rhs: u128 },
    /// r = |Σ|/q^n must be q^(n+1) ∓ 1, or additionally q²+q when
    /// (n, sign) = (1, Minus).
    ROutsideLadder { r: u64, admissible: Vec<u64> },
    /// The black total does not match the value forced by r.
    BlackTotalMismatch { observed: u64, expected: u64 },
    /// A member hyperplane holds the wrong number of black points.
    MemberBlackCount { observed: u64, expected: u64, hyperplanes: u64 },
    /// A non-member hyperplane holds the wrong number of black points.
    NonMemberBlackCount { observed: u64, expected: u64, hyperplanes: u64 },
    /// A codimension-2 subspace holds a black count outside the admissible
    /// section values.
    Codim2BlackCount { observed: u64, admissible: Vec<u64>, subspaces: u64 },
    /// In the (n=1, Minus, r=q²+q) branch the white points must form a line.
    WhiteNotALine { white: u64 },
    /// In the same branch the family must be exactly the planes meeting the
    /// white line in a unique point.
    NotLineComplementFamily,
}

impl fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremViolation::SizeNotDivisible { members, modulus } => {
                write!(f, "family size {members} is not divisible by q^n = {modulus}")
            }
            TheoremViolation::IncidenceIdentity { lhs, rhs } => {
                write!(f, "point-degree double count {lhs} != {rhs}")
            }
            TheoremViolation::ROutsideLadder { r, admissible } => {
                write!(f, "r = {r} outside the admissible values {admissible:?}")
            }
            TheoremViolation::BlackTotalMismatch { observed, expected } => {
                write!(f, "black point total {observed}, forced value {expected}")
            }
            TheoremViolation::MemberBlackCount { observed, expected, hyperplanes } => {
                write!(
                    f,
                    "{hyperplanes} member hyperplane(s) hold {observed} black points, expected {expected}"
                )
            }
            TheoremViolation::NonMemberBlackCount { observed, expected, hyperplanes } => {
                write!(
                    f,
                    "{hyperplanes} non-member hyperplane(s) hold {observed} black points, expected {expected}"
                )
            }
            TheoremViolation::Codim2BlackCount { observed, admissible, subspaces } => {
                write!(
                    f,
                    "{subspaces} codim-2 subspace(s) hold {observed} black points, admissible {admissible:?}"
                )
            }
            TheoremViolation::WhiteNotALine { white } => {
                write!(f, "the {white} white points do not form a line")
            }
            TheoremViolation::NotLineComplementFamily => {
                write!(f, "family is not the set of planes meeting the white line once")
            }
        }
    }
}

/// The full ledger of quantities derived from one family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyAnalysis {
    pub n: u32,
    pub q: u64,
    pub sign: Sign,
    pub members: u64,
    pub p1: P1Report,
    pub p2: P2Report,
    /// Number of black points.
    pub b: u64,
    /// Number of white points.
    pub w: u64,
    /// |Σ| / q^n when the division is exact.
    pub r: Option<u64>,
    pub point_degree_histogram: BTreeMap<u64, u64>,
    /// black count ↦ number of member hyperplanes; filled when (P1) holds.
    pub black_per_member: BTreeMap<u64, u64>,
    /// black count ↦ number of non-member hyperplanes; filled when (P1) holds.
    pub black_per_nonmember: BTreeMap<u64, u64>,
    /// black count ↦ number of codim-2 subspaces; filled when (P1) holds.
    pub codim2_black_histogram: BTreeMap<u64, u64>,
    pub theorem_violations: Vec<TheoremViolation>,
    pub verdict: Classification,
}

impl HyperplaneFamily {
    /// Sorts and validates the members: nonempty, canonical, distinct, odd
    /// ambient dimension.
    pub fn new(
        space: ProjSpace,
        sign: Sign,
        mut members: Vec<Hyperplane>,
    ) -> Result<HyperplaneFamily, SigmaError> {
        if space.k().is_multiple_of(2) {
            return Err(SigmaError::EvenDimension { k: space.k() });
        }
        if space.k() < 3 {
            return Err(SigmaError::DimensionTooSmall { k: space.k() });
        }
        if members.is_empty() {
            return Err(SigmaError::EmptyFamily);
        }
        for h in &members {
            match space.canonicalize(h.covector()) {
                Ok(c) if c == h.covector() => {}
                _ => return Err(SigmaError::NonCanonicalMember),
            }
        }
        members.sort();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(SigmaError::DuplicateMember);
        }
        Ok(HyperplaneFamily { space, sign, members })
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Members in canonical sorted order.
    pub fn members(&self) -> &[Hyperplane] {
        &self.members
    }

    pub fn n(&self) -> u32 {
        (self.space.k() as u32 - 1) / 2
    }

    pub fn q(&self) -> u64 {
        self.space.q()
    }

    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.members.binary_search(h).is_ok()
    }

    /// The expected degrees and section sizes for this (n, q, sign).
    pub fn expected(&self) -> CountTable {
        CountTable::new(self.n(), self.q(), self.sign)
    }

    /// Member count through each point, aligned with `space.points()` order.
    /// The degrees sum to |Σ|·θ(2n,q).
    pub fn point_degrees(&self) -> Vec<u64> {
        self.space
            .points()
            .iter()
            .map(|p| {
                self.members
                    .iter()
                    .filter(|h| self.space.incident(p, h))
                    .count() as u64
            })
            .collect()
    }

    /// Partitions the points by degree against the sign's two admissible
    /// values.
    pub fn check_p1(&self) -> P1Report {
        let points = self.space.points();
        let degrees = self.point_degrees();
        self.partition_points(&points, &degrees)
    }

    fn partition_points(&self, points: &[ProjPoint], degrees: &[u64]) -> P1Report {
        let table = self.expected();
        let mut black = Vec::new();
        let mut white = Vec::new();
        let mut violations = Vec::new();
        for (p, &d) in points.iter().zip(degrees) {
            if d == table.black_degree {
                black.push(p.clone());
            } else if d == table.white_degree {
                white.push(p.clone());
            } else {
                violations.push((p.clone(), d));
            }
        }
        P1Report {
            holds: violations.is_empty(),
            black,
            white,
            violations,
        }
    }

    /// Pencil multiplicities s over all codimension-2 subspaces. A covered
    /// subspace (s ≥ 1) must reach s ≥ q-1; uncovered ones are exempt.
    pub fn check_p2(&self) -> P2Report {
        self.sweep_codim2(None).0
    }

    /// Single sweep computing the (P2) statistics and, when a black set is
    /// supplied, the black-count histogram over codim-2 subspaces.
    fn sweep_codim2(&self, black: Option<&[ProjPoint]>) -> (P2Report, BTreeMap<u64, u64>) {
        let q = self.q();
        let member_set: BTreeSet<&Hyperplane> = self.members.iter().collect();
        let mut histogram = BTreeMap::new();
        let mut uncovered = 0u64;
        let mut violations = Vec::new();
        let mut black_histogram = BTreeMap::new();
        for sub in self.space.codim2_subspaces() {
            let s = self
                .space
                .pencil(&sub)
                .iter()
                .filter(|h| member_set.contains(h))
                .count() as u64;
            if s == 0 {
                uncovered += 1;
            } else {
                *histogram.entry(s).or_insert(0u64) += 1;
                if s < q - 1 {
                    violations.push((sub.clone(), s));
                }
            }
            if let Some(black) = black {
                let count = black.iter().filter(|p| self.space.in_codim2(p, &sub)).count() as u64;
                *black_histogram.entry(count).or_insert(0u64) += 1;
            }
        }
        (
            P2Report {
                holds: violations.is_empty(),
                multiplicity_histogram: histogram,
                uncovered,
                violations,
            },
            black_histogram,
        )
    }

    /// The black point class. Requires (P1).
    pub fn black_set(&self) -> Result<Vec<ProjPoint>, SigmaError> {
        let p1 = self.check_p1();
        if p1.holds {
            Ok(p1.black)
        } else {
            Err(SigmaError::P1Violated)
        }
    }

    /// Runs the whole derivation ladder: both axioms, the black/white
    /// bookkeeping, every counting identity the axioms force, and the final
    /// classification. Inconsistencies land in `theorem_violations`.
    pub fn analyze(&self) -> FamilyAnalysis {
        let n = self.n();
        let q = self.q();
        let table = self.expected();
        let members = self.members.len() as u64;
        let q_pow_n = q.pow(n);

        let points = self.space.points();
        let degrees = self.point_degrees();
        let mut point_degree_histogram = BTreeMap::new();
        for &d in &degrees {
            *point_degree_histogram.entry(d).or_insert(0u64) += 1;
        }
        let p1 = self.partition_points(&points, &degrees);
        let b = p1.black.len() as u64;
        let w = p1.white.len() as u64;
        let r = members.is_multiple_of(q_pow_n).then(|| members / q_pow_n);

        let (p2, codim2_black_histogram) =
            self.sweep_codim2(p1.holds.then_some(p1.black.as_slice()));

        let member_set: BTreeSet<&Hyperplane> = self.members.iter().collect();
        let mut black_per_member = BTreeMap::new();
        let mut black_per_nonmember = BTreeMap::new();
        if p1.holds {
            for h in self.space.hyperplanes() {
                let blacks = p1
                    .black
                    .iter()
                    .filter(|p| self.space.incident(p, &h))
                    .count() as u64;
                if member_set.contains(&h) {
                    *black_per_member.entry(blacks).or_insert(0u64) += 1;
                } else {
                    *black_per_nonmember.entry(blacks).or_insert(0u64) += 1;
                }
            }
        }

        let mut violations = Vec::new();
        if p1.holds {
            let lhs =
                b as u128 * table.black_degree as u128 + w as u128 * table.white_degree as u128;
            let rhs = members as u128 * self.space.hyperplanes_per_point() as u128;
            if lhs != rhs {
                violations.push(TheoremViolation::IncidenceIdentity { lhs, rhs });
            }

            match r {
                None => violations.push(TheoremViolation::SizeNotDivisible {
                    members,
                    modulus: q_pow_n,
                }),
                Some(r) => self.check_r_ladder(
                    r,
                    b,
                    &table,
                    &p1,
                    p2.holds,
                    &black_per_member,
                    &black_per_nonmember,
                    &codim2_black_histogram,
                    &mut violations,
                ),
            }
        }

        let verdict = if p1.holds && p2.holds {
            self.classify_partition(&p1.black, &p1.white)
        } else {
            Classification::Unknown
        };

        FamilyAnalysis {
            n,
            q,
            sign: self.sign,
            members,
            p1,
            p2,
            b,
            w,
            r,
            point_degree_histogram,
            black_per_member,
            black_per_nonmember,
            codim2_black_histogram,
            theorem_violations: violations,
            verdict,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn check_r_ladder(
        &self,
        r: u64,
        b: u64,
        table: &CountTable,
        p1: &P1Report,
        p2_holds: bool,
        black_per_member: &BTreeMap<u64, u64>,
        black_per_nonmember: &BTreeMap<u64, u64>,
        codim2_black_histogram: &BTreeMap<u64, u64>,
        violations: &mut Vec<TheoremViolation>,
    ) {
        let n = self.n();
        let q = self.q();
        let admissible = admissible_r(n, q, self.sign);
        if !admissible.contains(&r) {
            violations.push(TheoremViolation::ROutsideLadder { r, admissible });
            return;
        }
        let expected_b =
            black_total_from_r(n, q, self.sign, r).expect("admissible r gives an integral total");
        if b != expected_b {
            violations.push(TheoremViolation::BlackTotalMismatch {
                observed: b,
                expected: expected_b,
            });
        }
        let canonical_r = match self.sign {
            Sign::Plus => q.pow(n + 1) - 1,
            Sign::Minus => q.pow(n + 1) + 1,
        };
        if r == canonical_r {
            check_uniform(black_per_member, table.black_in_sigma_plane, violations, |o, h, e| {
                TheoremViolation::MemberBlackCount { observed: o, expected: e, hyperplanes: h }
            });
            check_uniform(
                black_per_nonmember,
                table.black_in_other_plane,
                violations,
                |o, h, e| TheoremViolation::NonMemberBlackCount {
                    observed: o,
                    expected: e,
                    hyperplanes: h,
                },
            );
            if p2_holds {
                let admissible_blacks = table.codim2_sections();
                for (&observed, &count) in codim2_black_histogram {
                    if !admissible_blacks.contains(&observed) {
                        violations.push(TheoremViolation::Codim2BlackCount {
                            observed,
                            admissible: admissible_blacks.clone(),
                            subspaces: count,
                        });
                    }
                }
            }
        } else {
            // n = 1, Minus, r = q²+q: black is a line complement.
            check_uniform(black_per_member, q * q + q, violations, |o, h, e| {
                TheoremViolation::MemberBlackCount { observed: o, expected: e, hyperplanes: h }
            });
            check_uniform(black_per_nonmember, q * q, violations, |o, h, e| {
                TheoremViolation::NonMemberBlackCount { observed: o, expected: e, hyperplanes: h }
            });
            match as_line(&self.space, &p1.white) {
                None => violations.push(TheoremViolation::WhiteNotALine {
                    white: p1.white.len() as u64,
                }),
                Some(line) => {
                    let regenerated =
                        line_transversal_family(&self.space, &line).expect("ambient is PG(3,q)");
                    if regenerated.members != self.members {
                        violations.push(TheoremViolation::NotLineComplementFamily);
                    }
                }
            }
        }
    }

    /// Classification alone; errors unless both axioms hold.
    pub fn classify(&self) -> Result<Classification, SigmaError> {
        let p1 = self.check_p1();
        if !p1.holds || !self.check_p2().holds {
            return Err(SigmaError::PreconditionFailed);
        }
        Ok(self.classify_partition(&p1.black, &p1.white))
    }

    fn classify_partition(&self, black: &[ProjPoint], white: &[ProjPoint]) -> Classification {
        match (self.sign, self.n()) {
            (Sign::Plus, _) => match self.try_regenerating_quadric(black, Kind::Hyperbolic) {
                Some(form) => Classification::ParabolicOfHyperbolic { form },
                None => Classification::Unknown,
            },
            (Sign::Minus, n) if n >= 2 => {
                match self.try_regenerating_quadric(black, Kind::Elliptic) {
                    Some(form) => Classification::ParabolicOfElliptic { form },
                    None => Classification::Unknown,
                }
            }
            (Sign::Minus, _) => {
                if is_ovoid(&self.space, black) == Ok(true) {
                    if let Ok(fam) = ovoid_secant_family(&self.space, black) {
                        if fam.members == self.members {
                            let classical = fit_quadric(&self.space, black, Kind::Elliptic);
                            return Classification::OvoidSecant {
                                ovoid: black.to_vec(),
                                classical,
                            };
                        }
                    }
                }
                if let Some(line) = as_line(&self.space, white) {
                    if let Ok(fam) = line_transversal_family(&self.space, &line) {
                        if fam.members == self.members {
                            return Classification::LineTransversal { line };
                        }
                    }
                }
                Classification::Unknown
            }
        }
    }

    /// A non-singular form of the given kind whose point set is exactly
    /// `black` and whose parabolic family is exactly this family.
    fn try_regenerating_quadric(&self, black: &[ProjPoint], kind: Kind) -> Option<QuadraticForm> {
        if black.len() as u64 != self.expected().quadric_size {
            return None;
        }
        let form = fit_quadric(&self.space, black, kind)?;
        let quad = Quadric::new(form.clone()).ok()?;
        (quad.parabolic_family().members == self.members).then_some(form)
    }
}

fn check_uniform(
    histogram: &BTreeMap<u64, u64>,
    expected: u64,
    violations: &mut Vec<TheoremViolation>,
    make: impl Fn(u64, u64, u64) -> TheoremViolation,
) {
    for (&observed, &count) in histogram {
        if observed != expected {
            violations.push(make(observed, count, expected));
        }
    }
}

/// The r values a (P1)-passing family can have: q^(n+1) ∓ 1, plus q²+q when
/// (n, sign) = (1, Minus).
pub fn admissible_r(n: u32, q: u64, sign: Sign) -> Vec<u64> {
    match sign {
        Sign::Plus => vec![q.pow(n + 1) - 1],
        Sign::Minus if n == 1 => vec![q * q + 1, q * q + q],
        Sign::Minus => vec![q.pow(n + 1) + 1],
    }
}

/// The black total forced by r through the member-pair triple count:
/// b = (q^n ± 1)·[± q^n(q^(2n+2) - 1) ∓ r(q^n·r - 1)] / ((q-1)(2q^n ± 1)).
/// Returns None when the expression is not a non-negative integer.
pub fn black_total_from_r(n: u32, q: u64, sign: Sign, r: u64) -> Option<u64> {
    let qn = ipow(q, n);
    let r = r as i128;
    let inner = qn * (ipow(q, 2 * n + 2) - 1) - r * (qn * r - 1);
    let (num, den) = match sign {
        Sign::Plus => ((qn + 1) * inner, (q as i128 - 1) * (2 * qn + 1)),
        Sign::Minus => ((qn - 1) * -inner, (q as i128 - 1) * (2 * qn - 1)),
    };
    if num % den != 0 || num / den < 0 {
        return None;
    }
    Some((num / den) as u64)
}

fn ipow(q: u64, e: u32) -> i128 {
    let mut out = 1i128;
    for _ in 0..e {
        out *= q as i128;
    }
    out
}

/// True iff every hyperplane meets `pts` in h1 or h2 points for the sign's
/// count table — the defining property of a quasi-quadric.
pub fn is_quasi_quadric(space: &ProjSpace, pts: &[ProjPoint], sign: Sign) -> bool {
    assert!(space.k() % 2 == 1, "quasi-quadrics need odd dimension");
    let n = (space.k() as u32 - 1) / 2;
    let table = CountTable::new(n, space.q(), sign);
    space.hyperplanes().iter().all(|h| {
        let size = pts.iter().filter(|p| space.incident(p, h)).count() as u64;
        size == table.h1 || size == table.h2
    })
}

/// True iff `pts` is an ovoid of PG(3,q): q²+1 points, no three collinear.
pub fn is_ovoid(space: &ProjSpace, pts: &[ProjPoint]) -> Result<bool, SigmaError> {
    if space.k() != 3 {
        return Err(SigmaError::WrongDimension { k: space.k() });
    }
    let q = space.q();
    if pts.len() as u64 != q * q + 1 {
        return Ok(false);
    }
    for line in space.codim2_subspaces() {
        let on = pts.iter().filter(|p| space.in_codim2(p, &line)).count();
        if on >= 3 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All planes meeting the ovoid in exactly q+1 points (the secant planes),
/// read under the Minus sign. Size q(q²+1).
pub fn ovoid_secant_family(
    space: &ProjSpace,
    pts: &[ProjPoint],
) -> Result<HyperplaneFamily, SigmaError> {
    if !is_ovoid(space, pts)? {
        return Err(SigmaError::NotAnOvoid);
    }
    let q = space.q();
    let members: Vec<Hyperplane> = space
        .hyperplanes()
        .into_iter()
        .filter(|h| pts.iter().filter(|p| space.incident(p, h)).count() as u64 == q + 1)
        .collect();
    HyperplaneFamily::new(space.clone(), Sign::Minus, members)
}

/// All planes of PG(3,q) meeting the line in a unique point, i.e. the q³+q²
/// planes not containing it, read under the Minus sign.
pub fn line_transversal_family(
    space: &ProjSpace,
    line: &Codim2Subspace,
) -> Result<HyperplaneFamily, SigmaError> {
    if space.k() != 3 {
        return Err(SigmaError::WrongDimension { k: space.k() });
    }
    let pencil: BTreeSet<Hyperplane> = space.pencil(line).into_iter().collect();
    let members: Vec<Hyperplane> = space
        .hyperplanes()
        .into_iter()
        .filter(|h| !pencil.contains(h))
        .collect();
    HyperplaneFamily::new(space.clone(), Sign::Minus, members)
}

/// The line whose point set is exactly `pts`, when there is one.
pub fn as_line(space: &ProjSpace, pts: &[ProjPoint]) -> Option<Codim2Subspace> {
    if pts.len() as u64 != space.q() + 1 || pts.len() < 2 {
        return None;
    }
    // Forms vanishing on the first two points; for k = 3 they span the dual
    // basis of the line through them.
    let constraints = vec![pts[0].coords().to_vec(), pts[1].coords().to_vec()];
    let forms = linalg::nullspace(space.field(), &constraints, space.k() + 1);
    let line = space.codim2_from_forms(&forms)?;
    pts.iter()
        .all(|p| space.in_codim2(p, &line))
        .then_some(line)
}

/// Bose–Burton style blocking check inside one plane of PG(3,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockingReport {
    /// Every line of the plane meets the point set.
    pub blocks: bool,
    /// Blocking with the minimum size q+1.
    pub minimal: bool,
    /// The point set is exactly a line (verified directly).
    pub is_line: bool,
}

/// Checks whether `pts` (a subset of the plane) meets every line of the
/// plane, and whether it does so with the minimum possible size q+1, which
/// forces it to be a line.
pub fn is_blocking_set(space: &ProjSpace, pts: &[ProjPoint], plane: &Hyperplane) -> BlockingReport {
    assert_eq!(space.k(), 3, "blocking sets are checked inside a plane of PG(3,q)");
    assert!(
        pts.iter().all(|p| space.incident(p, plane)),
        "point set must lie inside the plane"
    );
    let q = space.q();
    let blocks = space
        .codim2_subspaces()
        .iter()
        .filter(|line| space.pencil(line).contains(plane))
        .all(|line| pts.iter().any(|p| space.in_codim2(p, line)));
    let minimal = blocks && pts.len() as u64 == q + 1;
    let is_line = as_line(space, pts).is_some();
    BlockingReport { blocks, minimal, is_line }
}

/// A non-singular form of `kind` whose point set is exactly `pts`, found by
/// solving for all forms vanishing on `pts` and filtering by regeneration.
/// Deterministic: candidates are scanned in canonical order.
#[allow(clippy::needless_range_loop)]
pub fn fit_quadric(space: &ProjSpace, pts: &[ProjPoint], kind: Kind) -> Option<QuadraticForm> {
    if pts.is_empty() {
        return None;
    }
    let k = space.k();
    let ncols = (k + 1) * (k + 2) / 2;
    let constraints: Vec<Vec<Elem>> = pts.iter().map(|p| monomials(space, p)).collect();
    let basis = linalg::nullspace(space.field(), &constraints, ncols);
    if basis.is_empty() {
        return None;
    }

    let mut found: Option<QuadraticForm> = None;
    let mut scanned = 0usize;
    scan_canonical_vectors(space.field(), basis.len(), |combo| {
        scanned += 1;
        if scanned > FIT_CANDIDATE_CAP {
            return false;
        }
        let f = space.field();
        let mut flat = vec![Elem::ZERO; ncols];
        for (c, basis_vec) in combo.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            for (slot, &bv) in flat.iter_mut().zip(basis_vec) {
                *slot = f.add(*slot, f.mul(*c, bv));
            }
        }
        let mut coeffs = vec![vec![Elem::ZERO; k + 1]; k + 1];
        let mut idx = 0;
        for i in 0..=k {
            for j in i..=k {
                coeffs[i][j] = flat[idx];
                idx += 1;
            }
        }
        let Ok(form) = QuadraticForm::from_coeffs(space.clone(), kind, coeffs) else {
            return true;
        };
        if form.point_set() == pts {
            found = Some(form);
            return false;
        }
        true
    });
    found
}

/// The row of quadratic monomial values x_i·x_j (i ≤ j) at a point.
fn monomials(space: &ProjSpace, p: &ProjPoint) -> Vec<Elem> {
    let f = space.field();
    let k = space.k();
    let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
    for i in 0..=k {
        for j in i..=k {
            out.push(f.mul(p.coords()[i], p.coords()[j]));
        }
    }
    out
}
