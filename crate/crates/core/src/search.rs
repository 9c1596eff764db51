//! Converse verification: exhaustive and pruned searches for hyperplane
//! families satisfying both axioms, plus a pure-arithmetic suite validating
//! the counting identities behind the derivation ladder.
//!
//! Pruning uses only necessary conditions that follow from (P1) by counting
//! — point-degree windows and the admissible size ladder — never the
//! classification itself, so a search remains able to surface families the
//! classification does not expect.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::Gf;
use crate::pg::{Hyperplane, ProjSpace};
use crate::quadric::{CountTable, Sign};
use crate::sigma::{FamilyAnalysis, HyperplaneFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchError {
    /// The divisibility lemma excludes the (n=1, Minus) case.
    OutOfLemmaScope { n: u32, sign: Sign },
    /// k must satisfy 1 ≤ k ≤ q.
    KOutOfRange { k: u64, q: u64 },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::OutOfLemmaScope { n, sign } => {
                write!(f, "divisibility lemma does not cover n={n} with sign {sign}")
            }
            SearchError::KOutOfRange { k, q } => write!(f, "k={k} outside 1..={q}"),
        }
    }
}

impl core::error::Error for SearchError {}

/// Budgets for the backtracking search. The time budget is enforced through
/// the observer so the core stays clock-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_budget: u64,
    pub report_every: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: 200_000_000,
            report_every: 1 << 20,
        }
    }
}

/// Callbacks invoked every `report_every` nodes; `should_stop` lets the
/// caller impose wall-clock budgets.
pub trait SearchObserver {
    fn progress(&mut self, _nodes: u64) {}
    fn should_stop(&mut self) -> bool {
        false
    }
}

/// Observer that never reports and never stops.
pub struct NoopObserver;

impl SearchObserver for NoopObserver {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopCause {
    Completed,
    NodeBudget,
    /// The observer requested a stop (typically a time budget).
    ObserverStop,
}

/// Families found by a search, each with its full independent re-analysis.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub families: Vec<(HyperplaneFamily, FamilyAnalysis)>,
    /// True only when the whole space was enumerated within budget.
    pub exhaustive: bool,
    pub nodes_explored: u64,
    pub stop: StopCause,
}

const PG32_PLANES: usize = 15;

/// The per-point masks of planes through each point of PG(3,2), in
/// enumeration order: masks[p] has bit h set iff point p lies on plane h.
fn pg32_incidence(space: &ProjSpace) -> Vec<u16> {
    let points = space.points();
    let hyperplanes = space.hyperplanes();
    points
        .iter()
        .map(|p| {
            let mut mask = 0u16;
            for (h_idx, h) in hyperplanes.iter().enumerate() {
                if space.incident(p, h) {
                    mask |= 1 << h_idx;
                }
            }
            mask
        })
        .collect()
}

/// Subset masks in `start..end` whose point degrees all hit one of the two
/// admissible values for the sign. Pure filter, safe to run on disjoint
/// ranges concurrently.
pub fn pg32_survivor_masks(sign: Sign, start: u32, end: u32) -> Vec<u32> {
    let space = ProjSpace::new(3, Gf::new(2).unwrap());
    let table = CountTable::new(1, 2, sign);
    let point_masks = pg32_incidence(&space);
    let (black, white) = (table.black_degree as u32, table.white_degree as u32);
    let mut out = Vec::new();
    for mask in start.max(1)..end {
        let ok = point_masks.iter().all(|&pm| {
            let d = (mask & pm as u32).count_ones();
            d == black || d == white
        });
        if ok {
            out.push(mask);
        }
    }
    out
}

/// Materializes the family encoded by a plane-subset mask of PG(3,2).
pub fn pg32_family_from_mask(sign: Sign, mask: u32) -> HyperplaneFamily {
    let space = ProjSpace::new(3, Gf::new(2).unwrap());
    let members: Vec<Hyperplane> = space
        .hyperplanes()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, h)| h)
        .collect();
    HyperplaneFamily::new(space, sign, members).expect("mask is nonempty")
}

/// Enumerates all 2^15 plane subsets of PG(3,2) and keeps the nonempty ones
/// passing both axioms, fully analyzed and classified. Always exhaustive.
pub fn exhaustive_search_pg32(sign: Sign) -> SearchResult {
    let full = 1u32 << PG32_PLANES;
    let masks = pg32_survivor_masks(sign, 1, full);
    let mut families: Vec<(HyperplaneFamily, FamilyAnalysis)> = masks
        .into_iter()
        .filter_map(|mask| {
            let family = pg32_family_from_mask(sign, mask);
            let analysis = family.analyze();
            (analysis.p1.holds && analysis.p2.holds).then_some((family, analysis))
        })
        .collect();
    families.sort_by(|a, b| a.0.members().cmp(b.0.members()));
    SearchResult {
        families,
        exhaustive: true,
        nodes_explored: (full - 1) as u64,
        stop: StopCause::Completed,
    }
}

/// The admissible family sizes q^n·r with r inside the counting ladder's
/// interval — r ∈ [q^(n+1)-q, q^(n+1)-1] for Plus, [q^(n+1)+1, q^(n+1)+q]
/// for Minus — keeping only the r values whose forced black total is a
/// non-negative integer. Necessary conditions for (P1), arithmetic only.
pub fn admissible_sizes(n: u32, q: u64, sign: Sign) -> Vec<u64> {
    let qn = q.pow(n);
    let qn1 = q.pow(n + 1);
    let rs = match sign {
        Sign::Plus => (qn1 - q)..=(qn1 - 1),
        Sign::Minus => (qn1 + 1)..=(qn1 + q),
    };
    rs.filter(|&r| crate::sigma::black_total_from_r(n, q, sign, r).is_some())
        .map(|r| qn * r)
        .collect()
}

/// Which final degrees a point can still reach, given its current degree
/// and the number of undecided hyperplanes through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reach {
    Dead,
    BlackOnly,
    WhiteOnly,
    Either,
}

struct Dfs {
    space: ProjSpace,
    sign: Sign,
    points_of: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    remaining: Vec<u32>,
    reach: Vec<Reach>,
    /// Points that can only end black / only white / either.
    black_only: u64,
    white_only: u64,
    either: u64,
    black: u32,
    white: u32,
    /// (admissible size, black total it forces), ascending by size.
    targets: Vec<(u64, u64)>,
    chosen: Vec<usize>,
    nodes: u64,
    limits: SearchLimits,
    found: Vec<(HyperplaneFamily, FamilyAnalysis)>,
    stop: Option<StopCause>,
}

impl Dfs {
    fn reach_of(&self, p: u32) -> Reach {
        let c = self.degrees[p as usize];
        let m = self.remaining[p as usize];
        let can_black = c <= self.black && self.black <= c + m;
        let can_white = c <= self.white && self.white <= c + m;
        match (can_black, can_white) {
            (true, true) => Reach::Either,
            (true, false) => Reach::BlackOnly,
            (false, true) => Reach::WhiteOnly,
            (false, false) => Reach::Dead,
        }
    }

    fn tally(&mut self, r: Reach, delta: i64) {
        let slot = match r {
            Reach::BlackOnly => &mut self.black_only,
            Reach::WhiteOnly => &mut self.white_only,
            Reach::Either => &mut self.either,
            Reach::Dead => return,
        };
        *slot = slot.checked_add_signed(delta).expect("tally underflow");
    }

    /// Applies a degree/remaining change to the points of one hyperplane and
    /// keeps the reach tallies current. Returns false if any point dies.
    fn update(&mut self, points: &[u32], d_degree: i32, d_remaining: i32) -> bool {
        let mut alive = true;
        for &p in points {
            let old = self.reach[p as usize];
            self.tally(old, -1);
            let pu = p as usize;
            self.degrees[pu] = (self.degrees[pu] as i32 + d_degree) as u32;
            self.remaining[pu] = (self.remaining[pu] as i32 + d_remaining) as u32;
            let new = self.reach_of(p);
            self.reach[pu] = new;
            self.tally(new, 1);
            alive &= new != Reach::Dead;
        }
        alive
    }

    /// Some admissible size must be reachable, and its forced black total
    /// must fit between the committed black points and the still-flexible
    /// ones.
    fn window_feasible(&self, undecided: usize) -> bool {
        let cur = self.chosen.len() as u64;
        let max = cur + undecided as u64;
        self.targets.iter().any(|&(s, b)| {
            cur <= s && s <= max && self.black_only <= b && b <= self.black_only + self.either
        })
    }

    fn run(&mut self, i: usize, hyperplanes: &[Hyperplane], observer: &mut dyn SearchObserver) {
        if self.stop.is_some() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limits.node_budget {
            self.stop = Some(StopCause::NodeBudget);
            return;
        }
        if self.nodes.is_multiple_of(self.limits.report_every) {
            observer.progress(self.nodes);
            if observer.should_stop() {
                self.stop = Some(StopCause::ObserverStop);
                return;
            }
        }
        if !self.window_feasible(hyperplanes.len() - i) {
            return;
        }
        if i == hyperplanes.len() {
            self.record(hyperplanes);
            return;
        }

        let touched = core::mem::take(&mut self.points_of[i]);

        // Include branch.
        if self.update(&touched, 1, -1) {
            self.chosen.push(i);
            self.run(i + 1, hyperplanes, observer);
            self.chosen.pop();
        }
        // Skip branch: undo the degree, keep `remaining` decremented.
        let alive = self.update(&touched, -1, 0);
        if alive && self.stop.is_none() {
            self.run(i + 1, hyperplanes, observer);
        }
        self.update(&touched, 0, 1);
        self.points_of[i] = touched;
    }

    fn record(&mut self, hyperplanes: &[Hyperplane]) {
        debug_assert!((0..self.degrees.len())
            .all(|p| self.degrees[p] == self.black || self.degrees[p] == self.white));
        let members: Vec<Hyperplane> = self.chosen.iter().map(|&i| hyperplanes[i].clone()).collect();
        let Ok(family) = HyperplaneFamily::new(self.space.clone(), self.sign, members) else {
            return;
        };
        let analysis = family.analyze();
        if analysis.p1.holds && analysis.p2.holds {
            self.found.push((family, analysis));
        }
    }
}

/// Depth-first search over hyperplane subsets of PG(2n+1,q) in canonical
/// order. Prunes with per-point degree windows and the admissible size
/// ladder; every surviving leaf is independently re-verified before it is
/// reported. Best effort under the budgets.
pub fn backtracking_search(
    n: u32,
    q: u64,
    sign: Sign,
    mut limits: SearchLimits,
    observer: &mut dyn SearchObserver,
) -> SearchResult {
    limits.report_every = limits.report_every.max(1);
    let field = Gf::new(q).expect("q must be a prime power");
    let space = ProjSpace::new(2 * n as usize + 1, field);
    assert!(space.point_count() <= 1 << 16, "search space beyond desk scale");
    let table = CountTable::new(n, q, sign);
    let points = space.points();
    let hyperplanes = space.hyperplanes();
    let points_of: Vec<Vec<u32>> = hyperplanes
        .iter()
        .map(|h| {
            points
                .iter()
                .enumerate()
                .filter(|(_, p)| space.incident(p, h))
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    let per_point = space.hyperplanes_per_point() as u32;
    let qn = q.pow(n);
    let targets: Vec<(u64, u64)> = admissible_sizes(n, q, sign)
        .into_iter()
        .map(|s| {
            let b = crate::sigma::black_total_from_r(n, q, sign, s / qn)
                .expect("admissible sizes have integral black totals");
            (s, b)
        })
        .collect();

    let mut dfs = Dfs {
        space,
        sign,
        points_of,
        degrees: vec![0; points.len()],
        remaining: vec![per_point; points.len()],
        reach: vec![Reach::Either; points.len()],
        black_only: 0,
        white_only: 0,
        either: points.len() as u64,
        black: table.black_degree as u32,
        white: table.white_degree as u32,
        targets,
        chosen: Vec::new(),
        nodes: 0,
        limits,
        found: Vec::new(),
        stop: None,
    };
    dfs.run(0, &hyperplanes, observer);

    let mut families = core::mem::take(&mut dfs.found);
    families.sort_by(|a, b| a.0.members().cmp(b.0.members()));
    let stop = dfs.stop.unwrap_or(StopCause::Completed);
    SearchResult {
        families,
        exhaustive: stop == StopCause::Completed,
        nodes_explored: dfs.nodes,
        stop,
    }
}

/// Whether (q^n ± 1) divides k(q^(2n+1) - 1) ± q^(n+1) ∓ q^n. Plain integer
/// arithmetic; the (n=1, Minus) case is excluded because its modulus q-1
/// divides the expression for every k.
pub fn lemma_divisibility(n: u32, q: u64, sign: Sign, k: u64) -> Result<bool, SearchError> {
    if n == 1 && sign == Sign::Minus {
        return Err(SearchError::OutOfLemmaScope { n, sign });
    }
    if k < 1 || k > q {
        return Err(SearchError::KOutOfRange { k, q });
    }
    let qn = ipow(q, n);
    let qn1 = ipow(q, n + 1);
    let big = ipow(q, 2 * n + 1) - 1;
    let (modulus, expr) = match sign {
        Sign::Plus => (qn + 1, k as i128 * big + qn1 - qn),
        Sign::Minus => (qn - 1, k as i128 * big - qn1 + qn),
    };
    Ok(expr % modulus == 0)
}

/// The k values in 1..=q for which the two black-total expressions agree at
/// r = q^(n+1) ∓ k: the roots of the ladder equation.
pub fn b_agreement_roots(n: u32, q: u64, sign: Sign) -> Vec<u64> {
    (1..=q).filter(|&k| b_expressions_agree(n, q, sign, k)).collect()
}

/// Exact equality of r(q^n ± 1)(± q^(n+1) ∓ r) and
/// ± q^n(q^(2n+2) - 1) ∓ (q^(2n+1) - 1) r at r = q^(n+1) ∓ k.
fn b_expressions_agree(n: u32, q: u64, sign: Sign, k: u64) -> bool {
    let qn = ipow(q, n);
    let qn1 = ipow(q, n + 1);
    let k = k as i128;
    let (r, lhs, rhs) = match sign {
        Sign::Plus => {
            let r = qn1 - k;
            (
                r,
                r * (qn + 1) * (qn1 - r),
                qn * (ipow(q, 2 * n + 2) - 1) - (ipow(q, 2 * n + 1) - 1) * r,
            )
        }
        Sign::Minus => {
            let r = qn1 + k;
            (
                r,
                r * (qn - 1) * (r - qn1),
                -qn * (ipow(q, 2 * n + 2) - 1) + (ipow(q, 2 * n + 1) - 1) * r,
            )
        }
    };
    debug_assert!(r > 0);
    lhs == rhs
}

fn ipow(q: u64, e: u32) -> i128 {
    let mut out = 1i128;
    for _ in 0..e {
        out *= q as i128;
    }
    out
}

/// One verified arithmetic identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyCheck {
    pub name: &'static str,
    pub sign: Sign,
    pub pass: bool,
    pub detail: String,
}

/// Pure-arithmetic verification of the derivation ladder at one (n, q):
/// no geometry, exact integers throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub n: u32,
    pub q: u64,
    pub checks: Vec<ConsistencyCheck>,
}

impl ConsistencyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verifies, for both signs:
///
/// 1. the black total at r = q^(n+1) ∓ 1 equals the quadric size;
/// 2. r = q^(n+1) makes the black total non-integral (the gap in the ladder);
/// 3. the two black-total expressions agree exactly at k = 1, plus k = q in
///    the (n=1, Minus) case;
/// 4. every division in the count table is exact, and the section sizes obey
///    h2 = h1 ∓ q^n;
/// 5. for each defined codim-2 value c, the pencil multiplicity equation
///    s(h1-c) + (q+1-s)(h2-c) = size-c has its unique solution in
///    {0, q-1, q, q+1}.
pub fn consistency_suite(n: u32, q: u64) -> ConsistencyReport {
    let mut checks = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let table = CountTable::new(n, q, sign);
        let canonical_r = match sign {
            Sign::Plus => q.pow(n + 1) - 1,
            Sign::Minus => q.pow(n + 1) + 1,
        };

        let b = crate::sigma::black_total_from_r(n, q, sign, canonical_r);
        checks.push(ConsistencyCheck {
            name: "black-total-at-canonical-r",
            sign,
            pass: b == Some(table.quadric_size),
            detail: format!("r={canonical_r} gives b={b:?}, quadric size {}", table.quadric_size),
        });

        let gap = crate::sigma::black_total_from_r(n, q, sign, q.pow(n + 1));
        checks.push(ConsistencyCheck {
            name: "black-total-non-integral-at-r-gap",
            sign,
            pass: gap.is_none(),
            detail: format!("r={} gives b={gap:?}", q.pow(n + 1)),
        });

        let roots = b_agreement_roots(n, q, sign);
        let expected_roots: Vec<u64> = if n == 1 && sign == Sign::Minus {
            vec![1, q]
        } else {
            vec![1]
        };
        checks.push(ConsistencyCheck {
            name: "b-expression-roots",
            sign,
            pass: roots == expected_roots,
            detail: format!("roots {roots:?}, expected {expected_roots:?}"),
        });

        checks.push(count_table_division_check(n, q, sign, &table));
        checks.push(pencil_multiplicity_check(q, sign, &table));
    }
    ConsistencyReport { n, q, checks }
}

fn count_table_division_check(n: u32, q: u64, sign: Sign, table: &CountTable) -> ConsistencyCheck {
    let qm1 = (q - 1) as u128;
    let qe = |e: u32| {
        let mut out = 1u128;
        for _ in 0..e {
            out *= q as u128;
        }
        out
    };
    let mp = |x: u128| match sign {
        Sign::Plus => x - 1,
        Sign::Minus => x + 1,
    };
    let pm = |x: u128| match sign {
        Sign::Plus => x + 1,
        Sign::Minus => x - 1,
    };

    let mut ok = true;
    let mut check = |lhs: u128, rhs: u128| ok &= lhs == rhs;
    check(table.quadric_size as u128 * qm1, mp(qe(n + 1)) * pm(qe(n)));
    check(table.h1 as u128 * qm1, qe(2 * n) - 1);
    check((table.h2 as u128 - 1) * qm1, qe(1) * mp(qe(n)) * pm(qe(n - 1)));
    check(table.c1 as u128 * qm1, pm(qe(n)) * mp(qe(n - 1)));
    check((table.c2 as u128 - 1) * qm1, qe(1) * (qe(2 * n - 2) - 1));
    check(table.c3 as u128 * qm1, mp(qe(n)) * pm(qe(n - 1)));
    if let Some(c4) = table.c4 {
        if n >= 2 {
            check((c4 as u128 - 1 - qe(1)) * qm1, qe(2) * mp(qe(n - 1)) * pm(qe(n - 2)));
        } else {
            check(c4 as u128, 1 + qe(1));
        }
    }
    // Tangent and parabolic hyperplanes exhaust the dual space.
    check(
        table.parabolic_hyperplanes as u128 + table.quadric_size as u128,
        (qe(2 * n + 2) - 1) / qm1,
    );
    // Section sizes differ by exactly q^n.
    match sign {
        Sign::Plus => check(table.h2 as u128, table.h1 as u128 + qe(n)),
        Sign::Minus => check(table.h2 as u128 + qe(n), table.h1 as u128),
    }

    ConsistencyCheck {
        name: "count-table-divisions",
        sign,
        pass: ok,
        detail: format!("table at n={n} q={q} sign {sign}"),
    }
}

fn pencil_multiplicity_check(q: u64, sign: Sign, table: &CountTable) -> ConsistencyCheck {
    let h1 = table.h1 as i128;
    let h2 = table.h2 as i128;
    let size = table.quadric_size as i128;
    let qi = q as i128;
    let mut ok = true;
    let mut details = Vec::new();
    for c in table.codim2_sections() {
        let c = c as i128;
        let num = size + qi * c - (qi + 1) * h2;
        let den = h1 - h2;
        let integral = den != 0 && num % den == 0;
        let s = if integral { num / den } else { -1 };
        let admissible = [0, qi - 1, qi, qi + 1].contains(&s);
        ok &= integral && admissible;
        details.push(s);
    }
    ConsistencyCheck {
        name: "pencil-multiplicity-solutions",
        sign,
        pass: ok,
        detail: format!("s values {details:?}"),
    }
}
