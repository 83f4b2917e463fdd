//! The Heisenberg-specific machinery: the Morse matching on h_n, critical
//! cell classification, the chain projection onto critical cells, stratified
//! critical-cell counting, and the closed-form Betti generating function.

use crate::algebra::heisenberg_algebra;
use crate::cell::{Cell, ChainVector};
use crate::field::FieldChar;
use crate::morse::{build_digraph_with_cap, Matching};
use crate::par;
use crate::poly::{ExactDivisionFailed, IntPolynomial};
use crate::ResourceCap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// A cell of h_n in subset coordinates: the x-index set, the y-index set
/// (subsets of {1..n}, element e stored at bit e-1) and whether z is
/// present. Round-trips exactly with [`Cell`] for a fixed n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IjPair {
    pub xs: u32,
    pub ys: u32,
    pub with_z: bool,
}

impl IjPair {
    pub fn new(xs: u32, ys: u32, with_z: bool) -> Self {
        IjPair { xs, ys, with_z }
    }

    pub fn from_cell(n: usize, cell: Cell) -> Self {
        debug_assert!(n <= 31);
        let mask = cell.mask();
        let full = full_mask(n) as u64;
        IjPair {
            xs: ((mask >> 1) & full) as u32,
            ys: ((mask >> (n + 1)) & full) as u32,
            with_z: mask & 1 == 1,
        }
    }

    pub fn to_cell(self, n: usize) -> Cell {
        debug_assert!(n <= 31);
        debug_assert!(self.xs & !full_mask(n) == 0 && self.ys & !full_mask(n) == 0);
        Cell::from_mask(self.with_z as u64 | (self.xs as u64) << 1 | (self.ys as u64) << (n + 1))
    }

    pub fn degree(self) -> usize {
        (self.xs.count_ones() + self.ys.count_ones()) as usize + self.with_z as usize
    }
}

/// Where a cell of h_n sits relative to the matching: source or target of a
/// matched edge, or critical of one of the two kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    MatchedSource,
    MatchedTarget,
    CriticalZ,
    CriticalPlain,
}

fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// Highest set bit, `None` for 0; encodes max(S) with max(∅) = −∞.
fn msb(x: u32) -> Option<u32> {
    (x != 0).then(|| 31 - x.leading_zeros())
}

/// Classification by the max-formulas, with max(∅) = −∞ and cells having
/// I∪J = [n], I∩J = ∅ explicitly critical. Agrees with matching incidence
/// under [`heisenberg_matching`] (a tested invariant, not an assumption).
pub fn classify_cell(n: usize, pair: IjPair) -> CellClass {
    let inter = msb(pair.xs & pair.ys);
    let co = msb(!pair.xs & !pair.ys & full_mask(n));
    if pair.with_z {
        // z∧x_I∧y_J is hit by x_{I∪m}∧y_{J∪m} exactly when some unused
        // index m tops every shared index
        match (co, inter) {
            (Some(m), Some(k)) if m > k => CellClass::MatchedTarget,
            (Some(_), None) => CellClass::MatchedTarget,
            _ => CellClass::CriticalZ,
        }
    } else {
        match (inter, co) {
            (Some(k), Some(m)) if m < k => CellClass::MatchedSource,
            (Some(_), None) => CellClass::MatchedSource,
            _ => CellClass::CriticalPlain,
        }
    }
}

/// The Morse matching on h_n: every plain cell x_I∧y_J with I∩J ≠ ∅ and
/// (Iᶜ∩Jᶜ = ∅ or max(Iᶜ∩Jᶜ) < max(I∩J)) is matched to
/// z∧x_{I∖k}∧y_{J∖k} with k = max(I∩J).
pub fn heisenberg_matching(n: usize) -> Matching<Cell> {
    assert!(n <= 31, "h_n cells exceed a u64 mask for n > 31");
    let mut edges = Vec::new();
    for xs in 0..1u64 << n {
        let xs = xs as u32;
        for ys in 0..1u64 << n {
            let ys = ys as u32;
            let pair = IjPair::new(xs, ys, false);
            if classify_cell(n, pair) == CellClass::MatchedSource {
                let k = msb(xs & ys).expect("matched source has I∩J nonempty");
                let target = IjPair::new(xs & !(1 << k), ys & !(1 << k), true);
                edges.push((pair.to_cell(n), target.to_cell(n)));
            }
        }
    }
    Matching::from_edges(edges)
}

/// Betti numbers of h_n by the matching route: build the digraph, validate
/// the matching, count critical cells per degree.
pub fn critical_cell_counts(
    n: usize,
    characteristic: FieldChar,
    cap: usize,
) -> Result<Vec<u64>, ResourceCap> {
    let cap = cap.min(crate::algebra::MAX_DIM);
    let dim = 2 * n + 1;
    if dim > cap {
        return Err(ResourceCap { dim, cap });
    }
    let algebra = heisenberg_algebra(n).expect("dimension already checked");
    let g = build_digraph_with_cap(&algebra, characteristic, cap)?;
    let vm = heisenberg_matching(n)
        .validate(&g)
        .expect("the Heisenberg matching is a valid Morse matching");
    Ok(vm
        .critical_cells(&g)
        .into_iter()
        .map(|cells| cells.len() as u64)
        .collect())
}

/// The named cell is matched, so the projection formula does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cell with I = {:#b}, J = {:#b} is matched, not critical", .pair.xs, .pair.ys)]
pub struct NotCritical {
    pub pair: IjPair,
}

/// Some critical cell has a non-closed projection, which would falsify the
/// reduction; carries the first witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("projection of the critical cell with I = {:#b}, J = {:#b} has nonzero boundary", .pair.xs, .pair.ys)]
pub struct ProjectionNotClosed {
    pub pair: IjPair,
}

/// Projection of a critical plain cell onto the span of critical cells,
/// over GF(2):
/// π(x_I∧y_J) = x_I∧y_J + Σ_{i∈I∩J} x_{(I∖i)∪m}∧y_{(J∖i)∪m} with
/// m = max(Iᶜ∩Jᶜ); the sum is empty when I∩J = ∅.
pub fn critical_projection(n: usize, xs: u32, ys: u32) -> Result<ChainVector, NotCritical> {
    let pair = IjPair::new(xs, ys, false);
    if classify_cell(n, pair) != CellClass::CriticalPlain {
        return Err(NotCritical { pair });
    }
    let mut chain = ChainVector::zero(pair.degree());
    chain.add_term(pair.to_cell(n), 1, 2);
    let shared = xs & ys;
    if shared != 0 {
        let m = msb(!xs & !ys & full_mask(n)).expect("critical cell with I∩J ≠ ∅ has m");
        let mut rest = shared;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            let term = IjPair::new(xs & !(1 << i) | 1 << m, ys & !(1 << i) | 1 << m, false);
            chain.add_term(term.to_cell(n), 1, 2);
        }
    }
    Ok(chain)
}

/// Checks dπ = 0 over GF(2) on every critical plain cell of h_n, and d = 0
/// on every critical z-cell (hence πd = dπ = 0 there as well).
pub fn verify_projection_closed(n: usize) -> Result<(), ProjectionNotClosed> {
    assert!(n <= 15, "exhaustive projection check is a small-n tool");
    let algebra = heisenberg_algebra(n).expect("small n");
    let p2 = FieldChar::new(2).expect("2 is prime");
    let pairs: Vec<(u32, u32)> = (0..1u32 << n)
        .flat_map(|xs| (0..1u32 << n).map(move |ys| (xs, ys)))
        .collect();
    let witnesses = par::par_map(pairs, |(xs, ys)| {
        for with_z in [false, true] {
            let pair = IjPair::new(xs, ys, with_z);
            match classify_cell(n, pair) {
                CellClass::CriticalPlain => {
                    let chain = critical_projection(n, xs, ys).expect("cell is critical");
                    let mut boundary = ChainVector::zero(pair.degree().saturating_sub(1));
                    for (cell, coeff) in chain.iter() {
                        debug_assert_eq!(coeff, 1);
                        boundary.add_assign(&algebra.differential(cell, p2), 2);
                    }
                    if !boundary.is_zero() {
                        return Some(pair);
                    }
                }
                CellClass::CriticalZ if !algebra.differential(pair.to_cell(n), p2).is_zero() => {
                    return Some(pair);
                }
                _ => {}
            }
        }
        None
    });
    match witnesses.into_iter().flatten().next() {
        Some(pair) => Err(ProjectionNotClosed { pair }),
        None => Ok(()),
    }
}

/// Critical-cell generating polynomial of one stratum. Strata are indexed
/// by L = I∪J after splitting off K = I∩J (so L is the symmetric
/// difference of the original index sets): the closed forms are (1+t)(2t)^n
/// for L = [n] and (1+t³)(2t)^|L|(1+t²)^(n−|L|−1) otherwise.
pub fn stratified_critical_count(n: usize, l_set: u32) -> IntPolynomial {
    assert!(l_set & !full_mask(n) == 0, "L must be a subset of [n]");
    let l = l_set.count_ones();
    let two_t = IntPolynomial::monomial(2, 1);
    if l as usize == n {
        IntPolynomial::from_coeffs(vec![1i64, 1]).mul(&two_t.pow(n as u32))
    } else {
        IntPolynomial::from_coeffs(vec![1i64, 0, 0, 1])
            .mul(&two_t.pow(l))
            .mul(&IntPolynomial::from_coeffs(vec![1i64, 0, 1]).pow((n as u32) - l - 1))
    }
}

/// Census of the actual critical cells by stratum: for each L ⊆ [n], the
/// polynomial Σ_i (number of critical cells of degree i with symmetric
/// difference L) t^i. Exhaustive over all cells of h_n.
pub fn stratified_census(n: usize) -> Vec<(u32, IntPolynomial)> {
    assert!(n <= 15, "exhaustive census is a small-n tool");
    let dim = 2 * n + 1;
    let mut counts = vec![vec![0i64; dim + 1]; 1 << n];
    for xs in 0..1u32 << n {
        for ys in 0..1u32 << n {
            for with_z in [false, true] {
                let pair = IjPair::new(xs, ys, with_z);
                match classify_cell(n, pair) {
                    CellClass::CriticalZ | CellClass::CriticalPlain => {
                        counts[(xs ^ ys) as usize][pair.degree()] += 1;
                    }
                    _ => {}
                }
            }
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(l, coeffs)| (l as u32, IntPolynomial::from_coeffs(coeffs)))
        .collect()
}

/// The closed-form generating function Σ b_i t^i of the GF(2) Betti numbers
/// of h_n: [(1+t³)(1+t)^{2n} + (t+t²)(2t)^n] / (1+t²), evaluated with exact
/// big-integer arithmetic. An inexact division would falsify the closed
/// form, hence the error is surfaced rather than unwrapped.
pub fn betti_generating_function(n: usize) -> Result<IntPolynomial, ExactDivisionFailed> {
    let one_t = IntPolynomial::from_coeffs(vec![1i64, 1]);
    let numerator = IntPolynomial::from_coeffs(vec![1i64, 0, 0, 1])
        .mul(&one_t.pow(2 * n as u32))
        .add(
            &IntPolynomial::from_coeffs(vec![0i64, 1, 1])
                .mul(&IntPolynomial::monomial(2, 1).pow(n as u32)),
        );
    numerator.exact_div(&IntPolynomial::from_coeffs(vec![1i64, 0, 1]))
}

/// The stated range of the characteristic-0 binomial formula is 0 ≤ i ≤ n;
/// reflection across the middle is the caller's explicit choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("index {i} exceeds the stated range 0..={n}")]
pub struct OutOfStatedRange {
    pub n: usize,
    pub i: usize,
}

/// Characteristic-0 Betti number of h_n for 0 ≤ i ≤ n:
/// C(2n, i) − C(2n, i−2), with C(·, negative) = 0.
pub fn betti_char_zero(n: usize, i: usize) -> Result<BigInt, OutOfStatedRange> {
    if i > n {
        return Err(OutOfStatedRange { n, i });
    }
    let head = binomial_big(2 * n, i);
    Ok(match i.checked_sub(2) {
        Some(j) => head - binomial_big(2 * n, j),
        None => head,
    })
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
