//! Lie algebras given by integer structure constants, and the chain complex
//! on their exterior algebra whose homology this crate computes.

use crate::cell::{Cell, ChainVector};
use crate::field::{mul_mod, FieldChar};
use crate::par;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Hard representation limit: cells are u64 bitmasks.
pub const MAX_DIM: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension {dim} is outside the supported range 1..={MAX_DIM}")]
    UnsupportedDimension { dim: usize },
    #[error("generator index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket entries for generators ({i}, {j}) are inconsistent with antisymmetry")]
    AntisymmetryViolation { i: usize, j: usize },
    #[error("Jacobi identity fails on generator triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },
    #[error("d^2 is nonzero on {} degree-{degree} cell(s)", .witnesses.len())]
    DSquaredNonzero { degree: usize, witnesses: Vec<Cell> },
}

/// A finite-dimensional Lie algebra over the integers. Structure constants
/// are stored once and reduced modulo the field characteristic when a
/// differential is taken, so one value serves every prime.
///
/// Brackets are keyed by generator pairs `(i, j)` with `i < j`; the `j > i`
/// direction and `[g, g] = 0` follow from antisymmetry. Construction
/// validates antisymmetry consistency of the given entries and the Jacobi
/// identity on all generator triples, both over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, i64)>>,
}

/// The Heisenberg algebra h_n: generators z, x_1..x_n, y_1..y_n in that
/// canonical order (indices 0, 1..n, n+1..2n), with [x_i, y_i] = z as the
/// only nonzero brackets.
pub fn heisenberg_algebra(n: usize) -> Result<LieAlgebra, AlgebraError> {
    let mut names = vec!["z".to_string()];
    names.extend((1..=n).map(|i| format!("x{i}")));
    names.extend((1..=n).map(|i| format!("y{i}")));
    let brackets = (1..=n).map(|i| ((i, n + i), vec![(0usize, 1i64)]));
    LieAlgebra::new(names, brackets)
}

/// A generic algebra with generators named e1..e{dim}. Entries may use
/// either orientation of a pair; both orientations together must agree up
/// to sign.
pub fn make_lie_algebra<I>(dim: usize, bracket_entries: I) -> Result<LieAlgebra, AlgebraError>
where
    I: IntoIterator<Item = ((usize, usize), Vec<(usize, i64)>)>,
{
    let names = (1..=dim).map(|i| format!("e{i}")).collect();
    LieAlgebra::new(names, bracket_entries)
}

fn normalize_combo(combo: &[(usize, i64)], negate: bool) -> Vec<(usize, i64)> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for &(g, c) in combo {
        *acc.entry(g).or_insert(0) += if negate { -c } else { c };
    }
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

impl LieAlgebra {
    /// Build from explicit generator names (one per dimension) and bracket
    /// entries; see [`make_lie_algebra`] for the entry conventions.
    pub fn new<I>(names: Vec<String>, bracket_entries: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = ((usize, usize), Vec<(usize, i64)>)>,
    {
        let dim = names.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(AlgebraError::UnsupportedDimension { dim });
        }
        let mut brackets: BTreeMap<(usize, usize), Vec<(usize, i64)>> = BTreeMap::new();
        for ((a, b), combo) in bracket_entries {
            for index in [a, b].into_iter().chain(combo.iter().map(|&(g, _)| g)) {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index, dim });
                }
            }
            if a == b {
                if !normalize_combo(&combo, false).is_empty() {
                    return Err(AlgebraError::AntisymmetryViolation { i: a, j: b });
                }
                continue;
            }
            let key = (a.min(b), a.max(b));
            let value = normalize_combo(&combo, a > b);
            match brackets.get(&key) {
                Some(existing) if *existing != value => {
                    return Err(AlgebraError::AntisymmetryViolation { i: key.0, j: key.1 });
                }
                _ => {
                    if value.is_empty() {
                        brackets.remove(&key);
                    } else {
                        brackets.insert(key, value);
                    }
                }
            }
        }
        let algebra = LieAlgebra {
            dim,
            names,
            brackets,
        };
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    /// Test hook: skips all validation so d^2 checks can be exercised on a
    /// broken bracket table.
    #[cfg(test)]
    pub(crate) fn from_parts_unchecked(
        names: Vec<String>,
        brackets: BTreeMap<(usize, usize), Vec<(usize, i64)>>,
    ) -> Self {
        LieAlgebra {
            dim: names.len(),
            names,
            brackets,
        }
    }

    fn check_jacobi(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let mut defect: BTreeMap<usize, i128> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (g, s) in self.bracket(a, b) {
                            for (h, t) in self.bracket(g, c) {
                                *defect.entry(h).or_insert(0) += s as i128 * t as i128;
                            }
                        }
                    }
                    if defect.values().any(|&c| c != 0) {
                        return Err(AlgebraError::JacobiViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    /// `[w_a, w_b]` as an integer combination, for any orientation of the
    /// pair; empty when zero.
    pub fn bracket(&self, a: usize, b: usize) -> Vec<(usize, i64)> {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Equal => Vec::new(),
            Less => self.brackets.get(&(a, b)).cloned().unwrap_or_default(),
            Greater => self
                .brackets
                .get(&(b, a))
                .map(|combo| combo.iter().map(|&(g, c)| (g, -c)).collect())
                .unwrap_or_default(),
        }
    }

    #[cfg(test)]
    pub(crate) fn stored_bracket_count(&self) -> usize {
        self.brackets.len()
    }

    /// Wedge of generator names joined by `^`; the empty cell prints as `1`.
    pub fn format_cell(&self, cell: Cell) -> String {
        if cell == Cell::EMPTY {
            return "1".to_string();
        }
        cell.generators()
            .map(|g| self.names[g].as_str())
            .collect::<Vec<_>>()
            .join("^")
    }

    /// Boundary of one cell: sum over 1-based position pairs i<j of
    /// (−1)^(i+j) [w_i, w_j] wedged into the remaining generators, the wedge
    /// re-sorted to canonical order with the permutation sign absorbed and
    /// scalars reduced mod p. Degree 0 and 1 cells map to 0.
    pub fn differential(&self, cell: Cell, characteristic: FieldChar) -> ChainVector {
        let p = characteristic.get();
        let k = cell.degree();
        let mut out = ChainVector::zero(k.saturating_sub(1));
        if k < 2 {
            return out;
        }
        let gens: Vec<usize> = cell.generators().collect();
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                let rest = cell.without(gens[a]).without(gens[b]);
                // 1-based positions make (−1)^(i+j) = (−1)^(a+b) for 0-based a, b
                let pair_negates = (a + b) % 2 == 1;
                for (g, c) in self.bracket(gens[a], gens[b]) {
                    if rest.contains(g) {
                        continue;
                    }
                    let sort_negates = rest.count_below(g) % 2 == 1;
                    let mut v = ((c as i128).rem_euclid(p as i128)) as u64;
                    if pair_negates != sort_negates {
                        v = (p - v) % p;
                    }
                    out.add_term(rest.with(g), v, p);
                }
            }
        }
        out
    }

    /// All C(dim, degree) cells in ascending mask order; this order fixes
    /// matrix row and column indexing everywhere.
    pub fn enumerate_cells(&self, degree: usize) -> Vec<Cell> {
        assert!(degree <= self.dim, "degree out of range");
        if degree == 0 {
            return vec![Cell::EMPTY];
        }
        let top = 1u64 << self.dim;
        let mut out = Vec::new();
        let mut mask = (1u64 << degree) - 1;
        while mask < top {
            out.push(Cell::from_mask(mask));
            // Gosper's hack: next mask with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
        out
    }

    /// Sparse matrix of the differential from `degree` to `degree - 1` in
    /// the [`enumerate_cells`](Self::enumerate_cells) bases.
    pub fn boundary_matrix(&self, degree: usize, characteristic: FieldChar) -> BoundaryMap {
        assert!(degree >= 1 && degree <= self.dim, "degree out of range");
        let lower = self.enumerate_cells(degree - 1);
        let upper = self.enumerate_cells(degree);
        let row_of: HashMap<Cell, u32> = lower
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        let columns: Vec<Vec<(u32, u32, u64)>> =
            par::par_map(upper.iter().copied().enumerate().collect(), |(j, cell)| {
                self.differential(cell, characteristic)
                    .iter()
                    .map(|(target, v)| (row_of[&target], j as u32, v))
                    .collect()
            });
        BoundaryMap {
            degree,
            rows: lower.len(),
            cols: upper.len(),
            entries: columns.into_iter().flatten().collect(),
        }
    }

    /// Exhaustively checks d(d(cell)) = 0 for every cell; returns the
    /// violating cells of the first bad degree otherwise.
    pub fn verify_d_squared(&self, characteristic: FieldChar) -> Result<(), AlgebraError> {
        let p = characteristic.get();
        for k in 2..=self.dim {
            let witnesses: Vec<Cell> = par::par_map(self.enumerate_cells(k), |cell| {
                let mut acc = ChainVector::zero(k - 2);
                for (c1, v1) in self.differential(cell, characteristic).iter() {
                    for (c2, v2) in self.differential(c1, characteristic).iter() {
                        acc.add_term(c2, mul_mod(v1, v2, p), p);
                    }
                }
                (!acc.is_zero()).then_some(cell)
            })
            .into_iter()
            .flatten()
            .collect();
            if !witnesses.is_empty() {
                return Err(AlgebraError::DSquaredNonzero {
                    degree: k,
                    witnesses,
                });
            }
        }
        Ok(())
    }
}

/// Sparse boundary matrix in coordinate form: `(row, col, value)` triples
/// sorted by column then row, values in `[1, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMap {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(u32, u32, u64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::betti_numbers;

    fn gf(p: u64) -> FieldChar {
        FieldChar::new(p).unwrap()
    }

    fn cell(mask: u64) -> Cell {
        Cell::from_mask(mask)
    }

    #[test]
    fn heisenberg_shapes() {
        let h1 = heisenberg_algebra(1).unwrap();
        assert_eq!(h1.dim(), 3);
        assert_eq!(h1.stored_bracket_count(), 1);
        assert_eq!(h1.bracket(1, 2), vec![(0, 1)]);
        assert_eq!(h1.bracket(2, 1), vec![(0, -1)]);
        assert_eq!(h1.names(), ["z", "x1", "y1"]);

        let h0 = heisenberg_algebra(0).unwrap();
        assert_eq!(h0.dim(), 1);
        assert_eq!(h0.stored_bracket_count(), 0);

        let h3 = heisenberg_algebra(3).unwrap();
        assert_eq!(h3.dim(), 7);
        assert_eq!(h3.stored_bracket_count(), 3);
        assert_eq!(h3.names()[3], "x3");
        assert_eq!(h3.names()[4], "y1");
    }

    #[test]
    fn generic_construction() {
        // Heisenberg h_1 in disguise
        let a = make_lie_algebra(3, [((0, 1), vec![(2, 1)])]).unwrap();
        assert_eq!(betti_numbers(&a, gf(2)).unwrap(), vec![1, 2, 2, 1]);

        // the non-abelian 2-dim algebra; Jacobi vacuous
        let a = make_lie_algebra(2, [((0, 1), vec![(0, 1)])]).unwrap();
        assert_eq!(a.dim(), 2);

        let err = make_lie_algebra(
            3,
            [
                ((0, 1), vec![(2, 1)]),
                ((1, 2), vec![(0, 1)]),
                ((0, 2), vec![(0, 1)]),
            ],
        )
        .unwrap_err();
        assert_eq!(err, AlgebraError::JacobiViolation { i: 0, j: 1, k: 2 });
    }

    #[test]
    fn construction_rejects_bad_entries() {
        let err = make_lie_algebra(3, [((0, 5), vec![(2, 1)])]).unwrap_err();
        assert_eq!(err, AlgebraError::IndexOutOfRange { index: 5, dim: 3 });

        let err = make_lie_algebra(3, [((0, 1), vec![(7, 1)])]).unwrap_err();
        assert_eq!(err, AlgebraError::IndexOutOfRange { index: 7, dim: 3 });

        // both orientations given but not opposite
        let err =
            make_lie_algebra(3, [((0, 1), vec![(2, 1)]), ((1, 0), vec![(2, 1)])]).unwrap_err();
        assert_eq!(err, AlgebraError::AntisymmetryViolation { i: 0, j: 1 });

        // [g, g] must vanish
        let err = make_lie_algebra(3, [((1, 1), vec![(2, 1)])]).unwrap_err();
        assert_eq!(err, AlgebraError::AntisymmetryViolation { i: 1, j: 1 });

        // consistent opposite orientations are fine
        make_lie_algebra(3, [((0, 1), vec![(2, 1)]), ((1, 0), vec![(2, -1)])]).unwrap();

        assert_eq!(
            make_lie_algebra(0, []).unwrap_err(),
            AlgebraError::UnsupportedDimension { dim: 0 }
        );
        assert_eq!(
            make_lie_algebra(64, []).unwrap_err(),
            AlgebraError::UnsupportedDimension { dim: 64 }
        );
    }

    #[test]
    fn differential_examples() {
        let h1 = heisenberg_algebra(1).unwrap();
        // x1^y1 has mask 0b110; d = −z
        let d = h1.differential(cell(0b110), gf(3));
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(cell(0b001), 2)]);
        let d = h1.differential(cell(0b110), gf(2));
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(cell(0b001), 1)]);

        // h_2: x1^x2^y1 (indices 1,2,3) → z^x2
        let h2 = heisenberg_algebra(2).unwrap();
        let d = h2.differential(cell(0b01110), gf(2));
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(cell(0b00101), 1)]);

        // z^x1^y2 contains no bracketing pair
        assert!(h2.differential(cell(0b10011), gf(2)).is_zero());

        // degree 0 and 1 map to zero
        assert!(h1.differential(Cell::EMPTY, gf(2)).is_zero());
        assert!(h1.differential(cell(0b010), gf(5)).is_zero());
    }

    #[test]
    fn sign_coherence_for_odd_primes() {
        for p in [3u64, 5, 7] {
            for n in 1..=3usize {
                let h = heisenberg_algebra(n).unwrap();
                for i in 1..=n {
                    let c = Cell::EMPTY.with(i).with(n + i);
                    let d = h.differential(c, gf(p));
                    assert_eq!(d.iter().collect::<Vec<_>>(), vec![(cell(1), p - 1)]);
                }
            }
        }
    }

    #[test]
    fn heisenberg_differential_structure() {
        // nonzero only without z and with some pair {x_i, y_i}; every term
        // contains z; term count ≤ C(k,2); degree drops by one
        for n in 1..=4usize {
            let h = heisenberg_algebra(n).unwrap();
            let z = 0usize;
            for k in 0..=h.dim() {
                for c in h.enumerate_cells(k) {
                    let d = h.differential(c, gf(2));
                    let has_pair = (1..=n).any(|i| c.contains(i) && c.contains(n + i));
                    if !d.is_zero() {
                        assert!(!c.contains(z) && has_pair);
                        assert_eq!(d.degree(), k - 1);
                        assert!(d.len() <= k * (k - 1) / 2);
                        for (t, _) in d.iter() {
                            assert!(t.contains(z));
                        }
                    } else if k >= 2 {
                        assert!(c.contains(z) || !has_pair);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_ascending_mask() {
        let h1 = heisenberg_algebra(1).unwrap();
        assert_eq!(
            h1.enumerate_cells(2),
            vec![cell(0b011), cell(0b101), cell(0b110)]
        );
        assert_eq!(h1.enumerate_cells(0), vec![Cell::EMPTY]);
        let h2 = heisenberg_algebra(2).unwrap();
        assert_eq!(h2.enumerate_cells(5), vec![cell(0b11111)]);
        for k in 0..=5 {
            let cells = h2.enumerate_cells(k);
            assert!(cells.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(cells.len(), crate::field::binomial_u64(5, k) as usize);
        }
    }

    #[test]
    fn boundary_matrix_examples() {
        let h1 = heisenberg_algebra(1).unwrap();
        let b = h1.boundary_matrix(2, gf(2));
        assert_eq!((b.rows, b.cols), (3, 3));
        assert_eq!(b.entries, vec![(0, 2, 1)]);

        let b = h1.boundary_matrix(1, gf(5));
        assert_eq!((b.rows, b.cols), (1, 3));
        assert!(b.entries.is_empty());

        let h2 = heisenberg_algebra(2).unwrap();
        let b = h2.boundary_matrix(3, gf(2));
        assert_eq!((b.rows, b.cols), (10, 10));
        assert!(!b.entries.is_empty());
        assert!(b.entries.iter().all(|&(_, _, v)| v == 1));
        // col-major, deduplicated coordinates
        assert!(b
            .entries
            .windows(2)
            .all(|w| (w[0].1, w[0].0) < (w[1].1, w[1].0)));
    }

    #[test]
    fn d_squared_vanishes() {
        for n in 0..=5usize {
            let h = heisenberg_algebra(n).unwrap();
            for p in [2u64, 3, 5] {
                h.verify_d_squared(gf(p)).unwrap();
            }
        }
        // a simple algebra with all brackets nonzero
        let so3 = make_lie_algebra(
            3,
            [
                ((0, 1), vec![(2, 1)]),
                ((1, 2), vec![(0, 1)]),
                ((0, 2), vec![(1, -1)]),
            ],
        )
        .unwrap();
        for p in [2u64, 3, 5, 7] {
            so3.verify_d_squared(gf(p)).unwrap();
        }
    }

    #[test]
    fn d_squared_detects_corrupted_brackets() {
        let names = (1..=3).map(|i| format!("e{i}")).collect();
        let mut brackets = BTreeMap::new();
        brackets.insert((0, 1), vec![(2usize, 1i64)]);
        brackets.insert((1, 2), vec![(0, 1)]);
        brackets.insert((0, 2), vec![(0, 1)]);
        let broken = LieAlgebra::from_parts_unchecked(names, brackets);
        let err = broken.verify_d_squared(gf(5)).unwrap_err();
        match err {
            AlgebraError::DSquaredNonzero { degree, witnesses } => {
                assert_eq!(degree, 3);
                assert_eq!(witnesses, vec![cell(0b111)]);
            }
            other => panic!("expected DSquaredNonzero, got {other:?}"),
        }
    }

    #[test]
    fn cell_formatting() {
        let h2 = heisenberg_algebra(2).unwrap();
        assert_eq!(h2.format_cell(Cell::EMPTY), "1");
        assert_eq!(h2.format_cell(cell(0b00101)), "z^x2");
        assert_eq!(h2.format_cell(cell(0b11111)), "z^x1^x2^y1^y2");
    }
}
