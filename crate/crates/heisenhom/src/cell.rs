//! Basis monomials of the exterior algebra and sparse chains built on them.

use std::collections::BTreeMap;
use std::fmt;

/// A basis monomial of the exterior algebra: the set of generators present,
/// one bit per generator in the algebra's canonical order. The empty mask is
/// the unit of the exterior algebra (the basis of degree 0).
///
/// `Ord` is the ascending-mask order, which fixes row/column indexing of all
/// boundary matrices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell(u64);

impl Cell {
    pub const EMPTY: Cell = Cell(0);

    pub fn from_mask(mask: u64) -> Self {
        Cell(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    /// Number of generators in the monomial.
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, gen: usize) -> bool {
        debug_assert!(gen < 64);
        self.0 & (1 << gen) != 0
    }

    pub fn with(self, gen: usize) -> Self {
        debug_assert!(!self.contains(gen));
        Cell(self.0 | (1 << gen))
    }

    pub fn without(self, gen: usize) -> Self {
        debug_assert!(self.contains(gen));
        Cell(self.0 & !(1 << gen))
    }

    /// Generator indices in ascending order.
    pub fn generators(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let g = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(g)
            }
        })
    }

    /// How many generators of the monomial are smaller than `gen`.
    /// This is the number of transpositions needed to sort `gen` to the
    /// front, so it carries the sign of wedging `gen` into the monomial.
    pub fn count_below(self, gen: usize) -> u32 {
        (self.0 & ((1u64 << gen) - 1)).count_ones()
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cell({:#b})", self.0)
    }
}

/// A chain in a single homological degree: finitely many cells with nonzero
/// scalars mod p. Zero scalars are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVector {
    degree: usize,
    entries: BTreeMap<Cell, u64>,
}

impl ChainVector {
    pub fn zero(degree: usize) -> Self {
        ChainVector {
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient of `cell`, zero if absent.
    pub fn coeff(&self, cell: Cell) -> u64 {
        self.entries.get(&cell).copied().unwrap_or(0)
    }

    /// Entries in ascending cell order.
    pub fn iter(&self) -> impl Iterator<Item = (Cell, u64)> + '_ {
        self.entries.iter().map(|(&c, &v)| (c, v))
    }

    /// Add `scalar * cell` mod p, dropping the entry if it cancels.
    pub fn add_term(&mut self, cell: Cell, scalar: u64, p: u64) {
        debug_assert_eq!(cell.degree(), self.degree);
        let s = scalar % p;
        if s == 0 {
            return;
        }
        let slot = self.entries.entry(cell).or_insert(0);
        *slot = (*slot + s) % p;
        if *slot == 0 {
            self.entries.remove(&cell);
        }
    }

    /// Add `other` into `self` mod p. Both chains must share one degree.
    pub fn add_assign(&mut self, other: &ChainVector, p: u64) {
        debug_assert_eq!(self.degree, other.degree);
        for (c, v) in other.iter() {
            self.add_term(c, v, p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_basics() {
        let c = Cell::from_mask(0b1101);
        assert_eq!(c.degree(), 3);
        assert!(c.contains(0) && c.contains(2) && c.contains(3));
        assert!(!c.contains(1));
        assert_eq!(c.generators().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(c.without(2).mask(), 0b1001);
        assert_eq!(c.count_below(3), 2);
        assert_eq!(Cell::EMPTY.degree(), 0);
    }

    #[test]
    fn chain_cancels_mod_p() {
        let mut v = ChainVector::zero(1);
        let c = Cell::from_mask(0b10);
        v.add_term(c, 3, 5);
        v.add_term(c, 2, 5);
        assert!(v.is_zero());
        v.add_term(c, 4, 5);
        assert_eq!(v.coeff(c), 4);
        assert_eq!(v.len(), 1);
    }
}
