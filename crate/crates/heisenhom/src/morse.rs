//! Algebraic discrete Morse machinery on a based chain complex: the
//! differential digraph, matching validation, critical cells, and the
//! reduced differential evaluated by memoized gradient-path flow.

use crate::algebra::LieAlgebra;
use crate::cell::Cell;
use crate::field::{inv_mod, mul_mod, FieldChar};
use crate::par;
use crate::ResourceCap;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use thiserror::Error;

/// Vertex key of a complex digraph. Blanket-implemented; `Cell` and small
/// synthetic test labels both qualify.
pub trait MorseVertex: Copy + Eq + Ord + Hash + Debug + Send + Sync {}
impl<T: Copy + Eq + Ord + Hash + Debug + Send + Sync> MorseVertex for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError<V: Debug> {
    #[error("vertex {0:?} is an endpoint of more than one matched edge")]
    NotAMatching(V),
    #[error(
        "matched edge {source:?} -> {target:?} is not an invertible component of the differential"
    )]
    NonInvertibleEdge { source: V, target: V },
    #[error("reversing the matched edges creates a directed cycle through {} vertices", .cycle.len())]
    CyclicMorseGraph { cycle: Vec<V> },
}

/// The differential of a based complex as a labeled digraph: one vertex per
/// basis element, one edge `c -> c'` per nonzero coefficient of `c'` in
/// d(c). Every edge drops degree by exactly one and every label is a
/// nonzero residue.
#[derive(Debug, Clone)]
pub struct ComplexDigraph<V: MorseVertex> {
    characteristic: FieldChar,
    degree_of: HashMap<V, usize>,
    by_degree: Vec<Vec<V>>,
    succ: HashMap<V, Vec<(V, u64)>>,
    edge_count: usize,
}

/// Digraph of the full chain complex of `algebra` over GF(p), under the
/// default dimension cap.
pub fn build_digraph(
    algebra: &LieAlgebra,
    characteristic: FieldChar,
) -> Result<ComplexDigraph<Cell>, ResourceCap> {
    build_digraph_with_cap(algebra, characteristic, crate::DEFAULT_DIM_CAP)
}

/// Same as [`build_digraph`] with an explicit dimension cap.
pub fn build_digraph_with_cap(
    algebra: &LieAlgebra,
    characteristic: FieldChar,
    cap: usize,
) -> Result<ComplexDigraph<Cell>, ResourceCap> {
    let dim = algebra.dim();
    if dim > cap {
        return Err(ResourceCap { dim, cap });
    }
    let by_degree: Vec<Vec<Cell>> = (0..=dim).map(|k| algebra.enumerate_cells(k)).collect();
    let mut degree_of = HashMap::new();
    let mut succ = HashMap::new();
    let mut edge_count = 0;
    for (k, cells) in by_degree.iter().enumerate() {
        let lists = par::par_map(cells.clone(), |c| {
            algebra
                .differential(c, characteristic)
                .iter()
                .collect::<Vec<_>>()
        });
        for (&c, list) in cells.iter().zip(lists) {
            degree_of.insert(c, k);
            if !list.is_empty() {
                edge_count += list.len();
                succ.insert(c, list);
            }
        }
    }
    Ok(ComplexDigraph {
        characteristic,
        degree_of,
        by_degree,
        succ,
        edge_count,
    })
}

impl<V: MorseVertex> ComplexDigraph<V> {
    /// Assemble a digraph from explicit vertices and labeled edges, for
    /// complexes that do not come from a Lie algebra.
    ///
    /// Panics on duplicate vertices, dangling or degree-skipping edges, and
    /// labels that vanish mod p: those are construction bugs, not data.
    pub fn from_parts(
        characteristic: FieldChar,
        vertices: Vec<(V, usize)>,
        edges: Vec<(V, V, u64)>,
    ) -> Self {
        let p = characteristic.get();
        let mut degree_of = HashMap::new();
        let mut max_degree = 0;
        for &(v, k) in &vertices {
            assert!(degree_of.insert(v, k).is_none(), "duplicate vertex {v:?}");
            max_degree = max_degree.max(k);
        }
        let mut by_degree = vec![Vec::new(); max_degree + 1];
        for &(v, k) in &vertices {
            by_degree[k].push(v);
        }
        for level in &mut by_degree {
            level.sort_unstable();
        }
        let mut succ: HashMap<V, Vec<(V, u64)>> = HashMap::new();
        let mut edge_count = 0;
        for &(u, v, label) in &edges {
            let (du, dv) = (degree_of[&u], degree_of[&v]);
            assert_eq!(du, dv + 1, "edge {u:?} -> {v:?} must drop degree by 1");
            assert!(label % p != 0, "edge {u:?} -> {v:?} has label 0 mod {p}");
            let list = succ.entry(u).or_default();
            assert!(
                list.iter().all(|&(w, _)| w != v),
                "duplicate edge {u:?} -> {v:?}"
            );
            list.push((v, label % p));
            edge_count += 1;
        }
        for list in succ.values_mut() {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        ComplexDigraph {
            characteristic,
            degree_of,
            by_degree,
            succ,
            edge_count,
        }
    }

    pub fn characteristic(&self) -> FieldChar {
        self.characteristic
    }

    pub fn vertex_count(&self) -> usize {
        self.degree_of.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn degree(&self, v: V) -> Option<usize> {
        self.degree_of.get(&v).copied()
    }

    /// Vertices of one degree in ascending order.
    pub fn vertices(&self, degree: usize) -> &[V] {
        self.by_degree.get(degree).map_or(&[], Vec::as_slice)
    }

    /// Outgoing edges of `v` sorted by target.
    pub fn successors(&self, v: V) -> &[(V, u64)] {
        self.succ.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn label(&self, u: V, v: V) -> Option<u64> {
        self.successors(u)
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, l)| l)
    }
}

/// A set of matched edges, not yet checked against any digraph. Each pair
/// is `(source, target)` in differential direction: the source sits one
/// degree above the target.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching<V> {
    edges: Vec<(V, V)>,
}

impl<V: MorseVertex> Matching<V> {
    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    pub fn from_edges(edges: Vec<(V, V)>) -> Self {
        Matching { edges }
    }

    pub fn edges(&self) -> &[(V, V)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Check the three Morse-matching invariants against `g`: no vertex on
    /// two matched edges, every matched edge an invertible component of the
    /// differential, and no directed cycle once matched edges are reversed.
    pub fn validate(&self, g: &ComplexDigraph<V>) -> Result<ValidatedMatching<V>, MorseError<V>> {
        let mut to_target: HashMap<V, (V, u64)> = HashMap::new();
        let mut to_source: HashMap<V, (V, u64)> = HashMap::new();
        for &(source, target) in &self.edges {
            let label = g
                .label(source, target)
                .ok_or(MorseError::NonInvertibleEdge { source, target })?;
            // label is a nonzero residue, hence invertible over a field
            if to_target.contains_key(&source) || to_source.contains_key(&source) {
                return Err(MorseError::NotAMatching(source));
            }
            if to_source.contains_key(&target) || to_target.contains_key(&target) {
                return Err(MorseError::NotAMatching(target));
            }
            to_target.insert(source, (target, label));
            to_source.insert(target, (source, label));
        }
        let vm = ValidatedMatching {
            to_target,
            to_source,
        };
        vm.check_acyclic(g)?;
        Ok(vm)
    }
}

/// A matching that passed [`Matching::validate`]; the only way to query
/// critical cells or evaluate the reduced differential.
#[derive(Debug, Clone)]
pub struct ValidatedMatching<V: MorseVertex> {
    to_target: HashMap<V, (V, u64)>,
    to_source: HashMap<V, (V, u64)>,
}

impl<V: MorseVertex> ValidatedMatching<V> {
    pub fn matched_pairs(&self) -> usize {
        self.to_target.len()
    }

    /// The matched partner below `v`, with the edge label.
    pub fn target_of(&self, v: V) -> Option<(V, u64)> {
        self.to_target.get(&v).copied()
    }

    /// The matched partner above `v`, with the edge label.
    pub fn source_of(&self, v: V) -> Option<(V, u64)> {
        self.to_source.get(&v).copied()
    }

    pub fn is_critical(&self, v: V) -> bool {
        !self.to_target.contains_key(&v) && !self.to_source.contains_key(&v)
    }

    /// Cells incident to no matched edge, grouped by degree (index =
    /// degree), each group ascending.
    pub fn critical_cells(&self, g: &ComplexDigraph<V>) -> Vec<Vec<V>> {
        (0..=g.max_degree())
            .map(|k| {
                g.vertices(k)
                    .iter()
                    .copied()
                    .filter(|&v| self.is_critical(v))
                    .collect()
            })
            .collect()
    }

    /// Successors of `w` in the Morse graph: the digraph edges of `w` with
    /// its own matched edge (if any) reversed, plus the reversed edge up to
    /// `w`'s matched source (if any).
    fn morse_successors(&self, g: &ComplexDigraph<V>, w: V) -> Vec<V> {
        let mut out = Vec::new();
        if let Some((src, _)) = self.source_of(w) {
            out.push(src);
        }
        let down_partner = self.target_of(w).map(|(t, _)| t);
        for &(v, _) in g.successors(w) {
            if Some(v) != down_partner {
                out.push(v);
            }
        }
        out
    }

    /// Depth-first cycle search over the Morse graph; returns a witness
    /// cycle if one exists.
    fn check_acyclic(&self, g: &ComplexDigraph<V>) -> Result<(), MorseError<V>> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        enum Step<V> {
            Descend(V),
            Retreat,
        }
        let mut color: HashMap<V, u8> = HashMap::new();
        for k in 0..=g.max_degree() {
            for &root in g.vertices(k) {
                if color.get(&root).copied().unwrap_or(WHITE) != WHITE {
                    continue;
                }
                // iterative DFS; stack holds (vertex, successors, cursor)
                let mut stack: Vec<(V, Vec<V>, usize)> = Vec::new();
                color.insert(root, GRAY);
                stack.push((root, self.morse_successors(g, root), 0));
                while !stack.is_empty() {
                    let step = {
                        let (_, succs, i) = stack.last_mut().unwrap();
                        if *i < succs.len() {
                            *i += 1;
                            Step::Descend(succs[*i - 1])
                        } else {
                            Step::Retreat
                        }
                    };
                    match step {
                        Step::Retreat => {
                            let (v, _, _) = stack.pop().unwrap();
                            color.insert(v, BLACK);
                        }
                        Step::Descend(w) => match color.get(&w).copied().unwrap_or(WHITE) {
                            WHITE => {
                                color.insert(w, GRAY);
                                stack.push((w, self.morse_successors(g, w), 0));
                            }
                            GRAY => {
                                let from = stack
                                    .iter()
                                    .position(|&(u, _, _)| u == w)
                                    .expect("gray vertex is on the stack");
                                let cycle = stack[from..].iter().map(|&(u, _, _)| u).collect();
                                return Err(MorseError::CyclicMorseGraph { cycle });
                            }
                            _ => {}
                        },
                    }
                }
            }
        }
        Ok(())
    }

    /// Reduced differential of a critical cell: the sum over all gradient
    /// paths down to critical cells one degree below. A path alternates
    /// digraph edges (factor: the label) and reversed matched edges
    /// (factor: minus the inverse label); evaluation is by memoized flow
    /// over the acyclic Morse graph rather than path enumeration.
    pub fn morse_differential(&self, g: &ComplexDigraph<V>, c: V) -> BTreeMap<V, u64> {
        assert!(self.is_critical(c), "morse differential of a matched cell");
        let mut memo: HashMap<V, BTreeMap<V, u64>> = HashMap::new();
        let p = g.characteristic().get();
        let mut out = BTreeMap::new();
        for &(v, label) in g.successors(c) {
            let flow = self.flow(g, v, &mut memo);
            accumulate(&mut out, flow, label, p);
        }
        out
    }

    /// Chain of critical cells reachable by gradient paths entering at `v`,
    /// weighted by the path factors below `v`.
    fn flow<'m>(
        &self,
        g: &ComplexDigraph<V>,
        v: V,
        memo: &'m mut HashMap<V, BTreeMap<V, u64>>,
    ) -> &'m BTreeMap<V, u64> {
        if !memo.contains_key(&v) {
            let p = g.characteristic().get();
            let value = if let Some((src, label)) = self.source_of(v) {
                // continue up the reversed matched edge, then down every
                // other edge of the source
                let up = p - inv_mod(label, p);
                let mut acc = BTreeMap::new();
                for &(v2, l2) in g.successors(src) {
                    if v2 == v {
                        continue;
                    }
                    let sub = self.flow(g, v2, memo).clone();
                    accumulate(&mut acc, &sub, mul_mod(up, l2, p), p);
                }
                acc
            } else if self.is_critical(v) {
                BTreeMap::from([(v, 1u64)])
            } else {
                // matched downward: a gradient path cannot continue
                BTreeMap::new()
            };
            memo.insert(v, value);
        }
        &memo[&v]
    }
}

fn accumulate<V: MorseVertex>(
    acc: &mut BTreeMap<V, u64>,
    addend: &BTreeMap<V, u64>,
    scale: u64,
    p: u64,
) {
    for (&cell, &coeff) in addend {
        let entry = acc.entry(cell).or_insert(0);
        *entry = (*entry + mul_mod(scale, coeff, p)) % p;
        if *entry == 0 {
            acc.remove(&cell);
        }
    }
}

/// Scan every critical cell and return the first nonzero reduced
/// differential, if any; `None` means the Morse complex has zero
/// differential and critical-cell counts are exactly the Betti numbers.
pub fn first_nonzero_morse_differential<V: MorseVertex>(
    g: &ComplexDigraph<V>,
    vm: &ValidatedMatching<V>,
) -> Option<(V, BTreeMap<V, u64>)> {
    for k in (1..=g.max_degree()).rev() {
        let cells: Vec<V> = g
            .vertices(k)
            .iter()
            .copied()
            .filter(|&v| vm.is_critical(v))
            .collect();
        let hit = par::par_map(cells, |c| {
            let d = vm.morse_differential(g, c);
            (!d.is_empty()).then_some((c, d))
        })
        .into_iter()
        .flatten()
        .next();
        if hit.is_some() {
            return hit;
        }
    }
    None
}
