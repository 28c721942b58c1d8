//! The orbihedral cover of a presentation, built from a closed coset table.
//!
//! The 1-skeleton is the Cayley graph: one vertex per coset, one directed
//! edge per (coset, generator). Each relator (u, m) contributes one 2-cell
//! per cycle of the permutation by which u acts on the cosets; those cycles
//! all have length m exactly when u has order m, and the builder refuses to
//! proceed otherwise. A face is traced by reading u^m from the smallest
//! coset of its cycle, +1 per forward edge traversal and -1 per inverse
//! traversal, so for a group of order n the cell counts are
//! (n, d*n, sum_i n/m_i).
//!
//! Betti numbers come from exact rational ranks of the two boundary maps,
//! and the Euler report compares (b0 - b1 + b2)/n with 1 - d + sum 1/m_i.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::coset::CosetTable;
use crate::presentation::{Presentation, Word};
use crate::{Int, IntMatrix, Rational};

/// Total-cell cap for complex construction (vertices + edges + faces).
pub const DEFAULT_MAX_CELLS: usize = 200_000;

/// The Cayley graph of a closed coset table: n vertices, d*n directed edges
/// indexed by (coset, generator).
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    vertices: usize,
    gens: usize,
    /// target of edge (c, j) at index (c-1)*d + (j-1)
    targets: Vec<usize>,
}

impl CayleyGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn edge_index(&self, coset: usize, gen: usize) -> usize {
        (coset - 1) * self.gens + (gen - 1)
    }

    /// (source, generator, target) of an edge.
    pub fn edge(&self, index: usize) -> (usize, usize, usize) {
        (index / self.gens + 1, index % self.gens + 1, self.targets[index])
    }

    /// Signed vertex-edge incidence: column e has -1 at its source and +1 at
    /// its target; loop columns are zero. Mod 2 this is the unoriented
    /// incidence matrix.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::new(self.vertices, self.edge_count());
        for e in 0..self.edge_count() {
            let (src, _, tgt) = self.edge(e);
            m.add_to(tgt - 1, e, Int::one());
            m.add_to(src - 1, e, -Int::one());
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertices + 1];
        for e in 0..self.edge_count() {
            let (src, _, tgt) = self.edge(e);
            adj[src].push(tgt);
            adj[tgt].push(src);
        }
        let mut seen = vec![false; self.vertices + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for &t in &adj[c] {
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == self.vertices
    }
}

pub fn build_cayley_graph(t: &CosetTable) -> CayleyGraph {
    let n = t.size();
    let d = t.generator_count();
    let mut targets = Vec::with_capacity(n * d);
    for c in 1..=n {
        for j in 1..=d {
            targets.push(t.apply(c, j as i32));
        }
    }
    CayleyGraph { vertices: n, gens: d, targets }
}

/// Dimension of the graph's cycle space, E - V + 1, cross-checked against
/// the GF(2) rank of the incidence matrix. Requires a connected graph.
pub fn cycle_space_dim(g: &CayleyGraph) -> usize {
    assert!(g.is_connected(), "cycle space formula needs a connected graph");
    let by_formula = g.edge_count() - g.vertex_count() + 1;
    let gf2_rank = g.incidence_matrix().rank_gf2();
    assert_eq!(
        by_formula,
        g.edge_count() - gf2_rank,
        "cycle space dimension disagrees with the GF(2) incidence rank"
    );
    by_formula
}

/// One 2-cell: the cycle of relator i's permutation containing `base_coset`
/// (its minimum), with the signed edge-traversal chain of u_i^{m_i}.
#[derive(Clone, Debug)]
pub struct Face {
    pub relator: usize,
    pub base_coset: usize,
    pub chain: BTreeMap<usize, i64>,
}

#[derive(Clone, Debug)]
pub struct TwoComplex {
    pub graph: CayleyGraph,
    pub faces: Vec<Face>,
    /// n x dn signed incidence of the 1-skeleton
    pub boundary1: IntMatrix,
    /// dn x F face boundary chains
    pub boundary2: IntMatrix,
}

#[derive(Clone, Debug, Error)]
pub enum BuildError {
    #[error("relator {relator} has order {actual} instead of the declared {declared}")]
    OrderMismatch { relator: usize, actual: usize, declared: u32 },
    #[error("complex would have {cells} cells, above the cap of {max}")]
    CellLimitExceeded { cells: usize, max: usize },
}

impl TwoComplex {
    /// Build the cover for a presentation whose orders are verified on the
    /// table; any relator whose permutation has a cycle of length other than
    /// its exponent aborts with `OrderMismatch`.
    pub fn build(t: &CosetTable, p: &Presentation, max_cells: usize) -> Result<TwoComplex, BuildError> {
        let n = t.size();
        let d = p.generator_count();
        let graph = build_cayley_graph(t);

        let mut face_count = 0usize;
        let mut cycles_per_relator: Vec<Vec<usize>> = Vec::with_capacity(p.relator_count());
        for (i, rel) in p.relators().iter().enumerate() {
            let perm = t.word_permutation(&rel.base);
            let m = rel.exponent as usize;
            let mut bases = Vec::new();
            let mut covered = vec![false; n];
            for cycle in perm.cycles() {
                if cycle.len() != m {
                    return Err(BuildError::OrderMismatch { relator: i, actual: cycle.len(), declared: rel.exponent });
                }
                for &pt in &cycle {
                    covered[pt] = true;
                }
                bases.push(cycle.iter().min().unwrap() + 1);
            }
            // fixed points are cycles of length 1
            for (pt, &cov) in covered.iter().enumerate() {
                if !cov {
                    if m != 1 {
                        return Err(BuildError::OrderMismatch { relator: i, actual: 1, declared: rel.exponent });
                    }
                    bases.push(pt + 1);
                }
            }
            bases.sort_unstable();
            face_count += bases.len();
            cycles_per_relator.push(bases);
        }

        let cells = n + n * d + face_count;
        if cells > max_cells {
            return Err(BuildError::CellLimitExceeded { cells, max: max_cells });
        }

        let mut faces = Vec::with_capacity(face_count);
        for (i, rel) in p.relators().iter().enumerate() {
            let word = rel.full_word();
            for &base in &cycles_per_relator[i] {
                faces.push(Face {
                    relator: i,
                    base_coset: base,
                    chain: trace_chain(t, &graph, base, &word),
                });
            }
        }

        let boundary1 = graph.incidence_matrix();
        let mut boundary2 = IntMatrix::new(graph.edge_count(), faces.len());
        for (f, face) in faces.iter().enumerate() {
            for (&e, &coeff) in &face.chain {
                boundary2.set(e, f, Int::from(coeff));
            }
        }

        let complex = TwoComplex { graph, faces, boundary1, boundary2 };
        debug_assert!(complex.boundary_composition_is_zero());
        Ok(complex)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// The defining identity of a chain complex, checked exactly.
    pub fn boundary_composition_is_zero(&self) -> bool {
        self.boundary1.multiply(&self.boundary2).is_zero()
    }

    /// (b0, b1, b2) over the rationals, from exact boundary ranks.
    pub fn betti_numbers(&self) -> (usize, usize, usize) {
        let n = self.vertex_count();
        let e = self.edge_count();
        let f = self.face_count();
        let r1 = self.boundary1.rank_rational();
        let r2 = self.boundary2.rank_rational();
        (n - r1, (e - r1) - r2, f - r2)
    }
}

/// Signed edge-traversal counts of reading `word` from `start`.
fn trace_chain(t: &CosetTable, graph: &CayleyGraph, start: usize, word: &Word) -> BTreeMap<usize, i64> {
    let mut chain: BTreeMap<usize, i64> = BTreeMap::new();
    let mut c = start;
    for &l in word.letters() {
        if l > 0 {
            let e = graph.edge_index(c, l as usize);
            *chain.entry(e).or_insert(0) += 1;
            c = t.apply(c, l);
        } else {
            let prev = t.apply(c, l);
            let e = graph.edge_index(prev, (-l) as usize);
            *chain.entry(e).or_insert(0) -= 1;
            c = prev;
        }
    }
    debug_assert_eq!(c, start, "relator traces must close");
    chain.retain(|_, v| *v != 0);
    chain
}

/// Exact verification of the Euler identity on the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub betti: (usize, usize, usize),
    pub group_order: usize,
    /// 1 - d + sum 1/m_i
    pub chi_orb: Rational,
    /// (b0 - b1 + b2) / n
    pub lhs: Rational,
    pub identity_holds: bool,
    /// n * chi_orb - 1, the expected b2 when b1 = 0
    pub b2_predicted: Int,
}

/// Orbifold Euler characteristic of the presentation: 1 - d + sum 1/m_i.
pub fn chi_orb(p: &Presentation) -> Rational {
    let mut chi = Rational::one() - Rational::from_integer(Int::from(p.generator_count()));
    for rel in p.relators() {
        chi += Rational::new(Int::one(), Int::from(rel.exponent));
    }
    chi
}

/// Build the cover and compare (b0 - b1 + b2)/n against 1 - d + sum 1/m_i,
/// reporting the Betti numbers and the predicted b2 = n*chi - 1.
pub fn euler_identity_check(
    p: &Presentation,
    t: &CosetTable,
    max_cells: usize,
) -> Result<EulerReport, BuildError> {
    let complex = TwoComplex::build(t, p, max_cells)?;
    let betti = complex.betti_numbers();
    let n = t.size();
    let chi = chi_orb(p);
    let alternating = Int::from(betti.0) - Int::from(betti.1) + Int::from(betti.2);
    let lhs = Rational::new(alternating, Int::from(n));
    let predicted = Rational::from_integer(Int::from(n)) * chi.clone() - Rational::one();
    debug_assert!(predicted.is_integer(), "n * chi is integral once orders are verified");
    Ok(EulerReport {
        betti,
        group_order: n,
        identity_holds: lhs == chi,
        chi_orb: chi,
        lhs,
        b2_predicted: predicted.to_integer(),
    })
}

/// Approximate decimal rendering of an exact rational, for display only.
pub fn approx_decimal(r: &Rational, digits: u32) -> String {
    let scale = Int::from(10u32).pow(digits);
    let scaled = (r.numer() * &scale) / r.denom();
    let negative = scaled.is_negative();
    let abs = scaled.abs();
    let whole = &abs / &scale;
    let frac = &abs % &scale;
    format!(
        "{}{}.{:0width$}",
        if negative { "-" } else { "" },
        whole,
        frac,
        width = digits as usize
    )
}
