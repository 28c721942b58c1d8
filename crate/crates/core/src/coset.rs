//! Todd–Coxeter coset enumeration over the trivial subgroup.
//!
//! A closed table is the right regular action of the presented group on
//! itself: coset 1 is the identity, the action columns are the generators and
//! their inverses, and the number of live cosets is the group order.
//!
//! Enumeration is deterministic: cosets are numbered by first definition in
//! scan order, and coincidences always merge toward the smaller coset number.
//! `standardize` renumbers any closed table into breadth-first order, so two
//! closed tables for the same presentation standardize to identical bytes.

use std::collections::VecDeque;

use thiserror::Error;

use crate::perm::Perm;
use crate::presentation::{Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Relator scans with immediate filling, row by row.
    Hlt,
    /// Minimal definitions with exhaustive deduction processing.
    Felsch,
}

#[derive(Clone, Debug)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    pub strategy: Strategy,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_cosets: 1_000_000, strategy: Strategy::Hlt }
    }
}

/// The enumeration hit its coset cap. This is inconclusive: it never
/// certifies that the group is infinite.
#[derive(Clone, Debug, Error)]
#[error("coset enumeration did not close within {cosets_defined} cosets (inconclusive)")]
pub struct NonTermination {
    pub cosets_defined: usize,
    pub live_at_abort: usize,
}

/// A closed coset table: total action of every signed generator on 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    gens: usize,
    /// Row-major n x 2d, columns ordered x1, x1^-1, x2, x2^-1, ...
    table: Vec<u32>,
}

/// Result of a closed enumeration, with bookkeeping for reports.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub table: CosetTable,
    pub cosets_defined: usize,
    pub max_live: usize,
}

pub fn enumerate(p: &Presentation, limits: &EnumerationLimits) -> Result<Enumeration, NonTermination> {
    let words: Vec<Vec<i32>> = p
        .relators()
        .iter()
        .map(|r| r.full_word().letters().to_vec())
        .collect();
    let d = p.generator_count();
    let mut t = PartialTable::new(d, limits.max_cosets, limits.strategy == Strategy::Felsch);
    let run = match limits.strategy {
        Strategy::Hlt => t.run_hlt(&words),
        Strategy::Felsch => t.run_felsch(&words),
    };
    match run {
        Ok(()) => {
            let table = t.compact();
            debug_assert!(table.satisfies(p));
            Ok(Enumeration {
                table,
                cosets_defined: t.defined,
                max_live: t.max_live,
            })
        }
        Err(Oversize) => Err(NonTermination {
            cosets_defined: t.defined,
            live_at_abort: t.live,
        }),
    }
}

impl CosetTable {
    pub fn size(&self) -> usize {
        self.table.len() / (2 * self.gens)
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    /// Image of coset `c` under a signed generator letter.
    pub fn apply(&self, c: usize, letter: i32) -> usize {
        let col = col_of(letter);
        self.table[(c - 1) * 2 * self.gens + col] as usize
    }

    /// Apply each letter of `w` in order, starting from `c`.
    pub fn trace(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.apply(c, l))
    }

    /// Least k >= 1 with w^k acting trivially; this is the order of the
    /// group element since the action is the regular representation.
    pub fn element_order(&self, w: &Word) -> usize {
        let mut c = self.trace(1, w);
        let mut k = 1usize;
        while c != 1 {
            c = self.trace(c, w);
            k += 1;
        }
        k
    }

    /// One permutation of {1..n} per generator: c -> c·x_j.
    pub fn generator_permutations(&self) -> Vec<Perm> {
        (1..=self.gens)
            .map(|j| self.word_permutation(&Word::new(vec![j as i32])))
            .collect()
    }

    /// The permutation c -> c·w of the regular action.
    pub fn word_permutation(&self, w: &Word) -> Perm {
        let images = (1..=self.size()).map(|c| self.trace(c, w) - 1).collect();
        Perm::from_images(images).expect("closed table acts by bijections")
    }

    /// Renumber cosets into breadth-first order from coset 1, exploring the
    /// columns x1, x1^-1, x2, x2^-1, ... in order. Idempotent, and identical
    /// for any two closed tables of the same presentation.
    pub fn standardize(&self) -> CosetTable {
        let n = self.size();
        let width = 2 * self.gens;
        let mut new_of_old = vec![0u32; n + 1];
        new_of_old[1] = 1;
        let mut next = 2u32;
        let mut queue = VecDeque::from([1usize]);
        while let Some(c) = queue.pop_front() {
            for col in 0..width {
                let t = self.table[(c - 1) * width + col] as usize;
                if new_of_old[t] == 0 {
                    new_of_old[t] = next;
                    next += 1;
                    queue.push_back(t);
                }
            }
        }
        debug_assert_eq!(next as usize, n + 1, "closed tables are connected");
        let mut table = vec![0u32; self.table.len()];
        for c in 1..=n {
            let nc = new_of_old[c] as usize;
            for col in 0..width {
                table[(nc - 1) * width + col] = new_of_old[self.table[(c - 1) * width + col] as usize];
            }
        }
        CosetTable { gens: self.gens, table }
    }

    /// Check closure: every relator word traces back to its starting coset,
    /// and the signed-generator columns are mutually inverse bijections.
    pub fn satisfies(&self, p: &Presentation) -> bool {
        let n = self.size();
        for c in 1..=n {
            for j in 1..=self.gens {
                let f = self.apply(c, j as i32);
                if f < 1 || f > n || self.apply(f, -(j as i32)) != c {
                    return false;
                }
            }
        }
        p.relators().iter().all(|r| {
            let w = r.full_word();
            (1..=n).all(|c| self.trace(c, &w) == c)
        })
    }

    /// Action rows as signed-generator images, for serialization.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let width = 2 * self.gens;
        (0..self.size())
            .map(|r| self.table[r * width..(r + 1) * width].iter().map(|&v| v as usize).collect())
            .collect()
    }
}

fn col_of(letter: i32) -> usize {
    debug_assert!(letter != 0);
    if letter > 0 {
        2 * (letter as usize - 1)
    } else {
        2 * ((-letter) as usize - 1) + 1
    }
}

fn inv_col(col: usize) -> usize {
    col ^ 1
}

/// Marker for running out of table space.
#[derive(Debug)]
struct Oversize;

/// In-progress enumeration state. Entries are stored in mirrored pairs:
/// entry(c, g) = e  <=>  entry(e, g^-1) = c, so per generator the defined
/// part of the action is a partial bijection.
struct PartialTable {
    width: usize,
    max_cosets: usize,
    rows: Vec<u32>, // 0 = undefined; index (c-1)*width + col
    parent: Vec<u32>,
    defined: usize,
    live: usize,
    max_live: usize,
    pending: VecDeque<(u32, u32)>,
    deductions: Vec<(u32, usize)>,
    collect_deductions: bool,
}

impl PartialTable {
    fn new(gens: usize, max_cosets: usize, collect_deductions: bool) -> Self {
        let mut t = PartialTable {
            width: 2 * gens,
            max_cosets,
            rows: Vec::new(),
            parent: vec![0], // index 0 unused
            defined: 0,
            live: 0,
            max_live: 0,
            pending: VecDeque::new(),
            deductions: Vec::new(),
            collect_deductions,
        };
        t.new_coset().expect("max_cosets >= 1");
        t
    }

    fn max_id(&self) -> u32 {
        self.defined as u32
    }

    fn entry(&self, c: u32, col: usize) -> u32 {
        self.rows[(c as usize - 1) * self.width + col]
    }

    fn set_raw(&mut self, c: u32, col: usize, v: u32) {
        self.rows[(c as usize - 1) * self.width + col] = v;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn find(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn new_coset(&mut self) -> Result<u32, Oversize> {
        if self.defined >= self.max_cosets {
            return Err(Oversize);
        }
        self.defined += 1;
        let id = self.defined as u32;
        self.parent.push(id);
        self.rows.extend(std::iter::repeat_n(0, self.width));
        self.live += 1;
        self.max_live = self.max_live.max(self.live);
        Ok(id)
    }

    /// Define a fresh coset as the image of the empty slot (c, col).
    fn define(&mut self, c: u32, col: usize) -> Result<u32, Oversize> {
        debug_assert_eq!(self.entry(c, col), 0);
        let e = self.new_coset()?;
        self.set_raw(c, col, e);
        self.set_raw(e, inv_col(col), c);
        if self.collect_deductions {
            self.deductions.push((c, col));
            self.deductions.push((e, inv_col(col)));
        }
        Ok(e)
    }

    /// Record c·col = e. If either slot is occupied by a different coset the
    /// conflict is queued as a coincidence and nothing is written, keeping
    /// the mirror invariant.
    fn join(&mut self, c: u32, col: usize, e: u32) {
        let existing = self.entry(c, col);
        if existing != 0 {
            let f = self.find(existing);
            let e = self.find(e);
            if f != e {
                self.pending.push_back((f, e));
            }
            return;
        }
        let icol = inv_col(col);
        let back = self.entry(e, icol);
        if back != 0 {
            let g = self.find(back);
            let c = self.find(c);
            if g != c {
                self.pending.push_back((g, c));
            }
            return;
        }
        self.set_raw(c, col, e);
        self.set_raw(e, icol, c);
        if self.collect_deductions {
            self.deductions.push((c, col));
            self.deductions.push((e, icol));
        }
    }

    /// Merge two cosets deduced equal: union-find toward the smaller number,
    /// dead rows transferred onto survivors, induced coincidences drained.
    fn merge(&mut self, a: u32, b: u32) {
        self.pending.push_back((a, b));
        self.drain();
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop_front() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, dead) = if a < b { (a, b) } else { (b, a) };
            self.parent[dead as usize] = keep;
            self.live -= 1;
            for col in 0..self.width {
                let delta = self.entry(dead, col);
                if delta == 0 {
                    continue;
                }
                self.set_raw(dead, col, 0);
                let target = if delta == dead {
                    keep
                } else {
                    // clear the mirror reference into the dead row
                    debug_assert_eq!(self.entry(delta, inv_col(col)), dead);
                    self.set_raw(delta, inv_col(col), 0);
                    self.find(delta)
                };
                self.join(keep, col, target);
            }
        }
    }

    /// Scan a relator word from coset c, defining cosets to fill any gap.
    fn scan_fill(&mut self, c: u32, w: &[i32]) -> Result<(), Oversize> {
        let len = w.len();
        let mut f = c;
        let mut i = 0;
        while i < len {
            let e = self.entry(f, col_of(w[i]));
            if e == 0 {
                break;
            }
            f = e;
            i += 1;
        }
        if i == len {
            if f != c {
                self.merge(f, c);
            }
            return Ok(());
        }
        let mut b = c;
        let mut j = len;
        while j > i + 1 {
            let e = self.entry(b, inv_col(col_of(w[j - 1])));
            if e == 0 {
                break;
            }
            b = e;
            j -= 1;
        }
        // fill the gap, leaving the last letter as a deduction
        while i + 1 < j {
            f = self.define(f, col_of(w[i]))?;
            i += 1;
        }
        self.join(f, col_of(w[i]), b);
        self.drain();
        Ok(())
    }

    /// Deduction-only scan: close a gap of one letter or detect a mismatch,
    /// otherwise leave the table untouched.
    fn scan_deduce(&mut self, c: u32, w: &[i32]) {
        let len = w.len();
        let mut f = c;
        let mut i = 0;
        while i < len {
            let e = self.entry(f, col_of(w[i]));
            if e == 0 {
                break;
            }
            f = e;
            i += 1;
        }
        if i == len {
            if f != c {
                self.merge(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = len;
        while j > i + 1 {
            let e = self.entry(b, inv_col(col_of(w[j - 1])));
            if e == 0 {
                break;
            }
            b = e;
            j -= 1;
        }
        if i + 1 == j {
            self.join(f, col_of(w[i]), b);
            self.drain();
        }
    }

    fn run_hlt(&mut self, words: &[Vec<i32>]) -> Result<(), Oversize> {
        let mut ptr: u32 = 1;
        while ptr <= self.max_id() {
            if !self.is_live(ptr) {
                ptr += 1;
                continue;
            }
            for w in words {
                self.scan_fill(ptr, w)?;
                if !self.is_live(ptr) {
                    break;
                }
            }
            if self.is_live(ptr) {
                for col in 0..self.width {
                    if self.entry(ptr, col) == 0 {
                        self.define(ptr, col)?;
                    }
                }
            }
            ptr += 1;
        }
        Ok(())
    }

    fn run_felsch(&mut self, words: &[Vec<i32>]) -> Result<(), Oversize> {
        // For each signed letter, the relator rotations anchored at it.
        let mut anchored: Vec<Vec<Vec<i32>>> = vec![Vec::new(); self.width];
        for w in words {
            for (p, &l) in w.iter().enumerate() {
                let mut rot = w[p..].to_vec();
                rot.extend_from_slice(&w[..p]);
                anchored[col_of(l)].push(rot);
            }
        }
        // (coset, col) cursor over the first undefined slot
        let mut cursor: usize = 0;
        loop {
            self.process_deductions(&anchored);
            let mut next_gap = None;
            while cursor < self.rows.len() {
                let c = (cursor / self.width + 1) as u32;
                if !self.is_live(c) {
                    cursor = (c as usize) * self.width;
                    continue;
                }
                if self.rows[cursor] == 0 {
                    next_gap = Some((c, cursor % self.width));
                    break;
                }
                cursor += 1;
            }
            match next_gap {
                None => return Ok(()),
                Some((c, col)) => {
                    self.define(c, col)?;
                }
            }
        }
    }

    fn process_deductions(&mut self, anchored: &[Vec<Vec<i32>>]) {
        while let Some((c, col)) = self.deductions.pop() {
            if !self.is_live(c) || self.entry(c, col) == 0 {
                continue;
            }
            for rot in &anchored[col] {
                if !self.is_live(c) {
                    break;
                }
                self.scan_deduce(c, rot);
            }
        }
    }

    /// Renumber live cosets 1..=n in ascending order of definition.
    fn compact(&mut self) -> CosetTable {
        let mut new_id = vec![0u32; self.defined + 1];
        let mut n = 0u32;
        for c in 1..=self.defined as u32 {
            if self.is_live(c) {
                n += 1;
                new_id[c as usize] = n;
            }
        }
        let mut table = vec![0u32; n as usize * self.width];
        for c in 1..=self.defined as u32 {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.width {
                let e = self.entry(c, col);
                debug_assert!(e != 0, "compact requires a complete table");
                let e = self.find(e);
                table[(new_id[c as usize] as usize - 1) * self.width + col] = new_id[e as usize];
            }
        }
        CosetTable { gens: self.width / 2, table }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn closed(text: &str) -> Enumeration {
        let p = parse_presentation(text).unwrap();
        enumerate(&p, &EnumerationLimits::default()).unwrap()
    }

    fn word(letters: &[i32]) -> Word {
        Word::new(letters.to_vec())
    }

    #[test]
    fn cyclic_three() {
        let e = closed("< x | x^3 >");
        assert_eq!(e.table.size(), 3);
    }

    #[test]
    fn icosahedral_order_sixty() {
        // Cross-checked against the permutation group generated by
        // (1 2)(3 4) and (1 3 5), which satisfies the same relations.
        let e = closed("< x, y | x^2, y^3, (x*y)^5 >");
        assert_eq!(e.table.size(), 60);
    }

    #[test]
    fn hyperbolic_triangle_hits_cap() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^7 >").unwrap();
        let limits = EnumerationLimits { max_cosets: 100_000, strategy: Strategy::Hlt };
        let err = enumerate(&p, &limits).unwrap_err();
        assert_eq!(err.cosets_defined, 100_000);
    }

    #[test]
    fn cascading_collapse_to_trivial() {
        // x^2 and x^3 force x = 1.
        let e = closed("< x | x^2, x^3 >");
        assert_eq!(e.table.size(), 1);
        assert!(e.cosets_defined > 1); // cosets were defined and merged away
    }

    #[test]
    fn trace_follows_first_definition_numbering() {
        let e = closed("< x | x^3 >");
        assert_eq!(e.table.trace(1, &Word::empty()), 1);
        assert_eq!(e.table.trace(1, &word(&[1, 1])), 3);
        // w * w^-1 fixes every coset
        let w = word(&[1, 1]);
        let ww = w.concat(&w.invert());
        for c in 1..=3 {
            assert_eq!(e.table.trace(c, &ww), c);
        }
    }

    #[test]
    fn element_orders() {
        let e = closed("< x, y | x^2, y^2, (x*y)^3 >");
        assert_eq!(e.table.size(), 6);
        assert_eq!(e.table.element_order(&Word::empty()), 1);
        assert_eq!(e.table.element_order(&word(&[1, 2])), 3);
        let z6 = closed("< x | x^6 >");
        assert_eq!(z6.table.element_order(&word(&[1, 1])), 3);
    }

    #[test]
    fn generator_permutations_are_regular() {
        let e = closed("< x | x^3 >");
        let perms = e.table.generator_permutations();
        assert_eq!(perms.len(), 1);
        assert_eq!(perms[0].cycles().len(), 1);
        assert_eq!(perms[0].order(), 3);

        // a generator forced trivial acts as the identity on one coset
        let t = closed("< x | x^1 >");
        let perms = t.table.generator_permutations();
        assert_eq!(t.table.size(), 1);
        assert!(perms[0].is_identity());

        // regular representation of the order-6 dihedral group:
        // both generators are fixed-point-free involutions
        let d3 = closed("< x, y | x^2, y^2, (x*y)^3 >");
        for perm in d3.table.generator_permutations() {
            assert_eq!(perm.order(), 2);
            assert_eq!(perm.cycles().len(), 3);
        }
    }

    #[test]
    fn relator_traces_close_everywhere() {
        for text in ["< x | x^6 >", "< x, y | x^2, y^3, (x*y)^4 >", "< x, y | x^2, y^2, (x*y)^5 >"] {
            let p = parse_presentation(text).unwrap();
            let e = enumerate(&p, &EnumerationLimits::default()).unwrap();
            assert!(e.table.satisfies(&p), "{text}");
        }
    }

    #[test]
    fn standardize_is_idempotent_and_strategy_independent() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^5 >").unwrap();
        let hlt = enumerate(&p, &EnumerationLimits { max_cosets: 1_000_000, strategy: Strategy::Hlt }).unwrap();
        let felsch = enumerate(&p, &EnumerationLimits { max_cosets: 1_000_000, strategy: Strategy::Felsch }).unwrap();
        let s1 = hlt.table.standardize();
        let s2 = felsch.table.standardize();
        assert_eq!(s1, s2);
        assert_eq!(s1.standardize(), s1);
        assert!(s2.satisfies(&p));
    }

    #[test]
    fn felsch_agrees_on_small_groups() {
        for (text, order) in [
            ("< x | x^5 >", 5),
            ("< x, y | x^2, y^2, (x*y)^4 >", 8),
            ("< x, y | x^2, y^3, (x*y)^3 >", 12),
        ] {
            let p = parse_presentation(text).unwrap();
            let f = enumerate(&p, &EnumerationLimits { max_cosets: 100_000, strategy: Strategy::Felsch }).unwrap();
            assert_eq!(f.table.size(), order, "{text}");
        }
    }

    #[test]
    fn merge_behavior_on_partial_tables() {
        // merge(c, c) is a no-op
        let mut t = PartialTable::new(1, 100, false);
        for _ in 0..4 {
            t.new_coset().unwrap();
        }
        assert_eq!(t.live, 5);
        t.merge(3, 3);
        assert_eq!(t.live, 5);

        // merging an empty row absorbs it and rewrites references
        t.join(1, 0, 2); // 1·x = 2
        t.merge(2, 4); // coset 4 has an empty row; 2 survives
        assert_eq!(t.live, 4);
        assert!(t.is_live(2));
        assert!(!t.is_live(4));
        assert_eq!(t.entry(1, 0), 2);

        // a merge that induces a secondary coincidence drains fully:
        // rows 2 and 3 map x to different cosets, so merging 2 and 3
        // must also merge their images.
        let mut t = PartialTable::new(1, 100, false);
        for _ in 0..4 {
            t.new_coset().unwrap();
        }
        t.join(2, 0, 4); // 2·x = 4
        t.join(3, 0, 5); // 3·x = 5
        t.merge(2, 3);
        assert!(t.is_live(2) && !t.is_live(3));
        assert!(t.is_live(4) && !t.is_live(5));
        assert_eq!(t.entry(2, 0), 4);
        assert_eq!(t.find(5), 4);
    }

    #[test]
    fn deterministic_reruns_are_bit_identical() {
        let p = parse_presentation("< x, y | x^2, y^3, (x*y)^4 >").unwrap();
        let a = enumerate(&p, &EnumerationLimits::default()).unwrap();
        let b = enumerate(&p, &EnumerationLimits::default()).unwrap();
        assert_eq!(a.table, b.table);
        assert_eq!(a.cosets_defined, b.cosets_defined);
    }

    #[test]
    fn order_divides_exponent_on_closed_tables() {
        let p = parse_presentation("< x, y | x^2, y^2, (x*y)^3, (y*x)^6 >").unwrap();
        let e = enumerate(&p, &EnumerationLimits::default()).unwrap();
        for r in p.relators() {
            let k = e.table.element_order(&r.base);
            assert_eq!(r.exponent as usize % k, 0);
        }
        // all cycles of a relator's permutation share its order
        for r in p.relators() {
            let perm = e.table.word_permutation(&r.base);
            let k = e.table.element_order(&r.base);
            for cycle in perm.cycles() {
                assert_eq!(cycle.len(), k);
            }
        }
    }
}
