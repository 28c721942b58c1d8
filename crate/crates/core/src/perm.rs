//! Permutations on {1..n} with the cycle notation used by witness files.
//!
//! Words act left to right: the image of a point under the word x*y is the
//! image under y of the image under x. This matches coset table tracing.

use std::fmt;

use thiserror::Error;

use crate::presentation::Word;

/// A permutation of {1..n}, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("point {0} out of range 1..={1}")]
    PointOutOfRange(usize, usize),
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm { images: (0..degree).collect() }
    }

    /// Build from 0-based images; must be a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n {
                return Err(PermError::PointOutOfRange(img + 1, n));
            }
            if seen[img] {
                return Err(PermError::RepeatedPoint(img + 1));
            }
            seen[img] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    /// Cycles of length >= 2, each starting at its minimum point, sorted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Least k >= 1 with the k-th power equal to the identity.
    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        for cycle in self.cycles() {
            ord = num_integer::lcm(ord, cycle.len() as u64);
        }
        ord
    }

    /// Image of a word under generator images, applying letters left to right.
    pub fn word_image(word: &Word, gens: &[Perm]) -> Perm {
        let degree = gens.first().map_or(0, Perm::degree);
        let mut acc = Perm::identity(degree);
        for &l in word.letters() {
            let g = &gens[(l.unsigned_abs() as usize) - 1];
            if l > 0 {
                acc = acc.then(g);
            } else {
                acc = acc.then(&g.inverse());
            }
        }
        acc
    }

    /// Parse cycle notation over 1-based points: `(1 2)(3 4)`, identity `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        let text = text.trim();
        if text.is_empty() {
            return Err(PermError::Malformed("empty permutation".into()));
        }
        let mut rest = text;
        while !rest.is_empty() {
            let Some(open) = rest.find('(') else {
                return Err(PermError::Malformed(format!("expected `(` in `{rest}`")));
            };
            if !rest[..open].trim().is_empty() {
                return Err(PermError::Malformed(format!("stray text `{}`", &rest[..open])));
            }
            let Some(close) = rest[open..].find(')') else {
                return Err(PermError::Malformed("unclosed `(`".into()));
            };
            let inner = &rest[open + 1..open + close];
            rest = &rest[open + close + 1..];
            let points: Result<Vec<usize>, PermError> = inner
                .split_whitespace()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::Malformed(format!("bad point `{s}`")))
                })
                .collect();
            let points = points?;
            if points.is_empty() {
                continue; // `()` names the identity
            }
            if points.len() == 1 {
                return Err(PermError::Malformed("cycle of length 1".into()));
            }
            for &p in &points {
                if p < 1 || p > degree {
                    return Err(PermError::PointOutOfRange(p, degree));
                }
                if moved[p - 1] {
                    return Err(PermError::RepeatedPoint(p));
                }
                moved[p - 1] = true;
            }
            for i in 0..points.len() {
                let from = points[i] - 1;
                let to = points[(i + 1) % points.len()] - 1;
                images[from] = to;
            }
        }
        Perm::from_images(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let pts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}
