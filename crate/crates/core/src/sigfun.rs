//! Signaled functions `f(y, b)`, identified with the partition of `{0,1}^2`
//! they induce.
//!
//! Points are ordered `(0,0), (0,1), (1,0), (1,1)` (as `(y, b)`); labels are
//! canonical: the first point gets label 0 and each new class the next
//! unused label. Only the grouping is physical, so two functions with the
//! same grouping produce equal [`Partition`]s.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: [u8; 4],
}

#[inline]
fn point(y: u8, b: u8) -> usize {
    ((y as usize) << 1) | b as usize
}

impl Partition {
    pub const CONSTANT: Partition = Partition { labels: [0, 0, 0, 0] };
    /// `f(y,b) = y`
    pub const INPUT: Partition = Partition { labels: [0, 0, 1, 1] };
    /// `f(y,b) = b`
    pub const OUTPUT: Partition = Partition { labels: [0, 1, 0, 1] };
    /// `f(y,b) = y ^ b`
    pub const XOR: Partition = Partition { labels: [0, 1, 1, 0] };
    /// `f(y,b) = y & b`
    pub const AND: Partition = Partition { labels: [0, 0, 0, 1] };
    /// Both bits of Bob's side.
    pub const FINEST: Partition = Partition { labels: [0, 1, 2, 3] };

    /// Canonicalizes an arbitrary labeling of the four points.
    pub fn from_labels<T: PartialEq + Copy>(values: [T; 4]) -> Partition {
        let mut labels = [0u8; 4];
        let mut seen: [Option<T>; 4] = [None; 4];
        let mut next = 0u8;
        for (i, v) in values.iter().enumerate() {
            match seen[..next as usize].iter().position(|s| *s == Some(*v)) {
                Some(l) => labels[i] = l as u8,
                None => {
                    seen[next as usize] = Some(*v);
                    labels[i] = next;
                    next += 1;
                }
            }
        }
        Partition { labels }
    }

    /// Partition induced by `f: (y, b) -> value`.
    pub fn from_function<T: PartialEq + Copy>(f: impl Fn(u8, u8) -> T) -> Partition {
        Self::from_labels([f(0, 0), f(0, 1), f(1, 0), f(1, 1)])
    }

    /// The 15 partitions of a four-element set, in lexicographic order of
    /// their label strings.
    pub fn enumerate() -> Vec<Partition> {
        let mut out = Vec::with_capacity(15);
        for l1 in 0..=1u8 {
            for l2 in 0..=l1 + 1 {
                let m2 = l1.max(l2);
                for l3 in 0..=m2 + 1 {
                    out.push(Partition {
                        labels: [0, l1, l2, l3],
                    });
                }
            }
        }
        out
    }

    pub fn labels(&self) -> [u8; 4] {
        self.labels
    }

    /// Label of `(y, b)`.
    #[inline]
    pub fn apply(&self, y: u8, b: u8) -> u8 {
        self.labels[point(y, b)]
    }

    pub fn class_count(&self) -> usize {
        *self.labels.iter().max().unwrap() as usize + 1
    }

    pub fn is_constant(&self) -> bool {
        self.class_count() == 1
    }

    /// True when every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.labels[i] != self.labels[j] || coarser.labels[i] == coarser.labels[j]))
    }

    /// All two-class partitions that `self` refines.
    pub fn coarse_grainings(&self) -> Vec<Partition> {
        Self::enumerate()
            .into_iter()
            .filter(|q| q.class_count() == 2 && self.refines(q))
            .collect()
    }

    /// Maps a label of `self` to the label of the same points in `coarser`.
    /// Returns `None` if `self` does not refine `coarser` or the label is unused.
    pub fn project_label(&self, label: u8, coarser: &Partition) -> Option<u8> {
        if !self.refines(coarser) {
            return None;
        }
        self.labels.iter().position(|&l| l == label).map(|i| coarser.labels[i])
    }

    /// A representative `(y, b)` carrying `label`.
    pub fn representative(&self, label: u8) -> Option<(u8, u8)> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| ((i >> 1) as u8, (i & 1) as u8))
    }

    /// The partition of the relabeled function `(y, b) -> f(y ^ flip_y, b ^ flip_b)`.
    pub fn relabel(&self, flip_y: bool, flip_b: bool) -> Partition {
        Self::from_function(|y, b| self.apply(y ^ flip_y as u8, b ^ flip_b as u8))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts four digits `0..=3`, one per point; the labeling is canonicalized.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.trim().as_bytes();
        if bytes.len() != 4 {
            return Err(Error::Parse("partition must have exactly 4 label digits"));
        }
        let mut values = [0u8; 4];
        for (v, &c) in values.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(&c) {
                return Err(Error::Parse("partition labels must be digits 0-3"));
            }
            *v = c - b'0';
        }
        Ok(Partition::from_labels(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn fifteen_partitions_fourteen_informative() {
        let all = Partition::enumerate();
        assert_eq!(all.len(), 15);
        for i in 0..15 {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
        assert_eq!(all.iter().filter(|p| p.is_constant()).count(), 1);
        assert_eq!(all.iter().filter(|p| !p.is_constant()).count(), 14);
    }

    #[test]
    fn all_256_functions_land_in_the_fifteen() {
        let all = Partition::enumerate();
        let mut hit = [false; 15];
        for code in 0u16..256 {
            let value = |y: u8, b: u8| (code >> (2 * point(y, b))) & 3;
            let p = Partition::from_function(value);
            let pos = all.iter().position(|q| *q == p).expect("partition in enumeration");
            hit[pos] = true;
        }
        assert!(hit.iter().all(|h| *h));
    }

    #[test]
    fn named_functions() {
        assert_eq!(Partition::from_function(|y, b| y ^ b), Partition::XOR);
        assert_eq!(Partition::XOR.to_string(), "0110");
        assert_eq!(Partition::from_function(|y, _| y), Partition::INPUT);
        assert_eq!(Partition::from_function(|y, b| y & b), Partition::AND);
        // same grouping, different target values
        let left = Partition::from_function(|y, b| [(0u8, 0u8), (1, 1)][(y ^ b) as usize]);
        let right = Partition::from_function(|y, b| [(1u8, 0u8), (0, 1)][(y ^ b) as usize]);
        assert_eq!(left, right);
        assert_eq!(left, Partition::XOR);
    }

    #[test]
    fn apply_examples() {
        assert_eq!(Partition::XOR.apply(1, 1), Partition::XOR.apply(0, 0));
        assert_eq!(Partition::INPUT.apply(0, 0), 0);
        assert_eq!(Partition::INPUT.apply(0, 1), 0);
        for y in 0..2 {
            for b in 0..2 {
                assert_eq!(Partition::CONSTANT.apply(y, b), 0);
            }
        }
    }

    #[test]
    fn coarse_graining_counts() {
        assert_eq!(Partition::FINEST.coarse_grainings().len(), 7);
        assert_eq!(Partition::INPUT.coarse_grainings(), alloc::vec![Partition::INPUT]);
        let and_refinement: Partition = "0112".parse().unwrap();
        assert_eq!(and_refinement.class_count(), 3);
        assert_eq!(and_refinement.coarse_grainings().len(), 3);
        assert!(Partition::CONSTANT.coarse_grainings().is_empty());
    }

    #[test]
    fn refinement_is_antisymmetric() {
        let all = Partition::enumerate();
        for p in &all {
            for q in &all {
                if p.refines(q) && q.refines(p) {
                    assert_eq!(p, q);
                }
            }
        }
    }

    #[test]
    fn parse_canonicalizes() {
        assert_eq!("1001".parse::<Partition>().unwrap(), Partition::XOR);
        assert!("012".parse::<Partition>().is_err());
        assert!("01a3".parse::<Partition>().is_err());
    }

    #[test]
    fn project_label_onto_coarse() {
        assert_eq!(Partition::FINEST.project_label(2, &Partition::INPUT), Some(1));
        assert_eq!(Partition::OUTPUT.project_label(1, &Partition::INPUT), None);
    }
}
