//! Behaviors of the (2,2,2) scenario: conditional tables `p(a,b|x,y)`.
//!
//! Entries are stored flat, indexed by `a<<3 | b<<2 | x<<1 | y`.
//!
//! CHSH facets are numbered by their minus-sign pattern. Writing
//! `S = s00*E00 + s01*E01 + s10*E10 + s11*E11` with `Exy = sum (-1)^(a^b) p(a,b|x,y)`,
//! bit `2x+y` of the pattern mask is set when `sxy = -1`. The eight masks
//! with an odd number of minus signs, in increasing order, are facets 0..=7:
//!
//! | facet | mask     | S                          |
//! |-------|----------|----------------------------|
//! | 0     | `0b0001` | `-E00 + E01 + E10 + E11`   |
//! | 1     | `0b0010` | ` E00 - E01 + E10 + E11`   |
//! | 2     | `0b0100` | ` E00 + E01 - E10 + E11`   |
//! | 3     | `0b0111` | `-E00 - E01 - E10 + E11`   |
//! | 4     | `0b1000` | ` E00 + E01 + E10 - E11`   |
//! | 5     | `0b1011` | `-E00 - E01 + E10 - E11`   |
//! | 6     | `0b1101` | `-E00 + E01 - E10 - E11`   |
//! | 7     | `0b1110` | ` E00 - E01 - E10 - E11`   |
//!
//! Local behaviors satisfy `S <= 2` on every facet; the canonical PR box
//! reaches 4 on facet 4.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Tolerance used for normalization checks.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Number of CHSH facets of the local polytope.
pub const FACET_COUNT: usize = 8;

const FACET_MASKS: [u8; FACET_COUNT] = [0b0001, 0b0010, 0b0100, 0b0111, 0b1000, 0b1011, 0b1101, 0b1110];

/// Tsirelson bound `2*sqrt(2)`, used as the quantum-membership proxy.
pub const TSIRELSON: f64 = 2.0 * core::f64::consts::SQRT_2;

#[inline]
pub(crate) fn index(a: u8, b: u8, x: u8, y: u8) -> usize {
    debug_assert!(a < 2 && b < 2 && x < 2 && y < 2);
    ((a as usize) << 3) | ((b as usize) << 2) | ((x as usize) << 1) | y as usize
}

/// Decompose a flat index into `(a, b, x, y)`.
#[inline]
pub fn unindex(i: usize) -> (u8, u8, u8, u8) {
    (
        ((i >> 3) & 1) as u8,
        ((i >> 2) & 1) as u8,
        ((i >> 1) & 1) as u8,
        (i & 1) as u8,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Alice,
    Bob,
}

/// One party's input-conditional output distribution, `probs[i][o] = p(o|i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marginal {
    pub side: Side,
    pub probs: [[f64; 2]; 2],
}

impl Marginal {
    pub fn get(&self, output: u8, input: u8) -> f64 {
        self.probs[input as usize][output as usize]
    }
}

/// Relabeling of the canonical PR box: the resulting box satisfies
/// `a ^ b = (x ^ flip_x) & (y ^ flip_y) ^ flip_output`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PrRelabeling {
    pub flip_x: bool,
    pub flip_y: bool,
    pub flip_output: bool,
}

impl PrRelabeling {
    pub const CANONICAL: PrRelabeling = PrRelabeling {
        flip_x: false,
        flip_y: false,
        flip_output: false,
    };

    /// All eight relabelings, ordered by the bit pattern `flip_x flip_y flip_output`.
    pub fn all() -> impl Iterator<Item = PrRelabeling> {
        (0u8..8).map(|m| PrRelabeling {
            flip_x: m & 4 != 0,
            flip_y: m & 2 != 0,
            flip_output: m & 1 != 0,
        })
    }

    fn parity(&self, x: u8, y: u8) -> u8 {
        ((x ^ self.flip_x as u8) & (y ^ self.flip_y as u8)) ^ self.flip_output as u8
    }
}

/// A conditional distribution `p(a,b|x,y)` over bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Behavior {
    probs: [f64; 16],
}

impl Behavior {
    /// Validates entries and per-input normalization.
    pub fn new(probs: [f64; 16]) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability { index: i, value: p });
            }
        }
        let behavior = Behavior { probs };
        for x in 0..2 {
            for y in 0..2 {
                let sum = behavior.input_sum(x, y);
                if (sum - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(Error::NotNormalized { x, y, sum });
                }
            }
        }
        Ok(behavior)
    }

    /// Builds a behavior from a function of `(a, b, x, y)`.
    pub fn from_fn(f: impl Fn(u8, u8, u8, u8) -> f64) -> Result<Self> {
        let mut probs = [0.0; 16];
        for (i, p) in probs.iter_mut().enumerate() {
            let (a, b, x, y) = unindex(i);
            *p = f(a, b, x, y);
        }
        Self::new(probs)
    }

    fn input_sum(&self, x: u8, y: u8) -> f64 {
        let mut sum = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                sum += self.get(a, b, x, y);
            }
        }
        sum
    }

    #[inline]
    pub fn get(&self, a: u8, b: u8, x: u8, y: u8) -> f64 {
        self.probs[index(a, b, x, y)]
    }

    pub fn probs(&self) -> &[f64; 16] {
        &self.probs
    }

    /// Deterministic local vertex: Alice answers `a_fn[x]`, Bob answers `b_fn[y]`.
    pub fn deterministic_vertex(a_fn: [u8; 2], b_fn: [u8; 2]) -> Self {
        let mut probs = [0.0; 16];
        for x in 0..2u8 {
            for y in 0..2u8 {
                probs[index(a_fn[x as usize] & 1, b_fn[y as usize] & 1, x, y)] = 1.0;
            }
        }
        Behavior { probs }
    }

    /// All 16 deterministic vertices, ordered by `(a_fn, b_fn)` read as 4-bit numbers.
    pub fn deterministic_vertices() -> Vec<Behavior> {
        let mut out = Vec::with_capacity(16);
        for m in 0u8..16 {
            let a_fn = [(m >> 3) & 1, (m >> 2) & 1];
            let b_fn = [(m >> 1) & 1, m & 1];
            out.push(Self::deterministic_vertex(a_fn, b_fn));
        }
        out
    }

    pub fn pr_box(relabeling: PrRelabeling) -> Self {
        let mut probs = [0.0; 16];
        for (i, p) in probs.iter_mut().enumerate() {
            let (a, b, x, y) = unindex(i);
            if a ^ b == relabeling.parity(x, y) {
                *p = 0.5;
            }
        }
        Behavior { probs }
    }

    /// The uniform behavior `p = 1/4`.
    pub fn uniform() -> Self {
        Behavior { probs: [0.25; 16] }
    }

    /// Convex combination of `behaviors` with `weights`.
    pub fn mix(behaviors: &[Behavior], weights: &[f64]) -> Result<Self> {
        if behaviors.len() != weights.len() {
            return Err(Error::InvalidMixture("behaviors and weights differ in length"));
        }
        if behaviors.is_empty() {
            return Err(Error::InvalidMixture("empty mixture"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidMixture("negative weight"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidMixture("weights do not sum to 1"));
        }
        let mut probs = [0.0; 16];
        for (behavior, &w) in behaviors.iter().zip(weights) {
            for (acc, p) in probs.iter_mut().zip(behavior.probs.iter()) {
                *acc += w * p;
            }
        }
        // Rounding can push entries a hair outside [0,1].
        for p in probs.iter_mut() {
            *p = p.clamp(0.0, 1.0);
        }
        Behavior::new(probs)
    }

    /// Applies a relabeling of inputs and outputs: the result `q` satisfies
    /// `q(a,b|x,y) = p(a^fa, b^fb | x^fx, y^fy)`.
    pub fn relabel(&self, flip_x: bool, flip_y: bool, flip_a: bool, flip_b: bool) -> Self {
        let mut probs = [0.0; 16];
        for (i, p) in probs.iter_mut().enumerate() {
            let (a, b, x, y) = unindex(i);
            *p = self.get(a ^ flip_a as u8, b ^ flip_b as u8, x ^ flip_x as u8, y ^ flip_y as u8);
        }
        Behavior { probs }
    }

    /// One-side marginal table indexed by `[own input][other input][own output]`.
    fn marginal_table(&self, side: Side) -> [[[f64; 2]; 2]; 2] {
        let mut table = [[[0.0; 2]; 2]; 2];
        for (i, &p) in self.probs.iter().enumerate() {
            let (a, b, x, y) = unindex(i);
            match side {
                Side::Alice => table[x as usize][y as usize][a as usize] += p,
                Side::Bob => table[y as usize][x as usize][b as usize] += p,
            }
        }
        table
    }

    fn signaling_deviation(&self, side: Side) -> f64 {
        let table = self.marginal_table(side);
        let mut dev: f64 = 0.0;
        for own in 0..2 {
            for out in 0..2 {
                dev = dev.max((table[own][0][out] - table[own][1][out]).abs());
            }
        }
        dev
    }

    /// Input-conditional marginal of one party; fails if it depends on the
    /// other party's input.
    pub fn marginal(&self, side: Side) -> Result<Marginal> {
        let deviation = self.signaling_deviation(side);
        if deviation > NORMALIZATION_TOL {
            return Err(Error::Signaling { side, deviation });
        }
        let table = self.marginal_table(side);
        let mut probs = [[0.0; 2]; 2];
        for (own, row) in probs.iter_mut().enumerate() {
            for (out, p) in row.iter_mut().enumerate() {
                *p = 0.5 * (table[own][0][out] + table[own][1][out]);
            }
        }
        Ok(Marginal { side, probs })
    }

    /// One party's `p(output = 0 | x, y)` indexed by `x<<1 | y`, with no
    /// non-signaling requirement.
    pub fn local_zero_rates(&self, side: Side) -> [f64; 4] {
        core::array::from_fn(|xy| {
            let (x, y) = ((xy >> 1) as u8, (xy & 1) as u8);
            match side {
                Side::Alice => self.get(0, 0, x, y) + self.get(0, 1, x, y),
                Side::Bob => self.get(0, 0, x, y) + self.get(1, 0, x, y),
            }
        })
    }

    pub fn is_nonsignaling(&self, tol: f64) -> bool {
        self.signaling_deviation(Side::Alice) <= tol && self.signaling_deviation(Side::Bob) <= tol
    }

    /// Correlator `E_xy = sum_{a,b} (-1)^(a^b) p(a,b|x,y)`.
    pub fn correlator(&self, x: u8, y: u8) -> f64 {
        let mut e = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let sign = if a ^ b == 0 { 1.0 } else { -1.0 };
                e += sign * self.get(a, b, x, y);
            }
        }
        e
    }

    /// CHSH value on facet `facet` (see the module docs for the numbering).
    ///
    /// # Panics
    /// If `facet >= 8`.
    pub fn chsh_value(&self, facet: usize) -> f64 {
        let mask = FACET_MASKS[facet];
        let mut s = 0.0;
        for j in 0..4u8 {
            let e = self.correlator(j >> 1, j & 1);
            s += if mask & (1 << j) != 0 { -e } else { e };
        }
        s
    }

    pub fn chsh_values(&self) -> [f64; FACET_COUNT] {
        core::array::from_fn(|f| self.chsh_value(f))
    }

    /// Largest CHSH value over all facets.
    pub fn max_chsh(&self) -> f64 {
        self.chsh_values().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Proxy for quantum membership: no facet exceeds the Tsirelson bound.
    /// This is a necessary condition only, not a certificate.
    pub fn within_tsirelson_proxy(&self) -> bool {
        self.max_chsh() <= TSIRELSON + NORMALIZATION_TOL
    }

    /// Facets on which the behavior attains exactly `S = 2` (within `tol`).
    pub fn saturated_facets(&self, tol: f64) -> Vec<usize> {
        (0..FACET_COUNT)
            .filter(|&f| (self.chsh_value(f) - 2.0).abs() <= tol)
            .collect()
    }

    /// Largest entrywise difference between two behaviors.
    pub fn max_abs_diff(&self, other: &Behavior) -> f64 {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }
}

/// The PR relabeling whose correlators match the sign pattern of `facet`,
/// i.e. the one reaching `S = 4` there.
pub fn pr_for_facet(facet: usize) -> PrRelabeling {
    let mask = FACET_MASKS[facet];
    PrRelabeling::all()
        .find(|r| {
            (0..4u8).all(|j| {
                let minus = mask & (1 << j) != 0;
                r.parity(j >> 1, j & 1) == minus as u8
            })
        })
        .expect("every odd sign pattern is a PR relabeling")
}

/// Mixes `vertex` toward the PR box aligned with the first CHSH facet the
/// vertex saturates: `(1-epsilon) vertex + epsilon PR`.
pub fn near_vertex(vertex: &Behavior, epsilon: f64) -> Result<Behavior> {
    let facet = *vertex
        .saturated_facets(1e-9)
        .first()
        .ok_or(Error::Geometry("vertex does not lie on a CHSH facet"))?;
    near_vertex_on_facet(vertex, facet, epsilon)
}

/// As [`near_vertex`], on an explicitly chosen facet the vertex saturates.
pub fn near_vertex_on_facet(vertex: &Behavior, facet: usize, epsilon: f64) -> Result<Behavior> {
    if facet >= FACET_COUNT {
        return Err(Error::Range {
            what: "facet index",
            value: facet as f64,
        });
    }
    if !(epsilon > 0.0 && epsilon <= core::f64::consts::SQRT_2 - 1.0) {
        return Err(Error::Range {
            what: "epsilon",
            value: epsilon,
        });
    }
    if (vertex.chsh_value(facet) - 2.0).abs() > 1e-9 {
        return Err(Error::Geometry("vertex does not saturate the requested facet"));
    }
    let pr = Behavior::pr_box(pr_for_facet(facet));
    Behavior::mix(&[*vertex, pr], &[1.0 - epsilon, epsilon])
}

/// A behavior with rational entries `counts / denominator`, used where
/// identities must hold exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactBehavior {
    counts: [u64; 16],
    denominator: u64,
}

impl ExactBehavior {
    /// `counts[i] / denominator`; each `(x,y)` block must sum to `denominator`.
    pub fn new(counts: [u64; 16], denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Range {
                what: "denominator",
                value: 0.0,
            });
        }
        for x in 0..2 {
            for y in 0..2 {
                let sum: u64 = (0..4).map(|ab| counts[index(ab >> 1, ab & 1, x, y)]).sum();
                if sum != denominator {
                    return Err(Error::NotNormalized {
                        x,
                        y,
                        sum: sum as f64 / denominator as f64,
                    });
                }
            }
        }
        Ok(ExactBehavior { counts, denominator })
    }

    pub fn pr_box(relabeling: PrRelabeling) -> Self {
        let mut counts = [0; 16];
        for (i, c) in counts.iter_mut().enumerate() {
            let (a, b, x, y) = unindex(i);
            if a ^ b == relabeling.parity(x, y) {
                *c = 1;
            }
        }
        ExactBehavior { counts, denominator: 2 }
    }

    pub fn count(&self, a: u8, b: u8, x: u8, y: u8) -> u64 {
        self.counts[index(a, b, x, y)]
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Exact equality of the represented rationals (cross-multiplied).
    pub fn same_as(&self, other: &ExactBehavior) -> bool {
        self.counts
            .iter()
            .zip(other.counts.iter())
            .all(|(&p, &q)| p as u128 * other.denominator as u128 == q as u128 * self.denominator as u128)
    }

    pub fn to_behavior(&self) -> Behavior {
        let d = self.denominator as f64;
        Behavior {
            probs: self.counts.map(|c| c as f64 / d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn copy_vertex() -> Behavior {
        Behavior::deterministic_vertex([0, 1], [0, 1])
    }

    fn p_v() -> Behavior {
        Behavior::deterministic_vertex([0, 0], [0, 1])
    }

    #[test]
    fn copy_vertex_entries() {
        let v = copy_vertex();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(v.get(x, y, x, y), 1.0);
            }
        }
    }

    #[test]
    fn p_v_copies_bob_input() {
        let m = p_v().marginal(Side::Bob).unwrap();
        for y in 0..2 {
            for b in 0..2 {
                assert_eq!(m.get(b, y), if b == y { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn sixteen_distinct_deterministic_vertices() {
        let vs = Behavior::deterministic_vertices();
        for i in 0..vs.len() {
            for j in 0..i {
                assert_ne!(vs[i], vs[j]);
            }
        }
        assert_eq!(vs.len(), 16);
    }

    #[test]
    fn canonical_pr_entries() {
        let pr = Behavior::pr_box(PrRelabeling::CANONICAL);
        assert_eq!(pr.get(0, 0, 1, 1), 0.0);
        assert_eq!(pr.get(0, 1, 1, 1), 0.5);
        let m = pr.marginal(Side::Alice).unwrap();
        for x in 0..2 {
            for a in 0..2 {
                assert_eq!(m.get(a, x), 0.5);
            }
        }
    }

    #[test]
    fn flip_output_relabeling() {
        let pr = Behavior::pr_box(PrRelabeling::CANONICAL);
        let flipped = Behavior::pr_box(PrRelabeling {
            flip_output: true,
            ..Default::default()
        });
        for i in 0..16 {
            let (a, b, x, y) = unindex(i);
            assert_eq!(flipped.get(a, b, x, y), pr.get(1 ^ a, b, x, y));
        }
    }

    #[test]
    fn mix_identity_and_arithmetic() {
        let pr = Behavior::pr_box(PrRelabeling::CANONICAL);
        assert_eq!(Behavior::mix(&[pr], &[1.0]).unwrap(), pr);

        let mu = 0.1;
        let m = Behavior::mix(&[p_v(), pr], &[1.0 - mu, mu]).unwrap();
        assert!((m.get(0, 0, 0, 0) - (0.9 * p_v().get(0, 0, 0, 0) + 0.05)).abs() < 1e-15);
    }

    #[test]
    fn uniform_mix_of_vertices() {
        let vs = Behavior::deterministic_vertices();
        let m = Behavior::mix(&vs, &[1.0 / 16.0; 16]).unwrap();
        assert!(m.max_abs_diff(&Behavior::uniform()) < 1e-15);
    }

    #[test]
    fn mix_rejects_bad_weights() {
        let pr = Behavior::pr_box(PrRelabeling::CANONICAL);
        assert!(matches!(
            Behavior::mix(&[pr, pr], &[0.5, 0.6]),
            Err(Error::InvalidMixture(_))
        ));
        assert!(matches!(
            Behavior::mix(&[pr], &[0.5, 0.5]),
            Err(Error::InvalidMixture(_))
        ));
        assert!(matches!(
            Behavior::mix(&[pr, pr], &[1.5, -0.5]),
            Err(Error::InvalidMixture(_))
        ));
    }

    #[test]
    fn signaling_behavior_detected() {
        // Alice copies Bob's input: p(a=0|x=0,y=0)=1, p(a=0|x=0,y=1)=0.
        let b = Behavior::from_fn(|a, b, _x, y| if a == y && b == 0 { 1.0 } else { 0.0 }).unwrap();
        assert!(!b.is_nonsignaling(0.0));
        assert!(matches!(
            b.marginal(Side::Alice),
            Err(Error::Signaling { side: Side::Alice, .. })
        ));
        assert!(b.marginal(Side::Bob).is_ok());
    }

    #[test]
    fn chsh_values_of_named_behaviors() {
        let pr = Behavior::pr_box(PrRelabeling::CANONICAL);
        assert_eq!(pr.chsh_value(4), 4.0);
        assert_eq!(pr_for_facet(4), PrRelabeling::CANONICAL);
        for f in 0..8 {
            assert_eq!(Behavior::uniform().chsh_value(f), 0.0);
        }
        let v = p_v();
        let sat = v.saturated_facets(0.0);
        assert!(!sat.is_empty());
        for f in sat {
            assert_eq!(v.chsh_value(f), 2.0);
        }
    }

    #[test]
    fn deterministic_vertices_are_local() {
        for v in Behavior::deterministic_vertices() {
            for f in 0..8 {
                assert!(v.chsh_value(f) <= 2.0);
            }
            // every deterministic vertex sits on exactly four CHSH facets
            assert_eq!(v.saturated_facets(0.0).len(), 4);
        }
    }

    #[test]
    fn pr_boxes_reach_four_on_one_facet() {
        for r in PrRelabeling::all() {
            let pr = Behavior::pr_box(r);
            let hits = (0..8).filter(|&f| pr.chsh_value(f) == 4.0).count();
            assert_eq!(hits, 1);
            assert!(pr.is_nonsignaling(0.0));
        }
    }

    #[test]
    fn near_vertex_values() {
        let nv = near_vertex(&p_v(), 0.1).unwrap();
        let facet = p_v().saturated_facets(1e-9)[0];
        assert!((nv.chsh_value(facet) - 2.2).abs() < 1e-12);
        assert!(nv.within_tsirelson_proxy());

        let tiny = near_vertex(&p_v(), 1e-9).unwrap();
        assert!(tiny.max_abs_diff(&p_v()) < 1e-8);

        assert!(matches!(near_vertex(&p_v(), 0.5), Err(Error::Range { .. })));
        assert!(matches!(near_vertex(&p_v(), 0.0), Err(Error::Range { .. })));
        assert!(matches!(
            near_vertex(&Behavior::uniform(), 0.1),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn exact_behavior_equality() {
        let pr = ExactBehavior::pr_box(PrRelabeling::CANONICAL);
        let mut doubled = [0u64; 16];
        for i in 0..16 {
            let (a, b, x, y) = unindex(i);
            doubled[i] = 2 * pr.count(a, b, x, y);
        }
        let doubled = ExactBehavior::new(doubled, 4).unwrap();
        assert!(pr.same_as(&doubled));
        assert_eq!(pr.to_behavior(), Behavior::pr_box(PrRelabeling::CANONICAL));
        assert!(ExactBehavior::new([1; 16], 3).is_err());
    }

    #[test]
    fn new_rejects_unnormalized() {
        assert!(matches!(Behavior::new([0.3; 16]), Err(Error::NotNormalized { .. })));
        let mut p = [0.25; 16];
        p[0] = -0.1;
        assert!(matches!(
            Behavior::new(p),
            Err(Error::InvalidProbability { index: 0, .. })
        ));
    }
}
