//! Deterministic memoryless box strategies with one-way hidden signaling
//! from Bob's box to Alice's box, and an exhaustive feasibility search.
//!
//! Each round a uniformly distributed hidden symbol `lambda` is shared by
//! both boxes. Bob's box answers `b = bob(y, lambda)`; the label
//! `s = partition.apply(y, b)` reaches Alice's box, which answers
//! `a = alice(x, s, lambda)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::behavior::{index, unindex, Behavior, ExactBehavior};
use crate::error::{Error, Result};
use crate::sigfun::Partition;

/// Largest hidden-variable alphabet accepted by [`feasibility_search`].
pub const MAX_SEARCH_LAMBDA: usize = 4;

/// Outputs of both boxes in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Response {
    pub a: u8,
    pub b: u8,
    pub signal: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    lambda_card: usize,
    partition: Partition,
    /// `b` at `y * lambda_card + lambda`.
    bob_table: Vec<u8>,
    /// `a` at `(x * classes + signal) * lambda_card + lambda`.
    alice_table: Vec<u8>,
}

impl Strategy {
    pub fn new(lambda_card: usize, partition: Partition, bob_table: Vec<u8>, alice_table: Vec<u8>) -> Result<Self> {
        if lambda_card == 0 {
            return Err(Error::Range {
                what: "lambda_card",
                value: 0.0,
            });
        }
        if bob_table.len() != 2 * lambda_card {
            return Err(Error::Structure("bob_table must have 2 * lambda_card entries"));
        }
        if alice_table.len() != 2 * partition.class_count() * lambda_card {
            return Err(Error::Structure(
                "alice_table must have 2 * classes * lambda_card entries",
            ));
        }
        if bob_table.iter().chain(alice_table.iter()).any(|&v| v > 1) {
            return Err(Error::Structure("strategy tables must hold bits"));
        }
        Ok(Strategy {
            lambda_card,
            partition,
            bob_table,
            alice_table,
        })
    }

    /// Tabulates the response functions.
    pub fn from_fns(
        lambda_card: usize,
        partition: Partition,
        bob: impl Fn(u8, usize) -> u8,
        alice: impl Fn(u8, u8, usize) -> u8,
    ) -> Result<Self> {
        let classes = partition.class_count();
        let mut bob_table = vec![0; 2 * lambda_card];
        let mut alice_table = vec![0; 2 * classes * lambda_card];
        for y in 0..2u8 {
            for l in 0..lambda_card {
                bob_table[y as usize * lambda_card + l] = bob(y, l);
            }
        }
        for x in 0..2u8 {
            for s in 0..classes as u8 {
                for l in 0..lambda_card {
                    alice_table[(x as usize * classes + s as usize) * lambda_card + l] = alice(x, s, l);
                }
            }
        }
        Self::new(lambda_card, partition, bob_table, alice_table)
    }

    /// `b = y ^ lambda`, Alice sees `y` and answers `xy ^ y ^ lambda`.
    pub fn input_signaling() -> Self {
        Self::from_fns(2, Partition::INPUT, |y, l| y ^ l as u8, |x, y, l| (x & y) ^ y ^ l as u8).expect("valid tables")
    }

    /// `b = y ^ lambda`, Alice sees `b` and answers `x(b ^ lambda) ^ b`.
    pub fn output_signaling() -> Self {
        Self::from_fns(
            2,
            Partition::OUTPUT,
            |y, l| y ^ l as u8,
            |x, b, l| (x & (b ^ l as u8)) ^ b,
        )
        .expect("valid tables")
    }

    /// `b = lambda`, Alice sees `y ^ b` and answers `x(lambda ^ (y ^ b)) ^ lambda`.
    pub fn xor_signaling() -> Self {
        Self::from_fns(
            2,
            Partition::XOR,
            |_, l| l as u8,
            |x, s, l| (x & (l as u8 ^ s)) ^ l as u8,
        )
        .expect("valid tables")
    }

    /// A deterministic vertex that ignores both the signal and `lambda`.
    pub fn deterministic(a_fn: [u8; 2], b_fn: [u8; 2], partition: Partition) -> Self {
        Self::from_fns(
            1,
            partition,
            |y, _| b_fn[y as usize] & 1,
            |x, _, _| a_fn[x as usize] & 1,
        )
        .expect("valid tables")
    }

    /// Convex combination with integer weights: component `i` is used with
    /// probability `weight_i / sum(weights)`, selected by the shared `lambda`.
    pub fn mixture(parts: &[(Strategy, u32)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::InvalidMixture("empty mixture"))?;
        let partition = first.0.partition;
        if parts.iter().any(|(s, _)| s.partition != partition) {
            return Err(Error::Structure("mixed strategies must share a partition"));
        }
        if parts.iter().all(|(_, w)| *w == 0) {
            return Err(Error::InvalidMixture("all weights are zero"));
        }
        let lcm = parts.iter().fold(1usize, |acc, (s, _)| lcm(acc, s.lambda_card));
        // (component, local lambda) for every new lambda symbol
        let mut symbols = Vec::new();
        for (i, (s, w)) in parts.iter().enumerate() {
            let copies = *w as usize * (lcm / s.lambda_card);
            for _ in 0..copies {
                symbols.extend((0..s.lambda_card).map(|l| (i, l)));
            }
        }
        let card = symbols.len();
        Self::from_fns(
            card,
            partition,
            |y, l| {
                let (i, local) = symbols[l];
                parts[i].0.bob(y, local)
            },
            |x, s, l| {
                let (i, local) = symbols[l];
                parts[i].0.alice(x, s, local)
            },
        )
    }

    pub fn lambda_card(&self) -> usize {
        self.lambda_card
    }

    pub fn partition(&self) -> Partition {
        self.partition
    }

    pub fn bob_table(&self) -> &[u8] {
        &self.bob_table
    }

    pub fn alice_table(&self) -> &[u8] {
        &self.alice_table
    }

    /// Mutable access to Alice's table, for fault-injection hooks.
    pub fn alice_table_mut(&mut self) -> &mut [u8] {
        &mut self.alice_table
    }

    #[inline]
    pub fn bob(&self, y: u8, lambda: usize) -> u8 {
        self.bob_table[y as usize * self.lambda_card + lambda]
    }

    #[inline]
    pub fn alice(&self, x: u8, signal: u8, lambda: usize) -> u8 {
        let classes = self.partition.class_count();
        self.alice_table[(x as usize * classes + signal as usize) * self.lambda_card + lambda]
    }

    #[inline]
    pub fn respond(&self, x: u8, y: u8, lambda: usize) -> Response {
        let b = self.bob(y, lambda);
        let signal = self.partition.apply(y, b);
        Response {
            a: self.alice(x, signal, lambda),
            b,
            signal,
        }
    }

    /// True when `a ^ b = xy` for every input pair and every `lambda`.
    pub fn satisfies_pr_pointwise(&self) -> bool {
        (0..self.lambda_card).all(|l| {
            (0..4u8).all(|xy| {
                let (x, y) = (xy >> 1, xy & 1);
                let r = self.respond(x, y, l);
                r.a ^ r.b == x & y
            })
        })
    }

    /// `p(a=0 | x, signal)` averaged uniformly over `lambda`, as a count out of `lambda_card`.
    pub fn alice_zero_count(&self, x: u8, signal: u8) -> usize {
        (0..self.lambda_card).filter(|&l| self.alice(x, signal, l) == 0).count()
    }

    /// The behavior produced by the strategy, as exact counts over `lambda`.
    pub fn induced_exact(&self) -> ExactBehavior {
        let mut counts = [0u64; 16];
        for l in 0..self.lambda_card {
            for xy in 0..4u8 {
                let (x, y) = (xy >> 1, xy & 1);
                let r = self.respond(x, y, l);
                counts[index(r.a, r.b, x, y)] += 1;
            }
        }
        ExactBehavior::new(counts, self.lambda_card as u64).expect("each lambda contributes one outcome per input pair")
    }

    pub fn induced_behavior(&self) -> Behavior {
        self.induced_exact().to_behavior()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// One symbol's worth of deterministic behavior: Bob's row, Alice's row over
/// the signals that row can produce, and the 16 cells it hits.
#[derive(Debug, Clone, Copy)]
struct SymbolOption {
    bob_row: [u8; 2],
    /// `a` at `[x][signal]`; unreachable signals hold 0.
    alice_row: [[u8; 4]; 2],
    hits: u16,
}

fn symbol_options(partition: &Partition) -> Vec<SymbolOption> {
    let mut options: Vec<SymbolOption> = Vec::new();
    for bob_code in 0u8..4 {
        let bob_row = [(bob_code >> 1) & 1, bob_code & 1];
        let signals = [partition.apply(0, bob_row[0]), partition.apply(1, bob_row[1])];
        let mut reached: Vec<u8> = Vec::with_capacity(2);
        for s in signals {
            if !reached.contains(&s) {
                reached.push(s);
            }
        }
        let free_bits = 2 * reached.len();
        for alice_code in 0u32..(1 << free_bits) {
            let mut alice_row = [[0u8; 4]; 2];
            for (k, &s) in reached.iter().enumerate() {
                for x in 0..2 {
                    alice_row[x][s as usize] = ((alice_code >> (2 * k + x)) & 1) as u8;
                }
            }
            let mut hits = 0u16;
            for xy in 0..4u8 {
                let (x, y) = (xy >> 1, xy & 1);
                let b = bob_row[y as usize];
                let a = alice_row[x as usize][signals[y as usize] as usize];
                hits |= 1 << index(a, b, x, y);
            }
            // keep the first option per distinct contribution
            if !options.iter().any(|o| o.hits == hits) {
                options.push(SymbolOption {
                    bob_row,
                    alice_row,
                    hits,
                });
            }
        }
    }
    options
}

/// Searches for a strategy with `lambda_card` uniformly distributed hidden
/// symbols whose induced behavior equals `target` exactly.
///
/// Hidden symbols are exchangeable, so the search enumerates multisets of
/// per-symbol deterministic responses in lexicographic order, pruning any
/// prefix that overshoots a target count. The first witness found (lowest
/// enumeration index) is returned; `None` means no witness exists.
pub fn feasibility_search(target: &Behavior, partition: &Partition, lambda_card: usize) -> Result<Option<Strategy>> {
    if lambda_card == 0 || lambda_card > MAX_SEARCH_LAMBDA {
        return Err(Error::Range {
            what: "lambda_card",
            value: lambda_card as f64,
        });
    }
    let mut remaining = [0u32; 16];
    for (i, r) in remaining.iter_mut().enumerate() {
        let scaled = target.probs()[i] * lambda_card as f64;
        let rounded = libm::round(scaled);
        if (scaled - rounded).abs() > 1e-9 {
            // not representable with this many equiprobable symbols
            return Ok(None);
        }
        *r = rounded as u32;
    }
    let options = symbol_options(partition);
    let mut chosen = Vec::with_capacity(lambda_card);
    if !search(&options, 0, lambda_card, &mut remaining, &mut chosen) {
        return Ok(None);
    }
    let strategy = Strategy::from_fns(
        lambda_card,
        *partition,
        |y, l| options[chosen[l]].bob_row[y as usize],
        |x, s, l| options[chosen[l]].alice_row[x as usize][s as usize],
    )?;
    Ok(Some(strategy))
}

fn search(
    options: &[SymbolOption],
    start: usize,
    left: usize,
    remaining: &mut [u32; 16],
    chosen: &mut Vec<usize>,
) -> bool {
    if left == 0 {
        return remaining.iter().all(|&r| r == 0);
    }
    for (i, opt) in options.iter().enumerate().skip(start) {
        let fits = (0..16).all(|c| opt.hits & (1 << c) == 0 || remaining[c] > 0);
        if !fits {
            continue;
        }
        apply_hits(remaining, opt.hits, false);
        chosen.push(i);
        if search(options, i, left - 1, remaining, chosen) {
            return true;
        }
        chosen.pop();
        apply_hits(remaining, opt.hits, true);
    }
    false
}

fn apply_hits(remaining: &mut [u32; 16], hits: u16, restore: bool) {
    for (c, r) in remaining.iter_mut().enumerate() {
        if hits & (1 << c) != 0 {
            if restore {
                *r += 1;
            } else {
                *r -= 1;
            }
        }
    }
}

/// True when `target` equals the rational behavior `exact` up to float rounding.
pub fn matches_exactly(exact: &ExactBehavior, target: &Behavior) -> bool {
    let d = exact.denominator() as f64;
    (0..16).all(|i| {
        let (a, b, x, y) = unindex(i);
        (target.get(a, b, x, y) * d - exact.count(a, b, x, y) as f64).abs() <= 1e-9
    })
}
