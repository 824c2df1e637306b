//! Memory kernels: Alice's probability of answering 0 as a function of the
//! inputs and signal labels of the current round and the `depth` rounds
//! before it.
//!
//! A window lists `(x, signal)` pairs with index 0 the current round and
//! index `j` the round `j` steps back. A kernel is a memoryless base table
//! `p(a=0 | x, signal)` plus sparse overrides on full windows; only the
//! overridden windows carry memory.

use alloc::vec;
use alloc::vec::Vec;

use crate::boxworld::Strategy;
use crate::error::{Error, Result};
use crate::sigfun::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryKernel {
    depth: usize,
    partition: Partition,
    base: [[f64; 4]; 2],
    overrides: Vec<Option<f64>>,
}

/// Which window a biased kernel acts on: Alice's current input, her input
/// one round back, and the current signal label. `alpha_class` is the
/// coarse label of the previous signal that receives the lower probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiasConfig {
    pub x_current: u8,
    pub x_previous: u8,
    pub signal_current: u8,
    pub alpha_class: u8,
}

impl BiasConfig {
    pub fn new(x_current: u8, x_previous: u8, signal_current: u8) -> Self {
        BiasConfig {
            x_current,
            x_previous,
            signal_current,
            alpha_class: 0,
        }
    }
}

impl MemoryKernel {
    /// Depth-1 kernel reproducing the strategy's `lambda`-averaged `p(a=0|x,signal)`.
    pub fn memoryless(strategy: &Strategy) -> Self {
        Self::memoryless_with_depth(strategy, 1).expect("depth 1 is valid")
    }

    pub fn memoryless_with_depth(strategy: &Strategy, depth: usize) -> Result<Self> {
        let partition = strategy.partition();
        let mut base = [[0.0; 4]; 2];
        let card = strategy.lambda_card() as f64;
        for (x, row) in base.iter_mut().enumerate() {
            for s in 0..partition.class_count() {
                row[s] = strategy.alice_zero_count(x as u8, s as u8) as f64 / card;
            }
        }
        Self::from_base(depth, partition, base)
    }

    /// Kernel with the given base table and no overrides.
    pub fn from_base(depth: usize, partition: Partition, base: [[f64; 4]; 2]) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Range {
                what: "kernel depth",
                value: 0.0,
            });
        }
        let cells = window_count(depth, partition.class_count()).ok_or(Error::Range {
            what: "kernel depth",
            value: depth as f64,
        })?;
        for row in &base {
            for &p in row {
                check_probability(p)?;
            }
        }
        Ok(MemoryKernel {
            depth,
            partition,
            base,
            overrides: vec![None; cells],
        })
    }

    /// Depth-1 kernel that biases Alice's output by `-delta` / `+delta`
    /// around the memoryless value `p0` at the configured window, depending
    /// on the coarse label of the previous round's signal.
    pub fn biased(strategy: &Strategy, config: BiasConfig, coarse: &Partition, delta: f64) -> Result<Self> {
        let partition = strategy.partition();
        if coarse.class_count() != 2 || !partition.refines(coarse) {
            return Err(Error::Structure(
                "coarse partition must be a two-class coarse-graining of the strategy's partition",
            ));
        }
        if config.x_current > 1 || config.x_previous > 1 || config.alpha_class > 1 {
            return Err(Error::Structure("bias configuration inputs must be bits"));
        }
        if config.signal_current as usize >= partition.class_count() {
            return Err(Error::Structure("current signal label is not used by the partition"));
        }
        if !(delta > 0.0) {
            return Err(Error::Range {
                what: "delta",
                value: delta,
            });
        }
        let mut kernel = Self::memoryless(strategy);
        let p0 = kernel.base[config.x_current as usize][config.signal_current as usize];
        let (alpha, beta) = (p0 - delta, p0 + delta);
        if alpha < 0.0 {
            return Err(Error::Range {
                what: "p0 - delta",
                value: alpha,
            });
        }
        if beta > 1.0 {
            return Err(Error::Range {
                what: "p0 + delta",
                value: beta,
            });
        }
        for prev in 0..partition.class_count() as u8 {
            let coarse_label = partition.project_label(prev, coarse).expect("refinement checked above");
            let p = if coarse_label == config.alpha_class {
                alpha
            } else {
                beta
            };
            kernel.set_override(
                &[config.x_current, config.x_previous],
                &[config.signal_current, prev],
                p,
            )?;
        }
        Ok(kernel)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn partition(&self) -> Partition {
        self.partition
    }

    /// Memoryless `p(a=0 | x, signal)`.
    pub fn base(&self, x: u8, signal: u8) -> f64 {
        self.base[x as usize][signal as usize]
    }

    pub fn base_table(&self) -> [[f64; 4]; 2] {
        self.base
    }

    fn classes(&self) -> usize {
        self.partition.class_count()
    }

    /// Dense index of a window; `None` if lengths or labels are invalid.
    pub fn window_index(&self, xs: &[u8], signals: &[u8]) -> Option<usize> {
        if xs.len() != self.depth + 1 || signals.len() != self.depth + 1 {
            return None;
        }
        let m = self.classes();
        let mut idx = 0usize;
        for j in (0..=self.depth).rev() {
            if xs[j] > 1 || signals[j] as usize >= m {
                return None;
            }
            idx = idx * 2 * m + xs[j] as usize * m + signals[j] as usize;
        }
        Some(idx)
    }

    /// Inverse of [`window_index`](Self::window_index).
    pub fn window_at(&self, mut idx: usize) -> (Vec<u8>, Vec<u8>) {
        let m = self.classes();
        let mut xs = Vec::with_capacity(self.depth + 1);
        let mut signals = Vec::with_capacity(self.depth + 1);
        for _ in 0..=self.depth {
            let cell = idx % (2 * m);
            idx /= 2 * m;
            xs.push((cell / m) as u8);
            signals.push((cell % m) as u8);
        }
        (xs, signals)
    }

    pub fn set_override(&mut self, xs: &[u8], signals: &[u8], p: f64) -> Result<()> {
        check_probability(p)?;
        let idx = self
            .window_index(xs, signals)
            .ok_or(Error::Structure("window does not match kernel depth or partition"))?;
        self.overrides[idx] = Some(p);
        Ok(())
    }

    /// Override at a dense window index.
    #[inline]
    pub fn override_at(&self, idx: usize) -> Option<f64> {
        self.overrides.get(idx).copied().flatten()
    }

    /// Overridden windows in index order.
    pub fn overrides(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.overrides.iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p)))
    }

    pub fn window_total(&self) -> usize {
        self.overrides.len()
    }

    /// `p(a=0)` for a full window (override or memoryless base).
    pub fn prob_zero(&self, xs: &[u8], signals: &[u8]) -> Option<f64> {
        let idx = self.window_index(xs, signals)?;
        Some(self.override_at(idx).unwrap_or_else(|| self.base(xs[0], signals[0])))
    }

    fn prob_zero_at(&self, idx: usize) -> f64 {
        self.override_at(idx).unwrap_or_else(|| {
            let m = self.classes();
            let cell = idx % (2 * m);
            self.base[cell / m][cell % m]
        })
    }

    /// True if changing a single past signal label moves `p(a=0)` by more than `tol`.
    pub fn has_memory_dependence(&self, tol: f64) -> bool {
        let m = self.classes();
        let mut stride = 2 * m;
        for _ in 1..=self.depth {
            for idx in 0..self.window_total() {
                let digit = (idx / stride) % (2 * m);
                let own_signal = digit % m;
                for other in 0..m {
                    if other == own_signal {
                        continue;
                    }
                    let alt = idx - own_signal * stride + other * stride;
                    if (self.prob_zero_at(idx) - self.prob_zero_at(alt)).abs() > tol {
                        return true;
                    }
                }
            }
            stride *= 2 * m;
        }
        false
    }
}

fn window_count(depth: usize, classes: usize) -> Option<usize> {
    let per_round = 2 * classes;
    let mut total = 1usize;
    for _ in 0..=depth {
        total = total.checked_mul(per_round)?;
    }
    // keep dense tables to a sane size
    (total <= 1 << 24).then_some(total)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Range {
            what: "probability",
            value: p,
        })
    }
}
