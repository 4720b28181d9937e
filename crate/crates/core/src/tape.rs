//! Replayable randomness.
//!
//! A [`RandomTape`] is a 64-bit seed from which independent named
//! sub-streams are derived. Each sub-stream is a ChaCha8 stream keyed by the
//! seed with the stream id as ChaCha stream selector, so drawing from one
//! stream never perturbs another. Trial tapes are derived from a master seed
//! and the trial index by a counter-based mix, which makes every trial
//! reproducible independently of execution order.
//!
//! Tapes can also carry scripted draws for hand-traced tests: scripted draws
//! on a stream are consumed first, then the stream falls back to its ChaCha
//! generator.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Named sub-streams of a tape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stream {
    /// Arrival permutation of the ground set.
    Arrival,
    /// Learning-phase length draw.
    Learning,
    /// Per-element membership coins of the reductions.
    Membership,
    /// Order in which the simulated reductions feed `Linear`.
    Order,
    /// Internal coins of the linear MSP algorithm.
    Linear,
    /// Dummy interleaving of the partial-MSP wrapper.
    Interleave,
    /// Instance generation.
    Instance,
    /// Anything else (test harnesses, sampling checks).
    Custom(u64),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Arrival => 1,
            Stream::Learning => 2,
            Stream::Membership => 3,
            Stream::Order => 4,
            Stream::Linear => 5,
            Stream::Interleave => 6,
            Stream::Instance => 7,
            Stream::Custom(k) => 1 << 32 | k,
        }
    }
}

/// A single scripted draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Draw {
    /// Result of a Bernoulli coin.
    Flip(bool),
    /// Result of a binomial draw.
    Count(usize),
    /// Result of a uniform index draw.
    Index(usize),
}

#[derive(Clone, Debug, Default)]
struct Script {
    draws: HashMap<Stream, Vec<Draw>>,
}

#[derive(Clone, Debug)]
pub struct RandomTape {
    seed: u64,
    script: Option<Arc<Script>>,
}

impl RandomTape {
    pub fn new(seed: u64) -> Self {
        RandomTape { seed, script: None }
    }

    /// Tape for trial `index` of an experiment seeded with `master`.
    pub fn for_trial(master: u64, index: u64) -> Self {
        RandomTape::new(splitmix64(master ^ splitmix64(index.wrapping_add(0xA076_1D64_78BD_642F))))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Prepends scripted draws to `stream`.
    pub fn with_script(mut self, stream: Stream, draws: impl IntoIterator<Item = Draw>) -> Self {
        let mut script = self.script.as_deref().cloned().unwrap_or_default();
        script.draws.entry(stream).or_default().extend(draws);
        self.script = Some(Arc::new(script));
        self
    }

    /// Fresh coin source for `stream`. Calling this twice yields two
    /// identical sources.
    pub fn coins(&self, stream: Stream) -> TapeCoins {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream.id());
        let scripted = self
            .script
            .as_ref()
            .and_then(|s| s.draws.get(&stream))
            .map(|d| d.iter().copied().collect())
            .unwrap_or_default();
        TapeCoins { rng, scripted }
    }

    /// Uniformly random permutation of `elements` drawn from the arrival stream.
    pub fn arrival_order(&self, elements: &[usize]) -> Vec<usize> {
        let mut order = elements.to_vec();
        self.coins(Stream::Arrival).shuffle(&mut order);
        order
    }
}

/// Source of the random decisions an algorithm makes.
pub trait Coins {
    /// `true` with probability `p` (clamped to `[0, 1]`).
    fn bernoulli(&mut self, p: f64) -> bool;
    /// Draw from `B(n, p)`.
    fn binomial(&mut self, n: usize, p: f64) -> usize;
    /// Uniform index in `0..bound`. `bound` must be positive.
    fn below(&mut self, bound: usize) -> usize;

    /// Fisher-Yates shuffle driven by [`Coins::below`].
    fn shuffle(&mut self, items: &mut [usize]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Coin source handed out by [`RandomTape::coins`].
#[derive(Clone, Debug)]
pub struct TapeCoins {
    rng: ChaCha8Rng,
    scripted: VecDeque<Draw>,
}

impl TapeCoins {
    fn next_scripted(&mut self) -> Option<Draw> {
        self.scripted.pop_front()
    }
}

impl Coins for TapeCoins {
    fn bernoulli(&mut self, p: f64) -> bool {
        match self.next_scripted() {
            Some(Draw::Flip(b)) => b,
            Some(other) => panic!("scripted draw {other:?} used as a coin flip"),
            None => {
                if p >= 1.0 {
                    true
                } else if p <= 0.0 {
                    false
                } else {
                    self.rng.random::<f64>() < p
                }
            }
        }
    }

    fn binomial(&mut self, n: usize, p: f64) -> usize {
        match self.next_scripted() {
            Some(Draw::Count(k)) => k.min(n),
            Some(other) => panic!("scripted draw {other:?} used as a binomial count"),
            None => {
                let p = p.clamp(0.0, 1.0);
                Binomial::new(n as u64, p)
                    .map(|d| d.sample(&mut self.rng) as usize)
                    .unwrap_or(0)
            }
        }
    }

    fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "below() needs a positive bound");
        match self.next_scripted() {
            Some(Draw::Index(i)) => i.min(bound - 1),
            Some(other) => panic!("scripted draw {other:?} used as an index"),
            None => self.rng.random_range(0..bound),
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
