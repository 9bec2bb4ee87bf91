//! Seeded generators for random-permutation, pyramidal and four-peak cycles.
//!
//! All randomness comes from `ChaCha8Rng`. An instance seed feeds two
//! independent ChaCha streams, stream 1 for `x` and stream 2 for `y`, so the
//! pair `(spec, seed)` fully determines the instance on every platform.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};
use crate::multigraph::{build_union, peaks, HamCycle, UnionMultigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    RandomPermutation,
    Pyramidal,
    FourPeak,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 3] = [
        InstanceKind::RandomPermutation,
        InstanceKind::Pyramidal,
        InstanceKind::FourPeak,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::RandomPermutation => "random",
            InstanceKind::Pyramidal => "pyramidal",
            InstanceKind::FourPeak => "four-peak",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            InstanceKind::FourPeak => 8,
            _ => 3,
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" | "random-permutation" | "permutation" => Ok(InstanceKind::RandomPermutation),
            "pyramidal" => Ok(InstanceKind::Pyramidal),
            "four-peak" | "fourpeak" | "four_peak" => Ok(InstanceKind::FourPeak),
            other => input(format!("unknown instance kind {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub directed: bool,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(kind: InstanceKind, n: usize, directed: bool, seed: u64) -> Self {
        InstanceSpec {
            kind,
            n,
            directed,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < self.kind.min_n() {
            return input(format!(
                "{} instances need n >= {}, got {}",
                self.kind,
                self.kind.min_n(),
                self.n
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub x: HamCycle,
    pub y: HamCycle,
    pub graph: UnionMultigraph,
}

impl Instance {
    pub fn from_cycles(x: HamCycle, y: HamCycle) -> Result<Self> {
        let graph = build_union(&x, &y)?;
        Ok(Instance { x, y, graph })
    }
}

fn check_n(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return input(format!("{what} needs n >= {min}, got {n}"));
    }
    Ok(())
}

/// Uniform cycle: vertex 1 first, then a Fisher–Yates shuffle of `2..=n`.
pub fn random_permutation_cycle<R: Rng + ?Sized>(
    n: usize,
    directed: bool,
    rng: &mut R,
) -> Result<HamCycle> {
    check_n(n, 3, "a random cycle")?;
    let mut order: Vec<usize> = (1..=n).collect();
    order[1..].shuffle(rng);
    HamCycle::new(order, directed)
}

/// Pyramidal tour with the single peak `n`: each of `2..n` joins the
/// ascending run with probability ½, otherwise the descending run.
pub fn pyramidal_tour<R: Rng + ?Sized>(n: usize, directed: bool, rng: &mut R) -> Result<HamCycle> {
    check_n(n, 3, "a pyramidal tour")?;
    let ascending: Vec<bool> = (2..n).map(|_| rng.random_bool(0.5)).collect();
    pyramidal_from_runs(n, &ascending, directed)
}

/// Builds `1 → ascending… → n → descending… → 1`; `ascending[k]` says
/// whether vertex `k + 2` is on the way up.
pub fn pyramidal_from_runs(n: usize, ascending: &[bool], directed: bool) -> Result<HamCycle> {
    check_n(n, 3, "a pyramidal tour")?;
    if ascending.len() != n - 2 {
        return input(format!(
            "expected {} run flags, got {}",
            n - 2,
            ascending.len()
        ));
    }
    let mut order = Vec::with_capacity(n);
    order.push(1);
    order.extend((2..n).filter(|&v| ascending[v - 2]));
    order.push(n);
    order.extend((2..n).rev().filter(|&v| !ascending[v - 2]));
    HamCycle::new(order, directed)
}

/// Cycle with exactly four peaks. Vertices `2..=n` are spread uniformly over
/// eight alternating monotone runs (up, down, up, down, …) after vertex 1;
/// draws are rejected until the peak predicate counts exactly four.
pub fn four_peak_cycle<R: Rng + ?Sized>(n: usize, directed: bool, rng: &mut R) -> Result<HamCycle> {
    check_n(n, 8, "a four-peak cycle")?;
    const RUNS: usize = 8;
    loop {
        let mut runs: Vec<Vec<usize>> = vec![Vec::new(); RUNS];
        for v in 2..=n {
            runs[rng.random_range(0..RUNS)].push(v);
        }
        let mut order = Vec::with_capacity(n);
        order.push(1);
        for (k, run) in runs.iter_mut().enumerate() {
            if k % 2 == 1 {
                run.reverse();
            }
            order.extend_from_slice(run);
        }
        let cycle = HamCycle::new(order, directed)?;
        if peaks(&cycle).len() == 4 {
            return Ok(cycle);
        }
    }
}

pub fn draw_cycle<R: Rng + ?Sized>(
    kind: InstanceKind,
    n: usize,
    directed: bool,
    rng: &mut R,
) -> Result<HamCycle> {
    match kind {
        InstanceKind::RandomPermutation => random_permutation_cycle(n, directed, rng),
        InstanceKind::Pyramidal => pyramidal_tour(n, directed, rng),
        InstanceKind::FourPeak => four_peak_cycle(n, directed, rng),
    }
}

/// Two independent draws of the spec's family and their union.
pub fn generate_instance(spec: InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng_x = ChaCha8Rng::seed_from_u64(spec.seed);
    rng_x.set_stream(1);
    let mut rng_y = ChaCha8Rng::seed_from_u64(spec.seed);
    rng_y.set_stream(2);
    let x = draw_cycle(spec.kind, spec.n, spec.directed, &mut rng_x)?;
    let y = draw_cycle(spec.kind, spec.n, spec.directed, &mut rng_y)?;
    Instance::from_cycles(x, y)
}
