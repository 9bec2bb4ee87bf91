//! Shared fixtures for the solver benchmarks.

use hamdec_core::{generate_instance, HamCycle, Instance, InstanceKind, InstanceSpec};

/// The six-vertex example with a second decomposition.
pub fn hex() -> Instance {
    let x = HamCycle::new(vec![1, 2, 3, 4, 5, 6], false).expect("valid cycle");
    let y = HamCycle::new(vec![1, 4, 6, 2, 3, 5], false).expect("valid cycle");
    Instance::from_cycles(x, y).expect("same vertex set")
}

pub fn instance(kind: InstanceKind, n: usize, directed: bool, seed: u64) -> Instance {
    generate_instance(InstanceSpec::new(kind, n, directed, seed))
        .expect("benchmark specs are valid")
}

/// `count` seeded instances, seeds `seed..seed + count`.
pub fn batch(
    kind: InstanceKind,
    n: usize,
    directed: bool,
    seed: u64,
    count: usize,
) -> Vec<Instance> {
    (0..count as u64)
        .map(|i| instance(kind, n, directed, seed + i))
        .collect()
}
