#![allow(dead_code)]

use skelxai::skeleton::{extract_windows, JointRegistry, Window, WindowPolicy};
use skelxai::synth::{generate, SynthConfig};

/// One window per synthetic sequence, with the sequence label.
pub fn synth_windows(n: usize, rng_seed: u64) -> (JointRegistry, Vec<(Window<f64>, usize)>) {
    let registry = JointRegistry::default_infant();
    let cfg = SynthConfig {
        n_sequences: n,
        rng_seed,
        ..SynthConfig::default()
    };
    let windows = generate::<f64>(&cfg, &registry)
        .unwrap()
        .iter()
        .flat_map(|s| {
            extract_windows(s, &WindowPolicy::default(), rng_seed)
                .unwrap()
                .into_iter()
                .map(move |w| (w, s.label))
        })
        .collect();
    (registry, windows)
}
