#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use qclock::spectrum::{build_rational, ClockSpectrum, RationalRatio};
use qclock::ConstantsSet;
use rand::Rng;

/// Random rational spectrum with `1 <= p <= max_p` and ratio denominators at most 9.
///
/// The ratios `E_n/E_1` for `n >= 2` lie in `(1, 6]`.
pub fn random_rational_spectrum<R: Rng>(
    rng: &mut R,
    max_p: usize,
    consts: &ConstantsSet,
) -> Arc<ClockSpectrum> {
    let p = rng.random_range(1..=max_p);
    let mut set = BTreeSet::new();
    while set.len() < p - 1 {
        let b: u64 = rng.random_range(1..=9);
        let c: u64 = rng.random_range(b + 1..=6 * b);
        set.insert(RationalRatio::reduced(c, b).unwrap());
    }
    let ratios: Vec<RationalRatio> = set.into_iter().collect();
    let e1 = rng.random_range(0.5..2.0) * consts.hbar();
    Arc::new(build_rational(&ratios, e1, consts).unwrap())
}
