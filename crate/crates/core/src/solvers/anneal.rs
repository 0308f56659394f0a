//! Simulated-annealing stage of the global search.

use rand::Rng;
use rand_distr::StandardNormal;

use super::Counted;

pub(crate) struct AnnealSchedule {
    pub iterations: usize,
    pub initial_temperature: f64,
    pub cooling_factor: f64,
}

/// One annealing run from `start`: Gaussian proposals with per-axis scale of
/// 10% of the box width, Metropolis acceptance, geometric cooling. Proposals
/// rejected by `is_valid` (the colocation guard) are never evaluated.
/// Returns the best point seen, which is never worse than the start.
pub(crate) fn anneal<R: Rng>(
    rng: &mut R,
    domain: &[(f64, f64)],
    f: &Counted<'_>,
    is_valid: &dyn Fn(&[f64]) -> bool,
    start: Vec<f64>,
    schedule: &AnnealSchedule,
) -> (Vec<f64>, f64) {
    let scales: Vec<f64> = domain.iter().map(|(lo, hi)| 0.1 * (hi - lo)).collect();
    let mut current = start;
    let mut f_current = f.eval(&current);
    let mut best = current.clone();
    let mut f_best = f_current;
    let mut temperature = schedule.initial_temperature;
    let mut proposal = vec![0.0; domain.len()];

    for _ in 0..schedule.iterations {
        for (i, (lo, hi)) in domain.iter().enumerate() {
            let step: f64 = rng.sample(StandardNormal);
            proposal[i] = (current[i] + scales[i] * step).clamp(*lo, *hi);
        }
        if is_valid(&proposal) {
            let f_proposal = f.eval(&proposal);
            let accept = f_proposal > f_current || {
                let u: f64 = rng.gen();
                u < ((f_proposal - f_current) / temperature).exp()
            };
            if accept {
                current.copy_from_slice(&proposal);
                f_current = f_proposal;
                if f_current > f_best {
                    best.copy_from_slice(&current);
                    f_best = f_current;
                }
            }
        }
        temperature *= schedule.cooling_factor;
    }
    (best, f_best)
}
