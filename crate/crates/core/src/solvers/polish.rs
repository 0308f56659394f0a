//! Derivative-free local polish: Nelder-Mead followed by a compass pattern
//! search that certifies no single-coordinate step of 1e-2 down to 1e-4
//! improves the returned point.

use super::Counted;

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Absolute per-coordinate probe steps of the pattern search, largest first.
/// The 1e-3 entry backs the local-optimality guarantee on returned poses.
const PATTERN_STEPS: [f64; 7] = [1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4];
const MAX_PATTERN_PASSES: usize = 50;
const MAX_HILL_CLIMBS: usize = 10_000;

fn clamped(domain: &[(f64, f64)], x: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(domain)
        .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
        .collect()
}

/// Box-constrained Nelder-Mead (maximization). Every trial point is projected
/// into the domain. Stops when the simplex objective spread falls below
/// `tolerance` or the evaluation budget runs out. Never returns a point worse
/// than `start`.
pub(crate) fn nelder_mead(
    domain: &[(f64, f64)],
    f: &Counted<'_>,
    start: &[f64],
    tolerance: f64,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let n = domain.len();
    let budget = f.count() + max_evals as u64;

    let x0 = clamped(domain, start);
    let f0 = f.eval(&x0);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.clone(), f0));
    for i in 0..n {
        let width = domain[i].1 - domain[i].0;
        let step = if width > 0.0 { 0.05 * width } else { 1e-6 };
        let mut vertex = x0.clone();
        if vertex[i] + step <= domain[i].1 {
            vertex[i] += step;
        } else {
            vertex[i] -= step;
        }
        let vertex = clamped(domain, &vertex);
        let value = f.eval(&vertex);
        simplex.push((vertex, value));
    }

    loop {
        // Best first.
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let spread = simplex[0].1 - simplex[n].1;
        if spread <= tolerance || f.count() >= budget {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();

        let reflect: Vec<f64> = (0..n)
            .map(|i| centroid[i] + REFLECTION * (centroid[i] - worst.0[i]))
            .collect();
        let reflect = clamped(domain, &reflect);
        let f_reflect = f.eval(&reflect);

        if f_reflect > simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|i| centroid[i] + EXPANSION * (centroid[i] - worst.0[i]))
                .collect();
            let expand = clamped(domain, &expand);
            let f_expand = f.eval(&expand);
            simplex[n] = if f_expand > f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect > simplex[n - 1].1 {
            simplex[n] = (reflect, f_reflect);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|i| centroid[i] + CONTRACTION * (worst.0[i] - centroid[i]))
                .collect();
            let contract = clamped(domain, &contract);
            let f_contract = f.eval(&contract);
            if f_contract > worst.1 {
                simplex[n] = (contract, f_contract);
            } else {
                // Shrink everything toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&best)
                        .map(|(x, b)| b + SHRINK * (x - b))
                        .collect();
                    let shrunk = clamped(domain, &shrunk);
                    let value = f.eval(&shrunk);
                    *entry = (shrunk, value);
                }
            }
        }
    }

    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    simplex.swap_remove(0)
}

/// Compass search over fixed absolute steps. A final pass with no accepted
/// move certifies that no ±step single-coordinate perturbation (clipped to
/// the domain) improves the returned point, for every step in the schedule.
pub(crate) fn pattern_polish(
    domain: &[(f64, f64)],
    f: &Counted<'_>,
    start: &[f64],
) -> (Vec<f64>, f64) {
    let n = domain.len();
    let mut x = clamped(domain, start);
    let mut fx = f.eval(&x);

    for _ in 0..MAX_PATTERN_PASSES {
        let mut pass_improved = false;
        for step in PATTERN_STEPS {
            for _ in 0..MAX_HILL_CLIMBS {
                let mut improved = false;
                for i in 0..n {
                    for delta in [step, -step] {
                        let moved = (x[i] + delta).clamp(domain[i].0, domain[i].1);
                        if moved == x[i] {
                            continue;
                        }
                        let mut y = x.clone();
                        y[i] = moved;
                        let fy = f.eval(&y);
                        if fy > fx {
                            x = y;
                            fx = fy;
                            improved = true;
                            pass_improved = true;
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
        }
        if !pass_improved {
            break;
        }
    }
    (x, fx)
}
