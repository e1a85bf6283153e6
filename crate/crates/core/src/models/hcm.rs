//! Solver for the hypergraph configuration model.
//!
//! The coupled constraints k_i = sum_a p(i, a), h_a = sum_i p(i, a) with
//! p = x y / (1 + x y) are solved in three stages:
//!
//! 1. boundary reduction: zero-target lines get all-zero cells, saturated
//!    lines (target equal to the number of remaining cells) get all-one
//!    cells and shrink the targets on the other side; the cascade repeats
//!    until stable and is recorded as removal stamps on the solution;
//! 2. class collapse: remaining lines sharing a target value share one
//!    unknown multiplier;
//! 3. damped alternating fixed-point iteration on the class system, with a
//!    per-class bisection fallback when the iteration stalls.

use crate::error::{Error, Result};
use crate::incidence::DegreeSummary;
use crate::scalar::{real, Real};

use super::{odds_to_prob, ModelKind, ModelSolution};

/// Default convergence tolerance on the degree constraints.
pub const DEFAULT_HCM_TOL: f64 = 1e-10;
/// Default sweep budget.
pub const DEFAULT_HCM_MAX_ITER: usize = 10_000;

/// Fits the configuration model to an integer degree summary.
pub fn fit_hcm<F: Real>(d: &DegreeSummary, tol: F, max_iter: usize) -> Result<ModelSolution<F>> {
    let k: Vec<F> = d.node_degrees().iter().map(|&v| real(v)).collect();
    let h: Vec<F> = d.hyperedge_degrees().iter().map(|&v| real(v)).collect();
    fit_hcm_targets(&k, &h, tol, max_iter)
}

/// Fits the configuration model to real-valued degree targets.
///
/// Targets must be finite, nonnegative and within the trivial bounds
/// (`k_i <= L`, `h_a <= N`). Inconsistent targets (for example mismatched
/// totals) surface as a non-convergence error carrying the best residual.
pub fn fit_hcm_targets<F: Real>(
    node_targets: &[F],
    hyperedge_targets: &[F],
    tol: F,
    max_iter: usize,
) -> Result<ModelSolution<F>> {
    let n = node_targets.len();
    let l = hyperedge_targets.len();
    check_targets(node_targets, l as u64, "node")?;
    check_targets(hyperedge_targets, n as u64, "hyperedge")?;

    let mut kt = node_targets.to_vec();
    let mut ht = hyperedge_targets.to_vec();
    let mut row_stamp = vec![0i32; n];
    let mut col_stamp = vec![0i32; l];
    let mut row_active = vec![true; n];
    let mut col_active = vec![true; l];
    let mut rows_left = n;
    let mut cols_left = l;
    let mut stamp = 0i32;

    // Stage 1: boundary cascade.
    loop {
        let mut changed = false;
        for i in 0..n {
            if !row_active[i] {
                continue;
            }
            if kt[i] <= F::zero() {
                stamp += 1;
                row_stamp[i] = stamp;
                row_active[i] = false;
                rows_left -= 1;
                changed = true;
            } else if kt[i] >= real(cols_left as u64) {
                stamp += 1;
                row_stamp[i] = -stamp;
                row_active[i] = false;
                rows_left -= 1;
                for (alpha, target) in ht.iter_mut().enumerate() {
                    if col_active[alpha] {
                        *target -= F::one();
                    }
                }
                changed = true;
            }
        }
        for alpha in 0..l {
            if !col_active[alpha] {
                continue;
            }
            if ht[alpha] <= F::zero() {
                stamp += 1;
                col_stamp[alpha] = stamp;
                col_active[alpha] = false;
                cols_left -= 1;
                changed = true;
            } else if ht[alpha] >= real(rows_left as u64) {
                stamp += 1;
                col_stamp[alpha] = -stamp;
                col_active[alpha] = false;
                cols_left -= 1;
                for (i, target) in kt.iter_mut().enumerate() {
                    if row_active[i] {
                        *target -= F::one();
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Stage 2: collapse interior lines into classes of equal target.
    let row_classes = collect_classes(&kt, &row_active);
    let col_classes = collect_classes(&ht, &col_active);

    let mut x = vec![F::zero(); n];
    let mut y = vec![F::zero(); l];
    let mut iterations = 0usize;

    if !row_classes.is_empty() && !col_classes.is_empty() {
        let kc: Vec<F> = row_classes.iter().map(|c| c.target).collect();
        let mc: Vec<F> = row_classes
            .iter()
            .map(|c| real(c.members.len() as u64))
            .collect();
        let hd: Vec<F> = col_classes.iter().map(|c| c.target).collect();
        let nd: Vec<F> = col_classes
            .iter()
            .map(|c| real(c.members.len() as u64))
            .collect();
        let (xc, yc, sweeps) = solve_classes(&kc, &mc, &hd, &nd, tol, max_iter)?;
        iterations = sweeps;
        for (class, &value) in row_classes.iter().zip(&xc) {
            for &i in &class.members {
                x[i] = value;
            }
        }
        for (class, &value) in col_classes.iter().zip(&yc) {
            for &alpha in &class.members {
                y[alpha] = value;
            }
        }
    }

    let no_removals = row_stamp.iter().all(|&s| s == 0) && col_stamp.iter().all(|&s| s == 0);
    let solution = ModelSolution {
        kind: ModelKind::Hcm,
        n_nodes: n,
        n_hyperedges: l,
        x: Some(x),
        y: Some(y),
        scalar: None,
        residual: F::zero(),
        clamp_count: 0,
        row_stamp: if no_removals { Vec::new() } else { row_stamp },
        col_stamp: if no_removals { Vec::new() } else { col_stamp },
    };

    // Honest residual against the original targets, evaluated cell by cell.
    let residual = targets_residual(&solution, node_targets, hyperedge_targets);
    let solution = ModelSolution {
        residual,
        ..solution
    };
    if residual.to_f64().unwrap_or(f64::INFINITY) > outer_tolerance(tol) {
        return Err(Error::NonConvergence {
            iterations: iterations.max(1),
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(solution)
}

/// A little slack over the class-level tolerance: the full-granularity
/// residual re-sums rows term by term instead of using class multiplicities.
fn outer_tolerance<F: Real>(tol: F) -> f64 {
    10.0 * tol.to_f64().unwrap_or(1e-10)
}

fn check_targets<F: Real>(targets: &[F], bound: u64, side: &str) -> Result<()> {
    for (idx, &t) in targets.iter().enumerate() {
        if !t.is_finite() || t < F::zero() || t > real(bound) {
            return Err(Error::invalid(format!(
                "{} target [{}] = {} outside [0, {}]",
                side, idx, t, bound
            )));
        }
    }
    Ok(())
}

struct TargetClass<F> {
    target: F,
    members: Vec<usize>,
}

fn collect_classes<F: Real>(targets: &[F], active: &[bool]) -> Vec<TargetClass<F>> {
    let mut live: Vec<usize> = (0..targets.len()).filter(|&i| active[i]).collect();
    live.sort_by(|&a, &b| {
        targets[a]
            .partial_cmp(&targets[b])
            .expect("finite targets")
            .then(a.cmp(&b))
    });
    let mut classes: Vec<TargetClass<F>> = Vec::new();
    for i in live {
        match classes.last_mut() {
            Some(class) if class.target == targets[i] => class.members.push(i),
            _ => classes.push(TargetClass {
                target: targets[i],
                members: vec![i],
            }),
        }
    }
    classes
}

/// Alternating fixed-point iteration over degree classes, with damping and a
/// bisection fallback. Returns class multipliers and the sweep count.
fn solve_classes<F: Real>(
    kc: &[F],
    mc: &[F],
    hd: &[F],
    nd: &[F],
    tol: F,
    max_iter: usize,
) -> Result<(Vec<F>, Vec<F>, usize)> {
    let total: F = kc.iter().zip(mc).map(|(&k, &m)| k * m).sum();
    let sqrt_total = total.sqrt();
    let mut xc: Vec<F> = kc.iter().map(|&k| k / sqrt_total).collect();
    let mut yc: Vec<F> = hd.iter().map(|&h| h / sqrt_total).collect();

    let residual_of = |xc: &[F], yc: &[F]| -> F {
        let mut worst = F::zero();
        for (c, (&k, _)) in kc.iter().zip(mc).enumerate() {
            let got: F = yc
                .iter()
                .zip(nd)
                .map(|(&y, &n)| n * odds_to_prob(xc[c] * y))
                .sum();
            worst = worst.max((got - k).abs());
        }
        for (d, (&h, _)) in hd.iter().zip(nd).enumerate() {
            let got: F = xc
                .iter()
                .zip(mc)
                .map(|(&x, &m)| m * odds_to_prob(x * yc[d]))
                .sum();
            worst = worst.max((got - h).abs());
        }
        worst
    };

    let mut best_res = residual_of(&xc, &yc);
    if best_res <= tol {
        return Ok((xc, yc, 0));
    }

    let mut gamma = F::one();
    let half = F::from_f64(0.5).expect("half");
    let min_gamma = F::from_f64(1.0 / 64.0).expect("gamma floor");
    let improvement = F::from_f64(0.999).expect("factor");
    let mut last_res = best_res;
    let mut bad_streak = 0u32;
    let mut stalled_since = 0usize;
    let mut use_bisection = false;
    let fixed_point_budget = max_iter / 2;

    for sweep in 1..=max_iter {
        if !use_bisection && (sweep > fixed_point_budget || stalled_since >= 100) {
            use_bisection = true;
        }
        if use_bisection {
            // Coordinate bisection: each class target is monotone in its own
            // multiplier with the others held fixed.
            for c in 0..xc.len() {
                xc[c] = bisect_class(kc[c], &yc, nd, xc[c]);
            }
            for d in 0..yc.len() {
                yc[d] = bisect_class(hd[d], &xc, mc, yc[d]);
            }
        } else {
            // Damped Gauss-Seidel style alternating update.
            for c in 0..xc.len() {
                let denom: F = yc
                    .iter()
                    .zip(nd)
                    .map(|(&y, &n)| n * y / (F::one() + xc[c] * y))
                    .sum();
                let proposal = kc[c] / denom;
                xc[c] = damped(xc[c], proposal, gamma);
            }
            for d in 0..yc.len() {
                let denom: F = xc
                    .iter()
                    .zip(mc)
                    .map(|(&x, &m)| m * x / (F::one() + x * yc[d]))
                    .sum();
                let proposal = hd[d] / denom;
                yc[d] = damped(yc[d], proposal, gamma);
            }
        }

        let res = residual_of(&xc, &yc);
        if res <= tol {
            return Ok((xc, yc, sweep));
        }
        if res < best_res * improvement {
            stalled_since = 0;
        } else {
            stalled_since += 1;
        }
        best_res = best_res.min(res);
        if res > last_res {
            bad_streak += 1;
            if bad_streak >= 3 {
                gamma = (gamma * half).max(min_gamma);
                bad_streak = 0;
            }
        } else {
            bad_streak = 0;
        }
        last_res = res;
    }

    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: best_res.to_f64().unwrap_or(f64::NAN),
    })
}

/// Damped multiplicative update, exact when gamma is 1.
fn damped<F: Real>(old: F, proposal: F, gamma: F) -> F {
    if gamma >= F::one() {
        proposal
    } else {
        (old.ln() * (F::one() - gamma) + proposal.ln() * gamma).exp()
    }
}

/// Solves `sum_d weights_d * p(x * partners_d) = target` for x by bisection.
fn bisect_class<F: Real>(target: F, partners: &[F], weights: &[F], current: F) -> F {
    let constraint = |x: F| -> F {
        partners
            .iter()
            .zip(weights)
            .map(|(&y, &w)| w * odds_to_prob(x * y))
            .sum::<F>()
            - target
    };
    let mut lo = F::zero();
    let mut hi = current.max(F::one());
    let cap = F::from_f64(1e250).expect("cap");
    let two = F::from_f64(2.0).expect("two");
    let mut guard = 0;
    while constraint(hi) < F::zero() && hi < cap {
        hi *= two;
        guard += 1;
        if guard > 2000 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) * F::from_f64(0.5).expect("half");
        if constraint(mid) < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * F::from_f64(0.5).expect("half")
}

/// Max violation of real-valued degree targets by the assembled solution.
fn targets_residual<F: Real>(solution: &ModelSolution<F>, kt: &[F], ht: &[F]) -> F {
    let mut worst = F::zero();
    for (i, &want) in kt.iter().enumerate() {
        let got: F = (0..solution.n_hyperedges)
            .map(|alpha| solution.p(i, alpha))
            .sum();
        worst = worst.max((got - want).abs());
    }
    for (alpha, &want) in ht.iter().enumerate() {
        let got: F = (0..solution.n_nodes).map(|i| solution.p(i, alpha)).sum();
        worst = worst.max((got - want).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(k: &[u64], h: &[u64]) -> DegreeSummary {
        DegreeSummary::new(k.to_vec(), h.to_vec()).unwrap()
    }

    #[test]
    fn fully_saturated_degrees_give_probability_one() {
        let d = summary(&[2, 2, 2], &[3, 3]);
        let sol = fit_hcm::<f64>(&d, 1e-12, 10_000).unwrap();
        for i in 0..3 {
            for alpha in 0..2 {
                assert!((sol.p(i, alpha) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn uniform_half_density() {
        let d = summary(&[1, 1], &[1, 1]);
        let sol = fit_hcm::<f64>(&d, 1e-12, 10_000).unwrap();
        for i in 0..2 {
            for alpha in 0..2 {
                assert!((sol.p(i, alpha) - 0.5).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn boundary_cascade_from_saturated_row() {
        // k = (2, 1), h = (2, 1) on a 2 x 2 grid: row 1 is saturated, which
        // cascades into h = (1, 0) and then fixes every remaining cell.
        let d = summary(&[2, 1], &[2, 1]);
        let sol = fit_hcm::<f64>(&d, 1e-10, 10_000).unwrap();
        assert_eq!(sol.p(0, 0), 1.0);
        assert_eq!(sol.p(0, 1), 1.0);
        assert_eq!(sol.p(1, 0), 1.0);
        assert_eq!(sol.p(1, 1), 0.0);
        assert!(sol.residual < 1e-12);
        assert!(!sol.row_stamp.is_empty());
    }

    #[test]
    fn zero_degree_lines_get_zero_probability() {
        let d = summary(&[2, 0, 1], &[2, 1, 0]);
        let sol = fit_hcm::<f64>(&d, 1e-10, 10_000).unwrap();
        for alpha in 0..3 {
            assert_eq!(sol.p(1, alpha), 0.0);
        }
        for i in 0..3 {
            assert_eq!(sol.p(i, 2), 0.0);
        }
        assert!(sol.residual < 1e-9);
    }

    #[test]
    fn heterogeneous_instance_reproduces_degrees() {
        let d = summary(&[3, 3, 3, 3, 4, 1], &[2, 4, 4, 4, 3]);
        let sol = fit_hcm::<f64>(&d, 1e-12, 10_000).unwrap();
        let k = sol.expected_node_degrees();
        let h = sol.expected_hyperedge_degrees();
        for (got, want) in k.iter().zip(d.node_degrees()) {
            assert!((got - *want as f64).abs() < 1e-10, "{got} vs {want}");
        }
        for (got, want) in h.iter().zip(d.hyperedge_degrees()) {
            assert!((got - *want as f64).abs() < 1e-10, "{got} vs {want}");
        }
        for i in 0..6 {
            for alpha in 0..5 {
                let p = sol.p(i, alpha);
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }

    #[test]
    fn equal_degrees_share_probabilities() {
        let d = summary(&[3, 3, 3, 3, 4, 1], &[2, 4, 4, 4, 3]);
        let sol = fit_hcm::<f64>(&d, 1e-12, 10_000).unwrap();
        // Nodes 0..4 share degree 3, hyperedges 1..3 share size 4.
        assert_eq!(sol.p(0, 1), sol.p(2, 3));
        assert_eq!(sol.p(0, 0), sol.p(3, 0));
    }

    #[test]
    fn real_valued_targets_are_accepted() {
        let k = [1.5f64, 1.0];
        let h = [1.3, 1.2];
        let sol = fit_hcm_targets(&k, &h, 1e-11, 10_000).unwrap();
        let rows = sol.expected_node_degrees();
        assert!((rows[0] - 1.5).abs() < 1e-9);
        assert!((rows[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inconsistent_totals_error_with_residual() {
        let k = [2.0f64, 2.0];
        let h = [0.5, 0.5];
        let err = fit_hcm_targets(&k, &h, 1e-10, 2_000).unwrap_err();
        match err {
            Error::NonConvergence { residual, .. } => assert!(residual > 0.1),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn rejects_out_of_range_targets() {
        assert!(fit_hcm_targets(&[3.0f64], &[1.0, 1.0], 1e-10, 100).is_err());
        assert!(fit_hcm_targets(&[-1.0f64], &[0.0], 1e-10, 100).is_err());
    }
}
