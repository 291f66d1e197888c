//! Quantities of infinite networks as limits over the exhaustions `G^(n)`.
//!
//! Generators that declare spherical symmetry are handled on their radial
//! quotient (one vertex per sphere), which carries the same voltages as the
//! full exhaustion; all others are solved on the exhaustion itself.

use serde::{Deserialize, Serialize};

use super::{battery, SolveOptions};
use crate::error::{Error, Result};
use crate::network::{exhaustion, Exhaustible, VertexId};

/// Relative stability threshold used when a limit needs a transience check.
pub const TRANSIENCE_EPS: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub converged: bool,
    /// Radius of the last exhaustion evaluated.
    pub radius: usize,
    /// Value at radius `0, 1, ..., radius`.
    pub history: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Transient,
    /// Conductance to infinity fell below `eps`. Finite data cannot prove a
    /// zero limit, hence heuristic.
    RecurrentHeuristic,
    Inconclusive,
}

fn solve_opts(tol: f64) -> SolveOptions {
    SolveOptions::with_tol((tol * 1e-3).clamp(1e-14, 1e-9))
}

fn resistance_at(gen: &dyn Exhaustible, n: usize, tol: f64) -> Result<f64> {
    let ex = exhaustion(gen, n)?;
    Ok(battery(&ex.net, VertexId(0), &[ex.z], &solve_opts(tol))?.effective.resistance)
}

/// `R(a <-> infinity) = lim R(a <-> z_n)` with `a` the root.
///
/// Stops once two successive radii differ by less than `tol`; otherwise
/// returns the value at `n_max` with `converged == false`. The history is
/// nondecreasing (Rayleigh monotonicity).
pub fn resistance_to_infinity(gen: &dyn Exhaustible, n_max: usize, tol: f64) -> Result<LimitEstimate> {
    if n_max == 0 {
        return Err(Error::InvalidRadius(0));
    }
    let mut history = Vec::new();
    let mut ladder = 0.0;
    for n in 0..=n_max {
        let r = match gen.radial() {
            Some(sym) => {
                ladder += 1.0 / sym.shell_conductance(n);
                ladder
            }
            None => resistance_at(gen, n, tol)?,
        };
        history.push(r);
        if n >= 1 && (history[n] - history[n - 1]).abs() < tol {
            return Ok(LimitEstimate { value: r, converged: true, radius: n, history });
        }
    }
    Ok(LimitEstimate { value: last_value(&history), converged: false, radius: n_max, history })
}

fn last_value(history: &[f64]) -> f64 {
    *history.last().expect("at least one radius")
}

/// Heuristic transience test from the conductances `C_n = 1 / R(a <-> z_n)`,
/// `n = 0..=n_max`.
pub fn classify_transience(gen: &dyn Exhaustible, n_max: usize, eps: f64) -> Result<Verdict> {
    if n_max == 0 {
        return Ok(Verdict::Inconclusive);
    }
    // no early stop: the whole budget is inspected
    let est = resistance_to_infinity(gen, n_max, 0.0)?;
    let c: Vec<f64> = est.history.iter().map(|r| 1.0 / r).collect();
    let last = c[c.len() - 1];
    let prev = c[c.len() - 2];
    Ok(if last < eps {
        Verdict::RecurrentHeuristic
    } else if (last - prev).abs() < eps * last {
        Verdict::Transient
    } else {
        Verdict::Inconclusive
    })
}

struct LevelValues {
    /// `v_n(x)` for the unit-voltage battery root -> z_n
    voltage: f64,
    resistance: f64,
    weight: f64,
}

// Values at radius `n`, or `None` while `x` is still outside the ball.
fn level_values(gen: &dyn Exhaustible, x: VertexId, n: usize, tol: f64) -> Result<Option<LevelValues>> {
    let opts = solve_opts(tol);
    if let Some(sym) = gen.radial() {
        let d = sym.depth_of(x);
        if d > n {
            return Ok(None);
        }
        let path = sym.quotient(n);
        let b = battery(&path, VertexId(0), &[VertexId(n + 1)], &opts)?;
        return Ok(Some(LevelValues {
            voltage: b.voltage[VertexId(d)],
            resistance: b.effective.resistance,
            weight: sym.weight_at_depth(d),
        }));
    }
    let ex = exhaustion(gen, n)?;
    if x.0 >= ex.z.0 {
        return Ok(None);
    }
    let b = battery(&ex.net, VertexId(0), &[ex.z], &opts)?;
    Ok(Some(LevelValues {
        voltage: b.voltage[x],
        resistance: b.effective.resistance,
        weight: ex.net.weight(x),
    }))
}

fn limit_of<F>(gen: &dyn Exhaustible, x: VertexId, n_max: usize, tol: f64, f: F) -> Result<LimitEstimate>
where
    F: Fn(&LevelValues) -> f64,
{
    if let Verdict::RecurrentHeuristic = classify_transience(gen, n_max, TRANSIENCE_EPS)? {
        return Err(Error::NotTransient(format!(
            "conductance to z_{n_max} fell below {TRANSIENCE_EPS}"
        )));
    }
    let mut history = Vec::new();
    let mut inside_since = None;
    for n in 0..=n_max {
        let value = match level_values(gen, x, n, tol)? {
            Some(lv) => {
                inside_since.get_or_insert(n);
                f(&lv)
            }
            None => 0.0,
        };
        history.push(value);
        if matches!(inside_since, Some(s) if s < n) && (history[n] - history[n - 1]).abs() < tol {
            return Ok(LimitEstimate { value, converged: true, radius: n, history });
        }
    }
    Err(Error::BudgetExceededWithoutConvergence { best: last_value(&history), levels: n_max })
}

/// Green function `G(a, x) = pi(x) v(x)` where `v` is the limit voltage of
/// the unit current flow from the root `a` to infinity.
pub fn green_function(gen: &dyn Exhaustible, x: VertexId, n_max: usize, tol: f64) -> Result<LimitEstimate> {
    limit_of(gen, x, n_max, tol, |lv| lv.weight * lv.resistance * lv.voltage)
}

/// `P_x(tau_a < infinity) = v(x) / v(a)` with `a` the root. Equals 1 at the
/// root itself (`tau` counts time 0).
pub fn hitting_probability(gen: &dyn Exhaustible, x: VertexId, n_max: usize, tol: f64) -> Result<LimitEstimate> {
    if x.0 == 0 {
        return Ok(LimitEstimate { value: 1.0, converged: true, radius: 0, history: vec![1.0] });
    }
    // the unit-voltage battery has v(a) = 1
    limit_of(gen, x, n_max, tol, |lv| lv.voltage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::HalfLine;

    #[test]
    fn half_line_diverges() {
        let est = resistance_to_infinity(&HalfLine, 50, 1e-6).unwrap();
        assert!(!est.converged);
        assert_eq!(est.history[10], 11.0);
        assert!(est.history.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn half_line_verdicts() {
        assert_eq!(classify_transience(&HalfLine, 2000, 1e-3).unwrap(), Verdict::RecurrentHeuristic);
        assert_eq!(classify_transience(&HalfLine, 1, 1e-3).unwrap(), Verdict::Inconclusive);
        assert!(matches!(
            green_function(&HalfLine, VertexId(0), 2000, 1e-6),
            Err(Error::NotTransient(_))
        ));
    }

    #[test]
    fn zero_budget_is_rejected() {
        assert_eq!(resistance_to_infinity(&HalfLine, 0, 1e-6), Err(Error::InvalidRadius(0)));
    }
}
