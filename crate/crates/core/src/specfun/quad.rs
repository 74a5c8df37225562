//! Adaptive Gauss–Legendre quadrature.
//!
//! Panels are refined globally: the panel with the largest error estimate is
//! bisected until the summed error meets the requested tolerance. The error
//! estimate per panel compares the n-node rule against the (n/2)-node rule,
//! which is far more than enough for the smooth integrands produced by MGFs
//! and hypergeometric kernels. Semi-infinite ranges are mapped onto (0, 1).

use std::collections::BinaryHeap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Tolerances and budgets for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadControl {
    /// Target relative error of the whole integral.
    pub rel_tol: f64,
    /// Absolute floor below which refinement stops (guards near-zero results).
    pub abs_tol: f64,
    /// Nodes of the high rule per panel; the low rule uses half as many.
    pub nodes: usize,
    /// Refinement budget.
    pub max_panels: usize,
}

impl Default for QuadControl {
    fn default() -> Self {
        QuadControl { rel_tol: 1e-10, abs_tol: 1e-300, nodes: 61, max_panels: 4000 }
    }
}

impl QuadControl {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadControl { rel_tol, ..Default::default() }
    }
}

/// Gauss–Legendre nodes/weights on [-1, 1].
struct GlRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GlRule {
    /// Newton iteration on the Legendre recurrence.
    fn build(n: usize) -> GlRule {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Evaluate P_n(x) and P'_n(x).
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GlRule { nodes, weights }
    }

    fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc * h
    }
}

fn rule(n: usize) -> Arc<GlRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GlRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("rule cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(GlRule::build(n))).clone()
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integral of `f` over the finite interval [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, ctl: &QuadControl) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let hi_rule = rule(ctl.nodes.max(4));
    let lo_rule = rule((ctl.nodes.max(4) / 2).max(2));

    let eval = |a: f64, b: f64| -> Panel {
        let v_hi = hi_rule.integrate(&f, a, b);
        let v_lo = lo_rule.integrate(&f, a, b);
        Panel { a, b, value: v_hi, err: (v_hi - v_lo).abs() }
    };

    let mut heap = BinaryHeap::new();
    let first = eval(lo, hi);
    let mut total = first.value;
    let mut total_err = first.err;
    heap.push(first);

    let mut panels = 1usize;
    while total_err > ctl.abs_tol.max(ctl.rel_tol * total.abs()) {
        if panels >= ctl.max_panels {
            return Err(Error::non_convergence(
                "quadrature",
                format!(
                    "error {:.3e} above tolerance after {} panels (value {:.6e})",
                    total_err, panels, total
                ),
            ));
        }
        let worst = heap.pop().expect("heap cannot be empty while err > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; accept what we have.
            heap.push(worst);
            break;
        }
        let left = eval(worst.a, mid);
        let right = eval(mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
    Ok(sign * total)
}

/// Adaptive integral of `f` over [a, inf) via t = a + u/(1-u).
///
/// Requires the integrand to decay fast enough that f(t)/(1-u)^2 -> 0 as
/// u -> 1, true for every exponentially damped density handled here.
pub fn integrate_semi_inf<F: Fn(f64) -> f64>(f: F, a: f64, ctl: &QuadControl) -> Result<f64> {
    let g = |u: f64| {
        let one_minus = 1.0 - u;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let t = a + u / one_minus;
        let ft = f(t);
        if ft == 0.0 {
            0.0
        } else {
            ft / (one_minus * one_minus)
        }
    };
    integrate(g, 0.0, 1.0, ctl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let ctl = QuadControl::default();
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, &ctl).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let ctl = QuadControl::default();
        let v = integrate(|x| (9.0 * x).sin(), 0.0, PI, &ctl).unwrap();
        let exact = (1.0 - (9.0 * PI).cos()) / 9.0;
        assert!((v - exact).abs() < 1e-11, "v={v} exact={exact}");
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let ctl = QuadControl::default();
        let v1 = integrate(|x| x.exp(), 0.0, 1.0, &ctl).unwrap();
        let v2 = integrate(|x| x.exp(), 1.0, 0.0, &ctl).unwrap();
        assert!((v1 + v2).abs() < 1e-13);
    }

    #[test]
    fn gaussian_tail_to_infinity() {
        let ctl = QuadControl::default();
        // int_0^inf e^{-x^2} dx = sqrt(pi)/2
        let v = integrate_semi_inf(|x| (-x * x).exp(), 0.0, &ctl).unwrap();
        assert!((v - 0.5 * PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn shifted_exponential_tail() {
        let ctl = QuadControl::default();
        let v = integrate_semi_inf(|x| (-x).exp(), 3.0, &ctl).unwrap();
        assert!((v - (-3.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_integrable() {
        // int_0^1 x^{-1/2} dx = 2; converges, slowly but within budget.
        let ctl = QuadControl { rel_tol: 1e-9, ..Default::default() };
        let v = integrate(|x| if x > 0.0 { x.powf(-0.5) } else { 0.0 }, 0.0, 1.0, &ctl).unwrap();
        assert!((v - 2.0).abs() < 1e-7, "v={v}");
    }
}
