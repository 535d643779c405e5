//! Competitive-ratio bookkeeping, the closed-form bounds of the analysis and
//! the fading-channel distribution of the normalised capacity `K = 1/beta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EdgeNode, Scenario, Task};
use crate::online::{AlgoConfig, OnlineRun};
use crate::oracle::OfflineSolution;

/// Absolute tolerance of the quadrature behind [`cdf_k`].
pub const QUAD_TOL: f64 = 1e-8;
pub const QUAD_MAX_DEPTH: u32 = 40;
/// Width of the cell next to the singular endpoint where the integrand is
/// replaced by its limit.
const ENDPOINT_CELL: f64 = 1e-12;

/// A ratio that is undefined when the online algorithm computed no task.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ratio {
    Defined(f64),
    NoTasks,
}

impl Ratio {
    pub fn of(numerator: f64, d_ip: usize) -> Self {
        if d_ip == 0 {
            Ratio::NoTasks
        } else {
            Ratio::Defined(numerator / d_ip as f64)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Defined(v) => Some(v),
            Ratio::NoTasks => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub d_ip: usize,
    pub d_ip_opt: usize,
    pub p_lp: f64,
    /// `D_IP,OPT / D_IP`.
    pub empirical_ratio: Ratio,
    /// `P_LP / D_IP`.
    pub analytical_ratio: Ratio,
    /// Smallest `beta` over accepted (task, node) pairs.
    pub min_beta: Option<f64>,
    /// Largest `delta_u` over accepted steps.
    pub max_delta_u: f64,
    pub theorem1_bound: Option<f64>,
}

impl RatioReport {
    pub fn new(scenario: &Scenario, run: &OnlineRun, offline: &OfflineSolution, cfg: &AlgoConfig) -> Self {
        let d_ip = run.state.dual_value;
        let p_lp = crate::online::primal_value(&run.state, scenario.t_tot_s);
        let mut min_beta: Option<f64> = None;
        let mut max_delta_u = 0.0f64;
        for (step, task) in run.steps.iter().zip(&scenario.tasks) {
            if let Some(id) = step.accepted_node() {
                let node = scenario.nodes.iter().find(|n| n.id == id).expect("accepted node exists");
                let b = beta(task, node, scenario.t_tot_s);
                min_beta = Some(min_beta.map_or(b, |m| m.min(b)));
                max_delta_u = max_delta_u.max(step.delta_u);
            }
        }
        let theorem1 = min_beta.map(|mb| {
            theorem1_bound(mb, cfg.delta, scenario.task_count(), d_ip, max_delta_u)
        });
        Self {
            d_ip,
            d_ip_opt: offline.k_opt,
            p_lp,
            empirical_ratio: Ratio::of(offline.k_opt as f64, d_ip),
            analytical_ratio: Ratio::of(p_lp, d_ip),
            min_beta,
            max_delta_u,
            theorem1_bound: theorem1,
        }
    }
}

/// Normalised load `(1/r_j + 1/f_j) d_i / t_tot`.
pub fn beta(task: &Task, node: &EdgeNode, t_tot: f64) -> f64 {
    node.latency_per_bit() * task.size_bits / t_tot
}

/// Per-acceptance ratio bound plus the cost of the tasks never computed:
/// `(1/min_beta)(1 + 1/(c - 1)) + max_delta_u + (I - D_IP)`.
pub fn theorem1_bound(min_beta: f64, delta: f64, task_count: usize, d_ip: usize, max_delta_u: f64) -> f64 {
    let c = (1.0 + delta).powf(1.0 / delta);
    (1.0 / min_beta) * (1.0 + 1.0 / (c - 1.0)) + max_delta_u + task_count.saturating_sub(d_ip) as f64
}

/// Upper bound on how many tasks one node can absorb with `alpha = 1`:
/// `1 + log_c((1 + delta) c / c^beta)`, valid for `0 <= beta <= delta <= 1`.
pub fn lemma2_bound(beta: f64, delta: f64) -> Result<f64> {
    if !(beta >= 0.0 && beta <= delta && delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= beta <= delta <= 1 with delta > 0, got beta = {beta}, delta = {delta}"
        )));
    }
    let c = (1.0 + delta).powf(1.0 / delta);
    Ok(1.0 + ((1.0 + delta) * c / c.powf(beta)).ln() / c.ln())
}

/// Whether every task satisfies
/// `d_i > (1/lat(j_i) - 1/lat(j_I)) t_tot (c - 1)`, where `j_i` is the node
/// selected for task `i` and `lat = 1/r + 1/f`.
pub fn lemma3_condition(scenario: &Scenario, cfg: &AlgoConfig, chosen_nodes: &[usize]) -> bool {
    let Some(&last) = chosen_nodes.last() else {
        return true;
    };
    let lat = |id: usize| {
        scenario
            .nodes
            .iter()
            .find(|n| n.id == id)
            .map(EdgeNode::latency_per_bit)
    };
    let Some(lat_last) = lat(last) else {
        return false;
    };
    let scale = scenario.t_tot_s * (cfg.c() - 1.0);
    scenario.tasks.iter().zip(chosen_nodes).all(|(task, &id)| match lat(id) {
        Some(l) => task.size_bits > (1.0 / l - 1.0 / lat_last) * scale,
        None => false,
    })
}

/// Selection-independent form of [`lemma3_condition`]: `J >= I` and every
/// `d_i` exceeds the full spread of `1/lat` over the node set times
/// `t_tot (c - 1)`. Under it a fresh node always outscores a used one when
/// `alpha = 1`, so each accepted task gets its own node.
pub fn lemma3_uniform_condition(scenario: &Scenario, cfg: &AlgoConfig) -> bool {
    if scenario.node_count() < scenario.task_count() {
        return false;
    }
    let inv = scenario.nodes.iter().map(|n| 1.0 / n.latency_per_bit());
    let (lo, hi) = inv.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let rhs = (hi - lo) * scenario.t_tot_s * (cfg.c() - 1.0);
    scenario.tasks.iter().all(|t| t.size_bits > rhs)
}

/// Simplified fading model: unit bandwidth, received power `P ~ Exp(lambda)`,
/// task size `D ~ U(0, d_max)`, one compute speed `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatModelParams {
    pub t_tot: f64,
    pub f: f64,
    pub d_max: f64,
    pub lambda: f64,
}

impl StatModelParams {
    pub fn new(t_tot: f64, f: f64, d_max: f64, lambda: f64) -> Result<Self> {
        let p = Self { t_tot, f, d_max, lambda };
        p.validate()?;
        Ok(p)
    }

    /// `t_tot = 2`, `1/f = 0.5`, `D_max = 4`, `lambda = 1`.
    pub fn fig4() -> Self {
        Self {
            t_tot: 2.0,
            f: 2.0,
            d_max: 4.0,
            lambda: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t_tot", self.t_tot), ("f", self.f), ("d_max", self.d_max), ("lambda", self.lambda)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Smallest `k` for which the closed form of `F_K` holds: `t_tot f / D_max`.
    pub fn k_threshold(&self) -> f64 {
        self.t_tot * self.f / self.d_max
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let h = b - a;
        let left = h * (fa + 4.0 * flm + fm) / 12.0;
        let right = h * (fm + 4.0 * frm + fb) / 12.0;
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    recurse(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn check_domain(k: f64, p: &StatModelParams) -> Result<()> {
    p.validate()?;
    let threshold = p.k_threshold();
    if !(k.is_finite() && k > 0.0 && k >= threshold) {
        return Err(Error::Domain(format!(
            "k = {k} violates k >= t_tot*f/D_max = {threshold}"
        )));
    }
    Ok(())
}

/// `Pr(K <= k)` for `K = t_tot / ((1/log2(1 + P) + 1/f) D)`.
pub fn cdf_k(k: f64, p: &StatModelParams) -> Result<f64> {
    check_domain(k, p)?;
    let upper = p.t_tot * p.f / k;
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let denom = p.t_tot / (k * x) - 1.0 / p.f;
        if denom <= 0.0 || upper - x < ENDPOINT_CELL {
            return 1.0;
        }
        let snr = (1.0 / denom).exp2() - 1.0;
        -(-p.lambda * snr).exp_m1()
    };
    let integral = adaptive_simpson(integrand, 0.0, upper, QUAD_TOL, QUAD_MAX_DEPTH);
    Ok(((integral + p.d_max - upper) / p.d_max).clamp(0.0, 1.0))
}

/// `Pr(K <= k | K >= 1) = (F_K(k) - F_K(1)) / (1 - F_K(1))`.
pub fn cdf_k_given_h(k: f64, p: &StatModelParams) -> Result<f64> {
    check_domain(k, p)?;
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("conditional CDF needs k >= 1, got {k}")));
    }
    check_domain(1.0, p)?;
    let f1 = cdf_k(1.0, p)?;
    if 1.0 - f1 <= f64::EPSILON {
        return Err(Error::Domain(format!(
            "conditioning event K >= 1 has probability {}",
            1.0 - f1
        )));
    }
    let fk = cdf_k(k, p)?;
    Ok(((fk - f1) / (1.0 - f1)).clamp(0.0, 1.0))
}

/// Probability that `1/min_i beta` stays below `k` over `task_count`
/// independent tasks: `F_{K|H}(k)^I`.
pub fn prob_competitive_value(k: f64, p: &StatModelParams, task_count: usize) -> Result<f64> {
    let v = cdf_k_given_h(k, p)?;
    Ok(v.powi(task_count as i32))
}
