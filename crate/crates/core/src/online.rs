//! Online greedy primal-dual task allocation.
//!
//! The source node sees task sizes one at a time. For each task it picks the
//! node maximising `(1 - z_j)^alpha / ((1/r_j + 1/f_j) d_i)`, checks the time
//! budget on that node only, and either accepts (updating `x`, `z`, `u`) or
//! rejects. After the first rejection every later task is rejected as well.
//!
//! Besides the integer allocation (whose objective is `D_IP`), the engine
//! maintains a feasible solution of the covering LP
//!
//! ```text
//! min  t_tot * sum_i x_i + sum_j z_j + u_1
//! s.t. (1/r_j + 1/f_j) d_i x_i + (d_i/r_j) sum_{i'>i} x_{i'} + z_j + u_i - u_{i+1} >= 1
//! ```
//!
//! whose value `P_LP` upper-bounds every integer allocation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EdgeNode, Scenario, Task};

/// Tolerance used by [`check_primal_feasibility`] in the harness.
pub const PRIMAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoConfig {
    /// Exponent on `(1 - z_j)` in the selection score; `>= 1`.
    pub alpha: f64,
    /// In `(0, 1]`; fixes `c = (1 + delta)^(1/delta)`.
    pub delta: f64,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        Self {
            alpha: 100.0,
            delta: 1.0,
        }
    }
}

impl AlgoConfig {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        let cfg = Self { alpha, delta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must be >= 1, got {}", self.alpha)));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta must lie in (0, 1], got {}",
                self.delta
            )));
        }
        Ok(())
    }

    pub fn c(&self) -> f64 {
        (1.0 + self.delta).powf(1.0 / self.delta)
    }
}

/// Live state of one run. Vectors `x`, `u` and `assignment` are indexed by
/// task position (task index minus one); `z` by node position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocState {
    pub assignment: Vec<Option<usize>>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    /// Transmission seconds already committed by accepted tasks.
    pub spent_tx_s: f64,
    pub halted: bool,
    pub dual_value: usize,
    /// Index of the next task the engine expects (1-based).
    pub next_task: usize,
    /// Sizes of the tasks revealed so far.
    pub revealed_bits: Vec<f64>,
}

impl AllocState {
    pub fn new(task_count: usize, node_count: usize) -> Self {
        Self {
            assignment: vec![None; task_count],
            x: vec![0.0; task_count],
            z: vec![0.0; node_count],
            u: vec![0.0; task_count],
            spent_tx_s: 0.0,
            halted: false,
            dual_value: 0,
            next_task: 1,
            revealed_bits: Vec::with_capacity(task_count),
        }
    }

    pub fn task_count(&self) -> usize {
        self.x.len()
    }

    /// Number of tasks each node (by position) has accepted.
    pub fn per_node_counts(&self, nodes: &[EdgeNode]) -> Vec<usize> {
        let mut counts = vec![0; nodes.len()];
        for id in self.assignment.iter().flatten() {
            if let Some(p) = nodes.iter().position(|n| n.id == *id) {
                counts[p] += 1;
            }
        }
        counts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decision {
    Accepted { node: usize },
    Rejected,
}

/// Dual variables right after a step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualSnapshot {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub u: Vec<f64>,
    pub spent_tx_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub task_index: usize,
    /// Node picked by the selection rule, whether or not the task fit on it.
    /// `None` when the step was applied outside [`OnlineAllocator::offer`].
    #[serde(default)]
    pub selected_node: Option<usize>,
    pub decision: Decision,
    pub delta_u: f64,
    pub primal_value_after: f64,
    pub dual_value_after: usize,
    pub snapshot: DualSnapshot,
}

impl StepOutcome {
    pub fn accepted_node(&self) -> Option<usize> {
        match self.decision {
            Decision::Accepted { node } => Some(node),
            Decision::Rejected => None,
        }
    }
}

fn score(z: f64, latency_per_bit: f64, bits: f64, alpha: f64) -> f64 {
    // z >= 1 means the node is saturated; its score bottoms out at 0 instead
    // of going negative (or NaN for fractional alpha).
    (1.0 - z).max(0.0).powf(alpha) / (latency_per_bit * bits)
}

fn position_of(nodes: &[EdgeNode], id: usize) -> Result<usize> {
    nodes
        .iter()
        .position(|n| n.id == id)
        .ok_or_else(|| Error::ContractViolation(format!("unknown node id {id}")))
}

fn outcome(state: &AllocState, task: &Task, decision: Decision, delta_u: f64, t_tot: f64) -> StepOutcome {
    StepOutcome {
        task_index: task.index,
        selected_node: match decision {
            Decision::Accepted { node } => Some(node),
            Decision::Rejected => None,
        },
        decision,
        delta_u,
        primal_value_after: primal_value(state, t_tot),
        dual_value_after: state.dual_value,
        snapshot: DualSnapshot {
            x: state.x.clone(),
            z: state.z.clone(),
            u: state.u.clone(),
            spent_tx_s: state.spent_tx_s,
        },
    }
}

/// Node id with the best selection score; ties go to the smallest id.
///
/// Panics if `nodes` is empty.
pub fn select_node(state: &AllocState, task: &Task, nodes: &[EdgeNode], cfg: &AlgoConfig) -> usize {
    assert!(!nodes.is_empty(), "select_node needs at least one node");
    let mut best: Option<(f64, usize)> = None;
    for (p, node) in nodes.iter().enumerate() {
        let s = score(state.z[p], node.latency_per_bit(), task.size_bits, cfg.alpha);
        best = match best {
            None => Some((s, node.id)),
            Some((bs, bid)) if s > bs || (s == bs && node.id < bid) => Some((s, node.id)),
            keep => keep,
        };
    }
    best.map(|(_, id)| id).unwrap()
}

/// Budget check for sending `task` to `node` next.
pub fn feasible(state: &AllocState, task: &Task, node: &EdgeNode, t_tot: f64) -> bool {
    !state.halted && state.spent_tx_s + task.size_bits * node.latency_per_bit() <= t_tot
}

fn record_task(state: &mut AllocState, task: &Task) -> Result<usize> {
    if task.index != state.next_task {
        return Err(Error::ContractViolation(format!(
            "expected task {}, received task {}",
            state.next_task, task.index
        )));
    }
    if task.index > state.task_count() {
        return Err(Error::ContractViolation(format!(
            "task {} exceeds the announced task count {}",
            task.index,
            state.task_count()
        )));
    }
    state.revealed_bits.push(task.size_bits);
    state.next_task += 1;
    Ok(task.index - 1)
}

fn spread_delta_u(state: &mut AllocState, pos: usize, delta_u: f64) {
    for u in &mut state.u[..=pos] {
        *u += delta_u;
    }
}

/// Commits `task` to node `node_id` and applies the dual updates.
///
/// `delta_u` is the clamped maximum over the other nodes, extended with
/// the chosen node's own residual `1 - (1 - z_old)^alpha - z_new`. For
/// `alpha = 1` that residual is never positive, so the extension only matters
/// for larger `alpha`, where it keeps the covering constraints satisfied.
pub fn accept_update(
    state: &mut AllocState,
    task: &Task,
    nodes: &[EdgeNode],
    node_id: usize,
    t_tot: f64,
    cfg: &AlgoConfig,
) -> Result<StepOutcome> {
    let p = position_of(nodes, node_id)?;
    let node = &nodes[p];
    if !feasible(state, task, node, t_tot) {
        return Err(Error::ContractViolation(format!(
            "task {} does not fit on node {node_id}",
            task.index
        )));
    }
    let pos = record_task(state, task)?;

    let c = cfg.c();
    let lat = node.latency_per_bit();
    let beta = lat * task.size_bits / t_tot;
    let z_old = state.z[p];
    let base = (1.0 - z_old).max(0.0).powf(cfg.alpha);

    state.x[pos] = base / (lat * task.size_bits);
    let z_new = z_old * (1.0 + beta) + beta / (c - 1.0);
    state.z[p] = z_new;

    let others = nodes
        .iter()
        .enumerate()
        .filter(|&(q, _)| q != p)
        .map(|(q, other)| (1.0 - (other.latency_per_bit() * base / lat + state.z[q])).max(0.0))
        .fold(0.0, f64::max);
    let own = (1.0 - base - z_new).max(0.0);
    let delta_u = others.max(own);
    spread_delta_u(state, pos, delta_u);

    state.assignment[pos] = Some(node_id);
    state.spent_tx_s += node.tx_time(task.size_bits);
    state.dual_value += 1;
    Ok(outcome(state, task, Decision::Accepted { node: node_id }, delta_u, t_tot))
}

/// Marks `task` as rejected and restores primal feasibility for it.
///
/// On the first rejection with `J <= I`, every node whose `z_j` is still 0 is
/// raised to 1 and `delta_u` covers whatever residual `1 - z_j` the busy
/// nodes leave. With `J > I`, or on any later rejection, `delta_u = 1`.
pub fn reject_update(
    state: &mut AllocState,
    task: &Task,
    node_count: usize,
    task_count: usize,
    t_tot: f64,
) -> Result<StepOutcome> {
    let pos = record_task(state, task)?;
    let first = !state.halted;
    state.halted = true;
    let delta_u = if first && node_count <= task_count {
        for z in &mut state.z {
            if *z == 0.0 {
                *z = 1.0;
            }
        }
        state.z.iter().map(|z| (1.0 - z).max(0.0)).fold(0.0, f64::max)
    } else {
        1.0
    };
    spread_delta_u(state, pos, delta_u);
    Ok(outcome(state, task, Decision::Rejected, delta_u, t_tot))
}

/// `t_tot * sum x + sum z + u_1`.
pub fn primal_value(state: &AllocState, t_tot: f64) -> f64 {
    t_tot * state.x.iter().sum::<f64>() + state.z.iter().sum::<f64>() + state.u.first().copied().unwrap_or(0.0)
}

pub fn dual_value(state: &AllocState) -> usize {
    state.dual_value
}

/// A single violated covering constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimalViolation {
    pub task_index: usize,
    pub node_id: usize,
    pub lhs: f64,
}

/// Smallest left-hand side across all covering constraints of revealed tasks,
/// together with where it occurs. `None` before any task is revealed.
pub fn min_primal_lhs(state: &AllocState, nodes: &[EdgeNode]) -> Option<PrimalViolation> {
    let seen = state.revealed_bits.len();
    let mut worst: Option<PrimalViolation> = None;
    // suffix[i] = sum_{i' > i} x_{i'}
    let mut suffix = vec![0.0; seen];
    let mut acc = 0.0;
    for i in (0..state.x.len()).rev() {
        if i < seen {
            suffix[i] = acc;
        }
        acc += state.x[i];
    }
    for i in 0..seen {
        let d = state.revealed_bits[i];
        let u_next = state.u.get(i + 1).copied().unwrap_or(0.0);
        for (p, node) in nodes.iter().enumerate() {
            let lhs = node.latency_per_bit() * d * state.x[i]
                + node.tx_time(d) * suffix[i]
                + state.z[p]
                + state.u[i]
                - u_next;
            if worst.is_none_or(|w| lhs < w.lhs) {
                worst = Some(PrimalViolation {
                    task_index: i + 1,
                    node_id: node.id,
                    lhs,
                });
            }
        }
    }
    worst
}

/// Checks every covering constraint for the revealed tasks within `tol`.
pub fn check_primal_feasibility(state: &AllocState, nodes: &[EdgeNode], tol: f64) -> Result<()> {
    match min_primal_lhs(state, nodes) {
        Some(v) if v.lhs < 1.0 - tol => Err(Error::Invariant(format!(
            "primal constraint for task {} / node {} has lhs {} < 1",
            v.task_index, v.node_id, v.lhs
        ))),
        _ => Ok(()),
    }
}

/// Drives the algorithm one revealed task at a time.
///
/// The engine holds the static node data and the task count, but never any
/// task size before [`OnlineAllocator::offer`] receives it.
#[derive(Debug, Clone)]
pub struct OnlineAllocator<'a> {
    nodes: &'a [EdgeNode],
    t_tot: f64,
    task_count: usize,
    cfg: AlgoConfig,
    state: AllocState,
}

impl<'a> OnlineAllocator<'a> {
    pub fn new(nodes: &'a [EdgeNode], t_tot: f64, task_count: usize, cfg: AlgoConfig) -> Result<Self> {
        cfg.validate()?;
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("at least one node is required".into()));
        }
        Ok(Self {
            nodes,
            t_tot,
            task_count,
            cfg,
            state: AllocState::new(task_count, nodes.len()),
        })
    }

    pub fn offer(&mut self, task: &Task) -> Result<StepOutcome> {
        let chosen = select_node(&self.state, task, self.nodes, &self.cfg);
        let node = self
            .nodes
            .iter()
            .find(|n| n.id == chosen)
            .expect("selected node comes from the node set");
        let mut step = if feasible(&self.state, task, node, self.t_tot) {
            accept_update(&mut self.state, task, self.nodes, chosen, self.t_tot, &self.cfg)
        } else {
            reject_update(&mut self.state, task, self.nodes.len(), self.task_count, self.t_tot)
        }?;
        step.selected_node = Some(chosen);
        Ok(step)
    }

    pub fn state(&self) -> &AllocState {
        &self.state
    }

    pub fn into_state(self) -> AllocState {
        self.state
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnlineRun {
    pub state: AllocState,
    pub steps: Vec<StepOutcome>,
}

impl OnlineRun {
    /// Node chosen by the selection rule for each task, in arrival order.
    pub fn selected_nodes(&self) -> Vec<usize> {
        self.steps.iter().filter_map(|s| s.selected_node).collect()
    }
}

/// Runs the algorithm over the scenario's tasks in arrival order.
pub fn run_online(scenario: &Scenario, cfg: &AlgoConfig) -> Result<OnlineRun> {
    let mut engine = OnlineAllocator::new(&scenario.nodes, scenario.t_tot_s, scenario.task_count(), *cfg)?;
    let steps = scenario
        .tasks
        .iter()
        .map(|t| engine.offer(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(OnlineRun {
        state: engine.into_state(),
        steps,
    })
}

/// Writes one JSON object per step.
pub fn write_trace_jsonl<W: Write>(steps: &[StepOutcome], mut out: W) -> Result<()> {
    for step in steps {
        serde_json::to_writer(&mut out, step)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChannelParams;

    fn channel() -> ChannelParams {
        ChannelParams::new(1.0, 1.0, 30.0, 1e9, 2.0).unwrap()
    }

    /// Node whose rate and cpu are both `2 / lat`, so `1/r + 1/f = lat`.
    fn node(id: usize, lat: f64) -> EdgeNode {
        EdgeNode::with_rate(id, 2.0 / lat, 2.0 / lat, &channel()).unwrap()
    }

    fn cfg(alpha: f64) -> AlgoConfig {
        AlgoConfig::new(alpha, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!((AlgoConfig::default().c() - 2.0).abs() < 1e-15);
        assert!(AlgoConfig::new(0.5, 1.0).is_err());
        assert!(AlgoConfig::new(1.0, 0.0).is_err());
        assert!(AlgoConfig::new(1.0, 1.5).is_err());
        assert!(AlgoConfig::new(1.0, 0.5).unwrap().c() > 1.0);
    }

    #[test]
    fn select_pure_latency_argmax() {
        let nodes = [node(1, 1.0), node(2, 2.0)];
        let st = AllocState::new(1, 2);
        assert_eq!(select_node(&st, &Task::new(1, 1.0), &nodes, &cfg(1.0)), 1);
    }

    #[test]
    fn select_alpha_collapse() {
        let nodes = [node(1, 1.0), node(2, 2.0)];
        let mut st = AllocState::new(1, 2);
        st.z[0] = 0.5;
        // 0.5^100 vs 0.5
        assert_eq!(select_node(&st, &Task::new(1, 1.0), &nodes, &cfg(100.0)), 2);
    }

    #[test]
    fn select_ties_to_smallest_id() {
        let nodes = [node(7, 1.0), node(3, 1.0), node(5, 1.0)];
        let st = AllocState::new(1, 3);
        assert_eq!(select_node(&st, &Task::new(1, 1.0), &nodes, &cfg(1.0)), 3);
    }

    #[test]
    fn select_matches_brute_force_on_random_instance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let nodes: Vec<EdgeNode> = (1..=8).map(|id| node(id, rng.random_range(0.2..3.0))).collect();
            let mut st = AllocState::new(1, 8);
            for z in &mut st.z {
                *z = rng.random_range(0.0..0.9);
            }
            let d = rng.random_range(0.1..2.0);
            let scores: Vec<f64> = nodes
                .iter()
                .zip(&st.z)
                .map(|(n, z)| (1.0 - z) / ((1.0 / n.rate_bps + 1.0 / n.cpu_bps) * d))
                .collect();
            let mut best = 0;
            for k in 1..8 {
                if scores[k] > scores[best] {
                    best = k;
                }
            }
            assert_eq!(select_node(&st, &Task::new(1, d), &nodes, &cfg(1.0)), nodes[best].id);
        }
    }

    #[test]
    fn feasibility_boundary_is_closed() {
        let n = node(1, 1.0);
        let st = AllocState::new(1, 1);
        assert!(feasible(&st, &Task::new(1, 2.0), &n, 2.0));
        assert!(!feasible(&st, &Task::new(1, 2.0 + 1e-12), &n, 2.0));
        let mut halted = st.clone();
        halted.halted = true;
        assert!(!feasible(&halted, &Task::new(1, 1e-6), &n, 100.0));
    }

    #[test]
    fn three_task_budget_hand_trace() {
        // lat = 1 s/bit, r = 2: each accepted task spends d/2 transmission seconds.
        let nodes = [node(1, 1.0), node(2, 1.0), node(3, 1.0)];
        let mut st = AllocState::new(3, 3);
        let t_tot = 3.0;
        let c = cfg(100.0);
        accept_update(&mut st, &Task::new(1, 2.0), &nodes, 1, t_tot, &c).unwrap();
        assert!((st.spent_tx_s - 1.0).abs() < 1e-15);
        // 1 + 2 * 1 = 3 <= 3
        assert!(feasible(&st, &Task::new(2, 2.0), &nodes[1], t_tot));
        accept_update(&mut st, &Task::new(2, 2.0), &nodes, 2, t_tot, &c).unwrap();
        // spent 2, task 3 needs 2 + 1.5 > 3
        assert!(!feasible(&st, &Task::new(3, 1.5), &nodes[2], t_tot));
        assert!(feasible(&st, &Task::new(3, 1.0), &nodes[2], t_tot));
    }

    #[test]
    fn accept_update_substitutions() {
        // beta = lat * d / t_tot = 0.5 with lat = 1, d = 0.5, t_tot = 1.
        let nodes = [node(1, 1.0), node(2, 1.0)];
        let mut st = AllocState::new(2, 2);
        let out = accept_update(&mut st, &Task::new(1, 0.5), &nodes, 1, 1.0, &cfg(1.0)).unwrap();
        assert!((st.z[0] - 0.5).abs() < 1e-15);
        assert_eq!(out.decision, Decision::Accepted { node: 1 });
        // x = 1 / (lat * d) = 2
        assert!((st.x[0] - 2.0).abs() < 1e-15);
        // two identical nodes, z = 0: ratio of latencies 1, clamp at 0
        assert_eq!(out.delta_u, 0.0);
        assert_eq!(st.dual_value, 1);

        let nodes = [node(1, 2.0), node(2, 3.0)];
        let mut st = AllocState::new(1, 2);
        accept_update(&mut st, &Task::new(1, 1.0), &nodes, 1, 10.0, &cfg(1.0)).unwrap();
        assert!((st.x[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn accept_on_infeasible_is_contract_violation() {
        let nodes = [node(1, 1.0)];
        let mut st = AllocState::new(1, 1);
        let err = accept_update(&mut st, &Task::new(1, 5.0), &nodes, 1, 1.0, &cfg(1.0));
        assert!(matches!(err, Err(Error::ContractViolation(_))));
        assert_eq!(st, AllocState::new(1, 1));
    }

    #[test]
    fn out_of_order_task_is_rejected() {
        let mut st = AllocState::new(2, 1);
        assert!(reject_update(&mut st, &Task::new(2, 1.0), 1, 2, 1.0).is_err());
    }

    #[test]
    fn reject_more_nodes_than_tasks_adds_unit_delta_u() {
        // J = 4 > I = 3
        let nodes: Vec<EdgeNode> = (1..=4).map(|id| node(id, 1.0)).collect();
        let mut st = AllocState::new(3, 4);
        let c = cfg(100.0);
        accept_update(&mut st, &Task::new(1, 0.25), &nodes, 1, 1.0, &c).unwrap();
        accept_update(&mut st, &Task::new(2, 0.25), &nodes, 2, 1.0, &c).unwrap();
        let z_before = st.z.clone();
        let u_before = st.u.clone();
        let out = reject_update(&mut st, &Task::new(3, 1.0), 4, 3, 1.0).unwrap();
        assert_eq!(out.delta_u, 1.0);
        assert_eq!(st.z, z_before);
        for i in 0..3 {
            assert!((st.u[i] - u_before[i] - 1.0).abs() < 1e-15);
        }
        assert!(st.halted);
        assert_eq!(st.dual_value, 2);
    }

    #[test]
    fn reject_fix_raises_idle_nodes() {
        // J = 2 <= I = 2, node 1 carries z = 0.4
        let mut st = AllocState::new(2, 2);
        st.z = vec![0.0, 0.4];
        st.next_task = 1;
        reject_update(&mut st, &Task::new(1, 1.0), 2, 2, 1.0).unwrap();
        assert_eq!(st.z, vec![1.0, 0.4]);
        // the busy node's residual 0.6 is covered through u
        assert!((st.u[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn cascade_rejections_use_unit_delta_u() {
        let nodes = [node(1, 1.0)];
        let mut eng = OnlineAllocator::new(&nodes, 1.0, 3, cfg(1.0)).unwrap();
        let a = eng.offer(&Task::new(1, 5.0)).unwrap();
        let b = eng.offer(&Task::new(2, 0.1)).unwrap();
        let c = eng.offer(&Task::new(3, 0.1)).unwrap();
        assert_eq!(a.decision, Decision::Rejected);
        assert_eq!(b.decision, Decision::Rejected);
        assert_eq!(c.decision, Decision::Rejected);
        assert_eq!(b.delta_u, 1.0);
        assert_eq!(c.delta_u, 1.0);
    }

    #[test]
    fn objective_bookkeeping() {
        let st = AllocState::new(3, 2);
        assert_eq!(primal_value(&st, 1.0), 0.0);
        assert_eq!(dual_value(&st), 0);

        let mut st = AllocState::new(1, 1);
        st.x[0] = 0.5;
        st.z[0] = 0.5;
        assert!((primal_value(&st, 1.0) - 1.0).abs() < 1e-15);

        // lat = 1, d = 2, t_tot = 4: beta = 0.5, x = 0.5, z = 0.5
        let nodes = [node(1, 1.0), node(2, 1.0)];
        let mut st = AllocState::new(1, 2);
        let out = accept_update(&mut st, &Task::new(1, 2.0), &nodes, 1, 4.0, &cfg(1.0)).unwrap();
        assert!((out.primal_value_after - 2.5).abs() < 1e-15);
    }

    #[test]
    fn single_feasible_task() {
        let ch = channel();
        let s = Scenario::from_sizes(&[0.5], vec![node(1, 1.0)], 1.0, ch, 0).unwrap();
        let run = run_online(&s, &cfg(1.0)).unwrap();
        assert_eq!(run.state.dual_value, 1);
    }

    #[test]
    fn oversized_first_task() {
        let ch = channel();
        let s = Scenario::from_sizes(&[3.0, 0.1], vec![node(1, 1.0), node(2, 1.5)], 1.0, ch, 0).unwrap();
        let run = run_online(&s, &cfg(1.0)).unwrap();
        assert_eq!(run.state.dual_value, 0);
        assert!(run.steps.iter().all(|s| s.accepted_node().is_none()));
    }

    #[test]
    fn trace_lines_parse() {
        let ch = channel();
        let s = Scenario::from_sizes(&[0.2, 0.3], vec![node(1, 1.0), node(2, 1.5)], 1.0, ch, 0).unwrap();
        let run = run_online(&s, &cfg(1.0)).unwrap();
        let mut buf = Vec::new();
        write_trace_jsonl(&run.steps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<StepOutcome> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(parsed, run.steps);
    }
}
