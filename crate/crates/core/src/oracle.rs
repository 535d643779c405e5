//! Exact offline optimum of the task-count maximisation.
//!
//! With every task size known in advance, the best allocation is the longest
//! prefix `1..k` of tasks that can be given distinct nodes such that each
//! task's own transmission plus computation fits after the transmissions of
//! all earlier tasks. Among the assignments reaching that `k`, the one with
//! the smallest total transmission time is returned (ties broken by the
//! lexicographically smallest node-id sequence), which makes the output
//! independent of the order nodes are listed in.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::online::{run_online, AlgoConfig};

/// Largest task count accepted by [`offline_optimal`].
pub const MAX_TASKS: usize = 12;
/// Largest node count accepted by [`offline_optimal`].
pub const MAX_NODES: usize = 64;
/// Search nodes visited before [`offline_optimal`] gives up.
pub const EXPLORATION_BUDGET: u64 = 200_000_000;
/// Size bound (tasks and nodes) for the brute-force [`enumerate_all`].
pub const MAX_ENUMERATION: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineSolution {
    pub k_opt: usize,
    /// Node id for each of the tasks `1..=k_opt`.
    pub assignment: Vec<usize>,
    pub total_tx_s: f64,
    pub explored_nodes: u64,
}

/// Checks that `assignment` is injective and meets the budget for every task
/// of the prefix. Returns the total transmission time.
pub fn verify_assignment(scenario: &Scenario, assignment: &[usize]) -> Result<f64> {
    if assignment.len() > scenario.task_count() {
        return Err(Error::Invariant("assignment longer than the task list".into()));
    }
    let mut seen = Vec::with_capacity(assignment.len());
    let mut spent = 0.0;
    for (task, &id) in scenario.tasks.iter().zip(assignment) {
        if seen.contains(&id) {
            return Err(Error::Invariant(format!("node {id} used twice")));
        }
        seen.push(id);
        let node = scenario
            .nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or_else(|| Error::Invariant(format!("unknown node {id}")))?;
        if spent + task.size_bits * node.latency_per_bit() > scenario.t_tot_s {
            return Err(Error::Invariant(format!(
                "task {} does not fit on node {id}",
                task.index
            )));
        }
        spent += node.tx_time(task.size_bits);
    }
    Ok(spent)
}

/// Flattened instance with nodes sorted by id.
struct Instance {
    sizes: Vec<f64>,
    ids: Vec<usize>,
    rates: Vec<f64>,
    lats: Vec<f64>,
    t_tot: f64,
}

impl Instance {
    fn new(scenario: &Scenario) -> Self {
        let mut nodes = scenario.nodes.clone();
        nodes.sort_by_key(|n| n.id);
        Self {
            sizes: scenario.tasks.iter().map(|t| t.size_bits).collect(),
            ids: nodes.iter().map(|n| n.id).collect(),
            rates: nodes.iter().map(|n| n.rate_bps).collect(),
            lats: nodes.iter().map(|n| n.latency_per_bit()).collect(),
            t_tot: scenario.t_tot_s,
        }
    }

    fn fits(&self, spent: f64, task: usize, node: usize) -> bool {
        spent + self.sizes[task] * self.lats[node] <= self.t_tot
    }

    fn cap(&self) -> usize {
        self.sizes.len().min(self.ids.len())
    }
}

#[derive(Clone)]
struct Best {
    k: usize,
    spent: f64,
    path: Option<Vec<usize>>,
}

impl Best {
    /// `(k desc, spent asc)`; equal pairs keep the earlier (lex-smaller) path.
    fn improved_by(&self, k: usize, spent: f64) -> bool {
        k > self.k || (k == self.k && (self.path.is_none() || spent < self.spent))
    }
}

struct Search<'a> {
    inst: &'a Instance,
    used: Vec<bool>,
    path: Vec<usize>,
    best: Best,
    explored: u64,
    budget: u64,
    scratch_d: Vec<f64>,
    scratch_r: Vec<f64>,
}

impl Search<'_> {
    /// Deepest prefix reachable if every further task could use the
    /// fastest-rate and lowest-latency unused node simultaneously.
    fn reach(&self, depth: usize, spent: f64) -> usize {
        let mut r_max = 0.0f64;
        let mut lat_min = f64::INFINITY;
        let mut free = 0;
        for (p, &u) in self.used.iter().enumerate() {
            if !u {
                r_max = r_max.max(self.inst.rates[p]);
                lat_min = lat_min.min(self.inst.lats[p]);
                free += 1;
            }
        }
        let mut t = spent;
        let mut k = depth;
        while k < self.inst.sizes.len() && k - depth < free {
            let d = self.inst.sizes[k];
            if t + d * lat_min > self.inst.t_tot {
                break;
            }
            t += d / r_max;
            k += 1;
        }
        k
    }

    /// Lower bound on the transmission time of tasks `depth..target` over
    /// distinct unused nodes: pair the largest tasks with the fastest links.
    fn tx_lower_bound(&mut self, depth: usize, target: usize) -> f64 {
        self.scratch_d.clear();
        self.scratch_d.extend_from_slice(&self.inst.sizes[depth..target]);
        self.scratch_r.clear();
        self.scratch_r.extend(
            self.used
                .iter()
                .enumerate()
                .filter(|&(_, &u)| !u)
                .map(|(p, _)| self.inst.rates[p]),
        );
        self.scratch_d.sort_by(|a, b| b.total_cmp(a));
        self.scratch_r.sort_by(|a, b| b.total_cmp(a));
        self.scratch_d
            .iter()
            .zip(&self.scratch_r)
            .map(|(d, r)| d / r)
            .sum()
    }

    fn dfs(&mut self, spent: f64) -> Result<()> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Error::ResourceLimit(format!(
                "offline search exceeded {} nodes",
                self.budget
            )));
        }
        let depth = self.path.len();
        if self.best.improved_by(depth, spent) {
            self.best = Best {
                k: depth,
                spent,
                path: Some(self.path.clone()),
            };
        }
        if depth == self.inst.cap() {
            return Ok(());
        }
        let reach = self.reach(depth, spent);
        if reach < self.best.k {
            return Ok(());
        }
        if reach == self.best.k && self.best.path.is_some() {
            let lb = spent + self.tx_lower_bound(depth, reach);
            if lb >= self.best.spent {
                return Ok(());
            }
        }
        for p in 0..self.inst.ids.len() {
            if self.used[p] || !self.inst.fits(spent, depth, p) {
                continue;
            }
            self.used[p] = true;
            self.path.push(p);
            let next = spent + self.inst.sizes[depth] / self.inst.rates[p];
            let res = self.dfs(next);
            self.path.pop();
            self.used[p] = false;
            res?;
        }
        Ok(())
    }
}

/// Longest injective, budget-feasible prefix of a candidate assignment.
fn feasible_prefix_len(scenario: &Scenario, assignment: &[usize]) -> usize {
    (0..=assignment.len())
        .rev()
        .find(|&k| verify_assignment(scenario, &assignment[..k]).is_ok())
        .unwrap_or(0)
}

/// Exact optimum by depth-first branch and bound.
///
/// The online allocator's own result seeds the incumbent prefix length; the
/// returned solution does not depend on that seed.
pub fn offline_optimal(scenario: &Scenario) -> Result<OfflineSolution> {
    scenario.validate()?;
    let incumbent = run_online(scenario, &AlgoConfig::default())?;
    let accepted: Vec<usize> = incumbent.state.assignment.iter().map_while(|a| *a).collect();
    let k_seed = feasible_prefix_len(scenario, &accepted);
    offline_optimal_seeded(scenario, k_seed)
}

/// [`offline_optimal`] with an explicit lower bound on the optimum. The bound
/// must be achievable; it only tightens pruning.
pub fn offline_optimal_seeded(scenario: &Scenario, k_lower_bound: usize) -> Result<OfflineSolution> {
    scenario.validate()?;
    if scenario.task_count() > MAX_TASKS || scenario.node_count() > MAX_NODES {
        return Err(Error::ResourceLimit(format!(
            "exact search supports at most {MAX_TASKS} tasks and {MAX_NODES} nodes, got {} x {}",
            scenario.task_count(),
            scenario.node_count()
        )));
    }
    let inst = Instance::new(scenario);
    let mut search = Search {
        used: vec![false; inst.ids.len()],
        path: Vec::with_capacity(inst.cap()),
        best: Best {
            k: k_lower_bound.min(inst.cap()),
            spent: f64::INFINITY,
            path: None,
        },
        explored: 0,
        budget: EXPLORATION_BUDGET,
        scratch_d: Vec::new(),
        scratch_r: Vec::new(),
        inst: &inst,
    };
    search.dfs(0.0)?;
    let path = search.best.path.ok_or_else(|| {
        Error::ContractViolation(format!(
            "seeded lower bound {k_lower_bound} is not achievable"
        ))
    })?;
    Ok(OfflineSolution {
        k_opt: search.best.k,
        assignment: path.iter().map(|&p| inst.ids[p]).collect(),
        total_tx_s: search.best.spent,
        explored_nodes: search.explored,
    })
}

/// Brute force over every injective node sequence of length `min(I, J)`.
/// Test oracle for [`offline_optimal`]; guarded to `I, J <= 8`.
pub fn enumerate_all(scenario: &Scenario) -> Result<OfflineSolution> {
    if scenario.tasks.is_empty() || scenario.nodes.is_empty() {
        return Err(Error::InvalidArgument("enumeration needs tasks and nodes".into()));
    }
    if scenario.task_count() > MAX_ENUMERATION || scenario.node_count() > MAX_ENUMERATION {
        return Err(Error::ResourceLimit(format!(
            "enumeration supports at most {MAX_ENUMERATION} tasks and nodes"
        )));
    }
    scenario.validate()?;
    let inst = Instance::new(scenario);
    let len = inst.cap();

    struct Enum<'a> {
        inst: &'a Instance,
        len: usize,
        used: Vec<bool>,
        seq: Vec<usize>,
        best: Option<(usize, f64, Vec<usize>)>,
        count: u64,
    }

    impl Enum<'_> {
        fn go(&mut self) {
            if self.seq.len() == self.len {
                self.count += 1;
                let mut spent = 0.0;
                let mut k = 0;
                for (task, &p) in self.seq.iter().enumerate() {
                    if !self.inst.fits(spent, task, p) {
                        break;
                    }
                    spent += self.inst.sizes[task] / self.inst.rates[p];
                    k += 1;
                }
                let prefix = &self.seq[..k];
                let better = match &self.best {
                    None => true,
                    Some((bk, bs, bp)) => {
                        k > *bk || (k == *bk && (spent < *bs || (spent == *bs && prefix < &bp[..])))
                    }
                };
                if better {
                    self.best = Some((k, spent, prefix.to_vec()));
                }
                return;
            }
            for p in 0..self.inst.ids.len() {
                if !self.used[p] {
                    self.used[p] = true;
                    self.seq.push(p);
                    self.go();
                    self.seq.pop();
                    self.used[p] = false;
                }
            }
        }
    }

    let mut e = Enum {
        inst: &inst,
        len,
        used: vec![false; inst.ids.len()],
        seq: Vec::with_capacity(len),
        best: None,
        count: 0,
    };
    e.go();
    let (k, spent, path) = e.best.expect("at least one sequence is enumerated");
    Ok(OfflineSolution {
        k_opt: k,
        assignment: path.iter().map(|&p| inst.ids[p]).collect(),
        total_tx_s: spent,
        explored_nodes: e.count,
    })
}
