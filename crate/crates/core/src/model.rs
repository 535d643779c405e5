//! Domain types, the wireless link model and random scenario generation.
//!
//! All quantities are linear SI units internally: bits, bits/s, seconds,
//! hertz and watts. The only logarithmic input is the noise power spectral
//! density, which is converted once when the noise power is needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Distance at which the free-space reference loss is evaluated.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

/// Relative tolerance used when checking a node's rate against its gain.
const RATE_CONSISTENCY_TOL: f64 = 1e-9;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub noise_psd_dbm_hz: f64,
    pub carrier_freq_hz: f64,
    pub pathloss_exponent: f64,
}

impl ChannelParams {
    pub fn new(
        bandwidth_hz: f64,
        tx_power_w: f64,
        noise_psd_dbm_hz: f64,
        carrier_freq_hz: f64,
        pathloss_exponent: f64,
    ) -> Result<Self> {
        let params = Self {
            bandwidth_hz,
            tx_power_w,
            noise_psd_dbm_hz,
            carrier_freq_hz,
            pathloss_exponent,
        };
        params.validate()?;
        Ok(params)
    }

    /// 10 MHz, 20 dBm, -174 dBm/Hz, 2.1 GHz, free-space exponent.
    pub fn reference() -> Self {
        Self {
            bandwidth_hz: 10e6,
            tx_power_w: dbm_to_watts(20.0),
            noise_psd_dbm_hz: -174.0,
            carrier_freq_hz: 2.1e9,
            pathloss_exponent: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be finite and positive, got {v}")))
            }
        };
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("tx_power_w", self.tx_power_w)?;
        positive("carrier_freq_hz", self.carrier_freq_hz)?;
        if !self.noise_psd_dbm_hz.is_finite() {
            return Err(invalid("noise_psd_dbm_hz must be finite"));
        }
        if !(self.pathloss_exponent.is_finite() && self.pathloss_exponent >= 2.0) {
            return Err(invalid(format!(
                "pathloss_exponent must be >= 2, got {}",
                self.pathloss_exponent
            )));
        }
        let noise = self.noise_power_w();
        if !(noise.is_finite() && noise > 0.0) {
            return Err(invalid(format!("noise power {noise} W is not positive")));
        }
        Ok(())
    }

    /// Noise power over the whole band, in watts.
    pub fn noise_power_w(&self) -> f64 {
        dbm_to_watts(self.noise_psd_dbm_hz) * self.bandwidth_hz
    }

    fn reference_gain(&self) -> f64 {
        let k = SPEED_OF_LIGHT_M_S
            / (4.0 * std::f64::consts::PI * self.carrier_freq_hz * REFERENCE_DISTANCE_M);
        k * k
    }
}

/// Log-distance path gain anchored at the free-space loss of a 1 m link.
pub fn channel_gain(distance_m: f64, channel: &ChannelParams) -> Result<f64> {
    if !(distance_m.is_finite() && distance_m > 0.0) {
        return Err(invalid(format!("distance must be positive, got {distance_m}")));
    }
    Ok(channel.reference_gain()
        * (REFERENCE_DISTANCE_M / distance_m).powf(channel.pathloss_exponent))
}

/// Shannon rate `B log2(1 + g P / sigma^2)` in bits/s.
pub fn compute_rate(gain: f64, channel: &ChannelParams) -> f64 {
    debug_assert!(gain > 0.0);
    let snr = gain * channel.tx_power_w / channel.noise_power_w();
    channel.bandwidth_hz * snr.ln_1p() / std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Task {
    /// Arrival order, starting at 1.
    pub index: usize,
    pub size_bits: f64,
}

impl Task {
    pub fn new(index: usize, size_bits: f64) -> Self {
        Self { index, size_bits }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeNode {
    pub id: usize,
    pub distance_m: f64,
    pub gain: f64,
    pub rate_bps: f64,
    /// Computational speed in bits/s.
    pub cpu_bps: f64,
}

impl EdgeNode {
    /// Builds a node from its position, deriving gain and rate from the channel.
    pub fn at_distance(
        id: usize,
        distance_m: f64,
        cpu_bps: f64,
        channel: &ChannelParams,
    ) -> Result<Self> {
        if !(cpu_bps.is_finite() && cpu_bps > 0.0) {
            return Err(invalid(format!("cpu_bps must be positive, got {cpu_bps}")));
        }
        let gain = channel_gain(distance_m, channel)?;
        Ok(Self {
            id,
            distance_m,
            gain,
            rate_bps: compute_rate(gain, channel),
            cpu_bps,
        })
    }

    /// Builds a node with a prescribed rate, inverting the rate and path-loss
    /// laws to recover a consistent gain and distance.
    pub fn with_rate(
        id: usize,
        rate_bps: f64,
        cpu_bps: f64,
        channel: &ChannelParams,
    ) -> Result<Self> {
        if !(rate_bps.is_finite() && rate_bps > 0.0) {
            return Err(invalid(format!("rate_bps must be positive, got {rate_bps}")));
        }
        if !(cpu_bps.is_finite() && cpu_bps > 0.0) {
            return Err(invalid(format!("cpu_bps must be positive, got {cpu_bps}")));
        }
        let snr = (rate_bps / channel.bandwidth_hz * std::f64::consts::LN_2).exp_m1();
        let gain = snr * channel.noise_power_w() / channel.tx_power_w;
        if !(gain.is_finite() && gain > 0.0) {
            return Err(invalid(format!(
                "rate {rate_bps} bit/s is not reachable with {} Hz of bandwidth",
                channel.bandwidth_hz
            )));
        }
        let distance_m = REFERENCE_DISTANCE_M
            * (channel.reference_gain() / gain).powf(1.0 / channel.pathloss_exponent);
        Ok(Self {
            id,
            distance_m,
            gain,
            rate_bps,
            cpu_bps,
        })
    }

    /// Seconds per bit to transmit and then compute: `1/r + 1/f`.
    pub fn latency_per_bit(&self) -> f64 {
        1.0 / self.rate_bps + 1.0 / self.cpu_bps
    }

    pub fn tx_time(&self, bits: f64) -> f64 {
        bits / self.rate_bps
    }

    fn validate(&self, channel: &ChannelParams) -> Result<()> {
        for (name, v) in [
            ("distance_m", self.distance_m),
            ("gain", self.gain),
            ("rate_bps", self.rate_bps),
            ("cpu_bps", self.cpu_bps),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("node {}: {name} must be positive, got {v}", self.id)));
            }
        }
        let expected = compute_rate(self.gain, channel);
        if ((expected - self.rate_bps) / expected).abs() > RATE_CONSISTENCY_TOL {
            return Err(invalid(format!(
                "node {}: rate {} disagrees with gain-derived rate {expected}",
                self.id, self.rate_bps
            )));
        }
        Ok(())
    }
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub tasks: Vec<Task>,
    pub nodes: Vec<EdgeNode>,
    pub t_tot_s: f64,
    pub channel: ChannelParams,
    pub seed: u64,
    /// Set when some task cannot fit the budget on its own on some node
    /// (`beta_ij >= 1` for at least one pair).
    #[serde(default)]
    pub budget_warning: bool,
}

impl Scenario {
    pub fn new(
        tasks: Vec<Task>,
        nodes: Vec<EdgeNode>,
        t_tot_s: f64,
        channel: ChannelParams,
        seed: u64,
    ) -> Result<Self> {
        let mut scenario = Self {
            tasks,
            nodes,
            t_tot_s,
            channel,
            seed,
            budget_warning: false,
        };
        scenario.validate()?;
        scenario.budget_warning = scenario.compute_budget_warning();
        Ok(scenario)
    }

    /// Convenience constructor from bare task sizes; indices are assigned 1..I.
    pub fn from_sizes(
        sizes: &[f64],
        nodes: Vec<EdgeNode>,
        t_tot_s: f64,
        channel: ChannelParams,
        seed: u64,
    ) -> Result<Self> {
        let tasks = sizes
            .iter()
            .enumerate()
            .map(|(i, &d)| Task::new(i + 1, d))
            .collect();
        Self::new(tasks, nodes, t_tot_s, channel, seed)
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if self.tasks.is_empty() {
            return Err(invalid("a scenario needs at least one task"));
        }
        if self.nodes.is_empty() {
            return Err(invalid("a scenario needs at least one node"));
        }
        // t_tot = 0 is a legal degenerate budget: nothing can be computed.
        if !(self.t_tot_s.is_finite() && self.t_tot_s >= 0.0) {
            return Err(invalid(format!("t_tot must be finite and >= 0, got {}", self.t_tot_s)));
        }
        for (pos, task) in self.tasks.iter().enumerate() {
            if task.index != pos + 1 {
                return Err(invalid(format!(
                    "task at position {pos} has index {}, expected {}",
                    task.index,
                    pos + 1
                )));
            }
            if !(task.size_bits.is_finite() && task.size_bits > 0.0) {
                return Err(invalid(format!("task {} has non-positive size", task.index)));
            }
        }
        let mut ids: Vec<usize> = self.nodes.iter().map(|n| n.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("node ids must be unique"));
        }
        if ids[0] == 0 {
            return Err(invalid("node ids start at 1"));
        }
        for node in &self.nodes {
            node.validate(&self.channel)?;
        }
        Ok(())
    }

    fn compute_budget_warning(&self) -> bool {
        self.tasks.iter().any(|t| {
            self.nodes
                .iter()
                .any(|n| n.latency_per_bit() * t.size_bits >= self.t_tot_s)
        })
    }

    /// Same instance with a different time budget.
    pub fn with_t_tot(&self, t_tot_s: f64) -> Result<Self> {
        Self::new(
            self.tasks.clone(),
            self.nodes.clone(),
            t_tot_s,
            self.channel,
            self.seed,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: Scenario = serde_json::from_str(text)?;
        Self::new(parsed.tasks, parsed.nodes, parsed.t_tot_s, parsed.channel, parsed.seed)
    }
}

/// Closed interval for uniform sampling. `min == max` is allowed and yields
/// a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformRange {
    pub min: f64,
    pub max: f64,
}

impl UniformRange {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min > 0.0) {
            return Err(invalid(format!("{name}: bounds must be finite and positive")));
        }
        if self.min > self.max {
            return Err(invalid(format!(
                "{name}: inverted range [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }
}

/// Distribution parameters for [`generate_scenario`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub task_count: usize,
    pub node_count: usize,
    pub task_size_bits: UniformRange,
    pub distance_m: UniformRange,
    pub cpu_bps: UniformRange,
    pub t_tot_s: f64,
    pub channel: ChannelParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            task_count: 10,
            node_count: 10,
            task_size_bits: UniformRange::new(50e6, 100e6),
            distance_m: UniformRange::new(10.0, 100.0),
            cpu_bps: UniformRange::new(1e8, 5e8),
            t_tot_s: 4.0,
            channel: ChannelParams::reference(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.task_count == 0 {
            return Err(invalid("task_count must be >= 1"));
        }
        if self.node_count == 0 {
            return Err(invalid("node_count must be >= 1"));
        }
        self.task_size_bits.validate("task_size_bits")?;
        self.distance_m.validate("distance_m")?;
        self.cpu_bps.validate("cpu_bps")?;
        if !(self.t_tot_s.is_finite() && self.t_tot_s >= 0.0) {
            return Err(invalid("t_tot_s must be finite and >= 0"));
        }
        self.channel.validate()
    }
}

/// Draws a scenario. The result is a pure function of `(config, seed)`.
///
/// Nodes are drawn first (distance, then cpu speed, per node), then task
/// sizes, from a ChaCha8 stream seeded with `seed`.
pub fn generate_scenario(config: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = (1..=config.node_count)
        .map(|id| {
            let distance = config.distance_m.sample(&mut rng);
            let cpu = config.cpu_bps.sample(&mut rng);
            EdgeNode::at_distance(id, distance, cpu, &config.channel)
        })
        .collect::<Result<Vec<_>>>()?;
    let tasks = (1..=config.task_count)
        .map(|index| Task::new(index, config.task_size_bits.sample(&mut rng)))
        .collect();
    Scenario::new(tasks, nodes, config.t_tot_s, config.channel, seed).map_err(|e| match e {
        Error::InvalidArgument(msg) => invalid(format!("generated scenario invalid: {msg}")),
        other => other,
    })
}
