//! The per-tick simulation pipeline and run lifecycle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::agent::{AgentKind, AgentState, SteeringWeights};
use crate::graph::{AgentGraph, GraphError};
use crate::steering;
use crate::vec2::{Vec2, WorldBounds};

/// Agent index conventions within a population.
pub const LEADER: usize = 0;
pub const RED: usize = 1;
pub const FIRST_BLUE: usize = 2;

/// Which of the red agent's two levers are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Gaussian noise on the red agent's velocity.
    VelocityNoise,
    /// Red rewires the network with probability eta per tick.
    NetworkChanges,
    /// Both levers at once.
    Both,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::VelocityNoise,
        ScenarioKind::NetworkChanges,
        ScenarioKind::Both,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::VelocityNoise => "velocity_noise",
            ScenarioKind::NetworkChanges => "network_changes",
            ScenarioKind::Both => "both",
        }
    }

    fn noise_active(self) -> bool {
        matches!(self, ScenarioKind::VelocityNoise | ScenarioKind::Both)
    }

    fn rewiring_active(self) -> bool {
        matches!(self, ScenarioKind::NetworkChanges | ScenarioKind::Both)
    }
}

/// Full parameterization of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_blue: usize,
    pub bounds: WorldBounds,
    pub weights: SteeringWeights,
    pub graph_p: f64,
    /// Red's noise level, also the per-tick rewiring probability.
    pub eta: f64,
    pub tau_blue_leader: f64,
    pub tau_red: f64,
    /// When false every trust factor is frozen at 1.
    pub trust_dynamics_enabled: bool,
    pub scenario: ScenarioKind,
    /// Total leader journeys per run; the first is warm-up.
    pub iterations: usize,
    /// Goal proximity radius ending an iteration.
    pub delta: f64,
    /// Euclidean radius for separation neighbours.
    pub r_sep: f64,
    /// Speed clamp for all non-leader agents.
    pub v_max: f64,
    pub leader_speed: f64,
    /// Safety cap; the default leader always terminates well under it.
    pub max_steps_per_iteration: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_blue: 25,
            bounds: WorldBounds::new(500.0, 500.0),
            weights: SteeringWeights::default(),
            graph_p: 0.1,
            eta: 0.1,
            tau_blue_leader: 1.0,
            tau_red: 1.0,
            trust_dynamics_enabled: false,
            scenario: ScenarioKind::VelocityNoise,
            iterations: 11,
            delta: 10.0,
            r_sep: 20.0,
            v_max: 1.0,
            leader_speed: 1.0,
            max_steps_per_iteration: 5000,
        }
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("effect metric needs at least 2 iteration records, got {0}")]
    TooFewRecords(usize),
}

impl SimConfig {
    pub fn agent_count(&self) -> usize {
        self.n_blue + 2
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let err = |msg: String| Err(EngineError::InvalidConfig(msg));
        if self.n_blue == 0 {
            return err("n_blue must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return err(format!("eta {} outside [0, 1]", self.eta));
        }
        if !(0.0..=1.0).contains(&self.graph_p) {
            return err(format!("graph_p {} outside [0, 1]", self.graph_p));
        }
        for (name, tau) in [
            ("tau_blue_leader", self.tau_blue_leader),
            ("tau_red", self.tau_red),
        ] {
            if !(-1.0..=1.0).contains(&tau) {
                return err(format!("{name} {tau} outside [-1, 1]"));
            }
        }
        if self.iterations < 2 {
            return err("iterations must be at least 2 (first is warm-up)".into());
        }
        if self.delta <= 0.0 || self.r_sep <= 0.0 || self.v_max <= 0.0 || self.leader_speed <= 0.0
        {
            return err("delta, r_sep, v_max, and leader_speed must be positive".into());
        }
        if self.v_max.max(self.leader_speed) > self.bounds.width.min(self.bounds.length) {
            return err("speeds must not exceed the world size".into());
        }
        Ok(())
    }
}

/// One row of a per-tick trajectory trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub tick: usize,
    pub agent_id: usize,
    pub kind: AgentKind,
    pub position: Vec2,
    pub velocity: Vec2,
    pub trust: f64,
}

/// Distance bookkeeping for one completed leader journey.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration_index: usize,
    pub steps_taken: usize,
    /// Mean blue-agent distance to the goal at the instant the leader
    /// entered the goal's delta-ball.
    pub mean_blue_goal_distance: f64,
    /// Set when the step cap fired before the leader arrived.
    pub capped: bool,
}

/// Output of a full run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub records: Vec<IterationRecord>,
    /// Mean of `mean_blue_goal_distance` with the warm-up iteration
    /// excluded.
    pub d_bar: f64,
    pub trajectory: Option<Vec<TraceRow>>,
}

/// Live state of one run.
#[derive(Debug, Clone)]
pub struct SimState {
    pub agents: Vec<AgentState>,
    pub graph: AgentGraph,
    pub goal: Vec2,
    pub tick: usize,
    pub iteration: usize,
    rng: ChaCha8Rng,
}

impl SimState {
    pub fn leader(&self) -> &AgentState {
        &self.agents[LEADER]
    }

    pub fn blues(&self) -> &[AgentState] {
        &self.agents[FIRST_BLUE..]
    }

    pub fn mean_blue_goal_distance(&self) -> f64 {
        let sum: f64 = self
            .blues()
            .iter()
            .map(|a| a.position.distance(self.goal))
            .sum();
        sum / self.blues().len() as f64
    }
}

/// Seeds a fresh simulation: uniform positions, unit-speed random
/// headings, trusts per the trust-dynamics flag, a G(n, p) network, and a
/// goal at a random corner.
pub fn init_run(config: &SimConfig, seed: u64) -> Result<SimState, EngineError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.agent_count();

    let mut agents = Vec::with_capacity(n);
    for id in 0..n {
        let kind = match id {
            LEADER => AgentKind::BlueLeader,
            RED => AgentKind::RedAgent,
            _ => AgentKind::Blue,
        };
        let position = Vec2::new(
            rng.gen_range(0.0..config.bounds.width),
            rng.gen_range(0.0..config.bounds.length),
        );
        let heading = rng.gen_range(0.0..std::f64::consts::TAU);
        let velocity = Vec2::new(heading.cos(), heading.sin());
        agents.push(AgentState {
            kind,
            position,
            velocity,
            trust: 1.0,
        });
    }
    if config.trust_dynamics_enabled {
        agents[LEADER].trust = config.tau_blue_leader;
        agents[RED].trust = config.tau_red;
        for agent in &mut agents[FIRST_BLUE..] {
            agent.trust = rng.gen_range(-1.0..=1.0);
        }
    }

    let graph = AgentGraph::random(n, config.graph_p, &mut rng)?;
    let corners = config.bounds.corners();
    let goal = corners[rng.gen_range(0..corners.len())];

    Ok(SimState {
        agents,
        graph,
        goal,
        tick: 0,
        iteration: 0,
        rng,
    })
}

/// One synchronous tick: rewiring, perception over the time-t state,
/// trust propagation, steering, red noise, leader aim, integration.
pub fn step(state: &mut SimState, config: &SimConfig) {
    let n = state.agents.len();

    // Network shaping. At eta = 0 no draw is made so all scenarios
    // consume the random stream identically.
    if config.scenario.rewiring_active() && config.eta > 0.0 && state.rng.gen_bool(config.eta) {
        state.graph.rewire_red(RED, LEADER, &mut state.rng);
    }

    // Perception from the pre-step state.
    let old = state.agents.clone();
    let r_sep_sq = config.r_sep * config.r_sep;
    let mut perceived: Vec<(Vec2, Vec2, Vec2)> = Vec::with_capacity(n);
    perceived.push((Vec2::ZERO, Vec2::ZERO, Vec2::ZERO)); // leader ignores steering
    for i in RED..n {
        let me = &old[i];
        let mut nbr_positions = Vec::new();
        let mut nbr_velocities = Vec::new();
        for &j in state.graph.neighbors(i).expect("valid index") {
            nbr_positions.push(old[j].position);
            nbr_velocities.push(old[j].velocity);
        }
        let spatial: Vec<Vec2> = old
            .iter()
            .enumerate()
            .filter(|&(j, other)| {
                j != i && (other.position - me.position).length_squared() <= r_sep_sq
            })
            .map(|(_, other)| other.position)
            .collect();
        perceived.push((
            steering::cohesion_velocity(me.position, &nbr_positions).normalized(),
            steering::alignment_velocity(me.velocity, &nbr_velocities).normalized(),
            steering::separation_velocity(me.position, &spatial).normalized(),
        ));
    }

    // Synchronous trust propagation over the pre-step trusts. Leader and
    // red trusts are frozen.
    if config.trust_dynamics_enabled {
        for i in FIRST_BLUE..n {
            let nbr_trusts: Vec<f64> = state
                .graph
                .neighbors(i)
                .expect("valid index")
                .iter()
                .map(|&j| old[j].trust)
                .collect();
            state.agents[i].trust = steering::update_trust(old[i].trust, &nbr_trusts);
        }
    }

    // Non-leader velocities, steered with the freshly propagated trust.
    for i in RED..n {
        let (cohesion, alignment, separation) = perceived[i];
        state.agents[i].velocity = steering::steer(
            old[i].velocity,
            state.agents[i].trust,
            config.weights,
            cohesion,
            alignment,
            separation,
            config.v_max,
        );
    }

    // Red's influence lever. Skipped entirely at eta = 0 (see above).
    if config.scenario.noise_active() && config.eta > 0.0 {
        let normal = Normal::new(0.0, config.eta).expect("valid std dev");
        let noise = Vec2::new(normal.sample(&mut state.rng), normal.sample(&mut state.rng));
        state.agents[RED].velocity = (state.agents[RED].velocity + noise).clamped(config.v_max);
    }

    state.agents[LEADER].velocity = steering::leader_velocity(
        state.agents[LEADER].position,
        state.goal,
        config.leader_speed,
    );

    for agent in &mut state.agents {
        let (p, v) = steering::integrate_position(agent.position, agent.velocity, &config.bounds);
        agent.position = p;
        agent.velocity = v;
    }
    state.tick += 1;
}

/// Ends the current iteration: records the mean blue distance to the goal
/// being retired and moves the goal to one of the other three corners.
pub fn relocate_goal(state: &mut SimState, config: &SimConfig, steps_taken: usize, capped: bool) -> IterationRecord {
    debug_assert!(
        capped || state.leader().position.distance(state.goal) <= config.delta,
        "relocate_goal called before the leader reached the goal"
    );
    let record = IterationRecord {
        iteration_index: state.iteration,
        steps_taken,
        mean_blue_goal_distance: state.mean_blue_goal_distance(),
        capped,
    };
    let others: Vec<Vec2> = config
        .bounds
        .corners()
        .into_iter()
        .filter(|&c| c != state.goal)
        .collect();
    state.goal = others[state.rng.gen_range(0..others.len())];
    state.iteration += 1;
    record
}

/// Runs the configured number of leader journeys and aggregates the
/// effect metric.
pub fn run_simulation(
    config: &SimConfig,
    seed: u64,
    capture_trajectory: bool,
) -> Result<RunResult, EngineError> {
    let mut state = init_run(config, seed)?;
    let mut records = Vec::with_capacity(config.iterations);
    let mut trajectory = capture_trajectory.then(Vec::new);

    if let Some(trace) = trajectory.as_mut() {
        capture(trace, &state);
    }
    for _ in 0..config.iterations {
        let mut steps = 0;
        let mut capped = false;
        while state.leader().position.distance(state.goal) > config.delta {
            if steps >= config.max_steps_per_iteration {
                capped = true;
                break;
            }
            step(&mut state, config);
            steps += 1;
            if let Some(trace) = trajectory.as_mut() {
                capture(trace, &state);
            }
        }
        records.push(relocate_goal(&mut state, config, steps, capped));
    }

    let d_bar = effect_metric(&records)?;
    Ok(RunResult {
        records,
        d_bar,
        trajectory,
    })
}

/// Mean per-iteration blue-goal distance with the warm-up (first)
/// iteration excluded.
pub fn effect_metric(records: &[IterationRecord]) -> Result<f64, EngineError> {
    if records.len() < 2 {
        return Err(EngineError::TooFewRecords(records.len()));
    }
    let tail = &records[1..];
    Ok(tail.iter().map(|r| r.mean_blue_goal_distance).sum::<f64>() / tail.len() as f64)
}

fn capture(trace: &mut Vec<TraceRow>, state: &SimState) {
    for (id, agent) in state.agents.iter().enumerate() {
        trace.push(TraceRow {
            tick: state.tick,
            agent_id: id,
            kind: agent.kind,
            position: agent.position,
            velocity: agent.velocity,
            trust: agent.trust,
        });
    }
}
