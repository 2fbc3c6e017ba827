//! Trust-based networked Boids: a flock of blue agents follows a leader
//! toward corner goals while a single red agent disturbs it through
//! velocity noise (influence) and network rewiring (shaping). Includes a
//! two-stage factorial experiment harness and CSV/SVG reporting.

pub mod agent;
pub mod config;
pub mod engine;
pub mod experiments;
pub mod graph;
pub mod output;
pub mod stats;
pub mod steering;
pub mod svg;
pub mod vec2;

pub use agent::{AgentKind, AgentState, SteeringWeights};
pub use engine::{RunResult, ScenarioKind, SimConfig, SimState};
pub use graph::AgentGraph;
pub use vec2::{Vec2, WorldBounds};
