//! Agent state and steering weights.

use crate::vec2::Vec2;

/// The three agent roles. Any population holds exactly one leader and one
/// red agent; everyone else is a plain blue agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentKind {
    BlueLeader,
    RedAgent,
    Blue,
}

impl AgentKind {
    pub fn label(self) -> &'static str {
        match self {
            AgentKind::BlueLeader => "leader",
            AgentKind::RedAgent => "red",
            AgentKind::Blue => "blue",
        }
    }
}

/// Weights applied to the three steering vectors, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringWeights {
    pub cohesion: f64,
    pub alignment: f64,
    pub separation: f64,
}

impl SteeringWeights {
    pub fn new(cohesion: f64, alignment: f64, separation: f64) -> Self {
        for w in [cohesion, alignment, separation] {
            assert!((0.0..=1.0).contains(&w), "steering weight out of [0,1]");
        }
        SteeringWeights {
            cohesion,
            alignment,
            separation,
        }
    }
}

impl Default for SteeringWeights {
    fn default() -> Self {
        SteeringWeights {
            cohesion: 0.4,
            alignment: 0.4,
            separation: 0.2,
        }
    }
}

/// Full state of one agent: role, kinematics, and its trust factor in
/// `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub kind: AgentKind,
    pub position: Vec2,
    pub velocity: Vec2,
    pub trust: f64,
}
