//! Per-agent steering and trust mathematics.
//!
//! These are pure functions over positions, velocities, and trust scalars;
//! the simulation loop in [`crate::engine`] decides who counts as a
//! neighbour and in what order the pieces run.

use crate::agent::SteeringWeights;
use crate::vec2::{Vec2, WorldBounds};

/// Pull toward the centroid of the connected neighbours' positions.
/// Empty neighbourhoods produce no pull.
pub fn cohesion_velocity(self_position: Vec2, neighbor_positions: &[Vec2]) -> Vec2 {
    if neighbor_positions.is_empty() {
        return Vec2::ZERO;
    }
    let sum = neighbor_positions
        .iter()
        .fold(Vec2::ZERO, |acc, &p| acc + p);
    sum * (1.0 / neighbor_positions.len() as f64) - self_position
}

/// Pull toward the mean velocity of the connected neighbours.
/// Empty neighbourhoods produce no pull.
pub fn alignment_velocity(self_velocity: Vec2, neighbor_velocities: &[Vec2]) -> Vec2 {
    if neighbor_velocities.is_empty() {
        return Vec2::ZERO;
    }
    let sum = neighbor_velocities
        .iter()
        .fold(Vec2::ZERO, |acc, &v| acc + v);
    sum * (1.0 / neighbor_velocities.len() as f64) - self_velocity
}

/// Push away from agents in spatial proximity. The caller filters the list
/// to positions within the separation radius.
pub fn separation_velocity(self_position: Vec2, spatial_neighbor_positions: &[Vec2]) -> Vec2 {
    -spatial_neighbor_positions
        .iter()
        .fold(Vec2::ZERO, |acc, &p| acc + (p - self_position))
}

/// Midpoint of own trust and the neighbours' mean trust. With no
/// neighbours the trust is left unchanged.
pub fn update_trust(self_trust: f64, neighbor_trusts: &[f64]) -> f64 {
    if neighbor_trusts.is_empty() {
        return self_trust;
    }
    let mean = neighbor_trusts.iter().sum::<f64>() / neighbor_trusts.len() as f64;
    0.5 * (self_trust + mean)
}

/// Velocity update for every agent except the leader: the cohesion and
/// alignment vectors are scaled by the trust factor, separation is not, and
/// the result is speed-clamped. The three steering vectors are expected to
/// be normalized (or zero) already.
#[allow(clippy::too_many_arguments)]
pub fn steer(
    velocity: Vec2,
    trust: f64,
    weights: SteeringWeights,
    cohesion: Vec2,
    alignment: Vec2,
    separation: Vec2,
    v_max: f64,
) -> Vec2 {
    let v = velocity
        + (cohesion * weights.cohesion + alignment * weights.alignment) * trust
        + separation * weights.separation;
    v.clamped(v_max)
}

/// The leader's velocity: straight at the goal at constant speed,
/// unaffected by anything else. Zero when already at the goal.
pub fn leader_velocity(position: Vec2, goal: Vec2, speed: f64) -> Vec2 {
    (goal - position).normalized() * speed
}

/// One Euler step with boundary reflection: an axis that would exit the
/// world is mirrored about the violated boundary and its velocity
/// component negated. Returns the new (position, velocity).
pub fn integrate_position(position: Vec2, velocity: Vec2, bounds: &WorldBounds) -> (Vec2, Vec2) {
    debug_assert!(
        velocity.length() <= bounds.width.min(bounds.length),
        "velocity too large for single-reflection boundary handling"
    );
    let mut p = position + velocity;
    let mut v = velocity;
    if p.x < 0.0 {
        p.x = -p.x;
        v.x = -v.x;
    } else if p.x > bounds.width {
        p.x = 2.0 * bounds.width - p.x;
        v.x = -v.x;
    }
    if p.y < 0.0 {
        p.y = -p.y;
        v.y = -v.y;
    } else if p.y > bounds.length {
        p.y = 2.0 * bounds.length - p.y;
        v.y = -v.y;
    }
    (p, v)
}
