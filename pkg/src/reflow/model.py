"""Domain types and deterministic force fields shared by both simulation engines.

Every agent is pulled toward a personal goal point, pushed away from the
other agents by a softened inverse-square force, and (in penalty mode)
pushed back into the domain box by a linearly growing boundary drift.
All types are immutable after construction and all operations are pure,
so they can be evaluated from any number of workers without locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainBox",
    "AgentSpec",
    "RepulsionSpec",
    "SystemSpec",
    "repulsion_force",
    "repulsion_force_bound",
    "drift",
    "drift_field",
    "drift_sup_bound",
    "penalty_reflection_drift",
]

REFLECTION_MODES = ("projection", "penalty")
REPULSION_SIGNS = ("repulsive", "inhibitory")


def _point(p, name: str) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise ValueError(f"{name} must be a 2-D point, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class DomainBox:
    """Axis-aligned box; each agent is confined to its own copy of this box.

    Bounds may be infinite (e.g. ``[0, inf)`` for one-sided reflection);
    each lower bound must be strictly below its upper bound.
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower and upper must be 1-D vectors of equal length")
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def contains(self, x, tol: float = 0.0) -> bool:
        """True if x lies in the closed box, within an optional slack tol."""
        a = np.asarray(x, dtype=float)
        return bool(np.all(a >= self.lower - tol) and np.all(a <= self.upper + tol))

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)


@dataclass(frozen=True)
class AgentSpec:
    """Per-agent parameters: goal point, drift gain, noise scale, initial state."""

    goal: np.ndarray
    gain: float
    noise: float
    start: np.ndarray

    def __post_init__(self):
        goal = _point(self.goal, "goal")
        start = _point(self.start, "start")
        goal.setflags(write=False)
        start.setflags(write=False)
        object.__setattr__(self, "goal", goal)
        object.__setattr__(self, "start", start)
        if not self.gain > 0:
            raise ValueError("gain must be positive")
        if not self.noise > 0:
            raise ValueError("noise must be positive")


@dataclass(frozen=True)
class RepulsionSpec:
    """Pairwise interaction kernel.

    The same softened inverse-square kernel serves both readings: agents
    repelling each other in position space ('repulsive') and populations
    suppressing each other in activity space ('inhibitory'); the sign
    label records the interpretation only.  softening > 0 keeps the force
    bounded and globally Lipschitz.
    """

    strength: float = 0.1
    softening: float = 0.01
    sign: str = "repulsive"

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError("strength must be nonnegative")
        if not self.softening > 0:
            raise ValueError("softening must be positive")
        if self.sign not in REPULSION_SIGNS:
            raise ValueError(f"sign must be one of {REPULSION_SIGNS}")


@dataclass(frozen=True)
class SystemSpec:
    """Full system: agents, shared domain box, interaction, and reflection mode."""

    agents: tuple[AgentSpec, ...]
    box: DomainBox
    repulsion: RepulsionSpec = field(default_factory=RepulsionSpec)
    horizon: float = 2.0
    reflection_mode: str = "projection"
    penalty_gain: float = 0.0

    def __post_init__(self):
        agents = tuple(self.agents)
        if not agents:
            raise ValueError("at least one agent is required")
        object.__setattr__(self, "agents", agents)
        if self.box.dim != 2:
            raise ValueError("agents live in the plane; box must be 2-D")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.reflection_mode not in REFLECTION_MODES:
            raise ValueError(f"reflection_mode must be one of {REFLECTION_MODES}")
        if self.reflection_mode == "penalty" and not self.penalty_gain > 0:
            raise ValueError("penalty mode requires penalty_gain > 0")
        if self.penalty_gain < 0:
            raise ValueError("penalty_gain must be nonnegative")
        for k, a in enumerate(agents):
            if not self.box.contains(a.start):
                raise ValueError(f"agent {k} start {a.start} lies outside the closed box")
            if not self.box.contains(a.goal):
                raise ValueError(f"agent {k} goal {a.goal} lies outside the closed box")

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    def goals(self) -> np.ndarray:
        return np.array([a.goal for a in self.agents])

    def gains(self) -> np.ndarray:
        return np.array([a.gain for a in self.agents])

    def noises(self) -> np.ndarray:
        return np.array([a.noise for a in self.agents])

    def starts(self) -> np.ndarray:
        return np.array([a.start for a in self.agents])


def repulsion_force(x_i, x_j, spec: RepulsionSpec) -> np.ndarray:
    """Softened inverse-square force on agent i from agent j.

    F = k (x_i - x_j) / (|x_i - x_j|^2 + eps)^(3/2).  Antisymmetric in its
    arguments and finite everywhere, including x_i = x_j.
    """
    d = np.asarray(x_i, dtype=float) - np.asarray(x_j, dtype=float)
    return spec.strength * d / (d @ d + spec.softening) ** 1.5


def repulsion_force_bound(spec: RepulsionSpec) -> float:
    """Global bound on |repulsion_force|, attained at separation sqrt(eps/2)."""
    d = math.sqrt(spec.softening / 2.0)
    return spec.strength * d / (d * d + spec.softening) ** 1.5


def penalty_reflection_drift(x, box: DomainBox, gain: float) -> np.ndarray:
    """Inward drift growing linearly with the overshoot outside the box.

    Zero on the closed box; component k is gain * (overshoot below lower[k])
    minus gain * (overshoot above upper[k]).
    """
    if gain < 0:
        raise ValueError("gain must be nonnegative")
    a = np.asarray(x, dtype=float)
    return gain * np.maximum(0.0, box.lower - a) - gain * np.maximum(0.0, a - box.upper)


def drift(i: int, states, system: SystemSpec) -> np.ndarray:
    """Deterministic drift of agent i given the positions of all agents.

    Goal attraction plus the sum of pairwise forces from every other
    agent; in penalty mode the boundary penalty drift is added as well.
    """
    states = np.asarray(states, dtype=float)
    if states.shape != (system.n_agents, 2):
        raise ValueError(f"states must have shape ({system.n_agents}, 2)")
    agent = system.agents[i]
    x = states[i]
    b = agent.gain * (agent.goal - x)
    for j in range(system.n_agents):
        if j != i:
            b = b + repulsion_force(x, states[j], system.repulsion)
    if system.reflection_mode == "penalty":
        b = b + penalty_reflection_drift(x, system.box, system.penalty_gain)
    return b


def drift_field(states: np.ndarray, system: SystemSpec) -> np.ndarray:
    """Vectorized drift for all agents at once.

    states has shape (..., N, 2) with arbitrary leading batch axes (e.g.
    independent ensemble members); returns the same shape.  Matches
    ``drift`` exactly: the pairwise sum runs over j in increasing order.
    """
    x = np.asarray(states, dtype=float)
    goals = system.goals()
    gains = system.gains()[:, None]
    b = gains * (goals - x)
    rep = system.repulsion
    if rep.strength > 0 and system.n_agents > 1:
        for i in range(system.n_agents):
            # same accumulation order as `drift`: goal term first, then j ascending
            bi = b[..., i, :]
            for j in range(system.n_agents):
                if j == i:
                    continue
                d = x[..., i, :] - x[..., j, :]
                bi = bi + rep.strength * d / (
                    np.sum(d * d, axis=-1, keepdims=True) + rep.softening
                ) ** 1.5
            b[..., i, :] = bi
    if system.reflection_mode == "penalty":
        g = system.penalty_gain
        b += g * np.maximum(0.0, system.box.lower - x)
        b -= g * np.maximum(0.0, x - system.box.upper)
    return b


def drift_sup_bound(system: SystemSpec) -> np.ndarray:
    """Per-agent upper bound on sup |b_i| over the box (penalty term excluded).

    Goal attraction is bounded by gain times the largest distance from the
    goal to a box corner; each pairwise force is bounded by
    repulsion_force_bound.  Used to flag rate clamping in the queue engine.
    """
    lo, hi = system.box.lower, system.box.upper
    corners = np.array([[cx, cy] for cx in (lo[0], hi[0]) for cy in (lo[1], hi[1])])
    f_max = repulsion_force_bound(system.repulsion)
    out = np.empty(system.n_agents)
    for i, a in enumerate(system.agents):
        reach = np.max(np.linalg.norm(corners - a.goal, axis=1))
        out[i] = a.gain * reach + (system.n_agents - 1) * f_max
    return out
