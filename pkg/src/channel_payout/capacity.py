"""Shannon and Holevo capacities of qubit channels.

The Shannon capacity is the accessible information maximized over both
the signal ensemble and the measurement,

    C_Shan = sup_E sup_POVM [ H(q) - sum_i p_i H(q_i) ],

with q_b = Tr[N(sigma) E_b] the outcome distribution of the average
signal and q_{i,b} = Tr[N(sigma_i) E_b] the per-signal distributions.
The Holevo capacity drops the measurement and uses output von Neumann
entropies,

    C_Hol = sup_E [ S(N(sigma)) - sum_i p_i S(N(sigma_i)) ].

Both are nonconvex maximizations; they are handled by multistart
alternating Nelder-Mead ascent over ensembles of at most four pure
states (probabilities kept on the simplex by Euclidean projection) and,
for the Shannon case, POVMs of at most four rank-one effects with the
final effect absorbing the completeness residual.  For qubits four
elements suffice on both sides (Davies-type bound).  Reported values
are certified lower bounds: the returned witness reproduces the value
through mutual_information / holevo_chi exactly.

All randomness flows from OptimizerConfig.rng_seed through one split
stream per restart, so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .bloch import (BlochVector, Effect, QubitChannel, NORM_TOL, _xlog2x)
from .optim import OptimizerConfig, project_simplex, random_rotation, spawn_rngs

__all__ = [
    "SignalEnsemble", "Povm", "OptimizerConfig", "CapacityEstimate",
    "mutual_information", "holevo_chi", "shannon_capacity",
    "holevo_capacity", "depolarizing_capacity",
]

MAX_SIGNALS = 4
MAX_EFFECTS = 4
COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True)
class SignalEnsemble:
    """Probability-weighted pure input states {p_i, sigma_i}, size 1 to 4."""

    entries: tuple

    def __post_init__(self):
        entries = tuple((float(p), s) for p, s in self.entries)
        object.__setattr__(self, "entries", entries)
        if not 1 <= len(entries) <= MAX_SIGNALS:
            raise ValueError(f"ensemble size must be 1..{MAX_SIGNALS}")
        probs = np.array([p for p, _ in entries])
        if np.any(probs < -1e-12):
            raise ValueError("ensemble probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"ensemble probabilities sum to {probs.sum()}")
        for _, state in entries:
            if not state.is_pure:
                raise ValueError(f"ensemble input {state} is not pure")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.entries])

    @property
    def states(self) -> np.ndarray:
        """Input Bloch vectors stacked as a (k, 3) array."""
        return np.array([s.vec for _, s in self.entries])

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Povm:
    """Positive effects summing to the identity (e0 parts to 1, e parts to 0)."""

    effects: tuple

    def __post_init__(self):
        effects = tuple(self.effects)
        object.__setattr__(self, "effects", effects)
        if len(effects) < 1:
            raise ValueError("POVM needs at least one effect")
        e0_sum = sum(eff.e0 for eff in effects)
        e_sum = np.sum([eff.e for eff in effects], axis=0)
        if abs(e0_sum - 1.0) > COMPLETENESS_TOL:
            raise ValueError(f"POVM effects sum to {e0_sum} on the identity part")
        if np.linalg.norm(e_sum) > COMPLETENESS_TOL:
            raise ValueError(f"POVM vector parts sum to {e_sum}, not zero")

    @property
    def e0s(self) -> np.ndarray:
        return np.array([eff.e0 for eff in self.effects])

    @property
    def evecs(self) -> np.ndarray:
        return np.array([eff.e for eff in self.effects])

    def __len__(self) -> int:
        return len(self.effects)


@dataclass(frozen=True)
class CapacityEstimate:
    """Optimizer output: a certified lower bound plus the witness achieving it."""

    value: float
    witness_ensemble: SignalEnsemble
    witness_povm: Optional[Povm]
    converged: bool
    restarts_used: int

    def __post_init__(self):
        if not -1e-9 <= self.value <= 1.0 + 1e-9:
            raise ValueError(f"qubit capacity {self.value} outside [0, 1]")


# ---------------------------------------------------------------------------
# objectives
# ---------------------------------------------------------------------------

def _entropy_rows(q: np.ndarray) -> np.ndarray:
    # entropy in bits along the last axis, 0 log 0 = 0
    logs = np.log2(q, out=np.zeros_like(q), where=q > 0.0)
    return -(q * logs).sum(axis=-1)


def mutual_information(channel: QubitChannel, ensemble: SignalEnsemble,
                       povm: Povm) -> float:
    """Accessible information of (ensemble, POVM) through the channel in bits.

    Computed as H(q) - sum_i p_i H(q_i) with every outcome probability
    evaluated in Bloch form as e0 + e.f.
    """
    p = ensemble.probabilities
    outs = ensemble.states @ channel.m.T + channel.t
    q = np.clip(outs @ povm.evecs.T + povm.e0s, 0.0, 1.0)
    return float(_entropy_rows(p @ q) - p @ _entropy_rows(q))


def holevo_chi(channel: QubitChannel, ensemble: SignalEnsemble) -> float:
    """Holevo quantity S(N(sigma)) - sum_i p_i S(N(sigma_i)) in bits."""
    p = ensemble.probabilities
    outs = ensemble.states @ channel.m.T + channel.t
    return float(_chi_from_outputs(p, outs))


def _h_b(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    logs = np.log2(x, out=np.zeros_like(x), where=x > 0.0)
    logs1 = np.log2(1.0 - x, out=np.zeros_like(x), where=x < 1.0)
    return -(x * logs) - (1.0 - x) * logs1

def _chi_from_outputs(p: np.ndarray, outs: np.ndarray) -> float:
    avg = np.minimum(np.linalg.norm(p @ outs), 1.0)
    norms = np.minimum(np.linalg.norm(outs, axis=1), 1.0)
    return float(_h_b(np.array(0.5 * (1.0 + avg)))
                 - p @ _h_b(0.5 * (1.0 + norms)))


def depolarizing_capacity(p: float) -> float:
    """Closed-form classical capacity of the depolarizing channel in bits.

    Equals 1 + (1 - p/2) log2(1 - p/2) + (p/2) log2(p/2); the Shannon,
    Holevo and ultimate capacities all coincide for this channel, so the
    same expression serves for every crossover comparison against it.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {p}")
    half = 0.5 * p
    return 1.0 + _xlog2x(1.0 - half) + _xlog2x(half)


# ---------------------------------------------------------------------------
# parametrizations
# ---------------------------------------------------------------------------

def _dirs_from_angles(th: np.ndarray, ph: np.ndarray) -> np.ndarray:
    st = np.sin(th)
    return np.column_stack((st * np.cos(ph), st * np.sin(ph), np.cos(th)))


def _ensemble_from_params(x: np.ndarray, k: int):
    dirs = _dirs_from_angles(x[:k], x[k:2 * k])
    p = project_simplex(x[2 * k:3 * k])
    return p, dirs


def _povm_from_params(y: np.ndarray, m: int):
    """Effects (w_i/2, w_i n_i/2) with weights on the 2-simplex; the final
    effect absorbs the completeness residual.  Returns (e0, evecs, violation),
    violation > 0 meaning the residual effect is not positive."""
    w = 2.0 * project_simplex(y[:m])
    dirs = _dirs_from_angles(y[m:2 * m - 1], y[2 * m - 1:3 * m - 2])
    e0 = np.empty(m)
    ev = np.empty((m, 3))
    e0[:m - 1] = 0.5 * w[:m - 1]
    ev[:m - 1] = 0.5 * w[:m - 1, None] * dirs
    e0[m - 1] = 1.0 - e0[:m - 1].sum()
    ev[m - 1] = -ev[:m - 1].sum(axis=0)
    violation = float(np.linalg.norm(ev[m - 1])) - e0[m - 1]
    return e0, ev, violation


def _mi_value(p, dirs, e0, ev, mt, t) -> float:
    outs = dirs @ mt + t
    q = np.clip(outs @ ev.T + e0, 0.0, 1.0)
    return float(_entropy_rows(p @ q) - p @ _entropy_rows(q))


# ---------------------------------------------------------------------------
# multistart alternating ascent
# ---------------------------------------------------------------------------

# exploration locates basins cheaply; the best restart is then polished
# to full precision, so loose exploration tolerances cost no accuracy
_EXPLORE = {"xatol": 1e-4, "fatol": 1e-8}
_POLISH = {"xatol": 1e-11, "fatol": 1e-14}
_EXPLORE_FEV = 300
_EXPLORE_ROUNDS = 6
_EXPLORE_GAIN = 1e-7
_POLISH_ROUNDS = 12


def _nm_max(fun, x0, maxfev, opts):
    res = minimize(lambda x: -fun(x), x0, method="Nelder-Mead",
                   options={"maxfev": maxfev, "maxiter": maxfev, **opts})
    return res.x, float(-res.fun)


def _init_povm_params(rng, m: int) -> np.ndarray:
    # symmetric frame (antipodal pair / trine / tetrahedron) under a random
    # rotation: always a valid POVM, good coverage of measurement bases
    if m == 2:
        frame = np.array([[0.0, 0.0, 1.0]])
    elif m == 3:
        frame = np.array([[1.0, 0.0, 0.0],
                          [-0.5, math.sqrt(3.0) / 2.0, 0.0]])
    else:
        a = 1.0 / math.sqrt(3.0)
        frame = np.array([[a, a, a], [a, -a, -a], [-a, a, -a]])
    dirs = frame @ random_rotation(rng).T
    th = np.arccos(np.clip(dirs[:, 2], -1.0, 1.0))
    ph = np.arctan2(dirs[:, 1], dirs[:, 0])
    return np.concatenate([np.full(m, 1.0 / m), th, ph])


def _init_ensemble_params(rng, k: int) -> np.ndarray:
    z = rng.uniform(-1.0, 1.0, size=k)
    th = np.arccos(z)
    ph = rng.uniform(0.0, 2.0 * np.pi, size=k)
    return np.concatenate([th, ph, np.full(k, 1.0 / k)])


def _shannon_objective(mt, t, k, m):
    def obj(xv, yv):
        e0, ev, viol = _povm_from_params(yv, m)
        if viol > 1e-12:
            return -(1.0 + viol)
        p, dirs = _ensemble_from_params(xv, k)
        return _mi_value(p, dirs, e0, ev, mt, t)
    return obj


def _shannon_restart(obj, k, m, rng):
    x = _init_ensemble_params(rng, k)
    y = _init_povm_params(rng, m)
    value = obj(x, y)
    for _ in range(_EXPLORE_ROUNDS):
        x, _ = _nm_max(lambda xv: obj(xv, y), x, _EXPLORE_FEV, _EXPLORE)
        y, new = _nm_max(lambda yv: obj(x, yv), y, _EXPLORE_FEV, _EXPLORE)
        gain = new - value
        value = new
        if gain < _EXPLORE_GAIN:
            break
    return value, x, y


def _holevo_restart(obj, k, rng):
    x = _init_ensemble_params(rng, k)
    value = obj(x)
    for _ in range(_EXPLORE_ROUNDS):
        x, new = _nm_max(obj, x, _EXPLORE_FEV, _EXPLORE)
        gain = new - value
        value = new
        if gain < _EXPLORE_GAIN:
            break
    return value, x


def _build_ensemble(x: np.ndarray, k: int) -> SignalEnsemble:
    p, dirs = _ensemble_from_params(x, k)
    keep = p > 1e-9
    p = p[keep] / p[keep].sum()
    dirs = dirs[keep]
    return SignalEnsemble(tuple((pi, BlochVector.from_array(d))
                                for pi, d in zip(p, dirs)))


def _build_povm(y: np.ndarray, m: int) -> Povm:
    e0, ev, viol = _povm_from_params(y, m)
    if viol > 1e-12:
        raise RuntimeError("optimizer returned an infeasible POVM")
    return Povm(tuple(Effect(a, v) for a, v in zip(e0, ev)))


_SHANNON_SIZES = ((2, 2), (2, 2), (3, 3), (4, 4))
_HOLEVO_SIZES = (2, 3, 3, 4)


def shannon_capacity(channel: QubitChannel,
                     config: OptimizerConfig | None = None) -> CapacityEstimate:
    """Best accessible information found by multistart alternating ascent.

    Each restart draws a random ensemble and a random symmetric-frame
    POVM, then alternates cheap Nelder-Mead steps on the ensemble block
    and the POVM block to locate a basin; the best restart is polished
    by further alternation with tight stopping criteria.  The value is a
    lower bound on the capacity; non-convergence is reported through the
    flag, never by raising.
    """
    cfg = config or OptimizerConfig()
    mt, t = channel.m.T.copy(), channel.t.copy()
    rngs = spawn_rngs(cfg.rng_seed, cfg.restarts)
    # keep the best restart of every (ensemble size, POVM size) class and
    # polish each: alternation converges at very different rates in the
    # differently sized parametrizations, so the best explored value does
    # not always polish best
    best_by_class: dict = {}
    for i in range(cfg.restarts):
        k, m = _SHANNON_SIZES[i % len(_SHANNON_SIZES)]
        obj = _shannon_objective(mt, t, k, m)
        val, x, y = _shannon_restart(obj, k, m, rngs[i])
        cur = best_by_class.get((k, m))
        if cur is None or val > cur[0]:
            best_by_class[(k, m)] = (val, x, y)
    best = None
    for (k, m) in sorted(best_by_class):
        val, x, y = best_by_class[(k, m)]
        obj = _shannon_objective(mt, t, k, m)
        gain = np.inf
        for _ in range(_POLISH_ROUNDS):
            x, _ = _nm_max(lambda xv: obj(xv, y), x, cfg.max_iterations, _POLISH)
            y, pval = _nm_max(lambda yv: obj(x, yv), y, cfg.max_iterations, _POLISH)
            gain = pval - val
            val = max(val, pval)
            if gain < 1e-13:
                break
        if best is None or val > best[0]:
            best = (val, x, y, k, m, gain)
    val, x, y, k, m, gain = best
    ens = _build_ensemble(x, k)
    povm = _build_povm(y, m)
    return CapacityEstimate(mutual_information(channel, ens, povm),
                            ens, povm, gain < cfg.tolerance, cfg.restarts)


def holevo_capacity(channel: QubitChannel,
                    config: OptimizerConfig | None = None) -> CapacityEstimate:
    """Best Holevo chi over pure-state ensembles, multistart local ascent.

    Same restart and polish scheme as shannon_capacity but with a single
    parameter block (state angles plus simplex-projected probabilities);
    no POVM is involved, so witness_povm is None.  After polishing, the
    witness is reduced to the smallest ensemble that still attains the
    value (optimal ensembles need not be unique, e.g. for axially
    symmetric channels), so reduction never costs more than 1e-10 bits.
    """
    cfg = config or OptimizerConfig()
    mt, t = channel.m.T.copy(), channel.t.copy()
    rngs = spawn_rngs(cfg.rng_seed, cfg.restarts)
    best = None
    for i in range(cfg.restarts):
        k = _HOLEVO_SIZES[i % len(_HOLEVO_SIZES)]
        obj = _holevo_objective(mt, t, k)
        val, x = _holevo_restart(obj, k, rngs[i])
        if best is None or val > best[0]:
            best = (val, x, k)
    val, x, k = best
    val, x, gain = _holevo_polish(mt, t, k, x, val, cfg)
    val, x, k = _reduce_holevo_witness(mt, t, k, x, val, cfg)
    ens = _build_ensemble(x, k)
    return CapacityEstimate(holevo_chi(channel, ens), ens, None,
                            gain < cfg.tolerance, cfg.restarts)


def _holevo_objective(mt, t, k):
    def obj(xv):
        p, dirs = _ensemble_from_params(xv, k)
        return _chi_from_outputs(p, dirs @ mt + t)
    return obj


def _holevo_polish(mt, t, k, x, val, cfg):
    obj = _holevo_objective(mt, t, k)
    gain = np.inf
    for _ in range(_POLISH_ROUNDS):
        x, pval = _nm_max(obj, x, cfg.max_iterations, _POLISH)
        gain = pval - val
        val = max(val, pval)
        if gain < 1e-12:
            break
    return val, x, gain


def _reduce_holevo_witness(mt, t, k, x, val, cfg):
    """Drop ensemble states whose removal does not lower the polished value."""
    while k > 1:
        p, dirs = _ensemble_from_params(x, k)
        order = np.argsort(p)  # try cheapest state first
        reduced = None
        for drop in order:
            keep = np.ones(k, dtype=bool)
            keep[drop] = False
            pk = p[keep]
            if pk.sum() <= 0.0:
                continue
            pk = pk / pk.sum()
            dk = dirs[keep]
            th = np.arccos(np.clip(dk[:, 2], -1.0, 1.0))
            ph = np.arctan2(dk[:, 1], dk[:, 0])
            x_try = np.concatenate([th, ph, pk])
            v_try, x_try, _ = _holevo_polish(mt, t, k - 1, x_try, -np.inf, cfg)
            if v_try >= val - 1e-10:
                reduced = (max(val, v_try), x_try, k - 1)
                break
        if reduced is None:
            return val, x, k
        val, x, k = reduced
    return val, x, k
