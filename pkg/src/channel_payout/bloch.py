"""Qubit states, channels and entropies in the Bloch-vector picture.

A qubit density operator rho = (I + r.sigma)/2 is stored as its real
Bloch vector r, a measurement effect E = e0*I + e.sigma as the pair
(e0, e), and a channel as the affine Bloch map r -> M r + t plus a
human-readable label.  The built-in channels (depolarizing, splaying,
King-Nathanson-Ruskai) are all of this affine form, so nothing beyond
(M, t) is ever needed by the optimizers; Kraus operators are available
as a derived view via the Choi eigendecomposition.

Complete positivity is validated through the Choi matrix.  The Choi
matrix here uses the unnormalized convention: it is (id (x) N) applied
to the projector onto |00> + |11>, so a qubit channel has Choi trace 2.
Both conventions (trace 2 and trace 1) appear in the literature.

Entropies are in bits, with the 0*log(0) = 0 convention throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-9    # Bloch-ball membership / purity slack
PSD_TOL = 1e-10    # positive-semidefiniteness slack

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
PAULI = (_SX, _SY, _SZ)


@dataclass(frozen=True)
class BlochVector:
    """A qubit state as a real 3-vector with norm at most 1."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if n > 1.0 + NORM_TOL:
            raise ValueError(f"Bloch vector norm {n} exceeds 1")

    @classmethod
    def from_angles(cls, alpha: float, beta: float) -> "BlochVector":
        """Pure state from spherical angles, r = (cos a sin b, sin a sin b, cos b)."""
        return cls(math.cos(alpha) * math.sin(beta),
                   math.sin(alpha) * math.sin(beta),
                   math.cos(beta))

    @classmethod
    def from_array(cls, r) -> "BlochVector":
        r = np.asarray(r, dtype=float)
        return cls(float(r[0]), float(r[1]), float(r[2]))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    @property
    def is_pure(self) -> bool:
        return abs(self.norm - 1.0) <= NORM_TOL

    def dot(self, other: "BlochVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def matrix(self) -> np.ndarray:
        """Density matrix (I + r.sigma)/2."""
        return 0.5 * (_I2 + self.x * _SX + self.y * _SY + self.z * _SZ)


@dataclass(frozen=True, eq=False)
class Effect:
    """A POVM element E = e0*I + e.sigma with 0 <= E <= I.

    Positivity requires e0 >= |e| and boundedness below the identity
    requires 1 - e0 >= |e|; both are enforced with PSD_TOL slack.  The
    zero operator (e0 = 0, e = 0) is a valid effect.
    """

    e0: float
    e: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float).reshape(3).copy()
        e.flags.writeable = False
        object.__setattr__(self, "e", e)
        ne = float(np.linalg.norm(e))
        if self.e0 < ne - PSD_TOL:
            raise ValueError(f"effect not positive: e0={self.e0}, |e|={ne}")
        if 1.0 - self.e0 < ne - PSD_TOL:
            raise ValueError(f"effect exceeds identity: e0={self.e0}, |e|={ne}")

    @classmethod
    def zero(cls) -> "Effect":
        return cls(0.0, np.zeros(3))

    @classmethod
    def identity(cls) -> "Effect":
        return cls(1.0, np.zeros(3))

    @classmethod
    def projector(cls, direction) -> "Effect":
        """Rank-1 projector (I + n.sigma)/2 onto the unit vector n."""
        n = np.asarray(direction, dtype=float)
        nn = np.linalg.norm(n)
        if abs(nn - 1.0) > NORM_TOL:
            raise ValueError("projector direction must be a unit vector")
        return cls(0.5, 0.5 * n / nn)

    def expectation(self, state: BlochVector) -> float:
        """Tr[E rho] = e0 + e.r."""
        return self.e0 + float(self.e @ state.vec)

    def matrix(self) -> np.ndarray:
        return self.e0 * _I2 + self.e[0] * _SX + self.e[1] * _SY + self.e[2] * _SZ


@dataclass(frozen=True, eq=False)
class QubitChannel:
    """Affine Bloch map r -> M r + t.

    Instances built by the module constructors are CPTP-validated; raw
    (M, t) pairs may be wrapped directly for diagnostics such as
    choi/is_cptp on maps that are not channels.
    """

    m: np.ndarray
    t: np.ndarray
    label: str = "channel"

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float).reshape(3, 3).copy()
        t = np.asarray(self.t, dtype=float).reshape(3).copy()
        m.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "t", t)

    @property
    def is_unital(self) -> bool:
        return bool(np.linalg.norm(self.t) <= NORM_TOL)


# ---------------------------------------------------------------------------
# built-in channels
# ---------------------------------------------------------------------------

def depolarizing(p: float) -> QubitChannel:
    """Depolarizing channel rho -> p I/2 + (1-p) rho; shrinks the ball by 1-p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {p}")
    return QubitChannel((1.0 - p) * np.eye(3), np.zeros(3), f"depolarizing(p={p:g})")


def splaying() -> QubitChannel:
    """Non-unital channel mapping the sphere onto a displaced flat ellipse.

    The image of a pure state with Bloch vector (x, y, z) is
    ((1 + x)/3, sqrt(3) y / 3, 0), i.e. M = diag(1/3, sqrt(3)/3, 0) with
    translation (1/3, 0, 0).
    """
    m = np.diag([1.0 / 3.0, math.sqrt(3.0) / 3.0, 0.0])
    ch = QubitChannel(m, np.array([1.0 / 3.0, 0.0, 0.0]), "splaying")
    assert is_cptp(ch), "splaying construction is not CPTP"
    return ch


def knr(mu: float, s: float) -> QubitChannel:
    """King-Nathanson-Ruskai channel, M = diag(s, s, mu), t = (0, 0, 1-mu).

    Requires 0 <= mu <= 1 and mu <= s <= sqrt(mu); the north pole is a
    fixed point.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if not mu - 1e-12 <= s <= math.sqrt(mu) + 1e-12:
        raise ValueError(f"s must satisfy mu <= s <= sqrt(mu), got mu={mu}, s={s}")
    ch = QubitChannel(np.diag([s, s, mu]), np.array([0.0, 0.0, 1.0 - mu]),
                      f"knr(mu={mu:g},s={s:g})")
    assert is_cptp(ch), "KNR construction is not CPTP"
    return ch


# ---------------------------------------------------------------------------
# channel action
# ---------------------------------------------------------------------------

def apply(channel: QubitChannel, state: BlochVector) -> BlochVector:
    """Schroedinger-picture action, r -> M r + t."""
    return BlochVector.from_array(channel.m @ state.vec + channel.t)


def adjoint_apply(channel: QubitChannel, effect: Effect) -> Effect:
    """Heisenberg-picture dual: Tr[E N(rho)] = Tr[N*(E) rho] for all rho.

    For E = e0*I + e.sigma the dual effect is (e0 + e.t, M^T e).
    """
    return Effect(effect.e0 + float(effect.e @ channel.t), channel.m.T @ effect.e)


def _apply_to_matrix(channel: QubitChannel, op: np.ndarray) -> np.ndarray:
    # Linear extension of the affine Bloch action to arbitrary 2x2 operators:
    # A = a0 I + a.sigma (a complex) maps to a0 I + (M a + a0 t).sigma.
    a0 = 0.5 * np.trace(op)
    a = np.array([0.5 * np.trace(op @ s) for s in PAULI])
    out = channel.m @ a + a0 * channel.t
    return a0 * _I2 + out[0] * _SX + out[1] * _SY + out[2] * _SZ


def choi(channel: QubitChannel) -> np.ndarray:
    """Choi matrix (id (x) N)(|Omega><Omega|), unnormalized to trace 2."""
    c = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            basis = np.zeros((2, 2), dtype=complex)
            basis[i, j] = 1.0
            c += np.kron(basis, _apply_to_matrix(channel, basis))
    return c


def is_cptp(channel: QubitChannel, tol: float = PSD_TOL) -> bool:
    """True iff the Choi matrix is PSD and the map preserves the trace."""
    j = choi(channel)
    if np.max(np.abs(j - j.conj().T)) > tol:
        return False
    if float(np.linalg.eigvalsh(0.5 * (j + j.conj().T))[0]) < -tol:
        return False
    # tracing out the channel output must leave the identity on the input side
    reduced = np.einsum("imjm->ij", j.reshape(2, 2, 2, 2))
    return bool(np.max(np.abs(reduced - np.eye(2))) <= tol)


def kraus_operators(channel: QubitChannel, tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators recovered from the Choi eigendecomposition."""
    j = choi(channel)
    vals, vecs = np.linalg.eigh(0.5 * (j + j.conj().T))
    ops = []
    for lam, v in zip(vals[::-1], vecs.T[::-1]):
        if lam > tol:
            ops.append(math.sqrt(lam) * v.reshape(2, 2).T)
    return ops


def image_diameter(channel: QubitChannel) -> float:
    """Diameter of the channel image of the Bloch ball, 2 * sigma_max(M)."""
    return 2.0 * float(np.linalg.svd(channel.m, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# entropies (bits)
# ---------------------------------------------------------------------------

def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def binary_entropy(q: float) -> float:
    """H_b(q) = -q log2 q - (1-q) log2(1-q)."""
    if q < -1e-12 or q > 1.0 + 1e-12:
        raise ValueError(f"binary entropy argument outside [0, 1]: {q}")
    q = min(max(q, 0.0), 1.0)
    return -_xlog2x(q) - _xlog2x(1.0 - q)


def shannon_entropy(probs) -> float:
    """Entropy of a probability vector in bits."""
    p = np.asarray(probs, dtype=float)
    if np.any(p < -1e-12):
        raise ValueError("negative probability")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise ValueError(f"probabilities sum to {p.sum()}, not 1")
    p = np.clip(p, 0.0, 1.0)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def von_neumann_entropy(state: BlochVector) -> float:
    """S(rho) for a qubit, equal to H_b((1 + |r|)/2)."""
    return binary_entropy(0.5 * (1.0 + min(state.norm, 1.0)))
