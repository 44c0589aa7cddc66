"""Separable pure product states, their canonical (alpha, beta) form, and
the diagonal-vs-product mixed pairs used for the necessity bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import HermitianMatrix, tensor

NORM_TOL = 1e-12
PURITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise ValueError("amplitudes must be a nonempty finite vector")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(v / np.linalg.norm(v))

    @classmethod
    def basis(cls, d: int, k: int) -> "PureState":
        v = np.zeros(d, dtype=complex)
        v[k] = 1.0
        return cls(v)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> HermitianMatrix:
        return HermitianMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class PureProductState:
    a: PureState
    b: PureState

    @property
    def dims(self) -> tuple[int, int]:
        return self.a.dim, self.b.dim

    def vector(self) -> np.ndarray:
        return np.kron(self.a.amplitudes, self.b.amplitudes)


@dataclass(frozen=True, eq=False)
class CanonicalPair:
    """Two product states written as ``|0><0| ⊗ |0><0|`` and
    ``[[1-a1, b1], [b1, a1]] ⊗ [[1-a2, b2], [b2, a2]]`` in orthonormal
    2-frames of the original spaces.

    ``frame_a`` is a ``d_A x 2`` matrix whose columns are the frame vectors
    (likewise ``frame_b``).  Pairs built from scratch use the standard basis.
    """

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    frame_a: np.ndarray
    frame_b: np.ndarray

    def __post_init__(self):
        for name in ("alpha1", "alpha2"):
            val = getattr(self, name)
            if not -1e-12 <= val <= 1 + 1e-12:
                raise ValueError(f"{name}={val} outside [0, 1]")
        for alpha, beta in ((self.alpha1, self.beta1), (self.alpha2, self.beta2)):
            if beta < 0 or abs(beta * beta - alpha * (1 - alpha)) > PURITY_TOL:
                raise ValueError(f"beta={beta} inconsistent with a pure state at alpha={alpha}")

    @classmethod
    def from_alphas(cls, alpha1: float, alpha2: float) -> "CanonicalPair":
        return cls(
            alpha1,
            alpha2,
            math.sqrt(alpha1 * (1 - alpha1)),
            math.sqrt(alpha2 * (1 - alpha2)),
            np.eye(2, dtype=complex),
            np.eye(2, dtype=complex),
        )

    @property
    def gamma(self) -> float:
        return self.alpha1 + self.alpha2

    @property
    def embed_dims(self) -> tuple[int, int]:
        return self.frame_a.shape[0], self.frame_b.shape[0]

    def trace_overlap(self) -> float:
        """``Tr rho1 rho2 = (1 - a1)(1 - a2)``."""
        return (1 - self.alpha1) * (1 - self.alpha2)

    def local_states(self) -> tuple[PureProductState, PureProductState]:
        """The pair on the canonical 2x2 subspace."""
        s1 = PureProductState(PureState.basis(2, 0), PureState.basis(2, 0))
        s2 = PureProductState(
            PureState([math.sqrt(1 - self.alpha1), math.sqrt(self.alpha1)]),
            PureState([math.sqrt(1 - self.alpha2), math.sqrt(self.alpha2)]),
        )
        return s1, s2

    def densities(self) -> tuple[HermitianMatrix, HermitianMatrix]:
        """Both states as 4x4 densities on the canonical 2x2 subspace."""
        r1 = tensor(HermitianMatrix(np.diag([1.0, 0.0])), HermitianMatrix(np.diag([1.0, 0.0])))
        r2 = tensor(
            HermitianMatrix([[1 - self.alpha1, self.beta1], [self.beta1, self.alpha1]]),
            HermitianMatrix([[1 - self.alpha2, self.beta2], [self.beta2, self.alpha2]]),
        )
        return r1, r2


@dataclass(frozen=True)
class ProductMixedState:
    """A pair ``diag(1-p1, p1) ⊗ diag(1-p2, p2)`` versus the (alpha, beta) product.

    Unlike :class:`CanonicalPair` the betas only need ``beta^2 <= alpha(1-alpha)``.
    """

    p1: float
    p2: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("p1", "p2", "alpha1", "alpha2"):
            val = getattr(self, name)
            if not 0 <= val <= 1:
                raise ValueError(f"{name}={val} outside [0, 1]")
        for alpha, beta in ((self.alpha1, self.beta1), (self.alpha2, self.beta2)):
            if beta < 0 or beta * beta > alpha * (1 - alpha) + 1e-12:
                raise ValueError(f"beta={beta} too large for alpha={alpha}")

    @classmethod
    def from_canonical(cls, c: CanonicalPair) -> "ProductMixedState":
        return cls(0.0, 0.0, c.alpha1, c.alpha2, c.beta1, c.beta2)


def mixed_density(m: ProductMixedState) -> tuple[HermitianMatrix, HermitianMatrix]:
    rho1 = tensor(HermitianMatrix(np.diag([1 - m.p1, m.p1])), HermitianMatrix(np.diag([1 - m.p2, m.p2])))
    rho2 = tensor(
        HermitianMatrix([[1 - m.alpha1, m.beta1], [m.beta1, m.alpha1]]),
        HermitianMatrix([[1 - m.alpha2, m.beta2], [m.beta2, m.alpha2]]),
    )
    return rho1, rho2


def density(s: PureProductState) -> HermitianMatrix:
    """``|a><a| ⊗ |b><b|`` with bipartite dims."""
    return tensor(s.a.projector(), s.b.projector())


def overlap(u: PureState, v: PureState) -> float:
    """``|<u|v>|^2``, i.e. ``Tr |u><u| |v><v|``."""
    if u.dim != v.dim:
        raise ValueError("states live in different dimensions")
    return float(abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2)


def _frame(u1: np.ndarray, u2: np.ndarray):
    """Orthonormal 2-frame ``(u1, e)`` with ``u2 = phase * (sqrt(1-a) u1 + sqrt(a) e)``.

    Returns ``(frame, alpha, beta)``.
    """
    c = np.vdot(u1, u2)
    resid = u2 - c * u1
    rnorm = np.linalg.norm(resid)
    if rnorm > 1e-15:
        phase = c / abs(c) if abs(c) > 0 else 1.0
        e = resid / rnorm * np.conj(phase)
        # re-orthogonalize once; resid can be tiny
        e = e - np.vdot(u1, e) * u1
        e = e / np.linalg.norm(e)
        alpha = float(rnorm**2)
    else:
        for k in range(u1.size):
            cand = np.zeros(u1.size, dtype=complex)
            cand[k] = 1.0
            cand = cand - np.vdot(u1, cand) * u1
            if np.linalg.norm(cand) > 1e-3:
                e = cand / np.linalg.norm(cand)
                break
        alpha = 0.0
    alpha = min(max(alpha, 0.0), 1.0)
    one_minus = float(abs(c) ** 2)
    beta = math.sqrt(one_minus) * math.sqrt(alpha)
    if abs(one_minus - (1 - alpha)) > PURITY_TOL:
        raise ValueError("input vectors are not consistent with normalized pure states")
    return np.column_stack([u1, e]), alpha, beta


def canonicalize(s1: PureProductState, s2: PureProductState) -> CanonicalPair:
    """Reduce a pair of product states to its canonical 2x2 form.

    The first frame vector on each side is the first state's factor; the
    second absorbs the relative phase so that ``beta >= 0``.  When the two
    factors are parallel the frame is completed with the lowest-index
    standard basis vector that is not parallel to ``u1``.
    """
    if s1.dims != s2.dims:
        raise ValueError(f"dimension mismatch: {s1.dims} vs {s2.dims}")
    d_a, d_b = s1.dims
    if d_a < 2 or d_b < 2:
        raise ValueError("both local dimensions must be at least 2")
    frame_a, a1, b1 = _frame(s1.a.amplitudes, s2.a.amplitudes)
    frame_b, a2, b2 = _frame(s1.b.amplitudes, s2.b.amplitudes)
    return CanonicalPair(a1, a2, b1, b2, frame_a, frame_b)


def from_bloch(theta_a: float, theta_b: float) -> CanonicalPair:
    """Canonical pair whose second state sits at polar angles ``theta_a``,
    ``theta_b`` from ``|0>`` on the two Bloch spheres."""
    for th in (theta_a, theta_b):
        if not 0 <= th <= math.pi:
            raise ValueError(f"angle {th} outside [0, pi]")
    sa, ca = math.sin(theta_a / 2), math.cos(theta_a / 2)
    sb, cb = math.sin(theta_b / 2), math.cos(theta_b / 2)
    return CanonicalPair(sa * sa, sb * sb, sa * ca, sb * cb, np.eye(2, dtype=complex), np.eye(2, dtype=complex))


def bloch_angle(alpha: float) -> float:
    """Inverse of ``alpha = sin^2(theta / 2)`` on ``[0, pi]``."""
    return 2.0 * math.asin(math.sqrt(min(max(alpha, 0.0), 1.0)))


def canonical_state(alpha1: float, alpha2: float) -> PureProductState:
    """``(sqrt(1-a1), sqrt(a1)) ⊗ (sqrt(1-a2), sqrt(a2))``; ``(0, 0)`` gives ``|00>``."""
    return PureProductState(
        PureState([math.sqrt(1 - alpha1), math.sqrt(alpha1)]),
        PureState([math.sqrt(1 - alpha2), math.sqrt(alpha2)]),
    )


def _haar_vector(rng: np.random.Generator, d: int) -> PureState:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState(v / np.linalg.norm(v))


def random_pure_product(seed, d_a: int, d_b: int) -> PureProductState:
    """Product of two independent unitarily invariant unit vectors.

    ``seed`` may be an int or a ``numpy.random.Generator`` (advanced in place).
    """
    if d_a < 1 or d_b < 1:
        raise ValueError("dimensions must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return PureProductState(_haar_vector(rng, d_a), _haar_vector(rng, d_b))
