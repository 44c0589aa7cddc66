"""Deciding and realizing perfect discrimination of two product pure states
with measurements whose effects are block-positive."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cone import DEFAULT_TOL as CONE_TOL
from .cone import ConeMembership, is_in_dual_cone
from .effects import Effect, Measurement
from .linalg import HermitianMatrix, trace_product
from .states import (
    CanonicalPair,
    PureProductState,
    PureState,
    canonicalize,
    density,
    overlap,
)

VERDICT_TOL = 1e-12
GAMMA_TOL = 1e-12
DEFAULT_DIM_CAP = 2**12


class NotDistinguishableError(ValueError):
    """No measurement discriminates the given states perfectly."""


@dataclass(frozen=True)
class Verdict:
    sep_distinguishable: bool
    qt_distinguishable: bool
    lhs_sep: float
    lhs_qt: float


def decide_sep(s1: PureProductState, s2: PureProductState) -> Verdict:
    """Compare block-positive and quantum perfect discrimination of two product states.

    With block-positive effects the pair is distinguishable iff the local
    overlaps satisfy ``Tr ρ1^A ρ2^A + Tr ρ1^B ρ2^B <= 1``; with ordinary POVMs
    iff their product vanishes.

    >>> from sepdisc.states import canonical_state
    >>> v = decide_sep(canonical_state(0, 0), canonical_state(0.5, 0.5))
    >>> v.sep_distinguishable, v.qt_distinguishable
    (True, False)
    """
    if s1.dims != s2.dims:
        raise ValueError(f"dimension mismatch: {s1.dims} vs {s2.dims}")
    f_a = overlap(s1.a, s2.a)
    f_b = overlap(s1.b, s2.b)
    lhs_sep = f_a + f_b
    lhs_qt = f_a * f_b
    return Verdict(lhs_sep <= 1 + VERDICT_TOL, lhs_qt <= VERDICT_TOL, lhs_sep, lhs_qt)


def _boundary_pair() -> tuple[HermitianMatrix, HermitianMatrix]:
    t1 = 0.5 * np.array([[1, 0, 0, -1], [0, 0, 0, 0], [0, 0, 0, 0], [-1, 0, 0, 1]], dtype=float)
    t2 = 0.5 * np.array([[0, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 0]], dtype=float)
    return HermitianMatrix(t1, (2, 2)), HermitianMatrix(t2, (2, 2))


def interior_pair(alpha1, alpha2, beta1, beta2) -> tuple[HermitianMatrix, HermitianMatrix]:
    """The PSD pair ``(T1, T2)`` for ``alpha1 + alpha2 > 1``.

    ``T1`` annihilates the second state's vector and ``T2`` the first's, and
    ``T1 + Γ(T1) + T2 + Γ(T2) = I``.
    """
    g = alpha1 + alpha2
    c = beta1 * beta2 * g / (alpha1 * alpha2)
    r1 = (g - 1) * beta1 / alpha1
    r2 = (g - 1) * beta2 / alpha2
    t1 = np.array(
        [
            [g, 0, 0, -c],
            [0, g - 1, 0, -r1],
            [0, 0, g - 1, -r2],
            [-c, -r1, -r2, 2 - g],
        ]
    )
    t2 = np.array(
        [
            [0, 0, 0, 0],
            [0, 1, c, r1],
            [0, c, 1, r2],
            [0, r1, r2, 2 * (g - 1)],
        ]
    )
    return HermitianMatrix(t1 / (2 * g), (2, 2)), HermitianMatrix(t2 / (2 * g), (2, 2))


def construct_measurement(c: CanonicalPair) -> Measurement:
    """Two-outcome measurement on the canonical 2x2 subspace.

    The effects are ``T_i + Γ(T_i)`` with ``T_i`` positive semi-definite,
    carried as the certificate ``(T_i, T_i)``.  At ``alpha1 + alpha2 = 1``
    the constant boundary pair is used; above it the alpha-dependent pair
    from :func:`interior_pair`.
    """
    g = c.gamma
    if g < 1 - GAMMA_TOL:
        raise NotDistinguishableError(f"alpha1 + alpha2 = {g} < 1")
    if abs(g - 1) <= GAMMA_TOL:
        t1, t2 = _boundary_pair()
    else:
        assert c.alpha1 > 0 and c.alpha2 > 0
        t1, t2 = interior_pair(c.alpha1, c.alpha2, c.beta1, c.beta2)
    return Measurement([Effect.from_certificate(t1, t1), Effect.from_certificate(t2, t2)])


def _conjugate(x: HermitianMatrix, w: np.ndarray, dims) -> HermitianMatrix:
    return HermitianMatrix(w @ x.data @ w.conj().T, dims)


def extend_to_full(m: Measurement, c: CanonicalPair) -> Measurement:
    """Carry a measurement from the canonical 2x2 subspace to ``d_A ⊗ d_B``.

    Effects are conjugated by the frame isometry; the projector onto the
    complement of the 2x2 subspace goes to the first effect.  Certificates
    follow along: ``T'`` is conjugated with the B frame complex-conjugated,
    which is what makes ``Γ`` commute with the embedding.
    """
    fa, fb = c.frame_a, c.frame_b
    for f in (fa, fb):
        if np.linalg.norm(f.conj().T @ f - np.eye(2)) > 1e-10:
            raise ValueError("frame is not orthonormal")
    dims = c.embed_dims
    v = np.kron(fa, fb)
    w = np.kron(fa, fb.conj())
    complement = HermitianMatrix(np.eye(v.shape[0]) - v @ v.conj().T, dims)
    effects = []
    for k, e in enumerate(m.effects):
        matrix = _conjugate(e.matrix, v, dims)
        cert = None
        if e.certificate is not None:
            t, tp = e.certificate
            cert = (_conjugate(t, v, dims), _conjugate(tp, w, dims))
        if k == 0:
            matrix = matrix + complement
            if cert is not None:
                cert = (cert[0] + complement, cert[1])
        effects.append(Effect(matrix, cert))
    return Measurement(effects)


def measurement_for(s1: PureProductState, s2: PureProductState) -> Measurement:
    """Canonicalize, construct and embed: a perfect measurement on the full space."""
    c = canonicalize(s1, s2)
    return extend_to_full(construct_measurement(c), c)


@dataclass
class DiscriminationReport:
    """Statistics ``P[i][j] = Tr ρ_i M_j`` plus completeness and per-effect cone status."""

    probability_matrix: list[list[float]]
    completeness_residual: float
    cone_results: list[ConeMembership] = field(default_factory=list)
    tol: float = 1e-9

    @property
    def max_deviation(self) -> float:
        p = np.asarray(self.probability_matrix)
        return float(np.max(np.abs(p - np.eye(*p.shape))))

    @property
    def max_off_diagonal(self) -> float:
        p = np.asarray(self.probability_matrix)
        return float(np.max(np.abs(p - np.diag(np.diag(p))))) if p.size > 1 else 0.0

    @property
    def perfect(self) -> bool:
        return (
            self.max_deviation <= self.tol
            and self.completeness_residual <= self.tol
            and all(r.member for r in self.cone_results)
        )


def verify_family(
    rhos, m: Measurement, tol: float = 1e-9, cone_tol: float = CONE_TOL, seed: int = 0
) -> DiscriminationReport:
    """Check ``Tr ρ_i M_j = δ_ij``, completeness and dual-cone membership of every effect.

    Effects with a certificate are checked through it; the rest go through
    the see-saw, seeded with ``seed``.
    """
    rhos = list(rhos)
    if any(r.dim != m.dim for r in rhos):
        raise ValueError("state and measurement dimensions differ")
    probs = [[trace_product(r, e.matrix) for e in m.effects] for r in rhos]
    cones = [is_in_dual_cone(e, cone_tol, seed=seed) for e in m.effects]
    return DiscriminationReport(probs, m.completeness_residual(), cones, tol)


def verify_perfect(
    rho1, rho2, m: Measurement, tol: float = 1e-9, cone_tol: float = CONE_TOL, seed: int = 0
) -> DiscriminationReport:
    return verify_family([rho1, rho2], m, tol, cone_tol, seed)


def min_copies(f: float) -> int:
    """Smallest ``n >= 1`` with ``2 f**n <= 1``, where ``f = Tr ρ1 ρ2 < 1``.

    >>> min_copies(0.5), min_copies(0.9)
    (1, 7)
    """
    if not 0 <= f < 1:
        raise ValueError(f"overlap must lie in [0, 1), got {f}")
    if f == 0:
        return 1
    n = max(1, math.ceil(math.log(2) / math.log(1 / f)))
    while 2 * f**n > 1:
        n += 1
    while n > 1 and 2 * f ** (n - 1) <= 1:
        n -= 1
    return n


def _power_vector(v: np.ndarray, n: int) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for _ in range(n):
        out = np.kron(out, v)
    return out


def multicopy_states(s1: PureProductState, s2: PureProductState, n: int):
    """``ρ_i^{⊗2n}`` as product states across the split (first n copies | last n copies)."""
    out = []
    for s in (s1, s2):
        side = PureState.normalized(_power_vector(s.vector(), n))
        out.append(PureProductState(side, side))
    return tuple(out)


def multicopy_alpha(f: float, n: int) -> float:
    """Canonical alpha of either side of the n-copy split: ``1 - f**n``."""
    return 1 - f**n


def multicopy_measurement(s1: PureProductState, s2: PureProductState, n: int, dim_cap: int = DEFAULT_DIM_CAP) -> Measurement:
    """Perfect measurement for ``ρ1^{⊗2n}`` versus ``ρ2^{⊗2n}``.

    Needs ``2 f**n <= 1`` and a total dimension ``(d_A d_B)^{2n}`` within
    ``dim_cap``.
    """
    f = overlap(s1.a, s2.a) * overlap(s1.b, s2.b)
    if f >= 1 - 1e-12:
        raise NotDistinguishableError("identical states cannot be discriminated with any number of copies")
    if 2 * f**n > 1 + VERDICT_TOL:
        raise NotDistinguishableError(f"{n} copies per side is below the threshold {min_copies(f)}")
    d = s1.dims[0] * s1.dims[1]
    total = d ** (2 * n)
    if total > dim_cap:
        raise ValueError(f"total dimension {total} exceeds the cap {dim_cap}")
    m1, m2 = multicopy_states(s1, s2, n)
    return measurement_for(m1, m2)


def capacity_family(d_a: int, d_b: int):
    """``d_A d_B`` product basis states and the projective measurement that
    reads them out; every effect is PSD, hence block-positive."""
    if d_a < 1 or d_b < 1:
        raise ValueError("dimensions must be positive")
    states, effects = [], []
    zero = HermitianMatrix(np.zeros((d_a * d_b, d_a * d_b)), (d_a, d_b))
    for i in range(d_a):
        for j in range(d_b):
            s = PureProductState(PureState.basis(d_a, i), PureState.basis(d_b, j))
            states.append(s)
            p = density(s)
            effects.append(Effect(p, (p, zero)))
    return states, Measurement(effects)
