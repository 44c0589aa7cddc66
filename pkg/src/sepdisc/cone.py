"""Membership in the dual of the separable cone, and the symmetrized
``T + Γ(T)`` analysis of two-outcome perfect measurements.

Two membership routes are provided.  A decomposition certificate
``Y = T + Γ(T')`` with ``T, T'`` positive semi-definite proves membership
outright.  Without one, :func:`block_positivity_min` runs a multi-start
see-saw over product vectors: a negative value comes with the product vector
achieving it (a sound non-membership witness), while a non-negative value is
only strong evidence of membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .effects import Effect, Measurement
from .linalg import (
    HermitianMatrix,
    as_hermitian,
    eig_hermitian,
    frobenius_norm,
    identity,
    partial_transpose,
    trace_product,
)
from .states import ProductMixedState, PureProductState, PureState, mixed_density

DEFAULT_TOL = 1e-8
DEFAULT_RESTARTS = 24
DEFAULT_ITERS = 200
STATIONARY_TOL = 1e-12
GRID_STARTS = 12


class PatternError(ValueError):
    """A matrix does not have the structure required by the T-parameterization."""


class NotPerfectError(ValueError):
    """The measurement does not discriminate the pair perfectly."""


@dataclass(frozen=True)
class ConeMembership:
    """Outcome of a dual-cone membership test.

    For ``method="see_saw"`` ``min_product_value`` is the smallest
    ``<a⊗b|Y|a⊗b>`` found and ``witness`` the product vector attaining it.
    For ``method="certificate"`` it is a rigorous lower bound on that minimum.
    """

    member: bool
    min_product_value: float
    method: str
    witness: PureProductState | None = None
    converged: bool = True


def _lowest(h: np.ndarray):
    """Smallest eigenpair of a small Hermitian matrix (closed form at 2x2)."""
    if h.shape[0] == 2:
        a, d, b = h[0, 0].real, h[1, 1].real, h[0, 1]
        rad = math.hypot(0.5 * (a - d), abs(b))
        lam = 0.5 * (a + d) - rad
        if rad == 0.0:
            return lam, np.array([1.0 + 0j, 0.0])
        # null vectors of the two rows of (h - lam); keep the larger one
        v1 = np.array([b, lam - a + 0j])
        v2 = np.array([d - lam + 0j, -b.conjugate()])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        return lam, v / np.linalg.norm(v)
    w, vecs = eig_hermitian(h)
    return float(w[0]), vecs[:, 0]


def _contract_b(yt: np.ndarray, a: np.ndarray) -> np.ndarray:
    return np.einsum("i,ikjl,j->kl", a.conj(), yt, a)


def _contract_a(yt: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("k,ikjl,l->ij", b.conj(), yt, b)


def product_expectation(y, a: np.ndarray, b: np.ndarray) -> float:
    """``<a⊗b|Y|a⊗b>`` for bipartite ``Y``."""
    y = as_hermitian(y)
    v = np.kron(a, b)
    return float(np.real(np.vdot(v, y.data @ v)))


def see_saw(y: HermitianMatrix, a0: np.ndarray, iters: int = DEFAULT_ITERS):
    """One see-saw run from the A-side vector ``a0``.

    Returns ``(value, a, b, history, converged)`` where ``history`` holds the
    objective after every half-step.  Each half-step minimizes exactly over
    one factor, so ``history`` is non-increasing.
    """
    d_a, d_b = y.dims
    yt = y.data.reshape(d_a, d_b, d_a, d_b)
    a = np.asarray(a0, dtype=complex)
    a = a / np.linalg.norm(a)
    history = []
    prev = math.inf
    converged = False
    b = None
    for _ in range(iters):
        _, b = _lowest(_contract_b(yt, a))
        history.append(float(np.real(np.vdot(a, _contract_a(yt, b) @ a))))
        val, a = _lowest(_contract_a(yt, b))
        history.append(float(val))
        if prev - val < STATIONARY_TOL:
            converged = True
            break
        prev = val
    value = product_expectation(y, a, b)
    return value, a, b, history, converged


def _grid_starts(d: int, count: int = GRID_STARTS) -> list[np.ndarray]:
    if d == 1:
        return [np.ones(1, dtype=complex)]
    if d == 2:
        phi = (1 + math.sqrt(5)) / 2
        verts = []
        for s1 in (1, -1):
            for s2 in (1, -1):
                verts += [(0, s1, s2 * phi), (s1, s2 * phi, 0), (s2 * phi, 0, s1)]
        out = []
        for x, y, z in verts[:count]:
            r = math.sqrt(x * x + y * y + z * z)
            theta = math.acos(z / r)
            azim = math.atan2(y, x)
            out.append(np.array([math.cos(theta / 2), np.exp(1j * azim) * math.sin(theta / 2)]))
        return out
    out = [np.eye(d, dtype=complex)[k] for k in range(d)]
    phases = (1, 1j, -1, -1j)
    for j in range(d):
        for k in range(j + 1, d):
            for w in phases:
                v = np.zeros(d, dtype=complex)
                v[j], v[k] = 1, w
                out.append(v / math.sqrt(2))
    return out[:count]


def block_positivity_min(
    y,
    restarts: int = DEFAULT_RESTARTS,
    iters: int = DEFAULT_ITERS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> ConeMembership:
    """Minimize ``<a⊗b|Y|a⊗b>`` over unit product vectors by alternating
    exact eigen-minimizations.

    The first ``min(restarts, 12)`` starts are a fixed grid on the A-side
    sphere (icosahedron vertices for qubits); the rest are seeded random.
    """
    y = as_hermitian(y)
    if y.dims is None:
        raise ValueError("block positivity needs bipartite dims")
    d_a, d_b = y.dims
    starts = _grid_starts(d_a, min(restarts, GRID_STARTS))
    rng = np.random.default_rng(seed)
    while len(starts) < restarts:
        v = rng.normal(size=d_a) + 1j * rng.normal(size=d_a)
        starts.append(v / np.linalg.norm(v))
    best = None
    all_converged = True
    for a0 in starts:
        value, a, b, _, converged = see_saw(y, a0, iters)
        all_converged &= converged
        if best is None or value < best[0]:
            best = (value, a, b)
    value, a, b = best
    witness = PureProductState(PureState(a / np.linalg.norm(a)), PureState(b / np.linalg.norm(b)))
    return ConeMembership(value >= -tol, value, "see_saw", witness, all_converged)


def verify_certificate(y, t, tprime, tol: float = DEFAULT_TOL) -> ConeMembership:
    """Check ``Y = T + Γ(T')`` with ``T, T'`` positive semi-definite.

    The reported value ``λmin(T) + λmin(T') - ||Y - T - Γ(T')||_F`` bounds
    every product expectation of ``Y`` from below.
    """
    y, t, tprime = as_hermitian(y), as_hermitian(t), as_hermitian(tprime)
    if not (y.dim == t.dim == tprime.dim):
        raise ValueError("certificate dimensions do not match")
    dims = y.dims or t.dims or tprime.dims
    if dims is None:
        raise ValueError("certificate check needs bipartite dims")
    t, tprime, y = t.with_dims(dims), tprime.with_dims(dims), y.with_dims(dims)
    mismatch = frobenius_norm(y - (t + partial_transpose(tprime)))
    lam_t = float(eig_hermitian(t)[0][0])
    lam_tp = float(eig_hermitian(tprime)[0][0])
    ok = (
        mismatch <= tol * max(1.0, frobenius_norm(y))
        and lam_t >= -tol * max(1.0, frobenius_norm(t))
        and lam_tp >= -tol * max(1.0, frobenius_norm(tprime))
    )
    return ConeMembership(ok, lam_t + lam_tp - mismatch, "certificate")


def is_in_dual_cone(y, tol: float = DEFAULT_TOL, certificate=None, seed: int = 0) -> ConeMembership:
    """Dual-cone membership of ``y`` (a matrix or an :class:`Effect`).

    Uses the certificate when one is supplied or attached to the effect,
    otherwise the see-saw with 24 restarts and 200 iterations.
    """
    if isinstance(y, Effect):
        certificate = certificate or y.certificate
        y = y.matrix
    if certificate is not None:
        return verify_certificate(y, certificate[0], certificate[1], tol)
    return block_positivity_min(y, DEFAULT_RESTARTS, DEFAULT_ITERS, tol, seed)


def symmetrize(effects) -> list[Effect]:
    """Replace each ``S + Γ(S')`` by ``T + Γ(T)`` with ``T = (S + S') / 2``.

    The statistics on any Γ-invariant state are unchanged.
    """
    out = []
    for e in effects:
        if e.certificate is None:
            raise ValueError("symmetrize needs a certificate on every effect")
        s, sp = e.certificate
        dims = e.matrix.dims or s.dims
        t = ((s + sp) * 0.5).with_dims(dims)
        out.append(Effect.from_certificate(t, t))
    return out


@dataclass(frozen=True)
class TParams:
    """``T = I/2 + diag(x1, x2) ⊗ σ_y + [[0, -z], [z̄, 0]] ⊗ [[0, 1], [-1, 0]]``."""

    x1: float
    x2: float
    z: complex


def extract_T_params(t, tol: float = 1e-9) -> TParams:
    """Read ``(x1, x2, z)`` off a 4x4 ``T`` with ``T + Γ(T) = I``.

    The zero pattern is checked, not projected onto: a mis-shaped ``T``
    raises :class:`PatternError`.
    """
    t = as_hermitian(t)
    if t.dim != 4:
        raise PatternError("T-parameterization is defined for 4x4 matrices only")
    t = t.with_dims((2, 2))
    resid = frobenius_norm(t + partial_transpose(t) - identity(2, 2))
    if resid > tol:
        raise PatternError(f"T + Γ(T) differs from I by {resid:.3e}")
    m = t.data
    for i, j in ((0, 2), (1, 3)):
        if abs(m[i, j]) > tol:
            raise PatternError(f"entry ({i + 1},{j + 1}) should vanish, got {m[i, j]}")
    for i in range(4):
        if abs(m[i, i] - 0.5) > tol:
            raise PatternError(f"diagonal entry {i + 1} should be 1/2, got {m[i, i]}")
    for i, j in ((0, 1), (2, 3)):
        if abs(m[i, j].real) > tol:
            raise PatternError(f"entry ({i + 1},{j + 1}) should be purely imaginary, got {m[i, j]}")
    z = -m[0, 3]
    if abs(m[1, 2] - z) > tol:
        raise PatternError(f"entries (1,4) and (2,3) should be -z and z, got {m[0, 3]} and {m[1, 2]}")
    x1 = float((1j * m[0, 1]).real)
    x2 = float((1j * m[2, 3]).real)
    return TParams(x1, x2, complex(z))


@dataclass(frozen=True)
class NecessityReport:
    trace_overlap: float
    bound: float
    satisfied: bool
    pure_condition: float | None = None


def necessity_bound(m: ProductMixedState) -> NecessityReport:
    """Evaluate ``Tr rho1 rho2 <= beta1 beta2 |(2p1-1)(2p2-1)|``.

    Any perfectly distinguishable pair satisfies it; for ``p1 = p2 = 0`` the
    report also carries ``alpha1 + alpha2``, which must then be at least 1.
    """
    rho1, rho2 = mixed_density(m)
    overlap = trace_product(rho1, rho2)
    bound = m.beta1 * m.beta2 * abs((2 * m.p1 - 1) * (2 * m.p2 - 1))
    pure = m.alpha1 + m.alpha2 if m.p1 == 0 and m.p2 == 0 else None
    return NecessityReport(overlap, bound, overlap <= bound + 1e-10, pure)


def symmetric_form(effect: Effect) -> Effect:
    """Attach the certificate ``(M/2, M/2)`` to a PSD, Γ-invariant effect."""
    m = effect.matrix
    if frobenius_norm(partial_transpose(m) - m) > 1e-12:
        raise PatternError("effect is not invariant under partial transpose")
    half = m * 0.5
    return Effect(m, (half, half))


def verify_eqH2(m: ProductMixedState, measurement: Measurement, tol: float = 1e-9) -> float:
    """Residual ``|Tr rho1 rho2 - 2 Re(z) beta1 beta2 (2p1-1)(2p2-1)|``.

    ``z`` is read off ``T1 + T2`` after symmetrizing the effect certificates.
    Raises :class:`NotPerfectError` if the measurement does not discriminate
    the pair and :class:`PatternError` if ``T1 + T2`` has the wrong shape.
    """
    from .discrimination import verify_perfect

    if len(measurement) != 2:
        raise ValueError("expected a two-outcome measurement")
    rho1, rho2 = mixed_density(m)
    report = verify_perfect(rho1, rho2, measurement, tol)
    if not report.perfect:
        raise NotPerfectError("measurement does not discriminate the pair perfectly")
    sym = symmetrize(measurement.effects)
    t = sym[0].certificate[0] + sym[1].certificate[0]
    params = extract_T_params(t, tol)
    overlap = trace_product(rho1, rho2)
    predicted = 2 * params.z.real * m.beta1 * m.beta2 * (2 * m.p1 - 1) * (2 * m.p2 - 1)
    return abs(overlap - predicted)
