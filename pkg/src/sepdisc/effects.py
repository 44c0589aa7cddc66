"""Measurement effects with optional decomposable-form certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import HermitianMatrix, frobenius_norm, identity, partial_transpose


@dataclass(frozen=True, eq=False)
class Effect:
    """An effect ``matrix``; ``certificate = (T, T')`` claims ``matrix = T + Γ(T')``
    with ``T, T'`` positive semi-definite."""

    matrix: HermitianMatrix
    certificate: tuple[HermitianMatrix, HermitianMatrix] | None = None

    @classmethod
    def from_certificate(cls, t: HermitianMatrix, tprime: HermitianMatrix) -> "Effect":
        return cls(t + partial_transpose(tprime), (t, tprime))

    @property
    def dims(self):
        return self.matrix.dims


@dataclass(frozen=True, eq=False)
class Measurement:
    effects: list[Effect] = field(default_factory=list)

    def __post_init__(self):
        if not self.effects:
            raise ValueError("a measurement needs at least one effect")
        dim = self.effects[0].matrix.dim
        if any(e.matrix.dim != dim for e in self.effects):
            raise ValueError("effects have different dimensions")

    @property
    def dim(self) -> int:
        return self.effects[0].matrix.dim

    @property
    def dims(self):
        return self.effects[0].matrix.dims

    def __len__(self):
        return len(self.effects)

    def __iter__(self):
        return iter(self.effects)

    def __getitem__(self, i) -> Effect:
        return self.effects[i]

    def total(self) -> HermitianMatrix:
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for e in self.effects:
            acc = acc + e.matrix.data
        return HermitianMatrix(acc, self.dims)

    def completeness_residual(self) -> float:
        """``||sum_i M_i - I||_F``."""
        return frobenius_norm(self.total() - identity(self.dim))
