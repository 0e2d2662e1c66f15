"""Hom- and Ext^d-dimensions between indecomposables, and extension middle terms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from dtorsion.combinatorics import TupleUniverse, mixtures, squig, tau_d
from dtorsion.errors import UsageError


@dataclass(frozen=True)
class ExtensionMiddleTerms:
    """Middle terms of the minimal d-extension 0 -> M_x -> E_1 -> ... -> E_d -> M_y -> 0.

    ``layers[k - 1]`` is Z_k, sorted; E_k is the sum of M_z over z in Z_k.
    """

    source: tuple
    target: tuple
    layers: tuple

    def as_dict(self) -> dict:
        return {
            "source": list(self.source),
            "target": list(self.target),
            "layers": [[list(z) for z in layer] for layer in self.layers],
        }


def hom_dim(x: Sequence[int], y: Sequence[int], u: TupleUniverse) -> int:
    """dim Hom(M_x, M_y)."""
    u.position(x)
    u.position(y)
    return int(squig(x, y))


def ext_dim(y: Sequence[int], x: Sequence[int], u: TupleUniverse) -> int:
    """dim Ext^d(M_y, M_x); non-zero exactly when x ~> tau_d(y)."""
    u.position(x)
    u.position(y)
    return int(squig(x, tau_d(y)))


def ext_middle_terms(x: Sequence[int], y: Sequence[int], u: TupleUniverse) -> ExtensionMiddleTerms:
    x, y = tuple(x), tuple(y)
    if not ext_dim(y, x, u):
        raise UsageError(f"Ext^d(M_{y}, M_{x}) = 0, so there is no non-trivial d-extension")
    d = u.d
    layers = [[] for _ in range(d)]
    for z, k in mixtures(x, y):
        # x_i < y_i at every position here, so k = 0 and k = d+1 are exactly x and y
        if 1 <= k <= d and z in u:
            layers[k - 1].append(z)
    return ExtensionMiddleTerms(x, y, tuple(tuple(sorted(layer)) for layer in layers))
