"""Explicit tame decompositions of the rank-2 and parabolic model maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import VariableClash
from ..mpoly import Poly
from ..polymap import PolyMap, compose, jacobian


@dataclass
class TameDecomposition:
    """``target = factors[0] o factors[1] o ... o factors[-1]``."""

    target: PolyMap
    factors: list

    def composed(self) -> PolyMap:
        out = self.factors[-1]
        for f in reversed(self.factors[:-1]):
            out = compose(f, out)
        return out

    def holds(self) -> bool:
        return self.composed() == self.target

    def factor_kinds(self) -> list[str]:
        return [factor_kind(f) for f in self.factors]

    def elementary_factors(self) -> list[PolyMap]:
        """The factors with every triangular factor split into elementary ones."""
        out = []
        for f in self.factors:
            out.extend(split_triangular(f) if factor_kind(f) == "triangular" else [f])
        return out


def _increments(F: PolyMap) -> dict[int, Poly]:
    x = Poly.gens(F.field, F.nvars)
    return {i: c - x[i] for i, c in enumerate(F) if c != x[i]}


def factor_kind(F: PolyMap) -> str:
    """``"affine"``, ``"elementary"``, ``"triangular"`` or ``"other"``.

    Triangular means: every modified coordinate changes by a polynomial free
    of itself, and the dependencies among modified coordinates are acyclic.
    """
    if F.degree() <= 1:
        return "affine"
    inc = _increments(F)
    if any(i in d.variables() for i, d in inc.items()):
        return "other"
    if len(inc) == 1:
        return "elementary"
    if _topological_order(inc) is None:
        return "other"
    return "triangular"


def _topological_order(inc: dict[int, Poly]):
    deps = {i: d.variables() & set(inc) for i, d in inc.items()}
    order = []
    done: set = set()
    while len(order) < len(inc):
        ready = [i for i in inc if i not in done and deps[i] <= done]
        if not ready:
            return None
        for i in sorted(ready):
            order.append(i)
            done.add(i)
    return order


def split_triangular(F: PolyMap) -> list[PolyMap]:
    """Elementary maps whose composition (left to right) is ``F``.

    A coordinate read by other increments must change after them, so it
    sits further left; the topological order gives exactly that.
    """
    inc = _increments(F)
    order = _topological_order(inc)
    if order is None:
        raise ValueError("map is not triangular")
    x = Poly.gens(F.field, F.nvars)
    out = []
    for i in order:
        comps = list(x)
        comps[i] = x[i] + inc[i]
        out.append(PolyMap(comps))
    if TameDecomposition(F, out).composed() != F:
        raise AssertionError("elementary split failed")
    return out


def _check_free(polys: Sequence[Poly], forbidden: Sequence[int], what: str) -> None:
    for p in polys:
        clash = p.variables() & set(forbidden)
        if clash:
            names = ", ".join(f"x{i + 1}" for i in sorted(clash))
            raise VariableClash(f"{what} must not involve {names}")


def tame_decomposition_rank2(a: Poly, b: Poly, c: Poly, aux: int | None = None) -> TameDecomposition:
    """Four factors composing to ``(x1 + cb(a x1 - b x2), x2 + ca(a x1 - b x2), ...)``.

    ``aux`` is the index of the extra coordinate used by the construction
    (default: the last variable); ``a``, ``b``, ``c`` must avoid ``x1``,
    ``x2`` and the auxiliary coordinate.
    """
    K = a.field
    n = a.nvars
    z = n - 1 if aux is None else aux
    if n < 3 or z in (0, 1):
        raise VariableClash("need an auxiliary coordinate besides x1 and x2")
    _check_free([a, b, c], [0, 1, z], "a, b and c")
    x = Poly.gens(K, n)
    L = a * x[0] - b * x[1]

    def mk(changes):
        comps = list(x)
        for i, p in changes.items():
            comps[i] = p
        return PolyMap(comps)

    target = mk({0: x[0] + c * b * L, 1: x[1] + c * a * L})
    factors = [
        mk({0: x[0] + b * c * x[z], 1: x[1] + a * c * x[z]}),
        mk({z: x[z] + L}),
        mk({0: x[0] - b * c * x[z], 1: x[1] - a * c * x[z]}),
        mk({z: x[z] - L}),
    ]
    dec = TameDecomposition(target, factors)
    if not dec.holds():
        raise AssertionError("rank-2 tame identity failed")
    return dec


def tame_decomposition_parabolic(c: Poly, split_inner: bool = True) -> TameDecomposition:
    """Tame factors of ``(x1 + c^2 q, x2 + 2 c x1 q + x3 c^3, x3 - q^2)``, ``q = c x2 - x1^2``.

    With ``split_inner`` the middle factor of the three-factor split is
    replaced by its own four-factor split, giving six factors.
    """
    K = c.field
    n = c.nvars
    if n < 3:
        raise VariableClash("need at least three variables")
    _check_free([c], [0, 1, 2], "c")
    x = Poly.gens(K, n)
    x1, x2, x3 = x[0], x[1], x[2]
    q = c * x2 - x1 * x1

    def mk(c1=None, c2=None, c3=None):
        comps = list(x)
        for i, p in enumerate((c1, c2, c3)):
            if p is not None:
                comps[i] = p
        return PolyMap(comps)

    target = mk(x1 + c * c * q, x2 + 2 * c * x1 * q + x3 * c**3, x3 - q * q)
    middle = mk(x1 + c * c * q, x2 + 2 * c * x1 * q + c**3 * q * q)
    outer = [mk(c2=x2 + c**3 * x3), middle, mk(c3=x3 - q * q)]
    inner = [
        mk(c * c * x3 + x1, c**3 * x3 * x3 + 2 * c * x1 * x3 + x2),
        mk(c3=q + x3),
        mk(-c * c * x3 + x1, c**3 * x3 * x3 - 2 * c * x1 * x3 + x2),
        mk(c3=x3 - c * x2 + x1 * x1),
    ]
    outer_dec = TameDecomposition(target, outer)
    inner_dec = TameDecomposition(middle, inner)
    if not outer_dec.holds() or not inner_dec.holds():
        raise AssertionError("parabolic tame identity failed")
    if not split_inner:
        return outer_dec
    dec = TameDecomposition(target, [outer[0]] + inner + [outer[2]])
    if not dec.holds():
        raise AssertionError("parabolic tame identity failed")
    return dec


def parabolic_inner_decomposition(c: Poly) -> TameDecomposition:
    """The four-factor split of the middle factor on its own."""
    full = tame_decomposition_parabolic(c, split_inner=True)
    x = Poly.gens(c.field, c.nvars)
    q = c * x[1] - x[0] * x[0]
    comps = list(x)
    comps[0] = x[0] + c * c * q
    comps[1] = x[1] + 2 * c * x[0] * q + c**3 * q * q
    dec = TameDecomposition(PolyMap(comps), full.factors[1:5])
    if not dec.holds():
        raise AssertionError("inner identity failed")
    return dec
