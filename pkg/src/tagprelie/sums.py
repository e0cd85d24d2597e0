"""Finite formal sums of trees with exact rational coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping

from .trees import EMPTY, Mode, TreeLike, canonical_key, parse_tree, serialize_tree


class ModeMismatch(ValueError):
    pass


def _exact(c) -> int | Fraction:
    # integral coefficients stay ints; Fraction arithmetic dominates exhaustive checks otherwise
    if type(c) is int:
        return c
    c = Fraction(c) if not isinstance(c, int) else c
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class FormalSum:
    """An element of the free vector space on trees.

    Terms are keyed by canonical key in the sum's planarity mode, so two
    sibling-permuted trees collapse in ``nonplanar`` mode.  A canonical key
    is itself valid tree text, so representatives are recovered by parsing.
    Zero coefficients are never stored.  Instances are treated as immutable.
    """

    __slots__ = ("mode", "_coeffs")

    def __init__(self, terms: Iterable[tuple[TreeLike, Rational | int]] = (), mode: Mode | str = Mode.PLANAR):
        self.mode = Mode(mode)
        coeffs: dict[str, int | Fraction] = {}
        for t, c in terms:
            if isinstance(t, str):
                t = parse_tree(t)
            k = canonical_key(t, self.mode)
            coeffs[k] = coeffs.get(k, 0) + _exact(c)
        self._coeffs = {k: _exact(v) for k, v in coeffs.items() if v != 0}

    @classmethod
    def from_keys(cls, coeffs: Mapping[str, int | Fraction], mode: Mode | str = Mode.PLANAR) -> "FormalSum":
        """Build directly from canonical keys (no re-canonicalization)."""
        out = cls.__new__(cls)
        out.mode = Mode(mode)
        out._coeffs = {k: _exact(v) for k, v in coeffs.items() if v != 0}
        return out

    @classmethod
    def zero(cls, mode: Mode | str = Mode.PLANAR) -> "FormalSum":
        return cls((), mode)

    # -- access ----------------------------------------------------------

    def __iter__(self) -> Iterator[tuple[TreeLike, Fraction]]:
        for k in sorted(self._coeffs):
            yield key_tree(k), Fraction(self._coeffs[k])

    def items(self) -> list[tuple[str, Fraction]]:
        return [(k, Fraction(self._coeffs[k])) for k in sorted(self._coeffs)]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __getitem__(self, t: TreeLike | str) -> Fraction:
        if isinstance(t, str):
            t = parse_tree(t)
        return Fraction(self._coeffs.get(canonical_key(t, self.mode), 0))

    def support(self) -> list[str]:
        return sorted(self._coeffs)

    def coefficient_sum(self) -> Fraction:
        return Fraction(sum(self._coeffs.values()))

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "FormalSum") -> None:
        if not isinstance(other, FormalSum):
            raise TypeError(f"cannot combine FormalSum with {type(other).__name__}")
        if other.mode is not self.mode:
            raise ModeMismatch(f"{self.mode.value} sum combined with {other.mode.value} sum")

    def __add__(self, other: "FormalSum") -> "FormalSum":
        self._check(other)
        coeffs = dict(self._coeffs)
        for k, v in other._coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + v
        return FormalSum.from_keys(coeffs, self.mode)

    def __neg__(self) -> "FormalSum":
        return FormalSum.from_keys({k: -v for k, v in self._coeffs.items()}, self.mode)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        self._check(other)
        coeffs = dict(self._coeffs)
        for k, v in other._coeffs.items():
            coeffs[k] = coeffs.get(k, 0) - v
        return FormalSum.from_keys(coeffs, self.mode)

    def __mul__(self, c) -> "FormalSum":
        if not isinstance(c, (int, Fraction, Rational)):
            return NotImplemented
        c = _exact(c)
        return FormalSum.from_keys({k: c * v for k, v in self._coeffs.items()}, self.mode)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSum):
            return self.mode is other.mode and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.mode, tuple(self.items())))

    def __repr__(self) -> str:
        return f"FormalSum({format_sum(self)!r}, mode={self.mode.value!r})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "terms": [{"tree": k, "coeff": f"{c.numerator}/{c.denominator}"} for k, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "FormalSum":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(((t["tree"], Fraction(t["coeff"])) for t in data["terms"]), data.get("mode", "planar"))


@lru_cache(maxsize=1 << 16)
def key_tree(key: str) -> TreeLike:
    """Representative tree for a canonical key."""
    return parse_tree(key)


def add(x: FormalSum, y: FormalSum) -> FormalSum:
    return x + y


def scale(c, x: FormalSum) -> FormalSum:
    return Fraction(c) * x


def from_term(t: TreeLike | str, c=1, mode: Mode | str = Mode.PLANAR) -> FormalSum:
    return FormalSum([(t, c)], mode)


def coefficient_sum(x: FormalSum) -> Fraction:
    return x.coefficient_sum()


def support(x: FormalSum) -> list[str]:
    return x.support()


def format_sum(x: FormalSum) -> str:
    if not x:
        return "0"
    parts = []
    for i, (t, c) in enumerate(x):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coeff = "" if mag == 1 else f"{mag}·"
        text = f"{coeff}{serialize_tree(t)}"
        parts.append(("-" + text) if i == 0 and sign == "-" else text if i == 0 else f"{sign} {text}")
    return " ".join(parts)


BasisOp = Callable[[TreeLike, TreeLike], FormalSum]


def bilinear_extend(
    op: BasisOp,
    mode: Mode | str = Mode.PLANAR,
    cache: dict | None = None,
    key_op: Callable[[str, str], FormalSum] | None = None,
) -> Callable[[FormalSum, FormalSum], FormalSum]:
    """Lift a basis-level product to all of the free vector space.

    ``cache`` (optional) memoizes basis products by key pair, which the
    exhaustive identity checks rely on for speed.  ``key_op`` (optional)
    computes the same product straight from canonical keys.
    """
    mode = Mode(mode)
    compute = key_op or (lambda tk, sk: op(key_tree(tk), key_tree(sk)))

    def basis(tk: str, sk: str) -> FormalSum:
        if cache is None:
            return compute(tk, sk)
        hit = cache.get((tk, sk))
        if hit is None:
            hit = cache[(tk, sk)] = compute(tk, sk)
        return hit

    def extended(x: FormalSum, y: FormalSum) -> FormalSum:
        if x.mode is not mode or y.mode is not mode:
            raise ModeMismatch(f"operator works in {mode.value} mode")
        coeffs: dict = {}
        for tk, a in x._coeffs.items():
            for sk, b in y._coeffs.items():
                ab = a * b
                for k, c in basis(tk, sk)._coeffs.items():
                    coeffs[k] = coeffs.get(k, 0) + ab * c
        return FormalSum.from_keys(coeffs, mode)

    extended.basis_op = op
    extended.mode = mode
    return extended


__all__ = [
    "EMPTY",
    "FormalSum",
    "ModeMismatch",
    "add",
    "bilinear_extend",
    "coefficient_sum",
    "format_sum",
    "from_term",
    "scale",
    "support",
]
