"""Alternating chains on a vertex set, with exact rational coefficients.

A degree-n chain is a finite formal sum of (n+1)-tuples of vertex ids,
taken up to the sign of coordinate permutations; tuples with a repeated
entry are the zero chain.  Chains are stored on canonical keys (strictly
increasing tuples) and every coefficient is a Fraction, so equality checks
are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator

Rational = int | Fraction


def canonicalize_tuple(tup: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Sorted form of a tuple and the sign of the sorting permutation.

    Returns sign 0 when an entry repeats.
    """
    if len(set(tup)) != len(tup):
        return tup, 0
    inversions = 0
    k = len(tup)
    for i in range(k):
        for j in range(i + 1, k):
            if tup[i] > tup[j]:
                inversions += 1
    return tuple(sorted(tup)), -1 if inversions % 2 else 1


class AltChain:
    """Immutable-by-convention alternating chain.

    `terms` maps canonical tuples to nonzero Fractions.  Do not mutate a
    chain's dict; every operation returns a new chain.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict[tuple[int, ...], Fraction]):
        self.degree = degree
        self.terms = terms

    @classmethod
    def zero(cls, degree: int) -> "AltChain":
        return cls(degree, {})

    @classmethod
    def from_tuples(cls, pairs: Iterable[tuple[tuple[int, ...], Rational]]) -> "AltChain":
        """Sum of (tuple, coefficient) terms; tuples may be unordered."""
        terms: dict[tuple[int, ...], Fraction] = {}
        degree = None
        for tup, coeff in pairs:
            if degree is None:
                degree = len(tup) - 1
            elif len(tup) - 1 != degree:
                raise ValueError("mixed degrees in one chain")
            key, sign = canonicalize_tuple(tuple(tup))
            if sign == 0:
                continue
            value = terms.get(key, Fraction(0)) + Fraction(coeff) * sign
            if value:
                terms[key] = value
            else:
                terms.pop(key, None)
        if degree is None:
            raise ValueError("cannot infer degree from no terms; use AltChain.zero")
        return cls(degree, terms)

    @classmethod
    def basis(cls, tup: tuple[int, ...], coeff: Rational = 1) -> "AltChain":
        return cls.from_tuples([(tup, coeff)])

    def items(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in sorted key order, for deterministic output."""
        return sorted(self.terms.items())

    def support(self) -> set[tuple[int, ...]]:
        return set(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def l1_norm(self) -> Fraction:
        return sum((abs(c) for c in self.terms.values()), Fraction(0))

    def augmentation(self) -> Fraction:
        if self.degree != 0:
            raise ValueError("augmentation is defined on degree-0 chains")
        return sum(self.terms.values(), Fraction(0))

    def face(self, j: int) -> "AltChain":
        """Drop the j-th coordinate of every canonical term."""
        if not 0 <= j <= self.degree:
            raise ValueError(f"face index {j} out of range for degree {self.degree}")
        out: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in self.terms.items():
            face = key[:j] + key[j + 1 :]
            value = out.get(face, Fraction(0)) + coeff
            if value:
                out[face] = value
            else:
                out.pop(face, None)
        return AltChain(self.degree - 1, out)

    def boundary(self) -> "AltChain":
        """Alternating sum of faces; degree must be at least 1."""
        if self.degree < 1:
            raise ValueError("boundary needs degree >= 1")
        out: dict[tuple[int, ...], Fraction] = {}
        for key, coeff in self.terms.items():
            for j in range(len(key)):
                face = key[:j] + key[j + 1 :]
                term = -coeff if j % 2 else coeff
                value = out.get(face, Fraction(0)) + term
                if value:
                    out[face] = value
                else:
                    out.pop(face, None)
        return AltChain(self.degree - 1, out)

    def map_vertices(self, func: Callable[[int], int]) -> "AltChain":
        """Push the chain through a vertex map, killing repeated images."""
        if not self.terms:
            return AltChain.zero(self.degree)
        return AltChain.from_tuples(
            (tuple(func(v) for v in key), coeff) for key, coeff in self.terms.items()
        )

    def __add__(self, other: "AltChain") -> "AltChain":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            value = out.get(key, Fraction(0)) + coeff
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        return AltChain(self.degree, out)

    def __neg__(self) -> "AltChain":
        return AltChain(self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "AltChain") -> "AltChain":
        return self + (-other)

    def __mul__(self, scalar: Rational) -> "AltChain":
        s = Fraction(scalar)
        if not s:
            return AltChain.zero(self.degree)
        return AltChain(self.degree, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AltChain):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return f"AltChain.zero({self.degree})"
        body = " + ".join(f"{c}*{k}" for k, c in self.items()[:4])
        extra = "" if len(self.terms) <= 4 else f" ... ({len(self.terms)} terms)"
        return f"AltChain({body}{extra})"


def chain_to_lines(chain: AltChain) -> list[str]:
    """Serialize as `coeff v0 v1 ... vn` lines, rationals as p/q."""
    return [
        " ".join([str(coeff)] + [str(v) for v in key]) for key, coeff in chain.items()
    ]


def chain_from_lines(lines: Iterable[str], degree: int | None = None) -> AltChain:
    """Parse the line format; blank lines and # comments are skipped."""
    pairs: list[tuple[tuple[int, ...], Fraction]] = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        coeff = Fraction(parts[0])
        tup = tuple(int(p) for p in parts[1:])
        if degree is not None and len(tup) - 1 != degree:
            raise ValueError(f"expected degree {degree}, got tuple {tup}")
        pairs.append((tup, coeff))
    if not pairs:
        if degree is None:
            raise ValueError("empty chain needs an explicit degree")
        return AltChain.zero(degree)
    return AltChain.from_tuples(pairs)
