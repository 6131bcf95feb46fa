"""Truncated elements of c0(X) and the uniform metric.

A :class:`NullSeq` stores an exact finite prefix ``x_1, ..., x_L`` and a
``tail`` bound: every unlisted coordinate ``x_n`` (``n > L``) satisfies
``rho(x_n, 0) <= tail``. A tail of zero means the sequence is finitely
supported and known exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .ambient import (
    DescriptorMismatch,
    Element,
    Group,
    _split_top,
    format_rational,
    parse_rational,
)

__all__ = [
    "Interval",
    "NullSeq",
    "d",
    "nu_embed",
    "project",
    "prefix_project",
    "seq_add",
    "seq_neg",
    "seq_sub",
    "seq_scalar_mul",
    "zero_seq",
]


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` of exact rationals."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


class NullSeq:
    """A null sequence given by an exact prefix plus a tail bound."""

    __slots__ = ("group", "values", "tail")

    def __init__(self, group: Group, prefix: Iterable[Any] = (), tail: Any = 0):
        vals = []
        for v in prefix:
            if isinstance(v, Element):
                if v.group != group:
                    raise DescriptorMismatch(f"prefix entry in {v.group}, sequence over {group}")
                v = v.value
            vals.append(group.normalize(v))
        tail = parse_rational(tail) if isinstance(tail, str) else Fraction(tail)
        if tail < 0:
            raise ValueError("tail bound must be nonnegative")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "tail", tail)

    def __setattr__(self, name, value):
        raise AttributeError("NullSeq is immutable")

    @property
    def prefix(self) -> tuple[Element, ...]:
        return tuple(Element(self.group, v) for v in self.values)

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def finitely_supported(self) -> bool:
        return self.tail == 0

    def coordinate(self, n: int):
        """Raw value at 1-based position ``n`` (zero beyond the prefix)."""
        if n < 1:
            raise IndexError("positions start at 1")
        if n <= len(self.values):
            return self.values[n - 1]
        return self.group.zero()

    def uncertainty(self, n: int) -> Fraction:
        """How far the true coordinate ``n`` may be from :meth:`coordinate`."""
        return Fraction(0) if n <= len(self.values) else self.tail

    def support(self) -> list[int]:
        return [i + 1 for i, v in enumerate(self.values) if not self.group.is_zero(v)]

    def _key(self):
        vals = self.values
        if self.tail == 0:
            end = len(vals)
            while end and self.group.is_zero(vals[end - 1]):
                end -= 1
            vals = vals[:end]
        return (self.group, vals, self.tail)

    def __eq__(self, other):
        if not isinstance(other, NullSeq):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __add__(self, other):
        return seq_add(self, other)

    def __sub__(self, other):
        return seq_sub(self, other)

    def __neg__(self):
        return seq_neg(self)

    def __rmul__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return seq_scalar_mul(k, self)

    def __repr__(self):
        return f"NullSeq({self})"

    def __str__(self):
        body = ", ".join(self.group.format_value(v) for v in self.values)
        sep = " " if body else ""
        return f"[{self.group.text()}:{sep}{body} | tail<={format_rational(self.tail)}]"

    @classmethod
    def parse(cls, text: str) -> "NullSeq":
        """Parse ``"[T: 1/3, 1/8 | tail<=1/100]"``."""
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ValueError(f"null sequence text must be bracketed: {text!r}")
        s = s[1:-1]
        head, sep, rest = s.partition(":")
        if not sep:
            raise ValueError(f"missing ':' in {text!r}")
        group = Group.parse(head)
        body, bar, tail_part = rest.rpartition("|")
        if not bar:
            body, tail_part = rest, "tail<=0"
        m = re.fullmatch(r"\s*tail\s*<=\s*(\S+)\s*", tail_part)
        if m is None:
            raise ValueError(f"bad tail clause {tail_part!r}")
        entries = [e for e in _split_top(body) if e] if body.strip() else []
        return cls(group, [group.parse_value(e) for e in entries], parse_rational(m.group(1)))

    def to_dict(self) -> dict:
        return {
            "descriptor": self.group.text(),
            "prefix": [self.group.format_value(v) for v in self.values],
            "tail_bound": format_rational(self.tail),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NullSeq":
        group = Group.parse(data["descriptor"])
        return cls(group, [group.parse_value(v) for v in data["prefix"]],
                   parse_rational(data["tail_bound"]))


def zero_seq(group: Group) -> NullSeq:
    return NullSeq(group, (), 0)


def _check_same(x: NullSeq, y: NullSeq) -> None:
    if x.group != y.group:
        raise DescriptorMismatch(f"{x.group} vs {y.group}")


def d(x: NullSeq, y: NullSeq) -> Interval:
    """Enclosure of the uniform distance ``sup_n rho(x_n, y_n)``.

    Where only one side is listed, the other is unknown up to its tail
    bound, so the triangle inequality gives ``[|a| - t, |a| + t]``.
    """
    _check_same(x, y)
    g = x.group
    lo = hi = Fraction(0)
    for i in range(max(x.length, y.length)):
        known_x = i < x.length
        known_y = i < y.length
        if known_x and known_y:
            r = g.dist(x.values[i], y.values[i])
            lo, hi = max(lo, r), max(hi, r)
        elif known_x:
            a = g.norm(x.values[i])
            lo, hi = max(lo, a - y.tail), max(hi, a + y.tail)
        else:
            b = g.norm(y.values[i])
            lo, hi = max(lo, b - x.tail), max(hi, b + x.tail)
    hi = max(hi, x.tail + y.tail)
    return Interval(lo, hi)


def nu_embed(n: int, a: Element) -> NullSeq:
    """The sequence with ``a`` at position ``n`` and zeros elsewhere."""
    if n < 1:
        raise ValueError("positions start at 1")
    g = a.group
    return NullSeq(g, [g.zero()] * (n - 1) + [a.value], 0)


def project(n: int, x: NullSeq) -> Element:
    """Coordinate ``n``; beyond the prefix this is 0 up to ``x.uncertainty(n)``."""
    return Element(x.group, x.coordinate(n))


def prefix_project(n: int, x: NullSeq) -> tuple[Element, ...]:
    return tuple(project(i, x) for i in range(1, n + 1))


def _combine(x: NullSeq, y: NullSeq, op) -> NullSeq:
    _check_same(x, y)
    g = x.group
    short, long_ = (x, y) if x.length <= y.length else (y, x)
    tail = x.tail + y.tail
    if short.tail == 0 or short.length == long_.length:
        n = long_.length
        vals = [op(x.coordinate(i), y.coordinate(i)) for i in range(1, n + 1)]
        return NullSeq(g, vals, tail)
    # the shorter operand is unknown on the longer one's extra coordinates
    n = short.length
    vals = [op(x.values[i], y.values[i]) for i in range(n)]
    for i in range(n, long_.length):
        tail = max(tail, g.norm(long_.values[i]) + short.tail)
    return NullSeq(g, vals, tail)


def seq_add(x: NullSeq, y: NullSeq) -> NullSeq:
    return _combine(x, y, x.group.add)


def seq_sub(x: NullSeq, y: NullSeq) -> NullSeq:
    g = x.group
    return _combine(x, y, lambda a, b: g.add(a, g.neg(b)))


def seq_neg(x: NullSeq) -> NullSeq:
    return NullSeq(x.group, [x.group.neg(v) for v in x.values], x.tail)


def seq_scalar_mul(k: int, x: NullSeq) -> NullSeq:
    g = x.group
    return NullSeq(g, [g.mul(k, v) for v in x.values], abs(k) * x.tail)
