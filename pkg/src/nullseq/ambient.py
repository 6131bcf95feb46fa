"""Concrete abelian groups with exact rational arithmetic.

Four kinds of group are supported: the circle ``T = R/Z``, finite cyclic
groups ``Z_n``, the real line and finite products of these. Every group
carries an invariant metric:

* circle: normalized arc distance ``min(|x - y|, 1 - |x - y|)``
* ``Z_n``: the metric of the subgroup ``{k/n}`` of the circle
* real line: ``|x - y|``
* product: maximum of the component distances

Raw values are plain Python objects (``Fraction`` for the circle and the
line, ``int`` for residues, tuples for products). :class:`Element` pairs a
raw value with its group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Any, Iterator

__all__ = [
    "Group",
    "Circle",
    "FiniteCyclic",
    "RealLine",
    "Product",
    "Element",
    "DescriptorMismatch",
    "T",
    "R",
    "add",
    "neg",
    "scalar_mul",
    "rho",
    "norm",
    "parse_rational",
    "format_rational",
    "as_radius",
    "angle_distance",
]


class DescriptorMismatch(ValueError):
    """Raised when two operands live in different groups."""


_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal notation is rejected on purpose."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"expected a 'p/q' string, got {type(text).__name__}")
    m = _RATIONAL.match(text)
    if m is None:
        raise ValueError(f"not an exact rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_radius(value: Any) -> Fraction:
    """Validate a metric radius: an exact positive rational."""
    if isinstance(value, float):
        raise TypeError("radii must be exact rationals, not floats")
    r = parse_rational(value) if isinstance(value, str) else Fraction(value)
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    return r


def angle_distance(angle: Fraction) -> Fraction:
    """Circle distance of an angle (mod 1) from 0."""
    a = angle % 1
    return min(a, 1 - a)


def _split_top(text: str) -> list[str]:
    """Split on commas that are not nested inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur).strip())
    return parts


class Group:
    """Base class for group descriptors. Subclasses are frozen dataclasses."""

    compact: bool = True

    # raw-value operations, overridden below
    def normalize(self, value: Any) -> Any:
        raise NotImplementedError

    def zero(self) -> Any:
        raise NotImplementedError

    def add(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def neg(self, a: Any) -> Any:
        raise NotImplementedError

    def mul(self, k: int, a: Any) -> Any:
        raise NotImplementedError

    def norm(self, a: Any) -> Fraction:
        """Distance from ``a`` to zero."""
        raise NotImplementedError

    def dist(self, a: Any, b: Any) -> Fraction:
        return self.norm(self.add(a, self.neg(b)))

    def is_zero(self, a: Any) -> bool:
        return a == self.zero()

    # characters
    def normalize_char(self, g: Any) -> Any:
        raise NotImplementedError

    def char_is_trivial(self, g: Any) -> bool:
        return g == self.normalize_char(self.char_zero())

    def char_zero(self) -> Any:
        raise NotImplementedError

    def char_add(self, g: Any, h: Any) -> Any:
        raise NotImplementedError

    def pair(self, g: Any, a: Any) -> Fraction:
        """Angle in [0, 1) of the character ``g`` evaluated at ``a``."""
        raise NotImplementedError

    def char_candidates(self, bound: int) -> Iterator[Any]:
        """Nontrivial characters in order of increasing size."""
        raise NotImplementedError

    # text forms
    def text(self) -> str:
        raise NotImplementedError

    def format_value(self, a: Any) -> str:
        raise NotImplementedError

    def parse_value(self, text: str) -> Any:
        raise NotImplementedError

    def format_char(self, g: Any) -> str:
        raise NotImplementedError

    def parse_char(self, text: str) -> Any:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.text()

    def __call__(self, value: Any = None) -> "Element":
        if value is None:
            return Element(self, self.zero())
        if isinstance(value, str):
            value = self.parse_value(value)
        return Element(self, value)

    @staticmethod
    def parse(text: str) -> "Group":
        """Parse a descriptor such as ``"T"``, ``"Z5"``, ``"R"``, ``"T^2"`` or ``"(T,Z3)"``."""
        s = text.strip()
        if not s:
            raise ValueError("empty group descriptor")
        if s.startswith("(") and s.endswith(")"):
            inner = s[1:-1]
            parts = _split_top(inner)
            if len(parts) == 1:
                return Group.parse(parts[0])
            return Product(tuple(Group.parse(p) for p in parts))
        if "^" in s:
            base, _, power = s.rpartition("^")
            k = int(power)
            if k < 1:
                raise ValueError(f"bad power in {text!r}")
            g = Group.parse(base)
            return g if k == 1 else Product((g,) * k)
        if s == "T":
            return Circle()
        if s == "R":
            return RealLine()
        m = re.fullmatch(r"Z(\d+)", s)
        if m:
            return FiniteCyclic(int(m.group(1)))
        raise ValueError(f"unknown group descriptor {text!r}")


@dataclass(frozen=True)
class Circle(Group):
    """The circle group R/Z with representatives in [0, 1)."""

    def normalize(self, value):
        if isinstance(value, float):
            raise TypeError("circle values must be exact rationals")
        return Fraction(value) % 1

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return (a + b) % 1

    def neg(self, a):
        return (-a) % 1

    def mul(self, k, a):
        return (k * a) % 1

    def norm(self, a):
        return min(a, 1 - a)

    def normalize_char(self, g):
        if isinstance(g, Fraction):
            if g.denominator != 1:
                raise ValueError("circle characters are integers")
            g = g.numerator
        return int(g)

    def char_zero(self):
        return 0

    def char_add(self, g, h):
        return g + h

    def pair(self, g, a):
        return (g * a) % 1

    def char_candidates(self, bound):
        for k in range(1, bound + 1):
            yield k
            yield -k

    def text(self):
        return "T"

    def format_value(self, a):
        return format_rational(a)

    def parse_value(self, text):
        return self.normalize(parse_rational(text))

    def format_char(self, g):
        return str(g)

    def parse_char(self, text):
        return int(str(text).strip())


@dataclass(frozen=True)
class FiniteCyclic(Group):
    """Z_n, metrized as the subgroup {k/n} of the circle."""

    order: int

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"cyclic order must be a positive integer, got {self.order!r}")

    def normalize(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ValueError("residues are integers")
            value = value.numerator
        return int(value) % self.order

    def zero(self):
        return 0

    def add(self, a, b):
        return (a + b) % self.order

    def neg(self, a):
        return (-a) % self.order

    def mul(self, k, a):
        return (k * a) % self.order

    def norm(self, a):
        return Fraction(min(a, self.order - a), self.order)

    def normalize_char(self, g):
        return self.normalize(g)

    def char_zero(self):
        return 0

    def char_add(self, g, h):
        return (g + h) % self.order

    def pair(self, g, a):
        return Fraction(g * a % self.order, self.order)

    def char_candidates(self, bound):
        # residues closest to 0 first: 1, n-1, 2, n-2, ...
        seen = set()
        for k in range(1, self.order):
            for e in (k % self.order, (-k) % self.order):
                if e and e not in seen:
                    seen.add(e)
                    yield e

    def text(self):
        return f"Z{self.order}"

    def format_value(self, a):
        return str(a)

    def parse_value(self, text):
        return self.normalize(int(text.strip()))

    def format_char(self, g):
        return str(g)

    def parse_char(self, text):
        return self.normalize(int(str(text).strip()))


@dataclass(frozen=True)
class RealLine(Group):
    """The additive reals restricted to exact rationals."""

    compact = False

    def normalize(self, value):
        if isinstance(value, float):
            raise TypeError("real-line values must be exact rationals")
        return Fraction(value)

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, k, a):
        return k * a

    def norm(self, a):
        return abs(a)

    # the character s acts by t -> exp(2 pi i s t)
    def normalize_char(self, g):
        if isinstance(g, str):
            return parse_rational(g)
        return Fraction(g)

    def char_zero(self):
        return Fraction(0)

    def char_add(self, g, h):
        return g + h

    def pair(self, g, a):
        return (g * a) % 1

    def char_candidates(self, bound):
        for k in range(1, bound + 1):
            yield Fraction(k)
            yield Fraction(-k)

    def text(self):
        return "R"

    def format_value(self, a):
        return format_rational(a)

    def parse_value(self, text):
        return parse_rational(text)

    def format_char(self, g):
        return format_rational(g)

    def parse_char(self, text):
        return parse_rational(text)


@dataclass(frozen=True)
class Product(Group):
    """Finite product of groups with the max metric."""

    factors: tuple[Group, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("product of zero groups")
        object.__setattr__(self, "factors", factors)

    @property
    def compact(self):  # type: ignore[override]
        return all(f.compact for f in self.factors)

    def _check(self, value):
        if isinstance(value, Element):
            value = value.value
        value = tuple(value)
        if len(value) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components, got {len(value)}")
        return value

    def normalize(self, value):
        value = self._check(value)
        return tuple(
            f.normalize(v.value if isinstance(v, Element) else v)
            for f, v in zip(self.factors, value)
        )

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, k, a):
        return tuple(f.mul(k, x) for f, x in zip(self.factors, a))

    def norm(self, a):
        return max(f.norm(x) for f, x in zip(self.factors, a))

    def normalize_char(self, g):
        g = self._check(g)
        return tuple(f.normalize_char(x) for f, x in zip(self.factors, g))

    def char_zero(self):
        return tuple(f.char_zero() for f in self.factors)

    def char_add(self, g, h):
        return tuple(f.char_add(x, y) for f, x, y in zip(self.factors, g, h))

    def pair(self, g, a):
        return sum((f.pair(x, y) for f, x, y in zip(self.factors, g, a)), Fraction(0)) % 1

    def char_candidates(self, bound):
        per_factor = [[f.char_zero(), *f.char_candidates(bound)] for f in self.factors]
        combos = [c for c in _cartesian(*per_factor) if any(
            not f.char_is_trivial(x) for f, x in zip(self.factors, c))]

        def size(c):
            return sum(per.index(x) for per, x in zip(per_factor, c))

        yield from sorted(combos, key=size)

    def text(self):
        first = self.factors[0]
        if not isinstance(first, Product) and all(f == first for f in self.factors):
            return f"{first.text()}^{len(self.factors)}"
        return "(" + ",".join(f.text() for f in self.factors) + ")"

    def format_value(self, a):
        return "(" + ",".join(f.format_value(x) for f, x in zip(self.factors, a)) + ")"

    def parse_value(self, text):
        s = text.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"product value must be parenthesized: {text!r}")
        parts = _split_top(s[1:-1])
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components in {text!r}")
        return tuple(f.parse_value(p) for f, p in zip(self.factors, parts))

    def format_char(self, g):
        return "(" + ",".join(f.format_char(x) for f, x in zip(self.factors, g)) + ")"

    def parse_char(self, text):
        s = str(text).strip()
        parts = _split_top(s[1:-1])
        return tuple(f.parse_char(p) for f, p in zip(self.factors, parts))


T = Circle()
R = RealLine()


@dataclass(frozen=True)
class Element:
    """An exact point of a group."""

    group: Group
    value: Any

    def __post_init__(self):
        v = self.value.value if isinstance(self.value, Element) else self.value
        object.__setattr__(self, "value", self.group.normalize(v))

    def _same(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.group != self.group:
            raise DescriptorMismatch(f"{self.group} vs {other.group}")

    def __add__(self, other):
        self._same(other)
        return Element(self.group, self.group.add(self.value, other.value))

    def __sub__(self, other):
        self._same(other)
        return Element(self.group, self.group.add(self.value, self.group.neg(other.value)))

    def __neg__(self):
        return Element(self.group, self.group.neg(self.value))

    def __rmul__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        return Element(self.group, self.group.mul(k, self.value))

    def norm(self) -> Fraction:
        return self.group.norm(self.value)

    def is_zero(self) -> bool:
        return self.group.is_zero(self.value)

    def __str__(self):
        return f"{self.group.text()}:{self.group.format_value(self.value)}"

    @classmethod
    def parse(cls, text: str) -> "Element":
        """Inverse of ``str``: ``"T:3/4"``, ``"Z5:2"``, ``"T^2:(1/3,1/4)"``."""
        head, sep, tail = text.partition(":")
        if not sep:
            raise ValueError(f"missing ':' in element text {text!r}")
        group = Group.parse(head)
        return cls(group, group.parse_value(tail))


def add(a: Element, b: Element) -> Element:
    return a + b


def neg(a: Element) -> Element:
    return -a


def scalar_mul(k: int, a: Element) -> Element:
    """``k``-fold sum of ``a``, computed in one step."""
    return Element(a.group, a.group.mul(k, a.value))


def rho(a: Element, b: Element) -> Fraction:
    a._same(b)
    return a.group.dist(a.value, b.value)


def norm(a: Element) -> Fraction:
    return a.norm()
