"""Characters of c0(X), exact pairings, and Bohr-convergence certificates.

For compact X every continuous character of c0(X) is a finitely supported
sequence ``g = (g_n)`` of characters of X, and ``(g, x) = sum_n (g_n, x_n)``
(mod 1). Pairing values are kept as exact angles in [0, 1); "tends to 1" on
the circle becomes "angle distance from 0 tends to 0".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .ambient import (
    DescriptorMismatch,
    Element,
    Group,
    angle_distance,
    as_radius,
    format_rational,
    parse_rational,
)
from .sequences import NullSeq, d, nu_embed

__all__ = [
    "Character",
    "CharacterBox",
    "TailAmbiguous",
    "NoEscapingCoordinate",
    "pair",
    "angle_distance",
    "bohr_null_report",
    "CharacterDeviation",
    "schur_witness",
    "WitnessReport",
    "verify_witness",
    "gclosed_separator",
    "SeparatorSchedule",
    "SeparatorCharacter",
    "verify_separator",
]


class TailAmbiguous(ValueError):
    """The character reads a coordinate that is only known up to a tail bound."""


class NoEscapingCoordinate(ValueError):
    """No coordinate of the given sequence leaves the ``delta``-ball."""


class Character:
    """A finitely supported character ``position -> character of X``."""

    __slots__ = ("group", "support")

    def __init__(self, group: Group, support: Mapping[int, Any] | Iterable = ()):
        items = support.items() if isinstance(support, Mapping) else support
        entries = {}
        for pos, g in items:
            pos = int(pos)
            if pos < 1:
                raise ValueError("positions start at 1")
            g = group.normalize_char(g)
            if pos in entries:
                g = group.char_add(entries[pos], g)
            entries[pos] = g
        clean = tuple(sorted((p, g) for p, g in entries.items() if not group.char_is_trivial(g)))
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "support", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Character is immutable")

    @property
    def max_position(self) -> int:
        return self.support[-1][0] if self.support else 0

    def __getitem__(self, pos: int):
        for p, g in self.support:
            if p == pos:
                return g
        return self.group.char_zero()

    def __add__(self, other: "Character") -> "Character":
        if other.group != self.group:
            raise DescriptorMismatch(f"{self.group} vs {other.group}")
        return Character(self.group, list(self.support) + list(other.support))

    def __eq__(self, other):
        return isinstance(other, Character) and (self.group, self.support) == (other.group, other.support)

    def __hash__(self):
        return hash((self.group, self.support))

    def __repr__(self):
        return f"Character({self.group}, {dict(self.support)})"

    def to_dict(self) -> dict:
        return {
            "descriptor": self.group.text(),
            "support": {str(p): self.group.format_char(g) for p, g in self.support},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Character":
        group = Group.parse(data["descriptor"])
        return cls(group, {int(p): group.parse_char(g) for p, g in data["support"].items()})


def pair(chi: Character, x: NullSeq) -> Fraction:
    """Angle of ``(chi, x)`` in [0, 1)."""
    if chi.group != x.group:
        raise DescriptorMismatch(f"{chi.group} vs {x.group}")
    total = Fraction(0)
    for pos, g in chi.support:
        if pos <= x.length:
            total += chi.group.pair(g, x.values[pos - 1])
        elif x.tail != 0:
            raise TailAmbiguous(f"position {pos} is beyond the prefix of a sequence with tail {x.tail}")
    return total % 1


@dataclass(frozen=True)
class CharacterDeviation:
    character: Character
    deviations: tuple  # angle distance from 0 of pair(chi, x_n), n = 1..len(xs)
    tail_sup: tuple  # tail_sup[n-1] = max over j >= n of deviations
    last_exceed: int | None  # last 1-based n with deviation > tolerance

    @property
    def max_deviation(self) -> Fraction:
        return self.tail_sup[0] if self.tail_sup else Fraction(0)


def bohr_null_report(xs: Sequence[NullSeq], chars: Sequence[Character], tol=0) -> list[CharacterDeviation]:
    """How far each character stays from 1 along the sequence ``xs``."""
    tol = Fraction(tol)
    out = []
    for chi in chars:
        devs = [angle_distance(pair(chi, x)) for x in xs]
        sups = list(devs)
        for i in range(len(sups) - 2, -1, -1):
            sups[i] = max(sups[i], sups[i + 1])
        last = None
        for i, v in enumerate(devs):
            if v > tol:
                last = i + 1
        out.append(CharacterDeviation(chi, tuple(devs), tuple(sups), last))
    return out


@dataclass(frozen=True)
class CharacterBox:
    """All characters supported in ``1..max_support`` with entries from ``entries``.

    The family is usually far too large to enumerate, but its pairing with
    ``nu_n(a)`` only depends on the single entry ``g_n``, so the set of
    attainable pairing angles is computed position by position.
    """

    group: Group
    max_support: int
    entries: tuple

    def __post_init__(self):
        ents = tuple(self.group.normalize_char(g) for g in self.entries)
        if self.group.normalize_char(self.group.char_zero()) not in ents:
            ents = (self.group.char_zero(),) + ents
        object.__setattr__(self, "entries", ents)

    @classmethod
    def integer_range(cls, group: Group, max_support: int, lo: int, hi: int) -> "CharacterBox":
        return cls(group, max_support, tuple(range(lo, hi + 1)))

    @property
    def size(self) -> int:
        return len(set(self.entries)) ** self.max_support

    def nu_angles(self, n: int, a: Element) -> list[Fraction]:
        """Every value of ``pair(chi, nu_n(a))`` as ``chi`` ranges over the family."""
        if n > self.max_support:
            return [Fraction(0)]
        return sorted({self.group.pair(g, a.value) for g in self.entries})

    def to_dict(self) -> dict:
        return {
            "kind": "box",
            "descriptor": self.group.text(),
            "max_support": self.max_support,
            "entries": [self.group.format_char(g) for g in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CharacterBox":
        group = Group.parse(data["descriptor"])
        return cls(group, data["max_support"], tuple(group.parse_char(g) for g in data["entries"]))


@dataclass(frozen=True)
class WitnessReport:
    """Certificate that ``nu_n(t)`` is Bohr-null yet uniformly discrete.

    ``pairings`` lists, for each member of the character family and each
    ``n <= horizon``, the pairing angle(s) with ``nu_n(t)``; ``vanish_after``
    is the index past which every listed angle is exactly 0. ``distance`` is
    the common value of ``d(nu_i(t), nu_j(t))`` over all ``checked_pairs``.
    """

    t: Element
    horizon: int
    family: Any  # CharacterBox or tuple of Character
    pairings: tuple  # per family member (or per position for a box): tuple of angles
    vanish_after: int
    distance: Fraction
    checked_pairs: int

    @property
    def sequence(self) -> list[NullSeq]:
        return [nu_embed(n, self.t) for n in range(1, self.horizon + 1)]

    def to_dict(self) -> dict:
        if isinstance(self.family, CharacterBox):
            fam = self.family.to_dict()
        else:
            fam = {"kind": "list", "characters": [c.to_dict() for c in self.family]}
        return {
            "kind": "schur-witness",
            "t": str(self.t),
            "horizon": self.horizon,
            "sequence": [str(x) for x in self.sequence],
            "family": fam,
            "pairings": [[format_rational(a) for a in row] for row in self.pairings],
            "vanish_after": self.vanish_after,
            "distance": format_rational(self.distance),
            "checked_pairs": self.checked_pairs,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WitnessReport":
        fam = data["family"]
        family = (CharacterBox.from_dict(fam) if fam["kind"] == "box"
                  else tuple(Character.from_dict(c) for c in fam["characters"]))
        return cls(
            t=Element.parse(data["t"]),
            horizon=data["horizon"],
            family=family,
            pairings=tuple(tuple(parse_rational(a) for a in row) for row in data["pairings"]),
            vanish_after=data["vanish_after"],
            distance=parse_rational(data["distance"]),
            checked_pairs=data["checked_pairs"],
        )


def _witness_pairings(t: Element, horizon: int, family) -> tuple[tuple, int]:
    if isinstance(family, CharacterBox):
        rows = tuple(tuple(family.nu_angles(n, t)) for n in range(1, horizon + 1))
        nonzero = [n for n, row in enumerate(rows, 1) if any(a != 0 for a in row)]
    else:
        seq = [nu_embed(n, t) for n in range(1, horizon + 1)]
        rows = tuple(tuple(pair(chi, x) for x in seq) for chi in family)
        nonzero = [n for row in rows for n, a in enumerate(row, 1) if a != 0]
    return rows, max(nonzero, default=0)


def _family_support(family) -> int:
    if isinstance(family, CharacterBox):
        return family.max_support
    return max((c.max_position for c in family), default=0)


def schur_witness(t: Element, horizon: int, char_family) -> WitnessReport:
    """Build the sequence ``nu_n(t)``, ``n <= horizon``, with both certificates.

    Every character of c0(X) is finitely supported, so ``(chi, nu_n(t))`` is
    exactly 1 once ``n`` passes the support of ``chi``; meanwhile any two
    distinct members are exactly ``rho(t, 0)`` apart, so no subsequence can
    converge in the uniform topology.
    """
    if t.norm() <= 0:
        raise ValueError("t must be nonzero")
    if horizon < 1:
        raise ValueError("horizon must be positive")
    family = char_family if isinstance(char_family, CharacterBox) else tuple(char_family)
    rows, vanish = _witness_pairings(t, horizon, family)
    seq = [nu_embed(n, t) for n in range(1, horizon + 1)]
    target = t.norm()
    checked = 0
    for i in range(horizon):
        for j in range(i + 1, horizon):
            iv = d(seq[i], seq[j])
            if not (iv.is_point and iv.lo == target):
                raise AssertionError(f"unexpected distance {iv} between positions {i + 1}, {j + 1}")
            checked += 1
    return WitnessReport(t, horizon, family, rows, vanish, target, checked)


def verify_witness(report: WitnessReport) -> dict[str, bool]:
    """Recompute every number in ``report`` from its echoed inputs."""
    rows, vanish = _witness_pairings(report.t, report.horizon, report.family)
    seq = report.sequence
    distances_ok = report.distance == report.t.norm() and report.distance > 0
    pairs = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            iv = d(seq[i], seq[j])
            distances_ok &= iv.is_point and iv.lo == report.distance
            pairs += 1
    return {
        "pairings": rows == report.pairings,
        "vanish_after": vanish == report.vanish_after and vanish <= _family_support(report.family),
        "uniformly_discrete": distances_ok and pairs == report.checked_pairs,
    }


# ---------------------------------------------------------------------------
# separating characters for c0(c0(X)) inside c0(X)^N


@dataclass(frozen=True)
class SeparatorCharacter:
    """``chi_l = nu_outer(nu_inner(g))``: reads coordinate ``inner`` of the ``outer``-th sequence."""

    l: int
    outer: int
    inner: int
    g: Any

    def apply(self, group: Group, seqs: Sequence[NullSeq]) -> Fraction:
        if self.outer > len(seqs):
            return Fraction(0)
        x = seqs[self.outer - 1]
        if self.inner > x.length:
            if x.tail != 0:
                raise TailAmbiguous(f"coordinate {self.inner} of sequence {self.outer} is not listed")
            return Fraction(0)
        return group.pair(self.g, x.values[self.inner - 1])


@dataclass(frozen=True)
class SeparatorSchedule:
    """Characters ``chi_l`` with the two separation certificates.

    ``lower_bound`` is the least angle distance from 0 of ``(chi_l, ys)``
    over all ``l``. ``test_certificates`` holds, for each supplied null test
    sequence, the pairing angles against every ``chi_l`` and the last ``l``
    at which the angle is nonzero.
    """

    group: Group
    ys: tuple
    delta: Fraction
    characters: tuple
    escape_values: tuple
    cluster_radius: Fraction
    lower_bound: Fraction
    tests: tuple
    test_certificates: tuple  # (angles, last_nonzero) per test sequence

    def to_dict(self) -> dict:
        fmt_char = self.group.format_char
        return {
            "kind": "gclosed-separator",
            "descriptor": self.group.text(),
            "ys": [str(y) for y in self.ys],
            "delta": format_rational(self.delta),
            "characters": [
                {"l": c.l, "n": c.outer, "k": c.inner, "g": fmt_char(c.g)} for c in self.characters
            ],
            "escape_values": [self.group.format_value(v) for v in self.escape_values],
            "cluster_radius": format_rational(self.cluster_radius),
            "lower_bound": format_rational(self.lower_bound),
            "tests": [[str(x) for x in seq] for seq in self.tests],
            "test_certificates": [
                {"angles": [format_rational(a) for a in angles], "last_nonzero": last}
                for angles, last in self.test_certificates
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SeparatorSchedule":
        group = Group.parse(data["descriptor"])
        return cls(
            group=group,
            ys=tuple(NullSeq.parse(y) for y in data["ys"]),
            delta=parse_rational(data["delta"]),
            characters=tuple(SeparatorCharacter(c["l"], c["n"], c["k"], group.parse_char(c["g"]))
                             for c in data["characters"]),
            escape_values=tuple(group.parse_value(v) for v in data["escape_values"]),
            cluster_radius=parse_rational(data["cluster_radius"]),
            lower_bound=parse_rational(data["lower_bound"]),
            tests=tuple(tuple(NullSeq.parse(x) for x in seq) for seq in data["tests"]),
            test_certificates=tuple(
                (tuple(parse_rational(a) for a in c["angles"]), c["last_nonzero"])
                for c in data["test_certificates"]
            ),
        )


def _test_certificate(group: Group, chars, seqs) -> tuple[tuple, int]:
    angles = tuple(c.apply(group, seqs) for c in chars)
    last = max((i + 1 for i, a in enumerate(angles) if a != 0), default=0)
    return angles, last


def gclosed_separator(ys: Sequence[NullSeq], delta, tests: Sequence[Sequence[NullSeq]] = (),
                      g_bound: int = 8) -> SeparatorSchedule:
    """Characters that tend to 1 on null sequences but not on ``ys``.

    For every ``n`` with some coordinate of ``ys[n]`` at distance > ``delta``
    from 0, the first such coordinate ``k`` is recorded. The escaping values
    are grouped greedily (a value joins the first group whose seed is within
    ``delta/4``) and the largest group is kept, standing in for a convergent
    subsequence. A character ``g`` of X is then chosen, among candidates of
    size up to ``g_bound``, to maximize the least angle distance of ``g`` on
    the group; ties go to the smaller candidate.
    """
    delta = as_radius(delta)
    ys = tuple(ys)
    if not ys:
        raise NoEscapingCoordinate("empty sequence")
    group = ys[0].group
    if not group.compact:
        raise ValueError("the separator needs a compact group")
    escapes = []
    for n, y in enumerate(ys, 1):
        if y.group != group:
            raise DescriptorMismatch(f"{y.group} vs {group}")
        for k, v in enumerate(y.values, 1):
            if group.norm(v) > delta:
                escapes.append((n, k, v))
                break
    if not escapes:
        raise NoEscapingCoordinate(f"no listed coordinate is farther than {delta} from 0")

    radius = delta / 4
    clusters: list[list] = []
    for e in escapes:
        for cl in clusters:
            if group.dist(e[2], cl[0][2]) <= radius:
                cl.append(e)
                break
        else:
            clusters.append([e])
    best = max(clusters, key=len)  # first largest on ties

    best_g, best_score = None, Fraction(-1)
    for g in group.char_candidates(g_bound):
        score = min(angle_distance(group.pair(g, v)) for _, _, v in best)
        if score > best_score:
            best_g, best_score = g, score
    if best_g is None or best_score <= 0:
        raise NoEscapingCoordinate("no candidate character separates the escaping values")

    chars = tuple(SeparatorCharacter(l, n, k, best_g) for l, (n, k, _) in enumerate(best, 1))
    lower = min(angle_distance(c.apply(group, ys)) for c in chars)
    tests = tuple(tuple(t) for t in tests)
    certs = tuple(_test_certificate(group, chars, t) for t in tests)
    return SeparatorSchedule(group, ys, delta, chars, tuple(v for _, _, v in best),
                             radius, lower, tests, certs)


def verify_separator(schedule: SeparatorSchedule) -> dict[str, bool]:
    """Recheck both certificates and the escape data from the echoed inputs."""
    group, ys = schedule.group, schedule.ys
    chars = schedule.characters
    outers = [c.outer for c in chars]
    escapes_ok = outers == sorted(set(outers)) and all(
        group.norm(ys[c.outer - 1].values[c.inner - 1]) > schedule.delta for c in chars
    )
    values = [ys[c.outer - 1].values[c.inner - 1] for c in chars]
    escapes_ok &= tuple(values) == schedule.escape_values
    escapes_ok &= all(group.dist(values[0], v) <= schedule.cluster_radius for v in values)
    angles = [c.apply(group, ys) for c in chars]
    lower = min((angle_distance(a) for a in angles), default=Fraction(0))
    certs = tuple(_test_certificate(group, chars, t) for t in schedule.tests)
    # a finite list is implicitly padded by zeros, so it is a null sequence
    tests_null = all(x.finitely_supported for t in schedule.tests for x in t)
    vanish = all(all(a == 0 for a in angles[last:]) for angles, last in certs)
    return {
        "escapes": escapes_ok,
        "separates_ys": lower == schedule.lower_bound and lower > 0,
        "tends_to_one_on_null": tests_null and vanish and certs == schedule.test_certificates,
    }
