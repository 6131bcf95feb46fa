"""Precompact versus uniformly-discrete dichotomy at finite scale.

Points are either group :class:`~nullseq.ambient.Element` values (metric
``rho``) or finitely supported :class:`~nullseq.sequences.NullSeq` values
(uniform metric ``d``). All comparisons are exact, so greedy selections are
deterministic and reproducible.

Every verdict here is a certificate about the finite sample it was given.
For an infinite set the exclusive alternative "precompact or has an infinite
uniformly discrete subset" can only be witnessed one scale and one sample at
a time, and the results say so (``scope = "finite-sample"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .ambient import Element, as_radius, format_rational, parse_rational, rho
from .sequences import NullSeq, d

__all__ = [
    "Cover",
    "DiscreteWitness",
    "CompactnessVerdict",
    "distance",
    "max_separated",
    "dichotomy",
    "extract_uniformly_discrete",
    "is_null_sequence_of_sets",
    "compactness_check",
    "verify_dichotomy",
    "dichotomy_from_dict",
]

Point = Union[Element, NullSeq]


def distance(p: Point, q: Point) -> Fraction:
    """Exact distance between two points of the same kind."""
    if isinstance(p, NullSeq):
        iv = d(p, q)
        if not iv.is_point:
            raise ValueError("distance is not exact; use finitely supported sequences")
        return iv.lo
    return rho(p, q)


def max_separated(points: Sequence[Point], u) -> list[Point]:
    """Greedy maximal subset whose points are pairwise at distance >= ``u``.

    Points are scanned in input order; a point is kept when it is at least
    ``u`` away from everything kept so far. Every omitted point is therefore
    strictly closer than ``u`` to some kept point.
    """
    u = as_radius(u)
    kept: list[Point] = []
    for p in points:
        if all(distance(p, k) >= u for k in kept):
            kept.append(p)
    return kept


def _point_text(p: Point) -> str:
    return str(p)


def _parse_point(text: str) -> Point:
    return NullSeq.parse(text) if text.lstrip().startswith("[") else Element.parse(text)


@dataclass(frozen=True)
class Cover:
    """Every input point lies strictly within ``radius`` of some center."""

    centers: tuple
    radius: Fraction
    checked_pairs: int
    points: tuple = field(default=(), repr=False)

    kind = "cover"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "scope": "finite-sample",
            "centers": [_point_text(c) for c in self.centers],
            "radius": format_rational(self.radius),
            "checked_pairs": self.checked_pairs,
            "points": [_point_text(p) for p in self.points],
        }


@dataclass(frozen=True)
class DiscreteWitness:
    """Points pairwise at distance >= ``separation``; more than ``threshold`` of them."""

    points: tuple
    separation: Fraction
    threshold: int
    checked_pairs: int

    kind = "discrete"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "scope": "finite-sample",
            "points": [_point_text(p) for p in self.points],
            "radius": format_rational(self.separation),
            "threshold": self.threshold,
            "checked_pairs": self.checked_pairs,
        }


def dichotomy_from_dict(data: dict) -> Cover | DiscreteWitness:
    if data["kind"] == "cover":
        return Cover(
            centers=tuple(_parse_point(c) for c in data["centers"]),
            radius=parse_rational(data["radius"]),
            checked_pairs=data["checked_pairs"],
            points=tuple(_parse_point(p) for p in data.get("points", [])),
        )
    if data["kind"] == "discrete":
        return DiscreteWitness(
            points=tuple(_parse_point(p) for p in data["points"]),
            separation=parse_rational(data["radius"]),
            threshold=data["threshold"],
            checked_pairs=data["checked_pairs"],
        )
    raise ValueError(f"unknown verdict kind {data['kind']!r}")


def dichotomy(points: Sequence[Point], u, threshold: int) -> Cover | DiscreteWitness:
    """Either cover ``points`` by few ``u``-balls or exhibit many separated points.

    A maximal subset ``F`` whose ``u/2``-balls are pairwise disjoint (pairwise
    distance >= ``u``) is chosen greedily. If ``|F| <= threshold`` the
    ``u``-balls around ``F`` cover the input, which is re-checked exactly;
    otherwise the first ``threshold + 1`` points of ``F`` are returned.
    """
    u = as_radius(u)
    if threshold < 1:
        raise ValueError("threshold must be positive")
    pts = list(points)
    centers = max_separated(pts, u)
    if len(centers) <= threshold:
        checked = 0
        for p in pts:
            ok = False
            for c in centers:
                checked += 1
                if distance(p, c) < u:
                    ok = True
                    break
            if not ok:  # impossible by maximality
                raise AssertionError(f"cover check failed at {p}")
        return Cover(tuple(centers), u, checked, tuple(pts))
    witness = tuple(centers[: threshold + 1])
    n = len(witness)
    return DiscreteWitness(witness, u, threshold, n * (n - 1) // 2)


def verify_dichotomy(result: Cover | DiscreteWitness) -> bool:
    """Recheck a verdict from its own data."""
    if isinstance(result, Cover):
        return all(any(distance(p, c) < result.radius for c in result.centers)
                   for p in result.points)
    pts = result.points
    if len(pts) <= result.threshold:
        return False
    return all(distance(pts[i], pts[j]) >= result.separation
               for i in range(len(pts)) for j in range(i + 1, len(pts)))


def extract_uniformly_discrete(rows: Sequence[NullSeq], u, want: int) -> list[NullSeq] | None:
    """Inductively pick ``want`` rows that are pairwise ``u/2``-separated in ``d``.

    At each step the scan looks, from the current position onward, for a
    coordinate ``n`` at which some row has norm >= ``u``; that row is taken,
    and the scan resumes at the first index ``j > n`` from which that row
    stays strictly inside the ``u/2``-ball. For later picks the taken row is
    small at their escaping coordinate, which forces distance >= ``u/2``.

    Returns ``None`` when fewer than ``want`` rows can be found before the
    end of the listed coordinates.
    """
    u = as_radius(u)
    half = u / 2
    for r in rows:
        if not r.finitely_supported:
            raise ValueError("rows must be finitely supported")
    horizon = max((r.length for r in rows), default=0)
    picked: list[NullSeq] = []
    start = 1
    while len(picked) < want:
        found = None
        for n in range(start, horizon + 1):
            for r in rows:
                if n <= r.length and r.group.norm(r.values[n - 1]) >= u:
                    found = (n, r)
                    break
            if found:
                break
        if found is None:
            return None
        n, row = found
        last_big = max((i + 1 for i, v in enumerate(row.values) if row.group.norm(v) >= half),
                       default=0)
        picked.append(row)
        start = max(n + 1, last_big + 1)
    return picked


def is_null_sequence_of_sets(sets: Sequence, u) -> int | None:
    """Least 1-based ``N`` with every point of ``sets[n]``, ``n >= N``, inside the open ``u``-ball.

    ``None`` when the last listed set already leaves the ball.
    """
    u = as_radius(u)
    N = len(sets) + 1
    while N > 1 and all(p.norm() < u for p in sets[N - 2]):
        N -= 1
    if sets and N == len(sets) + 1:
        return None
    return N


@dataclass(frozen=True)
class CompactnessVerdict:
    compact: bool
    indices: tuple
    radii: tuple
    failing_radius: Fraction | None = None

    def to_dict(self) -> dict:
        return {
            "kind": "compact-box" if self.compact else "not-compact",
            "scope": "finite-scale",
            "indices": list(self.indices),
            "radii": [format_rational(r) for r in self.radii],
            "failing_radius": None if self.failing_radius is None
            else format_rational(self.failing_radius),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CompactnessVerdict":
        fr = data.get("failing_radius")
        return cls(
            compact=data["kind"] == "compact-box",
            indices=tuple(data["indices"]),
            radii=tuple(parse_rational(r) for r in data["radii"]),
            failing_radius=None if fr is None else parse_rational(fr),
        )


def compactness_check(per_coordinate: Sequence, radius_schedule: Sequence) -> CompactnessVerdict:
    """Test whether the coordinate images form a null sequence at every listed scale.

    ``per_coordinate[n]`` is the (finite, hence compact) image of the
    candidate set under the ``n``-th coordinate projection.
    """
    radii = tuple(as_radius(r) for r in radius_schedule)
    indices = []
    for r in radii:
        N = is_null_sequence_of_sets(per_coordinate, r)
        if N is None:
            return CompactnessVerdict(False, tuple(indices), radii, r)
        indices.append(N)
    return CompactnessVerdict(True, tuple(indices), radii)


def points_from_texts(texts: Sequence[str]) -> list[Point]:
    return [_parse_point(t) for t in texts]
