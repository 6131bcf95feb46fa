"""Certified construction of a topological generator of c0(T).

The generator is built stage by stage. Stage ``m`` fixes an integer ``n_m``
and a closed rational box ``K_m`` in ``T^m`` such that

(i)   ``1 = n_0 < n_1 < n_2 < ...``;
(ii)  for every ``z`` in ``K_m`` the multiples ``{kz : |k| <= n_m}`` are
      ``eps_m``-dense in ``T^m`` (max metric), ``eps_m = 1/(2^m n_{m-1})``;
(iii) ``K_m`` restricted to its first ``m - 1`` coordinates lies in ``K_{m-1}``;
(iv)  the ``m``-th coordinate of ``K_m`` lies in the open ball of radius
      ``1/(2^m n_{m-1})`` around 0.

Boxes are centered at points ``(a_1/q_1, ..., a_m/q_m)`` with pairwise
coprime denominators, so by the Chinese remainder theorem the multiples of
the center fill the whole product grid ``prod (1/q_i) Z / Z`` once
``n_m >= floor(q_1 ... q_m / 2)``. Density of the center is then exact, and a
perturbation of at most ``r`` per coordinate moves each multiple by at most
``n_m r``, which the box radius is chosen to absorb.

Any point of the nested boxes is a generator; :func:`approximate_target`
turns the stage data into explicit multiples approximating a target.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ambient import Element, T, format_rational, parse_rational
from .sequences import Interval, NullSeq, d, seq_scalar_mul

__all__ = [
    "OrbitGaps",
    "DensityCertificate",
    "Box",
    "DensePoint",
    "StageRecord",
    "GeneratorTrace",
    "Approximation",
    "ConstructionError",
    "InsufficientDepth",
    "TraceVerification",
    "orbit_gaps",
    "in_dense_set",
    "joint_density",
    "find_dense_point",
    "build_generator",
    "verify_trace",
    "approximate_target",
    "stage_epsilon",
]

TRACE_FORMAT = "trace-v1"
DEFAULT_BUDGET = 4096
MESH_WORK_LIMIT = 20_000_000
ENUMERATION_LIMIT = 200_000_000


def _circle_value(z) -> Fraction:
    if isinstance(z, Element):
        if z.group != T:
            raise ValueError("orbit computations are on the circle")
        return z.value
    if isinstance(z, float):
        raise TypeError("exact rationals only")
    return Fraction(z) % 1


def _frac(x) -> str:
    return format_rational(x)


# ---------------------------------------------------------------------------
# one-dimensional orbits


@dataclass(frozen=True)
class OrbitGaps:
    """Sorted multiples of ``z`` on the circle and the circular gaps between them."""

    z: Fraction
    n: int
    symmetric: bool
    points: tuple
    gaps: tuple

    @property
    def max_gap(self) -> Fraction:
        return max(self.gaps)

    def gap_counts(self) -> Counter:
        return Counter(self.gaps)


def orbit_gaps(z, n: int, symmetric: bool = True) -> OrbitGaps:
    """Multiples ``kz mod 1`` for ``|k| <= n`` (or ``0 <= k <= n``), deduplicated and sorted."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = _circle_value(z)
    p, q = z.numerator, z.denominator
    ks = range(-n, n + 1) if symmetric else range(0, n + 1)
    residues = sorted({k * p % q for k in ks})
    points = tuple(Fraction(r, q) for r in residues)
    gaps = [Fraction(b - a, q) for a, b in zip(residues, residues[1:])]
    gaps.append(Fraction(residues[0] + q - residues[-1], q))
    return OrbitGaps(z, n, symmetric, points, tuple(gaps))


# ---------------------------------------------------------------------------
# density certificates


@dataclass(frozen=True)
class DensityCertificate:
    """Exact evidence about the density of ``{kz : |k| <= n}`` in ``T^m``.

    ``max_gap`` is twice a certified covering radius: every point of the
    torus lies within ``max_gap / 2`` of some multiple. For ``m = 1`` it is the
    largest circular gap of the sorted multiples. The set is
    ``epsilon``-dense whenever ``max_gap < 2 * epsilon``.
    """

    z: tuple
    n: int
    epsilon: Fraction
    method: str  # "orbit-gaps", "crt-grid" or "mesh-grid"
    max_gap: Fraction
    evidence: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.max_gap < 2 * self.epsilon

    def to_dict(self) -> dict:
        return {
            "z": [_frac(c) for c in self.z],
            "n": self.n,
            "epsilon": _frac(self.epsilon),
            "method": self.method,
            "max_gap": _frac(self.max_gap),
            "holds": self.holds,
            "evidence": self.evidence,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityCertificate":
        cert = cls(
            z=tuple(parse_rational(c) for c in data["z"]),
            n=data["n"],
            epsilon=parse_rational(data["epsilon"]),
            method=data["method"],
            max_gap=parse_rational(data["max_gap"]),
            evidence=data["evidence"],
        )
        if "holds" in data and data["holds"] != cert.holds:
            raise ValueError("certificate 'holds' flag disagrees with its data")
        return cert


def in_dense_set(z, m: int, n: int) -> tuple[bool, DensityCertificate]:
    """Whether ``{-nz, ..., nz}`` is ``1/m``-dense in the circle, with the gap data."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    cert = _orbit_certificate(_circle_value(z), n, Fraction(1, m))
    return cert.holds, cert


def _orbit_certificate(z: Fraction, n: int, eps: Fraction) -> DensityCertificate:
    og = orbit_gaps(z, n)
    counts = og.gap_counts()
    evidence = {
        "multiples": len(og.points),
        "gaps": {_frac(g): counts[g] for g in sorted(counts)},
    }
    return DensityCertificate((z,), n, eps, "orbit-gaps", og.max_gap, evidence)


def _crt_structure(z: Sequence[Fraction], n: int) -> tuple[list[int], list[int], int] | None:
    """Numerators and denominators when the multiples of ``z`` fill a product grid."""
    nums = [c.numerator for c in z]
    dens = [c.denominator for c in z]
    for i in range(len(dens)):
        for j in range(i + 1, len(dens)):
            if math.gcd(dens[i], dens[j]) != 1:
                return None
    Q = math.prod(dens)
    if n < Q // 2:
        return None
    return nums, dens, Q


def joint_density(z: Sequence, n: int, epsilon, method: str = "auto") -> DensityCertificate:
    """Certify (or refute) that ``{kz : |k| <= n}`` is ``epsilon``-dense in ``T^m``.

    ``method="auto"`` uses sorted gaps for ``m = 1``, the product-grid
    argument when the center has pairwise coprime denominators, and the mesh
    check otherwise. A failing certificate (``holds`` false) is a refusal;
    for the mesh method its evidence names an uncovered grid point.
    """
    zs = tuple(_circle_value(c) for c in z)
    eps = Fraction(epsilon)
    if not zs:
        raise ValueError("need at least one coordinate")
    if n < 1 or eps <= 0:
        raise ValueError("n and epsilon must be positive")
    if method == "auto":
        if len(zs) == 1:
            method = "orbit-gaps"
        elif _crt_structure(zs, n) is not None:
            method = "crt-grid"
        else:
            method = "mesh-grid"
    if method == "orbit-gaps":
        if len(zs) != 1:
            raise ValueError("orbit-gaps certificates are one-dimensional")
        return _orbit_certificate(zs[0], n, eps)
    if method == "crt-grid":
        crt = _crt_structure(zs, n)
        if crt is None:
            raise ValueError("center does not have the product-grid structure")
        nums, dens, Q = crt
        evidence = {"numerators": nums, "denominators": dens, "grid_size": Q}
        return DensityCertificate(zs, n, eps, "crt-grid", Fraction(1, min(dens)), evidence)
    if method == "mesh-grid":
        return _mesh_certificate(zs, n, eps)
    raise ValueError(f"unknown method {method!r}")


def _mesh_certificate(zs: tuple, n: int, eps: Fraction) -> DensityCertificate:
    # grid of mesh 1/N <= eps/2; every point is within 1/(2N) of the grid
    m = len(zs)
    N = math.ceil(2 / eps)
    work = N ** m * (2 * n + 1)
    if work > MESH_WORK_LIMIT:
        raise ValueError(f"mesh check too large ({work} distance evaluations)")
    L = math.lcm(N, *(c.denominator for c in zs))
    ks = np.arange(-n, n + 1, dtype=object)
    mults = np.array([[(int(k) * c.numerator * (L // c.denominator)) % L for c in zs] for k in ks],
                     dtype=np.int64)
    step = L // N
    worst, worst_point = -1, None
    for idx in np.ndindex(*(N,) * m):
        g = np.array(idx, dtype=np.int64) * step
        diff = (mults - g) % L
        dist = np.minimum(diff, L - diff).max(axis=1).min()
        if dist > worst:
            worst, worst_point = int(dist), idx
    radius = Fraction(worst, L) + Fraction(1, 2 * N)
    evidence = {
        "mesh": N,
        "worst_grid_point": [_frac(Fraction(i, N)) for i in worst_point],
        "worst_distance": _frac(Fraction(worst, L)),
    }
    if not radius < eps:
        evidence["uncovered"] = evidence["worst_grid_point"]
    return DensityCertificate(zs, n, eps, "mesh-grid", 2 * radius, evidence)


# ---------------------------------------------------------------------------
# candidate search


@dataclass(frozen=True)
class Box:
    """Closed box ``prod [center_i - radius_i, center_i + radius_i]`` on the torus."""

    centers: tuple
    radii: tuple

    def __post_init__(self):
        if len(self.centers) != len(self.radii):
            raise ValueError("centers and radii differ in length")

    @property
    def dim(self) -> int:
        return len(self.centers)

    @property
    def nonempty(self) -> bool:
        return all(r >= 0 for r in self.radii)


@dataclass(frozen=True)
class DensePoint:
    centers: tuple
    n: int
    certificate: DensityCertificate


def _candidates(lo: Fraction, hi: Fraction, q_min: int, window: int, keep: int):
    """Pairs ``(q, center)``: the least reduced ``a/q`` (mod 1) strictly inside ``(lo, hi)``."""
    out = []
    for q in range(q_min, q_min + window):
        a_lo = math.floor(lo * q) + 1
        a_hi = math.ceil(hi * q) - 1
        best = None
        for a in range(a_lo, a_hi + 1):
            if math.gcd(a, q) == 1:
                c = Fraction(a, q) % 1
                if best is None or c < best:
                    best = c
        if best is not None:
            out.append((q, best))
            if len(out) >= keep:
                break
    return out


def find_dense_point(m_stage: int, prev_box: Box | None, epsilon, new_coord_radius,
                     budget: int = DEFAULT_BUDGET, min_n: int = 0) -> DensePoint | None:
    """Search a CRT-aligned center for stage ``m_stage``.

    Coordinates ``1..m_stage-1`` must lie strictly inside ``prev_box`` and the
    last strictly inside ``(0, new_coord_radius)``. Each denominator exceeds
    ``1/epsilon``, so the grid spacing is below ``epsilon``. The winner
    minimizes ``(q_1 ... q_m, center)`` lexicographically, and
    ``n = max(floor(Q/2), min_n + 1)``. Returns ``None`` when ``budget``
    denominators per coordinate do not yield a pairwise coprime choice.
    """
    eps = Fraction(epsilon)
    rad = Fraction(new_coord_radius)
    if m_stage < 1:
        raise ValueError("stages start at 1")
    if eps <= 0 or rad <= 0:
        raise ValueError("epsilon and radius must be positive")
    prev_box = prev_box or Box((), ())
    if prev_box.dim != m_stage - 1:
        raise ValueError(f"previous box has dimension {prev_box.dim}, expected {m_stage - 1}")
    if not prev_box.nonempty or any(r == 0 for r in prev_box.radii):
        raise ValueError("previous box is empty")

    q_min = math.floor(1 / eps) + 1
    intervals = [(c - r, c + r) for c, r in zip(prev_box.centers, prev_box.radii)]
    intervals.append((Fraction(0), rad))
    per_coord = [_candidates(lo, hi, q_min, budget, keep=48) for lo, hi in intervals]
    if any(not cands for cands in per_coord):
        return None

    best: tuple | None = None

    def search(i: int, chosen: list, prod: int):
        nonlocal best
        if i == len(per_coord):
            key = (prod, tuple(c for _, c in chosen))
            if best is None or key < best:
                best = key
            return
        for q, c in per_coord[i]:
            p = prod * q
            if best is not None and p > best[0]:
                break  # denominators ascend
            if all(math.gcd(q, q2) == 1 for q2, _ in chosen):
                chosen.append((q, c))
                search(i + 1, chosen, p)
                chosen.pop()

    search(0, [], 1)
    if best is None:
        return None
    Q, centers = best
    n = max(Q // 2, min_n + 1)
    cert = joint_density(centers, n, eps)
    if not cert.holds:  # cannot happen: spacing below epsilon
        return None
    return DensePoint(centers, n, cert)


# ---------------------------------------------------------------------------
# stages and traces


def stage_epsilon(m: int, n_prev: int) -> Fraction:
    return Fraction(1, 2 ** m * n_prev)


@dataclass(frozen=True)
class StageRecord:
    m: int
    n: int
    epsilon: Fraction
    ball_radius: Fraction  # bound for the new coordinate, condition (iv)
    centers: tuple
    radii: tuple
    certificate: DensityCertificate
    slack: Fraction  # 2 * epsilon - max_gap; must exceed 2 * n * max(radii)

    @property
    def box(self) -> Box:
        return Box(self.centers, self.radii)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "epsilon": _frac(self.epsilon),
            "ball_radius": _frac(self.ball_radius),
            "centers": [_frac(c) for c in self.centers],
            "radii": [_frac(r) for r in self.radii],
            "slack": _frac(self.slack),
            "certificate": self.certificate.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StageRecord":
        return cls(
            m=data["m"],
            n=data["n"],
            epsilon=parse_rational(data["epsilon"]),
            ball_radius=parse_rational(data["ball_radius"]),
            centers=tuple(parse_rational(c) for c in data["centers"]),
            radii=tuple(parse_rational(r) for r in data["radii"]),
            certificate=DensityCertificate.from_dict(data["certificate"]),
            slack=parse_rational(data["slack"]),
        )


@dataclass(frozen=True)
class GeneratorTrace:
    stages: tuple
    canonical: bool = True
    recorded_center: NullSeq | None = field(default=None, compare=False, repr=False)

    @property
    def depth(self) -> int:
        return len(self.stages)

    @property
    def n_values(self) -> list[int]:
        return [1] + [s.n for s in self.stages]

    @property
    def tail_bound(self) -> Fraction:
        """Bound on ``|z_j|`` for every coordinate ``j`` past the last stage."""
        if not self.stages:
            return Fraction(1, 2)
        last = self.stages[-1]
        if self.canonical:
            return stage_epsilon(last.m + 1, last.n)
        return last.ball_radius / 2

    @property
    def z_center(self) -> NullSeq:
        centers = self.stages[-1].centers if self.stages else ()
        return NullSeq(T, centers, self.tail_bound)

    def to_dict(self) -> dict:
        return {
            "format": TRACE_FORMAT,
            "canonical": self.canonical,
            "stages": [s.to_dict() for s in self.stages],
            "z_center": self.z_center.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorTrace":
        if data.get("format") != TRACE_FORMAT:
            raise ValueError(f"unsupported trace format {data.get('format')!r}")
        recorded = NullSeq.from_dict(data["z_center"]) if "z_center" in data else None
        return cls(tuple(StageRecord.from_dict(s) for s in data["stages"]),
                   bool(data.get("canonical", True)), recorded)


class ConstructionError(RuntimeError):
    def __init__(self, stage: int, reason: str, partial: GeneratorTrace):
        super().__init__(f"stage {stage}: {reason}")
        self.stage = stage
        self.reason = reason
        self.partial = partial


def _dyadic_below(*bounds: Fraction) -> Fraction:
    """Largest ``1/2^j`` strictly below every bound."""
    b = min(bounds)
    if b <= 0:
        raise ValueError("no positive radius fits")
    j = 0
    while Fraction(1, 2 ** j) >= b:
        j += 1
    return Fraction(1, 2 ** j)


def build_generator(stages: int, epsilons: Sequence | None = None,
                    budget: int = DEFAULT_BUDGET) -> GeneratorTrace:
    """Run the stage induction for ``stages`` steps.

    ``epsilons`` overrides the schedule ``1/(2^m n_{m-1})``; the override is
    used both as the density tolerance and as the new-coordinate bound, and
    the trace is flagged non-canonical.
    """
    if stages < 0:
        raise ValueError("stages must be nonnegative")
    canonical = epsilons is None
    if epsilons is not None and len(epsilons) < stages:
        raise ValueError("not enough epsilon overrides")
    records: list[StageRecord] = []
    n_prev = 1
    prev_box = Box((), ())
    for m in range(1, stages + 1):
        eps = stage_epsilon(m, n_prev) if canonical else Fraction(epsilons[m - 1])
        found = find_dense_point(m, prev_box, eps, eps, budget=budget, min_n=n_prev)
        if found is None:
            raise ConstructionError(m, f"no CRT-aligned center within budget {budget}",
                                    GeneratorTrace(tuple(records), canonical))
        cert = found.certificate
        slack = 2 * eps - cert.max_gap
        bounds = [slack / (2 * found.n), eps - found.centers[-1]]
        for c, c_prev, r_prev in zip(found.centers, prev_box.centers, prev_box.radii):
            bounds.append(r_prev - T.dist(c, c_prev))
        r = _dyadic_below(*bounds)
        rec = StageRecord(m, found.n, eps, eps, tuple(found.centers), (r,) * m, cert, slack)
        records.append(rec)
        n_prev, prev_box = found.n, rec.box
    return GeneratorTrace(tuple(records), canonical)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Check:
    name: str
    stage: int
    passed: bool
    detail: str


@dataclass
class TraceVerification:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for c in self.checks:
            out[c.name] = out.get(c.name, True) and c.passed
        return out

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _enumerated_max_gap(centers: tuple, n: int, limit: int) -> tuple[Fraction | None, str]:
    """Re-derive ``max_gap`` by marking every multiple on the product grid."""
    nums = [c.numerator for c in centers]
    dens = [c.denominator for c in centers]
    Q = math.prod(dens)
    if Q > limit:
        crt = _crt_structure(centers, n)
        if crt is None:
            return None, f"grid of size {Q} exceeds enumeration limit and is not CRT-aligned"
        return Fraction(1, min(dens)), f"arithmetic: pairwise coprime denominators, n >= {Q // 2}"
    marks = np.zeros(Q, dtype=bool)
    chunk = 1 << 22
    for start in range(-n, n + 1, chunk):
        k = np.arange(start, min(start + chunk, n + 1), dtype=np.int64)
        idx = np.zeros_like(k)
        for a, q in zip(nums, dens):
            idx = idx * q + (k * a) % q
        marks[idx] = True
    hit = int(marks.sum())
    if len(centers) == 1:
        res = np.flatnonzero(marks)
        gaps = np.diff(np.append(res, res[0] + Q))
        return Fraction(int(gaps.max()), Q), f"enumerated {2 * n + 1} multiples, {hit} distinct"
    if hit == Q:
        return Fraction(1, min(dens)), f"enumerated {2 * n + 1} multiples covering all {Q} grid points"
    try:
        cert = _mesh_certificate(tuple(centers), n, Fraction(1, 2))
    except ValueError as exc:
        return None, f"grid not covered ({hit}/{Q}); {exc}"
    return cert.max_gap, f"grid not covered ({hit}/{Q}); mesh check"


def verify_trace(trace: GeneratorTrace, enumeration_limit: int = ENUMERATION_LIMIT) -> TraceVerification:
    """Re-derive every stage certificate and check conditions (i)-(iv)."""
    checks: list[Check] = []
    add = lambda name, m, ok, detail="": checks.append(Check(name, m, bool(ok), detail))  # noqa: E731
    n_prev = 1
    prev: StageRecord | None = None
    for idx, st in enumerate(trace.stages, 1):
        m = st.m
        add("indexing", m, m == idx and len(st.centers) == m == len(st.radii),
            f"stage {m} at position {idx}, dim {len(st.centers)}")
        add("(i) increasing", m, st.n > n_prev, f"n_{m} = {st.n}, n_{m - 1} = {n_prev}")
        if trace.canonical:
            want = stage_epsilon(m, n_prev)
            add("schedule", m, st.epsilon == want and st.ball_radius == want,
                f"epsilon {st.epsilon}, expected {want}")
        else:
            add("schedule", m, st.epsilon > 0 and st.ball_radius > 0, "non-canonical override")
        radii_ok = all(r > 0 for r in st.radii)
        add("nonempty box", m, radii_ok, "")
        # (ii): independent re-enumeration of the center's multiples
        gap, how = _enumerated_max_gap(tuple(st.centers), st.n, enumeration_limit)
        cert = st.certificate
        same = (gap is not None and gap == cert.max_gap and tuple(cert.z) == tuple(st.centers)
                and cert.n == st.n and cert.epsilon == st.epsilon)
        add("(ii) density", m, same and gap < 2 * st.epsilon, f"max_gap {gap}; {how}")
        r_max = max(st.radii) if st.radii else Fraction(0)
        robust = (gap is not None and st.slack == 2 * st.epsilon - gap
                  and gap + 2 * st.n * r_max < 2 * st.epsilon)
        add("robust slack", m, robust, f"slack {st.slack}, perturbation {2 * st.n * r_max}")
        if prev is not None:
            nested = all(T.dist(c, pc) + r <= pr for c, r, pc, pr in
                         zip(st.centers, st.radii, prev.centers, prev.radii))
            add("(iii) nested", m, nested, "")
        last_c, last_r = st.centers[-1], st.radii[-1]
        add("(iv) new coordinate", m, T.norm(last_c) + last_r < st.ball_radius,
            f"|c_{m}| + r = {T.norm(last_c) + last_r} vs {st.ball_radius}")
        n_prev, prev = st.n, st
    if trace.recorded_center is not None:
        add("recorded center", trace.depth, trace.recorded_center == trace.z_center,
            f"file has {trace.recorded_center}, stages give {trace.z_center}")
    return TraceVerification(checks)


# ---------------------------------------------------------------------------
# approximating targets


class InsufficientDepth(Exception):
    def __init__(self, required: int | None, available: int):
        if required is None:
            msg = "no stage can satisfy the selection inequality (tail too large)"
        else:
            msg = f"needs {required} stages, trace has {available}"
        super().__init__(msg)
        self.required = required
        self.available = available


@dataclass(frozen=True)
class Approximation:
    """``k`` with ``d(x, k z) < epsilon`` for every ``z`` in the final box.

    ``distance`` encloses ``d(x, k * z_center)``; ``bound`` is an upper bound
    valid for every point of the final box and every admissible tail.
    """

    k: int
    stage: int
    epsilon: Fraction
    distance: Interval
    bound: Fraction
    target: NullSeq

    def to_dict(self) -> dict:
        return {
            "kind": "approximation",
            "k": self.k,
            "stage": self.stage,
            "epsilon": _frac(self.epsilon),
            "distance": [_frac(self.distance.lo), _frac(self.distance.hi)],
            "bound": _frac(self.bound),
            "target": str(self.target),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Approximation":
        return cls(
            k=data["k"],
            stage=data["stage"],
            epsilon=parse_rational(data["epsilon"]),
            distance=Interval(*(parse_rational(v) for v in data["distance"])),
            bound=parse_rational(data["bound"]),
            target=NullSeq.parse(data["target"]),
        )


def _sup_beyond(x: NullSeq, m: int) -> Fraction:
    return max([x.tail] + [T.norm(v) for v in x.values[m:]])


def _selection_ok(x: NullSeq, m: int, eps: Fraction) -> bool:
    return Fraction(1, 2 ** m) + _sup_beyond(x, m) < eps / 2


def _crt_multiple(centers: tuple, x: NullSeq, n: int) -> int | None:
    crt = _crt_structure(centers, n)
    if crt is None:
        return None
    nums, dens, Q = crt
    k, mod = 0, 1
    for i, (a, q) in enumerate(zip(nums, dens), 1):
        target = round(x.coordinate(i) * q) % q
        r = target * pow(a, -1, q) % q
        # combine k (mod mod) with r (mod q)
        t = (r - k) * pow(mod, -1, q) % q
        k, mod = k + mod * t, mod * q
    if k > Q // 2:
        k -= Q
    return k


def _brute_multiple(centers: tuple, x: NullSeq, n: int) -> int:
    best_k, best = 0, None
    for k in range(-n, n + 1):
        worst = max(T.dist(x.coordinate(i), (k * c) % 1) for i, c in enumerate(centers, 1))
        if best is None or worst < best:
            best_k, best = k, worst
    return best_k


def approximate_target(trace: GeneratorTrace, x: NullSeq, epsilon) -> Approximation:
    """Find ``k`` with ``d(x, k z) < epsilon``.

    The stage ``m`` is the least one with ``2^-m + sup_{j > m} |x_j| <
    epsilon / 2``. Its density certificate guarantees some ``|k| <= n_m``
    with every ``|x_j - k z_j| < eps_m`` for ``j <= m``; coordinates past
    ``m`` are controlled by ``|x_j| + n_m |z_j|``.
    """
    if x.group != T:
        raise ValueError("targets must be sequences on the circle")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    stage = next((s for s in trace.stages if _selection_ok(x, s.m, eps)), None)
    if stage is None:
        if x.tail >= eps / 2:
            required = None
        else:
            m = 1
            while not _selection_ok(x, m, eps):
                m += 1
            required = m
        raise InsufficientDepth(required, trace.depth)

    k = _crt_multiple(stage.centers, x, stage.n)
    if k is None:
        k = _brute_multiple(stage.centers, x, stage.n)
    if abs(k) > stage.n:
        raise AssertionError(f"multiple {k} exceeds n_{stage.m} = {stage.n}")

    final = trace.stages[-1]
    z = trace.z_center
    kk = abs(k)
    bound = Fraction(0)
    for j in range(1, max(final.m, x.length) + 1):
        if j <= final.m:
            b = T.dist(x.coordinate(j), (k * final.centers[j - 1]) % 1) + kk * final.radii[j - 1]
        else:
            b = T.norm(x.coordinate(j)) + kk * z.tail
        bound = max(bound, b + x.uncertainty(j))
    bound = max(bound, x.tail + kk * z.tail)
    if bound >= eps:
        raise AssertionError(f"certified bound {bound} is not below {eps}")
    return Approximation(k, stage.m, eps, d(x, seq_scalar_mul(k, z)), bound, x)
