"""Vertices of the n-cube and their slicings.

Vertex indexing convention, used everywhere in the package: the vertex
with coordinates ``(v_1, ..., v_n)`` has index ``sum(v_j * 2**(n-j))``,
so coordinate 1 is the most significant bit and sorting indices
reproduces the lexicographic order ``000, 001, 010, ...``.

A *slicing* is a subset of cube vertices that a hyperplane strictly
separates from its complement; equivalently, the indicator of the subset
is a linear threshold function.  Slicings carry an exact rational witness
``(omega, c)`` with ``omega . v + c > 0`` exactly on the subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Optional, Sequence, TextIO

from .linalg import Matrix, nullspace, rank
from .lp import LinearSystem, solve_feasibility
from .parallel import parallel_map

Q = Fraction

SLICING_LIMIT_BRUTE = 4
SLICING_LIMIT_ARRANGEMENT = 5


def vertex_coords(v: int, n: int) -> tuple[int, ...]:
    """Coordinates (v_1, ..., v_n) of the vertex with index v."""
    return tuple((v >> (n - 1 - j)) & 1 for j in range(n))


def vertex_index(coords: Sequence[int]) -> int:
    idx = 0
    for bit in coords:
        idx = (idx << 1) | (bit & 1)
    return idx


def vertex_weight(v: int) -> int:
    return bin(v).count("1")


def all_vertices(n: int) -> range:
    return range(1 << n)


def subset_mask(subset: Iterable[int]) -> int:
    mask = 0
    for v in subset:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Slicing:
    """A separable vertex subset with an exact separating witness."""

    n: int
    positive: frozenset[int]
    omega: tuple[Fraction, ...]
    c: Fraction

    def __post_init__(self):
        if len(self.omega) != self.n:
            raise ValueError("witness length mismatch")
        for v in all_vertices(self.n):
            value = self.margin(v)
            if value == 0 or (value > 0) != (v in self.positive):
                raise ValueError(
                    f"witness does not separate vertex {v:0{self.n}b}")

    def margin(self, v: int) -> Fraction:
        coords = vertex_coords(v, self.n)
        return sum((self.omega[j] * coords[j] for j in range(self.n)),
                   self.c)

    @property
    def mask(self) -> int:
        return subset_mask(self.positive)

    def sort_key(self) -> tuple[int, int]:
        return (len(self.positive), self.mask)

    def complement(self) -> "Slicing":
        comp = frozenset(all_vertices(self.n)) - self.positive
        return Slicing(self.n, comp,
                       tuple(-w for w in self.omega), -self.c)


def is_slicing(subset: Iterable[int], n: int) -> Optional[Slicing]:
    """Exact separability test; returns a witnessed Slicing or None.

    The empty and the full vertex set are slicings (constant threshold
    functions) with witnesses omega = 0 and c = -1 or +1.
    """
    positive = frozenset(subset)
    if not positive <= set(all_vertices(n)):
        raise ValueError("subset contains a non-vertex")
    if not positive or len(positive) == 1 << n:
        c = Q(1) if positive else Q(-1)
        return Slicing(n, positive, tuple(Q(0) for _ in range(n)), c)
    strict = []
    for v in all_vertices(n):
        sign = 1 if v in positive else -1
        strict.append(tuple(sign * x for x in vertex_coords(v, n))
                      + (sign, 0))
    witness = solve_feasibility(LinearSystem.build(n + 1, strict=strict))
    if witness is None:
        return None
    return Slicing(n, positive, witness[:n], witness[n])


def _brute_chunk(args) -> list[tuple[int, tuple, Fraction]]:
    n, start, stop = args
    full = (1 << (1 << n)) - 1
    found = []
    for mask in range(start, stop):
        if mask > (full ^ mask):
            continue  # complements are derived, not re-solved
        subset = [v for v in all_vertices(n) if mask >> v & 1]
        s = is_slicing(subset, n)
        if s is not None:
            found.append((mask, s.omega, s.c))
    return found


def _enumerate_brute(n: int, threads: int) -> list[Slicing]:
    total = 1 << (1 << n)
    step = max(1, total // 256) if threads > 1 else total
    chunks = [(n, lo, min(lo + step, total)) for lo in range(0, total, step)]
    slicings: list[Slicing] = []
    for found in parallel_map(_brute_chunk, chunks, threads):
        for mask, omega, c in found:
            pos = frozenset(v for v in all_vertices(n) if mask >> v & 1)
            s = Slicing(n, pos, omega, c)
            slicings.append(s)
            comp = s.complement()
            if comp.mask != mask:
                slicings.append(comp)
    return sorted(slicings, key=Slicing.sort_key)


def _flip_chunk(args) -> list[Optional[tuple]]:
    n, jobs = args
    out = []
    for rows in jobs:
        witness = solve_feasibility(LinearSystem.build(n + 1, strict=rows))
        out.append(witness)
    return out


def _enumerate_arrangement(n: int, threads: int) -> list[Slicing]:
    """Slicings as regions of the arrangement of vertex hyperplanes.

    Hyperplanes live in R^(n+1) with coordinates (omega, c); vertex v
    contributes the hyperplane omega.v + c = 0.  Hyperplanes are inserted
    one at a time; each known region either keeps its witness or splits,
    which one strict-feasibility solve per candidate side decides.
    """
    planes = [vertex_coords(v, n) + (1,) for v in all_vertices(n)]
    zero = tuple(Q(0) for _ in range(n + 1))
    regions: list[tuple[tuple[int, ...], tuple[Fraction, ...]]] = [((), zero)]
    for plane in planes:
        jobs = []
        keep = []
        for signs, point in regions:
            value = sum((Q(plane[j]) * point[j] for j in range(n + 1)), Q(0))
            side = 1 if value > 0 else (-1 if value < 0 else 0)
            sides_to_test = (1, -1) if side == 0 else (-side,)
            if side != 0:
                keep.append((signs + (side,), point, None))
            for cand in sides_to_test:
                rows = [tuple(s * x for x in planes[i]) + (0,)
                        for i, s in enumerate(signs)]
                rows.append(tuple(cand * x for x in plane) + (0,))
                keep.append((signs + (cand,), None, len(jobs)))
                jobs.append(tuple(rows))
        chunk = max(1, len(jobs) // 64)
        batches = [(n, jobs[i:i + chunk]) for i in range(0, len(jobs), chunk)]
        results = [w for batch in parallel_map(_flip_chunk, batches, threads)
                   for w in batch]
        regions = []
        for signs, point, job_id in keep:
            if point is not None:
                regions.append((signs, point))
            elif results[job_id] is not None:
                regions.append((signs, results[job_id]))
    slicings = []
    for signs, point in regions:
        pos = frozenset(v for v in all_vertices(n) if signs[v] > 0)
        slicings.append(Slicing(n, pos, point[:n], point[n]))
    return sorted(slicings, key=Slicing.sort_key)


@lru_cache(maxsize=None)
def _enumerate_cached(n: int, strategy: str) -> tuple[Slicing, ...]:
    if strategy == "brute":
        result = _enumerate_brute(n, 1)
    else:
        result = _enumerate_arrangement(n, 1)
    return tuple(result)


def enumerate_slicings(n: int, strategy: str = "arrangement",
                       allow_long: bool = False,
                       threads: int = 1) -> list[Slicing]:
    """All slicings of the n-cube in canonical (cardinality, mask) order."""
    if strategy not in ("brute", "arrangement"):
        raise ValueError(f"unknown strategy {strategy!r}")
    limit = SLICING_LIMIT_BRUTE if strategy == "brute" \
        else SLICING_LIMIT_ARRANGEMENT
    if n < 1 or n > limit:
        raise ValueError(f"n={n} outside supported range for {strategy}")
    if strategy == "arrangement" and n >= 5 and not allow_long:
        raise ValueError("n=5 enumeration is a long-running mode; "
                         "enable allow_long")
    if threads > 1:
        if strategy == "brute":
            return _enumerate_brute(n, threads)
        return _enumerate_arrangement(n, threads)
    return list(_enumerate_cached(n, strategy))


def slicing_count(n: int, strategy: str = "arrangement",
                  allow_long: bool = False, threads: int = 1) -> int:
    return len(enumerate_slicings(n, strategy, allow_long, threads))


def count_zonotope_facets(n: int) -> int:
    """Facets of the threshold-function zonotope in R^(n+1).

    Counts distinct linear hyperplanes spanned by n-subsets of the
    generators (1, v); each contributes an antipodal facet pair.
    """
    if n < 1 or n > 4:
        raise ValueError("supported for 1 <= n <= 4")
    from itertools import combinations
    gens = [(1,) + vertex_coords(v, n) for v in all_vertices(n)]
    normals = set()
    for subset in combinations(gens, n):
        m = Matrix(subset)
        if rank(m) != n:
            continue
        kernel = nullspace(m)
        if len(kernel) != 1:
            continue
        normals.add(_primitive(kernel[0]))
    return 2 * len(normals)


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    from math import gcd
    scale = 1
    for x in vec:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def cube_symmetries(n: int) -> list[tuple[int, ...]]:
    """The 2^n n! vertex permutations induced by the cube's symmetries."""
    maps = []
    for perm in permutations(range(n)):
        for flips in product((0, 1), repeat=n):
            image = []
            for v in all_vertices(n):
                coords = vertex_coords(v, n)
                image.append(vertex_index(
                    tuple(coords[perm[j]] ^ flips[j] for j in range(n))))
            maps.append(tuple(image))
    return maps


def write_slicings(slicings: Iterable[Slicing], stream: TextIO) -> None:
    """One slicing per line: ``n:<dim> pos:<hex mask> w:<c>,<w_1>,...``."""
    for s in slicings:
        ws = ",".join([str(s.c)] + [str(x) for x in s.omega])
        stream.write(f"n:{s.n} pos:{s.mask:x} w:{ws}\n")


def read_slicings(stream: TextIO) -> list[Slicing]:
    out = []
    for line in stream:
        line = line.strip()
        if not line:
            continue
        fields = dict(part.split(":", 1) for part in line.split())
        n = int(fields["n"])
        mask = int(fields["pos"], 16)
        nums = [Q(x) for x in fields["w"].split(",")]
        pos = frozenset(v for v in all_vertices(n) if mask >> v & 1)
        out.append(Slicing(n, pos, tuple(nums[1:]), nums[0]))
    return out
