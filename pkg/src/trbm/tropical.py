"""The tropicalized RBM parameterization and its image geometry.

For parameters (W, b, c) the map sends each visible state v to the best
score ``max over h of (h.Wv + b.v + c.h)``, giving a point of tropical
projective space: a vector of length 2^n read modulo the all-ones
direction.  On the cone of parameters inducing fixed slicings the map is
linear with matrix ``(A | A_C1 | ... | A_Ck)``, which reduces the image
dimension to a maximum-rank search over k-tuples of slicings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from random import Random
from typing import Optional, Sequence, TextIO

from .codes import code_to_slicings, hamming_code, shortened_hamming_code
from .cube import (Slicing, all_vertices, enumerate_slicings, vertex_coords)
from .linalg import Matrix, rank
from .lp import LinearSystem, solve_feasibility
from .parallel import parallel_map

Q = Fraction

EXHAUSTIVE_GUARD = 20_000


def _qtuple(xs) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in xs)


@dataclass(frozen=True)
class TropParams:
    """Parameters (W, b, c) with W of shape k x n."""

    n: int
    k: int
    weights: tuple[tuple[Fraction, ...], ...]
    visible_bias: tuple[Fraction, ...]
    hidden_bias: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.k or len(self.hidden_bias) != self.k:
            raise ValueError("hidden dimension mismatch")
        if len(self.visible_bias) != self.n \
                or any(len(row) != self.n for row in self.weights):
            raise ValueError("visible dimension mismatch")

    @classmethod
    def build(cls, weights, visible_bias, hidden_bias) -> "TropParams":
        w = tuple(_qtuple(row) for row in weights)
        b = _qtuple(visible_bias)
        c = _qtuple(hidden_bias)
        return cls(len(b), len(c), w, b, c)


@dataclass(frozen=True)
class TropicalPoint:
    """A 2^n vector modulo the all-ones direction, lexicographic order."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise ValueError("expected 2^n coordinates")

    @classmethod
    def build(cls, n: int, values) -> "TropicalPoint":
        return cls(n, _qtuple(values))

    def normalized(self) -> tuple[Fraction, ...]:
        base = self.values[0]
        return tuple(x - base for x in self.values)

    def __eq__(self, other):
        return (isinstance(other, TropicalPoint) and self.n == other.n
                and self.normalized() == other.normalized())

    def __hash__(self):
        return hash((self.n, self.normalized()))


def tropical_morphism(params: TropParams) -> TropicalPoint:
    """Best-score vector: max over hidden states, one value per v."""
    n, k = params.n, params.k
    values = []
    for v in all_vertices(n):
        coords = vertex_coords(v, n)
        base = sum((params.visible_bias[j] * coords[j] for j in range(n)),
                   Q(0))
        unit = [sum((params.weights[i][j] * coords[j] for j in range(n)),
                    params.hidden_bias[i]) for i in range(k)]
        best = None
        for h in range(1 << k):
            score = sum((unit[i] for i in range(k) if h >> (k - 1 - i) & 1),
                        Q(0))
            if best is None or score > best:
                best = score
        values.append(base + best)
    return TropicalPoint(n, tuple(values))


class AmbiguousArgmax(ValueError):
    """Raised when some visible state has a tied best hidden state."""

    def __init__(self, ties: list[tuple[int, list[int]]], n: int, k: int):
        self.ties = ties
        states = ", ".join(
            f"v={v:0{n}b} (h in {{{', '.join(format(h, f'0{k}b') for h in hs)}}})"
            for v, hs in ties)
        super().__init__(f"argmax not unique at {states}; "
                         "parameters lie on a cone boundary")


def inference_function(params: TropParams) -> dict[int, int]:
    """The explanation map v -> argmax_h of the score, as vertex indices.

    The score separates over hidden units, so coordinate i of the argmax
    is the threshold function of W_i . v + c_i; any unit sitting exactly
    on its hyperplane makes the argmax non-unique, which is an error.
    """
    n, k = params.n, params.k
    out: dict[int, int] = {}
    ties: list[tuple[int, list[int]]] = []
    for v in all_vertices(n):
        coords = vertex_coords(v, n)
        h = 0
        tied_units = []
        for i in range(k):
            act = sum((params.weights[i][j] * coords[j] for j in range(n)),
                      params.hidden_bias[i])
            if act == 0:
                tied_units.append(i)
            elif act > 0:
                h |= 1 << (k - 1 - i)
        if tied_units:
            winners = [h]
            for i in tied_units:
                winners = [w | bit for w in winners
                           for bit in (0, 1 << (k - 1 - i))]
            ties.append((v, sorted(set(winners))))
        else:
            out[v] = h
    if ties:
        raise AmbiguousArgmax(ties, n, k)
    return out


def slicing_matrix(n: int, slicings: Sequence[Slicing]) -> Matrix:
    """The 2^n x (n + k(n+1)) block matrix (A | A_C1 | ... | A_Ck)."""
    rows = []
    for v in all_vertices(n):
        coords = vertex_coords(v, n)
        row = list(coords)
        for s in slicings:
            if v in s.positive:
                row.extend((1,) + coords)
            else:
                row.extend([0] * (n + 1))
        rows.append(row)
    return Matrix(rows)


@dataclass(frozen=True)
class DimensionResult:
    n: int
    k: int
    strategy: str
    max_rank: int
    dim: int
    certified: bool
    witness: tuple[Slicing, ...]


def _rank_chunk(args) -> tuple[int, int]:
    n, slicing_data, combos = args
    best_rank, best_idx = 0, -1
    for idx in combos:
        rows = []
        for v in all_vertices(n):
            coords = vertex_coords(v, n)
            row = list(coords)
            for i in idx:
                mask = slicing_data[i]
                if mask >> v & 1:
                    row.extend((1,) + coords)
                else:
                    row.extend([0] * (n + 1))
            rows.append(row)
        r = rank(Matrix(rows))
        if r > best_rank:
            best_rank, best_idx = r, idx
    return best_rank, best_idx


def tropical_dimension(n: int, k: int, strategy: str = "exhaustive",
                       seed: int = 0, restarts: int = 8,
                       allow_long: bool = False,
                       threads: int = 1) -> DimensionResult:
    """Dimension of the image fan as a maximum-rank search.

    ``exhaustive`` certifies the true maximum over all k-subsets of
    slicings; ``code_based`` and ``greedy_random`` produce lower bounds,
    certified only when they meet min(nk+n+k, 2^n - 1).
    """
    if strategy == "exhaustive":
        slicings = enumerate_slicings(n, allow_long=allow_long)
        total = 1
        for i in range(k):
            total = total * (len(slicings) - i) // (i + 1)
        if total > EXHAUSTIVE_GUARD and not allow_long:
            raise ValueError(
                f"{total} slicing tuples exceed the exhaustive guard; "
                "enable allow_long")
        max_rank, witness = _search_exhaustive(n, k, slicings, threads)
        certified = True
    elif strategy == "code_based":
        witness = _code_slicings(n, k)
        max_rank = rank(slicing_matrix(n, witness))
        certified = False
    elif strategy == "greedy_random":
        max_rank, witness = _search_greedy(n, k, seed, restarts)
        certified = False
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    expected = min(n * k + n + k, 1 << n)
    if max_rank > expected:
        raise AssertionError("rank exceeded the parameter-count bound")
    dim = min(max_rank, (1 << n) - 1)
    if dim == min(n * k + n + k, (1 << n) - 1):
        certified = True
    return DimensionResult(n, k, strategy, max_rank, dim, certified,
                           tuple(witness))


def _search_exhaustive(n, k, slicings, threads):
    target = min(n * k + n + k, 1 << n)
    combos = list(combinations(range(len(slicings)), k))
    slicing_data = [s.mask for s in slicings]
    chunk = max(1, len(combos) // max(1, threads * 8))
    batches = [(n, slicing_data, combos[i:i + chunk])
               for i in range(0, len(combos), chunk)]
    best_rank, best_idx = 0, None
    for r, idx in parallel_map(_rank_chunk, batches, threads):
        if r > best_rank:
            best_rank, best_idx = r, idx
        if best_rank == target:
            break
    return best_rank, tuple(slicings[i] for i in best_idx)


def _code_slicings(n: int, k: int) -> tuple[Slicing, ...]:
    if n >= 3 and (n & (n + 1)) == 0:          # n = 2^ell - 1
        code = hamming_code((n + 1).bit_length() - 1)
    else:
        code = shortened_hamming_code(n)
    balls = code_to_slicings(code)
    if k > len(balls):
        raise ValueError(
            f"code of size {len(balls)} cannot seed k={k} slicings; "
            "use greedy_random")
    return tuple(balls[:k])


def _random_slicing(n: int, rng: Random) -> Slicing:
    while True:
        omega = tuple(Q(rng.randint(-2 * n, 2 * n)) for _ in range(n))
        c = Q(rng.randint(-2 * n, 2 * n))
        margins = [sum((omega[j] * x for j, x in
                        enumerate(vertex_coords(v, n))), c)
                   for v in all_vertices(n)]
        if any(m == 0 for m in margins):
            continue
        pos = frozenset(v for v in all_vertices(n) if margins[v] > 0)
        return Slicing(n, pos, omega, c)


def _search_greedy(n, k, seed, restarts):
    rng = Random(seed)
    target = min(n * k + n + k, 1 << n)
    try:
        seed_slicings = list(_code_slicings(n, k))
    except ValueError:
        seed_slicings = None
    best_rank, best = 0, None
    for attempt in range(max(1, restarts)):
        if attempt == 0 and seed_slicings is not None:
            current = list(seed_slicings)
        else:
            current = [_random_slicing(n, rng) for _ in range(k)]
        cur_rank = rank(slicing_matrix(n, current))
        for _ in range(60 * k):
            if cur_rank == target:
                break
            pos = rng.randrange(k)
            cand = current.copy()
            cand[pos] = _random_slicing(n, rng)
            cand_rank = rank(slicing_matrix(n, cand))
            if cand_rank > cur_rank:
                current, cur_rank = cand, cand_rank
        if cur_rank > best_rank:
            best_rank, best = cur_rank, current
        if best_rank == target:
            break
    return best_rank, tuple(best)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    slicing: Optional[Slicing] = None
    visible_bias: Optional[tuple[Fraction, ...]] = None
    omega: Optional[tuple[Fraction, ...]] = None
    c: Optional[Fraction] = None
    shift: Optional[Fraction] = None

    def params(self) -> TropParams:
        if not self.member:
            raise ValueError("no parameters for a non-member")
        return TropParams.build([self.omega], self.visible_bias, [self.c])


def tropical_membership(q: TropicalPoint,
                        threads: int = 1) -> MembershipResult:
    """Image membership for the one-hidden-node map, by one solve per slicing.

    q belongs to the image iff for some slicing C there are (b, omega, c)
    and a shift mu with q(v) = b.v + mu off C and q(v) = b.v + omega.v +
    c + mu on C, where omega.v + c >= 0 on C and <= 0 off C.  Cones are
    taken closed, so fan boundary points are members.
    """
    n = q.n
    if n > 4:
        raise ValueError("membership iterates all slicings; needs n <= 4")
    for s in enumerate_slicings(n):
        result = _membership_one(q, s)
        if result is not None:
            return result
    return MembershipResult(member=False)


def _membership_one(q: TropicalPoint,
                    s: Slicing) -> Optional[MembershipResult]:
    n = q.n
    nv = 2 * n + 2      # variables: b (n), omega (n), c, mu
    zero = [Q(0)] * n
    eq, weak = [], []
    for v in all_vertices(n):
        coords = list(vertex_coords(v, n))
        gate = coords + [Q(1)]
        if v in s.positive:
            eq.append(coords + coords + [Q(1), Q(1), -q.values[v]])
            weak.append(zero + gate + [Q(0), Q(0)])
        else:
            eq.append(coords + zero + [Q(0), Q(1), -q.values[v]])
            weak.append(zero + [-g for g in gate] + [Q(0), Q(0)])
    witness = solve_feasibility(
        LinearSystem.build(nv, weak=weak, eq=eq))
    if witness is None:
        return None
    return MembershipResult(True, s, witness[:n], witness[n:2 * n],
                            witness[2 * n], witness[2 * n + 1])


def count_inference_functions(n: int, k: int) -> int:
    """Number of realizable explanation maps: (threshold count)^k."""
    if n > 4:
        raise ValueError("needs the slicing census; supported for n <= 4")
    return len(enumerate_slicings(n)) ** k


def write_tropical_point(q: TropicalPoint, stream: TextIO) -> None:
    for x in q.values:
        stream.write(f"{x}\n")


def read_tropical_point(stream: TextIO) -> TropicalPoint:
    values = [Q(line.strip()) for line in stream if line.strip()]
    n = (len(values) - 1).bit_length()
    if len(values) != 1 << n:
        raise ValueError("expected 2^n values")
    return TropicalPoint(n, tuple(values))
