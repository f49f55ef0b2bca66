"""Binary packing and covering codes and their cube slicings.

Codewords are integers in [0, 2^n); coordinate j (1-based) is the bit at
position n - j, matching the cube vertex indexing in :mod:`trbm.cube`.
Two quantities drive the dimension results downstream: A2(n, 3), the
largest code with pairwise Hamming distance >= 3, and K2(n, 1), the
smallest code whose radius-1 balls cover all strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor, log2
from typing import Optional, TextIO

from .cube import Slicing, all_vertices, vertex_coords, vertex_weight

Q = Fraction


@dataclass(frozen=True)
class BinaryCode:
    n: int
    words: frozenset[int]

    def __post_init__(self):
        if not self.words:
            raise ValueError("code must be nonempty")
        if any(w < 0 or w >> self.n for w in self.words):
            raise ValueError("codeword out of range")

    def sorted_words(self) -> list[int]:
        return sorted(self.words)


def hamming_distance(a: int, b: int) -> int:
    return bin(a ^ b).count("1")


def min_distance(code: BinaryCode) -> int:
    """Minimum pairwise Hamming distance; undefined for singleton codes."""
    words = code.sorted_words()
    if len(words) < 2:
        raise ValueError("minimum distance undefined for a singleton code")
    best = code.n + 1
    for i, a in enumerate(words):
        for b in words[i + 1:]:
            d = hamming_distance(a, b)
            if d < best:
                best = d
                if best == 1:
                    return best
    return best


def covering_radius(code: BinaryCode) -> int:
    """Largest distance from any n-bit string to the nearest codeword.

    Multi-source breadth-first search over the hypercube graph, one edge
    per bit flip.
    """
    n = code.n
    dist = [-1] * (1 << n)
    frontier = list(code.words)
    for w in frontier:
        dist[w] = 0
    radius = 0
    while frontier:
        nxt = []
        for w in frontier:
            for j in range(n):
                u = w ^ (1 << j)
                if dist[u] < 0:
                    dist[u] = dist[w] + 1
                    nxt.append(u)
        if nxt:
            radius = dist[nxt[0]]
        frontier = nxt
    return radius


def hamming_code(ell: int) -> BinaryCode:
    """The perfect single-error-correcting code of length 2^ell - 1.

    Built as the GF(2) kernel of the check matrix whose columns are the
    binary expansions of 1 .. 2^ell - 1.
    """
    if ell < 2:
        raise ValueError("ell must be at least 2")
    n = (1 << ell) - 1
    # check matrix rows over GF(2), one per parity bit
    rows = []
    for bit in range(ell):
        mask = 0
        for col in range(1, n + 1):
            if col >> bit & 1:
                mask |= 1 << (n - col)
        rows.append(mask)
    basis = _gf2_kernel_basis(rows, n)
    words = {0}
    for vec in basis:
        words |= {w ^ vec for w in words}
    return BinaryCode(n, frozenset(words))


def _gf2_kernel_basis(rows: list[int], n: int) -> list[int]:
    rows = [r for r in rows if r]
    pivots = []
    reduced = []
    for row in rows:
        for p, r in zip(pivots, reduced):
            if row >> p & 1:
                row ^= r
        if row:
            pivots.append(row.bit_length() - 1)
            reduced.append(row)
    basis = []
    for j in range(n):
        if j in pivots:
            continue
        vec = 1 << j
        for p, r in zip(pivots, reduced):
            if r >> j & 1:
                vec |= 1 << p
        basis.append(vec)
    return basis


def varshamov_lower(n: int) -> int:
    """Guaranteed packing size: A2(n, 3) >= 2^(n - ceil(log2(n+1)))."""
    if n < 3:
        raise ValueError("bound stated for n >= 3")
    return 1 << (n - ceil(log2(n + 1)))


def covering_upper(n: int) -> int:
    """Guaranteed covering size: K2(n, 1) <= 2^(n - floor(log2(n+1)))."""
    return 1 << (n - floor(log2(n + 1)))


def code_to_slicings(code: BinaryCode) -> list[Slicing]:
    """One slicing per codeword: its radius-1 Hamming ball.

    The ball around w is cut off by omega_j = 2 w_j - 1 and
    c = 3/2 - weight(w), since then omega.v + c = 3/2 - d(v, w).
    Requires minimum distance >= 3 so the balls are pairwise disjoint;
    a singleton code is allowed (disjointness is vacuous).
    """
    if len(code.words) > 1 and min_distance(code) < 3:
        raise ValueError("balls overlap: minimum distance below 3")
    n = code.n
    out = []
    for w in code.sorted_words():
        ball = frozenset([w] + [w ^ (1 << j) for j in range(n)])
        omega = tuple(Q(2 * x - 1) for x in vertex_coords(w, n))
        out.append(Slicing(n, ball, omega, Q(3, 2) - vertex_weight(w)))
    return out


def exact_packing_size(n: int) -> int:
    """A2(n, 3) by clique search; the first codeword is fixed at zero."""
    if n < 3 or n > 5:
        raise ValueError("exhaustive packing supported for 3 <= n <= 5")
    candidates = [w for w in all_vertices(n) if vertex_weight(w) >= 3]

    def grow(chosen: list[int], pool: list[int]) -> int:
        best = len(chosen)
        for i, w in enumerate(pool):
            rest = [u for u in pool[i + 1:] if hamming_distance(u, w) >= 3]
            best = max(best, grow(chosen + [w], rest))
        return best

    return grow([0], candidates)


def exact_covering_size(n: int) -> int:
    """K2(n, 1) by exhaustive set cover over radius-1 balls."""
    if n < 1 or n > 4:
        raise ValueError("exhaustive covering supported for 1 <= n <= 4")
    full = (1 << (1 << n)) - 1
    balls = []
    for w in all_vertices(n):
        mask = 1 << w
        for j in range(n):
            mask |= 1 << (w ^ (1 << j))
        balls.append(mask)
    for k in range(1, (1 << n) + 1):
        for centers in combinations(range(1 << n), k):
            cover = 0
            for c in centers:
                cover |= balls[c]
            if cover == full:
                return k
    raise AssertionError("full code always covers")


def exact_small_values() -> dict[str, dict[int, int]]:
    """Exhaustively computed packing and covering numbers at tiny n."""
    return {
        "A2": {n: exact_packing_size(n) for n in (3, 4, 5)},
        "K2": {n: exact_covering_size(n) for n in (1, 2, 3, 4)},
    }


@dataclass(frozen=True)
class KnownBounds:
    k_le: int            # largest k with the expected dimension guaranteed
    k_ge: Optional[int]  # smallest k with full dimension, when recorded


# Published special values: packing lower bounds A2(n,3) (column k_le) and
# covering upper bounds K2(n,1) (column k_ge).  Powers of two come from
# Hamming or shortened-Hamming constructions; the composite entries are
# best known nonlinear codes from the standard tables.
_KNOWN_BOUNDS: dict[int, KnownBounds] = {
    5: KnownBounds(2**2, 7),
    6: KnownBounds(2**3, 12),
    7: KnownBounds(2**4, 2**4),
    8: KnownBounds(2**2 * 5, 2**5),
    9: KnownBounds(2**3 * 5, 62),
    10: KnownBounds(2**3 * 9, 120),
    11: KnownBounds(2**4 * 9, 192),
    12: KnownBounds(2**8, 380),
    13: KnownBounds(2**9, 736),
    14: KnownBounds(2**10, 1408),
    15: KnownBounds(2**11, 2**11),
    16: KnownBounds(2**5 * 85, 2**12),
    17: KnownBounds(2**6 * 83, 2**13),
    18: KnownBounds(2**8 * 41, 2**14),
    19: KnownBounds(2**12 * 5, 31744),
    20: KnownBounds(2**12 * 9, 63488),
    21: KnownBounds(2**13 * 9, 122880),
    22: KnownBounds(2**14 * 9, 245760),
    23: KnownBounds(2**15 * 9, 393216),
    24: KnownBounds(2**19, 786432),
    25: KnownBounds(2**20, 1556480),
    26: KnownBounds(2**21, 3112960),
    27: KnownBounds(2**22, 6029312),
    28: KnownBounds(2**23, 12058624),
    29: KnownBounds(2**24, 23068672),
    30: KnownBounds(2**25, 46137344),
    31: KnownBounds(2**26, 2**26),
    32: KnownBounds(2**20 * 85, 2**27),
    33: KnownBounds(2**21 * 85, 2**28),
    # beyond n = 33 only packing bounds are recorded
    35: KnownBounds(2**23 * 83, None),
    37: KnownBounds(2**26 * 41, None),
    39: KnownBounds(2**31 * 5, None),
    47: KnownBounds(2**38 * 9, None),
    63: KnownBounds(2**57, None),
    70: KnownBounds(2**43 * 1657009, None),
    71: KnownBounds(2**63 * 3, None),
    75: KnownBounds(2**63 * 41, None),
    79: KnownBounds(2**70 * 5, None),
    95: KnownBounds(2**85 * 9, None),
    127: KnownBounds(2**120, None),
    141: KnownBounds(2**113 * 1657009, None),
    143: KnownBounds(2**134 * 3, None),
    151: KnownBounds(2**138 * 41, None),
    159: KnownBounds(2**149 * 5, None),
    163: KnownBounds(2**151 * 19, None),
    191: KnownBounds(2**180 * 9, None),
    255: KnownBounds(2**247, None),
    270: KnownBounds(2**202 * 1021273028302258913, None),
    283: KnownBounds(2**254 * 1657009, None),
    287: KnownBounds(2**277 * 3, None),
    300: KnownBounds(2**220 * 3348824985082075276195, None),
    303: KnownBounds(2**289 * 41, None),
    319: KnownBounds(2**308 * 5, None),
    327: KnownBounds(2**314 * 19, None),
    383: KnownBounds(2**371 * 9, None),
    511: KnownBounds(2**502, None),
    512: KnownBounds(2**443 * 1021273028302258913, None),
}


def table_known_bounds(n: int) -> Optional[KnownBounds]:
    return _KNOWN_BOUNDS.get(n)


def write_code(code: BinaryCode, stream: TextIO) -> None:
    stream.write(f"n={code.n}\n")
    for w in code.sorted_words():
        stream.write(format(w, f"0{code.n}b") + "\n")


def read_code(stream: TextIO) -> BinaryCode:
    header = stream.readline().strip()
    if not header.startswith("n="):
        raise ValueError("code file must start with n=<length>")
    n = int(header[2:])
    words = set()
    for line in stream:
        line = line.strip()
        if line:
            words.add(int(line, 2))
    return BinaryCode(n, frozenset(words))


def shortened_hamming_code(n: int) -> BinaryCode:
    """A distance-3 code of length n and size 2^(n - ceil(log2(n+1))).

    Shortens the next Hamming code: keep codewords vanishing on the last
    coordinates, then drop those coordinates.  Realizes the packing lower
    bound constructively.
    """
    if n < 2:
        raise ValueError("length must be at least 2")
    ell = ceil(log2(n + 1))
    big = hamming_code(ell)
    drop = big.n - n
    words = frozenset(w >> drop for w in big.words
                      if w & ((1 << drop) - 1) == 0)
    return BinaryCode(n, words)
