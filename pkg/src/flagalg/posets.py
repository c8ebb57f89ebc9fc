"""Finite posets: construction, intervals, chain lengths, multichains,
isomorphism/automorphism search and exhaustive generation of small posets.

Elements are dense integer indices 0..m-1; user-facing names live in a side
table on the Poset.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations


class PosetError(Exception):
    pass


class InvalidIntervalError(PosetError):
    """Raised when an interval endpoint pair is not comparable."""


class Poset:
    """An immutable finite poset given by its full order relation.

    Attributes:
        size: number of elements
        leq:  tuple of row tuples of booleans, leq[x][y] iff x <= y
        covers: ordered pairs (x, y) with y covering x
        names: element names (defaults to str(index))
    """

    __slots__ = ("size", "leq", "covers", "names", "_heights")

    def __init__(self, leq, names=None):
        m = len(leq)
        leq = tuple(tuple(bool(v) for v in row) for row in leq)
        for row in leq:
            if len(row) != m:
                raise PosetError("leq relation must be square")
        for x in range(m):
            if not leq[x][x]:
                raise PosetError(f"relation is not reflexive at {x}")
            for y in range(m):
                if x != y and leq[x][y] and leq[y][x]:
                    raise PosetError(f"relation is not antisymmetric on {{{x},{y}}}")
                if leq[x][y]:
                    for z in range(m):
                        if leq[y][z] and not leq[x][z]:
                            raise PosetError(
                                f"relation is not transitive via {x}<={y}<={z}"
                            )
        self.size = m
        self.leq = leq
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(m))
        if len(self.names) != m:
            raise PosetError("names table length mismatch")
        covers = []
        for x in range(m):
            for y in range(m):
                if x != y and leq[x][y]:
                    if not any(
                        z != x and z != y and leq[x][z] and leq[z][y] for z in range(m)
                    ):
                        covers.append((x, y))
        self.covers = tuple(sorted(covers))
        self._heights = None

    @classmethod
    def from_covers(cls, size, cover_pairs, names=None):
        """Build from cover (or general relation) pairs via transitive closure."""
        leq = [[i == j for j in range(size)] for i in range(size)]
        for (x, y) in cover_pairs:
            leq[x][y] = True
        # Floyd-Warshall closure
        for k in range(size):
            for i in range(size):
                if leq[i][k]:
                    row_i, row_k = leq[i], leq[k]
                    for j in range(size):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(size):
            for j in range(size):
                if i != j and leq[i][j] and leq[j][i]:
                    raise PosetError("cycle detected in declared relation")
        return cls(leq, names=names)

    def le(self, x, y) -> bool:
        return self.leq[x][y]

    def lt(self, x, y) -> bool:
        return x != y and self.leq[x][y]

    def interval(self, x, y):
        """The set {z : x <= z <= y}; x <= y required."""
        if not self.leq[x][y]:
            raise InvalidIntervalError(f"{x} is not <= {y}")
        return {z for z in range(self.size) if self.leq[x][z] and self.leq[z][y]}

    def length(self, x, y) -> int:
        """Longest-chain length within the interval [x, y]."""
        iv = self.interval(x, y)  # validates x <= y
        # longest path in the cover DAG restricted to the interval
        order = sorted(iv, key=lambda z: sum(1 for w in iv if self.leq[w][z]))
        best = {z: 0 for z in iv}
        for z in order:
            for (a, b) in self.covers:
                if a == z and b in iv:
                    best[b] = max(best[b], best[z] + 1)
        return best[y]

    def height(self, x) -> int:
        """Longest chain length from a minimal element up to x."""
        if self._heights is None:
            h = [0] * self.size
            order = sorted(range(self.size), key=lambda z: sum(self.leq[w][z] for w in range(self.size)))
            for z in order:
                for (a, b) in self.covers:
                    if a == z:
                        h[b] = max(h[b], h[z] + 1)
            self._heights = tuple(h)
        return self._heights[x]

    def poset_length(self) -> int:
        """l(P): maximum chain length in P (0 for an antichain)."""
        return max((self.height(x) for x in range(self.size)), default=0)

    def is_antichain(self) -> bool:
        return not self.covers

    def multichains(self, n: int):
        """All weakly increasing n-tuples in lexicographic index order."""
        if n < 1:
            raise ValueError("n must be >= 1")
        out = []

        def extend(prefix, last):
            if len(prefix) == n:
                out.append(tuple(prefix))
                return
            for y in range(self.size):
                if last is None or self.leq[last][y]:
                    prefix.append(y)
                    extend(prefix, y)
                    prefix.pop()

        extend([], None)
        return out

    def relabel(self, perm):
        """Image poset under index map x -> perm[x]."""
        m = self.size
        leq = [[False] * m for _ in range(m)]
        for x in range(m):
            for y in range(m):
                if self.leq[x][y]:
                    leq[perm[x]][perm[y]] = True
        names = [None] * m
        for x in range(m):
            names[perm[x]] = self.names[x]
        return Poset(leq, names=names)

    def dual(self):
        return Poset(tuple(zip(*self.leq)), names=self.names)

    def _invariant(self, x):
        up = sum(self.leq[x][y] for y in range(self.size)) - 1
        down = sum(self.leq[y][x] for y in range(self.size)) - 1
        return (up, down, self.height(x))

    def canonical_key(self):
        """Isomorphism-invariant canonical encoding (exact, for m <= 7)."""
        m = self.size
        best = None
        for perm in permutations(range(m)):
            bits = 0
            k = 0
            for i in range(m):
                for j in range(m):
                    if self.leq[perm[i]][perm[j]]:
                        bits |= 1 << k
                    k += 1
            if best is None or bits < best:
                best = bits
        return (m, best)


def parse_poset(text: str) -> Poset:
    """Parse the line-oriented poset file format.

    Line 1: ``elements: <name> ...``; line 2: ``covers:``; then one
    ``<name> <name>`` pair per line (first covered by second).  Lines
    starting with '#' are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("elements:"):
        raise PosetError("expected an 'elements:' line first")
    names = lines[0][len("elements:"):].split()
    if len(set(names)) != len(names):
        raise PosetError("duplicate element name")
    index = {nm: i for i, nm in enumerate(names)}
    if len(lines) < 2 or lines[1] != "covers:":
        raise PosetError("expected a 'covers:' line")
    pairs = []
    seen = set()
    for ln in lines[2:]:
        toks = ln.split()
        if len(toks) != 2:
            raise PosetError(f"malformed cover line: {ln!r}")
        for t in toks:
            if t not in index:
                raise PosetError(f"undeclared element {t!r}")
        pair = (index[toks[0]], index[toks[1]])
        if pair in seen:
            raise PosetError(f"duplicate cover: {ln!r}")
        if pair[0] == pair[1]:
            raise PosetError(f"cycle detected: element {toks[0]!r} covers itself")
        seen.add(pair)
        pairs.append(pair)
    return Poset.from_covers(len(names), pairs, names=names)


def format_poset(p: Poset) -> str:
    lines = ["elements: " + " ".join(p.names), "covers:"]
    for (x, y) in p.covers:
        lines.append(f"{p.names[x]} {p.names[y]}")
    return "\n".join(lines) + "\n"


def find_isomorphism(p: Poset, q: Poset):
    """An order isomorphism P -> Q as a list (phi[x] = image), or None.

    Exhaustive backtracking pruned by (up-degree, down-degree, height).
    """
    if p.size != q.size:
        return None
    m = p.size
    pinv = [p._invariant(x) for x in range(m)]
    qinv = [q._invariant(x) for x in range(m)]
    if sorted(pinv) != sorted(qinv):
        return None
    candidates = [[y for y in range(m) if qinv[y] == pinv[x]] for x in range(m)]
    # assign in order of fewest candidates first
    order = sorted(range(m), key=lambda x: len(candidates[x]))
    phi = [None] * m
    used = [False] * m

    def backtrack(k):
        if k == m:
            return True
        x = order[k]
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for x2 in order[:k]:
                y2 = phi[x2]
                if p.leq[x][x2] != q.leq[y][y2] or p.leq[x2][x] != q.leq[y2][y]:
                    ok = False
                    break
            if ok:
                phi[x] = y
                used[y] = True
                if backtrack(k + 1):
                    return True
                phi[x] = None
                used[y] = False
        return False

    return list(phi) if backtrack(0) else None


def automorphisms(p: Poset):
    """All order automorphisms of P, as permutation lists, sorted."""
    m = p.size
    inv = [p._invariant(x) for x in range(m)]
    out = []
    candidates = [[y for y in range(m) if inv[y] == inv[x]] for x in range(m)]
    phi = [None] * m
    used = [False] * m

    def backtrack(x):
        if x == m:
            out.append(list(phi))
            return
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for x2 in range(x):
                y2 = phi[x2]
                if p.leq[x][x2] != q_leq(y, y2) or p.leq[x2][x] != q_leq(y2, y):
                    ok = False
                    break
            if ok:
                phi[x] = y
                used[y] = True
                backtrack(x + 1)
                phi[x] = None
                used[y] = False

    q_leq = lambda a, b: p.leq[a][b]
    backtrack(0)
    return sorted(out)


def is_order_isomorphism(p: Poset, q: Poset, phi) -> bool:
    if p.size != q.size or sorted(phi) != list(range(p.size)):
        return False
    return all(
        p.leq[x][y] == q.leq[phi[x]][phi[y]]
        for x in range(p.size)
        for y in range(p.size)
    )


MAX_ENUM_SIZE = 6


@lru_cache(maxsize=None)
def enumerate_posets(m: int):
    """One representative per isomorphism class of posets of size m (m <= 6).

    Representatives are built by extending each smaller representative with a
    new maximal element over every down-closed subset, then deduplicating by
    canonical form.  Every poset arises this way since removing a maximal
    element of a size-m poset leaves a size-(m-1) poset.
    """
    if not 1 <= m <= MAX_ENUM_SIZE:
        raise ValueError(f"poset enumeration supports 1 <= m <= {MAX_ENUM_SIZE}")
    if m == 1:
        return (Poset([[True]]),)
    seen = {}
    for base in enumerate_posets(m - 1):
        k = base.size
        for mask in range(1 << k):
            down = [x for x in range(k) if mask >> x & 1]
            dset = set(down)
            if any(
                not p.issubset(dset)
                for p in ({y for y in range(k) if base.leq[y][x]} for x in down)
            ):
                continue  # not down-closed
            leq = [list(row) + [False] for row in base.leq]
            leq.append([False] * k + [True])
            for x in down:
                leq[x][k] = True
            cand = Poset(leq)
            key = cand.canonical_key()
            if key not in seen:
                seen[key] = cand
    return tuple(seen[k] for k in sorted(seen))


def chain(m: int) -> Poset:
    return Poset.from_covers(m, [(i, i + 1) for i in range(m - 1)])


def antichain(m: int) -> Poset:
    return Poset.from_covers(m, [])
