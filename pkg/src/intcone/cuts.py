"""Chvatal-Gomory cuts and Caratheodory-rank search over cone semigroups.

A linear conical inequality system keeps x feasible while c - A(x) stays in
the cone.  Pairing any dual-cone semigroup element y against the system
yields the valid inequality y*A(x) <= y*c; since both implemented cones are
self-dual, the generator streams of the PSD and SOC modules supply the y's
directly, tagged with the (root, word) provenance that produced them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import linalg, psd, soc


def _is_matrix(x) -> bool:
    return bool(x) and isinstance(x[0], tuple)


def _freeze_element(cone: str, n: int, obj):
    if cone == "psd":
        rows = tuple(tuple(int(v) for v in row) for row in obj)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("matrix element has the wrong shape")
        if not linalg.is_symmetric(rows):
            raise ValueError("matrix element must be symmetric")
        return rows
    vec = tuple(int(v) for v in obj)
    if len(vec) != n:
        raise ValueError("vector element has the wrong length")
    return vec


def pair(cone: str, y, other) -> int:
    """Dual pairing: trace inner product for PSD, dot product for SOC."""
    if cone == "psd":
        n = len(y)
        return sum(y[i][j] * other[i][j] for i in range(n) for j in range(n))
    return sum(a * b for a, b in zip(y, other))


def element_weight(cone: str, y) -> int:
    """Additive size of a semigroup element: trace for PSD, height for SOC."""
    if cone == "psd":
        return sum(y[i][i] for i in range(len(y)))
    return y[-1]


def in_semigroup(cone: str, y) -> bool:
    if cone == "psd":
        return linalg.is_psd_exact(y)
    return soc.in_cone(y)


def apply_group_word(cone: str, n: int, word, root):
    """Transport a root along a word: congruence for PSD, left action for SOC."""
    if cone == "psd":
        gens = psd.gl_generators(n)
        cur = tuple(tuple(int(v) for v in row) for row in root)
        for label in reversed(word):
            g = gens[label]
            cur = linalg.mat_mul(g, linalg.mat_mul(cur, linalg.transpose(g)))
        return cur
    return soc.apply_word(word, tuple(root))


def _default_roots(cone: str, n: int):
    if cone == "psd":
        e1 = tuple(
            tuple(1 if i == 0 and j == 0 else 0 for j in range(n))
            for i in range(n)
        )
        return (e1,) + psd.sporadic_catalog(n)
    return soc.roots(n)


@dataclass
class LCISystem:
    """Integral data of the system {x : c - sum x_i A_i in cone}."""

    cone: str
    n: int
    c: tuple
    a: tuple

    def __post_init__(self):
        if self.cone not in ("psd", "soc"):
            raise ValueError("cone must be 'psd' or 'soc'")
        self.c = _freeze_element(self.cone, self.n, self.c)
        self.a = tuple(_freeze_element(self.cone, self.n, ai) for ai in self.a)

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def ambient_dim(self) -> int:
        """Dimension of the space the cone lives in."""
        if self.cone == "psd":
            return self.n * (self.n + 1) // 2
        return self.n

    def slack(self, x):
        """c - A(x) as a cone element."""
        if len(x) != self.m:
            raise ValueError("variable vector has the wrong length")
        if self.cone == "psd":
            out = [list(row) for row in self.c]
            for xi, ai in zip(x, self.a):
                for i in range(self.n):
                    for j in range(self.n):
                        out[i][j] -= xi * ai[i][j]
            return tuple(tuple(r) for r in out)
        out = list(self.c)
        for xi, ai in zip(x, self.a):
            for i in range(self.n):
                out[i] -= xi * ai[i]
        return tuple(out)

    def is_feasible(self, x) -> bool:
        return in_semigroup(self.cone, self.slack(x))

    def to_json(self) -> dict:
        unpack = (lambda e: [list(r) for r in e]) if self.cone == "psd" else list
        return {
            "cone": self.cone,
            "n": self.n,
            "c": unpack(self.c),
            "A": [unpack(ai) for ai in self.a],
        }

    @classmethod
    def from_json(cls, obj) -> "LCISystem":
        return cls(
            cone=str(obj["cone"]),
            n=int(obj["n"]),
            c=tuple(tuple(r) for r in obj["c"]) if obj["cone"] == "psd" else tuple(obj["c"]),
            a=tuple(
                tuple(tuple(r) for r in ai) if obj["cone"] == "psd" else tuple(ai)
                for ai in obj["A"]
            ),
        )


@dataclass(frozen=True)
class CGCut:
    """The inequality u . x <= rhs together with its generating pair."""

    u: tuple[int, ...]
    rhs: int
    root: tuple
    word: tuple[str, ...]

    def to_json(self) -> dict:
        root = [list(r) for r in self.root] if _is_matrix(self.root) else list(self.root)
        return {
            "u": list(self.u),
            "rhs": self.rhs,
            "root": root,
            "word": list(self.word),
        }

    @classmethod
    def from_json(cls, obj) -> "CGCut":
        raw = obj["root"]
        root = (
            tuple(tuple(int(v) for v in r) for r in raw)
            if raw and isinstance(raw[0], list)
            else tuple(int(v) for v in raw)
        )
        return cls(
            u=tuple(int(v) for v in obj["u"]),
            rhs=int(obj["rhs"]),
            root=root,
            word=tuple(str(w) for w in obj["word"]),
        )


@dataclass
class GeneratorStream:
    """Breadth-first dual-semigroup elements g.r for words up to word_cap.

    Deduplicates by element, so each element carries its first (shortest)
    word.  `cap` optionally filters emissions by height/trace.  Iterating
    starts the walk over; `cursor` counts emissions of the latest walk.
    """

    cone: str
    n: int
    word_cap: int
    roots: tuple | None = None
    cap: int | None = None
    cursor: int = field(default=0, init=False)

    def __post_init__(self):
        if self.cone not in ("psd", "soc"):
            raise ValueError("cone must be 'psd' or 'soc'")
        if self.word_cap < 0:
            raise ValueError("word_cap must be nonnegative")
        if self.roots is None:
            self.roots = _default_roots(self.cone, self.n)
        self.roots = tuple(
            _freeze_element(self.cone, self.n, r) for r in self.roots
        )
        for r in self.roots:
            flat = [v for row in r for v in row] if self.cone == "psd" else r
            if not any(flat):
                raise ValueError("roots must be nonzero")

    def _labels(self):
        if self.cone == "psd":
            return tuple(psd.gl_generators(self.n))
        return soc.generator_labels(self.n)

    def _step(self, label, y):
        if self.cone == "psd":
            g = psd.gl_generators(self.n)[label]
            return linalg.mat_mul(g, linalg.mat_mul(y, linalg.transpose(g)))
        return linalg.mat_vec(soc.generator_matrix(label, self.n).rows, y)

    def __iter__(self):
        self.cursor = 0
        labels = self._labels()
        seen = set(self.roots)
        queue = deque((r, r, ()) for r in self.roots)
        while queue:
            y, root, word = queue.popleft()
            if self.cap is None or element_weight(self.cone, y) <= self.cap:
                self.cursor += 1
                yield y, root, word
            if len(word) == self.word_cap:
                continue
            for label in labels:
                child = self._step(label, y)
                if child not in seen:
                    seen.add(child)
                    queue.append((child, root, (label,) + word))


def cg_cuts(sys: LCISystem, gen: GeneratorStream) -> list[CGCut]:
    """One cut u.x <= rhs per emitted generator, first provenance kept.

    Cuts that agree after dividing u and rhs by gcd(u) (only attempted when
    the division leaves rhs integral, so the floor is unaffected) are
    reported once.  rhs is y paired with c; with integral data the floor in
    the defining inequality is the identity and is applied implicitly.
    """
    if gen.cone != sys.cone or gen.n != sys.n:
        raise ValueError("generator stream does not match the system's cone")
    out = []
    seen = set()
    for y, root, word in gen:
        u = tuple(pair(sys.cone, y, ai) for ai in sys.a)
        rhs = pair(sys.cone, y, sys.c)
        g = linalg.vec_gcd(u)
        if g > 1 and rhs % g == 0:
            key = (tuple(v // g for v in u), rhs // g)
        else:
            key = (u, rhs)
        if key in seen:
            continue
        seen.add(key)
        out.append(CGCut(u=u, rhs=rhs, root=root, word=word))
    return out


def validate_cut(sys: LCISystem, cut: CGCut, samples) -> bool:
    """False iff some exactly-feasible sample violates the cut."""
    for x in samples:
        x = tuple(int(v) for v in x)
        if not sys.is_feasible(x):
            continue
        if sum(a * b for a, b in zip(cut.u, x)) > cut.rhs:
            return False
    return True


@dataclass(frozen=True)
class IcrResult:
    """Outcome of a minimal-support generator decomposition search."""

    status: str  # ok | exceeded | infeasible
    count: int | None = None
    terms: tuple = ()  # (multiplicity, element) pairs


def icr_search(s, gen: GeneratorStream, cap: int) -> IcrResult:
    """Fewest distinct generators writing s = sum of lambda_i b_i.

    Multiplicities are free positive integers; the rank counts the number
    of generators in the sum, so a high multiple of a single generator
    still has rank one.  Heights (SOC) and traces (PSD) add up across any
    decomposition and every candidate carries weight at least 1, which
    bounds the support size by weight(s); exhausting that bound proves
    infeasibility within the candidate set, while exhausting only `cap`
    reports `exceeded`.  Iterative deepening over the support size with a
    strictly increasing candidate index keeps the search deterministic.
    Subtracting fewer copies of a cone element keeps membership, so each
    candidate's feasible multiplicities are a contiguous range, scanned
    from the largest down.
    """
    cone = gen.cone
    if not in_semigroup(cone, s):
        raise ValueError("element is outside the cone")
    total = element_weight(cone, s)
    cands = []
    for y, _, _ in gen:
        w = element_weight(cone, y)
        if 1 <= w <= total:
            cands.append((y, w))
    cands.sort(key=lambda yw: -yw[1])

    def subtract(a, b, lam):
        if cone == "psd":
            n = len(a)
            return tuple(
                tuple(a[i][j] - lam * b[i][j] for j in range(n))
                for i in range(n)
            )
        return tuple(x - lam * y for x, y in zip(a, b))

    def zero(a):
        if cone == "psd":
            return all(v == 0 for row in a for v in row)
        return not any(a)

    chosen = []

    def dfs(res, res_weight, k_left, i0):
        if res_weight == 0:
            return zero(res)
        if k_left == 0:
            return False
        for i in range(i0, len(cands)):
            y, w = cands[i]
            if w > res_weight:
                continue
            for lam in range(res_weight // w, 0, -1):
                nxt = subtract(res, y, lam)
                if not in_semigroup(cone, nxt):
                    continue
                chosen.append((lam, y))
                if dfs(nxt, res_weight - lam * w, k_left - 1, i + 1):
                    return True
                chosen.pop()
        return False

    depth_limit = min(cap, total, len(cands))
    for k in range(depth_limit + 1):
        chosen.clear()
        if dfs(s, total, k, 0):
            return IcrResult(status="ok", count=k, terms=tuple(chosen))
    if cap >= min(total, len(cands)):
        return IcrResult(status="infeasible")
    return IcrResult(status="exceeded")
