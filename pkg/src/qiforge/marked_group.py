"""Finitely generated groups with a fixed generating set and their word metrics.

Elements are plain hashable tuples in a unique normal form, so equal group
elements compare (and hash) equal:

* ``FreeAbelian``: integer vector ``(k_1, ..., k_m)``, also used for the
  sublattices ``nZ x Z^(m-1)`` with their own intrinsic marking;
* ``BaumslagSolitar``: ``(k, num, e)`` for the affine map ``x -> m^k x + num/m^e``
  with ``e`` minimal;
* ``FreeGroup``: reduced word as a tuple of nonzero ints (``-i`` inverts ``i``);
* ``ZxCyclic``: ``(j, r)`` with ``0 <= r < k``.

Word distances are ``d(x, y) = |x^-1 y|`` and balls are grown by right
multiplication with generators.
"""
from __future__ import annotations

import csv
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import BudgetExceeded, OutOfWindow, SpecError

DEFAULT_BUDGET = 2_000_000


def default_budget() -> int:
    """Element-count budget, overridable through ``QIFORGE_BUDGET``."""
    env = os.environ.get("QIFORGE_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise SpecError(f"QIFORGE_BUDGET is not an integer: {env!r}") from None
    return DEFAULT_BUDGET


class Generator(NamedTuple):
    label: str
    element: tuple
    inverse: int  # index of the inverse generator in the same list


class MarkedGroup:
    """A group together with an ordered, inverse-closed list of generators."""

    family: str = ""

    @cached_property
    def generators(self) -> tuple[Generator, ...]:
        gens = self._generators()
        if not gens:
            raise SpecError("generator list must be nonempty")
        for i, g in enumerate(gens):
            if gens[g.inverse].inverse != i:
                raise SpecError("generator inversion pairing is not an involution")
        return tuple(gens)

    def _generators(self) -> list[Generator]:
        raise NotImplementedError

    def identity(self) -> tuple:
        raise NotImplementedError

    def multiply(self, g: tuple, h: tuple) -> tuple:
        raise NotImplementedError

    def inverse(self, g: tuple) -> tuple:
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def format(self, g: tuple) -> str:
        return "(" + ",".join(str(c) for c in g) + ")"

    def word_length(self, g: tuple) -> int | None:
        """Closed-form word length, or None when only BFS can tell."""
        return None

    def neighbors(self, g: tuple) -> list[tuple]:
        return [self.multiply(g, t.element) for t in self.generators]

    def generator(self, label: str) -> tuple:
        for t in self.generators:
            if t.label == label:
                return t.element
        raise KeyError(label)

    def word(self, labels: str | Sequence[str]) -> tuple:
        """Evaluate a word such as ``"a b A"`` (space separated labels)."""
        if isinstance(labels, str):
            labels = labels.split()
        g = self.identity()
        for lab in labels:
            g = self.multiply(g, self.generator(lab))
        return g

    def power(self, g: tuple, n: int) -> tuple:
        if n < 0:
            g, n = self.inverse(g), -n
        result = self.identity()
        while n:
            if n & 1:
                result = self.multiply(result, g)
            g = self.multiply(g, g)
            n >>= 1
        return result

    def __str__(self):
        return self.family


@dataclass(frozen=True, eq=True)
class FreeAbelian(MarkedGroup):
    """``Z^m``; with ``scale=n`` the index-n sublattice ``nZ x Z^(m-1)``.

    The sublattice keeps the ambient coordinates but is marked by
    ``n e_1, e_2, ..., e_m`` so its word metric is the intrinsic one.
    """

    rank: int
    scale: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise SpecError(f"Z^m needs m >= 1, got {self.rank}")
        if self.scale < 1:
            raise SpecError(f"sublattice scale must be >= 1, got {self.scale}")

    @property
    def family(self) -> str:
        head = "Z" if self.scale == 1 else f"{self.scale}Z"
        if self.scale == 1:
            return "Z" if self.rank == 1 else f"Z^{self.rank}"
        rest = self.rank - 1
        if rest == 0:
            return head
        return head + "xZ" + ("" if rest == 1 else f"^{rest}")

    def _generators(self):
        gens = []
        for i in range(self.rank):
            step = self.scale if i == 0 else 1
            e = [0] * self.rank
            e[i] = step
            pos = tuple(e)
            e[i] = -step
            neg = tuple(e)
            name = f"e{i + 1}" if self.rank > 1 else "t"
            gens.append(Generator(name, pos, 2 * i + 1))
            gens.append(Generator(name + "^-1", neg, 2 * i))
        return gens

    def identity(self):
        return (0,) * self.rank

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == self.rank
            and all(isinstance(c, (int, np.integer)) for c in g)
            and g[0] % self.scale == 0
        )

    def word_length(self, g):
        return abs(g[0]) // self.scale + sum(abs(c) for c in g[1:])


def _bs_reduce(m: int, k: int, num: int, e: int) -> tuple:
    if num == 0:
        return (k, 0, 0)
    while e > 0 and num % m == 0:
        num //= m
        e -= 1
    return (k, num, e)


@dataclass(frozen=True, eq=True)
class BaumslagSolitar(MarkedGroup):
    """``BS(1,m) = <a, b | a b a^-1 = b^m>`` as affine maps ``x -> m^k x + q``.

    ``a`` is ``x -> m x`` and ``b`` is ``x -> x + 1``; the product ``g h`` is
    the composition ``g o h``, i.e. ``(k1, q1)(k2, q2) = (k1 + k2, q1 + m^k1 q2)``.
    """

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise SpecError(f"BS(1,m) needs m >= 2, got {self.m}")

    @property
    def family(self):
        return f"BS(1,{self.m})"

    def _generators(self):
        return [
            Generator("a", (1, 0, 0), 1),
            Generator("A", (-1, 0, 0), 0),
            Generator("b", (0, 1, 0), 3),
            Generator("B", (0, -1, 0), 2),
        ]

    def identity(self):
        return (0, 0, 0)

    def element(self, k: int, q) -> tuple:
        """Normal form of ``x -> m^k x + q`` for a rational ``q`` in ``Z[1/m]``."""
        q = Fraction(q)
        den, e = q.denominator, 0
        while self.m**e % den:
            e += 1
            if e > 4 * den.bit_length():
                raise SpecError(f"{q} is not in Z[1/{self.m}]")
        return _bs_reduce(self.m, k, q.numerator * (self.m**e // den), e)

    def translation(self, g) -> Fraction:
        return Fraction(g[1], self.m ** g[2])

    def multiply(self, g, h):
        m = self.m
        k1, n1, e1 = g
        k2, n2, e2 = h
        e2 -= k1
        if e2 < 0:
            n2 *= m**-e2
            e2 = 0
        if e1 >= e2:
            num, e = n1 + n2 * m ** (e1 - e2), e1
        else:
            num, e = n1 * m ** (e2 - e1) + n2, e2
        return _bs_reduce(m, k1 + k2, num, e)

    def inverse(self, g):
        k, num, e = g
        e += k
        num = -num
        if e < 0:
            num *= self.m**-e
            e = 0
        return _bs_reduce(self.m, -k, num, e)

    def contains(self, g):
        if not (isinstance(g, tuple) and len(g) == 3):
            return False
        k, num, e = g
        return _bs_reduce(self.m, k, num, e) == g and e >= 0

    def format(self, g):
        k, num, e = g
        q = str(num) if e == 0 else f"{num}/{self.m}^{e}"
        return f"({k},{q})"


@dataclass(frozen=True, eq=True)
class FreeGroup(MarkedGroup):
    rank: int

    def __post_init__(self):
        if self.rank < 2:
            raise SpecError(f"free groups need rank >= 2, got {self.rank}")

    @property
    def family(self):
        return f"F_{self.rank}"

    @cached_property
    def _letters(self):
        return "xyzwuv"[: self.rank] if self.rank <= 6 else None

    def _label(self, i):
        return self._letters[i] if self._letters else f"x{i + 1}"

    def _generators(self):
        gens = []
        for i in range(self.rank):
            lab = self._label(i)
            gens.append(Generator(lab, (i + 1,), 2 * i + 1))
            gens.append(Generator(lab.upper() if self._letters else lab + "^-1", (-(i + 1),), 2 * i))
        return gens

    def identity(self):
        return ()

    def multiply(self, g, h):
        i = 0
        n = min(len(g), len(h))
        while i < n and g[-1 - i] == -h[i]:
            i += 1
        return g[: len(g) - i] + h[i:]

    def inverse(self, g):
        return tuple(-c for c in reversed(g))

    def contains(self, g):
        if not isinstance(g, tuple):
            return False
        for i, c in enumerate(g):
            if not (isinstance(c, int) and c != 0 and abs(c) <= self.rank):
                return False
            if i and g[i - 1] == -c:
                return False
        return True

    def word_length(self, g):
        return len(g)

    def format(self, g):
        if not g:
            return "e"
        out = []
        for c in g:
            lab = self._label(abs(c) - 1)
            out.append(lab if c > 0 else (lab.upper() if self._letters else lab + "^-1"))
        return "".join(out)


@dataclass(frozen=True, eq=True)
class ZxCyclic(MarkedGroup):
    """``Z x Z/k`` generated by ``(1, 0)`` and ``(0, 1)``."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise SpecError(f"Z x Z/k needs k >= 1, got {self.k}")

    @property
    def family(self):
        return f"ZxC{self.k}"

    def _generators(self):
        return [
            Generator("t", (1, 0), 1),
            Generator("t^-1", (-1, 0), 0),
            Generator("c", (0, 1 % self.k), 3),
            Generator("c^-1", (0, -1 % self.k), 2),
        ]

    def identity(self):
        return (0, 0)

    def multiply(self, g, h):
        return (g[0] + h[0], (g[1] + h[1]) % self.k)

    def inverse(self, g):
        return (-g[0], -g[1] % self.k)

    def contains(self, g):
        return isinstance(g, tuple) and len(g) == 2 and 0 <= g[1] < self.k

    def word_length(self, g):
        r = g[1]
        return abs(g[0]) + min(r, self.k - r)


_SPEC_PATTERNS = [
    (re.compile(r"^Z$"), lambda mt: FreeAbelian(1)),
    (re.compile(r"^Z\^(\d+)$"), lambda mt: FreeAbelian(int(mt[1]))),
    (re.compile(r"^(\d+)Z$"), lambda mt: FreeAbelian(1, int(mt[1]))),
    (
        re.compile(r"^(\d+)ZxZ(?:\^(\d+))?$"),
        lambda mt: FreeAbelian(1 + int(mt[2] or 1), int(mt[1])),
    ),
    (re.compile(r"^BS\(1,(\d+)\)$"), lambda mt: BaumslagSolitar(int(mt[1]))),
    (re.compile(r"^F_?(\d+)$"), lambda mt: FreeGroup(int(mt[1]))),
    (re.compile(r"^ZxC(\d+)$"), lambda mt: ZxCyclic(int(mt[1]))),
]


def make_group(spec: str | MarkedGroup) -> MarkedGroup:
    """Parse a family spec such as ``"Z^2"``, ``"BS(1,3)"``, ``"F_2"``, ``"ZxC3"``.

    Sublattices ``"2Z"`` and ``"3ZxZ"`` are accepted too; they are marked
    intrinsically (``2Z`` has generator ``2``).
    """
    if isinstance(spec, MarkedGroup):
        return spec
    s = spec.replace(" ", "")
    for pattern, build in _SPEC_PATTERNS:
        mt = pattern.match(s)
        if mt:
            return build(mt)
    raise SpecError(f"unknown group spec {spec!r}")


@dataclass(eq=False)
class Ball:
    """The word-metric ball of a given radius around the identity."""

    group: MarkedGroup
    radius: int
    elements: list
    dist: np.ndarray
    index: dict = field(repr=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index

    def __iter__(self):
        return iter(self.elements)

    def word_length(self, g) -> int:
        try:
            return int(self.dist[self.index[g]])
        except KeyError:
            raise OutOfWindow(
                f"{self.group.format(g)} lies outside the radius-{self.radius} ball of {self.group}"
            ) from None

    def distance(self, x, y) -> int:
        return self.word_length(self.group.multiply(self.group.inverse(x), y))

    def sphere(self, r: int) -> list:
        return [g for g, d in zip(self.elements, self.dist) if d == r]

    def restrict(self, r: int) -> list:
        """Elements of length at most ``r``, in BFS order."""
        if r > self.radius:
            raise OutOfWindow(f"radius {r} exceeds computed radius {self.radius}")
        stop = int(np.searchsorted(self.dist, r, side="right"))
        return self.elements[:stop]

    def to_csv(self, path_or_file) -> None:
        close = False
        if isinstance(path_or_file, (str, os.PathLike)):
            path_or_file = open(path_or_file, "w", newline="")
            close = True
        try:
            w = csv.writer(path_or_file, lineterminator="\n")
            w.writerow(["id", "normal_form", "distance"])
            for i, (g, d) in enumerate(zip(self.elements, self.dist)):
                w.writerow([i, self.group.format(g), int(d)])
        finally:
            if close:
                path_or_file.close()


def ball(group: MarkedGroup | str, r: int, budget: int | None = None) -> Ball:
    """Breadth-first search from the identity out to word length ``r``.

    Elements are listed in BFS order (generators tried in their listed
    order), so ids are deterministic and distances are non-decreasing.
    """
    group = make_group(group)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    budget = default_budget() if budget is None else budget
    e = group.identity()
    elements = [e]
    dists = [0]
    index = {e: 0}
    frontier = [e]
    for d in range(1, r + 1):
        nxt = []
        for g in frontier:
            for h in group.neighbors(g):
                if h not in index:
                    index[h] = len(elements)
                    elements.append(h)
                    dists.append(d)
                    nxt.append(h)
            if len(elements) > budget:
                raise BudgetExceeded(
                    f"ball of radius {r} in {group} exceeds budget of {budget} elements"
                )
        frontier = nxt
    return Ball(group, r, elements, np.asarray(dists, dtype=np.int64), index)


def word_length(window: Ball, g) -> int:
    return window.word_length(g)


def neighbors(group: MarkedGroup, g) -> list:
    return group.neighbors(g)


def length_of(group: MarkedGroup, g, max_radius: int = 64, budget: int | None = None) -> int:
    """Word length of a single element, by closed form or by growing BFS."""
    closed = group.word_length(g)
    if closed is not None:
        return closed
    budget = default_budget() if budget is None else budget
    seen = {group.identity()}
    frontier = [group.identity()]
    for d in range(max_radius + 1):
        if g in set(frontier):
            return d
        nxt = []
        for h in frontier:
            for x in group.neighbors(h):
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        if len(seen) > budget:
            raise BudgetExceeded(f"length of {group.format(g)} exceeds the search budget")
        frontier = nxt
    raise OutOfWindow(f"{group.format(g)} is longer than {max_radius}")


class WordMetric:
    """Exact word distances, from a closed form when the family has one and
    otherwise from a BFS ball that is grown on demand (up to the budget)."""

    def __init__(self, group: MarkedGroup | str, radius: int = 0, budget: int | None = None):
        self.group = make_group(group)
        self.budget = budget
        self._closed = self.group.word_length(self.group.identity()) is not None
        self._ball = None if self._closed else ball(self.group, radius, budget)

    @property
    def ball(self) -> Ball | None:
        return self._ball

    def ensure_radius(self, r: int) -> None:
        if not self._closed and self._ball.radius < r:
            self._ball = ball(self.group, r, self.budget)

    def cover_pairs(self, elements: Iterable) -> "WordMetric":
        """Grow the ball so every ``x^-1 y`` with ``x, y`` in ``elements`` is in it."""
        if self._closed:
            return self
        longest = 0
        for g in elements:
            while g not in self._ball.index:
                self.ensure_radius(self._ball.radius + 2)
            longest = max(longest, self._ball.word_length(g))
        self.ensure_radius(2 * longest)
        return self

    @classmethod
    def for_pairs(cls, group, elements: Iterable, budget: int | None = None) -> "WordMetric":
        return cls(group, 0, budget).cover_pairs(elements)

    def length(self, g) -> int:
        if self._closed:
            return self.group.word_length(g)
        return self._ball.word_length(g)

    def distance(self, x, y) -> int:
        return self.length(self.group.multiply(self.group.inverse(x), y))

    def pairwise(self, xs: Sequence, ys: Sequence | None = None) -> np.ndarray:
        """Matrix ``D[i, j] = d(xs[i], ys[j])``."""
        ys = xs if ys is None else ys
        if isinstance(self.group, FreeAbelian):
            a = np.asarray(xs, dtype=np.int64).reshape(len(xs), -1)
            b = np.asarray(ys, dtype=np.int64).reshape(len(ys), -1)
            diff = np.abs(a[:, None, :] - b[None, :, :])
            diff[:, :, 0] //= self.group.scale
            return diff.sum(axis=2)
        if isinstance(self.group, ZxCyclic):
            a = np.asarray(xs, dtype=np.int64).reshape(len(xs), 2)
            b = np.asarray(ys, dtype=np.int64).reshape(len(ys), 2)
            r = (b[None, :, 1] - a[:, None, 1]) % self.group.k
            return np.abs(b[None, :, 0] - a[:, None, 0]) + np.minimum(r, self.group.k - r)
        G = self.group
        out = np.empty((len(xs), len(ys)), dtype=np.int64)
        if self._closed:
            wl = G.word_length
            for i, x in enumerate(xs):
                xi = G.inverse(x)
                out[i] = [wl(G.multiply(xi, y)) for y in ys]
            return out
        index, dist = self._ball.index, self._ball.dist
        lookup = np.empty(len(ys), dtype=np.int64)
        for i, x in enumerate(xs):
            xi = G.inverse(x)
            try:
                for j, y in enumerate(ys):
                    lookup[j] = index[G.multiply(xi, y)]
            except KeyError:
                raise OutOfWindow(
                    f"distance from {G.format(x)} exceeds the radius-{self._ball.radius} metric ball"
                ) from None
            out[i] = dist[lookup]
        return out


def sample_in_ball(window: Ball, rng: np.random.Generator, n: int, max_length: int | None = None) -> list:
    pool = window.elements if max_length is None else window.restrict(max_length)
    picks = rng.integers(0, len(pool), size=n)
    return [pool[i] for i in picks]


def enumerate_words(group: MarkedGroup, length: int) -> Iterable[tuple]:
    """All products of exactly ``length`` generators (with repetition)."""
    from itertools import product

    gens = [t.element for t in group.generators]
    for combo in product(gens, repeat=length):
        g = group.identity()
        for t in combo:
            g = group.multiply(g, t)
        yield g
