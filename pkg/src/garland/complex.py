"""Finite abstract simplicial complexes and the constructions performed on them.

A complex is stored as one integer array per dimension: row ``r`` of
``simplices(k)`` is the ``r``-th ``k``-simplex, written as its strictly
increasing vertex list.  Rows are kept in lexicographic order, so the
canonical orientation of every simplex is its ascending vertex order and
simplex indices are stable for the lifetime of the object.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ActionError,
    DaggerViolation,
    MalformedSimplexError,
    NotASimplexError,
    StarConditionError,
)

__all__ = [
    "SimplicialComplex",
    "GroupAction",
    "DaggerResult",
    "build_from_maximal",
    "standard_simplex",
    "empty_complex",
    "join",
    "check_star_condition",
    "link",
    "star",
    "top_weights",
    "top_weight",
    "weight_sum_defects",
    "check_dagger",
    "quotient",
    "apartment_torus",
    "torus_translations",
    "flag_defect",
    "to_text",
    "from_text",
    "read_complex",
    "write_complex",
]

_KEY_LIMIT = 2**62


class _RowIndex:
    """Lookup from sorted vertex rows to their position in a sorted row array."""

    def __init__(self, rows: np.ndarray, base: int):
        self.rows = rows
        width = rows.shape[1]
        self.base = max(base, 1)
        self.encoded = self.base ** width < _KEY_LIMIT
        if self.encoded:
            self.powers = self.base ** np.arange(width - 1, -1, -1, dtype=np.int64)
            self.keys = rows @ self.powers if len(rows) else np.zeros(0, dtype=np.int64)
        else:
            self.table = {tuple(r): i for i, r in enumerate(rows.tolist())}

    def find(self, query: np.ndarray) -> np.ndarray:
        """Indices of ``query`` rows, ``-1`` where a row is absent."""
        query = np.asarray(query, dtype=np.int64).reshape(-1, self.rows.shape[1])
        if not self.encoded:
            return np.array([self.table.get(tuple(r), -1) for r in query.tolist()], dtype=np.int64)
        if len(query) == 0 or len(self.keys) == 0:
            return np.full(len(query), -1, dtype=np.int64)
        qk = query @ self.powers
        pos = np.searchsorted(self.keys, qk)
        pos = np.minimum(pos, len(self.keys) - 1)
        return np.where(self.keys[pos] == qk, pos, -1)


def _unique_rows(arr: np.ndarray, width: int) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.int64).reshape(-1, width)
    if len(arr) == 0:
        return arr
    return np.unique(arr, axis=0)


class SimplicialComplex:
    """Immutable finite simplicial complex on vertices ``0 .. V-1``.

    Use :func:`build_from_maximal` (or the other module level constructors)
    rather than calling the constructor directly; the constructor trusts that
    ``simplices`` is already closed under faces and canonically sorted.

    ``labels`` records where each vertex came from: the caller's original ids
    for :func:`build_from_maximal`, the parent's vertex ids for links and
    stars, orbit representatives for quotients.
    """

    def __init__(self, simplices: Sequence[np.ndarray], labels: Sequence[int] | None = None):
        arrays = [np.asarray(a, dtype=np.int64).reshape(-1, k + 1) for k, a in enumerate(simplices)]
        while arrays and len(arrays[-1]) == 0:
            arrays.pop()
        for a in arrays:
            a.setflags(write=False)
        self._simplices = tuple(arrays)
        nv = len(arrays[0]) if arrays else 0
        self.labels = tuple(int(x) for x in labels) if labels is not None else tuple(range(nv))
        if len(self.labels) != nv:
            raise ValueError("one label per vertex is required")

    # -- basic queries -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._simplices) - 1

    @property
    def num_vertices(self) -> int:
        return len(self._simplices[0]) if self._simplices else 0

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self._simplices)

    def simplices(self, k: int) -> np.ndarray:
        if 0 <= k <= self.dim:
            return self._simplices[k]
        return np.zeros((0, max(k + 1, 0)), dtype=np.int64)

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def __len__(self) -> int:
        return sum(self.f_vector)

    def __iter__(self):
        for k in range(self.dim + 1):
            for row in self._simplices[k].tolist():
                yield tuple(row)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f_vector={self.f_vector})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.f_vector == other.f_vector and all(
            np.array_equal(a, b) for a, b in zip(self._simplices, other._simplices)
        )

    __hash__ = None  # type: ignore[assignment]

    def _lookup(self, k: int) -> _RowIndex:
        cache = self.__dict__.setdefault("_lookups", {})
        if k not in cache:
            cache[k] = _RowIndex(self.simplices(k), self.num_vertices)
        return cache[k]

    def find(self, k: int, rows: np.ndarray) -> np.ndarray:
        """Vectorised index lookup of sorted ``k``-simplices (``-1`` if absent)."""
        if k > self.dim or k < 0:
            return np.full(len(np.atleast_2d(rows)), -1, dtype=np.int64)
        return self._lookup(k).find(rows)

    def index(self, simplex: Iterable[int]) -> int:
        s = tuple(sorted(int(v) for v in simplex))
        if not s or len(set(s)) != len(s):
            raise NotASimplexError(s)
        idx = int(self.find(len(s) - 1, np.array([s]))[0])
        if idx < 0:
            raise NotASimplexError(s)
        return idx

    def __contains__(self, simplex: Iterable[int]) -> bool:
        try:
            self.index(simplex)
        except NotASimplexError:
            return False
        return True

    def face_index(self, k: int) -> np.ndarray:
        """``(f_k, k+1)`` array; column ``j`` indexes the face omitting vertex ``j``."""
        if k < 1 or k > self.dim:
            raise ValueError(f"faces of {k}-simplices are not defined here")
        cache = self.__dict__.setdefault("_faces", {})
        if k not in cache:
            rows = self._simplices[k]
            cols = []
            for j in range(k + 1):
                sub = np.delete(rows, j, axis=1)
                cols.append(self.find(k - 1, sub))
            out = np.stack(cols, axis=1)
            out.setflags(write=False)
            cache[k] = out
        return cache[k]

    def containing(self, k: int, vertex: int) -> np.ndarray:
        """Indices of the ``k``-simplices that contain ``vertex``."""
        rows = self.simplices(k)
        return np.flatnonzero((rows == vertex).any(axis=1))

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        nbr: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for a, b in self.simplices(1).tolist():
            nbr[a].add(b)
            nbr[b].add(a)
        return tuple(frozenset(s) for s in nbr)

    def is_connected(self) -> bool:
        nv = self.num_vertices
        if nv == 0:
            return True
        parent = list(range(nv))

        def root(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.simplices(1).tolist():
            ra, rb = root(a), root(b)
            if ra != rb:
                parent[ra] = rb
        return len({root(v) for v in range(nv)}) == 1

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        """Simplices that are faces of no larger simplex, in canonical order."""
        out = []
        for k in range(self.dim + 1):
            rows = self._simplices[k]
            covered = np.zeros(len(rows), dtype=bool)
            if k < self.dim:
                fi = self.face_index(k + 1)
                covered[fi.ravel()] = True
            out.extend(tuple(r) for r in rows[~covered].tolist())
        return sorted(out)

    @cached_property
    def is_pure(self) -> bool:
        return check_star_condition(self)

    def relabel(self, mapping: Sequence[int]) -> "SimplicialComplex":
        """Apply the vertex bijection ``v -> mapping[v]`` and re-sort."""
        mapping = np.asarray(mapping, dtype=np.int64)
        if sorted(mapping.tolist()) != list(range(self.num_vertices)):
            raise ValueError("mapping must be a permutation of the vertices")
        arrays = []
        for k in range(self.dim + 1):
            rows = np.sort(mapping[self._simplices[k]], axis=1)
            arrays.append(_unique_rows(rows, k + 1))
        inverse = np.empty_like(mapping)
        inverse[mapping] = np.arange(len(mapping))
        return SimplicialComplex(arrays, labels=[self.labels[i] for i in inverse.tolist()])


# -- constructors -------------------------------------------------------


def empty_complex() -> SimplicialComplex:
    """The empty complex (dimension -1); only meaningful as a join operand."""
    return SimplicialComplex([])


def _closure(maximal: np.ndarray | list[tuple[int, ...]], num_vertices: int) -> list[np.ndarray]:
    groups: dict[int, list[tuple[int, ...]]] = {}
    for s in maximal:
        groups.setdefault(len(s), []).append(tuple(s))
    if not groups:
        return []
    top = max(groups)
    arrays = []
    for k in range(top):
        parts = []
        for size, members in groups.items():
            if size < k + 1:
                continue
            block = np.asarray(members, dtype=np.int64).reshape(-1, size)
            for cols in itertools.combinations(range(size), k + 1):
                parts.append(block[:, cols])
        arrays.append(_unique_rows(np.concatenate(parts), k + 1))
    return arrays


def build_from_maximal(maximal: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of the given vertex sets.

    Vertex ids are densely renumbered in increasing order; the original ids
    are kept in ``labels``.
    """
    sets = []
    for s in maximal:
        s = list(s)
        if not s:
            raise MalformedSimplexError("simplices must be nonempty")
        if len(set(s)) != len(s):
            raise MalformedSimplexError(f"repeated vertex in {s}")
        sets.append(s)
    original = sorted({int(v) for s in sets for v in s})
    renumber = {v: i for i, v in enumerate(original)}
    dense = [tuple(sorted(renumber[int(v)] for v in s)) for s in sets]
    return SimplicialComplex(_closure(dense, len(original)), labels=original)


def standard_simplex(n: int) -> SimplicialComplex:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return build_from_maximal([range(n + 1)])


def join(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """Join ``X * Y``; vertices of ``Y`` are shifted past those of ``X``."""
    shift = X.num_vertices
    dim = X.dim + Y.dim + 1
    arrays = []
    for k in range(dim + 1):
        parts = [X.simplices(k), Y.simplices(k) + shift]
        for a in range(0, k):
            b = k - 1 - a
            xa, yb = X.simplices(a), Y.simplices(b)
            if len(xa) == 0 or len(yb) == 0:
                continue
            left = np.repeat(xa, len(yb), axis=0)
            right = np.tile(yb + shift, (len(xa), 1))
            parts.append(np.hstack([left, right]))
        arrays.append(_unique_rows(np.concatenate(parts), k + 1))
    labels = list(range(X.num_vertices + Y.num_vertices))
    return SimplicialComplex(arrays, labels=labels)


# -- stars, links, weights ---------------------------------------------


def check_star_condition(X: SimplicialComplex) -> bool:
    """True iff every simplex is a face of some ``dim X``-simplex."""
    if X.dim < 0:
        return True
    return all((w > 0).all() for w in _raw_top_counts(X))


def _canonical(X: SimplicialComplex, s: Iterable[int]) -> tuple[int, ...]:
    s = tuple(sorted(int(v) for v in s))
    X.index(s)
    return s


def _containing_rows(X: SimplicialComplex, s: tuple[int, ...]) -> list[np.ndarray]:
    out = []
    for k in range(len(s) - 1, X.dim + 1):
        rows = X.simplices(k)
        mask = np.ones(len(rows), dtype=bool)
        for v in s:
            mask &= (rows == v).any(axis=1)
        out.append(rows[mask])
    return out


def link(X: SimplicialComplex, s: Iterable[int]) -> SimplicialComplex:
    """Lk(s): simplices of St(s) disjoint from ``s``.

    The result is renumbered densely; ``labels`` maps link vertices back to
    vertex ids of ``X``.
    """
    s = _canonical(X, s)
    rows = _containing_rows(X, s)[1:]
    sset = np.array(s, dtype=np.int64)
    reduced = []
    for r in rows:
        if len(r) == 0:
            break
        keep = ~np.isin(r, sset)
        reduced.append(r[keep].reshape(len(r), -1))
    if not reduced or len(reduced[0]) == 0:
        return SimplicialComplex([])
    verts = reduced[0][:, 0]
    remap = np.full(X.num_vertices, -1, dtype=np.int64)
    remap[verts] = np.arange(len(verts))
    arrays = [_unique_rows(remap[r], r.shape[1]) for r in reduced]
    return SimplicialComplex(arrays, labels=verts.tolist())


def star(X: SimplicialComplex, s: Iterable[int]) -> SimplicialComplex:
    """St(s): all simplices having ``s`` as a face, together with their faces."""
    s = _canonical(X, s)
    rows = _containing_rows(X, s)
    maximal = [tuple(r) for block in rows for r in block.tolist()]
    verts = sorted({v for m in maximal for v in m})
    remap = {v: i for i, v in enumerate(verts)}
    dense = [tuple(remap[v] for v in m) for m in maximal]
    return SimplicialComplex(_closure(dense, len(verts)), labels=verts)


def _raw_top_counts(X: SimplicialComplex) -> list[np.ndarray]:
    n = X.dim
    top = X.simplices(n)
    counts = []
    for k in range(n + 1):
        total = np.zeros(X.count(k), dtype=np.int64)
        for cols in itertools.combinations(range(n + 1), k + 1):
            idx = X.find(k, top[:, cols])
            total += np.bincount(idx, minlength=X.count(k))
        counts.append(total)
    return counts


def top_weights(X: SimplicialComplex) -> list[np.ndarray]:
    """Default metric: ``w(s)`` = number of top simplices containing ``s``."""
    cache = X.__dict__.setdefault("_top_weights", None)
    if cache is None:
        counts = _raw_top_counts(X)
        for k, c in enumerate(counts):
            if (c == 0).any():
                bad = tuple(X.simplices(k)[int(np.flatnonzero(c == 0)[0])].tolist())
                raise StarConditionError(f"simplex {bad} lies in no {X.dim}-simplex")
        for c in counts:
            c.setflags(write=False)
        X.__dict__["_top_weights"] = counts
        cache = counts
    return list(cache)


def top_weight(X: SimplicialComplex, s: Iterable[int]) -> int:
    s = _canonical(X, s)
    return int(top_weights(X)[len(s) - 1][X.index(s)])


def weight_sum_defects(X: SimplicialComplex, weights: Sequence[np.ndarray] | None = None) -> list[tuple]:
    """Simplices violating  sum_{sigma > s} w(sigma) = (n - i) w(s).

    Returns ``(i, simplex, lhs, rhs)`` for every failure; empty means the
    identity holds everywhere.
    """
    w = top_weights(X) if weights is None else weights
    n = X.dim
    bad = []
    for i in range(n):
        lhs = np.zeros(X.count(i), dtype=object)
        lhs[:] = 0
        fi = X.face_index(i + 1)
        for j in range(i + 2):
            np.add.at(lhs, fi[:, j], np.asarray(w[i + 1], dtype=object))
        rhs = (n - i) * np.asarray(w[i], dtype=object)
        for r in np.flatnonzero(lhs != rhs):
            bad.append((i, tuple(X.simplices(i)[r].tolist()), lhs[r], rhs[r]))
    return bad


def flag_defect(X: SimplicialComplex) -> tuple[int, ...] | None:
    """A set of pairwise adjacent vertices that is not a simplex, or ``None``."""
    nbr = X.neighbors
    for k in range(1, X.dim + 1):
        for row in X.simplices(k).tolist():
            common = set.intersection(*(set(nbr[v]) for v in row))
            for x in sorted(common):
                cand = tuple(sorted(row + [x]))
                if cand not in X:
                    return cand
    return None


# -- group actions ------------------------------------------------------


@dataclass(frozen=True)
class GroupAction:
    """Permutation group on the vertices, given by generators."""

    generators: tuple[tuple[int, ...], ...]
    num_vertices: int

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if sorted(g) != list(range(self.num_vertices)):
                raise ActionError("generator is not a permutation of the vertices")

    @classmethod
    def trivial(cls, num_vertices: int) -> "GroupAction":
        return cls((), num_vertices)

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        identity = tuple(range(self.num_vertices))
        seen = {identity}
        order = [identity]
        queue = deque([identity])
        while queue:
            h = queue.popleft()
            for g in self.generators:
                gh = tuple(g[x] for x in h)
                if gh not in seen:
                    seen.add(gh)
                    order.append(gh)
                    queue.append(gh)
        return tuple(order)

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class DaggerResult:
    """Outcome of the star-separation check.

    ``witness`` is ``(v, gamma, shared_simplex)`` when the check fails.
    """

    holds: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def _check_simplicial(X: SimplicialComplex, action: GroupAction) -> None:
    if action.num_vertices != X.num_vertices:
        raise ActionError("action and complex disagree on the vertex count")
    for g in action.generators:
        perm = np.asarray(g, dtype=np.int64)
        for k in range(1, X.dim + 1):
            img = np.sort(perm[X.simplices(k)], axis=1)
            missing = np.flatnonzero(X.find(k, img) < 0)
            if len(missing):
                s = tuple(X.simplices(k)[missing[0]].tolist())
                raise ActionError(f"simplex {s} is not mapped to a simplex")


def check_dagger(X: SimplicialComplex, action: GroupAction) -> DaggerResult:
    """Check St(v) and St(gamma v) share no simplex for all v and gamma != 1."""
    _check_simplicial(X, action)
    closed = [frozenset(n | {v}) for v, n in enumerate(X.neighbors)]
    identity = tuple(range(X.num_vertices))
    for g in action.elements:
        if g == identity:
            continue
        for v in range(X.num_vertices):
            shared = closed[v] & closed[g[v]]
            if shared:
                return DaggerResult(False, (v, g, (min(shared),)))
    return DaggerResult(True)


def quotient(X: SimplicialComplex, action: GroupAction) -> SimplicialComplex:
    """X / Gamma: vertices are orbits, simplices are images of simplices.

    ``labels`` of the result holds the smallest vertex of each orbit.
    """
    verdict = check_dagger(X, action)
    if not verdict:
        raise DaggerViolation("action fails star separation", verdict.witness)
    elements = np.asarray(action.elements, dtype=np.int64)
    orbit_rep = elements.min(axis=0)
    reps = np.unique(orbit_rep)
    new_id = np.full(X.num_vertices, -1, dtype=np.int64)
    new_id[reps] = np.arange(len(reps))
    vmap = new_id[orbit_rep]
    arrays = []
    for k in range(X.dim + 1):
        img = np.sort(vmap[X.simplices(k)], axis=1)
        arrays.append(_unique_rows(img, k + 1))
        # orbits of k-simplices, computed independently of the vertex map
        rows = X.simplices(k)
        canon = None
        for g in elements:
            moved = X.find(k, np.sort(g[rows], axis=1))
            canon = moved if canon is None else np.minimum(canon, moved)
        n_orbits = len(np.unique(canon))
        if n_orbits != len(arrays[-1]):
            raise DaggerViolation(f"{k}-simplices of the quotient do not biject with orbits")
    return SimplicialComplex(arrays, labels=reps.tolist())


# -- apartments ---------------------------------------------------------


def _torus_ids(n: int, m: int) -> np.ndarray:
    coords = np.array(list(itertools.product(range(m), repeat=n + 1)), dtype=np.int64)
    return coords


def _torus_id(coords: np.ndarray, m: int) -> np.ndarray:
    coords = np.mod(coords, m)
    powers = m ** np.arange(coords.shape[-1] - 1, -1, -1, dtype=np.int64)
    return coords @ powers


def _torus_complex(n: int, m: int) -> SimplicialComplex:
    """Image of the apartment of lattice classes in (Z/m)^(n+1), no checks."""
    coords = _torus_ids(n, m)
    steps = [np.eye(n + 1, dtype=np.int64)[k] for k in range(n + 1)]
    steps.append(-np.ones(n + 1, dtype=np.int64))
    tops = set()
    for perm in itertools.permutations(range(n + 2)):
        walk = [np.zeros(n + 1, dtype=np.int64)]
        for k in perm[:-1]:
            walk.append(walk[-1] + steps[k])
        offsets = np.stack(walk)
        for a in coords:
            ids = _torus_id(a + offsets, m)
            if len(set(ids.tolist())) == n + 2:
                tops.add(tuple(sorted(ids.tolist())))
    return SimplicialComplex(_closure(sorted(tops), len(coords)))


def torus_translations(n: int, m: int, step: int) -> GroupAction:
    """Translations by ``step * e_k`` acting on the vertices of the ``m``-torus."""
    coords = _torus_ids(n, m)
    gens = []
    for k in range(n + 1):
        shifted = coords.copy()
        shifted[:, k] += step
        gens.append(tuple(_torus_id(shifted, m).tolist()))
    return GroupAction(tuple(gens), len(coords))


def apartment_torus(n: int, m: int) -> tuple[SimplicialComplex, DaggerResult]:
    """Quotient of the apartment of the ``SL_{n+2}`` building by ``m Z^{n+1}``.

    Vertex ``v`` has coordinates ``divmod``-decoded from ``v`` in base ``m``
    (first coordinate most significant).  The translation action is checked
    on the ``3m``-torus, which contains the stars of all translates that
    could meet; the returned :class:`DaggerResult` is that check.  The torus
    is also required to be a flag complex, i.e. the quotient adds no
    spurious simplices.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if m < 2:
        raise DaggerViolation("m must be at least 2", None)
    cover = _torus_complex(n, 3 * m)
    verdict = check_dagger(cover, torus_translations(n, 3 * m, m))
    if not verdict:
        raise DaggerViolation(f"translations by {m} fail star separation", verdict.witness)
    X = _torus_complex(n, m)
    spurious = flag_defect(X)
    if spurious is not None:
        raise DaggerViolation(f"m={m} wraps a clique {spurious} that is no simplex", spurious)
    if m < 4:
        raise DaggerViolation(f"m={m} is below the supported minimum 4", None)
    return X, verdict


# -- text format --------------------------------------------------------


def to_text(X: SimplicialComplex) -> str:
    """One maximal simplex per line, vertices ``0..V-1``, lines sorted."""
    lines = [" ".join(str(v) for v in s) for s in X.maximal_simplices()]
    return "\n".join(lines) + ("\n" if lines else "")


def from_text(text: str) -> SimplicialComplex:
    maximal = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            maximal.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise MalformedSimplexError(f"line {lineno}: {line!r}") from exc
    return build_from_maximal(maximal)


def read_complex(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        return from_text(fh.read())


def write_complex(X: SimplicialComplex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_text(X))
