"""Integer matrix groups acting on the hyperplane e+f+g-a-b-c-d = 1.

Coordinates are ordered (a, b, c, d, e, f, g).  A matrix ``M`` acts on a
parameter vector by ``x -> M x``.  Permutation matrices follow the column
convention: the permutation ``s`` sends basis vector ``e_i`` to ``e_s(i)``,
so ``(123)`` has a 1 in row 2 of column 1.

Right cosets ``G_L mu`` of the invariance group inside the governing group
are labelled ``1..6`` and ``1b..6b``; the governing group acts on them on the
right, ``(G_L mu) . nu = G_L (mu nu)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, InvalidTriple, NoTransporter, NotInGroup, PreconditionError

DIM = 7
VARIABLES = ("a", "b", "c", "d", "e", "f", "g")
# e+f+g-a-b-c-d, the functional fixing the hyperplane
CONSTRAINT = np.array([-1, -1, -1, -1, 1, 1, 1], dtype=np.int64)


@dataclass(frozen=True, order=True)
class GroupElement:
    """A 7x7 integer matrix, hashable and ordered by its row-major entries."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != DIM * DIM:
            raise ValueError(f"expected {DIM * DIM} entries, got {len(self.entries)}")

    @classmethod
    def from_array(cls, arr, check: bool = True) -> "GroupElement":
        arr = np.asarray(arr, dtype=np.int64).reshape(DIM, DIM)
        g = cls(tuple(int(v) for v in arr.ravel()))
        if check:
            g.validate()
        return g

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls.from_array(np.eye(DIM, dtype=np.int64), check=False)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.entries, dtype=np.int64).reshape(DIM, DIM)
        arr.setflags(write=False)
        return arr

    @property
    def rows(self) -> list[tuple[int, ...]]:
        return [self.entries[DIM * i:DIM * (i + 1)] for i in range(DIM)]

    def det(self) -> int:
        return int(round(np.linalg.det(self.array.astype(float))))

    def preserves_constraint(self) -> bool:
        return bool(np.array_equal(CONSTRAINT @ self.array, CONSTRAINT))

    def validate(self) -> None:
        if self.det() not in (1, -1):
            raise PreconditionError(f"determinant {self.det()} is not +-1")
        if not self.preserves_constraint():
            raise PreconditionError("matrix does not preserve the hyperplane functional")

    def is_identity(self) -> bool:
        return self == IDENTITY

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_array(self.array @ other.array, check=False)

    def __pow__(self, n: int) -> "GroupElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = IDENTITY
        for _ in range(n):
            result = result @ self
        return result

    def inverse(self) -> "GroupElement":
        inv = np.rint(np.linalg.inv(self.array.astype(float))).astype(np.int64)
        if not np.array_equal(inv @ self.array, np.eye(DIM, dtype=np.int64)):
            raise ValueError("matrix has no integer inverse")
        return GroupElement.from_array(inv, check=False)

    def apply(self, vector: Sequence):
        """Return ``M x`` for a length-7 sequence (any numeric type)."""
        return [sum(m * v for m, v in zip(row, vector) if m) for row in self.rows]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @classmethod
    def from_json(cls, data) -> "GroupElement":
        return cls.from_array(np.array(data, dtype=np.int64), check=False)

    def __repr__(self):
        return "GroupElement(" + "; ".join(" ".join(f"{v:2d}" for v in r) for r in self.rows) + ")"


IDENTITY = GroupElement(tuple(int(v) for v in np.eye(DIM, dtype=np.int64).ravel()))


def perm(cycles: str) -> GroupElement:
    """Permutation matrix from cycle notation on 1..7, e.g. ``"(123)(67)"``."""
    images = list(range(DIM))
    for cyc in re.findall(r"\(([1-7]+)\)", cycles):
        pts = [int(ch) - 1 for ch in cyc]
        for i, p in enumerate(pts):
            images[p] = pts[(i + 1) % len(pts)]
    if sorted(images) != list(range(DIM)):
        raise ValueError(f"not a permutation: {cycles!r}")
    arr = np.zeros((DIM, DIM), dtype=np.int64)
    for i, si in enumerate(images):
        arr[si, i] = 1
    return GroupElement.from_array(arr, check=False)


def product(*factors: GroupElement) -> GroupElement:
    result = IDENTITY
    for f in factors:
        result = result @ f
    return result


A = GroupElement.from_array([
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 1],
    [0, 0, 0, -1, 0, 0, 1],
    [0, 0, -1, -1, 1, 0, 1],
    [0, 0, -1, -1, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 1],
])


@lru_cache(maxsize=None)
def builtin_matrices() -> dict[str, GroupElement]:
    """Named matrices: generators, the involutions w0/w1/w2 and coset representatives."""
    m: dict[str, GroupElement] = {"I": IDENTITY, "A": A}
    for name in ("12", "23", "34", "56", "67", "57", "14"):
        m[f"({name})"] = perm(f"({name})")
    m["a1"] = m["(34)"]
    m["a2"] = m["(23)"]
    m["a3"] = m["(34)"] @ A
    m["a4"] = m["(67)"]
    m["a1'"] = m["(12)"]
    m["a5"] = m["(56)"]

    c123_67 = perm("(123)(67)")
    c123 = perm("(123)")
    m["[(123)(67)A]^2"] = (c123_67 @ A) ** 2
    m["[(123)(67)A]^3"] = (c123_67 @ A) ** 3
    m["[(123)A]^3"] = (c123 @ A) ** 3
    m["[(123)(67)A]^4"] = (c123_67 @ A) ** 4

    c1234_567 = perm("(1234)(567)")
    w0 = perm("(12)(34)") @ ((c1234_567 ** 2) @ A) ** 4
    w1 = perm("(1234)") @ (c1234_567 @ A) ** 3 @ perm("(1432)")
    w2 = w0 @ w1
    m["w0"], m["w1"], m["w2"] = w0, w1, w2

    reps = {
        "6": IDENTITY, "5": m["(56)"], "4": m["(57)"],
        "3": w2, "2": m["(56)"] @ w2, "1": m["(57)"] @ w2,
        "6b": w0, "5b": m["(56)"] @ w0, "4b": m["(57)"] @ w0,
        "3b": w1, "2b": m["(56)"] @ w1, "1b": m["(57)"] @ w1,
    }
    for k, v in reps.items():
        m[f"mu{k}"] = v

    m["(576)"] = perm("(576)")
    m["T_654b"] = perm("(14)(23)") @ m["[(123)A]^3"]
    m["T_654b_576"] = m["T_654b"] @ m["(576)"]
    for v in m.values():
        v.validate()
    return m


SIGMA_GENERATORS = ("(12)", "(23)", "(34)", "(67)")
GL_GENERATORS = ("(12)", "(23)", "(34)", "(67)", "A")
ML_GENERATORS = ("(12)", "(23)", "(34)", "(56)", "(67)", "A")
COXETER_GENERATORS = ("a1'", "a1", "a2", "a3", "a4", "a5")
DOUBLE_COSET_REPRESENTATIVES = (
    "I", "A", "[(123)(67)A]^2", "[(123)(67)A]^3", "[(123)A]^3", "[(123)(67)A]^4",
)


def _key(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype=np.int64).tobytes()


@dataclass
class MatrixGroup:
    """A finite matrix group stored by full enumeration."""

    elements: list[GroupElement]
    generators: list[GroupElement]
    name: str = ""
    _index: dict[bytes, int] = field(default_factory=dict, repr=False)
    _stack: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self._stack is None:
            self._stack = np.stack([g.array for g in self.elements])
        if not self._index:
            self._index = {_key(a): i for i, a in enumerate(self._stack)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return _key(g.array) in self._index

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def stack(self) -> np.ndarray:
        return self._stack

    def index(self, g: GroupElement) -> int:
        try:
            return self._index[_key(g.array)]
        except KeyError:
            raise NotInGroup(f"{g!r} is not in {self.name or 'the group'}") from None

    def lookup(self, arrays: np.ndarray) -> np.ndarray:
        """Indices of a stack of matrices; -1 where not a member."""
        return np.array([self._index.get(_key(a), -1) for a in arrays], dtype=np.int64)

    @cached_property
    def lex_order(self) -> np.ndarray:
        """Element indices sorted lexicographically by row-major entries."""
        flat = self._stack.reshape(len(self), -1)
        return np.lexsort(flat.T[::-1])


def generate_closure(generators: Sequence[GroupElement], cap: int, name: str = "") -> MatrixGroup:
    """Breadth-first closure under right multiplication by the generators."""
    for g in generators:
        g.validate()
    gens = np.stack([g.array for g in generators])
    eye = np.eye(DIM, dtype=np.int64)
    stack = [eye]
    seen = {_key(eye): 0}
    frontier = np.array([eye])
    while len(frontier):
        products = np.einsum("fij,gjk->fgik", frontier, gens)
        new = []
        for row in products.reshape(-1, DIM, DIM):
            k = _key(row)
            if k not in seen:
                seen[k] = len(stack)
                stack.append(row)
                new.append(row)
                if len(stack) > cap:
                    raise CapExceeded(f"closure of {name or 'group'} exceeded cap {cap}")
        frontier = np.array(new) if new else np.empty((0, DIM, DIM), dtype=np.int64)
    arr = np.stack(stack)
    elements = [GroupElement(tuple(int(v) for v in a.ravel())) for a in arr]
    return MatrixGroup(elements, list(generators), name=name, _index=seen, _stack=arr)


def is_member(g: GroupElement, group: MatrixGroup) -> bool:
    return g in group


@lru_cache(maxsize=None)
def sigma_group() -> MatrixGroup:
    m = builtin_matrices()
    return generate_closure([m[k] for k in SIGMA_GENERATORS], cap=480, name="Sigma")


@lru_cache(maxsize=None)
def invariance_group() -> MatrixGroup:
    m = builtin_matrices()
    return generate_closure([m[k] for k in GL_GENERATORS], cap=19200, name="G_L")


@lru_cache(maxsize=None)
def governing_group() -> MatrixGroup:
    m = builtin_matrices()
    return generate_closure([m[k] for k in ML_GENERATORS], cap=230400, name="M_L")


def group_by_name(which: str) -> MatrixGroup:
    table = {"sigma": sigma_group, "gl": invariance_group, "ml": governing_group}
    try:
        return table[which.lower()]()
    except KeyError:
        raise PreconditionError(f"unknown group {which!r}; expected GL, ML or Sigma") from None


# -- double cosets ---------------------------------------------------------

@dataclass(frozen=True)
class DoubleCoset:
    representative: GroupElement
    size: int
    members: frozenset[GroupElement]


def double_cosets(group: MatrixGroup, sub: MatrixGroup) -> list[DoubleCoset]:
    """Partition ``group`` into classes ``sub g sub``, sorted by (size, representative)."""
    S = sub.stack
    assigned = np.full(len(group), False)
    classes = []
    for idx in group.lex_order:
        if assigned[idx]:
            continue
        g = group.stack[idx]
        prods = np.einsum("sij,jk,tkl->stil", S, g, S).reshape(-1, DIM, DIM)
        members = np.unique(group.lookup(prods))
        if (members < 0).any():
            raise NotInGroup("subgroup is not contained in the group")
        assigned[members] = True
        elems = frozenset(group.elements[i] for i in members)
        # idx is the first unassigned element in lex order, hence the least of its class
        classes.append(DoubleCoset(group.elements[idx], len(elems), elems))
    classes.sort(key=lambda c: (c.size, c.representative))
    return classes


# -- coset labels ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CosetLabel:
    """One of the twelve right cosets of G_L in M_L: ``1..6`` or ``1b..6b``."""

    barred: bool
    index: int

    def __post_init__(self):
        if not 1 <= self.index <= 6:
            raise ValueError(f"coset index {self.index} outside 1..6")

    @classmethod
    def parse(cls, text: str | int | "CosetLabel") -> "CosetLabel":
        if isinstance(text, CosetLabel):
            return text
        s = str(text).strip()
        m = re.fullmatch(r"([1-6])(b?)", s)
        if not m:
            raise InvalidTriple(f"cannot parse coset label {text!r}")
        return cls(barred=bool(m.group(2)), index=int(m.group(1)))

    @property
    def code(self) -> int:
        return self.index - 1 + (6 if self.barred else 0)

    @classmethod
    def from_code(cls, code: int) -> "CosetLabel":
        return cls(barred=code >= 6, index=code % 6 + 1)

    def bar(self) -> "CosetLabel":
        return CosetLabel(not self.barred, self.index)

    def __str__(self):
        return f"{self.index}{'b' if self.barred else ''}"

    def __repr__(self):
        return f"CosetLabel({self})"


ALL_LABELS = tuple(CosetLabel.from_code(k) for k in range(12))


def parse_triple(text) -> frozenset[CosetLabel]:
    parts = text.split(",") if isinstance(text, str) else list(text)
    labels = [CosetLabel.parse(p) for p in parts]
    if len(labels) != 3 or len(set(labels)) != 3:
        raise InvalidTriple(f"expected three distinct coset labels, got {text!r}")
    return frozenset(labels)


def format_triple(triple: Iterable[CosetLabel]) -> str:
    return "{" + ",".join(str(x) for x in sorted(triple, key=lambda l: (l.barred, -l.index))) + "}"


def coset_representatives() -> dict[CosetLabel, GroupElement]:
    m = builtin_matrices()
    return {lab: m[f"mu{lab}"] for lab in ALL_LABELS}


class CosetTable:
    """Right cosets of G_L in M_L and the permutation representation on them."""

    def __init__(self, gl: MatrixGroup | None = None, ml: MatrixGroup | None = None):
        self.gl = gl or invariance_group()
        self.ml = ml or governing_group()
        self.representatives = coset_representatives()
        n = len(self.ml)
        labels = np.full(n, -1, dtype=np.int64)
        for lab, mu in self.representatives.items():
            idx = self.ml.lookup(self.gl.stack @ mu.array)
            if (idx < 0).any():
                raise NotInGroup(f"representative of coset {lab} is not in M_L")
            if (labels[idx] >= 0).any():
                raise ValueError(f"coset {lab} overlaps another coset")
            labels[idx] = lab.code
        if (labels < 0).any():
            raise ValueError("the twelve cosets do not cover M_L")
        self._labels = labels

    def label_of_index(self, idx: int) -> CosetLabel:
        return CosetLabel.from_code(int(self._labels[idx]))

    def coset_label(self, mu: GroupElement) -> CosetLabel:
        return self.label_of_index(self.ml.index(mu))

    def coset_members(self, label: CosetLabel) -> list[GroupElement]:
        return [self.ml.elements[i] for i in np.nonzero(self._labels == label.code)[0]]

    @cached_property
    def phi_table(self) -> np.ndarray:
        """``table[k, c]`` = code of ``label(c) . M_L[k]`` for all 12 labels ``c``."""
        n = len(self.ml)
        out = np.empty((n, 12), dtype=np.int64)
        for lab, mu in self.representatives.items():
            idx = self.ml.lookup(mu.array @ self.ml.stack)
            out[:, lab.code] = self._labels[idx]
        return out

    def act(self, label: CosetLabel, mu: GroupElement) -> CosetLabel:
        return self.coset_label(self.representatives[label] @ mu)

    def permutation_rep(self, mu: GroupElement) -> "SignedPermutation":
        k = self.ml.index(mu)
        return SignedPermutation(tuple(CosetLabel.from_code(int(c)) for c in self.phi_table[k, :6]))

    def triple_image(self, triple: Iterable[CosetLabel], mu: GroupElement) -> frozenset[CosetLabel]:
        return frozenset(self.act(lab, mu) for lab in triple)

    def triple_orbits(self) -> list[frozenset[frozenset[CosetLabel]]]:
        """Orbits of M_L on 3-element subsets of labels, largest first."""
        gens = [self.phi_table[self.ml.index(g)] for g in self.ml.generators]
        todo = {frozenset(t) for t in itertools.combinations(range(12), 3)}
        orbits = []
        while todo:
            start = min(todo, key=sorted)
            orbit = {start}
            queue = [start]
            while queue:
                t = queue.pop()
                for p in gens:
                    img = frozenset(int(p[c]) for c in t)
                    if img not in orbit:
                        orbit.add(img)
                        queue.append(img)
            todo -= orbit
            orbits.append(frozenset(frozenset(CosetLabel.from_code(c) for c in t) for t in orbit))
        orbits.sort(key=len, reverse=True)
        return orbits

    def find_transporter(
        self,
        source: Iterable[CosetLabel],
        target: Iterable[CosetLabel],
        ordered_images: Mapping[CosetLabel, CosetLabel] | None = None,
    ) -> tuple[GroupElement, dict[CosetLabel, CosetLabel]]:
        """Least ``mu`` with ``source . mu = target``; the identity wins whenever it qualifies.

        Returns the element and the induced correspondence source label -> target label.
        """
        src = sorted(source)
        tgt = frozenset(target)
        if len(set(src)) != 3 or len(tgt) != 3:
            raise InvalidTriple("transporter needs two triples of distinct labels")
        table = self.phi_table[:, [lab.code for lab in src]]
        if ordered_images:
            want = np.array([ordered_images[lab].code for lab in src])
            ok = (table == want).all(axis=1)
        else:
            ok = (np.sort(table, axis=1) == np.array(sorted(l.code for l in tgt))).all(axis=1)
        if not ok.any():
            raise NoTransporter(f"{format_triple(src)} and {format_triple(tgt)} lie in different orbits")
        ident = self.ml.index(IDENTITY)
        if ok[ident]:
            k = ident
        else:
            order = self.ml.lex_order
            k = int(order[np.argmax(ok[order])])
        mu = self.ml.elements[k]
        return mu, {lab: CosetLabel.from_code(int(c)) for lab, c in zip(src, self.phi_table[k, [l.code for l in src]])}


@dataclass(frozen=True)
class SignedPermutation:
    """Images of the unbarred labels 1..6; barred labels follow by adding a bar."""

    images: tuple[CosetLabel, ...]

    def __call__(self, label: CosetLabel) -> CosetLabel:
        img = self.images[label.index - 1]
        return img.bar() if label.barred else img

    def bar_count(self) -> int:
        return sum(l.barred for l in self.images)

    def is_identity(self) -> bool:
        return all(not l.barred and l.index == i + 1 for i, l in enumerate(self.images))

    def then(self, other: "SignedPermutation") -> "SignedPermutation":
        """Right-action composition: first self, then other."""
        return SignedPermutation(tuple(other(l) for l in self.images))

    def __str__(self):
        return " ".join(f"{i + 1}->{l}" for i, l in enumerate(self.images))


def is_coherent(triple: Iterable[CosetLabel]) -> bool:
    labels = set(triple)
    return not any(l.bar() in labels for l in labels)


@lru_cache(maxsize=None)
def coset_table() -> CosetTable:
    return CosetTable()


def coset_label(mu: GroupElement) -> CosetLabel:
    return coset_table().coset_label(mu)


def permutation_rep(mu: GroupElement) -> SignedPermutation:
    return coset_table().permutation_rep(mu)


def triple_orbits():
    return coset_table().triple_orbits()


def find_transporter(source, target, ordered_images=None):
    return coset_table().find_transporter(source, target, ordered_images)
