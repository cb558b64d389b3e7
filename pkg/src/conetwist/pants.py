"""Standard curves and pair-of-pants decompositions of punctured spheres.

A standard curve is described by a *block*: a cyclically consecutive run of
puncture indices.  The curve's word is the product of the block's peripheral
generators in cyclic order and the block is the side to the curve's left
(side1).  The complementary block describes the same unoriented curve.

A decomposition is a set of ``d - 3`` pairwise disjoint standard curves.  It is
validated by *merging*: every curve is rewritten as the block avoiding the
first puncture of the ordering, the blocks are processed by increasing size,
and each must be the union of exactly two current elements (punctures or
previously merged blocks).  Each merge is one pants piece; the last three
elements form the root piece.  This gives the dual tree for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import commutator, is_central, is_special_unitary, trace
from .errors import NumericalError, PreconditionError, ReducibleError
from .groups import Representation, Word, concat, evaluate, invert_word, is_irreducible_mats

COMMUTE_TOL = 1e-8


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveClass:
    """A separating standard curve on the d-punctured sphere.

    ``block`` lists side1 punctures in cyclic order; ``side2`` is the rest,
    also in cyclic order.  ``word`` is the product of the side1 generators.
    """

    d: int
    block: tuple

    def __post_init__(self):
        b = tuple(int(i) for i in self.block)
        object.__setattr__(self, "block", b)
        if not 1 <= len(b) <= self.d - 1:
            raise PreconditionError("both sides of a curve must contain punctures")
        if any(not 0 <= i < self.d for i in b):
            raise PreconditionError(f"block {b} out of range for d={self.d}")
        for x, y in zip(b, b[1:]):
            if y != (x + 1) % self.d:
                raise PreconditionError(f"block {b} is not cyclically consecutive")

    @classmethod
    def from_range(cls, d: int, start: int, length: int) -> "CurveClass":
        return cls(d, tuple((start + k) % d for k in range(length)))

    @property
    def side1(self) -> tuple:
        return self.block

    @property
    def side2(self) -> tuple:
        start = (self.block[-1] + 1) % self.d
        return tuple((start + k) % self.d for k in range(self.d - len(self.block)))

    @property
    def word(self) -> Word:
        return tuple((i, 1) for i in self.block)

    @property
    def is_peripheral(self) -> bool:
        return len(self.block) in (1, self.d - 1)

    def complement(self) -> "CurveClass":
        """The same curve with the opposite orientation (sides swapped)."""
        return CurveClass(self.d, self.side2)

    def same_curve(self, other: "CurveClass") -> bool:
        return self.d == other.d and set(self.block) in (set(other.block), set(other.side2))


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PantsPiece:
    """Three boundary words with ``w1 w2 w3 = 1`` in the group.

    ``parts`` records what each boundary is: ``("puncture", i)``,
    ``("curve", j)`` (index into the decomposition's curves) or ``None`` for
    the outer boundary ``w3`` of a non-root piece.
    """

    words: tuple
    parts: tuple
    outer_curve: int | None = None


@dataclass(frozen=True)
class PantsDecomposition:
    d: int
    curves: tuple
    ordering: tuple = None
    pieces: tuple = field(init=False, repr=False, compare=False)
    flipped: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = self.d
        order = tuple(range(d)) if self.ordering is None else tuple(int(i) for i in self.ordering)
        if sorted(order) != list(range(d)) or any(order[k] != (order[0] + k) % d for k in range(d)):
            raise PreconditionError("ordering must be a cyclic rotation of the puncture order")
        object.__setattr__(self, "ordering", order)
        curves = tuple(c if isinstance(c, CurveClass) else CurveClass(d, c) for c in self.curves)
        object.__setattr__(self, "curves", curves)
        if len(curves) != d - 3:
            raise PreconditionError(f"need {d - 3} curves, got {len(curves)}")
        pieces, flipped = _merge(d, order[0], curves)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "flipped", flipped)

    @property
    def root(self) -> PantsPiece:
        return self.pieces[-1]

    def piece_of_curve(self, j: int) -> int:
        """Index of the piece whose outer boundary is curve ``j``."""
        return next(k for k, p in enumerate(self.pieces) if p.outer_curve == j)

    def tree_edges(self) -> list[tuple[int, int, int]]:
        """Dual tree as ``(parent piece, child piece, curve index)`` triples."""
        edges = []
        for k, p in enumerate(self.pieces):
            for part in p.parts:
                if part is not None and part[0] == "curve":
                    edges.append((k, self.piece_of_curve(part[1]), part[1]))
        return edges


def _merge(d: int, anchor: int, curves: Sequence[CurveClass]):
    """Validate disjointness and build the pants pieces (see module docstring)."""
    pos = {(anchor + k) % d: k for k in range(d)}
    canon = []
    flipped = []
    for c in curves:
        if c.is_peripheral:
            raise PreconditionError(f"curve {c.block} is peripheral")
        flip = anchor in c.block
        blk = c.side2 if flip else c.block
        canon.append((pos[blk[0]], pos[blk[-1]]))
        flipped.append(flip)
    if len(set(canon)) != len(canon):
        raise PreconditionError("decomposition repeats a curve")
    # current elements: (first position, last position, word, part)
    elems = [(k, k, (((anchor + k) % d, 1),), ("puncture", (anchor + k) % d)) for k in range(1, d)]
    pieces = []
    for j in sorted(range(len(curves)), key=lambda j: canon[j][1] - canon[j][0]):
        lo, hi = canon[j]
        k = next((k for k, e in enumerate(elems) if e[0] == lo), None)
        if k is None or k + 1 >= len(elems) or elems[k + 1][1] != hi:
            raise PreconditionError("curves are not pairwise disjoint / nested")
        a, b = elems[k], elems[k + 1]
        merged = concat(a[2], b[2])
        pieces.append(PantsPiece((a[2], b[2], invert_word(merged)), (a[3], b[3], None), outer_curve=j))
        elems[k:k + 2] = [(lo, hi, merged, ("curve", j))]
    assert len(elems) == 2
    root = PantsPiece(
        (((anchor, 1),), elems[0][2], elems[1][2]),
        (("puncture", anchor), elems[0][3], elems[1][3]),
    )
    pieces.append(root)
    return tuple(pieces), tuple(flipped)


def standard_decomposition(d: int, start: int = 0) -> PantsDecomposition:
    """Nested curves ``g_s g_{s+1}``, ``g_s g_{s+1} g_{s+2}``, ... (indices mod d)."""
    curves = [CurveClass.from_range(d, start, k + 2) for k in range(d - 3)]
    return PantsDecomposition(d, tuple(curves), tuple((start + k) % d for k in range(d)))


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def commute_defect(a: np.ndarray, b: np.ndarray) -> float:
    """``|tr[a, b] - 2|``: zero exactly when ``a`` and ``b`` are reducible as a pair."""
    return abs(trace(commutator(a, b)) - 2.0)


def restriction_irreducible(rep: Representation, piece: PantsPiece, tol: float = COMMUTE_TOL) -> bool:
    a = evaluate(rep, piece.words[0])
    b = evaluate(rep, piece.words[1])
    return commute_defect(a, b) > tol


def is_admissible(rep: Representation, dec: PantsDecomposition, tol: float = COMMUTE_TOL) -> bool:
    if rep.presentation.kind != "punctured_sphere" or rep.presentation.size != dec.d:
        raise PreconditionError("decomposition does not match the presentation")
    if dec.d == 3:
        return is_irreducible_mats(rep.mats)
    return all(restriction_irreducible(rep, p, tol) for p in dec.pieces)


def find_admissible(rep: Representation, tol: float = COMMUTE_TOL, first: int | None = None) -> PantsDecomposition:
    """Inductive construction of an admissible decomposition for SU(2) data.

    At each step the current punctures (original or merged) form a cyclic list
    ``q_0 .. q_{m-1}`` with product 1.  Take the first cyclically adjacent pair
    ``(q_i, q_{i+1})`` that does not commute and cut along ``q_i q_{i+1}``; if
    the complementary list is reducible, cut along ``q_{i+1} q_{i+2}`` instead.
    Both choices leave irreducible pieces.  ``first`` forces the first cut to
    be ``g_first g_{first+1}``.
    """
    pres = rep.presentation
    if pres.kind != "punctured_sphere":
        raise PreconditionError("find_admissible works on punctured spheres")
    d = pres.size
    if not all(is_special_unitary(m, 1e-8) for m in rep.mats):
        raise PreconditionError("find_admissible requires special-unitary values")
    if not is_irreducible_mats(rep.mats):
        raise ReducibleError("representation is reducible")
    if any(is_central(m, 1e-9) for m in rep.mats):
        raise PreconditionError("a peripheral holonomy is central")
    # elements: (tuple of puncture indices, matrix)
    elems = [((i,), rep.mats[i]) for i in range(d)]
    curves = []
    while len(elems) > 3:
        m = len(elems)
        if first is not None and not curves:
            k = next(k for k, e in enumerate(elems) if e[0] == (first % d,))
            candidates = [k]
        else:
            k = next((k for k in range(m) if commute_defect(elems[k][1], elems[(k + 1) % m][1]) > tol), None)
            if k is None:
                raise NumericalError("no adjacent non-commuting pair (representation numerically reducible)")
            candidates = [k, (k + 1) % m]
        for k in candidates:
            k2 = (k + 1) % m
            merged = (elems[k][0] + elems[k2][0], elems[k][1] @ elems[k2][1])
            rest = [elems[j] for j in range(m) if j not in (k, k2)]
            pair_ok = commute_defect(elems[k][1], elems[k2][1]) > tol
            if pair_ok and is_irreducible_mats([merged[1]] + [e[1] for e in rest]):
                break
        else:
            raise NumericalError("inductive step failed: no admissible cut found")
        curves.append(CurveClass(d, merged[0]))
        if k2 == 0:
            elems = elems[1:k] + [merged]
        else:
            elems = elems[:k] + [merged] + elems[k2 + 1:]
    return PantsDecomposition(d, tuple(curves))
