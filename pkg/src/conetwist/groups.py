"""Surface-group presentations, words, representations and automorphisms.

Generators are indexed from 0 internally.  A word is a tuple of
``(index, exponent)`` pairs with exponent ``+1`` or ``-1``.

Two presentations are supported:

* ``punctured_sphere(d)``: generators ``g_0 .. g_{d-1}`` (peripheral loops)
  with the relation ``g_0 g_1 ... g_{d-1} = 1``;
* ``closed_genus(g)``: generators ``a_1, b_1, ..., a_g, b_g`` stored in that
  order with the relation ``[a_1, b_1] ... [a_g, b_g] = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .algebra import IDENTITY, conjugator_solve, inverse, is_central, one_param, random_su2
from .errors import PreconditionError, ReducibleError

RELATION_TOL = 1e-10

Word = tuple  # tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def word(letters: Iterable) -> Word:
    """Build a word from ``(index, exponent)`` pairs, validating exponents."""
    out = []
    for idx, e in letters:
        if e not in (1, -1):
            raise PreconditionError(f"exponent must be +-1, got {e}")
        out.append((int(idx), int(e)))
    return tuple(out)


def word_from_signed(signed: Iterable[int]) -> Word:
    """Word from signed 1-based indices: ``[1, -3]`` means ``g_0 g_2^-1``."""
    out = []
    for s in signed:
        if s == 0:
            raise PreconditionError("signed letters are 1-based and nonzero")
        out.append((abs(s) - 1, 1 if s > 0 else -1))
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple((i, -e) for i, e in reversed(w))


def free_reduce(w: Word) -> Word:
    out: list = []
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def concat(*ws: Word) -> Word:
    return tuple(letter for w in ws for letter in w)


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Apply the endomorphism ``g_i -> images[i]`` to ``w``."""
    out = []
    for i, e in w:
        out.extend(images[i] if e > 0 else invert_word(images[i]))
    return free_reduce(tuple(out))


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind == "punctured_sphere":
            if self.size < 3:
                raise PreconditionError("punctured sphere needs d >= 3")
        elif self.kind == "closed_genus":
            if self.size < 2:
                raise PreconditionError("closed surface needs genus >= 2")
        else:
            raise PreconditionError(f"unknown presentation kind {self.kind!r}")

    @property
    def n_generators(self) -> int:
        return self.size if self.kind == "punctured_sphere" else 2 * self.size

    @property
    def n_free(self) -> int:
        """Number of generators that may be chosen freely."""
        return self.size - 1 if self.kind == "punctured_sphere" else 2 * self.size

    @property
    def generator_names(self) -> list[str]:
        if self.kind == "punctured_sphere":
            return [f"g{i + 1}" for i in range(self.size)]
        return [f"{x}{i + 1}" for i in range(self.size) for x in "ab"]

    @property
    def relation(self) -> Word:
        if self.kind == "punctured_sphere":
            return tuple((i, 1) for i in range(self.size))
        out = []
        for k in range(self.size):
            a, b = 2 * k, 2 * k + 1
            out += [(a, 1), (b, 1), (a, -1), (b, -1)]
        return tuple(out)

    def check_word(self, w: Word) -> None:
        n = self.n_generators
        for i, e in w:
            if not 0 <= i < n or e not in (1, -1):
                raise PreconditionError(f"letter {(i, e)} invalid for {n} generators")


def punctured_sphere(d: int) -> Presentation:
    return Presentation("punctured_sphere", d)


def closed_genus(g: int) -> Presentation:
    return Presentation("closed_genus", g)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Representation:
    """Matrices for every generator; the relation holds within ``RELATION_TOL``."""

    presentation: Presentation
    mats: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.mats, dtype=np.complex128)
        if m.shape != (self.presentation.n_generators, 2, 2):
            raise PreconditionError(f"expected {self.presentation.n_generators} matrices, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mats", m)
        defect = relation_defect(self)
        if defect > RELATION_TOL * max(1.0, float(np.abs(m).max()) ** len(self.presentation.relation)):
            raise PreconditionError(f"relation violated (defect {defect:.3e})")

    def __len__(self) -> int:
        return len(self.mats)

    def conjugate(self, g: np.ndarray) -> "Representation":
        """Return ``g rep g^-1``."""
        gi = inverse(g)
        return Representation(self.presentation, np.einsum("ij,njk,kl->nil", g, self.mats, gi))


def _letters(w: Word) -> tuple[np.ndarray, np.ndarray]:
    if len(w) == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = np.asarray(w, dtype=np.int64)
    return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])


def evaluate_mats(mats: np.ndarray, w: Word) -> np.ndarray:
    """Evaluate a word on a raw ``(n, 2, 2)`` array of generator matrices."""
    letters, exps = _letters(w)
    return _kernels.active.word_product(np.ascontiguousarray(mats, dtype=np.complex128), letters, exps)


def evaluate(rep: Representation, w: Word) -> np.ndarray:
    """The homomorphism ``rho`` applied to a word."""
    rep.presentation.check_word(w)
    return evaluate_mats(rep.mats, w)


def relation_defect(rep: Representation) -> float:
    return float(np.abs(evaluate_mats(rep.mats, rep.presentation.relation) - IDENTITY).max())


def make_representation(pres: Presentation, mats) -> Representation:
    """Build a representation.

    For ``punctured_sphere(d)`` pass ``d - 1`` matrices and the last one is
    set to the inverse of their product (``d`` matrices are accepted and
    checked).  For ``closed_genus(g)`` pass all ``2g`` matrices.
    """
    m = np.array(mats, dtype=np.complex128)
    if pres.kind == "punctured_sphere" and len(m) == pres.size - 1:
        last = inverse(evaluate_mats(m, tuple((i, 1) for i in range(len(m)))))
        m = np.concatenate([m, last[None]])
    return Representation(pres, m)


# ---------------------------------------------------------------------------
# irreducibility and unitarization
# ---------------------------------------------------------------------------

def is_irreducible_mats(mats: Sequence[np.ndarray], tol: float = 1e-9) -> bool:
    """True when the matrices have no common eigenline."""
    mats = [np.asarray(m) for m in mats]
    first = next((m for m in mats if not is_central(m, tol)), None)
    if first is None:
        return False
    _, vecs = np.linalg.eig(first)
    for k in range(2):
        v = vecs[:, k] / np.linalg.norm(vecs[:, k])
        invariant = True
        for m in mats:
            mv = m @ v
            wedge = abs(v[0] * mv[1] - v[1] * mv[0])
            if wedge > tol * max(1.0, float(np.abs(m).max())):
                invariant = False
                break
        if invariant:
            return False
    return True


def is_irreducible(rep: Representation, tol: float = 1e-9) -> bool:
    return is_irreducible_mats(rep.mats, tol)


def _hermitian_basis() -> list[np.ndarray]:
    return [
        np.array([[1, 0], [0, 0]], dtype=np.complex128),
        np.array([[0, 0], [0, 1]], dtype=np.complex128),
        np.array([[0, 1], [1, 0]], dtype=np.complex128),
        np.array([[0, 1j], [-1j, 0]], dtype=np.complex128),
    ]


def unitarize(rep: Representation, tol: float = 1e-9) -> Representation:
    """Conjugate an irreducible representation into SU(2).

    Solves the linear system ``A^* H A = H`` for a Hermitian form ``H``, checks
    that it is positive definite and conjugates by ``H^(1/2)``.
    """
    if not is_irreducible(rep, tol):
        raise ReducibleError("unitarize requires an irreducible representation")
    basis = _hermitian_basis()
    rows = []
    for a in rep.mats:
        cols = [(a.conj().T @ h @ a - h).ravel() for h in basis]
        block = np.stack(cols, axis=1)
        rows += [block.real, block.imag]
    sysm = np.vstack(rows)
    _, s, vh = np.linalg.svd(sysm)
    if s[-1] > 1e-8 * max(1.0, s[0]):
        raise PreconditionError("no invariant Hermitian form: representation is not unitarizable")
    coef = vh[-1]
    h = sum(c * b for c, b in zip(coef, basis))
    w, v = np.linalg.eigh(h)
    if w[0] * w[1] <= 0:
        raise PreconditionError("invariant Hermitian form is indefinite: not unitarizable")
    if w[0] < 0:
        w = -w
    root = v @ np.diag(np.sqrt(w)) @ v.conj().T
    root = root / np.sqrt(np.linalg.det(root))
    return rep.conjugate(root)


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    """Images of the generators, as words."""

    presentation: Presentation
    images: tuple

    def __post_init__(self):
        imgs = tuple(tuple(map(tuple, w)) for w in self.images)
        if len(imgs) != self.presentation.n_generators:
            raise PreconditionError("one image word per generator required")
        for w in imgs:
            self.presentation.check_word(w)
        object.__setattr__(self, "images", imgs)

    def then(self, other: "Automorphism") -> "Automorphism":
        """Composite acting on representations as ``self`` first, then ``other``.

        ``apply(apply(rep, self), other) == apply(rep, self.then(other))``.
        """
        return Automorphism(self.presentation, tuple(substitute(w, self.images) for w in other.images))

    def image(self, w: Word) -> Word:
        return substitute(w, self.images)


def identity_automorphism(pres: Presentation) -> Automorphism:
    return Automorphism(pres, tuple(((i, 1),) for i in range(pres.n_generators)))


def apply_automorphism(rep: Representation, aut: Automorphism) -> Representation:
    """Precompose: generator ``i`` maps to ``rep(aut.images[i])``."""
    if aut.presentation != rep.presentation:
        raise PreconditionError("automorphism and representation presentations differ")
    mats = np.stack([evaluate(rep, w) for w in aut.images])
    return Representation(rep.presentation, mats)


# ---------------------------------------------------------------------------
# trace fingerprints
# ---------------------------------------------------------------------------

def default_words(pres: Presentation) -> list[Word]:
    """Generators, pairwise products ``g_i g_j`` (i < j), cyclically consecutive triples."""
    n = pres.n_generators
    out = [((i, 1),) for i in range(n)]
    out += [((i, 1), (j, 1)) for i, j in combinations(range(n), 2)]
    out += [((i, 1), ((i + 1) % n, 1), ((i + 2) % n, 1)) for i in range(n)]
    return out


def fingerprint(rep: Representation, words: Sequence[Word] | None = None) -> np.ndarray:
    ws = default_words(rep.presentation) if words is None else words
    return np.array([np.trace(evaluate(rep, w)) for w in ws])


def chars_distance(f1, f2) -> float:
    """Max absolute trace difference between two fingerprints or representations."""
    if isinstance(f1, Representation):
        f1 = fingerprint(f1)
    if isinstance(f2, Representation):
        f2 = fingerprint(f2)
    return float(np.abs(np.asarray(f1) - np.asarray(f2)).max())


# ---------------------------------------------------------------------------
# random representations
# ---------------------------------------------------------------------------

def random_su2_representation(d: int, rng: np.random.Generator, margin: float = 1e-3,
                              max_tries: int = 1000) -> Representation:
    """Random irreducible SU(2) representation of the d-punctured sphere group.

    Free generators are Haar random; the last is fixed by the relation.
    Draws are rejected until the result is irreducible and every peripheral
    trace stays ``margin`` away from ``+-2``.
    """
    pres = punctured_sphere(d)
    for _ in range(max_tries):
        rep = make_representation(pres, random_su2(rng, d - 1))
        traces = np.trace(rep.mats, axis1=1, axis2=2).real
        if np.all(np.abs(np.abs(traces) - 2) > margin) and is_irreducible(rep):
            return rep
    raise RuntimeError("rejection sampling failed")  # pragma: no cover


def random_genus2_su2(rng: np.random.Generator) -> Representation:
    """Random SU(2) representation of the genus-2 group.

    ``a2 = h b1 h^-1`` and ``b2 = h a1 h^-1`` with ``h`` in the centralizer of
    ``[a1, b1]``, which makes ``[a1,b1][a2,b2] = 1`` hold exactly.
    """
    a1, b1 = random_su2(rng, 2)
    c = a1 @ b1 @ inverse(a1) @ inverse(b1)
    h = one_param(c, rng.normal())
    hi = inverse(h)
    mats = np.stack([a1, b1, h @ b1 @ hi, h @ a1 @ hi])
    return Representation(closed_genus(2), mats)


def same_character(r1: Representation, r2: Representation, tol: float = 1e-8) -> bool:
    return chars_distance(r1, r2) <= tol


def align(r1: Representation, r2: Representation) -> np.ndarray:
    """Conjugator ``g`` with ``g r1 g^-1 = r2`` (r1 irreducible)."""
    return conjugator_solve(list(r1.mats), list(r2.mats))
