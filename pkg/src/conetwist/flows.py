"""Complex twist flows along simple closed curves.

Separating curve (amalgamated product): the flow fixes the side1 generators
and conjugates the side2 generators by ``zeta_z = exp(z F(rho(gamma)))``.

Non-separating curve (HNN extension): the flow fixes the cut-surface
generators and replaces the stable letter ``lambda`` by
``zeta_z rho(lambda)``.

Convention: keeping the curve word fixed and exchanging side1 with side2
turns ``psi_z`` into ``psi_{-z}`` at the level of characters.  Using the
complementary block (whose product is conjugate to the inverse word) together
with its own side convention describes the same flow.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .algebra import exp_traceless, inverse, one_param
from .errors import NumericalError, PreconditionError
from .groups import Representation, Word, chars_distance, evaluate, evaluate_mats
from .pants import CurveClass

_SL2_BASIS = np.array([
    [[1, 0], [0, -1]],
    [[0, 1], [0, 0]],
    [[0, 0], [1, 0]],
], dtype=np.complex128)


@dataclass(frozen=True)
class SplitData:
    """A separating curve: its word and the two generator sides.

    ``side2`` is the set conjugated by the flow.  ``curve`` is kept when the
    split comes from a standard punctured-sphere curve, so that disjointness
    can be checked structurally.
    """

    word: Word
    side1: tuple
    side2: tuple
    curve: CurveClass | None = None

    def __post_init__(self):
        s1, s2 = tuple(self.side1), tuple(self.side2)
        object.__setattr__(self, "side1", s1)
        object.__setattr__(self, "side2", s2)
        object.__setattr__(self, "word", tuple(tuple(x) for x in self.word))
        if set(s1) & set(s2):
            raise PreconditionError("sides overlap")
        used = {i for i, _ in self.word}
        if not (used <= set(s1) or used <= set(s2)):
            raise PreconditionError("curve word must be supported on one side")

    @classmethod
    def from_curve(cls, curve: CurveClass) -> "SplitData":
        return cls(curve.word, curve.side1, curve.side2, curve)

    @classmethod
    def from_block(cls, d: int, block: Sequence[int]) -> "SplitData":
        return cls.from_curve(CurveClass(d, tuple(block)))

    def swapped(self) -> "SplitData":
        """Same curve word with the roles of the sides exchanged (``z -> -z``)."""
        return SplitData(self.word, self.side2, self.side1, None)


@dataclass(frozen=True)
class HNNData:
    """A non-separating curve on a closed surface.

    ``stable`` is the letter ``(index, exponent)`` realizing the stable letter
    ``lambda``; ``gamma_minus`` and ``gamma_plus`` are the two boundary words of
    the cut surface, with ``lambda^-1 gamma_minus lambda = gamma_plus``.
    """

    cut: tuple
    stable: tuple
    gamma_minus: Word
    gamma_plus: Word


def standard_hnn(genus: int, handle: int = 0) -> HNNData:
    """HNN data for the curve ``a_k`` with stable letter ``b_k^-1``."""
    a, b = 2 * handle, 2 * handle + 1
    cut = tuple(i for i in range(2 * genus) if i != b)
    return HNNData(cut, (b, -1), ((a, 1),), ((b, 1), (a, 1), (b, -1)))


def separating_genus_split(genus: int, k: int = 1) -> SplitData:
    """The separating curve ``[a_1,b_1]...[a_k,b_k]`` on a closed surface."""
    w = []
    for h in range(k):
        a, b = 2 * h, 2 * h + 1
        w += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return SplitData(tuple(w), tuple(range(2 * k)), tuple(range(2 * k, 2 * genus)))


# ---------------------------------------------------------------------------
# single flows
# ---------------------------------------------------------------------------

def _new_rep(rep: Representation, mats: np.ndarray) -> Representation:
    try:
        return Representation(rep.presentation, mats)
    except PreconditionError as exc:
        raise NumericalError(f"relation lost during flow: {exc}") from exc


def curve_holonomy(rep: Representation, split: SplitData) -> np.ndarray:
    return evaluate(rep, split.word)


def twist_separating(rep: Representation, split: SplitData, z: complex) -> Representation:
    """Fix side1, conjugate side2 by ``exp(z F(rho(gamma)))``."""
    zeta = one_param(evaluate(rep, split.word), z)
    zi = inverse(zeta)
    mats = rep.mats.copy()
    for i in split.side2:
        mats[i] = zeta @ mats[i] @ zi
    return _new_rep(rep, mats)


def twist_hnn(rep: Representation, h: HNNData, z: complex) -> Representation:
    """Fix the cut surface, send ``lambda`` to ``zeta_z rho(lambda)``."""
    if rep.presentation.kind != "closed_genus":
        raise PreconditionError("HNN twists act on closed-surface presentations")
    zeta = one_param(evaluate(rep, h.gamma_minus), z)
    idx, e = h.stable
    mats = rep.mats.copy()
    mats[idx] = zeta @ mats[idx] if e > 0 else mats[idx] @ inverse(zeta)
    return _new_rep(rep, mats)


def twist(rep: Representation, data, z: complex) -> Representation:
    if isinstance(data, HNNData):
        return twist_hnn(rep, data, z)
    return twist_separating(rep, data, z)


# ---------------------------------------------------------------------------
# composite flows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlowSpec:
    steps: tuple  # of (SplitData | HNNData, complex)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((s, complex(z)) for s, z in self.steps))


def curves_disjoint(c1: CurveClass, c2: CurveClass) -> bool:
    """Structural disjointness of two standard curves (equal curves count as disjoint)."""
    a, b = set(c1.block), set(c2.block)
    full = set(range(c1.d))
    return a <= b or b <= a or not (a & b) or (a | b) == full


def check_disjoint(spec: FlowSpec) -> None:
    curves = [s.curve for s, _ in spec.steps if isinstance(s, SplitData) and s.curve is not None]
    for c1, c2 in combinations(curves, 2):
        if not curves_disjoint(c1, c2):
            raise PreconditionError(f"curves {c1.block} and {c2.block} intersect")


def flow(rep: Representation, spec: FlowSpec) -> Representation:
    """Compose the twists in ``spec`` (applied in order)."""
    check_disjoint(spec)
    for data, z in spec.steps:
        rep = twist(rep, data, z)
    return rep


def commutation_defect(rep: Representation, c1, c2, s: complex, t: complex) -> float:
    """``chars_distance(phi1_s phi2_t rho, phi2_t phi1_s rho)``."""
    check_disjoint(FlowSpec(((c1, s), (c2, t))))
    r12 = twist(twist(rep, c1, s), c2, t)
    r21 = twist(twist(rep, c2, t), c1, s)
    return chars_distance(r12, r21)


def period(rep: Representation, split: SplitData, gen: int, h: float = 1e-6) -> np.ndarray:
    """Central-difference ``d/dz psi_z(rho)(g) rho(g)^-1`` at ``z = 0``."""
    plus = twist_separating(rep, split, h).mats[gen]
    minus = twist_separating(rep, split, -h).mats[gen]
    return (plus - minus) / (2 * h) @ inverse(rep.mats[gen])


# ---------------------------------------------------------------------------
# trace Jacobians
# ---------------------------------------------------------------------------

def _free_mats_traces(free: np.ndarray, d: int, words: Sequence[Word]) -> np.ndarray:
    last = inverse(evaluate_mats(free, tuple((i, 1) for i in range(d - 1))))
    mats = np.concatenate([free, last[None]])
    return np.array([np.trace(evaluate_mats(mats, w)) for w in words])


_STENCIL = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))


def trace_jacobian(rep: Representation, words: Sequence[Word], h: float = 1e-3) -> np.ndarray:
    """Complex Jacobian of ``rho -> (tr rho(w))_w`` over the free generators.

    Generator ``i`` is moved along ``g_i exp(eps X)`` for ``X`` in a basis of
    sl(2,C); the last generator follows the relation.  Derivatives use the
    fourth-order central stencil, so the truncation error is ``O(h^4)``.
    """
    pres = rep.presentation
    if pres.kind != "punctured_sphere":
        raise PreconditionError("trace Jacobians are implemented for punctured spheres (free groups)")
    d = pres.size
    free = rep.mats[: d - 1]
    cols = []
    for i in range(d - 1):
        for x in _SL2_BASIS:
            col = 0
            for k, wgt in _STENCIL:
                pert = free.copy()
                pert[i] = free[i] @ exp_traceless(k * h * x)
                col = col + wgt * _free_mats_traces(pert, d, words)
            cols.append(col / h)
    return np.stack(cols, axis=1)


def conjugation_directions(rep: Representation) -> np.ndarray:
    """Tangent vectors of the conjugation orbit in the parametrization above."""
    d = rep.presentation.size
    out = []
    for y in _SL2_BASIS:
        vec = []
        for i in range(d - 1):
            g = rep.mats[i]
            t = inverse(g) @ (y @ g - g @ y)
            # coordinates of t in the sl2 basis (H, E, F)
            vec += [t[0, 0], t[0, 1], t[1, 0]]
        out.append(vec)
    return np.array(out).T


@dataclass(frozen=True)
class RankResult:
    rank: int
    sigma_min: float
    singular_values: np.ndarray


def trace_jacobian_rank(rep: Representation, trace_words: Sequence[Word], rank_tol: float = 1e-8,
                        h: float = 1e-3) -> RankResult:
    """Numerical rank of the trace map on the slice transverse to conjugation.

    ``sigma_min`` is the smallest singular value above ``rank_tol``.
    """
    jac = trace_jacobian(rep, trace_words, h)
    conj = conjugation_directions(rep)
    u, s, _ = np.linalg.svd(conj, full_matrices=True)
    r = int(np.sum(s > 1e-10 * max(1.0, s[0]))) if len(s) else 0
    slice_basis = u[:, r:]
    sv = np.linalg.svd(jac @ slice_basis, compute_uv=False)
    rank = int(np.sum(sv > rank_tol))
    sigma = float(sv[rank - 1]) if rank else 0.0
    return RankResult(rank, sigma, sv)


def curve_trace_words(dec) -> list[Word]:
    """Boundary words followed by decomposition-curve words."""
    return [((i, 1),) for i in range(dec.d)] + [c.word for c in dec.curves]


def one_sided_word(rng: np.random.Generator, side: Sequence[int], length: int) -> Word:
    """Random word in the generators of one side (used by invariance checks)."""
    side = list(side)
    return tuple((int(rng.choice(side)), int(rng.choice([-1, 1]))) for _ in range(length))

