"""
Structure Planner
=================
Structural reductions between matroid strata:

- principal extensions / coextensions (free variants included) and their detection
- the |Z1(Q, a)| <= 2 deletion criterion, 3-lines / 3- and 4-planes properties
- greedy reduction plans (split, dualize, delete, coextension peel)
- the singular family Q_{d,n,sing} and the complete flag extension
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from app.services import gallery
from app.services.matroid import Flat, Matroid, MatroidError, elements_of, mask_of

logger = logging.getLogger(__name__)

# (d, n) pairs with 3 <= d <= n/2 that the Q_{d,n,sing} family does not reach
OPEN_PAIRS: tuple[tuple[int, int], ...] = (
    *((3, n) for n in range(6, 12)),
    *((4, n) for n in range(8, 13)),
    *((5, n) for n in range(10, 14)),
    *((6, n) for n in range(12, 15)),
    (7, 14),
    (7, 15),
    (8, 16),
)


class OutOfRange(ValueError):
    """(d, n) outside the range of a construction."""


# =============================================================================
# PRINCIPAL EXTENSIONS
# =============================================================================

def principal_extension(Q: Matroid, eta: Iterable[int]) -> Matroid:
    """Add element n+1 freely inside the flat eta."""
    eta_mask = mask_of(eta)
    if Q.closure_mask(eta_mask) != eta_mask:
        raise MatroidError(f"{sorted(elements_of(eta_mask))} is not a flat")
    a = 1 << Q.n
    masks = set(Q.bases)
    for b in Q.bases:
        common = b & eta_mask
        while common:
            low = common & -common
            common ^= low
            masks.add((b ^ low) | a)
    return Matroid(Q.d, Q.n + 1, frozenset(masks))


def principal_coextension(Q: Matroid, eta: Iterable[int]) -> Matroid:
    """Dual of the principal extension of the dual; eta must be a flat of the dual."""
    return principal_extension(Q.dual(), eta).dual()


def free_extension(Q: Matroid) -> Matroid:
    return principal_extension(Q, Q.ground)


def free_coextension(Q: Matroid) -> Matroid:
    return principal_coextension(Q, Q.ground)


def detect_principal_extension(Q: Matroid, a: int) -> Optional[Flat]:
    """The flat eta' (labels of Q, without a) with Q = pe(Q minus a, eta', a), if any."""
    if a in Q.coloops():
        return None
    bit = mask_of([a])
    candidate = Q.closure_mask(0) & ~bit
    if a not in Q.loops():
        candidate = ~bit & ((1 << Q.n) - 1)
        for H in Q.z1_through(a):
            candidate &= H.mask & ~bit
    minor, relabel = Q.delete([a])
    eta = [relabel[e] for e in elements_of(candidate)]
    if minor.closure_mask(mask_of(eta)) != mask_of(eta):
        return None
    rebuilt = principal_extension(minor, eta)
    perm = dict(relabel)
    perm[a] = Q.n
    if Q.relabel(perm).bases != rebuilt.bases:
        return None
    return Flat(frozenset(elements_of(candidate)), Q.rank_mask(candidate))


def detect_principal_coextension(Q: Matroid, a: int) -> Optional[Flat]:
    return detect_principal_extension(Q.dual(), a)


def deletion_reducible(Q: Matroid, a: int) -> bool:
    """|Z1(Q, a)| <= 2."""
    return len(Q.z1_through(a)) <= 2


def k_flats_property(Q: Matroid, k: int) -> bool:
    """Every element lies on at least k lines (rank 3) or planes (rank 4)."""
    if Q.d not in (3, 4):
        raise MatroidError(f"the lines/planes property needs rank 3 or 4, got {Q.d}")
    degree = {e: 0 for e in Q.ground}
    for H in Q.nontrivial_hyperplanes():
        for e in H.elements:
            degree[e] += 1
    return all(v >= k for v in degree.values())


def describe(Q: Matroid) -> dict:
    """Combinatorial summary used by `info`."""
    data = Q.to_json()
    data["num_bases"] = len(Q.bases)
    data["structure"] = Q.structure_flags().to_json()
    try:
        data["paving"] = Q.is_paving()
    except MatroidError as e:
        data["paving"] = None
        logger.warning("%s: %s", Q, e)
    data["hyperplanes"] = [H.to_json() for H in Q.nontrivial_hyperplanes()]
    data["cyclic_flats"] = [F.to_json() for F in Q.cyclic_flats()]
    data["small_circuits"] = [list(c) for c in Q.circuits(max_size=Q.d)]
    if Q.d == 3:
        data["three_lines"] = k_flats_property(Q, 3)
    elif Q.d == 4:
        data["three_planes"] = k_flats_property(Q, 3)
        data["four_planes"] = k_flats_property(Q, 4)
    return data


# =============================================================================
# PLANS
# =============================================================================

@dataclass(frozen=True)
class PlanMove:
    kind: str  # split | dualize | delete | coextension-peel
    elements: tuple[int, ...]  # original labels
    justification: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "elements": list(self.elements),
            "justification": self.justification,
            **self.detail,
        }


@dataclass(frozen=True)
class Terminal:
    matroid: Matroid
    labels: tuple[int, ...]  # labels[i-1] is the original label of element i
    dualized: bool

    def to_json(self) -> dict:
        return {"matroid": self.matroid.to_json(), "labels": list(self.labels), "dualized": self.dualized}


@dataclass
class ReductionPlan:
    moves: list = field(default_factory=list)
    terminals: list = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.moves

    def to_json(self) -> dict:
        return {
            "moves": [m.to_json() for m in self.moves],
            "terminals": [t.to_json() for t in self.terminals],
        }


def _kept_labels(labels: tuple, relabel: dict) -> tuple:
    return tuple(labels[old - 1] for old in sorted(relabel, key=relabel.get))


def plan(Q: Matroid) -> ReductionPlan:
    """Greedy reduction, lowest index first; terminals admit no further move."""
    result = ReductionPlan()
    _plan(Q, tuple(Q.ground), False, result)
    return result


def _plan(Q: Matroid, labels: tuple, dualized: bool, out: ReductionPlan) -> None:
    if Q.d in (0, Q.n):
        return
    components = Q.components()
    if len(components) > 1:
        out.moves.append(PlanMove(
            "split", (), "disconnected",
            {"components": [[labels[e - 1] for e in c] for c in components]},
        ))
        for c in components:
            part, relabel = Q.restriction(c)
            _plan(part, _kept_labels(labels, relabel), dualized, out)
        return
    if Q.n - Q.d < Q.d:
        out.moves.append(PlanMove("dualize", (), f"rank {Q.d} > corank {Q.n - Q.d}"))
        _plan(Q.dual(), labels, not dualized, out)
        return

    for a in Q.ground:
        if Q.d >= 3 and deletion_reducible(Q, a):
            z1 = len(Q.z1_through(a))
            _delete(Q, a, labels, dualized, out, PlanMove("delete", (labels[a - 1],), "z1-size", {"z1": z1}))
            return
    for a in Q.ground:
        parallel = any(a in cls and a != cls[0] for cls in Q.parallel_classes())
        eta = detect_principal_extension(Q, a)
        if eta is not None:
            why = "parallel" if parallel else "principal-extension"
            detail = {"eta": [labels[e - 1] for e in eta.sorted]}
            _delete(Q, a, labels, dualized, out, PlanMove("delete", (labels[a - 1],), why, detail))
            return
    for a in Q.ground:
        eta = detect_principal_coextension(Q, a)
        if eta is not None:
            move = PlanMove("coextension-peel", (labels[a - 1],), "principal-coextension",
                            {"eta": [labels[e - 1] for e in eta.sorted]})
            out.moves.append(move)
            minor, relabel = Q.contract([a])
            _plan(minor, _kept_labels(labels, relabel), dualized, out)
            return
    out.terminals.append(Terminal(Q, labels, dualized))


def _delete(Q: Matroid, a: int, labels: tuple, dualized: bool, out: ReductionPlan, move: PlanMove) -> None:
    out.moves.append(move)
    minor, relabel = Q.delete([a])
    _plan(minor, _kept_labels(labels, relabel), dualized, out)


# =============================================================================
# SINGULAR FAMILY
# =============================================================================

def q_sing_pairs(max_n: int) -> list[tuple[int, int]]:
    return [(d, n) for n in range(12, max_n + 1) for d in range(3, n // 2 + 1) if n >= d + 9]


def build_Q_dn_sing(d: int, n: int) -> Matroid:
    """Q_sing after d-3 free coextensions and n-d-9 free extensions."""
    if d < 3 or 2 * d > n or n < d + 9:
        raise OutOfRange(f"Q_(d,n,sing) needs 3 <= d <= n/2 and n >= d+9, got ({d},{n})")
    Q = gallery.q_sing()
    for _ in range(d - 3):
        Q = free_coextension(Q)
    for _ in range(n - d - 9):
        Q = free_extension(Q)
    return Matroid(Q.d, Q.n, Q.bases, f"q_sing_{d}_{n}")


def stratum_dimension(realization_dim: int, n: int) -> int:
    """Gr(Q) is a torus bundle over R(Q) with fibre dimension n-1."""
    return realization_dim + n - 1


# =============================================================================
# FLAG EXTENSION
# =============================================================================

@dataclass(frozen=True)
class FlagMatroid:
    constituents: tuple[Matroid, ...]

    def to_json(self) -> dict:
        return {"constituents": [q.to_json() for q in self.constituents]}


def _is_quotient(lower: Matroid, upper: Matroid) -> bool:
    """flats(lower) is contained in flats(upper); hyperplanes suffice."""
    return all(upper.closure_mask(H.mask) == H.mask for H in lower.hyperplanes())


def flag_extension(Q: Matroid, verify: bool = True) -> FlagMatroid:
    """Complete flag matroid (Q_1, ..., Q_n) with Q_d = Q; needs [d] to be a basis."""
    d, n = Q.d, Q.n
    head = mask_of(range(1, d + 1))
    if head not in Q.bases:
        raise MatroidError("[d] must be a basis; relabel first")
    constituents = []
    for i in range(1, n + 1):
        if i < d:
            C = mask_of(range(i + 1, d + 1))
            masks = {b & ~C for b in Q.bases if b & C == C}
            constituents.append(Matroid(i, n, frozenset(masks)))
        elif i == d:
            constituents.append(Q)
        else:
            D = mask_of(range(d + 1, i + 1))
            masks = {b | D for b in Q.bases if not b & D}
            constituents.append(Matroid(i, n, frozenset(masks)))
    if verify:
        for lower, upper in zip(constituents, constituents[1:]):
            if not _is_quotient(lower, upper):
                raise MatroidError(f"constituents of rank {lower.d} and {upper.d} do not form a flag")
    return FlagMatroid(tuple(constituents))
