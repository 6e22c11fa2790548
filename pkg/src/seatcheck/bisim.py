"""Disjoint unions, bisimulation checking, and modal-equivalence testing."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import formula as fm
from . import semiring as sr
from .classify import probe_elements
from .errors import StructuralError, UnsupportedOperationError
from .seat import Model, Seat
from .semantics import evaluator_for
from .topology import FiniteTopology


@dataclass(frozen=True, eq=False)
class BisimRelation:
    left: Model
    right: Model
    pairs: frozenset  # of (left state name, right state name)
    global_relation: bool = False

    def __post_init__(self):
        lt = self.left.seat.topology
        rt = self.right.seat.topology
        for a, b in self.pairs:
            lt.index(a)
            rt.index(b)


@dataclass(frozen=True)
class BisimReport:
    ok: bool
    clause: str = None
    witness: tuple = None

    def __str__(self):
        if self.ok:
            return "ok"
        return f"clause {self.clause} violated at {self.witness}"


def disjoint_union(models) -> Model:
    """Tagged union of models over one semiring and proposition signature.

    Opens are exactly the sets whose trace on every component is open
    there; annotations and valuations are taken componentwise.
    """
    models = list(models)
    if not models:
        raise StructuralError("disjoint union of no models")
    s = models[0].seat.semiring
    props = models[0].propositions
    for m in models[1:]:
        if m.seat.semiring != s:
            raise StructuralError("disjoint union requires a shared semiring")
        if m.propositions != props:
            raise StructuralError("disjoint union requires a shared proposition signature")

    if len(models) == 2:
        tags = ("left", "right")
    else:
        tags = tuple(str(i) for i in range(len(models)))
    states = []
    offsets = []
    for tag, m in zip(tags, models):
        offsets.append(len(states))
        states.extend(f"{tag}:{name}" for name in m.seat.topology.states)
    states = tuple(states)

    def lift(i, mask):
        return mask << offsets[i]

    opens = []
    for combo in itertools.product(*(m.seat.topology.opens for m in models)):
        opens.append(sum(lift(i, u) for i, u in enumerate(combo)))
    topo = FiniteTopology(states, tuple(sorted(set(opens))))

    annotation = {}
    for u in topo.opens:
        for i, m in enumerate(models):
            comp_mask = (u >> offsets[i]) & m.seat.topology.full
            for j in range(len(m.seat.topology.states)):
                annotation[(u, offsets[i] + j)] = m.seat.annotation[(comp_mask, j)]
    seat = Seat(topo, s, annotation, uniform_hint=False)
    valuation = {p: sum(lift(i, m.valuation[p]) for i, m in enumerate(models)) for p in props}
    return Model(seat, valuation)


def _z_image(pairs_idx, u_mask, n_right):
    """Right states reachable from left states inside u."""
    out = 0
    for i, j in pairs_idx:
        if u_mask >> i & 1:
            out |= 1 << j
    return out


def _z_preimage(pairs_idx, u_mask, n_left):
    out = 0
    for i, j in pairs_idx:
        if u_mask >> j & 1:
            out |= 1 << i
    return out


def check_bisim(z: BisimRelation, probe_lits=()) -> BisimReport:
    """Verify the bisimulation clauses, reporting the first violation.

    Clause order: (i) valuation agreement, (ii)/(iii) open-neighborhood
    transfer, (iv)/(v) resource-indexed evidence transfer, and for global
    relations (vi) totality and (vii) surjectivity.  On infinite backends
    the resource quantifier runs over a probe set that covers every
    membership pattern occurring in the two annotations.
    """
    lm, rm = z.left, z.right
    lt, rt = lm.seat.topology, rm.seat.topology
    pairs_idx = sorted((lt.index(a), rt.index(b)) for a, b in z.pairs)

    for i, j in pairs_idx:
        for p in lm.propositions:
            if (lm.valuation[p] >> i & 1) != (rm.valuation[p] >> j & 1):
                return BisimReport(False, "i", (lt.states[i], rt.states[j], p))

    for i, j in pairs_idx:
        for u1 in lt.opens:
            if u1 >> i & 1:
                image = _z_image(pairs_idx, u1, len(rt.states))
                if not any(u2 >> j & 1 and u2 & ~image == 0 for u2 in rt.opens):
                    return BisimReport(False, "ii", (lt.states[i], rt.states[j], lt.names_of(u1)))
        for u2 in rt.opens:
            if u2 >> j & 1:
                pre = _z_preimage(pairs_idx, u2, len(lt.states))
                if not any(u1 >> i & 1 and u1 & ~pre == 0 for u1 in lt.opens):
                    return BisimReport(False, "iii", (lt.states[i], rt.states[j], rt.names_of(u2)))

    if lm.seat.semiring != rm.seat.semiring:
        raise StructuralError("bisimulation requires a shared semiring")
    probes = probe_elements([lm.seat, rm.seat], probe_lits)
    lev = evaluator_for(lm)
    rev = evaluator_for(rm)
    for a in probes:
        evid_l = lev.evidence(a)
        evid_r = rev.evidence(a)
        for i, j in pairs_idx:
            for u1 in evid_l[i]:
                image = _z_image(pairs_idx, u1, len(rt.states))
                if not any(u2 & ~image == 0 for u2 in evid_r[j]):
                    return BisimReport(False, "iv",
                                       (lt.states[i], rt.states[j], sr.format_value(a), lt.names_of(u1)))
            for u2 in evid_r[j]:
                pre = _z_preimage(pairs_idx, u2, len(lt.states))
                if not any(u1 & ~pre == 0 for u1 in evid_l[i]):
                    return BisimReport(False, "v",
                                       (lt.states[i], rt.states[j], sr.format_value(a), rt.names_of(u2)))

    if z.global_relation:
        left_covered = {i for i, _ in pairs_idx}
        right_covered = {j for _, j in pairs_idx}
        for i, name in enumerate(lt.states):
            if i not in left_covered:
                return BisimReport(False, "vi", (name,))
        for j, name in enumerate(rt.states):
            if j not in right_covered:
                return BisimReport(False, "vii", (name,))
    return BisimReport(True)


def largest_bisim(m1: Model, m2: Model, global_relation=False, probe_lits=()) -> BisimRelation:
    """Greatest-fixpoint computation of the largest bisimulation.

    Starts from all valuation-agreeing pairs and deletes pairs violating
    the transfer clauses relative to the current relation.  With the
    global flag the result is returned as a global relation; whether
    totality/surjectivity actually hold is for check_bisim to say.
    """
    if m1.seat.semiring != m2.seat.semiring:
        raise StructuralError("bisimulation requires a shared semiring")
    if m1.propositions != m2.propositions:
        raise StructuralError("bisimulation requires a shared proposition signature")
    lt, rt = m1.seat.topology, m2.seat.topology
    s = m1.seat.semiring
    if not s.is_finite:
        probes = probe_elements([m1.seat, m2.seat], probe_lits)
        if not probes:
            raise UnsupportedOperationError("largest_bisim on an infinite backend needs probe literals")
    else:
        probes = list(s.elements)
    lev = evaluator_for(m1)
    rev = evaluator_for(m2)
    evid_l = {a: lev.evidence(a) for a in probes}
    evid_r = {a: rev.evidence(a) for a in probes}

    pairs = {(i, j)
             for i in range(len(lt.states)) for j in range(len(rt.states))
             if all((m1.valuation[p] >> i & 1) == (m2.valuation[p] >> j & 1)
                    for p in m1.propositions)}

    def survives(i, j, current):
        for u1 in lt.opens:
            if u1 >> i & 1:
                image = _z_image(current, u1, len(rt.states))
                if not any(u2 >> j & 1 and u2 & ~image == 0 for u2 in rt.opens):
                    return False
        for u2 in rt.opens:
            if u2 >> j & 1:
                pre = _z_preimage(current, u2, len(lt.states))
                if not any(u1 >> i & 1 and u1 & ~pre == 0 for u1 in lt.opens):
                    return False
        for a in probes:
            for u1 in evid_l[a][i]:
                image = _z_image(current, u1, len(rt.states))
                if not any(u2 & ~image == 0 for u2 in evid_r[a][j]):
                    return False
            for u2 in evid_r[a][j]:
                pre = _z_preimage(current, u2, len(lt.states))
                if not any(u1 & ~pre == 0 for u1 in evid_l[a][i]):
                    return False
        return True

    while True:
        current = sorted(pairs)
        keep = {(i, j) for i, j in pairs if survives(i, j, current)}
        if keep == pairs:
            break
        pairs = keep
    named = frozenset((lt.states[i], rt.states[j]) for i, j in pairs)
    return BisimRelation(m1, m2, named, global_relation)


@dataclass
class EquivReport:
    formulas_checked: int
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def modal_equiv_test(z: BisimRelation, depth=2, lits=(), max_size=5, limit=100_000) -> EquivReport:
    """Assert formula agreement on every related pair.

    Runs the base-language corpus up to the given modal depth and size;
    when the relation is global, the corpus includes the global modality.
    Any disagreement is a violation of the preservation theorem, so the
    report lists it as a bug witness.
    """
    lev = evaluator_for(z.left)
    rev = evaluator_for(z.right)
    lt, rt = z.left.seat.topology, z.right.seat.topology
    pairs_idx = sorted((lt.index(a), rt.index(b)) for a, b in z.pairs)
    props = z.left.propositions
    lit_texts = [z.left.seat.semiring.format_element(a) for a in lits]
    report = EquivReport(0)
    for f in fm.enumerate_formulas(props, lit_texts, depth, max_size=max_size,
                                   include_global=z.global_relation, limit=limit):
        lmask = lev.extent_mask(f)
        rmask = rev.extent_mask(f)
        report.formulas_checked += 1
        for i, j in pairs_idx:
            if (lmask >> i & 1) != (rmask >> j & 1):
                report.disagreements.append(
                    (fm.print_formula(f), lt.states[i], rt.states[j]))
    return report
