"""Annotated spaces: an open-set family whose members carry, per state,
the ideal of resources sufficient to obtain them.

The stored annotation is always *closed*: callers provide generators and
``seat_close`` computes the least total annotation satisfying the five
structure conditions (multiplication closure, monotonicity along evidence
weakening, choice closure, combination into intersections, and zero on the
full carrier).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from . import semiring as sr
from .errors import InternalError, LaxZeroWarning, StructuralError, UnsupportedOperationError
from .topology import FiniteTopology, generate

_MAX_SWEEPS = 10_000


@dataclass(frozen=True, eq=False)
class Seat:
    topology: FiniteTopology
    semiring: sr.Semiring
    annotation: dict  # (open mask, state index) -> Ideal, total
    uniform_hint: bool = False

    @property
    def states(self):
        return self.topology.states

    def ideal_at(self, u: int, state) -> object:
        idx = state if isinstance(state, int) else self.topology.index(state)
        if not self.topology.is_open(u):
            raise StructuralError(f"{u:#x} is not an open set of this space")
        return self.annotation[(u, idx)]

    def evidence_at(self, a, state) -> tuple:
        """Opens obtainable with resource a at the given state."""
        idx = state if isinstance(state, int) else self.topology.index(state)
        if not self.semiring.contains(a):
            raise StructuralError(f"{sr.format_value(a)} is not a semiring element")
        return tuple(u for u in self.topology.opens
                     if sr.ideal_member(self.semiring, self.annotation[(u, idx)], a))

    def basis_at(self, state) -> tuple:
        """Opens obtainable with some resource; a basis for the derived topology."""
        idx = state if isinstance(state, int) else self.topology.index(state)
        return tuple(u for u in self.topology.opens
                     if not sr.ideal_is_empty(self.annotation[(u, idx)]))

    def derived_topology(self, state) -> FiniteTopology:
        return generate(self.topology.states, self.basis_at(state), allow_large=True)

    def cost(self, u: int, state):
        """Join of the ideal at (u, state) with an attainment flag."""
        ideal = self.ideal_at(u, state)
        if self.semiring.lax_zero and sr.ideal_is_empty(ideal):
            warnings.warn("join of the empty ideal relies on zero laws skipped by lax_zero",
                          LaxZeroWarning, stacklevel=2)
        value = sr.ideal_join(self.semiring, ideal)
        return CostResult(value, sr.ideal_member(self.semiring, ideal, value))


@dataclass(frozen=True)
class CostResult:
    value: object
    attained: bool


@dataclass(frozen=True, eq=False)
class Model:
    seat: Seat
    valuation: dict  # proposition name -> state-set mask

    def __post_init__(self):
        full = self.seat.topology.full
        for p, mask in self.valuation.items():
            if mask & ~full:
                raise StructuralError(f"valuation of {p!r} leaves the carrier")

    @property
    def propositions(self):
        return tuple(sorted(self.valuation))


def _resolve_raw(topology: FiniteTopology, s: sr.Semiring, raw):
    """Normalize raw annotation input to {(mask, idx): Ideal} seeds."""
    n = len(topology.states)
    seeds = {}

    def feed(mask, idx, value):
        if not topology.is_open(mask):
            raise StructuralError(f"annotated set {topology.names_of(mask)} is not open")
        ideal = value if isinstance(value, (sr.FiniteIdeal, sr.ThresholdIdeal)) \
            else sr.ideal_close(s, value)
        key = (mask, idx)
        seeds[key] = sr.ideal_union(s, seeds[key], ideal) if key in seeds else ideal

    for (u_spec, state_spec), value in raw.items():
        mask = u_spec if isinstance(u_spec, int) else topology.mask_of(u_spec)
        if state_spec is None:
            for idx in range(n):
                feed(mask, idx, value)
        else:
            feed(mask, topology.index(state_spec), value)
    return seeds


def seat_close(topology: FiniteTopology, s: sr.Semiring, raw, uniform_hint=False) -> Seat:
    """Least seat whose annotation contains every given generator.

    ``raw`` maps (open, state) to generator collections or ready ideals;
    the open may be a mask or an iterable of state names, and a ``None``
    state applies the entry to every state.  Unmentioned pairs end up with
    the empty ideal except the full carrier, which always receives zero.
    """
    seeds = _resolve_raw(topology, s, raw)
    n = len(topology.states)
    full = topology.full
    opens = topology.opens
    ideals = {(u, i): seeds.get((u, i), sr.empty_ideal(s)) for u in opens for i in range(n)}
    zero_seed = sr.ideal_close(s, [s.zero])
    for i in range(n):
        ideals[(full, i)] = sr.ideal_union(s, ideals[(full, i)], zero_seed)

    by_popcount = sorted(opens, key=lambda u: (bin(u).count("1"), u))
    for _ in range(_MAX_SWEEPS):
        changed = False
        for i in range(n):
            # evidence weakening: push each ideal into every superset open
            for u in by_popcount:
                iu = ideals[(u, i)]
                if sr.ideal_is_empty(iu):
                    continue
                for v in opens:
                    if u | v == v and u != v:
                        if not sr.ideal_subset(s, iu, ideals[(v, i)]):
                            ideals[(v, i)] = sr.ideal_union(s, ideals[(v, i)], iu)
                            changed = True
            # combination: products of two ideals land in the intersection
            nonempty = [u for u in opens if not sr.ideal_is_empty(ideals[(u, i)])]
            for u in nonempty:
                for v in nonempty:
                    w = u & v
                    combined = sr.ideal_combine(s, ideals[(u, i)], ideals[(v, i)])
                    if not sr.ideal_subset(s, combined, ideals[(w, i)]):
                        ideals[(w, i)] = sr.ideal_union(s, ideals[(w, i)], combined)
                        changed = True
        if not changed:
            return Seat(topology, s, ideals, uniform_hint)
    raise InternalError("annotation closure did not converge")


_CONDITION_NAMES = ("multiplication-closure", "monotone-weakening", "choice-closure",
                    "combination", "zero-at-carrier")


def check_conditions(seat: Seat) -> list:
    """Re-run the five structure conditions; returns (condition, witness) pairs.

    For threshold backends the two ideal-shape conditions hold by
    representation, so only the cross-pair conditions are re-derived.
    """
    s = seat.semiring
    t = seat.topology
    bad = []
    for (u, i), ideal in seat.annotation.items():
        if isinstance(ideal, sr.FiniteIdeal):
            for a in ideal.members:
                for b in s.elements:
                    if s.times(a, b) not in ideal.members or s.times(b, a) not in ideal.members:
                        bad.append(("multiplication-closure", (t.names_of(u), t.states[i], a, b)))
                for b in ideal.members:
                    if s.plus(a, b) not in ideal.members:
                        bad.append(("choice-closure", (t.names_of(u), t.states[i], a, b)))
    for i in range(len(t.states)):
        for u in t.opens:
            for v in t.opens:
                if u | v == v and not sr.ideal_subset(s, seat.annotation[(u, i)], seat.annotation[(v, i)]):
                    bad.append(("monotone-weakening", (t.names_of(u), t.names_of(v), t.states[i])))
                combined = sr.ideal_combine(s, seat.annotation[(u, i)], seat.annotation[(v, i)])
                if not sr.ideal_subset(s, combined, seat.annotation[(u & v, i)]):
                    bad.append(("combination", (t.names_of(u), t.names_of(v), t.states[i])))
        if not sr.ideal_member(s, seat.annotation[(t.full, i)], s.zero):
            bad.append(("zero-at-carrier", (t.states[i],)))
    return bad


def minimal_seat(topology: FiniteTopology, s: sr.Semiring) -> Seat:
    """Seat with no annotation beyond the mandatory zero at the carrier."""
    return seat_close(topology, s, {}, uniform_hint=True)
