"""Finite topological spaces over bitmask-encoded state sets."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import StructuralError

DEFAULT_MAX_STATES = 12
MAX_OPENS = 4096


def max_states() -> int:
    raw = os.environ.get("SEATCHECK_MAX_STATES")
    return int(raw) if raw else DEFAULT_MAX_STATES


@dataclass(frozen=True)
class FiniteTopology:
    """Carrier plus an explicit open-set family, stored as sorted bitmasks.

    State i corresponds to bit i; the family always contains 0 (empty set)
    and the full mask, and is closed under binary union and intersection.
    """

    states: tuple
    opens: tuple
    basis: frozenset = field(default=None)

    def __post_init__(self):
        full = (1 << len(self.states)) - 1
        family = set(self.opens)
        if 0 not in family or full not in family:
            raise StructuralError("topology must contain the empty set and the carrier")
        for u in family:
            if u & ~full:
                raise StructuralError("open set outside the carrier")
            for v in family:
                if u | v not in family or u & v not in family:
                    raise StructuralError("family not closed under union/intersection")
        object.__setattr__(self, "opens", tuple(sorted(family)))
        object.__setattr__(self, "_open_set", frozenset(family))

    @property
    def full(self) -> int:
        return (1 << len(self.states)) - 1

    def index(self, state) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise StructuralError(f"unknown state {state!r}") from None

    def mask_of(self, names) -> int:
        m = 0
        for n in names:
            m |= 1 << self.index(n)
        return m

    def names_of(self, mask) -> tuple:
        return tuple(s for i, s in enumerate(self.states) if mask >> i & 1)

    def is_open(self, mask) -> bool:
        return mask in self._open_set

    def interior(self, p: int) -> int:
        """Union of all opens contained in p: the weakest supporting argument."""
        out = 0
        for u in self.opens:
            if u & ~p == 0:
                out |= u
        return out

    def is_dense(self, s: int) -> bool:
        """True when s meets every nonempty open."""
        return all(s & u for u in self.opens if u)


def generate(states, subbasis, allow_large=False) -> FiniteTopology:
    """Smallest topology containing the subbasis.

    Finite intersections of subbasis members (plus the carrier) form the
    basis; arbitrary unions of basis members complete the family.
    """
    states = tuple(states)
    if len(set(states)) != len(states):
        raise StructuralError("duplicate state names")
    if not allow_large and len(states) > max_states():
        raise StructuralError(
            f"carrier has {len(states)} states, over the cap {max_states()}"
            " (set SEATCHECK_MAX_STATES or allow_large to override)")
    full = (1 << len(states)) - 1
    masks = []
    for member in subbasis:
        m = member if isinstance(member, int) else 0
        if not isinstance(member, int):
            for n in member:
                if n not in states:
                    raise StructuralError(f"subbasis member mentions unknown state {n!r}")
                m |= 1 << states.index(n)
        if m & ~full:
            raise StructuralError("subbasis member outside the carrier")
        masks.append(m)

    basis = {full}
    frontier = [full]
    while frontier:
        u = frontier.pop()
        for v in masks:
            w = u & v
            if w not in basis:
                basis.add(w)
                frontier.append(w)
                if not allow_large and len(basis) > MAX_OPENS:
                    raise StructuralError("basis exceeds the open-family cap")

    family = {0, full}
    frontier = [0]
    ordered_basis = sorted(basis)
    while frontier:
        u = frontier.pop()
        for v in ordered_basis:
            w = u | v
            if w not in family:
                family.add(w)
                frontier.append(w)
                if not allow_large and len(family) > MAX_OPENS:
                    raise StructuralError("open family exceeds the cap")
    return FiniteTopology(states, tuple(sorted(family)), frozenset(basis))


def interior(t: FiniteTopology, p: int) -> int:
    return t.interior(p)


def is_dense(t: FiniteTopology, s: int) -> bool:
    return t.is_dense(s)
