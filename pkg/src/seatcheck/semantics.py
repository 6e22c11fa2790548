"""Satisfaction relation and the direct set-level epistemic operators."""

from __future__ import annotations

import weakref
from dataclasses import dataclass

from . import formula as fm
from . import semiring as sr
from .errors import EvaluationError, StructuralError
from .seat import Model, Seat


@dataclass(frozen=True)
class Extent:
    """Set of states (as a mask) where a formula holds in a model."""

    model: Model
    formula: fm.Formula
    mask: int

    @property
    def states(self):
        return self.model.seat.topology.names_of(self.mask)


class Evaluator:
    """Bottom-up evaluation with a per-model cache on expanded formulas."""

    def __init__(self, model: Model):
        self.model = model
        self.seat = model.seat
        self.topology = model.seat.topology
        self.full = self.topology.full
        self._cache = {}
        self._evidence = {}

    def resolve(self, lit: str):
        try:
            return self.seat.semiring.parse_element(lit)
        except StructuralError as exc:
            raise EvaluationError(str(exc)) from exc

    def evidence(self, a):
        """Per-state tuples of opens obtainable with resource a."""
        if a not in self._evidence:
            ann = self.seat.annotation
            s = self.seat.semiring
            self._evidence[a] = tuple(
                tuple(u for u in self.topology.opens if sr.ideal_member(s, ann[(u, i)], a))
                for i in range(len(self.topology.states)))
        return self._evidence[a]

    def _eval(self, f: fm.Formula) -> int:
        cached = self._cache.get(f)
        if cached is not None:
            return cached
        match f:
            case fm.Prop(name):
                if name not in self.model.valuation:
                    raise EvaluationError(f"unknown proposition {name!r}")
                mask = self.model.valuation[name]
            case fm.Top():
                mask = self.full
            case fm.Bot():
                mask = 0
            case fm.Not(sub):
                mask = self.full & ~self._eval(sub)
            case fm.And(left, right):
                mask = self._eval(left) & self._eval(right)
            case fm.Box(sub):
                mask = self.topology.interior(self._eval(sub))
            case fm.For(lit, sub):
                p = self._eval(sub)
                ev = self.evidence(self.resolve(lit))
                mask = 0
                for i in range(len(self.topology.states)):
                    if any(u & ~p == 0 for u in ev[i]):
                        mask |= 1 << i
            case fm.All(sub):
                mask = self.full if self._eval(sub) == self.full else 0
            case _:
                raise TypeError(f"not a core formula: {f!r}")
        self._cache[f] = mask
        return mask

    def extent_mask(self, f: fm.Formula) -> int:
        return self._eval(fm.expand(f))

    def holds_at(self, f: fm.Formula, state) -> bool:
        idx = state if isinstance(state, int) else self.topology.index(state)
        return bool(self.extent_mask(f) >> idx & 1)


_evaluators = weakref.WeakKeyDictionary()


def evaluator_for(model: Model) -> Evaluator:
    ev = _evaluators.get(model)
    if ev is None:
        ev = Evaluator(model)
        _evaluators[model] = ev
    return ev


def evaluate(model: Model, f: fm.Formula) -> Extent:
    return Extent(model, f, evaluator_for(model).extent_mask(f))


def _seat_of(m) -> Seat:
    return m.seat if isinstance(m, Model) else m


def for_op(m, a, p: int) -> int:
    """States where some evidence inside p is obtainable with resource a."""
    seat = _seat_of(m)
    out = 0
    for i in range(len(seat.topology.states)):
        if any(u & ~p == 0 for u in seat.evidence_at(a, i)):
            out |= 1 << i
    return out


def int_op(m, a, p: int) -> int:
    """States where some *factive* evidence inside p costs at most a."""
    seat = _seat_of(m)
    out = 0
    for i in range(len(seat.topology.states)):
        bit = 1 << i
        if any(u & bit and u & ~p == 0 for u in seat.evidence_at(a, i)):
            out |= bit
    return out


def a_dense(m, a, state, s: int) -> bool:
    """s meets every nonempty open obtainable with a at the state."""
    seat = _seat_of(m)
    return all(u & s for u in seat.evidence_at(a, state) if u)


def _dense_against(evidence_b, s: int) -> bool:
    return all(u & s for u in evidence_b if u)


def bel(m, a, b, p: int) -> int:
    """Justifiable: evidence for p within a surviving all b-affordable attacks."""
    seat = _seat_of(m)
    out = 0
    for i in range(len(seat.topology.states)):
        ev_b = seat.evidence_at(b, i)
        if any(u & ~p == 0 and _dense_against(ev_b, u) for u in seat.evidence_at(a, i)):
            out |= 1 << i
    return out


def kn(m, a, b, p: int) -> int:
    """Knowable: truthful evidence for p within a surviving b-affordable attacks."""
    seat = _seat_of(m)
    out = 0
    for i in range(len(seat.topology.states)):
        bit = 1 << i
        ev_b = seat.evidence_at(b, i)
        if any(u & bit and u & ~p == 0 and _dense_against(ev_b, u)
               for u in seat.evidence_at(a, i)):
            out |= bit
    return out


TABLE_STATE_LIMIT = 8


class OperatorTables:
    """Mask-indexed operator tables for exhaustive checks on small seats.

    Precomputes interior and per-resource evidence operators over every
    subset of the carrier, turning formula evaluation into dictionary
    lookups.  Only sensible for carriers up to TABLE_STATE_LIMIT states.
    """

    def __init__(self, seat: Seat):
        n = len(seat.topology.states)
        if n > TABLE_STATE_LIMIT:
            raise StructuralError("operator tables limited to small carriers")
        self.seat = seat
        self.full = seat.topology.full
        opens = seat.topology.opens
        self._int = [0] * (self.full + 1)
        for m in range(self.full + 1):
            acc = 0
            for u in opens:
                if u & ~m == 0:
                    acc |= u
            self._int[m] = acc
        self._for = {}

    def interior(self, m: int) -> int:
        return self._int[m]

    def for_table(self, a):
        table = self._for.get(a)
        if table is None:
            seat = self.seat
            n = len(seat.topology.states)
            evid = [seat.evidence_at(a, i) for i in range(n)]
            table = [0] * (self.full + 1)
            for m in range(self.full + 1):
                bits = 0
                for i in range(n):
                    if any(u & ~m == 0 for u in evid[i]):
                        bits |= 1 << i
                table[m] = bits
            self._for[a] = table
        return table

    def eval(self, f: fm.Formula, valuation: dict, lits: dict) -> int:
        """Evaluate a core formula; lits maps literal text to elements."""
        match f:
            case fm.Prop(name):
                return valuation[name]
            case fm.Top():
                return self.full
            case fm.Bot():
                return 0
            case fm.Not(sub):
                return self.full & ~self.eval(sub, valuation, lits)
            case fm.And(left, right):
                return self.eval(left, valuation, lits) & self.eval(right, valuation, lits)
            case fm.Box(sub):
                return self._int[self.eval(sub, valuation, lits)]
            case fm.For(lit, sub):
                return self.for_table(lits[lit])[self.eval(sub, valuation, lits)]
            case fm.All(sub):
                return self.full if self.eval(sub, valuation, lits) == self.full else 0
        raise TypeError(f"not a core formula: {f!r}")
