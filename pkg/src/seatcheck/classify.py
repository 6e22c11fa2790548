"""Seat-class predicates, the axiom-scheme registry, validity testing,
and the random seat generator used by the property suites.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import formula as fm
from . import semiring as sr
from .errors import GenerationError, StructuralError
from .seat import Model, Seat, seat_close
from .semantics import Evaluator, OperatorTables, TABLE_STATE_LIMIT
from .semiring import INF
from .topology import generate


@dataclass(frozen=True)
class Flag:
    holds: bool
    witness: tuple = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class SeatClassReport:
    strong: Flag
    one_bounded: Flag
    zero_bounded: Flag
    uniform: Flag
    cost_seat: Flag

    @property
    def bounded(self) -> bool:
        return self.one_bounded.holds and self.zero_bounded.holds

    def summary(self) -> dict:
        def fmt(flag):
            return {"holds": flag.holds, "witness": _fmt_witness(flag.witness)}
        return {
            "strong": fmt(self.strong),
            "one_bounded": fmt(self.one_bounded),
            "zero_bounded": fmt(self.zero_bounded),
            "bounded": self.bounded,
            "uniform": fmt(self.uniform),
            "cost_seat": fmt(self.cost_seat),
        }


def _fmt_witness(w):
    if w is None:
        return None
    return [list(x) if isinstance(x, tuple) else sr.format_value(x) for x in w]


def classify(seat: Seat) -> SeatClassReport:
    """Decide the special-seat predicates, with counterexample witnesses."""
    s = seat.semiring
    t = seat.topology
    n = len(t.states)

    strong = Flag(True)
    if s.is_finite:
        for (u, i), ideal in seat.annotation.items():
            for a in s.elements:
                for b in s.elements:
                    if sr.ideal_member(s, ideal, s.plus(a, b)) and not (
                            sr.ideal_member(s, ideal, a) and sr.ideal_member(s, ideal, b)):
                        strong = Flag(False, (t.names_of(u), t.states[i], a, b))
                        break
                if not strong.holds:
                    break
            if not strong.holds:
                break
    # threshold backends: every upward interval is strong under min-choice

    one_bounded = Flag(True)
    for i in range(n):
        if not sr.ideal_member(s, seat.annotation[(t.full, i)], s.one):
            one_bounded = Flag(False, (t.states[i],))
            break

    zero_bounded = Flag(True)
    for i in range(n):
        if not sr.ideal_member(s, seat.annotation[(0, i)], s.zero):
            zero_bounded = Flag(False, (t.states[i],))
            break

    uniform = Flag(True)
    for u in t.opens:
        first = seat.annotation[(u, 0)]
        for i in range(1, n):
            if seat.annotation[(u, i)] != first:
                uniform = Flag(False, (t.names_of(u), t.states[0], t.states[i]))
                break
        if not uniform.holds:
            break

    if not s.idempotent_plus:
        bad = next(a for a in s.elements if s.plus(a, a) != a)
        cost = Flag(False, ("choice-not-idempotent", bad))
    else:
        cost = Flag(True)
        for (u, i), ideal in seat.annotation.items():
            join = sr.ideal_join(s, ideal)
            if not sr.ideal_member(s, ideal, join):
                cost = Flag(False, (t.names_of(u), t.states[i]))
                break

    return SeatClassReport(strong, one_bounded, zero_bounded, uniform, cost)


# ---------------------------------------------------------------------------
# Axiom schemes


_LIT_EXPRS = {
    "_a_": lambda s, b: b["a"],
    "_b_": lambda s, b: b["b"],
    "_ab_": lambda s, b: s.times(b["a"], b["b"]),
    "_ba_": lambda s, b: s.times(b["b"], b["a"]),
    "_aplusb_": lambda s, b: s.plus(b["a"], b["b"]),
    "_zero_": lambda s, b: s.zero,
    "_one_": lambda s, b: s.one,
}

_PARAMS_OF = {
    "_a_": ("a",), "_b_": ("b",), "_ab_": ("a", "b"), "_ba_": ("a", "b"),
    "_aplusb_": ("a", "b"), "_zero_": (), "_one_": (),
}


def _collect(f, props, lits, flags):
    match f:
        case fm.Prop(name):
            props.add(name)
        case fm.Not(sub) | fm.Box(sub):
            _collect(sub, props, lits, flags)
        case fm.All(sub):
            flags.add("global")
            _collect(sub, props, lits, flags)
        case fm.And(left, right):
            _collect(left, props, lits, flags)
            _collect(right, props, lits, flags)
        case fm.For(lit, sub):
            lits.add(lit)
            _collect(sub, props, lits, flags)


@dataclass(frozen=True)
class AxiomScheme:
    """Schematic axiom (or rule) with proposition and literal parameters."""

    name: str
    tag: str
    conclusion: fm.Formula
    premise: fm.Formula = None
    var_names: tuple = ()
    lit_params: tuple = ()
    placeholders: tuple = ()
    global_language: bool = False

    @property
    def is_rule(self) -> bool:
        return self.premise is not None


def _scheme(name, tag, conclusion, premise=None):
    conclusion = fm.expand(fm.parse(conclusion))
    premise = fm.expand(fm.parse(premise)) if premise else None
    props, lits, flags = set(), set(), set()
    _collect(conclusion, props, lits, flags)
    if premise is not None:
        _collect(premise, props, lits, flags)
    params = sorted({p for lit in lits for p in _PARAMS_OF[lit]})
    return AxiomScheme(name, tag, conclusion, premise,
                       tuple(sorted(props)), tuple(params), tuple(sorted(lits)),
                       "global" in flags)


SCHEMES = [
    _scheme("interior-conj", "s4k",
            "(box(p & q) -> (box p & box q)) & ((box p & box q) -> box(p & q))"),
    _scheme("interior-t", "s4k", "box p -> p"),
    _scheme("interior-4", "s4k", "box p -> box box p"),
    _scheme("interior-nec", "s4k", "box p", premise="p"),
    _scheme("mult-strengthen", "s4k", "F[_a_] p -> (F[_ab_] p & F[_ba_] p)"),
    _scheme("choice-join", "s4k", "F[_a_] p & F[_b_] q -> F[_aplusb_](box p | box q)"),
    _scheme("combine", "s4k", "F[_a_] p & F[_b_] q -> F[_ab_](p & q)"),
    _scheme("zero-top", "s4k", "F[_zero_] true"),
    _scheme("evidence-interior", "s4k", "F[_a_] p -> F[_a_] box p"),
    _scheme("evidence-mono", "s4k", "F[_a_] p -> F[_a_] q", premise="p -> q"),
    _scheme("choice-split", "sb", "F[_aplusb_] p -> (F[_a_] p & F[_b_] p)"),
    _scheme("one-top", "sb", "F[_one_] true"),
    _scheme("zero-bot", "sb", "F[_zero_] false"),
    _scheme("one-introspect-pos", "sub", "F[_a_] p -> F[_one_] F[_a_] p"),
    _scheme("one-introspect-neg", "sub", "~F[_a_] p -> F[_one_] ~F[_a_] p"),
    _scheme("box-introspect-pos", "sub", "F[_a_] p -> box F[_a_] p"),
    _scheme("box-introspect-neg", "sub", "~F[_a_] p -> box ~F[_a_] p"),
    _scheme("global-t", "sb-forall", "A p -> p"),
    _scheme("global-4", "sb-forall", "A p -> A A p"),
    _scheme("global-b", "sb-forall", "p -> A E p"),
    _scheme("global-conj", "sb-forall", "A p & A q -> A(p & q)"),
    _scheme("global-lower", "sb-forall", "A p -> box p & F[_one_] p"),
    _scheme("global-nec", "sb-forall", "A p", premise="p"),
    _scheme("uniform-pos", "sub-forall", "F[_a_] p -> A F[_a_] p"),
    _scheme("uniform-neg", "sub-forall", "~F[_a_] p -> A ~F[_a_] p"),
]

_BY_NAME = {sch.name: sch for sch in SCHEMES}

SUITES = {
    "s4k": ("s4k",),
    "s4sb": ("s4k", "sb"),
    "s4sub": ("s4k", "sb", "sub"),
    "s4sb-forall": ("s4k", "sb", "sb-forall"),
    "s4sub-forall": ("s4k", "sb", "sb-forall", "sub-forall"),
}


def scheme(name: str) -> AxiomScheme:
    return _BY_NAME[name]


def suite_schemes(suite: str) -> list:
    try:
        tags = SUITES[suite]
    except KeyError:
        raise StructuralError(f"unknown suite {suite!r}") from None
    return [sch for sch in SCHEMES if sch.tag in tags]


def probe_elements(seats, extra_lits=()) -> list:
    """Finite probe set standing in for all of K on infinite backends.

    Evidence families over the ordered backends are piecewise constant in
    the resource between annotation thresholds, so probing the thresholds,
    midpoints of adjacent gaps (open thresholds shift membership strictly
    inside a gap), one value past the largest finite threshold, zero and
    one covers every membership pattern that occurs.
    """
    if isinstance(seats, Seat):
        seats = [seats]
    s = seats[0].semiring
    if s.is_finite:
        return list(s.elements)
    values = {s.zero, s.one}
    values.update(extra_lits)
    for seat in seats:
        for ideal in seat.annotation.values():
            if isinstance(ideal, sr.ThresholdIdeal) and ideal.threshold is not None:
                values.add(ideal.threshold)
    finite = sorted(v for v in values if v != INF)
    probes = set(values)
    for lo, hi in zip(finite, finite[1:]):
        probes.add(Fraction(lo + hi, 2) if isinstance(s, sr.MinPlusRat) else (lo + hi) // 2)
    if finite:
        probes.add(finite[-1] + 1)
    return sorted(probes)


@dataclass
class SchemeReport:
    scheme: str
    mode: str
    status: str  # valid | counterexample | no-counterexample | inconclusive
    instances: int
    counterexample: dict = None

    @property
    def refuted(self) -> bool:
        return self.status == "counterexample"


def _instantiate_lits(s, scheme_obj, binding):
    return {ph: _LIT_EXPRS[ph](s, binding) for ph in scheme_obj.placeholders}


def check_scheme(seat: Seat, sch: AxiomScheme, mode="exhaustive", budget=500_000,
                 rng_seed=0, samples=500, probe_lits=()) -> SchemeReport:
    """Test scheme validity on the seat.

    Exhaustive mode ranges over every valuation of the schematic variables
    and, for finite semirings, every literal tuple: an empty search then
    proves validity.  On infinite backends literals come from a probe set,
    so the best positive answer is ``no-counterexample``.  Random mode
    samples valuations and literals.
    """
    s = seat.semiring
    t = seat.topology
    full = t.full
    n_states = len(t.states)
    tables = OperatorTables(seat) if n_states <= TABLE_STATE_LIMIT else None

    lit_pool = list(s.elements) if s.is_finite else probe_elements(seat, probe_lits)
    exhaustive_lits = s.is_finite

    def run(instances):
        checked = 0
        for binding, valuation in instances:
            if checked >= budget:
                return SchemeReport(sch.name, mode, "inconclusive", checked)
            checked += 1
            lits = _instantiate_lits(s, sch, binding)
            if tables is not None:
                conclusion = tables.eval(sch.conclusion, valuation, lits)
                premise = tables.eval(sch.premise, valuation, lits) if sch.is_rule else full
            else:
                model = Model(seat, dict(valuation))
                ev = Evaluator(model)
                ev.resolve = lits.__getitem__  # literals arrive pre-resolved
                conclusion = ev._eval(sch.conclusion)
                premise = ev._eval(sch.premise) if sch.is_rule else full
            if premise == full and conclusion != full:
                state = next(t.states[i] for i in range(n_states) if not conclusion >> i & 1)
                ce = {"valuation": {p: list(t.names_of(m)) for p, m in valuation.items()},
                      "literals": {k: s.format_element(v) for k, v in binding.items()},
                      "state": state}
                return SchemeReport(sch.name, mode, "counterexample", checked, ce)
        return None

    if mode == "exhaustive":
        bindings = [dict(zip(sch.lit_params, combo))
                    for combo in itertools.product(lit_pool, repeat=len(sch.lit_params))]
        valuations = (dict(zip(sch.var_names, masks))
                      for masks in itertools.product(range(full + 1), repeat=len(sch.var_names)))
        instances = ((b, v) for v in valuations for b in bindings)
        report = run(instances)
        if report is not None:
            return report
        total = (full + 1) ** len(sch.var_names) * max(1, len(lit_pool) ** len(sch.lit_params))
        status = "valid" if exhaustive_lits else "no-counterexample"
        return SchemeReport(sch.name, mode, status, total)

    rng = random.Random(rng_seed)

    def sampled():
        for _ in range(samples):
            binding = {p: rng.choice(lit_pool) for p in sch.lit_params}
            valuation = {v: rng.randrange(full + 1) for v in sch.var_names}
            yield binding, valuation

    report = run(sampled())
    if report is not None:
        return report
    return SchemeReport(sch.name, mode, "no-counterexample", samples)


@dataclass
class CrosscheckReport:
    """Classification-versus-validity comparison for one seat."""

    strong_bounded: bool
    split_suite_valid: bool
    uniform: bool = None
    uniform_schemes_valid: tuple = None
    status: str = "ok"
    detail: str = ""


def characterization_crosscheck(seat: Seat, budget=500_000) -> CrosscheckReport:
    """Strong+bounded must coincide with validity of the split suite, and
    (on strong bounded seats) uniformity with the two uniformity schemes."""
    report = classify(seat)
    sb = report.strong.holds and report.bounded
    results = [check_scheme(seat, scheme(nm), budget=budget)
               for nm in ("choice-split", "one-top", "zero-bot")]
    if any(r.status == "inconclusive" for r in results):
        return CrosscheckReport(sb, False, status="inconclusive", detail="budget")
    certain = all(r.status in ("valid", "counterexample") for r in results)
    suite_valid = all(r.status == "valid" for r in results)
    refuted = any(r.refuted for r in results)
    if sb and refuted:
        return CrosscheckReport(sb, False, status="mismatch", detail="strong bounded seat refutes split suite")
    if not sb and not refuted:
        if not certain:
            return CrosscheckReport(sb, suite_valid, status="inconclusive", detail="probe-only literals")
        return CrosscheckReport(sb, suite_valid, status="mismatch",
                                detail="non-strong-bounded seat validates split suite")
    if not sb:
        return CrosscheckReport(sb, False)

    uni_results = tuple(check_scheme(seat, scheme(nm), budget=budget)
                        for nm in ("uniform-pos", "uniform-neg"))
    if any(r.status == "inconclusive" for r in uni_results):
        return CrosscheckReport(sb, suite_valid, report.uniform.holds, status="inconclusive", detail="budget")
    valid_flags = tuple(r.status == "valid" for r in uni_results)
    refuted_flags = tuple(r.refuted for r in uni_results)
    uniform = report.uniform.holds
    if uniform and any(refuted_flags):
        return CrosscheckReport(sb, suite_valid, uniform, valid_flags, "mismatch",
                                "uniform seat refutes a uniformity scheme")
    if not uniform and not all(refuted_flags):
        if not all(r.status in ("valid", "counterexample") for r in uni_results):
            return CrosscheckReport(sb, suite_valid, uniform, valid_flags, "inconclusive", "probe-only literals")
        return CrosscheckReport(sb, suite_valid, uniform, valid_flags, "mismatch",
                                "non-uniform seat validates a uniformity scheme")
    return CrosscheckReport(sb, suite_valid, uniform, valid_flags)


# ---------------------------------------------------------------------------
# Random seats


def semiring_catalog() -> list:
    """Small law-abiding semirings (|K| <= 4) for randomized suites."""
    return [
        sr.boolean_semiring(),
        sr.chain_semiring(("0", "1", "inf")),
        sr.chain_semiring(("0", "1", "2", "inf")),
        sr.powerset_lattice(("r1", "r2")),
        sr.gf2(),
        sr.saturating_nat(3),
    ]


def _constraint_satisfied(seat, report, constraints):
    for c in constraints:
        if c == "strong" and not report.strong.holds:
            return False
        if c == "non-strong" and report.strong.holds:
            return False
        if c == "bounded" and not report.bounded:
            return False
        if c == "uniform" and not report.uniform.holds:
            return False
        if c == "non-uniform" and report.uniform.holds:
            return False
        if c == "one-only-at-carrier":
            t = seat.topology
            for i in range(len(t.states)):
                if seat.evidence_at(seat.semiring.one, i) != (t.full,):
                    return False
    return True


def random_seat(n_states=3, semiring=None, constraints=(), rng_seed=0,
                density=0.45, n_subbasis=None, max_tries=400) -> Seat:
    """Sample a seat: random subbasis, random generator annotations, close,
    then repair/reject until the class constraints hold.  Deterministic per
    seed; raises GenerationError when the constraints are unrealizable."""
    rng = random.Random(rng_seed)
    constraints = tuple(constraints)
    for _ in range(max_tries):
        s = semiring if semiring is not None else rng.choice(semiring_catalog())
        states = tuple(f"x{i}" for i in range(n_states))
        full = (1 << n_states) - 1
        k = n_subbasis if n_subbasis is not None else rng.randint(1, 3)
        subbasis = [rng.randrange(1, full + 1) for _ in range(k)]
        topo = generate(states, subbasis)

        pool = list(s.elements)
        if "one-only-at-carrier" in constraints:
            pool = [g for g in pool
                    if not sr.ideal_member(s, sr.ideal_close(s, [g]), s.one)]
            if not pool:
                continue
        raw = {}

        def sprinkle(state_spec):
            for u in topo.opens:
                if u != topo.full and rng.random() < density:
                    gens = [rng.choice(pool) for _ in range(rng.randint(1, 2))]
                    raw[(u, state_spec)] = gens

        uniform_wanted = "uniform" in constraints or "one-only-at-carrier" in constraints
        if uniform_wanted:
            sprinkle(None)
        else:
            for st in states:
                sprinkle(st)
        if "bounded" in constraints:
            raw[(topo.full, None)] = [s.one]
            raw[(0, None)] = [s.zero]
        if "one-only-at-carrier" in constraints:
            raw[(topo.full, None)] = [s.one]

        seat = seat_close(topo, s, raw, uniform_hint=uniform_wanted)
        if _constraint_satisfied(seat, classify(seat), constraints):
            return seat
    raise GenerationError(f"could not satisfy constraints {constraints} at {n_states} states")


def random_model(seat: Seat, props=("p",), rng_seed=0) -> Model:
    rng = random.Random(rng_seed)
    full = seat.topology.full
    return Model(seat, {p: rng.randrange(full + 1) for p in props})
