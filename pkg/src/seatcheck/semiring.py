"""Resource algebras: semirings, their preorders, and semiring ideals.

Two families of backends are supported.  Finite semirings are given by
explicit operation tables and their ideals are explicit element sets.
The two built-in infinite backends (``tropical-nat`` and ``min-plus-rat``)
are totally ordered with choice = min; every ideal there is an upward
interval and is stored as a threshold plus an open/closed flag, so the
half-open interval (c, inf] is representable exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import StructuralError, UnsupportedOperationError

INF = float("inf")


def format_value(v) -> str:
    """Canonical text form of an element (used in files and formulas)."""
    if v == INF:
        return "inf"
    if isinstance(v, frozenset):
        return "{" + ",".join(sorted(map(str, v))) + "}"
    return str(v)


def _parse_set_literal(text):
    body = text[1:-1].strip()
    if not body:
        return frozenset()
    return frozenset(part.strip() for part in body.split(","))


class Semiring:
    """Abstract resource algebra <K, plus, times, zero, one>."""

    kind = "abstract"
    lax_zero = False

    def plus(self, a, b):
        raise NotImplementedError

    def times(self, a, b):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def idempotent_plus(self) -> bool:
        raise NotImplementedError

    def format_element(self, a) -> str:
        return format_value(a)

    def parse_element(self, text: str):
        raise NotImplementedError

    def descriptor(self) -> dict:
        """JSON-serializable canonical description; doubles as identity."""
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Semiring) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self.descriptor()))

    def __repr__(self):
        return f"<Semiring {self.kind}>"


class FiniteSemiring(Semiring):
    kind = "finite"

    def __init__(self, elements, plus_table, times_table, zero, one, lax_zero=False, name=None):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise StructuralError("duplicate semiring elements")
        self._plus = dict(plus_table)
        self._times = dict(times_table)
        self.zero = zero
        self.one = one
        self.lax_zero = bool(lax_zero)
        self.name = name
        self._check_tables()
        self._by_name = {self.format_element(a): a for a in self.elements}

    def _check_tables(self):
        universe = set(self.elements)
        if self.zero not in universe or self.one not in universe:
            raise StructuralError("zero/one not among semiring elements")
        for table, label in ((self._plus, "plus"), (self._times, "times")):
            for a in self.elements:
                for b in self.elements:
                    if (a, b) not in table:
                        raise StructuralError(f"{label} table missing cell ({a!r}, {b!r})")
                    if table[(a, b)] not in universe:
                        raise StructuralError(f"{label} table leaves the element set at ({a!r}, {b!r})")

    def plus(self, a, b):
        return self._plus[(a, b)]

    def times(self, a, b):
        return self._times[(a, b)]

    def contains(self, a):
        return a in self.elements

    @property
    def is_finite(self):
        return True

    @property
    def idempotent_plus(self):
        return all(self.plus(a, a) == a for a in self.elements)

    def parse_element(self, text):
        text = text.strip()
        if text in self._by_name:
            return self._by_name[text]
        if text.startswith("{") and text.endswith("}"):
            v = _parse_set_literal(text)
            if v in self.elements:
                return v
        raise StructuralError(f"unknown element literal {text!r} for {self!r}")

    def descriptor(self):
        names = [self.format_element(a) for a in self.elements]
        return {
            "kind": "finite",
            "elements": names,
            "plus": [[self.format_element(self.plus(a, b)) for b in self.elements] for a in self.elements],
            "times": [[self.format_element(self.times(a, b)) for b in self.elements] for a in self.elements],
            "zero": self.format_element(self.zero),
            "one": self.format_element(self.one),
            "lax_zero": self.lax_zero,
        }

    def __repr__(self):
        label = self.name or f"finite[{len(self.elements)}]"
        return f"<Semiring {label}>"


class _OrderedBackend(Semiring):
    """Shared machinery for the totally ordered min-choice backends."""

    zero = INF
    one = 0

    def plus(self, a, b):
        return a if a <= b else b

    @property
    def idempotent_plus(self):
        return True

    # In both backends b = times(a, c) is solvable exactly when b >= a,
    # and b = plus(a, c) = min(a, c) exactly when b <= a.
    def solvable_right(self, a, b):
        return b >= a

    def parse_element(self, text):
        text = text.strip()
        if text == "inf":
            return INF
        try:
            value = self._parse_finite(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"bad element literal {text!r} for {self!r}") from exc
        if not self.contains(value):
            raise StructuralError(f"element {text!r} outside {self!r}")
        return value


class TropicalNat(_OrderedBackend):
    """<N u {inf}, min, max, inf, 0>: resource = time, combination = max."""

    kind = "tropical-nat"

    def times(self, a, b):
        return a if a >= b else b

    def contains(self, a):
        if a == INF:
            return True
        return isinstance(a, int) and not isinstance(a, bool) and a >= 0

    def _parse_finite(self, text):
        return int(text)

    def descriptor(self):
        return {"kind": "tropical-nat"}


class MinPlusRat(_OrderedBackend):
    """<Q>=0 u {inf}, min, +, inf, 0>: resource = additive cost."""

    kind = "min-plus-rat"
    one = Fraction(0)

    def times(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def contains(self, a):
        if a == INF:
            return True
        return isinstance(a, (int, Fraction)) and not isinstance(a, bool) and a >= 0

    def _parse_finite(self, text):
        return Fraction(text)

    def descriptor(self):
        return {"kind": "min-plus-rat"}


def tropical_nat() -> TropicalNat:
    return TropicalNat()


def min_plus_rat() -> MinPlusRat:
    return MinPlusRat()


def finite_semiring(elements, plus, times, zero, one, lax_zero=False, name=None) -> FiniteSemiring:
    """Build a finite semiring from operation functions or tables."""
    elements = tuple(elements)
    if callable(plus):
        plus = {(a, b): plus(a, b) for a in elements for b in elements}
    if callable(times):
        times = {(a, b): times(a, b) for a in elements for b in elements}
    return FiniteSemiring(elements, plus, times, zero, one, lax_zero=lax_zero, name=name)


def _powerset(items):
    items = sorted(items)
    subsets = [frozenset()]
    for it in items:
        subsets += [s | {it} for s in subsets]
    return sorted(subsets, key=lambda s: (len(s), sorted(s)))


def powerset_lattice(roles) -> FiniteSemiring:
    """Distributive lattice <P(roles), union, intersection, {}, roles>."""
    elems = _powerset(roles)
    return finite_semiring(
        elems,
        lambda a, b: a | b,
        lambda a, b: a & b,
        frozenset(),
        frozenset(roles),
        name=f"powerset-lattice{format_value(frozenset(roles))}",
    )


def powerset_union(agents) -> FiniteSemiring:
    """<P(agents), union, union, {}, {}>; zero laws fail, so lax_zero is set."""
    elems = _powerset(agents)
    return finite_semiring(
        elems,
        lambda a, b: a | b,
        lambda a, b: a | b,
        frozenset(),
        frozenset(),
        lax_zero=True,
        name=f"powerset-union{format_value(frozenset(agents))}",
    )


# -- small catalog used by the random seat generator and the test suite --

def boolean_semiring() -> FiniteSemiring:
    return finite_semiring(("0", "1"), {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "1"},
                           {("0", "0"): "0", ("0", "1"): "0", ("1", "0"): "0", ("1", "1"): "1"},
                           "0", "1", name="bool")


def chain_semiring(levels=("0", "1", "inf")) -> FiniteSemiring:
    """Finite chain with choice = min, combination = max (first level is one)."""
    order = {v: i for i, v in enumerate(levels)}
    return finite_semiring(
        levels,
        lambda a, b: a if order[a] <= order[b] else b,
        lambda a, b: a if order[a] >= order[b] else b,
        levels[-1],
        levels[0],
        name="chain" + str(len(levels)),
    )


def gf2() -> FiniteSemiring:
    """The two-element field; its only proper ideal {0} is not strong."""
    return finite_semiring(("0", "1"),
                           lambda a, b: "1" if a != b else "0",
                           lambda a, b: "1" if a == b == "1" else "0",
                           "0", "1", name="gf2")


def saturating_nat(top=3) -> FiniteSemiring:
    """Naturals 0..top with saturating + and *; non-idempotent choice."""
    elems = tuple(range(top + 1))
    return finite_semiring(elems,
                           lambda a, b: min(a + b, top),
                           lambda a, b: min(a * b, top),
                           0, 1, name=f"sat-nat{top}")


LAW_NAMES = (
    "plus-associative", "plus-commutative", "plus-identity",
    "times-associative", "times-identity",
    "distributes-left", "distributes-right", "zero-annihilates",
)


@dataclass(frozen=True)
class LawViolation:
    law: str
    witness: tuple

    def __str__(self):
        args = ", ".join(format_value(v) for v in self.witness)
        return f"{self.law} fails at ({args})"


def _law_checks(s: Semiring):
    z, o = s.zero, s.one
    checks = [
        ("plus-associative", 3, lambda a, b, c: s.plus(s.plus(a, b), c) == s.plus(a, s.plus(b, c))),
        ("plus-commutative", 2, lambda a, b: s.plus(a, b) == s.plus(b, a)),
        ("times-associative", 3, lambda a, b, c: s.times(s.times(a, b), c) == s.times(a, s.times(b, c))),
        ("times-identity", 1, lambda a: s.times(a, o) == a and s.times(o, a) == a),
        ("distributes-left", 3, lambda a, b, c: s.times(a, s.plus(b, c)) == s.plus(s.times(a, b), s.times(a, c))),
        ("distributes-right", 3, lambda a, b, c: s.times(s.plus(b, c), a) == s.plus(s.times(b, a), s.times(c, a))),
    ]
    if not s.lax_zero:
        checks.insert(2, ("plus-identity", 1, lambda a: s.plus(a, z) == a and s.plus(z, a) == a))
        checks.append(("zero-annihilates", 1, lambda a: s.times(a, z) == z and s.times(z, a) == z))
    return checks


def _sample_pool(s: Semiring, samples: int, rng: random.Random):
    if isinstance(s, TropicalNat):
        pool = [rng.randrange(0, 50) for _ in range(samples)]
    else:
        pool = [Fraction(rng.randrange(0, 60), rng.randrange(1, 12)) for _ in range(samples)]
    pool += [s.one, INF]
    return pool


def verify_laws(s: Semiring, samples: int = 200, rng_seed: int = 0) -> list[LawViolation]:
    """Check the semiring laws; empty report means no violation was found.

    Finite semirings are checked exhaustively; the infinite backends are
    spot-checked on `samples` random tuples.  Under ``lax_zero`` the
    zero-identity and annihilator laws are skipped.
    """
    violations = []
    if s.is_finite:
        pools = {1: [(a,) for a in s.elements],
                 2: [(a, b) for a in s.elements for b in s.elements],
                 3: [(a, b, c) for a in s.elements for b in s.elements for c in s.elements]}
    else:
        rng = random.Random(rng_seed)
        pool = _sample_pool(s, samples, rng)
        pools = {n: [tuple(rng.choice(pool) for _ in range(n)) for _ in range(samples)] for n in (1, 2, 3)}
    for law, arity, check in _law_checks(s):
        for args in pools[arity]:
            if not check(*args):
                violations.append(LawViolation(law, args))
                break
    return violations


def leq_right(s: Semiring, a, b) -> bool:
    """Right multiplicative preorder: some c with b = a*c."""
    if s.is_finite:
        return any(s.times(a, c) == b for c in s.elements)
    if isinstance(s, _OrderedBackend):
        return s.solvable_right(a, b)
    raise UnsupportedOperationError("no closed form for leq_right on this backend")


def leq_left(s: Semiring, a, b) -> bool:
    """Left multiplicative preorder: some c with b = c*a."""
    if s.is_finite:
        return any(s.times(c, a) == b for c in s.elements)
    if isinstance(s, _OrderedBackend):
        return s.solvable_right(a, b)
    raise UnsupportedOperationError("no closed form for leq_left on this backend")


def leq_add(s: Semiring, a, b) -> bool:
    """Additive preorder: some c with b = a+c."""
    if s.is_finite:
        return any(s.plus(a, c) == b for c in s.elements)
    if isinstance(s, _OrderedBackend):
        return b <= a
    raise UnsupportedOperationError("no closed form for leq_add on this backend")


# ---------------------------------------------------------------------------
# Ideals


@dataclass(frozen=True)
class FiniteIdeal:
    members: frozenset

    def __repr__(self):
        return "FiniteIdeal{" + ",".join(sorted(format_value(m) for m in self.members)) + "}"


@dataclass(frozen=True)
class ThresholdIdeal:
    """Upward interval [threshold, inf] (closed) or (threshold, inf] (open).

    ``threshold is None`` encodes the empty ideal.
    """

    threshold: object
    closed: bool = True

    def __repr__(self):
        if self.threshold is None:
            return "ThresholdIdeal(empty)"
        bracket = "[" if self.closed else "("
        return f"ThresholdIdeal{bracket}{format_value(self.threshold)}, inf]"


def empty_ideal(s: Semiring):
    if s.is_finite:
        return FiniteIdeal(frozenset())
    return ThresholdIdeal(None)


def _mk_threshold(value, closed):
    if value is None or (value == INF and not closed):
        return ThresholdIdeal(None)
    return ThresholdIdeal(value, closed)


def ideal_member(s: Semiring, ideal, a) -> bool:
    if isinstance(ideal, FiniteIdeal):
        return a in ideal.members
    if ideal.threshold is None:
        return False
    return a >= ideal.threshold if ideal.closed else a > ideal.threshold


def ideal_is_empty(ideal) -> bool:
    if isinstance(ideal, FiniteIdeal):
        return not ideal.members
    return ideal.threshold is None


def ideal_is_improper(s: Semiring, ideal) -> bool:
    """True when the ideal is all of K."""
    if isinstance(ideal, FiniteIdeal):
        return ideal.members == set(s.elements)
    return ideal.threshold == s.one and ideal.closed


def ideal_subset(s: Semiring, inner, outer) -> bool:
    if isinstance(inner, FiniteIdeal):
        return inner.members <= outer.members
    if inner.threshold is None:
        return True
    if outer.threshold is None:
        return False
    if outer.threshold < inner.threshold:
        return True
    if outer.threshold > inner.threshold:
        return False
    return outer.closed or not inner.closed


def ideal_union(s: Semiring, left, right):
    """Least ideal containing both arguments."""
    if isinstance(left, FiniteIdeal):
        return ideal_close(s, left.members | right.members)
    if left.threshold is None:
        return right
    if right.threshold is None:
        return left
    # thresholds of one backend are totally ordered by inclusion
    return left if ideal_subset(s, right, left) else right


def ideal_combine(s: Semiring, left, right):
    """Least ideal containing every product a*b with a in left, b in right."""
    if ideal_is_empty(left) or ideal_is_empty(right):
        return empty_ideal(s)
    if isinstance(left, FiniteIdeal):
        prods = {s.times(a, b) for a in left.members for b in right.members}
        return ideal_close(s, prods)
    t1, c1 = left.threshold, left.closed
    t2, c2 = right.threshold, right.closed
    if isinstance(s, MinPlusRat):
        value = s.times(t1, t2)
        if value == INF:
            return _mk_threshold(INF, True)
        return _mk_threshold(value, c1 and c2)
    # combination = max: the larger threshold wins its own flag
    if t1 > t2:
        return _mk_threshold(t1, c1)
    if t2 > t1:
        return _mk_threshold(t2, c2)
    return _mk_threshold(t1, c1 and c2)


def ideal_close(s: Semiring, generators):
    """Least ideal containing the generators.

    Closure is under two-sided multiplication by arbitrary elements and
    under choice; the empty generator set yields the empty ideal.
    """
    gens = list(generators)
    for g in gens:
        if not s.contains(g):
            raise StructuralError(f"generator {format_value(g)} outside the semiring")
    if not gens:
        return empty_ideal(s)
    if not s.is_finite:
        # both ordered backends: closure of {g} is the closed interval up from g
        return _mk_threshold(min(gens), True)
    members = set(gens)
    while True:
        new = set()
        for a in members:
            for b in s.elements:
                new.add(s.times(a, b))
                new.add(s.times(b, a))
            for b in members:
                new.add(s.plus(a, b))
        if new <= members:
            return FiniteIdeal(frozenset(members))
        members |= new


def ideal_join(s: Semiring, ideal):
    """Choice-fold over the ideal: the candidate cost of a piece of evidence.

    Requires idempotent choice.  The fold over the empty ideal is zero, so
    the empty ideal yields zero (which is then not a member).
    """
    if not s.idempotent_plus:
        raise UnsupportedOperationError("ideal_join needs an idempotent choice operation")
    if ideal_is_empty(ideal):
        return s.zero
    if isinstance(ideal, FiniteIdeal):
        acc = None
        for a in sorted(ideal.members, key=format_value):
            acc = a if acc is None else s.plus(acc, a)
        return acc
    return ideal.threshold


def ideal_is_strong(s: Semiring, ideal) -> bool:
    """Whether a+b in the ideal forces both a and b in."""
    if isinstance(ideal, FiniteIdeal):
        return all(a in ideal.members and b in ideal.members
                   for a in s.elements for b in s.elements
                   if s.plus(a, b) in ideal.members)
    # upward intervals under choice = min are always strong
    return True


def ideal_members_for_display(s: Semiring, ideal) -> str:
    if isinstance(ideal, FiniteIdeal):
        return "{" + ",".join(sorted(s.format_element(m) for m in ideal.members)) + "}"
    return repr(ideal)
