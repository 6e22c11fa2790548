"""Deterministic builders for the motivating examples and the appendix
fixtures, at desk scale.

The stream space is truncated to binary words of a fixed length (the
up-set basis survives truncation); the graph-exploration builder bounds
walk length and exploration size and closes the resulting annotation, so
its costs are those of the capped exploration family.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from . import semiring as sr
from .bisim import BisimRelation
from .errors import StructuralError
from .seat import Model, Seat, seat_close
from .semiring import INF
from .topology import FiniteTopology, generate


def _valuation_masks(topology, valuation):
    if not valuation:
        return {}
    return {p: topology.mask_of(names) for p, names in valuation.items()}


# ---------------------------------------------------------------------------
# Binary streams under a time budget


def streams(depth=2, noise=None, valuation=None) -> Model:
    """Observed binary words of a fixed length; observing a prefix of
    length n costs time n.  ``noise`` maps a word to extra observations
    credited to it beyond its own prefixes."""
    if depth < 0:
        raise StructuralError("stream depth must be nonnegative")
    words = [""]
    for _ in range(depth):
        words = [w + bit for w in words for bit in "01"]
    names = tuple(w or "eps" for w in words)
    prefixes = [""]
    for _ in range(depth):
        prefixes += [u + bit for u in prefixes if len(u) < depth for bit in "01"]
    prefixes = sorted(set(prefixes), key=lambda u: (len(u), u))

    def up_open(u):
        return [names[i] for i, w in enumerate(words) if w.startswith(u)]

    topo = generate(names, [up_open(u) for u in prefixes])
    raw = {}
    for i, w in enumerate(words):
        observations = {w[:k] for k in range(len(w) + 1)}
        if noise:
            observations |= set(noise.get(w, ()))
        for u in observations:
            mask = topo.mask_of(up_open(u))
            key = (mask, names[i])
            raw.setdefault(key, []).append(len(u))
    seat = seat_close(topo, sr.tropical_nat(), raw)
    return Model(seat, _valuation_masks(topo, valuation))


# ---------------------------------------------------------------------------
# Role-based access control


def rbac(roles, db_assignment, consistency_map, qualifications,
         states=None, valuation=None) -> Model:
    """Qualification-observable propositions over a role lattice.

    A qualification (set of roles) observes P when every role it names
    has a view inside P; its view is the union of its roles' views.  The
    vacuous qualification is kept out of the topology basis but does
    annotate (it is the strongest resource, giving zero-boundedness).
    """
    roles = tuple(roles)
    quals = {frozenset(q) for q in qualifications}
    for a in quals:
        for b in quals:
            if a | b not in quals or a & b not in quals:
                raise StructuralError("qualification collection is not a lattice")
        if not a <= set(roles):
            raise StructuralError(f"qualification {set(a)} mentions unknown roles")
    consistency = {frozenset(k): frozenset(v) for k, v in consistency_map.items()}
    for small, view_small in consistency.items():
        for big, view_big in consistency.items():
            if small <= big and not view_big <= view_small:
                raise StructuralError("consistency map is not anti-monotone")

    views = {}
    for r in roles:
        dbs = frozenset(db_assignment[r])
        if dbs not in consistency:
            raise StructuralError(f"no consistency entry for the databases of role {r!r}")
        views[r] = consistency[dbs]
    if states is None:
        states = sorted(set().union(*views.values()) if views else ())
    states = tuple(states)

    qual_view = {a: frozenset().union(*(views[r] for r in a)) if a else frozenset()
                 for a in quals}
    carrier = set(states)
    observable = []
    for size in range(len(states) + 1):
        for combo in combinations(states, size):
            p = set(combo)
            if any(a and qual_view[a] <= p for a in quals):
                observable.append(combo)
    topo = generate(states, observable)

    bottom = frozenset.intersection(*quals)
    top = frozenset.union(*quals)
    semi = sr.finite_semiring(sorted(quals, key=lambda q: (len(q), sorted(q))),
                              lambda a, b: a | b, lambda a, b: a & b,
                              bottom, top, name="rbac-lattice")
    raw = {}
    for u in topo.opens:
        members = frozenset(a for a in quals
                            if qual_view[a] <= set(topo.names_of(u)) <= carrier)
        raw[(u, None)] = sr.FiniteIdeal(members)
    seat = seat_close(topo, semi, raw, uniform_hint=True)
    return Model(seat, _valuation_masks(topo, valuation))


def rbac_demo() -> Model:
    roles = ("admin", "analyst")
    db_assignment = {"admin": {"hr", "fin"}, "analyst": {"fin"}}
    consistency_map = {frozenset({"hr", "fin"}): {"s1"}, frozenset({"fin"}): {"s1", "s2"}}
    quals = [set(), {"admin"}, {"analyst"}, {"admin", "analyst"}]
    return rbac(roles, db_assignment, consistency_map, quals,
                states=("s1", "s2", "s3"), valuation={"p": ("s1", "s2")})


# ---------------------------------------------------------------------------
# Weighted graph exploration


def _walks(vertices, edges, start, max_len):
    out = [(start,)]
    frontier = [(start,)]
    while frontier:
        nxt = []
        for walk in frontier:
            if len(walk) >= max_len:
                continue
            for (u, v) in edges:
                if u == walk[-1]:
                    nxt.append(walk + (v,))
        out += nxt
        frontier = nxt
    return out


def graph_exploration(vertices, edges, states, local_info,
                      path_len_cap=3, expl_size_cap=2, valuation=None) -> Model:
    """Robot exploration of a weighted graph.

    ``states`` maps state name -> start vertex; ``local_info`` maps a
    vertex to the states consistent with what is seen there.  A walk's
    information is the intersection of its vertices' information, an
    exploration is a set of walks (all anchored at the state's start
    vertex for annotation purposes), and its cost is the total weight.
    """
    vertices = tuple(vertices)
    weights = {}
    for (u, v), w in edges.items():
        if u not in vertices or v not in vertices:
            raise StructuralError("edge endpoint outside the vertex set")
        w = Fraction(w)
        if w < 0:
            raise StructuralError("edge weights must be nonnegative")
        weights[(u, v)] = w
    state_names = tuple(states)
    starts = dict(states)
    info = {v: frozenset(local_info.get(v, ())) for v in vertices}

    def walk_info(walk):
        out = set(state_names)
        for v in walk:
            out &= info[v]
        return frozenset(out)

    def walk_cost(walk):
        return sum((weights[(a, b)] for a, b in zip(walk, walk[1:])), Fraction(0))

    all_walks = []
    for v in vertices:
        all_walks += _walks(vertices, weights, v, path_len_cap)
    subbasis = [walk_info(t) for t in all_walks] + [frozenset(state_names)]
    topo = generate(state_names, [sorted(s) for s in subbasis])

    raw = {}
    for name in state_names:
        raw.setdefault((topo.full, name), []).append(Fraction(0))  # empty exploration
        anchored = _walks(vertices, weights, starts[name], path_len_cap)
        for size in range(1, expl_size_cap + 1):
            for expl in combinations(anchored, size):
                covered = set(state_names)
                for t in expl:
                    covered &= walk_info(t)
                mask = topo.mask_of(covered)
                cost = sum((walk_cost(t) for t in expl), Fraction(0))
                raw.setdefault((mask, name), []).append(cost)
    seat = seat_close(topo, sr.min_plus_rat(), raw)
    return Model(seat, _valuation_masks(topo, valuation))


def graph_demo() -> Model:
    vertices = ("v0", "v1", "v2")
    edges = {("v0", "v1"): 1, ("v1", "v0"): 1,
             ("v1", "v2"): Fraction(1, 2), ("v2", "v1"): Fraction(1, 2)}
    states = {"g1": "v0", "g2": "v1", "g3": "v0"}
    local_info = {"v0": ("g1", "g3"), "v1": ("g2",), "v2": ("g1", "g2", "g3")}
    return graph_exploration(vertices, edges, states, local_info,
                             valuation={"p": ("g1", "g3")})


# ---------------------------------------------------------------------------
# Agents in a distributed system


def agents(agent_names, partitions, valuation=None) -> Model:
    """Distributed-knowledge cells as evidence; groups of agents as resources.

    A group is sufficient for an open at a state when the group's joint
    cell at that state sits inside the open (the local reading of group
    sufficiency).  The resource algebra is the lax powerset-union semiring.
    """
    agent_names = tuple(agent_names)
    blocks = {}
    carrier = None
    for agent in agent_names:
        parts = [frozenset(b) for b in partitions[agent]]
        cover = set().union(*parts) if parts else set()
        if carrier is None:
            carrier = cover
        if cover != carrier or sum(len(b) for b in parts) != len(cover):
            raise StructuralError(f"partition of agent {agent!r} does not partition the carrier")
        blocks[agent] = parts
    states = tuple(sorted(carrier))
    topo_cells = []
    groups = [frozenset(g) for size in range(len(agent_names) + 1)
              for g in combinations(agent_names, size)]

    def cell(state, group):
        out = set(states)
        for agent in group:
            out &= next(b for b in blocks[agent] if state in b)
        return frozenset(out)

    for s in states:
        for g in groups:
            topo_cells.append(sorted(cell(s, g)))
    topo = generate(states, topo_cells)

    semi = sr.powerset_union(agent_names)
    annotation = {}
    for u in topo.opens:
        names_u = set(topo.names_of(u))
        for i, s in enumerate(states):
            members = frozenset(g for g in groups if cell(s, g) <= names_u)
            annotation[(u, i)] = sr.FiniteIdeal(members)
    seat = Seat(topo, semi, annotation)
    return Model(seat, _valuation_masks(topo, valuation))


def agents_demo() -> Model:
    partitions = {"a1": [("s1", "s2"), ("s3",)], "a2": [("s1",), ("s2", "s3")]}
    return agents(("a1", "a2"), partitions, valuation={"p": ("s1", "s2")})


# ---------------------------------------------------------------------------
# Cost seats from weight tables


def borel_cost(states, opens, weights, valuation=None) -> Model:
    """Additive per-state weights; the cost of an open is the weight its
    state assigns to the complement (how much of the space one may miss)."""
    states = tuple(states)
    topo = FiniteTopology(states, tuple(
        u if isinstance(u, int) else _mask(states, u) for u in opens))
    table = {}
    for x in states:
        row = weights[x]
        for s in states:
            w = Fraction(row[s])
            if w < 0:
                raise StructuralError("weights must be nonnegative")
            table[(x, s)] = w
    annotation = {}
    for u in topo.opens:
        for i, x in enumerate(states):
            complement = topo.full & ~u
            total = sum((table[(x, s)] for s in topo.names_of(complement)), Fraction(0))
            annotation[(u, i)] = sr.ThresholdIdeal(total, True)
    seat = Seat(topo, sr.min_plus_rat(), annotation)
    return Model(seat, _valuation_masks(topo, valuation))


def _mask(states, names):
    m = 0
    for n in names:
        m |= 1 << states.index(n)
    return m


def borel_demo() -> Model:
    states = ("s0", "s1", "s2", "s3")
    opens = [(), ("s0",), ("s0", "s1"), ("s0", "s1", "s2"), states]
    weights = {
        "s0": {"s0": Fraction(0), "s1": Fraction(1, 2), "s2": Fraction(1, 4), "s3": Fraction(1, 4)},
        "s1": {"s0": Fraction(1), "s1": Fraction(0), "s2": Fraction(2), "s3": Fraction(1)},
        "s2": {"s0": Fraction(1, 3), "s1": Fraction(1, 3), "s2": Fraction(1, 3), "s3": Fraction(0)},
        "s3": {"s0": Fraction(1), "s1": Fraction(1), "s2": Fraction(1), "s3": Fraction(1)},
    }
    return borel_cost(states, opens, weights, valuation={"p": ("s0", "s1")})


# ---------------------------------------------------------------------------
# Appendix fixtures


def _inta_counterexample() -> Model:
    states = ("x", "y", "z")
    topo = generate(states, [("x", "y"), ("x", "z")])
    raw = {}
    cheap = [(topo.full, "x"), (topo.mask_of(("x", "y")), "x"), (topo.mask_of(("x", "z")), "x")]
    for key in cheap:
        raw[key] = [Fraction(42)]
    for u in topo.opens:
        for s in states:
            if (u, s) not in raw:
                raw[(u, s)] = [Fraction(43)]
    seat = seat_close(topo, sr.min_plus_rat(), raw)
    return Model(seat, {"p": topo.full})


def _a12_m1() -> Model:
    topo = generate(("x1",), [])
    seat = seat_close(topo, sr.min_plus_rat(), {(0, None): [Fraction(0)], (topo.full, None): [Fraction(0)]},
                      uniform_hint=True)
    return Model(seat, {"p": topo.full})


def _a12_m2() -> Model:
    topo = generate(("x2", "y2"), [("x2",)])
    raw = {(u, None): [Fraction(0)] for u in topo.opens}
    seat = seat_close(topo, sr.min_plus_rat(), raw, uniform_hint=True)
    return Model(seat, {"p": topo.mask_of(("x2",))})


def _a13_m1() -> Model:
    topo = generate(("x1", "y1", "z1"), [("x1", "y1")])
    raw = {
        (topo.full, None): [Fraction(0)],
        (topo.mask_of(("x1", "y1")), None): sr.ThresholdIdeal(Fraction(0), closed=False),
        (0, None): [INF],
    }
    seat = seat_close(topo, sr.min_plus_rat(), raw, uniform_hint=True)
    return Model(seat, {"p": topo.full})


def _a13_m2() -> Model:
    topo = generate(("x2", "y2"), [])
    raw = {(topo.full, None): [Fraction(0)], (0, None): [INF]}
    seat = seat_close(topo, sr.min_plus_rat(), raw, uniform_hint=True)
    return Model(seat, {"p": topo.full})


def fixtures() -> dict:
    """The appendix counterexample models, byte-stable under serialization."""
    return {
        "inta_counterexample": _inta_counterexample(),
        "a12_m1": _a12_m1(),
        "a12_m2": _a12_m2(),
        "a13_m1": _a13_m1(),
        "a13_m2": _a13_m2(),
    }


def a12_relation() -> BisimRelation:
    return BisimRelation(_a12_m1(), _a12_m2(), frozenset({("x1", "x2")}), global_relation=False)


def a13_relation() -> BisimRelation:
    return BisimRelation(_a13_m1(), _a13_m2(),
                         frozenset({("x1", "x2"), ("y1", "y2"), ("z1", "y2")}),
                         global_relation=True)


GALLERY_BUILDERS = {
    "streams": streams,
    "rbac": rbac_demo,
    "graph": graph_demo,
    "agents": agents_demo,
    "borel": borel_demo,
}
