"""JSON file formats for semirings, models, and relations.

Model files carry the semiring descriptor, the carrier, either an explicit
open family or a subbasis, generator-style annotation entries, and the
valuation.  Entries without a "state" apply to every state.  Ideals that no
finite generator set produces (open thresholds) are written with an
explicit "threshold"/"threshold_closed" pair instead of "generators".
"""

from __future__ import annotations

import json

from . import semiring as sr
from .bisim import BisimRelation
from .errors import StructuralError
from .seat import Model, Seat, seat_close
from .topology import FiniteTopology, generate


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- semirings --

def semiring_to_json(s: sr.Semiring) -> dict:
    return s.descriptor()


def semiring_from_json(d: dict) -> sr.Semiring:
    kind = d.get("kind")
    if kind == "tropical-nat":
        return sr.tropical_nat()
    if kind == "min-plus-rat":
        return sr.min_plus_rat()
    if kind == "powerset-lattice":
        return sr.powerset_lattice(d["roles"])
    if kind == "powerset-union":
        return sr.powerset_union(d["agents"])
    if kind != "finite":
        raise StructuralError(f"unknown semiring kind {kind!r}")
    names = list(d["elements"])
    index = {n: i for i, n in enumerate(names)}

    def table(rows, label):
        out = {}
        for i, row in enumerate(rows):
            if len(row) != len(names):
                raise StructuralError(f"{label} table is not square")
            for j, cell in enumerate(row):
                if cell not in index:
                    raise StructuralError(f"{label} table cell {cell!r} is not an element")
                out[(names[i], names[j])] = cell
        if len(rows) != len(names):
            raise StructuralError(f"{label} table is not square")
        return out

    return sr.FiniteSemiring(names, table(d["plus"], "plus"), table(d["times"], "times"),
                             d["zero"], d["one"], lax_zero=bool(d.get("lax_zero", False)))


# -- models --

def _ideal_entry(seat: Seat, u: int, ideal, state=None) -> dict:
    entry = {"open": list(seat.topology.names_of(u))}
    if state is not None:
        entry["state"] = state
    if isinstance(ideal, sr.FiniteIdeal):
        entry["generators"] = sorted(seat.semiring.format_element(m) for m in ideal.members)
    elif ideal.closed:
        entry["generators"] = [seat.semiring.format_element(ideal.threshold)]
    else:
        entry["threshold"] = seat.semiring.format_element(ideal.threshold)
        entry["threshold_closed"] = False
    return entry


def model_to_json(model: Model) -> dict:
    seat = model.seat
    t = seat.topology
    n = len(t.states)
    entries = []
    uniform = seat.uniform_hint and all(
        seat.annotation[(u, 0)] == seat.annotation[(u, i)]
        for u in t.opens for i in range(n))
    for u in t.opens:
        if uniform:
            ideal = seat.annotation[(u, 0)]
            if not sr.ideal_is_empty(ideal):
                entries.append(_ideal_entry(seat, u, ideal))
        else:
            for i in range(n):
                ideal = seat.annotation[(u, i)]
                if not sr.ideal_is_empty(ideal):
                    entries.append(_ideal_entry(seat, u, ideal, t.states[i]))
    return {
        "semiring": semiring_to_json(seat.semiring),
        "states": list(t.states),
        "opens": [list(t.names_of(u)) for u in t.opens],
        "annotation": entries,
        "valuation": {p: list(t.names_of(mask)) for p, mask in sorted(model.valuation.items())},
    }


def model_from_json(d: dict) -> Model:
    semi = semiring_from_json(d["semiring"])
    states = tuple(d["states"])
    if "opens" in d:
        masks = []
        for names in d["opens"]:
            topo_mask = 0
            for nm in names:
                if nm not in states:
                    raise StructuralError(f"open set mentions unknown state {nm!r}")
                topo_mask |= 1 << states.index(nm)
            masks.append(topo_mask)
        topo = FiniteTopology(states, tuple(masks))
    elif "subbasis" in d:
        topo = generate(states, d["subbasis"])
    else:
        raise StructuralError("model file needs either opens or a subbasis")

    raw = {}
    uniform = True
    for entry in d.get("annotation", ()):
        mask = topo.mask_of(entry["open"])
        state = entry.get("state")
        uniform = uniform and state is None
        if "generators" in entry:
            value = [semi.parse_element(g) for g in entry["generators"]]
        elif "threshold" in entry:
            if semi.is_finite:
                raise StructuralError("threshold entries need an ordered backend")
            value = sr.ThresholdIdeal(semi.parse_element(entry["threshold"]),
                                      bool(entry.get("threshold_closed", True)))
        else:
            raise StructuralError("annotation entry needs generators or a threshold")
        key = (mask, state)
        if key in raw and isinstance(raw[key], list) and isinstance(value, list):
            raw[key] = raw[key] + value
        else:
            raw[key] = value
    seat = seat_close(topo, semi, raw, uniform_hint=uniform)
    valuation = {p: topo.mask_of(names) for p, names in d.get("valuation", {}).items()}
    return Model(seat, valuation)


def model_dumps(model: Model) -> str:
    return dumps_canonical(model_to_json(model))


def model_loads(text: str) -> Model:
    return model_from_json(json.loads(text))


# -- relations --

def relation_to_json(z: BisimRelation) -> dict:
    return {"global": z.global_relation, "pairs": sorted([a, b] for a, b in z.pairs)}


def relation_from_json(d: dict, left: Model, right: Model) -> BisimRelation:
    pairs = frozenset((a, b) for a, b in d["pairs"])
    return BisimRelation(left, right, pairs, bool(d.get("global", False)))
