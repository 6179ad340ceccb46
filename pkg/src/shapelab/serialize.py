"""JSON file formats.

Every artifact is an object with a ``"kind"`` field.  Arithmetic integers
(counts, matrix entries, indices) are written as decimal strings so that
values of any size survive a round trip; readers also accept plain JSON
numbers.  Vertex labels keep their JSON type (number or string).  Inside a
workspace, any nested artifact may be replaced by ``{"ref": name}``.
"""

from __future__ import annotations

import json
from typing import Any, Callable, Mapping, Optional

from .abgroup import ExactSequence, FpAbGroup, GroupError, GroupHom
from .exactla import IntMatrix
from .posets import DirectedPoset, OrderMap, PosetError
from .simplicial import ComplexError, SimplicialComplex, SimplicialMap, SimplicialPair, _simplex_key
from .systems import DIRECT, INVERSE, GroupSystem, SystemCheckError, SystemMorphism


class FormatError(ValueError):
    """Malformed or inconsistent input file."""


# -- scalars -----------------------------------------------------------------------


def _int(x: Any, what: str = "integer") -> int:
    if isinstance(x, bool):
        raise FormatError(f"expected {what}, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise FormatError(f"expected {what}, got {x!r}")


def _ints(xs: Any, what: str = "integer list") -> list[int]:
    if not isinstance(xs, list):
        raise FormatError(f"expected {what}")
    return [_int(x) for x in xs]


def _str_int(x: int) -> str:
    return str(int(x))


def _matrix_out(M: IntMatrix) -> dict:
    return {"rows": _str_int(M.rows), "cols": _str_int(M.cols), "entries": [[_str_int(v) for v in r] for r in M.to_rows()]}


def _matrix_in(obj: Any) -> IntMatrix:
    if isinstance(obj, list):
        rows = [_ints(r, "matrix row") for r in obj]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise FormatError("ragged matrix")
        return IntMatrix.from_rows(rows, width)
    if not isinstance(obj, dict):
        raise FormatError("matrix must be a list of rows or an object with rows/cols/entries")
    r, c = _int(obj.get("rows")), _int(obj.get("cols"))
    rows = [_ints(row, "matrix row") for row in obj.get("entries", [])]
    if len(rows) != r or any(len(row) != c for row in rows):
        raise FormatError(f"matrix entries do not match the declared {r}x{c} shape")
    return IntMatrix.from_rows(rows, c)


# -- encoders ---------------------------------------------------------------------------


def group_to_json(G: FpAbGroup) -> dict:
    return {
        "kind": "group",
        "generators": _str_int(G.n_gens),
        "relations": [[_str_int(v) for v in col] for col in G.relations.columns()],
    }


def hom_to_json(h: GroupHom) -> dict:
    return {"kind": "hom", "source": group_to_json(h.source), "target": group_to_json(h.target), "matrix": _matrix_out(h.matrix)}


def poset_to_json(P: DirectedPoset) -> dict:
    pairs = [[_str_int(a), _str_int(b)] for a, b in P.comparable_pairs() if a != b]
    return {"kind": "poset", "size": _str_int(P.size), "order": pairs}


def system_to_json(S: GroupSystem) -> dict:
    bonds = [
        {"from": _str_int(a), "to": _str_int(b), "matrix": _matrix_out(S.bond(a, b).matrix)}
        for a, b in S.index.comparable_pairs()
        if a != b
    ]
    return {
        "kind": "system",
        "variance": S.variance,
        "poset": poset_to_json(S.index),
        "objects": [group_to_json(G) for G in S.objects],
        "bonds": bonds,
    }


def morphism_to_json(F: SystemMorphism) -> dict:
    return {
        "kind": "morphism",
        "source": system_to_json(F.source),
        "target": system_to_json(F.target),
        "index_map": [_str_int(x) for x in F.index_map.mapping],
        "components": [_matrix_out(h.matrix) for h in F.components],
    }


def complex_to_json(K: SimplicialComplex) -> dict:
    facets = sorted(K.maximal_simplices(), key=_simplex_key)
    return {"kind": "complex", "simplices": [list(s) for s in facets]}


def pair_to_json(P: SimplicialPair) -> dict:
    return {"kind": "pair", "total": complex_to_json(P.total), "sub": complex_to_json(P.sub)}


def space_to_json(X) -> dict:
    return pair_to_json(X) if isinstance(X, SimplicialPair) else complex_to_json(X)


def model_to_json(M) -> dict:
    return {"kind": "model", "total": space_to_json(M.space()), "family": [space_to_json(M.member(a)) for a in M.index.elements()]}


def map_to_json(f: SimplicialMap) -> dict:
    return {
        "kind": "map",
        "source": space_to_json(f.source),
        "target": space_to_json(f.target),
        "vertex_map": [[v, w] for v, w in f.vertex_map],
    }


def sequence_to_json(E: ExactSequence) -> dict:
    out = {
        "kind": "sequence",
        "groups": [group_to_json(G) for G in E.groups],
        "maps": [_matrix_out(h.matrix) for h in E.maps],
    }
    if E.labels:
        out["labels"] = list(E.labels)
    return out


def instance_to_json(inst: Mapping[str, Any]) -> dict:
    """Encode the check instances that decode to plain dicts."""
    kind = inst["kind"]
    if kind == "excision":
        out = {"kind": kind, "model": model_to_json(inst["model"]), "remove": [list(s) for s in inst["remove"]]}
        if not inst["strict"]:
            out["strict"] = False
        return out
    if kind == "naturality":
        return {
            "kind": kind,
            "map": map_to_json(inst["map"]),
            "source_model": model_to_json(inst["source_model"]),
            "target_model": model_to_json(inst["target_model"]),
        }
    if kind == "equivalence":
        return {"kind": kind, "mode": inst["mode"], "F": morphism_to_json(inst["F"]), "G": morphism_to_json(inst["G"])}
    if kind == "cofinality":
        out = {"kind": kind, "system": system_to_json(inst["system"])}
        if inst["subset"] is not None:
            out["subset"] = [_str_int(x) for x in inst["subset"]]
        return out
    raise TypeError(f"no file format for a {kind} instance")


def to_json(value) -> dict:
    from .shapefunctors import FilteredModel

    if isinstance(value, Workspace):
        return {"kind": "workspace", "bindings": dict(value.reader.raw)}
    if isinstance(value, dict):
        return instance_to_json(value)

    for cls, enc in (
        (FpAbGroup, group_to_json),
        (GroupHom, hom_to_json),
        (DirectedPoset, poset_to_json),
        (GroupSystem, system_to_json),
        (SystemMorphism, morphism_to_json),
        (SimplicialComplex, complex_to_json),
        (SimplicialPair, pair_to_json),
        (FilteredModel, model_to_json),
        (SimplicialMap, map_to_json),
        (ExactSequence, sequence_to_json),
    ):
        if isinstance(value, cls):
            return enc(value)
    raise TypeError(f"no file format for {type(value).__name__}")


def dumps(value) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    obj = to_json(value)
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- decoders -------------------------------------------------------------------------------


class Reader:
    """Decodes artifacts, resolving ``{"ref": name}`` against a workspace."""

    def __init__(self, bindings: Optional[Mapping[str, Any]] = None):
        self.raw = dict(bindings or {})
        self.cache: dict[str, Any] = {}
        self._active: set[str] = set()

    def resolve(self, name: str) -> Any:
        if name in self.cache:
            return self.cache[name]
        if name not in self.raw:
            raise FormatError(f"unbound identifier {name!r}")
        if name in self._active:
            raise FormatError(f"circular reference through {name!r}")
        self._active.add(name)
        try:
            value = self.read(self.raw[name])
        finally:
            self._active.discard(name)
        self.cache[name] = value
        return value

    def read(self, obj: Any, expect: Optional[tuple[str, ...]] = None) -> Any:
        if isinstance(obj, dict) and set(obj) == {"ref"}:
            value = self.resolve(obj["ref"])
            kind = kind_of(value)
            if expect and kind not in expect:
                raise FormatError(f"{obj['ref']!r} is a {kind}, expected {' or '.join(expect)}")
            return value
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FormatError("artifact must be an object with a 'kind' field")
        kind = obj["kind"]
        if expect and kind not in expect:
            raise FormatError(f"expected {' or '.join(expect)}, got {kind!r}")
        decoder = _DECODERS.get(kind)
        if decoder is None:
            raise FormatError(f"unknown kind {kind!r}")
        try:
            return decoder(self, obj)
        except (PosetError, GroupError, ComplexError) as e:
            raise FormatError(f"invalid {kind}: {e}") from e
        except KeyError as e:
            raise FormatError(f"{kind} is missing field {e}") from e

    # individual kinds

    def group(self, obj) -> FpAbGroup:
        n = _int(obj["generators"], "generator count")
        cols = [_ints(r, "relation") for r in obj.get("relations", [])]
        if any(len(c) != n for c in cols):
            raise FormatError("each relation needs one entry per generator")
        rel = IntMatrix.from_columns(cols, rows=n) if cols else IntMatrix.zeros(n, 0)
        return FpAbGroup(n, rel)

    def hom(self, obj) -> GroupHom:
        G = self.read(obj["source"], ("group",))
        H = self.read(obj["target"], ("group",))
        return GroupHom(G, H, _matrix_in(obj["matrix"]))

    def poset(self, obj) -> DirectedPoset:
        n = _int(obj["size"], "poset size")
        pairs = [tuple(_ints(p, "order pair")) for p in obj.get("order", [])]
        if any(len(p) != 2 for p in pairs):
            raise FormatError("order pairs have two entries")
        return DirectedPoset.from_relation(n, pairs)

    def system(self, obj) -> GroupSystem:
        variance = obj.get("variance")
        if variance not in (DIRECT, INVERSE):
            raise FormatError("variance must be 'direct' or 'inverse'")
        P = self.read(obj["poset"], ("poset",))
        objects = [self.read(g, ("group",)) for g in obj["objects"]]
        if len(objects) != P.size:
            raise FormatError("one object per poset element required")
        bonds = {}
        for b in obj.get("bonds", []):
            a, c = _int(b["from"]), _int(b["to"])
            if not (0 <= a < P.size and 0 <= c < P.size) or not P.le(a, c):
                raise FormatError(f"bond ({a}, {c}) is not a comparable pair")
            lo, hi = (a, c) if variance == DIRECT else (c, a)
            try:
                bonds[(a, c)] = GroupHom(objects[lo], objects[hi], _matrix_in(b["matrix"]))
            except GroupError as e:
                raise FormatError(f"bond ({a}, {c}): {e}") from e
        try:
            return GroupSystem.build(variance, P, objects, bonds)
        except SystemCheckError as e:
            raise FormatError(str(e)) from e

    def morphism(self, obj) -> SystemMorphism:
        X = self.read(obj["source"], ("system",))
        Y = self.read(obj["target"], ("system",))
        idx = _ints(obj["index_map"], "index map")
        dom, cod = (X.index, Y.index) if X.variance == DIRECT else (Y.index, X.index)
        f = OrderMap(dom, cod, tuple(idx))
        comps = []
        for k, m in enumerate(obj["components"]):
            if k >= dom.size:
                raise FormatError("too many components")
            a, b = (k, f(k)) if X.variance == DIRECT else (f(k), k)
            comps.append(GroupHom(X.objects[a], Y.objects[b], _matrix_in(m)))
        try:
            return SystemMorphism(X, Y, f, tuple(comps))
        except SystemCheckError as e:
            raise FormatError(str(e)) from e

    def complex(self, obj) -> SimplicialComplex:
        simplices = obj.get("simplices", [])
        if not isinstance(simplices, list) or not all(isinstance(s, list) and s for s in simplices):
            raise FormatError("simplices must be nonempty vertex lists")
        for s in simplices:
            for v in s:
                if isinstance(v, (bool, float)) or not isinstance(v, (int, str)):
                    raise FormatError(f"vertex labels are integers or strings, got {v!r}")
        return SimplicialComplex.from_simplices(simplices)

    def pair(self, obj) -> SimplicialPair:
        return SimplicialPair(self.read(obj["total"], ("complex",)), self.read(obj["sub"], ("complex",)))

    def model(self, obj):
        from .shapefunctors import ModelError, build_filtered_model

        total = self.read(obj["total"], ("complex", "pair"))
        family = [self.read(m, ("complex", "pair")) for m in obj["family"]]
        try:
            return build_filtered_model(total, family)
        except ModelError as e:
            raise FormatError(f"invalid model: {e}") from e

    def map(self, obj) -> SimplicialMap:
        X = self.read(obj["source"], ("complex", "pair"))
        Y = self.read(obj["target"], ("complex", "pair"))
        items = obj["vertex_map"]
        if not all(isinstance(p, list) and len(p) == 2 for p in items):
            raise FormatError("vertex_map is a list of [vertex, image] pairs")
        return SimplicialMap.from_dict(X, Y, {v: w for v, w in items})

    def sequence(self, obj) -> ExactSequence:
        groups = [self.read(g, ("group",)) for g in obj["groups"]]
        mats = [_matrix_in(m) for m in obj["maps"]]
        if len(mats) != len(groups) - 1:
            raise FormatError("a sequence of k+1 groups needs k maps")
        maps = tuple(GroupHom(groups[i], groups[i + 1], m) for i, m in enumerate(mats))
        labels = tuple(str(x) for x in obj.get("labels", ()))
        if labels and len(labels) != len(groups):
            raise FormatError("one label per group")
        return ExactSequence(tuple(groups), maps, labels)

    def excision(self, obj) -> dict:
        M = self.read(obj["model"], ("model",))
        remove = obj.get("remove", [])
        if not all(isinstance(s, list) and s for s in remove):
            raise FormatError("remove is a list of simplices")
        return {"kind": "excision", "model": M, "remove": [tuple(s) for s in remove], "strict": bool(obj.get("strict", True))}

    def naturality(self, obj) -> dict:
        return {
            "kind": "naturality",
            "map": self.read(obj["map"], ("map",)),
            "source_model": self.read(obj["source_model"], ("model",)),
            "target_model": self.read(obj["target_model"], ("model",)),
        }

    def equivalence(self, obj) -> dict:
        mode = obj.get("mode", "similar")
        if mode not in ("similar", "inverse"):
            raise FormatError("mode is 'similar' or 'inverse'")
        return {"kind": "equivalence", "mode": mode, "F": self.read(obj["F"], ("morphism",)), "G": self.read(obj["G"], ("morphism",))}

    def cofinality(self, obj) -> dict:
        S = self.read(obj["system"], ("system",))
        sub = _ints(obj["subset"], "subset") if "subset" in obj else None
        return {"kind": "cofinality", "system": S, "subset": sub}

    def workspace(self, obj) -> "Workspace":
        bindings = obj.get("bindings")
        if not isinstance(bindings, dict):
            raise FormatError("workspace needs a 'bindings' object")
        return Workspace(Reader(bindings))


class Workspace:
    """Named artifacts; references are resolved lazily and checked for cycles."""

    def __init__(self, reader: Reader):
        self.reader = reader

    def names(self) -> list[str]:
        return sorted(self.reader.raw)

    def __getitem__(self, name: str):
        return self.reader.resolve(name)

    def resolve_all(self) -> dict:
        return {n: self[n] for n in self.names()}


_DECODERS: dict[str, Callable[[Reader, dict], Any]] = {
    "group": Reader.group,
    "hom": Reader.hom,
    "poset": Reader.poset,
    "system": Reader.system,
    "morphism": Reader.morphism,
    "complex": Reader.complex,
    "pair": Reader.pair,
    "model": Reader.model,
    "map": Reader.map,
    "sequence": Reader.sequence,
    "excision": Reader.excision,
    "naturality": Reader.naturality,
    "equivalence": Reader.equivalence,
    "cofinality": Reader.cofinality,
    "workspace": Reader.workspace,
}


def kind_of(value: Any) -> str:
    if isinstance(value, dict) and "kind" in value:
        return value["kind"]
    if isinstance(value, Workspace):
        return "workspace"
    try:
        return to_json(value)["kind"]
    except TypeError:
        return type(value).__name__


def loads(text: str) -> Any:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from e
    return Reader().read(obj)


def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from e
    return loads(text)
