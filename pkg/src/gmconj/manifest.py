"""Manifest files describing a manifold group for the command line tool.

A manifest is a TOML document.  Either it lists pieces and edges of a
graph of groups:

    format = 1

    [[piece]]
    id = "v1"
    kind = "seifert"            # or "klein" or "hyperbolic"
    orientable_base = true
    genus = 0
    boundaries = 1
    b = 0
    exceptional = [[2, 1], [3, 1]]

    [[edge]]
    id = "e1"
    origin = ["v1", 1]          # vertex id, boundary index
    end = ["v2", 1]
    matrix = [[0, 1], [1, 0]]   # rows of the gluing matrix

or it names one of the two special torus-glued cases:

    [sol]
    case = "torus-bundle"       # or "double-klein"
    monodromy = [[2, 1], [1, 1]]

Hyperbolic pieces carry an exact matrix representation over
Z[t]/(modulus): `modulus` lists coefficients low to high, `matrices.<gen>`
gives 2x2 entries as coefficient lists, `boundary` tables list basis word
pairs, and `k_norm` (a fraction string), `c_bcp`, `r_conj` bound the
searches.  Generators of a piece are written "<piece id>.<name>" in words;
stable letters are "t_<edge id>".
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .graph import Edge, GraphOfGroups, HyperbolicVertex, KleinVertex, SeifertVertex
from .hyperbolic import BoundaryTorus, MatrixRep, PolyRing, SearchConstants
from .seifert import SeifertPiece
from .sol import DoubleKleinGroup, TorusBundleGroup
from .words import GeneratorId, Word, parse_word


class ManifestError(Exception):
    """The document cannot be parsed as a manifest (usage error)."""


@dataclass
class Manifest:
    """A parsed manifest: a graph of groups or one of the sol cases."""
    graph: Optional[GraphOfGroups] = None
    sol_case: Optional[str] = None
    sol_group: object = None

    def alphabet(self) -> List[GeneratorId]:
        if self.graph is not None:
            gens: List[GeneratorId] = []
            for vid in sorted(self.graph.vertices):
                gens.extend(self.graph.vertices[vid].generators())
            for eid in sorted(self.graph.edges):
                gens.append(self.graph.edges[eid].stable_letter())
            return gens
        if self.sol_case == "torus-bundle":
            return [GeneratorId("", n) for n in ("x", "y", "t")]
        return [GeneratorId("", n) for n in ("a1", "b1", "a2", "b2")]


def _need(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ManifestError(f"{where}: missing key {key!r}")
    val = table[key]
    if kind is int and isinstance(val, bool):
        raise ManifestError(f"{where}: key {key!r} must be an integer")
    if not isinstance(val, kind):
        raise ManifestError(f"{where}: key {key!r} has the wrong type")
    return val


def _int_matrix(rows, where: str) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    if (not isinstance(rows, list) or len(rows) != 2
            or any(not isinstance(r, list) or len(r) != 2 for r in rows)
            or any(not isinstance(x, int) or isinstance(x, bool)
                   for r in rows for x in r)):
        raise ManifestError(f"{where}: expected a 2x2 integer matrix")
    return ((rows[0][0], rows[0][1]), (rows[1][0], rows[1][1]))


def _poly(entry, ring: PolyRing, where: str):
    if not isinstance(entry, list) or any(
            not isinstance(c, int) or isinstance(c, bool) for c in entry):
        raise ManifestError(f"{where}: polynomial entries are integer lists")
    return ring.reduce(tuple(entry))


def _seifert_vertex(tab: dict, vid: str) -> SeifertVertex:
    where = f"piece {vid}"
    exc = tab.get("exceptional", [])
    if (not isinstance(exc, list)
            or any(not isinstance(p, list) or len(p) != 2 for p in exc)):
        raise ManifestError(f"{where}: exceptional fibers are [alpha, beta] pairs")
    piece = SeifertPiece(
        _need(tab, "orientable_base", bool, where),
        _need(tab, "genus", int, where),
        _need(tab, "boundaries", int, where),
        _need(tab, "b", int, where),
        tuple((int(a), int(b)) for a, b in exc))
    return SeifertVertex(vid, piece)


def _hyperbolic_vertex(tab: dict, vid: str) -> HyperbolicVertex:
    where = f"piece {vid}"
    ring = PolyRing(tuple(_need(tab, "modulus", list, where)))
    mats = _need(tab, "matrices", dict, where)
    matrices = {}
    for name in sorted(mats):
        rows = mats[name]
        if not isinstance(rows, list) or len(rows) != 2 or any(
                not isinstance(r, list) or len(r) != 2 for r in rows):
            raise ManifestError(f"{where}: matrix {name!r} must be 2x2")
        matrices[GeneratorId(vid, name)] = tuple(
            _poly(rows[i][j], ring, where) for i in range(2) for j in range(2))
    rep = MatrixRep(ring, matrices)
    alphabet = list(matrices)

    def parse(text: str) -> Word:
        return parse_word(text, alphabet)

    tori = []
    for i, bt in enumerate(_need(tab, "boundary", list, where)):
        if not isinstance(bt, dict):
            raise ManifestError(f"{where}: boundary entries are tables")
        basis = _need(bt, "basis", list, f"{where} boundary {i + 1}")
        if len(basis) != 2:
            raise ManifestError(f"{where} boundary {i + 1}: basis needs two words")
        tori.append(BoundaryTorus((parse(basis[0]), parse(basis[1]))))
    try:
        consts = SearchConstants(Fraction(str(tab.get("k_norm", "1"))),
                                 int(tab.get("c_bcp", 1)),
                                 int(tab.get("r_conj", 3)))
    except (ValueError, ZeroDivisionError) as exc:
        raise ManifestError(f"{where}: bad search constants ({exc})")
    relators = tuple(parse(r) for r in tab.get("relators", []))
    return HyperbolicVertex(vid, rep, tori, consts, relators)


def _build_graph(doc: dict) -> GraphOfGroups:
    vertices = []
    seen = set()
    for tab in doc.get("piece", []):
        if not isinstance(tab, dict):
            raise ManifestError("piece entries must be tables")
        vid = _need(tab, "id", str, "piece")
        if vid in seen:
            raise ManifestError(f"duplicate piece id {vid!r}")
        seen.add(vid)
        kind = _need(tab, "kind", str, f"piece {vid}")
        if kind == "seifert":
            vertices.append(_seifert_vertex(tab, vid))
        elif kind == "klein":
            vertices.append(KleinVertex(vid))
        elif kind == "hyperbolic":
            vertices.append(_hyperbolic_vertex(tab, vid))
        else:
            raise ManifestError(f"piece {vid}: unknown kind {kind!r}")
    edges = []
    eseen = set()
    for tab in doc.get("edge", []):
        if not isinstance(tab, dict):
            raise ManifestError("edge entries must be tables")
        eid = _need(tab, "id", str, "edge")
        if eid in eseen:
            raise ManifestError(f"duplicate edge id {eid!r}")
        eseen.add(eid)

        def end(key):
            val = _need(tab, key, list, f"edge {eid}")
            if len(val) != 2 or not isinstance(val[0], str) or not isinstance(val[1], int):
                raise ManifestError(f"edge {eid}: {key} is [vertex id, boundary index]")
            return (val[0], val[1])

        edges.append(Edge(eid, end("origin"), end("end"),
                          _int_matrix(_need(tab, "matrix", list, f"edge {eid}"), f"edge {eid}")))
    return GraphOfGroups(vertices, edges)


def _build_sol(tab: dict) -> Tuple[str, object]:
    case = _need(tab, "case", str, "sol")
    if case == "torus-bundle":
        return case, TorusBundleGroup(_int_matrix(
            _need(tab, "monodromy", list, "sol"), "sol monodromy"))
    if case == "double-klein":
        return case, DoubleKleinGroup(_int_matrix(
            _need(tab, "gluing", list, "sol"), "sol gluing"))
    raise ManifestError(f"sol: unknown case {case!r}")


def parse_manifest(text: str) -> Manifest:
    """Parse and build a manifest; ManifestError means a malformed document,
    ValueError a well-formed document describing an invalid group."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"not a TOML document: {exc}")
    if not isinstance(doc.get("format"), int) or doc["format"] != 1:
        raise ManifestError("manifest must declare format = 1")
    has_sol = "sol" in doc
    has_graph = bool(doc.get("piece") or doc.get("edge"))
    if has_sol == has_graph:
        raise ManifestError("manifest needs either pieces/edges or a [sol] block")
    if has_sol:
        case, group = _build_sol(_need(doc, "sol", dict, "manifest"))
        return Manifest(sol_case=case, sol_group=group)
    return Manifest(graph=_build_graph(doc))


def load_manifest(path: str) -> Manifest:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ManifestError(f"cannot read {path}: {exc.strerror}")
    return parse_manifest(text)
