"""Command line front end: validate manifests and answer group queries.

Commands:
    conj validate <manifest>
    conj decide <manifest> -u <word> -v <word> [--verify] [--verify-radius N] [--json]
    conj sub <manifest> word <word> [--json]
    conj sub <manifest> parallel <vertex> <k> <word> [--json]
    conj sub <manifest> cosets <vertex> <k1> <k2> <u> <v> [--json]
    conj sub <manifest> reduce <word> [--json]

Exit codes: 0 success, 1 domain error, 2 usage or parse error.  Set
CONJ_LOG=debug (or info) for diagnostics on stderr.
"""

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional

from .graph import (
    brute_graph_conjugator,
    decide_conjugacy,
    gog_word_problem,
    label_word,
    reduced_form_of,
)
from .manifest import Manifest, ManifestError, load_manifest
from .sol import double_klein_conjugacy, torus_bundle_conjugacy
from .solution_sets import CosetSolutionSet, ParallelismSet
from .words import Word, format_word, free_reduce, parse_word

log = logging.getLogger("conj")


@dataclass
class QueryResult:
    """One query answer; serializes with a fixed key order."""

    verdict: str                      # true | false | false-radius-conditional
    witness: Optional[str] = None
    certificate: str = ""
    path: List[str] = field(default_factory=list)
    solution_set: List[str] = field(default_factory=list)
    time_ms: int = 0

    def lines(self) -> List[str]:
        out = [f"verdict: {self.verdict}"]
        if self.witness is not None:
            out.append(f"witness: {self.witness}")
        if self.certificate:
            out.append(f"certificate: {self.certificate}")
        if self.path:
            out.append("path: " + " ".join(self.path))
        out.extend(self.solution_set)
        return out

    def data(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "certificate": self.certificate or None,
            "path": self.path,
            "solution_set": self.solution_set,
        }


def _emit(res: QueryResult, as_json: bool) -> None:
    if as_json:
        print(json.dumps(res.data(), indent=2))
    else:
        print("\n".join(res.lines()))
    log.info("query answered in %d ms", res.time_ms)


def _parse_query_word(text: str, m: Manifest) -> Word:
    return parse_word(text, m.alphabet())


def _render_path(path) -> List[str]:
    return [eid if sign == 1 else f"{eid}^-1" for eid, sign in path]


# --- sol element folding -----------------------------------------------------

def _fold_torus(w: Word, G) -> tuple:
    elt = G.identity()
    table = {"x": ((1, 0), 0), "y": ((0, 1), 0), "t": ((0, 0), 1)}
    for g, s in w:
        step = table[g.name]
        elt = G.mul(elt, step if s == 1 else G.inv(step))
    return elt


def _render_torus(elt) -> str:
    (c1, c2), k = elt
    parts = []
    for name, e in (("x", c1), ("y", c2), ("t", k)):
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    return " ".join(parts) if parts else ""


def _fold_klein(w: Word, G) -> tuple:
    elt = G.identity()
    table = {"a1": (1, 1, 0), "b1": (1, 0, 1), "a2": (2, 1, 0), "b2": (2, 0, 1)}
    for g, s in w:
        i, n, m = table[g.name]
        elt = G.mul(elt, G.factor_element(i, s * n, s * m))
    return elt


def _render_klein(elt, G) -> str:
    letters, h = elt
    parts = [f"a{i}" for i in letters]
    s, m = h
    if s:
        parts.append(f"a1^{2 * s}")
    if m:
        parts.append("b1" if m == 1 else f"b1^{m}")
    return " ".join(parts)


# --- commands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    m = load_manifest(args.manifest)
    if m.graph is None:
        print(f"valid sol manifest: {m.sol_case}")
        return 0
    # loading an invalid graph raises ValueError before we get here
    nv, ne = len(m.graph.vertices), len(m.graph.edges)
    print(f"valid graph of groups: {nv} pieces, {ne} edges")
    return 0


def _decide_graph(args, m: Manifest) -> QueryResult:
    u = _parse_query_word(args.u, m)
    v = _parse_query_word(args.v, m)
    t0 = time.monotonic()
    ans = decide_conjugacy(u, v, m.graph)
    ms = int((time.monotonic() - t0) * 1000)
    if ans.conjugate:
        if args.verify:
            rel = free_reduce(ans.witness * v * ~ans.witness * ~u)
            if not gog_word_problem(rel, m.graph):
                raise AssertionError("witness failed verification")
            log.info("witness verified by the word problem")
        return QueryResult("true", format_word(ans.witness) or "1", ans.certificate,
                           _render_path(ans.path), time_ms=ms)
    verdict = "false" if ans.exact else "false-radius-conditional"
    if args.verify:
        g = brute_graph_conjugator(u, v, m.graph, args.verify_radius)
        if g is not None:
            raise AssertionError(
                f"negative contradicted by brute force conjugator {format_word(g)}")
        log.info("negative cross-checked by brute force at radius %d",
                 args.verify_radius)
    return QueryResult(verdict, None, ans.certificate, _render_path(ans.path),
                       time_ms=ms)


def _decide_sol(args, m: Manifest) -> QueryResult:
    u = _parse_query_word(args.u, m)
    v = _parse_query_word(args.v, m)
    G = m.sol_group
    t0 = time.monotonic()
    if m.sol_case == "torus-bundle":
        eu, ev = _fold_torus(u, G), _fold_torus(v, G)
        w = torus_bundle_conjugacy(ev, eu, G)  # witness maps v onto u
        witness = None if w is None else _render_torus(w)
    else:
        eu, ev = _fold_klein(u, G), _fold_klein(v, G)
        w = double_klein_conjugacy(ev, eu, G)
        witness = None if w is None else _render_klein(w, G)
    ms = int((time.monotonic() - t0) * 1000)
    if w is None:
        return QueryResult("false", None, "exact-negative", time_ms=ms)
    return QueryResult("true", witness or "1", m.sol_case, time_ms=ms)


def cmd_decide(args) -> int:
    m = load_manifest(args.manifest)
    res = _decide_graph(args, m) if m.graph is not None else _decide_sol(args, m)
    _emit(res, args.json)
    return 0


def _parallelism_lines(s: ParallelismSet) -> List[str]:
    out = ["set: parallelism", f"exact: {str(s.exact).lower()}"]
    for (a, b), g in s.elements:
        out.append(f"element: ({a}, {b}) witness {format_word(g) or '1'}")
    if s.is_empty():
        out.append("empty: true")
    return out


def _cosets_lines(s: CosetSolutionSet) -> List[str]:
    out = ["set: cosets", f"kind: {s.kind}", f"exact: {str(s.exact).lower()}"]
    if s.base is not None:
        out.append(f"base: {format_word(s.base[0]) or '1'} | "
                   f"{format_word(s.base[1]) or '1'}")
    if s.step is not None:
        out.append(f"step: {format_word(s.step[0]) or '1'} | "
                   f"{format_word(s.step[1]) or '1'}")
        out.append(f"eps: {s.eps}")
    if s.basis is not None:
        out.append(f"basis: {format_word(s.basis[0]) or '1'} | "
                   f"{format_word(s.basis[1]) or '1'}")
    return out


def cmd_sub(args) -> int:
    m = load_manifest(args.manifest)
    if m.graph is None:
        raise ValueError("subproblem queries need a graph-of-groups manifest")
    G = m.graph
    t0 = time.monotonic()
    if args.query == "word":
        w = _parse_query_word(args.words[0], m)
        res = QueryResult("true" if gog_word_problem(w, G) else "false")
    elif args.query == "reduce":
        w = _parse_query_word(args.words[0], m)
        f, conj = reduced_form_of(w, G)
        res = QueryResult("true", certificate="reduced",
                          solution_set=[
                              f"reduced: {format_word(label_word(G, f)) or '1'}",
                              f"steps: {len(f.steps)}",
                              f"conjugator: {format_word(conj) or '1'}"])
    else:
        if args.vertex not in G.vertices:
            raise ValueError(f"unknown vertex {args.vertex!r}")
        vtx = G.vertices[args.vertex]
        if args.query == "parallel":
            w = _parse_query_word(args.words[0], m)
            s = vtx.boundary_parallelism(w, args.k1)
            res = QueryResult("false" if s.is_empty() else "true",
                              solution_set=_parallelism_lines(s))
            if s.is_empty() and not s.exact:
                res.verdict = "false-radius-conditional"
        else:
            u = _parse_query_word(args.words[0], m)
            v = _parse_query_word(args.words[1], m)
            s = vtx.two_cosets(u, v, args.k1, args.k2)
            res = QueryResult("false" if s.is_empty() else "true",
                              solution_set=_cosets_lines(s))
            if s.is_empty() and not s.exact:
                res.verdict = "false-radius-conditional"
    res.time_ms = int((time.monotonic() - t0) * 1000)
    _emit(res, args.json)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="conj",
        description="conjugacy queries in graph-manifold fundamental groups")
    subs = p.add_subparsers(dest="command", required=True)

    pv = subs.add_parser("validate", help="check a manifest file")
    pv.add_argument("manifest")
    pv.set_defaults(run=cmd_validate)

    pd = subs.add_parser("decide", help="decide conjugacy of two words")
    pd.add_argument("manifest")
    pd.add_argument("-u", required=True, help="first word")
    pd.add_argument("-v", required=True, help="second word")
    pd.add_argument("--verify", action="store_true",
                    help="re-check the answer independently")
    pd.add_argument("--verify-radius", type=int, default=3)
    pd.add_argument("--json", action="store_true")
    pd.set_defaults(run=cmd_decide)

    ps = subs.add_parser("sub", help="run a piece-level subproblem")
    ps.add_argument("manifest")
    ps.add_argument("query", choices=["word", "parallel", "cosets", "reduce"])
    ps.add_argument("args", nargs="*")
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(run=cmd_sub)
    return p


def _normalize_sub_args(args) -> None:
    """Split positional subproblem arguments into vertex/boundary/words."""
    rest = args.args
    args.vertex = None
    args.k1 = args.k2 = 1
    if args.query in ("word", "reduce"):
        if len(rest) != 1:
            raise ManifestError(f"{args.query} takes exactly one word")
        args.words = rest
    elif args.query == "parallel":
        if len(rest) != 3:
            raise ManifestError("parallel takes: vertex k word")
        args.vertex, k, word = rest
        args.k1 = _as_index(k)
        args.words = [word]
    else:
        if len(rest) != 5:
            raise ManifestError("cosets takes: vertex k1 k2 u v")
        args.vertex, k1, k2, u, v = rest
        args.k1, args.k2 = _as_index(k1), _as_index(k2)
        args.words = [u, v]


def _as_index(text: str) -> int:
    # accept both "1" and "T1"
    digits = text[1:] if text[:1] in ("T", "t") and text[1:] else text
    try:
        return int(digits)
    except ValueError:
        raise ManifestError(f"boundary index must be an integer, got {text!r}")


def main(argv=None) -> int:
    level = os.environ.get("CONJ_LOG", "").upper()
    logging.basicConfig(
        stream=sys.stderr, format="conj: %(message)s",
        level=level if level in ("DEBUG", "INFO", "WARNING", "ERROR") else "WARNING")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "sub":
            _normalize_sub_args(args)
        return args.run(args)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        # word grammar problems are usage errors, not domain errors
        usage = ("unknown generator" in msg or "malformed" in msg
                 or "empty word" in msg)
        return 2 if usage else 1
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0


if __name__ == "__main__":
    sys.exit(main())
