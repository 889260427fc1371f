"""Graph-of-groups engine for graph-manifold fundamental groups.

A graph of groups has Seifert, Klein-bottle-bundle, or hyperbolic vertex
pieces and Z^2 edge groups.  Edge coordinates are the origin-side boundary
basis: the minus inclusion is the identity and the plus inclusion is the
gluing matrix A_e into the end-side basis.  The stable-letter relator is
t_e * plus(c) * t_e^-1 = minus(c); reading a word left to right, t_e moves
from the origin vertex to the end vertex.  Tree stable letters are trivial
in the group but must be spelled in input words.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import free_product as fp
from . import klein as kl
from .hyperbolic import (
    BoundaryTorus,
    MatrixRep,
    SearchConstants,
    check_boundary,
    hyp_boundary_membership,
    hyp_boundary_parallelism,
    hyp_conjugacy,
    hyp_two_cosets,
    mat_neg,
)
from .intlin import solve_int_linear
from .seifert import SeifertContext, SeifertPiece, excluded_piece_reason
from .solution_sets import CosetSolutionSet, ParallelismSet
from .words import GeneratorId, Presentation, Word, free_reduce, make_presentation, word as make_word

Coords = Tuple[int, int]
IntMat = Tuple[Tuple[int, int], Tuple[int, int]]


def mat_det(A: IntMat) -> int:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def mat_vec(A: IntMat, v: Coords) -> Coords:
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def mat_inv(A: IntMat) -> IntMat:
    d = mat_det(A)
    if d not in (1, -1):
        raise ValueError("gluing matrix must have determinant +1 or -1")
    return ((d * A[1][1], -d * A[0][1]), (-d * A[1][0], d * A[0][0]))


def _parallel(v1: Coords, v2: Coords) -> bool:
    return v1[0] * v2[1] - v1[1] * v2[0] == 0


# --- vertex adapters ---------------------------------------------------------

class SeifertVertex:
    """A Seifert piece as a graph vertex; boundary k has basis (d_k, h)."""

    kind = "seifert"

    def __init__(self, vid: str, piece: SeifertPiece):
        reason = excluded_piece_reason(piece)
        if reason is not None:
            raise ValueError(f"vertex {vid}: excluded piece ({reason})")
        self.id = vid
        self.ctx = SeifertContext(piece, namespace=vid)
        self.num_boundaries = piece.boundaries

    def generators(self):
        return self.ctx.generators()

    def relators(self):
        return self.ctx.presentation().relators

    def word_problem(self, w: Word) -> bool:
        return self.ctx.word_problem(w)

    def boundary_membership(self, w: Word, k: int) -> Optional[Coords]:
        m = self.ctx.boundary_membership(w, k)
        return None if m is None else (m.alpha, m.beta)

    def boundary_word(self, k: int, alpha: int, beta: int) -> Word:
        return self.ctx.boundary_word(k, alpha, beta)

    def boundary_parallelism(self, w: Word, k: int) -> ParallelismSet:
        return self.ctx.boundary_parallelism(w, k)

    def two_cosets(self, u: Word, v: Word, k1: int, k2: int) -> CosetSolutionSet:
        return self.ctx.two_cosets(u, v, k1, k2)

    def conjugacy(self, u: Word, v: Word) -> Tuple[Optional[Word], bool]:
        return self.ctx.conjugacy(u, v), True

    def fiber_slopes(self) -> List[Coords]:
        return [(0, 1)]

    def element_key(self, w: Word):
        x = self.ctx.normalize(w)
        return (x.quotient.syllables, x.fiber)

    def normal_word(self, w: Word) -> Word:
        return self.ctx.to_word(self.ctx.normalize(w))

    def coset_split(self, w: Word, k: int) -> Tuple[tuple, Coords]:
        """w = r * b with b in boundary k; returns (key(r), coords of b)."""
        C = self.ctx
        db = C.dbar(k)
        dinv = fp.nf_inv(C.quotient_group, db)
        q = C.normalize(w).quotient
        while True:
            q2 = fp.nf_mul(C.quotient_group, q, dinv)
            if fp.syl_len(q2) < fp.syl_len(q):
                q = q2
                continue
            q2 = fp.nf_mul(C.quotient_group, q, db)
            if fp.syl_len(q2) < fp.syl_len(q):
                q = q2
                continue
            break
        r = C.lift(q)
        b = C.boundary_membership(free_reduce(~r * w), k)
        if b is None:
            raise AssertionError("coset split left a non-boundary remainder")
        return q.syllables, (b.alpha, b.beta)


class KleinVertex:
    """Twisted I-bundle over the Klein bottle; one boundary with basis (a^2, b)."""

    kind = "klein"
    num_boundaries = 1

    def __init__(self, vid: str):
        self.id = vid
        self.a, self.b = kl.klein_gens(vid)

    def generators(self):
        return [self.a, self.b]

    def relators(self):
        a, b = make_word((self.a, 1)), make_word((self.b, 1))
        return (free_reduce(a * b * ~a * b),)

    def _nf(self, w: Word) -> kl.KleinNF:
        return kl.klein_normalize(w, self.id)

    def word_problem(self, w: Word) -> bool:
        x = self._nf(w)
        return x.n == 0 and x.m == 0

    def boundary_membership(self, w: Word, k: int) -> Optional[Coords]:
        return kl.klein_boundary_membership(self._nf(w))

    def boundary_word(self, k: int, alpha: int, beta: int) -> Word:
        return kl.klein_word(kl.KleinNF(2 * alpha, beta), self.id)

    def boundary_parallelism(self, w: Word, k: int) -> ParallelismSet:
        return kl.klein_boundary_parallelism(self._nf(w), self.id)

    def two_cosets(self, u: Word, v: Word, k1: int, k2: int) -> CosetSolutionSet:
        return kl.klein_two_cosets(self._nf(u), self._nf(v), self.id)

    def conjugacy(self, u: Word, v: Word) -> Tuple[Optional[Word], bool]:
        g = kl.klein_conjugacy(self._nf(u), self._nf(v))
        return (None if g is None else kl.klein_word(g, self.id)), True

    def fiber_slopes(self) -> List[Coords]:
        # both Seifert fibrations of the piece: <a^2> and <b>
        return [(1, 0), (0, 1)]

    def element_key(self, w: Word):
        x = self._nf(w)
        return (x.n, x.m)

    def normal_word(self, w: Word) -> Word:
        return kl.klein_word(self._nf(w), self.id)

    def coset_split(self, w: Word, k: int) -> Tuple[tuple, Coords]:
        x = self._nf(w)
        r = kl.KleinNF(x.n % 2, 0)
        b = ~r * x
        return (r.n,), (b.n // 2, b.m)


class HyperbolicVertex:
    """A hyperbolic piece backed by an exact matrix representation."""

    kind = "hyperbolic"

    def __init__(self, vid: str, rep: MatrixRep, boundaries: Sequence[BoundaryTorus],
                 consts: SearchConstants, relator_words: Sequence[Word] = ()):
        if not boundaries:
            raise ValueError(f"vertex {vid}: need at least one boundary torus")
        self.id = vid
        self.rep = rep
        self.tori = list(boundaries)
        self.consts = consts
        self._relators = tuple(relator_words)
        if not rep.check_relators(self._relators):
            raise ValueError(f"vertex {vid}: a relator does not map to +-identity")
        for T in self.tori:
            check_boundary(rep, T)
        self.num_boundaries = len(self.tori)

    def generators(self):
        return self.rep.alphabet()

    def relators(self):
        return self._relators

    def word_problem(self, w: Word) -> bool:
        return self.rep.is_identity(self.rep.matrix(w))

    def _torus(self, k: int) -> BoundaryTorus:
        if not 1 <= k <= self.num_boundaries:
            raise ValueError(f"bad boundary index {k}")
        return self.tori[k - 1]

    def boundary_membership(self, w: Word, k: int) -> Optional[Coords]:
        return hyp_boundary_membership(w, self.rep, self._torus(k))

    def boundary_word(self, k: int, alpha: int, beta: int) -> Word:
        T = self._torus(k)
        return free_reduce(T.basis[0] ** alpha * T.basis[1] ** beta)

    def boundary_parallelism(self, w: Word, k: int) -> ParallelismSet:
        return hyp_boundary_parallelism(w, self.rep, self._torus(k), self.consts)

    def two_cosets(self, u: Word, v: Word, k1: int, k2: int) -> CosetSolutionSet:
        return hyp_two_cosets(u, v, self.rep, self._torus(k1), self._torus(k2),
                              self.consts)

    def conjugacy(self, u: Word, v: Word) -> Tuple[Optional[Word], bool]:
        ans = hyp_conjugacy(u, v, self.rep, self.consts)
        return ans.witness, ans.exact

    def fiber_slopes(self) -> List[Coords]:
        return []

    def element_key(self, w: Word):
        M = self.rep.matrix(w)
        if self.rep.projective:
            M = min(M, mat_neg(self.rep.ring, M))
        return M

    def normal_word(self, w: Word) -> Word:
        return free_reduce(w)

    def coset_split(self, w: Word, k: int):
        raise NotImplementedError("no canonical coset representatives for "
                                  "hyperbolic vertices")


# --- graph data --------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    origin: Tuple[str, int]   # (vertex id, boundary index)
    end: Tuple[str, int]
    matrix: IntMat            # origin-basis coords -> end-basis coords

    def stable_letter(self) -> GeneratorId:
        return GeneratorId("", f"t_{self.id}")


class GraphOfGroups:
    def __init__(self, vertices: Sequence, edges: Sequence[Edge], check: bool = True):
        self.vertices: Dict[str, object] = {}
        for v in vertices:
            if v.id in self.vertices:
                raise ValueError(f"duplicate vertex id {v.id}")
            self.vertices[v.id] = v
        self.edges: Dict[str, Edge] = {}
        for e in edges:
            if e.id in self.edges:
                raise ValueError(f"duplicate edge id {e.id}")
            self.edges[e.id] = e
        if check:
            report = validate_graph(self)
            if report:
                raise ValueError("invalid graph of groups: " + "; ".join(report))
        self.tree_edges = self._maximal_tree()
        self._gen_vertex: Dict[GeneratorId, str] = {}
        for v in self.vertices.values():
            for g in v.generators():
                self._gen_vertex[g] = v.id
        self._stable: Dict[GeneratorId, str] = {
            e.stable_letter(): e.id for e in self.edges.values()
        }

    def _maximal_tree(self):
        order = sorted(self.vertices)
        if not order:
            return frozenset()
        tree = set()
        seen = {order[0]}
        frontier = [order[0]]
        while frontier:
            cur = frontier.pop(0)
            for eid in sorted(self.edges):
                e = self.edges[eid]
                for here, there in ((e.origin[0], e.end[0]), (e.end[0], e.origin[0])):
                    if here == cur and there not in seen:
                        seen.add(there)
                        tree.add(eid)
                        frontier.append(there)
        return frozenset(tree)

    def vertex(self, vid: str):
        return self.vertices[vid]

    def supports_canonical_form(self) -> bool:
        return all(v.kind != "hyperbolic" for v in self.vertices.values())


def validate_graph(G: GraphOfGroups) -> List[str]:
    """All structural invariants; returns the list of violations."""
    errors: List[str] = []
    used = {}
    for e in G.edges.values():
        if mat_det(e.matrix) not in (1, -1):
            errors.append(f"edge {e.id}: determinant must be +1 or -1")
        ends = []
        for side, (vid, k) in (("origin", e.origin), ("end", e.end)):
            if vid not in G.vertices:
                errors.append(f"edge {e.id}: unknown {side} vertex {vid}")
                continue
            v = G.vertices[vid]
            if not 1 <= k <= v.num_boundaries:
                errors.append(f"edge {e.id}: dangling boundary index {k} on {vid}")
                continue
            if (vid, k) in used:
                errors.append(f"boundary ({vid},{k}) used by edges "
                              f"{used[(vid, k)]} and {e.id}")
            used[(vid, k)] = e.id
            ends.append(v)
        if len(ends) == 2 and mat_det(e.matrix) in (1, -1):
            vo, ve = ends
            A = e.matrix
            for so in vo.fiber_slopes():
                for se in ve.fiber_slopes():
                    if _parallel(mat_vec(A, so), se):
                        errors.append(f"edge {e.id}: gluing identifies fibers "
                                      f"({so} maps onto slope {se})")
    if G.vertices and all(v.kind == "klein" for v in G.vertices.values()):
        errors.append("every vertex is a Klein-bottle bundle: "
                      "the group is a SOL-case, use the sol solvers")
    # connectivity
    if G.vertices:
        seen = set()
        stack = [sorted(G.vertices)[0]]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            for e in G.edges.values():
                if e.origin[0] == cur and e.end[0] in G.vertices:
                    stack.append(e.end[0])
                if e.end[0] == cur and e.origin[0] in G.vertices:
                    stack.append(e.origin[0])
        if seen != set(G.vertices):
            errors.append("graph is not connected")
    return errors


def to_presentation(G: GraphOfGroups) -> Presentation:
    gens: List[GeneratorId] = []
    rels: List[Word] = []
    for vid in sorted(G.vertices):
        v = G.vertices[vid]
        gens.extend(v.generators())
        rels.extend(v.relators())
    for eid in sorted(G.edges):
        e = G.edges[eid]
        gens.append(e.stable_letter())
        t = make_word((e.stable_letter(), 1))
        vo, ve = G.vertices[e.origin[0]], G.vertices[e.end[0]]
        for c in ((1, 0), (0, 1)):
            minus = vo.boundary_word(e.origin[1], *c)
            plus = ve.boundary_word(e.end[1], *mat_vec(e.matrix, c))
            rels.append(free_reduce(t * plus * ~t * ~minus))
        if eid in G.tree_edges:
            rels.append(t)
    return make_presentation(gens, rels)


# --- forms -------------------------------------------------------------------

@dataclass(frozen=True)
class Form:
    """A based loop: label = labels[0] step[0] labels[1] ... step[n-1] labels[n]."""

    base: str
    labels: Tuple[Word, ...]
    steps: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        if len(self.labels) != len(self.steps) + 1:
            raise ValueError("need exactly one more label than steps")

    @property
    def length(self) -> int:
        return len(self.steps)


def _step_vertices(G: GraphOfGroups, step: Tuple[str, int]) -> Tuple[str, str]:
    """(departure, arrival) vertex ids of a signed stable letter."""
    e = G.edges[step[0]]
    if step[1] == 1:
        return e.origin[0], e.end[0]
    return e.end[0], e.origin[0]


def _arrival_boundary(G: GraphOfGroups, step: Tuple[str, int]) -> Tuple[str, int]:
    e = G.edges[step[0]]
    return e.end if step[1] == 1 else e.origin


def _departure_boundary(G: GraphOfGroups, step: Tuple[str, int]) -> Tuple[str, int]:
    e = G.edges[step[0]]
    return e.origin if step[1] == 1 else e.end


def _transport(G: GraphOfGroups, step: Tuple[str, int], coords: Coords) -> Coords:
    """Departure-side boundary coords to arrival-side coords across a step."""
    A = G.edges[step[0]].matrix
    return mat_vec(A, coords) if step[1] == 1 else mat_vec(mat_inv(A), coords)


def label_word(G: GraphOfGroups, f: Form) -> Word:
    out = f.labels[0]
    for i, (eid, s) in enumerate(f.steps):
        out = out * make_word((G.edges[eid].stable_letter(), s)) * f.labels[i + 1]
    return free_reduce(out)


def infer_base(w: Word, G: GraphOfGroups) -> Optional[str]:
    for g, s in w:
        if g in G._gen_vertex:
            return G._gen_vertex[g]
        if g in G._stable:
            return _step_vertices(G, (G._stable[g], s))[0]
    return None


def form_of_word(w: Word, G: GraphOfGroups, base: Optional[str] = None) -> Form:
    if base is None:
        base = infer_base(w, G)
        if base is None:
            base = sorted(G.vertices)[0]
    if base not in G.vertices:
        raise ValueError(f"unknown base vertex {base}")
    cur = base
    labels: List[List] = [[]]
    steps: List[Tuple[str, int]] = []
    for g, s in w:
        if g in G._stable:
            step = (G._stable[g], s)
            dep, arr = _step_vertices(G, step)
            if dep != cur:
                raise ValueError(f"stable letter {g} departs {dep}, not {cur}")
            steps.append(step)
            labels.append([])
            cur = arr
        elif g in G._gen_vertex:
            if G._gen_vertex[g] != cur:
                raise ValueError(f"letter {g} belongs to vertex {G._gen_vertex[g]}, "
                                 f"current vertex is {cur}")
            labels[-1].append((g, s))
        else:
            raise ValueError(f"unknown generator {g}")
    if cur != base:
        raise ValueError(f"word is a path from {base} to {cur}, not a loop")
    return Form(base, tuple(Word(l) for l in labels), tuple(steps))


def britton_reduce(f: Form, G: GraphOfGroups) -> Form:
    """Eliminate pinches t_e x t_e^-1 with x in the edge subgroup image."""
    labels = list(f.labels)
    steps = list(f.steps)
    i = 0
    while i < len(steps) - 1:
        (e1, s1), (e2, s2) = steps[i], steps[i + 1]
        if e1 == e2 and s1 == -s2:
            vid, k = _arrival_boundary(G, steps[i])
            m = G.vertices[vid].boundary_membership(labels[i + 1], k)
            if m is not None:
                back = _transport(G, (e1, -s1), m)
                ovid, ok = _arrival_boundary(G, (e1, -s1))
                repl = G.vertices[ovid].boundary_word(ok, *back)
                labels[i] = free_reduce(labels[i] * repl * labels[i + 2])
                del labels[i + 1:i + 3]
                del steps[i:i + 2]
                i = max(i - 1, 0)
                continue
        i += 1
    return Form(f.base, tuple(labels), tuple(steps))


def gog_word_problem(w: Word, G: GraphOfGroups) -> bool:
    f = britton_reduce(form_of_word(free_reduce(w), G), G)
    if f.length:
        return False
    return G.vertices[f.base].word_problem(f.labels[0])


def cyclically_reduce(f: Form, G: GraphOfGroups) -> Tuple[Form, Word]:
    """Cyclically reduced form plus a conjugator:
    conjugator * label(out) * conjugator^-1 = label(f)."""
    f = britton_reduce(f, G)
    conj = Word()
    while True:
        n = f.length
        if n == 0:
            return f, free_reduce(conj)
        # fold the tail label into the head (a rotation by the tail)
        tail = f.labels[n]
        if len(tail):
            f = Form(f.base, (free_reduce(tail * f.labels[0]),) + f.labels[1:n]
                     + (Word(),), f.steps)
            conj = free_reduce(conj * ~tail)
        (e1, s1), (e2, s2) = f.steps[n - 1], f.steps[0]
        if not (e1 == e2 and s1 == -s2):
            return f, free_reduce(conj)
        vid, k = _arrival_boundary(G, f.steps[n - 1])
        m = G.vertices[vid].boundary_membership(f.labels[0], k)
        if m is None:
            return f, free_reduce(conj)
        # rotate the last step to the front, then pinch it against the first
        prefix = label_word(G, Form(f.base, f.labels[:n - 1] + (Word(),),
                                    f.steps[:n - 1]))
        conj = free_reduce(conj * prefix)
        back = _transport(G, (e1, -s1), m)
        ovid, ok = _arrival_boundary(G, (e1, -s1))
        repl = G.vertices[ovid].boundary_word(ok, *back)
        newbase = _step_vertices(G, f.steps[n - 1])[0]
        # for n = 2 the label after the pinched pair is the merged label itself
        after = f.labels[1] if n > 2 else Word()
        merged = free_reduce(f.labels[n - 1] * repl * after)
        f = Form(newbase, (merged,) + f.labels[2:n - 1] + ((Word(),) if n > 2 else ()),
                 f.steps[1:n - 1])
        f = britton_reduce(f, G)


def reduced_form_of(w: Word, G: GraphOfGroups) -> Tuple[Form, Word]:
    """(cyclically reduced form, g) with g * label(form) * g^-1 = w."""
    return cyclically_reduce(form_of_word(free_reduce(w), G), G)


# --- conjugacy ---------------------------------------------------------------

@dataclass(frozen=True)
class ConjugacyAnswer:
    conjugate: bool
    witness: Optional[Word] = None
    certificate: str = ""      # "i" | "ii" | "iii" | exact-negative |
                               # radius-conditional-negative
    path: Tuple = ()

    @property
    def exact(self) -> bool:
        return self.certificate != "radius-conditional-negative"


def _affine(S: CosetSolutionSet):
    """(Lc, Pc, Ld, Pd): coords of (c, c') as affine maps of the parameters."""
    if S.kind == "singleton":
        return S.left_coords, [], S.right_coords or (0, 0), []
    if S.kind == "line":
        return S.left_coords, [(0, 1)], S.right_coords, [(0, -S.eps)]
    if S.kind == "full_coset":
        return S.left_coords, [(1, 0), (0, 1)], (0, 0), [(-1, 0), (0, -1)]
    if S.kind == "klein_family":
        return S.left_coords, [(1, 0), (0, 1)], (0, 0), [(-1, 0), (0, 1)]
    raise ValueError(f"no affine parametrization for kind {S.kind!r}")


def decide_conjugacy(u: Word, v: Word, G: GraphOfGroups) -> ConjugacyAnswer:
    fu, gu = reduced_form_of(u, G)
    fv, gv = reduced_form_of(v, G)
    if fu.length != fv.length:
        return ConjugacyAnswer(False, certificate="exact-negative")
    if fu.length == 0:
        return _decide_length_zero(u, v, fu, gu, fv, gv, G)
    return _decide_length_positive(u, v, fu, gu, fv, gv, G)


def _decide_length_zero(u, v, fu, gu, fv, gv, G) -> ConjugacyAnswer:
    xu, xv = fu.labels[0], fv.labels[0]
    su, sv = fu.base, fv.base
    tu = G.vertices[su].word_problem(xu)
    tv = G.vertices[sv].word_problem(xv)
    if tu or tv:
        if tu and tv:
            return ConjugacyAnswer(True, free_reduce(gu * ~gv), "i")
        return ConjugacyAnswer(False, certificate="exact-negative")
    all_exact = True
    # states: (vertex, element, back-conjugator w) with w x w^-1 = label(fv)
    start = (sv, xv, Word())
    frontier = [(start, ())]
    seen: Dict[str, List[Word]] = {sv: [xv]}
    depth = 0
    while True:
        for (s, x, wback), path in frontier:
            a0, exact = G.vertices[su].conjugacy(xu, x) if s == su else (None, True)
            if a0 is not None:
                witness = free_reduce(gu * a0 * ~wback * ~gv)
                if not gog_word_problem(free_reduce(witness * v * ~witness * ~u), G):
                    raise AssertionError("conjugacy witness failed verification")
                return ConjugacyAnswer(True, witness, "ii" if path else "i", path)
            if not exact:
                all_exact = False
        if depth == 4:
            break
        nxt = []
        for (s, x, wback), path in frontier:
            for eid in sorted(G.edges):
                e = G.edges[eid]
                for sign, (vid, k) in ((1, e.origin), (-1, e.end)):
                    if vid != s:
                        continue
                    P = G.vertices[s].boundary_parallelism(x, k)
                    if not P.exact:
                        all_exact = False
                    for coords, a in P.elements:
                        # t_e plus(c) t_e^-1 = minus(c): a boundary element on
                        # this side equals t^(+-1) x' t^(-+1) with x' far side
                        if sign == 1:
                            # at origin: minus(c) = t_e plus(c) t_e^-1
                            fcoords = mat_vec(e.matrix, coords)
                            fvid, fk = e.end
                            tword = make_word((e.stable_letter(), 1))
                        else:
                            fcoords = mat_vec(mat_inv(e.matrix), coords)
                            fvid, fk = e.origin
                            tword = make_word((e.stable_letter(), -1))
                        x2 = G.vertices[fvid].boundary_word(fk, *fcoords)
                        w2 = free_reduce(wback * a * tword)
                        dup = False
                        for prev in seen.get(fvid, []):
                            pg, _ = G.vertices[fvid].conjugacy(prev, x2)
                            if pg is not None:
                                dup = True
                                break
                        if dup:
                            continue
                        seen.setdefault(fvid, []).append(x2)
                        nxt.append(((fvid, x2, w2), path + ((eid, sign),)))
        if not nxt:
            break
        frontier = nxt
        depth += 1
    tag = "exact-negative" if all_exact else "radius-conditional-negative"
    return ConjugacyAnswer(False, certificate=tag)


def _rotated(fv: Form, G: GraphOfGroups, r: int) -> Form:
    n = fv.length
    steps = tuple(fv.steps[(r + i) % n] for i in range(n))
    labels = tuple(fv.labels[(r + i) % n] for i in range(n)) + (Word(),)
    base = _step_vertices(G, steps[0])[0]
    return Form(base, labels, steps)


def _decide_length_positive(u, v, fu, gu, fv, gv, G) -> ConjugacyAnswer:
    n = fu.length
    all_exact = True
    for r in range(n):
        fr = _rotated(fv, G, r)
        if fr.steps != fu.steps:
            continue
        prefix = label_word(G, Form(fv.base, fv.labels[:r] + (Word(),), fv.steps[:r]))
        ok, exact, g = _match_rotation(fu, fr, G)
        if not exact:
            all_exact = False
        if not ok:
            continue
        witness = free_reduce(gu * g * ~prefix * ~gv)
        if gog_word_problem(free_reduce(witness * v * ~witness * ~u), G):
            return ConjugacyAnswer(True, witness, "iii")
        all_exact = False  # a consistent system whose candidate failed
    tag = "exact-negative" if all_exact else "radius-conditional-negative"
    return ConjugacyAnswer(False, certificate=tag)


def _match_rotation(fu: Form, fr: Form, G: GraphOfGroups):
    """Solve label(fu) = g * label(fr) * g^-1 with g in the boundary subgroup
    at the base on the arrival side of the last step.

    Position i carries the 2-cosets problem mu_i = c * nu_i * c' at the
    departure vertex of step i; linking c-coords of position i+1 to the
    transported c'-coords of position i gives an integer linear system in
    the solution-set parameters.
    """
    n = fu.length
    sets: List[CosetSolutionSet] = []
    exact = True
    for i in range(n):
        vid = _step_vertices(G, fu.steps[i])[0]
        k_arr = _arrival_boundary(G, fu.steps[i - 1])[1]
        k_dep = _departure_boundary(G, fu.steps[i])[1]
        S = G.vertices[vid].two_cosets(fu.labels[i], fr.labels[i], k_arr, k_dep)
        if S.is_empty():
            return False, S.exact, None
        sets.append(S)
    offsets = []
    total = 0
    params = []
    for S in sets:
        aff = _affine(S)
        params.append(aff)
        offsets.append(total)
        total += len(aff[1])
    rows: List[List[int]] = []
    rhs: List[int] = []
    for i in range(n):
        Ld0, Pd0 = params[i][2], params[i][3]
        j = (i + 1) % n
        Lc1, Pc1 = params[j][0], params[j][1]
        step = fu.steps[i]
        A = G.edges[step[0]].matrix
        T = A if step[1] == 1 else mat_inv(A)
        # c at position j is the inverse of the transported d at position i
        const = mat_vec(T, Ld0)
        for comp in range(2):
            row = [0] * total
            for pi, col in enumerate(Pd0):
                tc = mat_vec(T, col)
                row[offsets[i] + pi] += tc[comp]
            for pi, col in enumerate(Pc1):
                row[offsets[j] + pi] += col[comp]
            rows.append(row)
            rhs.append(-Lc1[comp] - const[comp])
    sol = solve_int_linear(rows, rhs)
    if sol is None:
        return False, exact, None
    # g = c at position 0: arrival side of the last step, at the base vertex
    Lc0, Pc0 = params[0][0], params[0][1]
    coords = list(Lc0)
    for pi, col in enumerate(Pc0):
        coords[0] += sol[offsets[0] + pi] * col[0]
        coords[1] += sol[offsets[0] + pi] * col[1]
    vid, k = _arrival_boundary(G, fu.steps[n - 1])
    g = G.vertices[vid].boundary_word(k, coords[0], coords[1])
    return True, exact, g


# --- bounded brute-force search (testing oracle) -----------------------------

def _label_vertices(G: GraphOfGroups, f: Form) -> List[str]:
    out = [f.base]
    for step in f.steps:
        out.append(_arrival_boundary(G, step)[0])
    return out


def normal_form_word(G: GraphOfGroups, w: Word, base: Optional[str] = None) -> Word:
    """Equivalent loop word with Britton-reduced, piece-normalized labels."""
    f = britton_reduce(form_of_word(free_reduce(w), G, base), G)
    labels = tuple(G.vertices[vid].normal_word(lab)
                   for vid, lab in zip(_label_vertices(G, f), f.labels))
    return label_word(G, Form(f.base, labels, f.steps))


def element_key(G: GraphOfGroups, w: Word, base: Optional[str] = None):
    """Exact normal-form key: equal keys imply equal group elements."""
    f = britton_reduce(form_of_word(free_reduce(w), G, base), G)
    parts: List = [f.base]
    carry = Word()
    for i, step in enumerate(f.steps):
        vid = _step_vertices(G, step)[0]
        k = _departure_boundary(G, step)[1]
        lab = free_reduce(carry * f.labels[i])
        rkey, coords = G.vertices[vid].coset_split(lab, k)
        parts.append((rkey, step))
        carry = G.vertices[_arrival_boundary(G, step)[0]].boundary_word(
            _arrival_boundary(G, step)[1], *_transport(G, step, coords))
    last_vid = f.base if not f.steps else _arrival_boundary(G, f.steps[-1])[0]
    parts.append(G.vertices[last_vid].element_key(free_reduce(carry * f.labels[-1])))
    return tuple(parts)


def _reduced_word_and_key(G: GraphOfGroups, w: Word, base: Optional[str]):
    """Normalized loop word together with its element key, one reduction pass."""
    f = britton_reduce(form_of_word(free_reduce(w), G, base), G)
    labels = tuple(G.vertices[vid].normal_word(lab)
                   for vid, lab in zip(_label_vertices(G, f), f.labels))
    f = Form(f.base, labels, f.steps)
    parts: List = [f.base]
    carry = Word()
    for i, step in enumerate(f.steps):
        vid = _step_vertices(G, step)[0]
        k = _departure_boundary(G, step)[1]
        lab = free_reduce(carry * f.labels[i])
        rkey, coords = G.vertices[vid].coset_split(lab, k)
        parts.append((rkey, step))
        carry = G.vertices[_arrival_boundary(G, step)[0]].boundary_word(
            _arrival_boundary(G, step)[1], *_transport(G, step, coords))
    last_vid = f.base if not f.steps else _arrival_boundary(G, f.steps[-1])[0]
    parts.append(G.vertices[last_vid].element_key(free_reduce(carry * f.labels[-1])))
    return label_word(G, f), tuple(parts)


def _conjugation_ball(w: Word, base: str, G: GraphOfGroups,
                      radius: int) -> Dict[Tuple[str, tuple], Word]:
    """All conjugates g w g^-1 reachable with path conjugators of <= radius letters.

    Maps (vertex, element key) to one conjugator g; g runs from the state
    vertex back to base, so that g w g^-1 is the state element.
    """
    start_key = element_key(G, w, base)
    ball = {(base, start_key): Word()}
    seen_words = {(base, w)}
    frontier = [(base, w, Word())]
    for _ in range(radius):
        nxt = []
        for vtx, x, g in frontier:
            moves = [(vtx, (gen, s)) for gen in G.vertices[vtx].generators()
                     for s in (1, -1)]
            for eid in sorted(G.edges):
                e = G.edges[eid]
                if e.end[0] == vtx:
                    moves.append((e.origin[0], (e.stable_letter(), 1)))
                if e.origin[0] == vtx:
                    moves.append((e.end[0], (e.stable_letter(), -1)))
            for nvtx, letter in moves:
                lw = make_word(letter)
                ng = free_reduce(lw * g)
                if len(ng) <= len(g):
                    continue
                raw = free_reduce(lw * x * ~lw)
                if (nvtx, raw) in seen_words:
                    continue
                seen_words.add((nvtx, raw))
                nx, key = _reduced_word_and_key(G, raw, nvtx)
                if (nvtx, key) in ball:
                    continue
                ball[(nvtx, key)] = ng
                nxt.append((nvtx, nx, ng))
        if not nxt:
            break
        frontier = nxt
    return ball


def brute_graph_conjugator(u: Word, v: Word, G: GraphOfGroups,
                           radius: int) -> Optional[Word]:
    """Deterministic bounded search for a conjugator g with g v g^-1 = u.

    Meet in the middle: grow conjugation balls of half radius around both
    words and intersect them on exact normal-form keys.  A common state
    h u h^-1 = g2 v g2^-1 yields the conjugator g = h^-1 g2.
    """
    base_u = infer_base(u, G) or sorted(G.vertices)[0]
    base_v = infer_base(v, G) or sorted(G.vertices)[0]
    r_v = radius // 2
    r_u = radius - r_v
    ball_v = _conjugation_ball(v, base_v, G, r_v)
    ball_u = _conjugation_ball(u, base_u, G, r_u)
    best = None
    for state, g2 in ball_v.items():
        h = ball_u.get(state)
        if h is None:
            continue
        g = free_reduce(~h * g2)
        if best is None or (len(g), g.letters) < (len(best), best.letters):
            best = g
    return best
