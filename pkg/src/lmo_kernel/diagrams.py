"""Vertex-oriented uni-trivalent graphs and their graded linear combinations.

A diagram has ``t`` trivalent vertices (labels ``0..t-1``, ports
``(v, 0..2)``, the slot order *is* the cyclic order) and ``m`` legs
(univalent vertices ``t..t+m-1``, single port ``(v, 0)``).  Legs are
unlabeled: series terms are canonical forms in which leg identity has
been erased.

Canonicalization extracts the orientation sign: reversing the cyclic
order at a vertex costs -1, and a diagram carrying an orientation-odd
automorphism is the zero element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

Port = tuple[int, int]
Edge = tuple[Port, Port]

#: Sentinel used for anonymous leg endpoints inside canonical serials.
LEG = 10 ** 9

#: Hard cap on total vertex count; canonical search is exhaustive and
#: tuned for this desk scale.
MAX_VERTICES = 24

#: Slot relabelings of a trivalent vertex: rotations preserve the cyclic
#: order (+1), reflections reverse it (-1).
SLOT_PERMS: tuple[tuple[tuple[int, int, int], int], ...] = (
    ((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
    ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1),
)

_STRUT_SERIAL = (0, 2, ((LEG, LEG),))


class StructuralError(ValueError):
    """Malformed diagram, or an operation that would create a circle."""


def _norm_edge(p: Port, q: Port) -> Edge:
    return (p, q) if p <= q else (q, p)


@dataclass(frozen=True)
class JacobiDiagram:
    """A concrete labeled diagram; see module docstring for conventions."""

    t: int
    m: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.t + self.m > MAX_VERTICES:
            raise StructuralError(
                f"diagram with {self.t + self.m} vertices exceeds desk scale")
        if (self.t + self.m) % 2 != 0:
            raise StructuralError("t + m must be even")
        seen: set[Port] = set()
        for e in self.edges:
            for v, s in e:
                if v < 0 or v >= self.t + self.m:
                    raise StructuralError(f"port {(v, s)}: no such vertex")
                if v < self.t and s not in (0, 1, 2):
                    raise StructuralError(f"port {(v, s)}: bad slot")
                if v >= self.t and s != 0:
                    raise StructuralError(f"port {(v, s)}: legs have slot 0")
                if (v, s) in seen:
                    raise StructuralError(f"port {(v, s)} used twice")
                seen.add((v, s))
        expected = 3 * self.t + self.m
        if len(seen) != expected:
            raise StructuralError("some port is not covered by an edge")
        object.__setattr__(self, "edges",
                           tuple(sorted(_norm_edge(*e) for e in self.edges)))

    @property
    def degree(self) -> Fraction:
        return Fraction(self.t + self.m, 2)

    def legs(self) -> range:
        return range(self.t, self.t + self.m)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "m": self.m,
            "edges": [[[p[0], p[1]], [q[0], q[1]]] for p, q in self.edges],
            "cyclic": {str(v): [0, 1, 2] for v in range(self.t)},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "JacobiDiagram":
        t, m = int(obj["t"]), int(obj["m"])
        # A file may present the cyclic order as any permutation of the
        # slots; rename slots per vertex so the order becomes (0, 1, 2).
        remap: dict[int, dict[int, int]] = {}
        for v, cyc in obj.get("cyclic", {}).items():
            if sorted(cyc) != [0, 1, 2]:
                raise StructuralError(f"vertex {v}: bad cyclic order {cyc}")
            remap[int(v)] = {int(old): i for i, old in enumerate(cyc)}
        edges = []
        for (pv, ps), (qv, qs) in (map(tuple, e) for e in obj["edges"]):
            pv, ps, qv, qs = int(pv), int(ps), int(qv), int(qs)
            if pv in remap:
                ps = remap[pv][ps]
            if qv in remap:
                qs = remap[qv][qs]
            edges.append(((pv, ps), (qv, qs)))
        return cls(t, m, tuple(edges))


EMPTY_DIAGRAM = JacobiDiagram(0, 0, ())


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism-class key: the sorted multiset of component serials."""

    components: tuple

    @property
    def t(self) -> int:
        return sum(c[0] for c in self.components)

    @property
    def m(self) -> int:
        return sum(c[1] for c in self.components)

    @property
    def degree(self) -> Fraction:
        return Fraction(self.t + self.m, 2)

    def union(self, other: "CanonicalForm") -> "CanonicalForm":
        return CanonicalForm(tuple(sorted(self.components + other.components)))

    def diagram(self) -> JacobiDiagram:
        """Rebuild a concrete representative with spec vertex numbering."""
        edges: list[Edge] = []
        tv_off = 0
        t_total = self.t
        leg_next = t_total
        for t_c, m_c, rows in self.components:
            if t_c == 0:  # strut
                edges.append(((leg_next, 0), (leg_next + 1, 0)))
                leg_next += 2
                continue
            for k, row in enumerate(rows):
                for other, own in row:
                    own_port = (tv_off + own // 3, own % 3)
                    if other == LEG:
                        edges.append((own_port, (leg_next, 0)))
                        leg_next += 1
                    else:
                        edges.append(((tv_off + other // 3, other % 3),
                                      own_port))
            tv_off += t_c
        return JacobiDiagram(t_total, self.m, tuple(edges))


EMPTY_FORM = CanonicalForm(())


@dataclass(frozen=True)
class CanonicalDiagram:
    """Canonical form plus the orientation sign extracted on the way.

    ``sign == 0`` marks a diagram equal to its own negative (an
    orientation-odd automorphism exists), i.e. the zero element.
    """

    form: CanonicalForm | None
    sign: int

    @property
    def is_zero(self) -> bool:
        return self.sign == 0


def _components(d: JacobiDiagram) -> list[tuple[list[int], int, list[Edge]]]:
    """Connected components as (trivalent vertices, leg count, edges)."""
    parent = list(range(d.t + d.m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (pv, _), (qv, _) in d.edges:
        parent[find(pv)] = find(qv)
    buckets: dict[int, tuple[list[int], list[int], list[Edge]]] = {}
    for v in range(d.t + d.m):
        buckets.setdefault(find(v), ([], [], []))
        (buckets[find(v)][0] if v < d.t else buckets[find(v)][1]).append(v)
    for e in d.edges:
        buckets[find(e[0][0])][2].append(e)
    return [(tv, len(lg), es) for tv, lg, es in buckets.values()]


def _canon_component(trivalent: list[int], edges: list[Edge],
                     t_bound: int) -> tuple[tuple | None, int]:
    """Minimal serialization of one connected component, with its sign.

    Returns (serial, sign); sign 0 encodes the zero diagram.
    """
    n_legs = sum(1 for e in edges for (v, _) in e if v >= t_bound)
    if not trivalent:
        # Only struts have no trivalent vertex (circles are unrepresentable).
        return _STRUT_SERIAL, 1

    # adjacency by slot: ('L',) for a leg, else (neighbor, neighbor slot)
    adj: dict[int, list] = {v: [None, None, None] for v in trivalent}
    for (pv, ps), (qv, qs) in edges:
        if pv == qv:
            # A loop edge occupies two slots of one cyclic triple; swapping
            # them is an orientation-odd automorphism, so the diagram is 0.
            return None, 0
        if pv < t_bound and qv < t_bound:
            adj[pv][ps] = (qv, qs)
            adj[qv][qs] = (pv, ps)
        elif pv < t_bound:
            adj[pv][ps] = ("L",)
        else:
            adj[qv][qs] = ("L",)

    T = len(trivalent)
    best: list = [None]        # best complete serial
    best_signs: set[int] = set()

    def search(placed: list[int], label: dict[int, int],
               perm: dict[int, tuple[int, int, int]],
               rows: list, sign: int) -> None:
        k = len(placed)
        if k == T:
            serial = tuple(rows)
            if best[0] is None:
                best[0] = serial
                best_signs.clear()
                best_signs.add(sign)
            else:  # comparisons en route guarantee serial == best[0]
                best_signs.add(sign)
            return
        if k == 0:
            candidates = trivalent
        else:
            candidates = sorted({u for v in placed
                                 for slot in adj[v] if slot != ("L",)
                                 for u in (slot[0],) if u not in label})
        for u in candidates:
            for p, psign in SLOT_PERMS:
                row = []
                for s in (0, 1, 2):
                    nb = adj[u][s]
                    if nb == ("L",):
                        row.append((LEG, 3 * k + p[s]))
                    else:
                        w, ws = nb
                        if w == u:
                            continue  # unreachable: loops handled above
                        if w in label:
                            row.append((3 * label[w] + perm[w][ws],
                                        3 * k + p[s]))
                row = tuple(sorted(row))
                if best[0] is not None:
                    ref = best[0][k]
                    if row > ref:
                        continue
                    if row < ref:
                        best[0] = None  # strictly better prefix found
                        best_signs.clear()
                label[u] = k
                perm[u] = p
                placed.append(u)
                rows.append(row)
                search(placed, label, perm, rows, sign * psign)
                rows.pop()
                placed.pop()
                del label[u], perm[u]

    search([], {}, {}, [], 1)
    serial = best[0]
    if best_signs == {1, -1}:
        return None, 0
    return (T, n_legs, serial), next(iter(best_signs))


_CANON_CACHE: dict[tuple, CanonicalDiagram] = {}


def canonicalize(d: JacobiDiagram) -> CanonicalDiagram:
    """Canonical form of ``d`` with the accumulated orientation sign."""
    key = (d.t, d.m, d.edges)
    hit = _CANON_CACHE.get(key)
    if hit is not None:
        return hit
    comps = []
    sign = 1
    for tv, _, es in _components(d):
        serial, s = _canon_component(sorted(tv), es, d.t)
        if s == 0:
            out = CanonicalDiagram(None, 0)
            _CANON_CACHE[key] = out
            return out
        sign *= s
        comps.append(serial)
    out = CanonicalDiagram(CanonicalForm(tuple(sorted(comps))), sign)
    _CANON_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

class DiagramSeries:
    """Rational linear combination of canonical diagrams.

    Truncation policy: terms with more than ``imax`` trivalent vertices
    or more than ``lmax`` legs are dropped, and the drop is recorded in
    the ``truncated`` flag.
    """

    __slots__ = ("terms", "imax", "lmax", "truncated")

    def __init__(self, imax: int, lmax: int | None = None):
        self.terms: dict[CanonicalForm, Fraction] = {}
        self.imax = imax
        self.lmax = 2 * imax if lmax is None else lmax
        self.truncated = False

    @classmethod
    def unit(cls, imax: int, lmax: int | None = None) -> "DiagramSeries":
        s = cls(imax, lmax)
        s.terms[EMPTY_FORM] = Fraction(1)
        return s

    def copy(self) -> "DiagramSeries":
        s = DiagramSeries(self.imax, self.lmax)
        s.terms = dict(self.terms)
        s.truncated = self.truncated
        return s

    def _fits(self, form: CanonicalForm) -> bool:
        return form.t <= self.imax and form.m <= self.lmax

    def add_form(self, form: CanonicalForm, coeff: Fraction) -> None:
        if coeff == 0:
            return
        if not self._fits(form):
            self.truncated = True
            return
        c = self.terms.get(form, Fraction(0)) + coeff
        if c == 0:
            self.terms.pop(form, None)
        else:
            self.terms[form] = c

    def add_diagram(self, d: JacobiDiagram, coeff: Fraction | int) -> None:
        cd = canonicalize(d)
        if cd.is_zero:
            return
        self.add_form(cd.form, Fraction(coeff) * cd.sign)

    def items(self) -> Iterator[tuple[CanonicalForm, Fraction]]:
        return iter(sorted(self.terms.items(),
                           key=lambda kv: kv[0].components))

    def coeff(self, form: CanonicalForm) -> Fraction:
        return self.terms.get(form, Fraction(0))

    def coeff_of(self, d: JacobiDiagram) -> Fraction:
        """Coefficient of a concrete diagram, orientation sign included."""
        cd = canonicalize(d)
        if cd.is_zero:
            return Fraction(0)
        return self.terms.get(cd.form, Fraction(0)) * cd.sign

    def is_zero(self) -> bool:
        return not self.terms

    def _check_policy(self, other: "DiagramSeries") -> None:
        if (self.imax, self.lmax) != (other.imax, other.lmax):
            raise StructuralError("incompatible truncation policies")

    def __add__(self, other: "DiagramSeries") -> "DiagramSeries":
        self._check_policy(other)
        out = self.copy()
        out.truncated = self.truncated or other.truncated
        for f, c in other.terms.items():
            out.add_form(f, c)
        return out

    def scale(self, c) -> "DiagramSeries":
        c = Fraction(c)
        out = DiagramSeries(self.imax, self.lmax)
        out.truncated = self.truncated
        if c != 0:
            out.terms = {f: c * v for f, v in self.terms.items()}
        return out

    def union(self, other: "DiagramSeries") -> "DiagramSeries":
        """Disjoint-union product, extended bilinearly."""
        self._check_policy(other)
        out = DiagramSeries(self.imax, self.lmax)
        out.truncated = self.truncated or other.truncated
        for f1, c1 in self.terms.items():
            for f2, c2 in other.terms.items():
                out.add_form(f1.union(f2), c1 * c2)
        return out

    def exp_union(self) -> "DiagramSeries":
        """exp under disjoint union; the argument may have no degree-0 part."""
        if EMPTY_FORM in self.terms:
            raise StructuralError("exp_union argument has a degree-0 part")
        out = DiagramSeries.unit(self.imax, self.lmax)
        power = DiagramSeries.unit(self.imax, self.lmax)
        k = 0
        while True:
            k += 1
            power = power.union(self).scale(Fraction(1, k))
            if power.is_zero():
                out.truncated = out.truncated or power.truncated
                break
            out = out + power
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagramSeries):
            return NotImplemented
        return (self.terms == other.terms
                and (self.imax, self.lmax) == (other.imax, other.lmax))

    def __repr__(self) -> str:
        n = len(self.terms)
        flag = ", truncated" if self.truncated else ""
        return f"DiagramSeries({n} terms, imax={self.imax}{flag})"

    def to_json(self) -> list:
        return [{"coeff": f"{c.numerator}/{c.denominator}",
                 "diagram": f.diagram().to_json()}
                for f, c in self.items()]

    @classmethod
    def from_json(cls, obj: list, imax: int,
                  lmax: int | None = None) -> "DiagramSeries":
        s = cls(imax, lmax)
        for entry in obj:
            s.add_diagram(JacobiDiagram.from_json(entry["diagram"]),
                          Fraction(entry["coeff"]))
        return s


def series_of(d: JacobiDiagram, imax: int, lmax: int | None = None,
              coeff: Fraction | int = 1) -> DiagramSeries:
    s = DiagramSeries(imax, lmax)
    s.add_diagram(d, coeff)
    return s


def relabel_union(d1: JacobiDiagram, d2: JacobiDiagram
                  ) -> tuple[JacobiDiagram, list[int], list[int]]:
    """Disjoint union of two labeled diagrams.

    Returns the union plus the new leg ids coming from each input, in
    the input legs' original order.
    """
    t = d1.t + d2.t

    def remap1(p: Port) -> Port:
        v, s = p
        return (v, s) if v < d1.t else (v - d1.t + t, s)

    def remap2(p: Port) -> Port:
        v, s = p
        return (v + d1.t, s) if v < d2.t else (v - d2.t + t + d1.m, s)

    edges = [(remap1(p), remap1(q)) for p, q in d1.edges]
    edges += [(remap2(p), remap2(q)) for p, q in d2.edges]
    legs1 = [v - d1.t + t for v in d1.legs()]
    legs2 = [v - d2.t + t + d1.m for v in d2.legs()]
    return JacobiDiagram(t, d1.m + d2.m, tuple(edges)), legs1, legs2


def glue_legs(d: JacobiDiagram, pairs: Iterable[tuple[int, int]]
              ) -> JacobiDiagram:
    """Glue the listed leg pairs: each glued pair of legs disappears and
    their two incident edges merge into one.

    Raises StructuralError if a gluing would close a vertex-free circle.
    """
    partner: dict[Port, Port] = {}
    for p, q in d.edges:
        partner[p] = q
        partner[q] = p
    glued: set[int] = set()
    for a, b in pairs:
        pa, pb = (a, 0), (b, 0)
        na, nb = partner.pop(pa), partner.pop(pb)
        if na == pb:
            raise StructuralError("gluing would create a vertex-free circle")
        partner[na] = nb
        partner[nb] = na
        glued.update((a, b))
    leg_map = {v: d.t + i
               for i, v in enumerate(v for v in d.legs() if v not in glued)}

    def remap(p: Port) -> Port:
        v, s = p
        return (v, s) if v < d.t else (leg_map[v], 0)

    edges = []
    for p, q in partner.items():
        if p <= q:
            edges.append((remap(p), remap(q)))
    return JacobiDiagram(d.t, d.m - len(glued), tuple(edges))
