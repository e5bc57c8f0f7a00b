"""Dynamic weighted edge coloring on a fixed base graph.

Weighted edges arrive and depart; each must be colored on arrival so the
same-color weight at every vertex stays at most 1, and a color, once given
out, is never taken back.  The algorithm keeps disjoint color classes, one
per weight type, whose sizes are tied to running maxima of the per-vertex
load and heavy degree.  With the right class-size constants first-fit never
runs out of colors, and the constants come from a small LP that this module
can also rebuild from scratch for any set of type breakpoints.

With a two-vertex base graph this is dynamic bin packing (colors = bins).
"""

from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
import itertools
import math

HALF = Fraction(1, 2)


class InfeasibleScheme(Exception):
    """The class-size constants do not satisfy the blocking LP."""


class ColoringFailure(AssertionError):
    """First-fit found no admissible color.  Unreachable for a valid scheme;
    raised as a hard assertion so bugs surface instead of silently degrading."""


class SizeLimit(Exception):
    """Instance too large for the exhaustive optimum search."""


Arrive = namedtuple("Arrive", ["id", "u", "v", "w"])
Depart = namedtuple("Depart", ["id"])


def _as_fraction(w):
    if isinstance(w, float):
        return Fraction(w).limit_denominator(10 ** 9)
    return Fraction(w)


class DwecScheme:
    """Type breakpoints plus the class-size constants x_0..x_K.

    Breakpoints are descending rationals in (0,1) starting at 1/2; type i
    covers the half-open interval (breakpoints[i], breakpoints[i-1]], with
    type 0 = (1/2, 1] and the last type reaching down to 0.
    """

    def __init__(self, breakpoints, x, check=True):
        bp = tuple(Fraction(b) for b in breakpoints)
        if not bp or bp[0] != HALF:
            raise ValueError("first breakpoint must be 1/2")
        for lo, hi in zip(bp[1:], bp):
            if not (0 < lo < hi):
                raise ValueError("breakpoints must descend within (0,1)")
        if bp[-1] <= 0 or bp[0] >= 1:
            raise ValueError("breakpoints must lie in (0,1)")
        self.breakpoints = bp
        self.x = tuple(Fraction(v) for v in x)
        if len(self.x) != len(bp) + 1:
            raise ValueError("need one constant per type")
        if check:
            self.check_feasible()

    @property
    def num_types(self):
        return len(self.breakpoints) + 1

    def classify(self, w):
        """Type index of a weight in (0, 1]."""
        w = _as_fraction(w)
        if not (0 < w <= 1):
            raise ValueError("weight %s out of (0, 1]" % w)
        for i, b in enumerate(self.breakpoints):
            if w > b:
                return i
        return len(self.breakpoints)

    def lower(self, i):
        """Lower breakpoint of type i (exclusive)."""
        if i < len(self.breakpoints):
            return self.breakpoints[i]
        return Fraction(0)

    def upper(self, i):
        """Upper breakpoint of type i (inclusive)."""
        if i == 0:
            return Fraction(1)
        return self.breakpoints[i - 1]

    def beta(self, i, j):
        """Least same-color weight a blocked class-j color pins at one
        endpoint when a type-i edge (i >= 1) fails to fit there.

        Edges living in class-j colors have weight in (lower(j), 1/2]; the
        blocking endpoint carries s of them with total exceeding both
        1 - upper(i) and s*lower(j), so the infimum over the multiset is
        min over feasible s of max(1 - upper(i), s*lower(j)).
        """
        assert 1 <= i <= j < self.num_types
        T = 1 - self.upper(i)
        lj = self.lower(j)
        s = max(1, math.floor(2 * T) + 1)  # smallest s with s/2 > T
        # more blockers only raise s*lower(j), so the smallest feasible s wins
        return max(T, s * lj)

    def constraint_rows(self):
        """The blocking LP rows: for each arriving type i >= 1 the
        coefficients (beta_i1, ..., beta_iK) of sum_j beta_ij x_j >= 2."""
        K = self.num_types
        return [tuple(self.beta(i, j) for j in range(i, K)) for i in range(1, K)]

    def check_feasible(self):
        if self.x[0] < 2:
            raise InfeasibleScheme("x_0 = %s < 2" % self.x[0])
        if any(v < 0 for v in self.x):
            raise InfeasibleScheme("negative constant")
        for i, row in enumerate(self.constraint_rows(), start=1):
            lhs = sum(b * xv for b, xv in zip(row, self.x[i:]))
            if lhs < 2:
                raise InfeasibleScheme(
                    "type-%d row sums to %s < 2" % (i, lhs))

    @classmethod
    def four_type(cls):
        return cls((HALF, Fraction(2, 5), Fraction(1, 3)),
                   (Fraction(2), Fraction(3, 8), Fraction(3, 10), Fraction(3)))

    @classmethod
    def five_type(cls):
        """Refined scheme with one extra breakpoint; constants come from the
        derived LP since no published vector exists for this split."""
        derived = derive_constants(
            (HALF, Fraction(2, 5), Fraction(1, 3), Fraction(11, 43)))
        return cls(derived.breakpoints, derived.x)


FOUR_TYPE = DwecScheme.four_type()


def classify(w, scheme=FOUR_TYPE):
    return scheme.classify(w)


class ColoringState:
    """Live colored multigraph plus the color classes and running maxima.

    Colors are integers handed out in creation order across all classes, so
    a color index doubles as a stable physical identity (the Clos multirate
    simulator maps colors to middle crossbars this way).
    """

    def __init__(self, vertices=None, scheme=FOUR_TYPE):
        self.scheme = scheme
        self.fixed_vertices = vertices is not None
        self.vertices = set(vertices) if vertices is not None else set()
        self.edges = {}            # id -> (u, v, weight, color)
        self.classes = [[] for _ in range(scheme.num_types)]
        self.next_color = 0
        self.W_bar = Fraction(0)
        self.Delta_bar = 0
        self.load = {}             # (vertex, color) -> weight
        self.vertex_weight = {}    # vertex -> total live weight
        self.heavy_count = {}      # vertex -> live edges of weight > 1/2

    @property
    def colors_used(self):
        return self.next_color

    def _grow_classes(self):
        sc = self.scheme
        targets = [math.ceil(sc.x[0] * self.Delta_bar)]
        targets += [math.ceil(sc.x[i] * self.W_bar)
                    for i in range(1, sc.num_types)]
        for i, want in enumerate(targets):
            while len(self.classes[i]) < want:
                self.classes[i].append(self.next_color)
                self.next_color += 1

    def arrive(self, eid, u, v, w):
        if eid in self.edges:
            raise ValueError("duplicate edge id %r" % (eid,))
        if u == v:
            raise ValueError("self-loops not allowed")
        if self.fixed_vertices and not {u, v} <= self.vertices:
            raise ValueError("endpoint outside the base graph")
        self.vertices.update((u, v))
        w = _as_fraction(w)
        typ = self.scheme.classify(w)

        for end in (u, v):
            self.vertex_weight[end] = self.vertex_weight.get(end, 0) + w
            if w > HALF:
                self.heavy_count[end] = self.heavy_count.get(end, 0) + 1
            self.W_bar = max(self.W_bar, self.vertex_weight[end])
            self.Delta_bar = max(self.Delta_bar, self.heavy_count.get(end, 0))
        self._grow_classes()

        color = self._first_fit(typ, u, v, w)
        if color is None:
            raise ColoringFailure(
                "no color for weight %s (type %d); scheme constants broken"
                % (w, typ))
        self.edges[eid] = (u, v, w, color)
        for end in (u, v):
            self.load[end, color] = self.load.get((end, color), 0) + w
        return color

    def _first_fit(self, typ, u, v, w):
        if typ == 0:
            pools = [self.classes[0]]
        else:
            pools = self.classes[typ:]
        for pool in pools:
            for color in pool:
                if (self.load.get((u, color), 0) + w <= 1
                        and self.load.get((v, color), 0) + w <= 1):
                    return color
        return None

    def depart(self, eid):
        try:
            u, v, w, color = self.edges.pop(eid)
        except KeyError:
            raise ValueError("unknown edge id %r" % (eid,))
        for end in (u, v):
            self.load[end, color] -= w
            if self.load[end, color] == 0:
                del self.load[end, color]
            self.vertex_weight[end] -= w
            if w > HALF:
                self.heavy_count[end] -= 1
        return (u, v, w, color)

    def color_of(self, eid):
        return self.edges[eid][3]

    def live_edges(self):
        return [(u, v, w) for u, v, w, _ in self.edges.values()]

    def audit(self):
        """Recheck every state invariant from scratch."""
        sc = self.scheme
        assert len(self.classes[0]) == math.ceil(sc.x[0] * self.Delta_bar)
        for i in range(1, sc.num_types):
            assert len(self.classes[i]) == math.ceil(sc.x[i] * self.W_bar)
        seen = set()
        for pool in self.classes:
            for c in pool:
                assert c not in seen
                seen.add(c)
        assert len(seen) == self.next_color
        loads = {}
        for u, v, w, color in self.edges.values():
            assert 0 < w <= 1
            for end in (u, v):
                loads[end, color] = loads.get((end, color), 0) + w
        for key, total in loads.items():
            assert total <= 1, "overloaded %s: %s" % (key, total)
        assert loads == {k: v for k, v in self.load.items() if v}

    def snapshot(self):
        return (dict(self.edges), [list(p) for p in self.classes],
                self.next_color, self.W_bar, self.Delta_bar,
                dict(self.load), dict(self.vertex_weight),
                dict(self.heavy_count), set(self.vertices))

    def restore(self, snap):
        (edges, classes, next_color, w_bar, delta_bar,
         load, vertex_weight, heavy_count, vertices) = snap
        self.edges = dict(edges)
        self.classes = [list(p) for p in classes]
        self.next_color = next_color
        self.W_bar = w_bar
        self.Delta_bar = delta_bar
        self.load = dict(load)
        self.vertex_weight = dict(vertex_weight)
        self.heavy_count = dict(heavy_count)
        self.vertices = set(vertices)


def step(state, event):
    """Apply one Arrive/Depart event; returns the color on Arrive."""
    if isinstance(event, Arrive):
        return state.arrive(event.id, event.u, event.v, event.w)
    if isinstance(event, Depart):
        state.depart(event.id)
        return None
    raise TypeError("unknown event %r" % (event,))


def opt_lower(state):
    """Certified lower bound on the offline optimum: per-vertex load forces
    ceil(W_bar) colors and pairwise-conflicting heavy edges force Delta_bar."""
    return max(math.ceil(state.W_bar), state.Delta_bar)


def opt_exact(edges, limit=12):
    """Minimum number of colors for a static weighted multigraph, by
    exhaustive assignment.  Edges are (u, v, weight) triples."""
    edges = [(u, v, _as_fraction(w)) for u, v, w in edges]
    if len(edges) > limit:
        raise SizeLimit("%d edges > limit %d" % (len(edges), limit))
    if not edges:
        return 0
    for u, v, w in edges:
        if not (0 < w <= 1):
            raise ValueError("weight %s out of (0, 1]" % w)
    # heaviest first tightens pruning
    edges.sort(key=lambda e: e[2], reverse=True)

    load = {}
    best = [len(edges)]

    def place(idx, used):
        if used >= best[0]:
            return
        if idx == len(edges):
            best[0] = used
            return
        u, v, w = edges[idx]
        # trying a brand-new color before color c is equivalent to trying it
        # after, so only the first unused color is explored
        for color in range(min(used + 1, best[0])):
            if load.get((u, color), 0) + w <= 1 and load.get((v, color), 0) + w <= 1:
                load[u, color] = load.get((u, color), 0) + w
                load[v, color] = load.get((v, color), 0) + w
                place(idx + 1, max(used, color + 1))
                load[u, color] -= w
                load[v, color] -= w

    place(0, 0)
    return best[0]


@dataclass
class DerivedScheme:
    breakpoints: tuple
    x: tuple
    objective: Fraction
    rows: list


def derive_constants(breakpoints):
    """Rebuild the class-size constants for a given breakpoint sequence.

    Minimizes sum(x_i) subject to x_0 >= 2, the per-type blocking rows
    sum_{j>=i} beta_ij x_j >= 2, and x >= 0, solved exactly over rationals
    by basic-solution enumeration (the dimension is tiny).
    """
    probe = DwecScheme(breakpoints, (2,) * (len(tuple(breakpoints)) + 1),
                       check=False)
    K = probe.num_types
    rows = probe.constraint_rows()

    # constraints as (coeffs, rhs) meaning coeffs . x >= rhs
    cons = [((Fraction(1),) + (Fraction(0),) * (K - 1), Fraction(2))]
    for i, row in enumerate(rows, start=1):
        coeffs = [Fraction(0)] * K
        for j, b in zip(range(i, K), row):
            coeffs[j] = b
        cons.append((tuple(coeffs), Fraction(2)))
    for j in range(K):
        coeffs = [Fraction(0)] * K
        coeffs[j] = Fraction(1)
        cons.append((tuple(coeffs), Fraction(0)))

    best_x, best_obj = None, None
    for combo in itertools.combinations(range(len(cons)), K):
        sol = _solve_square([cons[c][0] for c in combo],
                            [cons[c][1] for c in combo])
        if sol is None:
            continue
        if any(sum(c * v for c, v in zip(coeffs, sol)) < rhs
               for coeffs, rhs in cons):
            continue
        obj = sum(sol)
        if best_obj is None or obj < best_obj:
            best_obj, best_x = obj, tuple(sol)
    if best_x is None:
        raise InfeasibleScheme("blocking LP has no feasible basic solution")
    return DerivedScheme(probe.breakpoints, best_x, best_obj, rows)


def _solve_square(matrix, rhs):
    """Gaussian elimination over Fractions; None if singular."""
    n = len(rhs)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def parse_trace(lines):
    """Event lines: `A <id> <u> <v> <p/q>` or `D <id>`."""
    events = []
    for ln, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if parts[0] == "A" and len(parts) == 5:
            try:
                w = Fraction(parts[4])
            except (ValueError, ZeroDivisionError):
                raise ValueError("line %d: bad weight %r" % (ln, parts[4]))
            events.append(Arrive(parts[1], parts[2], parts[3], w))
        elif parts[0] == "D" and len(parts) == 2:
            events.append(Depart(parts[1]))
        else:
            raise ValueError("line %d: cannot parse %r" % (ln, text))
    return events


def run_trace(events, scheme=FOUR_TYPE, audit=False):
    """Apply events in order; yields one report row per event as a dict with
    keys t, colors_used, opt_lower, W_bar, Delta_bar."""
    state = ColoringState(scheme=scheme)
    for t, ev in enumerate(events, start=1):
        step(state, ev)
        if audit:
            state.audit()
        yield {"t": t, "colors_used": state.colors_used,
               "opt_lower": opt_lower(state),
               "W_bar": str(state.W_bar), "Delta_bar": state.Delta_bar}
