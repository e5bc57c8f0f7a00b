"""Adversarial and random traffic generators for the simulators.

Three kinds of pressure: random churn, a greedy heuristic that commits
whichever candidate request hurts a chosen probe the most, and exact
constructions/searches for the Clos necessity results (a saturating schedule
for the strict-sense bound, and a breadth-first search over reachable
two-crossbar states for the reuse rule).
"""

from collections import deque
import random

from .dary import all_strings, window_index
from . import clos
from . import multilog


# -- multilog traffic ---------------------------------------------------------


def random_admissible_request(state, rng):
    """A uniformly random request the current state can legally accept,
    or None when terminals are exhausted.

    Windows where the chosen input already has live branches are avoided:
    a later branch into a pinned window has no plane choice left, and the
    sufficiency guarantee only covers subrequests that still do.
    """
    cfg = state.config
    ins = [x for x in all_strings(cfg.d, cfg.n)
           if state.input_active.get(x, 0) < cfg.f]
    rng.shuffle(ins)
    for x in ins:
        outs = [y for y in all_strings(cfg.d, cfg.n)
                if y not in state.output_owner
                and (x, window_index(y, cfg.t)) not in state.pins]
        if not outs:
            continue
        cap = min(cfg.f - state.input_active.get(x, 0), len(outs))
        picks = rng.sample(outs, rng.randint(1, cap))
        return x, picks
    return None

def random_trial(config, steps, seed, audit_every=0):
    """Drive one ConnState with random admits/releases; returns a dict with
    blocked-event and peak blocking-plane counts."""
    rng = random.Random(seed)
    state = multilog.ConnState(config)
    live = []
    blocked = 0
    max_blocking = 0
    serial = 0
    for step in range(steps):
        if live and rng.random() < 0.4:
            state.release(live.pop(rng.randrange(len(live))))
            continue
        req = random_admissible_request(state, rng)
        if req is None:
            continue
        x, outs = req
        by_window = {}
        for y in outs:
            by_window.setdefault(window_index(y, config.t), []).append(y)
        for ys in by_window.values():
            max_blocking = max(max_blocking,
                               len(state.blocking_planes(x, ys)))
        serial += 1
        result = state.admit(x, outs, rid=str(serial))
        if any(isinstance(v, multilog.Blocked) for v in result.values()):
            blocked += 1
        if str(serial) in state.requests:  # fully blocked admits leave no id
            live.append(str(serial))
        if audit_every and serial % audit_every == 0:
            state.audit()
    state.audit()
    return {"blocked": blocked, "max_blocking_planes": max_blocking,
            "admitted": serial}


def greedy_trial(config, steps, seed, pool=24):
    """Random churn, but each admission picks, out of `pool` random
    candidates, the one that blocks the most planes for a fresh probe."""
    rng = random.Random(seed)
    state = multilog.ConnState(config)
    live = []
    blocked = 0
    max_blocking = 0
    serial = 0
    for step in range(steps):
        if live and rng.random() < 0.35:
            state.release(live.pop(rng.randrange(len(live))))
            continue
        probe = random_admissible_request(state, rng)
        if probe is None:
            continue
        best, best_score = None, -1
        for _ in range(pool):
            cand = random_admissible_request(state, rng)
            if cand is None:
                break
            serial += 1
            rid = "g%d" % serial
            result = state.admit(cand[0], cand[1], rid=rid)
            if any(isinstance(v, multilog.Blocked) for v in result.values()):
                blocked += 1
            score = sum(len(state.blocking_planes(probe[0], [y]))
                        for y in probe[1])
            if rid in state.requests:
                state.release(rid)
            if score > best_score:
                best, best_score = cand, score
        if best is None:
            continue
        by_window = {}
        for y in probe[1]:
            by_window.setdefault(window_index(y, config.t), []).append(y)
        for ys in by_window.values():
            max_blocking = max(max_blocking,
                               len(state.blocking_planes(probe[0], ys)))
        serial += 1
        rid = str(serial)
        result = state.admit(best[0], best[1], rid=rid)
        if any(isinstance(v, multilog.Blocked) for v in result.values()):
            blocked += 1
        if rid in state.requests:
            live.append(rid)
    state.audit()
    return {"blocked": blocked, "max_blocking_planes": max_blocking,
            "admitted": serial}


# -- Clos strict-sense saturation --------------------------------------------


def snb_saturation_events(n):
    """Arrival/departure schedule that drives first-fit C(n, m, n) into a
    state with n-1 middles tied up by input crossbar 0 and n-1 different
    middles tied up by output crossbar 0, then probes 0:0 -> 0:0.

    The probe blocks exactly when m <= 2n-2.  Events are
    ("A", id, in_term, out_term) and ("D", id); the probe id is "probe".
    """
    assert n >= 2
    events = []
    if n == 2:
        # the n-crossbar round has no room at n=2; a third crossbar pins the
        # second request away from middle 0
        return [
            ("A", "R1", (0, 1), (1, 0)),
            ("A", "T1", (2, 0), (2, 0)),
            ("A", "S1", (2, 1), (0, 1)),
            ("D", "T1"),
            ("A", "probe", (0, 0), (0, 0)),
        ]
    # permanent requests from input crossbar 0; first fit stacks them on
    # middles 0..n-2
    for j in range(1, n):
        events.append(("A", "R%d" % j, (0, j), (j, 0)))
    # round j: temporaries from input crossbar j cover middles 0..n-2, so
    # the request to output crossbar 0 lands on middle n-2+j; descending
    # output order keeps each temp clear of the permanent request that
    # already feeds its output crossbar
    for j in range(1, n):
        temps = []
        for k in range(n - 1, 0, -1):
            tid = "T%d_%d" % (j, k)
            events.append(("A", tid, (j, k), (k, j)))
            temps.append(tid)
        events.append(("A", "S%d" % j, (j, 0), (0, j)))
        for tid in temps:
            events.append(("D", tid))
    events.append(("A", "probe", (0, 0), (0, 0)))
    return events


def run_snb_saturation(n, m):
    """Replay the saturating schedule; returns the probe outcome."""
    cfg = clos.ClosConfig.symmetric(n=n, m=m, r=max(n, 3))
    state = clos.ClosState(cfg)
    outcome = None
    for ev in snb_saturation_events(n):
        if ev[0] == "A":
            _, rid, it, ot = ev
            got = state.snb_admit(it, ot, rid=rid)
            if rid == "probe":
                outcome = got
            else:
                assert got is not clos.BLOCKED, "setup request blocked"
        else:
            state.release(ev[1])
        state.audit()
    return outcome


# -- exhaustive search over the two-crossbar reuse rule ----------------------


def _benes_counts(mids):
    counts = {}
    for carried in mids:
        for pair in carried:
            counts[pair] = counts.get(pair, 0) + 1
    return counts


def _benes_admit_choice(mids, i, o):
    """Middle index the reuse rule picks in abstract state `mids`
    (tuple of frozensets of carried (i, o) pairs), or None if all full."""
    m = len(mids)
    free = [mid for mid in range(m)
            if not any(p[0] == i for p in mids[mid])
            and not any(p[1] == o for p in mids[mid])]
    if not free:
        return None
    diagonal = [mid for mid in free if (1 - i, 1 - o) in mids[mid]]
    if diagonal:
        return diagonal[0]
    busy = [mid for mid in free if mids[mid]]
    if busy:
        return busy[0]
    return free[0]


def benes_search(n, m, max_depth=None):
    """Breadth-first search of every state the r=2 reuse rule can reach in
    C(n, m, 2), to closure by default or within max_depth events.

    Returns None when no reachable state rejects an admissible request, or
    the offending event list (("A", i, o) / ("D", i, o) steps plus the
    blocked probe) otherwise.
    """
    if max_depth is None:
        max_depth = float("inf")
    start = (frozenset(),) * m
    parents = {start: None}
    frontier = deque([(start, 0)])
    while frontier:
        mids, depth = frontier.popleft()
        counts = _benes_counts(mids)
        loads_i = [sum(c for p, c in counts.items() if p[0] == i)
                   for i in (0, 1)]
        loads_o = [sum(c for p, c in counts.items() if p[1] == o)
                   for o in (0, 1)]
        for i in (0, 1):
            for o in (0, 1):
                if loads_i[i] >= n or loads_o[o] >= n:
                    continue
                pick = _benes_admit_choice(mids, i, o)
                if pick is None:
                    return _benes_path(parents, mids) + [("A", i, o, "blocked")]
                if depth >= max_depth:
                    continue
                nxt = list(mids)
                nxt[pick] = mids[pick] | {(i, o)}
                nxt = tuple(nxt)
                if nxt not in parents:
                    parents[nxt] = (mids, ("A", i, o))
                    frontier.append((nxt, depth + 1))
        if depth >= max_depth:
            continue
        for mid in range(m):
            for pair in mids[mid]:
                nxt = list(mids)
                nxt[mid] = mids[mid] - {pair}
                nxt = tuple(nxt)
                if nxt not in parents:
                    parents[nxt] = (mids, ("D",) + pair + (mid,))
                    frontier.append((nxt, depth + 1))
    return None


def _benes_path(parents, state):
    path = []
    while parents[state] is not None:
        state, event = parents[state]
        path.append(event)
    path.reverse()
    return path


def replay_benes_events(n, m, events):
    """Run an abstract event list through the concrete simulator; returns
    the outcome of the final arrival ("blocked" events included)."""
    cfg = clos.ClosConfig.symmetric(n=n, m=m, r=2)
    state = clos.ClosState(cfg)
    live = {}  # (i, o, middle) -> list of rids
    outcome = None
    serial = 0
    for ev in events:
        if ev[0] == "A":
            i, o = ev[1], ev[2]
            serial += 1
            rid = str(serial)
            it = (i, _free_port(state.busy_in, i, n))
            ot = (o, _free_port(state.busy_out, o, n))
            got = state.benes_admit(it, ot, rid=rid)
            outcome = got
            if got is not clos.BLOCKED:
                live.setdefault((i, o, got), []).append(rid)
        else:
            _, i, o, mid = ev
            rid = live[(i, o, mid)].pop()
            state.release(rid)
        state.audit()
    return outcome


def _free_port(busy, cb, n):
    for port in range(n):
        if (cb, port) not in busy:
            return port
    raise AssertionError("no free port on crossbar %d" % cb)
