"""Shared helpers: a naive full-state-space reachability oracle used to
cross-check the production engine on small instances."""

from __future__ import annotations

from collections import deque

from pebblekit.grid import Distribution, Vertex


def naive_reachable(d: Distribution) -> frozenset[Vertex]:
    """Breadth-first search over whole distribution states; a vertex is
    reachable iff it holds a pebble in some reachable state."""
    start = frozenset(d.counts.items())
    seen = {start}
    reach = set(d.support)
    queue = deque([start])
    while queue:
        state = dict(queue.popleft())
        for v, c in list(state.items()):
            if c < 2:
                continue
            for u in d.grid.neighbors(v):
                nxt = dict(state)
                nxt[v] -= 2
                if nxt[v] == 0:
                    del nxt[v]
                nxt[u] = nxt.get(u, 0) + 1
                reach.add(u)
                key = frozenset(nxt.items())
                if key not in seen:
                    seen.add(key)
                    queue.append(key)
    return frozenset(reach)


def naive_max_at(d: Distribution, t: Vertex) -> int:
    """Largest pebble count achievable at t over all reachable states."""
    start = frozenset(d.counts.items())
    seen = {start}
    best = d.get(t)
    queue = deque([start])
    while queue:
        state = dict(queue.popleft())
        for v, c in list(state.items()):
            if c < 2:
                continue
            for u in d.grid.neighbors(v):
                nxt = dict(state)
                nxt[v] -= 2
                if nxt[v] == 0:
                    del nxt[v]
                nxt[u] = nxt.get(u, 0) + 1
                if u == t:
                    best = max(best, nxt[u])
                key = frozenset(nxt.items())
                if key not in seen:
                    seen.add(key)
                    queue.append(key)
    return best
