"""Kauffman bracket, writhe and Jones polynomial of link diagrams.

Two evaluators are provided.  :func:`bracket_naive` sums all 2^c states and
counts loops with union-find; it is the reference.  :func:`bracket_fast`
absorbs crossings one at a time, keeping for every way the open strand ends
can be paired up the accumulated weight of the states that produce it.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .diagram import A_SMOOTHING, B_SMOOTHING, Diagram, DiagramError, _find, writhe
from .laurent import DELTA, ONE, LaurentPoly

__all__ = [
    "ResourceLimitError",
    "kauffman_bracket",
    "bracket_naive",
    "bracket_fast",
    "bracket_unionfind",
    "writhe",
    "jones",
    "DEFAULT_MAX_CROSSINGS",
]

DEFAULT_MAX_CROSSINGS = 22


class ResourceLimitError(RuntimeError):
    """The requested state sum is larger than the configured limit."""


def _require_link(d: Diagram) -> None:
    if d.vertices:
        raise DiagramError("bracket needs a link diagram (graph vertices present)")


BATCH_BITS = 15


def _end_tables(d: Diagram) -> np.ndarray:
    # tail of attached arc k is end 2k, its head is 2k + 1; one row per crossing
    attached = [a for a in d.arcs if not d.is_free_loop(a)]
    idx = {a: i for i, a in enumerate(attached)}
    return np.array([[2 * idx[a] + (1 if e == "in" else 0) for a, e in x.slots] for x in d.crossings], dtype=np.int64)


def _counts_for_prefix(ends: np.ndarray, n_ends: int, prefix: int, prefix_bits: int) -> np.ndarray:
    """counts[b, loops] over the states whose low ``prefix_bits`` bits equal
    ``prefix``; b is the number of B-smoothings."""
    c = len(ends)
    free_bits = c - prefix_bits
    # a loop runs through at least one arc, so there are at most n_ends / 2
    out = np.zeros((c + 1, n_ends // 2 + 1), dtype=np.int64)
    batch_bits = min(free_bits, BATCH_BITS)
    # a cycle visits one end per arc of its loop, so it has at most n_ends / 2 ends
    steps = max(1, int(np.ceil(np.log2(max(n_ends // 2, 2)))))
    base = np.arange(1 << batch_bits, dtype=np.int64)
    ident = np.arange(n_ends, dtype=np.intp)
    for hi in range(1 << (free_bits - batch_bits)):
        states = (((hi << batch_bits) | base) << prefix_bits) | prefix
        bits = ((states[:, None] >> np.arange(c)) & 1).astype(bool)
        # perm[e] = smoothing partner of the other end of e's arc, stored as
        # flat indices so composing the permutation is a single gather
        perm = np.empty((len(states), n_ends), dtype=np.int32)
        for k in range(c):
            e0, e1, e2, e3 = (int(e) for e in ends[k])
            bk = bits[:, k]
            perm[:, e0 ^ 1] = np.where(bk, e3, e1)
            perm[:, e1 ^ 1] = np.where(bk, e2, e0)
            perm[:, e2 ^ 1] = np.where(bk, e1, e3)
            perm[:, e3 ^ 1] = np.where(bk, e0, e2)
        perm += np.arange(len(states), dtype=np.int32)[:, None] * n_ends
        perm = perm.ravel()
        low = np.tile(ident.astype(np.int16), len(states))
        for step in range(steps):
            np.minimum(low, low[perm], out=low)
            if step + 1 < steps:
                perm = perm[perm]
        low = low.reshape(len(states), n_ends)
        cycles = (low == ident).sum(axis=1)
        # every loop is two cycles, one per direction of travel
        np.add.at(out, (bits.sum(axis=1), cycles // 2), 1)
    return out


def bracket_naive(d: Diagram, max_crossings: int = DEFAULT_MAX_CROSSINGS, threads: int = 1) -> LaurentPoly:
    """Sum of A^(#A - #B) * delta^(loops - 1) over all 2^c smoothing states.

    States are enumerated in vectorized batches; the loops of a state are the
    cycles of (smoothing pairing) o (arc pairing) on arc ends.
    """
    _require_link(d)
    ix = d.indexed
    c = len(ix.crossings)
    if c > max_crossings:
        raise ResourceLimitError(f"{c} crossings exceeds the naive bracket limit of {max_crossings}")
    if c == 0:
        return DELTA ** (ix.free_loops - 1) if ix.free_loops else ONE
    ends = _end_tables(d)
    n_ends = 2 * ix.n_arcs
    split = min(c, (threads - 1).bit_length()) if threads > 1 else 0
    jobs = [(ends, n_ends, p, split) for p in range(1 << split)]
    if len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_counts_for_prefix, *zip(*jobs)))
    else:
        parts = [_counts_for_prefix(*jobs[0])]
    total = sum(parts)
    result = LaurentPoly()
    for loops in range(total.shape[1]):
        terms = {c - 2 * nb: int(total[nb, loops]) for nb in range(c + 1) if total[nb, loops]}
        if terms:
            result = result + LaurentPoly(terms) * DELTA ** (loops + ix.free_loops - 1)
    return result


def bracket_unionfind(d: Diagram, max_crossings: int = 16) -> LaurentPoly:
    """Per-state union-find sum; slow, kept as an independent reference."""
    _require_link(d)
    ix = d.indexed
    c = len(ix.crossings)
    if c > max_crossings:
        raise ResourceLimitError(f"{c} crossings exceeds the union-find reference limit of {max_crossings}")
    total: dict[tuple[int, int], int] = defaultdict(int)
    pairs = (A_SMOOTHING, B_SMOOTHING)
    for state in itertools.product((0, 1), repeat=c):
        parent = list(range(ix.n_arcs))
        comps = ix.n_arcs
        for s, x in zip(state, ix.crossings):
            for i, j in pairs[s]:
                ru, rv = _find(parent, x[i]), _find(parent, x[j])
                if ru != rv:
                    parent[ru] = rv
                    comps -= 1
        total[(c - 2 * sum(state), comps + ix.free_loops)] += 1
    result = LaurentPoly()
    for (e, loops), v in total.items():
        result = result + LaurentPoly({e: v}) * DELTA ** (loops - 1)
    return result


def _sweep_order(xs: tuple[tuple[int, ...], ...]) -> list[int]:
    # greedily absorb the crossing sharing most strands with the open boundary
    remaining = set(range(len(xs)))
    order = []
    seen_once: set[int] = set()
    while remaining:
        best = max(
            remaining,
            key=lambda k: (sum(1 for a in set(xs[k]) if a in seen_once), -len(set(xs[k]) - seen_once), -k),
        )
        remaining.remove(best)
        order.append(best)
        for a in xs[best]:
            if a in seen_once:
                seen_once.discard(a)
            else:
                seen_once.add(a)
        # an arc with both ends at this crossing appears twice and cancels itself
    return order


def _join(pairing: dict[int, int], u: int, v: int) -> int:
    """Connect strand ends ``u`` and ``v``; returns 1 if a loop closed."""
    if u == v:
        return 1
    if pairing.get(u) == v:
        del pairing[u], pairing[v]
        return 1
    if u in pairing:
        fu = pairing.pop(u)
        del pairing[fu]
    else:
        fu = u
    if v in pairing:
        fv = pairing.pop(v)
        del pairing[fv]
    else:
        fv = v
    pairing[fu] = fv
    pairing[fv] = fu
    return 0


def bracket_fast(d: Diagram) -> LaurentPoly:
    """Bracket by sequential contraction over boundary pairings."""
    _require_link(d)
    ix = d.indexed
    xs = ix.crossings
    if not xs:
        return DELTA ** (ix.free_loops - 1) if ix.free_loops else ONE
    a_mono = LaurentPoly.monomial(1, 1)
    b_mono = LaurentPoly.monomial(1, -1)
    delta_pows = [ONE, DELTA, DELTA * DELTA, DELTA ** 3, DELTA ** 4]
    # key: (sorted pairs of open strand ends, whether a loop has been closed yet)
    states: dict[tuple, LaurentPoly] = {((), False): ONE}
    for k in _sweep_order(xs):
        x = xs[k]
        nxt: dict[tuple, LaurentPoly] = {}
        for (key, closed), w in states.items():
            for pairs, mono in ((A_SMOOTHING, a_mono), (B_SMOOTHING, b_mono)):
                pairing: dict[int, int] = {}
                for p, q in key:
                    pairing[p] = q
                    pairing[q] = p
                loops = 0
                for i, j in pairs:
                    loops += _join(pairing, x[i], x[j])
                was_closed = closed
                if loops and not closed:
                    loops -= 1
                    closed = True
                factor = mono * delta_pows[loops] if loops else mono
                new_key = (tuple(sorted((p, q) for p, q in pairing.items() if p < q)), closed)
                term = w * factor
                prev = nxt.get(new_key)
                nxt[new_key] = term if prev is None else prev + term
                closed = was_closed
        states = {k2: v for k2, v in nxt.items() if not v.is_zero()}
    total = LaurentPoly()
    for (key, closed), w in states.items():
        if key:
            raise AssertionError("open strands left after absorbing every crossing")
        total = total + w
    return total * DELTA ** ix.free_loops if ix.free_loops else total


def kauffman_bracket(
    d: Diagram,
    method: str = "auto",
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
    threads: int | None = None,
) -> LaurentPoly:
    """Kauffman bracket with <O> = 1.  ``method`` is ``naive``, ``fast`` or
    ``auto`` (fast)."""
    if method == "naive":
        return bracket_naive(d, max_crossings=max_crossings, threads=threads or 1)
    if method in ("fast", "auto"):
        return bracket_fast(d)
    raise ValueError(f"unknown bracket method {method!r}")


def jones(d: Diagram, **kwargs) -> LaurentPoly:
    """(-A^3)^(-writhe) * <D>."""
    w = writhe(d)
    sign = -1 if w % 2 else 1
    return kauffman_bracket(d, **kwargs).shift(-3 * w) * sign


def default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))
