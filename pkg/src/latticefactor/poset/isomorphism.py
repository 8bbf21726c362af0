"""Order isomorphisms between finite posets by refined backtracking."""

import logging
from collections import Counter
from typing import Dict, List, Optional, Tuple

import numpy as np

from .core import Poset

logger = logging.getLogger(__name__)


def is_isomorphic(p: Poset, q: Poset) -> Optional[Dict[int, int]]:
    """Return an order isomorphism ``P -> Q`` as a dict, or ``None``."""
    if p.size != q.size or p.height != q.height:
        return None
    if Counter(p.rank.tolist()) != Counter(q.rank.tolist()):
        return None
    if len(p.covers) != len(q.covers):
        return None

    # Refine both posets jointly so colour ids are comparable.
    colours_p, colours_q = _joint_signatures(p, q)
    if Counter(colours_p) != Counter(colours_q):
        return None

    by_colour: Dict[Tuple, np.ndarray] = {}
    for c in set(colours_q):
        by_colour[c] = np.array([y for y in range(q.size) if colours_q[y] == c], dtype=np.int64)

    order = sorted(range(p.size), key=lambda x: (int(p.rank[x]), len(by_colour[colours_p[x]]), x))
    source = np.empty(p.size, dtype=np.int64)
    target = np.empty(p.size, dtype=np.int64)
    used = np.zeros(q.size, dtype=bool)

    def candidates(depth: int) -> List[int]:
        x = order[depth]
        pool = by_colour[colours_p[x]]
        pool = pool[~used[pool]]
        if depth and pool.size:
            src = source[:depth]
            dst = target[:depth]
            up_ok = (q.leq[pool][:, dst] == p.leq[x, src][None, :]).all(axis=1)
            down_ok = (q.leq[dst][:, pool].T == p.leq[src, x][None, :]).all(axis=1)
            pool = pool[up_ok & down_ok]
        return pool.tolist()

    stack: List[List[int]] = [candidates(0)] if p.size else []
    depth = 0
    steps = 0
    while stack:
        options = stack[-1]
        if not options:
            stack.pop()
            depth -= 1
            if depth >= 0:
                used[target[depth]] = False
            continue
        choice = options.pop(0)
        steps += 1
        source[depth] = order[depth]
        target[depth] = choice
        used[choice] = True
        if depth + 1 == p.size:
            mapping = {int(source[k]): int(target[k]) for k in range(p.size)}
            logger.debug("isomorphism found after %d assignments", steps)
            return mapping
        depth += 1
        stack.append(candidates(depth))
    if p.size == 0:
        return {}
    logger.debug("no isomorphism after %d assignments", steps)
    return None


def _joint_signatures(p: Poset, q: Poset) -> Tuple[List[Tuple], List[Tuple]]:
    colours_p = _base_colours(p)
    colours_q = _base_colours(q)
    count = len(set(colours_p) | set(colours_q))
    # refine until the number of colour classes stops growing
    while True:
        refined_p = _refine(p, colours_p)
        refined_q = _refine(q, colours_q)
        palette = {c: k for k, c in enumerate(sorted(set(refined_p) | set(refined_q)))}
        colours_p = [(palette[c],) for c in refined_p]
        colours_q = [(palette[c],) for c in refined_q]
        if len(palette) == count:
            return colours_p, colours_q
        count = len(palette)


def _base_colours(poset: Poset) -> List[Tuple]:
    up_sizes = poset.leq.sum(axis=1)
    down_sizes = poset.leq.sum(axis=0)
    return [
        (
            int(poset.rank[x]),
            len(poset.upper_covers[x]),
            len(poset.lower_covers[x]),
            int(up_sizes[x]),
            int(down_sizes[x]),
        )
        for x in range(poset.size)
    ]


def _refine(poset: Poset, colours: List[Tuple]) -> List[Tuple]:
    return [
        (
            colours[x],
            tuple(sorted(colours[y] for y in poset.upper_covers[x])),
            tuple(sorted(colours[y] for y in poset.lower_covers[x])),
        )
        for x in range(poset.size)
    ]


def verify_isomorphism(p: Poset, q: Poset, mapping: Dict[int, int]) -> bool:
    """Check that ``mapping`` is a bijection that preserves and reflects order."""
    if len(mapping) != p.size or sorted(mapping.values()) != list(range(q.size)):
        return False
    image = np.array([mapping[x] for x in range(p.size)], dtype=np.int64)
    return bool(np.array_equal(p.leq, q.leq[np.ix_(image, image)]))
