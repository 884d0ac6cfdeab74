"""Naive reference implementations used to cross-check the engine.

Everything here is written the slow, obvious way (explicit loops, BFS,
no shared code with the package) so a bug in the engine cannot hide in
its oracle.
"""

from __future__ import annotations


def sentence_count(sentence, term) -> int:
    return sum(1 for t in sentence if t == term)


def brute_assoc(sentences) -> dict[tuple[str, str], int]:
    """min-count co-occurrence per unordered pair, positive entries only."""
    terms = sorted({t for s in sentences for t in s})
    table: dict[tuple[str, str], int] = {}
    for i, a in enumerate(terms):
        for b in terms[i + 1 :]:
            total = 0
            for s in sentences:
                ca, cb = sentence_count(s, a), sentence_count(s, b)
                total += ca if ca < cb else cb
            if total > 0:
                table[(a, b)] = total
    return table


def brute_frequencies(sentences) -> dict[str, int]:
    freq: dict[str, int] = {}
    for s in sentences:
        for t in s:
            freq[t] = freq.get(t, 0) + 1
    return freq


def brute_foundations(sentences, anchors, nf) -> list[str]:
    freq = brute_frequencies(sentences)
    ranked = sorted(
        [t for t in freq if t not in anchors], key=lambda t: (-freq[t], t)
    )
    return ranked[:nf]


def brute_islands(foundations, sentences, nl) -> list[tuple[str, ...]]:
    assoc = brute_assoc(sentences)
    pairs = [
        (a, b, w)
        for (a, b), w in assoc.items()
        if a in foundations and b in foundations
    ]
    pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    pairs = pairs[:nl]
    adjacency: dict[str, set[str]] = {t: set() for t in foundations}
    for a, b, _ in pairs:
        adjacency[a].add(b)
        adjacency[b].add(a)
    islands = []
    unvisited = set(foundations)
    while unvisited:
        start = min(unvisited)
        component = {start}
        queue = [start]
        while queue:
            node = queue.pop()
            for nxt in adjacency[node]:
                if nxt not in component:
                    component.add(nxt)
                    queue.append(nxt)
        unvisited -= component
        islands.append(tuple(sorted(component)))
    islands.sort(key=lambda g: g[0])
    return islands


def brute_key_scores(sentences, islands, anchors) -> dict[str, float]:
    foundations = {t for g in islands for t in g}
    all_terms = sorted({t for s in sentences for t in s})
    neighbors = []
    for g in islands:
        total = 0
        for s in sentences:
            g_count = sum(1 for t in s if t in g)
            non_g = sum(1 for t in s if t not in g)
            if g_count > 0 and non_g > 0:
                total += g_count
        neighbors.append(total)
    scores = {}
    for w in all_terms:
        if w in foundations or w in anchors:
            continue
        product = 1.0
        for gi, g in enumerate(islands):
            based = 0
            for s in sentences:
                w_count = sentence_count(s, w)
                g_count = sum(1 for t in s if t in g)
                based += w_count if w_count < g_count else g_count
            product *= 1.0 - based / max(neighbors[gi], 1)
        scores[w] = 1.0 - product
    return scores
