"""Slow, obviously-correct reference implementations used only by the tests.

Nothing here imports the detection or search code paths under test.
"""

from itertools import permutations, product

from flashbow.detect import UNBOUNDED


def out_edges(ct):
    n = ct.n
    return {u: [(v, int(ct.colors[u - 1, v - 1])) for v in range(1, n + 1) if ct.colors[u - 1, v - 1]]
            for u in range(1, n + 1)}


def all_walks(ct, max_len, accept):
    """Every walk of length <= max_len whose colour sequence satisfies ``accept`` prefix-wise."""
    adj = out_edges(ct)
    stack = [((v,), ()) for v in range(1, ct.n + 1)]
    while stack:
        walk, cols = stack.pop()
        yield walk, cols
        if len(cols) == max_len:
            continue
        for w, c in adj[walk[-1]]:
            if accept(cols, c):
                stack.append((walk + (w,), cols + (c,)))


def brute_longest_flash(ct):
    # a monochromatic walk with n edges repeats a vertex, hence a monochromatic cycle
    best = 0
    for _, cols in all_walks(ct, ct.n, lambda cols, c: not cols or cols[-1] == c):
        if len(cols) >= ct.n:
            return UNBOUNDED
        best = max(best, len(cols))
    return best


def brute_longest_rainbow(ct, cap):
    best = 0
    for _, cols in all_walks(ct, cap, lambda cols, c: c not in cols):
        best = max(best, len(cols))
    return best


def brute_flash_free(ct, l, k):
    f = brute_longest_flash(ct)
    return f is not UNBOUNDED and f < l and brute_longest_rainbow(ct, k) < k


def brute_m_flash_colors(ct, m):
    sets = [set() for _ in range(ct.n)]
    for walk, cols in all_walks(ct, m, lambda cols, c: not cols or cols[-1] == c):
        if len(cols) == m:
            for v in walk:
                sets[v - 1].add(cols[0])
    return tuple(frozenset(s) for s in sets)


def brute_rainbow_endings(ct, max_len):
    """(end vertex, frozenset of colours) for every rainbow walk of length <= max_len."""
    return {(walk[-1], frozenset(cols)) for walk, cols in all_walks(ct, max_len, lambda cols, c: c not in cols)}


def brute_in_robust_radius(ct, v, cap):
    ends = brute_rainbow_endings(ct, cap)
    palette = {c for row in out_edges(ct).values() for _, c in row}
    for r in range(cap, -1, -1):
        here = [cols for (w, cols) in ends if w == v and len(cols) == r]
        if here and all(any(a not in cols for cols in here) for a in palette):
            return r
    raise AssertionError("radius 0 always qualifies")


def grid_color_oracle(l, k):
    """Colours of the grid construction, recomputed straight from the labels."""
    labels = list(product(range(1, l + 1), repeat=k - 1))
    colors = {}
    for i, x in enumerate(labels):
        for j in range(i + 1, len(labels)):
            y = labels[j]
            colors[(i + 1, j + 1)] = next(idx + 1 for idx in range(k - 1) if x[idx] < y[idx])
    return labels, colors


def bell_numbers(count):
    """Bell numbers B(1..count) via the Bell triangle."""
    row = [1]
    out = []
    for _ in range(count):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


def composition_count(l, k):
    """Number of strings in [l]^(k-1) with entry sum floor(l(k-1)/2), by dynamic programming on sums."""
    target = l * (k - 1) // 2
    ways = {0: 1}
    for _ in range(k - 1):
        nxt = {}
        for s, w in ways.items():
            for x in range(1, l + 1):
                nxt[s + x] = nxt.get(s + x, 0) + w
        ways = nxt
    return ways.get(target, 0)


def burnside_tournament_classes(n):
    """Isomorphism classes of tournaments on n vertices via Burnside's lemma over all orientations."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    fixed_total = 0
    perms = list(permutations(range(n)))
    orientations = []
    for bits in product((0, 1), repeat=len(pairs)):
        edges = {(i, j) if b == 0 else (j, i) for (i, j), b in zip(pairs, bits)}
        orientations.append(edges)
    for p in perms:
        for edges in orientations:
            if all((p[u], p[v]) in edges for u, v in edges):
                fixed_total += 1
    assert fixed_total % len(perms) == 0
    return fixed_total // len(perms)
