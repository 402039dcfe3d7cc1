"""Maximum-weight matching on general graphs (Edmonds' blossom algorithm).

Primal-dual O(n^3) formulation after Galil (1986): vertex and blossom dual
variables, shrinking of odd cycles into blossoms, and expansion of blossoms
whose dual reaches zero. Weights must be integers so that all dual
arithmetic stays exact.

``MatchStats.edge_scans`` counts every edge examined while growing
alternating trees; it is the work measure used for scaling fits.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class MatchStats:
    edge_scans: int = 0
    stages: int = 0
    blossoms: int = 0


def max_weight_matching(edges, max_cardinality: bool = False, stats: MatchStats | None = None) -> list[int]:
    """Return ``mate`` with ``mate[v]`` the partner of ``v`` or -1.

    ``edges`` is a sequence of ``(i, j, w)`` with distinct integer endpoints.
    With ``max_cardinality`` the matching has maximum size first and maximum
    weight among those.
    """
    if stats is None:
        stats = MatchStats()
    edges = [(int(i), int(j), int(w)) for i, j, w in edges]
    if not edges:
        return []
    n_edge = len(edges)
    n = 1 + max(max(i, j) for i, j, _ in edges)
    for i, j, _ in edges:
        if i == j or i < 0 or j < 0:
            raise ValueError(f"invalid edge ({i}, {j})")
    max_w = max(0, max(w for _, _, w in edges))

    # endpoint p of edge k: 2k -> edges[k][0], 2k+1 -> edges[k][1]
    endpoint = [edges[p // 2][p % 2] for p in range(2 * n_edge)]
    neighb_end: list[list[int]] = [[] for _ in range(n)]
    for k, (i, j, _) in enumerate(edges):
        neighb_end[i].append(2 * k + 1)
        neighb_end[j].append(2 * k)

    mate = [-1] * n  # remote endpoint of the matched edge
    # 0 free, 1 S (outer), 2 T (inner); bit 4 marks scanBlossom breadcrumbs
    label = [0] * (2 * n)
    label_end = [-1] * (2 * n)
    in_blossom = list(range(n))
    parent = [-1] * (2 * n)
    childs: list[list[int] | None] = [None] * (2 * n)
    base = list(range(n)) + [-1] * n
    endps: list[list[int] | None] = [None] * (2 * n)
    best_edge = [-1] * (2 * n)
    blossom_best: list[list[int] | None] = [None] * (2 * n)
    unused = list(range(n, 2 * n))
    dual = [max_w] * n + [0] * n
    allowed = [False] * n_edge
    queue: list[int] = []

    def slack(k: int) -> int:
        i, j, w = edges[k]
        return dual[i] + dual[j] - 2 * w

    def leaves(b: int):
        if b < n:
            yield b
        else:
            for t in childs[b]:
                if t < n:
                    yield t
                else:
                    yield from leaves(t)

    def assign_label(w: int, t: int, p: int) -> None:
        b = in_blossom[w]
        label[w] = label[b] = t
        label_end[w] = label_end[b] = p
        best_edge[w] = best_edge[b] = -1
        if t == 1:
            queue.extend(leaves(b))
        elif t == 2:
            bb = base[b]
            assign_label(endpoint[mate[bb]], 1, mate[bb] ^ 1)

    def scan_blossom(v: int, w: int) -> int:
        # trace back from v and w; return the common base or -1 (augmenting path)
        path = []
        found = -1
        while v != -1 or w != -1:
            b = in_blossom[v]
            if label[b] & 4:
                found = base[b]
                break
            path.append(b)
            label[b] = 5
            if label_end[b] == -1:
                v = -1
            else:
                v = endpoint[label_end[b]]
                b = in_blossom[v]
                v = endpoint[label_end[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return found

    def add_blossom(bse: int, k: int) -> None:
        v, w, _ = edges[k]
        bb = in_blossom[bse]
        bv = in_blossom[v]
        bw = in_blossom[w]
        b = unused.pop()
        stats.blossoms += 1
        base[b] = bse
        parent[b] = -1
        parent[bb] = b
        path: list[int] = []
        eps: list[int] = []
        childs[b] = path
        endps[b] = eps
        while bv != bb:
            parent[bv] = b
            path.append(bv)
            eps.append(label_end[bv])
            v = endpoint[label_end[bv]]
            bv = in_blossom[v]
        path.append(bb)
        path.reverse()
        eps.reverse()
        eps.append(2 * k)
        while bw != bb:
            parent[bw] = b
            path.append(bw)
            eps.append(label_end[bw] ^ 1)
            w = endpoint[label_end[bw]]
            bw = in_blossom[w]
        label[b] = 1
        label_end[b] = label_end[bb]
        dual[b] = 0
        for v in leaves(b):
            if label[in_blossom[v]] == 2:
                queue.append(v)
            in_blossom[v] = b
        best_to = [-1] * (2 * n)
        for bv in path:
            if blossom_best[bv] is None:
                lists = [[p // 2 for p in neighb_end[v]] for v in leaves(bv)]
            else:
                lists = [blossom_best[bv]]
            for lst in lists:
                for kk in lst:
                    i, j, _ = edges[kk]
                    if in_blossom[j] == b:
                        i, j = j, i
                    bj = in_blossom[j]
                    if bj != b and label[bj] == 1 and (best_to[bj] == -1 or slack(kk) < slack(best_to[bj])):
                        best_to[bj] = kk
            blossom_best[bv] = None
            best_edge[bv] = -1
        blossom_best[b] = [kk for kk in best_to if kk != -1]
        best_edge[b] = -1
        for kk in blossom_best[b]:
            if best_edge[b] == -1 or slack(kk) < slack(best_edge[b]):
                best_edge[b] = kk

    def expand_blossom(b: int, endstage: bool) -> None:
        for s in childs[b]:
            parent[s] = -1
            if s < n:
                in_blossom[s] = s
            elif endstage and dual[s] == 0:
                expand_blossom(s, endstage)
            else:
                for v in leaves(s):
                    in_blossom[v] = s
        if not endstage and label[b] == 2:
            # relabel the even-length path from the entry child to the base
            entry = in_blossom[endpoint[label_end[b] ^ 1]]
            j = childs[b].index(entry)
            if j & 1:
                j -= len(childs[b])
                jstep, trick = 1, 0
            else:
                jstep, trick = -1, 1
            p = label_end[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[b][j - trick] ^ trick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowed[endps[b][j - trick] // 2] = True
                j += jstep
                p = endps[b][j - trick] ^ trick
                allowed[p // 2] = True
                j += jstep
            bv = childs[b][j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            label_end[endpoint[p ^ 1]] = label_end[bv] = p
            best_edge[bv] = -1
            j += jstep
            while childs[b][j] != entry:
                bv = childs[b][j]
                if label[bv] == 1:
                    j += jstep
                    continue
                v = -1
                for v in leaves(bv):
                    if label[v] != 0:
                        break
                if label[v] != 0:
                    label[v] = 0
                    label[endpoint[mate[base[bv]]]] = 0
                    assign_label(v, 2, label_end[v])
                j += jstep
        label[b] = label_end[b] = -1
        childs[b] = endps[b] = None
        base[b] = -1
        blossom_best[b] = None
        best_edge[b] = -1
        unused.append(b)

    def augment_blossom(b: int, v: int) -> None:
        # swap matched/unmatched edges inside b so that v becomes its base
        t = v
        while parent[t] != b:
            t = parent[t]
        if t >= n:
            augment_blossom(t, v)
        i = j = childs[b].index(t)
        if i & 1:
            j -= len(childs[b])
            jstep, trick = 1, 0
        else:
            jstep, trick = -1, 1
        while j != 0:
            j += jstep
            t = childs[b][j]
            p = endps[b][j - trick] ^ trick
            if t >= n:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = childs[b][j]
            if t >= n:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        childs[b] = childs[b][i:] + childs[b][:i]
        endps[b] = endps[b][i:] + endps[b][:i]
        base[b] = base[childs[b][0]]

    def augment_matching(k: int) -> None:
        v, w, _ = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = in_blossom[s]
                if bs >= n:
                    augment_blossom(bs, s)
                mate[s] = p
                if label_end[bs] == -1:
                    break
                t = endpoint[label_end[bs]]
                bt = in_blossom[t]
                s = endpoint[label_end[bt]]
                j = endpoint[label_end[bt] ^ 1]
                if bt >= n:
                    augment_blossom(bt, j)
                mate[j] = label_end[bt]
                p = label_end[bt] ^ 1

    for _ in range(n):
        stats.stages += 1
        label[:] = [0] * (2 * n)
        best_edge[:] = [-1] * (2 * n)
        blossom_best[n:] = [None] * n
        allowed[:] = [False] * n_edge
        queue[:] = []
        for v in range(n):
            if mate[v] == -1 and label[in_blossom[v]] == 0:
                assign_label(v, 1, -1)

        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                for p in neighb_end[v]:
                    stats.edge_scans += 1
                    k = p // 2
                    w = endpoint[p]
                    if in_blossom[v] == in_blossom[w]:
                        continue
                    if not allowed[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowed[k] = True
                    if allowed[k]:
                        if label[in_blossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[in_blossom[w]] == 1:
                            bse = scan_blossom(v, w)
                            if bse >= 0:
                                add_blossom(bse, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            label_end[w] = p ^ 1
                    elif label[in_blossom[w]] == 1:
                        b = in_blossom[v]
                        if best_edge[b] == -1 or kslack < slack(best_edge[b]):
                            best_edge[b] = k
                    elif label[w] == 0:
                        if best_edge[w] == -1 or kslack < slack(best_edge[w]):
                            best_edge[w] = k
            if augmented:
                break

            # no augmenting path yet: pick the dual step
            delta_type = -1
            delta = delta_edge = delta_blossom = None
            if not max_cardinality:
                delta_type = 1
                delta = min(dual[:n])
            for v in range(n):
                if label[in_blossom[v]] == 0 and best_edge[v] != -1:
                    dd = slack(best_edge[v])
                    if delta_type == -1 or dd < delta:
                        delta, delta_type, delta_edge = dd, 2, best_edge[v]
            for b in range(2 * n):
                if parent[b] == -1 and label[b] == 1 and best_edge[b] != -1:
                    dd = slack(best_edge[b]) // 2
                    if delta_type == -1 or dd < delta:
                        delta, delta_type, delta_edge = dd, 3, best_edge[b]
            for b in range(n, 2 * n):
                if base[b] >= 0 and parent[b] == -1 and label[b] == 2 and (delta_type == -1 or dual[b] < delta):
                    delta, delta_type, delta_blossom = dual[b], 4, b
            if delta_type == -1:
                delta_type = 1
                delta = max(0, min(dual[:n]))

            for v in range(n):
                lb = label[in_blossom[v]]
                if lb == 1:
                    dual[v] -= delta
                elif lb == 2:
                    dual[v] += delta
            for b in range(n, 2 * n):
                if base[b] >= 0 and parent[b] == -1:
                    if label[b] == 1:
                        dual[b] += delta
                    elif label[b] == 2:
                        dual[b] -= delta

            if delta_type == 1:
                break
            elif delta_type == 2:
                allowed[delta_edge] = True
                i, j, _ = edges[delta_edge]
                if label[in_blossom[i]] == 0:
                    i, j = j, i
                queue.append(i)
            elif delta_type == 3:
                allowed[delta_edge] = True
                i, j, _ = edges[delta_edge]
                queue.append(i)
            else:
                expand_blossom(delta_blossom, False)

        if not augmented:
            break
        for b in range(n, 2 * n):
            if parent[b] == -1 and base[b] >= 0 and label[b] == 1 and dual[b] == 0:
                expand_blossom(b, True)

    return [endpoint[m] if m >= 0 else -1 for m in mate]
