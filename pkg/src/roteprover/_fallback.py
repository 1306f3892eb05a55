"""Pure-Python twins of the compiled kernels (same signatures and results)."""
from __future__ import annotations

import numpy as np


def subset_construction(indptr, indices, nred: int, start, accepting, max_states: int = 50_000_000):
    """Determinize a nondeterministic automaton given in CSR form."""
    indptr = np.asarray(indptr, dtype=np.int64).tolist()
    indices = np.asarray(indices, dtype=np.int64).tolist()
    acc = np.asarray(accepting, dtype=bool)
    n = acc.shape[0]
    succ = [[indices[indptr[s * nred + r]:indptr[s * nred + r + 1]] for r in range(nred)] for s in range(n)]
    first = tuple(sorted(set(int(s) for s in start)))
    ids = {first: 0}
    subsets = [first]
    rows = []
    head = 0
    while head < len(subsets):
        if len(subsets) > max_states:
            raise MemoryError(f"subset construction exceeded {max_states} states")
        S = subsets[head]
        head += 1
        row = []
        for r in range(nred):
            members = set()
            for s in S:
                members.update(succ[s][r])
            if not members:
                row.append(-1)
                continue
            key = tuple(sorted(members))
            got = ids.get(key)
            if got is None:
                got = len(subsets)
                ids[key] = got
                subsets.append(key)
            row.append(got)
        rows.append(row)
    table = np.array(rows, dtype=np.int32).reshape(len(subsets), nred)
    labels = np.array([int(acc[list(S)].any()) for S in subsets], dtype=np.int32)
    return table, labels


def refine(table: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Coarsest partition compatible with labels and transitions (Moore)."""
    _, classes = np.unique(labels, return_inverse=True)
    classes = classes.astype(np.int32)
    n_classes = int(classes.max()) + 1 if classes.size else 0
    while True:
        ext = np.append(classes, np.int32(-1))
        sig = np.empty((table.shape[0], table.shape[1] + 1), dtype=np.int32)
        sig[:, 0] = classes
        sig[:, 1:] = ext[table]
        rows = np.ascontiguousarray(sig).view(np.dtype((np.void, sig.dtype.itemsize * sig.shape[1])))
        _, new = np.unique(rows.ravel(), return_inverse=True)
        new = new.astype(np.int32)
        count = int(new.max()) + 1
        if count == n_classes:
            return new
        classes, n_classes = new, count


def search(num: int, den: int, strict: bool, max_len: int, first_fixed: bool = True,
           want_words: bool = True, max_nodes: int = 0):
    """Depth-first enumeration of binary Rote words avoiding the exponent bound.

    ``runs[L][p]`` is the length of the common suffix of ``w[:L]`` and
    ``w[:L-p]``: the longest suffix with period p is ``runs + p`` long, and
    the longest suffix occurring earlier is ``max(runs)`` long, so only the
    factors longer than that are new.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    word = [0] * (max_len + 2)
    runs = [[0] * (max_len + 2) for _ in range(max_len + 2)]
    rho = [0] * (max_len + 2)
    counts = [0] * (max_len + 2)
    maximal: list[str] = []
    state = {"nodes": 0, "max_depth": 0, "truncated": False, "exhausted": False}

    def extend(L: int, c: int) -> int:
        n = L + 1
        old, new = runs[L], runs[n]
        word[L] = c
        lrs = 0
        for p in range(1, n):
            if word[n - 1 - p] == c:
                run = (old[p] if p < L else 0) + 1
            else:
                run = 0
            new[p] = run
            if run > lrs:
                lrs = run
            if run:
                lhs, rhs = den * (run + p), num * p
                if lhs >= rhs if strict else lhs > rhs:
                    return -1
        for m in range(lrs + 1, n + 1):
            if rho[m] + 1 > 2 * m:
                return -1
        for m in range(lrs + 1, n + 1):
            rho[m] += 1
        return lrs

    def retract(n: int, lrs: int):
        for m in range(lrs + 1, n + 1):
            rho[m] -= 1

    def dfs(L: int):
        state["nodes"] += 1
        counts[L] += 1
        state["max_depth"] = max(state["max_depth"], L)
        if max_nodes > 0 and state["nodes"] > max_nodes:
            state["exhausted"] = True
            return
        children = 0
        for c in (0, 1):
            lrs = extend(L, c)
            if lrs < 0:
                continue
            children += 1
            if L + 1 > max_len:
                state["truncated"] = True
                retract(L + 1, lrs)
                continue
            dfs(L + 1)
            retract(L + 1, lrs)
            if state["exhausted"]:
                return
        if children == 0 and want_words:
            maximal.append("".join(map(str, word[:L])))

    for first in (0,) if first_fixed else (0, 1):
        lrs = extend(0, first)
        dfs(1)
        retract(1, lrs)
        if state["exhausted"]:
            break
    return counts[: max_len + 1], maximal, state["max_depth"], state["truncated"], state["exhausted"]
