"""Compiled inner loops of the local search.

Variables are 0-based here.  A literal is stored as (variable, sign) with
sign 1 for a positive literal.  Ages and neighborhood checking both come from
timestamps: ``step`` counts flips since the last restart, ``last_flip[v]`` is
the step at which v last flipped (0 if never), and ``group_time[g]`` is the
step at which a member of group g last flipped.  Then

    age(v) = step - last_flip[v]
    nc(v)  = any(group_time[g] > last_flip[v] for g in groups(v))

which matches "flip v: nc(v) = False, nc(u) = True for each neighbor u"
without touching every neighbor on each flip.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def seed_rng(seed):
    np.random.seed(seed)


@njit(cache=True)
def random_bits(n):
    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        out[i] = np.random.randint(0, 2)
    return out


@njit(cache=True, inline="always")
def _score_part(lit_true, t):
    if lit_true:
        return -1 if t == 1 else 0
    return 1 if t == 0 else 0


@njit(cache=True, inline="always")
def _sub_part(lit_true, t):
    if lit_true:
        return -1 if t == 2 else 0
    return 1 if t == 1 else 0


@njit(cache=True)
def _set_good(u, score, good, good_pos, counts):
    # counts[1] is the size of the good list (variables with score > 0)
    if score[u] > 0:
        if good_pos[u] < 0:
            good_pos[u] = counts[1]
            good[counts[1]] = u
            counts[1] += 1
    elif good_pos[u] >= 0:
        last = good[counts[1] - 1]
        pos = good_pos[u]
        good[pos] = last
        good_pos[last] = pos
        good_pos[u] = -1
        counts[1] -= 1


@njit(cache=True)
def init_state(assign, cl_start, cl_var, cl_sign, true_count, score, subscore,
               unsat, unsat_pos, good, good_pos, last_flip, group_time, counts):
    """Recompute everything from ``assign``; resets ages and neighborhood flags."""
    m = len(cl_start) - 1
    score[:] = 0
    subscore[:] = 0
    unsat_pos[:] = -1
    good_pos[:] = -1
    last_flip[:] = 0
    group_time[:] = 1
    counts[0] = 0
    counts[1] = 0
    counts[2] = 0
    for c in range(m):
        t = 0
        for j in range(cl_start[c], cl_start[c + 1]):
            if cl_sign[j] == assign[cl_var[j]]:
                t += 1
        true_count[c] = t
        for j in range(cl_start[c], cl_start[c + 1]):
            u = cl_var[j]
            lt = cl_sign[j] == assign[u]
            score[u] += _score_part(lt, t)
            subscore[u] += _sub_part(lt, t)
        if t == 0:
            unsat_pos[c] = counts[0]
            unsat[counts[0]] = c
            counts[0] += 1
    for u in range(len(score)):
        _set_good(u, score, good, good_pos, counts)


@njit(cache=True)
def flip(v, assign, cl_start, cl_var, cl_sign, occ_start, occ_clause, occ_sign, grp_start, grp_id,
         true_count, score, subscore, unsat, unsat_pos, good, good_pos, last_flip, group_time, counts):
    """Flip v, updating scores from each clause's true-count transition.

    Flipping negates v's own score and subscore, so only the other variables
    of each touched clause need case analysis.
    """
    org_score = score[v]
    org_sub = subscore[v]
    new = 1 - assign[v]
    assign[v] = new
    for o in range(occ_start[v], occ_start[v + 1]):
        c = occ_clause[o]
        a = cl_start[c]
        b = cl_start[c + 1]
        t = true_count[c]
        if occ_sign[o] == new:
            true_count[c] = t + 1
            if t == 0:
                last = unsat[counts[0] - 1]
                pos = unsat_pos[c]
                unsat[pos] = last
                unsat_pos[last] = pos
                unsat_pos[c] = -1
                counts[0] -= 1
                for j in range(a, b):
                    u = cl_var[j]
                    if u != v:
                        score[u] -= 1
                        subscore[u] += 1
                        _set_good(u, score, good, good_pos, counts)
            elif t == 1:
                for j in range(a, b):
                    u = cl_var[j]
                    if u != v:
                        if cl_sign[j] == assign[u]:
                            score[u] += 1
                            subscore[u] -= 1
                            _set_good(u, score, good, good_pos, counts)
                        else:
                            subscore[u] -= 1
            elif t == 2:
                for j in range(a, b):
                    u = cl_var[j]
                    if u != v and cl_sign[j] == assign[u]:
                        subscore[u] += 1
        else:
            true_count[c] = t - 1
            if t == 1:
                unsat_pos[c] = counts[0]
                unsat[counts[0]] = c
                counts[0] += 1
                for j in range(a, b):
                    u = cl_var[j]
                    if u != v:
                        score[u] += 1
                        subscore[u] -= 1
                        _set_good(u, score, good, good_pos, counts)
            elif t == 2:
                for j in range(a, b):
                    u = cl_var[j]
                    if u != v:
                        if cl_sign[j] == assign[u]:
                            score[u] -= 1
                            subscore[u] += 1
                            _set_good(u, score, good, good_pos, counts)
                        else:
                            subscore[u] += 1
            elif t == 3:
                for j in range(a, b):
                    u = cl_var[j]
                    if u != v and cl_sign[j] == assign[u]:
                        subscore[u] -= 1
    score[v] = -org_score
    subscore[v] = -org_sub
    _set_good(v, score, good, good_pos, counts)
    counts[2] += 1
    step = counts[2]
    last_flip[v] = step
    for g in range(grp_start[v], grp_start[v + 1]):
        group_time[grp_id[g]] = step


@njit(cache=True, inline="always")
def _nc(u, grp_start, grp_id, last_flip, group_time):
    lf = last_flip[u]
    for g in range(grp_start[u], grp_start[u + 1]):
        if group_time[grp_id[g]] > lf:
            return True
    return False


@njit(cache=True, inline="always")
def _better(a, b, score, subscore, last_flip):
    """Tie-break H: greater score, then smaller subscore, then greater age, then smaller index."""
    if score[a] != score[b]:
        return score[a] > score[b]
    if subscore[a] != subscore[b]:
        return subscore[a] < subscore[b]
    if last_flip[a] != last_flip[b]:
        return last_flip[a] < last_flip[b]
    return a < b


@njit(cache=True)
def pick_best(cands, n, score, subscore, last_flip):
    best = cands[0]
    for i in range(1, n):
        u = cands[i]
        if _better(u, best, score, subscore, last_flip):
            best = u
    return best


@njit(cache=True)
def choose(cl_start, cl_var, grp_start, grp_id, score, subscore, unsat, good, last_flip, group_time, counts):
    """One decision of the framework; returns the variable to flip or -1."""
    best = -1
    for i in range(counts[1]):
        u = good[i]
        if _nc(u, grp_start, grp_id, last_flip, group_time):
            if best < 0 or _better(u, best, score, subscore, last_flip):
                best = u
    if best >= 0:
        return best
    if counts[0] == 0:
        return -1
    c = unsat[np.random.randint(0, counts[0])]
    for j in range(cl_start[c], cl_start[c + 1]):
        u = cl_var[j]
        if best < 0 or _better(u, best, score, subscore, last_flip):
            best = u
    return best


@njit(cache=True)
def run(max_flips, assign, cl_start, cl_var, cl_sign, occ_start, occ_clause, occ_sign, grp_start, grp_id,
        true_count, score, subscore, unsat, unsat_pos, good, good_pos, last_flip, group_time, counts):
    """Flip until every clause is satisfied or ``max_flips`` flips were made; returns flips made."""
    done = 0
    while done < max_flips and counts[0] > 0:
        v = choose(cl_start, cl_var, grp_start, grp_id, score, subscore, unsat, good,
                   last_flip, group_time, counts)
        if v < 0:
            break
        flip(v, assign, cl_start, cl_var, cl_sign, occ_start, occ_clause, occ_sign, grp_start, grp_id,
             true_count, score, subscore, unsat, unsat_pos, good, good_pos, last_flip, group_time, counts)
        done += 1
    return done
