# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled Earley recognizer kernel; same contract as ``_earley_py.recognize``."""

from libcpp.vector cimport vector
from libcpp.unordered_set cimport unordered_set
from libcpp.unordered_map cimport unordered_map


ctypedef long long i64


cdef struct Item:
    int rule
    int dot
    int origin


cdef inline i64 _key(int r, int d, int o, i64 nd, i64 no):
    return (<i64>r * nd + d) * no + o


def recognize(rule_lhs, rule_rhs, rules_by_lhs, is_nt, nullable, int start, tokens):
    cdef int n_rules = len(rule_lhs)
    cdef int n_syms = len(is_nt)
    cdef int n = len(tokens)
    cdef vector[int] lhs_v = rule_lhs
    cdef vector[int] rhs_off
    cdef vector[int] rhs_len
    cdef vector[int] rhs_flat
    cdef vector[int] by_off
    cdef vector[int] by_flat
    cdef vector[int] nt_v
    cdef vector[int] null_v
    cdef vector[int] tok_v = tokens
    cdef int r, d, o, j, k, sym, r2, i, maxlen = 1
    for r in range(n_rules):
        rhs_off.push_back(rhs_flat.size())
        rhs_len.push_back(len(rule_rhs[r]))
        if len(rule_rhs[r]) + 1 > maxlen:
            maxlen = len(rule_rhs[r]) + 1
        for sym in rule_rhs[r]:
            rhs_flat.push_back(sym)
    for sym in range(n_syms):
        by_off.push_back(by_flat.size())
        for r in rules_by_lhs[sym]:
            by_flat.push_back(r)
        nt_v.push_back(<int>bool(is_nt[sym]))
        null_v.push_back(<int>bool(nullable[sym]))
    by_off.push_back(by_flat.size())

    cdef i64 nd = maxlen
    cdef i64 no = n + 1
    cdef vector[vector[Item]] charts
    cdef vector[unordered_set[i64]] seen
    # waiting[j][sym] -> items at j with the dot before sym
    cdef vector[unordered_map[int, vector[Item]]] waiting
    charts.resize(n + 1)
    seen.resize(n + 1)
    waiting.resize(n + 1)
    cdef vector[int] comp_r, comp_o, comp_j
    cdef Item it, nw
    cdef vector[Item] wl
    cdef i64 key
    cdef int furthest = 0, tok

    for i in range(by_off[start], by_off[start + 1]):
        r = by_flat[i]
        key = _key(r, 0, 0, nd, no)
        if seen[0].insert(key).second:
            it.rule = r; it.dot = 0; it.origin = 0
            charts[0].push_back(it)

    for j in range(n + 1):
        if charts[j].size() == 0:
            break
        furthest = j
        tok = tok_v[j] if j < n else -1
        k = 0
        while k < <int>charts[j].size():
            it = charts[j][k]
            k += 1
            r = it.rule; d = it.dot; o = it.origin
            if d == rhs_len[r]:
                comp_r.push_back(r); comp_o.push_back(o); comp_j.push_back(j)
                if waiting[o].count(lhs_v[r]):
                    wl = waiting[o][lhs_v[r]]
                    for i in range(<int>wl.size()):
                        nw = wl[i]
                        nw.dot += 1
                        key = _key(nw.rule, nw.dot, nw.origin, nd, no)
                        if seen[j].insert(key).second:
                            charts[j].push_back(nw)
                continue
            sym = rhs_flat[rhs_off[r] + d]
            if nt_v[sym]:
                if waiting[j].count(sym):
                    waiting[j][sym].push_back(it)
                else:
                    waiting[j][sym].push_back(it)
                    for i in range(by_off[sym], by_off[sym + 1]):
                        r2 = by_flat[i]
                        key = _key(r2, 0, j, nd, no)
                        if seen[j].insert(key).second:
                            nw.rule = r2; nw.dot = 0; nw.origin = j
                            charts[j].push_back(nw)
                if null_v[sym]:
                    key = _key(r, d + 1, o, nd, no)
                    if seen[j].insert(key).second:
                        nw.rule = r; nw.dot = d + 1; nw.origin = o
                        charts[j].push_back(nw)
            elif sym == tok:
                key = _key(r, d + 1, o, nd, no)
                if seen[j + 1].insert(key).second:
                    nw.rule = r; nw.dot = d + 1; nw.origin = o
                    charts[j + 1].push_back(nw)

    completed = [(comp_r[i], comp_o[i], comp_j[i]) for i in range(<int>comp_r.size())]
    expected = set()
    for i in range(<int>charts[furthest].size()):
        it = charts[furthest][i]
        if it.dot < rhs_len[it.rule]:
            sym = rhs_flat[rhs_off[it.rule] + it.dot]
            if not nt_v[sym]:
                expected.add(sym)
    return completed, furthest, sorted(expected)
