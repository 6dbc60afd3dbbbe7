"""Shared fixtures, random grammar generation and brute-force oracles."""

from __future__ import annotations

import itertools
import random
from collections import deque
from functools import lru_cache

from lltrans.grammar import NONTERMINAL, Grammar, LexicalConfig, Production, Symbol, literal, validate
from lltrans.mathqa import load_fixture

FIXTURES = {
    "fig4": "fig4.grammar",
    "mathqa": "mathqa_lr1.grammar",
    "indirect": "indirect.grammar",
    "epsilon": "epsilon.grammar",
    "expr": "expr.grammar",
    "fragment": "fragment_closed.grammar",
}


@lru_cache(maxsize=None)
def fixture(name: str) -> Grammar:
    return load_fixture(FIXTURES.get(name, name))


def random_cfg(seed: int, max_nts: int = 8, max_prods: int = 20, terminals: str = "abcde", eps_rate: float = 0.1) -> Grammar:
    """A random valid grammar (productive, reachable, no duplicate rules)."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(1, max_nts)
        nts = [f"N{i}" for i in range(n)]
        terms = list(terminals[: rng.randint(2, len(terminals))])
        rules: list[tuple[str, tuple[str, ...]]] = []
        budget = rng.randint(n, max_prods)
        for i, nt in enumerate(nts):
            # a guaranteed terminal-only rule for some, rules referencing later symbols for others
            rules.append((nt, tuple(rng.choice(terms) for _ in range(rng.randint(1, 2)))))
        while len(rules) < budget:
            nt = rng.choice(nts)
            if rng.random() < eps_rate:
                rhs: tuple[str, ...] = ()
            else:
                rhs = tuple(rng.choice(nts + terms) for _ in range(rng.randint(1, 3)))
            rules.append((nt, rhs))
        # make everything reachable: chain N0 -> N1 -> ... via appended references
        for i in range(1, n):
            if not any(nts[i] in rhs for lhs, rhs in rules if lhs != nts[i]):
                k = rng.randrange(len(rules))
                lhs, rhs = rules[k]
                if lhs == nts[i]:
                    rules.append((nts[rng.randrange(i)], (nts[i],) + tuple(rng.choice(terms) for _ in range(rng.randint(0, 1)))))
                else:
                    rules[k] = (lhs, rhs + (nts[i],))
        seen, uniq = set(), []
        for r in rules:
            if r not in seen:
                seen.add(r)
                uniq.append(r)
        uniq = uniq[:max_prods]
        uniq.sort(key=lambda r: nts.index(r[0]))
        symbols = [Symbol(NONTERMINAL, nt) for nt in nts] + [literal(t) for t in terms]
        prods = []
        for pid, (lhs, rhs) in enumerate(uniq, start=1):
            prods.append(Production(pid, lhs, tuple(s if s in nts else literal(s).name for s in rhs)))
        used = {s for _, rhs in uniq for s in rhs}
        symbols = [s for s in symbols if s.kind == NONTERMINAL or s.lexeme in used]
        try:
            g = Grammar(symbols, prods, nts[0], LexicalConfig())
        except Exception:
            continue
        if any(not g.productions_of(nt) for nt in nts):
            continue
        rep = validate(g)
        if rep.ok and not rep.warnings:
            return g


def min_lengths(g: Grammar) -> dict[str, int]:
    inf = float("inf")
    m = {s: (inf if g.is_nonterminal(s) else 1) for s in g.symbols}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            v = sum(m[s] for s in p.rhs)
            if v < m[p.lhs]:
                m[p.lhs] = v
                changed = True
    return m


def language_upto(g: Grammar, max_len: int, max_forms: int = 200_000) -> set[tuple[str, ...]]:
    """All terminal strings of length <= max_len, by leftmost derivation
    search over sentential forms (pruned by minimal yield length)."""
    ml = min_lengths(g)
    out: set[tuple[str, ...]] = set()
    start = (g.start,)
    seen = {start}
    queue = deque([start])
    while queue:
        form = queue.popleft()
        idx = next((i for i, s in enumerate(form) if g.is_nonterminal(s)), None)
        if idx is None:
            out.add(form)
            continue
        for p in g.productions_of(form[idx]):
            new = form[:idx] + p.rhs + form[idx + 1:]
            if sum(ml[s] for s in new) > max_len or new in seen:
                continue
            seen.add(new)
            if len(seen) > max_forms:
                raise RuntimeError("language enumeration budget exceeded")
            queue.append(new)
    return out


def count_trees(g: Grammar, word: tuple[str, ...], cap: int = 2) -> int:
    """Number of parse trees of ``word`` (capped), by brute-force CYK-style
    span recursion on an epsilon-free, cycle-free grammar."""
    n = len(word)

    @lru_cache(maxsize=None)
    def sym(s: str, i: int, j: int, depth: int) -> int:
        if not g.is_nonterminal(s):
            return 1 if j == i + 1 and word[i] == s else 0
        if depth > 4 * (n + 2):
            return 0
        return min(cap, sum(seq(p.rhs, i, j, depth + 1) for p in g.productions_of(s)))

    @lru_cache(maxsize=None)
    def seq(rhs: tuple[str, ...], i: int, j: int, depth: int) -> int:
        if not rhs:
            return 1 if i == j else 0
        total = 0
        for k in range(i + 1, j - len(rhs) + 2):
            a = sym(rhs[0], i, k, depth)
            if a:
                total += a * seq(rhs[1:], k, j, depth)
        return min(cap, total)

    return sym(g.start, 0, n, 0)


def brute_first_k(g: Grammar, k: int, seq: tuple[str, ...], max_rest: int = 8, max_states: int = 200_000) -> set[tuple[str, ...]]:
    """FIRST_k by exploring truncated leftmost derivations."""
    out = set()
    start = ((), tuple(seq))
    seen = {start}
    queue = deque([start])
    while queue:
        pre, rest = queue.popleft()
        if len(pre) == k or not rest:
            out.add(pre)
            continue
        head, tail = rest[0], rest[1:]
        if not g.is_nonterminal(head):
            nxt = [(pre + (head,), tail)]
        else:
            nxt = [(pre, p.rhs + tail) for p in g.productions_of(head)]
        for st in nxt:
            st = (st[0], st[1][:max_rest])
            if st not in seen:
                seen.add(st)
                if len(seen) > max_states:
                    raise RuntimeError("budget exceeded")
                queue.append(st)
    return out


def brute_min_hitting(sets) -> int:
    sets = [frozenset(s) for s in sets]
    universe = sorted(set().union(*sets)) if sets else []
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            c = set(combo)
            if all(s & c for s in sets):
                return size
    raise AssertionError("unreachable")


def brute_lex_min_hitting(sets) -> tuple[int, ...]:
    sets = [frozenset(s) for s in sets]
    universe = sorted(set().union(*sets)) if sets else []
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            if all(s & set(combo) for s in sets):
                return combo
    raise AssertionError("unreachable")


def words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def sampled_trees(g: Grammar, n: int, depth: int | None = None, seed: int = 0, nonempty: bool = True):
    """``n`` seeded samples; empty programs are skipped when ``nonempty``
    (the MathQA statement list is empty for half the seeds)."""
    from lltrans.sampler import min_heights, sample
    from lltrans.trees import frontier

    depth = depth or max(min_heights(g).values()) + 4
    out = []
    s = seed
    while len(out) < n:
        if s - seed > 50 * n + 100:
            raise RuntimeError(f"too few nonempty samples at depth {depth}")
        t = sample(g, depth, s)
        s += 1
        if nonempty and not frontier(t):
            continue
        out.append(t)
    return out
