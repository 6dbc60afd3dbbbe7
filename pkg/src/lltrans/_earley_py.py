"""Pure-Python Earley recognizer kernel.

Works on an integer-coded grammar so it can be swapped for the compiled
kernel in ``_earley_ext``.  Nullable nonterminals are handled by advancing
over them at prediction time (Aycock & Horspool), so completions never need
to revisit the current chart set.
"""


def recognize(rule_lhs, rule_rhs, rules_by_lhs, is_nt, nullable, start, tokens):
    """Return ``(completed, furthest, expected)``.

    ``completed`` lists every finished item as ``(rule, origin, end)``;
    ``furthest`` is the last chart position that holds any item and
    ``expected`` the terminal ids some item there was waiting for.
    """
    n = len(tokens)
    charts = [dict() for _ in range(n + 1)]  # item -> None, insertion ordered
    waiting = [dict() for _ in range(n + 1)]  # symbol -> [(rule, dot, origin)]
    completed = []
    for r in rules_by_lhs[start]:
        charts[0][(r, 0, 0)] = None
    furthest = 0
    for j in range(n + 1):
        chart = charts[j]
        if not chart:
            break
        furthest = j
        wait_j = waiting[j]
        items = list(chart)
        k = 0
        tok = tokens[j] if j < n else -1
        while k < len(items):
            item = items[k]
            k += 1
            r, d, o = item
            rhs = rule_rhs[r]
            if d == len(rhs):
                completed.append((r, o, j))
                lhs = rule_lhs[r]
                for (r2, d2, o2) in waiting[o].get(lhs, ()):
                    new = (r2, d2 + 1, o2)
                    if new not in chart:
                        chart[new] = None
                        items.append(new)
                continue
            sym = rhs[d]
            if is_nt[sym]:
                lst = wait_j.get(sym)
                if lst is None:
                    wait_j[sym] = [item]
                    for r2 in rules_by_lhs[sym]:
                        new = (r2, 0, j)
                        if new not in chart:
                            chart[new] = None
                            items.append(new)
                else:
                    lst.append(item)
                if nullable[sym]:
                    new = (r, d + 1, o)
                    if new not in chart:
                        chart[new] = None
                        items.append(new)
            elif sym == tok:
                charts[j + 1][(r, d + 1, o)] = None
    expected = set()
    for (r, d, o) in charts[furthest]:
        rhs = rule_rhs[r]
        if d < len(rhs) and not is_nt[rhs[d]]:
            expected.add(rhs[d])
    return completed, furthest, sorted(expected)
