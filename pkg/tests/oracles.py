"""Direct evaluation formulas used to cross-check the component calculus."""
from gencontact.atiyah import der_apply, der_bracket


def act(D, v, l_valued):
    return der_apply(D, v) if l_valued else D.symbol.apply(v)


def ce_d(w, ders):
    """(d w)(D_0..D_k) from the Chevalley-Eilenberg formula."""
    total = w.chart.zero
    k = len(ders)
    for i in range(k):
        rest = ders[:i] + ders[i + 1:]
        t = act(ders[i], w.evaluate(*rest), w.l_valued)
        total = total + t if i % 2 == 0 else total - t
    for i in range(k):
        for j in range(i + 1, k):
            rest = [d for m, d in enumerate(ders) if m not in (i, j)]
            t = w.evaluate(der_bracket(ders[i], ders[j]), *rest)
            total = total + t if (i + j) % 2 == 0 else total - t
    return total


def ce_lie(D, w, ders):
    total = act(D, w.evaluate(*ders), w.l_valued)
    for i in range(len(ders)):
        args = list(ders)
        args[i] = der_bracket(D, ders[i])
        total = total - w.evaluate(*args)
    return total
