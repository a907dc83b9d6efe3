# cython: language_level=3
"""Compiled kernel: same contracts as `pure.py`, restricted to n <= 64.

Masks are C uint64; the dispatching wrapper in `__init__.py` falls back to
the pure kernel for larger carriers.
"""

from libc.stdint cimport uint64_t, int64_t

BACKEND = "compiled"


cdef inline int popcount(uint64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def upsets_of(up, down):
    """All upward-closed subsets as bitmasks, ascending."""
    cdef int n = len(up)
    if n > 64:
        raise ValueError("compiled kernel supports n <= 64")
    cdef uint64_t u[64]
    cdef uint64_t d[64]
    cdef int i
    for i in range(n):
        u[i] = up[i]
        d[i] = down[i]
    out = []
    _upsets_rec(n, u, d, 0, 0, 0, out)
    out.sort()
    return out


cdef void _upsets_rec(int n, uint64_t* up, uint64_t* down,
                      int i, uint64_t included, uint64_t excluded, list out):
    while i < n and (((included >> i) & 1) or ((excluded >> i) & 1)):
        i += 1
    if i == n:
        out.append(included)
        return
    if up[i] & excluded == 0:
        _upsets_rec(n, up, down, i + 1, included | up[i], excluded, out)
    if down[i] & included == 0:
        _upsets_rec(n, up, down, i + 1, included, excluded | down[i], out)


cdef struct Sweep:
    int n_dom
    int n_cod
    uint64_t dom_up[64]
    uint64_t cod_up[64]
    int order[64]
    int dom_size[64]
    int cod_size[64]
    int assign[64]


cdef void _init_sweep(Sweep* s, dom_up, cod_up):
    cdef int i, j
    s.n_dom = len(dom_up)
    s.n_cod = len(cod_up)
    for i in range(s.n_dom):
        s.dom_up[i] = dom_up[i]
        s.dom_size[i] = popcount(s.dom_up[i])
    for i in range(s.n_cod):
        s.cod_up[i] = cod_up[i]
        s.cod_size[i] = popcount(s.cod_up[i])
    # processing order: ascending |up(x)|, i.e. maximal elements first
    cdef list idx = sorted(range(s.n_dom),
                           key=lambda k: (popcount(dom_up[k]), k))
    for i in range(s.n_dom):
        s.order[i] = idx[i]


cdef void _pm_rec(Sweep* s, int k, bint strict_so_far, list found):
    cdef int x, v, y, fy
    cdef uint64_t strictly_above, rest, img
    cdef bint ok
    if k == s.n_dom:
        found.append((tuple([s.assign[i] for i in range(s.n_dom)]),
                      bool(strict_so_far)))
        return
    x = s.order[k]
    strictly_above = s.dom_up[x] & ~((<uint64_t>1) << x)
    for v in range(s.n_cod):
        img = (<uint64_t>1) << v
        ok = True
        rest = strictly_above
        while rest:
            y = _ctz(rest)
            rest &= rest - 1
            fy = s.assign[y]
            if not (s.cod_up[v] >> fy) & 1:
                ok = False
                break
            img |= (<uint64_t>1) << fy
        if not ok:
            continue
        if s.cod_up[v] & ~img:
            continue
        s.assign[x] = v
        _pm_rec(s, k + 1, strict_so_far and (s.dom_size[x] == s.cod_size[v]), found)


cdef inline int _ctz(uint64_t x) nogil:
    cdef int c = 0
    while not (x & 1):
        x >>= 1
        c += 1
    return c


def p_morphisms(dom_up, dom_down, cod_up):
    """All p-morphisms dom -> cod with strictness flags, sorted by assignment."""
    cdef int n_dom = len(dom_up)
    cdef int n_cod = len(cod_up)
    if n_dom > 64 or n_cod > 64:
        raise ValueError("compiled kernel supports n <= 64")
    if n_dom == 0:
        return [()], [True]
    if n_cod == 0:
        return [], []
    cdef Sweep s
    _init_sweep(&s, dom_up, cod_up)
    found = []
    _pm_rec(&s, 0, True, found)
    found.sort()
    return [a for a, _ in found], [f for _, f in found]


def strict_etale_scan(dom_up, dom_down, cod_up, cod_down):
    """Counts of p-morphisms / strict ones / axiom-validating ones, plus the
    list of assignments where strictness and the axiom disagree."""
    cdef int n_dom = len(dom_up)
    cdef int n_cod = len(cod_up)
    if n_dom > 64 or n_cod > 64:
        raise ValueError("compiled kernel supports n <= 64")
    assigns, strict_flags = p_morphisms(dom_up, dom_down, cod_up)
    dom_upsets = upsets_of(dom_up, dom_down) if n_dom else [0]
    cod_upsets = upsets_of(cod_up, cod_down) if n_cod else [0]

    cdef uint64_t du[64]
    cdef int i
    for i in range(n_dom):
        du[i] = dom_up[i]
    cdef uint64_t full = ((<uint64_t>1) << n_dom) - 1 if n_dom else 0

    cdef int n_du = len(dom_upsets)
    cdef int n_cu = len(cod_upsets)
    # upset tables as C arrays (n <= 64 gives at most 2^64 upsets in theory,
    # in practice suite sizes keep these small; guard anyway)
    if n_du > 1 << 20 or n_cu > 1 << 20:
        raise ValueError("upset lattice too large for the scan")
    cdef list dom_upsets_l = dom_upsets
    cdef list cod_upsets_l = cod_upsets

    cdef int n_strict = 0, n_holds = 0
    cdef uint64_t u, w, fw, acc, diff, term
    cdef int x, juw
    cdef bint holds, strict
    disagreements = []
    cdef int fa[64]
    for assign, strict_py in zip(assigns, strict_flags):
        strict = strict_py
        for x in range(n_dom):
            fa[x] = assign[x]
        holds = True
        for jw in range(n_du):
            u = <uint64_t>(<object>dom_upsets_l[jw])
            acc = 0
            for juw in range(n_cu):
                w = <uint64_t>(<object>cod_upsets_l[juw])
                fw = 0
                for x in range(n_dom):
                    if (w >> fa[x]) & 1:
                        fw |= (<uint64_t>1) << x
                diff = u ^ fw
                term = 0
                for x in range(n_dom):
                    if du[x] & diff == 0:
                        term |= (<uint64_t>1) << x
                acc |= term
                if acc == full:
                    break
            if acc != full:
                holds = False
                break
        n_strict += strict
        n_holds += holds
        if holds != strict:
            disagreements.append(assign)
    return len(assigns), n_strict, n_holds, disagreements
