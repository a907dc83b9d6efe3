"""Pure-Python kernel: the hot enumeration loops over bitmask-encoded posets.

Conventions shared with the compiled kernel (`_core.pyx`):

* a poset on n elements is given by ``up`` masks (``up[i]`` has bit j set
  iff i <= j) and ``down`` masks (transpose); both include the diagonal;
* subsets of the carrier are plain ints used as bit patterns;
* a map is an assignment tuple ``f`` with ``f[i]`` the codomain index.

Unlike the compiled kernel these functions accept any n (Python ints are
unbounded); the compiled kernel is limited to n <= 64.
"""

BACKEND = "pure"


def upsets_of(up, down):
    """All upward-closed subsets as bitmasks, ascending.

    DFS over elements: including i forces up[i] in, excluding i forces
    down[i] out, so every upset is produced exactly once.
    """
    n = len(up)
    out = []

    def rec(i, included, excluded):
        while i < n and ((included >> i) & 1 or (excluded >> i) & 1):
            i += 1
        if i == n:
            out.append(included)
            return
        if up[i] & excluded == 0:
            rec(i + 1, included | up[i], excluded)
        if down[i] & included == 0:
            rec(i + 1, included, excluded | down[i])

    rec(0, 0, 0)
    out.sort()
    return out


def _processing_order(up):
    # maximal elements first: y > x implies |up[y]| < |up[x]|
    n = len(up)
    return sorted(range(n), key=lambda i: (bin(up[i]).count("1"), i))


def p_morphisms(dom_up, dom_down, cod_up):
    """All p-morphisms dom -> cod with strictness flags.

    Elements are assigned top-down, so when x gets its image every element
    strictly above x is already assigned and both the order-preservation
    and back conditions at x can be checked immediately.  With the back
    condition established, strictness at x is the count equality
    |up(x)| == |up(f(x))|.

    Returns (assignments, strict_flags) sorted by assignment tuple.
    """
    n_dom = len(dom_up)
    n_cod = len(cod_up)
    if n_dom == 0:
        return [()], [True]
    if n_cod == 0:
        return [], []
    order = _processing_order(dom_up)
    assign = [0] * n_dom
    found = []

    cod_sizes = [bin(m).count("1") for m in cod_up]
    dom_sizes = [bin(m).count("1") for m in dom_up]

    def rec(k, strict_so_far):
        if k == n_dom:
            found.append((tuple(assign), strict_so_far))
            return
        x = order[k]
        strictly_above = dom_up[x] & ~(1 << x)
        for v in range(n_cod):
            img = 1 << v
            ok = True
            rest = strictly_above
            while rest:
                y = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                fy = assign[y]
                if not (cod_up[v] >> fy) & 1:  # monotone: v <= f(y)
                    ok = False
                    break
                img |= 1 << fy
            if not ok:
                continue
            if cod_up[v] & ~img:  # back condition at x
                continue
            assign[x] = v
            rec(k + 1, strict_so_far and dom_sizes[x] == cod_sizes[v])
        # no cleanup needed: assign[x] is overwritten on the next try

    rec(0, True)
    found.sort()
    return [a for a, _ in found], [s for _, s in found]


def _axiom_holds(assign, dom_up, dom_upsets, cod_upsets, n_dom):
    """Evaluate, inside Up(dom), whether every U satisfies
    join over W in Up(cod) of (U <=> f*(W)) == top.

    Uses bic(A, B) = {x | up[x] & (A ^ B) == 0}.
    """
    full = (1 << n_dom) - 1 if n_dom else 0
    preimages = []
    for w in cod_upsets:
        m = 0
        for x in range(n_dom):
            if (w >> assign[x]) & 1:
                m |= 1 << x
        preimages.append(m)
    for u in dom_upsets:
        acc = 0
        for fw in preimages:
            diff = u ^ fw
            term = 0
            for x in range(n_dom):
                if dom_up[x] & diff == 0:
                    term |= 1 << x
            acc |= term
            if acc == full:
                break
        if acc != full:
            return False
    return True


def strict_etale_scan(dom_up, dom_down, cod_up, cod_down):
    """Sweep all p-morphisms dom -> cod comparing strictness with the
    upset-algebra axiom evaluated on the inverse-image expansion.

    Returns (n_pmorphisms, n_strict, n_axiom_holds, disagreements) where
    disagreements lists offending assignment tuples (expected empty).
    """
    assigns, strict_flags = p_morphisms(dom_up, dom_down, cod_up)
    n_dom = len(dom_up)
    dom_upsets = upsets_of(dom_up, dom_down)
    cod_upsets = upsets_of(cod_up, cod_down)
    n_strict = 0
    n_holds = 0
    disagreements = []
    for assign, strict in zip(assigns, strict_flags):
        holds = _axiom_holds(assign, dom_up, dom_upsets, cod_upsets, n_dom)
        n_strict += strict
        n_holds += holds
        if strict != holds:
            disagreements.append(assign)
    return len(assigns), n_strict, n_holds, disagreements
