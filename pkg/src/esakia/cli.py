"""Command-line front end.

Input grammar (line oriented, '#' starts a comment, declarations must
precede use):

    poset NAME            followed by   elem ID...   /   cover ID ID
    map NAME DOM COD      followed by   send ID ID       (total on DOM)
    presheaf NAME BASE    followed by   fiber ELEM ID... /
                                        restrict ELEM ELEM FID FID

Exit codes: 0 all checks passed, 1 a check failed (a `WITNESS:` line is
printed), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .duality import dual_poset, dual_of_pmorphism
from .errors import EsakiaError, InputSyntaxError, InvalidPresheaf, UnresolvedReference
from .etale import HAlgebra, failure_witness
from .heyting import algebra_from_lattice_poset, upset_algebra
from .limits import bundle_product_legs, dl_pushout
from .poset import (
    FinitePoset,
    PosetMap,
    is_monotone,
    is_p_morphism,
    is_strict_p_morphism,
    make_poset,
    monotone_witness,
    p_morphism_witness,
    strictness_witness,
)
from .presheaf import Bundle, Presheaf, grothendieck, make_presheaf
from .suites import SUITES, run_suite


@dataclass
class InputDocument:
    posets: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    presheaves: dict = field(default_factory=dict)
    fiber_names: dict = field(default_factory=dict)  # presheaf name -> per-element id tuples
    order: list = field(default_factory=list)        # (kind, name) in declaration order


def parse(text: str) -> InputDocument:
    """Parse a document; raises InputSyntaxError / UnresolvedReference with
    1-based line numbers."""
    doc = InputDocument()
    block = None  # ("poset"|"map"|"presheaf", header line, name, state dict)

    def finalize():
        nonlocal block
        if block is None:
            return
        kind, line_no, name, st = block
        block = None
        if kind == "poset":
            try:
                doc.posets[name] = make_poset(st["elems"], st["covers"])
            except EsakiaError as exc:
                raise InputSyntaxError(line_no, f"poset {name}: {exc}") from exc
        elif kind == "map":
            dom, cod = st["dom"], st["cod"]
            missing = [e for e in dom.labels if e not in st["sends"]]
            if missing:
                raise InputSyntaxError(
                    line_no, f"map {name} does not assign {missing!r}"
                )
            doc.maps[name] = PosetMap.from_labels(dom, cod, st["sends"])
        else:
            base = st["base"]
            names = tuple(tuple(st["fibers"].get(x, ())) for x in base.labels)
            sizes = [len(t) for t in names]
            cover_maps = {}
            for (xl, yl), entries in st["restricts"].items():
                x, y = base.index(xl), base.index(yl)
                fx, fy = names[x], names[y]
                assign = [None] * len(fx)
                for ln, fid1, fid2 in entries:
                    if fid1 not in fx:
                        raise UnresolvedReference(ln, fid1, f"no fiber element {fid1!r} over {xl!r}")
                    if fid2 not in fy:
                        raise UnresolvedReference(ln, fid2, f"no fiber element {fid2!r} over {yl!r}")
                    i = fx.index(fid1)
                    if assign[i] is not None:
                        raise InputSyntaxError(ln, f"duplicate restrict for {fid1!r}")
                    assign[i] = fy.index(fid2)
                if any(v is None for v in assign):
                    raise InputSyntaxError(line_no, f"restriction {xl!r} -> {yl!r} is not total")
                cover_maps[(x, y)] = tuple(assign)
            try:
                doc.presheaves[name] = make_presheaf(base, sizes, cover_maps)
            except InvalidPresheaf as exc:
                raise InputSyntaxError(line_no, f"presheaf {name}: {exc}") from exc
            doc.fiber_names[name] = names
        doc.order.append((kind, name))

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head, args = tokens[0], tokens[1:]
        if head == "poset":
            if len(args) != 1:
                raise InputSyntaxError(ln, "usage: poset NAME")
            finalize()
            block = ("poset", ln, args[0], {"elems": [], "covers": []})
        elif head == "map":
            if len(args) != 3:
                raise InputSyntaxError(ln, "usage: map NAME DOM COD")
            finalize()
            name, dom, cod = args
            if dom not in doc.posets:
                raise UnresolvedReference(ln, dom)
            if cod not in doc.posets:
                raise UnresolvedReference(ln, cod)
            block = ("map", ln, name,
                     {"dom": doc.posets[dom], "cod": doc.posets[cod], "sends": {}})
        elif head == "presheaf":
            if len(args) != 2:
                raise InputSyntaxError(ln, "usage: presheaf NAME BASE")
            finalize()
            name, base = args
            if base not in doc.posets:
                raise UnresolvedReference(ln, base)
            block = ("presheaf", ln, name,
                     {"base": doc.posets[base], "fibers": {}, "restricts": {}})
        elif head == "elem":
            if block is None or block[0] != "poset":
                raise InputSyntaxError(ln, "elem outside a poset block")
            block[3]["elems"].extend(args)
        elif head == "cover":
            if block is None or block[0] != "poset":
                raise InputSyntaxError(ln, "cover outside a poset block")
            if len(args) != 2:
                raise InputSyntaxError(ln, "usage: cover ID ID")
            declared = block[3]["elems"]
            for a in args:
                if a not in declared:
                    raise UnresolvedReference(ln, a)
            block[3]["covers"].append((args[0], args[1]))
        elif head == "send":
            if block is None or block[0] != "map":
                raise InputSyntaxError(ln, "send outside a map block")
            if len(args) != 2:
                raise InputSyntaxError(ln, "usage: send ID ID")
            st = block[3]
            a, b = args
            if a not in st["dom"]._index:
                raise UnresolvedReference(ln, a)
            if b not in st["cod"]._index:
                raise UnresolvedReference(ln, b)
            if a in st["sends"]:
                raise InputSyntaxError(ln, f"duplicate send for {a!r}")
            st["sends"][a] = b
        elif head == "fiber":
            if block is None or block[0] != "presheaf":
                raise InputSyntaxError(ln, "fiber outside a presheaf block")
            if len(args) < 1:
                raise InputSyntaxError(ln, "usage: fiber ELEM ID...")
            st = block[3]
            xl, ids = args[0], args[1:]
            if xl not in st["base"]._index:
                raise UnresolvedReference(ln, xl)
            if xl in st["fibers"]:
                raise InputSyntaxError(ln, f"duplicate fiber for {xl!r}")
            if len(set(ids)) != len(ids):
                raise InputSyntaxError(ln, "duplicate fiber element id")
            st["fibers"][xl] = ids
        elif head == "restrict":
            if block is None or block[0] != "presheaf":
                raise InputSyntaxError(ln, "restrict outside a presheaf block")
            if len(args) != 4:
                raise InputSyntaxError(ln, "usage: restrict ELEM ELEM FID FID")
            st = block[3]
            xl, yl, f1, f2 = args
            base = st["base"]
            if xl not in base._index:
                raise UnresolvedReference(ln, xl)
            if yl not in base._index:
                raise UnresolvedReference(ln, yl)
            if xl == yl or not base.leq_labels(xl, yl):
                raise InputSyntaxError(ln, f"{xl!r} is not strictly below {yl!r}")
            st["restricts"].setdefault((xl, yl), []).append((ln, f1, f2))
        else:
            raise InputSyntaxError(ln, f"unknown directive {head!r}")
    finalize()
    return doc


# -- rendering ---------------------------------------------------------------


def _poset_block(P: FinitePoset, name: str, labels=None) -> list[str]:
    labels = labels if labels is not None else [str(l) for l in P.labels]
    out = [f"poset {name}"]
    if P.n:
        out.append("elem " + " ".join(labels))
    for i, j in sorted(P.covers):
        out.append(f"cover {labels[i]} {labels[j]}")
    return out


def _map_block(f: PosetMap, name: str, dom_name: str, cod_name: str,
               dom_labels=None, cod_labels=None) -> list[str]:
    dom_labels = dom_labels if dom_labels is not None else [str(l) for l in f.domain.labels]
    cod_labels = cod_labels if cod_labels is not None else [str(l) for l in f.codomain.labels]
    out = [f"map {name} {dom_name} {cod_name}"]
    for i, v in enumerate(f.assignment):
        out.append(f"send {dom_labels[i]} {cod_labels[v]}")
    return out


def _set_str(labels) -> str:
    return "{" + ",".join(str(l) for l in labels) + "}"


def _total_labels(b: Bundle) -> list[str]:
    return [f"{x}.{i}" for x, i in b.total.labels]


def poset_dot(P: FinitePoset, name: str, node_labels=None) -> str:
    out = [f"digraph {name} {{", "  rankdir=BT;"]
    for i in range(P.n):
        lab = str(P.labels[i])
        if node_labels is not None:
            out.append(f'  "{lab}" [label="{node_labels[i]}"];')
        else:
            out.append(f'  "{lab}";')
    for i, j in sorted(P.covers):
        out.append(f'  "{P.labels[i]}" -> "{P.labels[j]}";')
    out.append("}")
    return "\n".join(out)


# -- command helpers ---------------------------------------------------------


class CommandError(Exception):
    """Usage-level failure; exits with status 2."""


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}") from exc


def _select(table: dict, name, kind: str):
    if name is not None:
        if name not in table:
            raise CommandError(f"no {kind} named {name!r} in the input")
        return name, table[name]
    if len(table) == 1:
        return next(iter(table.items()))
    if not table:
        raise CommandError(f"the input declares no {kind}")
    raise CommandError(
        f"the input declares several {kind}s ({', '.join(table)}); use --name"
    )


def _pmorphism_failure_lines(name: str, f: PosetMap):
    w = p_morphism_witness(f)
    if w is None:
        return None
    kind, data = w
    dl, cl = f.domain.labels, f.codomain.labels
    if kind == "monotone":
        i, j = data
        return [
            f"map {name} is not order-preserving",
            f"WITNESS: monotone x1={dl[i]} x2={dl[j]} fx1={cl[f.assignment[i]]} fx2={cl[f.assignment[j]]}",
        ]
    x, y = data
    return [
        f"map {name} fails the back condition",
        f"WITNESS: pmorphism x={dl[x]} y={cl[y]}",
    ]


def cmd_check(args) -> int:
    doc = parse(_read_source(args.file))
    if args.map not in doc.maps:
        raise CommandError(f"no map named {args.map!r} in the input")
    f = doc.maps[args.map]
    name = args.map
    lines: list[str] = []
    ok = True
    if args.predicate == "monotone":
        ok = is_monotone(f)
        if not ok:
            i, j = monotone_witness(f)
            dl, cl = f.domain.labels, f.codomain.labels
            lines.append(
                f"WITNESS: monotone x1={dl[i]} x2={dl[j]} "
                f"fx1={cl[f.assignment[i]]} fx2={cl[f.assignment[j]]}"
            )
    elif args.predicate == "pmorphism":
        ok = is_p_morphism(f)
        if not ok:
            lines.extend(_pmorphism_failure_lines(name, f)[1:])
    elif args.predicate == "strict":
        if not is_p_morphism(f):
            ok = False
            lines.extend(_pmorphism_failure_lines(name, f)[1:])
        else:
            w = strictness_witness(f)
            ok = w is None
            if not ok:
                x, x1, x2 = w
                dl, cl = f.domain.labels, f.codomain.labels
                lines.append(
                    f"WITNESS: strict x={dl[x]} y={cl[f.assignment[x1]]} "
                    f"x1={dl[x1]} x2={dl[x2]}"
                )
    else:  # etale
        if not is_p_morphism(f):
            ok = False
            lines.extend(_pmorphism_failure_lines(name, f)[1:])
        else:
            c = HAlgebra(
                upset_algebra(f.codomain), upset_algebra(f.domain), dual_of_pmorphism(f)
            )
            a = failure_witness(c)
            ok = a is None
            if not ok:
                mask = c.carrier.upset_masks[a]
                lines.append(f"WITNESS: etale upset={f.domain.format_subset(mask)}")
    verdict = "PASS" if ok else "FAIL"
    print(f"{args.predicate} map {name}: {verdict}")
    for l in lines:
        print(l)
    return 0 if ok else 1


def cmd_dualize(args) -> int:
    doc = parse(_read_source(args.file))
    name, P = _select(doc.posets, args.name, "poset")
    out: list[str] = []
    if args.poset:
        A = upset_algebra(P)
        labels = [f"U{i}" for i in range(A.n)]
        D = FinitePoset(tuple(range(A.n)),
                        tuple(A.up_masks[i] for i in range(A.n)))
        block = _poset_block(D, f"{name}.up", labels)
        out.extend(block)
        for i in range(A.n):
            out.append(f"# U{i} = {_set_str(P.labels_of(A.upset_masks[i]))}")
    else:
        A = algebra_from_lattice_poset(P)
        D = dual_poset(A)
        labels = [f"F{i}" for i in range(D.n)]
        out.extend(_poset_block(D, f"{name}.dual", labels))
        for i, fmask in enumerate(D.labels):
            members = [A.labels[a] for a in range(A.n) if (fmask >> a) & 1]
            out.append(f"# F{i} = {_set_str(members)}")
    print("\n".join(out))
    return 0


def cmd_grothendieck(args) -> int:
    doc = parse(_read_source(args.file))
    name, F = _select(doc.presheaves, args.presheaf, "presheaf")
    b = grothendieck(F)
    fiber_names = doc.fiber_names.get(name)
    labels = []
    for x, i in b.total.labels:
        fid = fiber_names[F.base.index(x)][i] if fiber_names else str(i)
        labels.append(f"{x}.{fid}")
    base_name = None
    for pname, P in doc.posets.items():
        if P == F.base:
            base_name = pname
            break
    out = _poset_block(F.base, base_name)
    out.extend(_poset_block(b.total, f"{name}.total", labels))
    out.extend(_map_block(b.projection, f"{name}.proj", f"{name}.total", base_name,
                          dom_labels=labels))
    print("\n".join(out))
    return 0


def _require_strict(name: str, f: PosetMap):
    fail = _pmorphism_failure_lines(name, f)
    if fail is None:
        w = strictness_witness(f)
        if w is None:
            return None
        x, x1, x2 = w
        dl, cl = f.domain.labels, f.codomain.labels
        fail = [
            f"map {name} is not strict",
            f"WITNESS: strict x={dl[x]} y={cl[f.assignment[x1]]} x1={dl[x1]} x2={dl[x2]}",
        ]
    return fail


def _two_maps(doc: InputDocument, left: str, right: str):
    for nm in (left, right):
        if nm not in doc.maps:
            raise CommandError(f"no map named {nm!r} in the input")
    f, g = doc.maps[left], doc.maps[right]
    if f.codomain != g.codomain:
        raise CommandError("maps must share a codomain")
    return f, g


def cmd_product(args) -> int:
    doc = parse(_read_source(args.file))
    f, g = _two_maps(doc, args.left, args.right)
    for nm, h in ((args.left, f), (args.right, g)):
        fail = _require_strict(nm, h)
        if fail:
            print("\n".join(fail))
            return 1
    X = f.codomain
    b1 = Bundle(f.domain, X, f)
    b2 = Bundle(g.domain, X, g)
    product, p1, p2 = bundle_product_legs(b1, b2)
    labels = [f"({a},{b})" for a, b in product.total.labels]
    name = f"{args.left}*{args.right}"
    cod_name = next(n for n, P in doc.posets.items() if P == X)
    dom1 = next(n for n, P in doc.posets.items() if P == f.domain)
    dom2 = next(n for n, P in doc.posets.items() if P == g.domain)
    out = _poset_block(product.total, f"{name}.total", labels)
    out.extend(_map_block(product.projection, f"{name}.proj", f"{name}.total",
                          cod_name, dom_labels=labels))
    out.extend(_map_block(p1, f"{name}.left", f"{name}.total", dom1, dom_labels=labels))
    out.extend(_map_block(p2, f"{name}.right", f"{name}.total", dom2, dom_labels=labels))
    print("\n".join(out))
    return 0


def cmd_pushout(args) -> int:
    doc = parse(_read_source(args.file))
    f, g = _two_maps(doc, args.left, args.right)
    for nm, h in ((args.left, f), (args.right, g)):
        if not is_monotone(h):
            fail = _pmorphism_failure_lines(nm, h)
            print("\n".join(fail))
            return 1
    from .duality import unit_iso, upset_hom_of_monotone

    c1 = upset_hom_of_monotone(f)
    c2 = upset_hom_of_monotone(g)
    po = dl_pushout(c1, c2)
    L = po.lattice
    labels = [f"P{i}" for i in range(L.n)]
    D = FinitePoset(tuple(range(L.n)), tuple(L.up_masks[i] for i in range(L.n)))
    name = f"{args.left}+{args.right}"
    out = _poset_block(D, f"{name}.pushout", labels)
    # pullback points are pairs of prime filters; name them by the original
    # elements they classify (every filter of an upset algebra is a unit image)
    back = {}
    for Y in (f.domain, g.domain):
        u = unit_iso(Y)
        for i in range(Y.n):
            back[u.codomain.labels[u.assignment[i]]] = Y.labels[i]
    base = L.base_poset
    for i in range(L.n):
        members = [
            f"({back[m1]},{back[m2]})" for m1, m2 in base.labels_of(L.upset_masks[i])
        ]
        out.append(f"# P{i} = {{{','.join(members)}}}")
    print("\n".join(out))
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    all_ok = True
    for nm in names:
        report = run_suite(nm, max_base=args.max_base, max_total=args.max_total,
                           max_fiber=args.max_fiber, seed=args.seed)
        print("\n".join(report.lines()))
        all_ok = all_ok and report.passed
    return 0 if all_ok else 1


def cmd_dot(args) -> int:
    doc = parse(_read_source(args.file))
    if args.poset:
        name, P = _select(doc.posets, args.name, "poset")
        print(poset_dot(P, name))
        return 0
    # bundle: a named map used as projection, or a presheaf's total space
    if args.name and args.name in doc.maps:
        f = doc.maps[args.name]
        fail = _require_strict(args.name, f)
        if fail:
            print("\n".join(fail))
            return 1
        b = Bundle(f.domain, f.codomain, f)
        name = args.name
        node_labels = [f"{l} -> {f.codomain.labels[f.assignment[i]]}"
                       for i, l in enumerate(f.domain.labels)]
        print(poset_dot(f.domain, name, node_labels))
        return 0
    candidates = {**doc.presheaves}
    name, F = _select(candidates, args.name, "presheaf")
    b = grothendieck(F)
    fiber_names = doc.fiber_names.get(name)
    labels = []
    for x, i in b.total.labels:
        fid = fiber_names[F.base.index(x)][i] if fiber_names else str(i)
        labels.append(f"{x}.{fid}")
    T = FinitePoset(tuple(labels), b.total.up)
    node_labels = [f"{labels[t]} -> {F.base.labels[b.projection.assignment[t]]}"
                   for t in range(b.total.n)]
    print(poset_dot(T, name, node_labels))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="esakia",
        description="Finite poset/Heyting duality toolkit: duals, map checks, "
                    "total spaces, (co)limits, and exhaustive theorem suites.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dualize", help="print the dual of a poset or algebra")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--poset", action="store_true",
                      help="poset -> its upset algebra (as a lattice diagram)")
    kind.add_argument("--algebra", action="store_true",
                      help="lattice diagram -> its prime-filter poset")
    p.add_argument("file")
    p.add_argument("--name", help="which declaration to use")
    p.set_defaults(fn=cmd_dualize)

    p = sub.add_parser("check", help="run a predicate on a named map")
    p.add_argument("predicate", choices=["monotone", "pmorphism", "strict", "etale"])
    p.add_argument("file")
    p.add_argument("--map", required=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("grothendieck", help="print the total space of a presheaf")
    p.add_argument("file")
    p.add_argument("--presheaf", required=True)
    p.set_defaults(fn=cmd_grothendieck)

    p = sub.add_parser("product", help="product of two bundles over a common base")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=cmd_product)

    p = sub.add_parser("pushout", help="lattice pushout of the duals of two maps")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=cmd_pushout)

    p = sub.add_parser("verify", help="run exhaustive theorem suites")
    p.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    p.add_argument("--max-base", type=int, default=None)
    p.add_argument("--max-total", type=int, default=None)
    p.add_argument("--max-fiber", type=int, default=None)
    p.add_argument("--seed", type=int, default=None,
                   help="down-sample oversized sweeps deterministically")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("dot", help="emit Graphviz DOT of a Hasse diagram")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--poset", action="store_true")
    kind.add_argument("--bundle", action="store_true")
    p.add_argument("file")
    p.add_argument("--name")
    p.set_defaults(fn=cmd_dot)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputSyntaxError, UnresolvedReference) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EsakiaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
