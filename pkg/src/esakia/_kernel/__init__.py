"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ESAKIA_PURE=1 to force the pure backend.  The compiled kernel only
handles carriers of up to 64 elements; the wrappers below route larger
inputs to the pure implementation transparently.
"""

import os

from . import pure as _pure

if os.environ.get("ESAKIA_PURE"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

backend = _impl.BACKEND


def _fits(*mask_lists):
    return all(len(m) <= 64 for m in mask_lists)


def upsets_of(up, down):
    if _impl is not _pure and not _fits(up):
        return _pure.upsets_of(up, down)
    return _impl.upsets_of(up, down)


def p_morphisms(dom_up, dom_down, cod_up):
    if _impl is not _pure and not _fits(dom_up, cod_up):
        return _pure.p_morphisms(dom_up, dom_down, cod_up)
    return _impl.p_morphisms(dom_up, dom_down, cod_up)


def strict_etale_scan(dom_up, dom_down, cod_up, cod_down):
    if _impl is not _pure and not _fits(dom_up, cod_up):
        return _pure.strict_etale_scan(dom_up, dom_down, cod_up, cod_down)
    return _impl.strict_etale_scan(dom_up, dom_down, cod_up, cod_down)
