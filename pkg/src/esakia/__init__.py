"""Finite Heyting algebras, finite Esakia-style duality, strict p-morphisms,
presheaf total spaces, and the exhaustive theorem suites tying them together."""

from ._kernel import backend as kernel_backend
from .duality import (
    counit_iso,
    dual_of_homomorphism,
    dual_of_pmorphism,
    dual_poset,
    is_prime_filter,
    unit_iso,
)
from .errors import EsakiaError
from .etale import (
    HAlgebra,
    etale_axiom_holds,
    etale_axiom_value,
    failure_witness,
    identity_halgebra,
    is_etale,
)
from .heyting import (
    FiniteHeytingAlgebra,
    HeytingHom,
    biconditional,
    find_isomorphism,
    is_homomorphism,
    is_lattice_homomorphism,
    join_irreducibles,
    product_algebra,
    upset_algebra,
    verify_heyting,
)
from .limits import (
    bundle_product,
    dl_pushout,
    etale_coproduct,
    poset_pullback,
    terminal_bundle,
)
from .poset import (
    FinitePoset,
    PosetMap,
    all_upsets,
    antichain,
    chain,
    direct_image,
    inverse_image,
    is_monotone,
    is_p_morphism,
    is_strict_p_morphism,
    is_upset,
    make_poset,
    principal_downset,
    principal_upset,
)
from .presheaf import (
    Bundle,
    Presheaf,
    Subfunctor,
    fiber_presheaf,
    grothendieck,
    m_component,
    product_embedding,
    round_trip_presheaf,
    round_trip_total,
    subfunctor_upsets,
)

__version__ = "0.1.0"
