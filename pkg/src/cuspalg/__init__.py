"""Finite-codimension cusp algebras of holomorphic germs: invariants, normal forms, embeddings."""
from .algebra import (
    CuspAlgebra,
    ModuliPoint,
    algebra_from_primitive,
    decompose,
    filtration_profile,
    find_primitive,
    from_connection,
    membership,
)
from .embedding import (
    EmbeddingPair,
    PolyExpFunction,
    density_check,
    divide_by_psi,
    embedding_pair,
    invert_in_algebra,
    render_cusp,
    solve_psi_alpha,
    zero_free_primitive,
)
from .functionals import (
    Connection,
    LocalFunctional,
    annihilator_basis,
    delta,
    echelonize,
    is_algebraic,
    pushforward,
    pushforward_connection,
)
from .jet import Jet, compose, exp_jet, mul, revert, sqrt_order2
from .moduli import (
    canonical_form,
    equivalent_cusps,
    local_equivalence_map,
    moduli_coordinates,
    normalize_primitive,
)

__version__ = "0.1.0"
