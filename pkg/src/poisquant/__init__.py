"""Exact symbolic toolkit for Poisson brackets on complete intersections and
the first two orders of their deformation quantization.

Everything is computed over the rationals with no floating point anywhere:
polynomial arithmetic, Groebner bases with division certificates, Jacobian
minor brackets, Hochschild cochain calculus, and chart-gluing certificates
for projective surfaces.
"""

from .brackets import (
    Bivector,
    TriVector,
    apply_bivector,
    bordered_determinant,
    combine,
    is_poisson_mod_ideal,
    jacobi_defects,
    jacobian_bracket,
    jacobiator,
    lift_check,
    minor_bracket,
)
from .errors import AlgebraError, ArityMismatchError, ParseError
from .hochschild import (
    CochainProjector,
    PolyDiffOp,
    SecondOrderReport,
    StarTruncation,
    bar_differential,
    compose_at,
    cyclic_jacobi_operator,
    eulerian_projector,
    from_bivector,
    gerstenhaber_square,
    multiplication_op,
    permute_inputs,
    shuffle_vanishing_check,
    solve_p2,
    star_assoc_defect,
    sym_skew_decompose,
    vanishes_mod_ideal,
)
from .ideal import (
    GroebnerBasis,
    QuotientAlgebra,
    buchberger,
    dimension,
    ideal_member,
    is_complete_intersection,
    normal_form,
    normal_form_with_quotients,
)
from .k3atlas import (
    AgreementCertificate,
    Chart,
    SurfaceSpec,
    affine_ideal,
    agreement_certificate,
    canonical_chart,
    dehomogenize,
    chart_bracket,
    cubic_quadric_surface,
    fermat_quartic,
    relation_basis,
    singular_quartic,
    triple_quadric_surface,
    verify_surface,
)
from .orders import MonomialOrder, degrevlex, lex
from .polyring import (
    Poly,
    PolyMatrix,
    determinant,
    format_poly,
    jacobian_matrix,
    parse_poly,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "ArityMismatchError",
    "ParseError",
    "MonomialOrder",
    "degrevlex",
    "lex",
    "Poly",
    "PolyMatrix",
    "determinant",
    "jacobian_matrix",
    "parse_poly",
    "format_poly",
    "GroebnerBasis",
    "QuotientAlgebra",
    "buchberger",
    "normal_form",
    "normal_form_with_quotients",
    "ideal_member",
    "dimension",
    "is_complete_intersection",
    "Bivector",
    "TriVector",
    "apply_bivector",
    "jacobian_bracket",
    "minor_bracket",
    "combine",
    "jacobiator",
    "lift_check",
    "jacobi_defects",
    "is_poisson_mod_ideal",
    "bordered_determinant",
    "PolyDiffOp",
    "multiplication_op",
    "from_bivector",
    "compose_at",
    "bar_differential",
    "gerstenhaber_square",
    "cyclic_jacobi_operator",
    "sym_skew_decompose",
    "permute_inputs",
    "CochainProjector",
    "eulerian_projector",
    "shuffle_vanishing_check",
    "vanishes_mod_ideal",
    "StarTruncation",
    "star_assoc_defect",
    "SecondOrderReport",
    "solve_p2",
    "SurfaceSpec",
    "Chart",
    "canonical_chart",
    "chart_bracket",
    "affine_ideal",
    "agreement_certificate",
    "relation_basis",
    "AgreementCertificate",
    "verify_surface",
    "dehomogenize",
    "fermat_quartic",
    "singular_quartic",
    "cubic_quadric_surface",
    "triple_quadric_surface",
]
