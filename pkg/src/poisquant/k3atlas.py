"""Chart brackets on projective complete-intersection surfaces and the
mechanized proof that they glue.

Three families are covered: a quartic in four homogeneous variables, a
cubic+quadric in five, and three quadrics in six.  Each affine chart sets one
variable to 1 and carries the minor bracket of the dehomogenized generators,
weighted by a permutation sign.  Two charts agree on their overlap iff a
denominator-cleared difference of bordered determinants lies in the ideal
spanned by the surface equations and the Euler relations for two formal
degree-zero functions; that membership is decided by Groebner reduction, so
every overlap gets a machine-checkable certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .brackets import Bivector, combine, is_poisson_mod_ideal, lift_check, minor_bracket
from .errors import AlgebraError
from .ideal import GroebnerBasis, buchberger, normal_form
from .orders import MonomialOrder, degrevlex
from .polyring import Poly, PolyMatrix, determinant, monomial_degree

_FAMILIES: Dict[str, Tuple[int, Tuple[int, ...]]] = {
    "X4": (4, (4,)),
    "X32": (5, (3, 2)),
    "X222": (6, (2, 2, 2)),
}


def perm_sign(word: Sequence[int]) -> int:
    """Sign of the permutation written as a word; assumes distinct entries."""
    inversions = 0
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if word[i] > word[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class SurfaceSpec:
    """Homogeneous generators of one of the three surface families."""

    family: str
    equations: Tuple[Poly, ...]

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in _FAMILIES:
            raise AlgebraError(f"unknown surface family {self.family!r}")
        nvars, degrees = _FAMILIES[fam]
        eqs = tuple(self.equations)
        object.__setattr__(self, "equations", eqs)
        if len(eqs) != len(degrees):
            raise AlgebraError(
                f"family {fam} needs {len(degrees)} equations, got {len(eqs)}"
            )
        for f, d in zip(eqs, degrees):
            if f.arity != nvars:
                raise AlgebraError(
                    f"family {fam} equations live in {nvars} variables, got arity {f.arity}"
                )
            if f.is_zero():
                raise AlgebraError("surface equation must be nonzero")
            if any(monomial_degree(m) != d for m in f.terms):
                raise AlgebraError(
                    f"surface equation must be homogeneous of degree {d}"
                )

    @property
    def num_vars(self) -> int:
        return _FAMILIES[self.family][0]

    @property
    def degrees(self) -> Tuple[int, ...]:
        return _FAMILIES[self.family][1]


@dataclass(frozen=True)
class Chart:
    """Affine chart: one variable set to 1, the rest used as minor columns.

    sign is the permutation sign of the word (columns..., omitted); for
    sorted columns this is (-1)^(last index - omitted).
    """

    omitted: int
    columns: Tuple[int, ...]
    sign: int = field(init=False)

    def __post_init__(self):
        cols = tuple(self.columns)
        object.__setattr__(self, "columns", cols)
        total = len(cols) + 1
        if sorted(cols + (self.omitted,)) != list(range(total)):
            raise AlgebraError(
                "chart columns plus omitted index must partition the variable range"
            )
        object.__setattr__(self, "sign", perm_sign(cols + (self.omitted,)))

    @property
    def total_vars(self) -> int:
        return len(self.columns) + 1

    def label(self) -> str:
        return f"z{self.omitted}=1"


def canonical_chart(total_vars: int, omitted: int) -> Chart:
    cols = tuple(i for i in range(total_vars) if i != omitted)
    return Chart(omitted, cols)


def _check_chart(spec: SurfaceSpec, chart: Chart) -> None:
    if chart.total_vars != spec.num_vars:
        raise AlgebraError(
            f"invalid chart for family {spec.family}: expected "
            f"{spec.num_vars} variables, chart has {chart.total_vars}"
        )


def dehomogenize(spec: SurfaceSpec, chart: Chart) -> Tuple[Poly, ...]:
    _check_chart(spec, chart)
    return tuple(f.specialize_to_one(chart.omitted) for f in spec.equations)


def chart_bracket(spec: SurfaceSpec, chart: Chart) -> Bivector:
    """Sign times the minor bracket of the dehomogenized generators on all
    remaining variables (kept in their original order)."""
    affine = dehomogenize(spec, chart)
    raw = minor_bracket(affine, tuple(range(spec.num_vars - 1)))
    return combine([chart.sign], [raw])


def affine_ideal(
    spec: SurfaceSpec, chart: Chart, order: Optional[MonomialOrder] = None
) -> GroebnerBasis:
    gens = list(dehomogenize(spec, chart))
    return buchberger(gens, order=order, track_certificates=False)


@dataclass
class AgreementCertificate:
    """Groebner witness that two chart brackets agree on the overlap."""

    chart_pair: Tuple[Chart, Chart]
    cleared_difference: Poly
    relation_ideal: GroebnerBasis
    verdict: bool


def relation_basis(
    spec: SurfaceSpec, order: Optional[MonomialOrder] = None
) -> GroebnerBasis:
    """Groebner basis of the gluing ideal in the tripled variable ring.

    Ring layout: z_0..z_{N}, then the formal gradient of the first argument,
    then of the second.  Relations: the surface equations and one Euler form
    per formal gradient (degree-zero functions have z-weighted gradient sums
    equal to zero; the concrete generators satisfy their Euler identities
    automatically).
    """
    n1 = spec.num_vars
    ext = 3 * n1
    idm = list(range(n1))
    gens: List[Poly] = [f.embed(ext, idm) for f in spec.equations]
    for block in (1, 2):
        euler = Poly.zero(ext)
        for j in range(n1):
            euler = euler + Poly.variable(j, ext) * Poly.variable(block * n1 + j, ext)
        gens.append(euler)
    return buchberger(gens, order=order or degrevlex(ext), track_certificates=False)


def _bordered_minor(spec: SurfaceSpec, chart: Chart) -> Poly:
    """Determinant over the chart columns with concrete generator gradients
    on top and the two formal gradient rows below, in the tripled ring."""
    n1 = spec.num_vars
    ext = 3 * n1
    idm = list(range(n1))
    m = len(spec.equations)
    size = m + 2
    if len(chart.columns) != size:
        raise AlgebraError("chart column count does not match bordered minor size")
    entries: List[List[Poly]] = []
    for f in spec.equations:
        entries.append([f.diff(c).embed(ext, idm) for c in chart.columns])
    entries.append([Poly.variable(n1 + c, ext) for c in chart.columns])
    entries.append([Poly.variable(2 * n1 + c, ext) for c in chart.columns])
    return determinant(PolyMatrix(size, size, entries))


def agreement_certificate(
    spec: SurfaceSpec,
    c1: Chart,
    c2: Chart,
    shared_basis: Optional[GroebnerBasis] = None,
) -> AgreementCertificate:
    """Certificate that the two chart brackets agree where both are defined.

    The affine brackets equal sign * (omitted variable)^{-1} * bordered minor
    in homogeneous coordinates, so equality on the overlap is the vanishing
    of sign1*z_{l2}*D1 - sign2*z_{l1}*D2 modulo the gluing ideal.
    """
    _check_chart(spec, c1)
    _check_chart(spec, c2)
    if c1 == c2:
        raise AlgebraError("agreement certificate needs two distinct charts")
    n1 = spec.num_vars
    ext = 3 * n1
    d1 = _bordered_minor(spec, c1)
    d2 = _bordered_minor(spec, c2)
    cleared = (
        d1 * Poly.variable(c2.omitted, ext) * c1.sign
        - d2 * Poly.variable(c1.omitted, ext) * c2.sign
    )
    basis = shared_basis if shared_basis is not None else relation_basis(spec)
    if basis.arity != ext:
        raise AlgebraError("relation basis lives in the wrong ring")
    verdict = normal_form(cleared, basis).is_zero()
    return AgreementCertificate((c1, c2), cleared, basis, verdict)


def verify_surface(spec: SurfaceSpec) -> dict:
    """Run every chart and overlap check; the report is JSON-ready.

    Per chart: the bracket lifts (generator rows stay in the affine ideal)
    and satisfies Jacobi modulo that ideal.  Per unordered chart pair: the
    cleared-difference certificate.  pass is the conjunction.
    """
    n1 = spec.num_vars
    charts = [canonical_chart(n1, l) for l in range(n1)]
    chart_entries = []
    all_ok = True
    for chart in charts:
        bracket = chart_bracket(spec, chart)
        basis = affine_ideal(spec, chart)
        lifted = lift_check(bracket, basis)
        poisson = is_poisson_mod_ideal(bracket, basis)
        all_ok = all_ok and lifted and poisson
        chart_entries.append(
            {"chart": chart.label(), "lift": lifted, "poisson": poisson}
        )
    shared = relation_basis(spec)
    overlap_entries = []
    for i in range(n1):
        for j in range(i + 1, n1):
            cert = agreement_certificate(spec, charts[i], charts[j], shared)
            all_ok = all_ok and cert.verdict
            overlap_entries.append(
                {
                    "pair": f"{charts[i].label()}|{charts[j].label()}",
                    "verdict": cert.verdict,
                }
            )
    return {"charts": chart_entries, "overlaps": overlap_entries, "pass": all_ok}


# -- stock instances used by scripts and tests ----------------------------------


def fermat_quartic() -> SurfaceSpec:
    f = Poly.zero(4)
    for j in range(4):
        f = f + Poly.variable(j, 4) ** 4
    return SurfaceSpec("X4", (f,))


def singular_quartic() -> SurfaceSpec:
    z = [Poly.variable(j, 4) for j in range(4)]
    f = z[0] ** 2 * z[1] ** 2 + z[2] ** 4 + z[3] ** 4
    return SurfaceSpec("X4", (f,))


def cubic_quadric_surface() -> SurfaceSpec:
    f = Poly.zero(5)
    g = Poly.zero(5)
    for j in range(5):
        f = f + Poly.variable(j, 5) ** 3
        g = g + Poly.variable(j, 5) ** 2
    return SurfaceSpec("X32", (f, g))


def triple_quadric_surface() -> SurfaceSpec:
    fs = []
    for power in range(3):
        h = Poly.zero(6)
        for j in range(6):
            h = h + Poly.variable(j, 6) ** 2 * (j ** power)
        fs.append(h)
    return SurfaceSpec("X222", tuple(fs))
