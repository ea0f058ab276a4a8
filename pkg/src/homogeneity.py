"""
Homogénéité par rapport à un champ Δ et réduction de Poisson-Jacobi.

Forme normale produit : la carte contient la variable d'homogénéité t,
Δ = t∂_t, 1̃_N = t et la tranche N = {t = 1}. La structure libre
(N×ℝ, ∂_s) s'y ramène par t = e^s.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import ChartMismatchError, DegreeError, SetupError
from .exterior import (DiffForm, Multivector, SkewTensor, apply_vector, bracket_of_functions, contract,
                       exterior_derivative, lie_derivative, restrict, transport, wedge)
from .jacobi import FirstOrderOp, FormPair, op_on_functions
from .models import HOMOGENEOUS, NOT_HOMOGENEOUS, ZERO, BracketDegreeReport, DegreeResult, Reduction
from .ring import Chart, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomogeneousSetup:
    """Structure réductive (carte, Δ, 1̃_N = t) ; la tranche N est {t = 1}."""
    chart: Chart
    delta: Multivector
    one_tilde: Scalar

    def __post_init__(self):
        t = self.chart.homogeneity_variable
        if t is None:
            raise SetupError("La carte doit déclarer une variable d'homogénéité")
        if self.delta.chart != self.chart or self.one_tilde.chart != self.chart:
            raise ChartMismatchError("Δ et 1̃_N doivent être sur la carte de la structure")
        if self.delta.degree != 1:
            raise SetupError("Δ doit être un champ de vecteurs")
        transversal = self.delta.coefficient((self.chart.index(t),)).specialize(t, 1)
        if transversal.is_zero():
            raise SetupError(f"Δ n'est pas transverse à la tranche {{{t} = 1}}")
        if not degree(self.one_tilde, self.delta).matches(1):
            raise SetupError("1̃_N doit être Δ-homogène de degré 1")

    @classmethod
    def product(cls, chart: Chart) -> "HomogeneousSetup":
        t = chart.homogeneity_variable
        if t is None:
            raise SetupError("La carte doit déclarer une variable d'homogénéité")
        t_fn = Scalar.variable(chart, t)
        return cls(chart, Multivector.basis(chart, t) * t_fn, t_fn)

    @property
    def t(self) -> str:
        return self.chart.homogeneity_variable

    @property
    def slice_chart(self) -> Chart:
        return self.chart.slice_chart()

    @property
    def is_product(self) -> bool:
        t_fn = Scalar.variable(self.chart, self.t)
        return self.delta == Multivector.basis(self.chart, self.t) * t_fn and self.one_tilde == t_fn

    def require_product(self):
        if not self.is_product:
            raise SetupError("La réduction exige la forme produit Δ = t∂_t")


DeltaLike = Union[HomogeneousSetup, Multivector]


def _delta_of(delta: DeltaLike) -> Multivector:
    if isinstance(delta, HomogeneousSetup):
        return delta.delta
    if not isinstance(delta, Multivector) or delta.degree != 1:
        raise DegreeError("Δ doit être un champ de vecteurs (degré 1)")
    return delta


def _components(value, delta: Multivector):
    """Couples (composante, L_Δ composante) selon la nature de la valeur."""
    if isinstance(value, Scalar):
        return [(Multivector.from_scalar(value), Multivector.from_scalar(apply_vector(delta, value)))]
    if isinstance(value, SkewTensor):
        return [(value, lie_derivative(delta, value))]
    if isinstance(value, (FirstOrderOp, FormPair)):
        # ⟦Δ, D⟧¹ = (L_Δ D⁰, L_Δ D¹) puisque i_φ Δ = 0
        return [(part, lie_derivative(delta, part)) for part in value.split() if part is not None]
    raise DegreeError(f"Degré non défini pour {type(value).__name__}")


def degree(value, delta: DeltaLike) -> DegreeResult:
    """
    Le n tel que L_Δ T = n T.

    Le candidat est lu sur le premier terme non nul puis l'identité complète est vérifiée.
    """
    delta = _delta_of(delta)
    if isinstance(value, (Scalar, SkewTensor, FirstOrderOp, FormPair)) and value.chart != delta.chart:
        raise ChartMismatchError("Tenseur et Δ sur des cartes différentes")
    pairs = _components(value, delta)
    candidate: Optional[Fraction] = None
    for original, lie in pairs:
        if original.is_zero():
            continue
        indices, coeff = next(original.items())
        candidate = lie.coefficient(indices).exact_quotient(coeff)
        break
    else:
        return DegreeResult(ZERO)
    if candidate is None:
        return DegreeResult(NOT_HOMOGENEOUS)
    for original, lie in pairs:
        if lie != original * candidate:
            return DegreeResult(NOT_HOMOGENEOUS)
    return DegreeResult(HOMOGENEOUS, candidate)


def homogeneous_family(delta: DeltaLike) -> List[Tuple[Scalar, Fraction]]:
    """
    Famille finie de fonctions homogènes (fonction, degré).
    Forme produit : {1, x_i, t, t·x_i} et leurs produits deux à deux ;
    sinon : 1, les coordonnées et leurs produits, en ne gardant que les homogènes.
    """
    delta = _delta_of(delta)
    chart = delta.chart
    one = Scalar.one(chart)
    t = chart.homogeneity_variable
    if t is not None and isinstance(delta, Multivector) and delta == Multivector.basis(chart, t) * Scalar.variable(chart, t):
        t_fn = Scalar.variable(chart, t)
        xs = [Scalar.variable(chart, v) for v in chart.variables if v != t]
        base = [one] + xs + [t_fn] + [t_fn * x for x in xs]
    else:
        base = [one] + [Scalar.variable(chart, v) for v in chart.variables]
    candidates = list(base)
    for f, g in itertools.combinations_with_replacement(base[1:], 2):
        candidates.append(f * g)
    family: List[Tuple[Scalar, Fraction]] = []
    seen = set()
    for f in candidates:
        if f in seen:
            continue
        seen.add(f)
        result = degree(f, delta)
        if result.status == HOMOGENEOUS:
            family.append((f, result.value))
    return family


def degree_via_brackets(value: Union[Multivector, FirstOrderOp], delta: DeltaLike,
                        family: Optional[Sequence[Tuple[Scalar, Fraction]]] = None) -> BracketDegreeReport:
    """
    Caractérisation par les crochets : {f1,…,fk}_T doit être homogène de degré
    n + deg(f1) + … + deg(fk) pour toute famille de fonctions homogènes.
    Un crochet nul est compatible avec tout degré.
    """
    delta = _delta_of(delta)
    if family is None:
        family = homogeneous_family(delta)
    k = value.degree
    implied: Optional[Fraction] = None
    checked = 0
    for combo in itertools.combinations(family, k):
        functions = tuple(f for f, _ in combo)
        if isinstance(value, FirstOrderOp):
            result = op_on_functions(value, *functions)
        else:
            result = bracket_of_functions(value, *functions)
        checked += 1
        if result.is_zero():
            continue
        found = degree(result, delta)
        if found.status != HOMOGENEOUS:
            return BracketDegreeReport(None, False, checked, functions, "crochet non homogène")
        n = found.value - sum((d for _, d in combo), Fraction(0))
        if implied is None:
            implied = n
        elif n != implied:
            return BracketDegreeReport(None, False, checked, functions, f"degrés {implied} et {n} incompatibles")
    logger.debug("degree_via_brackets : %d combinaisons, degré %s", checked, implied)
    return BracketDegreeReport(implied, True, checked)


# --- Décomposition le long de Δ et réduction J ---

def decompose_along_delta(p: Multivector, setup: HomogeneousSetup) -> Tuple[Multivector, Optional[Multivector]]:
    """P = P⁰ + Δ∧P¹ avec P⁰, P¹ sans composante selon ∂_t."""
    setup.require_product()
    if p.chart != setup.chart:
        raise ChartMismatchError("Le multivecteur n'est pas sur la carte de la structure")
    chart = setup.chart
    it = chart.index(setup.t)
    inv_t = Scalar.variable(chart, setup.t, -1)
    p0_terms = {}
    p1_terms = {}
    for indices, c in p.terms.items():
        if it not in indices:
            p0_terms[indices] = c
            continue
        m = indices.index(it)
        rest = indices[:m] + indices[m + 1:]
        value = c * inv_t
        p1_terms[rest] = value if m % 2 == 0 else -value
    p0 = Multivector(chart, p.degree, p0_terms)
    p1 = Multivector(chart, p.degree - 1, p1_terms) if p.degree > 0 else None
    return p0, p1


def reduce_J(p: Multivector, setup: HomogeneousSetup, restrict_to_slice: bool = False) -> Reduction:
    """J(P) = P⁰ + I∧P¹ ; J_N(P) = J(P)|_N. Une entrée non homogène de degré 1−k est signalée."""
    p0, p1 = decompose_along_delta(p, setup)
    if restrict_to_slice:
        p0 = restrict(p0, setup.t)
        p1 = None if p1 is None else restrict(p1, setup.t)
    found = degree(p, setup)
    result = Reduction(FirstOrderOp.join(p0, p1), 1 - p.degree, found)
    if result.homogeneity_violated:
        logger.info("J appliqué à un multivecteur de degré %s (attendu %d) : homogeneity violated",
                    found, 1 - p.degree)
    return result


def J(p: Multivector, setup: HomogeneousSetup) -> FirstOrderOp:
    return reduce_J(p, setup).value


def J_N(p: Multivector, setup: HomogeneousSetup) -> FirstOrderOp:
    return reduce_J(p, setup, restrict_to_slice=True).value


def poissonize(d: FirstOrderOp, setup: HomogeneousSetup) -> Multivector:
    """Inverse de J_N : t^{1−k}(P̄⁰ + t∂_t∧P̄¹), les barres désignant les extensions indépendantes de t."""
    setup.require_product()
    if d.chart != setup.slice_chart:
        raise ChartMismatchError("L'opérateur doit être défini sur la tranche N")
    chart = setup.chart
    result = transport(d.d0, chart)
    if d.d1 is not None:
        result = result + wedge(setup.delta, transport(d.d1, chart))
    return result * Scalar.variable(chart, setup.t, 1 - d.degree)


# --- Version duale : Ψ et Ψ_N ---

def _psi_components(alpha: DiffForm, setup: HomogeneousSetup) -> Tuple[DiffForm, Optional[DiffForm]]:
    setup.require_product()
    if alpha.chart != setup.chart:
        raise ChartMismatchError("La forme n'est pas sur la carte de la structure")
    chart = setup.chart
    inv_t = Scalar.variable(chart, setup.t, -1)
    if alpha.degree == 0:
        return alpha * inv_t, None
    a1 = contract(setup.delta, alpha) * inv_t
    a0 = (alpha - wedge(DiffForm.basis(chart, setup.t), a1)) * inv_t
    return a0, a1


def psi(alpha: DiffForm, setup: HomogeneousSetup, restrict_to_slice: bool = False) -> Reduction:
    """
    Ψ(α) = (α⁰, α¹) avec α = t(α⁰ + dt/t ∧ α¹), α¹ = t⁻¹ i_Δ α ;
    Ψ_N(α) = (j*α, j*(i_Δ α)).
    """
    a0, a1 = _psi_components(alpha, setup)
    if restrict_to_slice:
        a0 = restrict(a0, setup.t)
        a1 = None if a1 is None else restrict(a1, setup.t)
    found = degree(alpha, setup)
    result = Reduction(FormPair.join(a0, a1), 1, found)
    if result.homogeneity_violated:
        logger.info("Ψ appliqué à une forme de degré %s (attendu 1) : homogeneity violated", found)
    return result


def Psi(alpha: DiffForm, setup: HomogeneousSetup) -> FormPair:
    return psi(alpha, setup).value


def Psi_N(alpha: DiffForm, setup: HomogeneousSetup) -> FormPair:
    return psi(alpha, setup, restrict_to_slice=True).value


def unpsi_N(pair: FormPair, setup: HomogeneousSetup) -> DiffForm:
    """Inverse de Ψ_N : t β̄⁰ + dt ∧ β̄¹ (forme homogène de degré 1)."""
    setup.require_product()
    if pair.chart != setup.slice_chart:
        raise ChartMismatchError("La paire doit être définie sur la tranche N")
    chart = setup.chart
    result = transport(pair.a0, chart) * Scalar.variable(chart, setup.t)
    if pair.a1 is not None:
        result = result + wedge(DiffForm.basis(chart, setup.t), transport(pair.a1, chart))
    return result


def symplectize(eta: DiffForm, setup: HomogeneousSetup) -> DiffForm:
    """d(t η̄) : la forme homogène de degré 1 dont la réduction de contact est η."""
    setup.require_product()
    if eta.chart != setup.slice_chart:
        raise ChartMismatchError("La forme doit être définie sur la tranche N")
    extended = transport(eta, setup.chart) * Scalar.variable(setup.chart, setup.t)
    return exterior_derivative(extended)


def is_basic(pair: FormPair, setup: HomogeneousSetup) -> bool:
    """Vrai si i_Δ et L_Δ annulent les deux composantes."""
    for part in pair.split():
        if part is None or part.is_zero():
            continue
        if part.degree > 0 and not contract(setup.delta, part).is_zero():
            return False
        if not lie_derivative(setup.delta, part).is_zero():
            return False
    return True
