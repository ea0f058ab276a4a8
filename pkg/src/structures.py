"""
Certificateurs de structures (Poisson, Jacobi, Nambu) et géométrie dérivée :
inversion symplectique, champs hamiltoniens, réduction de contact.
"""

from __future__ import annotations

import itertools
import logging
from typing import List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ChartMismatchError, DegreeError, NonInvertibleError, StructureError
from .exterior import (DiffForm, Multivector, apply_vector, contract, differential, exterior_derivative,
                       pairing, restrict, sn_bracket, wedge)
from .homogeneity import HomogeneousSetup, degree, psi
from .jacobi import FirstOrderOp, sj_bracket
from .models import Certificate, ContactCalculus, ContactData, NambuReport
from .ring import Chart, Scalar, adjugate_inverse, solve_unit_system, to_fraction

logger = logging.getLogger(__name__)


def _require_degree(value, k: int, label: str):
    if value.degree != k:
        raise DegreeError(f"{label} attend un objet de degré {k} (reçu {value.degree})")


# --- Poisson et Jacobi ---

def is_poisson(bivector: Multivector) -> Certificate:
    """⟦Λ, Λ⟧ = 0 ; l'obstruction est le trivecteur ⟦Λ, Λ⟧."""
    if not isinstance(bivector, Multivector):
        raise DegreeError("check poisson attend un multivecteur")
    _require_degree(bivector, 2, "check poisson")
    obstruction = sn_bracket(bivector, bivector)
    return Certificate("poisson", obstruction.is_zero(), obstruction)


def is_jacobi(d: FirstOrderOp) -> Certificate:
    """⟦D, D⟧¹ = 0 ; un bivecteur est lu comme opérateur plongé."""
    if isinstance(d, Multivector):
        d = FirstOrderOp.embed(d)
    if not isinstance(d, FirstOrderOp):
        raise DegreeError("check jacobi attend un opérateur du premier ordre")
    _require_degree(d, 2, "check jacobi")
    obstruction = sj_bracket(d, d)
    return Certificate("jacobi", obstruction.is_zero(), obstruction)


def default_nambu_family(chart: Chart) -> List[Scalar]:
    """Coordonnées et produits deux à deux de coordonnées."""
    xs = [Scalar.variable(chart, v) for v in chart.variables]
    return xs + [f * g for f, g in itertools.combinations_with_replacement(xs, 2)]


def nambu_check(tensor: Union[Multivector, FirstOrderOp],
                test_functions: Optional[Sequence[Scalar]] = None) -> NambuReport:
    """
    Identité fondamentale ⟦⟦…⟦P, f1⟧, …, f_{k−1}⟧, P⟧ = 0 sur chaque (k−1)-uplet de la famille.
    Condition nécessaire seulement : la famille est finie.
    Pour un opérateur du premier ordre le crochet utilisé est ⟦·,·⟧¹.
    """
    if tensor.degree < 2:
        raise DegreeError("Le test de Nambu exige un degré k ≥ 2")
    family = list(test_functions) if test_functions is not None else default_nambu_family(tensor.chart)
    is_operator = isinstance(tensor, FirstOrderOp)
    checked = 0
    for combo in itertools.combinations(family, tensor.degree - 1):
        current = tensor
        for f in combo:
            if is_operator:
                current = sj_bracket(current, FirstOrderOp.from_function(f))
            else:
                current = sn_bracket(current, Multivector.from_scalar(f))
        result = sj_bracket(current, tensor) if is_operator else sn_bracket(current, tensor)
        checked += 1
        if not result.is_zero():
            logger.debug("Nambu : échec après %d uplets", checked)
            return NambuReport(False, len(family), checked, tuple(combo), result)
    return NambuReport(True, len(family), checked)


# --- Symplectique ---

def form_matrix(omega: DiffForm) -> List[List[Scalar]]:
    """Matrice antisymétrique W_ij des coefficients de la 2-forme."""
    _require_degree(omega, 2, "form_matrix")
    chart = omega.chart
    n = chart.dim
    zero = Scalar.zero(chart)
    matrix = [[zero] * n for _ in range(n)]
    for (i, j), c in omega.terms.items():
        matrix[i][j] = c
        matrix[j][i] = -c
    return matrix


def invert_symplectic(omega: DiffForm) -> Multivector:
    """
    Bivecteur de Poisson associé : matrice Λ = −W⁻¹,
    de sorte que dq∧dp ↦ @q∧@p.
    """
    if not isinstance(omega, DiffForm):
        raise DegreeError("invert-symplectic attend une 2-forme")
    inverse = adjugate_inverse(form_matrix(omega))
    chart = omega.chart
    terms = {}
    for i in range(chart.dim):
        for j in range(i + 1, chart.dim):
            terms[(i, j)] = -inverse[i][j]
    return Multivector(chart, 2, terms)


def hamiltonian_poisson(bivector: Multivector, f: Scalar) -> Multivector:
    """
    H_f = Λ(·, df) = −i_{df} Λ, donc H_f(g) = {g, f}_Λ.

    Avec Λ = Σ @q_i∧@p_i et f = ½ Σ (q_i² + p_i²), H_f = Σ (p_i @q_i − q_i @p_i).
    Opposé du champ de hamiltonian_symplectic pour ω = Σ dq_i∧dp_i.
    """
    _require_degree(bivector, 2, "hamiltonian")
    return -contract(differential(f), bivector)


def hamiltonian_symplectic(omega: DiffForm, f: Scalar) -> Multivector:
    """Le champ X tel que −i_X ω = df, donc X(g) = {f, g}_ω."""
    if omega.chart != f.chart:
        raise ChartMismatchError("Forme et fonction sur des cartes différentes")
    chart = omega.chart
    df = differential(f)
    rhs = [df.coefficient((i,)) for i in range(chart.dim)]
    solution = solve_unit_system(form_matrix(omega), rhs)
    return Multivector(chart, 1, {(i,): c for i, c in enumerate(solution)})


def hamiltonian_jacobi(d: FirstOrderOp, f: Scalar) -> Multivector:
    """X_f = Λ(·, df) − f E pour la paire (Λ, E) ; {g, f}_D = X_f(g) + g E(f)."""
    _require_degree(d, 2, "hamiltonian")
    return hamiltonian_poisson(d.d0, f) - d.d1 * f


def lie_poisson(chart: Chart, structure_constants: Mapping[Tuple[str, str], Mapping[str, object]]) -> Multivector:
    """
    Structure linéaire Σ c^k_ij x_k ∂_i∧∂_j sur le dual d'une algèbre de Lie,
    donnée par {x_i, x_j} = Σ_k c^k_ij x_k.
    """
    terms = {}
    for (a, b), combination in structure_constants.items():
        i, j = chart.index(a), chart.index(b)
        if i == j:
            raise DegreeError(f"Crochet {{{a}, {a}}} non antisymétrique")
        value = Scalar.zero(chart)
        for name, c in combination.items():
            value = value + Scalar.variable(chart, name) * to_fraction(c)
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        value = value if sign > 0 else -value
        terms[key] = terms[key] + value if key in terms else value
    return Multivector(chart, 2, terms)


# --- Contact ---

def contact_condition(eta: DiffForm) -> Tuple[bool, DiffForm]:
    """(dη)^k ∧ η ≠ 0 sur une variété de dimension 2k+1 ; retourne (verdict, forme volume)."""
    _require_degree(eta, 1, "contact")
    n = eta.chart.dim
    if n % 2 == 0:
        raise StructureError(f"Une forme de contact exige une dimension impaire (reçu {n})")
    d_eta = exterior_derivative(eta)
    volume = eta
    for _ in range((n - 1) // 2):
        volume = wedge(d_eta, volume)
    return not volume.is_zero(), volume


def flat_matrix(eta: DiffForm, d_eta: DiffForm) -> List[List[Scalar]]:
    """Matrice de ♭_η(X) = ⟨η, X⟩η − i_X dη : ligne j, colonne i, η_i η_j − Ω_ij."""
    chart = eta.chart
    n = chart.dim
    etas = [eta.coefficient((i,)) for i in range(n)]
    omega = form_matrix(d_eta)
    return [[etas[i] * etas[j] - omega[i][j] for i in range(n)] for j in range(n)]


def _solve_flat(matrix: List[List[Scalar]], rhs: DiffForm) -> Multivector:
    chart = rhs.chart
    values = [rhs.coefficient((i,)) for i in range(chart.dim)]
    try:
        solution = solve_unit_system(matrix, values)
    except NonInvertibleError as exc:
        raise StructureError(f"Application ♭_η non inversible sur l'anneau : {exc}")
    return Multivector(chart, 1, {(i,): c for i, c in enumerate(solution)})


def contact_reduce(omega: DiffForm, setup: HomogeneousSetup) -> ContactData:
    """
    η = Ψ_N(ω)¹ = j*(i_Δ ω) pour ω symplectique homogène de degré 1 ;
    vérifie dη = j*ω, la condition de contact et calcule le champ de Reeb.
    """
    _require_degree(omega, 2, "contact-reduce")
    if not degree(omega, setup).matches(1):
        raise StructureError("ω doit être homogène de degré 1 pour Δ")
    try:
        invert_symplectic(omega)
    except NonInvertibleError as exc:
        raise StructureError(f"ω n'est pas symplectique sur l'anneau : {exc}")
    reduced = psi(omega, setup, restrict_to_slice=True).value
    eta = reduced.a1
    if exterior_derivative(eta) != reduced.a0:
        raise StructureError("dη ≠ j*ω : ω n'est pas fermée")
    return contact_data(eta)


def contact_data(eta: DiffForm) -> ContactData:
    """Données de contact (dη, Γ, volume) d'une 1-forme η ; lève StructureError si η n'est pas de contact."""
    _require_degree(eta, 1, "contact")
    d_eta = exterior_derivative(eta)
    holds, volume = contact_condition(eta)
    if not holds:
        raise StructureError("Condition de contact dégénérée : (dη)^k ∧ η = 0")
    reeb = _solve_flat(flat_matrix(eta, d_eta), eta)
    if not contract(reeb, d_eta).is_zero() or pairing(reeb, eta) != 1:
        raise StructureError("Le champ de Reeb ne satisfait pas i_Γ dη = 0, ⟨η, Γ⟩ = 1")
    logger.debug("Données de contact : η = %r, Γ = %r", eta, reeb)
    return ContactData(eta, d_eta, reeb, volume)


def reeb_from_symplectic(omega: DiffForm, setup: HomogeneousSetup) -> Multivector:
    """Γ = (H^ω_{1̃_N})|_N."""
    field = hamiltonian_symplectic(omega, setup.one_tilde)
    return restrict(field, setup.t)


def flat(cd: ContactData, x: Multivector) -> DiffForm:
    return cd.eta * pairing(x, cd.eta) - contract(x, cd.d_eta)


def hamiltonian_contact(cd: ContactData, f: Scalar) -> Multivector:
    """♭_η(H_f) = (df − Γ(f) η) + f η."""
    rhs = differential(f) - cd.eta * apply_vector(cd.reeb, f) + cd.eta * f
    return _solve_flat(flat_matrix(cd.eta, cd.d_eta), rhs)


def contact_bracket(cd: ContactData, f: Scalar, g: Scalar) -> Scalar:
    """{f, g}_η = H_f(g) − g Γ(f)."""
    return apply_vector(hamiltonian_contact(cd, f), g) - g * apply_vector(cd.reeb, f)


def contact_calculus(cd: ContactData, f: Scalar, g: Scalar) -> ContactCalculus:
    return ContactCalculus(flat_matrix(cd.eta, cd.d_eta), hamiltonian_contact(cd, f), contact_bracket(cd, f, g))
