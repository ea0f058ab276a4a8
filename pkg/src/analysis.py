"""
Rapports de vérification et suite d'identités aléatoires (commande `selftest`).
"""

import logging
import random
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import pandas as pd

from .config import Settings
from .errors import PJError
from .exterior import bracket_of_functions, exterior_derivative, sn_bracket, wedge
from .generators import (random_form, random_form_pair, random_homogeneous_form, random_homogeneous_multivector,
                         random_multivector, random_op, random_scalar)
from .homogeneity import HomogeneousSetup, J, J_N, Psi, Psi_N, poissonize
from .jacobi import FirstOrderOp, FormPair, jacobi_differential, op_on_functions, op_wedge, pair_wedge, sj_bracket
from .ring import Chart, Scalar

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
ERROR = "error"

GENERIC_CHART = Chart(("x", "y", "z", "w"))
REDUCTION_CHARTS = (Chart(("x", "t"), "t"), Chart(("x", "y", "t"), "t"))


@dataclass
class CheckReport:
    """Résultat d'une vérification (commande check ou identité de la suite)."""
    name: str
    status: str
    witness: str = ""
    detail: str = ""
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1}.get(self.status, 2)


def aggregate_status(reports: Iterable[CheckReport]) -> int:
    """2 si une erreur, sinon 1 si un échec, sinon 0."""
    codes = [r.exit_code for r in reports]
    return max(codes, default=0)


def reports_to_frame(reports: Iterable[CheckReport]) -> pd.DataFrame:
    """Tableau récapitulatif, une ligne par vérification."""
    rows = [{
        "name": r.name,
        "status": r.status,
        "samples": r.samples,
        "witness": r.witness,
        "detail": r.detail,
    } for r in reports]
    if not rows:
        return pd.DataFrame(columns=["name", "status", "samples", "witness", "detail"])
    return pd.DataFrame(rows)


# --- Identités ---

def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _degrees(rng: random.Random, settings: Settings, count: int) -> Tuple[int, ...]:
    """Degrés aléatoires avec au plus un zéro (⟦f, g⟧ n'a pas de degré −1)."""
    while True:
        degrees = tuple(rng.randint(0, settings.max_degree) for _ in range(count))
        if sum(1 for d in degrees if d == 0) <= 1:
            return degrees


def _sn_antisymmetry(rng, settings) -> Optional[str]:
    p, q = _degrees(rng, settings, 2)
    P, Q = random_multivector(rng, GENERIC_CHART, p), random_multivector(rng, GENERIC_CHART, q)
    if sn_bracket(P, Q) != -(sn_bracket(Q, P) * _sign((p - 1) * (q - 1))):
        return f"P={P!r}, Q={Q!r}"
    return None


def _sn_leibniz(rng, settings) -> Optional[str]:
    p, q, r = _degrees(rng, settings, 3)
    P, Q, R = (random_multivector(rng, GENERIC_CHART, d) for d in (p, q, r))
    left = sn_bracket(P, wedge(Q, R))
    right = wedge(sn_bracket(P, Q), R) + wedge(Q, sn_bracket(P, R)) * _sign((p - 1) * q)
    return None if left == right else f"P={P!r}, Q={Q!r}, R={R!r}"


def _graded_jacobi(bracket, P, Q, R, p, q, r):
    return (bracket(bracket(P, Q), R) * _sign((p - 1) * (r - 1))
            + bracket(bracket(Q, R), P) * _sign((p - 1) * (q - 1))
            + bracket(bracket(R, P), Q) * _sign((q - 1) * (r - 1)))


def _sn_jacobi(rng, settings) -> Optional[str]:
    degrees = _degrees(rng, settings, 3)
    P, Q, R = (random_multivector(rng, GENERIC_CHART, d) for d in degrees)
    total = _graded_jacobi(sn_bracket, P, Q, R, *degrees)
    return None if total.is_zero() else f"P={P!r}, Q={Q!r}, R={R!r}"


def _sj_antisymmetry(rng, settings) -> Optional[str]:
    k, r = _degrees(rng, settings, 2)
    P, Q = random_op(rng, GENERIC_CHART, k), random_op(rng, GENERIC_CHART, r)
    if sj_bracket(P, Q) != -(sj_bracket(Q, P) * _sign((k - 1) * (r - 1))):
        return f"P={P!r}, Q={Q!r}"
    return None


def _sj_leibniz(rng, settings) -> Optional[str]:
    p, q, r = _degrees(rng, settings, 3)
    D, E, F = (random_op(rng, GENERIC_CHART, d) for d in (p, q, r))
    left = sj_bracket(D, op_wedge(E, F))
    right = op_wedge(sj_bracket(D, E), F) + op_wedge(E, sj_bracket(D, F)) * _sign((p - 1) * q)
    if D.d1 is not None:
        right = right - op_wedge(op_wedge(FirstOrderOp.embed(D.d1), E), F)
    return None if left == right else f"D={D!r}, E={E!r}, F={F!r}"


def _sj_jacobi(rng, settings) -> Optional[str]:
    degrees = _degrees(rng, settings, 3)
    D, E, F = (random_op(rng, GENERIC_CHART, d) for d in degrees)
    total = _graded_jacobi(sj_bracket, D, E, F, *degrees)
    return None if total.is_zero() else f"D={D!r}, E={E!r}, F={F!r}"


def _sj_extends_sn(rng, settings) -> Optional[str]:
    p, q = _degrees(rng, settings, 2)
    P, Q = random_multivector(rng, GENERIC_CHART, p), random_multivector(rng, GENERIC_CHART, q)
    if sj_bracket(FirstOrderOp.embed(P), FirstOrderOp.embed(Q)) != FirstOrderOp.embed(sn_bracket(P, Q)):
        return f"P={P!r}, Q={Q!r}"
    return None


def _d_squared(rng, settings) -> Optional[str]:
    alpha = random_form(rng, GENERIC_CHART, rng.randint(0, settings.max_degree))
    return None if exterior_derivative(exterior_derivative(alpha)).is_zero() else f"α={alpha!r}"


def _d_product(rng, settings) -> Optional[str]:
    p, q = rng.randint(0, settings.max_degree), rng.randint(0, 2)
    a, b = random_form(rng, GENERIC_CHART, p), random_form(rng, GENERIC_CHART, q)
    left = exterior_derivative(wedge(a, b))
    right = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)) * _sign(p)
    return None if left == right else f"α={a!r}, β={b!r}"


def _d1_squared(rng, settings) -> Optional[str]:
    alpha = random_form_pair(rng, GENERIC_CHART, rng.randint(0, settings.max_degree))
    twice = jacobi_differential(jacobi_differential(alpha))
    return None if twice.is_zero() else f"α={alpha!r}"


def _d1_product(rng, settings) -> Optional[str]:
    p, q = rng.randint(0, settings.max_degree), rng.randint(0, 2)
    a, b = random_form_pair(rng, GENERIC_CHART, p), random_form_pair(rng, GENERIC_CHART, q)
    phi = FormPair.phi(GENERIC_CHART)
    left = jacobi_differential(pair_wedge(a, b))
    right = (pair_wedge(jacobi_differential(a), b) + pair_wedge(a, jacobi_differential(b)) * _sign(p)
             - pair_wedge(pair_wedge(phi, a), b))
    return None if left == right else f"α={a!r}, β={b!r}"


def _reduction_setup(rng) -> HomogeneousSetup:
    return HomogeneousSetup.product(rng.choice(REDUCTION_CHARTS))


def _degree_one_function(rng, setup: HomogeneousSetup) -> Scalar:
    others = [v for v in setup.chart.variables if v != setup.t]
    g = random_scalar(rng, setup.chart, variables=others)
    return g * Scalar.variable(setup.chart, setup.t)


def _reduction_pairing(rng, settings) -> Optional[str]:
    setup = _reduction_setup(rng)
    k = rng.randint(0, min(settings.max_degree, setup.chart.dim))
    P = random_homogeneous_multivector(rng, setup.chart, k)
    fs = [_degree_one_function(rng, setup) for _ in range(k)]
    if bracket_of_functions(P, *fs) != op_on_functions(J(P, setup), *fs):
        return f"P={P!r}, f={fs!r}"
    return None


def _reduction_bracket(rng, settings) -> Optional[str]:
    setup = _reduction_setup(rng)
    top = min(settings.max_degree, setup.chart.dim)
    while True:
        p, q = rng.randint(0, top), rng.randint(0, top)
        if p + q >= 1:
            break
    P = random_homogeneous_multivector(rng, setup.chart, p)
    Q = random_homogeneous_multivector(rng, setup.chart, q)
    PQ = sn_bracket(P, Q)
    if sj_bracket(J(P, setup), J(Q, setup)) != J(PQ, setup):
        return f"J : P={P!r}, Q={Q!r}"
    if sj_bracket(J_N(P, setup), J_N(Q, setup)) != J_N(PQ, setup):
        return f"J_N : P={P!r}, Q={Q!r}"
    return None


def _bijectivity(rng, settings) -> Optional[str]:
    setup = _reduction_setup(rng)
    k = rng.randint(0, min(3, setup.chart.dim))
    P = random_homogeneous_multivector(rng, setup.chart, k)
    if poissonize(J_N(P, setup), setup) != P:
        return f"poissonize∘J_N : P={P!r}"
    D = random_op(rng, setup.slice_chart, min(k, setup.slice_chart.dim))
    if J_N(poissonize(D, setup), setup) != D:
        return f"J_N∘poissonize : D={D!r}"
    return None


def _psi_naturality(rng, settings) -> Optional[str]:
    setup = _reduction_setup(rng)
    k = rng.randint(0, min(2, setup.chart.dim - 1))
    alpha = random_homogeneous_form(rng, setup.chart, k)
    d_alpha = exterior_derivative(alpha)
    if Psi(d_alpha, setup) != jacobi_differential(Psi(alpha, setup)):
        return f"Ψ : α={alpha!r}"
    if Psi_N(d_alpha, setup) != jacobi_differential(Psi_N(alpha, setup)):
        return f"Ψ_N : α={alpha!r}"
    return None


IDENTITIES: List[Tuple[str, Callable[[random.Random, Settings], Optional[str]]]] = [
    ("sn-antisymmetry", _sn_antisymmetry),
    ("sn-leibniz", _sn_leibniz),
    ("sn-jacobi", _sn_jacobi),
    ("sj-antisymmetry", _sj_antisymmetry),
    ("sj-leibniz", _sj_leibniz),
    ("sj-jacobi", _sj_jacobi),
    ("sj-extends-sn", _sj_extends_sn),
    ("d-squared", _d_squared),
    ("d-product", _d_product),
    ("d1-squared", _d1_squared),
    ("d1-product", _d1_product),
    ("reduction-pairing", _reduction_pairing),
    ("reduction-bracket", _reduction_bracket),
    ("reduction-bijectivity", _bijectivity),
    ("psi-naturality", _psi_naturality),
]


def run_identity(name: str, check, settings: Settings) -> CheckReport:
    rng = random.Random(f"{settings.seed}:{name}")
    for i in range(settings.samples):
        try:
            witness = check(rng, settings)
        except PJError as exc:
            logger.warning("%s : erreur à l'échantillon %d : %s", name, i, exc)
            return CheckReport(name, ERROR, detail=str(exc), samples=i + 1)
        if witness is not None:
            return CheckReport(name, FAIL, witness=witness, samples=i + 1)
    return CheckReport(name, PASS, samples=settings.samples)


def run_identity_suite(settings: Settings, names: Optional[Iterable[str]] = None) -> List[CheckReport]:
    """Exécute chaque identité sur `settings.samples` échantillons déterministes."""
    wanted = set(names) if names is not None else None
    reports = []
    for name, check in IDENTITIES:
        if wanted is not None and name not in wanted:
            continue
        report = run_identity(name, check, settings)
        logger.info("%s : %s (%d échantillons)", name, report.status, report.samples)
        reports.append(report)
    return reports
