"""
Générateurs aléatoires déterministes (random.Random) de scalaires, tenseurs,
opérateurs et tenseurs homogènes, pour les identités vérifiées par `selftest`
et par les tests.
"""

import random
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .exterior import DiffForm, Multivector, SkewTensor
from .jacobi import FirstOrderOp, FormPair
from .ring import Chart, Scalar

COEFFICIENTS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-3), Fraction(1, 2), Fraction(-2, 3))


def random_coefficient(rng: random.Random) -> Fraction:
    return rng.choice(COEFFICIENTS)


def random_scalar(rng: random.Random, chart: Chart, max_terms: int = 2, max_total: int = 2,
                  exponents: Tuple[int, int] = (-2, 2), variables: Optional[Sequence[str]] = None) -> Scalar:
    """
    Polynôme de Laurent creux : au plus `max_terms` termes, somme des |exposants| ≤ max_total.
    `variables` restreint les variables qui peuvent apparaître.
    """
    names = list(variables) if variables is not None else list(chart.variables)
    lo, hi = exponents
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * chart.dim
        budget = max_total
        for name in rng.sample(names, len(names)):
            if budget == 0:
                break
            e = rng.randint(max(lo, -budget), min(hi, budget))
            exps[chart.index(name)] = e
            budget -= abs(e)
        terms[tuple(exps)] = random_coefficient(rng)
    return Scalar(chart, terms)


def random_polynomial(rng: random.Random, chart: Chart, max_terms: int = 3, max_total: int = 2) -> Scalar:
    return random_scalar(rng, chart, max_terms, max_total, exponents=(0, max_total))


def _random_indices(rng: random.Random, dim: int, degree: int) -> Tuple[int, ...]:
    return tuple(sorted(rng.sample(range(dim), degree)))


def _random_tensor(cls, rng: random.Random, chart: Chart, degree: int, max_terms: int = 2, coefficient=None):
    if degree > chart.dim:
        return cls.zero(chart, degree)
    coefficient = coefficient or (lambda indices: random_scalar(rng, chart))
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        indices = _random_indices(rng, chart.dim, degree)
        terms[indices] = coefficient(indices)
    return cls(chart, degree, terms)


def random_multivector(rng: random.Random, chart: Chart, degree: int, max_terms: int = 2) -> Multivector:
    return _random_tensor(Multivector, rng, chart, degree, max_terms)


def random_form(rng: random.Random, chart: Chart, degree: int, max_terms: int = 2) -> DiffForm:
    return _random_tensor(DiffForm, rng, chart, degree, max_terms)


def random_op(rng: random.Random, chart: Chart, degree: int) -> FirstOrderOp:
    d1 = random_multivector(rng, chart, degree - 1) if degree > 0 else None
    return FirstOrderOp(degree, random_multivector(rng, chart, degree), d1)


def random_form_pair(rng: random.Random, chart: Chart, degree: int) -> FormPair:
    a1 = random_form(rng, chart, degree - 1) if degree > 0 else None
    return FormPair(degree, random_form(rng, chart, degree), a1)


def random_homogeneous(cls, rng: random.Random, chart: Chart, degree: int, n: int, max_terms: int = 2) -> SkewTensor:
    """
    Tenseur Δ-homogène de degré n pour Δ = t∂_t : coefficient t^{n ± m} g(x),
    m étant le nombre de facteurs ∂_t (+) ou dt (−) du terme.
    """
    t = chart.homogeneity_variable
    it = chart.index(t)
    others = [v for v in chart.variables if v != t]
    shift = 1 if cls is Multivector else -1

    def coefficient(indices):
        g = random_scalar(rng, chart, variables=others)
        power = n + shift * (1 if it in indices else 0)
        return g * Scalar.variable(chart, t, power)

    return _random_tensor(cls, rng, chart, degree, max_terms, coefficient)


def random_homogeneous_multivector(rng: random.Random, chart: Chart, degree: int,
                                   n: Optional[int] = None) -> Multivector:
    """Par défaut de degré d'homogénéité 1 − k."""
    return random_homogeneous(Multivector, rng, chart, degree, 1 - degree if n is None else n)


def random_homogeneous_form(rng: random.Random, chart: Chart, degree: int, n: int = 1) -> DiffForm:
    return random_homogeneous(DiffForm, rng, chart, degree, n)
