"""
Arithmétique exacte : polynômes de Laurent multivariés creux à coefficients rationnels.

Un Scalar est un dictionnaire {vecteur d'exposants: coefficient Fraction non nul}
sur une carte (Chart). Les exposants négatifs sont autorisés pour toutes les variables ;
seuls les monômes sont inversibles.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import sympy

from .errors import (ChartError, ChartMismatchError, DegreeError, NonInvertibleError, RestrictionError,
                     UnknownVariableError)

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Number = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """Convertit int, Fraction ou texte 'n/m' en Fraction ; refuse les flottants."""
    if isinstance(value, bool):
        raise TypeError("Un booléen n'est pas un rationnel")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Coefficient non exact refusé : {value!r}")


@dataclass(frozen=True)
class Chart:
    """Carte de coordonnées : noms de variables ordonnés, variable d'homogénéité optionnelle."""
    variables: Tuple[str, ...]
    homogeneity_variable: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if any(not name for name in self.variables):
            raise ChartError("Nom de variable vide dans la carte")
        if len(set(self.variables)) != len(self.variables):
            raise ChartError(f"Variables dupliquées : {self.variables}")
        if self.homogeneity_variable is not None and self.homogeneity_variable not in self.variables:
            raise ChartError(
                f"La variable d'homogénéité '{self.homogeneity_variable}' n'est pas dans la carte"
            )

    @property
    def dim(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(f"Variable inconnue '{name}' dans la carte {self.variables}")

    def slice_chart(self) -> "Chart":
        """La tranche N = {t = 1} : même carte sans la variable d'homogénéité."""
        if self.homogeneity_variable is None:
            raise ChartError("La carte n'a pas de variable d'homogénéité")
        return Chart(tuple(v for v in self.variables if v != self.homogeneity_variable))

    def __str__(self) -> str:
        suffix = f" homog {self.homogeneity_variable}" if self.homogeneity_variable else ""
        return f"({', '.join(self.variables)}){suffix}"


@dataclass(frozen=True)
class Point:
    """Affectation rationnelle de toutes les variables d'une carte."""
    chart: Chart
    values: Tuple[Fraction, ...]

    @classmethod
    def of(cls, chart: Chart, assignment: Mapping[str, Number]) -> "Point":
        missing = [v for v in chart.variables if v not in assignment]
        if missing:
            raise ChartError(f"Point incomplet, variables non affectées : {missing}")
        unknown = [v for v in assignment if v not in chart.variables]
        if unknown:
            raise UnknownVariableError(f"Variables inconnues dans le point : {unknown}")
        return cls(chart, tuple(to_fraction(assignment[v]) for v in chart.variables))

    def __getitem__(self, name: str) -> Fraction:
        return self.values[self.chart.index(name)]

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(zip(self.chart.variables, self.values))


@dataclass(frozen=True)
class Scalar:
    """Polynôme de Laurent en forme canonique (aucun coefficient nul stocké)."""
    chart: Chart
    terms: Mapping[Exponents, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Exponents, Fraction] = {}
        n = self.chart.dim
        for exps, coeff in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ChartError(f"Vecteur d'exposants {exps} de longueur != {n}")
            c = to_fraction(coeff)
            if c != 0:
                clean[exps] = c
        object.__setattr__(self, "terms", clean)

    # --- Constructeurs ---

    @classmethod
    def zero(cls, chart: Chart) -> "Scalar":
        return cls(chart, {})

    @classmethod
    def constant(cls, chart: Chart, value: Number) -> "Scalar":
        return cls(chart, {(0,) * chart.dim: value})

    @classmethod
    def one(cls, chart: Chart) -> "Scalar":
        return cls.constant(chart, 1)

    @classmethod
    def variable(cls, chart: Chart, name: str, power: int = 1) -> "Scalar":
        exps = [0] * chart.dim
        exps[chart.index(name)] = power
        return cls(chart, {tuple(exps): 1})

    @classmethod
    def monomial(cls, chart: Chart, powers: Mapping[str, int], coeff: Number = 1) -> "Scalar":
        exps = [0] * chart.dim
        for name, power in powers.items():
            exps[chart.index(name)] = power
        return cls(chart, {tuple(exps): coeff})

    # --- Prédicats ---

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.is_zero() or (len(self.terms) == 1 and (0,) * self.chart.dim in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DegreeError("Le scalaire n'est pas constant")
        return self.terms.get((0,) * self.chart.dim, Fraction(0))

    def is_monomial(self) -> bool:
        """Vrai pour les unités de l'anneau : un seul terme, coefficient non nul."""
        return len(self.terms) == 1

    def exponent_range(self, name: str) -> Tuple[int, int]:
        i = self.chart.index(name)
        exps = [e[i] for e in self.terms] or [0]
        return min(exps), max(exps)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __iter__(self) -> Iterator[Tuple[Exponents, Fraction]]:
        return iter(sorted(self.terms.items(), reverse=True))

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __bool__(self):
        return not self.is_zero()

    # --- Arithmétique ---

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.chart != self.chart:
                raise ChartMismatchError(f"Cartes différentes : {self.chart} et {other.chart}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Scalar.constant(self.chart, other)
        raise TypeError(f"Opérande non scalaire : {other!r}")

    def __add__(self, other) -> "Scalar":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + c
        return Scalar(self.chart, terms)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Scalar":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            return Scalar(self.chart, {e: v * c for e, v in self.terms.items()})
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Scalar(self.chart, terms)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.is_monomial():
            raise NonInvertibleError(f"non-invertible scalar : {self}")
        (exps, c), = self.terms.items()
        return Scalar(self.chart, {tuple(-e for e in exps): 1 / c})

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            raise TypeError("Seules les puissances entières sont définies")
        if n < 0:
            return self.inverse() ** (-n)
        result = Scalar.one(self.chart)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("Division par zéro")
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def exact_quotient(self, other: "Scalar") -> Optional[Fraction]:
        """Retourne c tel que self == c * other si c'est une constante, sinon None."""
        other = self._coerce(other)
        if other.is_zero():
            return None
        exps, c_other = next(iter(other))
        ratio = self.terms.get(exps, Fraction(0)) / c_other
        return ratio if self == other * ratio else None

    # --- Calcul différentiel et spécialisation ---

    def derivative(self, name: str) -> "Scalar":
        """∂/∂name terme à terme : c·x^n ↦ n·c·x^(n-1)."""
        i = self.chart.index(name)
        terms: Dict[Exponents, Fraction] = {}
        for exps, c in self.terms.items():
            n = exps[i]
            if n == 0:
                continue
            new = list(exps)
            new[i] = n - 1
            terms[tuple(new)] = c * n
        return Scalar(self.chart, terms)

    def specialize(self, name: str, value: Number) -> "Scalar":
        """Substitue name = value ; le résultat reste sur la même carte (exposant 0)."""
        i = self.chart.index(name)
        value = to_fraction(value)
        terms: Dict[Exponents, Fraction] = {}
        for exps, c in self.terms.items():
            n = exps[i]
            if n < 0 and value == 0:
                raise RestrictionError(f"Substitution de 0 dans un exposant négatif de '{name}'")
            new = list(exps)
            new[i] = 0
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + c * value ** n
        return Scalar(self.chart, terms)

    def evaluate(self, point: Point) -> Fraction:
        if point.chart != self.chart:
            raise ChartMismatchError("Le point n'est pas sur la carte du scalaire")
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for x, n in zip(point.values, exps):
                if n < 0 and x == 0:
                    raise RestrictionError("Évaluation en 0 d'une variable à exposant négatif")
                term *= x ** n
            total += term
        return total

    def reindex(self, target: Chart, value: Number = 1) -> "Scalar":
        """
        Transporte le scalaire vers une carte dont les variables sont un
        sous-ensemble ou un sur-ensemble de la carte courante.
        Les variables supprimées sont spécialisées à `value`, les nouvelles ont l'exposant 0.
        """
        f = self
        for name in self.chart.variables:
            if name not in target.variables:
                f = f.specialize(name, value)
        positions = [self.chart.variables.index(v) if v in self.chart.variables else None
                     for v in target.variables]
        terms: Dict[Exponents, Fraction] = {}
        for exps, c in f.terms.items():
            key = tuple(exps[p] if p is not None else 0 for p in positions)
            terms[key] = terms.get(key, Fraction(0)) + c
        return Scalar(target, terms)

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        # Affichage court pour les messages ; l'affichage canonique est dans frontend.printer
        if self.is_zero():
            return "0"
        parts = []
        for exps, c in self:
            mono = " ".join(
                name if n == 1 else f"{name}^{n}"
                for name, n in zip(self.chart.variables, exps) if n != 0
            )
            parts.append(f"{c} {mono}".strip())
        return " + ".join(parts)


def partial_derivative(f: Scalar, name: str) -> Scalar:
    return f.derivative(name)


def specialize(f: Scalar, name_or_point: Union[str, Point], value: Optional[Number] = None):
    """
    specialize(f, 'v', valeur) -> Scalar ; specialize(f, point) -> Fraction.
    """
    if isinstance(name_or_point, Point):
        return f.evaluate(name_or_point)
    if value is None:
        raise ValueError("Une valeur est requise pour spécialiser une variable")
    return f.specialize(name_or_point, value)


def _symbols(chart: Chart) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(name) for name in chart.variables)


def to_sympy(f: Scalar, symbols: Tuple[sympy.Symbol, ...]) -> sympy.Expr:
    """Expression sympy équivalente, coefficients en sympy.Rational."""
    total = sympy.Integer(0)
    for exps, c in f:
        term = sympy.Rational(c.numerator, c.denominator)
        for sym, n in zip(symbols, exps):
            term *= sym ** n
        total += term
    return total


def from_sympy(expr: sympy.Expr, chart: Chart, symbols: Tuple[sympy.Symbol, ...]) -> Scalar:
    """Relit un polynôme de Laurent développé en Scalar sur la carte donnée."""
    position = {sym: i for i, sym in enumerate(symbols)}
    terms: Dict[Exponents, Fraction] = {}
    for term in sympy.Add.make_args(sympy.expand(expr)):
        coeff, rest = term.as_coeff_Mul()
        if coeff == 0:
            continue
        if not coeff.is_Rational:
            raise TypeError(f"Coefficient non rationnel : {coeff}")
        exps = [0] * chart.dim
        for base, power in rest.as_powers_dict().items():
            if base == 1:
                continue
            if base not in position or not power.is_Integer:
                raise TypeError(f"Terme hors de l'anneau de Laurent : {term}")
            exps[position[base]] += int(power)
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + Fraction(int(coeff.p), int(coeff.q))
    return Scalar(chart, terms)


def _to_matrix(matrix) -> Tuple[Chart, Tuple[sympy.Symbol, ...], sympy.Matrix]:
    n = len(matrix)
    if n == 0:
        raise ValueError("Matrice vide")
    chart = matrix[0][0].chart
    symbols = _symbols(chart)
    return chart, symbols, sympy.Matrix(n, n, lambda i, j: to_sympy(matrix[i][j], symbols))


def _unit_determinant(chart: Chart, symbols, m: sympy.Matrix) -> Scalar:
    det = from_sympy(m.det(method="berkowitz"), chart, symbols)
    if det.is_zero() or not det.is_monomial():
        raise NonInvertibleError(f"not invertible over the Laurent ring (det = {det})")
    return det


def determinant(matrix) -> Scalar:
    """Déterminant exact d'une matrice carrée de Scalars (Berkowitz, sans division)."""
    chart, symbols, m = _to_matrix(matrix)
    return from_sympy(m.det(method="berkowitz"), chart, symbols)


def solve_unit_system(matrix, rhs) -> list:
    """
    Résout A x = b exactement par x = adj(A) b / det(A), en exigeant que det(A)
    soit une unité (monôme) de l'anneau de Laurent.
    """
    chart, symbols, m = _to_matrix(matrix)
    det = _unit_determinant(chart, symbols, m)
    inv_det = det.inverse()
    b = sympy.Matrix([to_sympy(value, symbols) for value in rhs])
    solution = [from_sympy(entry, chart, symbols) * inv_det for entry in m.adjugate(method="berkowitz") * b]
    logger.debug("Système %dx%d résolu, det = %s", m.rows, m.rows, det)
    return solution


def adjugate_inverse(matrix) -> list:
    """Inverse exacte A^{-1} = adj(A)/det(A), det(A) devant être une unité."""
    chart, symbols, m = _to_matrix(matrix)
    inv_det = _unit_determinant(chart, symbols, m).inverse()
    adjugate = m.adjugate(method="berkowitz")
    return [[from_sympy(adjugate[i, j], chart, symbols) * inv_det for j in range(m.cols)] for i in range(m.rows)]


def scalars(chart: Chart, names: Iterable[str]) -> Tuple[Scalar, ...]:
    """Raccourci : les fonctions coordonnées demandées."""
    return tuple(Scalar.variable(chart, name) for name in names)
