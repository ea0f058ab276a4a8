"""
Opérateurs polydifférentiels du premier ordre D^k ≅ A^k ⊕ A^{k−1} et sections
Θ^k ≅ Ω^k ⊕ Ω^{k−1}, toujours stockés scindés :
    D = D⁰ + I∧D¹      α = α⁰ + φ∧α¹
La composante de degré −1 (cas k = 0) est absente (None).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from .errors import ChartMismatchError, DegreeError
from .exterior import (DiffForm, Multivector, SkewTensor, bracket_of_functions, exterior_derivative,
                       sn_bracket, wedge)
from .ring import Chart, Scalar

logger = logging.getLogger(__name__)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _check_component(component: Optional[SkewTensor], cls, chart: Chart, degree: int, label: str):
    if degree < 0:
        if component is not None:
            raise DegreeError(f"La composante {label} doit être absente en degré 0")
        return
    if not isinstance(component, cls):
        raise DegreeError(f"La composante {label} doit être un {cls.__name__}")
    if component.chart != chart:
        raise ChartMismatchError(f"La composante {label} est sur une autre carte")
    if component.degree != degree:
        raise DegreeError(f"La composante {label} doit être de degré {degree} (reçu {component.degree})")


@dataclass(frozen=True)
class FirstOrderOp:
    """D = D⁰ + I∧D¹ ∈ D^k(M)."""
    degree: int
    d0: Multivector
    d1: Optional[Multivector]

    def __post_init__(self):
        if not isinstance(self.d0, Multivector):
            raise DegreeError("D⁰ doit être un multivecteur")
        _check_component(self.d0, Multivector, self.d0.chart, self.degree, "D⁰")
        _check_component(self.d1, Multivector, self.d0.chart, self.degree - 1, "D¹")

    @property
    def chart(self) -> Chart:
        return self.d0.chart

    @classmethod
    def join(cls, d0: Multivector, d1: Optional[Multivector]) -> "FirstOrderOp":
        return cls(d0.degree, d0, d1)

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "FirstOrderOp":
        d1 = Multivector.zero(chart, degree - 1) if degree > 0 else None
        return cls(degree, Multivector.zero(chart, degree), d1)

    @classmethod
    def embed(cls, p: Multivector) -> "FirstOrderOp":
        """Plongement A(M) → D(M) : (P, 0)."""
        d1 = Multivector.zero(p.chart, p.degree - 1) if p.degree > 0 else None
        return cls(p.degree, p, d1)

    @classmethod
    def identity(cls, chart: Chart) -> "FirstOrderOp":
        """L'opérateur identité I = (0, 1)."""
        return cls(1, Multivector.zero(chart, 1), Multivector.from_scalar(1, chart))

    @classmethod
    def from_function(cls, f: Scalar) -> "FirstOrderOp":
        return cls(0, Multivector.from_scalar(f), None)

    def split(self) -> Tuple[Multivector, Optional[Multivector]]:
        return self.d0, self.d1

    def is_zero(self) -> bool:
        return self.d0.is_zero() and (self.d1 is None or self.d1.is_zero())

    def __add__(self, other: "FirstOrderOp") -> "FirstOrderOp":
        _check_same(self, other)
        return FirstOrderOp(self.degree, self.d0 + other.d0, _add_optional(self.d1, other.d1))

    def __neg__(self) -> "FirstOrderOp":
        return FirstOrderOp(self.degree, -self.d0, None if self.d1 is None else -self.d1)

    def __sub__(self, other: "FirstOrderOp") -> "FirstOrderOp":
        return self + (-other)

    def __mul__(self, factor) -> "FirstOrderOp":
        return FirstOrderOp(self.degree, self.d0 * factor, None if self.d1 is None else self.d1 * factor)

    __rmul__ = __mul__

    def __xor__(self, other: "FirstOrderOp") -> "FirstOrderOp":
        return op_wedge(self, other)


@dataclass(frozen=True)
class FormPair:
    """α = α⁰ + φ∧α¹ ∈ Θ^k(M)."""
    degree: int
    a0: DiffForm
    a1: Optional[DiffForm]

    def __post_init__(self):
        if not isinstance(self.a0, DiffForm):
            raise DegreeError("α⁰ doit être une forme")
        _check_component(self.a0, DiffForm, self.a0.chart, self.degree, "α⁰")
        _check_component(self.a1, DiffForm, self.a0.chart, self.degree - 1, "α¹")

    @property
    def chart(self) -> Chart:
        return self.a0.chart

    @classmethod
    def join(cls, a0: DiffForm, a1: Optional[DiffForm]) -> "FormPair":
        return cls(a0.degree, a0, a1)

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "FormPair":
        a1 = DiffForm.zero(chart, degree - 1) if degree > 0 else None
        return cls(degree, DiffForm.zero(chart, degree), a1)

    @classmethod
    def embed(cls, alpha: DiffForm) -> "FormPair":
        a1 = DiffForm.zero(alpha.chart, alpha.degree - 1) if alpha.degree > 0 else None
        return cls(alpha.degree, alpha, a1)

    @classmethod
    def phi(cls, chart: Chart) -> "FormPair":
        """La 1-forme canonique fermée φ = (0, 1)."""
        return cls(1, DiffForm.zero(chart, 1), DiffForm.from_scalar(1, chart))

    @classmethod
    def from_function(cls, f: Scalar) -> "FormPair":
        return cls(0, DiffForm.from_scalar(f), None)

    def split(self) -> Tuple[DiffForm, Optional[DiffForm]]:
        return self.a0, self.a1

    def is_zero(self) -> bool:
        return self.a0.is_zero() and (self.a1 is None or self.a1.is_zero())

    def __add__(self, other: "FormPair") -> "FormPair":
        _check_same(self, other)
        return FormPair(self.degree, self.a0 + other.a0, _add_optional(self.a1, other.a1))

    def __neg__(self) -> "FormPair":
        return FormPair(self.degree, -self.a0, None if self.a1 is None else -self.a1)

    def __sub__(self, other: "FormPair") -> "FormPair":
        return self + (-other)

    def __mul__(self, factor) -> "FormPair":
        return FormPair(self.degree, self.a0 * factor, None if self.a1 is None else self.a1 * factor)

    __rmul__ = __mul__

    def __xor__(self, other: "FormPair") -> "FormPair":
        return pair_wedge(self, other)


Pair = Union[FirstOrderOp, FormPair]


def _check_same(a: Pair, b: Pair):
    if type(a) is not type(b):
        raise DegreeError(f"Natures incompatibles : {type(a).__name__} et {type(b).__name__}")
    if a.chart != b.chart:
        raise ChartMismatchError("Opérandes sur des cartes différentes")
    if a.degree != b.degree:
        raise DegreeError(f"Degrés différents : {a.degree} et {b.degree}")


def _add_optional(a, b):
    if a is None or b is None:
        return None
    return a + b


def _typed(cls, chart: Chart, degree: int, *parts):
    """Somme des parties non absentes ; zéro typé si toutes absentes ; None si degré < 0."""
    if degree < 0:
        return None
    total = cls.zero(chart, degree)
    for part in parts:
        if part is not None:
            total = total + part
    return total


def _wedge_opt(a, b, factor: int = 1):
    if a is None or b is None or factor == 0:
        return None
    w = wedge(a, b)
    return w * factor if factor != 1 else w


def _sn_opt(a, b, factor: int = 1):
    if a is None or b is None or factor == 0:
        return None
    if a.degree == 0 and b.degree == 0:
        return None
    w = sn_bracket(a, b)
    return w * factor if factor != 1 else w


# --- Opérations ---

def i_phi(d: FirstOrderOp) -> Optional[Multivector]:
    """i_φ D = D¹ (absent en degré 0)."""
    return d.d1


def split(d: FirstOrderOp) -> Tuple[Multivector, Optional[Multivector]]:
    return d.split()


def join(d0: Multivector, d1: Optional[Multivector]) -> FirstOrderOp:
    return FirstOrderOp.join(d0, d1)


def sj_bracket(p: FirstOrderOp, q: FirstOrderOp) -> FirstOrderOp:
    """
    Crochet de Schouten-Jacobi, composante par composante :
      d0 = [[P⁰,Q⁰]] + (k−1) P⁰∧Q¹ + (−1)^k (r−1) P¹∧Q⁰
      d1 = [[P¹,Q⁰]] − (−1)^k [[P⁰,Q¹]] + (k−r) P¹∧Q¹
    """
    if p.chart != q.chart:
        raise ChartMismatchError("Crochet entre cartes différentes")
    chart = p.chart
    k, r = p.degree, q.degree
    if k == 0 and r == 0:
        return FirstOrderOp.zero(chart, 0)
    degree = k + r - 1
    sk = _sign(k)
    d0 = _typed(Multivector, chart, degree,
                _sn_opt(p.d0, q.d0),
                _wedge_opt(p.d0, q.d1, k - 1),
                _wedge_opt(p.d1, q.d0, sk * (r - 1)))
    d1 = _typed(Multivector, chart, degree - 1,
                _sn_opt(p.d1, q.d0),
                _sn_opt(p.d0, q.d1, -sk),
                _wedge_opt(p.d1, q.d1, k - r))
    return FirstOrderOp(degree, d0, d1)


def op_on_functions(d: FirstOrderOp, *functions: Scalar) -> Scalar:
    """{f1,…,fk}_D = {f}_{D⁰} + Σ_i (−1)^{i+1} f_i {f1,…,f̂_i,…,fk}_{D¹}."""
    if len(functions) != d.degree:
        raise DegreeError(f"Arité {len(functions)} != degré {d.degree}")
    total = bracket_of_functions(d.d0, *functions)
    if d.degree == 0:
        return total
    for i, f in enumerate(functions):
        rest = functions[:i] + functions[i + 1:]
        term = f * bracket_of_functions(d.d1, *rest)
        total = total + term if i % 2 == 0 else total - term
    return total


def jacobi_differential(alpha: FormPair) -> FormPair:
    """d¹(α⁰, α¹) = (dα⁰, −dα¹ + α⁰) ; d¹(f, _) = j¹f = (df, f)."""
    a0 = exterior_derivative(alpha.a0)
    a1 = alpha.a0 if alpha.a1 is None else alpha.a0 - exterior_derivative(alpha.a1)
    return FormPair(alpha.degree + 1, a0, a1)


def jet(f: Scalar) -> FormPair:
    """Prolongement j¹f = d¹f."""
    return jacobi_differential(FormPair.from_function(f))


def _graded_wedge(cls, a0, a1, b0, b1, p: int, q: int):
    """(a⁰∧b⁰, a¹∧b⁰ + (−1)^p a⁰∧b¹) : le produit transporté par l'identification."""
    chart = a0.chart
    first = wedge(a0, b0)
    second = _typed(type(a0), chart, p + q - 1,
                    _wedge_opt(a1, b0),
                    _wedge_opt(a0, b1, _sign(p)))
    return cls(p + q, first, second)


def pair_wedge(alpha: FormPair, beta: FormPair) -> FormPair:
    if alpha.chart != beta.chart:
        raise ChartMismatchError("Produit entre cartes différentes")
    return _graded_wedge(FormPair, alpha.a0, alpha.a1, beta.a0, beta.a1, alpha.degree, beta.degree)


def op_wedge(d: FirstOrderOp, e: FirstOrderOp) -> FirstOrderOp:
    if d.chart != e.chart:
        raise ChartMismatchError("Produit entre cartes différentes")
    return _graded_wedge(FirstOrderOp, d.d0, d.d1, e.d0, e.d1, d.degree, e.degree)


def jacobi_pair(d: FirstOrderOp) -> Tuple[Multivector, Multivector]:
    """Lecture (Λ, E) d'un opérateur de degré 2 : Λ = D⁰, E = D¹."""
    if d.degree != 2:
        raise DegreeError("Une paire de Jacobi correspond à un opérateur de degré 2")
    return d.d0, d.d1


def iterated_bracket(d: FirstOrderOp, functions: Sequence[Scalar]) -> FirstOrderOp:
    """[[…[[D,f1]]¹,…,f_m]]¹."""
    result = d
    for f in functions:
        result = sj_bracket(result, FirstOrderOp.from_function(f))
    return result
