"""
Champs de multivecteurs A^k et formes différentielles Ω^k creux sur une carte.

Un tenseur antisymétrique est un dictionnaire {tuple strictement croissant d'indices: Scalar}.
Le degré est conservé même pour le tenseur nul (zéro typé).

Conventions :
- produit intérieur contre le PREMIER facteur, signe (-1)^(m) pour la position m (base 0) ;
- crochet de Schouten-Nijenhuis par dérivation impaire en coordonnées :
  [[P,Q]] = Σ_i ∂P/∂θ_i ∧ ∂_i Q − (−1)^{(p−1)(q−1)} ∂Q/∂θ_i ∧ ∂_i P
  (∂/∂θ_i = dérivée à droite par rapport à ∂_i).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Type, TypeVar, Union

from .errors import ChartMismatchError, DegreeError, RestrictionError
from .ring import Chart, Point, Scalar, to_fraction

logger = logging.getLogger(__name__)

Indices = Tuple[int, ...]
T = TypeVar("T", bound="SkewTensor")


def sort_with_sign(indices: Sequence[int]) -> Optional[Tuple[int, Indices]]:
    """Trie les indices et retourne (signe de la permutation, tuple trié) ; None si répétition."""
    if len(set(indices)) != len(indices):
        return None
    items = list(indices)
    sign = 1
    # tri par insertion : chaque transposition change le signe
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


@dataclass(frozen=True)
class SkewTensor:
    """Base commune des multivecteurs et des formes (même forme de données)."""
    chart: Chart
    degree: int
    terms: Mapping[Indices, Scalar] = field(default_factory=dict)

    kind: ClassVar[str] = "tensor"

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeError(f"Degré négatif interdit : {self.degree}")
        clean: Dict[Indices, Scalar] = {}
        for indices, coeff in self.terms.items():
            indices = tuple(indices)
            if len(indices) != self.degree:
                raise DegreeError(f"Indices {indices} incompatibles avec le degré {self.degree}")
            if any(a >= b for a, b in zip(indices, indices[1:])):
                raise DegreeError(f"Indices non strictement croissants : {indices}")
            if any(i < 0 or i >= self.chart.dim for i in indices):
                raise DegreeError(f"Indice hors carte : {indices}")
            if not isinstance(coeff, Scalar):
                coeff = Scalar.constant(self.chart, to_fraction(coeff))
            elif coeff.chart != self.chart:
                raise ChartMismatchError("Coefficient défini sur une autre carte")
            if not coeff.is_zero():
                clean[indices] = coeff
        object.__setattr__(self, "terms", clean)

    # --- Constructeurs ---

    @classmethod
    def zero(cls: Type[T], chart: Chart, degree: int) -> T:
        return cls(chart, degree, {})

    @classmethod
    def from_scalar(cls: Type[T], f: Union[Scalar, int, Fraction], chart: Optional[Chart] = None) -> T:
        if not isinstance(f, Scalar):
            f = Scalar.constant(chart, f)
        return cls(f.chart, 0, {(): f})

    @classmethod
    def basis(cls: Type[T], chart: Chart, *names: str) -> T:
        """Produit extérieur des éléments de base nommés (∂_x ou dx)."""
        result = sort_with_sign([chart.index(n) for n in names])
        if result is None:
            return cls.zero(chart, len(names))
        sign, indices = result
        return cls(chart, len(names), {indices: Scalar.constant(chart, sign)})

    # --- Accès ---

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, indices: Indices) -> Scalar:
        return self.terms.get(tuple(indices), Scalar.zero(self.chart))

    def as_scalar(self) -> Scalar:
        if self.degree != 0:
            raise DegreeError(f"Un tenseur de degré {self.degree} n'est pas un scalaire")
        return self.coefficient(())

    def items(self) -> Iterator[Tuple[Indices, Scalar]]:
        return iter(sorted(self.terms.items()))

    def index_names(self, indices: Indices) -> Tuple[str, ...]:
        return tuple(self.chart.variables[i] for i in indices)

    def map_coefficients(self: T, fn) -> T:
        return type(self)(self.chart, self.degree, {i: fn(c) for i, c in self.terms.items()})

    def __hash__(self):
        return hash((self.kind, self.chart, self.degree, frozenset(self.terms.items())))

    def __eq__(self, other):
        if not isinstance(other, SkewTensor):
            return NotImplemented
        return (self.kind == other.kind and self.chart == other.chart
                and self.degree == other.degree and self.terms == other.terms)

    # --- Algèbre ---

    def _check_compatible(self, other: "SkewTensor", same_degree: bool = True):
        if not isinstance(other, SkewTensor) or other.kind != self.kind:
            raise DegreeError(f"Natures incompatibles : {self.kind} et {getattr(other, 'kind', type(other).__name__)}")
        if other.chart != self.chart:
            raise ChartMismatchError(f"Cartes différentes : {self.chart} et {other.chart}")
        if same_degree and other.degree != self.degree:
            raise DegreeError(f"Degrés différents : {self.degree} et {other.degree}")

    def __add__(self: T, other: T) -> T:
        self._check_compatible(other)
        terms = dict(self.terms)
        for i, c in other.terms.items():
            terms[i] = terms[i] + c if i in terms else c
        return type(self)(self.chart, self.degree, terms)

    def __neg__(self: T) -> T:
        return self.map_coefficients(lambda c: -c)

    def __sub__(self: T, other: T) -> T:
        return self + (-other)

    def __mul__(self: T, factor) -> T:
        if isinstance(factor, Scalar):
            if factor.chart != self.chart:
                raise ChartMismatchError("Facteur scalaire sur une autre carte")
        elif not isinstance(factor, (int, Fraction)) or isinstance(factor, bool):
            return NotImplemented
        return self.map_coefficients(lambda c: c * factor)

    __rmul__ = __mul__

    def __xor__(self: T, other: T) -> T:
        return wedge(self, other)

    def __repr__(self) -> str:
        prefix = "@" if self.kind == "multivector" else "d"
        if self.is_zero():
            return f"{type(self).__name__}(0 : deg {self.degree})"
        body = " + ".join(
            f"({c})" + ("" if not i else " " + "^".join(prefix + n for n in self.index_names(i)))
            for i, c in self.items()
        )
        return f"{type(self).__name__}({body})"


@dataclass(frozen=True, eq=False)
class Multivector(SkewTensor):
    """Champ de multivecteurs P ∈ A^k : indices contravariants ∂_{i1}∧…∧∂_{ik}."""
    kind: ClassVar[str] = "multivector"


@dataclass(frozen=True, eq=False)
class DiffForm(SkewTensor):
    """Forme différentielle α ∈ Ω^k : indices covariants dx_{i1}∧…∧dx_{ik}."""
    kind: ClassVar[str] = "form"


def coordinate_vector(chart: Chart, name: str) -> Multivector:
    return Multivector.basis(chart, name)


def coordinate_form(chart: Chart, name: str) -> DiffForm:
    return DiffForm.basis(chart, name)


# --- Produit extérieur et contractions ---

def wedge(a: T, b: T) -> T:
    """Produit extérieur, normalisé : indice répété ⇒ terme nul, signe de la permutation."""
    a._check_compatible(b, same_degree=False)
    terms: Dict[Indices, Scalar] = {}
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            merged = sort_with_sign(i + j)
            if merged is None:
                continue
            sign, k = merged
            value = ca * cb if sign > 0 else -(ca * cb)
            terms[k] = terms[k] + value if k in terms else value
    return type(a)(a.chart, a.degree + b.degree, terms)


def _interior(vector_like: SkewTensor, target: SkewTensor) -> SkewTensor:
    """i_X T sur le premier facteur : X de degré 1, T de la nature duale."""
    if vector_like.degree != 1:
        raise DegreeError(f"Le contractant doit être de degré 1 (reçu {vector_like.degree})")
    if vector_like.chart != target.chart:
        raise ChartMismatchError("Contraction entre cartes différentes")
    if target.degree == 0:
        raise DegreeError("Contraction d'un tenseur de degré 0 impossible")
    terms: Dict[Indices, Scalar] = {}
    for (i,), x in vector_like.terms.items():
        for indices, c in target.terms.items():
            if i not in indices:
                continue
            m = indices.index(i)
            rest = indices[:m] + indices[m + 1:]
            value = x * c if m % 2 == 0 else -(x * c)
            terms[rest] = terms[rest] + value if rest in terms else value
    return type(target)(target.chart, target.degree - 1, terms)


def contract(x: SkewTensor, target: SkewTensor) -> SkewTensor:
    """
    Produit intérieur : i_X α (X champ de vecteurs, α forme) ou i_β P (β 1-forme, P multivecteur).
    """
    if isinstance(x, Multivector) and isinstance(target, DiffForm):
        return _interior(x, target)
    if isinstance(x, DiffForm) and isinstance(target, Multivector):
        return _interior(x, target)
    raise DegreeError("La contraction associe un vecteur à une forme ou une 1-forme à un multivecteur")


def pairing(p: Multivector, alpha: DiffForm) -> Scalar:
    """⟨P, α⟩ avec ⟨∂_I, dx_J⟩ = det(δ_{i,j})."""
    if not isinstance(p, Multivector) or not isinstance(alpha, DiffForm):
        raise DegreeError("L'appariement attend (Multivector, DiffForm)")
    if p.chart != alpha.chart:
        raise ChartMismatchError("Appariement entre cartes différentes")
    if p.degree != alpha.degree:
        raise DegreeError(f"Appariement de degrés différents : {p.degree} et {alpha.degree}")
    total = Scalar.zero(p.chart)
    for indices, c in p.terms.items():
        other = alpha.terms.get(indices)
        if other is not None:
            total = total + c * other
    return total


# --- Dérivées ---

def coefficient_derivative(tensor: T, name: str) -> T:
    return tensor.map_coefficients(lambda c: c.derivative(name))


def exterior_derivative(alpha: DiffForm) -> DiffForm:
    """d(f dx_I) = Σ_i ∂_i f dx_i ∧ dx_I."""
    if not isinstance(alpha, DiffForm):
        raise DegreeError("La différentielle extérieure s'applique aux formes")
    chart = alpha.chart
    terms: Dict[Indices, Scalar] = {}
    for indices, c in alpha.terms.items():
        for i, name in enumerate(chart.variables):
            merged = sort_with_sign((i,) + indices)
            if merged is None:
                continue
            dc = c.derivative(name)
            if dc.is_zero():
                continue
            sign, k = merged
            value = dc if sign > 0 else -dc
            terms[k] = terms[k] + value if k in terms else value
    return DiffForm(chart, alpha.degree + 1, terms)


def differential(f: Scalar) -> DiffForm:
    return exterior_derivative(DiffForm.from_scalar(f))


def odd_derivative(p: Multivector, i: int) -> Optional[Multivector]:
    """Dérivée à droite ∂P/∂θ_i ; None pour un multivecteur de degré 0."""
    if p.degree == 0:
        return None
    terms: Dict[Indices, Scalar] = {}
    for indices, c in p.terms.items():
        if i not in indices:
            continue
        m = indices.index(i)
        rest = indices[:m] + indices[m + 1:]
        right = p.degree - 1 - m
        terms[rest] = c if right % 2 == 0 else -c
    return Multivector(p.chart, p.degree - 1, terms)


def sn_bracket(p: Multivector, q: Multivector) -> Multivector:
    """
    Crochet de Schouten-Nijenhuis [[P,Q]] de degré p+q−1.
    Deux fonctions donnent le zéro de degré 0 (A^{-1} = 0).
    """
    if not isinstance(p, Multivector) or not isinstance(q, Multivector):
        raise DegreeError("Le crochet de Schouten-Nijenhuis s'applique aux multivecteurs")
    if p.chart != q.chart:
        raise ChartMismatchError("Crochet entre cartes différentes")
    chart = p.chart
    if p.degree == 0 and q.degree == 0:
        return Multivector.zero(chart, 0)
    degree = p.degree + q.degree - 1
    sign = -1 if ((p.degree - 1) * (q.degree - 1)) % 2 else 1
    result = Multivector.zero(chart, degree)
    for i, name in enumerate(chart.variables):
        dp = odd_derivative(p, i)
        if dp is not None and not dp.is_zero():
            dq_x = coefficient_derivative(q, name)
            if not dq_x.is_zero():
                result = result + wedge(dp, dq_x)
        dq = odd_derivative(q, i)
        if dq is not None and not dq.is_zero():
            dp_x = coefficient_derivative(p, name)
            if not dp_x.is_zero():
                term = wedge(dq, dp_x)
                result = result - term if sign > 0 else result + term
    logger.debug("[[P,Q]] : degrés (%d, %d), %d termes", p.degree, q.degree, len(result.terms))
    return result


def lie_derivative(x: Multivector, tensor: SkewTensor) -> SkewTensor:
    """L_X T : crochet [[X,T]] pour les multivecteurs, formule de Cartan pour les formes."""
    if not isinstance(x, Multivector) or x.degree != 1:
        raise DegreeError("La dérivée de Lie attend un champ de vecteurs (degré 1)")
    if isinstance(tensor, Multivector):
        return sn_bracket(x, tensor)
    if isinstance(tensor, DiffForm):
        result = _interior(x, exterior_derivative(tensor))
        if tensor.degree > 0:
            result = result + exterior_derivative(_interior(x, tensor))
        return result
    if isinstance(tensor, Scalar):
        return apply_vector(x, tensor)
    raise DegreeError(f"Dérivée de Lie non définie pour {type(tensor).__name__}")


def apply_vector(x: Multivector, f: Scalar) -> Scalar:
    """X(f) = Σ X^i ∂_i f."""
    if x.degree != 1:
        raise DegreeError("X(f) attend un champ de vecteurs")
    if x.chart != f.chart:
        raise ChartMismatchError("Champ et fonction sur des cartes différentes")
    total = Scalar.zero(f.chart)
    for (i,), c in x.terms.items():
        total = total + c * f.derivative(f.chart.variables[i])
    return total


def bracket_of_functions(p: Multivector, *functions: Scalar) -> Scalar:
    """{f1,…,fk}_P = ⟨P, df1∧…∧dfk⟩."""
    if len(functions) != p.degree:
        raise DegreeError(f"Arité {len(functions)} != degré {p.degree}")
    if p.degree == 0:
        return p.as_scalar()
    form = differential(functions[0])
    for f in functions[1:]:
        form = wedge(form, differential(f))
    return pairing(p, form)


# --- Restriction, transport, évaluation ---

def transport(tensor: T, target: Chart, value=1) -> T:
    """
    Réécrit le tenseur sur une autre carte : les coefficients sont réindexés
    (variables supprimées spécialisées à `value`), les indices renumérotés.
    Tout indice dont la variable n'existe pas dans la carte cible est une erreur.
    """
    source = tensor.chart
    terms: Dict[Indices, Scalar] = {}
    for indices, c in tensor.terms.items():
        names = [source.variables[i] for i in indices]
        missing = [n for n in names if n not in target.variables]
        if missing:
            raise RestrictionError(f"Composante selon {missing} absente de la carte cible")
        merged = sort_with_sign([target.index(n) for n in names])
        sign, k = merged
        value_c = c.reindex(target, value)
        terms[k] = value_c if sign > 0 else -value_c
    return type(tensor)(target, tensor.degree, terms)


def restrict(tensor: SkewTensor, variable: Optional[str] = None) -> SkewTensor:
    """
    Restriction à la tranche {t = 1}.
    Multivecteur : doit être tangent à F (aucun ∂_t) ; forme : tiré en arrière (dt ↦ 0).
    """
    chart = tensor.chart
    t = variable or chart.homogeneity_variable
    if t is None:
        raise RestrictionError("La carte n'a pas de variable d'homogénéité")
    it = chart.index(t)
    target = Chart(tuple(v for v in chart.variables if v != t))
    if isinstance(tensor, Multivector):
        if any(it in indices for indices in tensor.terms):
            raise RestrictionError(f"Le multivecteur a une composante selon ∂_{t} : non tangent à F")
        return transport(tensor, target)
    pulled = DiffForm(chart, tensor.degree, {i: c for i, c in tensor.terms.items() if it not in i})
    return transport(pulled, target)


def eval_at_point(tensor: T, point: Point) -> T:
    """Tous les coefficients évalués au point (tenseur à coefficients constants)."""
    if point.chart != tensor.chart:
        raise ChartMismatchError("Le point n'est pas sur la carte du tenseur")
    return tensor.map_coefficients(lambda c: Scalar.constant(tensor.chart, c.evaluate(point)))


def evaluate_on_vector(alpha: DiffForm, point: Point, vector: Sequence) -> Fraction:
    """Valeur d'une 1-forme au point sur un vecteur tangent (composantes dans l'ordre de la carte)."""
    if alpha.degree != 1:
        raise DegreeError("evaluate_on_vector attend une 1-forme")
    if len(vector) != alpha.chart.dim:
        raise DegreeError(f"Le vecteur doit avoir {alpha.chart.dim} composantes")
    total = Fraction(0)
    for (i,), c in alpha.terms.items():
        total += c.evaluate(point) * to_fraction(vector[i])
    return total
