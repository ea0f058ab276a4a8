"""
Affichage canonique : même syntaxe que l'entrée, sortie déterministe.

- monômes par vecteur d'exposants décroissant, termes tensoriels par indices croissants ;
- coefficient toujours écrit (fraction réduite), signe explicite ;
- zéros typés `0 : deg k` / `0 : form k`, composante absente `_` / `_ : form`.
"""

from fractions import Fraction
from typing import Optional

from ..exterior import Multivector, SkewTensor
from ..homogeneity import HomogeneousSetup
from ..jacobi import FirstOrderOp, FormPair
from ..models import BracketDegreeReport, ContactData, DegreeResult
from ..ring import Chart, Scalar


def _monomial(chart: Chart, exps) -> str:
    return " ".join(name if n == 1 else f"{name}^{n}" for name, n in zip(chart.variables, exps) if n != 0)


def _join(pieces) -> str:
    """pieces : (négatif, texte sans signe) ; le premier garde son signe en préfixe."""
    out = ""
    for i, (negative, text) in enumerate(pieces):
        if i == 0:
            out = f"-{text}" if negative else text
        else:
            out += f" - {text}" if negative else f" + {text}"
    return out


def format_scalar(f: Scalar) -> str:
    if f.is_zero():
        return "0"
    pieces = []
    for exps, c in f:
        mono = _monomial(f.chart, exps)
        text = f"{abs(c)} {mono}" if mono else str(abs(c))
        pieces.append((c < 0, text))
    return _join(pieces)


def format_tensor(tensor: SkewTensor) -> str:
    if tensor.degree == 0:
        return format_scalar(tensor.as_scalar())
    if tensor.is_zero():
        return f"0 : {'deg' if isinstance(tensor, Multivector) else 'form'} {tensor.degree}"
    prefix = "@" if isinstance(tensor, Multivector) else "d"
    pieces = []
    for indices, c in tensor.items():
        basis = "^".join(prefix + name for name in tensor.index_names(indices))
        if c.is_monomial():
            (exps, coeff), = c.terms.items()
            mono = _monomial(c.chart, exps)
            body = f"{abs(coeff)} {mono} {basis}" if mono else f"{abs(coeff)} {basis}"
            pieces.append((coeff < 0, body))
        else:
            pieces.append((False, f"({format_scalar(c)}) {basis}"))
    return _join(pieces)


def _format_component(component: Optional[SkewTensor], absent: str) -> str:
    return absent if component is None else format_tensor(component)


def format_pair(value) -> str:
    if isinstance(value, FirstOrderOp):
        return f"({format_tensor(value.d0)}, {_format_component(value.d1, '_')})"
    return f"({format_tensor(value.a0)}, {_format_component(value.a1, '_ : form')})"


def format_chart(chart: Chart, name: str = "M") -> str:
    suffix = f" homog {chart.homogeneity_variable}" if chart.homogeneity_variable else ""
    return f"chart {name}({', '.join(chart.variables)}){suffix}"


def print_canonical(value) -> str:
    """Texte canonique d'une valeur de session."""
    if isinstance(value, Scalar):
        return format_scalar(value)
    if isinstance(value, SkewTensor):
        return format_tensor(value)
    if isinstance(value, (FirstOrderOp, FormPair)):
        return format_pair(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, DegreeResult):
        return str(value)
    if isinstance(value, BracketDegreeReport):
        if not value.consistent:
            return f"inconsistent ({value.reason})"
        return "zero-tensor" if value.degree is None else str(value.degree)
    if isinstance(value, tuple):
        parts = ["_" if v is None else print_canonical(v) for v in value]
        return f"({', '.join(parts)})"
    if isinstance(value, ContactData):
        return "\n".join([
            f"eta = {format_tensor(value.eta)}",
            f"d_eta = {format_tensor(value.d_eta)}",
            f"reeb = {format_tensor(value.reeb)}",
        ])
    if isinstance(value, Chart):
        return format_chart(value)
    if isinstance(value, HomogeneousSetup):
        return f"{format_chart(value.chart)} ; delta = {format_tensor(value.delta)}"
    return str(value)
