"""
Hiérarchie d'exceptions du calcul de Schouten et de la réduction Poisson-Jacobi.

Toutes les opérations pures lèvent une sous-classe de PJError ; la CLI les
convertit en code de sortie 2.
"""

from typing import Optional


class PJError(Exception):
    """Exception de base de la bibliothèque."""
    pass


class ChartError(PJError):
    """Carte invalide (variables dupliquées, variable d'homogénéité absente...)."""
    pass


class UnknownVariableError(ChartError):
    """Variable inconnue dans la carte."""
    pass


class ChartMismatchError(PJError):
    """Opérandes définis sur des cartes différentes."""
    pass


class NonInvertibleError(PJError):
    """Élément non inversible de l'anneau de Laurent (seuls les monômes sont des unités)."""
    pass


class DegreeError(PJError):
    """Degré, arité ou nature de tenseur incompatibles."""
    pass


class RestrictionError(PJError):
    """Restriction impossible (tenseur non tangent à F, zéro dans un exposant négatif)."""
    pass


class SetupError(PJError):
    """Structure homogène invalide (Δ non transverse, Δ hors forme produit)."""
    pass


class StructureError(PJError):
    """Précondition d'une structure non satisfaite (contact dégénéré, ω non homogène...)."""
    pass


class FrontendError(PJError):
    """Erreur du langage .pj, localisée par ligne et colonne."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, token: Optional[str] = None):
        self.line = line
        self.column = column
        self.token = token
        location = ""
        if line is not None:
            location = f"ligne {line}"
            if column is not None:
                location += f", colonne {column}"
            if token:
                location += f" (près de '{token}')"
            location = f" [{location}]"
        super().__init__(f"{message}{location}")


class ParseError(FrontendError):
    """Erreur lexicale ou syntaxique."""
    pass


class EvaluationError(FrontendError):
    """Nom non défini, double liaison ou incompatibilité de types à l'évaluation."""
    pass
