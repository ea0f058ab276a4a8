from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from .exterior import DiffForm, Multivector
from .ring import Scalar

HOMOGENEOUS = "homogeneous"
ZERO = "zero-tensor"
NOT_HOMOGENEOUS = "not homogeneous"


@dataclass(frozen=True)
class DegreeResult:
    status: str
    value: Optional[Fraction] = None

    @property
    def is_homogeneous(self) -> bool:
        """Vrai si un degré existe (le tenseur nul admet tous les degrés)."""
        return self.status in (HOMOGENEOUS, ZERO)

    def matches(self, n) -> bool:
        """Vérifie que le degré vaut n (toujours vrai pour le tenseur nul)."""
        if self.status == ZERO:
            return True
        return self.status == HOMOGENEOUS and self.value == Fraction(n)

    def __str__(self) -> str:
        if self.status == HOMOGENEOUS:
            return str(self.value)
        return self.status


@dataclass(frozen=True)
class BracketDegreeReport:
    """Résultat de la caractérisation du degré par les crochets de fonctions homogènes."""
    degree: Optional[Fraction]
    consistent: bool
    checked: int
    witness: Optional[Tuple[Scalar, ...]] = None
    reason: str = ""

    @property
    def all_zero(self) -> bool:
        return self.consistent and self.degree is None


@dataclass(frozen=True)
class Reduction:
    """Image par J, J_N, Ψ ou Ψ_N, avec le contrôle d'homogénéité de l'argument."""
    value: Any
    expected_degree: int
    degree: DegreeResult

    @property
    def homogeneity_violated(self) -> bool:
        return not self.degree.matches(self.expected_degree)


@dataclass(frozen=True)
class Certificate:
    """Verdict d'un certifieur : l'obstruction est nulle si et seulement si la structure est valide."""
    name: str
    holds: bool
    obstruction: Any = None


@dataclass(frozen=True)
class NambuReport:
    passed: bool
    family_size: int
    tuples_checked: int
    witness: Optional[Tuple[Scalar, ...]] = None
    obstruction: Any = None


@dataclass(frozen=True)
class ContactData:
    """
    Forme de contact η sur N et données associées :
    dη, champ de Reeb Γ (i_Γ dη = 0, ⟨η, Γ⟩ = 1) et forme volume (dη)^k ∧ η.
    """
    eta: DiffForm
    d_eta: DiffForm
    reeb: Multivector
    volume: DiffForm

    @property
    def half_dimension(self) -> int:
        return (self.eta.chart.dim - 1) // 2


@dataclass(frozen=True)
class ContactCalculus:
    flat_matrix: List[List[Scalar]] = field(default_factory=list)
    hamiltonian: Optional[Multivector] = None
    bracket: Optional[Scalar] = None
