from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, List, Sequence


@dataclass
class CommandResult:
    value: Any = None
    lines: List[str] = field(default_factory=list)
    status: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def output(self) -> List[str]:
        return self.lines + self.notes


class BaseCommand(ABC):
    """
    Classe abstraite définissant le contrat de toutes les commandes du langage .pj.
    Chaque mot-clé (snbracket, JN, check...) a sa propre classe héritant de celle-ci.
    """
    keyword: str = ""

    def can_process(self, keyword: str, check_kind: str = None) -> bool:
        """
        Détermine si cette commande traite ce mot-clé
        (et, pour `check`, cette nature de structure).
        """
        return keyword == self.keyword

    @abstractmethod
    def run(self, session, args: Sequence[Any], options: dict) -> CommandResult:
        """
        Exécute la commande sur des arguments déjà évalués.
        `options` contient les arguments nommés (ex. q=3/5 pour eval).
        Doit lever une PJError si les arguments sont incompatibles.
        """
        pass
