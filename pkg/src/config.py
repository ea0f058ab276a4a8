"""
Configuration par variables d'environnement.
Les drapeaux de la CLI ont priorité sur l'environnement.
"""

import os
from dataclasses import dataclass, replace
from typing import Optional

DEFAULT_SEED = 20240601
DEFAULT_MAX_DEGREE = 3
DEFAULT_SAMPLES = 200


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name, "").strip()
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"La variable {name} doit être un entier (reçu : {value!r})")


@dataclass(frozen=True)
class Settings:
    seed: int = DEFAULT_SEED
    max_degree: int = DEFAULT_MAX_DEGREE
    samples: int = DEFAULT_SAMPLES
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        """Lit PJCALC_SEED, PJCALC_MAX_DEGREE, PJCALC_SAMPLES et PJCALC_LOG_LEVEL."""
        return cls(
            seed=_env_int("PJCALC_SEED", DEFAULT_SEED),
            max_degree=_env_int("PJCALC_MAX_DEGREE", DEFAULT_MAX_DEGREE),
            samples=_env_int("PJCALC_SAMPLES", DEFAULT_SAMPLES),
            log_level=os.environ.get("PJCALC_LOG_LEVEL", "WARNING").upper(),
        )

    def override(self, seed: Optional[int] = None, max_degree: Optional[int] = None,
                 samples: Optional[int] = None, log_level: Optional[str] = None) -> "Settings":
        """Retourne une copie où seuls les paramètres fournis sont remplacés."""
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if max_degree is not None:
            changes["max_degree"] = max_degree
        if samples is not None:
            changes["samples"] = samples
        if log_level is not None:
            changes["log_level"] = log_level.upper()
        return replace(self, **changes)
