# config/settings.py
"""
Settings for isotower: numerical thresholds, desk-scale bounds and report output.
"""
import os
import logging
from contextlib import contextmanager
from typing import Dict, Iterator
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ("1", "true", "yes")


TOLERANCE_ATTRS = {"tau_gap": "TAU_GAP", "tol_eq": "TOL_EQ", "tol_sym": "TOL_SYM"}


class Settings:
    # Thresholds
    TAU_GAP = float(os.getenv("ISOTOWER_TAU_GAP", 1e-8))
    TOL_EQ = float(os.getenv("ISOTOWER_TOL_EQ", 1e-9))
    TOL_SYM = float(os.getenv("ISOTOWER_TOL_SYM", 1e-12))

    # Degree sampling
    DEGREE_SAMPLES = int(os.getenv("ISOTOWER_DEGREE_SAMPLES", 4096))
    DEGREE_MAX_SAMPLES = int(os.getenv("ISOTOWER_DEGREE_MAX_SAMPLES", 262144))

    # Suites
    DEFAULT_TRIALS = int(os.getenv("ISOTOWER_DEFAULT_TRIALS", 200))
    DEFAULT_SEED = int(os.getenv("ISOTOWER_DEFAULT_SEED", 20240601))

    # K-theory desk scale
    MAX_GROUP_ORDER = int(os.getenv("ISOTOWER_MAX_GROUP_ORDER", 6))
    MAX_TOTAL_DIM = int(os.getenv("ISOTOWER_MAX_TOTAL_DIM", 6))
    RESIDUE_CONVENTION = os.getenv("ISOTOWER_RESIDUE_CONVENTION", "dT")

    # Output
    LOG_LEVEL = os.getenv("ISOTOWER_LOG_LEVEL", "INFO")
    REPORT_DIR = os.getenv("ISOTOWER_REPORT_DIR", "reports")
    SHOW_PROGRESS = _flag("ISOTOWER_SHOW_PROGRESS", "false")

    def tolerances(self) -> Dict[str, float]:
        """Tolerance map that `--tol name=val` overrides are layered onto."""
        return {
            "tau_gap": self.TAU_GAP,
            "tol_eq": self.TOL_EQ,
            "tol_sym": self.TOL_SYM,
        }

    @contextmanager
    def overridden(self, tolerances: Dict[str, float]) -> Iterator["Settings"]:
        """
        Apply `--tol` overrides to the thresholds the numerical code reads,
        restoring the previous values on exit.
        """
        unknown = sorted(set(tolerances) - set(TOLERANCE_ATTRS))
        if unknown:
            raise KeyError(f"unknown tolerances {unknown}; known: {sorted(TOLERANCE_ATTRS)}")
        previous = {attr: getattr(self, attr) for attr in TOLERANCE_ATTRS.values()}
        try:
            for name, value in tolerances.items():
                setattr(self, TOLERANCE_ATTRS[name], float(value))
            if tolerances:
                logger.info(f"Tolerance overrides: {dict(tolerances)}")
            yield self
        finally:
            for attr, value in previous.items():
                setattr(self, attr, value)


settings = Settings()

logger.debug(f"Thresholds: tau_gap={settings.TAU_GAP} tol_eq={settings.TOL_EQ} tol_sym={settings.TOL_SYM}")
