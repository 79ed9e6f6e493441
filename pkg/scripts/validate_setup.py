#!/usr/bin/env python
"""Validate that all dependencies and the verification suites are working."""

import logging
import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

SMOKE_TRIALS = 5


def check_packages():
    """Test that the numerical and reporting stack imports."""
    try:
        import numpy
        import scipy
        import pydantic
        import dotenv  # noqa: F401
        import tqdm  # noqa: F401
        print(f"✅ Packages: numpy {numpy.__version__}, scipy {scipy.__version__}, pydantic {pydantic.VERSION}")
        return True
    except ImportError as e:
        print(f"⚠️  Packages: {e}. Run: pip install -r requirements.txt")
        return False


def check_settings():
    """Test that the configured thresholds are usable."""
    try:
        from config.settings import settings

        problems = []
        for name in ("TAU_GAP", "TOL_EQ", "TOL_SYM"):
            if not getattr(settings, name) > 0:
                problems.append(f"{name} must be positive")
        if settings.TAU_GAP < settings.TOL_EQ:
            problems.append("TAU_GAP should not be smaller than TOL_EQ")
        if settings.DEGREE_SAMPLES > settings.DEGREE_MAX_SAMPLES:
            problems.append("DEGREE_SAMPLES exceeds DEGREE_MAX_SAMPLES")
        if problems:
            for p in problems:
                print(f"❌ Settings: {p}")
            print("   Check the ISOTOWER_* variables in .env")
            return False
        print(f"✅ Settings: tau_gap={settings.TAU_GAP} tol_eq={settings.TOL_EQ} tol_sym={settings.TOL_SYM}")
        return True
    except Exception as e:
        print(f"❌ Settings: {e}")
        return False


def check_suite(name):
    """Smoke-run one suite with a handful of trials."""
    try:
        from isotower.report import SuiteConfig
        from isotower.suites import run_suite

        cfg = SuiteConfig(d0=2, d1=3, trials=SMOKE_TRIALS, group=[2] if name == "ktheory" else None)
        report = run_suite(name, cfg)
        if not report.ok:
            print(f"❌ Suite {name}: {report.summary.fail} failing checks, first {report.failed[0].id}")
            return False
        print(f"✅ Suite {name}: {report.summary.pass_} checks pass")
        return True
    except ImportError as e:
        print(f"⚠️  Suite {name}: {e}. Run: pip install -r requirements.txt")
        return False
    except Exception as e:
        print(f"❌ Suite {name}: {e}")
        return False


if __name__ == "__main__":
    logging.basicConfig(level=logging.WARNING)
    print("🔍 Validating isotower setup...\n")

    checks = [
        check_packages(),
        check_settings(),
        check_suite("calculus"),
        check_suite("ktheory"),
    ]

    if all(checks):
        print("\n✨ All checks pass! Run the full suites with: python -m isotower verify")
    else:
        print("\n⚠️  Some components need attention. Check the errors above.")
        print("\n📋 Setup checklist:")
        print("1. Install dependencies: pip install -r requirements.txt")
        print("2. Copy .env.example to .env and review the ISOTOWER_* thresholds")
        print("3. Re-run: python scripts/validate_setup.py")
        sys.exit(1)
