#!/usr/bin/env python3
"""
CMC Boundary Tools - Main Entry Point

Examples:
    python run.py kmat inspect --A 0.5 --B 0.25
    python run.py potential sample --degree 3 --A 1/3 --B 1/2 --out data/xi3.json
    python run.py surface generate data/xi3.json --out output/
    python run.py suite run --profile quick
"""

import sys
import logging
from pathlib import Path

# Add project root to Python path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

logger = logging.getLogger(__name__)


def check_prerequisites() -> bool:
    """Check the interpreter version and the numeric stack before dispatch"""
    if sys.version_info < (3, 10):
        print(f"Python 3.10+ required, found {sys.version_info.major}.{sys.version_info.minor}",
              file=sys.stderr)
        return False

    missing_modules = []
    for module in ("numpy", "scipy", "sympy", "pandas", "pydantic", "dotenv"):
        try:
            __import__(module)
        except ImportError:
            missing_modules.append(module)

    if missing_modules:
        print(f"Missing required modules: {', '.join(missing_modules)}", file=sys.stderr)
        print("Install with: pip install -r requirements.txt", file=sys.stderr)
        return False
    return True


if __name__ == "__main__":
    if not check_prerequisites():
        sys.exit(2)

    from src.cli.commands import main

    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Terminated by user")
        sys.exit(1)
