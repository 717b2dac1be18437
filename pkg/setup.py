#!/usr/bin/env python3
"""
Setup and smoke-test script for Proxima
"""

import os
import sys
import argparse
from pathlib import Path


def check_dependencies():
    """Check if all required dependencies are installed."""
    try:
        import pydantic
        import pydantic_settings
        import networkx
        import numpy
        import dotenv
        print("✓ All dependencies are installed")
        return True
    except ImportError as e:
        print(f"✗ Missing dependency: {e}")
        print("Run: pip install -r requirements.txt")
        return False


def check_environment():
    """Report the PROXIMA_* overrides in effect; none are required."""
    overrides = sorted(name for name in os.environ if name.startswith("PROXIMA_"))
    if overrides:
        print(f"✓ Environment overrides: {', '.join(overrides)}")
    else:
        print("✓ No environment overrides (defaults in use)")
    return True


def setup_directories():
    """Create necessary directories."""
    from app.utils.config import settings

    for directory in [settings.data_directory, "renders"]:
        Path(directory).mkdir(exist_ok=True)

    print("✓ Directories created")


def write_fixture_documents():
    """Write data/<alias>.space for every fixture that has no document yet."""
    from app.services.fixed_sets import BUILTIN_MAPS
    from app.services.fixtures import ALIASES, build_fixture
    from app.utils.config import settings
    from app.utils.document_processor import document_processor

    for alias, name in ALIASES.items():
        fixture = build_fixture(name)
        path = Path(settings.data_directory) / f"{alias}.space"
        if path.exists():
            print(f"  kept {path}")
            continue
        document_processor.save_space(fixture.space, str(path), maps=list(BUILTIN_MAPS.values()))
        print(f"  wrote {path}")

    print("✓ Fixture documents written")


def run_smoke_tests():
    """Reproduce the headline numbers through the command line."""
    from app.cli.commands import run_command

    checks = [
        (["betti", "fig1a"], "beta0=3 beta_alpha=1"),
        (["betti", "fig1b"], "beta0=3 beta_alpha=1"),
        (["dnear", "--probe", "beta0", "fig1a", "fig1b"], "true"),
        (["betti", "fig3b"], "beta_alpha=2"),
        (["betti", "fig3a"], "beta_alpha=1"),
        (["betti", "earrings"], "beta_alpha=2"),
        (["betti", "necklace"], "beta_alpha=3"),
        (["betti", "butterfly"], "beta_alpha=3"),
        (["almost-amiable", "--probe", "beta_alpha", "--th", "1", "earrings", "necklace"], "true (|2-3|=1)"),
        (["almost-amiable", "--probe", "beta_alpha", "--th", "0.5", "necklace", "butterfly"], "true (|3-3|=0)"),
        (["axioms", "--trials", "200", "--seed", "7", "fig1a"], "P.0 pass"),
    ]

    failures = 0
    for argv, expected in checks:
        try:
            code, text = run_command(argv)
            if expected in text:
                print(f"✓ {' '.join(argv)}")
            else:
                failures += 1
                print(f"✗ {' '.join(argv)} -> exit {code}: {text.splitlines()[:1]}")
        except Exception as e:
            failures += 1
            print(f"✗ {' '.join(argv)} raised {e}")

    code, _ = run_command(["axioms", "--trials", "0", "fig1a"])
    if code == 2:
        print("✓ axioms --trials 0 is rejected")
    else:
        failures += 1
        print(f"✗ axioms --trials 0 exited {code}")

    return failures == 0


def run_demo():
    """Print the fixed-set report of every fixture's primary shape."""
    from app.cli.commands import run_command
    from app.services.fixtures import ALIASES

    for alias in ALIASES:
        code, text = run_command(["fixed", alias])
        print(f"--- {alias} (exit {code})")
        print(text)


def main():
    """Main setup and test function."""
    parser = argparse.ArgumentParser(description="Proxima Setup")
    parser.add_argument("--check", action="store_true", help="Check system requirements")
    parser.add_argument("--setup", action="store_true", help="Create directories and fixture documents")
    parser.add_argument("--test", action="store_true", help="Run smoke tests")
    parser.add_argument("--run", action="store_true", help="Print the demo reports")
    parser.add_argument("--all", action="store_true", help="Run all setup and tests")

    args = parser.parse_args()

    # Make the app package importable when run from elsewhere
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

    if args.all or args.check:
        print("=== Checking Dependencies ===")
        if not check_dependencies():
            sys.exit(1)

        print("\n=== Checking Environment ===")
        check_environment()

    if args.all or args.setup:
        print("\n=== Setting Up ===")
        setup_directories()
        write_fixture_documents()

    if args.all or args.test:
        print("\n=== Running Smoke Tests ===")
        if not run_smoke_tests():
            sys.exit(1)

    if args.all or args.run:
        print("\n=== Demo Reports ===")
        run_demo()

    if not any(vars(args).values()):
        parser.print_help()
        print("\nExample usage:")
        print("  python setup.py --all      # Run complete setup")
        print("  python setup.py --check    # Check requirements only")
        print("  python setup.py --test     # Reproduce the headline numbers")


if __name__ == "__main__":
    main()
