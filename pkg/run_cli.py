#!/usr/bin/env python3
"""
Launcher for the proxima command line
"""
import sys
import os

# Add the project root to the path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)


def run_cli():
    """Run one command and return its exit code."""
    try:
        # Import after path setup
        from app.main import main

        return main(sys.argv[1:])

    except KeyboardInterrupt:
        print("\nInterrupted")
        return 130


if __name__ == "__main__":
    sys.exit(run_cli())
