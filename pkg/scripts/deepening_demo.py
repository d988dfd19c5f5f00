#!/usr/bin/env python3
"""Demonstrate scope deepening on the linked-list model: enumerate through
scope 1, then raise the scope and watch only the new size get solved.

Usage: python scripts/deepening_demo.py [--cache-dir DIR]
"""
import argparse
import os
import sys
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from boundsmith import sat  # noqa: E402
from boundsmith.strategies import DeepeningState, run_to_exhaustion  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cache-dir", default=None)
    args = parser.parse_args()
    cache_dir = args.cache_dir or tempfile.mkdtemp(prefix="boundsmith-cache-")

    model_path = os.path.join(os.path.dirname(__file__), "..", "models", "sll.bsm")
    with open(model_path) as fh:
        source = fh.read()

    state = DeepeningState.open(source, "acyclic", cache_dir)
    for session in state.deepen(1):
        scenarios, _ = run_to_exhaustion(session)
        state.record(session, scenarios)
        print(f"size {session.size}: {len(scenarios)} scenarios "
              f"(phases {session.phase_counts})")

    print(f"completed sizes: {sorted(state.completed_sizes())}")
    before = sat.solve_call_count()
    for session in state.deepen(2):
        scenarios, _ = run_to_exhaustion(session)
        state.record(session, scenarios)
        print(f"deepened to size {session.size}: {len(scenarios)} new scenarios")
    print(f"solver calls for the delta: {sat.solve_call_count() - before} "
          "(sizes 0-1 came from cache)")
    print(f"cache at {cache_dir}")


if __name__ == "__main__":
    main()
