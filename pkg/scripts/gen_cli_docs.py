#!/usr/bin/env python3
"""Regenerate docs/cli.md from the argparse definitions."""
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from boundsmith.cli import _build_parser  # noqa: E402


def main() -> None:
    parser = _build_parser()
    sections = ["# Command-line reference", "", "```", parser.format_help().rstrip(), "```", ""]
    subparsers = next(
        a for a in parser._actions if a.__class__.__name__ == "_SubParsersAction"
    )
    for name, sub in subparsers.choices.items():
        sections += [f"## boundsmith {name}", "", "```", sub.format_help().rstrip(), "```", ""]
    sections += [
        "## Exit codes",
        "",
        "| code | meaning |",
        "| ---- | ------- |",
        "| 0 | success |",
        "| 1 | usage error |",
        "| 2 | model error (parse/resolve diagnostics on stderr) |",
        "| 3 | timeout |",
        "",
        "Scenario documents stream to stdout, one JSON object per line; summaries "
        "and diagnostics go to stderr, so the stdout stream stays machine-parseable.",
        "",
    ]
    out = os.path.join(os.path.dirname(__file__), "..", "docs", "cli.md")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w") as fh:
        fh.write("\n".join(sections))
    print(f"wrote {os.path.abspath(out)}")


if __name__ == "__main__":
    main()
