#!/usr/bin/env python
"""Command-line entry point for the gap segmenter.

Subcommands: train, segment, eval, bench, combine (plus Django's own, e.g. migrate, test).
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "segmenter_app.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the packages from requirements.txt "
            "into the active environment before running the segmenter."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
