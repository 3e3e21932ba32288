"""Shared plumbing for the segmenter's management commands.

Library code raises :mod:`gap_segmenter.exceptions`; this module is the only
place those errors become exit codes.
"""

import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from dotenv import dotenv_values
from rest_framework import serializers

from ..exceptions import (
    AlignmentError,
    CheckpointError,
    ConfigError,
    CorpusError,
    SegmenterError,
)
from ..serializers import RunConfigSerializer

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def _usage_error(parser, message):
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(EXIT_USAGE, f"{parser.prog}: error: {message}\n")
    raise CommandError(f"Error: {message}", returncode=EXIT_USAGE)


def _flatten(detail, path=""):
    if isinstance(detail, dict):
        for key, value in detail.items():
            yield from _flatten(value, f"{path}.{key}" if path else str(key))
    elif isinstance(detail, list):
        for value in detail:
            yield from _flatten(value, path)
    else:
        yield f"{path}: {detail}" if path else str(detail)


def describe_validation_error(exc: serializers.ValidationError) -> str:
    return "; ".join(_flatten(exc.detail))


class SegmenterCommand(BaseCommand):
    """Base for train/segment/eval/bench/combine.

    Subclasses declare ``config_serializer`` and ``config_fields``: the options
    that may also come from a ``--config`` file.
    """

    config_serializer = RunConfigSerializer
    config_fields: tuple[str, ...] = ()

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = lambda message: _usage_error(parser, message)
        if self.config_fields:
            parser.add_argument(
                "--config",
                metavar="PATH",
                help="dotenv-style KEY=VALUE file; command-line flags take precedence",
            )
        return parser

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except CommandError:
            raise
        except serializers.ValidationError as exc:
            raise CommandError(describe_validation_error(exc), returncode=EXIT_USAGE) from exc
        except ConfigError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        except (OSError, CorpusError, CheckpointError, AlignmentError) as exc:
            raise CommandError(str(exc), returncode=EXIT_IO) from exc
        except SegmenterError as exc:
            raise CommandError(f"internal error: {exc}", returncode=EXIT_INTERNAL) from exc

    def read_config_file(self, path) -> dict:
        if not Path(path).is_file():
            raise CommandError(f"config file {path} not found", returncode=EXIT_IO)
        values = dotenv_values(path)
        return {key.strip().lower().replace("-", "_"): value for key, value in values.items()}

    def resolve_config(self, options) -> dict:
        """Merges config file and flags and validates the result.

        Returns only the keys that were set somewhere; tag-set presets and
        settings defaults fill in the rest downstream.
        """

        values = {}
        if options.get("config"):
            values.update(
                {
                    key: value
                    for key, value in self.read_config_file(options["config"]).items()
                    if key in self.config_fields and value not in (None, "")
                }
            )
        values.update(
            {key: options[key] for key in self.config_fields if options.get(key) is not None}
        )
        serializer = self.config_serializer(data=values)
        serializer.is_valid(raise_exception=True)
        return dict(serializer.validated_data)

    def open_output(self, path):
        """Returns a writer for ``path``, or for stdout when no path is given."""

        if path in (None, "-"):
            return _StdoutWriter(self.stdout)
        return open(path, "w", encoding="utf-8", newline="\n")

    def open_input(self, path):
        if path == "-":
            return _Unclosable(sys.stdin.buffer)
        return open(path, "rb")


class _Unclosable:
    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc_info):
        return False


class _StdoutWriter:
    def __init__(self, stdout):
        self.stdout = stdout

    def write(self, text):
        self.stdout.write(text, ending="")

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        return False
