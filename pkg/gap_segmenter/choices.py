from django.db import models

from .exceptions import ConfigError


class TagSetName(models.TextChoices):
    BINARY = "01", "{0,1} gap existence"
    BE = "BE", "{B,E} tag pairs"
    BEMS = "BEMS", "{B,E,M,S} tag pairs"

    @classmethod
    def parse(cls, value: str) -> "TagSetName":
        """Accepts the CLI spellings (01, be, bems) as well as the stored values."""

        normalized = str(value).strip().upper()
        for choice in cls:
            if choice.value == normalized:
                return choice
        raise ConfigError(f"unknown tag set '{value}', expected one of 01, be, bems")


class DecoderName(models.TextChoices):
    GREEDY = "greedy", "Per-gap argmax"
    BEAM = "beam", "Constrained beam search"
    VITERBI = "viterbi", "Exact Viterbi"
