"""
Django settings for the segmenter_app project.

The project has no web surface: Django provides the settings layer, the
management-command CLI, the training-run registry and the test runner.
"""

from pathlib import Path
from dotenv import load_dotenv
import os

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "segmenter-development-key")

DEBUG = not os.environ.get("PRODUCTION", "false") == "true"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.contenttypes",
    "rest_framework",
    "gap_segmenter",
]


# Database (training-run registry)

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.environ.get("SEGMENTER_DB_PATH", str(BASE_DIR / "db.sqlite3")),
    }
}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Segmenter settings

GAP_SEGMENTER = {
    "EMBEDDING_DIM": 300,
    "HIDDEN_SIZE": 300,
    "NUM_LAYERS": 3,
    "BIAFFINE_DIM": 300,
    "BEAM_WIDTH": 10,
    "BATCH_SIZE": 32,
    "PATIENCE": 10,
    "MAX_EPOCHS": 30,
    "CLIP_NORM": 5.0,
    "HYBRID_THRESHOLD": 90,
    "LONG_SENTENCE": 30,
    "EMBEDDING_INIT": 0.05,
    "SEED": int(os.environ.get("SEGMENTER_SEED", "1")),
    "TAGSETS": {
        "01": {"LEARNING_RATE": 0.001, "DROPOUT": 0.6},
        "BE": {"LEARNING_RATE": 0.0012, "DROPOUT": 0.39},
        "BEMS": {"LEARNING_RATE": 0.002, "DROPOUT": 0.45},
    },
}


# Logging

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "{levelname}: {name}: {message}", "style": "{"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "gap_segmenter": {
            "handlers": ["console"],
            "level": os.environ.get("SEGMENTER_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True
