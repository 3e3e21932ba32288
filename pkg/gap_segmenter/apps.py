from django.apps import AppConfig


class GapSegmenterConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "gap_segmenter"
    verbose_name = "gap segmenter"
