import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="TrainingRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "tagset",
                    models.CharField(
                        choices=[
                            ("01", "{0,1} gap existence"),
                            ("BE", "{B,E} tag pairs"),
                            ("BEMS", "{B,E,M,S} tag pairs"),
                        ],
                        max_length=4,
                    ),
                ),
                ("seed", models.IntegerField()),
                ("checkpoint_path", models.CharField(max_length=500)),
                ("best_epoch", models.IntegerField(default=0)),
                ("best_dev_f1", models.FloatField(default=0.0)),
                ("hyperparameters", models.JSONField(default=dict)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
        ),
        migrations.CreateModel(
            name="EpochRecord",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("epoch", models.IntegerField()),
                ("train_loss", models.FloatField()),
                ("dev_f1", models.FloatField()),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="epochs",
                        to="gap_segmenter.trainingrun",
                    ),
                ),
            ],
            options={
                "ordering": ("run", "epoch"),
            },
        ),
        migrations.AddConstraint(
            model_name="epochrecord",
            constraint=models.UniqueConstraint(
                fields=("run", "epoch"), name="unique_epoch_per_run"
            ),
        ),
    ]
