from django.db import models

from .choices import TagSetName


class TrainingRun(models.Model):
    tagset = models.CharField(max_length=4, choices=TagSetName.choices)
    seed = models.IntegerField()
    checkpoint_path = models.CharField(max_length=500)
    best_epoch = models.IntegerField(default=0)
    best_dev_f1 = models.FloatField(default=0.0)
    hyperparameters = models.JSONField(default=dict)
    created_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return f"{self.tagset} | seed {self.seed} | dev F1 {self.best_dev_f1:.4f}"


class EpochRecord(models.Model):
    run = models.ForeignKey(TrainingRun, on_delete=models.CASCADE, related_name="epochs")
    epoch = models.IntegerField()
    train_loss = models.FloatField()
    dev_f1 = models.FloatField()

    class Meta:
        ordering = ("run", "epoch")
        constraints = [
            models.UniqueConstraint(fields=("run", "epoch"), name="unique_epoch_per_run"),
        ]

    def __str__(self):
        return f"{self.run_id} | epoch {self.epoch} | dev F1 {self.dev_f1:.4f}"
