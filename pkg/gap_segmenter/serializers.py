from django.core.validators import ProhibitNullCharactersValidator
from rest_framework import serializers

from .choices import DecoderName, TagSetName


class TagSetField(serializers.ChoiceField):
    """Accepts 01/be/bems in any case and stores the canonical value."""

    def __init__(self, **kwargs):
        super().__init__(choices=TagSetName.choices, **kwargs)

    def to_internal_value(self, data):
        return super().to_internal_value(str(data).strip().upper())


class VocabularyTokenField(serializers.CharField):
    """One vocabulary entry, kept verbatim, U+0000 included."""

    def __init__(self, **kwargs):
        super().__init__(trim_whitespace=False, **kwargs)
        self.validators = [
            validator
            for validator in self.validators
            if not isinstance(validator, ProhibitNullCharactersValidator)
        ]


class RunConfigSerializer(serializers.Serializer):
    tagset = TagSetField(required=False)
    decoder = serializers.ChoiceField(choices=DecoderName.choices, required=False)
    beam_width = serializers.IntegerField(min_value=1, required=False)
    seed = serializers.IntegerField(min_value=0, required=False)
    threshold = serializers.IntegerField(min_value=0, required=False)
    embeddings = serializers.CharField(required=False, allow_blank=False)
    checkpoint = serializers.CharField(required=False, allow_blank=False)

    def validate(self, attrs):
        tagset = attrs.get("tagset")
        if attrs.get("decoder") == DecoderName.GREEDY and tagset and tagset != TagSetName.BINARY:
            raise serializers.ValidationError(
                {"decoder": f"greedy decoding is only valid with tag set 01, not {tagset}"}
            )
        return attrs


class TrainConfigSerializer(RunConfigSerializer):
    learning_rate = serializers.FloatField(min_value=0.0, required=False)
    dropout = serializers.FloatField(min_value=0.0, max_value=0.999999, required=False)
    batch_size = serializers.IntegerField(min_value=1, required=False)
    epochs = serializers.IntegerField(min_value=1, required=False)
    patience = serializers.IntegerField(min_value=1, required=False)
    embedding_dim = serializers.IntegerField(min_value=1, required=False)
    hidden_size = serializers.IntegerField(min_value=1, required=False)
    layers = serializers.IntegerField(min_value=1, required=False)
    biaffine_dim = serializers.IntegerField(min_value=1, required=False)
    freeze_embeddings = serializers.BooleanField(required=False)

    def validate_learning_rate(self, value):
        if value <= 0.0:
            raise serializers.ValidationError("learning rate must be positive")
        return value


class TensorEntrySerializer(serializers.Serializer):
    name = serializers.CharField()
    shape = serializers.ListField(child=serializers.IntegerField(min_value=0))
    offset = serializers.IntegerField(min_value=0)
    trainable = serializers.BooleanField()


class EpochStatsSerializer(serializers.Serializer):
    epoch = serializers.IntegerField(min_value=0)
    train_loss = serializers.FloatField(allow_null=True)
    dev_f1 = serializers.FloatField()


class ModelConfigSerializer(serializers.Serializer):
    tagset = TagSetField()
    embedding_dim = serializers.IntegerField(min_value=1)
    hidden_size = serializers.IntegerField(min_value=1)
    num_layers = serializers.IntegerField(min_value=1)
    biaffine_dim = serializers.IntegerField(min_value=1)
    dropout_p = serializers.FloatField(min_value=0.0, max_value=0.999999)
    train_embeddings = serializers.BooleanField()


class CheckpointManifestSerializer(serializers.Serializer):
    config = ModelConfigSerializer()
    vocabulary = serializers.ListField(child=VocabularyTokenField(), min_length=1)
    tensors = TensorEntrySerializer(many=True)
    payload_bytes = serializers.IntegerField(min_value=0)
    epoch = serializers.IntegerField(min_value=0)
    dev_f1 = serializers.FloatField()
    seed = serializers.IntegerField(min_value=0)
    train_config = serializers.DictField()
    history = EpochStatsSerializer(many=True)
