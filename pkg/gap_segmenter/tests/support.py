from pathlib import Path

import numpy as np

from ..corpus import SegmentedSentence, Vocabulary
from ..model import ModelConfig, SegmenterModel
from ..numeric import ComputationTape, backward

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
TINY_CORPUS = FIXTURES / "tiny_corpus.utf8"

# distinct characters per word, so boundaries follow from character identity
LEXICON = [
    "甲", "乙", "丙", "丁", "戊", "己", "庚", "辛", "壬", "癸",
    "子丑", "寅卯", "辰巳", "午未", "申酉", "戌亥", "春夏", "秋冬", "东西", "南北",
    "金木", "水火", "土石", "山川", "江河", "日月", "星光", "风雨", "雷电", "云雾",
    "红黄蓝", "青白黑", "紫绿灰", "天地人", "上中下", "前后左", "大小多", "长短高", "远近深", "早晚夜",
    "一二三四", "五六七八", "九十百千", "万亿兆京", "梅兰竹菊", "琴棋书画", "诗词歌赋", "笔墨纸砚", "鸟兽虫鱼", "花草果叶",
]


def random_sentence(rng: np.random.Generator, lexicon=LEXICON, min_words: int = 1, max_words: int = 8):
    count = int(rng.integers(min_words, max_words + 1))
    return SegmentedSentence.from_words([lexicon[int(k)] for k in rng.integers(0, len(lexicon), size=count)])


def random_corpus(seed: int, size: int, **kwargs) -> list[SegmentedSentence]:
    rng = np.random.default_rng(seed)
    return [random_sentence(rng, **kwargs) for _ in range(size)]


def tiny_config(tagset: str, **overrides) -> ModelConfig:
    values = {
        "embedding_dim": 6,
        "hidden_size": 8,
        "num_layers": 1,
        "biaffine_dim": 5,
        "dropout_p": 0.0,
    }
    values.update(overrides)
    return ModelConfig(tagset=tagset, **values)


def tiny_model(tagset: str, text: str = "甲乙丙丁戊", seed: int = 3, **overrides) -> SegmenterModel:
    return SegmenterModel.initialize(tiny_config(tagset, **overrides), Vocabulary(text), seed=seed)


def numerical_gradient(value, array: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central differences of ``value()`` with respect to every element of ``array``, edited in place."""

    grad = np.zeros_like(array)
    for index in np.ndindex(array.shape):
        original = array[index]
        array[index] = original + h
        plus = value()
        array[index] = original - h
        minus = value()
        array[index] = original
        grad[index] = (plus - minus) / (2 * h)
    return grad


def analytic_gradient(build_loss, parameters):
    with ComputationTape() as tape:
        loss = build_loss()
    return loss, backward(tape, loss, parameters)
