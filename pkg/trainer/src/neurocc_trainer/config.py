"""Model and training configuration.

Presets mirror the published model variants; everything the source paper
leaves unstated (schedule, warmup, batch size, dropout) gets an explicit
documented default here.
"""

import json
from dataclasses import asdict, dataclass


class ConfigError(ValueError):
    pass


@dataclass
class ModelConfig:
    encoder_layers: int = 6
    decoder_layers: int = 6
    embed_dim: int = 512
    heads: int = 4
    ff_dim: int = 1024
    max_positions: int = 512  # covers the 314-token corpus cap after BPE
    epochs: int = 10
    beam_k: int = 5
    # unstated in the source material; standard inverse-square-root
    # schedule with 4000 warmup steps and a transformer-base peak
    learning_rate: float = 5e-4
    warmup_steps: int = 4000
    batch_size: int = 32
    dropout: float = 0.1
    label_smoothing: float = 0.0
    seed: int = 1

    def __post_init__(self):
        if self.embed_dim % self.heads != 0:
            raise ConfigError(
                f"embed_dim {self.embed_dim} not divisible by heads {self.heads}"
            )
        for name in ("encoder_layers", "decoder_layers", "embed_dim", "heads",
                     "ff_dim", "max_positions", "beam_k", "batch_size"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.epochs < 0:
            raise ConfigError("epochs must be non-negative")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as f:
            d = json.load(f)
        preset = d.pop("preset", None)
        if preset is not None:
            base = PRESETS[preset].to_dict()
            base.update(d)
            d = base
        return cls.from_dict(d)


PRESETS = {
    "small": ModelConfig(encoder_layers=6, decoder_layers=6, embed_dim=512,
                         heads=4, ff_dim=1024),
    "med": ModelConfig(encoder_layers=6, decoder_layers=6, embed_dim=1024,
                       heads=8, ff_dim=2048),
    "big": ModelConfig(encoder_layers=6, decoder_layers=6, embed_dim=1024,
                       heads=16, ff_dim=4096),
}
