"""Reference encoder-decoder transformer for C-to-assembly translation."""

from . import cli, config, data, decode, model, train

__version__ = "0.1.0"
