"""Fair classification toolkit: train with sensitive features included,
mask them at prediction time, and measure the accuracy/discrimination
trade-off."""

try:
    # installed layout: the extension lives inside the package
    from ._fairmask import *  # noqa: F401,F403
except ImportError:
    # in-tree layout: the extension sits on PYTHONPATH next to the build
    from _fairmask import *  # noqa: F401,F403

__version__ = "0.1.0"
