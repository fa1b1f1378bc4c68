"""Hierarchical convolutional sparse coding.

Thin Python surface over the C++ core. Signals are numpy float32 arrays of
shape (channels, height, width); filter banks are (out, in, kh, kw).
"""

try:
    from hcsc import _core
except ImportError:  # in-tree runs put the extension on sys.path directly
    import _core

__all__ = [
    "Encoding",
    "HcscError",
    "HierarchicalModel",
    "LayerConfig",
    "LogisticModel",
    "conv_full",
    "corr_valid",
    "encode",
    "export_montage",
    "featurize",
    "fit_classifier",
    "init_model",
    "load_checkpoint",
    "load_dataset",
    "predict",
    "reconstruct",
    "save_checkpoint",
    "soft_threshold",
    "train",
]

for _name in __all__:
    globals()[_name] = getattr(_core, _name)
del _name
