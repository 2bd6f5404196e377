"""EEG driver-distraction detection toolkit.

Synthetic corpus generation, band-power feature extraction, sliding-window
segmentation and the classifier suite (1-NN, Rocket, FCN, ResNet), backed by
the C++ core.
"""

from ._core import (
    FEATURE_DIM,
    FRAME_LEN,
    FRAME_STRIDE,
    NUM_CHANNELS,
    SAMPLE_RATE,
    SEQUENCE_LEN,
    WINDOW_HOP,
    WINDOW_LEN,
    ConfigError,
    DataError,
    NeuralNet,
    Rocket,
    TrainingDiverged,
    bandpass_filter,
    channel_names,
    evaluate_metrics,
    extract_features,
    generate_session,
    nn1_predict,
    power_spectrum,
    segment_windows,
)

__all__ = [
    "FEATURE_DIM",
    "FRAME_LEN",
    "FRAME_STRIDE",
    "NUM_CHANNELS",
    "SAMPLE_RATE",
    "SEQUENCE_LEN",
    "WINDOW_HOP",
    "WINDOW_LEN",
    "ConfigError",
    "DataError",
    "NeuralNet",
    "Rocket",
    "TrainingDiverged",
    "bandpass_filter",
    "channel_names",
    "evaluate_metrics",
    "extract_features",
    "generate_session",
    "nn1_predict",
    "power_spectrum",
    "segment_windows",
]

__version__ = "0.1.0"
