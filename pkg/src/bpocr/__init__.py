"""Feed-forward back-propagation letter recognizer with classical and two-term momentum."""

__version__ = "0.1.0"

from .classify import RecognitionResult, accuracy, classify_sample, compet, evaluate, one_hot
from .learn import HyperParams, TrainingReport, UpdateRule, apply_update, backprop, lms_error, mse, train_sample
from .network import NetworkState, Topology, forward, init_network, output_of

__all__ = [
    "HyperParams", "NetworkState", "RecognitionResult", "Topology", "TrainingReport", "UpdateRule",
    "accuracy", "apply_update", "backprop", "classify_sample", "compet", "evaluate", "forward",
    "init_network", "lms_error", "mse", "one_hot", "output_of", "train_sample",
]
