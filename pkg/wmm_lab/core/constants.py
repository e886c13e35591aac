"""
Library-wide constants for hyper-parameter intervals, dataset geometry and defaults.

Defines:
    P_RANGE, C_RANGE:        Log-uniform search intervals for trigger probability and coverage.
    DEFAULT_SHUFFLE_DENSITY: Bernoulli density of the shuffle mask.
    DEFAULT_BINS:            Histogram bins of the entropy and KL estimators.
    KL_FLOOR:                Probability floor of the overflow bins in the KL reference.
    FULL_SPLIT:              Full-scale train/validation/test window counts.
    DESK_SCALE:              Default scale factor applied to FULL_SPLIT.
    WINDOW:                  Input window length of the synthetic regression task.
    WINDOWS_PER_SERIES:      Windows cut from every generated series.
    DEFAULT_SNR_DB:          Signal-to-noise ratio of the noisy synthetic task.
    RECURRENT_CLIP_NORM:     Global gradient-norm clip used by recurrent presets.
    ADAM_BETAS, ADAM_EPS:    Adam moment decay rates and epsilon.
    TOP_K:                   Number of best trials averaged in WMM summaries.
    STREAM_*:                Sub-stream keys derived from a run's master seed.
"""

P_RANGE = (0.05, 0.4)
C_RANGE = (0.03, 0.35)

DEFAULT_SHUFFLE_DENSITY = 0.5

DEFAULT_BINS = 64
KL_FLOOR = 1e-12

FULL_SPLIT = (55_000, 5_000, 10_000)
DESK_SCALE = 0.1
WINDOW = 50
WINDOWS_PER_SERIES = 50
DEFAULT_SNR_DB = 10.0
DEFAULT_NOISE_EXPONENT = 1.0

RECURRENT_CLIP_NORM = 5.0
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8

TOP_K = 5

STREAM_INIT = 0
STREAM_DATA = 1
STREAM_WMM = 2

MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}
