"""
Synthetic regression series and colored noise.

A series is a linear combination of a sinusoid, an exponential and a logarithm
evaluated on a uniform grid. All randomness lives in ``sample_recipe``;
``generate_series`` is a pure function of its recipe.

Functions:
    sample_recipe:     Draw a recipe from the default coefficient ranges.
    generate_series:   Evaluate a recipe.
    colored_noise:     1/f^alpha noise by spectral shaping of white noise.
    build_series_pool: Sample and evaluate ``count`` recipes.
    noise_pool:        Per-series colored noise at a target signal-to-noise ratio.
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from wmm_lab.core.constants import WINDOW, WINDOWS_PER_SERIES
from wmm_lab.core.errors import InvalidArgumentError, RecipeRangeError
from wmm_lab.core.logging import logger
from wmm_lab.ops.rng import RngState

AMPLITUDE_RANGE = (0.5, 2.0)
PERIOD_RANGE = (5.0, 25.0)
RATE_RANGE = (-0.02, 0.02)


class SeriesRecipe(BaseModel):
    """
    s(t) = a_sin * sin(2 pi f t + phase) + a_exp * exp(rate t) + a_log * ln(t + 1 + offset)

    Attributes:
        a_sin, a_exp, a_log (float): Component coefficients.
        frequency (float): Sinusoid frequency in cycles per time unit.
        phase (float): Sinusoid phase in radians.
        rate (float): Exponential rate.
        offset (float): Keeps the logarithm argument positive.
        step (float): Grid spacing; sample k sits at t = k * step.
        length (int): Number of samples, at least one window plus its target.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a_sin: float = 0.0
    a_exp: float = 0.0
    a_log: float = 0.0
    frequency: float = Field(default=0.1, ge=0)
    phase: float = 0.0
    rate: float = 0.0
    offset: float = Field(default=0.0, ge=0)
    step: float = Field(default=1.0, gt=0)
    length: int = Field(default=WINDOW + WINDOWS_PER_SERIES, ge=WINDOW + 1)


def sample_recipe(rng: RngState, length: int = WINDOW + WINDOWS_PER_SERIES) -> SeriesRecipe:
    """
    Draw a recipe whose three components have comparable magnitude over a window.

    Magnitudes are uniform in [0.5, 2] with a random sign, the sinusoid period is
    uniform in [5, 25] samples, the phase uniform in [0, 2 pi) and the exponential
    rate uniform in [-0.02, 0.02]. Draw order is fixed: magnitudes, signs, period,
    phase, rate.
    """
    magnitudes = rng.uniform(*AMPLITUDE_RANGE, size=3)
    signs = np.where(rng.random(3) < 0.5, -1.0, 1.0)
    a_sin, a_exp, a_log = (float(v) for v in magnitudes * signs)
    period = float(rng.uniform(*PERIOD_RANGE))
    phase = float(rng.uniform(0.0, 2.0 * math.pi))
    rate = float(rng.uniform(*RATE_RANGE))
    return SeriesRecipe(
        a_sin=a_sin,
        a_exp=a_exp,
        a_log=a_log,
        frequency=1.0 / period,
        phase=phase,
        rate=rate,
        length=length,
    )


def generate_series(recipe: SeriesRecipe, length: int | None = None) -> np.ndarray:
    """
    Evaluate ``recipe`` on ``length`` grid points (``recipe.length`` by default).

    Raises:
        InvalidArgumentError: If ``length`` < 1.
        RecipeRangeError: If any value is non-finite (e.g. exponential overflow).
    """
    n = recipe.length if length is None else length
    if n < 1:
        raise InvalidArgumentError(f"length must be >= 1, got {n}")
    t = np.arange(n, dtype=np.float64) * recipe.step
    with np.errstate(over="ignore", invalid="ignore"):
        series = (
            recipe.a_sin * np.sin(2.0 * math.pi * recipe.frequency * t + recipe.phase)
            + recipe.a_exp * np.exp(recipe.rate * t)
            + recipe.a_log * np.log(t + 1.0 + recipe.offset)
        )
    if not np.all(np.isfinite(series)):
        first = int(np.argmin(np.isfinite(series)))
        raise RecipeRangeError(f"recipe produces a non-finite value at sample {first}: {recipe}")
    return series


def colored_noise(
    length: int,
    spectral_exponent: float,
    amplitude: float,
    rng: RngState,
) -> np.ndarray:
    """
    Zero-mean noise with power spectral density proportional to 1/f^alpha.

    White Gaussian noise is shaped in the frequency domain by f^(-alpha/2), the DC
    bin is removed, and the result is scaled to RMS ``amplitude``. ``alpha`` = 0 gives
    white noise, 1 pink noise.

    Raises:
        InvalidArgumentError: If ``length`` < 2, ``spectral_exponent`` < 0 or ``amplitude`` < 0.
    """
    if length < 2:
        raise InvalidArgumentError(f"length must be >= 2, got {length}")
    if spectral_exponent < 0:
        raise InvalidArgumentError(f"spectral exponent must be >= 0, got {spectral_exponent}")
    if amplitude < 0:
        raise InvalidArgumentError(f"amplitude must be >= 0, got {amplitude}")

    white = rng.standard_normal(length)
    if amplitude == 0.0:
        return np.zeros(length)
    freqs = np.fft.rfftfreq(length)
    shaping = np.zeros_like(freqs)
    shaping[1:] = freqs[1:] ** (-spectral_exponent / 2.0)
    noise = np.fft.irfft(np.fft.rfft(white) * shaping, n=length)
    noise -= noise.mean()
    rms = math.sqrt(float(np.mean(noise**2)))
    if rms == 0.0:
        return np.zeros(length)
    return noise * (amplitude / rms)


def build_series_pool(
    count: int, rng: RngState, length: int = WINDOW + WINDOWS_PER_SERIES
) -> tuple[list[SeriesRecipe], np.ndarray]:
    """
    Sample ``count`` recipes and evaluate them.

    Returns:
        The recipes and a (count, length) array of series, row i generated from recipe i.
    """
    if count < 1:
        raise InvalidArgumentError(f"count must be >= 1, got {count}")
    recipes = [sample_recipe(rng, length) for _ in range(count)]
    pool = np.stack([generate_series(recipe) for recipe in recipes])
    logger.debug("Generated %d synthetic series of length %d", count, length)
    return recipes, pool


def noise_pool(
    pool: np.ndarray,
    snr_db: float,
    spectral_exponent: float,
    rng: RngState,
) -> np.ndarray:
    """
    Colored noise for every row of ``pool``, each scaled to RMS(row) / 10^(snr_db / 20).

    Only the noise is returned, so the noisy pool is ``pool + noise`` element-wise.
    """
    if pool.ndim != 2:
        raise InvalidArgumentError(f"pool must be 2-D (series, samples), got shape {pool.shape}")
    ratio = 10.0 ** (snr_db / 20.0)
    rows = []
    for series in pool:
        amplitude = math.sqrt(float(np.mean(series**2))) / ratio
        rows.append(colored_noise(series.size, spectral_exponent, amplitude, rng))
    return np.stack(rows)
