"""Image fidelity measures: PSNR, mean SSIM, normalized cross-correlation,
normalized absolute error, histogram entropy, and Sobel edge maps.

`compare` quantizes both rasters to 8 bits first so reported numbers always
correspond to viewable images; the individual metric functions evaluate
whatever they are given.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DimensionError, ParamError
from .raster import Raster, quantize_u8

_PEAK = 255.0
_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03


def _paired(a: Raster, b: Raster) -> tuple[np.ndarray, np.ndarray]:
    if a.pixels.shape != b.pixels.shape:
        raise DimensionError(f"image dimensions differ: {a.pixels.shape} vs {b.pixels.shape}")
    return a.pixels, b.pixels


def psnr(a: Raster, b: Raster) -> float:
    """10 * log10(255^2 / MSE) in dB; +inf when the rasters are identical."""
    x, y = _paired(a, b)
    mse = float(np.mean((x - y) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(_PEAK * _PEAK / mse)


def _gauss_kernel() -> np.ndarray:
    half = _SSIM_WINDOW // 2
    g = np.exp(-0.5 * (np.arange(-half, half + 1) / _SSIM_SIGMA) ** 2)
    return g / g.sum()


def _windowed(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    # separable Gaussian windowing restricted to full 11x11 windows
    tmp = ndimage.correlate1d(x, g, axis=0, mode="constant")
    out = ndimage.correlate1d(tmp, g, axis=1, mode="constant")
    half = g.size // 2
    return out[half:-half, half:-half]


def mssim(a: Raster, b: Raster) -> float:
    """Mean local SSIM over all full 11x11 windows (Gaussian weights, sigma 1.5)."""
    x, y = _paired(a, b)
    if min(x.shape) < _SSIM_WINDOW:
        raise DimensionError(f"images must be at least {_SSIM_WINDOW} pixels per side")
    g = _gauss_kernel()
    c1 = (_SSIM_K1 * _PEAK) ** 2
    c2 = (_SSIM_K2 * _PEAK) ** 2
    mu_x = _windowed(x, g)
    mu_y = _windowed(y, g)
    var_x = _windowed(x * x, g) - mu_x * mu_x
    var_y = _windowed(y * y, g) - mu_y * mu_y
    cov = _windowed(x * y, g) - mu_x * mu_y
    num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


def ncc(a: Raster, b: Raster) -> float:
    """sum(a * b) / sum(a^2); asymmetric, the first raster is the reference."""
    x, y = _paired(a, b)
    denom = float((x * x).sum())
    if denom == 0.0:
        raise ParamError("NCC is undefined for an all-zero reference")
    return float((x * y).sum() / denom)


def nae(a: Raster, b: Raster) -> float:
    """sum(|a - b|) / sum(|a|); asymmetric, the first raster is the reference."""
    x, y = _paired(a, b)
    denom = float(np.abs(x).sum())
    if denom == 0.0:
        raise ParamError("NAE is undefined for an all-zero reference")
    return float(np.abs(x - y).sum() / denom)


def entropy(a: Raster) -> float:
    """Shannon entropy in bits of the 256-bin histogram of the quantized pixels."""
    q = quantize_u8(a).pixels.astype(np.int64)
    counts = np.bincount(q.ravel(), minlength=256)
    prob = counts[counts > 0] / q.size
    return float(-(prob * np.log2(prob)).sum())


def edge_map(a: Raster, threshold: float = 0.2) -> Raster:
    """Binary Sobel edge map, thresholded at `threshold` times the peak gradient."""
    if a.height < 3 or a.width < 3:
        raise DimensionError(f"edge map needs at least 3x3 pixels, got {a.height}x{a.width}")
    if not 0.0 <= threshold <= 1.0:
        raise ParamError(f"threshold must be a fraction in [0, 1], got {threshold}")
    gx = ndimage.sobel(a.pixels, axis=1, mode="reflect")
    gy = ndimage.sobel(a.pixels, axis=0, mode="reflect")
    mag = np.hypot(gx, gy)
    peak = float(mag.max())
    if peak == 0.0:
        return Raster(np.zeros_like(mag), "u8")
    return Raster((mag >= threshold * peak).astype(np.float64), "u8")


@dataclass(frozen=True)
class MetricsReport:
    psnr_db: float
    mssim: float
    ncc: float
    nae: float
    entropy_ref: float
    entropy_test: float

    def to_dict(self) -> dict:
        return {"psnr_db": "inf" if math.isinf(self.psnr_db) else self.psnr_db,
                "mssim": self.mssim, "ncc": self.ncc, "nae": self.nae,
                "entropy_ref": self.entropy_ref, "entropy_test": self.entropy_test}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def compare(ref: Raster, test: Raster) -> MetricsReport:
    """Full report on the 8-bit-quantized pair, matching what a viewer would see."""
    qr, qt = quantize_u8(ref), quantize_u8(test)
    return MetricsReport(psnr(qr, qt), mssim(qr, qt), ncc(qr, qt), nae(qr, qt),
                         entropy(qr), entropy(qt))
