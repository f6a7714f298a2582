"""Scheme parameters, the shared key, and the keyed measurement machinery.

The sender and receiver share only a small key file. The Gaussian measurement
matrix is regenerated from its 64-bit seed with a fixed generator pipeline
(SplitMix64 words -> uniform doubles -> Box-Muller pairs) so that both sides
obtain bitwise-identical matrices without exchanging them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, FormatError, ParamError
from .spectral import Spectrum

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _words(seed: int):
    # SplitMix64: one well-mixed 64-bit word per step, pure integer arithmetic
    state = seed & _MASK64
    while True:
        state = (state + _GOLDEN) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        yield z ^ (z >> 31)


def keyed_normals(seed: int, count: int) -> np.ndarray:
    """Deterministic standard-normal draws from the seed's word stream.

    Each word becomes a uniform double u = ((w >> 11) + 0.5) * 2^-53, strictly
    inside (0, 1); consecutive uniform pairs feed the Box-Muller transform and
    both outputs are consumed in order.
    """
    out = np.empty(count)
    words = _words(seed)
    i = 0
    while i < count:
        u1 = ((next(words) >> 11) + 0.5) / 9007199254740992.0   # 2^53
        u2 = ((next(words) >> 11) + 0.5) / 9007199254740992.0
        radius = math.sqrt(-2.0 * math.log(u1))
        out[i] = radius * math.cos(2.0 * math.pi * u2)
        i += 1
        if i < count:
            out[i] = radius * math.sin(2.0 * math.pi * u2)
            i += 1
    return out


def derive_assignment(seed: int, count: int) -> tuple[int, ...]:
    """First `count` distinct sub-image indices (1..4) from the seed's word stream."""
    if not 1 <= count <= 4:
        raise ParamError(f"num_secrets must be 1..4, got {count}")
    picked: list[int] = []
    for w in _words(seed):
        k = int(w % 4) + 1
        if k not in picked:
            picked.append(k)
            if len(picked) == count:
                return tuple(picked)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class StegoParams:
    """All scheme scalars; every cross-field constraint is checked at construction.

    N/M are cover/secret sides, b/l the respective block sides, p1/p2 the
    large/small coefficient counts per cover block, p3 the embedded
    coefficients per secret block, m the measurement count, alpha/beta/gamma
    the embedding strengths and c the donor offset.
    """

    N: int = 1024
    M: int = 512
    b: int = 8
    l: int = 8
    p1: int = 32
    p2: int = 32
    p3: int = 32
    m: int = 320
    alpha: float = 0.01
    beta: float = 0.1
    gamma: float = 1.0
    c: int = 8
    num_secrets: int = 4

    def __post_init__(self):
        for name in ("N", "M", "b", "l", "p1", "p2", "p3", "m", "c"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v <= 0:
                raise ParamError(f"{name} must be a positive integer, got {v!r}")
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ParamError(f"{name} must be finite, got {v!r}")
        if not 1 <= self.num_secrets <= 4:
            raise ParamError(f"num_secrets must be 1..4, got {self.num_secrets}")
        if self.p1 + self.p2 != self.b * self.b:
            raise ParamError(f"p1+p2 != b^2 (p1={self.p1}, p2={self.p2}, b={self.b})")
        if self.m <= self.p2:
            raise ParamError(f"m > p2 violated (m={self.m}, p2={self.p2})")
        if self.N % 2:
            raise ParamError(f"N must be even, got {self.N}")
        if (self.N // 2) % self.b:
            raise ParamError(f"b must divide N/2 (b={self.b}, N={self.N})")
        if self.M % self.l:
            raise ParamError(f"l must divide M (l={self.l}, M={self.M})")
        if self.secret_blocks > self.cover_blocks_per_sub:
            raise ParamError(
                f"M^2/l^2 <= N^2/(4 b^2) violated "
                f"({self.secret_blocks} secret blocks > {self.cover_blocks_per_sub} cover blocks)")
        if self.c < 2:
            raise ParamError(f"c >= 2 violated (c={self.c})")
        if self.p1 - 2 * self.c < 1:
            raise ParamError(f"p1-2c >= 1 violated (p1={self.p1}, c={self.c})")
        if self.p3 < self.c + 1:
            raise ParamError(f"p3 >= c+1 violated (p3={self.p3}, c={self.c})")
        if self.p1 + 2 * self.p3 - self.c > self.p1 + self.m:
            raise ParamError(
                f"p1+2p3-c <= p1+m violated (p3={self.p3}, c={self.c}, m={self.m})")
        if self.p3 > self.l * self.l:
            raise ParamError(f"p3 <= l^2 violated (p3={self.p3}, l={self.l})")

    @property
    def cover_blocks_per_sub(self) -> int:
        return (self.N // 2 // self.b) ** 2

    @property
    def secret_blocks(self) -> int:
        return (self.M // self.l) ** 2

    @property
    def measurement_len(self) -> int:
        return self.p1 + self.m


def default_params() -> StegoParams:
    """The reference configuration: N=1024, M=512, b=l=8, p1=p2=p3=32, m=320."""
    return StegoParams()


@dataclass(frozen=True)
class StegoKey:
    """The shared secret: generator seed, parameters, secret-to-sub-image map."""

    seed: int
    params: StegoParams
    assignment: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise ParamError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParamError(f"seed out of unsigned 64-bit range: {self.seed}")
        a = tuple(int(k) for k in self.assignment)
        if len(a) != self.params.num_secrets:
            raise ParamError(
                f"assignment length {len(a)} != num_secrets {self.params.num_secrets}")
        if any(not 1 <= k <= 4 for k in a):
            raise ParamError(f"assignment entries must be sub-image indices 1..4, got {a}")
        if len(set(a)) != len(a):
            raise ParamError(f"assignment entries must be distinct, got {a}")
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "assignment", a)


def make_key(seed: int, params: StegoParams | None = None, assignment=None) -> StegoKey:
    """Build a key; the assignment defaults to the seed-derived one."""
    params = default_params() if params is None else params
    if assignment is None:
        assignment = derive_assignment(int(seed), params.num_secrets)
    return StegoKey(int(seed), params, tuple(assignment))


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    """Keyed Gaussian projection applied to the v-part of every block spectrum."""

    rows: int
    cols: int
    entries: np.ndarray


def gen_matrix(key: StegoKey) -> MeasurementMatrix:
    """Regenerate the m x p2 matrix from the key; same key, bitwise-identical matrix."""
    p = key.params
    entries = keyed_normals(key.seed, p.m * p.p2).reshape(p.m, p.p2)
    entries.setflags(write=False)
    return MeasurementMatrix(p.m, p.p2, entries)


@dataclass(frozen=True, eq=False)
class MeasurementVector:
    """Per-block measurements: u-part copied coefficients, v-part random projections."""

    y: np.ndarray
    split: int

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64, copy=True)
        if y.ndim != 1 or y.size == 0:
            raise DimensionError("measurements must form a non-empty vector")
        if not 0 < self.split < y.size:
            raise DimensionError(f"split {self.split} out of range for {y.size} measurements")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @property
    def u(self) -> np.ndarray:
        return self.y[: self.split]

    @property
    def v(self) -> np.ndarray:
        return self.y[self.split :]


def measure(s: Spectrum, phi: MeasurementMatrix) -> MeasurementVector:
    """y = [s_u ; phi @ s_v]: linear in the spectrum, identity on its u-part."""
    if s.split is None:
        raise DimensionError("spectrum needs a u/v split to be measured")
    if s.v.size != phi.cols:
        raise DimensionError(f"v-part length {s.v.size} != matrix columns {phi.cols}")
    return MeasurementVector(np.concatenate([s.u, phi.entries @ s.v]), s.split)


_INT_FIELDS = ("version", "seed", "N", "M", "b", "l", "p1", "p2", "p3", "m",
               "c", "num_secrets")
_FLOAT_FIELDS = ("alpha", "beta", "gamma")
_ALL_FIELDS = frozenset(_INT_FIELDS) | frozenset(_FLOAT_FIELDS) | {"assignment"}


def write_key(key: StegoKey, path) -> None:
    """Write the canonical line-oriented key file (floats at 17 significant digits)."""
    p = key.params
    lines = ["# stego key: keep secret, the receiver regenerates everything from it",
             "version = 1",
             f"seed = {key.seed}"]
    for name in ("N", "M", "b", "l", "p1", "p2", "p3", "m"):
        lines.append(f"{name} = {getattr(p, name)}")
    for name in _FLOAT_FIELDS:
        lines.append(f"{name} = {format(getattr(p, name), '.17g')}")
    lines.append(f"c = {p.c}")
    lines.append(f"num_secrets = {p.num_secrets}")
    lines.append("assignment = " + ",".join(str(k) for k in key.assignment))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_key(path) -> StegoKey:
    """Parse a key file; unknown fields and invariant violations are rejected."""
    fields: dict[str, object] = {}
    for ln, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{ln}: expected 'name = value'")
        name, _, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if name not in _ALL_FIELDS:
            raise FormatError(f"{path}:{ln}: unknown field {name!r}")
        if name in fields:
            raise FormatError(f"{path}:{ln}: duplicate field {name!r}")
        try:
            if name in _INT_FIELDS:
                fields[name] = int(value)
            elif name in _FLOAT_FIELDS:
                fields[name] = float(value)
            else:
                fields[name] = tuple(int(tok) for tok in value.split(","))
        except ValueError:
            raise FormatError(f"{path}:{ln}: cannot parse value {value!r} for field {name!r}") from None
    missing = sorted(_ALL_FIELDS - fields.keys())
    if missing:
        raise FormatError(f"{path}: missing fields: {', '.join(missing)}")
    if fields["version"] != 1:
        raise FormatError(f"{path}: unsupported version {fields['version']}")
    params = StegoParams(
        N=fields["N"], M=fields["M"], b=fields["b"], l=fields["l"],
        p1=fields["p1"], p2=fields["p2"], p3=fields["p3"], m=fields["m"],
        alpha=fields["alpha"], beta=fields["beta"], gamma=fields["gamma"],
        c=fields["c"], num_secrets=fields["num_secrets"])
    return StegoKey(fields["seed"], params, fields["assignment"])
