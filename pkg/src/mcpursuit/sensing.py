"""Measurement-matrix ensembles, noise models, and y = Ax + w.

All randomness comes from the counter-based NumPy Philox generator keyed
by (seed, stream tags), so every draw is reproducible from its named
seed.  Ensemble entries are i.i.d. zero mean, unit variance, except the
scaled Gaussian (variance 1/n, the fixed-SNR variant).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError

__all__ = [
    "ENSEMBLE_KINDS",
    "Ensemble",
    "NoiseModel",
    "SensingInstance",
    "rng_for",
    "draw_matrix",
    "measure",
    "make_instance",
    "spectral_norm",
    "save_matrix",
    "load_matrix",
    "save_instance",
    "load_instance",
    "matrix_to_csv",
]

ENSEMBLE_KINDS = ("gauss_std", "gauss_scaled", "rademacher", "uniform_pm")

# measured subgaussian tail coefficients P(|X| > t) <= c1 exp(-c2 t^2);
# bounded ensembles get exact constants (tail hits zero at the endpoint)
_SG_CONSTANTS = {
    "gauss_std": (1.0, 0.5),
    "gauss_scaled": (1.0, 0.5),
    "rademacher": (np.e, 1.0),
    "uniform_pm": (np.e, 1.0 / 3.0),
}


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for a named substream of `seed` (up to 3 tags)."""
    if len(stream) > 3:
        raise ValueError("at most 3 stream tags")
    words = [seed] + list(stream) + [0, 0, 0]
    key = np.array([w & 0xFFFFFFFFFFFFFFFF for w in words[:4]], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class Ensemble:
    kind: str
    d: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.d < 1 or self.n < 1:
            raise ValueError("matrix dimensions must be >= 1")

    @property
    def sg_constants(self) -> tuple[float, float]:
        return _SG_CONSTANTS[self.kind]


@dataclass(frozen=True)
class NoiseModel:
    """kind: "none" | "gauss" (iid N(0, sigma^2)) | "bounded"
    (deterministic, ||w||_2 = e exactly, adversarial or random direction)."""

    kind: str = "none"
    sigma: float = 0.0
    e: float = 0.0
    direction: str = "adversarial"

    def __post_init__(self):
        if self.kind not in ("none", "gauss", "bounded"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "gauss" and self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.kind == "bounded":
            if self.e < 0:
                raise ValueError("e must be >= 0")
            if self.direction not in ("adversarial", "random"):
                raise ValueError(f"unknown direction rule {self.direction!r}")


@dataclass
class SensingInstance:
    A: np.ndarray
    x_true: np.ndarray
    y: np.ndarray
    noise: NoiseModel
    seed: int
    ensemble: Ensemble | None = field(default=None)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


def draw_matrix(ens: Ensemble) -> np.ndarray:
    """i.i.d. matrix draw, bit-identical for identical (kind, dims, seed)."""
    rng = rng_for(ens.seed, 0xA)
    if ens.kind == "gauss_std":
        return rng.standard_normal((ens.d, ens.n))
    if ens.kind == "gauss_scaled":
        return rng.standard_normal((ens.d, ens.n)) / np.sqrt(ens.n)
    if ens.kind == "rademacher":
        return 2.0 * rng.integers(0, 2, size=(ens.d, ens.n)).astype(np.float64) - 1.0
    # uniform on [-sqrt(3), sqrt(3)]: unit variance
    return rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=(ens.d, ens.n))


def measure(A: np.ndarray, x: np.ndarray, noise: NoiseModel, seed: int = 0):
    """(y, w) with y = Ax + w per the noise model."""
    A = np.asarray(A, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if A.ndim != 2 or x.shape != (A.shape[1],):
        raise ValueError(f"dimension mismatch: A is {A.shape}, x is {x.shape}")
    clean = A @ x
    d = clean.size
    if noise.kind == "none":
        w = np.zeros(d)
    elif noise.kind == "gauss":
        w = noise.sigma * rng_for(seed, 0xB).standard_normal(d)
    else:
        if noise.direction == "adversarial":
            # worst-case-flavoured: align with the clean measurements
            base = clean if np.linalg.norm(clean) > 0 else _unit_first(d)
        else:
            base = rng_for(seed, 0xB).standard_normal(d)
            if np.linalg.norm(base) == 0:
                base = _unit_first(d)
        w = noise.e * base / np.linalg.norm(base)
    return clean + w, w


def _unit_first(d: int) -> np.ndarray:
    u = np.zeros(d)
    u[0] = 1.0
    return u


def make_instance(ens: Ensemble, x, noise: NoiseModel = NoiseModel(), seed: int | None = None):
    """Draw A from the ensemble and measure x; matrix and noise use
    disjoint substreams of the instance seed."""
    seed = ens.seed if seed is None else seed
    A = draw_matrix(Ensemble(ens.kind, ens.d, ens.n, seed))
    y, _w = measure(A, x, noise, seed)
    return SensingInstance(A=A, x_true=np.asarray(x, dtype=np.float64), y=y,
                           noise=noise, seed=seed, ensemble=ens)


def spectral_norm(A: np.ndarray, rel_tol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Largest singular value by power iteration on the smaller Gram matrix.

    Deterministic pseudo-random start (fixed Philox key); raises
    NumericalError if the Rayleigh quotient has not stabilized to rel_tol
    within max_iter iterations.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError("spectral_norm expects a matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    G = A @ A.T if A.shape[0] <= A.shape[1] else A.T @ A
    k = G.shape[0]
    scale = np.max(np.abs(G))
    if scale == 0.0:
        return 0.0
    v = rng_for(0x5EED, 0xC).standard_normal(k)
    v /= np.linalg.norm(v)
    lam_prev = 0.0
    for _ in range(max_iter):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:  # v in the null space: restart deterministically shifted
            v = np.roll(v, 1) + 1.0 / k
            v /= np.linalg.norm(v)
            continue
        v = w / nw
        lam = float(v @ (G @ v))
        if abs(lam - lam_prev) <= rel_tol * max(lam, scale * 1e-300):
            return float(np.sqrt(max(lam, 0.0)))
        lam_prev = lam
    raise NumericalError(f"power iteration did not converge in {max_iter} iterations")


# --- serialization -------------------------------------------------------

_MAT_MAGIC = b"MCPMAT01"
_INST_MAGIC = b"MCPINS01"
_NOISE_IDS = {"none": 0, "gauss": 1, "bounded": 2}
_DIR_IDS = {"adversarial": 0, "random": 1}


def save_matrix(path, A: np.ndarray):
    """Little-endian container: magic, u32 rows, u32 cols, f64 row-major."""
    A = np.ascontiguousarray(A, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_MAT_MAGIC)
        fh.write(struct.pack("<II", *A.shape))
        fh.write(A.tobytes())


def load_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:8] != _MAT_MAGIC:
        raise ValueError(f"{path}: not a matrix container")
    rows, cols = struct.unpack_from("<II", raw, 8)
    data = np.frombuffer(raw, dtype="<f8", offset=16, count=rows * cols)
    return data.reshape(rows, cols).copy()


def matrix_to_csv(path, A: np.ndarray):
    np.savetxt(path, np.atleast_2d(A), delimiter=",", fmt="%.17g")


def save_instance(path, inst: SensingInstance):
    nm = inst.noise
    with open(path, "wb") as fh:
        fh.write(_INST_MAGIC)
        fh.write(struct.pack("<IIqBB", inst.d, inst.n, inst.seed,
                             _NOISE_IDS[nm.kind], _DIR_IDS[nm.direction]))
        fh.write(struct.pack("<dd", nm.sigma, nm.e))
        fh.write(np.ascontiguousarray(inst.A, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(inst.x_true, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(inst.y, dtype="<f8").tobytes())


def load_instance(path) -> SensingInstance:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:8] != _INST_MAGIC:
        raise ValueError(f"{path}: not an instance container")
    d, n, seed, nid, did = struct.unpack_from("<IIqBB", raw, 8)
    off = 8 + struct.calcsize("<IIqBB")
    sigma, e = struct.unpack_from("<dd", raw, off)
    off += 16
    A = np.frombuffer(raw, dtype="<f8", offset=off, count=d * n).reshape(d, n).copy()
    off += 8 * d * n
    x = np.frombuffer(raw, dtype="<f8", offset=off, count=n).copy()
    off += 8 * n
    y = np.frombuffer(raw, dtype="<f8", offset=off, count=d).copy()
    kind = {v: k for k, v in _NOISE_IDS.items()}[nid]
    direction = {v: k for k, v in _DIR_IDS.items()}[did]
    noise = NoiseModel(kind=kind, sigma=sigma, e=e, direction=direction)
    return SensingInstance(A=A, x_true=x, y=y, noise=noise, seed=seed)
