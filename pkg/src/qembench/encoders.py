"""Quantum data encoders: map real feature vectors to states, then to
classical feature vectors.

Three encodings plus a passthrough:

* displacement — each scalar becomes a coherent state |alpha>, emitted as
  its first K photon-number probabilities;
* squeezing — each scalar sets the squeezing amplitude r (phase 0) of a
  squeezed vacuum, emitted as its first K photon-number probabilities;
* iqp — features are grouped into blocks, each block drives a
  Hadamard/diagonal-phase/Hadamard circuit, emitted as all 2^n
  computational-basis probabilities;
* classical-passthrough — identity.

Rows are encoded independently (tensor-product structure, no cross-feature
entanglement for the CV methods). Everything here is stateless and pure;
`encode_matrix` may be called concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DataError,
    DimensionError,
    EncodingDomainError,
    ShapeError,
)
from .fock import FockVector, ladder_pair, matrix_exponential

DEFAULT_ALPHA_CLAMP = 1.5
DEFAULT_R_CLAMP = 1.0

# Truncation defaults; squeezed states carry heavier Fock tails than
# coherent ones, so they get the larger basis.
DEFAULT_DISPLACEMENT_DIM = 30
DEFAULT_SQUEEZING_DIM = 60

METHODS = ("classical-passthrough", "iqp", "displacement", "squeezing")

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DisplacementParams:
    """Displacement amplitude alpha, clamped to keep truncation loss tiny."""

    alpha: complex
    clamp: float = DEFAULT_ALPHA_CLAMP

    def __post_init__(self):
        if not (np.isfinite(self.alpha.real) and np.isfinite(self.alpha.imag)):
            raise DataError("displacement amplitude must be finite")
        if abs(self.alpha) > self.clamp:
            raise EncodingDomainError(
                f"|alpha| = {abs(self.alpha):.4g} exceeds clamp {self.clamp}"
            )


@dataclass(frozen=True)
class SqueezeParams:
    """Squeezing amplitude r >= 0 and phase phi (normalized into [0, 2pi))."""

    r: float
    phi: float = 0.0
    clamp: float = DEFAULT_R_CLAMP

    def __post_init__(self):
        if not (np.isfinite(self.r) and np.isfinite(self.phi)):
            raise DataError("squeezing parameters must be finite")
        if self.r < 0:
            raise EncodingDomainError(f"squeezing amplitude must be >= 0, got {self.r}")
        if self.r > self.clamp:
            raise EncodingDomainError(f"r = {self.r:.4g} exceeds clamp {self.clamp}")
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)


@dataclass(frozen=True)
class IqpPhaseVector:
    """Diagonal phases of the IQP circuit, one per basis string.

    Index bit order: qubit 1 (first feature) is the most significant bit
    of the basis index.
    """

    n: int
    phases: np.ndarray


@dataclass(frozen=True)
class QubitStateVector:
    """State vector over 2^n computational basis states."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (2**self.n,):
            raise ShapeError(f"expected {2 ** self.n} amplitudes, got {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ShapeError(f"qubit state norm^2 = {norm} not 1 within 1e-12")
        object.__setattr__(self, "amps", amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class EncoderConfig:
    """How raw feature vectors become classifier inputs.

    fock_dim defaults per method (30 displacement, 60 squeezing);
    probs_per_mode is the number K of Fock probabilities emitted per
    scalar feature; iqp_block is the qubit count per IQP block;
    input_scaling names the rule the harness fits on the training split:
    "minmax" to [0, 1] (default for the quantum methods, keeps encoder
    inputs inside the clamps) or "none" (default for the passthrough,
    whose baseline consumes PCA components untouched).
    """

    method: str
    fock_dim: int | None = None
    probs_per_mode: int = 5
    iqp_block: int = 2
    input_scaling: str | None = None
    alpha_clamp: float = DEFAULT_ALPHA_CLAMP
    r_clamp: float = DEFAULT_R_CLAMP

    def __post_init__(self):
        if self.method not in METHODS:
            raise DataError(f"unknown encoding method {self.method!r}; expected one of {METHODS}")
        if self.input_scaling is None:
            default_rule = "none" if self.method == "classical-passthrough" else "minmax"
            object.__setattr__(self, "input_scaling", default_rule)
        if self.fock_dim is None:
            default = DEFAULT_SQUEEZING_DIM if self.method == "squeezing" else DEFAULT_DISPLACEMENT_DIM
            object.__setattr__(self, "fock_dim", default)
        if self.fock_dim < 2:
            raise DimensionError(f"fock_dim must be >= 2, got {self.fock_dim}")
        if not 1 <= self.probs_per_mode <= self.fock_dim:
            raise DataError(
                f"probs_per_mode must be in [1, fock_dim={self.fock_dim}], got {self.probs_per_mode}"
            )
        if not 1 <= self.iqp_block <= 10:
            raise DataError(f"iqp_block must be in [1, 10], got {self.iqp_block}")
        if self.input_scaling not in ("minmax", "none"):
            raise DataError(f"unknown input_scaling rule {self.input_scaling!r}")

    def output_width(self, n_features: int) -> int:
        """Encoded column count for an n_features input row."""
        if self.method == "classical-passthrough":
            return n_features
        if self.method == "iqp":
            n_blocks = -(-n_features // self.iqp_block)
            return n_blocks * 2**self.iqp_block
        return n_features * self.probs_per_mode


# ---------------------------------------------------------------------------
# Coherent states (displacement encoding)
# ---------------------------------------------------------------------------


def _coherent_amplitudes(alphas: np.ndarray, n_levels: int) -> np.ndarray:
    """Closed-form coherent amplitudes <n|alpha> for a batch of alphas.

    Returns shape (n_levels, len(alphas)); column j is the first n_levels
    amplitudes e^{-|a|^2/2} a^n / sqrt(n!) of alpha_j, via the stable
    recurrence c_n = c_{n-1} * a / sqrt(n).
    """
    alphas = np.asarray(alphas, dtype=complex)
    out = np.empty((n_levels, alphas.size), dtype=complex)
    out[0] = np.exp(-0.5 * np.abs(alphas) ** 2)
    for n in range(1, n_levels):
        out[n] = out[n - 1] * alphas / math.sqrt(n)
    return out


def displace_vacuum(params: DisplacementParams, dim: int) -> FockVector:
    """Coherent state |alpha> in a truncated basis (closed form).

    Photon-number probabilities follow the Poisson law with mean |alpha|^2.
    """
    if dim < 2:
        raise DimensionError(f"truncation dimension must be >= 2, got {dim}")
    amps = _coherent_amplitudes(np.array([params.alpha]), dim)[:, 0]
    return FockVector(dim=dim, amps=amps)


def displace_vacuum_expm(params: DisplacementParams, dim: int) -> FockVector:
    """Coherent state via exponentiating alpha a† - alpha* a onto |0>.

    Independent computation path; agrees with displace_vacuum to ~1e-8
    per amplitude for |alpha| <= 1.5 at dim 30.
    """
    if dim < 2:
        raise DimensionError(f"truncation dimension must be >= 2, got {dim}")
    pair = ladder_pair(dim)
    generator = params.alpha * pair.create - np.conj(params.alpha) * pair.annihilate
    return FockVector(dim=dim, amps=matrix_exponential(generator)[:, 0])


# ---------------------------------------------------------------------------
# Squeezed vacuum (squeezing encoding)
# ---------------------------------------------------------------------------


def _squeeze_generator(zeta: complex, dim: int) -> np.ndarray:
    pair = ladder_pair(dim)
    a2 = pair.annihilate @ pair.annihilate
    adag2 = pair.create @ pair.create
    return 0.5 * (np.conj(zeta) * a2 - zeta * adag2)


def squeeze_vacuum(params: SqueezeParams, dim: int) -> FockVector:
    """Squeezed vacuum state exp((z* a^2 - z a†^2)/2)|0>, z = r e^{i phi}.

    The generator only couples photon numbers of equal parity, so odd
    amplitudes are exactly zero.
    """
    if dim < 2:
        raise DimensionError(f"truncation dimension must be >= 2, got {dim}")
    zeta = params.r * np.exp(1j * params.phi)
    return FockVector(dim=dim, amps=matrix_exponential(_squeeze_generator(zeta, dim))[:, 0])


class _SqueezeBasis:
    """Eigendecomposition of the phase-0 squeeze generator at one dim.

    The generator (a^2 - a†^2)/2 is r-independent up to scale, so a single
    Hermitian eigendecomposition serves every r: the state for amplitude r
    is V exp(-i r mu) V† |0>. Used by the batch encoder path; agrees with
    squeeze_vacuum (the expm path) to ~1e-12.
    """

    _cache: dict[int, "_SqueezeBasis"] = {}

    def __init__(self, dim: int):
        generator = _squeeze_generator(1.0 + 0.0j, dim)
        eigvals, eigvecs = np.linalg.eigh(1j * generator)
        self.mu = eigvals
        self.v = eigvecs
        self.w0 = eigvecs.conj().T[:, 0]

    @classmethod
    def get(cls, dim: int) -> "_SqueezeBasis":
        basis = cls._cache.get(dim)
        if basis is None:
            basis = cls(dim)
            cls._cache[dim] = basis
        return basis


def _squeezed_amplitudes(rs: np.ndarray, dim: int) -> np.ndarray:
    """Amplitudes of phase-0 squeezed vacua for a batch of r values.

    Returns shape (dim, len(rs)).
    """
    basis = _SqueezeBasis.get(dim)
    phase = np.exp(-1j * np.outer(basis.mu, rs))
    return basis.v @ (phase * basis.w0[:, None])


# ---------------------------------------------------------------------------
# IQP encoding
# ---------------------------------------------------------------------------


def _basis_signs(n: int) -> np.ndarray:
    """Sign table s_i(z) = (-1)^{z_i}, shape (2^n, n), qubit 1 = MSB."""
    z = np.arange(2**n)
    bits = (z[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return 1 - 2 * bits


def iqp_phases(x, n: int) -> IqpPhaseVector:
    """Diagonal phases: sum_i x_i s_i(z) + sum_{i<j} x_i x_j s_i(z) s_j(z).

    Each entry is the correctly rounded sum of its terms (math.fsum), so
    the result is exactly independent of term order.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ShapeError(f"expected {n} features, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DataError("non-finite feature value")
    signs = _basis_signs(n)
    phases = np.empty(2**n)
    for z in range(2**n):
        s = signs[z]
        terms = [x[i] * s[i] for i in range(n)]
        terms += [x[i] * x[j] * (s[i] * s[j]) for i in range(n) for j in range(i + 1, n)]
        phases[z] = math.fsum(terms)
    return IqpPhaseVector(n=n, phases=phases)


def _walsh_hadamard(v: np.ndarray) -> np.ndarray:
    """Apply the unitary n-qubit Hadamard transform to a 2^n vector."""
    v = v.astype(complex, copy=True)
    size = v.shape[0]
    h = 1
    while h < size:
        v = v.reshape(-1, 2, h)
        top = v[:, 0, :] + v[:, 1, :]
        bottom = v[:, 0, :] - v[:, 1, :]
        v = np.concatenate((top[:, None, :], bottom[:, None, :]), axis=1)
        h *= 2
    return v.reshape(size) / math.sqrt(size)


def iqp_encode(x, n: int) -> QubitStateVector:
    """Hadamard sandwich around diag(e^{i phases}), applied to |0...0>."""
    if n > 10:
        raise ShapeError(f"iqp blocks limited to 10 qubits, got {n}")
    phases = iqp_phases(x, n).phases
    # First Hadamard layer on |0...0> is the uniform vector.
    v = np.exp(1j * phases) / math.sqrt(2**n)
    return QubitStateVector(n=n, amps=_walsh_hadamard(v))


# ---------------------------------------------------------------------------
# Row/matrix encoding
# ---------------------------------------------------------------------------


def fock_tail_bound(cfg: EncoderConfig) -> float:
    """Worst-case probability mass beyond the first K Fock states for any
    in-clamp input; bounds how far a K-probability group may fall short
    of summing to 1."""
    k = cfg.probs_per_mode
    if cfg.method == "displacement":
        lam = cfg.alpha_clamp**2
        head = sum(lam**n * math.exp(-lam) / math.factorial(n) for n in range(k))
        return 1.0 - head
    if cfg.method == "squeezing":
        t = math.tanh(cfg.r_clamp)
        head = sum(
            t ** (2 * m) * math.factorial(2 * m) / (4**m * math.factorial(m) ** 2)
            for m in range(0, (k + 1) // 2)
        ) / math.cosh(cfg.r_clamp)
        return 1.0 - head
    return 0.0


def _encode_cv_batch(values: np.ndarray, cfg: EncoderConfig) -> np.ndarray:
    """First-K probabilities for a flat batch of scalar inputs, (K, m)."""
    if cfg.method == "displacement":
        over = np.abs(values) > cfg.alpha_clamp
        if over.any():
            bad = float(values[np.argmax(over)])
            raise EncodingDomainError(f"|alpha| = {abs(bad):.4g} exceeds clamp {cfg.alpha_clamp}")
        amps = _coherent_amplitudes(values, cfg.probs_per_mode)
    else:
        out_of_range = (values < 0) | (values > cfg.r_clamp)
        if out_of_range.any():
            bad = float(values[np.argmax(out_of_range)])
            raise EncodingDomainError(f"r = {bad:.4g} outside [0, {cfg.r_clamp}]")
        amps = _squeezed_amplitudes(values, cfg.fock_dim)[: cfg.probs_per_mode]
    return np.abs(amps) ** 2


def encode_row(x, cfg: EncoderConfig) -> np.ndarray:
    """Encode one feature vector into a classical feature vector.

    classical-passthrough returns x unchanged; displacement/squeezing emit
    K Fock probabilities per feature; iqp splits x into blocks of
    cfg.iqp_block features (zero-padding the last) and emits each block's
    basis probabilities.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ShapeError(f"encode_row expects a 1-D vector, got shape {x.shape}")
    return encode_matrix(x[None, :], cfg)[0]


def encode_matrix(matrix, cfg: EncoderConfig) -> np.ndarray:
    """Encode each row of a feature matrix; rows are independent.

    Output column count is cfg.output_width(n_features) for every row.
    Errors carry the offending row index.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ShapeError(f"encode_matrix expects a 2-D matrix, got shape {matrix.shape}")
    bad_rows = ~np.isfinite(matrix).all(axis=1)
    if bad_rows.any():
        raise DataError(f"non-finite feature value in row {int(np.argmax(bad_rows))}")
    n_rows, n_features = matrix.shape

    if cfg.method == "classical-passthrough":
        return matrix.copy()

    if cfg.method == "iqp":
        block = cfg.iqp_block
        n_blocks = -(-n_features // block)
        padded = np.zeros((n_rows, n_blocks * block))
        padded[:, :n_features] = matrix
        out = np.empty((n_rows, n_blocks * 2**block))
        width = 2**block
        for i in range(n_rows):
            for b in range(n_blocks):
                state = iqp_encode(padded[i, b * block : (b + 1) * block], block)
                out[i, b * width : (b + 1) * width] = state.probabilities()
        return out

    # Row-at-a-time so each output row is computed exactly as encode_row
    # would (reduction order in the squeeze path depends on batch shape).
    k = cfg.probs_per_mode
    out = np.empty((n_rows, n_features * k))
    for i in range(n_rows):
        try:
            probs = _encode_cv_batch(matrix[i], cfg)
        except EncodingDomainError as exc:
            raise EncodingDomainError(f"row {i}: {exc}") from None
        out[i] = probs.T.reshape(-1)
    return out


class FeatureScaler:
    """Input-scaling rule fit on the training split only.

    "minmax" maps each column to [0, 1] using training min/max and clips
    transformed values into [0, 1], so encoder clamps cannot be violated
    by test rows outside the training range. "none" is the identity.
    """

    def __init__(self, rule: str = "minmax"):
        if rule not in ("minmax", "none"):
            raise DataError(f"unknown input_scaling rule {rule!r}")
        self.rule = rule
        self.mins: np.ndarray | None = None
        self.spans: np.ndarray | None = None

    def fit(self, matrix: np.ndarray) -> "FeatureScaler":
        matrix = np.asarray(matrix, dtype=float)
        if self.rule == "minmax":
            self.mins = matrix.min(axis=0)
            spans = matrix.max(axis=0) - self.mins
            spans[spans == 0] = 1.0
            self.spans = spans
        return self

    def transform(self, matrix: np.ndarray) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=float)
        if self.rule == "none":
            return matrix.copy()
        if self.mins is None:
            raise DataError("FeatureScaler used before fit")
        return np.clip((matrix - self.mins) / self.spans, 0.0, 1.0)
