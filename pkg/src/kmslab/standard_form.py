"""The standard form of the matrix algebra at truncation.

Vectors are dim x dim complex matrices with the Hilbert-Schmidt inner
product (xi|eta) = trace(xi* eta).  The positive cone is the set of
positive semidefinite matrices, the conjugation is J xi = xi*, and with
rho the diagonal Gibbs density the modular objects act entrywise:

    Delta^s xi  : entry (j,k) scaled by (w_j / w_k)^s
    S0 xi       = J Delta^{1/2} xi = rho^{-1/2} xi* rho^{1/2}
    i0(x)       = rho^{1/4} x rho^{1/4}   (symmetric embedding)
    j(Y) xi     = xi Y*                    (right action through J)

All modular factors are computed from log-weights so that large beta * g
spreads fail loudly instead of silently producing inf.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConditioningError, ConditioningWarning, DimensionMismatchError, InvalidSpecError
from .fock import EXP_OVERFLOW, AffiliatedOperator, FockSpec, GibbsData, gibbs_data

HERMITIAN_TOL = 1e-10  # relative, for the J-real predicate
CONE_TOL = 1e-10  # eigenvalue floor for the positivity predicate
UNEMBED_WARN = 1e8  # max inverse quarter-weight before a conditioning warning


def as_matrix(x) -> np.ndarray:
    """Accept either a raw matrix or an AffiliatedOperator."""
    if isinstance(x, AffiliatedOperator):
        return x.matrix
    return np.asarray(x, dtype=complex)


def hs_inner(xi, eta) -> complex:
    xi = as_matrix(xi)
    eta = as_matrix(eta)
    if xi.shape != eta.shape:
        raise DimensionMismatchError(f"shape mismatch {xi.shape} vs {eta.shape}")
    return complex(np.vdot(xi, eta))


def hs_norm(xi) -> float:
    return float(np.linalg.norm(as_matrix(xi)))


def is_j_real(xi, tol: float = HERMITIAN_TOL) -> bool:
    xi = as_matrix(xi)
    scale = max(1.0, float(np.linalg.norm(xi)))
    return float(np.linalg.norm(xi - xi.conj().T)) <= tol * scale


def in_positive_cone(xi, tol: float = CONE_TOL) -> bool:
    xi = as_matrix(xi)
    if not is_j_real(xi):
        return False
    herm = 0.5 * (xi + xi.conj().T)
    return float(np.linalg.eigvalsh(herm).min()) >= -tol


@dataclass(frozen=True)
class StandardFormContext:
    """Gibbs data plus precomputed quarter log-weights."""

    gibbs: GibbsData
    quarter_log: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.quarter_log is None:
            object.__setattr__(self, "quarter_log", self.gibbs.log_weights / 4.0)

    @classmethod
    def from_spec(cls, spec: FockSpec) -> "StandardFormContext":
        return cls(gibbs=gibbs_data(spec))

    @property
    def dim(self) -> int:
        return self.gibbs.spec.dim

    @property
    def xi0(self) -> np.ndarray:
        return self.gibbs.xi0

    @property
    def log_weights(self) -> np.ndarray:
        return self.gibbs.log_weights


def _check_conditioning(exponents: np.ndarray, what: str):
    worst = float(np.max(np.abs(exponents)))
    if worst > EXP_OVERFLOW:
        j, k = np.unravel_index(int(np.argmax(np.abs(exponents))), exponents.shape)
        raise ConditioningError(
            f"{what}: modular factor exponent {worst:.3g} at entry ({j},{k}) would overflow",
            index_pair=(int(j), int(k)),
        )


def modular_power(s: float, xi, ctx: StandardFormContext) -> np.ndarray:
    """Delta^s: entry (j,k) scaled by exp(s (log w_j - log w_k))."""
    if abs(s) > 1.0:
        raise InvalidSpecError(f"modular power restricted to |s| <= 1, got {s}")
    xi = as_matrix(xi)
    lw = ctx.log_weights
    exponents = s * (lw[:, None] - lw[None, :])
    _check_conditioning(exponents, f"Delta^{s}")
    return xi * np.exp(exponents)


def modular_unitary(t: float, xi, ctx: StandardFormContext) -> np.ndarray:
    """Delta^{it}: entrywise phase exp(i t (log w_j - log w_k)); norm preserving."""
    xi = as_matrix(xi)
    lw = ctx.log_weights
    return xi * np.exp(1j * t * (lw[:, None] - lw[None, :]))


def conj_j(xi) -> np.ndarray:
    """The antilinear conjugation J xi = xi*."""
    return as_matrix(xi).conj().T


def s0_apply(xi, ctx: StandardFormContext) -> np.ndarray:
    """S0 = J o Delta^{1/2}, equal to rho^{-1/2} xi* rho^{1/2}."""
    return conj_j(modular_power(0.5, xi, ctx))


def embed(x, ctx: StandardFormContext) -> np.ndarray:
    """Symmetric embedding i0(x) = rho^{1/4} x rho^{1/4}, entrywise in the log domain."""
    x = as_matrix(x)
    q = ctx.quarter_log
    return x * np.exp(q[:, None] + q[None, :])


def unembed(xi, ctx: StandardFormContext) -> np.ndarray:
    """Inverse of the symmetric embedding; warns when inverse quarter-weights exceed 1e8."""
    xi = as_matrix(xi)
    q = ctx.quarter_log
    exponents = -(q[:, None] + q[None, :])
    _check_conditioning(exponents, "i0^{-1}")
    if float(np.exp(np.max(-q))) > UNEMBED_WARN:
        warnings.warn(
            "inverse quarter-weights exceed 1e8; unembedding is ill conditioned",
            ConditioningWarning,
            stacklevel=2,
        )
    return xi * np.exp(exponents)


def j_action(y, xi) -> np.ndarray:
    """j(Y) xi = J Y J xi = xi Y*; commutes exactly with every left multiplication."""
    y = as_matrix(y)
    return as_matrix(xi) @ y.conj().T


def jordan_decompose(xi, tol: float = HERMITIAN_TOL):
    """Spectral positive/negative parts of a Hermitian vector.

    Returns (xi_plus, xi_minus, |xi|) with xi = xi_plus - xi_minus,
    xi_plus xi_minus = 0 and |xi| = xi_plus + xi_minus.
    """
    xi = as_matrix(xi)
    if not is_j_real(xi, tol):
        raise InvalidSpecError("jordan decomposition requires a Hermitian (J-real) vector")
    herm = 0.5 * (xi + xi.conj().T)
    eigvals, eigvecs = np.linalg.eigh(herm)
    plus = (eigvecs * np.clip(eigvals, 0.0, None)) @ eigvecs.conj().T
    minus = (eigvecs * np.clip(-eigvals, 0.0, None)) @ eigvecs.conj().T
    return plus, minus, plus + minus


def order_interval_vector(ctx: StandardFormContext, contraction) -> np.ndarray:
    """xi0^{1/2} C xi0^{1/2} lies in [0, xi0] whenever 0 <= C <= 1."""
    c = as_matrix(contraction)
    half = np.exp(ctx.quarter_log)  # xi0^{1/2} = diag(w^{1/4})
    return (half[:, None] * c) * half[None, :]


def random_contraction(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random 0 <= C <= 1: Haar-like eigenbasis with uniform eigenvalues."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    u = rng.uniform(0.0, 1.0, size=dim)
    return (q * u) @ q.conj().T


def sample_order_interval(ctx: StandardFormContext, seed) -> np.ndarray:
    """Deterministic-per-seed Hermitian sample with 0 <= xi <= xi0."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return order_interval_vector(ctx, random_contraction(ctx.dim, rng))


def random_hermitian(dim: int, rng: np.random.Generator, unit_hs: bool = True) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + g.conj().T)
    if unit_hs:
        h = h / np.linalg.norm(h)
    return h


def random_psd(dim: int, rng: np.random.Generator, unit_hs: bool = True) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    p = g @ g.conj().T
    if unit_hs:
        p = p / np.linalg.norm(p)
    return p
