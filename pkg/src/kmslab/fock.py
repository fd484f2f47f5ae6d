"""Truncated bosonic ladder operators and Gibbs-state data.

The single-mode Fock space is truncated to the span of e_0 .. e_{dim-1}.
The annihilator acts as A e_k = sqrt(k) e_{k-1}, its adjoint as
A* e_k = sqrt(k+1) e_{k+1} (annihilated at the top index), and the
equilibrium data for a Hamiltonian profile g is the normalized Gibbs
weight vector w_k = exp(-beta g(k)) / Z computed in the log domain.

Truncation policy: identities that rely on the commutation relation
A A* - A* A = 1 fail only in the top-m corner, so every product-identity
report restricts to interior indices {0, .., dim-1-m} and lists the
excluded boundary indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import InvalidSpecError
from .reporting import Report

EXP_OVERFLOW = 700.0  # np.exp overflows just above log(DBL_MAX) ~ 709.8


@dataclass(frozen=True)
class HamiltonianProfile:
    """Monotone profile g on {-1, 0, 1, ...}; g(-1) is pinned to g(0).

    The value at -1 is only ever multiplied by a factor annihilated by A,
    so the pinning is inert.
    """

    kind: str  # "linear", "log" or "table"
    offset: float = 2.0
    table: tuple[float, ...] | None = None

    @classmethod
    def linear(cls) -> "HamiltonianProfile":
        return cls(kind="linear")

    @classmethod
    def log(cls, offset: float = 2.0) -> "HamiltonianProfile":
        if offset < 2.0:
            raise InvalidSpecError(f"log profile requires offset >= 2, got {offset}")
        return cls(kind="log", offset=float(offset))

    @classmethod
    def from_table(cls, values) -> "HamiltonianProfile":
        values = tuple(float(v) for v in values)
        if len(values) < 2:
            raise InvalidSpecError("table profile needs at least two values")
        return cls(kind="table", table=values)

    @classmethod
    def from_config(cls, cfg: dict) -> "HamiltonianProfile":
        kind = cfg.get("kind")
        if kind == "linear":
            return cls.linear()
        if kind == "log":
            return cls.log(cfg.get("offset", 2.0))
        if kind == "table":
            return cls.from_table(cfg.get("values", ()))
        raise InvalidSpecError(f"unknown hamiltonian profile kind {kind!r}")

    def to_config(self) -> dict:
        if self.kind == "linear":
            return {"kind": "linear"}
        if self.kind == "log":
            return {"kind": "log", "offset": self.offset}
        return {"kind": "table", "values": list(self.table or ())}

    def __call__(self, k: int) -> float:
        if k <= -1:
            k = 0
        if self.kind == "linear":
            return float(k)
        if self.kind == "log":
            return float(np.log(k + self.offset))
        if self.table is None or k >= len(self.table):
            raise InvalidSpecError(f"table profile has no value at index {k}")
        return self.table[k]

    def values(self, dim: int) -> np.ndarray:
        return np.array([self(k) for k in range(dim)])


@dataclass(frozen=True)
class FockSpec:
    """Truncation dimension, Hamiltonian profile and inverse temperature."""

    dim: int
    profile: HamiltonianProfile
    beta: float

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidSpecError(f"truncation dimension must be >= 2, got {self.dim}")
        if not self.beta > 0:
            raise InvalidSpecError(f"inverse temperature must be positive, got {self.beta}")
        g = self.profile.values(self.dim)
        if np.any(np.diff(g) < 0):
            raise InvalidSpecError("hamiltonian profile must be monotone increasing")

    def g_values(self) -> np.ndarray:
        return self.profile.values(self.dim)

    def gaps(self) -> np.ndarray:
        """First differences g(k) - g(k-1) with the inert g(-1) := g(0) convention."""
        g = self.g_values()
        out = np.empty(self.dim)
        out[0] = 0.0
        out[1:] = np.diff(g)
        return out


@dataclass(frozen=True)
class AffiliatedOperator:
    """A dim x dim matrix acting by left multiplication, with provenance label."""

    matrix: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidSpecError(f"operator matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidSpecError("operator matrix has non-finite entries")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "AffiliatedOperator":
        return AffiliatedOperator(self.matrix.conj().T, label=f"{self.label}^*")


@dataclass(frozen=True)
class GibbsData:
    """Normalized Gibbs weights and the derived cyclic vector / density matrix."""

    spec: FockSpec
    weights: np.ndarray
    log_weights: np.ndarray
    log_z: float
    xi0: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)


def ladder(spec: FockSpec) -> tuple[AffiliatedOperator, AffiliatedOperator]:
    """Truncated annihilator and its exact conjugate transpose."""
    if spec.dim < 2:
        raise InvalidSpecError("ladder operators need dim >= 2")
    a = np.zeros((spec.dim, spec.dim), dtype=complex)
    for k in range(1, spec.dim):
        a[k - 1, k] = np.sqrt(k)
    return (
        AffiliatedOperator(a, label="annihilator"),
        AffiliatedOperator(a.conj().T, label="creator"),
    )


def number_operator(spec: FockSpec) -> AffiliatedOperator:
    return AffiliatedOperator(np.diag(np.arange(spec.dim, dtype=float)).astype(complex), label="number")


def hamiltonian_operator(spec: FockSpec) -> AffiliatedOperator:
    """g(N) as a diagonal matrix."""
    return AffiliatedOperator(np.diag(spec.g_values()).astype(complex), label="g(N)")


def gibbs_data(spec: FockSpec) -> GibbsData:
    """Log-domain Gibbs weights; the truncated sum is renormalized to exactly 1.

    The truncation renormalizes over the retained levels rather than using
    the analytic normalization of the untruncated model, so trace(rho) = 1
    holds exactly; see `linear_model_weights` for the analytic comparison.
    """
    g = spec.g_values()
    logits = -spec.beta * g
    log_z = float(logsumexp(logits))
    log_weights = logits - log_z
    weights = np.exp(log_weights)
    weights = weights / weights.sum()
    xi0 = np.diag(np.sqrt(weights)).astype(complex)
    rho = np.diag(weights).astype(complex)
    return GibbsData(spec=spec, weights=weights, log_weights=log_weights, log_z=log_z, xi0=xi0, rho=rho)


def linear_model_weights(beta: float, count: int) -> np.ndarray:
    """Analytic weights (1 - e^{-beta}) e^{-beta k} of the untruncated linear model."""
    k = np.arange(count)
    return (1.0 - np.exp(-beta)) * np.exp(-beta * k)


def ladder_power(spec: FockSpec, m: int) -> AffiliatedOperator:
    """m-th power of the creator; degenerates to zero when m >= dim."""
    if m < 1:
        raise InvalidSpecError(f"ladder power must be >= 1, got {m}")
    if m >= spec.dim:
        raise InvalidSpecError(f"ladder power {m} >= dim {spec.dim} is identically zero at truncation")
    _, adag = ladder(spec)
    mat = np.linalg.matrix_power(adag.matrix, m)
    return AffiliatedOperator(mat, label=f"ladder_power {m}")


def _falling_product(n: np.ndarray, m: int) -> np.ndarray:
    """n (n-1) ... (n-m+1)."""
    out = np.ones_like(n, dtype=float)
    for j in range(m):
        out = out * (n - j)
    return out


def _rising_product(n: np.ndarray, m: int) -> np.ndarray:
    """(n+1) (n+2) ... (n+m)."""
    out = np.ones_like(n, dtype=float)
    for j in range(1, m + 1):
        out = out * (n + j)
    return out


def product_identity_check(spec: FockSpec, m: int, tol: float | None = None) -> Report:
    """Check X_m* X_m = (N+1)..(N+m) on interior indices and X_m X_m* = N(N-1)..(N-m+1) everywhere.

    X_m is the m-th creator power.  The first identity fails by construction
    in the top-m corner (those indices are reported, not tested); the second
    has no boundary defect.
    """
    if m >= spec.dim:
        raise InvalidSpecError(f"ladder power {m} >= dim {spec.dim}")
    if tol is None:
        tol = 1e-12 * spec.dim**m
    x = ladder_power(spec, m).matrix
    n = np.arange(spec.dim, dtype=float)
    interior = np.arange(spec.dim - m)
    boundary = list(range(spec.dim - m, spec.dim))

    xsx = x.conj().T @ x  # equals A^m (A*)^m
    rising = np.diag(_rising_product(n, m)).astype(complex)
    res_interior = float(
        np.max(np.abs((xsx - rising)[np.ix_(interior, interior)])) if interior.size else 0.0
    )

    xxs = x @ x.conj().T  # equals (A*)^m A^m
    falling = np.diag(_falling_product(n, m)).astype(complex)
    res_full = float(np.max(np.abs(xxs - falling)))

    residual = max(res_interior, res_full)
    return Report(
        check="product_identity",
        claim="ladder products reduce to rising/falling factorials of the number operator",
        params={"dim": spec.dim, "m": m, "boundary_indices": boundary},
        residuals={"interior": res_interior, "full_side": res_full},
        tolerance=tol,
        status="pass" if residual <= tol else "fail",
    )
