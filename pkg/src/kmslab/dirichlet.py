"""Derivations, energy forms and their generators on Hilbert-Schmidt space.

For an operator X, weights mu, nu >= 0 and lambda = sqrt(mu/nu), the
building blocks are

    d_X^{mu,nu} xi = i (mu X xi - nu xi X)           (two-sided derivation)
    E_X^{mu,nu}[xi] = ||d_X^{mu,nu} xi||^2 + ||d_{X*}^{nu,mu} xi||^2
    H_X^lambda = |d_X^{lam,1/lam}|^2 + |d_{X*}^{1/lam,lam}|^2

and the same generator expands into six sandwich terms

    H xi = lam^2 (X*X xi + xi X*X) + lam^-2 (XX* xi + xi XX*)
           - 2 (X* xi X + X xi X*).

The two assemblies are kept as independent code paths; their agreement is
one of the certified checks.  Superoperators are stored structurally as
sums of sandwich terms L xi R and densified on demand with the
column-stacking convention vec(xi)[k d + j] = xi[j, k], under which the
sandwich densifies to kron(R^T, L).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidSpecError
from .fock import AffiliatedOperator
from .reporting import Report
from .standard_form import (
    StandardFormContext,
    as_matrix,
    hs_inner,
    hs_norm,
    jordan_decompose,
    modular_power,
    random_hermitian,
    s0_apply,
)


def vec(xi: np.ndarray) -> np.ndarray:
    return np.asarray(xi, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


class SuperOperator:
    """A sum of sandwich terms xi -> sum_i L_i xi R_i with a cached dense form.

    The dense cache is populated lazily behind a lock, so instances are safe
    for concurrent reads once constructed.
    """

    def __init__(self, terms, dim: int | None = None):
        terms = [(as_matrix(l), as_matrix(r)) for l, r in terms]
        if not terms and dim is None:
            raise InvalidSpecError("empty superoperator needs an explicit dimension")
        self.dim = dim if dim is not None else terms[0][0].shape[0]
        for l, r in terms:
            if l.shape != (self.dim, self.dim) or r.shape != (self.dim, self.dim):
                raise DimensionMismatchError("sandwich factors must share the ambient dimension")
        self.terms = terms
        self._dense = None
        self._lock = threading.Lock()

    @classmethod
    def identity(cls, dim: int) -> "SuperOperator":
        eye = np.eye(dim, dtype=complex)
        return cls([(eye, eye)])

    @classmethod
    def left(cls, l) -> "SuperOperator":
        l = as_matrix(l)
        return cls([(l, np.eye(l.shape[0], dtype=complex))])

    @classmethod
    def right(cls, r) -> "SuperOperator":
        r = as_matrix(r)
        return cls([(np.eye(r.shape[0], dtype=complex), r)])

    @classmethod
    def sandwich(cls, l, r) -> "SuperOperator":
        return cls([(as_matrix(l), as_matrix(r))])

    def apply(self, xi) -> np.ndarray:
        xi = as_matrix(xi)
        out = np.zeros_like(xi)
        for l, r in self.terms:
            out = out + l @ xi @ r
        return out

    __call__ = apply

    def dense(self) -> np.ndarray:
        with self._lock:
            if self._dense is None:
                acc = np.zeros((self.dim**2, self.dim**2), dtype=complex)
                for l, r in self.terms:
                    acc += np.kron(r.T, l)
                self._dense = acc
            return self._dense

    def adjoint(self) -> "SuperOperator":
        """Hilbert-Schmidt adjoint: (L xi R)* pairing gives L* xi R*."""
        return SuperOperator([(l.conj().T, r.conj().T) for l, r in self.terms], dim=self.dim)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """self after other."""
        terms = [(l2 @ l1, r1 @ r2) for l2, r2 in self.terms for l1, r1 in other.terms]
        return SuperOperator(terms, dim=self.dim)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        return SuperOperator(self.terms + other.terms, dim=self.dim)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "SuperOperator":
        return SuperOperator([(scalar * l, r) for l, r in self.terms], dim=self.dim)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.dense()))

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        d = self.dense()
        scale = max(1.0, float(np.linalg.norm(d)))
        return float(np.linalg.norm(d - d.conj().T)) <= tol * scale


def derivation(x, mu: float, nu: float) -> SuperOperator:
    """d_X^{mu,nu} xi = i (mu X xi - nu xi X)."""
    if mu < 0 or nu < 0:
        raise InvalidSpecError("derivation weights must be nonnegative")
    x = as_matrix(x)
    dim = x.shape[0]
    eye = np.eye(dim, dtype=complex)
    return SuperOperator([(1j * mu * x, eye), (eye, -1j * nu * x)])


def derivation_apply(x, mu: float, nu: float, xi) -> np.ndarray:
    x = as_matrix(x)
    xi = as_matrix(xi)
    return 1j * (mu * x @ xi - nu * xi @ x)


def form_value(x, mu: float, nu: float, xi) -> float:
    """E_X^{mu,nu}[xi] = ||d_X^{mu,nu} xi||^2 + ||d_{X*}^{nu,mu} xi||^2 >= 0."""
    x = as_matrix(x)
    d1 = derivation_apply(x, mu, nu, xi)
    d2 = derivation_apply(x.conj().T, nu, mu, xi)
    return float(np.linalg.norm(d1) ** 2 + np.linalg.norm(d2) ** 2)


def form_cross_term(x, mu: float, nu: float, eta, zeta) -> complex:
    """Polarized form E(eta | zeta) evaluated through the derivations."""
    x = as_matrix(x)
    xs = x.conj().T
    return hs_inner(derivation_apply(x, mu, nu, eta), derivation_apply(x, mu, nu, zeta)) + hs_inner(
        derivation_apply(xs, nu, mu, eta), derivation_apply(xs, nu, mu, zeta)
    )


def generator_direct(x, lam: float) -> SuperOperator:
    """H as d* d + d'* d' with d = d_X^{lam,1/lam}, d' = d_{X*}^{1/lam,lam}."""
    if not lam > 0:
        raise InvalidSpecError("lambda must be positive")
    x = as_matrix(x)
    d = derivation(x, lam, 1.0 / lam)
    dprime = derivation(x.conj().T, 1.0 / lam, lam)
    return d.adjoint().compose(d) + dprime.adjoint().compose(dprime)


def generator_expanded(x, lam: float) -> SuperOperator:
    """The same generator written out as six sandwich terms."""
    if not lam > 0:
        raise InvalidSpecError("lambda must be positive")
    x = as_matrix(x)
    dim = x.shape[0]
    eye = np.eye(dim, dtype=complex)
    xs = x.conj().T
    xsx = xs @ x
    xxs = x @ xs
    lam2 = lam**2
    return SuperOperator(
        [
            (lam2 * xsx, eye),
            (eye, lam2 * xsx),
            (xxs / lam2, eye),
            (eye, xxs / lam2),
            (-2.0 * xs, x),
            (-2.0 * x, xs),
        ]
    )


def unit_weight_square_sum(x) -> SuperOperator:
    """|d_X^{1,1}|^2 + |d_{X*}^{1,1}|^2, assembled by derivation composition."""
    x = as_matrix(x)
    d = derivation(x, 1.0, 1.0)
    dprime = derivation(x.conj().T, 1.0, 1.0)
    return d.adjoint().compose(d) + dprime.adjoint().compose(dprime)


def q_operator(x, lam: float) -> AffiliatedOperator:
    """(lam^2 - 1) X*X + (lam^-2 - 1) XX*; Hermitian comparison operator."""
    if not lam > 0:
        raise InvalidSpecError("lambda must be positive")
    x = as_matrix(x)
    xs = x.conj().T
    q = (lam**2 - 1.0) * (xs @ x) + (lam**-2 - 1.0) * (x @ xs)
    return AffiliatedOperator(q, label=f"comparison lam={lam}")


def q_operator_commutator_form(x, lam: float) -> np.ndarray:
    """Equivalent form (lam - 1/lam)^2 X*X + (lam^-2 - 1) [X, X*]."""
    x = as_matrix(x)
    xs = x.conj().T
    comm = x @ xs - xs @ x
    return (lam - 1.0 / lam) ** 2 * (xs @ x) + (lam**-2 - 1.0) * comm


@dataclass
class DirichletGenerator:
    """Bundle of an operator X, weights, context and the assembled generator."""

    x: AffiliatedOperator
    mu: float
    nu: float
    ctx: StandardFormContext
    h: SuperOperator = field(repr=False, default=None)

    def __post_init__(self):
        if not (self.mu > 0 and self.nu > 0):
            raise InvalidSpecError("mu and nu must be positive")
        if self.x.dim != self.ctx.dim:
            raise DimensionMismatchError("operator and context dimensions differ")
        if self.h is None:
            # mu nu scaling: E^{mu,nu} = mu nu E^{lam,1/lam}
            self.h = (self.mu * self.nu) * generator_expanded(self.x.matrix, self.lam)

    @classmethod
    def build(
        cls, x: AffiliatedOperator, ctx: StandardFormContext, lam: float | None = None,
        mu: float | None = None, nu: float | None = None,
    ) -> "DirichletGenerator":
        if lam is not None:
            if mu is not None or nu is not None:
                raise InvalidSpecError("give either lam or (mu, nu), not both")
            mu, nu = lam, 1.0 / lam
        if mu is None or nu is None:
            raise InvalidSpecError("weights are required")
        return cls(x=x, mu=mu, nu=nu, ctx=ctx)

    @property
    def lam(self) -> float:
        return float(np.sqrt(self.mu / self.nu))

    def form_value(self, xi) -> float:
        return form_value(self.x.matrix, self.mu, self.nu, xi)


def hermitian_eigs(dense: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(0.5 * (dense + dense.conj().T))


def spectral_norm(dense: np.ndarray) -> float:
    return float(np.max(np.abs(hermitian_eigs(dense))))


def generator_identity_check(x, lam: float, tol: float = 1e-11) -> Report:
    """Dense agreement of the composed-derivation and six-term assemblies."""
    direct = generator_direct(x, lam).dense()
    expanded = generator_expanded(x, lam).dense()
    scale = max(np.linalg.norm(expanded), 1e-30)
    residual = float(np.linalg.norm(direct - expanded) / scale)
    return Report(
        check="generator_identity",
        claim="composed-derivation generator equals the six-term sandwich expansion",
        params={"lam": lam},
        residuals={"relative": residual},
        tolerance=tol,
        status="pass" if residual <= tol else "fail",
    )


def coercivity_identity_check(gen: DirichletGenerator, tol: float = 1e-11) -> Report:
    """H minus the unit-weight squares equals the weighted sandwich remainder.

    Left side assembled by derivation composition, right side written out
    directly, so the two sides are independent.
    """
    lam = gen.lam
    x = gen.x.matrix
    lhs = generator_direct(x, lam).dense() - unit_weight_square_sum(x).dense()
    xs = x.conj().T
    xsx, xxs = xs @ x, x @ xs
    rem = (lam**2 - 1.0) * (SuperOperator.left(xsx) + SuperOperator.right(xsx)) + (
        lam**-2 - 1.0
    ) * (SuperOperator.left(xxs) + SuperOperator.right(xxs))
    rhs = rem.dense()
    scale = max(np.linalg.norm(generator_expanded(x, lam).dense()), 1e-30)
    residual = float(np.linalg.norm(lhs - rhs) / scale)
    return Report(
        check="coercivity_identity",
        claim="generator minus unit-weight squares equals the weighted comparison remainder",
        params={"lam": lam},
        residuals={"relative": residual},
        tolerance=tol,
        status="pass" if residual <= tol else "fail",
    )


def coercivity_bound_check(gen: DirichletGenerator, eps: float, delta: float, tol: float = 1e-9) -> Report:
    """min eig of H - [(lam^2-eps^2) X*X + (lam^2-eps^-2) j(X*X) + ...] >= -tol ||H||."""
    if not (eps > 0 and delta > 0):
        raise InvalidSpecError("eps and delta must be positive")
    lam = gen.lam
    x = gen.x.matrix
    xs = x.conj().T
    xsx, xxs = xs @ x, x @ xs
    comparison = (
        (lam**2 - eps**2) * SuperOperator.left(xsx)
        + (lam**2 - eps**-2) * SuperOperator.right(xsx)
        + (lam**-2 - delta**2) * SuperOperator.left(xxs)
        + (lam**-2 - delta**-2) * SuperOperator.right(xxs)
    )
    h = generator_expanded(x, lam).dense()
    diff = h - comparison.dense()
    floor = float(hermitian_eigs(diff).min())
    scale = max(spectral_norm(h), 1e-30)
    status = "pass" if floor >= -tol * scale else "fail"
    return Report(
        check="coercivity_bound",
        claim="generator dominates the eps,delta-weighted comparison superoperator",
        params={"lam": lam, "eps": eps, "delta": delta},
        residuals={"eig_floor_over_norm": floor / scale},
        tolerance=tol,
        status=status,
    )


def eigenvalue_domination_check(gen: DirichletGenerator, tol: float = 1e-9) -> Report:
    """Sorted eigenvalues of Q + j(Q) are dominated indexwise by those of H."""
    lam = gen.lam
    x = gen.x.matrix
    q = q_operator(x, lam).matrix
    qjq = (SuperOperator.left(q) + SuperOperator.right(q)).dense()
    h = generator_expanded(x, lam).dense()
    eq = hermitian_eigs(qjq)
    eh = hermitian_eigs(h)
    scale = max(spectral_norm(h), 1e-30)
    worst = float(np.max(eq - eh))
    status = "pass" if worst <= tol * scale else "fail"
    return Report(
        check="eigenvalue_domination",
        claim="indexwise min-max domination of comparison eigenvalues by generator eigenvalues",
        params={"lam": lam},
        residuals={"worst_violation_over_norm": worst / scale},
        tolerance=tol,
        status=status,
    )


def beurling_deny_check(gen: DirichletGenerator, rng: np.random.Generator, n_samples: int = 100,
                        tol: float = 1e-10) -> Report:
    """First contraction property: E(xi_+ | xi_-) <= 0 on random Hermitian vectors."""
    worst = -np.inf
    for _ in range(n_samples):
        xi = random_hermitian(gen.ctx.dim, rng)
        plus, minus, _ = jordan_decompose(xi)
        value = form_cross_term(gen.x.matrix, gen.mu, gen.nu, plus, minus)
        worst = max(worst, float(value.real))
    status = "pass" if worst <= tol else "fail"
    return Report(
        check="beurling_deny",
        claim="form cross-term on orthogonal positive parts is non-positive",
        params={"n_samples": n_samples},
        residuals={"worst_cross_term": worst},
        tolerance=tol,
        status=status,
    )


def conservativeness_check(x, mu: float, nu: float, ctx: StandardFormContext,
                           tol: float = 1e-10) -> Report:
    """Both sides of the equivalence: zero form energy at xi0 vs the eigenvector conditions.

    (a) E[xi0] <= tol;
    (b) ||Delta^{1/2} X xi0 - (mu/nu) X xi0|| <= tol * ||X xi0||  and
        ||S0(X xi0) - X* xi0|| <= tol * ||X* xi0||.
    The report passes when both sides hold; it also records whether the two
    sides agree, which is the content of the equivalence.
    """
    x = as_matrix(x)
    xi0 = ctx.xi0
    energy = form_value(x, mu, nu, xi0)
    side_a = energy <= tol

    xxi0 = x @ xi0
    scale = max(hs_norm(xxi0), 1e-30)
    eig_res = hs_norm(modular_power(0.5, xxi0, ctx) - (mu / nu) * xxi0) / scale
    xs_xi0 = x.conj().T @ xi0
    s0_res = hs_norm(s0_apply(xxi0, ctx) - xs_xi0) / max(hs_norm(xs_xi0), 1e-30)
    side_b = (eig_res <= tol) and (s0_res <= tol)

    status = "pass" if (side_a and side_b) else "fail"
    return Report(
        check="conservativeness",
        claim="zero form energy at the cyclic vector iff X xi0 is a half-power modular "
        "eigenvector with eigenvalue mu/nu and S0(X xi0) = X* xi0",
        params={"mu": mu, "nu": nu, "sides_agree": bool(side_a == side_b)},
        residuals={"form_energy": energy, "eigenvector_rel": float(eig_res), "s0_rel": float(s0_res)},
        tolerance=tol,
        status=status,
        detail="" if side_a == side_b else "equivalence sides disagree",
    )


def modular_eigenvalue_fit(x, ctx: StandardFormContext) -> tuple[float, float]:
    """Best quarter-power eigenvalue for X xi0 and its relative residual."""
    x = as_matrix(x)
    xxi0 = x @ ctx.xi0
    norm2 = hs_inner(xxi0, xxi0).real
    if norm2 <= 0:
        raise InvalidSpecError("X xi0 vanishes; no eigenvalue to fit")
    dxi = modular_power(0.25, xxi0, ctx)
    lam = hs_inner(xxi0, dxi).real / norm2
    residual = hs_norm(dxi - lam * xxi0) / np.sqrt(norm2)
    return float(lam), float(residual)


def intertwining_check(x, lam: float, ctx: StandardFormContext, rng: np.random.Generator,
                       n_samples: int = 20, tol: float = 1e-10,
                       precondition_tol: float = 1e-8) -> Report:
    """Derivation/embedding intertwining plus the left/right factor identities.

    Requires X xi0 to be a quarter-power modular eigenvector with eigenvalue
    lam; otherwise the hypotheses are unmet and the report is not applicable.
    For random y the three residuals are
        || d_X^lam(i0(y)) - i0(i [X, y]) ||,
        || Delta^{1/4}(X y xi0) - lam X i0(y) ||,
        || Delta^{1/4}(y X xi0) - lam^{-1} i0(y) X ||.
    """
    from .standard_form import embed  # local import keeps module tops acyclic

    x = as_matrix(x)
    xxi0 = x @ ctx.xi0
    eig_res = hs_norm(modular_power(0.25, xxi0, ctx) - lam * xxi0) / max(hs_norm(xxi0), 1e-30)
    if eig_res > precondition_tol:
        return Report(
            check="intertwining",
            claim="derivation intertwines the symmetric embedding with i[X, .]; "
            "left/right factors act as lam X and lam^{-1} (right X)",
            params={"lam": lam},
            residuals={"eigenvector_rel": float(eig_res)},
            tolerance=tol,
            status="not_applicable",
            detail="X xi0 is not a quarter-power modular eigenvector; hypotheses unmet",
        )
    worst = {"intertwining": 0.0, "left_factor": 0.0, "right_factor": 0.0}
    xi0 = ctx.xi0
    for _ in range(n_samples):
        y = rng.standard_normal((ctx.dim, ctx.dim)) + 1j * rng.standard_normal((ctx.dim, ctx.dim))
        y /= np.linalg.norm(y)
        i0y = embed(y, ctx)
        lhs = derivation_apply(x, lam, 1.0 / lam, i0y)
        rhs = embed(1j * (x @ y - y @ x), ctx)
        worst["intertwining"] = max(worst["intertwining"], hs_norm(lhs - rhs))
        left = modular_power(0.25, x @ y @ xi0, ctx) - lam * (x @ i0y)
        worst["left_factor"] = max(worst["left_factor"], hs_norm(left))
        right = modular_power(0.25, y @ x @ xi0, ctx) - (1.0 / lam) * (i0y @ x)
        worst["right_factor"] = max(worst["right_factor"], hs_norm(right))
    residual = max(worst.values())
    return Report(
        check="intertwining",
        claim="derivation intertwines the symmetric embedding with i[X, .]; "
        "left/right factors act as lam X and lam^{-1} (right X)",
        params={"lam": lam, "n_samples": n_samples},
        residuals={k: float(v) for k, v in worst.items()},
        tolerance=tol,
        status="pass" if residual <= tol else "fail",
    )
