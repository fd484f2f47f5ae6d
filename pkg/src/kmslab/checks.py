"""Check registry: named, parametrized wrappers around the module-level certificates.

Each check consumes a shared RunState (spec, standard-form context, the
scenario operator X with its weight lambda, lazily built generator and
semigroup handle), a params dict, an optional tolerance override and a
dedicated RNG, and returns one Report.  The registry powers the scenario
runner, the service catalog and the CLI `describe` command; the claim
strings are catalogued in docs/claims.md.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import abelian as abelian_mod
from . import deformation as deformation_mod
from . import dirichlet as dirichlet_mod
from . import fock as fock_mod
from . import semigroup as semigroup_mod
from . import standard_form as sf
from .errors import ConfigError, InvalidSpecError
from .fock import AffiliatedOperator, FockSpec, HamiltonianProfile
from .reporting import Report
from .schemas import ScenarioConfig
from .standard_form import StandardFormContext

AUTO_LAMBDA_TOL = 1e-8


@dataclass
class RunState:
    """Everything a check needs, built once per scenario."""

    spec: FockSpec
    ctx: StandardFormContext
    x: AffiliatedOperator | None = None
    lam: float | None = None
    f: deformation_mod.FunctionSpec | None = None
    quad: deformation_mod.QuadratureSpec | None = None
    ladder_m: int | None = None
    times: list[float] = field(default_factory=lambda: [1.0])
    samples: int = 100
    abelian: abelian_mod.AtomicSpace | None = None
    _generator: dirichlet_mod.DirichletGenerator | None = None
    _handle: semigroup_mod.SemigroupHandle | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def require_x(self):
        if self.x is None or self.lam is None:
            raise ConfigError("this check needs an operator X and a weight lambda")
        return self.x, self.lam

    @property
    def generator(self) -> dirichlet_mod.DirichletGenerator:
        with self._lock:
            if self._generator is None:
                x, lam = self.require_x()
                self._generator = dirichlet_mod.DirichletGenerator.build(x, self.ctx, lam=lam)
            return self._generator

    @property
    def handle(self) -> semigroup_mod.SemigroupHandle:
        with self._lock:
            if self._handle is None:
                x, lam = self.require_x()
                gen = self._generator or dirichlet_mod.DirichletGenerator.build(x, self.ctx, lam=lam)
                self._generator = gen
                self._handle = semigroup_mod.SemigroupHandle.from_generator(gen)
            return self._handle


def _load_matrix_file(path: str, dim: int) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    real = np.asarray(data["real"], dtype=float)
    imag = np.asarray(data.get("imag", np.zeros_like(real)), dtype=float)
    m = real + 1j * imag
    if m.shape != (dim, dim):
        raise ConfigError(f"matrix in {path} has shape {m.shape}, expected ({dim},{dim})")
    return m


def build_state(cfg: ScenarioConfig) -> RunState:
    spec = FockSpec(
        dim=cfg.fock.dim,
        profile=HamiltonianProfile.from_config(cfg.fock.g.model_dump(exclude_none=True)),
        beta=cfg.fock.beta,
    )
    ctx = StandardFormContext.from_spec(spec)
    state = RunState(spec=spec, ctx=ctx, times=list(cfg.times), samples=cfg.samples)

    if cfg.abelian is not None:
        state.abelian = abelian_mod.AtomicSpace.from_config(cfg.abelian.model_dump(exclude_none=True))

    if cfg.x is not None:
        xc = cfg.x
        if xc.kind == "ladder_power":
            state.x = fock_mod.ladder_power(spec, xc.m)
            state.ladder_m = xc.m
        elif xc.kind == "deformed":
            if xc.f is None:
                raise ConfigError("deformed operator needs a function spec")
            state.f = deformation_mod.FunctionSpec.from_config(xc.f.model_dump(exclude_none=True))
            if xc.quadrature is not None:
                state.quad = deformation_mod.QuadratureSpec(**xc.quadrature.model_dump())
            state.x = deformation_mod.deformed_operator(state.f, spec, state.quad)
        else:
            if xc.path is None:
                raise ConfigError("matrix_file operator needs a path")
            state.x = AffiliatedOperator(_load_matrix_file(xc.path, spec.dim), label="custom")
        state.lam = _resolve_lambda(cfg, state)
    return state


def _resolve_lambda(cfg: ScenarioConfig, state: RunState) -> float:
    lam_cfg = cfg.lam
    if isinstance(lam_cfg, (int, float)):
        if lam_cfg <= 0:
            raise ConfigError("lambda must be positive")
        return float(lam_cfg)
    factor = 1.0
    if not isinstance(lam_cfg, str):  # LambdaScaled
        factor = lam_cfg.auto_times
    lam, residual = dirichlet_mod.modular_eigenvalue_fit(state.x, state.ctx)
    if residual > AUTO_LAMBDA_TOL:
        raise ConfigError(
            f"auto lambda needs X xi0 to be a quarter-power modular eigenvector; "
            f"relative residual {residual:.3g} exceeds {AUTO_LAMBDA_TOL}"
        )
    return lam * factor


# --- individual check runners -------------------------------------------------

def _tol(params_tol, default):
    return default if params_tol is None else params_tol


def check_standard_form_consistency(state: RunState, params, tol, rng) -> Report:
    ctx = state.ctx
    dim = ctx.dim
    n = int(params.get("samples", 20))
    worst = {"embed_roundtrip": 0.0, "s0_vs_direct": 0.0, "power_roundtrip": 0.0,
             "unitary_norm": 0.0, "cone_embedding": 0.0}
    lw = ctx.log_weights
    for _ in range(n):
        y = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        y /= np.linalg.norm(y)
        worst["embed_roundtrip"] = max(
            worst["embed_roundtrip"], sf.hs_norm(sf.unembed(sf.embed(y, ctx), ctx) - y)
        )
        direct = np.exp(-0.5 * lw)[:, None] * y.conj().T * np.exp(0.5 * lw)[None, :]
        worst["s0_vs_direct"] = max(worst["s0_vs_direct"], sf.hs_norm(sf.s0_apply(y, ctx) - direct))
        s = rng.uniform(-1.0, 1.0)
        worst["power_roundtrip"] = max(
            worst["power_roundtrip"],
            sf.hs_norm(sf.modular_power(-s, sf.modular_power(s, y, ctx), ctx) - y),
        )
        t = rng.uniform(-10.0, 10.0)
        worst["unitary_norm"] = max(
            worst["unitary_norm"], abs(sf.hs_norm(sf.modular_unitary(t, y, ctx)) - sf.hs_norm(y))
        )
        p = sf.random_psd(dim, rng)
        emb = sf.embed(p, ctx)
        worst["cone_embedding"] = max(
            worst["cone_embedding"], max(0.0, -float(np.linalg.eigvalsh(0.5 * (emb + emb.conj().T)).min()))
        )
    tol = _tol(tol, 1e-10)
    residual = max(worst.values())
    return Report(
        check="standard_form_consistency", claim="plumbing",
        params={"samples": n}, residuals={k: float(v) for k, v in worst.items()},
        tolerance=tol, status="pass" if residual <= tol else "fail",
    )


def check_product_identity(state: RunState, params, tol, rng) -> Report:
    m = int(params.get("m", state.ladder_m or 1))
    return fock_mod.product_identity_check(state.spec, m, tol=tol)


def check_modular_eigenvector(state: RunState, params, tol, rng) -> Report:
    x, lam = state.require_x()
    lam = float(params.get("lam", lam))
    return deformation_mod.modular_eigenvector_check(x.matrix, state.ctx, lam, tol=_tol(tol, 1e-9))


def check_conservativeness(state: RunState, params, tol, rng) -> Report:
    x, lam = state.require_x()
    return dirichlet_mod.conservativeness_check(x.matrix, lam, 1.0 / lam, state.ctx, tol=_tol(tol, 1e-10))


def check_generator_identity(state: RunState, params, tol, rng) -> Report:
    x, lam = state.require_x()
    return dirichlet_mod.generator_identity_check(x.matrix, lam, tol=_tol(tol, 1e-11))


def check_coercivity_identity(state: RunState, params, tol, rng) -> Report:
    return dirichlet_mod.coercivity_identity_check(state.generator, tol=_tol(tol, 1e-11))


def check_coercivity_bound(state: RunState, params, tol, rng) -> Report:
    eps = float(params.get("eps", 1.0))
    delta = float(params.get("delta", 1.0))
    return dirichlet_mod.coercivity_bound_check(state.generator, eps, delta, tol=_tol(tol, 1e-9))


def check_eigenvalue_domination(state: RunState, params, tol, rng) -> Report:
    return dirichlet_mod.eigenvalue_domination_check(state.generator, tol=_tol(tol, 1e-9))


def check_beurling_deny(state: RunState, params, tol, rng) -> Report:
    n = int(params.get("samples", state.samples))
    return dirichlet_mod.beurling_deny_check(state.generator, rng, n_samples=n, tol=_tol(tol, 1e-10))


def check_intertwining(state: RunState, params, tol, rng) -> Report:
    x, lam = state.require_x()
    n = int(params.get("samples", 20))
    return dirichlet_mod.intertwining_check(x.matrix, lam, state.ctx, rng, n_samples=n, tol=_tol(tol, 1e-10))


def check_semigroup_law(state: RunState, params, tol, rng) -> Report:
    handle = state.handle
    tol = _tol(tol, 1e-10)
    dim = state.ctx.dim
    worst = {"law": 0.0, "identity_at_zero": 0.0, "contractivity": 0.0}
    for _ in range(int(params.get("samples", 10))):
        xi = sf.random_hermitian(dim, rng)
        s, t = rng.uniform(0.05, 2.0, size=2)
        worst["law"] = max(
            worst["law"],
            sf.hs_norm(handle.evolve(s + t, xi) - handle.evolve(s, handle.evolve(t, xi))),
        )
        worst["identity_at_zero"] = max(worst["identity_at_zero"], sf.hs_norm(handle.evolve(0.0, xi) - xi))
        worst["contractivity"] = max(
            worst["contractivity"], max(0.0, sf.hs_norm(handle.evolve(t, xi)) - sf.hs_norm(xi))
        )
    residual = max(worst.values())
    return Report(
        check="semigroup_law", claim="plumbing",
        params={"samples": int(params.get("samples", 10))},
        residuals={k: float(v) for k, v in worst.items()},
        tolerance=tol, status="pass" if residual <= tol else "fail",
    )


def _merge_time_reports(check: str, claim: str, per_time: dict[float, Report], tol) -> Report:
    residuals = {}
    status = "pass"
    for t, rep in per_time.items():
        for key, value in rep.residuals.items():
            residuals[f"t={t}:{key}"] = value
        if rep.status == "fail":
            status = "fail"
    return Report(check=check, claim=claim, params={"times": list(per_time)},
                  residuals=residuals, tolerance=tol, status=status)


def check_markov(state: RunState, params, tol, rng) -> Report:
    tol = _tol(tol, 1e-9)
    n = int(params.get("samples", state.samples))
    times = params.get("times", state.times)
    per_time = {
        float(t): semigroup_mod.markov_check(state.handle, state.ctx, float(t), rng, n_samples=n, tol=tol)
        for t in times
    }
    merged = _merge_time_reports(
        "markov", "evolution preserves the positive cone and the order interval [0, xi0]", per_time, tol
    )
    merged.params["samples"] = n
    return merged


def check_complete_positivity(state: RunState, params, tol, rng) -> Report:
    tol = _tol(tol, 1e-9)
    times = params.get("times", state.times)
    per_time = {float(t): semigroup_mod.cp_check(state.handle, float(t), tol=tol) for t in times}
    return _merge_time_reports(
        "complete_positivity", "the Choi matrix of the evolution map is positive semidefinite",
        per_time, tol,
    )


def _superbounded_handle(state: RunState, params) -> semigroup_mod.SemigroupHandle:
    """Either the scenario generator's semigroup or the two-sided g(N) reference."""
    if params.get("hamiltonian") == "g":
        return semigroup_mod.SemigroupHandle.from_hamiltonian(
            fock_mod.hamiltonian_operator(state.spec), state.ctx
        )
    return state.handle


def check_superbounded(state: RunState, params, tol, rng) -> Report:
    t = float(params.get("t", max(state.times)))
    n = int(params.get("samples", state.samples))
    rep = semigroup_mod.superbounded_check(
        _superbounded_handle(state, params), state.ctx, t, rng, n_samples=n, slack=_tol(tol, 1e-8)
    )
    rep.params["hamiltonian"] = params.get("hamiltonian", "generator")
    return rep


def check_superbounded_scan(state: RunState, params, tol, rng) -> Report:
    grid = params.get("t_grid")
    if grid is None:
        grid = [round(0.05 * k, 10) for k in range(1, 21)]
    n = int(params.get("samples", state.samples))
    rep = semigroup_mod.superbounded_threshold_scan(
        _superbounded_handle(state, params), state.ctx, grid, rng, n_samples=n, slack=_tol(tol, 1e-8)
    )
    rep.params["hamiltonian"] = params.get("hamiltonian", "generator")
    return rep


def check_counting_functions(state: RunState, params, tol, rng) -> Report:
    h0 = fock_mod.hamiltonian_operator(state.spec).matrix
    return semigroup_mod.counting_bound_check(h0, tol=_tol(tol, 1e-10))


def ou_comparison_profile(spec: FockSpec, m: int, lam: float) -> np.ndarray:
    """Diagonal q(k) = (lam^2-1)(k+1)..(k+m) + (lam^-2-1) k(k-1)..(k-m+1) of the untruncated model."""
    n = np.arange(spec.dim, dtype=float)
    return (lam**2 - 1.0) * fock_mod._rising_product(n, m) + (lam**-2 - 1.0) * fock_mod._falling_product(n, m)


def check_heat_trace_bound(state: RunState, params, tol, rng) -> Report:
    x, lam = state.require_x()
    if state.ladder_m is None:
        return Report(check="heat_trace_bound",
                      claim="heat trace is bounded by the squared comparison heat trace",
                      status="not_applicable", detail="needs a ladder-power operator")
    t = float(params.get("t", 1.0))
    trace = semigroup_mod.heat_trace(state.handle, t)
    q = ou_comparison_profile(state.spec, state.ladder_m, lam)
    bound = float(np.sum(np.exp(-t * q)) ** 2)
    slack = bound - trace
    tol = _tol(tol, 1e-12)
    return Report(
        check="heat_trace_bound",
        claim="heat trace is bounded by the squared comparison heat trace",
        params={"t": t, "m": state.ladder_m},
        residuals={"heat_trace": trace, "bound": bound, "slack": slack},
        tolerance=tol,
        status="pass" if trace <= bound * (1.0 + tol) else "fail",
    )


def check_q_coefficient(state: RunState, params, tol, rng) -> Report:
    x, lam = state.require_x()
    if state.ladder_m is None or state.spec.profile.kind != "linear":
        return Report(check="q_coefficient",
                      claim="leading diagonal growth of the comparison operator is (lam - 1/lam)^2",
                      status="not_applicable", detail="needs a ladder power under the linear profile")
    m, beta = state.ladder_m, state.spec.beta
    q = np.real(np.diag(dirichlet_mod.q_operator(x.matrix, lam).matrix))
    interior = state.spec.dim - m
    # leading coefficient extracted by an m-th finite difference over interior indices
    diffs = q[:interior].copy()
    for _ in range(m):
        diffs = np.diff(diffs)
    measured = float(diffs.mean()) / float(math.factorial(m)) if diffs.size else float("nan")
    expected = (2.0 * np.sinh(m * beta / 4.0)) ** 2
    algebraic = (lam - 1.0 / lam) ** 2
    tol = _tol(tol, 1e-10)
    residual = max(abs(measured - expected), abs(algebraic - expected))
    return Report(
        check="q_coefficient",
        claim="leading diagonal growth of the comparison operator is (lam - 1/lam)^2",
        params={"m": m, "beta": beta},
        residuals={"measured_minus_expected": measured - expected,
                   "algebraic_minus_expected": algebraic - expected},
        tolerance=tol,
        status="pass" if residual <= tol else "fail",
    )


def check_ccr_deformed(state: RunState, params, tol, rng) -> Report:
    if state.f is None:
        return Report(check="ccr_deformed",
                      claim="deformed ladder products follow the damped number-operator profile",
                      status="not_applicable", detail="needs a deformed operator")
    x, _ = state.require_x()
    return deformation_mod.ccr_relations_check(x.matrix, state.f, state.spec, tol=_tol(tol, 1e-12),
                                               quad=state.quad)


def check_hyperbolic_commutator(state: RunState, params, tol, rng) -> Report:
    return deformation_mod.hyperbolic_commutator_check(state.spec, tol=_tol(tol, 1e-12))


def check_deformation_cross(state: RunState, params, tol, rng) -> Report:
    if state.f is None:
        return Report(check="deformation_cross_check",
                      claim="time-domain quadrature agrees with the frequency-domain functional calculus",
                      status="not_applicable", detail="needs a deformed operator")
    return deformation_mod.cross_construction_check(
        state.f, state.spec, quad=state.quad, tol=_tol(tol, 1e-6),
        n_transform_samples=int(params.get("transform_samples", 20)), rng=rng,
    )


def check_generator_spectrum(state: RunState, params, tol, rng) -> Report:
    spectrum = state.handle.spectrum
    return Report(
        check="generator_spectrum", claim="plumbing",
        params={"dim": state.ctx.dim}, residuals={"min_eigenvalue": float(spectrum.eigenvalues.min())},
        tolerance=None, status="pass",
        spectra={"generator": spectrum.eigenvalues.copy()},
    )


def check_abelian_supercontractivity(state: RunState, params, tol, rng) -> Report:
    if state.abelian is None:
        return Report(check="abelian_supercontractivity",
                      claim="sup-norm contraction of the multiplication semigroup from the weighted "
                      "L2 norm holds exactly from the computed threshold onward",
                      status="not_applicable", detail="scenario has no atomic-space section")
    space = state.abelian
    t0 = abelian_mod.threshold_t0(space)
    t = params.get("t")
    if t is None:
        if not np.isfinite(t0):
            return Report(check="abelian_supercontractivity",
                          claim="sup-norm contraction of the multiplication semigroup from the weighted "
                          "L2 norm holds exactly from the computed threshold onward",
                          params={"threshold": t0}, status="not_applicable",
                          detail="threshold is infinite; no finite time to test")
        t = t0
    rep = abelian_mod.supercontractive_check(space, float(t), rng=rng,
                                             n_samples=int(params.get("samples", 20)))
    rep.params["per_point_slack"] = (float(t) * space.V - 0.5 * (space.U + space.h)).tolist()
    return rep


@dataclass(frozen=True)
class CheckDef:
    id: str
    claim: str
    description: str
    runner: Callable
    params: tuple[str, ...] = ()
    needs_x: bool = False


REGISTRY: dict[str, CheckDef] = {
    c.id: c
    for c in [
        CheckDef("standard_form_consistency", "plumbing",
                 "Embedding round-trips, conjugation/power identities and cone preservation.",
                 check_standard_form_consistency, ("samples",)),
        CheckDef("product_identity",
                 "ladder products reduce to rising/falling factorials of the number operator",
                 "Interior-index factorial identities for the m-th ladder power.",
                 check_product_identity, ("m",)),
        CheckDef("modular_eigenvector",
                 "X xi0 is a quarter-power modular eigenvector with the declared eigenvalue",
                 "Relative residual of the quarter-power eigenvalue relation.",
                 check_modular_eigenvector, ("lam",), needs_x=True),
        CheckDef("conservativeness",
                 "zero form energy at the cyclic vector iff X xi0 is a half-power modular "
                 "eigenvector with eigenvalue mu/nu and S0(X xi0) = X* xi0",
                 "Evaluates both sides of the equivalence and their agreement.",
                 check_conservativeness, (), needs_x=True),
        CheckDef("generator_identity",
                 "composed-derivation generator equals the six-term sandwich expansion",
                 "Dense-realization agreement of the two independent assemblies.",
                 check_generator_identity, (), needs_x=True),
        CheckDef("coercivity_identity",
                 "generator minus unit-weight squares equals the weighted comparison remainder",
                 "Exact remainder identity behind the coercivity bounds.",
                 check_coercivity_identity, (), needs_x=True),
        CheckDef("coercivity_bound",
                 "generator dominates the eps,delta-weighted comparison superoperator",
                 "Positive semidefiniteness of the coercivity difference.",
                 check_coercivity_bound, ("eps", "delta"), needs_x=True),
        CheckDef("eigenvalue_domination",
                 "indexwise min-max domination of comparison eigenvalues by generator eigenvalues",
                 "Sorted-spectrum comparison of Q + right-Q against the generator.",
                 check_eigenvalue_domination, (), needs_x=True),
        CheckDef("beurling_deny",
                 "form cross-term on orthogonal positive parts is non-positive",
                 "Randomized first contraction property of the energy form.",
                 check_beurling_deny, ("samples",), needs_x=True),
        CheckDef("intertwining",
                 "derivation intertwines the symmetric embedding with i[X, .]; "
                 "left/right factors act as lam X and lam^{-1} (right X)",
                 "Embedding/derivation intertwining on random algebra elements.",
                 check_intertwining, ("samples",), needs_x=True),
        CheckDef("semigroup_law", "plumbing",
                 "Semigroup law, identity at t=0 and HS contractivity.",
                 check_semigroup_law, ("samples",), needs_x=True),
        CheckDef("markov",
                 "evolution preserves the positive cone and the order interval [0, xi0]",
                 "Eigenvalue floors of evolved cone and order-interval samples.",
                 check_markov, ("samples", "times"), needs_x=True),
        CheckDef("complete_positivity",
                 "the Choi matrix of the evolution map is positive semidefinite",
                 "Choi-matrix PSD test at the scenario times.",
                 check_complete_positivity, ("times",), needs_x=True),
        CheckDef("superbounded",
                 "unembedded evolution contracts HS norm into operator norm",
                 "Operator-norm vs HS-norm contraction after unembedding.",
                 check_superbounded, ("t", "samples", "hamiltonian"), needs_x=True),
        CheckDef("superbounded_scan",
                 "empirical onset of the superbounded contraction on a time grid",
                 "Grid scan for the smallest all-pass time; pass-rate monotone.",
                 check_superbounded_scan, ("t_grid", "samples", "hamiltonian"), needs_x=True),
        CheckDef("counting_functions",
                 "two-sided multiplication spectrum is the pairwise eigenvalue sums; "
                 "counting function obeys the squared one-sided bound",
                 "Brute-force pairwise sums vs the dense spectrum, plus the counting bound.",
                 check_counting_functions, ()),
        CheckDef("heat_trace_bound",
                 "heat trace is bounded by the squared comparison heat trace",
                 "Spectral heat trace against the squared one-sided comparison trace.",
                 check_heat_trace_bound, ("t",), needs_x=True),
        CheckDef("q_coefficient",
                 "leading diagonal growth of the comparison operator is (lam - 1/lam)^2",
                 "Finite-difference slope of the comparison diagonal vs 4 sinh^2(m beta / 4).",
                 check_q_coefficient, (), needs_x=True),
        CheckDef("ccr_deformed",
                 "deformed ladder products follow the damped number-operator profile",
                 "Interior-index deformed product relations.",
                 check_ccr_deformed, (), needs_x=True),
        CheckDef("hyperbolic_commutator",
                 "the squared-ladder commutator equals 2 + 4N on interior indices",
                 "Exact diagonal commutator identity of the squared ladder.",
                 check_hyperbolic_commutator, ()),
        CheckDef("deformation_cross_check",
                 "time-domain quadrature agrees with the frequency-domain functional calculus",
                 "Quadrature vs closed-form construction and transform spot checks.",
                 check_deformation_cross, ("transform_samples",), needs_x=True),
        CheckDef("generator_spectrum", "plumbing",
                 "Exports the generator spectrum and counting function as CSV.",
                 check_generator_spectrum, (), needs_x=True),
        CheckDef("abelian_supercontractivity",
                 "sup-norm contraction of the multiplication semigroup from the weighted "
                 "L2 norm holds exactly from the computed threshold onward",
                 "Exact indicator threshold test on the configured atomic space.",
                 check_abelian_supercontractivity, ("t", "samples")),
    ]
}


def run_check(check_id: str, state: RunState, params: dict, tol: float | None,
              rng: np.random.Generator) -> Report:
    if check_id not in REGISTRY:
        raise ConfigError(f"unknown check id {check_id!r}")
    cdef = REGISTRY[check_id]
    unknown = set(params) - set(cdef.params)
    if unknown:
        raise ConfigError(f"check {check_id!r} does not accept params {sorted(unknown)}")
    if cdef.needs_x and state.x is None:
        raise ConfigError(f"check {check_id!r} needs an operator X in the scenario")
    start = time.perf_counter()
    try:
        report = cdef.runner(state, params, tol, rng)
    except InvalidSpecError as exc:
        raise ConfigError(f"check {check_id!r}: {exc}") from exc
    report.wall_time_s = time.perf_counter() - start
    return report
