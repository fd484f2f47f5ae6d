"""Acceptance suite: one test per criterion, printing one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines and
timings.  Every criterion is asserted at its stated tolerance.

Criterion 10 is expected to FAIL on its eigenvector clause, and is left
red on purpose: the advertised quarter-power modular eigenvalue e^{-b/4}
for the deformed family is refuted by this laboratory (the underlying
contour heuristic ignores singularities inside the shift strip; the exact
residue-corrected relation and the measured O(1e-1) residual are recorded
in docs/claims.md).  The other two clauses of criterion 10 pass.
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from kmslab.abelian import AtomicSpace, supercontractive_check, threshold_t0
from kmslab.deformation import (
    FunctionSpec,
    QuadratureSpec,
    ccr_relations_check,
    deformed_operator,
    fourier_hat,
    fourier_hat_closed,
    hyperbolic_commutator_check,
    quadrature_operator,
)
from kmslab.dirichlet import (
    DirichletGenerator,
    coercivity_bound_check,
    coercivity_identity_check,
    eigenvalue_domination_check,
    form_value,
    generator_identity_check,
    q_operator,
)
from kmslab.fock import AffiliatedOperator, FockSpec, HamiltonianProfile, ladder_power, number_operator
from kmslab.checks import ou_comparison_profile
from kmslab.reporting import report_to_dict
from kmslab.scenario import load_bundled_scenario, run_scenario
from kmslab.semigroup import (
    SemigroupHandle,
    counting_bound_check,
    cp_check,
    heat_trace,
    markov_check,
    superbounded_threshold_scan,
)
from kmslab.standard_form import StandardFormContext, hs_norm, modular_power


@contextmanager
def criterion(number, label):
    start = time.perf_counter()
    try:
        yield
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        print(f"criterion {number:2d}: FAIL ({label}) [{elapsed:.2f}s] - {exc}")
        raise
    else:
        elapsed = time.perf_counter() - start
        print(f"criterion {number:2d}: PASS ({label}) [{elapsed:.2f}s]")


def linear_context(dim, beta=1.0):
    spec = FockSpec(dim=dim, profile=HamiltonianProfile.linear(), beta=beta)
    return spec, StandardFormContext.from_spec(spec)


def seeded_grid(dim=8, n_ops=10, lams=(0.5, 1.0, 2.0)):
    rng = np.random.default_rng(20240511)
    for _ in range(n_ops):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        for lam in lams:
            yield g, lam


def test_criterion_01_generator_identity():
    with criterion(1, "two generator assemblies agree to 1e-11 relative"):
        for g, lam in seeded_grid():
            report = generator_identity_check(g, lam, tol=1e-11)
            assert report.passed, f"residual {report.residuals['relative']:.3e} at lam={lam}"


def test_criterion_02_coercivity_and_domination():
    _, ctx = linear_context(8)
    with criterion(2, "coercivity identity, PSD bound and min-max domination"):
        for g, lam in seeded_grid():
            gen = DirichletGenerator.build(AffiliatedOperator(g), ctx, lam=lam)
            rep_id = coercivity_identity_check(gen, tol=1e-11)
            assert rep_id.passed, f"identity residual {rep_id.residuals['relative']:.3e}"
            rep_bound = coercivity_bound_check(gen, 1.0, 1.0, tol=1e-9)
            assert rep_bound.passed, f"eig floor {rep_bound.residuals['eig_floor_over_norm']:.3e}"
            rep_dom = eigenvalue_domination_check(gen, tol=1e-9)
            assert rep_dom.passed, f"domination {rep_dom.residuals['worst_violation_over_norm']:.3e}"


def test_criterion_03_modular_eigenvectors():
    spec, ctx = linear_context(32)
    with criterion(3, "ladder powers are half-power modular eigenvectors to 1e-12"):
        for m in (1, 2, 3):
            v = ladder_power(spec, m).matrix @ ctx.xi0
            residual = hs_norm(modular_power(0.5, v, ctx) - np.exp(-m * 0.5) * v)
            assert residual <= 1e-12, f"m={m}: residual {residual:.3e}"


def test_criterion_04_conservativeness_iff():
    spec, ctx = linear_context(16)
    lam = np.exp(-0.25)
    x = ladder_power(spec, 1)
    with criterion(4, "matched weight conserves xi0; 1.1-scaled weight must fail"):
        gen = DirichletGenerator.build(x, ctx, lam=lam)
        assert hs_norm(gen.h.apply(ctx.xi0)) <= 1e-11
        handle = SemigroupHandle.from_generator(gen)
        assert hs_norm(handle.evolve(1.0, ctx.xi0) - ctx.xi0) <= 1e-10
        bad = 1.1 * lam
        energy = form_value(x.matrix, bad, 1.0 / bad, ctx.xi0)
        assert energy > 1e-4, f"negative control energy {energy:.3e} too small"


def test_criterion_05_markov_and_complete_positivity():
    spec, ctx = linear_context(8)
    handle = SemigroupHandle.from_generator(
        DirichletGenerator.build(ladder_power(spec, 1), ctx, lam=np.exp(-0.25))
    )
    with criterion(5, "order-interval floors and Choi PSD at t in {0.1, 1, 10}"):
        rng = np.random.default_rng(5)
        for t in (0.1, 1.0, 10.0):
            rep = markov_check(handle, ctx, t, rng, n_samples=100, tol=1e-9)
            assert rep.passed, f"markov floors at t={t}: {rep.residuals}"
            rep_cp = cp_check(handle, t, tol=1e-9)
            assert rep_cp.passed, f"choi floor at t={t}: {rep_cp.residuals}"


def test_criterion_06_q_leading_coefficient():
    spec, _ = linear_context(16)
    lam = np.exp(-0.25)
    with criterion(6, "interior diagonal slope equals (2 sinh(beta/4))^2"):
        q = np.real(np.diag(q_operator(ladder_power(spec, 1).matrix, lam).matrix))
        slopes = np.diff(q[:15])
        expected = (2.0 * np.sinh(0.25)) ** 2
        assert np.max(np.abs(slopes - expected)) <= 1e-10
        assert abs(expected - 0.2552519) < 5e-8  # evaluated, not quoted


def test_criterion_07_heat_trace_bound():
    spec, ctx = linear_context(16)
    lam = np.exp(-0.25)
    with criterion(7, "heat trace bounded by squared comparison trace"):
        handle = SemigroupHandle.from_generator(
            DirichletGenerator.build(ladder_power(spec, 1), ctx, lam=lam)
        )
        t = 1.0
        trace = heat_trace(handle, t)
        bound = float(np.sum(np.exp(-t * ou_comparison_profile(spec, 1, lam))) ** 2)
        assert trace <= bound, f"trace {trace:.6f} exceeds bound {bound:.6f}"
        print(f"    heat trace {trace:.6f} <= bound {bound:.6f}, slack {bound - trace:.6f}")


def test_criterion_08_superbounded_threshold():
    spec, ctx = linear_context(12)
    handle = SemigroupHandle.from_hamiltonian(number_operator(spec), ctx)
    with criterion(8, "empirical contraction onset at most 0.30 for the two-sided reference"):
        grid = [round(0.05 * k, 10) for k in range(1, 21)]
        rep = superbounded_threshold_scan(handle, ctx, grid, np.random.default_rng(8), n_samples=200)
        assert rep.passed, rep.detail
        threshold = float(rep.detail.split()[-1])
        assert threshold <= 0.30 + 1e-12, f"threshold {threshold}"
        print(f"    empirical threshold {threshold} (reference onset 0.25)")


def test_criterion_09_counting_functions():
    spec, _ = linear_context(8)
    with criterion(9, "pairwise-sum spectrum and squared counting bound"):
        rep = counting_bound_check(number_operator(spec).matrix, tol=1e-10)
        assert rep.passed, rep.detail
        assert rep.residuals["multiset"] <= 1e-10


def test_criterion_10_deformation_cross_check():
    spec = FockSpec(dim=12, profile=HamiltonianProfile.log(2.0), beta=1.0)
    ctx = StandardFormContext.from_spec(spec)
    f = FunctionSpec(kind="cosh", b=1.0)
    quad = QuadratureSpec(half_width=2.0, nodes=4096)
    with criterion(10, "quadrature/closed-form agreement and advertised eigenvalue"):
        x_closed = deformed_operator(f, spec, quad)
        x_quad = quadrature_operator(f, spec, quad)
        op_res = hs_norm(x_quad.matrix - x_closed.matrix)
        assert op_res <= 1e-6, f"construction mismatch {op_res:.3e}"
        print(f"    construction agreement: {op_res:.3e} <= 1e-6")

        rng = np.random.default_rng(10)
        s = rng.uniform(-40.0, 40.0, size=20)
        rel = np.max(np.abs(np.asarray(fourier_hat(f, s, quad)) - fourier_hat_closed(f, s))
                     / np.abs(fourier_hat_closed(f, s)))
        assert rel <= 1e-6, f"transform mismatch {rel:.3e}"
        print(f"    transform agreement:    {rel:.3e} <= 1e-6")

        lam = np.exp(-0.25)  # advertised e^{-b/4}
        v = x_closed.matrix @ ctx.xi0
        residual = hs_norm(modular_power(0.25, v, ctx) - lam * v) / hs_norm(v)
        assert residual <= 1e-6, (
            f"advertised quarter-power eigenvalue refuted: relative residual {residual:.3e}; "
            "the entrywise scaling e^{beta gap / 4} is not constant for this profile "
            "(see docs/claims.md)"
        )


def test_criterion_11_deformed_relations_and_hyperbolic_commutator():
    spec = FockSpec(dim=16, profile=HamiltonianProfile.log(2.0), beta=1.0)
    f = FunctionSpec(kind="cosh", b=1.0)
    with criterion(11, "deformed product relations and squared-ladder commutator"):
        x = deformed_operator(f, spec)
        rep = ccr_relations_check(x.matrix, f, spec, tol=1e-12)
        assert rep.passed, rep.residuals
        rep_h = hyperbolic_commutator_check(spec, tol=1e-12)
        assert rep_h.passed, rep_h.residuals
        a_spec, _ = linear_context(16)
        from kmslab.fock import ladder

        a, _ = ladder(a_spec)
        sq = a.matrix @ a.matrix
        comm = np.diag(sq @ sq.conj().T - sq.conj().T @ sq).real
        assert np.max(np.abs(comm[:14] - (2.0 + 4.0 * np.arange(14.0)))) <= 1e-12


def test_criterion_12_abelian_threshold():
    rng = np.random.default_rng(12)
    with criterion(12, "indicator test exact at t0 over randomized spaces"):
        tested = 0
        for _ in range(100):
            space = AtomicSpace.make(
                U=rng.standard_normal(50), h=rng.standard_normal(50),
                V=rng.uniform(0.2, 3.0, size=50),
            )
            t0 = threshold_t0(space)
            if not (0.0 < t0 < np.inf):
                continue
            tested += 1
            assert supercontractive_check(space, t0).passed, "must pass exactly at t0"
            assert not supercontractive_check(space, t0 * (1.0 - 1e-3)).passed, "must fail below t0"
        assert tested >= 95, f"only {tested} informative trials"


def test_criterion_13_determinism():
    with criterion(13, "bundled suite reproduces identical numerical content"):
        for name in ("ou_m1", "negative_control"):
            cfg = load_bundled_scenario(name)
            runs = []
            for _ in range(2):
                records = [report_to_dict(r) for r in run_scenario(cfg)]
                for rec in records:
                    rec.pop("wall_time_s")
                runs.append(json.dumps(records, sort_keys=True))
            assert runs[0] == runs[1], f"scenario {name} not deterministic"
