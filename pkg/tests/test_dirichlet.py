import numpy as np
import pytest

from kmslab.fock import AffiliatedOperator, FockSpec, HamiltonianProfile, ladder_power
from kmslab.standard_form import StandardFormContext, hs_inner, hs_norm, random_hermitian
from kmslab.dirichlet import (
    DirichletGenerator,
    SuperOperator,
    beurling_deny_check,
    coercivity_bound_check,
    coercivity_identity_check,
    conservativeness_check,
    derivation,
    derivation_apply,
    eigenvalue_domination_check,
    form_cross_term,
    form_value,
    generator_direct,
    generator_expanded,
    generator_identity_check,
    hermitian_eigs,
    intertwining_check,
    modular_eigenvalue_fit,
    q_operator,
    q_operator_commutator_form,
    unvec,
    vec,
)

LAM1 = np.exp(-0.25)  # matched weight for the first creator power at beta = 1


def random_matrix(rng, dim=8):
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


class TestSuperOperator:
    def test_dense_agrees_with_structural_application(self, rng):
        l1, r1, l2, r2 = (random_matrix(rng, 6) for _ in range(4))
        sup = SuperOperator([(l1, r1), (l2, r2)])
        xi = random_matrix(rng, 6)
        via_terms = sup.apply(xi)
        via_dense = unvec(sup.dense() @ vec(xi), 6)
        assert hs_norm(via_terms - via_dense) < 1e-12 * max(1.0, hs_norm(via_terms))

    def test_adjoint_matches_inner_product(self, rng):
        sup = SuperOperator([(random_matrix(rng, 5), random_matrix(rng, 5))])
        a, b = random_matrix(rng, 5), random_matrix(rng, 5)
        lhs = hs_inner(sup.apply(a), b)
        rhs = hs_inner(a, sup.adjoint().apply(b))
        assert abs(lhs - rhs) < 1e-10

    def test_compose_order(self, rng):
        s1 = SuperOperator([(random_matrix(rng, 4), random_matrix(rng, 4))])
        s2 = SuperOperator([(random_matrix(rng, 4), random_matrix(rng, 4))])
        xi = random_matrix(rng, 4)
        assert np.allclose(s1.compose(s2).apply(xi), s1.apply(s2.apply(xi)))


class TestDerivation:
    def test_identity_operator_vanishes(self, rng):
        xi = random_matrix(rng)
        assert hs_norm(derivation_apply(np.eye(8), 1.0, 1.0, xi)) == 0.0

    def test_matched_weights_annihilate_cyclic_vector(self, linear_spec, linear_ctx):
        x = ladder_power(linear_spec, 1).matrix
        out = derivation_apply(x, LAM1, 1.0 / LAM1, linear_ctx.xi0)
        assert hs_norm(out) < 1e-12

    def test_weight_scaling_is_exact(self, rng):
        # dyadic scalars keep both evaluation orders bit-identical
        x, xi = random_matrix(rng), random_matrix(rng)
        a = derivation_apply(x, 2.0 * 0.75, 2.0 * 1.5, xi)
        b = 2.0 * derivation_apply(x, 0.75, 1.5, xi)
        assert np.array_equal(a, b)

    def test_structural_matches_pointwise(self, rng):
        x, xi = random_matrix(rng), random_matrix(rng)
        assert np.allclose(derivation(x, 0.4, 2.5).apply(xi), derivation_apply(x, 0.4, 2.5, xi))


class TestFormValue:
    def test_cyclic_vector_with_matched_weight(self, linear_spec, linear_ctx):
        x = ladder_power(linear_spec, 1).matrix
        assert form_value(x, LAM1, 1.0 / LAM1, linear_ctx.xi0) < 1e-24

    def test_weight_rescaling_identity(self, rng):
        x, xi = random_matrix(rng), random_matrix(rng)
        mu, nu = 1.7, 0.4
        lam = np.sqrt(mu / nu)
        direct = form_value(x, mu, nu, xi)
        scaled = mu * nu * form_value(x, lam, 1.0 / lam, xi)
        assert abs(direct - scaled) < 1e-12 * max(1.0, direct)

    def test_identity_operator_gives_zero(self, rng):
        xi = random_matrix(rng)
        assert form_value(np.eye(8), 1.0, 1.0, xi) == 0.0

    def test_nonnegative(self, rng):
        for _ in range(10):
            assert form_value(random_matrix(rng), 0.9, 1.8, random_matrix(rng)) >= 0.0


class TestGeneratorAssemblies:
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_direct_equals_expanded_random(self, rng, lam):
        for _ in range(5):
            report = generator_identity_check(random_matrix(rng), lam)
            assert report.passed, report.residuals

    def test_double_commutator_at_unit_weight(self, rng):
        # Hermitian X at unit weight: both derivation squares coincide, so
        # H = 2 [X, [X, .]]
        g = random_matrix(rng)
        x = 0.5 * (g + g.conj().T)
        xi = random_matrix(rng)
        h = generator_expanded(x, 1.0).apply(xi)
        double_comm = x @ (x @ xi - xi @ x) - (x @ xi - xi @ x) @ x
        assert hs_norm(h - 2.0 * double_comm) < 1e-12 * max(1.0, hs_norm(h))

    def test_matched_generator_annihilates_cyclic_vector(self, linear_spec, linear_ctx):
        x = ladder_power(linear_spec, 1)
        gen = DirichletGenerator.build(x, linear_ctx, lam=LAM1)
        assert hs_norm(gen.h.apply(linear_ctx.xi0)) < 1e-11

    def test_self_adjoint_positive_semidefinite(self, rng, linear_ctx):
        x = AffiliatedOperator(random_matrix(rng, 12))
        gen = DirichletGenerator.build(x, linear_ctx, lam=1.7)
        assert gen.h.is_self_adjoint(1e-12)
        eigs = hermitian_eigs(gen.h.dense())
        assert eigs.min() >= -1e-9 * eigs.max()

    def test_preserves_hermiticity(self, rng, linear_ctx):
        x = AffiliatedOperator(random_matrix(rng, 12))
        gen = DirichletGenerator.build(x, linear_ctx, lam=0.8)
        xi = random_hermitian(12, rng)
        out = gen.h.apply(xi)
        assert hs_norm(out - out.conj().T) < 1e-11 * max(1.0, hs_norm(out))

    def test_mu_nu_scaling_of_generator(self, rng, linear_ctx):
        x = AffiliatedOperator(random_matrix(rng, 12))
        mu, nu = 0.9, 2.3
        gen = DirichletGenerator(x=x, mu=mu, nu=nu, ctx=linear_ctx)
        lam = np.sqrt(mu / nu)
        expected = mu * nu * np.asarray(generator_expanded(x.matrix, lam).dense())
        assert np.max(np.abs(gen.h.dense() - expected)) < 1e-12 * np.max(np.abs(expected))


class TestQOperator:
    def test_unit_weight_vanishes(self, rng):
        assert np.max(np.abs(q_operator(random_matrix(rng), 1.0).matrix)) == 0.0

    def test_commutator_form_agrees(self, rng):
        x = random_matrix(rng)
        q = q_operator(x, 2.2).matrix
        assert np.max(np.abs(q - q_operator_commutator_form(x, 2.2))) < 1e-12 * np.max(np.abs(q))

    def test_interior_diagonal_growth(self, linear_spec):
        # slope of the interior diagonal is (lam - 1/lam)^2 = 4 sinh^2(beta/4)
        x = ladder_power(linear_spec, 1).matrix
        q = np.real(np.diag(q_operator(x, LAM1).matrix))
        slopes = np.diff(q[: linear_spec.dim - 1])
        expected = (2.0 * np.sinh(0.25)) ** 2
        assert np.max(np.abs(slopes - expected)) < 1e-10
        assert expected == pytest.approx(0.2552519, abs=5e-8)


class TestCoercivity:
    def test_identity_random(self, rng):
        ctx = StandardFormContext.from_spec(FockSpec(dim=6, profile=HamiltonianProfile.linear(), beta=1.0))
        gen = DirichletGenerator.build(AffiliatedOperator(random_matrix(rng, 6)), ctx, lam=3.0)
        assert coercivity_identity_check(gen).passed

    def test_identity_unit_weight_remainder_vanishes(self, rng, linear_ctx):
        from kmslab.dirichlet import unit_weight_square_sum

        x = random_matrix(rng, 12)
        gen = DirichletGenerator.build(AffiliatedOperator(x), linear_ctx, lam=1.0)
        assert coercivity_identity_check(gen).passed
        diff = generator_direct(x, 1.0).dense() - unit_weight_square_sum(x).dense()
        assert np.max(np.abs(diff)) < 1e-11 * max(1.0, np.max(np.abs(generator_direct(x, 1.0).dense())))

    def test_identity_matched_creator(self, linear_ctx, linear_spec):
        spec = FockSpec(dim=12, profile=HamiltonianProfile.linear(), beta=1.0)
        gen = DirichletGenerator.build(ladder_power(spec, 1), linear_ctx, lam=LAM1)
        assert coercivity_identity_check(gen).passed

    def test_bound_at_unit_eps_delta(self, linear_spec, linear_ctx):
        gen = DirichletGenerator.build(ladder_power(linear_spec, 1), linear_ctx, lam=LAM1)
        assert coercivity_bound_check(gen, 1.0, 1.0).passed

    def test_bound_at_weighted_eps_delta(self, rng, linear_ctx):
        gen = DirichletGenerator.build(AffiliatedOperator(random_matrix(rng, 12)), linear_ctx, lam=1.4)
        assert coercivity_bound_check(gen, 1.4, 1.0 / 1.4).passed

    def test_identity_operator_trivial(self, linear_ctx):
        gen = DirichletGenerator.build(AffiliatedOperator(np.eye(12, dtype=complex)), linear_ctx, lam=1.0)
        report = coercivity_bound_check(gen, 1.0, 1.0)
        assert report.passed

    def test_eps_delta_must_be_positive(self, linear_spec, linear_ctx):
        from kmslab.errors import InvalidSpecError

        gen = DirichletGenerator.build(ladder_power(linear_spec, 1), linear_ctx, lam=LAM1)
        with pytest.raises(InvalidSpecError):
            coercivity_bound_check(gen, -1.0, 1.0)

    def test_minmax_domination(self, rng, linear_ctx):
        for lam in (0.5, 2.0):
            gen = DirichletGenerator.build(AffiliatedOperator(random_matrix(rng, 12)), linear_ctx, lam=lam)
            assert eigenvalue_domination_check(gen).passed


class TestBeurlingDeny:
    def test_random_ensemble(self, linear_spec, linear_ctx, rng):
        gen = DirichletGenerator.build(ladder_power(linear_spec, 1), linear_ctx, lam=LAM1)
        report = beurling_deny_check(gen, rng, n_samples=100)
        assert report.passed

    def test_diagonal_vectors(self, linear_spec, linear_ctx, rng):
        x = ladder_power(linear_spec, 1).matrix
        d = rng.standard_normal(12)
        plus = np.diag(np.clip(d, 0.0, None)).astype(complex)
        minus = np.diag(np.clip(-d, 0.0, None)).astype(complex)
        value = form_cross_term(x, LAM1, 1.0 / LAM1, plus, minus)
        assert value.real <= 1e-15

    def test_positive_vector_has_no_negative_part(self, linear_spec, linear_ctx, rng):
        from kmslab.standard_form import jordan_decompose, random_psd

        x = ladder_power(linear_spec, 1).matrix
        psd = random_psd(12, rng)
        _, minus, _ = jordan_decompose(psd, tol=1e-8)
        assert hs_norm(minus) < 1e-12
        assert abs(form_cross_term(x, LAM1, 1.0 / LAM1, psd, minus)) < 1e-10


class TestConservativeness:
    def test_matched_ladder_powers(self):
        spec = FockSpec(dim=16, profile=HamiltonianProfile.linear(), beta=1.0)
        ctx = StandardFormContext.from_spec(spec)
        for m in (1, 2, 3):
            lam_half = np.exp(-m * 0.5)  # half-power eigenvalue mu/nu
            mu = np.sqrt(lam_half)
            report = conservativeness_check(ladder_power(spec, m).matrix, mu, mu / lam_half, ctx)
            assert report.passed
            assert report.params["sides_agree"]

    def test_mismatched_weight_fails_both_sides(self, linear_spec, linear_ctx):
        x = ladder_power(linear_spec, 1).matrix
        report = conservativeness_check(x, 1.0, 1.0, linear_ctx)
        assert not report.passed
        assert report.params["sides_agree"]
        assert report.residuals["form_energy"] > 1e-4

    def test_identity_operator_trivially_conservative(self, linear_ctx):
        report = conservativeness_check(np.eye(12, dtype=complex), 1.0, 1.0, linear_ctx)
        assert report.passed

    def test_eigenvalue_fit(self, linear_spec, linear_ctx):
        lam, residual = modular_eigenvalue_fit(ladder_power(linear_spec, 1), linear_ctx)
        assert lam == pytest.approx(LAM1, rel=1e-13)
        assert residual < 1e-13


class TestIntertwining:
    def test_matched_first_power(self, linear_spec, linear_ctx, rng):
        report = intertwining_check(ladder_power(linear_spec, 1).matrix, LAM1, linear_ctx, rng)
        assert report.passed, report.residuals

    def test_matched_second_power(self, linear_spec, linear_ctx, rng):
        report = intertwining_check(ladder_power(linear_spec, 2).matrix, np.exp(-0.5), linear_ctx, rng)
        assert report.passed

    def test_identity_element_trivial(self, linear_spec, linear_ctx):
        from kmslab.standard_form import embed

        x = ladder_power(linear_spec, 1).matrix
        i0_unit = embed(np.eye(12), linear_ctx)
        out = derivation_apply(x, LAM1, 1.0 / LAM1, i0_unit)
        assert hs_norm(out) < 1e-12

    def test_unmatched_weight_not_applicable(self, linear_spec, linear_ctx, rng):
        report = intertwining_check(ladder_power(linear_spec, 1).matrix, 0.5, linear_ctx, rng)
        assert report.status == "not_applicable"
