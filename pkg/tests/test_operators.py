import pytest

from ltcalc.errors import (NonUnitArgument, NonUnitGamma, NotInPhiImage,
                           SingularCompanion)
from ltcalc.fields import LocalField
from ltcalc.formal_group import FormalGroupModel
from ltcalc.operators import OperatorContext, weierstrass_prepare
from ltcalc.series import EXACT_Z, LaurentSeries


def rand_laurent(ctx, rng, low=-2, terms=10):
    F = ctx.field
    return LaurentSeries.from_scalars(
        F, low, [F.random_scalar(rng) for _ in range(terms)], EXACT_Z)


def test_trace_frozen_values_multiplicative(mult3):
    """Power sums of z^3 + 3z^2 + 3z - W: s1 = -3, s2 = 3; e2/e3 = 3/W."""
    F = mult3.field
    Z = LaurentSeries.zvar(F)
    TZ = mult3.trace_T(Z)
    assert (TZ.value_at_zero() + F.scalar(3)).is_zero_at(16)
    assert TZ.truncate(8).eq_at(LaurentSeries.constant(F, -3).truncate(8),
                                pi_prec=16)
    TZ2 = mult3.trace_T(Z * Z)
    assert TZ2.truncate(8).eq_at(LaurentSeries.constant(F, 3).truncate(8),
                                 pi_prec=16)
    TZm = mult3.trace_T(Z.invert())
    want = Z.invert().scalar_mul(F.scalar(3))
    assert TZm.eq_at(want, pi_prec=16, z_prec=8)


def test_psi_frozen_values_multiplicative(mult3):
    F = mult3.field
    Z = LaurentSeries.zvar(F)
    one = LaurentSeries.constant(F, 1)
    assert mult3.psi(one).eq_at(one, pi_prec=16, z_prec=6)
    assert mult3.psi(Z).eq_at(-one, pi_prec=16, z_prec=6)
    assert mult3.psi(Z * Z).eq_at(one, pi_prec=16, z_prec=6)
    assert mult3.psi((one + Z).pow_int(2)).is_zero(16)


def test_phi_of_log_scales(special3):
    log = special3.model.log_series(20)
    lhs = special3.phi(log.truncate(18))
    rhs = log.scalar_mul(special3.field.pi())
    assert lhs.eq_at(rhs, pi_prec=12, z_prec=16)


def test_phi_multiplicative_powers(mult3):
    from ltcalc.mellin import eta_series
    e = eta_series(mult3, 4, 32)
    assert mult3.phi(e).eq_at(eta_series(mult3, 12, 32), pi_prec=14, z_prec=24)


@pytest.mark.parametrize("ctxname", ["mult3", "special3", "unram25"])
def test_psi_phi_and_projection(ctxname, rng, request):
    ctx = request.getfixturevalue(ctxname)
    F = ctx.field
    qpi = F.scalar(F.q) * F.pi_power(-1)
    for _ in range(8):
        f = rand_laurent(ctx, rng, low=-rng.randint(0, 3),
                         terms=rng.randint(3, 12))
        lhs = ctx.psi(ctx.phi(f))
        assert lhs.eq_at(f.scalar_mul(qpi).truncate(lhs.zprec), pi_prec=10)
    g = rand_laurent(ctx, rng, low=0, terms=5)
    f = rand_laurent(ctx, rng, low=-2, terms=8)
    lhs = ctx.psi(ctx.phi(g) * f)
    rhs = g * ctx.psi(f)
    assert lhs.eq_at(rhs, pi_prec=8, z_prec=6)


@pytest.mark.parametrize("ctxname", ["mult3", "special3", "unram25"])
def test_psi_omega(ctxname, request):
    ctx = request.getfixturevalue(ctxname)
    F = ctx.field
    Z = LaurentSeries.zvar(F)
    for m in (1, 2, 3, 4):
        val = Z.pow_int(m) * ctx.psi(Z.invert().pow_int(m))
        c0 = val.value_at_zero()
        want = F.one() if m == 1 else F.pi().pow_int(m - 1)
        assert (c0 - want).is_zero_at(10), (ctxname, m)
        assert all(v >= 0 for v in val.valuations()), (ctxname, m)


def test_norm_values(mult3):
    F = mult3.field
    Z = LaurentSeries.zvar(F)
    one = LaurentSeries.constant(F, 1)
    assert mult3.norm_N(Z).eq_at(Z.truncate(16), pi_prec=16, z_prec=12)
    assert mult3.norm_N(one).eq_at(one, pi_prec=16, z_prec=12)
    g = (one + Z).pow_int(2) - one
    assert mult3.norm_N(g).eq_at(g.truncate(14), pi_prec=12, z_prec=12)
    u = one + Z
    lhs = mult3.norm_N(u * g)
    rhs = mult3.norm_N(u) * mult3.norm_N(g)
    assert lhs.eq_at(rhs, pi_prec=10, z_prec=10)
    # N(phi(h)) = h^q
    h = one + Z.scalar_mul(F.scalar(2))
    assert mult3.norm_N(mult3.phi(h)).eq_at(h.pow_int(3).truncate(12),
                                            pi_prec=10, z_prec=10)
    with pytest.raises(NonUnitArgument):
        mult3.norm_N(Z.scalar_mul(F.scalar(3)))


def test_gamma_action_axioms(special3, rng):
    ctx = special3
    F = ctx.field
    f = rand_laurent(ctx, rng, low=-1, terms=8)
    a = F.random_scalar(rng)
    while a.valuation() != 0:
        a = F.random_scalar(rng)
    b = F.random_scalar(rng)
    while b.valuation() != 0:
        b = F.random_scalar(rng)
    assert ctx.gamma(F.one(), f).eq_at(f.truncate(ctx.zlen), pi_prec=12)
    lhs = ctx.gamma(a, ctx.gamma(b, f))
    rhs = ctx.gamma(a * b, f)
    assert lhs.eq_at(rhs, pi_prec=8, z_prec=10)
    with pytest.raises(NonUnitGamma):
        ctx.gamma(F.pi(), f)
    # d_inv gamma_a = a gamma_a d_inv
    lhs = ctx.d_inv(ctx.gamma(a, f))
    rhs = ctx.gamma(a, ctx.d_inv(f)).scalar_mul(a)
    assert lhs.eq_at(rhs, pi_prec=8, z_prec=8)
    # gamma commutes with phi and psi
    assert ctx.gamma(a, ctx.phi(f)).eq_at(ctx.phi(ctx.gamma(a, f)),
                                          pi_prec=8, z_prec=10)
    assert ctx.gamma(a, ctx.psi(f)).eq_at(ctx.psi(ctx.gamma(a, f)),
                                          pi_prec=7, z_prec=5)


def test_d_inv_and_nabla(mult3, special3, rng):
    for ctx in (mult3, special3):
        F = ctx.field
        one = LaurentSeries.constant(F, 1)
        log = ctx.model.log_series(24)
        assert ctx.d_inv(log).eq_at(one, pi_prec=10, z_prec=20)
        f = rand_laurent(ctx, rng, low=0, terms=8)
        lhs = ctx.d_inv(ctx.phi(f))
        rhs = ctx.phi(ctx.d_inv(f)).scalar_mul(F.pi())
        assert lhs.eq_at(rhs, pi_prec=10, z_prec=12)
        assert ctx.nabla(f).eq_at(log.truncate(24) * ctx.d_inv(f),
                                  pi_prec=10, z_prec=12)


def test_nabla_finite_difference_oracle(mult3):
    """(gamma_(1+p^k) - 1)/log(1+p^k) approximates nabla, deeper as k grows."""
    from ltcalc.explicit import padic_log
    from ltcalc.mellin import eta_series
    F = mult3.field
    f = eta_series(mult3, 7, 24)
    target = mult3.nabla(f)
    depths = []
    for k in (2, 3, 4):
        u = F.scalar(1 + 3 ** k)
        quot = (mult3.gamma(u, f) - f.truncate(mult3.zlen)).scalar_mul(
            padic_log(F, u).invert())
        diff = (quot - target.truncate(quot.zprec)).truncate(12)
        vals = [v for t, v in enumerate(diff.valuations())
                if v < diff.precs[t]]
        depths.append(min(vals) if vals else 99)
    assert depths[0] < depths[1] < depths[2] or depths[-1] == 99


def test_residue_and_pairing(mult3, rng):
    ctx = mult3
    F = ctx.field
    Z = LaurentSeries.zvar(F)
    one = LaurentSeries.constant(F, 1)
    assert (ctx.residue(Z.invert()) - F.one()).is_zero()
    assert (ctx.pairing(one, Z.invert()) - F.one()).is_zero_at(16)
    f = rand_laurent(ctx, rng, low=-2, terms=9)
    assert ctx.residue(f.derivative()).is_zero_at(14)
    # symmetry
    g = rand_laurent(ctx, rng, low=-1, terms=9)
    assert (ctx.pairing(f, g) - ctx.pairing(g, f)).is_zero_at(12)


def test_pairing_adjunctions(mult3, special3, rng):
    for ctx in (mult3, special3):
        F = ctx.field
        qpi = F.scalar(F.q) * F.pi_power(-1)
        f = rand_laurent(ctx, rng, low=0, terms=7)
        g = rand_laurent(ctx, rng, low=-2, terms=9)
        lhs = ctx.pairing(ctx.phi(f), g)
        rhs = ctx.pairing(f, ctx.psi(g))
        assert (lhs - rhs).is_zero_at(10)
        h = rand_laurent(ctx, rng, low=0, terms=7)
        lhs = ctx.pairing(ctx.phi(f), ctx.phi(h))
        rhs = ctx.pairing(f, h) * qpi
        assert (lhs - rhs).is_zero_at(10)
        a = F.random_scalar(rng)
        while a.valuation() != 0:
            a = F.random_scalar(rng)
        lhs = ctx.pairing(ctx.gamma(a, f), ctx.gamma(a, g)) * a
        assert (lhs - ctx.pairing(f, g)).is_zero_at(8)


def test_phi_inverse_round_trip(special3, rng):
    ctx = special3
    h = rand_laurent(ctx, rng, low=0, terms=8)
    F = ctx.phi(h)
    back = ctx.phi_inverse(F)
    assert back.eq_at(h.truncate(back.zprec), pi_prec=10)
    two = ctx.phi(ctx.phi(h))
    back2 = ctx.phi_inverse(two, 2)
    assert back2.eq_at(h.truncate(back2.zprec), pi_prec=8)


def test_companion_matrix_shape(mult3):
    C = mult3.companion_matrix()
    q = mult3.q
    assert len(C) == q and len(C[0]) == q
    # char poly = P via direct expansion for q = 3:
    # det(X - C) with the companion structure gives X^3 + p2 X^2 + p1 X + p0
    F = mult3.field
    p0, p1, p2 = mult3.p_coeffs
    # trace(C) = -p2, det(C) = (-1)^q p0
    tr = C[0][0] + C[1][1] + C[2][2]
    assert tr.eq_at(-p2, pi_prec=14)
    from ltcalc.operators import _det_series
    det = _det_series(C, F)
    assert det.eq_at(p0.scalar_mul(F.scalar(-1)), pi_prec=14, z_prec=8)


def test_powersums_against_literal_matrix(mult3):
    """tr(C^j) via Newton equals literal matrix powers for small q."""
    C = mult3.companion_matrix()
    q = mult3.q
    F = mult3.field
    from ltcalc.series import LaurentSeries as LS

    def matmul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(q)),
                     LS.zero(F)) for j in range(q)] for i in range(q)]

    P = [[LS.constant(F, 1) if i == j else LS.zero(F) for j in range(q)]
         for i in range(q)]
    for j in range(q):
        tr = sum((P[i][i] for i in range(q)), LS.zero(F))
        assert tr.eq_at(mult3._powersums[j], pi_prec=12, z_prec=6), j
        P = matmul(P, C)


def test_weierstrass_preparation():
    """Degree q+1 Frobenius factors as distinguished * unit."""
    F = LocalField(3, "qp", prec=12, store_margin=24)
    model = FormalGroupModel(F, "custom", coeffs=[0, 3, 0, 1, 3], zlen=12)
    ctx = OperatorContext(model, zlen=12)
    p, u = ctx.p_coeffs, ctx.u_coeffs
    # reassemble [pi](X) - W = U * P and compare coefficients
    wlen = 12
    AX = [LaurentSeries.constant(F, model.frobenius.coefficient(j))
          for j in range(5)]
    AX[0] = AX[0] - LaurentSeries.zvar(F)
    prod = [LaurentSeries.zero(F) for _ in range(5)]
    Pfull = p + [LaurentSeries.constant(F, 1)]
    for i, x in enumerate(Pfull):
        for j, y in enumerate(u):
            if i + j < 5:
                prod[i + j] = prod[i + j] + (x * y).truncate(wlen)
    for k in range(5):
        assert (prod[k] - AX[k].truncate(prod[k].zprec)).is_zero(6), k
    # and the trace machinery still satisfies psi phi = (q/pi) id
    import random
    rng = random.Random(1)
    f = rand_laurent(ctx, rng, low=-1, terms=6)
    lhs = ctx.psi(ctx.phi(f))
    qpi = F.scalar(F.q) * F.pi_power(-1)
    assert lhs.eq_at(f.scalar_mul(qpi).truncate(lhs.zprec), pi_prec=5)


def test_psi_normalized_left_inverse(mult3, special3, rng):
    """(pi/q) psi is the exact left inverse of phi."""
    for ctx in (mult3, special3):
        f = rand_laurent(ctx, rng, low=-1, terms=8)
        back = ctx.psi_normalized(ctx.phi(f))
        assert back.eq_at(f.truncate(back.zprec), pi_prec=10)


def test_d_inv_multiplicative_eigenvectors(mult3):
    """d_inv = (1+Z) d/dZ on the multiplicative model: eta(a) has eigenvalue a."""
    from ltcalc.mellin import eta_series
    F = mult3.field
    for a in (2, 5):
        e = eta_series(mult3, a, 24)
        assert mult3.d_inv(e).eq_at(e.scalar_mul(F.scalar(a)),
                                    pi_prec=12, z_prec=20)


def test_torsion_translate_sum_formula(mult3, rng):
    """q phi((pi/q) psi(F)) equals the sum of F over all torsion translates."""
    from ltcalc.torsion import TorsionRingOracle
    orc = TorsionRingOracle(mult3, zlen=20)
    F = mult3.field
    f = LaurentSeries.from_scalars(F, 0, [F.random_scalar(rng)
                                          for _ in range(8)], EXACT_Z)
    lhs = mult3.phi(mult3.psi_normalized(f)).scalar_mul(F.scalar(F.q))
    rhs = orc.direct_trace(f, 10)
    assert lhs.eq_at(rhs, pi_prec=10, z_prec=10)
