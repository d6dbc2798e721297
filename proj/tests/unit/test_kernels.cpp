#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "memkern/errors.hpp"
#include "memkern/grid.hpp"
#include "memkern/hypothesis.hpp"
#include "memkern/pade.hpp"
#include "memkern/qstate.hpp"
#include "memkern/superop.hpp"

using namespace memkern;

namespace {

std::vector<cplx> random_coeffs(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<cplx> xi(n);
    for (auto& c : xi) c = cplx{u(rng), u(rng)};
    return xi;
}

cplx naive_ratio(const std::vector<cplx>& xi, int q, int r, double t) {
    cplx num = 0.0, den = 0.0;
    for (int k = 0; k <= q; ++k) num += xi[static_cast<std::size_t>(k)] * std::pow(t, k);
    for (int k = 0; k <= r; ++k) den += xi[static_cast<std::size_t>(q + 1 + k)] * std::pow(t, k);
    return num / den;
}

// Random model whose denominator stays away from zero on [0, 3].
PadeModel pole_free_model(std::mt19937_64& rng, int q, int r) {
    auto xi = random_coeffs(rng, static_cast<std::size_t>(q + r + 2), 0.3);
    xi[static_cast<std::size_t>(q + 1)] = 2.0;
    for (int k = 1; k <= r; ++k) xi[static_cast<std::size_t>(q + 1 + k)] /= r * std::pow(3.0, k);
    return PadeModel(q, r, xi);
}

Matrix2c random_hermitian(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Matrix2c m;
    m(0, 0) = n(rng);
    m(1, 1) = n(rng);
    m(0, 1) = cplx{n(rng), n(rng)};
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

Matrix4c superop_by_units(const Matrix2c& P, const Matrix2c& Q) {
    Matrix4c S;
    for (int col = 0; col < 4; ++col) {
        Matrix2c unit = Matrix2c::Zero();
        // column order (00, 11, 01, 10)
        const int rows[] = {0, 1, 0, 1};
        const int cols[] = {0, 1, 1, 0};
        unit(rows[col], cols[col]) = 1.0;
        const Matrix2c inner = Q * unit - unit * Q;
        const Matrix2c outer = P * inner - inner * P;
        for (int k = 0; k < 4; ++k) S(k, col) = outer(rows[k], cols[k]);
    }
    return S;
}

StateVector random_physical_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    const cplx c{n(rng), n(rng)};
    return StateVector(n(rng), n(rng), c, std::conj(c));
}

}  // namespace

TEST_SUITE("kernels") {
TEST_CASE("pade evaluation") {
    const PadeModel constant(0, 0, {2.5, 1.0});
    for (double t : {0.0, 0.3, 2.9}) CHECK(pade_eval(constant, t) == cplx{2.5});
    const PadeModel linear(1, 0, {0.0, 1.0, 1.0});
    for (double t : {0.0, 0.3, 2.9}) CHECK(pade_eval(linear, t) == cplx{t});

    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const auto xi = random_coeffs(rng, 8);
        const PadeModel m(3, 3, xi);
        CHECK(std::abs(pade_eval(m, 0.7, 0.0) - naive_ratio(xi, 3, 3, 0.7)) <= 1e-12 * std::abs(naive_ratio(xi, 3, 3, 0.7)));
    }
    CHECK_THROWS_AS(PadeModel(2, 2, {1.0, 2.0}), LengthMismatch);
}

TEST_CASE("pade derivative") {
    const PadeModel constant(0, 0, {2.5, 1.0});
    CHECK(pade_derivative(constant, 1.0) == cplx{0.0});
    const PadeModel linear(1, 0, {0.0, 1.0, 1.0});
    CHECK(pade_derivative(linear, 1.0) == cplx{1.0});

    std::mt19937_64 rng(8);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const int q = i % 2 == 0 ? 4 : 3;
        const PadeModel m = pole_free_model(rng, q, q);
        const double t = i == 0 ? 1.3 : 0.1 + 2.8 * static_cast<double>(i) / 100.0;
        const cplx fd = (pade_eval(m, t + h) - pade_eval(m, t - h)) / (2.0 * h);
        const cplx d = pade_derivative(m, t);
        CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
}

TEST_CASE("pole guard") {
    const PadeModel pole(0, 1, {1.0, -1.5, 1.0});  // 1 / (t - 1.5)
    CHECK_THROWS_AS(pade_eval(pole, 1.5), PoleError);
    CHECK_THROWS_AS(pade_derivative(pole, 1.5 + 1e-7), PoleError);
    try {
        pade_eval(pole, 1.5);
    } catch (const PoleError& e) {
        CHECK(e.where() == 1.5);
    }

    const TimeGrid grid;
    CHECK(pade_pole_margin(PadeModel(1, 0, {1.0, 1.0, 1.0}), grid) == 1.0);
    double expect = 1e300;
    for (double t : grid.nodes()) expect = std::min(expect, std::abs(t - 1.5));
    CHECK(pade_pole_margin(pole, grid) == doctest::Approx(expect).epsilon(1e-15));
    const PadeModel bump(0, 2, {1.0, 1.0, 0.0, 1.0});  // 1 / (1 + t^2)
    CHECK(pade_pole_margin(bump, grid) == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));
}

TEST_CASE("double commutator superoperator") {
    Matrix4c zz = Matrix4c::Zero();
    zz(2, 2) = zz(3, 3) = 4.0;
    CHECK((double_commutator_superop(sigma_z(), sigma_z()) - zz).norm() <= 1e-15);

    std::mt19937_64 rng(2);
    CHECK(double_commutator_superop(Matrix2c::Zero(), random_hermitian(rng)).norm() == 0.0);

    const Matrix4c xx = double_commutator_superop(sigma_x(), sigma_x());
    Matrix4c expect = Matrix4c::Zero();
    expect.block<2, 2>(0, 0) << 2.0, -2.0, -2.0, 2.0;
    expect.block<2, 2>(2, 2) << 2.0, -2.0, -2.0, 2.0;
    CHECK((xx - expect).norm() <= 1e-15);

    for (int i = 0; i < 50; ++i) {
        const Matrix2c P = random_hermitian(rng);
        const Matrix2c Q = random_hermitian(rng);
        CHECK((double_commutator_superop(P, Q) - superop_by_units(P, Q)).norm() <= 1e-12);
    }
}

TEST_CASE("rotating sigma_x") {
    CHECK((sigma_x_rotating(0.0, 1.0) - sigma_x()).norm() <= 1e-16);
    CHECK((sigma_x_rotating(std::numbers::pi / 2.0, 1.0) - sigma_y()).norm() <= 1e-15);
    const Matrix2c diag = (sigma_x() + sigma_y()) / std::sqrt(2.0);
    CHECK((sigma_x_rotating(0.5, std::numbers::pi / 2.0) - diag).norm() <= 1e-15);
}

TEST_CASE("scalar assembly") {
    HypothesisSpec spec;
    spec.variant = KernelVariant::Scalar;
    spec.q = spec.r = 0;
    const KernelHypothesis h(spec, {PadeModel(0, 0, {cplx{0.8, 0.0}, 1.0})});
    const Matrix4c k = h.assemble(1.0, 0.4);
    CHECK(k(2, 2) == cplx{-0.8});
    CHECK(k(3, 3) == cplx{-0.8});
    Matrix4c rest = k;
    rest(2, 2) = rest(3, 3) = 0.0;
    CHECK(rest.norm() == 0.0);
}

TEST_CASE("block assembly") {
    std::mt19937_64 rng(12);
    HypothesisSpec spec;
    spec.variant = KernelVariant::Block;
    spec.q = spec.r = 3;
    spec.eps0 = 1.3;
    std::vector<PadeModel> atoms;
    for (int a = 0; a < 4; ++a) atoms.push_back(pole_free_model(rng, 3, 3));
    const KernelHypothesis h(spec, atoms);
    for (int i = 0; i < 20; ++i) {
        const double t = 0.15 * i;
        const double lag = 0.1 * i;
        const Matrix4c k = h.assemble(t, lag);
        // population rows sum to zero
        CHECK((k.row(0) + k.row(1)).norm() <= 1e-15);
        const cplx phase = std::exp(cplx{0.0, -2.0 * spec.eps0 * t});
        CHECK(std::abs(k(2, 3) - phase * pade_eval(atoms[3], lag)) <= 1e-15);
        CHECK(std::abs(k(3, 2) - std::conj(k(2, 3))) <= 1e-15);
        CHECK(std::abs(k(3, 3) - std::conj(k(2, 2))) <= 1e-15);
        CHECK(std::abs(k(0, 0) - pade_eval(atoms[0], lag)) <= 1e-15);
        CHECK(std::abs(k(0, 1) - pade_eval(atoms[1], lag)) <= 1e-15);
        CHECK(std::abs(k(2, 2) - pade_eval(atoms[2], lag)) <= 1e-15);
    }
}

TEST_CASE("hermiticity propagation") {
    std::mt19937_64 rng(21);
    // Block with real population atoms
    HypothesisSpec block;
    block.variant = KernelVariant::Block;
    block.q = block.r = 2;
    std::vector<PadeModel> atoms;
    for (int a = 0; a < 4; ++a) {
        auto m = pole_free_model(rng, 2, 2);
        if (a < 2)
            for (auto& c : m.coefficients()) c = c.real();
        atoms.push_back(m);
    }
    const KernelHypothesis bh(block, atoms);

    HypothesisSpec scalar;
    scalar.variant = KernelVariant::Scalar;
    scalar.q = scalar.r = 2;
    scalar.real_mode = true;
    auto sc = pole_free_model(rng, 2, 2);
    for (auto& c : sc.coefficients()) c = c.real();
    const KernelHypothesis sh(scalar, {sc});

    // Rank-1 cross with real latent atoms, so C_xz is real.
    HypothesisSpec cross;
    cross.variant = KernelVariant::Rank1Cross;
    cross.q = cross.r = 2;
    auto fx = pole_free_model(rng, 2, 2), fz = pole_free_model(rng, 2, 2);
    for (auto& c : fx.coefficients()) c = c.real();
    for (auto& c : fz.coefficients()) c = c.real();
    const KernelHypothesis ch(cross, {fx, fz});

    for (int i = 0; i < 50; ++i) {
        const StateVector x = random_physical_vector(rng);
        const double t = 0.06 * i, lag = 0.05 * i;
        for (const KernelHypothesis* h : {&bh, &sh, &ch}) {
            const StateVector y = h->assemble(t, lag) * x;
            CHECK(std::abs(y[3] - std::conj(y[2])) <= 1e-13);
            CHECK(std::abs(y[0].imag()) <= 1e-13);
            CHECK(std::abs(y[1].imag()) <= 1e-13);
        }
    }
}

TEST_CASE("rank-1 cross assembly") {
    std::mt19937_64 rng(31);
    HypothesisSpec spec;
    spec.variant = KernelVariant::Rank1Cross;
    spec.q = spec.r = 3;
    const PadeModel fx = pole_free_model(rng, 3, 3), fz = pole_free_model(rng, 3, 3);
    const KernelHypothesis h(spec, {fx, fz});
    for (double lag : {0.0, 0.01, 0.5, 2.9}) {
        const auto c = h.correlations(lag);
        CHECK(c.zx == std::conj(c.xz));
        const cplx vx = pade_eval(fx, lag), vz = pade_eval(fz, lag);
        CHECK(std::abs(c.xx - std::norm(vx)) <= 1e-15);
        CHECK(std::abs(c.zz - std::norm(vz)) <= 1e-15);
        CHECK(std::abs(c.xz - vx * std::conj(vz)) <= 1e-15);
    }

    // Direct construction from the rotating operator.
    const double t = 1.7, lag = 0.4;
    const auto c = h.correlations(lag);
    const Matrix2c sxt = sigma_x_rotating(t, spec.Delta);
    const Matrix4c direct = -(1.0 - std::exp(-lag / spec.t_ramp)) *
                            (c.xx * superop_by_units(sigma_x(), sxt) + c.zz * superop_by_units(sigma_z(), sigma_z()) +
                             c.xz * superop_by_units(sigma_x(), sigma_z()) + c.zx * superop_by_units(sigma_z(), sxt));
    CHECK((h.assemble(t, lag) - direct).norm() <= 1e-13);

    // f_x = 0: only the zz channel survives; it leaves populations untouched.
    const KernelHypothesis dephasing(spec, {PadeModel::zero(3, 3), fz});
    const Matrix4c k = dephasing.assemble(t, lag);
    CHECK(k.block<2, 4>(0, 0).norm() == 0.0);
    CHECK(k.block<4, 2>(0, 0).norm() == 0.0);

    CHECK(exponential_ramp(0.0, 0.05) == 0.0);
    CHECK(exponential_ramp(1.0, 0.05) == doctest::Approx(1.0 - std::exp(-20.0)));
    CHECK_THROWS_AS(KernelHypothesis(spec, {fx}), DomainError);
}

TEST_CASE("parameter packing") {
    HypothesisSpec t1;
    t1.variant = KernelVariant::Scalar;
    t1.real_mode = true;
    CHECK(t1.parameter_count() == 10);

    HypothesisSpec t2;
    t2.variant = KernelVariant::Block;
    t2.q = t2.r = 3;
    CHECK(t2.parameter_count() == 64);

    HypothesisSpec full;
    full.variant = KernelVariant::Full;
    full.learn_A = true;
    for (int q : {1, 2, 3, 4})
        for (int r : {0, 2, 4}) {
            full.q = q;
            full.r = r;
            CHECK(full.parameter_count() == static_cast<std::size_t>(32 * (q + r + 2) + 32));
        }

    std::mt19937_64 rng(77);
    std::normal_distribution<double> n;
    for (HypothesisSpec spec : {t1, t2, full}) {
        std::vector<double> v(spec.parameter_count());
        for (double& x : v) x = n(rng);
        const LearnedModel m = unpack(spec, v);
        CHECK(pack(m.kernel, m.A) == v);
        v.push_back(0.0);
        CHECK_THROWS_AS(unpack(spec, v), LengthMismatch);
    }

    // A is taken from the fixed matrix when it is not learned.
    Matrix4c fixed = Matrix4c::Identity();
    const LearnedModel m = unpack(t2, std::vector<double>(64, 0.1), fixed);
    CHECK(m.A == fixed);
    CHECK(m.kernel.atoms()[0].coefficients()[0] == cplx{0.1, 0.1});
}

TEST_CASE("variant names") {
    for (KernelVariant v : {KernelVariant::Scalar, KernelVariant::Block, KernelVariant::Rank1Cross, KernelVariant::Full})
        CHECK(variant_from_string(to_string(v)) == v);
    CHECK_THROWS_AS(variant_from_string("dense"), DomainError);
}
}
