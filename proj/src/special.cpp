#include "memkern/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "memkern/errors.hpp"

namespace memkern {

void SpectralDensityParams::validate() const {
    if (!(g >= 0.0) || !(p > 0.0) || !(Lambda > 0.0))
        throw DomainError("spectral density needs g >= 0, p > 0, Lambda > 0");
}

void QuadratureConfig::validate() const {
    if (!(Omega > 0.0) || nodes < 2) throw DomainError("quadrature needs Omega > 0 and >= 2 nodes");
}

double gamma_fn(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("gamma_fn: argument must be positive");
    // Lanczos approximation, g = 7, nine terms.
    static constexpr std::array<double, 9> c{
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z < 0.5) {
        // reflection keeps the series in its accurate half-plane
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_fn(1.0 - z));
    }
    const double x = z - 1.0;
    double a = c[0];
    const double t = x + 7.5;
    for (std::size_t i = 1; i < c.size(); ++i) a += c[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

cplx hurwitz_zeta(double s, cplx a) {
    if (!(s > 1.0)) throw DomainError("hurwitz_zeta: s must exceed 1");
    if (!(a.real() > 0.0)) throw DomainError("hurwitz_zeta: Re(a) must be positive");

    constexpr int kDirect = 25;
    // B_{2j} / (2j)! for j = 1..6
    static constexpr std::array<double, 6> bern{
        1.0 / 6.0 / 2.0,
        -1.0 / 30.0 / 24.0,
        1.0 / 42.0 / 720.0,
        -1.0 / 30.0 / 40320.0,
        5.0 / 66.0 / 3628800.0,
        -691.0 / 2730.0 / 479001600.0};

    cplx sum{0.0, 0.0};
    for (int k = 0; k < kDirect; ++k) sum += std::exp(-s * std::log(a + static_cast<double>(k)));

    const cplx w = a + static_cast<double>(kDirect);
    const cplx log_w = std::log(w);
    const cplx w_pow = std::exp(-s * log_w);  // w^{-s}
    sum += w * w_pow / (s - 1.0) + 0.5 * w_pow;

    // Bernoulli tail: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * w^{-s-2j+1}
    const cplx inv_w2 = 1.0 / (w * w);
    cplx term = w_pow / w;  // w^{-s-1}
    double rising = s;      // (s)_1
    for (std::size_t j = 0; j < bern.size(); ++j) {
        sum += bern[j] * rising * term;
        const double m = s + 2.0 * static_cast<double>(j);
        rising *= (m + 1.0) * (m + 2.0);
        term *= inv_w2;
    }
    return sum;
}

double spectral_density(double omega, const SpectralDensityParams& params) {
    if (omega <= 0.0) return 0.0;
    const double L = params.Lambda;
    return params.g * std::pow(omega, params.p) * std::pow(L, 1.0 - params.p) * std::exp(-omega / L);
}

double bose_occupation(double omega) {
    if (!(omega > 0.0)) throw DomainError("bose_occupation: omega must be positive");
    return 1.0 / std::expm1(omega);
}

double dephasing_term_vacuum(double t, double p) {
    return gamma_fn(p + 1.0) * std::pow(t * t + 1.0, -0.5 * (p + 1.0)) *
           std::cos((p + 1.0) * std::atan(t));
}

double dephasing_term_thermal(double t, double p) {
    return 2.0 * (gamma_fn(p + 1.0) * hurwitz_zeta(p + 1.0, cplx{2.0, -t})).real();
}

double dephasing_correlation(double t, const SpectralDensityParams& params) {
    if (!(params.p > 0.0)) throw DomainError("dephasing_correlation: p must be positive");
    if (params.Lambda != 1.0) throw DomainError("closed-form correlation is defined at Lambda = 1");
    return params.g * (dephasing_term_vacuum(t, params.p) + dephasing_term_thermal(t, params.p));
}

FrequencyQuadrature::FrequencyQuadrature(const SpectralDensityParams& params,
                                         const QuadratureConfig& quad) {
    params.validate();
    quad.validate();
    const double k = params.p >= 0.5 ? 2.0 : std::ceil(1.0 / params.p);
    const std::size_t n = quad.nodes;
    const double u_max = std::pow(quad.Omega, 1.0 / k);
    const double du = u_max / static_cast<double>(n - 1);
    const double scale = params.g * std::pow(params.Lambda, 1.0 - params.p);

    omega_.reserve(n);
    w_coth_.reserve(n);
    w_plus_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double trap = (i == 0 || i + 1 == n) ? 0.5 * du : du;
        const double u = static_cast<double>(i) * du;
        if (i == 0) {
            // limit of k u^{k-1} J(u^k) * thermal factor at u -> 0
            const double c = std::abs(k * params.p - 1.0) < 1e-12 ? k * scale : 0.0;
            omega_.push_back(0.0);
            w_coth_.push_back(trap * 2.0 * c);
            w_plus_.push_back(trap * c);
            continue;
        }
        const double w = std::pow(u, k);
        const double jac = k * std::pow(u, k - 1.0);
        const double J = spectral_density(w, params);
        if (J == 0.0) break;  // exponential cutoff underflowed; the rest is zero too
        omega_.push_back(w);
        w_coth_.push_back(trap * jac * J / std::tanh(0.5 * w));
        w_plus_.push_back(trap * jac * J / -std::expm1(-w));
    }
}

double FrequencyQuadrature::dephasing(double t) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < omega_.size(); ++i) sum += w_coth_[i] * std::cos(omega_[i] * t);
    return sum;
}

FrequencyQuadrature::Moments FrequencyQuadrature::decay_moments(double lag, double eps0) const {
    Moments m;
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        const double theta = (eps0 - omega_[i]) * lag;
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        m.coth_cos += w_coth_[i] * c;
        m.coth_sin += w_coth_[i] * s;
        m.plus_cos += w_plus_[i] * c;
    }
    return m;
}

double dephasing_correlation_quadrature(double t, const SpectralDensityParams& params,
                                        const QuadratureConfig& quad) {
    if (params.g == 0.0) return 0.0;
    return FrequencyQuadrature(params, quad).dephasing(t);
}

DecayKernelValues decay_kernels(const FrequencyQuadrature::Moments& m, double t, double eps0) {
    DecayKernelValues out;
    out.b00 = -m.coth_cos;
    out.b11 = m.plus_cos;
    // int J(2n+1) e^{-i theta} = C - iS and e^{+i theta} = C + iS
    out.b01 = -0.5 * cplx{m.coth_cos, -m.coth_sin};
    out.b10 = 0.5 * std::exp(cplx{0.0, -2.0 * eps0 * t}) * cplx{m.coth_cos, m.coth_sin};
    return out;
}

DecayKernelValues decay_kernels(double lag, double t, const SpectralDensityParams& params,
                                double eps0, const QuadratureConfig& quad) {
    if (params.g == 0.0) return {};
    return decay_kernels(FrequencyQuadrature(params, quad).decay_moments(lag, eps0), t, eps0);
}

}  // namespace memkern
