#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "memkern/types.hpp"

// Special functions and bath correlation functions. Units: hbar = 1, k_B T = 1.
namespace memkern {

struct SpectralDensityParams {
    double g = 1.0;       // coupling strength
    double p = 1.0;       // Ohmicity exponent
    double Lambda = 1.0;  // cutoff frequency

    void validate() const;
};

// Frequency quadrature over [0, Omega]. The rule is the trapezoidal rule on
// `nodes` uniformly spaced points in u = omega^(1/k) (k = 2 for p >= 1/2,
// ceil(1/p) below), which removes the omega^(p-1) behaviour of the thermal
// integrand at the origin.
struct QuadratureConfig {
    double Omega = 1000.0;
    std::size_t nodes = std::size_t{1} << 18;

    void validate() const;
};

double gamma_fn(double z);

// Hurwitz zeta sum_{k>=0} (a + k)^(-s) for s > 1, Re(a) > 0.
cplx hurwitz_zeta(double s, cplx a);

double spectral_density(double omega, const SpectralDensityParams& params);
double bose_occupation(double omega);

// Closed form g*(I1 + I2) of the pure-dephasing correlation at Lambda = 1.
double dephasing_correlation(double t, const SpectralDensityParams& params);
double dephasing_term_vacuum(double t, double p);   // I1 at g = 1
double dephasing_term_thermal(double t, double p);  // I2 at g = 1

// Tabulated frequency quadrature. Node weights already include the
// substitution Jacobian, the spectral density and the thermal factors, so a
// thermal moment is a single weighted sum of a phase.
class FrequencyQuadrature {
public:
    FrequencyQuadrature(const SpectralDensityParams& params, const QuadratureConfig& quad);

    std::span<const double> omegas() const noexcept { return omega_; }

    // sum_i w_i J(w_i)(2n+1) cos(w_i t)
    double dephasing(double t) const;

    struct Moments {
        double coth_cos = 0.0;  // int J (2n+1) cos((eps0 - w) lag)
        double coth_sin = 0.0;  // int J (2n+1) sin((eps0 - w) lag)
        double plus_cos = 0.0;  // int J (n+1)  cos((eps0 - w) lag)
    };
    Moments decay_moments(double lag, double eps0) const;

private:
    std::vector<double> omega_;
    std::vector<double> w_coth_;  // weight * J * (2n+1)
    std::vector<double> w_plus_;  // weight * J * (n+1)
};

double dephasing_correlation_quadrature(double t, const SpectralDensityParams& params,
                                        const QuadratureConfig& quad);

struct DecayKernelValues {
    cplx b00, b11, b01, b10;
};

// The four scalar kernels of the decay-and-decoherence model. b10 carries the
// explicit exp(-2 i eps0 t) phase, which makes the assembled kernel two-time.
DecayKernelValues decay_kernels(double lag, double t, const SpectralDensityParams& params,
                                double eps0, const QuadratureConfig& quad);
DecayKernelValues decay_kernels(const FrequencyQuadrature::Moments& m, double t, double eps0);

}  // namespace memkern
