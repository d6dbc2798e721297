#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memkern/pade.hpp"
#include "memkern/types.hpp"

namespace memkern {

enum class KernelVariant {
    Scalar,      // one atom on the coherences (pure dephasing)
    Block,       // four atoms, population/coherence block layout
    Rank1Cross,  // two latent atoms f_x, f_z in a double-commutator kernel
    Full,        // one independent atom per kernel entry
};

std::string to_string(KernelVariant v);
KernelVariant variant_from_string(std::string_view name);

struct HypothesisSpec {
    KernelVariant variant = KernelVariant::Scalar;
    int q = 4;
    int r = 4;
    bool real_mode = false;  // atoms carry real coefficients only
    bool learn_A = false;    // generator A is part of the parameter vector
    double eps0 = 1.0;       // qubit splitting (Block phase)
    double Delta = 1.0;      // rotating-frame frequency (Rank1Cross)
    double t_ramp = 0.05;    // small-lag ramp time (Rank1Cross)
    double pole_tol = kDefaultPoleTol;

    std::size_t atom_count() const;
    std::vector<std::string> atom_names() const;
    std::size_t coefficients_per_atom() const { return static_cast<std::size_t>(q + r + 2); }
    std::size_t parameter_count() const;
};

// Scalar bath correlations entering the cross-channel kernel.
struct ScalarCorrelations {
    cplx xx, zz, xz, zx;
};

double exponential_ramp(double lag, double t_ramp);

// -[C_xx S(sx, sx(t)) + C_zz S(sz, sz) + C_xz S(sx, sz) + C_zx S(sz, sx(t))] * ramp(lag)
Matrix4c cross_channel_kernel(const ScalarCorrelations& c, double t, double lag, double Delta,
                              double t_ramp);

// Block layout given the four scalar kernels; b10 must already carry its
// time-dependent phase.
Matrix4c block_kernel(cplx b00, cplx b11, cplx b01, cplx b10);

class KernelHypothesis {
public:
    KernelHypothesis(HypothesisSpec spec, std::vector<PadeModel> atoms);

    // All atoms zero over a unit denominator.
    static KernelHypothesis zero(const HypothesisSpec& spec);

    const HypothesisSpec& spec() const noexcept { return spec_; }
    std::span<const PadeModel> atoms() const noexcept { return atoms_; }

    // 4x4 kernel value B(t, lag). Throws PoleError from the atoms.
    Matrix4c assemble(double t, double lag) const;

    // Rank1Cross only: (f_x f_x*, f_z f_z*, f_x f_z*, conj of the latter).
    ScalarCorrelations correlations(double lag) const;

private:
    HypothesisSpec spec_;
    std::vector<PadeModel> atoms_;
};

inline Matrix4c assemble_kernel(const KernelHypothesis& h, double t, double lag) {
    return h.assemble(t, lag);
}

struct LearnedModel {
    KernelHypothesis kernel;
    Matrix4c A = Matrix4c::Zero();
};

// Layout: [A entries, row-major, (Re, Im)] if learn_A, then every atom's
// coefficients in atom order as (Re, Im) pairs, or Re only in real mode.
std::vector<double> pack(const KernelHypothesis& h, const Matrix4c& A);
LearnedModel unpack(const HypothesisSpec& spec, std::span<const double> v,
                    const Matrix4c& fixed_A = Matrix4c::Zero());

}  // namespace memkern
