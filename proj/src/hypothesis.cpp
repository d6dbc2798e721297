#include "memkern/hypothesis.hpp"

#include <cmath>

#include "memkern/errors.hpp"
#include "memkern/superop.hpp"

namespace memkern {

std::string to_string(KernelVariant v) {
    switch (v) {
        case KernelVariant::Scalar: return "scalar";
        case KernelVariant::Block: return "block";
        case KernelVariant::Rank1Cross: return "rank1cross";
        case KernelVariant::Full: return "full";
    }
    return "unknown";
}

KernelVariant variant_from_string(std::string_view name) {
    if (name == "scalar") return KernelVariant::Scalar;
    if (name == "block") return KernelVariant::Block;
    if (name == "rank1cross") return KernelVariant::Rank1Cross;
    if (name == "full") return KernelVariant::Full;
    throw DomainError("unknown kernel variant '" + std::string(name) + "'");
}

std::size_t HypothesisSpec::atom_count() const {
    switch (variant) {
        case KernelVariant::Scalar: return 1;
        case KernelVariant::Block: return 4;
        case KernelVariant::Rank1Cross: return 2;
        case KernelVariant::Full: return 16;
    }
    return 0;
}

std::vector<std::string> HypothesisSpec::atom_names() const {
    switch (variant) {
        case KernelVariant::Scalar: return {"C"};
        case KernelVariant::Block: return {"B00", "B11", "B01", "B10"};
        case KernelVariant::Rank1Cross: return {"f_x", "f_z"};
        case KernelVariant::Full: {
            std::vector<std::string> names;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) names.push_back("B" + std::to_string(i) + std::to_string(j));
            return names;
        }
    }
    return {};
}

std::size_t HypothesisSpec::parameter_count() const {
    const std::size_t per_coeff = real_mode ? 1 : 2;
    return (learn_A ? 32 : 0) + atom_count() * coefficients_per_atom() * per_coeff;
}

double exponential_ramp(double lag, double t_ramp) {
    return t_ramp > 0.0 ? -std::expm1(-lag / t_ramp) : 1.0;
}

namespace {

struct CrossBasis {
    Matrix4c xx, xy, zx, zy, zz, xz;
};

// S(P, Q) is linear in Q, so S(P, sx(t)) = cos S(P, sx) + sin S(P, sy).
const CrossBasis& cross_basis() {
    static const CrossBasis basis{
        double_commutator_superop(sigma_x(), sigma_x()),
        double_commutator_superop(sigma_x(), sigma_y()),
        double_commutator_superop(sigma_z(), sigma_x()),
        double_commutator_superop(sigma_z(), sigma_y()),
        double_commutator_superop(sigma_z(), sigma_z()),
        double_commutator_superop(sigma_x(), sigma_z()),
    };
    return basis;
}

}  // namespace

Matrix4c cross_channel_kernel(const ScalarCorrelations& c, double t, double lag, double Delta,
                              double t_ramp) {
    const CrossBasis& b = cross_basis();
    const double cs = std::cos(Delta * t);
    const double sn = std::sin(Delta * t);
    const Matrix4c s_x_xt = cs * b.xx + sn * b.xy;
    const Matrix4c s_z_xt = cs * b.zx + sn * b.zy;
    const Matrix4c k = c.xx * s_x_xt + c.zz * b.zz + c.xz * b.xz + c.zx * s_z_xt;
    return -exponential_ramp(lag, t_ramp) * k;
}

Matrix4c block_kernel(cplx b00, cplx b11, cplx b01, cplx b10) {
    Matrix4c k = Matrix4c::Zero();
    k(0, 0) = b00;
    k(0, 1) = b11;
    k(1, 0) = -b00;
    k(1, 1) = -b11;
    k(2, 2) = b01;
    k(2, 3) = b10;
    k(3, 2) = std::conj(b10);
    k(3, 3) = std::conj(b01);
    return k;
}

KernelHypothesis::KernelHypothesis(HypothesisSpec spec, std::vector<PadeModel> atoms)
    : spec_(spec), atoms_(std::move(atoms)) {
    if (atoms_.size() != spec_.atom_count())
        throw DomainError("hypothesis '" + to_string(spec_.variant) + "' needs " +
                          std::to_string(spec_.atom_count()) + " atoms");
    for (const auto& a : atoms_)
        if (a.q() != spec_.q || a.r() != spec_.r) throw DomainError("atom orders differ from spec");
}

KernelHypothesis KernelHypothesis::zero(const HypothesisSpec& spec) {
    return KernelHypothesis(spec, std::vector<PadeModel>(spec.atom_count(), PadeModel::zero(spec.q, spec.r)));
}

ScalarCorrelations KernelHypothesis::correlations(double lag) const {
    if (spec_.variant != KernelVariant::Rank1Cross)
        throw DomainError("scalar correlations are defined for the rank-1 cross variant only");
    const cplx fx = pade_eval(atoms_[0], lag, spec_.pole_tol);
    const cplx fz = pade_eval(atoms_[1], lag, spec_.pole_tol);
    const cplx xz = fx * std::conj(fz);
    return {fx * std::conj(fx), fz * std::conj(fz), xz, std::conj(xz)};
}

Matrix4c KernelHypothesis::assemble(double t, double lag) const {
    const double tol = spec_.pole_tol;
    switch (spec_.variant) {
        case KernelVariant::Scalar: {
            // d rho01/dt = -int C rho01; the mirrored entry keeps rho10 = conj(rho01).
            const cplx c = pade_eval(atoms_[0], lag, tol);
            Matrix4c k = Matrix4c::Zero();
            k(2, 2) = -c;
            k(3, 3) = -std::conj(c);
            return k;
        }
        case KernelVariant::Block: {
            const cplx phase = std::exp(cplx{0.0, -2.0 * spec_.eps0 * t});
            return block_kernel(pade_eval(atoms_[0], lag, tol), pade_eval(atoms_[1], lag, tol),
                                pade_eval(atoms_[2], lag, tol),
                                phase * pade_eval(atoms_[3], lag, tol));
        }
        case KernelVariant::Rank1Cross:
            return cross_channel_kernel(correlations(lag), t, lag, spec_.Delta, spec_.t_ramp);
        case KernelVariant::Full: {
            Matrix4c k;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) k(i, j) = pade_eval(atoms_[static_cast<std::size_t>(4 * i + j)], lag, tol);
            return k;
        }
    }
    return Matrix4c::Zero();
}

std::vector<double> pack(const KernelHypothesis& h, const Matrix4c& A) {
    const HypothesisSpec& spec = h.spec();
    std::vector<double> v;
    v.reserve(spec.parameter_count());
    if (spec.learn_A) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                v.push_back(A(i, j).real());
                v.push_back(A(i, j).imag());
            }
    }
    for (const auto& atom : h.atoms())
        for (const cplx c : atom.coefficients()) {
            v.push_back(c.real());
            if (!spec.real_mode) v.push_back(c.imag());
        }
    return v;
}

LearnedModel unpack(const HypothesisSpec& spec, std::span<const double> v, const Matrix4c& fixed_A) {
    if (v.size() != spec.parameter_count()) throw LengthMismatch(spec.parameter_count(), v.size());
    std::size_t pos = 0;
    Matrix4c A = fixed_A;
    if (spec.learn_A) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                A(i, j) = cplx{v[pos], v[pos + 1]};
                pos += 2;
            }
    }
    std::vector<PadeModel> atoms;
    atoms.reserve(spec.atom_count());
    for (std::size_t a = 0; a < spec.atom_count(); ++a) {
        std::vector<cplx> xi(spec.coefficients_per_atom());
        for (auto& c : xi) {
            if (spec.real_mode) {
                c = cplx{v[pos++], 0.0};
            } else {
                c = cplx{v[pos], v[pos + 1]};
                pos += 2;
            }
        }
        atoms.emplace_back(spec.q, spec.r, std::move(xi));
    }
    return LearnedModel{KernelHypothesis(spec, std::move(atoms)), A};
}

}  // namespace memkern
