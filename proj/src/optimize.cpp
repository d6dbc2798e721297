#include "memkern/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "memkern/errors.hpp"
#include "memkern/objective.hpp"
#include "memkern/parallel.hpp"

namespace memkern {

void OptimOptions::validate() const {
    if (!(grad_tol > 0.0) || !(step_tol > 0.0) || !(fd_step > 0.0) || !(init_scale > 0.0))
        throw DomainError("optimizer tolerances must be positive");
    if (n_starts < 1) throw DomainError("need at least one start");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::GradientTolerance: return "gradient_tolerance";
        case Termination::StepTolerance: return "step_tolerance";
        case Termination::MaxIterations: return "max_iterations";
        case Termination::LineSearchFailure: return "line_search_failure";
        case Termination::GuardedGradient: return "guarded_gradient";
    }
    return "unknown";
}

std::vector<double> fd_gradient(const ScalarFunction& f, std::span<const double> v, double fd_step) {
    const std::size_t n = v.size();
    std::vector<double> grad(n, 0.0);
    std::vector<char> guarded(n, 0);
    parallel_for(n, [&](std::size_t k) {
        std::vector<double> probe(v.begin(), v.end());
        const double step = fd_step * std::max(1.0, std::abs(v[k]));
        probe[k] = v[k] + step;
        const double fp = f(probe);
        probe[k] = v[k] - step;
        const double fm = f(probe);
        if (fp >= kGuardValue || fm >= kGuardValue || !std::isfinite(fp) || !std::isfinite(fm)) {
            guarded[k] = 1;
            return;
        }
        grad[k] = (fp - fm) / (2.0 * step);
    });
    for (std::size_t k = 0; k < n; ++k)
        if (guarded[k]) throw NonFiniteGradient(k);
    return grad;
}

namespace {

using Vec = Eigen::VectorXd;

Vec to_vec(std::span<const double> s) { return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

constexpr double kArmijo = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 60;

}  // namespace

MinimizeResult minimize(const ScalarFunction& f, std::span<const double> v0, const OptimOptions& opts) {
    opts.validate();
    const auto n = static_cast<Eigen::Index>(v0.size());
    MinimizeResult res;
    Vec x = to_vec(v0);
    double fx = f(v0);
    res.f0 = fx;
    res.history.push_back(fx);
    auto finish = [&](Termination status, double gnorm) {
        res.x = to_std(x);
        res.f = fx;
        res.grad_norm = gnorm;
        res.status = status;
        return res;
    };
    if (n == 0) return finish(Termination::GradientTolerance, 0.0);
    if (fx >= kGuardValue) return finish(Termination::GuardedGradient, 0.0);

    auto gradient = [&](const Vec& at) { return to_vec(fd_gradient(f, to_std(at), opts.fd_step)); };
    Vec g;
    try {
        g = gradient(x);
    } catch (const NonFiniteGradient&) {
        return finish(Termination::GuardedGradient, 0.0);
    }

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    bool fresh_hessian = true;
    for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
        res.iterations = iter;
        const double gnorm = g.norm();
        if (gnorm <= opts.grad_tol) return finish(Termination::GradientTolerance, gnorm);

        Vec d = -H * g;
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            H.setIdentity();
            fresh_hessian = true;
            d = -g;
            slope = -gnorm * gnorm;
        }
        // An identity Hessian knows nothing about scale; cap the first trial step.
        double step = fresh_hessian ? std::min(1.0, 1.0 / gnorm) : 1.0;

        bool accepted = false;
        Vec x_new;
        double f_new = fx;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            x_new = x + step * d;
            f_new = f(to_std(x_new));
            if (f_new < kGuardValue && std::isfinite(f_new) && f_new <= fx + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= kBacktrack;
        }
        if (!accepted) {
            if (!fresh_hessian) {
                // retry once along steepest descent before giving up
                H.setIdentity();
                fresh_hessian = true;
                continue;
            }
            return finish(Termination::LineSearchFailure, gnorm);
        }

        const Vec s = x_new - x;
        Vec g_new;
        try {
            g_new = gradient(x_new);
        } catch (const NonFiniteGradient&) {
            x = x_new;
            fx = f_new;
            res.history.push_back(fx);
            res.iterations = iter + 1;
            return finish(Termination::GuardedGradient, gnorm);
        }
        const Vec y = g_new - g;
        x = x_new;
        fx = f_new;
        g = g_new;
        res.history.push_back(fx);
        res.iterations = iter + 1;

        if (s.norm() <= opts.step_tol * std::max(1.0, x.norm())) return finish(Termination::StepTolerance, g.norm());

        const double sy = s.dot(y);
        if (sy > std::numeric_limits<double>::epsilon() * s.norm() * y.norm()) {
            if (fresh_hessian) H *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Vec Hy = H * y;
            const double yHy = y.dot(Hy);
            H += ((1.0 + rho * yHy) * rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
            fresh_hessian = false;
        }
    }
    res.iterations = opts.max_iters;
    return finish(Termination::MaxIterations, g.norm());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 of the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

MultiStartResult multi_start(const ScalarFunction& f, const Initializer& init, const OptimOptions& opts,
                             std::span<const double> warm_start) {
    opts.validate();
    MultiStartResult out;
    bool have_best = false;
    for (std::size_t k = 0; k < opts.n_starts; ++k) {
        std::vector<double> v0;
        if (k == 0 && !warm_start.empty()) {
            v0.assign(warm_start.begin(), warm_start.end());
        } else {
            std::mt19937_64 rng(derive_seed(opts.seed, k));
            v0 = init(rng);
        }
        MinimizeResult r = minimize(f, v0, opts);
        out.start_objectives.push_back(r.f0);
        out.final_objectives.push_back(r.f);
        if (r.f >= kGuardValue) continue;
        if (!have_best || r.f < out.best.f) {
            out.best = std::move(r);
            out.start_index = k;
            have_best = true;
        }
    }
    if (!have_best) throw AllStartsFailed();
    return out;
}

}  // namespace memkern
