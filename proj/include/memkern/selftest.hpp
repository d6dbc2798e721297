#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "memkern/hypothesis.hpp"
#include "memkern/special.hpp"
#include "memkern/superop.hpp"

namespace memkern {

// Routines the checks call through. Replacing one lets tests confirm that the
// corresponding check notices a broken implementation.
struct SelftestHooks {
    std::function<cplx(double, cplx)> zeta = [](double s, cplx a) { return hurwitz_zeta(s, a); };
    std::function<Matrix4c(cplx, cplx, cplx, cplx)> block = block_kernel;
    std::function<Matrix4c(const Matrix2c&, const Matrix2c&)> double_commutator =
        [](const Matrix2c& p, const Matrix2c& q) { return double_commutator_superop(p, q); };
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_selftest(const SelftestHooks& hooks = {});

struct BenchRow {
    std::size_t M = 0;
    double error = 0.0;
    double order = 0.0;  // log(error ratio) / log(step ratio) against the previous row; 0 on the first
};

// x' = -int_0^t x, x(0) = 1 on [0, 3], whose solution is cos t.
std::vector<BenchRow> run_solver_benchmark(std::span<const std::size_t> sizes);

}  // namespace memkern
