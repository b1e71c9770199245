#include "ptnls/tridiagonal.hpp"

#include <cmath>

namespace ptnls {

namespace {
bool usable(cplx pivot) {
    return std::isfinite(pivot.real()) && std::isfinite(pivot.imag()) && std::abs(pivot) > 1e-300;
}
} // namespace

bool TridiagonalSolver::solve(cplx off, std::span<const cplx> diag, std::span<const cplx> rhs,
                              std::span<cplx> x) {
    const std::size_t n = diag.size();
    if (n == 0) return true;
    cprime_.resize(n);

    cplx pivot = diag[0];
    if (!usable(pivot)) return false;
    cprime_[0] = off / pivot;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - off * cprime_[i - 1];
        if (!usable(pivot)) return false;
        cprime_[i] = off / pivot;
        x[i] = (rhs[i] - off * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= cprime_[i] * x[i + 1];
    return true;
}

} // namespace ptnls
