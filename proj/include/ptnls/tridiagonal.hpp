#pragma once

#include "ptnls/model.hpp"

#include <span>
#include <vector>

namespace ptnls {

/// Thomas algorithm for a complex tridiagonal system with constant
/// off-diagonals (lower = upper = off) and a varying main diagonal.
/// Returns false when a pivot vanishes or turns non-finite.
class TridiagonalSolver {
public:
    bool solve(cplx off, std::span<const cplx> diag, std::span<const cplx> rhs, std::span<cplx> x);

private:
    std::vector<cplx> cprime_;
};

} // namespace ptnls
