#pragma once

#include "ptnls/model.hpp"

#include <cstddef>
#include <vector>

namespace ptnls {

/// Uniform radial grid on [0, L]; unknowns live on the n interior nodes
/// r_j = j * dr, j = 1..n, with p = q = 0 pinned at r = 0 and r = L.
struct RadialGrid {
    double L = 16.0;
    std::size_t n = 0;
    double dr = 0.0;

    static RadialGrid with_nodes(double L, std::size_t n);
    /// Nearest grid to the requested spacing.
    static RadialGrid with_spacing(double L, double dr);

    double r(std::size_t i) const { return static_cast<double>(i + 1) * dr; }
};

/// Reduced fields p = r u, q = r v on the interior nodes.
struct RadialState {
    RadialGrid grid;
    std::vector<cplx> p;
    std::vector<cplx> q;
    double t = 0.0;

    bool all_finite() const;
};

} // namespace ptnls
