#pragma once

#include <optional>
#include <vector>

namespace cartan::detail {

/// Finds real θ with Σ_j m[i][j] θ_j ≡ phi[i] (mod 1) for every row i, or
/// nullopt if the system has no solution. Integer row and column operations
/// reduce m to diagonal form; the phases follow the row operations.
std::optional<std::vector<double>> solve_mod_one(std::vector<std::vector<long long>> m,
                                                 std::vector<double> phi, double tolerance);

}  // namespace cartan::detail
