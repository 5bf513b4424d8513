#pragma once

#include <complex>
#include <vector>

namespace nfa {

// Full eigendecomposition of an n x n complex Hermitian matrix by cyclic
// Jacobi rotations. Eigenvalues come back sorted descending; eigenvector k is
// the column slice vectors[k*n .. k*n+n-1]. Throws a convergence error if the
// off-diagonal mass has not fallen below 1e-12 * trace within 30 sweeps
// (never observed for PSD covariance inputs; the budget is a hard stop).
struct eig_result {
    std::vector<double> values;
    std::vector<std::complex<double>> vectors; // column-major
};

inline constexpr int JACOBI_SWEEP_BUDGET = 30;
inline constexpr double JACOBI_OFFDIAG_FACTOR = 1e-12;

eig_result hermitian_eig(const std::complex<double>* a_rowmajor, int n);

} // namespace nfa
