#include "hermitian_eig.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace nfa {

namespace {

// Largest off-diagonal magnitude of the row-major Hermitian work matrix.
double offdiag_max(const std::vector<std::complex<double>>& a, int n) {
    double m = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            m = std::max(m, std::abs(a[static_cast<size_t>(p) * n + q]));
    return m;
}

} // namespace

eig_result hermitian_eig(const std::complex<double>* a_rowmajor, int n) {
    if (n < 1 || a_rowmajor == nullptr)
        fail(errc::invalid_argument, "eigensolver needs a square matrix of order >= 1");

    const size_t nn = static_cast<size_t>(n);
    std::vector<std::complex<double>> a(nn * nn);
    // Symmetrize defensively so tiny Hermitian violations from accumulated
    // rounding in the caller cannot destabilize the rotations.
    for (int i = 0; i < n; ++i) {
        a[nn * i + i] = a_rowmajor[nn * i + i].real();
        for (int j = i + 1; j < n; ++j) {
            const auto v = 0.5 * (a_rowmajor[nn * i + j] + std::conj(a_rowmajor[nn * j + i]));
            a[nn * i + j] = v;
            a[nn * j + i] = std::conj(v);
        }
    }

    std::vector<std::complex<double>> v(nn * nn, 0.0);
    for (int i = 0; i < n; ++i)
        v[nn * i + i] = 1.0;

    double trace = 0.0;
    for (int i = 0; i < n; ++i)
        trace += a[nn * i + i].real();
    const double threshold = JACOBI_OFFDIAG_FACTOR * std::max(std::abs(trace), DBL_MIN);
    const double skip = threshold * 1e-3;

    bool converged = offdiag_max(a, n) <= threshold;
    for (int sweep = 0; sweep < JACOBI_SWEEP_BUDGET && !converged; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const std::complex<double> beta = a[nn * p + q];
                const double b = std::abs(beta);
                if (b <= skip)
                    continue;
                const std::complex<double> omega = beta / b; // phase of the pivot
                const double alpha = a[nn * p + p].real();
                const double gamma = a[nn * q + q].real();
                const double tau = (gamma - alpha) / (2.0 * b);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary U embeds [[c, s], [-s*conj(omega), c*conj(omega)]]
                // at rows/cols (p, q); phase factor folds the pivot real.
                const std::complex<double> sw = s * std::conj(omega);
                const std::complex<double> cw = c * std::conj(omega);
                for (int k = 0; k < n; ++k) { // A <- A U
                    const auto ap = a[nn * k + p];
                    const auto aq = a[nn * k + q];
                    a[nn * k + p] = c * ap - sw * aq;
                    a[nn * k + q] = s * ap + cw * aq;
                }
                const std::complex<double> swc = s * omega;
                const std::complex<double> cwc = c * omega;
                for (int k = 0; k < n; ++k) { // A <- U^H A
                    const auto ap = a[nn * p + k];
                    const auto aq = a[nn * q + k];
                    a[nn * p + k] = c * ap - swc * aq;
                    a[nn * q + k] = s * ap + cwc * aq;
                }
                // Exact post-rotation values for the pivot block.
                a[nn * p + p] = alpha - t * b;
                a[nn * q + q] = gamma + t * b;
                a[nn * p + q] = 0.0;
                a[nn * q + p] = 0.0;
                for (int k = 0; k < n; ++k) { // V <- V U
                    const auto vp = v[nn * k + p];
                    const auto vq = v[nn * k + q];
                    v[nn * k + p] = c * vp - sw * vq;
                    v[nn * k + q] = s * vp + cw * vq;
                }
            }
        }
        converged = offdiag_max(a, n) <= threshold;
    }
    if (!converged)
        fail(errc::convergence, "eigensolver did not converge within the sweep budget");

    std::vector<int> order(nn);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return a[nn * i + i].real() > a[nn * j + j].real();
    });

    eig_result out;
    out.values.resize(nn);
    out.vectors.resize(nn * nn);
    for (size_t k = 0; k < nn; ++k) {
        const size_t src = static_cast<size_t>(order[k]);
        out.values[k] = a[nn * src + src].real();
        for (size_t i = 0; i < nn; ++i)
            out.vectors[k * nn + i] = v[nn * i + src];
    }
    return out;
}

} // namespace nfa
