#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace coop_bandit {

struct JacobiOptions {
    double off_diagonal_tolerance = 1e-12; // Frobenius norm of the off-diagonal part
    double symmetry_tolerance = 1e-12;
    int max_sweeps = 100;
};

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// returned in descending order.
inline std::vector<double> jacobi_eigenvalues(Matrix a, const JacobiOptions& opt = {}) {
    if (!a.square()) throw std::invalid_argument("jacobi: matrix is not square");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > opt.symmetry_tolerance)
                throw std::invalid_argument("jacobi: matrix is not symmetric");

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < opt.max_sweeps && off_norm() > opt.off_diagonal_tolerance; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Rotation angle that zeroes a(p,q); pick the smaller root for stability.
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    if (off_norm() > opt.off_diagonal_tolerance)
        throw std::runtime_error("jacobi: no convergence within sweep limit");

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

} // namespace coop_bandit
