#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace npns::detail {

struct PcgScratch {
    std::vector<double> r, z, p, q;
    void resize(size_t n) {
        r.assign(n, 0.0);
        z.assign(n, 0.0);
        p.assign(n, 0.0);
        q.assign(n, 0.0);
    }
};

struct PcgOutcome {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;              // final 2-norm of b - Ax
    std::vector<double> history;        // residual 2-norm per iteration
};

// Preconditioned conjugate gradient, matrix-free. `apply(x, y)` writes A x
// into y; `diag_inv` is the Jacobi preconditioner (may be empty for identity).
// Stops when ||b - Ax||_2 <= tol_abs.
template <class Apply>
PcgOutcome pcg(Apply&& apply, const std::vector<double>& diag_inv,
               const std::vector<double>& b, std::vector<double>& x,
               double tol_abs, int max_iter, PcgScratch& s) {
    const size_t n = b.size();
    s.resize(n);
    PcgOutcome out;
    out.history.reserve(64);

    auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
        double acc = 0.0;
        for (size_t k = 0; k < a.size(); ++k) acc += a[k] * c[k];
        return acc;
    };

    apply(x, s.q);
    for (size_t k = 0; k < n; ++k) s.r[k] = b[k] - s.q[k];
    double rnorm = std::sqrt(dot(s.r, s.r));
    out.history.push_back(rnorm);
    if (rnorm <= tol_abs) {
        out.converged = true;
        out.residual = rnorm;
        return out;
    }

    if (diag_inv.empty())
        s.z = s.r;
    else
        for (size_t k = 0; k < n; ++k) s.z[k] = diag_inv[k] * s.r[k];
    s.p = s.z;
    double rz = dot(s.r, s.z);

    for (int it = 1; it <= max_iter; ++it) {
        apply(s.p, s.q);
        const double pq = dot(s.p, s.q);
        if (!(pq > 0.0)) break;  // indefinite direction; singular-system guard
        const double alpha = rz / pq;
        for (size_t k = 0; k < n; ++k) x[k] += alpha * s.p[k];
        for (size_t k = 0; k < n; ++k) s.r[k] -= alpha * s.q[k];
        rnorm = std::sqrt(dot(s.r, s.r));
        out.history.push_back(rnorm);
        out.iterations = it;
        if (rnorm <= tol_abs) {
            out.converged = true;
            break;
        }
        if (diag_inv.empty())
            s.z = s.r;
        else
            for (size_t k = 0; k < n; ++k) s.z[k] = diag_inv[k] * s.r[k];
        const double rz_next = dot(s.r, s.z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (size_t k = 0; k < n; ++k) s.p[k] = s.z[k] + beta * s.p[k];
    }
    out.residual = rnorm;
    return out;
}

}  // namespace npns::detail
