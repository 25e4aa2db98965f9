#include "npns/regularization.hpp"

#include <algorithm>
#include <cmath>

namespace npns {

double cutoff_phi(double x, double R) {
    if (!(R > 0.0)) throw DomainError("cutoff_phi: R must be positive");
    if (!(x >= 0.0)) throw DomainError("cutoff_phi: x must be >= 0");
    if (x <= R) return 1.0;
    if (x >= 2.0 * R) return 0.0;
    const double t = (2.0 * R - x) / R;  // in (0,1)
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

namespace {

// half-sample mirror: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
inline int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<double> gauss_kernel(double eps, double h) {
    const int r = std::max(1, static_cast<int>(std::ceil(4.0 * eps / h)));
    std::vector<double> w(static_cast<size_t>(2 * r + 1));
    double sum = 0.0;
    for (int d = -r; d <= r; ++d) {
        const double x = d * h;
        w[static_cast<size_t>(d + r)] = std::exp(-x * x / (2.0 * eps * eps));
        sum += w[static_cast<size_t>(d + r)];
    }
    for (double& x : w) x /= sum;
    return w;
}

}  // namespace

ScalarField mollify(const ScalarField& f, double eps) {
    if (!(eps > 0.0)) throw DomainError("mollify: eps must be positive");
    const Grid& g = f.grid;
    const std::vector<double> wx = gauss_kernel(eps, g.hx());
    const std::vector<double> wy = gauss_kernel(eps, g.hy());
    const int rx = (static_cast<int>(wx.size()) - 1) / 2;
    const int ry = (static_cast<int>(wy.size()) - 1) / 2;

    ScalarField tmp(g), out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double acc = 0.0;
            for (int d = -rx; d <= rx; ++d)
                acc += wx[static_cast<size_t>(d + rx)] * f(reflect(i + d, g.nx), j);
            tmp(i, j) = acc;
        }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double acc = 0.0;
            for (int d = -ry; d <= ry; ++d)
                acc += wy[static_cast<size_t>(d + ry)] * tmp(i, reflect(j + d, g.ny));
            out(i, j) = acc;
        }
    return out;
}

TransportFactors truncation_factors(const TruncationSpec& spec,
                                    double grad_u_l2, double grad_psi_w13p) {
    TransportFactors f;
    if (spec.R_u) f.phi_adv = cutoff_phi(grad_u_l2, *spec.R_u);
    if (spec.R_psi) f.phi_drift = cutoff_phi(grad_psi_w13p, *spec.R_psi);
    return f;
}

std::optional<size_t> FirstHits::earliest() const {
    std::optional<size_t> e;
    for (const auto& h : {u_h1, c_h1, grad_u_l2, grad_psi_w13p, u4_running})
        if (h && (!e || *h < *e)) e = h;
    return e;
}

const char* FirstHits::which() const {
    const auto e = earliest();
    if (!e) return "";
    if (u_h1 == e) return "u_h1";
    if (c_h1 == e) return "c_h1";
    if (grad_u_l2 == e) return "grad_u_l2";
    if (grad_psi_w13p == e) return "grad_psi_w13p";
    return "u4_running";
}

void update_hits(FirstHits& hits, const DiagnosticsRecord& rec, size_t step,
                 const MonitorThresholds& th) {
    auto mark = [&](std::optional<size_t>& slot, double value, double bound) {
        if (!slot && value > bound) slot = step;
    };
    mark(hits.u_h1, rec.u_h1, th.u_h1);
    double c_h1_max = 0.0;
    for (double v : rec.c_h1) c_h1_max = std::max(c_h1_max, v);
    mark(hits.c_h1, c_h1_max, th.c_h1);
    mark(hits.grad_u_l2, rec.grad_u_l2, th.grad_u_l2);
    mark(hits.grad_psi_w13p, rec.grad_psi_w13p, th.grad_psi_w13p);
    mark(hits.u4_running, rec.u4_running, th.u4_running);
}

FirstHits stopping_monitor(const std::vector<DiagnosticsRecord>& trajectory,
                           const MonitorThresholds& thresholds) {
    FirstHits hits;
    for (size_t n = 0; n < trajectory.size(); ++n)
        update_hits(hits, trajectory[n], n, thresholds);
    return hits;
}

}  // namespace npns
