#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "npns/grid.hpp"
#include "npns/rng.hpp"

namespace npns {

struct NoiseSpec {
    int K = 16;
    double sigma0 = 0.5;
    double q = 1.0;        // sigma_k = sigma0 * k^-q, requires q > 1/2
    double alpha_u = 1.0;  // velocity mixing weight
    double alpha_E = 1.0;  // potential-gradient mixing weight
    std::string mode_family = "cosine";
};

struct WienerIncrement {
    std::vector<double> dw;  // K independent Normal(0, dt) draws
    double dt = 0.0;
    uint64_t stream = 0;     // seed lineage
    uint64_t step = 0;
};

// Truncated cylindrical Wiener forcing f(u, grad psi) e_k = sigma_k phi_k w,
// w = alpha_u u + alpha_E grad psi, with cosine modes orthonormal in the
// discrete cell L2 inner product. Output fields are velocity-like: boundary
// faces are zeroed (the no-slip space has no wall degrees of freedom).
class NoiseModel {
public:
    NoiseModel(const Grid& grid, const NoiseSpec& spec);

    const Grid& grid() const { return grid_; }
    const NoiseSpec& spec() const { return spec_; }
    int modes() const { return spec_.K; }
    double sigma(int k) const { return sigma_[static_cast<size_t>(k)]; }
    double sigma_sq_sum() const { return sigma_sq_sum_; }

    // closed-form growth/Lipschitz constants of the shipped family
    double ell1() const { return ell1_; }
    double ell2() const { return ell1_; }  // f is linear in (u, grad psi)
    double ell3() const { return ell3_; }
    double ell4() const { return ell3_; }

    WienerIncrement sample_increment(const CounterRng& rng, uint64_t step,
                                     double dt) const;

    // sum_k sigma_k phi_k (alpha_u u + alpha_E grad_psi) dW_k, face-sampled
    VectorField apply(const VectorField& u, const VectorField& grad_psi,
                      const WienerIncrement& inc) const;

    // unhalved Hilbert-Schmidt norm sum_k ||f e_k||_L2^2; callers halve for
    // the Ito correction
    double hs_norm_sq(const VectorField& u, const VectorField& grad_psi) const;

    // single summand f e_k (independent-oracle path for tests)
    VectorField mode_component(int k, const VectorField& u,
                               const VectorField& grad_psi) const;

    ScalarField mode_on_cells(int k) const;

private:
    Grid grid_;
    NoiseSpec spec_;
    std::vector<double> sigma_;
    std::vector<int> mode_mx_, mode_my_;
    std::vector<double> mode_norm_;                 // L2 normalization A_mn
    std::vector<std::vector<double>> phi_x_, phi_y_;  // face-sampled modes
    std::vector<double> qx_, qy_;                   // sum_k sigma_k^2 phi_k^2
    double sigma_sq_sum_ = 0.0;
    double ell1_ = 0.0, ell3_ = 0.0;

    void build_w(const VectorField& u, const VectorField& grad_psi,
                 std::vector<double>& wx, std::vector<double>& wy) const;
};

struct AssumptionReport {
    double ell1_hat = 0.0, ell2_hat = 0.0, ell3_hat = 0.0, ell4_hat = 0.0;
    double ell1 = 0.0, ell2 = 0.0, ell3 = 0.0, ell4 = 0.0;
    int samples = 0;
    bool pass = false;
};

// Empirical sup of the growth/Lipschitz ratios over random smooth field
// pairs, compared against the closed-form constants.
AssumptionReport verify_assumptions(const NoiseModel& model, int n_samples,
                                    uint64_t seed = 0x5eed);

// Interior-difference H1 norm of a face field (L2 plus seminorm); the wall
// terms are excluded, unlike grad_norm_sq_noslip.
double face_h1_norm_sq(const VectorField& v);

}  // namespace npns
