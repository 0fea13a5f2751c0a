#ifndef LAGHAT_OPERATORS_HPP
#define LAGHAT_OPERATORS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "laghat/kernels.hpp"

namespace laghat {

// Finite Laguerre expansion sum c_k mathcal{L}_k, k = 0..K <= 256.
// Parseval holds on the nose: ||f||^2_{L^2(gamma)} = sum c_k^2.
struct SpectralFunction {
    AlphaParam alpha;
    std::vector<double> coeffs;
    std::string warning; // set when the expansion grid was too coarse

    SpectralFunction(const AlphaParam& a, std::vector<double> c);
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double l2_norm() const;
};

// Values on the nodes of a gamma_alpha rule, with an optional support
// interval and an optional pointwise evaluator (needed by kernel-path
// applications, which must evaluate off the grid).
struct SampledFunction {
    std::vector<double> grid;
    std::vector<double> values;
    std::optional<std::pair<double, double>> support;
    std::function<double(double)> eval;

    static SampledFunction from_callable(const KernelContext& ctx,
                                         std::function<double(double)> f,
                                         std::optional<std::pair<double, double>> supp = {});
};

// Geometric time grid for the discretized sup_t and rho-variation norms.
struct TimeGrid {
    double t_min = 1e-4;
    double t_max = 1e2;
    int count = 200;

    TimeGrid() = default;
    TimeGrid(double lo, double hi, int n);
    std::vector<double> points() const; // decreasing in t
};

// Laguerre coefficients by quadrature against the context's gamma rule.
// Requires grid == rule nodes; flags a precision warning when the rule order
// is below 2K (anti-aliasing guard).
SpectralFunction expand(const KernelContext& ctx, const SampledFunction& f, int K);

// Pointwise synthesis sum c_k mathcal{L}_k(x).
double synthesize(const SpectralFunction& f, double x);

// Multiply coefficients by e^{-kt} (heat) or e^{-sqrt(k) t} (poisson).
enum class SemigroupKind { heat, poisson };
SpectralFunction apply_semigroup(SemigroupKind kind, double t, const SpectralFunction& f);

// Kernel-path application of the semigroup at a point (the analysis path the
// spectral route cross-checks): integral of the kernel against f over the
// gamma rule.
double apply_semigroup_kernel(const KernelContext& ctx, SemigroupKind kind, double t,
                              const SampledFunction& f, double x);

// sup over the grid of |t^k d_t^k P_t f(x)|, spectral side.
double maximal(const KernelContext& ctx, int k, const SpectralFunction& f, double x,
               const TimeGrid& grid);

// Littlewood-Paley g_{n,k}(f)(x) = (int |t^{n+k} d_x^n d_t^k P_t f|^2 dt/t)^{1/2},
// adaptive quadrature in log t.  Requires 1 <= n + k <= 3.
double gfunction(const KernelContext& ctx, int n, int k, const SpectralFunction& f, double x);

// Spectral Riesz transform sum_{k>=1} k^{-n/2} c_k (d/dx)^n mathcal{L}_k with
// Abel regularization e^{-eps k}, Richardson-extrapolated over
// eps = 1e-2, 5e-3, 2.5e-3 (the raw series converges slowly off-diagonal).
std::function<double(double)> riesz_spectral(const KernelContext& ctx, int n,
                                             const SpectralFunction& f);

// Kernel path: integrates riesz_kernel against a supported function; x must
// keep distance >= 1e-3 from the support.
double riesz_kernel_apply(const KernelContext& ctx, int n, const SampledFunction& f,
                          double x);

// Laplace-transform-type multiplier: c_k -> M(sqrt k) c_k for k >= 1, c_0 -> 0.
SpectralFunction laplace_multiplier(const std::function<double(double)>& phi,
                                    const SpectralFunction& f);

// Negative power: c_k -> k^{-omega} c_k for k >= 1, c_0 -> 0.
SpectralFunction frac_integral(double omega, const SpectralFunction& f);

// Exact rho-variation of a finite trajectory sampled at decreasing times:
// sup over subsequences of (sum |F_i - F_j|^rho)^{1/rho}, by dynamic
// programming over ordered pairs, O(N^2).
double rho_variation(double rho, const std::vector<double>& samples);

// rho-variation of t -> t^k d_t^k P_t f(x) sampled on the grid.
double variation_operator(const KernelContext& ctx, double rho, int k,
                          const SpectralFunction& f, double x, const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Time-norm reductions shared with the verification harness
// ---------------------------------------------------------------------------

double sup_over_grid(const std::function<double(double)>& traj, const TimeGrid& grid);

// (int_{tmin}^{tmax} traj(t)^2 dt/t)^{1/2} by adaptive quadrature on log t.
double l2_norm_dt_over_t(const std::function<double(double)>& traj, double t_min,
                         double t_max, double tol);

double rho_variation_of(const std::function<double(double)>& traj, double rho,
                        const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Generic kernel-path application over a support interval
// ---------------------------------------------------------------------------

// int_{supp} K(x, y) f(y) dgamma(y) by composite Gauss-Legendre panels with
// the gamma density written out (used for Riesz/fractional/multiplier paths).
double kernel_apply_on_support(const KernelContext& ctx,
                               const std::function<double(double, double)>& kernel_xy,
                               const std::function<double(double)>& f, double lo, double hi,
                               double x, int panels = 8, int points = 16);

} // namespace laghat

#endif
