#ifndef LAGHAT_KERNELS_HPP
#define LAGHAT_KERNELS_HPP

#include <functional>
#include <memory>
#include <vector>

#include "laghat/alpha.hpp"
#include "laghat/quad.hpp"

namespace laghat {

// Quadrature orders used by the kernel evaluators.  The defaults reach 1e-8
// agreement with the eigen-series oracles for alpha <= 2.5 and t >= 1e-3;
// doubling them is the global quadrature trust gate.
struct KernelOrders {
    int n_s = 64;   // base Jacobi order for s-integrals (escalated with z)
    int n_r = 200;  // double-exponential order for r-integrals on (0,1)
    int n_x = 128;  // gamma_alpha order for integrals over (0,infty)

    KernelOrders scaled(int factor) const {
        return KernelOrders{n_s * factor, n_r * factor, n_x * factor};
    }
};

// Immutable evaluation context: the alpha constants plus every quadrature
// rule the kernel formulas need.  Construction does all the eigen-solves;
// afterwards the context is read-only and safe to share across threads.
class KernelContext {
public:
    explicit KernelContext(const AlphaParam& alpha, KernelOrders orders = {});

    const AlphaParam& alpha() const { return alpha_; }
    const KernelOrders& orders() const { return orders_; }
    const QuadRule& r_rule() const { return r_rule_; }
    const QuadRule& gamma_rule() const { return gamma_rule_; }

    // int_{-1}^{1} e^{z(s-1)} f(s) Pi_alpha(s) ds for z >= 0.  The e^{z s}
    // peak at s = 1 is extracted so the result never overflows; for z beyond
    // the reach of the Jacobi ladder the integral is evaluated through the
    // substitution s = 1 - u/z against a generalized Laguerre rule.
    double s_integral(double z, const std::function<double(double)>& f) const;
    double s_integral_one(double z) const; // f == 1 specialization

    // Same with the Pi_{alpha+1} density, via Pi_{alpha+1} =
    // (alpha+1)/(alpha+1/2) (1-s^2) Pi_alpha.
    double s_integral_up(double z, const std::function<double(double)>& f) const;

private:
    AlphaParam alpha_;
    KernelOrders orders_;
    std::vector<QuadRule> jacobi_ladder_; // escalating orders
    std::vector<double> ladder_zmax_;
    QuadRule peak_rule_;                  // gen-Laguerre(alpha - 1/2)
    double peak_coef_;                    // Gamma(alpha+1)/sqrt(pi)
    QuadRule r_rule_;
    QuadRule gamma_rule_;
};

// ---------------------------------------------------------------------------
// Heat kernel W_t and its spatial derivatives (r-form, r = e^{-t/2})
// ---------------------------------------------------------------------------

// W_t(x,y) via the Jacobi-weight s-integral; strictly positive, symmetric.
double heat_kernel(const KernelContext& ctx, double t, double x, double y);

// Truncated eigen-sum sum_{k<=K} e^{-kt} L_k(x) L_k(y); the primary oracle.
double heat_kernel_series(const KernelContext& ctx, double t, double x, double y, int K);

// Exact n-th x-derivative of W_{-2 log r}(x,y), n <= 4 (signed value).
double heat_dx(const KernelContext& ctx, int n, double r, double x, double y);

// Exact mixed derivative d_y d_x W_{-2 log r}(x,y).
double heat_dxdy(const KernelContext& ctx, double r, double x, double y);

// d_y d_x^n W_{-2 log r}(x,y) for n <= 3 (n = 0 gives d_y W).
double heat_dxn_dy(const KernelContext& ctx, int n, double r, double x, double y);

// ---------------------------------------------------------------------------
// Subordinated Poisson semigroup
// ---------------------------------------------------------------------------

// P_t(x,y) by the r-integral of the subordination formula (the k = 0 mode is
// split off in closed form); for t >= 30 the eigen-series takes over.
double poisson_kernel(const KernelContext& ctx, double t, double x, double y);

// Signed t^{n+k} d_x^n d_t^k P_t(x,y), n + k <= 4.
double poisson_deriv_kernel(const KernelContext& ctx, int n, int k, double t, double x,
                            double y);

// Signed t^{n+k} d_y d_x^n d_t^k P_t(x,y) (the C2'-side kernels).
double poisson_deriv_kernel_dy(const KernelContext& ctx, int n, int k, double t, double x,
                               double y);

// Precomputed trajectory t -> t^{n+k} d_x^n d_t^k P_t(x,y) (optionally with an
// extra d_y).  The W-derivative weights at the r-nodes are computed once, so
// evaluating the trajectory across a whole time grid costs one exp per node.
class PoissonTrajectory {
public:
    PoissonTrajectory(const KernelContext& ctx, int n, int k, double x, double y,
                      bool extra_dy = false);
    double operator()(double t) const;

private:
    int n_, k_;
    bool mass_split_; // constant heat mode handled in closed form
    std::vector<double> v_;  // -log r at contributing nodes
    std::vector<double> gw_; // combined node weight
    std::vector<double> spec_;
    static constexpr double kSeriesSwitch = 30.0;
};

// ---------------------------------------------------------------------------
// Riesz, fractional and multiplier kernels
// ---------------------------------------------------------------------------

// Kernel of the n-th Riesz transform (n <= 3), normalized so that it
// reproduces the spectral definition sum k^{-n/2} c_k (d/dx)^n L_k.
// Refuses |x-y| < 1e-6 (the kernel is singular on the diagonal).
double riesz_kernel(const KernelContext& ctx, int n, double x, double y);

// The same kernel through the Mellin-type time integral
// (1/Gamma(n/2)) int t^{n/2-1} d_x^n W_t dt; change-of-variables cross-check.
double riesz_kernel_tform(const KernelContext& ctx, int n, double x, double y);

// d_x and d_y of the Riesz kernel (d_y implemented for n = 1).
double riesz_kernel_dx(const KernelContext& ctx, int n, double x, double y);
double riesz_kernel_dy(const KernelContext& ctx, double x, double y);

// Kernel of the negative power Delta^{-omega}: the time form
// (1/Gamma(omega)) int t^{omega-1} (W_t - 1) dt, evaluated through r = e^{-t/2}.
double frac_kernel(const KernelContext& ctx, double omega, double x, double y);

// The verbatim printed r-form, whose measure dr/(r (-log r)^{1-omega}) yields
// eigenvalues (2k)^{-omega}; equals 2^{-omega} times frac_kernel.
double frac_kernel_printed(const KernelContext& ctx, double omega, double x, double y);

double frac_kernel_dx(const KernelContext& ctx, double omega, double x, double y);
double frac_kernel_dy(const KernelContext& ctx, double omega, double x, double y);

// Laplace-type symbol M(z) = z int_0^infty e^{-z t} phi(t) dt, phi bounded.
double laplace_symbol(const std::function<double(double)>& phi, double z);

// Kernel of the Laplace-transform-type multiplier:
// K_phi(x,y) = int_0^infty phi(t) (-d_t P_t(x,y)) dt, x != y; symmetric.
double multiplier_kernel(const KernelContext& ctx, const std::function<double(double)>& phi,
                         double x, double y);
double multiplier_kernel_dx(const KernelContext& ctx,
                            const std::function<double(double)>& phi, double x, double y);
double multiplier_kernel_dy(const KernelContext& ctx,
                            const std::function<double(double)>& phi, double x, double y);

// ---------------------------------------------------------------------------
// Lemma kernels (the double integrals whose off-2I masses drive the bounds)
// ---------------------------------------------------------------------------

enum class LemmaId {
    L31,       // e^{-q(x,ry,s)/(2(1-r^2)) + x^2} / (1-r^2)^{alpha+5/2}
    L31Omega,  // same with (-log r)^{omega-1} / (1-r^2)^{alpha+3/2}
    L32,       // phi(r)^{1/2} d_r[e^{-q/(1-r^2)+x^2}] r / (1-r^2)^{alpha+3/2}
    L33,       // r (rx-ys)(ry-xs) e^{-q/(1-r^2)+x^2} / (1-r^2)^{alpha+7/2}
    L34,       // |(rx-ys)/sqrt(1-r^2)|^beta e^{-q(rx,y,s)/(1-r^2)+y^2} / (1-r^2)^{alpha+5/2}
    L35,       // xyr e^{-q(rx,y,s)/(1-r^2)+y^2} / (1-r^2)^{alpha+7/2}, Pi_{alpha+1}
    L36,       // K_j, j = 1..4, Pi_{alpha+1}
};

struct LemmaParams {
    double omega = 1.0; // L31Omega
    double beta = 0.0;  // L34
    int j = 1;          // L36
};

double lemma_kernel(const KernelContext& ctx, LemmaId id, double x, double y,
                    const LemmaParams& params = {});

// True when the lemma's sweep integrates over x with sup over y in I
// (L31, L31Omega, L32, L33, L36); false for the y-integrated ones (L34, L35).
bool lemma_integrates_x(LemmaId id);

// ---------------------------------------------------------------------------
// Operator-family tags
// ---------------------------------------------------------------------------

enum class TimeNormTag { pointwise, sup_t, l2_dt_over_t, rho_variation };

// Tagged description of one operator's kernel plus its time norm.
struct KernelFamily {
    enum class Tag { heat, heat_dx, poisson, poisson_deriv, riesz, fractional, multiplier };

    Tag tag = Tag::heat;
    int n = 0;
    int k = 0;
    double t = 1.0;
    double omega = 1.0;
    double rho = 3.0;
    std::function<double(double)> phi; // multiplier symbol integrand
    TimeNormTag time_norm = TimeNormTag::pointwise;

    // Enforces: riesz needs n >= 1, fractional omega > 0, rho_variation
    // rho > 2, and non-pointwise norms only on time-indexed tags.
    void validate() const;

    bool time_indexed() const {
        return tag == Tag::heat || tag == Tag::poisson || tag == Tag::poisson_deriv;
    }
};

} // namespace laghat

#endif
