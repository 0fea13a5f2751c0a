#include "laghat/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "laghat/errors.hpp"
#include "laghat/specfun.hpp"

namespace laghat {

namespace {

// Everything heat-based reduces to integrals
//   int e^{-q(rx,y,s)/(1-r^2) + y^2} f(s) Pi_alpha(s) ds
// whose exponent is z s - B with z = 2 r x y / eps, B = r^2 (x^2+y^2) / eps,
// eps = 1 - r^2.  The peak value z - B is extracted so only e^{z(s-1)} <= 1
// remains under the integral sign.
struct RGeom {
    double r, omr, eps, sqeps, z, epeak;
};

RGeom r_geom(double x, double y, double r, double omr) {
    RGeom g;
    g.r = r;
    g.omr = omr;
    g.eps = omr * (1.0 + r);
    g.sqeps = std::sqrt(g.eps);
    g.z = 2.0 * r * x * y / g.eps;
    g.epeak = -r * r * (x - y) * (x - y) / g.eps + 2.0 * x * y * r / (1.0 + r);
    return g;
}

// log of a crude bound on |f| for the Hermite-type factors that appear below;
// used to decide that a contribution is identically zero in double precision.
double f_bound_log(double x, double y, double eps) {
    return 4.0 * std::log(3.0 * (x + y + 2.0) / std::sqrt(eps) + 3.0);
}

bool negligible(double log_prefactor, double x, double y, double eps) {
    return log_prefactor + f_bound_log(x, y, eps) < -745.0;
}

double minus_log(double r, double omr) {
    // -log r, accurate on both ends of (0,1)
    return omr < 0.5 ? -std::log1p(-omr) : -std::log(r);
}

} // namespace

KernelContext::KernelContext(const AlphaParam& alpha, KernelOrders orders)
    : alpha_(alpha), orders_(orders) {
    if (orders.n_s < 4 || orders.n_r < 8 || orders.n_x < 4)
        throw ConfigError("KernelContext: quadrature orders too small");
    int n = std::max(orders.n_s, 16);
    for (int level = 0; level < 4; ++level, n *= 2) {
        jacobi_ladder_.push_back(gauss_jacobi_rule(alpha, n));
        ladder_zmax_.push_back(static_cast<double>(n));
    }
    peak_rule_ = gen_laguerre_rule(alpha.alpha() - 0.5, 48);
    // the full Pi_alpha normalizer: the rule weights already carry Gamma(alpha+1/2)
    peak_coef_ = std::exp(std::lgamma(alpha.alpha() + 1.0) - std::lgamma(alpha.alpha() + 0.5)) /
                 std::sqrt(M_PI);
    r_rule_ = de_rule_unit(orders.n_r);
    gamma_rule_ = gamma_alpha_rule(alpha, orders.n_x);
}

double KernelContext::s_integral(double z, const std::function<double(double)>& f) const {
    if (!(z >= 0.0)) throw DomainError("s_integral: z must be nonnegative");
    for (size_t i = 0; i < jacobi_ladder_.size(); ++i) {
        if (z <= ladder_zmax_[i]) {
            const QuadRule& rule = jacobi_ladder_[i];
            double acc = 0.0;
            for (size_t j = 0; j < rule.nodes.size(); ++j) {
                const double s = rule.nodes[j];
                acc += rule.weights[j] * std::exp(z * (s - 1.0)) * f(s);
            }
            return acc;
        }
    }
    // s = 1 - u/z against the Laguerre weight u^{alpha-1/2} e^{-u}
    const double a = alpha_.alpha();
    double acc = 0.0;
    for (size_t j = 0; j < peak_rule_.nodes.size(); ++j) {
        const double u = peak_rule_.nodes[j];
        const double uz = u / z;
        if (uz >= 2.0) continue;
        acc += peak_rule_.weights[j] * f(1.0 - uz) * std::pow(2.0 - uz, a - 0.5);
    }
    return peak_coef_ * std::pow(z, -(a + 0.5)) * acc;
}

double KernelContext::s_integral_one(double z) const {
    return s_integral(z, [](double) { return 1.0; });
}

double KernelContext::s_integral_up(double z, const std::function<double(double)>& f) const {
    const double a = alpha_.alpha();
    const double c = (a + 1.0) / (a + 0.5);
    return c * s_integral(z, [&](double s) { return (1.0 - s) * (1.0 + s) * f(s); });
}

// ---------------------------------------------------------------------------
// Heat kernel family
// ---------------------------------------------------------------------------

namespace {

// W_{-2 log r}(x,y) with accurate 1-r supplied by the caller.
double heat_w(const KernelContext& ctx, double x, double y, double r, double omr) {
    if (r <= 0.0) return 1.0; // t = infinity limit: only the constant mode
    const RGeom g = r_geom(x, y, r, omr);
    const double lp = g.epeak - (ctx.alpha().alpha() + 1.0) * std::log(g.eps);
    if (lp < -745.0) return 0.0;
    return std::exp(lp) * ctx.s_integral_one(g.z);
}

// d_x^n W_{-2 log r}(x,y), signed.
double heat_w_dx(const KernelContext& ctx, int n, double x, double y, double r, double omr) {
    if (r <= 0.0) return 0.0;
    if (n == 0) return heat_w(ctx, x, y, r, omr);
    const RGeom g = r_geom(x, y, r, omr);
    const double lp = g.epeak - (ctx.alpha().alpha() + 1.0 + 0.5 * n) * std::log(g.eps) +
                      n * std::log(r);
    if (negligible(lp, x, y, g.eps)) return 0.0;
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const double s_int = ctx.s_integral(g.z, [&](double s) {
        return hermite(n, (g.r * x - y * s) / g.sqeps);
    });
    return sgn * std::exp(lp) * s_int;
}

// d_y d_x^n W_{-2 log r}(x,y); n = 0 gives d_y W.
double heat_w_dxn_dy(const KernelContext& ctx, int n, double x, double y, double r,
                     double omr) {
    if (r <= 0.0) return 0.0;
    const RGeom g = r_geom(x, y, r, omr);
    const double lp = g.epeak - (ctx.alpha().alpha() + 1.0 + 0.5 * n) * std::log(g.eps) +
                      n * std::log(r);
    if (negligible(lp, x, y, g.eps)) return 0.0;
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    // d/dy acts on zeta = (rx - ys)/sqrt(eps) and on the exponent:
    //   H_n'(zeta) (-s/sqrt(eps)) + H_n(zeta) (-2r(ry - xs)/eps)
    const double s_int = ctx.s_integral(g.z, [&](double s) {
        const double zeta = (g.r * x - y * s) / g.sqeps;
        double v = hermite(n, zeta) * (-2.0 * g.r * (g.r * y - x * s) / g.eps);
        if (n >= 1) v += 2.0 * n * hermite(n - 1, zeta) * (-s / g.sqeps);
        return v;
    });
    return sgn * std::exp(lp) * s_int;
}

} // namespace

double heat_kernel(const KernelContext& ctx, double t, double x, double y) {
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
    if (!(x > 0.0 && y > 0.0)) throw DomainError("heat_kernel: x, y must be positive");
    const double r = std::exp(-0.5 * t);
    const double omr = -std::expm1(-0.5 * t);
    return heat_w(ctx, x, y, r, omr);
}

double heat_kernel_series(const KernelContext& ctx, double t, double x, double y, int K) {
    if (!(t > 0.0)) throw DomainError("heat_kernel_series: t must be positive");
    if (K < 0 || K > kMaxLaguerreDegree)
        throw CapacityError("heat_kernel_series: K out of range");
    const double a = ctx.alpha().alpha();
    std::vector<double> lx, ly;
    laguerre_classical_all(K, a, x * x, lx);
    laguerre_classical_all(K, a, y * y, ly);
    double acc = 0.0, nsq = 1.0; // nsq_k = Gamma(a+1) k! / Gamma(a+k+1)
    for (int k = 0; k <= K; ++k) {
        if (k > 0) nsq *= k / (a + k);
        acc += std::exp(-k * t) * nsq * lx[k] * ly[k];
    }
    return acc;
}

double heat_dx(const KernelContext& ctx, int n, double r, double x, double y) {
    if (n < 0 || n > 4) throw CapacityError("heat_dx: n must lie in 0..4");
    if (!(r > 0.0 && r < 1.0)) throw DomainError("heat_dx: r must lie in (0,1)");
    return heat_w_dx(ctx, n, x, y, r, 1.0 - r);
}

double heat_dxdy(const KernelContext& ctx, double r, double x, double y) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("heat_dxdy: r must lie in (0,1)");
    return heat_w_dxn_dy(ctx, 1, x, y, r, 1.0 - r);
}

double heat_dxn_dy(const KernelContext& ctx, int n, double r, double x, double y) {
    if (n < 0 || n > 3) throw CapacityError("heat_dxn_dy: n must lie in 0..3");
    if (!(r > 0.0 && r < 1.0)) throw DomainError("heat_dxn_dy: r must lie in (0,1)");
    return heat_w_dxn_dy(ctx, n, x, y, r, 1.0 - r);
}

// ---------------------------------------------------------------------------
// Poisson semigroup
// ---------------------------------------------------------------------------

namespace {

// d^k/dt^k (t e^{-a t^2}) in closed form via Hermite polynomials.
double subordinator_deriv(int k, double t, double a) {
    const double arg = a * t * t;
    if (arg > 745.0) return 0.0;
    const double e = std::exp(-arg);
    const double sq = std::sqrt(a);
    const double u = sq * t;
    double v = t * std::pow(-sq, k) * hermite(k, u);
    if (k >= 1) v += k * std::pow(-sq, k - 1) * hermite(k - 1, u);
    return v * e;
}

constexpr double kPoissonSeriesSwitch = 30.0;
constexpr int kPoissonSeriesModes = 64;

} // namespace

PoissonTrajectory::PoissonTrajectory(const KernelContext& ctx, int n, int k, double x,
                                     double y, bool extra_dy)
    : n_(n), k_(k) {
    if (n < 0 || k < 0 || n + k + (extra_dy ? 1 : 0) > 4)
        throw CapacityError("PoissonTrajectory: derivative order beyond 4");
    // For the underived kernel (n = 0, no d_y) the constant heat mode is
    // integrated in closed form.  Subtracting 1 globally would put an O(1)
    // integrand on the v = -log r ~ t^2 scale, which no fixed r-rule resolves
    // as t -> 0; instead W - 1 is used only on v >= 1 (where it is small and
    // smooth) and W itself below, with the exact mass of the constant over
    // {v < 1}, erfc(t / (2 sqrt 2)), restored analytically in operator().
    mass_split_ = (n == 0 && !extra_dy);

    const QuadRule& rr = ctx.r_rule();
    v_.reserve(2 * rr.nodes.size());
    gw_.reserve(2 * rr.nodes.size());
    auto add_node = [&](double r, double omr, double jac, bool subtract_one) {
        if (r <= 0.0 || omr <= 0.0) return 0.0;
        const double v = minus_log(r, omr);
        double G;
        if (extra_dy)
            G = heat_w_dxn_dy(ctx, n, x, y, r, omr);
        else if (n == 0)
            G = heat_w(ctx, x, y, r, omr) - (subtract_one ? 1.0 : 0.0);
        else
            G = heat_w_dx(ctx, n, x, y, r, omr);
        return G * jac / r / (2.0 * v * std::sqrt(2.0 * v)) / std::sqrt(M_PI);
    };
    // Piecewise mapping of the rule.  Two concerns pick the breakpoints: the
    // constant-mode bookkeeping changes the integrand at v = 1 (r = 1/e), and
    // near-diagonal heat concentration needs its own panel on (1-|x-y|, 1).
    // co(b) = 1 - b is carried exactly for every breakpoint.
    struct Piece {
        double a, b, co_b;
        bool subtract;
    };
    std::vector<Piece> pieces;
    const double c = std::exp(-1.0), omc = -std::expm1(-1.0);
    const double d = std::abs(x - y);
    const double rstar = 1.0 - d; // only used when d < 0.1
    if (mass_split_) {
        pieces.push_back({0.0, c, omc, true});
        if (d < 0.1)
            pieces.push_back({c, rstar, d, false});
        else
            pieces.push_back({c, 1.0, 0.0, false});
    } else {
        if (d < 0.1)
            pieces.push_back({0.0, rstar, d, false});
        else
            pieces.push_back({0.0, 1.0, 0.0, false});
    }
    if (d < 0.1) pieces.push_back({rstar, 1.0, 0.0, false});

    for (const Piece& pc : pieces) {
        const double len = pc.b - pc.a;
        for (size_t i = 0; i < rr.nodes.size(); ++i) {
            const double u = rr.nodes[i], omu = rr.co_nodes[i];
            const double r = pc.a + len * u;
            const double omr = pc.co_b + len * omu;
            const double gw = add_node(r, omr, len * rr.weights[i], pc.subtract);
            if (gw != 0.0 && std::isfinite(gw)) {
                v_.push_back(minus_log(r, omr));
                gw_.push_back(gw);
            }
        }
    }

    spec_.assign(kPoissonSeriesModes + 1, 0.0);
    for (int j = 0; j <= kPoissonSeriesModes; ++j)
        spec_[j] = laguerre_normalized(j, ctx.alpha(), x, n) *
                   laguerre_normalized(j, ctx.alpha(), y, extra_dy ? 1 : 0);
}

double PoissonTrajectory::operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("PoissonTrajectory: t must be positive");
    if (t >= kSeriesSwitch) {
        double acc = 0.0;
        for (int j = (k_ >= 1 ? 1 : 0); j < static_cast<int>(spec_.size()); ++j) {
            const double sj = std::sqrt(static_cast<double>(j));
            acc += spec_[j] * std::exp(-sj * t) * std::pow(-sj, k_);
        }
        return std::pow(t, n_ + k_) * acc;
    }
    double acc = 0.0;
    for (size_t i = 0; i < v_.size(); ++i)
        acc += gw_[i] * subordinator_deriv(k_, t, 1.0 / (8.0 * v_[i]));
    if (mass_split_) {
        // exact contribution of the constant mode over {v < 1} and its tail:
        // M_k(t) = d^k/dt^k erfc(c t), c = 1/(2 sqrt 2)
        const double c = 1.0 / (2.0 * std::sqrt(2.0));
        if (k_ == 0) {
            acc += 1.0 - std::erfc(c * t);
        } else {
            const double mk = (2.0 / std::sqrt(M_PI)) * ((k_ % 2 == 0) ? 1.0 : -1.0) *
                              std::pow(c, k_) * hermite(k_ - 1, c * t) *
                              std::exp(-c * c * t * t);
            acc -= mk;
        }
    }
    return std::pow(t, n_ + k_) * acc;
}

double poisson_kernel(const KernelContext& ctx, double t, double x, double y) {
    if (!(t > 0.0)) throw DomainError("poisson_kernel: t must be positive");
    PoissonTrajectory traj(ctx, 0, 0, x, y, false);
    return traj(t);
}

double poisson_deriv_kernel(const KernelContext& ctx, int n, int k, double t, double x,
                            double y) {
    if (n < 0 || k < 0 || n + k > 4)
        throw CapacityError("poisson_deriv_kernel: n + k must not exceed 4");
    if (!(t > 0.0)) throw DomainError("poisson_deriv_kernel: t must be positive");
    PoissonTrajectory traj(ctx, n, k, x, y, false);
    return traj(t);
}

double poisson_deriv_kernel_dy(const KernelContext& ctx, int n, int k, double t, double x,
                               double y) {
    if (n < 0 || k < 0 || n + k + 1 > 4)
        throw CapacityError("poisson_deriv_kernel_dy: total order beyond 4");
    if (!(t > 0.0)) throw DomainError("poisson_deriv_kernel_dy: t must be positive");
    PoissonTrajectory traj(ctx, n, k, x, y, true);
    return traj(t);
}

// ---------------------------------------------------------------------------
// r-integration helper (with the near-diagonal split)
// ---------------------------------------------------------------------------

namespace {

// int_0^1 f(r, 1-r) dr through v = -log r on a composite Gauss-Legendre grid
// in kappa = log v.  The scalar kernel integrands live on this coordinate:
// the heat concentration sits at v ~ (x-y)^2, the spectral decay at v ~ 1,
// and both ends carry algebraic-in-v factors.  kappa_min must gate the
// r -> 1 end: the caller certifies the integrand is negligible for
// v < e^{kappa_min}.  The context n_r knob scales the panel density.
template <class F>
double r_integral_logv(const KernelContext& ctx, F&& f, double kappa_min) {
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const double kappa_max = std::log(650.0);
    kappa_min = std::max(std::min(kappa_min, 0.0), -700.0);
    const double per_unit = std::max(1.0, ctx.orders().n_r / 200.0);
    const int panels = static_cast<int>(std::ceil((kappa_max - kappa_min) * per_unit));
    const double h = (kappa_max - kappa_min) / panels;

    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = kappa_min + (p + 0.5) * h, hw = 0.5 * h;
        for (int j = 0; j < 4; ++j) {
            for (double sgn : {-1.0, 1.0}) {
                const double v = std::exp(c + sgn * hw * gx[j]);
                const double r = std::exp(-v);
                const double omr = -std::expm1(-v);
                // dr = e^{-v} v dkappa
                acc += gw[j] * hw * f(r, omr) * r * v;
            }
        }
    }
    return acc;
}

// kappa gate for integrands killed by the off-diagonal heat factor
// e^{-c (x-y)^2 / v}.
double diag_gate(double x, double y) {
    const double d2 = (x - y) * (x - y);
    return std::log(std::max(d2, 1e-12)) - 14.0;
}

} // namespace

// ---------------------------------------------------------------------------
// Riesz kernel
// ---------------------------------------------------------------------------

double riesz_kernel(const KernelContext& ctx, int n, double x, double y) {
    if (n < 1 || n > 3) throw CapacityError("riesz_kernel: order must lie in 1..3");
    if (std::abs(x - y) < 1e-6)
        throw ProximityError("riesz_kernel: |x-y| < 1e-6, kernel is singular there");

    // Spectral normalization: the printed r-form times (-1)^n 2^{n/2}/Gamma(n/2).
    const double cn = ((n % 2 == 0) ? 1.0 : -1.0) * std::exp2(0.5 * n) /
                      std::tgamma(0.5 * n);
    const double a = ctx.alpha().alpha();
    auto integrand = [&](double r, double omr) {
        if (r <= 0.0) return 0.0;
        const RGeom g = r_geom(x, y, r, omr);
        const double v = minus_log(r, omr);
        const double lp = g.epeak - (a + 2.0) * std::log(g.eps) + (n - 1) * std::log(r) +
                          (0.5 * n - 1.0) * (std::log(v) - std::log(g.eps));
        if (negligible(lp, x, y, g.eps)) return 0.0;
        const double s_int = ctx.s_integral(g.z, [&](double s) {
            return hermite(n, (r * x - y * s) / g.sqeps);
        });
        return std::exp(lp) * s_int;
    };
    return cn * r_integral_logv(ctx, integrand, diag_gate(x, y));
}

double riesz_kernel_tform(const KernelContext& ctx, int n, double x, double y) {
    if (n < 1 || n > 3) throw CapacityError("riesz_kernel_tform: order must lie in 1..3");
    if (std::abs(x - y) < 1e-6) throw ProximityError("riesz_kernel_tform: |x-y| < 1e-6");
    // (1/Gamma(n/2)) int_0^infty t^{n/2 - 1} d_x^n W_t dt on a log-t grid
    const double c = 1.0 / std::tgamma(0.5 * n);
    auto f = [&](double lv) {
        const double t = std::exp(lv);
        const double r = std::exp(-0.5 * t), omr = -std::expm1(-0.5 * t);
        return std::pow(t, 0.5 * n) * heat_w_dx(ctx, n, x, y, r, omr);
    };
    return c * integrate_adaptive(f, std::log(1e-7), std::log(150.0), 1e-11);
}

double riesz_kernel_dx(const KernelContext& ctx, int n, double x, double y) {
    if (n < 1 || n > 3) throw CapacityError("riesz_kernel_dx: order must lie in 1..3");
    if (std::abs(x - y) < 1e-6) throw ProximityError("riesz_kernel_dx: |x-y| < 1e-6");
    // one more x-derivative raises the Hermite order and the eps power
    const double cn = ((n % 2 == 0) ? 1.0 : -1.0) * std::exp2(0.5 * n) /
                      std::tgamma(0.5 * n);
    const double a = ctx.alpha().alpha();
    auto integrand = [&](double r, double omr) {
        if (r <= 0.0) return 0.0;
        const RGeom g = r_geom(x, y, r, omr);
        const double v = minus_log(r, omr);
        const double lp = g.epeak - (a + 2.5) * std::log(g.eps) + n * std::log(r) +
                          (0.5 * n - 1.0) * (std::log(v) - std::log(g.eps));
        if (negligible(lp, x, y, g.eps)) return 0.0;
        const double s_int = ctx.s_integral(g.z, [&](double s) {
            return hermite(n + 1, (r * x - y * s) / g.sqeps);
        });
        return -std::exp(lp) * s_int;
    };
    return cn * r_integral_logv(ctx, integrand, diag_gate(x, y));
}

double riesz_kernel_dy(const KernelContext& ctx, double x, double y) {
    if (std::abs(x - y) < 1e-6) throw ProximityError("riesz_kernel_dy: |x-y| < 1e-6");
    // n = 1 case; d/dy hits both the Hermite argument and the exponent
    const double cn = -std::exp2(0.5) / std::tgamma(0.5);
    const double a = ctx.alpha().alpha();
    auto integrand = [&](double r, double omr) {
        if (r <= 0.0) return 0.0;
        const RGeom g = r_geom(x, y, r, omr);
        const double v = minus_log(r, omr);
        const double lp = g.epeak - (a + 2.0) * std::log(g.eps) -
                          0.5 * (std::log(v) - std::log(g.eps));
        if (negligible(lp, x, y, g.eps)) return 0.0;
        const double s_int = ctx.s_integral(g.z, [&](double s) {
            const double zeta = (r * x - y * s) / g.sqeps;
            return 2.0 * (-s / g.sqeps) +
                   2.0 * zeta * (-2.0 * r * (r * y - x * s) / g.eps);
        });
        return std::exp(lp) * s_int;
    };
    return cn * r_integral_logv(ctx, integrand, diag_gate(x, y));
}

// ---------------------------------------------------------------------------
// Fractional kernel
// ---------------------------------------------------------------------------

namespace {

double frac_core(const KernelContext& ctx, double omega, double x, double y, int dmode) {
    // dmode 0: W - 1, 1: d_x W, 2: d_y W
    const double c = std::exp2(omega) / std::tgamma(omega);
    auto integrand = [&](double r, double omr) {
        const double v = minus_log(r, omr);
        double G;
        if (dmode == 0)
            G = heat_w(ctx, x, y, r, omr) - 1.0;
        else if (dmode == 1)
            G = heat_w_dx(ctx, 1, x, y, r, omr);
        else
            G = heat_w_dxn_dy(ctx, 0, x, y, r, omr);
        return std::pow(v, omega - 1.0) * G / r;
    };
    // the W part is diagonal-gated; the constant carries v^{omega-1} down to
    // v = 0, so the cut must leave a tail below 1e-15
    const double v0 = std::pow(1e-15 * omega * std::tgamma(omega) / std::exp2(omega),
                               1.0 / omega);
    const double kmin = std::min(std::log(v0), diag_gate(x, y));
    return c * r_integral_logv(ctx, integrand, kmin);
}

} // namespace

double frac_kernel(const KernelContext& ctx, double omega, double x, double y) {
    if (!(omega > 0.0)) throw DomainError("frac_kernel: omega must be positive");
    return frac_core(ctx, omega, x, y, 0);
}

double frac_kernel_printed(const KernelContext& ctx, double omega, double x, double y) {
    if (!(omega > 0.0)) throw DomainError("frac_kernel_printed: omega must be positive");
    // verbatim measure dr/(r(-log r)^{1-omega}): exactly 2^{-omega} of the
    // spectrally normalized kernel
    return std::exp2(-omega) * frac_core(ctx, omega, x, y, 0);
}

double frac_kernel_dx(const KernelContext& ctx, double omega, double x, double y) {
    if (!(omega > 0.0)) throw DomainError("frac_kernel_dx: omega must be positive");
    return frac_core(ctx, omega, x, y, 1);
}

double frac_kernel_dy(const KernelContext& ctx, double omega, double x, double y) {
    if (!(omega > 0.0)) throw DomainError("frac_kernel_dy: omega must be positive");
    return frac_core(ctx, omega, x, y, 2);
}

// ---------------------------------------------------------------------------
// Laplace-type multipliers
// ---------------------------------------------------------------------------

double laplace_symbol(const std::function<double(double)>& phi, double z) {
    if (!(z > 0.0)) throw DomainError("laplace_symbol: z must be positive");
    // z int e^{-zt} phi(t) dt = int e^{-w} phi(w/z) dw
    static const QuadRule rule = gen_laguerre_rule(0.0, 96);
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * phi(rule.nodes[i] / z);
    return acc;
}

namespace {

double multiplier_core(const KernelContext& ctx, const std::function<double(double)>& phi,
                       double x, double y, int dmode) {
    // dmode 0: K_phi, 1: d_x K_phi, 2: d_y K_phi.  The t-integral must stay
    // outermost: with the constant mode removed, swapping it inside the
    // r-integral diverges at the r -> 1 end.
    if (std::abs(x - y) < 1e-6)
        throw ProximityError("multiplier_kernel: not defined for |x-y| < 1e-6");
    const int n = dmode == 1 ? 1 : 0;
    PoissonTrajectory traj(ctx, n, 1, x, y, dmode == 2);
    // traj(t) = t^{1+n} (d-parts) d_t P_t; divide the power back out
    const double p = 1.0 + n;
    auto f = [&](double t) { return -phi(t) * traj(t) / std::pow(t, p); };
    double acc = integrate_adaptive(f, 1e-9, 1.0, 1e-10);
    acc += integrate_adaptive(f, 1.0, 80.0, 1e-10);
    return acc;
}

} // namespace

double multiplier_kernel(const KernelContext& ctx, const std::function<double(double)>& phi,
                         double x, double y) {
    return multiplier_core(ctx, phi, x, y, 0);
}

double multiplier_kernel_dx(const KernelContext& ctx,
                            const std::function<double(double)>& phi, double x, double y) {
    return multiplier_core(ctx, phi, x, y, 1);
}

double multiplier_kernel_dy(const KernelContext& ctx,
                            const std::function<double(double)>& phi, double x, double y) {
    return multiplier_core(ctx, phi, x, y, 2);
}

// ---------------------------------------------------------------------------
// Lemma kernels
// ---------------------------------------------------------------------------

namespace {

// Exponent -q(x,ry,s)/(2 eps) + x^2 as z2 s - B2, peak-extracted.
struct HalfGeom {
    double z, epeak;
};

HalfGeom half_geom(double x, double y, double r, double eps) {
    HalfGeom h;
    h.z = r * x * y / eps;
    const double b = (x * x * (1.0 - 2.0 * eps) + r * r * y * y) / (2.0 * eps);
    h.epeak = h.z - b;
    return h;
}

} // namespace

double lemma_kernel(const KernelContext& ctx, LemmaId id, double x, double y,
                    const LemmaParams& params) {
    if (!(x > 0.0 && y > 0.0)) throw DomainError("lemma_kernel: x, y must be positive");
    if (id == LemmaId::L31Omega && !(params.omega > 0.0))
        throw DomainError("lemma_kernel: omega must be positive");
    if (id == LemmaId::L34 && params.beta < 0.0)
        throw DomainError("lemma_kernel: beta must be nonnegative");
    if (id == LemmaId::L36 && (params.j < 1 || params.j > 4))
        throw DomainError("lemma_kernel: j must lie in 1..4");

    const double a = ctx.alpha().alpha();

    auto integrand = [&](double r, double omr) -> double {
        if (r <= 0.0) return 0.0;
        const double eps = omr * (1.0 + r);
        const double sqeps = std::sqrt(eps);
        const double leps = std::log(eps);

        switch (id) {
            case LemmaId::L31: {
                const HalfGeom h = half_geom(x, y, r, eps);
                const double lp = h.epeak - (a + 2.5) * leps;
                if (lp < -745.0) return 0.0;
                return std::exp(lp) * ctx.s_integral_one(h.z);
            }
            case LemmaId::L31Omega: {
                const HalfGeom h = half_geom(x, y, r, eps);
                const double v = minus_log(r, omr);
                const double lp = h.epeak - (a + 1.5) * leps +
                                  (params.omega - 1.0) * std::log(v);
                if (lp < -745.0) return 0.0;
                return std::exp(lp) * ctx.s_integral_one(h.z);
            }
            case LemmaId::L32: {
                // full exponent; by (E0) its (z, peak) data matches the W form
                const RGeom g = r_geom(x, y, r, omr);
                const double lp = g.epeak - (a + 1.5) * leps;
                if (negligible(lp, x, y, eps)) return 0.0;
                const double phi_sqrt = std::sqrt(aux_functions(r, 1).phi);
                const double s_int = ctx.s_integral(g.z, [&](double s) {
                    return -(2.0 * r * (x * x + y * y) -
                             2.0 * x * y * (1.0 + r * r) * s) / (eps * eps);
                });
                return phi_sqrt * r * std::exp(lp) * s_int;
            }
            case LemmaId::L33: {
                const RGeom g = r_geom(x, y, r, omr);
                const double lp = g.epeak - (a + 3.5) * leps;
                if (negligible(lp, x, y, eps)) return 0.0;
                const double s_int = ctx.s_integral(g.z, [&](double s) {
                    return (r * x - y * s) * (r * y - x * s);
                });
                return r * std::exp(lp) * s_int;
            }
            case LemmaId::L34: {
                const RGeom g = r_geom(x, y, r, omr);
                const double lp = g.epeak - (a + 2.5) * leps;
                if (negligible(lp, x, y, eps)) return 0.0;
                const double s_int = ctx.s_integral(g.z, [&](double s) {
                    return std::pow(std::abs(r * x - y * s) / sqeps, params.beta);
                });
                return std::exp(lp) * s_int;
            }
            case LemmaId::L35: {
                const RGeom g = r_geom(x, y, r, omr);
                const double lp = g.epeak - (a + 3.5) * leps;
                if (negligible(lp, x, y, eps)) return 0.0;
                const double s_int = ctx.s_integral_up(g.z, [](double) { return 1.0; });
                return x * y * r * std::exp(lp) * s_int;
            }
            case LemmaId::L36: {
                const RGeom g = r_geom(x, y, r, omr);
                double power, factor;
                std::function<double(double)> f;
                switch (params.j) {
                    case 1:
                        power = a + 2.5;
                        factor = x * r;
                        f = [](double) { return 1.0; };
                        break;
                    case 2:
                        power = a + 3.5;
                        factor = x * r;
                        f = [&](double s) { return x - y * s * r; };
                        break;
                    case 3:
                        power = a + 4.5;
                        factor = x * y * r * r;
                        f = [&](double s) { return (x - y * s * r) * (r * y - x * s); };
                        break;
                    default:
                        power = a + 2.5;
                        factor = y * r;
                        f = [&](double s) { return r * y - x * s; };
                        break;
                }
                const double lp = g.epeak - power * leps;
                if (negligible(lp, x, y, eps)) return 0.0;
                return factor * std::exp(lp) * ctx.s_integral_up(g.z, f);
            }
        }
        return 0.0;
    };

    return r_integral_logv(ctx, integrand, diag_gate(x, y));
}

bool lemma_integrates_x(LemmaId id) {
    switch (id) {
        case LemmaId::L31:
        case LemmaId::L31Omega:
        case LemmaId::L32:
        case LemmaId::L33:
        case LemmaId::L36:
            return true;
        case LemmaId::L34:
        case LemmaId::L35:
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

void KernelFamily::validate() const {
    if (tag == Tag::riesz && n < 1)
        throw ConfigError("KernelFamily: riesz requires n >= 1");
    if (tag == Tag::fractional && !(omega > 0.0))
        throw ConfigError("KernelFamily: fractional requires omega > 0");
    if (time_norm == TimeNormTag::rho_variation && !(rho > 2.0))
        throw ConfigError("KernelFamily: rho-variation requires rho > 2");
    if (time_norm != TimeNormTag::pointwise && !time_indexed())
        throw ConfigError("KernelFamily: time norms apply to time-indexed kernels only");
    if (tag == Tag::multiplier && !phi)
        throw ConfigError("KernelFamily: multiplier requires a symbol integrand");
}

} // namespace laghat
