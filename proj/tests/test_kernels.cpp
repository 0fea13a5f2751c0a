#include <cmath>
#include <vector>

#include "doctest.h"
#include "laghat/kernels.hpp"
#include "laghat/operators.hpp"
#include "laghat/specfun.hpp"
#include "laghat/errors.hpp"

using namespace laghat;

namespace {

const KernelContext& ctx0() {
    static const KernelContext c{AlphaParam(0.0)};
    return c;
}
const KernelContext& ctx05() {
    static const KernelContext c{AlphaParam(0.5)};
    return c;
}

double gamma_integrate(const KernelContext& ctx, const std::function<double(double)>& f) {
    return integrate(f, ctx.gamma_rule());
}

} // namespace

TEST_CASE("s-integral: value at z = 0 and path crossover continuity") {
    // z = 0 is the plain Jacobi mass
    CHECK(ctx05().s_integral_one(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    // the Jacobi ladder hands over to the peak-substituted Laguerre rule at
    // z = 8 * n_s; both paths must agree to rounding there
    for (const KernelContext* ctx : {&ctx0(), &ctx05()}) {
        const double z_switch = 8.0 * ctx->orders().n_s;
        const double below = ctx->s_integral_one(z_switch - 1e-6);
        const double above = ctx->s_integral_one(z_switch + 1e-6);
        CHECK(below == doctest::Approx(above).epsilon(1e-11));
        // polynomial factor as well
        auto f = [](double s) { return 1.0 + 0.3 * s + s * s; };
        const double pb = ctx->s_integral(z_switch - 1e-6, f);
        const double pa = ctx->s_integral(z_switch + 1e-6, f);
        CHECK(pb == doctest::Approx(pa).epsilon(1e-11));
    }
}

TEST_CASE("heat kernel: conservation, series agreement, long-time limit") {
    // conservation: W_t L_0 = L_0
    double mass = gamma_integrate(ctx05(), [&](double y) {
        return heat_kernel(ctx05(), 0.7, 1.3, y);
    });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    // closed form vs truncated eigen-series
    CHECK(heat_kernel(ctx05(), 1.0, 1.0, 2.0) ==
          doctest::Approx(heat_kernel_series(ctx05(), 1.0, 1.0, 2.0, 60)).epsilon(1e-8));
    CHECK(heat_kernel(ctx0(), 0.5, 0.7, 1.1) ==
          doctest::Approx(heat_kernel_series(ctx0(), 0.5, 0.7, 1.1, 80)).epsilon(1e-8));

    // spectral decay: at t = 10 only the constant mode survives
    for (double x : {0.4, 1.2, 2.8})
        for (double y : {0.3, 1.5, 2.9})
            CHECK(heat_kernel(ctx0(), 10.0, x, y) == doctest::Approx(1.0).epsilon(1e-4));

    CHECK(heat_kernel_series(ctx0(), 3.0, 1.0, 1.0, 0) == 1.0);
    CHECK_THROWS_AS(heat_kernel(ctx0(), -1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("heat kernel series: monotone truncation error for t >= 0.1") {
    double prev = 1e300;
    for (int K : {5, 10, 20, 40, 80}) {
        const double d = std::abs(heat_kernel_series(ctx0(), 0.1, 0.9, 1.3, K) -
                                  heat_kernel_series(ctx0(), 0.1, 0.9, 1.3, 2 * K));
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
}

TEST_CASE("heat kernel: symmetry and positivity") {
    for (double t : {0.1, 1.0, 5.0})
        for (double x : {0.3, 1.0, 2.5})
            for (double y : {0.6, 1.8}) {
                const double wxy = heat_kernel(ctx05(), t, x, y);
                const double wyx = heat_kernel(ctx05(), t, y, x);
                CHECK(wxy > 0.0);
                CHECK(wxy == doctest::Approx(wyx).epsilon(1e-9));
            }
}

TEST_CASE("heat kernel: semigroup law and eigen-identities") {
    for (double al : {0.0, 0.5}) {
        KernelContext ctx{AlphaParam(al)};
        const double t = 0.4, s = 0.7;
        for (double x : {0.8, 1.6})
            for (double y : {0.5, 2.1}) {
                double conv = gamma_integrate(ctx, [&](double z) {
                    return heat_kernel(ctx, t, x, z) * heat_kernel(ctx, s, z, y);
                });
                CHECK(conv == doctest::Approx(heat_kernel(ctx, t + s, x, y)).epsilon(1e-6));
            }
        for (int k : {1, 4, 10}) {
            const double x = 1.1;
            double lhs = gamma_integrate(ctx, [&](double y) {
                return heat_kernel(ctx, 0.6, x, y) * laguerre_normalized(k, ctx.alpha(), y);
            });
            double rhs = std::exp(-0.6 * k) * laguerre_normalized(k, ctx.alpha(), x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7).scale(1.0));
        }
    }
}

TEST_CASE("heat_dx: consistency with W and finite differences at O(h^2)") {
    // n = 0 is the kernel itself
    const double r = 0.5, t = -2.0 * std::log(r);
    CHECK(heat_dx(ctx05(), 0, r, 1.0, 1.4) ==
          doctest::Approx(heat_kernel(ctx05(), t, 1.0, 1.4)).epsilon(1e-12));

    auto fd_error = [&](int n, double h) {
        const double x = 1.0, y = 1.4;
        double fd;
        if (n == 1)
            fd = (heat_dx(ctx05(), 0, r, x + h, y) - heat_dx(ctx05(), 0, r, x - h, y)) /
                 (2.0 * h);
        else
            fd = (heat_dx(ctx05(), 0, r, x + h, y) - 2.0 * heat_dx(ctx05(), 0, r, x, y) +
                  heat_dx(ctx05(), 0, r, x - h, y)) / (h * h);
        return std::abs(fd - heat_dx(ctx05(), n, r, x, y));
    };
    for (int n : {1, 2}) {
        const double e1 = fd_error(n, 1e-3), e2 = fd_error(n, 5e-4);
        CHECK(e1 < 1e-4);
        // halving h divides the O(h^2) error by about 4
        const double slope = std::log2(e1 / e2);
        CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
    }
    CHECK_THROWS_AS(heat_dx(ctx05(), 5, 0.5, 1.0, 1.0), CapacityError);
}

TEST_CASE("heat_dxdy: symmetry, FD oracle, small-r decay") {
    const double r = 0.6, x = 0.8, y = 1.2;
    CHECK(heat_dxdy(ctx0(), r, x, y) == doctest::Approx(heat_dxdy(ctx0(), r, y, x)).epsilon(1e-10));

    auto mixed_fd = [&](double h) {
        return (heat_dx(ctx0(), 1, r, x, y + h) - heat_dx(ctx0(), 1, r, x, y - h)) / (2.0 * h);
    };
    const double e1 = std::abs(mixed_fd(1e-3) - heat_dxdy(ctx0(), r, x, y));
    const double e2 = std::abs(mixed_fd(5e-4) - heat_dxdy(ctx0(), r, x, y));
    CHECK(e1 < 1e-4);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));

    // r -> 0: the mixed derivative vanishes at the spectral rate
    // e^{-2t} dL_1(x) dL_1(y) = r^2 4xy/(1+alpha); in particular it is O(r)
    const double rv = 1e-4;
    const double val = heat_dxdy(ctx0(), rv, x, y);
    const double lead = 4.0 * rv * rv * x * y;
    CHECK(std::abs(val) <= 5.0 * rv);
    CHECK(val == doctest::Approx(lead).epsilon(1e-3));
}

TEST_CASE("poisson kernel: conservation and subordination eigen-identity") {
    double mass = gamma_integrate(ctx05(), [&](double y) {
        return poisson_kernel(ctx05(), 1.0, 1.0, y);
    });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    // the subordination-weight oracle: t/(2 sqrt(pi)) int e^{-t^2/4u} e^{-ku} u^{-3/2} du
    // must equal e^{-sqrt(k) t}; then the kernel must act accordingly
    const int k = 3;
    const double t = 0.8, x = 1.1;
    double sub = integrate_adaptive(
        [&](double u) {
            return t / (2.0 * std::sqrt(M_PI)) * std::exp(-t * t / (4.0 * u) - k * u) *
                   std::pow(u, -1.5);
        },
        1e-12, 60.0, 1e-12);
    CHECK(sub == doctest::Approx(std::exp(-std::sqrt(3.0) * t)).epsilon(1e-10));

    double lhs = gamma_integrate(ctx0(), [&](double y) {
        return poisson_kernel(ctx0(), t, x, y) * laguerre_normalized(k, ctx0().alpha(), y);
    });
    double rhs = std::exp(-std::sqrt(3.0) * t) * laguerre_normalized(k, ctx0().alpha(), x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6).scale(1.0));
}

TEST_CASE("poisson derivative kernel: t d_t P_t acts as -sqrt(k) t e^{-sqrt(k)t}") {
    const int k = 4;
    const double t = 0.9, x = 1.2;
    double lhs = gamma_integrate(ctx0(), [&](double y) {
        return poisson_deriv_kernel(ctx0(), 0, 1, t, x, y) *
               laguerre_normalized(k, ctx0().alpha(), y);
    });
    const double rhs = -2.0 * t * std::exp(-2.0 * t) * laguerre_normalized(k, ctx0().alpha(), x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6).scale(1.0));
    CHECK_THROWS_AS(poisson_deriv_kernel(ctx0(), 3, 2, 1.0, 1.0, 2.0), CapacityError);
}

TEST_CASE("poisson kernel: r-form matches eigen-series across the switch") {
    // the implementation switches to the eigen-series at t = 30; both
    // representations must agree in the overlap and at moderate times
    for (double t : {0.5, 2.0, 10.0, 25.0, 29.9}) {
        double series = 0.0;
        for (int j = 0; j <= 80; ++j)
            series += std::exp(-std::sqrt(static_cast<double>(j)) * t) *
                      laguerre_normalized(j, ctx0().alpha(), 0.9) *
                      laguerre_normalized(j, ctx0().alpha(), 1.4);
        CHECK(poisson_kernel(ctx0(), t, 0.9, 1.4) ==
              doctest::Approx(series).epsilon(t < 1.0 ? 1e-7 : 1e-10).scale(1.0));
    }
    CHECK(poisson_kernel(ctx0(), 31.0, 0.9, 1.4) ==
          doctest::Approx(1.0).epsilon(1e-10)); // deep decay
}

TEST_CASE("poisson trajectory: symmetry of the kernel and dy variant") {
    PoissonTrajectory pxy(ctx05(), 0, 0, 0.7, 1.9);
    PoissonTrajectory pyx(ctx05(), 0, 0, 1.9, 0.7);
    for (double t : {0.2, 1.0, 6.0})
        CHECK(pxy(t) == doctest::Approx(pyx(t)).epsilon(1e-9));

    // dy trajectory is the y-derivative of the kernel
    const double h = 1e-4, t = 0.8, x = 1.1, y = 1.7;
    PoissonTrajectory dy(ctx0(), 0, 0, x, y, true);
    const double fd = (poisson_kernel(ctx0(), t, x, y + h) -
                       poisson_kernel(ctx0(), t, x, y - h)) / (2.0 * h);
    CHECK(dy(t) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("riesz kernel: two printed forms agree and sign flips across diagonal") {
    CHECK(riesz_kernel(ctx05(), 1, 1.0, 2.0) ==
          doctest::Approx(riesz_kernel_tform(ctx05(), 1, 1.0, 2.0)).epsilon(1e-7));

    // H_1 factor makes the order-1 kernel change sign across x = y
    const double below = riesz_kernel(ctx0(), 1, 0.7, 1.0);
    const double above = riesz_kernel(ctx0(), 1, 1.3, 1.0);
    CHECK(below * above < 0.0);

    CHECK_THROWS_AS(riesz_kernel(ctx0(), 1, 1.0, 1.0 + 1e-8), ProximityError);
    CHECK_THROWS_AS(riesz_kernel(ctx0(), 0, 1.0, 2.0), CapacityError);
}

TEST_CASE("riesz kernel: Abel-summed spectral oracle") {
    // sum k^{-1/2} L_k'(x) L_k(y) e^{-eps k}, extrapolated over eps -> 0
    const double x = 1.0, y = 2.0;
    std::vector<double> eps = {1e-2, 5e-3, 2.5e-3}, vals;
    for (double e : eps) {
        double acc = 0.0;
        for (int k = 1; k <= 60; ++k)
            acc += std::pow(k, -0.5) * std::exp(-e * k) *
                   laguerre_normalized(k, ctx0().alpha(), x, 1) *
                   laguerre_normalized(k, ctx0().alpha(), y, 0);
        vals.push_back(acc);
    }
    // quadratic extrapolation to eps = 0
    double a01 = vals[1] + (vals[1] - vals[0]) * eps[1] / (eps[0] - eps[1]);
    double a12 = vals[2] + (vals[2] - vals[1]) * eps[2] / (eps[1] - eps[2]);
    double orc = a12 + (a12 - a01) * eps[2] / (eps[0] - eps[2]);
    CHECK(riesz_kernel(ctx0(), 1, x, y) == doctest::Approx(orc).epsilon(1e-3).scale(0.1));
}

TEST_CASE("fractional kernel: eigenfunction action and printed-form ratio") {
    // Delta^{-1} L_2 = (1/2) L_2 through the kernel, quadrature split at the
    // diagonal kink
    const double x = 0.9;
    auto k2 = [&](double y) { return laguerre_normalized(2, ctx0().alpha(), y); };
    double lhs = kernel_apply_on_support(
        ctx0(), [&](double xx, double yy) { return frac_kernel(ctx0(), 1.0, xx, yy); },
        k2, 1e-9, x, x, 16, 16);
    lhs += kernel_apply_on_support(
        ctx0(), [&](double xx, double yy) { return frac_kernel(ctx0(), 1.0, xx, yy); },
        k2, x, 12.0, x, 16, 16);
    CHECK(lhs == doctest::Approx(0.5 * k2(x)).epsilon(1e-5).scale(1.0));

    // action on L_0 vanishes: int H_omega(x,y) dgamma(y) = 0
    double on_const = kernel_apply_on_support(
        ctx0(), [&](double xx, double yy) { return frac_kernel(ctx0(), 1.0, xx, yy); },
        [](double) { return 1.0; }, 1e-9, x, x, 16, 16);
    on_const += kernel_apply_on_support(
        ctx0(), [&](double xx, double yy) { return frac_kernel(ctx0(), 1.0, xx, yy); },
        [](double) { return 1.0; }, x, 12.0, x, 16, 16);
    CHECK(on_const == doctest::Approx(0.0).epsilon(1e-5).scale(1.0));

    // the verbatim section form carries the (2k)^{-omega} convention
    for (double om : {0.5, 1.0, 2.0})
        CHECK(frac_kernel_printed(ctx05(), om, 0.8, 1.7) ==
              doctest::Approx(std::exp2(-om) * frac_kernel(ctx05(), om, 0.8, 1.7))
                  .epsilon(1e-12));
}

TEST_CASE("frac_integral spectral: omega = 2 eigenvalue on mode 4 is 1/16") {
    std::vector<double> c(5, 0.0);
    c[4] = 1.0;
    SpectralFunction f(AlphaParam(0.0), c);
    SpectralFunction g = frac_integral(2.0, f);
    CHECK(g.coeffs[4] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(frac_integral(1.0, f).coeffs[4] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("laplace symbol: closed forms") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto cosf = [](double t) { return std::cos(t); };
    for (double z : {0.3, 1.0, 4.0}) {
        CHECK(laplace_symbol(one, z) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(laplace_symbol(zero, z) == 0.0);
        // z int e^{-zt} cos t dt = z^2/(1+z^2)
        CHECK(laplace_symbol(cosf, z) ==
              doctest::Approx(z * z / (1.0 + z * z)).epsilon(1e-9));
    }
}

TEST_CASE("multiplier kernel: zero symbol, constant symbol, symmetry") {
    auto zero = [](double) { return 0.0; };
    CHECK(multiplier_kernel(ctx05(), zero, 0.7, 1.9) == doctest::Approx(0.0).scale(1.0));

    // phi == 1 gives T = I - P_0, whose off-diagonal kernel is the constant -1
    auto one = [](double) { return 1.0; };
    CHECK(multiplier_kernel(ctx0(), one, 0.7, 1.9) == doctest::Approx(-1.0).epsilon(1e-6));

    auto cosf = [](double t) { return std::cos(t); };
    const double kxy = multiplier_kernel(ctx05(), cosf, 0.7, 1.9);
    const double kyx = multiplier_kernel(ctx05(), cosf, 1.9, 0.7);
    CHECK(kxy == doctest::Approx(kyx).epsilon(1e-8).scale(1.0));
}

namespace {

// Verbatim nested-quadrature evaluation of the printed lemma integrands,
// no peak extraction; the oracle for the production evaluator.
double direct_lemma_quad(const KernelContext& ctx, LemmaId id, double x, double y,
                         const LemmaParams& prm) {
    QuadRule rr = de_rule_unit(400);
    QuadRule sr = gauss_jacobi_rule(ctx.alpha(), 200);
    const double a = ctx.alpha().alpha();
    double acc = 0.0;
    for (size_t i = 0; i < rr.nodes.size(); ++i) {
        const double r = rr.nodes[i], eps = rr.co_nodes[i] * (1.0 + r);
        double inner = 0.0;
        for (size_t j = 0; j < sr.nodes.size(); ++j) {
            const double s = sr.nodes[j];
            // exponent and eps-power composed in the log to avoid 0/0
            double v = 0.0;
            switch (id) {
                case LemmaId::L31:
                    v = std::exp(-q_form(x, r * y, s) / (2.0 * eps) + x * x -
                                 (a + 2.5) * std::log(eps));
                    break;
                case LemmaId::L34:
                    v = std::pow(std::abs(r * x - y * s) / std::sqrt(eps), prm.beta) *
                        std::exp(-q_form(r * x, y, s) / eps + y * y -
                                 (a + 2.5) * std::log(eps));
                    break;
                case LemmaId::L36: // j = 1, with the Pi_{alpha+1} density
                    v = (a + 1.0) / (a + 0.5) * (1.0 - s * s) * x * r *
                        std::exp(-q_form(x, r * y, s) / eps + x * x -
                                 (a + 2.5) * std::log(eps));
                    break;
                default:
                    break;
            }
            inner += sr.weights[j] * v;
        }
        acc += rr.weights[i] * inner;
    }
    return acc;
}

} // namespace

TEST_CASE("lemma kernels: positivity and verbatim-form oracle") {
    CHECK(lemma_kernel(ctx0(), LemmaId::L31, 2.0, 1.0) > 0.0);
    CHECK(std::isfinite(lemma_kernel(ctx0(), LemmaId::L31, 2.0, 1.0)));

    // production evaluator against the direct nested quadrature
    const double direct31 = direct_lemma_quad(ctx0(), LemmaId::L31, 2.0, 1.0, {});
    CHECK(lemma_kernel(ctx0(), LemmaId::L31, 2.0, 1.0) ==
          doctest::Approx(direct31).epsilon(1e-8));

    KernelContext c05{AlphaParam(0.5)};
    LemmaParams p36;
    p36.j = 1;
    const double direct36 = direct_lemma_quad(c05, LemmaId::L36, 1.5, 0.5, p36);
    CHECK(lemma_kernel(c05, LemmaId::L36, 1.5, 0.5, p36) ==
          doctest::Approx(direct36).epsilon(1e-6));
}

TEST_CASE("lemma L34 at beta = 0: the (E0) rewrite changes nothing") {
    // the exponent -q(rx,y,s)/(1-r^2) + y^2 equals -q(x,ry,s)/(1-r^2) + x^2;
    // evaluating through the verbatim swapped form must give the same number
    LemmaParams p;
    p.beta = 0.0;
    const double via_lib = lemma_kernel(ctx0(), LemmaId::L34, 1.3, 0.8, p);
    // direct quadrature of the swapped printed form (q(x,ry,s), +x^2)
    QuadRule rr = de_rule_unit(400);
    QuadRule sr = gauss_jacobi_rule(ctx0().alpha(), 200);
    double acc = 0.0;
    for (size_t i = 0; i < rr.nodes.size(); ++i) {
        const double r = rr.nodes[i], eps = rr.co_nodes[i] * (1.0 + r);
        double inner = 0.0;
        for (size_t j = 0; j < sr.nodes.size(); ++j) {
            const double s = sr.nodes[j];
            inner += sr.weights[j] *
                     std::exp(-q_form(1.3, r * 0.8, s) / eps + 1.3 * 1.3 -
                              (ctx0().alpha().alpha() + 2.5) * std::log(eps));
        }
        acc += rr.weights[i] * inner;
    }
    CHECK(via_lib == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("lemma L34(beta=0) differs from L31 by the halved exponent") {
    // regression anchor: the two kernels are NOT equal (L31 halves q)
    LemmaParams p;
    p.beta = 0.0;
    const double l34 = lemma_kernel(ctx0(), LemmaId::L34, 1.3, 0.8, p);
    const double l31 = lemma_kernel(ctx0(), LemmaId::L31, 0.8, 1.3, {});
    CHECK(std::abs(l34 - l31) > 1e-6 * std::abs(l31));
}

TEST_CASE("KernelFamily validation") {
    KernelFamily f;
    f.tag = KernelFamily::Tag::riesz;
    f.n = 0;
    CHECK_THROWS_AS(f.validate(), ConfigError);
    f.n = 1;
    CHECK_NOTHROW(f.validate());
    f.tag = KernelFamily::Tag::riesz;
    f.time_norm = TimeNormTag::sup_t;
    CHECK_THROWS_AS(f.validate(), ConfigError);
    f.tag = KernelFamily::Tag::poisson_deriv;
    f.time_norm = TimeNormTag::rho_variation;
    f.rho = 2.0;
    CHECK_THROWS_AS(f.validate(), ConfigError);
    f.rho = 3.0;
    CHECK_NOTHROW(f.validate());
}
