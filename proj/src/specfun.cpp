#include "laghat/specfun.hpp"

#include <algorithm>
#include <cmath>

#include "laghat/errors.hpp"

namespace laghat {

double laguerre_classical(int k, double a, double u) {
    if (k < 0) throw DomainError("laguerre_classical: negative degree");
    double pm1 = 1.0;                  // L_0
    if (k == 0) return pm1;
    double p = 1.0 + a - u;            // L_1
    for (int j = 1; j < k; ++j) {
        double pp1 = ((2.0 * j + 1.0 + a - u) * p - (j + a) * pm1) / (j + 1.0);
        pm1 = p;
        p = pp1;
    }
    return p;
}

void laguerre_classical_all(int K, double a, double u, std::vector<double>& out) {
    out.resize(static_cast<size_t>(K) + 1);
    out[0] = 1.0;
    if (K == 0) return;
    out[1] = 1.0 + a - u;
    for (int j = 1; j < K; ++j)
        out[j + 1] = ((2.0 * j + 1.0 + a - u) * out[j] - (j + a) * out[j - 1]) / (j + 1.0);
}

double laguerre_norm_factor(int k, const AlphaParam& alpha) {
    const double a = alpha.alpha();
    return std::exp(0.5 * (std::lgamma(a + 1.0) + std::lgamma(k + 1.0) -
                           std::lgamma(a + k + 1.0)));
}

namespace {

// m-th u-derivative of L_k^a(u): (-1)^m L_{k-m}^{a+m}(u), zero for m > k.
double laguerre_u_deriv(int k, double a, double u, int m) {
    if (m > k) return 0.0;
    double v = laguerre_classical(k - m, a + m, u);
    return (m % 2 == 0) ? v : -v;
}

} // namespace

double laguerre_normalized(int k, const AlphaParam& alpha, double x, int n_deriv) {
    if (k < 0 || n_deriv < 0)
        throw DomainError("laguerre_normalized: negative degree or derivative order");
    if (k > kMaxLaguerreDegree)
        throw CapacityError("laguerre_normalized: degree beyond table limit " +
                            std::to_string(kMaxLaguerreDegree));
    if (n_deriv > kMaxLaguerreDeriv)
        throw CapacityError("laguerre_normalized: derivative order beyond " +
                            std::to_string(kMaxLaguerreDeriv));

    const double a = alpha.alpha();
    const double u = x * x;
    const double nf = laguerre_norm_factor(k, alpha);

    // Chain rule for f(x) = g(x^2).
    switch (n_deriv) {
        case 0:
            return nf * laguerre_classical(k, a, u);
        case 1:
            return nf * 2.0 * x * laguerre_u_deriv(k, a, u, 1);
        case 2:
            return nf * (2.0 * laguerre_u_deriv(k, a, u, 1) +
                         4.0 * u * laguerre_u_deriv(k, a, u, 2));
        case 3:
            return nf * (12.0 * x * laguerre_u_deriv(k, a, u, 2) +
                         8.0 * x * u * laguerre_u_deriv(k, a, u, 3));
        default:
            return nf * (12.0 * laguerre_u_deriv(k, a, u, 2) +
                         48.0 * u * laguerre_u_deriv(k, a, u, 3) +
                         16.0 * u * u * laguerre_u_deriv(k, a, u, 4));
    }
}

PolyEval::PolyEval(int k, const AlphaParam& a, int n)
    : degree(k), order_alpha(a), derivative_order(n) {
    if (k < 0 || k > kMaxLaguerreDegree)
        throw CapacityError("PolyEval: degree out of range");
    if (n < 0 || n > kMaxLaguerreDeriv)
        throw CapacityError("PolyEval: derivative order out of range");
}

double PolyEval::operator()(double x) const {
    return laguerre_normalized(degree, order_alpha, x, derivative_order);
}

double hermite(int n, double x) {
    if (n < 0) throw DomainError("hermite: negative degree");
    double hm1 = 1.0;
    if (n == 0) return hm1;
    double h = 2.0 * x;
    for (int j = 1; j < n; ++j) {
        double hp1 = 2.0 * x * h - 2.0 * j * hm1;
        hm1 = h;
        h = hp1;
    }
    return h;
}

void hermite_all(int N, double x, std::vector<double>& out) {
    out.resize(static_cast<size_t>(N) + 1);
    out[0] = 1.0;
    if (N == 0) return;
    out[1] = 2.0 * x;
    for (int j = 1; j < N; ++j)
        out[j + 1] = 2.0 * x * out[j] - 2.0 * j * out[j - 1];
}

QEstimateReport check_q_estimates(double x, double y, double r, double s) {
    QEstimateReport rep;
    const double one_m_r2 = (1.0 - r) * (1.0 + r);
    const double q_xry = q_form(x, r * y, s);
    const double q_rxy = q_form(r * x, y, s);
    const double rel = 1e-10;

    auto ident = [&](double lhs, double rhs) {
        return std::abs(lhs - rhs) <= rel * (1.0 + std::abs(lhs));
    };
    // one-sided checks get the same relative slack so that exact-equality
    // cases (e.g. (x-ry)^2 = 0) survive rounding
    auto ge = [&](double lhs, double rhs) {
        return lhs >= rhs - rel * (1.0 + std::abs(lhs));
    };

    // (E0) q(rx,y,s)/(1-r^2) - y^2 = q(x,ry,s)/(1-r^2) - x^2
    rep.ok[0] = ident(q_rxy / one_m_r2 - y * y, q_xry / one_m_r2 - x * x);
    // (E1) q(x,ry,s) = (x-ry)^2 + 2xyr(1-s)
    const double e1_rhs = (x - r * y) * (x - r * y) + 2.0 * x * y * r * (1.0 - s);
    rep.ok[1] = ident(q_xry, e1_rhs);
    // (E2) q >= 2xyr(1-s)
    rep.ok[2] = ge(q_xry, 2.0 * x * y * r * (1.0 - s));
    // (E3) q >= r^2(x^2+y^2) for s in (-1,0); vacuous otherwise
    rep.ok[3] = (s >= 0.0) || ge(q_xry, r * r * (x * x + y * y));
    // (E4) q >= r^2(x^2+y^2)(1-s) for s in [0,1); vacuous otherwise
    rep.ok[4] = (s < 0.0) || ge(q_xry, r * r * (x * x + y * y) * (1.0 - s));
    // (E5), (E6) in the sharp uniform form (factor 2 on q; see header)
    rep.ok[5] = ge(2.0 * q_xry, x * x * r * r * (1.0 - s));
    rep.ok[6] = ge(2.0 * q_xry, y * y * r * r * (1.0 - s));
    // (E7) q(x,ry,s) = (x-rys)^2 + y^2 r^2 (1-s^2); an identity
    const double e7_rhs = (x - r * y * s) * (x - r * y * s) +
                          y * y * r * r * (1.0 - s * s);
    rep.ok[7] = ident(q_xry, e7_rhs);
    // (E8) q(rx,y,s) >= (rx-ys)^2
    rep.ok[8] = ge(q_rxy, (r * x - y * s) * (r * x - y * s));
    return rep;
}

bool q_e5_unscaled(double x, double y, double r, double s) {
    return q_form(x, r * y, s) >= x * x * r * r * (1.0 - s) - 1e-12;
}

AuxFunctions aux_functions(double r, int n) {
    if (!(r >= 0.0 && r <= 1.0))
        throw DomainError("aux_functions: r must lie in [0,1]");
    if (n < 0) throw DomainError("aux_functions: negative n");

    AuxFunctions f{};
    if (r == 0.0) {
        f.phi = f.psi = f.xi_n = 0.0;
        return f;
    }

    const double u = 1.0 - r;
    if (u < 1e-6) {
        // -log r = u (1 + u/2 + u^2/3 + ...), 1 - r^2 = u (2 - u)
        const double series = 1.0 + u / 2.0 + u * u / 3.0;
        f.phi = (2.0 - u) / series;
        f.psi = r * series / (2.0 - u);
        f.xi_n = std::pow(r, n) * std::pow(series / (2.0 - u), 0.5 * n - 1.0);
        return f;
    }

    const double mlog = -std::log1p(-u);
    const double omr2 = u * (1.0 + r);
    f.phi = omr2 / mlog;
    f.psi = r * mlog / omr2;
    f.xi_n = std::pow(r, n) * std::pow(mlog / omr2, 0.5 * n - 1.0);
    return f;
}

namespace {

double grid_max(int n, int component) {
    // The maxima sit at r -> 1; a uniform pass plus a geometric zoom on the
    // last cell pins them to ~1e-12.
    double best = 0.0;
    const int N = 200000;
    for (int i = 1; i <= N; ++i) {
        AuxFunctions f = aux_functions(static_cast<double>(i) / N, n);
        double v = component == 0 ? f.phi : component == 1 ? f.psi : f.xi_n;
        best = std::max(best, v);
    }
    for (double u = 1.0 / N; u > 1e-14; u *= 0.5) {
        AuxFunctions f = aux_functions(1.0 - u, n);
        double v = component == 0 ? f.phi : component == 1 ? f.psi : f.xi_n;
        best = std::max(best, v);
    }
    return best;
}

} // namespace

double aux_phi_sup() {
    static const double v = grid_max(1, 0);
    return v;
}

double aux_psi_sup() {
    static const double v = grid_max(1, 1);
    return v;
}

double aux_xi_sup(int n) {
    static const std::vector<double> cache = [] {
        std::vector<double> c;
        for (int m = 0; m < 9; ++m) c.push_back(grid_max(m, 2));
        return c;
    }();
    if (n >= 0 && n < static_cast<int>(cache.size())) return cache[n];
    return grid_max(n, 2);
}

} // namespace laghat
