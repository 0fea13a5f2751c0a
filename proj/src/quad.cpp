#include "laghat/quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numeric>

#include "laghat/errors.hpp"

namespace laghat {

namespace {

// Symmetric tridiagonal eigenproblem by the implicit QL method, tracking only
// the first component of each eigenvector (all that Golub-Welsch needs).
// d: diagonal, e: subdiagonal (e[n-1] unused), z: first-row vector, typically
// (1,0,...,0) on entry.  On exit d holds ascending eigenvalues.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw NumericError("tridiag_ql: eigenvalue iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // Sort ascending, carrying z along.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n), zs(n);
    for (int i = 0; i < n; ++i) {
        ds[i] = d[idx[i]];
        zs[i] = z[idx[i]];
    }
    d.swap(ds);
    z.swap(zs);
}

void golub_welsch(std::vector<double> diag, std::vector<double> offdiag_sq, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> e(n, 0.0), z(n, 0.0);
    for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(offdiag_sq[i]);
    z[0] = 1.0;
    tridiag_ql(diag, e, z);
    nodes = std::move(diag);
    weights.resize(n);
    for (int i = 0; i < n; ++i) weights[i] = mu0 * z[i] * z[i];
}

} // namespace

QuadRule gauss_jacobi_rule(const AlphaParam& alpha, int N) {
    if (N < 1) throw DomainError("gauss_jacobi_rule: N >= 1 required");
    const double a = alpha.alpha() - 0.5; // Gegenbauer exponent in (1-s^2)^a

    std::vector<double> diag(N, 0.0), beta(N, 0.0);
    // Monic recurrence for the symmetric Jacobi weight: beta_1 = 1/(3+2a),
    // beta_k = k(k+2a)/((2k+2a+1)(2k+2a-1)) for k >= 2.  The k = 1 case must
    // be taken in closed form; the general expression is 0/0 at a = -1/2.
    if (N > 1) beta[1] = 1.0 / (3.0 + 2.0 * a);
    for (int k = 2; k < N; ++k)
        beta[k] = k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));

    QuadRule rule;
    rule.kind = RuleKind::jacobi;
    rule.alpha = alpha.alpha();
    rule.order = N;
    golub_welsch(std::move(diag), std::move(beta), 1.0, rule.nodes, rule.weights);

    double s = rule.total_weight();
    for (double& w : rule.weights) w /= s;
    return rule;
}

QuadRule gen_laguerre_rule(double a, int N) {
    if (N < 1) throw DomainError("gen_laguerre_rule: N >= 1 required");
    if (!(a > -1.0)) throw DomainError("gen_laguerre_rule: parameter must exceed -1");

    std::vector<double> diag(N), beta(N, 0.0);
    for (int k = 0; k < N; ++k) diag[k] = 2.0 * k + a + 1.0;
    for (int k = 1; k < N; ++k) beta[k] = k * (k + a);

    QuadRule rule;
    rule.kind = RuleKind::gen_laguerre;
    rule.alpha = a;
    rule.order = N;
    golub_welsch(std::move(diag), std::move(beta), std::tgamma(a + 1.0), rule.nodes,
                 rule.weights);

    // Far-tail weights can underflow to exactly zero at large N; those pairs
    // carry nothing and would break the positivity invariant, so drop them.
    std::vector<double> nn, ww;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        if (rule.weights[i] > 0.0) {
            nn.push_back(rule.nodes[i]);
            ww.push_back(rule.weights[i]);
        }
    }
    rule.nodes.swap(nn);
    rule.weights.swap(ww);
    return rule;
}

QuadRule gamma_alpha_rule(const AlphaParam& alpha, int N) {
    QuadRule rule = gen_laguerre_rule(alpha.alpha(), N);
    for (double& x : rule.nodes) x = std::sqrt(x);
    double s = rule.total_weight();
    for (double& w : rule.weights) w /= s;
    rule.alpha = alpha.alpha();
    return rule;
}

QuadRule de_rule_unit(int N, double stiffness) {
    if (N < 1) throw DomainError("de_rule_unit: N >= 1 required");
    if (!(stiffness > 0.0)) throw DomainError("de_rule_unit: stiffness must be positive");

    // x(t) = (1 + tanh((pi/2) sinh t)) / 2 maps R onto (0,1); truncating at
    // t_max = 6.3 puts the extreme nodes ~1e-280 from the endpoints.
    const double t_max = 6.3 * stiffness;
    const int half = (N - 1) / 2;
    const double h = t_max / std::max(1, half);

    QuadRule rule;
    rule.kind = RuleKind::double_exponential;
    rule.alpha = stiffness;
    rule.order = N;

    for (int k = -half; k <= half; ++k) {
        const double t = k * h;
        const double sh = (M_PI / 2.0) * std::sinh(t);
        // 1 - x and x from the two one-sided forms; both exact.
        const double ex = std::exp(-2.0 * sh);      // (1-x)/x scaled form
        const double x = 1.0 / (1.0 + ex);          // = (1+tanh sh)/2
        const double cox = ex / (1.0 + ex);         // = 1 - x
        const double w = (M_PI / 4.0) * h * std::cosh(t) / std::pow(std::cosh(sh), 2);
        if (x <= 0.0 || cox <= 0.0 || w <= 0.0 || !std::isfinite(w)) continue;
        rule.nodes.push_back(x);
        rule.co_nodes.push_back(cox);
        rule.weights.push_back(w);
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, const QuadRule& rule) {
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v))
            throw EvaluationError("integrate: non-finite integrand value", rule.nodes[i]);
        s += rule.weights[i] * v;
    }
    return s;
}

double integrate_de(const std::function<double(double, double)>& f, const QuadRule& rule) {
    double s = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = f(rule.nodes[i], rule.co_nodes[i]);
        if (!std::isfinite(v))
            throw EvaluationError("integrate_de: non-finite integrand value", rule.nodes[i]);
        s += rule.weights[i] * v;
    }
    return s;
}

namespace {

struct AdaptiveState {
    const std::function<double(double)>* f;
    double tol;
    int max_depth = 40;
    long evals = 0;

    double eval(double x) {
        ++evals;
        double v = (*f)(x);
        if (!std::isfinite(v))
            throw EvaluationError("integrate_adaptive: non-finite integrand value", x);
        return v;
    }
};

double simpson(double fa, double fm, double fb, double h6) {
    return h6 * (fa + 4.0 * fm + fb);
}

double adapt(AdaptiveState& st, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth, bool& converged) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = st.eval(lm), frm = st.eval(rm);
    const double h6 = (b - a) / 12.0;
    const double left = simpson(fa, flm, fm, h6);
    const double right = simpson(fm, frm, fb, h6);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth >= st.max_depth) {
        if (std::abs(delta) > 15.0 * tol) converged = false;
        return left + right + delta / 15.0;
    }
    bool cl = true, cr = true;
    double vl = adapt(st, a, m, fa, flm, fm, left, tol / 2.0, depth + 1, cl);
    double vr = adapt(st, m, b, fm, frm, fb, right, tol / 2.0, depth + 1, cr);
    converged = cl && cr;
    return vl + vr;
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    if (!(hi > lo)) throw DomainError("integrate_adaptive: requires hi > lo");
    if (!(tol > 0.0)) throw DomainError("integrate_adaptive: tol must be positive");

    std::function<double(double)> g;
    double a, b;
    if (std::isinf(hi)) {
        // x = lo + t/(1-t) maps (0,1) onto (lo, infty)
        g = [&f, lo](double t) {
            const double omt = 1.0 - t;
            return f(lo + t / omt) / (omt * omt);
        };
        a = 0.0;
        b = 1.0 - 1e-14;
    } else {
        g = f;
        a = lo;
        b = hi;
    }

    // A fixed initial subdivision keeps narrow interior features from being
    // invisible to the first Simpson stencil.
    AdaptiveState st{&g, tol};
    const int panels = 16;
    bool converged = true;
    double v = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        const double fa = st.eval(pa), fb = st.eval(pb), fm = st.eval(0.5 * (pa + pb));
        const double whole = simpson(fa, fm, fb, (pb - pa) / 6.0);
        bool c = true;
        v += adapt(st, pa, pb, fa, fm, fb, whole, tol / panels, 0, c);
        converged = converged && c;
    }
    if (!converged)
        throw ToleranceError("integrate_adaptive: tolerance not reached at max depth", v, tol);
    return v;
}

std::string rule_cache_filename(RuleKind kind, double alpha, int N) {
    char buf[96];
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(alpha));
    std::memcpy(&bits, &alpha, sizeof(bits));
    std::snprintf(buf, sizeof(buf), "rule_k%d_a%016llx_n%d.qr", static_cast<int>(kind),
                  static_cast<unsigned long long>(bits), N);
    return buf;
}

namespace {
constexpr char kMagic[4] = {'L', 'Q', 'R', '1'};
constexpr uint32_t kVersion = 1;
} // namespace

bool save_rule(const QuadRule& rule, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) return false;
    bool ok = true;
    auto put = [&](const void* p, size_t n) { ok = ok && std::fwrite(p, 1, n, fp) == n; };
    const uint32_t kind = static_cast<uint32_t>(rule.kind);
    const uint64_t n = rule.nodes.size();
    const uint64_t nco = rule.co_nodes.size();
    const uint64_t order = static_cast<uint64_t>(rule.order);
    put(kMagic, 4);
    put(&kVersion, 4);
    put(&kind, 4);
    put(&rule.alpha, 8);
    put(&order, 8);
    put(&n, 8);
    put(&nco, 8);
    put(rule.nodes.data(), 8 * n);
    put(rule.weights.data(), 8 * n);
    put(rule.co_nodes.data(), 8 * nco);
    std::fclose(fp);
    return ok;
}

bool load_rule(QuadRule& rule, const std::string& path, RuleKind kind, double alpha, int N) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) return false;
    bool ok = true;
    auto get = [&](void* p, size_t n) { ok = ok && std::fread(p, 1, n, fp) == n; };
    char magic[4];
    uint32_t version = 0, k = 0;
    double a = 0.0;
    uint64_t order = 0, n = 0, nco = 0;
    get(magic, 4);
    get(&version, 4);
    get(&k, 4);
    get(&a, 8);
    get(&order, 8);
    get(&n, 8);
    get(&nco, 8);
    ok = ok && std::memcmp(magic, kMagic, 4) == 0 && version == kVersion &&
         k == static_cast<uint32_t>(kind) && a == alpha && order == static_cast<uint64_t>(N) &&
         n > 0 && n < (1u << 22) && (nco == 0 || nco == n);
    if (ok) {
        rule.kind = kind;
        rule.alpha = alpha;
        rule.order = N;
        rule.nodes.resize(n);
        rule.weights.resize(n);
        rule.co_nodes.resize(nco);
        get(rule.nodes.data(), 8 * n);
        get(rule.weights.data(), 8 * n);
        get(rule.co_nodes.data(), 8 * nco);
        // Reject silently corrupted payloads.
        for (size_t i = 0; ok && i < n; ++i)
            ok = std::isfinite(rule.nodes[i]) && std::isfinite(rule.weights[i]) &&
                 rule.weights[i] >= 0.0;
    }
    std::fclose(fp);
    return ok;
}

} // namespace laghat
