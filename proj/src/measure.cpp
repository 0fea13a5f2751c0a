#include "laghat/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "laghat/errors.hpp"

namespace laghat {

double admissibility_scale(double x) {
    if (!(x > 0.0)) throw DomainError("admissibility_scale: x must be positive");
    return std::min(1.0, 1.0 / x);
}

bool is_admissible(double c, double r, double a) {
    if (!(c > 0.0 && r > 0.0 && a > 0.0))
        throw DomainError("is_admissible: c, r, a must be positive");
    return r <= c && r <= a * admissibility_scale(c);
}

AdmissibleInterval::AdmissibleInterval(double c, double r, double a)
    : center(c), radius(r), class_a(a) {
    if (!is_admissible(c, r, a))
        throw ValidationError("AdmissibleInterval: I(" + std::to_string(c) + "," +
                              std::to_string(r) + ") is not in B_" + std::to_string(a));
}

namespace {

// Series branch: P(a,x) = x^a e^{-x} / Gamma(a+1) * sum x^n / ((a+1)...(a+n)).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericError("regularized_gamma_p: series failed to converge");
}

// Continued-fraction branch for Q(a,x) = 1 - P(a,x), modified Lentz.
double gamma_q_cf(double a, double x) {
    const double fpmin = std::numeric_limits<double>::min() / 1e-16;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw NumericError("regularized_gamma_p: continued fraction failed to converge");
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    // Switch at x = a+1: series below, continued fraction above.
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double gamma_mass(double lo, double hi, const AlphaParam& alpha) {
    if (!(lo >= 0.0) || !(hi > lo))
        throw DomainError("gamma_mass: need 0 <= lo < hi");
    const double a = alpha.alpha() + 1.0;
    if (lo * lo >= a + 1.0) {
        // Both endpoints in the tail: difference of upper tails; no 1-1 loss.
        const double q_lo = regularized_gamma_q(a, lo * lo);
        const double q_hi = std::isinf(hi) ? 0.0 : regularized_gamma_q(a, hi * hi);
        return std::max(0.0, q_lo - q_hi);
    }
    const double p_hi = std::isinf(hi) ? 1.0 : regularized_gamma_p(a, hi * hi);
    const double p_lo = lo == 0.0 ? 0.0 : regularized_gamma_p(a, lo * lo);
    return std::max(0.0, p_hi - p_lo);
}

double gamma_mass_log(double lo, double hi, const AlphaParam& alpha) {
    const double direct = gamma_mass(lo, hi, alpha);
    if (direct > 1e-280) return std::log(direct);

    // The mass is at or below the edge of the double range.  Integrate the
    // density locally with the peak e^{-lo^2} taken out:
    //   log gamma(I) = -lo^2 + log( norm * int_lo^hi x^{2a+1} e^{-(x^2-lo^2)} dx ).
    if (std::isinf(hi)) hi = lo + 40.0 / (1.0 + lo); // tail beyond is dwarfed
    const int n = 64;
    double acc = 0.0;
    const double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        // 4-point Gauss-Legendre per panel
        static const double gx[2] = {0.3399810435848563, 0.8611363115940526};
        static const double gw[2] = {0.6521451548625461, 0.3478548451374538};
        const double c = lo + (i + 0.5) * h, hw = 0.5 * h;
        for (int j = 0; j < 2; ++j) {
            for (double sgn : {-1.0, 1.0}) {
                const double x = c + sgn * hw * gx[j];
                acc += gw[j] * hw *
                       std::exp((2.0 * alpha.alpha() + 1.0) * std::log(x) -
                                (x - lo) * (x + lo));
            }
        }
    }
    return -lo * lo + std::log(acc * alpha.gamma_alpha_norm());
}

double doubling_ratio(const AdmissibleInterval& I, const AlphaParam& alpha) {
    const double denom = gamma_mass(I.lo(), I.hi(), alpha);
    if (denom > 1e-280) {
        const double numer = gamma_mass(I.lo2(), I.hi2(), alpha);
        return numer / denom;
    }
    return std::exp(gamma_mass_log(I.lo2(), I.hi2(), alpha) -
                    gamma_mass_log(I.lo(), I.hi(), alpha));
}

namespace {

std::vector<double> family_centers(int level) {
    std::set<double> cs;
    // Geometric part: 2^{j / 2^level} over the dyadic window, covering both
    // the local (x <= 1) and the tail (r ~ 1/x) regimes.
    const int denom = 1 << level;
    for (int j = -6 * denom; j <= 6 * denom; ++j)
        cs.insert(std::exp2(static_cast<double>(j) / denom));
    // Linear fill through the transition region.
    const double step = 0.5 / denom;
    for (double c = step; c <= 6.0 + 1e-12; c += step) cs.insert(c);
    return {cs.begin(), cs.end()};
}

} // namespace

std::vector<AdmissibleInterval> default_interval_family(double a, int level) {
    if (!(a > 0.0)) throw DomainError("default_interval_family: class parameter a > 0");
    std::vector<AdmissibleInterval> fam;
    for (double c : family_centers(level)) {
        const double rmax = std::min(c, a * admissibility_scale(c));
        for (int i = 0; i <= 6 + level; ++i)
            fam.emplace_back(c, rmax * std::exp2(-static_cast<double>(i)), a);
    }
    return fam;
}

std::vector<AdmissibleInterval> sweep_interval_family(double a, int level) {
    if (!(a > 0.0)) throw DomainError("sweep_interval_family: class parameter a > 0");
    std::set<double> cs;
    const int denom = 1 << level;
    for (int j = -4 * denom; j <= 4 * denom; ++j)
        cs.insert(std::exp2(static_cast<double>(j) / denom));
    std::vector<AdmissibleInterval> fam;
    for (double c : cs) {
        const double rmax = std::min(c, a * admissibility_scale(c));
        for (int i = 0; i <= 4 + 2 * level; i += 2)
            fam.emplace_back(c, rmax * std::exp2(-static_cast<double>(i)), a);
    }
    return fam;
}

double doubling_constant_estimate(const std::vector<AdmissibleInterval>& family,
                                  const AlphaParam& alpha) {
    double best = 1.0;
    for (const auto& I : family) best = std::max(best, doubling_ratio(I, alpha));
    return best;
}

} // namespace laghat
