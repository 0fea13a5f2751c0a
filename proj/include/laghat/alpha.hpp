#ifndef LAGHAT_ALPHA_HPP
#define LAGHAT_ALPHA_HPP

#include <cmath>

#include "laghat/errors.hpp"

namespace laghat {

// Type parameter of the Laguerre measure
//   d gamma_alpha(x) = (2/Gamma(alpha+1)) x^{2 alpha + 1} e^{-x^2} dx
// on (0,infty), together with the constants that recur throughout:
//   pi_alpha_const   = Gamma(alpha+1) / (Gamma(alpha+1/2) sqrt(pi)),
//                      the normalizer of the Jacobi density
//                      Pi_alpha(s) = pi_alpha_const (1-s^2)^{alpha-1/2},
//   gamma_alpha_norm = 2 / Gamma(alpha+1), the density prefactor.
// Values are immutable after construction; instances are freely shareable
// across threads.
class AlphaParam {
public:
    explicit AlphaParam(double alpha) : alpha_(alpha) {
        if (!(alpha > -0.5))
            throw DomainError("AlphaParam: requires alpha > -1/2, got " +
                              std::to_string(alpha));
        pi_alpha_const_ = std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 0.5)) /
                          std::sqrt(M_PI);
        gamma_alpha_norm_ = 2.0 / std::tgamma(alpha + 1.0);
    }

    double alpha() const { return alpha_; }
    double pi_alpha_const() const { return pi_alpha_const_; }
    double gamma_alpha_norm() const { return gamma_alpha_norm_; }

    // Jacobi density Pi_alpha(s) on (-1,1); integrates to 1.
    double jacobi_density(double s) const {
        return pi_alpha_const_ * std::pow(1.0 - s * s, alpha_ - 0.5);
    }

    // gamma_alpha density at x > 0.
    double density(double x) const {
        return gamma_alpha_norm_ * std::pow(x, 2.0 * alpha_ + 1.0) * std::exp(-x * x);
    }

    // Accuracy degrades as the Jacobi weight approaches non-integrability;
    // harness tolerances are relaxed 10x below this line.
    bool reduced_accuracy() const { return alpha_ < -0.45; }

private:
    double alpha_;
    double pi_alpha_const_;
    double gamma_alpha_norm_;
};

} // namespace laghat

#endif
