#ifndef LAGHAT_MEASURE_HPP
#define LAGHAT_MEASURE_HPP

#include <vector>

#include "laghat/alpha.hpp"

namespace laghat {

// m(x) = min{1, 1/x}; the local scale that defines the admissible classes B_a.
double admissibility_scale(double x);

// True iff I(c,r) belongs to B_a: 0 < r <= c and r <= a m(c).
bool is_admissible(double c, double r, double a);

// Interval I(c,r) = (c-r, c+r), admissible for its class.  The clipped set
// (c-r, c+r) cap (0,infty) equals (c-r, c+r) because r <= c; the doubled
// interval 2I may need clipping and callers get it from lo2()/hi2().
struct AdmissibleInterval {
    double center;
    double radius;
    double class_a;

    AdmissibleInterval(double c, double r, double a);

    double lo() const { return center - radius; }
    double hi() const { return center + radius; }
    double lo2() const { return center - 2.0 * radius > 0.0 ? center - 2.0 * radius : 0.0; }
    double hi2() const { return center + 2.0 * radius; }
};

// gamma_alpha((lo,hi)) through the regularized incomplete gamma after
// u = x^2: P(alpha+1, hi^2) - P(alpha+1, lo^2), evaluated as a difference of
// upper tails Q once both endpoints sit in the tail (avoids the 1 - 1
// cancellation).  hi may be +infinity.  Deep-tail intervals (lo >~ 27) have
// true mass below the double range; use gamma_mass_log there.
double gamma_mass(double lo, double hi, const AlphaParam& alpha);

// log gamma_alpha((lo,hi)); finite for every interval with lo < hi, including
// those whose mass underflows (computed by local quadrature with the e^{-lo^2}
// peak factored out).
double gamma_mass_log(double lo, double hi, const AlphaParam& alpha);

// gamma_alpha(I(c,2r) cap (0,infty)) / gamma_alpha(I(c,r)); always >= 1.
double doubling_ratio(const AdmissibleInterval& I, const AlphaParam& alpha);

// Regularized lower incomplete gamma P(a,x), series for x < a+1 and continued
// fraction beyond.  Exposed because several oracles cross-check against it.
double regularized_gamma_p(double a, double x);

// Upper tail Q(a,x) = 1 - P(a,x), computed without cancellation for x > a+1.
double regularized_gamma_q(double a, double x);

// The default sweep family for class a at a given refinement level.
// Level 0: centers 2^j (j = -6..6) plus a linear fill, radii a m(c) 2^{-i}
// for i = 0..6.  Each level doubles the family: midpoint centers are added
// and the radius ladder is extended.  Families are nested across levels.
std::vector<AdmissibleInterval> default_interval_family(double a, int level = 0);

// A compact family for sweep harnesses (fewer centers/radii than the default,
// same nesting property); level 0 and level 1 differ by about 2x in size.
std::vector<AdmissibleInterval> sweep_interval_family(double a, int level = 0);

// Empirical doubling constant: max doubling ratio over a family.
double doubling_constant_estimate(const std::vector<AdmissibleInterval>& family,
                                  const AlphaParam& alpha);

} // namespace laghat

#endif
