#ifndef LAGHAT_QUAD_HPP
#define LAGHAT_QUAD_HPP

#include <functional>
#include <string>
#include <vector>

#include "laghat/alpha.hpp"

namespace laghat {

enum class RuleKind : int {
    jacobi = 0,             // weight Pi_alpha(s) on (-1,1), normalized mass 1
    gen_laguerre = 1,       // gamma_alpha on (0,infty), nodes in x, mass 1
    double_exponential = 2, // tanh-sinh on (0,1)
    adaptive = 3,           // placeholder tag for adaptive results
};

// An immutable quadrature rule.  For double_exponential rules, co_nodes holds
// 1 - node to full precision (the clustering makes 1 - node underflow-prone
// when recovered by subtraction); it is empty for the other kinds.
struct QuadRule {
    RuleKind kind = RuleKind::adaptive;
    double alpha = 0.0; // weight parameter where applicable
    int order = 0;      // requested order N
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> co_nodes;

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

// Gauss rule for the probability density Pi_alpha(s) on (-1,1), by
// Golub-Welsch on the symmetric Jacobi recurrence; weights post-normalized so
// they sum to exactly 1.
QuadRule gauss_jacobi_rule(const AlphaParam& alpha, int N);

// Gauss rule for integrals against gamma_alpha: the substitution u = x^2 turns
// them into generalized Gauss-Laguerre integrals of parameter alpha; nodes are
// mapped back to x = sqrt(u) and weights normalized to total mass 1.
QuadRule gamma_alpha_rule(const AlphaParam& alpha, int N);

// Raw generalized Gauss-Laguerre rule for weight u^a e^{-u} on (0,infty),
// weights carrying the full mass Gamma(a+1).  Pairs whose weight underflows to
// zero are dropped.
QuadRule gen_laguerre_rule(double a, int N);

// Double-exponential (tanh-sinh) rule on (0,1).  stiffness scales the mapped
// half-width; 1.0 reaches endpoint distances ~1e-280.
QuadRule de_rule_unit(int N, double stiffness = 1.0);

// Weighted node sum.  Throws EvaluationError if f is non-finite at a node.
double integrate(const std::function<double(double)>& f, const QuadRule& rule);

// Same, with the integrand receiving (node, 1-node); only meaningful for
// double_exponential rules, where the co-node is exact.
double integrate_de(const std::function<double(double, double)>& f, const QuadRule& rule);

// Adaptive Simpson on (lo, hi); hi may be +infinity (mapped through
// x = lo + t/(1-t)).  Bisects until the local error estimate is below tol,
// with maximum depth 40; on failure throws ToleranceError carrying the best
// estimate.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

// Binary sidecar cache, one file per (kind, alpha, N):
// magic "LQR1", version u32, kind u32, alpha f64, N u64, node count u64,
// then little-endian f64 nodes, weights and (if present) co-nodes.
// A corrupt or missing file is treated as a miss.
bool save_rule(const QuadRule& rule, const std::string& path);
bool load_rule(QuadRule& rule, const std::string& path, RuleKind kind, double alpha, int N);
std::string rule_cache_filename(RuleKind kind, double alpha, int N);

} // namespace laghat

#endif
