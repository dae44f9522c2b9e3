#pragma once

#include <gmpxx.h>

#include "deltapi/jet_series.hpp"
#include "deltapi/padic.hpp"

namespace deltapi {

/// Long Weierstrass model with integer coefficients.
struct WeierstrassCurve {
    mpz_class a1, a2, a3, a4, a6;

    mpz_class b2() const { return a1 * a1 + 4 * a2; }
    mpz_class b4() const { return 2 * a4 + a1 * a3; }
    mpz_class b6() const { return a3 * a3 + 4 * a6; }
    mpz_class b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    mpz_class discriminant() const {
        const mpz_class B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }
    bool good_reduction(long ell) const { return discriminant() % ell != 0; }
};

/// curve 11a1: y^2 + y = x^3 - x^2 - 10x - 20
inline WeierstrassCurve curve_11a1() { return {0, -1, 1, -10, -20}; }

/// Formal group law and logarithm of a Weierstrass curve in the parameter
/// t = -x/y, computed exactly over Q to total degree t_prec.
///   log_coeffs[n] = c_n with l(T) = sum c_n T^n, c_1 = 1;
///   exp_coeffs    = the compositional inverse of l;
///   F[i][j]       = coefficient of T1^i T2^j in F(T1, T2) = exp(l(T1) + l(T2)).
struct FormalGroupData {
    WeierstrassCurve curve;
    int t_prec = 0;
    std::vector<mpq_class> log_coeffs;
    std::vector<mpq_class> exp_coeffs;
    std::vector<std::vector<mpq_class>> F;

    const mpq_class& f_coeff(int i, int j) const { return F[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    /// coefficients of the duplication series [2](T) = F(T, T)
    std::vector<mpq_class> duplication() const;
};

/// Solves the Weierstrass equation for w(t) (Newton on w - t^3 - a1 t w - a2
/// t^2 w - a3 w^2 - a4 t w^2 - a6 w^3), expands the invariant differential,
/// integrates the logarithm, reverts it and assembles F. t_prec >= 2.
FormalGroupData formal_group_law(const WeierstrassCurve& E, int t_prec);

/// L^n_pi = (1/pi) l(phi^n(T))|_{T=0} as a truncated series in dT, ..., d^nT
/// (JetSeries with q playing the role of T), together with the minimal nu >= 0
/// making pi^nu L integral; the tail beyond the materialized terms is
/// certified integral by the valuation bound, so nu is exact.
struct JetLogResult {
    JetSeries series;
    int nu = 0;
    int terms = 0; // highest log index materialized
};
JetLogResult jet_log(int n, const FormalGroupData& fg, const CtxPtr& ctx);

/// (1/pi) l(phi^n(x)) for a point with val(x) >= 1, phi computed by actual
/// Frobenius arithmetic; the result carries a truncation-certified precision.
PadicNum eval_jet_log(int n, const FormalGroupData& fg, const PadicNum& x);

/// Evaluate the truncated group law F(x, y) on points of positive valuation.
PadicNum eval_formal_sum(const FormalGroupData& fg, const PadicNum& x, const PadicNum& y);

/// Evaluate the truncated logarithm l(x) for val(x) >= 1.
PadicNum eval_log(const FormalGroupData& fg, const PadicNum& x);

/// Exact check of v_pi(pi^{|a|-1}/|a|) >= |a| - 1 - e log_p |a| for all
/// 1 <= |a| <= alpha_max, with slack statistics and the monotone tail bound.
struct ValuationBoundReport {
    int alpha_max = 0;
    int e = 1;
    long p = 5;
    long violations = 0;
    double min_slack = 0;     // min over |a| of (exact valuation - real-log bound)
    int min_slack_at = 1;
    double bound_at_max = 0;  // n - 1 - e log_p n at n = alpha_max
    int monotone_from = 1;    // the bound is nondecreasing from this index on
};
ValuationBoundReport valuation_bound_check(int alpha_max, int e, long p);

} // namespace deltapi
