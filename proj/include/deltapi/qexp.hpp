#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "deltapi/formal_group.hpp"
#include "deltapi/jet_series.hpp"

namespace deltapi {

/// Exact Bernoulli number via the recurrence sum_{j<=m} C(m+1,j) B_j = 0,
/// B_0 = 1 (so B_1 = -1/2, odd B vanish beyond it).
mpq_class bernoulli(int k);

/// Divisor power sum sigma_k(n).
mpz_class sigma_k(long n, long k);

/// Normalized Eisenstein series of weight p-1 to order q^q_prec:
/// 1 - (2(p-1)/B_{p-1}) sum_n sigma_{p-2}(n) q^n, constant term exactly 1.
/// DenominatorNotUnit if the von Staudt-Clausen valuation v_p(B_{p-1}) = -1
/// fails to make the leading factor p-integral.
JetSeries eisenstein_qexp(long p, int q_prec, const CtxPtr& ctx);

/// Newform coefficient data: level N, weight, the working prime p (coprime to
/// N) and exact coefficients a_1..a_nmax with a_1 = 1. Multiplicativity
/// a_{mn} = a_m a_n for coprime m, n is validated on ingest.
struct NewformData {
    long level = 0;
    long weight = 2;
    long p = 5;
    std::vector<mpq_class> an; // an[i] = a_{i+1}
    std::string source;        // "file" or "point_counting"

    static NewformData make(long level, long weight, long p, std::vector<mpq_class> coeffs,
                            std::string source);

    long nmax() const { return static_cast<long>(an.size()); }
    const mpq_class& a(long n) const;
};

/// f^{(-1)} = sum a_n/n q^n as an order-0 series with K_pi coefficients.
JetSeries f_inverse(const NewformData& nf, int q_prec, const CtxPtr& ctx);

/// Trace of Frobenius a_ell = ell + 1 - #E(F_ell) by exhaustive enumeration;
/// requires good reduction (BadReduction otherwise) and verifies the Hasse
/// bound.
long ap_point_count(const WeierstrassCurve& E, long ell);

/// a_ell at a prime of bad reduction: ell minus the number of nonsingular
/// points (1, -1 or 0 for split/nonsplit multiplicative or additive reduction).
long a_ell_bad(const WeierstrassCurve& E, long ell);

/// Weight-2 rational newform data attached to E: point counts at primes,
/// Hecke recursion at prime powers (a_{l^k} = a_l a_{l^{k-1}} - l a_{l^{k-2}}
/// at good l, a_{l^k} = a_l^k at bad l), multiplicative fill-in.
NewformData newform_from_curve(const WeierstrassCurve& E, long level, long p, long nmax);

/// Hensel lift of a simple root: Newton iteration tau -> tau - f(tau)/f'(tau)
/// from tau0 with f(tau0) = 0 mod pi and f'(tau0) a unit mod pi (NotEtale
/// otherwise), until f(tau) = 0 mod pi^target_prec.
PadicNum hensel_lift_root(const std::vector<PadicNum>& poly, const PadicNum& tau0,
                          int target_prec);
JetSeries hensel_lift_root(const std::vector<JetSeries>& poly, const JetSeries& tau0,
                           int target_prec);

} // namespace deltapi
