#pragma once

#include "deltapi/jet_series.hpp"
#include "deltapi/padic.hpp"

namespace deltapi {

/// Normalization data for the logarithmic delta-character of G_m,
///   psi(x) = pi^m sum_{n>=1} (-1)^{n-1} (pi^n / n) (delta_pi x / x^p)^n.
/// m is the minimal exponent making every term integral; series_cutoff bounds
/// the sum so the dropped tail has valuation >= the ctx precision, certified
/// by the term-valuation bound n + m - e v_p(n).
struct GmPsiParams {
    CtxPtr ctx;
    int m = 0;
    int series_cutoff = 0;

    static GmPsiParams make(CtxPtr ctx);

    /// max(0, max_n (e v_p(n) - n)), attained on powers of p.
    static int compute_m(int e, long p);
    /// smallest N with n + m - e v_p(n) >= target for all n > N.
    static int compute_cutoff(int e, long p, int m, int target);
};

/// psi on a unit of R_pi. NotAUnit unless val(x) = 0.
PadicNum psi_gm(const PadicNum& x, const GmPsiParams& params);

/// psi on a series with unit constant term; order raised by one through
/// delta_series.
JetSeries psi_gm_on_series(const JetSeries& x, const GmPsiParams& params);

} // namespace deltapi
