#include "deltapi/gm_character.hpp"

#include <cassert>

namespace deltapi {

int GmPsiParams::compute_m(int e, long p) {
    // e*v_p(n) - n over n >= 1 peaks on n = p^k; terminate once p^k(p-1) > e,
    // after which the sequence strictly decreases.
    int best = 0;
    mpz_class pk = 1;
    for (int k = 0;; ++k) {
        mpz_class val = mpz_class(e) * k - pk;
        if (val > best) best = static_cast<int>(val.get_si());
        if (pk * (p - 1) > e) break;
        pk *= p;
    }
    return best;
}

int GmPsiParams::compute_cutoff(int e, long p, int m, int target) {
    // scan upward; for n past the scan horizon the real-log bound
    // n + m - e log_p n >= target holds and is monotone in n.
    int horizon = std::max(target - m + 1, e + 1);
    for (;; ++horizon) {
        // exact check p^{horizon - (target - m)} >= horizon^e
        const long k = horizon - (target - m);
        if (k < 0) continue;
        mpz_class lhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
        mpz_class rhs;
        mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(horizon),
                      static_cast<unsigned long>(e));
        if (lhs >= rhs) break;
    }
    int cutoff = 0;
    for (int n = 1; n <= horizon; ++n) {
        int vp = 0;
        for (long q = n; q % p == 0; q /= p) ++vp;
        if (n + m - e * vp < target) cutoff = n;
    }
    return std::max(cutoff, 1);
}

GmPsiParams GmPsiParams::make(CtxPtr ctx) {
    GmPsiParams params;
    params.m = compute_m(ctx->e(), ctx->p());
    params.series_cutoff = compute_cutoff(ctx->e(), ctx->p(), params.m, ctx->prec());
    params.ctx = std::move(ctx);
    return params;
}

PadicNum psi_gm(const PadicNum& x, const GmPsiParams& params) {
    if (x.is_zero() || x.val_floor() != 0)
        throw NotAUnit("gm_character", "psi is defined on units of R_pi");
    const CtxPtr& ctx = x.ctx();
    const long p = ctx->p();
    const PadicNum u = delta_pi(x) * x.pow_i(p).inv();
    const PadicNum pi = PadicNum::uniformizer(ctx);
    PadicNum sum = PadicNum::zero(ctx);
    PadicNum upow = PadicNum::from_int(ctx, 1);
    for (int n = 1; n <= params.series_cutoff; ++n) {
        upow = upow * u;
        const PadicNum scalar = pi.pow_i(n + params.m) * PadicNum::from_int(ctx, n).inv();
        const PadicNum term = scalar * upow;
        sum = sum + (n % 2 == 1 ? term : -term);
    }
    return sum;
}

JetSeries psi_gm_on_series(const JetSeries& x, const GmPsiParams& params) {
    const PadicNum c0 = x.coeff(JetMonomial{});
    if (c0.is_zero() || c0.val_floor() != 0)
        throw NotAUnit("gm_character", "psi on series requires a unit constant term");
    const CtxPtr& ctx = x.ctx();
    const long p = ctx->p();
    const JetSeries u = delta_series(x) * x.pow_u(p).inverse();
    const PadicNum pi = PadicNum::uniformizer(ctx);
    JetSeries sum = JetSeries::zero(ctx, u.q_prec(), u.delta_deg(), u.order());
    JetSeries upow = JetSeries::constant(PadicNum::from_int(ctx, 1), u.q_prec(), u.delta_deg());
    upow.set_max_order(u.max_order());
    for (int n = 1; n <= params.series_cutoff; ++n) {
        upow = upow * u;
        if (upow.is_exact_zero_series()) break;
        const PadicNum scalar = pi.pow_i(n + params.m) * PadicNum::from_int(ctx, n).inv();
        const JetSeries term = upow.scalar_mul(scalar);
        sum = sum + (n % 2 == 1 ? term : -term);
    }
    return sum;
}

} // namespace deltapi
