#include "deltapi/formal_group.hpp"

#include <cassert>
#include <cmath>

namespace deltapi {

namespace {

// ---- exact power series over Q, index = exponent, truncated length deg+1 ----

using PS = std::vector<mpq_class>;

PS ps_make(int deg) { return PS(static_cast<size_t>(deg) + 1, mpq_class(0)); }

PS ps_mul(const PS& a, const PS& b, int deg) {
    PS out = ps_make(deg);
    for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(deg); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j <= static_cast<size_t>(deg); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

// inverse of a series with invertible constant term
PS ps_inv(const PS& a, int deg) {
    if (a.empty() || a[0] == 0)
        throw BadReduction("formal_group", "series inversion needs a unit leading term");
    PS out = ps_make(deg);
    out[0] = 1 / a[0];
    for (int n = 1; n <= deg; ++n) {
        mpq_class s = 0;
        for (int k = 1; k <= n; ++k)
            if (static_cast<size_t>(k) < a.size()) s += a[static_cast<size_t>(k)] * out[static_cast<size_t>(n - k)];
        out[static_cast<size_t>(n)] = -s / a[0];
    }
    return out;
}

// ---- dense bivariate series over Q, total degree <= deg ----

struct Biv {
    int deg = 0;
    std::vector<mpq_class> m; // (deg+1) x (deg+1), row-major; entries with i+j > deg unused

    explicit Biv(int d) : deg(d), m(static_cast<size_t>((d + 1) * (d + 1)), mpq_class(0)) {}
    mpq_class& at(int i, int j) { return m[static_cast<size_t>(i * (deg + 1) + j)]; }
    const mpq_class& at(int i, int j) const { return m[static_cast<size_t>(i * (deg + 1) + j)]; }
};

Biv biv_mul(const Biv& a, const Biv& b) {
    Biv out(a.deg);
    for (int i = 0; i <= a.deg; ++i)
        for (int j = 0; i + j <= a.deg; ++j) {
            if (a.at(i, j) == 0) continue;
            for (int k = 0; i + j + k <= a.deg; ++k)
                for (int l = 0; i + j + k + l <= a.deg; ++l) {
                    if (b.at(k, l) == 0) continue;
                    out.at(i + k, j + l) += a.at(i, j) * b.at(k, l);
                }
        }
    return out;
}

} // namespace

std::vector<mpq_class> FormalGroupData::duplication() const {
    std::vector<mpq_class> dup(static_cast<size_t>(t_prec) + 1, mpq_class(0));
    for (int i = 0; i <= t_prec; ++i)
        for (int j = 0; i + j <= t_prec; ++j) dup[static_cast<size_t>(i + j)] += f_coeff(i, j);
    return dup;
}

FormalGroupData formal_group_law(const WeierstrassCurve& E, int t_prec) {
    if (t_prec < 2) throw OutOfDomain("formal_group", "t_prec must be >= 2");
    const int wdeg = t_prec + 6;
    const mpq_class a1(E.a1), a2(E.a2), a3(E.a3), a4(E.a4), a6(E.a6);

    // w(t) = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3 by Newton:
    // g(w) = w - t^3 - a1 t w - a2 t^2 w - a3 w^2 - a4 t w^2 - a6 w^3,
    // w <- w - g(w)/g'(w).
    PS w = ps_make(wdeg);
    w[3] = 1;
    for (int step = 0; step < wdeg + 2; ++step) {
        PS w2 = ps_mul(w, w, wdeg);
        PS w3 = ps_mul(w2, w, wdeg);
        PS g = w;
        g[3] -= 1;
        for (int k = 0; k + 1 <= wdeg; ++k) g[static_cast<size_t>(k + 1)] -= a1 * w[static_cast<size_t>(k)];
        for (int k = 0; k + 2 <= wdeg; ++k) g[static_cast<size_t>(k + 2)] -= a2 * w[static_cast<size_t>(k)];
        for (size_t k = 0; k < w2.size(); ++k) g[k] -= a3 * w2[k];
        for (int k = 0; k + 1 <= wdeg; ++k) g[static_cast<size_t>(k + 1)] -= a4 * w2[static_cast<size_t>(k)];
        for (size_t k = 0; k < w3.size(); ++k) g[k] -= a6 * w3[k];
        bool zero = true;
        for (const auto& c : g)
            if (c != 0) { zero = false; break; }
        if (zero) break;
        // g'(w) as a series in t evaluated along w
        PS gp = ps_make(wdeg);
        gp[0] = 1;
        gp[1] -= a1;
        gp[2] -= a2;
        for (size_t k = 0; k < w.size(); ++k) gp[k] -= 2 * a3 * w[k];
        for (int k = 0; k + 1 <= wdeg; ++k) gp[static_cast<size_t>(k + 1)] -= 2 * a4 * w[static_cast<size_t>(k)];
        for (size_t k = 0; k < w2.size(); ++k) gp[k] -= 3 * a6 * w2[k];
        PS corr = ps_mul(g, ps_inv(gp, wdeg), wdeg);
        for (size_t k = 0; k < w.size(); ++k) w[k] -= corr[k];
    }

    // u = w/t^3 is a unit series; x = t^{-2} u^{-1}, y = -t^{-3} u^{-1}
    PS u = ps_make(wdeg - 3);
    for (int k = 0; k + 3 <= wdeg; ++k) u[static_cast<size_t>(k)] = w[static_cast<size_t>(k + 3)];
    const int xdeg = wdeg - 3;
    PS uinv = ps_inv(u, xdeg);

    // invariant differential: omega = x'(t) / (2y + a1 x + a3) dt.
    // x = t^{-2} uinv; x'(t) has Laurent part starting at t^{-3}; multiply
    // numerator and denominator by t^3 to work with plain power series.
    // t^3 x'(t): coefficient of t^k is (k-2-3+3... ) derived directly below.
    PS num = ps_make(xdeg); // t^3 * dx/dt
    for (int k = 0; k <= xdeg; ++k) {
        // x = sum_j uinv_j t^{j-2}; dx/dt = sum_j (j-2) uinv_j t^{j-3}
        // t^3 dx/dt = sum_j (j-2) uinv_j t^{j}
        num[static_cast<size_t>(k)] = mpq_class(k - 2) * uinv[static_cast<size_t>(k)];
    }
    PS den = ps_make(xdeg); // t^3 * (2y + a1 x + a3)
    for (int k = 0; k <= xdeg; ++k) {
        mpq_class c = -2 * uinv[static_cast<size_t>(k)]; // 2y = -2 t^{-3} uinv
        if (k >= 1) c += a1 * uinv[static_cast<size_t>(k - 1)]; // a1 x = a1 t^{-2} uinv
        if (k == 3) c += a3;
        den[static_cast<size_t>(k)] = c;
    }
    PS omega = ps_mul(num, ps_inv(den, xdeg), xdeg);
    if (omega[0] != 1) throw BadReduction("formal_group", "invariant differential not normalized");

    FormalGroupData fg;
    fg.curve = E;
    fg.t_prec = t_prec;
    fg.log_coeffs.assign(static_cast<size_t>(t_prec) + 1, mpq_class(0));
    for (int n = 1; n <= t_prec; ++n)
        fg.log_coeffs[static_cast<size_t>(n)] = omega[static_cast<size_t>(n - 1)] / n;

    // compositional inverse of l: E_1 = 1, E_n from l(E(T)) = T
    fg.exp_coeffs.assign(static_cast<size_t>(t_prec) + 1, mpq_class(0));
    fg.exp_coeffs[1] = 1;
    for (int n = 2; n <= t_prec; ++n) {
        // [T^n] sum_{k>=2} c_k E(T)^k with E known below degree n
        PS Epart(fg.exp_coeffs.begin(), fg.exp_coeffs.begin() + n);
        Epart.resize(static_cast<size_t>(n) + 1, mpq_class(0));
        PS pw = Epart;
        mpq_class acc = 0;
        for (int k = 2; k <= n; ++k) {
            pw = ps_mul(pw, Epart, n);
            acc += fg.log_coeffs[static_cast<size_t>(k)] * pw[static_cast<size_t>(n)];
        }
        fg.exp_coeffs[static_cast<size_t>(n)] = -acc;
    }

    // F(T1,T2) = exp(l(T1) + l(T2)) to total degree t_prec
    Biv S(t_prec);
    for (int n = 1; n <= t_prec; ++n) {
        S.at(n, 0) += fg.log_coeffs[static_cast<size_t>(n)];
        S.at(0, n) += fg.log_coeffs[static_cast<size_t>(n)];
    }
    Biv F(t_prec);
    Biv pw(t_prec);
    pw.at(0, 0) = 1;
    for (int j = 1; j <= t_prec; ++j) {
        pw = biv_mul(pw, S);
        const mpq_class& ej = fg.exp_coeffs[static_cast<size_t>(j)];
        if (ej == 0) continue;
        for (int i = 0; i <= t_prec; ++i)
            for (int k = 0; i + k <= t_prec; ++k) F.at(i, k) += ej * pw.at(i, k);
    }
    fg.F.assign(static_cast<size_t>(t_prec) + 1,
                std::vector<mpq_class>(static_cast<size_t>(t_prec) + 1, mpq_class(0)));
    for (int i = 0; i <= t_prec; ++i)
        for (int j = 0; i + j <= t_prec; ++j) fg.F[static_cast<size_t>(i)][static_cast<size_t>(j)] = F.at(i, j);
    return fg;
}

// ---------------------------------------------------------------------------
// jet logarithms
// ---------------------------------------------------------------------------

namespace {

// largest k with k - 1 - e v_p(k) < 0 (0 if none): beyond it the terms
// c_k pi^{k-1} (...)^k are integral by the valuation bound.
int last_bad_log_index(int e, long p) {
    int horizon = std::max(2, e + 2);
    for (;; ++horizon) {
        const long k = horizon - 1;
        mpz_class lhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
        mpz_class rhs;
        mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(horizon),
                      static_cast<unsigned long>(e));
        if (lhs >= rhs) break;
    }
    int bad = 0;
    for (int k = 1; k <= horizon; ++k) {
        int vp = 0;
        for (long q = k; q % p == 0; q /= p) ++vp;
        if (k - 1 - e * vp < 0) bad = k;
    }
    return bad;
}

// restrict a series to its q-degree-0 part (the |_{T=0} substitution)
JetSeries restrict_q0(const JetSeries& s) {
    JetSeries out = JetSeries::zero(s.ctx(), s.q_prec(), s.delta_deg(), s.order());
    out.set_max_order(s.max_order());
    for (const auto& [m, c] : s.coeffs())
        if (m.q_exp == 0) out.set_coeff(m, c);
    return out;
}

} // namespace

JetLogResult jet_log(int n, const FormalGroupData& fg, const CtxPtr& ctx) {
    if (n < 1 || n > 2) throw OutOfDomain("formal_group", "jet_log order must be 1 or 2");
    const long p = ctx->p();
    const int bad = last_bad_log_index(ctx->e(), p);
    if (fg.t_prec < bad)
        throw PrecisionExhausted("formal_group",
                                 "t_prec too small to certify the integrality exponent");
    const int K = fg.t_prec;
    const int ddeg = (n == 1 ? K : static_cast<int>(p) * K);
    const int qw = static_cast<int>(p) * static_cast<int>(p) + 1;

    JetSeries T = JetSeries::variable(ctx, 0, qw, ddeg);
    T.set_max_order(4);
    JetSeries img = T;
    for (int i = 0; i < n; ++i) img = phi_series(img);
    JetSeries pg = restrict_q0(img); // phi^n(T)|_{T=0}; every term divisible by pi

    JetSeries sum = JetSeries::zero(ctx, qw, ddeg, pg.order());
    sum.set_max_order(4);
    JetSeries pw = JetSeries::constant(PadicNum::from_int(ctx, 1), qw, ddeg);
    pw.set_max_order(4);
    for (int k = 1; k <= K; ++k) {
        pw = pw * pg;
        const mpq_class& ck = fg.log_coeffs[static_cast<size_t>(k)];
        if (ck == 0) continue;
        sum = sum + pw.scalar_mul(PadicNum::from_rational(ctx, ck));
    }
    const PadicNum pi_inv = PadicNum::uniformizer(ctx).inv();
    JetLogResult res;
    res.series = sum.scalar_mul(pi_inv);
    res.terms = K;
    int min_val = 0;
    for (const auto& [m, c] : res.series.coeffs()) {
        (void)m;
        min_val = std::min(min_val, c.val_floor());
    }
    res.nu = -min_val;
    return res;
}

PadicNum eval_log(const FormalGroupData& fg, const PadicNum& x) {
    if (x.is_zero()) return x;
    if (x.val_floor() < 1) throw OutOfDomain("formal_group", "point outside the formal group domain");
    const CtxPtr& ctx = x.ctx();
    PadicNum acc = PadicNum::zero(ctx);
    PadicNum xp = PadicNum::from_int(ctx, 1);
    for (int k = 1; k <= fg.t_prec; ++k) {
        xp = xp * x;
        const mpq_class& ck = fg.log_coeffs[static_cast<size_t>(k)];
        if (ck == 0) continue;
        acc = acc + PadicNum::from_rational(ctx, ck) * xp;
    }
    return acc;
}

PadicNum eval_jet_log(int n, const FormalGroupData& fg, const PadicNum& x) {
    if (n < 1) throw OutOfDomain("formal_group", "jet order must be >= 1");
    if (x.is_zero()) {
        // l has no constant term, so the image stays zero at the tracked bound
        return x.shift(-1);
    }
    if (x.val_floor() < 1) throw OutOfDomain("formal_group", "point outside the formal group domain");
    const CtxPtr& ctx = x.ctx();
    PadicNum z = x;
    for (int i = 0; i < n; ++i) z = frobenius(z);
    PadicNum acc = eval_log(fg, z);
    // truncation certificate: dropped terms have v >= k v(z) - e v_p(k) - 1
    const int vz = *z.valuation();
    int tail = (fg.t_prec + 1) * vz - 1;
    for (int k = fg.t_prec + 1; k <= fg.t_prec + 1 + 4 * ctx->e(); ++k) {
        int vp = 0;
        for (long q = k; q % ctx->p() == 0; q /= ctx->p()) ++vp;
        tail = std::min(tail, k * vz - ctx->e() * vp - 1);
    }
    PadicNum res = acc.shift(-1);
    return res.cap_abs_prec(tail);
}

PadicNum eval_formal_sum(const FormalGroupData& fg, const PadicNum& x, const PadicNum& y) {
    if ((!x.is_zero() && x.val_floor() < 1) || (!y.is_zero() && y.val_floor() < 1))
        throw OutOfDomain("formal_group", "points outside the formal group domain");
    const CtxPtr& ctx = x.ctx();
    std::vector<PadicNum> xp{PadicNum::from_int(ctx, 1)}, yp{PadicNum::from_int(ctx, 1)};
    for (int k = 1; k <= fg.t_prec; ++k) {
        xp.push_back(xp.back() * x);
        yp.push_back(yp.back() * y);
    }
    PadicNum acc = PadicNum::zero(ctx);
    for (int i = 0; i <= fg.t_prec; ++i)
        for (int j = 0; i + j <= fg.t_prec; ++j) {
            const mpq_class& c = fg.f_coeff(i, j);
            if (c == 0) continue;
            acc = acc + PadicNum::from_rational(ctx, c) * xp[static_cast<size_t>(i)] * yp[static_cast<size_t>(j)];
        }
    // dropped total degrees >= t_prec+1 contribute >= (t_prec+1) * min val
    const int vmin = std::min(x.is_zero() ? x.val_floor() : *x.valuation(),
                              y.is_zero() ? y.val_floor() : *y.valuation());
    return acc.cap_abs_prec(static_cast<long>(fg.t_prec + 1) * std::max(vmin, 1));
}

ValuationBoundReport valuation_bound_check(int alpha_max, int e, long p) {
    if (alpha_max < 1) throw OutOfDomain("formal_group", "alpha_max must be >= 1");
    ValuationBoundReport rep;
    rep.alpha_max = alpha_max;
    rep.e = e;
    rep.p = p;
    rep.min_slack = 1e300;
    const double logp = std::log(static_cast<double>(p));
    for (int n = 1; n <= alpha_max; ++n) {
        int vp = 0;
        for (long q = n; q % p == 0; q /= p) ++vp;
        const long exact = static_cast<long>(n) - 1 - static_cast<long>(e) * vp;
        const double bound = n - 1 - e * std::log(static_cast<double>(n)) / logp;
        // exact form of the comparison: p^{v_p(n)} <= n
        mpz_class pv;
        mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(vp));
        if (pv > n) ++rep.violations;
        const double slack = static_cast<double>(exact) - bound;
        if (slack < rep.min_slack) {
            rep.min_slack = slack;
            rep.min_slack_at = n;
        }
    }
    rep.bound_at_max = alpha_max - 1 - e * std::log(static_cast<double>(alpha_max)) / logp;
    rep.monotone_from = std::max(1, static_cast<int>(std::ceil(e / logp)));
    return rep;
}

} // namespace deltapi
