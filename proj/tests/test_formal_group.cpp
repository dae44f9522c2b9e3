#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "deltapi/formal_group.hpp"

using namespace deltapi;

namespace {

CtxPtr z5(int prec = 14) { return PadicCtx::trivial(5, prec); }

// ---- test-only oracle: naive fixed-point solution of the Weierstrass
// equation and direct integration of the invariant differential ----

using PS = std::vector<mpq_class>;

PS oracle_mul(const PS& a, const PS& b, int deg) {
    PS out(static_cast<size_t>(deg) + 1, mpq_class(0));
    for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(deg); ++i)
        for (size_t j = 0; j < b.size() && i + j <= static_cast<size_t>(deg); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

PS oracle_inv(const PS& a, int deg) {
    PS out(static_cast<size_t>(deg) + 1, mpq_class(0));
    out[0] = 1 / a[0];
    for (int n = 1; n <= deg; ++n) {
        mpq_class s = 0;
        for (int k = 1; k <= n; ++k) s += a[static_cast<size_t>(k)] * out[static_cast<size_t>(n - k)];
        out[static_cast<size_t>(n)] = -s / a[0];
    }
    return out;
}

// log coefficients c_1..c_deg of the formal group of E by plain substitution
PS oracle_log(const WeierstrassCurve& E, int deg) {
    const int wdeg = deg + 6;
    const mpq_class a1(E.a1), a2(E.a2), a3(E.a3), a4(E.a4), a6(E.a6);
    PS w(static_cast<size_t>(wdeg) + 1, mpq_class(0));
    w[3] = 1;
    for (int it = 0; it < wdeg + 2; ++it) {
        PS w2 = oracle_mul(w, w, wdeg);
        PS w3 = oracle_mul(w2, w, wdeg);
        PS nw(static_cast<size_t>(wdeg) + 1, mpq_class(0));
        nw[3] = 1;
        for (int k = 0; k + 1 <= wdeg; ++k) nw[static_cast<size_t>(k + 1)] += a1 * w[static_cast<size_t>(k)];
        for (int k = 0; k + 2 <= wdeg; ++k) nw[static_cast<size_t>(k + 2)] += a2 * w[static_cast<size_t>(k)];
        for (size_t k = 0; k < w2.size(); ++k) nw[k] += a3 * w2[k];
        for (int k = 0; k + 1 <= wdeg; ++k) nw[static_cast<size_t>(k + 1)] += a4 * w2[static_cast<size_t>(k)];
        for (size_t k = 0; k < w3.size(); ++k) nw[k] += a6 * w3[k];
        w = nw;
    }
    // u = w/t^3, x = t^{-2}/u, y = -t^{-3}/u, omega = dx / (2y + a1 x + a3)
    const int d = wdeg - 3;
    PS u(static_cast<size_t>(d) + 1, mpq_class(0));
    for (int k = 0; k <= d; ++k) u[static_cast<size_t>(k)] = w[static_cast<size_t>(k + 3)];
    PS ui = oracle_inv(u, d);
    PS num(static_cast<size_t>(d) + 1, mpq_class(0)), den(static_cast<size_t>(d) + 1, mpq_class(0));
    for (int k = 0; k <= d; ++k) {
        num[static_cast<size_t>(k)] = mpq_class(k - 2) * ui[static_cast<size_t>(k)];
        den[static_cast<size_t>(k)] = -2 * ui[static_cast<size_t>(k)];
        if (k >= 1) den[static_cast<size_t>(k)] += a1 * ui[static_cast<size_t>(k - 1)];
    }
    den[3] += a3;
    PS om = oracle_mul(num, oracle_inv(den, d), d);
    PS c(static_cast<size_t>(deg) + 1, mpq_class(0));
    for (int n = 1; n <= deg; ++n) c[static_cast<size_t>(n)] = om[static_cast<size_t>(n - 1)] / n;
    return c;
}

PadicNum random_point(const CtxPtr& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> digit(0, 4), lead(1, 4);
    mpz_class acc = lead(rng);
    for (int k = 1; k < ctx->prec(); ++k) acc = acc + digit(rng) * ctx->p_pow(k);
    return PadicNum::from_int(ctx, acc * 5);
}

} // namespace

TEST_CASE("curve invariants of 11a1") {
    auto E = curve_11a1();
    CHECK(E.discriminant() == mpz_class(-161051)); // -11^5
    CHECK(E.good_reduction(5));
    CHECK(!E.good_reduction(11));
}

TEST_CASE("formal group law normalization and oracle agreement") {
    auto E = curve_11a1();
    auto fg = formal_group_law(E, 12);

    // F(T,0) = T and F(0,T) = T
    for (int i = 0; i <= 12; ++i) {
        CHECK(fg.f_coeff(i, 0) == (i == 1 ? mpq_class(1) : mpq_class(0)));
        CHECK(fg.f_coeff(0, i) == (i == 1 ? mpq_class(1) : mpq_class(0)));
    }
    // commutativity
    for (int i = 0; i <= 12; ++i)
        for (int j = 0; i + j <= 12; ++j) CHECK(fg.f_coeff(i, j) == fg.f_coeff(j, i));

    // l(T) = T + O(T^2), against the independent substitution oracle
    CHECK(fg.log_coeffs[1] == 1);
    PS expect = oracle_log(E, 12);
    for (int n = 1; n <= 12; ++n) CHECK(fg.log_coeffs[static_cast<size_t>(n)] == expect[static_cast<size_t>(n)]);
}

TEST_CASE("Hazewinkel integrality at p = 5") {
    auto fg = formal_group_law(curve_11a1(), 12);
    for (int n = 1; n <= 12; ++n) {
        mpq_class ncn = mpq_class(n) * fg.log_coeffs[static_cast<size_t>(n)];
        CHECK(ncn.get_den() % 5 != 0);
    }
    // ordinariness at 5: v_5(c_5) = -1 exactly
    CHECK(fg.log_coeffs[5].get_den() % 5 == 0);
    CHECK(fg.log_coeffs[5].get_den() % 25 != 0);
}

TEST_CASE("logarithm linearizes the group law (series identity)") {
    const int deg = 10;
    auto fg = formal_group_law(curve_11a1(), deg);
    // compute l(F(T1,T2)) - l(T1) - l(T2) as a dense bivariate over Q
    const int N = deg + 1;
    std::vector<mpq_class> acc(static_cast<size_t>(N * N), mpq_class(0));
    std::vector<mpq_class> pw(static_cast<size_t>(N * N), mpq_class(0));
    pw[0] = 1;
    auto idx = [N](int i, int j) { return static_cast<size_t>(i * N + j); };
    for (int k = 1; k <= deg; ++k) {
        // pw <- pw * F
        std::vector<mpq_class> np(static_cast<size_t>(N * N), mpq_class(0));
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; i + j <= deg; ++j) {
                if (pw[idx(i, j)] == 0) continue;
                for (int a = 0; a <= deg; ++a)
                    for (int b = 0; a + b <= deg; ++b) {
                        if (i + a + j + b > deg) continue;
                        if (fg.f_coeff(a, b) == 0) continue;
                        np[idx(i + a, j + b)] += pw[idx(i, j)] * fg.f_coeff(a, b);
                    }
            }
        pw = np;
        const mpq_class& ck = fg.log_coeffs[static_cast<size_t>(k)];
        if (ck == 0) continue;
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += ck * pw[i];
    }
    for (int k = 1; k <= deg; ++k) {
        acc[idx(k, 0)] -= fg.log_coeffs[static_cast<size_t>(k)];
        acc[idx(0, k)] -= fg.log_coeffs[static_cast<size_t>(k)];
    }
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j) CHECK(acc[idx(i, j)] == 0);
}

TEST_CASE("associativity on random points") {
    auto fg = formal_group_law(curve_11a1(), 12);
    auto c = z5();
    std::mt19937_64 rng(4711);
    for (int it = 0; it < 20; ++it) {
        auto x = random_point(c, rng), y = random_point(c, rng), z = random_point(c, rng);
        auto lhs = eval_formal_sum(fg, eval_formal_sum(fg, x, y), z);
        auto rhs = eval_formal_sum(fg, x, eval_formal_sum(fg, y, z));
        CHECK(lhs.eq_mod(rhs, 10));
    }
}

TEST_CASE("jet logarithm L^1 matches the symbolic substitution") {
    auto c = z5();
    auto fg = formal_group_law(curve_11a1(), 12);
    auto L1 = jet_log(1, fg, c);
    CHECK(L1.nu == 0); // e = 1 <= p - 1
    // L^1 = dT + sum_{k>=2} c_k pi^{k-1} (dT)^k; no pure-T monomials survive
    for (const auto& [m, coeff] : L1.series.coeffs()) {
        (void)coeff;
        CHECK(m.q_exp == 0);
        CHECK(m.order() >= 1);
    }
    CHECK(L1.series.coeff(JetMonomial(0, {1})).eq_mod(PadicNum::from_int(c, 1), 10));
    auto pi = PadicNum::uniformizer(c);
    for (int k = 2; k <= 6; ++k) {
        auto expect = PadicNum::from_rational(c, fg.log_coeffs[static_cast<size_t>(k)]) * pi.pow_i(k - 1);
        CHECK(L1.series.coeff(JetMonomial(0, {k})).eq_mod(expect, 8));
    }
}

TEST_CASE("jet logarithm L^2 structure") {
    auto c = z5();
    auto fg = formal_group_law(curve_11a1(), 12);
    auto L2 = jet_log(2, fg, c);
    CHECK(L2.nu == 0);
    CHECK(L2.series.order() == 2);
    // phi^2(T)|_{T=0} = (pi + pi^p)(dT)^p + pi^2 d2T, so the leading terms of
    // L^2 are (1 + pi^{p-1})(dT)^p + pi d2T
    auto pi = PadicNum::uniformizer(c);
    auto one = PadicNum::from_int(c, 1);
    CHECK(L2.series.coeff(JetMonomial(0, {0, 1})).eq_mod(pi, 10));
    CHECK(L2.series.coeff(JetMonomial(0, {5})).eq_mod(one + pi.pow_i(4), 10));
}

TEST_CASE("integrality exponent in a highly ramified context") {
    // e = 5 = p: the k = 5 term c_5 pi^4 (dT)^5 has valuation e*v(c_5) + 4 = -1
    // for an ordinary curve, so nu = 1
    auto c = PadicCtx::ramified(5, {mpz_class(-5), mpz_class(0), mpz_class(0), mpz_class(0),
                                    mpz_class(0), mpz_class(1)},
                                12);
    CHECK(c->e() == 5);
    auto fg = formal_group_law(curve_11a1(), 12);
    auto L1 = jet_log(1, fg, c);
    CHECK(L1.nu == 1);
    // and pi^nu L is integral
    auto scaled = L1.series.scalar_mul(PadicNum::uniformizer(c).pow_i(L1.nu));
    CHECK(scaled.min_val_floor(100) >= 0);
}

TEST_CASE("L^1 and L^2 have non-proportional coefficient vectors") {
    auto c = z5();
    auto fg = formal_group_law(curve_11a1(), 12);
    auto L1 = jet_log(1, fg, c).series;
    auto L2 = jet_log(2, fg, c).series;
    // L^1 carries dT with coefficient 1 and no d2T; L^2 carries d2T with
    // coefficient pi: no scalar lambda can match both coordinates
    CHECK(L1.coeff(JetMonomial(0, {1})).eq_mod(PadicNum::from_int(c, 1), 8));
    CHECK(L1.coeff(JetMonomial(0, {0, 1})).is_exact_zero());
    CHECK(!L2.coeff(JetMonomial(0, {0, 1})).is_zero());
}

TEST_CASE("nu vanishes whenever e <= p - 1") {
    auto fg = formal_group_law(curve_11a1(), 12);
    // e = 2 (t^2 = 5) and e = 4 (t^4 = 5) both satisfy e <= p - 1 = 4
    auto quad = PadicCtx::ramified(5, {mpz_class(-5), mpz_class(0), mpz_class(1)}, 10);
    auto quart = PadicCtx::ramified(
        5, {mpz_class(-5), mpz_class(0), mpz_class(0), mpz_class(0), mpz_class(1)}, 12);
    for (const auto& ctx : {quad, quart}) {
        auto L = jet_log(1, fg, ctx);
        CHECK(L.nu == 0);
        CHECK(L.series.min_val_floor(100) >= 0);
    }
}

TEST_CASE("eval_jet_log: zero, additivity, duplication") {
    auto c = z5();
    auto fg = formal_group_law(curve_11a1(), 12);

    CHECK(eval_jet_log(1, fg, PadicNum::zero(c)).is_zero());

    std::mt19937_64 rng(99);
    for (int n = 1; n <= 2; ++n) {
        for (int it = 0; it < 50; ++it) {
            auto x = random_point(c, rng), y = random_point(c, rng);
            auto sum = eval_formal_sum(fg, x, y);
            auto lhs = eval_jet_log(n, fg, sum);
            auto rhs = eval_jet_log(n, fg, x) + eval_jet_log(n, fg, y);
            CHECK(lhs.eq_mod(rhs, 10));
        }
    }

    for (int it = 0; it < 10; ++it) {
        auto x = random_point(c, rng);
        auto two_x = eval_formal_sum(fg, x, x);
        auto lhs = eval_jet_log(1, fg, two_x);
        auto rhs = eval_jet_log(1, fg, x) + eval_jet_log(1, fg, x);
        CHECK(lhs.eq_mod(rhs, 10));
    }

    CHECK_THROWS_AS(eval_jet_log(1, fg, PadicNum::from_int(c, 2)), OutOfDomain);
}

TEST_CASE("valuation bound report") {
    auto rep = valuation_bound_check(625, 1, 5);
    CHECK(rep.violations == 0);
    CHECK(rep.min_slack >= 0.0);
    auto rep4 = valuation_bound_check(625, 4, 5);
    CHECK(rep4.violations == 0);
    CHECK(rep4.min_slack >= 0.0);
    // boundary case |alpha| = 5, e = 4: exact valuation 5-1-4 = 0 meets the
    // bound 5-1-4*log_5(5) = 0 with zero slack
    auto rep_exact = valuation_bound_check(5, 4, 5);
    CHECK(rep_exact.min_slack == doctest::Approx(0.0));
    CHECK(rep_exact.bound_at_max == doctest::Approx(0.0));
    // |alpha| = 1 gives v = 0 >= 0
    auto rep1 = valuation_bound_check(1, 1, 5);
    CHECK(rep1.violations == 0);
}
