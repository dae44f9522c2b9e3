#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "deltapi/gm_character.hpp"

using namespace deltapi;

namespace {

CtxPtr z5(int prec = 8) { return PadicCtx::trivial(5, prec); }

PadicNum teich_lift(const CtxPtr& ctx, long d) {
    PadicNum x = PadicNum::from_int(ctx, d);
    for (int i = 0; i < 4 * ctx->prec() + 8; ++i) {
        PadicNum nx = x.pow_i(ctx->p());
        if (nx.same_repr(x)) break;
        x = nx;
    }
    return x;
}

PadicNum random_unit(const CtxPtr& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> digit(0, ctx->p() - 1), lead(1, ctx->p() - 1);
    mpz_class acc = lead(rng);
    for (int k = 1; k < ctx->prec() + 2; ++k) acc = acc + digit(rng) * ctx->p_pow(k);
    return PadicNum::from_int(ctx, acc);
}

} // namespace

TEST_CASE("integrality exponent m") {
    // e = 1: v_p(n) <= log_p(n) < n, so m = 0
    CHECK(GmPsiParams::compute_m(1, 5) == 0);
    CHECK(GmPsiParams::compute_m(4, 5) == 0);
    // e = 6, p = 5: n = 5 gives 6*1 - 5 = 1
    CHECK(GmPsiParams::compute_m(6, 5) == 1);
    // e = 12, p = 5: n = 5 gives 12 - 5 = 7, n = 25 gives 24 - 25 < 7
    CHECK(GmPsiParams::compute_m(12, 5) == 7);
}

TEST_CASE("series cutoff certifies the tail") {
    for (int e : {1, 2, 4}) {
        for (int target : {4, 6, 8, 12}) {
            const int m = GmPsiParams::compute_m(e, 5);
            const int N = GmPsiParams::compute_cutoff(e, 5, m, target);
            // every n > N up to a generous horizon satisfies the bound
            for (int n = N + 1; n <= N + 2000; ++n) {
                int vp = 0;
                for (long q = n; q % 5 == 0; q /= 5) ++vp;
                CHECK(n + m - e * vp >= target);
            }
            // and N itself violates it (cutoff is minimal) unless N = 1
            if (N > 1) {
                int vp = 0;
                for (long q = N; q % 5 == 0; q /= 5) ++vp;
                CHECK(N + m - e * vp < target);
            }
        }
    }
}

TEST_CASE("psi vanishes on 1 and on Teichmuller units") {
    auto c = z5();
    auto params = GmPsiParams::make(c);
    CHECK(params.m == 0);

    auto one = PadicNum::from_int(c, 1);
    auto p1 = psi_gm(one, params);
    CHECK(p1.is_zero());
    CHECK(p1.abs_prec() >= 6);

    for (long d = 1; d < 5; ++d) {
        auto w = teich_lift(c, d);
        auto pw = psi_gm(w, params);
        CHECK(pw.is_zero());
        CHECK(pw.abs_prec() >= 6);
    }
}

TEST_CASE("psi is additive: psi(x^2) = 2 psi(x)") {
    auto c = z5();
    auto params = GmPsiParams::make(c);
    auto x = PadicNum::from_int(c, 6); // 1 + 5
    auto v = psi_gm(x, params);
    auto v2 = psi_gm(x * x, params);
    CHECK(v2.eq_mod(v + v, 6));
    CHECK(!v.is_zero()); // 1+5 is not a root of unity
}

TEST_CASE("psi homomorphism on random unit pairs") {
    auto c = z5();
    auto params = GmPsiParams::make(c);
    std::mt19937_64 rng(42);
    for (int it = 0; it < 100; ++it) {
        auto x = random_unit(c, rng);
        auto y = random_unit(c, rng);
        auto lhs = psi_gm(x * y, params);
        auto rhs = psi_gm(x, params) + psi_gm(y, params);
        CHECK(lhs.eq_mod(rhs, 6));
    }
}

TEST_CASE("psi in a ramified quadratic context") {
    auto c = PadicCtx::ramified(5, {mpz_class(-5), mpz_class(0), mpz_class(1)}, 10);
    auto params = GmPsiParams::make(c);
    CHECK(params.m == 0); // e = 2 <= p - 1
    std::mt19937_64 rng(43);
    for (int it = 0; it < 25; ++it) {
        auto x = random_unit(c, rng);
        auto y = random_unit(c, rng);
        CHECK(psi_gm(x * y, params).eq_mod(psi_gm(x, params) + psi_gm(y, params), 6));
    }
}

TEST_CASE("retained terms satisfy the valuation lower bound") {
    // v_pi(pi^{n+m}/n) = n + m - e v_p(n) >= 0 for every retained term
    for (auto ctx : {PadicCtx::trivial(5, 8),
                     PadicCtx::ramified(5, {mpz_class(-5), mpz_class(0), mpz_class(1)}, 8)}) {
        auto params = GmPsiParams::make(ctx);
        auto pi = PadicNum::uniformizer(ctx);
        for (int n = 1; n <= params.series_cutoff; ++n) {
            auto scalar = pi.pow_i(n + params.m) * PadicNum::from_int(ctx, n).inv();
            int vp = 0;
            for (long q = n; q % 5 == 0; q /= 5) ++vp;
            CHECK(scalar.valuation() == n + params.m - ctx->e() * vp);
            CHECK(*scalar.valuation() >= 0);
        }
    }
}

TEST_CASE("psi rejects non-units") {
    auto c = z5();
    auto params = GmPsiParams::make(c);
    CHECK_THROWS_AS(psi_gm(PadicNum::from_int(c, 5), params), NotAUnit);
    CHECK_THROWS_AS(psi_gm(PadicNum::zero(c), params), NotAUnit);
}

TEST_CASE("psi on series: constants and additivity") {
    auto c = z5();
    auto params = GmPsiParams::make(c);

    auto one = JetSeries::constant(PadicNum::from_int(c, 1), 8, 2);
    auto p1 = psi_gm_on_series(one, params);
    CHECK(compare_mod_pi_power(p1, JetSeries::zero(c, 8, 2), 6) >= 6);

    // Teichmuller-constant series
    auto w = teich_lift(c, 3);
    auto ws = JetSeries::constant(w, 8, 2);
    CHECK(compare_mod_pi_power(psi_gm_on_series(ws, params), JetSeries::zero(c, 8, 2), 6) >= 6);

    // additivity psi(z u) = psi(z) + psi(u) for random unit series
    std::mt19937_64 rng(45);
    std::uniform_int_distribution<long> coef(-20, 20), lead(1, 4);
    for (int it = 0; it < 10; ++it) {
        auto mk = [&]() {
            JetSeries s = JetSeries::constant(PadicNum::from_int(c, lead(rng)), 6, 2);
            for (int k = 1; k <= 3; ++k)
                s.set_coeff(JetMonomial(k, {}), PadicNum::from_int(c, coef(rng)));
            return s;
        };
        auto z = mk(), u = mk();
        auto lhs = psi_gm_on_series(z * u, params);
        auto rhs = psi_gm_on_series(z, params) + psi_gm_on_series(u, params);
        CHECK(compare_mod_pi_power(lhs, rhs, 6) >= 6);
    }

    CHECK_THROWS_AS(psi_gm_on_series(JetSeries::variable(c, 0, 8, 2), params), NotAUnit);
}
