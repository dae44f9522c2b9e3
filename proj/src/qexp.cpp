#include "deltapi/qexp.hpp"

#include <numeric>

namespace deltapi {

mpq_class bernoulli(int k) {
    if (k < 0) throw OutOfDomain("qexp_tools", "Bernoulli index must be >= 0");
    std::vector<mpq_class> B(static_cast<size_t>(k) + 1);
    B[0] = 1;
    for (int m = 1; m <= k; ++m) {
        mpq_class acc = 0;
        for (int j = 0; j < m; ++j) {
            mpz_class binc;
            mpz_bin_uiui(binc.get_mpz_t(), static_cast<unsigned long>(m + 1),
                         static_cast<unsigned long>(j));
            acc += mpq_class(binc) * B[static_cast<size_t>(j)];
        }
        B[static_cast<size_t>(m)] = -acc / (m + 1);
    }
    return B[static_cast<size_t>(k)];
}

mpz_class sigma_k(long n, long k) {
    mpz_class s = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_class dk, ek;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
        s += dk;
        const long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(ek.get_mpz_t(), static_cast<unsigned long>(e),
                          static_cast<unsigned long>(k));
            s += ek;
        }
    }
    return s;
}

JetSeries eisenstein_qexp(long p, int q_prec, const CtxPtr& ctx) {
    if (p < 5) throw OutOfDomain("qexp_tools", "p must be >= 5");
    const mpq_class B = bernoulli(static_cast<int>(p) - 1);
    // von Staudt-Clausen: v_p(B_{p-1}) = -1; checked, not assumed
    if (B.get_den() % p != 0 || (B.get_den() / p) % p == 0)
        throw DenominatorNotUnit("qexp_tools", "B_{p-1} does not have p-valuation -1");
    const mpq_class factor = mpq_class(-2 * (p - 1)) / B;
    if (factor.get_den() % p == 0)
        throw DenominatorNotUnit("qexp_tools", "Eisenstein normalization is not p-integral");
    JetSeries s = JetSeries::zero(ctx, q_prec, JetSeries::default_delta_deg(0), 0);
    s.set_coeff(JetMonomial{}, PadicNum::from_int(ctx, 1));
    for (int n = 1; n <= q_prec; ++n) {
        const mpq_class cn = factor * mpq_class(sigma_k(n, p - 2));
        s.set_coeff(JetMonomial(n, {}), PadicNum::from_rational(ctx, cn));
    }
    return s;
}

NewformData NewformData::make(long level, long weight, long p, std::vector<mpq_class> coeffs,
                              std::string source) {
    if (level < 1) throw OutOfDomain("qexp_tools", "level must be positive");
    if (std::gcd(level, p) != 1) throw OutOfDomain("qexp_tools", "p must be coprime to the level");
    if (coeffs.empty() || coeffs[0] != 1)
        throw OutOfDomain("qexp_tools", "newform coefficients must start with a_1 = 1");
    NewformData nf;
    nf.level = level;
    nf.weight = weight;
    nf.p = p;
    nf.an = std::move(coeffs);
    nf.source = std::move(source);
    // multiplicativity a_{mn} = a_m a_n on coprime pairs within range
    const long N = nf.nmax();
    for (long m = 2; m <= N; ++m)
        for (long n = 2; m * n <= N; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (nf.a(m * n) != nf.a(m) * nf.a(n))
                throw OutOfDomain("qexp_tools", "coefficients are not multiplicative");
        }
    return nf;
}

const mpq_class& NewformData::a(long n) const {
    if (n < 1 || n > nmax())
        throw InsufficientCoefficients("qexp_tools", "a_n requested beyond the stored range");
    return an[static_cast<size_t>(n - 1)];
}

JetSeries f_inverse(const NewformData& nf, int q_prec, const CtxPtr& ctx) {
    if (q_prec > nf.nmax())
        throw InsufficientCoefficients("qexp_tools", "q_prec exceeds the coefficient range");
    JetSeries s = JetSeries::zero(ctx, q_prec, JetSeries::default_delta_deg(0), 0);
    for (long n = 1; n <= q_prec; ++n) {
        const mpq_class c = nf.a(n) / n;
        if (c == 0) continue;
        s.set_coeff(JetMonomial(static_cast<int>(n), {}), PadicNum::from_rational(ctx, c));
    }
    return s;
}

namespace {

long mod_l(const mpz_class& a, long ell) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(ell));
    return r.get_si();
}

long legendre(long a, long ell) {
    a %= ell;
    if (a < 0) a += ell;
    if (a == 0) return 0;
    // Euler criterion, ell odd prime
    long r = 1, base = a, e = (ell - 1) / 2;
    while (e > 0) {
        if (e & 1) r = (r * base) % ell;
        base = (base * base) % ell;
        e >>= 1;
    }
    return r == ell - 1 ? -1 : r;
}

// number of affine points of the (possibly singular) reduction mod ell
long affine_points(const WeierstrassCurve& E, long ell) {
    const long a1 = mod_l(E.a1, ell), a2 = mod_l(E.a2, ell), a3 = mod_l(E.a3, ell),
               a4 = mod_l(E.a4, ell), a6 = mod_l(E.a6, ell);
    long count = 0;
    if (ell == 2) {
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y) {
                const long lhs = (y * y + a1 * x * y + a3 * y) % 2;
                const long rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                if (((lhs - rhs) % 2 + 2) % 2 == 0) ++count;
            }
        return count;
    }
    for (long x = 0; x < ell; ++x) {
        // complete the square: (2y + a1 x + a3)^2 = 4 rhs + (a1 x + a3)^2
        const long x2 = (x * x) % ell;
        const long rhs = ((x2 * x) % ell + (a2 * x2) % ell + (a4 * x) % ell + a6) % ell;
        const long lin = (a1 * x + a3) % ell;
        const long d = (4 * rhs + lin * lin) % ell;
        count += 1 + legendre(d, ell);
    }
    return count;
}

} // namespace

long ap_point_count(const WeierstrassCurve& E, long ell) {
    if (!E.good_reduction(ell))
        throw BadReduction("qexp_tools", "point counting requires good reduction");
    const long N = affine_points(E, ell) + 1;
    const long a = ell + 1 - N;
    if (a * a > 4 * ell)
        throw BadReduction("qexp_tools", "Hasse bound violated: inconsistent point count");
    return a;
}

long a_ell_bad(const WeierstrassCurve& E, long ell) {
    if (E.good_reduction(ell)) throw BadReduction("qexp_tools", "prime has good reduction");
    const long a1 = mod_l(E.a1, ell), a2 = mod_l(E.a2, ell), a3 = mod_l(E.a3, ell),
               a4 = mod_l(E.a4, ell), a6 = mod_l(E.a6, ell);
    // count nonsingular affine points; infinity is always nonsingular
    long smooth = 0;
    for (long x = 0; x < ell; ++x)
        for (long y = 0; y < ell; ++y) {
            const long f = ((y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)) %
                                ell + ell) % ell;
            if (f != 0) continue;
            const long fx = ((a1 * y - (3 * x * x + 2 * a2 * x + a4)) % ell + ell) % ell;
            const long fy = ((2 * y + a1 * x + a3) % ell + ell) % ell;
            if (fx != 0 || fy != 0) ++smooth;
        }
    // #E_ns(F_ell) = ell - a_ell
    return ell - (smooth + 1);
}

NewformData newform_from_curve(const WeierstrassCurve& E, long level, long p, long nmax) {
    std::vector<mpq_class> a(static_cast<size_t>(nmax), mpq_class(0));
    a[0] = 1;
    std::vector<bool> is_prime(static_cast<size_t>(nmax) + 1, true);
    for (long n = 2; n <= nmax; ++n) {
        if (!is_prime[static_cast<size_t>(n)]) continue;
        for (long m = 2 * n; m <= nmax; m += n) is_prime[static_cast<size_t>(m)] = false;
        const bool good = E.good_reduction(n);
        const long al = good ? ap_point_count(E, n) : a_ell_bad(E, n);
        // prime powers
        std::vector<mpq_class> apow{1, mpq_class(al)};
        for (mpz_class q = mpz_class(n) * n; q <= nmax; q *= n) {
            if (good) {
                apow.push_back(mpq_class(al) * apow[apow.size() - 1] -
                               mpq_class(n) * apow[apow.size() - 2]);
            } else {
                apow.push_back(mpq_class(al) * apow[apow.size() - 1]);
            }
        }
        for (size_t k = 1; k < apow.size(); ++k) {
            mpz_class q;
            mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
            a[static_cast<size_t>(q.get_si() - 1)] = apow[k];
        }
    }
    // multiplicative fill over prime powers
    for (long n = 2; n <= nmax; ++n) {
        long m = n, q = 1;
        // largest prime-power divisor q of n with gcd(q, n/q) = 1
        for (long d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                q = 1;
                while (m % d == 0) {
                    m /= d;
                    q *= d;
                }
                break;
            }
        }
        if (q == 1 || m == 1) continue; // n itself a prime power (or prime)
        a[static_cast<size_t>(n - 1)] = a[static_cast<size_t>(q - 1)] * a[static_cast<size_t>(m - 1)];
    }
    return NewformData::make(level, 2, p, std::move(a), "point_counting");
}

// ---------------------------------------------------------------------------
// Hensel lifting
// ---------------------------------------------------------------------------

namespace {

template <class R, class Ops>
R hensel_newton(const std::vector<R>& poly, const R& tau0, int target_prec, Ops ops) {
    if (poly.size() < 2) throw OutOfDomain("qexp_tools", "polynomial must be non-constant");
    auto eval = [&](const std::vector<R>& cs, const R& at) {
        R acc = cs.back();
        for (size_t i = cs.size() - 1; i-- > 0;) acc = ops.add(ops.mul(acc, at), cs[i]);
        return acc;
    };
    std::vector<R> dpoly;
    for (size_t i = 1; i < poly.size(); ++i) dpoly.push_back(ops.scale_int(poly[i], static_cast<long>(i)));

    const R f0 = eval(poly, tau0);
    if (ops.val_floor(f0) < 1)
        throw OutOfDomain("qexp_tools", "tau0 is not a root of the residue polynomial");
    const R fp0 = eval(dpoly, tau0);
    if (!ops.unit_residue(fp0))
        throw NotEtale("qexp_tools", "df/dz is not invertible at the residue root");

    R tau = tau0;
    for (int it = 0; it < 64; ++it) {
        const R f = eval(poly, tau);
        if (ops.val_floor(f) >= target_prec) return tau;
        const R fp = eval(dpoly, tau);
        tau = ops.sub(tau, ops.mul(f, ops.inv(fp)));
    }
    throw PrecisionExhausted("qexp_tools", "Newton iteration did not reach the target precision");
}

struct PadicOps {
    PadicNum add(const PadicNum& a, const PadicNum& b) const { return a + b; }
    PadicNum sub(const PadicNum& a, const PadicNum& b) const { return a - b; }
    PadicNum mul(const PadicNum& a, const PadicNum& b) const { return a * b; }
    PadicNum inv(const PadicNum& a) const { return a.inv(); }
    PadicNum scale_int(const PadicNum& a, long k) const {
        return a * PadicNum::from_int(a.ctx(), k);
    }
    int val_floor(const PadicNum& a) const { return a.val_floor(); }
    bool unit_residue(const PadicNum& a) const { return !a.is_zero() && a.val_floor() == 0; }
};

struct SeriesOps {
    JetSeries add(const JetSeries& a, const JetSeries& b) const { return a + b; }
    JetSeries sub(const JetSeries& a, const JetSeries& b) const { return a - b; }
    JetSeries mul(const JetSeries& a, const JetSeries& b) const { return a * b; }
    JetSeries inv(const JetSeries& a) const { return a.inverse(); }
    JetSeries scale_int(const JetSeries& a, long k) const {
        return a.scalar_mul(PadicNum::from_int(a.ctx(), k));
    }
    int val_floor(const JetSeries& a) const { return a.min_val_floor(1 << 20); }
    bool unit_residue(const JetSeries& a) const {
        const PadicNum c0 = a.coeff(JetMonomial{});
        if (c0.is_zero() || c0.val_floor() != 0) return false;
        for (const auto& [m, c] : a.coeffs()) {
            (void)c;
            if (m.q_exp < 0) return false;
        }
        return true;
    }
};

} // namespace

PadicNum hensel_lift_root(const std::vector<PadicNum>& poly, const PadicNum& tau0,
                          int target_prec) {
    return hensel_newton(poly, tau0, target_prec, PadicOps{});
}

JetSeries hensel_lift_root(const std::vector<JetSeries>& poly, const JetSeries& tau0,
                           int target_prec) {
    return hensel_newton(poly, tau0, target_prec, SeriesOps{});
}

} // namespace deltapi
