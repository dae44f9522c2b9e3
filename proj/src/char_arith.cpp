#include "deltapi/char_arith.hpp"

#include <numeric>

namespace deltapi {

PadicNum teichmuller(long d, const CtxPtr& ctx) {
    const long p = ctx->p();
    const long r = ((d % p) + p) % p;
    if (r == 0) throw NotAUnit("char_arith", "Teichmuller lift needs a unit mod p");
    PadicNum x = PadicNum::from_int(ctx, d);
    for (int i = 0; i < 4 * ctx->prec() + 8; ++i) {
        PadicNum nx = x.pow_i(p);
        if (nx.same_repr(x)) return x;
        x = nx;
    }
    throw PrecisionExhausted("char_arith", "Teichmuller iteration did not stabilize");
}

ConjugacyQuery::ConjugacyQuery(long p_, long kappa_) : p(p_), kappa(kappa_) {
    if (kappa < 3) throw OutOfDomain("char_arith", "kappa must be >= 3");
    if (p < 5) throw OutOfDomain("char_arith", "p must be >= 5");
}

std::set<long> conjugates(const ConjugacyQuery& q) {
    const long n = q.p - 1;
    const long base = ((2 - q.kappa) % n + n) % n;
    if (base == 0)
        throw DegenerateWeight("char_arith",
                               "kappa = 2 mod p-1: no conjugate weight in [1, p-2]");
    std::set<long> out;
    for (long c = 1; c < n; ++c) {
        if (std::gcd(c, n) != 1) continue;
        const long kp = (c * base) % n;
        if (kp >= 1 && kp <= q.p - 2) out.insert(kp);
    }
    return out;
}

CharacterData CharacterData::make(long modulus, long order, std::map<long, long> exps) {
    CharacterData chi;
    chi.modulus = modulus;
    chi.order = order;
    chi.exps = std::move(exps);
    // normalize exponents and validate multiplicativity on all unit pairs
    for (auto& [u, e] : chi.exps) {
        if (std::gcd(u, modulus) != 1)
            throw NotAUnit("char_arith", "character table indexed by a non-unit");
        e = ((e % order) + order) % order;
    }
    for (const auto& [u, eu] : chi.exps)
        for (const auto& [v, ev] : chi.exps) {
            const long uv = (u * v) % modulus;
            auto it = chi.exps.find(uv);
            if (it == chi.exps.end())
                throw OutOfDomain("char_arith", "character table missing a unit product");
            if (((eu + ev) % order) != it->second)
                throw OutOfDomain("char_arith", "character table is not multiplicative");
        }
    return chi;
}

long primitive_root(long p) {
    for (long g = 2; g < p; ++g) {
        long x = g % p, ord = 1;
        while (x != 1) {
            x = (x * g) % p;
            ++ord;
        }
        if (ord == p - 1) return g;
    }
    throw OutOfDomain("char_arith", "no primitive root found");
}

CharacterData CharacterData::cyclic_power(long p, long k) {
    const long g = primitive_root(p);
    std::map<long, long> exps;
    long x = 1;
    for (long j = 0; j < p - 1; ++j) {
        exps[x] = (j * k) % (p - 1);
        x = (x * g) % p;
    }
    return make(p, p - 1, std::move(exps));
}

long CharacterData::value_exp(long u) const {
    const long r = ((u % modulus) + modulus) % modulus;
    auto it = exps.find(r);
    if (it == exps.end()) throw NotAUnit("char_arith", "character evaluated outside its table");
    return it->second;
}

bool CharacterData::is_trivial() const {
    for (const auto& [u, e] : exps) {
        (void)u;
        if (e != 0) return false;
    }
    return true;
}

std::map<long, PadicNum> embed_character(const CharacterData& chi, const CtxPtr& ctx) {
    const long p = ctx->p();
    if (chi.modulus != p)
        throw OutOfDomain("char_arith", "embedding defined for characters mod p");
    if ((p - 1) % chi.order != 0)
        throw OutOfDomain("char_arith", "character order does not divide p-1");
    const long g = primitive_root(p);
    const PadicNum zeta = teichmuller(g, ctx).pow_i((p - 1) / chi.order);
    std::map<long, PadicNum> out;
    for (const auto& [u, e] : chi.exps) out.emplace(u, zeta.pow_i(e));
    return out;
}

bool check_serre_compat(const std::map<long, PadicNum>& rho_eps_p, long kappa, long p,
                        const CtxPtr& ctx) {
    if (ctx->p() != p) throw OutOfDomain("char_arith", "ctx prime does not match the character");
    if (ctx->prec() < 1)
        throw PrecisionExhausted("char_arith", "roots of unity indistinguishable at precision 0");
    const int prec = ctx->prec();
    for (const auto& [u, val] : rho_eps_p) {
        if (val.abs_prec() < 1)
            throw PrecisionExhausted("char_arith", "character value carries no digits");
        const PadicNum expect = teichmuller(u, ctx).pow_i(kappa - 2);
        if (!val.eq_mod(expect, std::min(prec, val.abs_prec()))) return false;
    }
    return true;
}

} // namespace deltapi
