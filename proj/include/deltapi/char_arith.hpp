#pragma once

#include <map>
#include <set>

#include "deltapi/padic.hpp"

namespace deltapi {

/// Teichmuller character value: the unique (p-1)-st root of unity congruent
/// to d mod p, computed as the fixed point of x -> x^p. NotAUnit when p | d.
PadicNum teichmuller(long d, const CtxPtr& ctx);

/// Conjugate-weight query: kappa' in [1, p-2] with kappa' = c (2 - kappa)
/// mod p-1 for some c coprime to p-1.
struct ConjugacyQuery {
    long p = 5;
    long kappa = 3;

    ConjugacyQuery(long p_, long kappa_);
};

/// Full set of conjugates of kappa. DegenerateWeight when kappa = 2 mod p-1
/// (every candidate is 0 mod p-1, which has no representative in [1, p-2]).
std::set<long> conjugates(const ConjugacyQuery& q);

/// Exact character data: values are roots of unity ζ_order^{exps[u]} on the
/// units mod modulus. Multiplicativity is validated on construction.
struct CharacterData {
    long modulus = 1;
    long order = 1;                // root-of-unity order, divides phi(modulus)
    std::map<long, long> exps;     // unit residue -> exponent of ζ_order

    static CharacterData make(long modulus, long order, std::map<long, long> exps);
    /// the character on (Z/pZ)^x sending a fixed generator g to ζ_{p-1}^k
    static CharacterData cyclic_power(long p, long k);

    long value_exp(long u) const;  // exponent of ζ_order at u (u coprime)
    bool is_trivial() const;
};

/// smallest generator of (Z/pZ)^x
long primitive_root(long p);

/// Image of a CharacterData of p-power-free modulus p under the embedding
/// ζ_{order} -> Θ_p(g)^{(p-1)/order}: concrete unit values in R_pi.
std::map<long, PadicNum> embed_character(const CharacterData& chi, const CtxPtr& ctx);

/// True iff the embedded character equals Θ_p^{kappa-2} on the units mod p at
/// the working precision. PrecisionExhausted below one digit.
bool check_serre_compat(const std::map<long, PadicNum>& rho_eps_p, long kappa, long p,
                        const CtxPtr& ctx);

} // namespace deltapi
