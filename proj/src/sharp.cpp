#include "deltapi/sharp.hpp"

namespace deltapi {

int integrality_exponent(const JetSeries& s) {
    int min_val = 0;
    for (const auto& [m, c] : s.coeffs()) {
        (void)m;
        min_val = std::min(min_val, c.val_floor());
    }
    return -min_val;
}

std::optional<bool> nonzero_check(const JetSeries& s) {
    if (s.coeffs().empty()) return false;
    for (const auto& [m, c] : s.coeffs()) {
        (void)m;
        if (!c.is_zero()) return true;
    }
    return std::nullopt;
}

PhiPoly sharp_preset_phi_poly(const NewformData& nf, const CtxPtr& ctx) {
    const long p = ctx->p();
    const mpq_class ap = nf.a(p);
    return PhiPoly(ctx, {mpq_class(1), -ap / p, mpq_class(1, p)});
}

SharpResult assemble_sharp(const SharpSpec& spec, int q_prec, const CtxPtr& ctx) {
    SharpMetadata meta;
    meta.realized_kappa_prime = spec.realized_kappa_prime;
    if (spec.kappa_bar) {
        meta.conjugate_set = conjugates(ConjugacyQuery(ctx->p(), *spec.kappa_bar));
        if (spec.realized_kappa_prime &&
            meta.conjugate_set.find(*spec.realized_kappa_prime) == meta.conjugate_set.end())
            throw OutOfDomain("sharp_builder",
                              "realized kappa' is not a conjugate of kappa at this prime");
    }
    for (const auto& term : spec.terms) {
        if (term.P.degree() > spec.order)
            throw OrderOverflow("sharp_builder", "deg P_sigma exceeds the declared order");
        meta.order = std::max(meta.order, term.P.degree());
    }

    JetSeries acc = JetSeries::zero(ctx, q_prec, JetSeries::default_delta_deg(0), 0);
    for (const auto& term : spec.terms) {
        JetSeries fi = f_inverse(term.form, q_prec, ctx);
        acc = acc + apply_phi_poly(term.P, fi);
    }
    SharpResult res;
    res.meta = std::move(meta);
    res.meta.nu = integrality_exponent(acc);
    res.meta.nonzero = nonzero_check(acc);
    res.series = std::move(acc);
    return res;
}

} // namespace deltapi
