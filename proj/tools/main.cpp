#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "deltapi/char_arith.hpp"
#include "deltapi/gm_character.hpp"
#include "deltapi/json_io.hpp"
#include "deltapi/sharp.hpp"

using namespace deltapi;

namespace {

// operation -> subcommand exposure map; every module operation is reachable
// from exactly one subcommand (validated by the CLI test suite)
const std::vector<std::pair<std::string, std::string>> kOpRegistry = {
    {"padic_core.frobenius", "phi"},
    {"padic_core.delta_pi", "delta"},
    {"padic_core.c_pi", "delta"},
    {"padic_core.arith", "delta"},
    {"jet_series.phi_series", "phi"},
    {"jet_series.delta_series", "delta"},
    {"jet_series.apply_phi_poly", "sharp"},
    {"jet_series.series_arith", "sharp"},
    {"gm_character.psi_gm", "psi-gm"},
    {"gm_character.psi_gm_on_series", "psi-gm"},
    {"formal_group.formal_group_law", "formal-log"},
    {"formal_group.jet_log", "jet-log"},
    {"formal_group.eval_jet_log", "jet-log"},
    {"formal_group.valuation_bound_check", "val-bound"},
    {"char_arith.teichmuller", "teichmuller"},
    {"char_arith.conjugates", "conjugates"},
    {"char_arith.check_serre_compat", "serre-check"},
    {"qexp_tools.bernoulli", "bernoulli"},
    {"qexp_tools.eisenstein_qexp", "eisenstein"},
    {"qexp_tools.f_inverse", "f-inverse"},
    {"qexp_tools.ap_point_count", "ap"},
    {"qexp_tools.hensel_lift_root", "hensel-root"},
    {"sharp_builder.assemble_sharp", "sharp"},
    {"sharp_builder.integrality_exponent", "sharp"},
    {"sharp_builder.nonzero_check", "sharp"},
};

struct CommonState {
    long p = 5;
    std::string kind = "trivial";
    std::string min_poly;
    int prec = 0;
    int q_prec = 0;
    int delta_deg = -1;
    std::string config;

    CLI::Option* prec_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* kind_opt = nullptr;
    CLI::Option* min_poly_opt = nullptr;
    CLI::Option* q_prec_opt = nullptr;
    CLI::Option* delta_deg_opt = nullptr;
};

void attach_common(CLI::App* cmd, CommonState& st) {
    st.p_opt = cmd->add_option("--p", st.p, "prime p >= 5");
    st.kind_opt = cmd->add_option("--kind", st.kind, "ctx kind: trivial|ramified|unramified");
    st.min_poly_opt =
        cmd->add_option("--min-poly", st.min_poly, "JSON array of min_poly coefficients");
    st.prec_opt = cmd->add_option("--prec", st.prec, "significant pi-adic digits");
    st.q_prec_opt = cmd->add_option("--qprec", st.q_prec, "q-expansion truncation order");
    st.delta_deg_opt = cmd->add_option("--delta-deg", st.delta_deg, "delta-degree window");
    cmd->add_option("--config", st.config, "JSON config file with defaults");
}

struct Resolved {
    CtxPtr ctx;
    int q_prec;
    int delta_deg;
};

Resolved resolve(CommonState& st, int default_qprec) {
    ojson cfg;
    if (!st.config.empty()) {
        std::ifstream in(st.config);
        if (!in) throw Usage("cli", "cannot open config file " + st.config);
        in >> cfg;
    }
    auto cfg_has = [&](const char* k) { return cfg.is_object() && cfg.contains(k); };
    if (!st.p_opt->count() && cfg_has("p")) st.p = cfg["p"].get<long>();
    if (!st.kind_opt->count() && cfg_has("kind")) st.kind = cfg["kind"].get<std::string>();
    if (!st.min_poly_opt->count() && cfg_has("min_poly")) st.min_poly = cfg["min_poly"].dump();
    if (!st.prec_opt->count()) {
        if (cfg_has("prec_M")) {
            st.prec = cfg["prec_M"].get<int>();
        } else if (const char* env = std::getenv("DELTA_PI_PREC")) {
            st.prec = std::atoi(env);
        }
    }
    if (st.prec <= 0) st.prec = 8;
    if (!st.q_prec_opt->count() && cfg_has("q_prec")) st.q_prec = cfg["q_prec"].get<int>();
    if (st.q_prec <= 0) st.q_prec = default_qprec;
    if (!st.delta_deg_opt->count() && cfg_has("delta_deg"))
        st.delta_deg = cfg["delta_deg"].get<int>();

    Resolved r;
    if (st.kind == "trivial") {
        r.ctx = PadicCtx::trivial(st.p, st.prec);
    } else {
        if (st.min_poly.empty())
            throw Usage("cli", "--min-poly is required for kind " + st.kind);
        ojson arr = ojson::parse(st.min_poly);
        std::vector<mpz_class> mp;
        for (const auto& v : arr)
            mp.push_back(v.is_string() ? mpz_class(v.get<std::string>()) : mpz_class(v.get<long>()));
        if (st.kind == "ramified")
            r.ctx = PadicCtx::ramified(st.p, std::move(mp), st.prec);
        else if (st.kind == "unramified")
            r.ctx = PadicCtx::unramified(st.p, std::move(mp), st.prec);
        else
            throw Usage("cli", "unknown ctx kind " + st.kind);
    }
    r.q_prec = st.q_prec;
    r.delta_deg = st.delta_deg >= 0 ? st.delta_deg : JetSeries::default_delta_deg(0);
    return r;
}

void emit(const ojson& j) { std::cout << j.dump() << "\n"; }

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

WeierstrassCurve curve_from_opts(const std::string& inline_json, const std::string& file) {
    if (!inline_json.empty()) return curve_from_json(ojson::parse(inline_json));
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw Usage("cli", "cannot open curve file " + file);
        ojson j;
        in >> j;
        return curve_from_json(j);
    }
    return curve_11a1();
}

NewformData newform_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cli", "cannot open newform file " + path);
    ojson j;
    in >> j;
    return newform_from_json(j);
}

PhiPoly phi_poly_from_spec(const std::string& s, const NewformData& nf, const CtxPtr& ctx) {
    if (s == "preset" || s == "1/p-preset") return sharp_preset_phi_poly(nf, ctx);
    std::vector<mpq_class> cs;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        mpq_class q(s.substr(pos, next - pos));
        q.canonicalize();
        cs.push_back(q);
        pos = next + 1;
    }
    return PhiPoly(ctx, cs);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic kernel for the delta-pi (Fermat-quotient) calculus"};
    app.require_subcommand(0, 1);
    bool show_registry = false;
    app.add_flag("--registry", show_registry, "print the operation/subcommand registry");

    // ---- delta ----
    auto* delta_cmd = app.add_subcommand("delta", "pi-derivation delta_pi and C_pi on scalars or series");
    CommonState delta_st;
    attach_common(delta_cmd, delta_st);
    std::string delta_x, delta_y, delta_arith, delta_series_in, delta_gen;
    delta_cmd->add_option("--x", delta_x, "scalar input");
    delta_cmd->add_option("--y", delta_y, "second scalar (C_pi mode)");
    delta_cmd->add_option("--arith", delta_arith, "plumbing op: add|mul|inv|val (uses --x/--y)");
    delta_cmd->add_option("--series", delta_series_in, "series JSON (delta_series mode)");
    delta_cmd->add_option("--gen", delta_gen, "shorthand generator: q");
    delta_cmd->callback([&] {
        auto r = resolve(delta_st, 10);
        ojson out;
        out["op"] = "delta";
        out["ctx"] = ctx_to_json(*r.ctx);
        if (!delta_gen.empty() || !delta_series_in.empty()) {
            JetSeries s = delta_gen == "q"
                              ? JetSeries::variable(r.ctx, 0, r.q_prec, r.delta_deg)
                              : series_from_json(r.ctx, ojson::parse(delta_series_in), r.q_prec,
                                                 r.delta_deg);
            out["series"] = series_to_json(delta_series(s));
        } else if (!delta_arith.empty()) {
            PadicNum x = padic_from_string(r.ctx, delta_x);
            if (delta_arith == "add" || delta_arith == "mul") {
                PadicNum y = padic_from_string(r.ctx, delta_y);
                out["result"] = padic_to_json(delta_arith == "add" ? x + y : x * y);
            } else if (delta_arith == "inv") {
                out["result"] = padic_to_json(x.inv());
            } else if (delta_arith == "val") {
                if (auto v = x.valuation())
                    out["result"] = *v;
                else
                    out["result"] = nullptr;
            } else {
                throw Usage("cli", "unknown --arith op " + delta_arith);
            }
        } else if (!delta_y.empty()) {
            out["result"] = padic_to_json(
                c_pi(padic_from_string(r.ctx, delta_x), padic_from_string(r.ctx, delta_y)));
        } else {
            out["result"] = padic_to_json(delta_pi(padic_from_string(r.ctx, delta_x)));
        }
        emit(out);
    });

    // ---- phi ----
    auto* phi_cmd = app.add_subcommand("phi", "Frobenius lift on scalars, series, and weights");
    CommonState phi_st;
    attach_common(phi_cmd, phi_st);
    std::string phi_x, phi_series_in, phi_gen, phi_weight;
    phi_cmd->add_option("--x", phi_x, "scalar input");
    phi_cmd->add_option("--series", phi_series_in, "series JSON (phi_series mode)");
    phi_cmd->add_option("--gen", phi_gen, "shorthand generator: q");
    phi_cmd->add_option("--weight", phi_weight, "comma weights w_i: compute x^w = prod phi^i(x)^{w_i}");
    phi_cmd->callback([&] {
        auto r = resolve(phi_st, 10);
        ojson out;
        out["op"] = "phi";
        out["ctx"] = ctx_to_json(*r.ctx);
        if (!phi_gen.empty() || !phi_series_in.empty()) {
            JetSeries s = phi_gen == "q"
                              ? JetSeries::variable(r.ctx, 0, r.q_prec, r.delta_deg)
                              : series_from_json(r.ctx, ojson::parse(phi_series_in), r.q_prec,
                                                 r.delta_deg);
            out["series"] = series_to_json(phi_series(s));
        } else if (!phi_weight.empty()) {
            std::vector<long> w;
            size_t pos = 0;
            while (pos <= phi_weight.size()) {
                size_t next = phi_weight.find(',', pos);
                if (next == std::string::npos) next = phi_weight.size();
                w.push_back(std::stol(phi_weight.substr(pos, next - pos)));
                pos = next + 1;
            }
            out["result"] = padic_to_json(weight_pow(padic_from_string(r.ctx, phi_x), w));
        } else {
            out["result"] = padic_to_json(frobenius(padic_from_string(r.ctx, phi_x)));
        }
        emit(out);
    });

    // ---- psi-gm ----
    auto* psi_cmd = app.add_subcommand("psi-gm", "logarithmic delta-character of G_m");
    CommonState psi_st;
    attach_common(psi_cmd, psi_st);
    std::string psi_x, psi_series_in;
    psi_cmd->add_option("--x", psi_x, "unit scalar");
    psi_cmd->add_option("--series", psi_series_in, "unit series JSON");
    psi_cmd->callback([&] {
        auto r = resolve(psi_st, 8);
        auto params = GmPsiParams::make(r.ctx);
        ojson out;
        out["op"] = "psi-gm";
        out["ctx"] = ctx_to_json(*r.ctx);
        out["m"] = params.m;
        out["series_cutoff"] = params.series_cutoff;
        if (!psi_series_in.empty()) {
            JetSeries s = series_from_json(r.ctx, ojson::parse(psi_series_in), r.q_prec, r.delta_deg);
            out["series"] = series_to_json(psi_gm_on_series(s, params));
        } else {
            out["result"] = padic_to_json(psi_gm(padic_from_string(r.ctx, psi_x), params));
        }
        emit(out);
    });

    // ---- formal-log ----
    auto* flog_cmd = app.add_subcommand("formal-log", "formal group law and logarithm of a curve");
    CommonState flog_st;
    attach_common(flog_cmd, flog_st);
    std::string flog_curve, flog_curve_file;
    int flog_tprec = 12;
    flog_cmd->add_option("--curve", flog_curve, "curve JSON {a1,a2,a3,a4,a6} (default 11a1)");
    flog_cmd->add_option("--curve-file", flog_curve_file, "curve JSON file");
    flog_cmd->add_option("--tprec", flog_tprec, "total degree of the truncation");
    flog_cmd->callback([&] {
        auto r = resolve(flog_st, 0);
        const WeierstrassCurve E = curve_from_opts(flog_curve, flog_curve_file);
        auto fg = formal_group_law(E, flog_tprec);
        ojson out;
        out["op"] = "formal-log";
        out["curve"] = curve_to_json(E);
        out["disc"] = E.discriminant().get_str();
        out["good_reduction_at_p"] = E.good_reduction(r.ctx->p());
        out["t_prec"] = fg.t_prec;
        ojson lc = ojson::array();
        bool haze = true;
        for (int n = 0; n <= fg.t_prec; ++n) {
            lc.push_back(fg.log_coeffs[static_cast<size_t>(n)].get_str());
            if (n >= 1) {
                mpq_class ncn = mpq_class(n) * fg.log_coeffs[static_cast<size_t>(n)];
                if (ncn.get_den() % r.ctx->p() == 0) haze = false;
            }
        }
        out["log_coeffs"] = lc;
        out["n_cn_p_integral"] = haze;
        ojson F = ojson::array();
        for (int i = 0; i <= fg.t_prec; ++i) {
            ojson row = ojson::array();
            for (int j = 0; i + j <= fg.t_prec; ++j) row.push_back(fg.f_coeff(i, j).get_str());
            F.push_back(row);
        }
        out["F"] = F;
        emit(out);
    });

    // ---- jet-log ----
    auto* jlog_cmd = app.add_subcommand("jet-log", "jet logarithms L^n and their evaluation");
    CommonState jlog_st;
    attach_common(jlog_cmd, jlog_st);
    std::string jlog_curve, jlog_curve_file, jlog_eval;
    int jlog_n = 1, jlog_tprec = 12;
    jlog_cmd->add_option("--n", jlog_n, "jet order (1 or 2)");
    jlog_cmd->add_option("--curve", jlog_curve, "curve JSON (default 11a1)");
    jlog_cmd->add_option("--curve-file", jlog_curve_file, "curve JSON file");
    jlog_cmd->add_option("--tprec", jlog_tprec, "log truncation degree");
    jlog_cmd->add_option("--eval", jlog_eval, "evaluate at a point of positive valuation");
    jlog_cmd->callback([&] {
        auto r = resolve(jlog_st, 0);
        const WeierstrassCurve E = curve_from_opts(jlog_curve, jlog_curve_file);
        auto fg = formal_group_law(E, jlog_tprec);
        ojson out;
        out["op"] = "jet-log";
        out["curve"] = curve_to_json(E);
        out["n"] = jlog_n;
        if (!jlog_eval.empty()) {
            out["eval"] = padic_to_json(eval_jet_log(jlog_n, fg, padic_from_string(r.ctx, jlog_eval)));
        } else {
            auto L = jet_log(jlog_n, fg, r.ctx);
            out["nu"] = L.nu;
            out["terms"] = L.terms;
            out["series"] = series_to_json(L.series);
        }
        emit(out);
    });

    // ---- val-bound ----
    auto* vb_cmd = app.add_subcommand("val-bound", "valuation bound for pi^{|a|-1}/|a|");
    CommonState vb_st;
    attach_common(vb_cmd, vb_st);
    int vb_alpha = 625, vb_e = 1;
    vb_cmd->add_option("--alpha-max", vb_alpha, "check all 1 <= |a| <= alpha_max");
    vb_cmd->add_option("--e", vb_e, "ramification index");
    vb_cmd->callback([&] {
        auto r = resolve(vb_st, 0);
        auto rep = valuation_bound_check(vb_alpha, vb_e, r.ctx->p());
        ojson out;
        out["op"] = "val-bound";
        out["p"] = rep.p;
        out["e"] = rep.e;
        out["alpha_max"] = rep.alpha_max;
        out["violations"] = rep.violations;
        out["min_slack"] = fixed6(rep.min_slack);
        out["min_slack_at"] = rep.min_slack_at;
        out["bound_at_max"] = fixed6(rep.bound_at_max);
        out["monotone_from"] = rep.monotone_from;
        emit(out);
    });

    // ---- teichmuller ----
    auto* teich_cmd = app.add_subcommand("teichmuller", "Teichmuller lift of a unit mod p");
    CommonState teich_st;
    attach_common(teich_cmd, teich_st);
    long teich_d = 1;
    teich_cmd->add_option("--d", teich_d, "unit residue mod p");
    teich_cmd->callback([&] {
        auto r = resolve(teich_st, 0);
        ojson out;
        out["op"] = "teichmuller";
        out["ctx"] = ctx_to_json(*r.ctx);
        out["d"] = teich_d;
        out["result"] = padic_to_json(teichmuller(teich_d, r.ctx));
        emit(out);
    });

    // ---- conjugates ----
    auto* conj_cmd = app.add_subcommand("conjugates", "conjugate weights of kappa at p");
    CommonState conj_st;
    attach_common(conj_cmd, conj_st);
    long conj_kappa = 3;
    conj_cmd->add_option("--kappa", conj_kappa, "weight 3 <= kappa <= p");
    conj_cmd->callback([&] {
        auto r = resolve(conj_st, 0);
        auto set = conjugates(ConjugacyQuery(r.ctx->p(), conj_kappa));
        ojson out;
        out["op"] = "conjugates";
        out["kappa"] = conj_kappa;
        out["p"] = r.ctx->p();
        out["conjugates"] = ojson::array();
        for (long k : set) out["conjugates"].push_back(k);
        emit(out);
    });

    // ---- serre-check ----
    auto* serre_cmd = app.add_subcommand("serre-check", "character compatibility of a Serre lift");
    CommonState serre_st;
    attach_common(serre_cmd, serre_st);
    long serre_kappa = 2;
    long serre_char_exp = 0;
    std::string serre_char_json;
    serre_cmd->add_option("--kappa", serre_kappa, "weight of the mod-p form");
    serre_cmd->add_option("--char-exp", serre_char_exp,
                          "eps_p as the Teichmuller power Theta^k (shorthand)");
    serre_cmd->add_option("--char-json", serre_char_json,
                          "full character table {modulus, order, exps}");
    serre_cmd->callback([&] {
        auto r = resolve(serre_st, 0);
        CharacterData chi;
        if (!serre_char_json.empty()) {
            ojson j = ojson::parse(serre_char_json);
            std::map<long, long> exps;
            for (const auto& [k, v] : j.at("exps").items()) exps[std::stol(k)] = v.get<long>();
            chi = CharacterData::make(j.at("modulus").get<long>(), j.at("order").get<long>(),
                                      std::move(exps));
        } else {
            chi = CharacterData::cyclic_power(r.ctx->p(), serre_char_exp);
        }
        const bool ok = check_serre_compat(embed_character(chi, r.ctx), serre_kappa, r.ctx->p(), r.ctx);
        ojson out;
        out["op"] = "serre-check";
        out["kappa"] = serre_kappa;
        out["p"] = r.ctx->p();
        out["compatible"] = ok;
        emit(out);
    });

    // ---- bernoulli ----
    auto* bern_cmd = app.add_subcommand("bernoulli", "exact Bernoulli number");
    int bern_k = 4;
    bern_cmd->add_option("--k", bern_k, "index");
    bern_cmd->callback([&] {
        ojson out;
        out["op"] = "bernoulli";
        out["k"] = bern_k;
        out["bernoulli"] = bernoulli(bern_k).get_str();
        emit(out);
    });

    // ---- eisenstein ----
    auto* eis_cmd = app.add_subcommand("eisenstein", "normalized E_{p-1} q-expansion");
    CommonState eis_st;
    attach_common(eis_cmd, eis_st);
    eis_cmd->callback([&] {
        auto r = resolve(eis_st, 20);
        ojson out;
        out["op"] = "eisenstein";
        out["ctx"] = ctx_to_json(*r.ctx);
        out["series"] = series_to_json(eisenstein_qexp(r.ctx->p(), r.q_prec, r.ctx));
        emit(out);
    });

    // ---- f-inverse ----
    auto* finv_cmd = app.add_subcommand("f-inverse", "formal anti-derivative sum a_n/n q^n");
    CommonState finv_st;
    attach_common(finv_cmd, finv_st);
    std::string finv_file;
    finv_cmd->add_option("--newform", finv_file, "newform JSON file")->required();
    finv_cmd->callback([&] {
        auto r = resolve(finv_st, 20);
        auto nf = newform_from_file(finv_file);
        ojson out;
        out["op"] = "f-inverse";
        out["ctx"] = ctx_to_json(*r.ctx);
        out["newform"] = newform_to_json(nf);
        out["series"] = series_to_json(f_inverse(nf, r.q_prec, r.ctx));
        emit(out);
    });

    // ---- ap ----
    auto* ap_cmd = app.add_subcommand("ap", "trace of Frobenius by point counting");
    std::string ap_curve, ap_curve_file;
    long ap_ell = 2;
    ap_cmd->add_option("--curve", ap_curve, "curve JSON (default 11a1)");
    ap_cmd->add_option("--curve-file", ap_curve_file, "curve JSON file");
    ap_cmd->add_option("--ell", ap_ell, "prime of good reduction");
    ap_cmd->callback([&] {
        const WeierstrassCurve E = curve_from_opts(ap_curve, ap_curve_file);
        ojson out;
        out["op"] = "ap";
        out["curve"] = curve_to_json(E);
        out["ell"] = ap_ell;
        out["ap"] = ap_point_count(E, ap_ell);
        emit(out);
    });

    // ---- hensel-root ----
    auto* hensel_cmd = app.add_subcommand("hensel-root", "Hensel lift of a simple residue root");
    CommonState hensel_st;
    attach_common(hensel_cmd, hensel_st);
    std::string hensel_poly, hensel_tau0 = "1";
    int hensel_target = 6;
    bool hensel_eis = false;
    hensel_cmd->add_option("--poly", hensel_poly, "coefficients [c0,...,1] as JSON");
    hensel_cmd->add_option("--tau0", hensel_tau0, "residue seed");
    hensel_cmd->add_option("--target", hensel_target, "target pi-adic precision of the root");
    hensel_cmd->add_flag("--eisenstein-root", hensel_eis,
                         "lift the (p-1)-st root of E_{p-1} over Z_p[[q]]");
    hensel_cmd->callback([&] {
        auto r = resolve(hensel_st, 20);
        ojson out;
        out["op"] = "hensel-root";
        out["ctx"] = ctx_to_json(*r.ctx);
        if (hensel_eis) {
            auto e = eisenstein_qexp(r.ctx->p(), r.q_prec, r.ctx);
            auto one = JetSeries::constant(PadicNum::from_int(r.ctx, 1), r.q_prec, r.delta_deg);
            std::vector<JetSeries> poly(static_cast<size_t>(r.ctx->p()), JetSeries::zero(r.ctx, r.q_prec, r.delta_deg));
            poly[0] = -e;
            poly[static_cast<size_t>(r.ctx->p() - 1)] = one;
            out["series"] = series_to_json(hensel_lift_root(poly, one, hensel_target));
        } else {
            if (hensel_poly.empty()) throw Usage("cli", "--poly required without --eisenstein-root");
            ojson arr = ojson::parse(hensel_poly);
            std::vector<PadicNum> poly;
            for (const auto& v : arr)
                poly.push_back(padic_from_string(
                    r.ctx, v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>())));
            out["result"] = padic_to_json(
                hensel_lift_root(poly, padic_from_string(r.ctx, hensel_tau0), hensel_target));
        }
        emit(out);
    });

    // ---- sharp ----
    auto* sharp_cmd = app.add_subcommand("sharp", "assemble a delta-Fourier sharp expansion");
    CommonState sharp_st;
    attach_common(sharp_cmd, sharp_st);
    std::string sharp_file, sharp_poly = "preset";
    long sharp_kappa_bar = 0, sharp_realized = 0;
    sharp_cmd->add_option("--newform", sharp_file, "newform JSON file")->required();
    sharp_cmd->add_option("--phi-poly", sharp_poly, "\"preset\" or comma rationals c0,c1,c2");
    sharp_cmd->add_option("--kappa-bar", sharp_kappa_bar, "weight of the underlying mod-p form");
    sharp_cmd->add_option("--realized-kp", sharp_realized, "realized conjugate weight kappa'");
    sharp_cmd->callback([&] {
        auto r = resolve(sharp_st, 50);
        auto nf = newform_from_file(sharp_file);
        SharpSpec spec;
        SharpTerm term;
        term.P = phi_poly_from_spec(sharp_poly, nf, r.ctx);
        term.form = std::move(nf);
        spec.terms.push_back(std::move(term));
        if (sharp_kappa_bar > 0) spec.kappa_bar = sharp_kappa_bar;
        if (sharp_realized > 0) spec.realized_kappa_prime = sharp_realized;
        auto res = assemble_sharp(spec, r.q_prec, r.ctx);
        ojson out;
        out["op"] = "sharp";
        out["ctx"] = ctx_to_json(*r.ctx);
        out["phi_poly"] = spec.terms[0].P.to_string();
        out["series"] = series_to_json(res.series);
        ojson meta;
        meta["conjugates"] = ojson::array();
        for (long k : res.meta.conjugate_set) meta["conjugates"].push_back(k);
        if (res.meta.realized_kappa_prime)
            meta["realized_kappa_prime"] = *res.meta.realized_kappa_prime;
        else
            meta["realized_kappa_prime"] = nullptr;
        meta["order"] = res.meta.order;
        meta["nu"] = res.meta.nu;
        if (res.meta.nonzero)
            meta["nonzero"] = *res.meta.nonzero;
        else
            meta["nonzero"] = nullptr;
        out["metadata"] = meta;
        emit(out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 64;
    } catch (const Error& err) {
        ojson j;
        j["code"] = err.code();
        j["module"] = err.module();
        j["message"] = err.what();
        std::cout << j.dump() << "\n";
        return err.code() == "Usage" ? 64 : 2;
    }

    if (show_registry) {
        ojson j;
        j["ops"] = ojson::array();
        for (const auto& [op, sub] : kOpRegistry) {
            ojson e;
            e["op"] = op;
            e["subcommand"] = sub;
            j["ops"].push_back(e);
        }
        j["subcommands"] = ojson::array();
        for (const auto* sc : app.get_subcommands(std::function<bool(CLI::App*)>{}))
            j["subcommands"].push_back(sc->get_name());
        emit(j);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << "\n";
        return 64;
    }
    return 0;
}
