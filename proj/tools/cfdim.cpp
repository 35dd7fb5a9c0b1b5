// Command-line front door: every computation as a reproducible batch command
// with JSON or CSV output. Identical command + config + seed gives
// byte-identical output; the thread count never changes any number.

#include "cfdim/cantor.hpp"
#include "cfdim/classify.hpp"
#include "cfdim/cover.hpp"
#include "cfdim/growth.hpp"
#include "cfdim/pressure.hpp"
#include "cfdim/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct RunConfig {
    int M = 128;
    int K = 32;
    double tol = 1e-10;
    double iter_tol = 1e-12;
    std::uint64_t seed = 0;
    int threads = 1;
    std::uint64_t budget = 10'000'000;
    long long horizon = 64;

    cfdim::SpectralConfig spectral() const {
        cfdim::SpectralConfig sc;
        sc.alphabet_max = M;
        sc.nodes = K;
        sc.iter_tol = iter_tol;
        return sc;
    }
    cfdim::ClassifyConfig classify() const {
        cfdim::ClassifyConfig cc;
        cc.spectral = spectral();
        cc.root_tol = tol;
        cc.horizon = horizon;
        return cc;
    }
    cfdim::VerifyConfig verify() const {
        cfdim::VerifyConfig vc;
        vc.classify = classify();
        vc.threads = threads;
        vc.budget = std::min<std::uint64_t>(budget, 2'000'000);
        vc.seed = seed;
        return vc;
    }
    json to_json() const {
        json j;
        j["M"] = M;
        j["K"] = K;
        j["tol"] = tol;
        j["iter_tol"] = iter_tol;
        j["seed"] = seed;
        j["threads"] = threads;
        j["budget"] = budget;
        j["horizon"] = horizon;
        return j;
    }
};

void emit(const RunConfig& cfg, json result) {
    json out;
    out["schema_version"] = 1;
    out["config"] = cfg.to_json();
    out["result"] = std::move(result);
    std::cout << out.dump(2) << "\n";
}

int emit_error(const RunConfig& cfg, const std::string& type, const std::string& message, int code) {
    json out;
    out["schema_version"] = 1;
    out["config"] = cfg.to_json();
    out["error"] = {{"type", type}, {"message", message}};
    std::cout << out.dump(2) << "\n";
    return code;
}

json dim_result(const char* kind, json params, const cfdim::Potential& pot, const RunConfig& cfg) {
    auto cc = cfg.classify();
    auto est = cfdim::estimate_dim(pot, cc);

    // cheap independent consistency probe: spectral pressure vs enumeration
    // ratio at the root, small alphabet
    const int m_probe = std::min(3, cfg.M);
    cfdim::SpectralConfig sc = cfg.spectral();
    sc.alphabet_max = m_probe;
    const double grid[1] = {est.value};
    auto q10 = cfdim::log_qsum_grid(10, m_probe, grid, cfg.threads, cfg.budget);
    auto q11 = cfdim::log_qsum_grid(11, m_probe, grid, cfg.threads, cfg.budget);
    const double ratio = pot.alpha(est.value) + (q11[0] - q10[0]);
    const double agreement = std::abs(cfdim::spectral_eigenvalue(pot, est.value, sc) - ratio);

    std::vector<std::pair<int, double>> lad = est.ladder;
    double extrapolated = est.value;
    double err = est.error;
    if (lad.size() >= 3) {
        auto ex = cfdim::extrapolate_alphabet(lad);
        extrapolated = ex.value;
        err = ex.error;
    }
    json j;
    j["kind"] = kind;
    j["params"] = std::move(params);
    j["value"] = est.value;
    j["extrapolated"] = extrapolated;
    json ladder = json::array();
    for (auto& [m, v] : lad) ladder.push_back({m, v});
    j["M_ladder"] = ladder;
    j["error_estimate"] = err;
    j["method_agreement"] = agreement;
    return j;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stoi(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"continued-fraction dimension laboratory"};
    app.fallthrough(); // global options may follow a subcommand
    app.require_subcommand(1);
    app.add_option("--M", cfg.M, "alphabet cutoff (default 128)");
    app.add_option("--K", cfg.K, "collocation nodes (default 32)");
    app.add_option("--tol", cfg.tol, "root bisection tolerance (default 1e-10)");
    app.add_option("--iter-tol", cfg.iter_tol, "eigenvalue iteration tolerance (default 1e-12)");
    app.add_option("--seed", cfg.seed, "random seed (default 0)");
    app.add_option("--threads", cfg.threads, "worker threads; never changes numbers (default 1)");
    app.add_option("--budget", cfg.budget, "enumeration budget in words (default 1e7)");
    app.add_option("--horizon", cfg.horizon, "finite test horizon (default 64)");

    // ----- dim -----
    auto* dim = app.add_subcommand("dim", "dimensional numbers s_B, s_0, g_{B1,B2}");
    dim->require_subcommand(1);
    double dB = 0, dB1 = 0, dB2 = 0;
    auto* dim_sb = dim->add_subcommand("sB", "root of the single-rate pressure equation");
    dim_sb->add_option("--B", dB, "rate B > 1")->required();
    auto* dim_s0 = dim->add_subcommand("s0", "root of the squared-exponent pressure equation");
    dim_s0->add_option("--B", dB, "rate B > 1")->required();
    auto* dim_g = dim->add_subcommand("g", "root of the two-rate pressure equation");
    dim_g->add_option("--B1", dB1, "rate B1 > 1")->required();
    dim_g->add_option("--B2", dB2, "rate B2 > 1")->required();

    // ----- classify -----
    auto* cls = app.add_subcommand("classify", "piecewise dimension classification");
    cls->require_subcommand(1);
    std::string phi_text, phi1_text, phi2_text;
    double fB1 = 0, fB2 = 0, eA1 = 0, eA2 = 0, ec1 = 1, ec2 = 1;
    auto* cls_e1 = cls->add_subcommand("e1", "single quotient a_n >= Phi(n) infinitely often");
    cls_e1->add_option("--phi", phi_text)->required();
    auto* cls_e2 = cls->add_subcommand("e2", "product a_n a_{n+1} >= Phi(n) infinitely often");
    cls_e2->add_option("--phi", phi_text)->required();
    auto* cls_f = cls->add_subcommand("f", "product grows, single quotient stays below Phi");
    cls_f->add_option("--phi", phi_text)->required();
    auto* cls_f2 = cls->add_subcommand("f2", "product vs single quotient with two rates");
    cls_f2->add_option("--phi1", phi1_text)->required();
    cls_f2->add_option("--phi2", phi2_text)->required();
    auto* cls_fbb = cls->add_subcommand("fbb", "exponential-rate special case");
    cls_fbb->add_option("--B1", fB1)->required();
    cls_fbb->add_option("--B2", fB2)->required();
    auto* cls_ea = cls->add_subcommand("ea", "two geometric digit windows");
    cls_ea->add_option("--A1", eA1)->required();
    cls_ea->add_option("--A2", eA2)->required();
    cls_ea->add_option("--c1", ec1);
    cls_ea->add_option("--c2", ec2);

    // ----- verify -----
    auto* ver = app.add_subcommand("verify", "run a named invariant suite");
    std::string suite;
    ver->add_option("suite", suite, "props | pressure | cantor | cover")->required();

    // ----- table -----
    auto* tab = app.add_subcommand("table", "pressure convergence table (CSV)");
    std::string t_kind = "sB", t_mlist = "2,3", t_nlist = "8,10,12";
    double t_s = 0.6, tB = 2, tB1 = 0, tB2 = 0;
    tab->add_option("--kind", t_kind, "sB | s0 | g");
    tab->add_option("--B", tB);
    tab->add_option("--B1", tB1);
    tab->add_option("--B2", tB2);
    tab->add_option("--s", t_s)->required();
    tab->add_option("--M-list", t_mlist, "comma separated alphabets");
    tab->add_option("--n-list", t_nlist, "comma separated depths for the ratio method");

    // ----- cantor -----
    auto* can = app.add_subcommand("cantor", "sparse construction schemes");
    can->require_subcommand(1);
    cfdim::CantorParams cp;
    long long smp_count = 10, smp_depth = 8;
    auto add_scheme_opts = [&](CLI::App* sub) {
        sub->add_option("--A1", cp.A1)->required();
        sub->add_option("--A2", cp.A2)->required();
        sub->add_option("--M", cp.M)->required();
        sub->add_option("--N", cp.N)->required();
        sub->add_option("--eps", cp.eps)->required();
        sub->add_option("--c1", cp.c1);
        sub->add_option("--c2", cp.c2);
        sub->add_option("--levels", cp.levels);
        sub->add_option("--offset", cp.spacing_offset, "spacing offset 1 or 2");
        sub->add_flag("--strict", cp.strict, "paper constants, symbolic only");
    };
    auto* can_scheme = can->add_subcommand("scheme", "build and dump a scheme (JSON)");
    add_scheme_opts(can_scheme);
    auto* can_sample = can->add_subcommand("sample", "seeded member samples (CSV)");
    add_scheme_opts(can_sample);
    can_sample->add_option("--count", smp_count);
    can_sample->add_option("--depth", smp_depth);

    // ----- cover -----
    auto* cov = app.add_subcommand("cover", "covering-sum root over basic cylinders");
    double cov_predicted = -1;
    long long cov_depth = 0;
    bool cov_csv = false;
    add_scheme_opts(cov);
    cov->add_option("--depth", cov_depth, "0 = deepest within budget");
    cov->add_option("--predicted", cov_predicted, "reference dimension; default min{s,g} from the solver");
    cov->add_flag("--csv", cov_csv, "emit a depth,root,sum table instead of JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        (void)emit_error(cfg, "parse", e.what(), 2);
        return 2;
    }

    try {
        if (dim->parsed()) {
            if (dim_sb->parsed()) emit(cfg, dim_result("sB", json{{"B", dB}}, cfdim::Potential::sb(dB), cfg));
            if (dim_s0->parsed()) emit(cfg, dim_result("s0", json{{"B", dB}}, cfdim::Potential::s0(dB), cfg));
            if (dim_g->parsed())
                emit(cfg, dim_result("g", json{{"B1", dB1}, {"B2", dB2}}, cfdim::Potential::g(dB1, dB2), cfg));
            return 0;
        }
        if (cls->parsed()) {
            auto cc = cfg.classify();
            cfdim::Verdict v;
            if (cls_e1->parsed()) v = cfdim::classify_e1(cfdim::parse_growth(phi_text), cc);
            if (cls_e2->parsed()) v = cfdim::classify_e2(cfdim::parse_growth(phi_text), cc);
            if (cls_f->parsed()) v = cfdim::classify_f(cfdim::parse_growth(phi_text), cc);
            if (cls_f2->parsed())
                v = cfdim::classify_f2(cfdim::parse_growth(phi1_text), cfdim::parse_growth(phi2_text), cc);
            if (cls_fbb->parsed()) v = cfdim::classify_fbb(fB1, fB2, cc);
            if (cls_ea->parsed()) v = cfdim::dim_ea(eA1, eA2, cc);
            emit(cfg, cfdim::verdict_json(v));
            return 0;
        }
        if (ver->parsed()) {
            auto rep = cfdim::run_verify_suite(suite, cfg.verify());
            std::cout << rep.text();
            return rep.ok() ? 0 : 1;
        }
        if (tab->parsed()) {
            cfdim::Potential pot = t_kind == "sB"  ? cfdim::Potential::sb(tB)
                                   : t_kind == "s0" ? cfdim::Potential::s0(tB)
                                                    : cfdim::Potential::g(tB1, tB2);
            std::vector<cfdim::PressureRow> rows;
            for (int m : parse_int_list(t_mlist)) {
                cfdim::SpectralConfig sc = cfg.spectral();
                sc.alphabet_max = m;
                rows.push_back({m, cfg.K, 0, t_s, cfdim::spectral_eigenvalue(pot, t_s, sc), "spectral"});
                for (int n : parse_int_list(t_nlist)) {
                    const double grid[1] = {t_s};
                    auto qa = cfdim::log_qsum_grid(n - 1, m, grid, cfg.threads, cfg.budget);
                    auto qb = cfdim::log_qsum_grid(n, m, grid, cfg.threads, cfg.budget);
                    rows.push_back({m, 0, n, t_s, pot.alpha(t_s) + qb[0] - qa[0], "ratio"});
                }
            }
            std::cout << cfdim::pressure_csv(rows);
            return 0;
        }
        if (can->parsed()) {
            auto sch = cfdim::build_scheme(cp, cfg.spectral());
            if (can_scheme->parsed()) {
                emit(cfg, cfdim::scheme_json(sch));
                return 0;
            }
            // samples as CSV
            std::cout << "numerator,denominator,depth,word\n";
            for (long long i = 0; i < smp_count; ++i) {
                auto sp = cfdim::sample_point(sch, cfg.seed + static_cast<std::uint64_t>(i), smp_depth);
                std::string word;
                for (std::size_t k = 0; k < sp.word.size(); ++k) {
                    if (k) word += '-';
                    word += std::to_string(sp.word[k]);
                }
                std::cout << boost::multiprecision::numerator(sp.x).str() << ","
                          << boost::multiprecision::denominator(sp.x).str() << "," << smp_depth << "," << word
                          << "\n";
            }
            return 0;
        }
        if (cov->parsed()) {
            auto sch = cfdim::build_scheme(cp, cfg.spectral());
            double predicted = cov_predicted;
            if (predicted < 0) {
                auto v = cfdim::dim_ea(cp.A1, cp.A2, cfg.classify());
                predicted = *v.value;
            }
            const std::uint64_t budget = std::min<std::uint64_t>(cfg.budget, 4'000'000);
            const long long deepest = cfdim::deepest_enumerable_depth(sch, budget);
            if (cov_csv) {
                std::vector<cfdim::CoverReport> rows;
                for (long long d = 1; d <= deepest; ++d)
                    rows.push_back(cfdim::covering_root(sch, d, predicted, budget, cfg.threads));
                std::cout << cfdim::cover_csv(rows);
            } else {
                const long long d = cov_depth > 0 ? cov_depth : deepest;
                emit(cfg, cfdim::cover_report_json(cfdim::covering_root(sch, d, predicted, budget, cfg.threads)));
            }
            return 0;
        }
    } catch (const cfdim::LimitMissingError& e) {
        return emit_error(cfg, "limit_missing", e.what(), 4);
    } catch (const cfdim::ParseError& e) {
        return emit_error(cfg, "parse", e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return emit_error(cfg, "parse", e.what(), 2);
    } catch (const std::exception& e) {
        return emit_error(cfg, "solver", e.what(), 3);
    }
    return 0;
}
