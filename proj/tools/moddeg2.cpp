#include "moddeg2/arith.hpp"
#include "moddeg2/classify.hpp"
#include "moddeg2/curve.hpp"
#include "moddeg2/hecke2.hpp"
#include "moddeg2/ingest.hpp"
#include "moddeg2/modsym.hpp"
#include "moddeg2/report.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

using json = nlohmann::ordered_json;
using namespace moddeg2;

namespace {

curve::WeierstrassCurve curve_from_string(const std::string& s) {
    auto a = ingest::parse_ainvs(s);
    if (!a) throw CLI::ValidationError("--curve", "expected [a1,a2,a3,a4,a6]");
    return curve::derive_invariants(*a);
}

int run_classify(const std::string& curve_str, std::uint64_t conductor) {
    auto E = curve_from_string(curve_str);
    auto cond = arith::factor(conductor);
    auto v = classify::theorem_one_filter(E, cond);
    json j;
    j["curve"] = curve_str;
    j["conductor"] = conductor;
    j["parity"] = classify::parity_name(v.parity);
    j["rule"] = classify::rule_name(v.rule);
    j["rule_violated"] = v.rule_violated;
    j["citations"] = v.citations;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_hecke(std::int64_t N, bool dump) {
    if (!arith::is_prime(static_cast<std::uint64_t>(N))) {
        std::cerr << "hecke: level must be prime\n";
        return 2;
    }
    auto space = modsym::build_space(N);
    auto lattice = hecke2::hecke_lattice(space);
    auto factors = hecke2::decompose_mod2(lattice);
    json j;
    j["level"] = N;
    j["genus"] = space.genus();
    j["rank"] = lattice.rank;
    j["sturm"] = lattice.sturm;
    j["factors"] = json::array();
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        json fj;
        fj["index"] = i;
        fj["d_m"] = f.d_m;
        fj["residue_degree"] = f.residue_degree;
        fj["eisenstein"] = f.eisenstein;
        fj["tm_equals_z2"] = hecke2::tm_equals_z2(f);
        json eig = json::object();
        for (auto& [ell, val] : f.prime_images) {
            if (ell > 30) break;
            eig[std::to_string(ell)] = val.in_f2 ? std::string(val.f2_value ? "1" : "0")
                                                 : val.minpoly.to_string();
        }
        fj["eigensystem"] = eig;
        j["factors"].push_back(fj);
    }
    std::cout << j.dump(2) << "\n";
    if (dump) std::cout << hecke2::dump_structure(lattice);
    return 0;
}

int run_parity(std::int64_t N, const std::string& curve_str) {
    auto E = curve_from_string(curve_str);
    auto pc = classify::predict_parity_prime_level(E, N);
    json j;
    j["level"] = N;
    j["curve"] = curve_str;
    j["parity"] = classify::parity_name(pc.verdict.parity);
    j["rule"] = classify::rule_name(pc.verdict.rule);
    j["d_m"] = pc.d_m;
    j["residue_degree"] = pc.residue_degree;
    j["eisenstein"] = pc.eisenstein;
    j["citations"] = pc.verdict.citations;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_merel(std::int64_t maxn) {
    std::cout << "N\tu\tv\tcriterion\teisenstein_dm_ge2\tagreement\n";
    int anomalies = 0;
    for (std::int64_t N = 17; N <= maxn; ++N) {
        if (N % 8 != 1 || !arith::is_prime(static_cast<std::uint64_t>(N))) continue;
        auto rep = arith::represent_u2_plus_16v2(static_cast<std::uint64_t>(N));
        bool crit = arith::merel_criterion(static_cast<std::uint64_t>(N));
        auto space = modsym::build_space(N);
        auto lattice = hecke2::hecke_lattice(space);
        auto factors = hecke2::decompose_mod2(lattice);
        std::optional<bool> dm2;
        for (auto& f : factors)
            if (f.eisenstein) dm2 = f.d_m >= 2;
        std::cout << N << "\t" << rep.u << "\t" << rep.v << "\t" << (crit ? 1 : 0) << "\t";
        if (dm2) {
            bool agree = *dm2 == crit;
            if (!agree) ++anomalies;
            std::cout << (*dm2 ? 1 : 0) << "\t" << (agree ? 1 : 0) << "\n";
        } else {
            std::cout << "-\t-\n";
            ++anomalies;
        }
    }
    return anomalies ? 1 : 0;
}

int run_audit(const std::string& allcurves_path, const std::string& degphi_path,
              std::int64_t max_level, const std::string& format, bool slow, int threads) {
    std::ifstream ac(allcurves_path);
    if (!ac) {
        std::cerr << "audit: cannot open " << allcurves_path << "\n";
        return 2;
    }
    auto curves = ingest::parse_allcurves(ac);
    std::ifstream dp(degphi_path);
    if (!dp) {
        std::cerr << "audit: cannot open " << degphi_path << "\n";
        return 2;
    }
    auto degrees = ingest::parse_degphi(dp);
    for (auto& d : curves.diagnostics)
        std::cerr << "allcurves:" << d.line << ": " << d.message << "\n";
    for (auto& d : degrees.diagnostics)
        std::cerr << "degphi:" << d.line << ": " << d.message << "\n";
    for (auto& w : degrees.warnings) std::cerr << "degphi: " << w << "\n";

    report::AuditOptions opt;
    opt.max_level = max_level;
    opt.slow = slow;
    opt.threads = threads;
    auto R = report::audit(curves.records, degrees.degrees, opt);
    if (format == "tsv")
        std::cout << report::to_tsv(R);
    else
        std::cout << report::to_json(R);
    return R.anomalies() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"parity of elliptic-curve modular degrees via mod-2 Hecke algebras"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for batch computations");

    std::string curve_str;
    std::uint64_t conductor = 0;
    auto* sc_classify = app.add_subcommand("classify", "necessary-condition verdict for one curve");
    sc_classify->add_option("--curve", curve_str, "[a1,a2,a3,a4,a6]")->required();
    sc_classify->add_option("--conductor", conductor, "conductor N")->required();

    std::int64_t level = 0;
    bool dump_structure = false;
    auto* sc_hecke = app.add_subcommand("hecke", "mod-2 local factor table at a prime level");
    sc_hecke->add_option("--level", level, "prime level N")->required();
    sc_hecke->add_flag("--dump-structure", dump_structure, "dump T/2T structure constants");

    std::int64_t parity_level = 0;
    std::string parity_curve;
    auto* sc_parity = app.add_subcommand("parity", "modular degree parity via the T_m = Z_2 test");
    sc_parity->add_option("--level", parity_level, "prime level N")->required();
    sc_parity->add_option("--curve", parity_curve, "[a1,a2,a3,a4,a6]")->required();

    std::int64_t merel_max = 1000;
    auto* sc_merel = app.add_subcommand("merel", "Merel criterion table over primes ≡ 1 mod 8");
    sc_merel->add_option("--max", merel_max, "upper bound for N");

    std::string allcurves_path, degphi_path, format = "json";
    std::int64_t max_level = 1000;
    bool slow = false;
    auto* sc_audit = app.add_subcommand("audit", "full dataset audit");
    sc_audit->add_option("--allcurves", allcurves_path, "allcurves file")->required();
    sc_audit->add_option("--degphi", degphi_path, "degphi file")->required();
    sc_audit->add_option("--max-level", max_level, "cap for modular-symbol computations");
    sc_audit->add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    sc_audit->add_flag("--slow", slow, "allow very large prime levels in the parity oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc_classify->parsed()) return run_classify(curve_str, conductor);
        if (sc_hecke->parsed()) return run_hecke(level, dump_structure);
        if (sc_parity->parsed()) return run_parity(parity_level, parity_curve);
        if (sc_merel->parsed()) return run_merel(merel_max);
        if (sc_audit->parsed())
            return run_audit(allcurves_path, degphi_path, max_level, format, slow, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
