#include "moddeg2/report.hpp"
#include "moddeg2/arith.hpp"
#include "moddeg2/curve.hpp"
#include "moddeg2/hecke2.hpp"
#include "moddeg2/modsym.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace moddeg2::report {

namespace {

struct LevelResult {
    // per record index at this level
    std::map<std::size_t, classify::ParityComputation> parity;
    std::map<std::size_t, bool> rank_even;
    std::map<std::size_t, std::string> errors;
    std::optional<bool> eisenstein_dm_ge2; // when the level has an Eisenstein factor
    int eisenstein_count = 0;
    bool computed = false;
    std::string level_error;
};

struct LevelTask {
    std::int64_t N;
    bool want_parity = false;
    bool want_rank = false;
    bool want_merel = false;
    std::vector<std::size_t> parity_records;
    std::vector<std::size_t> rank_records;
};

} // namespace

AuditReport audit(const std::vector<ingest::CurveRecord>& records,
                  const std::map<std::string, std::uint64_t>& degrees, const AuditOptions& opt) {
    AuditReport R;
    const std::int64_t merel_max = opt.merel_max > 0 ? opt.merel_max : std::min<std::int64_t>(1000, opt.max_level);
    const std::int64_t rank_max = std::min<std::int64_t>(500, opt.max_level);

    // precompute per-record data
    struct Prep {
        bool valid = false;
        curve::WeierstrassCurve E;
        arith::Factorization cond;
        bool prime = false;
        bool two_torsion = false;
        std::optional<std::uint64_t> degree;
        std::string error;
    };
    std::vector<Prep> prep(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        Prep& p = prep[i];
        try {
            p.E = curve::derive_invariants(r.a_invariants);
            p.cond = arith::factor(r.conductor);
            p.prime = r.conductor > 1 && p.cond.factors.size() == 1 && p.cond.factors[0].second == 1;
            p.two_torsion = curve::two_torsion_info(p.E).has_rational_root;
            auto it = degrees.find(r.label());
            if (it != degrees.end()) p.degree = it->second;
            p.valid = true;
        } catch (const std::exception& e) {
            p.error = e.what();
        }
    }

    // assemble level tasks
    std::map<std::int64_t, LevelTask> tasks;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!prep[i].valid || !prep[i].prime) continue;
        const std::int64_t N = static_cast<std::int64_t>(records[i].conductor);
        const bool parity_wanted = records[i].curve_number == 1 && prep[i].degree &&
                                   (N <= opt.max_level || (opt.slow && N <= 30000));
        const bool rank_wanted = N <= rank_max;
        if (!parity_wanted && !rank_wanted) continue;
        auto& t = tasks[N];
        t.N = N;
        if (parity_wanted) {
            t.want_parity = true;
            t.parity_records.push_back(i);
        }
        if (rank_wanted) {
            t.want_rank = true;
            t.rank_records.push_back(i);
        }
    }
    for (std::int64_t N = 17; N <= merel_max; ++N) {
        if (N % 8 != 1 || !arith::is_prime(static_cast<std::uint64_t>(N))) continue;
        auto& t = tasks[N];
        t.N = N;
        t.want_merel = true;
    }

    // run level computations (deterministic merge: results keyed by level)
    std::map<std::int64_t, LevelResult> results;
    {
        std::vector<std::int64_t> levels;
        for (auto& [N, t] : tasks) levels.push_back(N);
        std::mutex queue_mutex, result_mutex;
        std::size_t next = 0;
        auto worker = [&]() {
            for (;;) {
                std::int64_t N;
                {
                    std::lock_guard<std::mutex> lock(queue_mutex);
                    if (next >= levels.size()) return;
                    N = levels[next++];
                }
                const LevelTask& task = tasks[N];
                LevelResult res;
                try {
                    auto space = modsym::build_space(N);
                    auto lattice = hecke2::hecke_lattice(space);
                    auto factors = hecke2::decompose_mod2(lattice);
                    for (const auto& f : factors)
                        if (f.eisenstein) {
                            ++res.eisenstein_count;
                            res.eisenstein_dm_ge2 = f.d_m >= 2;
                        }
                    for (std::size_t i : task.parity_records) {
                        try {
                            res.parity[i] =
                                classify::predict_parity_prime_level(prep[i].E, N, lattice, factors);
                        } catch (const std::exception& e) {
                            res.errors[i] = e.what();
                        }
                    }
                    for (std::size_t i : task.rank_records) {
                        try {
                            const auto& E = prep[i].E;
                            auto line = modsym::locate_eigenform(space, [&](std::int64_t ell) {
                                return curve::ap_point_count(E, static_cast<std::uint64_t>(ell));
                            });
                            res.rank_even[i] =
                                modsym::analytic_rank_parity(space, line) == modsym::RankParity::Even;
                        } catch (const std::exception& e) {
                            res.errors[i] = e.what();
                        }
                    }
                    res.computed = true;
                } catch (const std::exception& e) {
                    res.level_error = e.what();
                }
                std::lock_guard<std::mutex> lock(result_mutex);
                results[N] = std::move(res);
            }
        };
        int nthreads = std::max(1, opt.threads);
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
    }

    // per-record rows
    std::vector<classify::RowView> views;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        ReportRow row;
        row.label = rec.label();
        row.conductor = rec.conductor;
        if (!prep[i].valid) {
            row.notes = "invalid record: " + prep[i].error;
            row.verdict.citations = {classify::cite::outside};
            R.summary.anomalies.push_back("record " + row.label + ": " + prep[i].error);
            R.rows.push_back(std::move(row));
            continue;
        }
        try {
            row.verdict = classify::theorem_one_filter(prep[i].E, prep[i].cond);
        } catch (const std::exception& e) {
            row.notes = e.what();
            row.verdict.citations = {classify::cite::outside};
            R.summary.anomalies.push_back("record " + row.label + ": " + e.what());
        }
        if (prep[i].degree) {
            row.degree_odd = (*prep[i].degree % 2) == 1;
            if (row.verdict.parity == classify::Parity::Even && *row.degree_odd)
                R.summary.anomalies.push_back("record " + row.label +
                                              ": necessary-condition verdict even but recorded degree odd");
        }
        auto it = results.find(static_cast<std::int64_t>(rec.conductor));
        if (it != results.end()) {
            auto pit = it->second.parity.find(i);
            if (pit != it->second.parity.end()) {
                row.predicted_odd = pit->second.verdict.parity == classify::Parity::Odd;
                for (auto& c : pit->second.verdict.citations) row.verdict.citations.push_back(c);
                if (row.degree_odd) {
                    row.agreement = (*row.predicted_odd == *row.degree_odd);
                    ++R.summary.parity_checked;
                    if (*row.agreement)
                        ++R.summary.parity_agreements;
                    else
                        R.summary.anomalies.push_back("record " + row.label +
                                                      ": parity prediction disagrees with recorded degree");
                }
            }
            auto rit = it->second.rank_even.find(i);
            if (rit != it->second.rank_even.end()) {
                row.rank_even_computed = rit->second;
                row.rank_parity_source = "modular-symbols";
                ++R.summary.rank_checked;
                if (*row.rank_even_computed == (rec.rank % 2 == 0))
                    ++R.summary.rank_agreements;
                else
                    R.summary.anomalies.push_back("record " + row.label +
                                                  ": W_N rank parity disagrees with dataset rank");
            }
            auto eit = it->second.errors.find(i);
            if (eit != it->second.errors.end()) {
                row.notes = eit->second;
                R.summary.anomalies.push_back("record " + row.label + ": " + eit->second);
            }
        }
        if (row.rank_parity_source.empty()) row.rank_parity_source = "dataset";

        // audits over rows
        classify::RowView view;
        view.label = row.label;
        view.conductor = rec.conductor;
        view.conductor_prime = prep[i].prime;
        view.has_two_torsion = prep[i].two_torsion;
        view.degree_known = prep[i].degree.has_value();
        view.degree_odd = prep[i].degree && (*prep[i].degree % 2 == 1);
        view.rank_even = rec.rank % 2 == 0;
        view.odd_prime_divisors = prep[i].cond.num_odd_primes();
        view.prime_divisors = prep[i].cond.num_primes();
        if (rec.conductor <= static_cast<std::uint64_t>(opt.watkins_max)) views.push_back(view);

        if (prep[i].degree && *prep[i].degree % 2 == 1 &&
            rec.conductor <= static_cast<std::uint64_t>(opt.watkins_max)) {
            CompositeAuditRow ca;
            ca.label = row.label;
            ca.conductor = rec.conductor;
            ca.checklist =
                classify::composite_conditions(prep[i].cond, prep[i].two_torsion, rec.rank % 2 == 0);
            ca.pass = ca.checklist.all_pass();
            ++R.summary.composite_checked;
            if (!ca.pass) {
                ++R.summary.composite_violations;
                R.summary.anomalies.push_back("record " + row.label +
                                              ": odd-degree row violates a composite condition");
            }
            R.composite.push_back(std::move(ca));
        }
        R.rows.push_back(std::move(row));
    }
    R.summary.rows = static_cast<int>(R.rows.size());

    // Watkins audit
    R.watkins = classify::watkins_verdict(views);
    R.summary.watkins_checked = static_cast<int>(R.watkins.checked.size());
    R.summary.watkins_violations = static_cast<int>(R.watkins.violations.size());
    for (auto& v : R.watkins.violations)
        R.summary.anomalies.push_back("record " + v.label + ": odd degree, prime conductor, no 2-torsion, N != 3 mod 8");

    // Merel table
    for (std::int64_t N = 17; N <= merel_max; ++N) {
        if (N % 8 != 1 || !arith::is_prime(static_cast<std::uint64_t>(N))) continue;
        MerelRow m;
        m.N = static_cast<std::uint64_t>(N);
        auto rep = arith::represent_u2_plus_16v2(m.N);
        m.u = rep.u;
        m.v = rep.v;
        m.criterion = arith::merel_criterion(m.N);
        auto it = results.find(N);
        if (it != results.end() && it->second.computed) {
            if (it->second.eisenstein_count != 1)
                R.summary.anomalies.push_back("level " + std::to_string(N) +
                                              ": expected exactly one Eisenstein mod-2 factor, found " +
                                              std::to_string(it->second.eisenstein_count));
            if (it->second.eisenstein_dm_ge2) {
                m.eisenstein_dm_ge2 = it->second.eisenstein_dm_ge2;
                m.agreement = (*m.eisenstein_dm_ge2 == m.criterion);
                ++R.summary.merel_checked;
                if (*m.agreement)
                    ++R.summary.merel_agreements;
                else
                    R.summary.anomalies.push_back("level " + std::to_string(N) +
                                                  ": Merel criterion disagrees with Eisenstein d_m");
            }
        } else if (it != results.end() && !it->second.level_error.empty()) {
            R.summary.anomalies.push_back("level " + std::to_string(N) + ": " + it->second.level_error);
        }
        R.merel.push_back(m);
    }
    // Eisenstein factors must not appear at computed prime levels N != 1 mod 8
    for (auto& [N, res] : results) {
        if (!res.computed || N % 8 == 1) continue;
        if (res.eisenstein_count != 0)
            R.summary.anomalies.push_back("level " + std::to_string(N) +
                                          ": unexpected Eisenstein mod-2 factor (N != 1 mod 8)");
    }

    // Neumann-Setzer parity over the fixture
    {
        std::map<std::uint64_t, std::pair<std::string, bool>> optimal_deg_parity;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (!prep[i].valid || !prep[i].prime || records[i].curve_number != 1 || !prep[i].degree)
                continue;
            optimal_deg_parity[records[i].conductor] = {records[i].label(), *prep[i].degree % 2 == 1};
        }
        for (auto& [N, ldocc] : optimal_deg_parity) {
            if (N > static_cast<std::uint64_t>(opt.watkins_max)) continue;
            auto ns = arith::neumann_setzer_test(N);
            if (!ns) continue;
            NeumannSetzerRow row;
            row.N = N;
            row.u = ns->u;
            row.predicted_odd = ns->odd_degree;
            row.actual_odd = ldocc.second;
            row.agreement = (row.predicted_odd == ldocc.second);
            ++R.summary.ns_checked;
            if (*row.agreement)
                ++R.summary.ns_agreements;
            else
                R.summary.anomalies.push_back("level " + std::to_string(N) +
                                              ": Neumann-Setzer parity disagrees with recorded degree");
            R.neumann_setzer.push_back(row);
        }
    }
    return R;
}

// --------------------------------------------------------------- emitters

namespace {
using json = nlohmann::ordered_json;

json row_json(const ReportRow& r) {
    json j;
    j["label"] = r.label;
    j["conductor"] = r.conductor;
    j["verdict"] = classify::parity_name(r.verdict.parity);
    j["rule"] = classify::rule_name(r.verdict.rule);
    j["rule_violated"] = r.verdict.rule_violated;
    j["citations"] = r.verdict.citations;
    if (r.degree_odd) j["degree_parity_actual"] = *r.degree_odd ? "odd" : "even";
    if (r.predicted_odd) j["predicted_parity"] = *r.predicted_odd ? "odd" : "even";
    if (r.agreement) j["agreement"] = *r.agreement;
    if (r.rank_even_computed) j["rank_parity_computed"] = *r.rank_even_computed ? "even" : "odd";
    j["rank_parity_source"] = r.rank_parity_source;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}
} // namespace

std::string to_json(const AuditReport& R) {
    json j;
    j["rows"] = json::array();
    for (auto& r : R.rows) j["rows"].push_back(row_json(r));
    j["watkins"] = {{"checked", R.summary.watkins_checked},
                    {"violations", json::array()}};
    for (auto& v : R.watkins.violations)
        j["watkins"]["violations"].push_back({{"label", v.label}, {"conductor", v.conductor}});
    j["composite"] = json::array();
    for (auto& c : R.composite)
        j["composite"].push_back({{"label", c.label},
                                  {"conductor", c.conductor},
                                  {"at_most_three_primes", c.checklist.at_most_three_primes},
                                  {"odd_n_at_most_two_primes", c.checklist.odd_n_at_most_two_primes},
                                  {"even_analytic_rank", c.checklist.even_analytic_rank},
                                  {"composite_implies_two_torsion", c.checklist.composite_implies_two_torsion},
                                  {"pass", c.pass}});
    j["merel"] = json::array();
    for (auto& m : R.merel) {
        json mj{{"N", m.N}, {"u", m.u}, {"v", m.v}, {"criterion", m.criterion}};
        if (m.eisenstein_dm_ge2) mj["eisenstein_dm_ge2"] = *m.eisenstein_dm_ge2;
        if (m.agreement) mj["agreement"] = *m.agreement;
        j["merel"].push_back(mj);
    }
    j["neumann_setzer"] = json::array();
    for (auto& n : R.neumann_setzer)
        j["neumann_setzer"].push_back({{"N", n.N},
                                       {"u", n.u},
                                       {"predicted", n.predicted_odd ? "odd" : "even"},
                                       {"actual", n.actual_odd && *n.actual_odd ? "odd" : "even"},
                                       {"agreement", n.agreement.value_or(false)}});
    j["summary"] = {{"rows", R.summary.rows},
                    {"parity_checked", R.summary.parity_checked},
                    {"parity_agreements", R.summary.parity_agreements},
                    {"rank_checked", R.summary.rank_checked},
                    {"rank_agreements", R.summary.rank_agreements},
                    {"watkins_checked", R.summary.watkins_checked},
                    {"watkins_violations", R.summary.watkins_violations},
                    {"composite_checked", R.summary.composite_checked},
                    {"composite_violations", R.summary.composite_violations},
                    {"merel_checked", R.summary.merel_checked},
                    {"merel_agreements", R.summary.merel_agreements},
                    {"neumann_setzer_checked", R.summary.ns_checked},
                    {"neumann_setzer_agreements", R.summary.ns_agreements},
                    {"anomalies", R.summary.anomalies}};
    return j.dump(2) + "\n";
}

std::string to_tsv(const AuditReport& R) {
    std::ostringstream os;
    // frozen column order; optional fields print "-"
    os << "label\tconductor\tverdict\trule\trule_violated\tcitations\tdegree_parity_actual\t"
          "predicted_parity\tagreement\trank_parity_source\tnotes\n";
    auto opt_parity = [](const std::optional<bool>& b) {
        return !b ? std::string("-") : (*b ? std::string("odd") : std::string("even"));
    };
    for (auto& r : R.rows) {
        std::string cites;
        for (std::size_t i = 0; i < r.verdict.citations.size(); ++i) {
            if (i) cites += ",";
            cites += r.verdict.citations[i];
        }
        os << r.label << "\t" << r.conductor << "\t" << classify::parity_name(r.verdict.parity) << "\t"
           << classify::rule_name(r.verdict.rule) << "\t" << (r.verdict.rule_violated ? "1" : "0") << "\t"
           << cites << "\t" << opt_parity(r.degree_odd) << "\t" << opt_parity(r.predicted_odd) << "\t"
           << (!r.agreement ? "-" : (*r.agreement ? "1" : "0")) << "\t" << r.rank_parity_source << "\t"
           << (r.notes.empty() ? "-" : r.notes) << "\n";
    }
    os << "# merel\tN\tu\tv\tcriterion\teisenstein_dm_ge2\tagreement\n";
    for (auto& m : R.merel)
        os << "# merel\t" << m.N << "\t" << m.u << "\t" << m.v << "\t" << (m.criterion ? 1 : 0) << "\t"
           << (!m.eisenstein_dm_ge2 ? "-" : (*m.eisenstein_dm_ge2 ? "1" : "0")) << "\t"
           << (!m.agreement ? "-" : (*m.agreement ? "1" : "0")) << "\n";
    os << "# summary\trows=" << R.summary.rows << "\tparity=" << R.summary.parity_agreements << "/"
       << R.summary.parity_checked << "\trank=" << R.summary.rank_agreements << "/"
       << R.summary.rank_checked << "\twatkins_violations=" << R.summary.watkins_violations
       << "\tcomposite_violations=" << R.summary.composite_violations
       << "\tmerel=" << R.summary.merel_agreements << "/" << R.summary.merel_checked
       << "\tns=" << R.summary.ns_agreements << "/" << R.summary.ns_checked
       << "\tanomalies=" << R.summary.anomalies.size() << "\n";
    for (auto& a : R.summary.anomalies) os << "# anomaly\t" << a << "\n";
    return os.str();
}

} // namespace moddeg2::report
