#include "moddeg2/classify.hpp"
#include "moddeg2/modsym.hpp"

#include <stdexcept>

namespace moddeg2::classify {

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::TooManyOddPrimes: return "TOO_MANY_ODD_PRIMES";
        case Rule::OddAnalyticRank: return "ODD_ANALYTIC_RANK";
        case Rule::CompositeNo2Torsion: return "COMPOSITE_NO_2TORSION";
        case Rule::PrimePowerNonCM: return "PRIME_POWER_NON_CM";
        case Rule::Case3A: return "CASE_3A";
        case Rule::Case3B: return "CASE_3B";
        case Rule::Case3C: return "CASE_3C";
        case Rule::TmEqZ2: return "TM_EQ_Z2";
        case Rule::TmNeZ2: return "TM_NE_Z2";
        case Rule::OutsideScope: return "OUTSIDE_SCOPE";
    }
    return "?";
}

const char* parity_name(Parity p) {
    switch (p) {
        case Parity::Odd: return "odd";
        case Parity::Even: return "even";
        case Parity::Undetermined: return "undetermined";
    }
    return "?";
}

Verdict theorem_one_filter(const curve::WeierstrassCurve& E, const arith::Factorization& conductor) {
    const std::uint64_t N = conductor.n;
    // cheap consistency: every conductor prime is a bad prime of the model
    for (auto& [p, e] : conductor.factors)
        if (E.disc % curve::Int(p) != 0)
            throw std::invalid_argument("theorem_one_filter: conductor prime does not divide the discriminant");

    Verdict v;
    if (N <= 1) {
        v.rule = Rule::OutsideScope;
        v.citations = {cite::outside};
        return v;
    }

    if (conductor.num_odd_primes() > 2) {
        v.parity = Parity::Even;
        v.rule = Rule::TooManyOddPrimes;
        v.citations = {cite::two_odd_primes};
        return v;
    }

    const bool two_power = conductor.factors.size() == 1 && conductor.factors[0].first == 2;
    auto cm = curve::cm_discriminant(E);
    const bool cm_level = (N == 27 || N == 32 || N == 49 || N == 243);
    if (two_power && N != 32) {
        v.parity = Parity::Undetermined;
        v.rule = Rule::OutsideScope;
        v.citations = {cite::outside};
        return v;
    }

    const bool odd_prime_power =
        conductor.factors.size() == 1 && conductor.factors[0].first != 2 && conductor.factors[0].second >= 2;
    if (odd_prime_power) {
        if (!cm) {
            v.parity = Parity::Even;
            v.rule = Rule::PrimePowerNonCM;
            v.citations = {cite::prime_power_twist};
            return v;
        }
        if (!cm_level) {
            v.parity = Parity::Even;
            v.rule = Rule::Case3C;
            v.rule_violated = true;
            v.citations = {cite::prime_power_twist, cite::case_3c};
            return v;
        }
    }

    const bool composite = conductor.factors.size() >= 2;
    auto torsion = curve::two_torsion_info(E);
    if (composite && !torsion.has_rational_root) {
        v.parity = Parity::Even;
        v.rule = Rule::CompositeNo2Torsion;
        v.citations = {cite::composite_torsion};
        return v;
    }

    // case labels: 3a first, then 3c, then the prime-level 3b dichotomy
    if (torsion.has_rational_root) {
        v.parity = Parity::Undetermined;
        v.rule = Rule::Case3A;
        v.citations = {cite::case_3a};
        return v;
    }
    if (cm && cm_level) {
        v.parity = Parity::Undetermined;
        v.rule = Rule::Case3C;
        v.citations = {cite::case_3c};
        return v;
    }
    if (conductor.factors.size() == 1 && conductor.factors[0].second == 1 && N != 2) {
        // prime conductor, no 2-torsion: supersingular at 2 and connected E(R)
        bool ss = curve::is_supersingular_at_2(E);
        bool connected = curve::is_real_connected(E);
        if (ss && connected) {
            v.parity = Parity::Undetermined;
            v.rule = Rule::Case3B;
            v.citations = {cite::case_3b};
        } else {
            v.parity = Parity::Even;
            v.rule = Rule::Case3B;
            v.rule_violated = true;
            v.citations = {cite::case_3b};
        }
        return v;
    }
    v.parity = Parity::Undetermined;
    v.rule = Rule::OutsideScope;
    v.citations = {cite::outside};
    return v;
}

ParityComputation predict_parity_prime_level(const curve::WeierstrassCurve& E, std::int64_t N,
                                             const hecke2::HeckeLattice& lattice,
                                             const std::vector<hecke2::LocalFactorMod2>& factors) {
    if (!arith::is_prime(static_cast<std::uint64_t>(N)))
        throw std::invalid_argument("predict_parity_prime_level: N must be prime");
    ParityComputation out;
    auto torsion = curve::two_torsion_info(E);

    std::vector<int> matches;
    if (torsion.has_rational_root) {
        for (int i = 0; i < static_cast<int>(factors.size()); ++i)
            if (factors[i].eisenstein) matches.push_back(i);
        if (matches.empty())
            throw std::runtime_error("predict_parity_prime_level: curve has 2-torsion but no Eisenstein factor");
        if (matches.size() > 1)
            throw std::runtime_error("predict_parity_prime_level: multiple Eisenstein factors");
    } else {
        // match a_l mod 2 over the good odd primes with stored images (the
        // Sturm range, padded at tiny levels)
        for (int i = 0; i < static_cast<int>(factors.size()); ++i) {
            bool ok = true;
            for (auto& [ell, val] : factors[i].prime_images) {
                if (ell == 2 || N % ell == 0) continue;
                bool a_odd = curve::ap_point_count(E, static_cast<std::uint64_t>(ell)) % 2 != 0;
                if (!val.in_f2 || val.f2_value != a_odd) {
                    ok = false;
                    break;
                }
            }
            if (ok) matches.push_back(i);
        }
        if (matches.size() > 1) {
            // refine with the image of T_2
            bool a2_odd = curve::ap_point_count(E, 2) % 2 != 0;
            std::vector<int> refined;
            for (int i : matches) {
                auto it = factors[i].prime_images.find(2);
                if (it != factors[i].prime_images.end() && it->second.in_f2 &&
                    it->second.f2_value == a2_odd)
                    refined.push_back(i);
            }
            matches = refined;
        }
        if (matches.empty())
            throw std::runtime_error(
                "predict_parity_prime_level: no local factor matches the curve's eigensystem");
        if (matches.size() > 1)
            throw std::logic_error("predict_parity_prime_level: eigensystem matches several factors");
    }

    const auto& f = factors[matches[0]];
    out.matched_factor = matches[0];
    out.d_m = f.d_m;
    out.residue_degree = f.residue_degree;
    out.eisenstein = f.eisenstein;
    if (hecke2::tm_equals_z2(f)) {
        out.verdict.parity = Parity::Odd;
        out.verdict.rule = Rule::TmEqZ2;
    } else {
        out.verdict.parity = Parity::Even;
        out.verdict.rule = Rule::TmNeZ2;
    }
    out.verdict.citations = {cite::ribet};
    return out;
}

ParityComputation predict_parity_prime_level(const curve::WeierstrassCurve& E, std::int64_t N) {
    auto space = modsym::build_space(N);
    auto lattice = hecke2::hecke_lattice(space);
    auto factors = hecke2::decompose_mod2(lattice);
    return predict_parity_prime_level(E, N, lattice, factors);
}

WatkinsReport watkins_verdict(const std::vector<RowView>& rows) {
    WatkinsReport report;
    for (const auto& r : rows) {
        if (!r.degree_known || !r.degree_odd) continue;
        if (!r.conductor_prime || r.has_two_torsion) continue;
        report.checked.push_back(r);
        if (r.conductor % 8 != 3) report.violations.push_back(r);
    }
    return report;
}

CompositeChecklist composite_conditions(const arith::Factorization& conductor, bool has_two_torsion,
                                        bool analytic_rank_even) {
    CompositeChecklist c;
    c.at_most_three_primes = conductor.num_primes() <= 3;
    c.odd_n_at_most_two_primes = (conductor.n % 2 == 0) || conductor.num_primes() <= 2;
    c.even_analytic_rank = analytic_rank_even;
    c.composite_implies_two_torsion = conductor.num_primes() <= 1 || has_two_torsion;
    return c;
}

} // namespace moddeg2::classify
