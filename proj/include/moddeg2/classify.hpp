#pragma once

#include "moddeg2/arith.hpp"
#include "moddeg2/curve.hpp"
#include "moddeg2/hecke2.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace moddeg2::classify {

enum class Parity { Odd, Even, Undetermined };

enum class Rule {
    TooManyOddPrimes,
    OddAnalyticRank,
    CompositeNo2Torsion,
    PrimePowerNonCM,
    Case3A,
    Case3B,
    Case3C,
    TmEqZ2,
    TmNeZ2,
    OutsideScope,
};

const char* rule_name(Rule r);
const char* parity_name(Parity p);

/// A classification outcome with the rule that produced it and the fixed
/// citation tags that justify it.  Necessary-condition rules only ever force
/// "even" or leave the parity undetermined; "odd" comes from the computed
/// congruence test alone.
struct Verdict {
    Parity parity = Parity::Undetermined;
    Rule rule = Rule::OutsideScope;
    bool rule_violated = false; // even-verdicts issued because a case condition failed
    std::vector<std::string> citations;
};

/// Apply the necessary conditions for odd modular degree: odd-prime-divisor
/// bound, prime-power twist argument, composite 2-torsion requirement, and
/// the three case labels.
Verdict theorem_one_filter(const curve::WeierstrassCurve& E, const arith::Factorization& conductor);

struct ParityComputation {
    Verdict verdict;
    int matched_factor = -1; // index into the supplied factor list
    int d_m = 0;
    int residue_degree = 0;
    bool eisenstein = false;
};

/// Parity of the modular degree of the optimal curve at prime level N: match
/// the curve's mod-2 eigensystem among the local factors of T/2T and test
/// whether the completion is Z_2.
ParityComputation predict_parity_prime_level(const curve::WeierstrassCurve& E, std::int64_t N,
                                             const hecke2::HeckeLattice& lattice,
                                             const std::vector<hecke2::LocalFactorMod2>& factors);

/// Convenience overload that builds the level itself.
ParityComputation predict_parity_prime_level(const curve::WeierstrassCurve& E, std::int64_t N);

/// Minimal row view consumed by the dataset-level audits.
struct RowView {
    std::string label;
    std::uint64_t conductor = 0;
    bool conductor_prime = false;
    bool has_two_torsion = false;
    bool degree_known = false;
    bool degree_odd = false;
    bool rank_even = true;
    int odd_prime_divisors = 0;
    int prime_divisors = 0;
};

struct WatkinsReport {
    std::vector<RowView> checked;    // odd degree, prime conductor, no 2-torsion
    std::vector<RowView> violations; // those with N != 3 mod 8
};

/// Every odd-degree prime-conductor row without rational 2-torsion must have
/// N ≡ 3 mod 8.
WatkinsReport watkins_verdict(const std::vector<RowView>& rows);

struct CompositeChecklist {
    bool at_most_three_primes = true;
    bool odd_n_at_most_two_primes = true;
    bool even_analytic_rank = true;
    bool composite_implies_two_torsion = true;
    bool all_pass() const {
        return at_most_three_primes && odd_n_at_most_two_primes && even_analytic_rank &&
               composite_implies_two_torsion;
    }
};

/// Conditions every odd-degree curve must satisfy.
CompositeChecklist composite_conditions(const arith::Factorization& conductor, bool has_two_torsion,
                                        bool analytic_rank_even);

// fixed citation tags used in report rows
namespace cite {
inline constexpr const char* two_odd_primes = "bound:at-most-two-odd-primes";
inline constexpr const char* even_rank = "bound:even-analytic-rank";
inline constexpr const char* composite_torsion = "composite:rational-2-torsion";
inline constexpr const char* prime_power_twist = "prime-power:quadratic-twist-congruence";
inline constexpr const char* case_3a = "case-3a:rational-2-torsion";
inline constexpr const char* case_3b = "case-3b:prime-supersingular-complex";
inline constexpr const char* case_3c = "case-3c:cm-levels-27-32-49-243";
inline constexpr const char* ribet = "parity:level-congruence-criterion";
inline constexpr const char* merel = "merel:u2-plus-16v2";
inline constexpr const char* neumann_setzer = "neumann-setzer:mod-16";
inline constexpr const char* watkins = "watkins:3-mod-8";
inline constexpr const char* outside = "outside-scope";
} // namespace cite

} // namespace moddeg2::classify
