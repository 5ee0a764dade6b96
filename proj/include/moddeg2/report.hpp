#pragma once

#include "moddeg2/classify.hpp"
#include "moddeg2/ingest.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moddeg2::report {

struct ReportRow {
    std::string label;
    std::uint64_t conductor = 0;
    classify::Verdict verdict;
    std::optional<bool> degree_odd;    // recorded degree parity
    std::optional<bool> predicted_odd; // computed via the mod-2 Hecke algebra
    std::optional<bool> agreement;
    std::optional<bool> rank_even_computed; // W_N route
    std::string rank_parity_source; // "modular-symbols" or "dataset"
    std::string notes;
};

struct MerelRow {
    std::uint64_t N = 0;
    std::uint64_t u = 0, v = 0;
    bool criterion = false;
    std::optional<bool> eisenstein_dm_ge2;
    std::optional<bool> agreement;
};

struct CompositeAuditRow {
    std::string label;
    std::uint64_t conductor = 0;
    classify::CompositeChecklist checklist;
    bool pass = true;
};

struct NeumannSetzerRow {
    std::uint64_t N = 0;
    std::uint64_t u = 0;
    bool predicted_odd = false;
    std::optional<bool> actual_odd;
    std::optional<bool> agreement;
};

struct AuditSummary {
    int rows = 0;
    int parity_checked = 0, parity_agreements = 0;
    int rank_checked = 0, rank_agreements = 0;
    int watkins_checked = 0, watkins_violations = 0;
    int composite_checked = 0, composite_violations = 0;
    int merel_checked = 0, merel_agreements = 0;
    int ns_checked = 0, ns_agreements = 0;
    std::vector<std::string> anomalies;
};

struct AuditOptions {
    std::int64_t max_level = 1000; // cap for modular-symbol work
    std::int64_t watkins_max = 3000;
    std::int64_t merel_max = 0; // 0 means min(1000, max_level)
    bool slow = false;          // allow very large prime levels for parity
    int threads = 1;
};

struct AuditReport {
    std::vector<ReportRow> rows;
    classify::WatkinsReport watkins;
    std::vector<CompositeAuditRow> composite;
    std::vector<MerelRow> merel;
    std::vector<NeumannSetzerRow> neumann_setzer;
    AuditSummary summary;
    bool anomalies() const { return !summary.anomalies.empty(); }
};

/// Run every dataset-level audit: per-row verdicts, the prime-level parity
/// oracle, the rank-parity cross-check, the Watkins and composite condition
/// audits, the Merel table, and the Neumann-Setzer parity check.  Output is
/// deterministic for fixed inputs and options, independent of thread count.
AuditReport audit(const std::vector<ingest::CurveRecord>& records,
                  const std::map<std::string, std::uint64_t>& degrees, const AuditOptions& opt);

std::string to_json(const AuditReport& r);
std::string to_tsv(const AuditReport& r);

} // namespace moddeg2::report
