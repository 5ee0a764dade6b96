#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moddeg2::ingest {

/// One database row: `<conductor> <class> <number> [a1,a2,a3,a4,a6] <rank> <torsion>`.
struct CurveRecord {
    std::uint64_t conductor = 0;
    std::string class_code;
    int curve_number = 0;
    std::array<std::int64_t, 5> a_invariants{};
    int rank = 0;
    int torsion_order = 1;
    std::optional<std::uint64_t> degree;

    std::string label() const;
};

struct ParseDiagnostic {
    int line = 0;
    std::string message;
};

struct AllCurves {
    std::vector<CurveRecord> records;
    std::vector<ParseDiagnostic> diagnostics;
};

/// Total parse: malformed lines become diagnostics, never aborts.
AllCurves parse_allcurves(std::istream& in);

struct DegPhi {
    std::map<std::string, std::uint64_t> degrees;
    std::vector<ParseDiagnostic> diagnostics;
    std::vector<std::string> warnings; // duplicate labels (last wins)
};

/// Lines `<conductor> <class> <number> [a1,a2,a3,a4,a6] <degree>`.
DegPhi parse_degphi(std::istream& in);

std::string serialize_record(const CurveRecord& r);

/// Parse "[a1,a2,a3,a4,a6]".
std::optional<std::array<std::int64_t, 5>> parse_ainvs(const std::string& s);

} // namespace moddeg2::ingest
