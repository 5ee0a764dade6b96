#include "moddeg2/ingest.hpp"

#include <istream>
#include <sstream>

namespace moddeg2::ingest {

std::string CurveRecord::label() const {
    return std::to_string(conductor) + class_code + std::to_string(curve_number);
}

std::optional<std::array<std::int64_t, 5>> parse_ainvs(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
    std::array<std::int64_t, 5> a{};
    std::string body = s.substr(1, s.size() - 2);
    std::istringstream is(body);
    std::string part;
    int i = 0;
    while (std::getline(is, part, ',')) {
        if (i >= 5) return std::nullopt;
        try {
            std::size_t pos = 0;
            a[i] = std::stoll(part, &pos);
            if (pos != part.size()) return std::nullopt;
        } catch (...) {
            return std::nullopt;
        }
        ++i;
    }
    if (i != 5) return std::nullopt;
    return a;
}

namespace {

struct LineFields {
    std::uint64_t conductor;
    std::string class_code;
    int curve_number;
    std::array<std::int64_t, 5> ainvs;
    std::vector<std::string> rest;
};

std::optional<LineFields> parse_common(const std::string& line, std::string& err) {
    std::istringstream is(line);
    LineFields f;
    std::string cond, num, ai;
    if (!(is >> cond >> f.class_code >> num >> ai)) {
        err = "expected `<conductor> <class> <number> [a1,a2,a3,a4,a6] ...`";
        return std::nullopt;
    }
    try {
        std::size_t pos = 0;
        f.conductor = std::stoull(cond, &pos);
        if (pos != cond.size()) throw std::invalid_argument("trailing");
        pos = 0;
        f.curve_number = std::stoi(num, &pos);
        if (pos != num.size()) throw std::invalid_argument("trailing");
    } catch (...) {
        err = "malformed conductor or curve number";
        return std::nullopt;
    }
    auto a = parse_ainvs(ai);
    if (!a) {
        err = "malformed a-invariant list";
        return std::nullopt;
    }
    f.ainvs = *a;
    std::string tok;
    while (is >> tok) f.rest.push_back(tok);
    return f;
}

} // namespace

AllCurves parse_allcurves(std::istream& in) {
    AllCurves out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        std::string err;
        auto f = parse_common(line, err);
        if (!f) {
            out.diagnostics.push_back({lineno, err});
            continue;
        }
        if (f->rest.size() != 2) {
            out.diagnostics.push_back({lineno, "expected rank and torsion columns"});
            continue;
        }
        CurveRecord r;
        r.conductor = f->conductor;
        r.class_code = f->class_code;
        r.curve_number = f->curve_number;
        r.a_invariants = f->ainvs;
        try {
            r.rank = std::stoi(f->rest[0]);
            r.torsion_order = std::stoi(f->rest[1]);
        } catch (...) {
            out.diagnostics.push_back({lineno, "malformed rank or torsion"});
            continue;
        }
        if (r.torsion_order < 1) {
            out.diagnostics.push_back({lineno, "torsion order must be positive"});
            continue;
        }
        out.records.push_back(std::move(r));
    }
    return out;
}

DegPhi parse_degphi(std::istream& in) {
    DegPhi out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        std::string err;
        auto f = parse_common(line, err);
        if (!f) {
            out.diagnostics.push_back({lineno, err});
            continue;
        }
        if (f->rest.size() != 1) {
            out.diagnostics.push_back({lineno, "expected a degree column"});
            continue;
        }
        std::uint64_t deg = 0;
        try {
            deg = std::stoull(f->rest[0]);
        } catch (...) {
            out.diagnostics.push_back({lineno, "malformed degree"});
            continue;
        }
        if (deg == 0) {
            out.diagnostics.push_back({lineno, "degree must be positive"});
            continue;
        }
        std::string label =
            std::to_string(f->conductor) + f->class_code + std::to_string(f->curve_number);
        if (out.degrees.count(label))
            out.warnings.push_back("duplicate label " + label + " (line " + std::to_string(lineno) +
                                   "): last value wins");
        out.degrees[label] = deg;
    }
    return out;
}

std::string serialize_record(const CurveRecord& r) {
    std::ostringstream os;
    os << r.conductor << " " << r.class_code << " " << r.curve_number << " [" << r.a_invariants[0]
       << "," << r.a_invariants[1] << "," << r.a_invariants[2] << "," << r.a_invariants[3] << ","
       << r.a_invariants[4] << "] " << r.rank << " " << r.torsion_order;
    return os.str();
}

} // namespace moddeg2::ingest
