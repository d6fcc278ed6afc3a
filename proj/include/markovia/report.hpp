#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace markovia {

using json = nlohmann::json;

// Verdict lattice: fail > inconclusive > pass under worst-of aggregation.
enum class Verdict { pass, inconclusive, fail };

inline Verdict worst(Verdict a, Verdict b) {
    auto rank = [](Verdict v) { return v == Verdict::fail ? 2 : v == Verdict::inconclusive ? 1 : 0; };
    return rank(a) >= rank(b) ? a : b;
}

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::inconclusive: return "inconclusive";
        default: return "fail";
    }
}

Verdict verdict_from_string(const std::string& s);

// Shortest-round-trip decimal rendering; used for CSV cells so trace files
// are byte-deterministic and parse back to the same double.
std::string format_double(double x);

struct Check {
    std::string id;      // what was checked, self-descriptive
    std::string anchor;  // property family the check belongs to
    Verdict verdict = Verdict::pass;
    json details = json::object();
    json witnesses = json::array();
};

struct Trace {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::initializer_list<std::string> cells) { rows.emplace_back(cells); }
    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
};

struct DiagnosticReport {
    std::string schema = "markovia-report/1";
    std::string command;
    uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<Check> checks;
    std::vector<Trace> traces;

    Verdict verdict() const;
    json to_json() const;             // sorted keys, deterministic doubles
    std::string to_json_string() const;
    std::string to_csv() const;       // "#trace,<name>" header per block
    void write_json(const std::string& path) const;
    void write_csv(const std::string& path) const;

    Check& add_check(const std::string& id, const std::string& anchor, Verdict v);
    Trace& add_trace(const std::string& name, std::vector<std::string> columns);
    Trace& add_trace(Trace t) {
        traces.push_back(std::move(t));
        return traces.back();
    }
};

DiagnosticReport parse_report(const json& j);
DiagnosticReport load_report(const std::string& path);

// Concatenates checks and traces; aggregate verdict is the worst constituent.
// Idempotent in the sense that merging a report with itself repeats the same
// verdict entries byte-for-byte.
DiagnosticReport merge_reports(const std::vector<DiagnosticReport>& reports);

}  // namespace markovia
