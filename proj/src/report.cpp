#include "markovia/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "markovia/common.hpp"

namespace markovia {

Verdict verdict_from_string(const std::string& s) {
    if (s == "pass") return Verdict::pass;
    if (s == "inconclusive") return Verdict::inconclusive;
    if (s == "fail") return Verdict::fail;
    throw ConfigError("unknown verdict: " + s);
}

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Verdict DiagnosticReport::verdict() const {
    Verdict v = Verdict::pass;
    for (const auto& c : checks) v = worst(v, c.verdict);
    return v;
}

Check& DiagnosticReport::add_check(const std::string& id, const std::string& anchor, Verdict v) {
    checks.push_back(Check{id, anchor, v, json::object(), json::array()});
    return checks.back();
}

Trace& DiagnosticReport::add_trace(const std::string& name, std::vector<std::string> columns) {
    traces.push_back(Trace{name, std::move(columns), {}});
    return traces.back();
}

json DiagnosticReport::to_json() const {
    json j;
    j["schema"] = schema;
    j["command"] = command;
    j["seed"] = seed;
    j["tolerance"] = tolerance;
    j["verdict"] = to_string(verdict());
    j["checks"] = json::array();
    for (const auto& c : checks) {
        json jc;
        jc["id"] = c.id;
        jc["anchor"] = c.anchor;
        jc["verdict"] = to_string(c.verdict);
        jc["details"] = c.details;
        jc["witnesses"] = c.witnesses;
        j["checks"].push_back(jc);
    }
    j["traces"] = json::array();
    for (const auto& t : traces) {
        json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = t.rows;
        j["traces"].push_back(jt);
    }
    return j;
}

std::string DiagnosticReport::to_json_string() const { return to_json().dump(2) + "\n"; }

std::string DiagnosticReport::to_csv() const {
    std::string out;
    for (const auto& t : traces) {
        out += "#trace," + t.name + "\n";
        for (size_t i = 0; i < t.columns.size(); ++i)
            out += (i ? "," : "") + t.columns[i];
        out += "\n";
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
            out += "\n";
        }
    }
    return out;
}

void DiagnosticReport::write_json(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << to_json_string();
}

void DiagnosticReport::write_csv(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << to_csv();
}

DiagnosticReport parse_report(const json& j) {
    DiagnosticReport r;
    if (!j.contains("schema") || j.at("schema").get<std::string>() != r.schema)
        throw ConfigError("unsupported report schema");
    r.command = j.at("command").get<std::string>();
    r.seed = j.at("seed").get<uint64_t>();
    r.tolerance = j.at("tolerance").get<double>();
    for (const auto& jc : j.at("checks")) {
        Check c;
        c.id = jc.at("id").get<std::string>();
        c.anchor = jc.at("anchor").get<std::string>();
        c.verdict = verdict_from_string(jc.at("verdict").get<std::string>());
        c.details = jc.at("details");
        c.witnesses = jc.at("witnesses");
        r.checks.push_back(std::move(c));
    }
    for (const auto& jt : j.at("traces")) {
        Trace t;
        t.name = jt.at("name").get<std::string>();
        t.columns = jt.at("columns").get<std::vector<std::string>>();
        t.rows = jt.at("rows").get<std::vector<std::vector<std::string>>>();
        r.traces.push_back(std::move(t));
    }
    return r;
}

DiagnosticReport load_report(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open report: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_report(j);
}

DiagnosticReport merge_reports(const std::vector<DiagnosticReport>& reports) {
    if (reports.empty()) throw ConfigError("merge requires at least one report");
    DiagnosticReport out;
    out.command = "merge";
    out.seed = reports.front().seed;
    out.tolerance = reports.front().tolerance;
    for (const auto& r : reports) {
        out.checks.insert(out.checks.end(), r.checks.begin(), r.checks.end());
        out.traces.insert(out.traces.end(), r.traces.begin(), r.traces.end());
    }
    return out;
}

}  // namespace markovia
