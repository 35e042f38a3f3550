#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "conelag/space.hpp"

namespace conelag {

inline constexpr const char* kToolVersion = "conelag 0.1.0";

/// One verified predicate inside a run.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; // witness / violation / numbers, already formatted
};

/// Deterministic run summary. The serialized body never contains wall-clock
/// timing, so fixed inputs and seed give byte-identical output; timing goes
/// to stderr at the CLI layer.
struct RunReport {
    std::string command;
    std::string digest;
    std::string version = kToolVersion;
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, std::string>> values; // name -> formatted value
    std::vector<std::string> notes;
    double timing_ms = 0.0; // excluded from serialization

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void check(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back({name, pass, detail});
    }
    void value(const std::string& name, double v) { values.emplace_back(name, fmt_g(v)); }
    void value(const std::string& name, const std::string& v) { values.emplace_back(name, v); }

    std::string to_text() const {
        std::string out = version;
        out += "\ncommand: " + command + "\ndigest: " + digest + "\n";
        for (const auto& [k, v] : values) out += k + ": " + v + "\n";
        for (const auto& c : checks) {
            out += std::string(c.pass ? "check  pass  " : "check  FAIL  ") + c.name;
            if (!c.detail.empty()) out += "  [" + c.detail + "]";
            out += "\n";
        }
        for (const auto& n : notes) out += "note: " + n + "\n";
        out += std::string("result: ") + (all_pass() ? "PASS" : "FAIL") + " (" +
               std::to_string(std::count_if(checks.begin(), checks.end(),
                                            [](const CheckResult& c) { return c.pass; })) +
               "/" + std::to_string(checks.size()) + " checks)\n";
        return out;
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["version"] = version;
        j["command"] = command;
        j["digest"] = digest;
        j["values"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : values) j["values"][k] = v;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        j["notes"] = notes;
        j["result"] = all_pass() ? "PASS" : "FAIL";
        return j.dump(2) + "\n";
    }

    static std::string csv_escape(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    }

    std::string to_csv() const {
        std::string out = "kind,name,value\n";
        for (const auto& [k, v] : values) out += "value," + k + "," + csv_escape(v) + "\n";
        for (const auto& c : checks)
            out += std::string("check,") + c.name + "," + (c.pass ? "pass" : "fail") + "\n";
        return out;
    }

    std::string render(const std::string& format) const {
        if (format == "text") return to_text();
        if (format == "json") return to_json();
        if (format == "csv") return to_csv();
        throw Error("unknown report format: " + format);
    }
};

/// FNV-1a digest of the canonicalized inputs.
inline std::string input_digest(const std::string& canonical) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace conelag
