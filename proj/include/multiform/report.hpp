// Machine- and human-readable run reports for the command-line driver.  The
// two renderings agree on statuses by construction: both are produced from
// the same structure.

#ifndef MULTIFORM_REPORT_HPP
#define MULTIFORM_REPORT_HPP

#include "render.hpp"

#include <chrono>
#include <cstdlib>

namespace multiform {

struct ReportItem {
    std::string name;
    bool is_check = false;  // carries a pass/fail status
    bool pass = true;
    std::string text;   // rendered object or detail
    std::string latex;  // optional
    json value;         // structured payload
};

struct Report {
    std::string command;
    std::string hierarchy;
    uint64_t seed = 0;
    bool seeded = false;
    std::vector<ReportItem> items;
    double elapsed_ms = 0;

    bool all_pass() const {
        for (const auto& it : items)
            if (it.is_check && !it.pass) return false;
        return true;
    }

    void add_object(std::string name, std::string text, std::string latex = "", json value = {}) {
        items.push_back(ReportItem{std::move(name), false, true, std::move(text), std::move(latex),
                                   std::move(value)});
    }
    void add_check(std::string name, bool pass, std::string detail = "") {
        items.push_back(ReportItem{std::move(name), true, pass, std::move(detail), "", {}});
    }

    json to_json() const {
        json checks = json::array();
        json objects = json::array();
        for (const auto& it : items) {
            if (it.is_check) {
                json c{{"name", it.name}, {"status", it.pass ? "pass" : "fail"}};
                if (!it.text.empty()) c["detail"] = it.text;
                checks.push_back(std::move(c));
            } else {
                json o{{"name", it.name}, {"text", it.text}};
                if (!it.latex.empty()) o["latex"] = it.latex;
                if (!it.value.is_null()) o["value"] = it.value;
                objects.push_back(std::move(o));
            }
        }
        json out{{"command", command},   {"hierarchy", hierarchy}, {"objects", objects},
                 {"checks", checks},     {"status", all_pass() ? "pass" : "fail"},
                 {"elapsed_ms", elapsed_ms}};
        if (seeded) out["seed"] = seed;
        return out;
    }

    std::string to_text(bool color) const {
        const char* green = color ? "\033[32m" : "";
        const char* red = color ? "\033[31m" : "";
        const char* bold = color ? "\033[1m" : "";
        const char* off = color ? "\033[0m" : "";
        std::string out;
        out += std::string(bold) + command + " " + hierarchy + off + "\n";
        for (const auto& it : items) {
            if (it.is_check) {
                out += std::string("  [") + (it.pass ? green : red) + (it.pass ? "pass" : "FAIL") +
                       off + "] " + it.name;
                if (!it.text.empty()) out += ": " + it.text;
                out += "\n";
            } else {
                out += "  " + it.name + " = " + it.text + "\n";
            }
        }
        if (seeded) out += "  seed: " + std::to_string(seed) + "\n";
        out += std::string("  status: ") + (all_pass() ? "pass" : "FAIL") + "\n";
        return out;
    }

    std::string to_latex() const {
        std::string out;
        for (const auto& it : items)
            if (!it.is_check && !it.latex.empty()) out += it.name + " &= " + it.latex + "\\\\\n";
        return out;
    }
};

inline bool color_enabled() {
    const char* env = std::getenv("MULTIFORM_COLOR");
    if (env) return std::string(env) == "1";
    return false;
}

} // namespace multiform

#endif
