#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "magnomech/errors.hpp"

namespace magnomech {

/// Format a double with 12 significant digits ("." decimal separator).
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Minimal CSV emitter: mandatory header row, 12-significant-digit numbers,
/// optional trailing "# key = value" annotation lines.
class CsvFile {
public:
    explicit CsvFile(std::filesystem::path path) : path_(std::move(path)) {
        std::filesystem::create_directories(path_.parent_path());
        out_.open(path_, std::ios::trunc);
        if (!out_) throw Error("cannot open output file " + path_.string());
    }

    void header(const std::vector<std::string>& columns) {
        write_row(columns);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_number(v));
        write_row(cells);
    }

    void annotation(const std::string& key, double value) {
        out_ << "# " << key << " = " << format_number(value) << "\n";
    }

    const std::filesystem::path& path() const { return path_; }

private:
    void write_row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    std::filesystem::path path_;
    std::ofstream out_;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Run manifest: config echo, version, duration and per-check summary,
/// written even when the run fails.
class Manifest {
public:
    void set(const std::string& section, const std::string& key, const std::string& value) {
        entries_.push_back({section, key, value});
    }
    void set(const std::string& section, const std::string& key, double value) {
        set(section, key, format_number(value));
    }
    void add_check(const CheckResult& check) { checks_.push_back(check); }

    bool all_checks_passed() const {
        for (const auto& c : checks_)
            if (!c.passed) return false;
        return true;
    }

    const std::vector<CheckResult>& checks() const { return checks_; }

    void write(const std::filesystem::path& path) const {
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw Error("cannot open manifest " + path.string());
        std::vector<std::string> order;
        for (const auto& e : entries_)
            if (std::find(order.begin(), order.end(), e.section) == order.end())
                order.push_back(e.section);
        bool first = true;
        for (const auto& section : order) {
            if (!first) out << "\n";
            first = false;
            out << "[" << section << "]\n";
            for (const auto& e : entries_)
                if (e.section == section) out << e.key << " = " << e.value << "\n";
        }
        if (!checks_.empty()) {
            out << "\n[checks]\n";
            for (const auto& c : checks_)
                out << c.name << " = " << (c.passed ? "pass" : "fail")
                    << (c.detail.empty() ? "" : "  # " + c.detail) << "\n";
        }
    }

private:
    struct Entry {
        std::string section, key, value;
    };
    std::vector<Entry> entries_;
    std::vector<CheckResult> checks_;
};

} // namespace magnomech
