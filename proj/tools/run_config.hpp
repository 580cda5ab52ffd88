#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "weyl/krotov.hpp"
#include "weyl/models.hpp"
#include "weyl/problem.hpp"

namespace weyl::cli {

// Flat key = value configuration with [section] headers.
class IniFile {
public:
    static IniFile parse_file(const std::string& path);
    static IniFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string origin_;
};

// A fully resolved run: problem, optimizer parameters and guess fields.
struct RunConfig {
    std::string model_type;  // spinspin | rydberg_internal | rydberg_grid
    ControlProblem problem;
    KrotovConfig krotov;
    std::vector<ControlField> guess;
    std::filesystem::path out_dir = "out";
    unsigned long long seed = 0;

    // echo of every effective setting, re-parsable as an IniFile
    std::string effective_ini;
};

// Parse and validate; throws ConfigError with the offending [section] key.
RunConfig load_run_config(const std::string& path);

// Artifact writers for cmd_optimize.
void write_convergence_log(const std::filesystem::path& file,
                           const std::vector<IterationRecord>& history);
void write_pulse_csv(const std::filesystem::path& file, const std::vector<ControlField>& fields);
std::vector<ControlField> read_pulse_csv(const std::filesystem::path& file, const TimeGrid& grid);
void write_weyl_trajectory(const std::filesystem::path& file,
                           const std::vector<IterationRecord>& history);
void write_gate_report(const std::filesystem::path& file, const OptimizeResult& result,
                       const ControlProblem& problem);

}  // namespace weyl::cli
