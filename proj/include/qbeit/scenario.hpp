// Named experiment configurations and the runner that turns them into
// series, fits, invariant checks and output files.
#pragma once

#include "qbeit/fock.hpp"
#include "qbeit/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbeit {

enum class EitMode { Off, On, Both };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::vector<double> values;
};

struct OutputSinks {
    std::string csv;
    std::string svg;
    std::string report;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::optional<EitMode> eit;
    std::optional<Basis> basis;
    std::string model = "jc";  // custom only: jc | transfer | fock
    std::optional<double> t_end;
    std::optional<int> n_points;
    std::optional<double> lifetimes;
    std::map<std::string, double> params;
    std::optional<SweepSpec> sweep;
    OutputSinks outputs;

    /// Applies "key=value" as a [params] override, with the same checks as the file parser.
    void set_param(const std::string& key, double value);
    void validate() const;
};

/// INI-style text: [scenario] [grid] [params] [sweep] [outputs]; ';' comments.
/// Unknown sections or keys are rejected with the section and key named.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

struct ScenarioInfo {
    std::string name;
    std::string summary;
};
const std::vector<ScenarioInfo>& scenario_catalog();

/// Names accepted in [params].
const std::vector<std::string>& parameter_names();

struct RunOptions {
    std::filesystem::path out_dir = ".";
    int jobs = 1;
    bool write_outputs = true;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Panel {
    std::string name;
    std::string x_name = "t";
    std::vector<NamedSeries> series;
};

struct RunReport {
    std::string scenario;
    Report report;  // deterministic key=value content written to the report sink
    std::vector<CheckResult> checks;
    std::vector<Panel> panels;
    double wall_seconds = 0.0;  // not part of the report file

    bool ok() const;
    /// panel.<panel>.rate.<curve>, if fitted.
    std::optional<double> rate(const std::string& panel, const std::string& curve) const;
    const Panel* find_panel(const std::string& name) const;
};

RunReport run(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace qbeit
