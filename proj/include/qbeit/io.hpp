// Output sinks: CSV tables, SVG line plots, key=value reports.
#pragma once

#include "qbeit/fit.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qbeit {

struct NamedSeries {
    std::string name;
    TimeSeries series;
    std::optional<DecayFit> fit;
};

/// Header `<x_name>,<name1>,...`, shortest round-trip decimals, LF endings.
/// All series must share one grid.
void emit_csv(const std::vector<NamedSeries>& series, const std::filesystem::path& path,
              const std::string& x_name = "t");

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

struct SvgStyle {
    int width = 800;
    int height = 480;
    int ticks = 5;
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    int max_points = 4000;  // per polyline, min/max bucketed beyond this
};

/// One polyline per series, one envelope path per attached fit.
void emit_svg(const std::vector<NamedSeries>& series, const std::filesystem::path& path,
              const SvgStyle& style = {});

/// Ordered key=value lines.
class Report {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);
    void set(const std::string& key, bool value);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::optional<std::string> get(const std::string& key) const;
    std::string str() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace qbeit
