#include "qbeit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qbeit {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string short_num(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return std::string(buf, r.ptr);
}

std::string xml_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '&': o += "&amp;"; break;
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

// Keeps the extremes of each bucket so oscillation peaks survive thinning.
std::vector<std::pair<double, double>> thin(const TimeSeries& s, int max_points) {
    std::vector<std::pair<double, double>> pts;
    const Eigen::Index n = s.size();
    if (n <= max_points || max_points < 4) {
        for (Eigen::Index i = 0; i < n; ++i) pts.emplace_back(s.t(i), s.y(i));
        return pts;
    }
    const Eigen::Index buckets = max_points / 2;
    for (Eigen::Index b = 0; b < buckets; ++b) {
        const Eigen::Index lo = b * n / buckets, hi = (b + 1) * n / buckets;
        Eigen::Index imin = lo, imax = lo;
        for (Eigen::Index i = lo; i < hi; ++i) {
            if (s.y(i) < s.y(imin)) imin = i;
            if (s.y(i) > s.y(imax)) imax = i;
        }
        for (Eigen::Index i : {std::min(imin, imax), std::max(imin, imax)}) pts.emplace_back(s.t(i), s.y(i));
        if (imin == imax) pts.pop_back();
    }
    return pts;
}

const char* const kPalette[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void emit_csv(const std::vector<NamedSeries>& series, const std::filesystem::path& path, const std::string& x_name) {
    if (series.empty()) throw std::invalid_argument("emit_csv: empty series set");
    const TimeSeries& ref = series.front().series;
    for (const NamedSeries& s : series) {
        if (s.series.size() != ref.size() || s.series.y.size() != ref.size())
            throw std::invalid_argument("emit_csv: series '" + s.name + "' is not on the shared grid");
        if (s.series.t != ref.t) throw std::invalid_argument("emit_csv: series '" + s.name + "' is not on the shared grid");
    }

    std::string text = x_name;
    for (const NamedSeries& s : series) text += "," + s.name;
    text += '\n';
    for (Eigen::Index i = 0; i < ref.size(); ++i) {
        text += format_double(ref.t(i));
        for (const NamedSeries& s : series) {
            text += ',';
            text += format_double(s.series.y(i));
        }
        text += '\n';
    }
    std::ofstream out = open_out(path);
    out << text;
    finish(out, path);
}

void emit_svg(const std::vector<NamedSeries>& series, const std::filesystem::path& path, const SvgStyle& style) {
    if (series.empty()) throw std::invalid_argument("emit_svg: empty series set");
    const int ticks = style.ticks > 0 ? style.ticks : 5;

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const NamedSeries& s : series) {
        if (s.series.size() == 0) continue;
        x0 = std::min(x0, s.series.t.minCoeff());
        x1 = std::max(x1, s.series.t.maxCoeff());
        y0 = std::min(y0, s.series.y.minCoeff());
        y1 = std::max(y1, s.series.y.maxCoeff());
    }
    if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double ml = 70, mr = 150, mt = 40, mb = 50;
    const double pw = style.width - ml - mr, ph = style.height - mt - mb;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
      << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << style.height << "\" fill=\"white\"/>\n";
    if (!style.title.empty())
        o << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
          << xml_escape(style.title) << "</text>\n";

    o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
    for (int k = 0; k <= ticks; ++k) {
        const double fx = ml + pw * k / ticks, fy = mt + ph * k / ticks;
        o << "<line x1=\"" << fx << "\" y1=\"" << mt + ph << "\" x2=\"" << fx << "\" y2=\"" << mt + ph + 5 << "\"/>\n";
        o << "<line x1=\"" << ml - 5 << "\" y1=\"" << fy << "\" x2=\"" << ml << "\" y2=\"" << fy << "\"/>\n";
    }
    o << "</g>\n<g class=\"ticks\" font-size=\"11\">\n";
    for (int k = 0; k <= ticks; ++k) {
        const double xv = x0 + (x1 - x0) * k / ticks, yv = y1 - (y1 - y0) * k / ticks;
        o << "<text x=\"" << ml + pw * k / ticks << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
          << short_num(xv) << "</text>\n";
        o << "<text x=\"" << ml - 8 << "\" y=\"" << mt + ph * k / ticks + 4 << "\" text-anchor=\"end\">"
          << short_num(yv) << "</text>\n";
    }
    o << "</g>\n";
    o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << style.height - 10 << "\" text-anchor=\"middle\">"
      << xml_escape(style.x_label) << "</text>\n";
    if (!style.y_label.empty())
        o << "<text x=\"16\" y=\"" << mt + ph / 2 << "\" transform=\"rotate(-90 16 " << mt + ph / 2
          << ")\" text-anchor=\"middle\">" << xml_escape(style.y_label) << "</text>\n";

    std::size_t idx = 0;
    for (const NamedSeries& s : series) {
        const char* colour = kPalette[idx % std::size(kPalette)];
        o << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
        bool first = true;
        for (const auto& [x, y] : thin(s.series, style.max_points)) {
            if (!first) o << ' ';
            o << short_num(px(x)) << ',' << short_num(py(y));
            first = false;
        }
        o << "\"/>\n";
        if (s.fit) {
            o << "<path class=\"envelope\" fill=\"none\" stroke=\"red\" stroke-dasharray=\"6,3\" d=\"";
            const int m = 200;
            for (int k = 0; k <= m; ++k) {
                const double x = x0 + (x1 - x0) * k / m;
                const double y = std::clamp(s.fit->envelope(x), y0, y1);
                o << (k == 0 ? 'M' : 'L') << short_num(px(x)) << ',' << short_num(py(y)) << ' ';
            }
            o << "\"/>\n";
        }
        const double ly = mt + 16.0 * double(idx) + 10.0;
        o << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 30 << "\" y2=\"" << ly
          << "\" stroke=\"" << colour << "\"/>\n";
        o << "<text x=\"" << ml + pw + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << xml_escape(s.name)
          << "</text>\n";
        ++idx;
    }
    o << "</svg>\n";

    std::ofstream out = open_out(path);
    out << o.str();
    finish(out, path);
}

void Report::set(const std::string& key, const std::string& value) {
    if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
        throw std::invalid_argument("Report: key/value may not contain '=' or newlines: " + key);
    for (auto& kv : entries_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void Report::set(const std::string& key, double value) { set(key, format_double(value)); }
void Report::set(const std::string& key, int value) { set(key, std::to_string(value)); }
void Report::set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }

std::optional<std::string> Report::get(const std::string& key) const {
    for (const auto& kv : entries_)
        if (kv.first == key) return kv.second;
    return std::nullopt;
}

std::string Report::str() const {
    std::string s;
    for (const auto& [k, v] : entries_) s += k + "=" + v + "\n";
    return s;
}

void Report::write(const std::filesystem::path& path) const {
    std::ofstream out = open_out(path);
    out << str();
    finish(out, path);
}

}  // namespace qbeit
