// CSV formats: fronts (`makespan,secondary`), traces, attainment records.
// All values print exactly (decimal when finite, num/den otherwise), so
// reruns are byte-identical.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "front.hpp"
#include "hypervolume.hpp"

namespace mozeno {

inline std::string front_to_csv(const ParetoFront& front) {
    std::string out = "makespan,secondary\n";
    for (const ObjectivePoint& p : front.points)
        out += p.makespan.str() + "," + p.secondary.str() + "\n";
    return out;
}

inline ParetoFront front_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ObjectivePoint> pts;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) { header = false; continue; }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("front csv: bad row \"" + line + "\"");
        pts.push_back({snap_to_tenths(std::stod(line.substr(0, comma)), "makespan"),
                       snap_to_tenths(std::stod(line.substr(comma + 1)), "secondary")});
    }
    if (pts.empty()) throw ConfigError("front csv: no points");
    return pareto_filter(pts);
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fixed 3-decimal formatting for seconds columns.
inline std::string seconds_str(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    return buf;
}

/// Shortest round-trip formatting for metric values (hypervolumes).
inline std::string metric_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace mozeno
