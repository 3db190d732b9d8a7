#pragma once

// Tabular datasets and their CSV / JSON encodings.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhd/errors.hpp"
#include "qhd/orbits.hpp"

namespace qhd {

struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Dataset& ds)
{
    for (std::size_t i = 0; i < ds.columns.size(); ++i)
        os << (i ? "," : "") << ds.columns[i];
    os << '\n';
    for (const auto& row : ds.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

inline Dataset read_csv(std::istream& is)
{
    Dataset ds;
    std::string line;
    if (!std::getline(is, line))
        throw IoError("read_csv: missing header");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            ds.columns.push_back(cell);
    }
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw IoError("read_csv: bad number '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != ds.columns.size())
            throw IoError("read_csv: row width does not match header");
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

inline nlohmann::json to_json(const Dataset& ds)
{
    return {{"columns", ds.columns}, {"rows", ds.rows}};
}

inline Dataset dataset_from_json(const nlohmann::json& j)
{
    Dataset ds;
    ds.columns = j.at("columns").get<std::vector<std::string>>();
    ds.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    return ds;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    os << text;
    if (!os)
        throw IoError("write failed: " + path.string());
}

inline std::string read_text(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline void write_csv_file(const std::filesystem::path& path, const Dataset& ds)
{
    std::ostringstream os;
    write_csv(os, ds);
    write_text(path, os.str());
}

inline Dataset read_csv_file(const std::filesystem::path& path)
{
    std::istringstream is(read_text(path));
    return read_csv(is);
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j)
{
    write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Dataset builders

inline Dataset curve_dataset(const std::vector<Vec2>& pts, const std::string& xname, const std::string& wname)
{
    Dataset ds{{xname, wname}, {}};
    ds.rows.reserve(pts.size());
    for (const Vec2& p : pts)
        ds.rows.push_back({p.x, p.w});
    return ds;
}

/// Columns y, P, Q, J.
inline Dataset linear_profile_dataset(const ProfileSolution& sol)
{
    Dataset ds{{"y", "P", "Q", "J"}, {}};
    const auto& s = sol.trajectory.samples;
    for (std::size_t i = 0; i < s.size(); ++i)
        ds.rows.push_back({s[i].y, s[i].state.x, s[i].state.w, sol.secondary_profile[i].second});
    return ds;
}

/// Columns y, V, W, U, rho.
inline Dataset standing_profile_dataset(const ProfileSolution& sol)
{
    Dataset ds{{"y", "V", "W", "U", "rho"}, {}};
    const auto& s = sol.trajectory.samples;
    for (std::size_t i = 0; i < s.size(); ++i)
        ds.rows.push_back({s[i].y, s[i].state.x, s[i].state.w, sol.secondary_profile[i].second,
                           sol.primary_profile[i].second});
    return ds;
}

inline nlohmann::json to_json(const ProfileDiagnostics& d)
{
    return {{"terminal_residual", d.terminal_residual},
            {"convergence_radius", d.convergence_radius},
            {"energy_monotonicity_violation", d.energy_monotonicity_violation},
            {"min_energy", d.min_energy},
            {"min_state", d.min_state},
            {"max_state", d.max_state},
            {"oscillation_count", d.oscillation_count},
            {"verdict", to_string(d.verdict)}};
}

inline nlohmann::json to_json(const IntegratorStats& m)
{
    return {{"steps", m.steps},
            {"rejected", m.rejected},
            {"evaluations", m.evaluations},
            {"max_energy_drift", m.max_energy_drift}};
}

inline nlohmann::json to_json(const LaSalleReport& r)
{
    return {{"max_lyapunov_increase", r.max_lyapunov_increase},
            {"negative_energy_fraction", r.negative_energy_fraction},
            {"terminal_at_attractor", r.terminal_at_attractor},
            {"terminal_distance_attractor", r.terminal_distance_attractor},
            {"terminal_distance_saddle", r.terminal_distance_saddle},
            {"passed", r.passed},
            {"failures", r.failures}};
}

}  // namespace qhd
