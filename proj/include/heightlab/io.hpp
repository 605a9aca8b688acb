#ifndef HEIGHTLAB_IO_HPP
#define HEIGHTLAB_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "heightlab/canonical.hpp"
#include "heightlab/dynsys.hpp"

namespace heightlab {

inline constexpr int schema_version = 1;
inline constexpr const char* tool_version = "heightlab 0.1.0";

// Parse a system description ("schema": 1). All rationals are decimal
// strings, matrices row-major string arrays. Validation errors carry the
// offending JSON path.
System parse_system(const nlohmann::json& doc);
System load_system_file(const std::string& path);

// Point literals: P^1 "p:q" or "p/q" or "z" (affine) or "inf"; lattice
// "c1,c2,..."; abelian tuples "x,y;O;..."; wehler "x0:x1;y0:y1;z0:z1";
// products "(left)x(right)".
SystemPoint parse_point(const System& sys, const std::string& text);

// Deterministic decimal rendering at a fixed significand count.
std::string render_ball(const BallReal& b, int sig_figs);

struct ReportRow {
    std::string n;
    std::string h;          // decimal rendering
    std::string a;          // decimal rendering
    std::string h_exact;    // exact string when available, else empty
    std::string a_exact;
    std::string flags;
};

struct ReportTable {
    std::vector<std::string> columns;
    std::vector<ReportRow> rows;
    // metadata
    std::string label;
    std::string delta_lo, delta_hi, delta_exact;
    int l = 0;
    std::string mode;
    std::string version = tool_version;

    nlohmann::json to_json() const;
    std::string to_csv() const; // header row, RFC-style quoting
};

ReportTable series_table(const System& sys, const HeightSeries& hs, int sig_figs);

} // namespace heightlab

#endif
