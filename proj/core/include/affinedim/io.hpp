#pragma once

// File formats: JSON IFS spec, AFPC binary point-cloud cache, CSV exports.

#include <string>

#include "affinedim/ifs.hpp"

namespace affinedim {

// Spec file fields: "dim", "maps" (list of {"A": row-major flat list,
// "a": list}), "p" (list).  Throws SpecParseError / InvariantViolation.
AffineIFS load_ifs(const std::string& path);
AffineIFS parse_ifs(const std::string& json_text, const std::string& origin = "<string>");
void save_ifs(const AffineIFS& ifs, const std::string& path);

// Point-cloud cache: 16-byte header (magic "AFPC", version u32, N u64 LE),
// then m as u32, then N*m float64 LE.
void write_point_cloud(const EmpiricalMeasure& theta, const std::string& path);
EmpiricalMeasure read_point_cloud(const std::string& path);

void write_points_csv(const EmpiricalMeasure& theta, const std::string& path);

}  // namespace affinedim
