#pragma once

/*!
 * \file io.hpp
 *
 * \brief JSON model files, CSV rule files and trim-point files.
 *
 * Region file:
 * \code
 *   {"loops": [[{"degree": 2, "points": [[x,y], ...], "weights": [w, ...]}, ...], ...]}
 * \endcode
 * Solid file:
 * \code
 *   {"closed": true,
 *    "patches": [{"degree_u": m, "degree_v": n,
 *                 "points": [[[x,y,z], ... n+1 ...], ... m+1 ...],
 *                 "weights": [[w, ...], ...],
 *                 "trim_loops": [[curve, ...], ...]}]}
 * \endcode
 * Omitted weights mean all ones; omitted trim_loops mean untrimmed. Schema
 * errors are ValidationErrors prefixed with a JSON pointer into the document.
 */

#include "ratquad/planar.hpp"
#include "ratquad/surface.hpp"
#include "ratquad/volume.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ratquad
{
/// Shortest text with 17 significant digits, '.' decimal separator, locale independent.
std::string format_number(double value);

/// Parses a double written by format_number (or any plain decimal/scientific literal).
double parse_number(std::string_view text);

PlanarRegion region_from_json(std::string_view text);
SolidModel solid_from_json(std::string_view text);
PlanarRegion load_region(const std::filesystem::path& path);
SolidModel load_solid(const std::filesystem::path& path);

/// True when the document has a "patches" member (solid) rather than "loops" (region).
bool is_solid_document(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

std::string loops_to_json(std::span<const Loop> loops);
std::string region_to_json(const PlanarRegion& region);
std::string solid_to_json(const SolidModel& solid);

void write_rule_csv(std::ostream& out, const Rule2D& rule);
void write_rule_csv(std::ostream& out, const SurfaceRule& rule);
void write_rule_csv(std::ostream& out, const Rule3D& rule);

template <typename Rule>
void save_rule(const Rule& rule, const std::filesystem::path& path);

/// Points and weights read back from a rule CSV of any dimension.
struct RuleTable
{
  int dimension = 2;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

RuleTable read_rule_csv(std::istream& in);
RuleTable load_rule(const std::filesystem::path& path);

/// Blocks of u,v rows separated by blank lines; '#' starts a comment; a "u,v" header is skipped.
std::vector<std::vector<Vec2>> read_trim_points(std::istream& in);
std::vector<std::vector<Vec2>> load_trim_points(const std::filesystem::path& path);

}  // namespace ratquad
