#include "ratquad/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ratquad
{
namespace
{
using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& message)
{
  throw ValidationError((path.empty() ? std::string("/") : path) + ": " + message);
}

const json& member(const json& obj, const std::string& path, const char* key)
{
  if(!obj.is_object())
  {
    schema_error(path, "expected an object");
  }
  const auto it = obj.find(key);
  if(it == obj.end())
  {
    schema_error(path, std::string("missing \"") + key + "\"");
  }
  return *it;
}

const json& array_at(const json& value, const std::string& path)
{
  if(!value.is_array())
  {
    schema_error(path, "expected an array");
  }
  return value;
}

double number_at(const json& value, const std::string& path)
{
  if(!value.is_number())
  {
    schema_error(path, "expected a number");
  }
  const double v = value.get<double>();
  if(!std::isfinite(v))
  {
    schema_error(path, "number is not finite");
  }
  return v;
}

int integer_at(const json& value, const std::string& path)
{
  if(!value.is_number_integer() || value.get<long long>() < 0 || value.get<long long>() > 1000)
  {
    schema_error(path, "expected a nonnegative integer");
  }
  return value.get<int>();
}

double weight_at(const json& value, const std::string& path)
{
  const double w = number_at(value, path);
  if(!(w > 0.0))
  {
    schema_error(path, "weight must be positive, got " + format_number(w));
  }
  return w;
}

template <int Dim>
Eigen::Matrix<double, Dim, 1> point_at(const json& value, const std::string& path)
{
  array_at(value, path);
  if(value.size() != static_cast<std::size_t>(Dim))
  {
    schema_error(path, "expected " + std::to_string(Dim) + " coordinates");
  }
  Eigen::Matrix<double, Dim, 1> p;
  for(int k = 0; k < Dim; ++k)
  {
    p[k] = number_at(value[static_cast<std::size_t>(k)], path + "/" + std::to_string(k));
  }
  return p;
}

RationalBezierCurve curve_at(const json& value, const std::string& path)
{
  const json& pts = array_at(member(value, path, "points"), path + "/points");
  if(pts.empty())
  {
    schema_error(path + "/points", "curve needs at least one control point");
  }
  std::vector<Vec2> points;
  for(std::size_t j = 0; j < pts.size(); ++j)
  {
    points.push_back(point_at<2>(pts[j], path + "/points/" + std::to_string(j)));
  }
  if(value.contains("degree"))
  {
    const int degree = integer_at(value["degree"], path + "/degree");
    if(static_cast<std::size_t>(degree) + 1 != points.size())
    {
      schema_error(path + "/degree", "degree " + std::to_string(degree) + " needs " + std::to_string(degree + 1) +
                                       " points, got " + std::to_string(points.size()));
    }
  }
  std::vector<double> weights(points.size(), 1.0);
  if(value.contains("weights"))
  {
    const json& ws = array_at(value["weights"], path + "/weights");
    if(ws.size() != points.size())
    {
      schema_error(path + "/weights", "expected " + std::to_string(points.size()) + " weights");
    }
    for(std::size_t j = 0; j < ws.size(); ++j)
    {
      weights[j] = weight_at(ws[j], path + "/weights/" + std::to_string(j));
    }
  }
  return RationalBezierCurve(std::move(points), std::move(weights));
}

std::vector<Loop> loops_at(const json& value, const std::string& path)
{
  array_at(value, path);
  std::vector<Loop> loops;
  for(std::size_t k = 0; k < value.size(); ++k)
  {
    const std::string lpath = path + "/" + std::to_string(k);
    const json& curves = array_at(value[k], lpath);
    Loop loop;
    for(std::size_t j = 0; j < curves.size(); ++j)
    {
      loop.push_back(curve_at(curves[j], lpath + "/" + std::to_string(j)));
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

TrimmedPatch patch_at(const json& value, const std::string& path)
{
  const int m = integer_at(member(value, path, "degree_u"), path + "/degree_u");
  const int n = integer_at(member(value, path, "degree_v"), path + "/degree_v");
  const json& rows = array_at(member(value, path, "points"), path + "/points");
  if(rows.size() != static_cast<std::size_t>(m) + 1)
  {
    schema_error(path + "/points", "expected " + std::to_string(m + 1) + " rows (degree_u + 1)");
  }
  std::vector<Vec3> points;
  for(std::size_t i = 0; i < rows.size(); ++i)
  {
    const std::string rpath = path + "/points/" + std::to_string(i);
    const json& row = array_at(rows[i], rpath);
    if(row.size() != static_cast<std::size_t>(n) + 1)
    {
      schema_error(rpath, "expected " + std::to_string(n + 1) + " points (degree_v + 1)");
    }
    for(std::size_t j = 0; j < row.size(); ++j)
    {
      points.push_back(point_at<3>(row[j], rpath + "/" + std::to_string(j)));
    }
  }
  std::vector<double> weights(points.size(), 1.0);
  if(value.contains("weights"))
  {
    const json& wrows = array_at(value["weights"], path + "/weights");
    if(wrows.size() != rows.size())
    {
      schema_error(path + "/weights", "expected " + std::to_string(m + 1) + " rows");
    }
    for(std::size_t i = 0; i < wrows.size(); ++i)
    {
      const std::string rpath = path + "/weights/" + std::to_string(i);
      const json& row = array_at(wrows[i], rpath);
      if(row.size() != static_cast<std::size_t>(n) + 1)
      {
        schema_error(rpath, "expected " + std::to_string(n + 1) + " weights");
      }
      for(std::size_t j = 0; j < row.size(); ++j)
      {
        weights[i * static_cast<std::size_t>(n + 1) + j] = weight_at(row[j], rpath + "/" + std::to_string(j));
      }
    }
  }
  std::vector<Loop> trims;
  if(value.contains("trim_loops"))
  {
    trims = loops_at(value["trim_loops"], path + "/trim_loops");
  }
  try
  {
    return TrimmedPatch(RationalBezierPatch(m, n, std::move(points), std::move(weights)), std::move(trims));
  }
  catch(const ValidationError& e)
  {
    schema_error(path, e.what());
  }
}

json parse_document(std::string_view text)
{
  try
  {
    return json::parse(text.begin(), text.end());
  }
  catch(const json::parse_error& e)
  {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

json curve_json(const RationalBezierCurve& c)
{
  json pts = json::array();
  for(const auto& p : c.points())
  {
    pts.push_back({p.x(), p.y()});
  }
  json out;
  out["degree"] = c.degree();
  out["points"] = std::move(pts);
  out["weights"] = std::vector<double>(c.weights().begin(), c.weights().end());
  return out;
}

json loops_json(std::span<const Loop> loops)
{
  json out = json::array();
  for(const auto& loop : loops)
  {
    json curves = json::array();
    for(const auto& c : loop)
    {
      curves.push_back(curve_json(c));
    }
    out.push_back(std::move(curves));
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while(true)
  {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if(pos == std::string_view::npos)
    {
      return out;
    }
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if(first == std::string_view::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_number(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text)
{
  text = trim(text);
  if(!text.empty() && text.front() == '+')
  {
    text.remove_prefix(1);
  }
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if(res.ec != std::errc() || res.ptr != text.data() + text.size())
  {
    throw ValidationError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if(!in)
  {
    throw ValidationError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_solid_document(std::string_view text)
{
  const json doc = parse_document(text);
  return doc.is_object() && doc.contains("patches");
}

PlanarRegion region_from_json(std::string_view text)
{
  const json doc = parse_document(text);
  auto loops = loops_at(member(doc, "", "loops"), "/loops");
  try
  {
    return PlanarRegion(std::move(loops));
  }
  catch(const ValidationError& e)
  {
    schema_error("/loops", e.what());
  }
}

SolidModel solid_from_json(std::string_view text)
{
  const json doc = parse_document(text);
  SolidModel solid;
  const json& closed = member(doc, "", "closed");
  if(!closed.is_boolean())
  {
    schema_error("/closed", "expected true or false");
  }
  solid.closed = closed.get<bool>();
  const json& patches = array_at(member(doc, "", "patches"), "/patches");
  for(std::size_t i = 0; i < patches.size(); ++i)
  {
    solid.patches.push_back(patch_at(patches[i], "/patches/" + std::to_string(i)));
  }
  return solid;
}

PlanarRegion load_region(const std::filesystem::path& path)
{
  try
  {
    return region_from_json(read_text_file(path));
  }
  catch(const ValidationError& e)
  {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

SolidModel load_solid(const std::filesystem::path& path)
{
  try
  {
    return solid_from_json(read_text_file(path));
  }
  catch(const ValidationError& e)
  {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string loops_to_json(std::span<const Loop> loops) { return json{{"loops", loops_json(loops)}}.dump(1); }

std::string region_to_json(const PlanarRegion& region) { return loops_to_json(region.loops()); }

std::string solid_to_json(const SolidModel& solid)
{
  json patches = json::array();
  for(const auto& tp : solid.patches)
  {
    const auto& p = tp.patch();
    json rows = json::array();
    json wrows = json::array();
    for(int i = 0; i <= p.degree_u(); ++i)
    {
      json row = json::array();
      json wrow = json::array();
      for(int j = 0; j <= p.degree_v(); ++j)
      {
        const Vec3& c = p.point(i, j);
        row.push_back({c.x(), c.y(), c.z()});
        wrow.push_back(p.weight(i, j));
      }
      rows.push_back(std::move(row));
      wrows.push_back(std::move(wrow));
    }
    json out;
    out["degree_u"] = p.degree_u();
    out["degree_v"] = p.degree_v();
    out["points"] = std::move(rows);
    out["weights"] = std::move(wrows);
    if(tp.trimmed())
    {
      out["trim_loops"] = loops_json(tp.trim_loops());
    }
    patches.push_back(std::move(out));
  }
  return json{{"closed", solid.closed}, {"patches", std::move(patches)}}.dump(1);
}

void write_rule_csv(std::ostream& out, const Rule2D& rule)
{
  out << "x,y,weight,loop,segment,curve,q,zeta\n";
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    const auto& s = rule.sources[l];
    out << format_number(rule.points[l].x()) << ',' << format_number(rule.points[l].y()) << ','
        << format_number(rule.weights[l]) << ',' << s.loop << ',' << s.segment << ',' << s.curve << ',' << s.q << ','
        << s.zeta << '\n';
  }
}

void write_rule_csv(std::ostream& out, const SurfaceRule& rule)
{
  out << "x,y,z,weight,u,v,patch,loop,segment,mu,eta\n";
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    const auto& p = rule.points[l];
    const auto& s = rule.sources[l];
    out << format_number(p.x()) << ',' << format_number(p.y()) << ',' << format_number(p.z()) << ','
        << format_number(rule.weights[l]) << ',' << format_number(rule.params[l].x()) << ','
        << format_number(rule.params[l].y()) << ',' << s.patch << ',' << s.loop << ',' << s.segment << ',' << s.mu
        << ',' << s.eta << '\n';
  }
}

void write_rule_csv(std::ostream& out, const Rule3D& rule)
{
  out << "x,y,z,weight,patch,sigma,psi\n";
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    const auto& p = rule.points[l];
    const auto& s = rule.sources[l];
    out << format_number(p.x()) << ',' << format_number(p.y()) << ',' << format_number(p.z()) << ','
        << format_number(rule.weights[l]) << ',' << s.patch << ',' << s.sigma << ',' << s.psi << '\n';
  }
}

template <typename Rule>
void save_rule(const Rule& rule, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if(!out)
  {
    throw ValidationError("cannot write " + path.string());
  }
  write_rule_csv(out, rule);
  out.flush();
  if(!out)
  {
    throw ValidationError("failed writing " + path.string());
  }
}

template void save_rule<Rule2D>(const Rule2D&, const std::filesystem::path&);
template void save_rule<SurfaceRule>(const SurfaceRule&, const std::filesystem::path&);
template void save_rule<Rule3D>(const Rule3D&, const std::filesystem::path&);

RuleTable read_rule_csv(std::istream& in)
{
  std::string line;
  if(!std::getline(in, line))
  {
    throw ValidationError("rule file is empty");
  }
  const auto header = split(trim(line), ',');
  int col_x = -1;
  int col_y = -1;
  int col_z = -1;
  int col_w = -1;
  for(std::size_t k = 0; k < header.size(); ++k)
  {
    const auto name = trim(header[k]);
    const int idx = static_cast<int>(k);
    if(name == "x")
    {
      col_x = idx;
    }
    else if(name == "y")
    {
      col_y = idx;
    }
    else if(name == "z")
    {
      col_z = idx;
    }
    else if(name == "weight")
    {
      col_w = idx;
    }
  }
  if(col_x < 0 || col_y < 0 || col_w < 0)
  {
    throw ValidationError("rule header needs x, y and weight columns");
  }
  RuleTable table;
  table.dimension = col_z >= 0 ? 3 : 2;
  std::size_t row = 1;
  while(std::getline(in, line))
  {
    ++row;
    const auto text = trim(line);
    if(text.empty())
    {
      continue;
    }
    const auto cells = split(text, ',');
    if(cells.size() != header.size())
    {
      throw ValidationError("rule line " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " fields, header has " + std::to_string(header.size()));
    }
    try
    {
      std::array<double, 3> p{parse_number(cells[col_x]), parse_number(cells[col_y]),
                              col_z >= 0 ? parse_number(cells[col_z]) : 0.0};
      table.points.push_back(p);
      table.weights.push_back(parse_number(cells[col_w]));
    }
    catch(const ValidationError& e)
    {
      throw ValidationError("rule line " + std::to_string(row) + ": " + e.what());
    }
  }
  return table;
}

RuleTable load_rule(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if(!in)
  {
    throw ValidationError("cannot open " + path.string());
  }
  return read_rule_csv(in);
}

std::vector<std::vector<Vec2>> read_trim_points(std::istream& in)
{
  std::vector<std::vector<Vec2>> blocks;
  std::vector<Vec2> current;
  std::string line;
  std::size_t row = 0;
  while(std::getline(in, line))
  {
    ++row;
    auto text = line.substr(0, line.find('#'));
    const auto body = trim(text);
    if(body.empty())
    {
      // Comment-only lines do not end a block.
      if(trim(line).empty() && !current.empty())
      {
        blocks.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    const auto cells = split(body, ',');
    if(cells.size() == 2 && trim(cells[0]) == "u" && trim(cells[1]) == "v")
    {
      continue;
    }
    if(cells.size() != 2)
    {
      throw ValidationError("trim points line " + std::to_string(row) + ": expected u,v");
    }
    try
    {
      current.emplace_back(parse_number(cells[0]), parse_number(cells[1]));
    }
    catch(const ValidationError& e)
    {
      throw ValidationError("trim points line " + std::to_string(row) + ": " + e.what());
    }
  }
  if(!current.empty())
  {
    blocks.push_back(std::move(current));
  }
  return blocks;
}

std::vector<std::vector<Vec2>> load_trim_points(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if(!in)
  {
    throw ValidationError("cannot open " + path.string());
  }
  return read_trim_points(in);
}

}  // namespace ratquad
