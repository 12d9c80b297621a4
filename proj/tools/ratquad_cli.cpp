// Command-line front end: rule generation, integration, moments, trim fitting
// and convergence tables.

#include "ratquad/expr.hpp"
#include "ratquad/io.hpp"
#include "ratquad/moments.hpp"
#include "ratquad/trim_fit.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace ratquad;

namespace
{
// Writes to --output when given, stdout otherwise.
class Sink
{
public:
  explicit Sink(const std::string& path)
  {
    if(!path.empty())
    {
      m_file = std::make_unique<std::ofstream>(path, std::ios::binary);
      if(!*m_file)
      {
        throw ValidationError("cannot write " + path);
      }
    }
  }

  std::ostream& stream() { return m_file ? *m_file : std::cout; }

private:
  std::unique_ptr<std::ofstream> m_file;
};

struct Model
{
  std::optional<PlanarRegion> region;
  std::optional<SolidModel> solid;
};

Model load_model(const std::string& path)
{
  const std::string text = read_text_file(path);
  Model model;
  try
  {
    if(is_solid_document(text))
    {
      model.solid = solid_from_json(text);
    }
    else
    {
      model.region = region_from_json(text);
    }
  }
  catch(const ValidationError& e)
  {
    throw ValidationError(path + ": " + e.what());
  }
  return model;
}

void print_warnings(const Diagnostics& diag)
{
  for(const auto& w : diag.warnings)
  {
    std::cerr << "warning: " << w << '\n';
  }
}

std::vector<int> parse_orders(const std::string& text, std::size_t min_count, std::size_t max_count)
{
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while(std::getline(ss, item, ','))
  {
    const double v = parse_number(item);
    if(v != std::floor(v) || v < 1 || v > 100000)
    {
      throw ValidationError("order '" + item + "' is not a positive integer");
    }
    out.push_back(static_cast<int>(v));
  }
  if(out.size() < min_count || out.size() > max_count)
  {
    throw ValidationError("expected " + std::to_string(min_count) +
                          (max_count > min_count ? " to " + std::to_string(max_count) : std::string()) +
                          " comma-separated orders, got '" + text + "'");
  }
  return out;
}

struct Rule2DOptions
{
  std::string region;
  std::string mode = "spectral";
  int order = 0;
  int degree = -1;
  std::string output;
};

struct SurfaceOptions
{
  std::string solid;
  std::string orders;
  std::string weight_mode = "full";
  std::string output;
};

struct IntegrateOptions
{
  std::string rule;
  std::string model;
  std::string expr;
  bool pe = false;
  int order = 20;
  std::string orders;
};

struct MomentOptions
{
  std::string model;
  int max_degree = 0;
  std::string output;
};

struct FitOptions
{
  std::string points;
  int segments = 1;
  int degree = 3;
  std::string output;
};

struct ConvergenceOptions
{
  std::string model;
  std::string expr;
  int min_order = 4;
  int max_order = 20;
  int step = 2;
  std::string output;
};

int run_rule2d(const Rule2DOptions& opt)
{
  const PlanarRegion region = load_region(opt.region);
  Diagnostics diag;
  Rule2D rule;
  if(opt.mode == "pe")
  {
    if(opt.degree < 0)
    {
      throw ValidationError("--mode pe needs --degree");
    }
    rule = spectral_pe_rule(region, opt.degree, &diag);
  }
  else
  {
    if(opt.order < 1)
    {
      throw ValidationError("--mode spectral needs --order >= 1");
    }
    rule = spectral_rule(region, opt.order, opt.order, &diag);
  }
  print_warnings(diag);
  Sink sink(opt.output);
  write_rule_csv(sink.stream(), rule);
  return 0;
}

int run_rule_surface(const SurfaceOptions& opt)
{
  const SolidModel solid = load_solid(opt.solid);
  const auto orders = parse_orders(opt.orders, 2, 2);
  const WeightMode mode = opt.weight_mode == "z" ? WeightMode::z_normal : WeightMode::full_normal;
  Diagnostics diag;
  const SurfaceRule rule = surface_rule_all(solid.patches, orders[0], orders[1], mode, &diag);
  print_warnings(diag);
  Sink sink(opt.output);
  write_rule_csv(sink.stream(), rule);
  return 0;
}

int run_rule_volume(const SurfaceOptions& opt)
{
  const SolidModel solid = load_solid(opt.solid);
  const auto orders = parse_orders(opt.orders, 2, 3);
  const int n_p = orders.size() == 3 ? orders[2] : orders[0];
  Diagnostics diag;
  const Rule3D rule = volume_rule(solid, orders[0], orders[1], n_p, std::nullopt, &diag);
  print_warnings(diag);
  Sink sink(opt.output);
  write_rule_csv(sink.stream(), rule);
  return 0;
}

double integrate_model(const Model& model, const Expr& e, int order, const std::vector<int>& orders, std::size_t* count)
{
  auto f = [&e](double x, double y, double z) { return eval(e, x, y, z); };
  if(model.region)
  {
    const Rule2D rule = spectral_rule(*model.region, order, order);
    *count = rule.size();
    return integrate2d(rule, [&](double x, double y) { return f(x, y, 0.0); });
  }
  const int m_q = orders.empty() ? order : orders[0];
  const int n_q = orders.size() > 1 ? orders[1] : m_q;
  const int n_p = orders.size() > 2 ? orders[2] : m_q;
  const Rule3D rule = volume_rule(*model.solid, m_q, n_q, n_p);
  *count = rule.size();
  return integrate3d(rule, f);
}

int run_integrate(const IntegrateOptions& opt)
{
  const Expr e = parse(opt.expr);
  auto f = [&e](double x, double y, double z) { return eval(e, x, y, z); };
  double value = 0.0;
  if(!opt.rule.empty())
  {
    const RuleTable table = load_rule(opt.rule);
    for(std::size_t l = 0; l < table.size(); ++l)
    {
      const auto& p = table.points[l];
      const double v = f(p[0], p[1], p[2]);
      if(!std::isfinite(v))
      {
        check_integrand_value(v, l, std::span<const double>(p.data(), static_cast<std::size_t>(table.dimension)));
      }
      value += table.weights[l] * v;
    }
  }
  else
  {
    const Model model = load_model(opt.model);
    if(opt.pe)
    {
      if(!model.region)
      {
        throw ValidationError("--pe applies to planar regions only");
      }
      const auto k = polynomial_degree(e);
      if(!k)
      {
        throw ValidationError("--pe needs a polynomial integrand; '" + opt.expr +
                              "' is not one (drop --pe to use the spectral rule)");
      }
      value = integrate2d(spectral_pe_rule(*model.region, *k), [&](double x, double y) { return f(x, y, 0.0); });
    }
    else
    {
      const auto orders = opt.orders.empty() ? std::vector<int>{} : parse_orders(opt.orders, 1, 3);
      std::size_t count = 0;
      value = integrate_model(model, e, opt.order, orders, &count);
    }
  }
  std::cout << format_number(value) << '\n';
  return 0;
}

int run_moments(const MomentOptions& opt)
{
  const Model model = load_model(opt.model);
  Diagnostics diag;
  const MomentVector m = model.region ? geometric_moments(*model.region, opt.max_degree)
                                      : geometric_moments(*model.solid, opt.max_degree, &diag);
  print_warnings(diag);
  Sink sink(opt.output);
  write_moments_csv(sink.stream(), m);
  return 0;
}

int run_fit_trim(const FitOptions& opt)
{
  const auto blocks = load_trim_points(opt.points);
  if(blocks.empty())
  {
    throw ValidationError(opt.points + ": no trim points");
  }
  std::vector<Loop> loops;
  for(std::size_t b = 0; b < blocks.size(); ++b)
  {
    try
    {
      loops.push_back(fit_trim_curves(blocks[b], opt.segments, opt.degree));
    }
    catch(const ValidationError& e)
    {
      throw ValidationError("block " + std::to_string(b) + ": " + e.what());
    }
  }
  Sink sink(opt.output);
  sink.stream() << loops_to_json(loops) << '\n';
  return 0;
}

int run_convergence(const ConvergenceOptions& opt)
{
  if(opt.min_order < 1 || opt.max_order < opt.min_order || opt.step < 1)
  {
    throw ValidationError("order range needs 1 <= min <= max and step >= 1");
  }
  const Expr e = parse(opt.expr);
  const Model model = load_model(opt.model);
  struct Row
  {
    int order;
    std::size_t points;
    double value;
  };
  std::vector<Row> rows;
  for(int order = opt.min_order; order <= opt.max_order; order += opt.step)
  {
    std::size_t count = 0;
    const double value = integrate_model(model, e, order, {}, &count);
    rows.push_back({order, count, value});
  }
  const double reference = rows.back().value;
  Sink sink(opt.output);
  auto& out = sink.stream();
  out << "order,n_points,value,error\n";
  for(const auto& r : rows)
  {
    out << r.order << ',' << r.points << ',' << format_number(r.value) << ','
        << format_number(std::abs(r.value - reference)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Quadrature rules for regions and solids bounded by rational Bezier curves and patches"};
  app.require_subcommand(1);

  Rule2DOptions r2;
  auto* rule2d = app.add_subcommand("rule2d", "Planar rule for a region file");
  rule2d->add_option("--region", r2.region, "Region JSON file")->required();
  rule2d->add_option("--mode", r2.mode, "spectral or pe")->check(CLI::IsMember({"spectral", "pe"}));
  rule2d->add_option("--order", r2.order, "Q = P for the spectral rule");
  rule2d->add_option("--degree", r2.degree, "Exact polynomial degree k for the pe rule");
  rule2d->add_option("--output,-o", r2.output, "Output CSV (default stdout)");

  SurfaceOptions rs;
  auto* rule_surface = app.add_subcommand("rule-surface", "Surface rule for every patch of a solid file");
  rule_surface->add_option("--solid", rs.solid, "Solid JSON file")->required();
  rule_surface->add_option("--orders", rs.orders, "MQ,NQ")->required();
  rule_surface->add_option("--weight-mode", rs.weight_mode, "full (|n|) or z (n_z)")->check(CLI::IsMember({"full", "z"}));
  rule_surface->add_option("--output,-o", rs.output, "Output CSV (default stdout)");

  SurfaceOptions rv;
  auto* rule_volume = app.add_subcommand("rule-volume", "Volume rule for a closed solid file");
  rule_volume->add_option("--solid", rv.solid, "Solid JSON file")->required();
  rule_volume->add_option("--orders", rv.orders, "MQ,NQ[,NP] (NP defaults to MQ)")->required();
  rule_volume->add_option("--output,-o", rv.output, "Output CSV (default stdout)");

  IntegrateOptions io;
  auto* integrate = app.add_subcommand("integrate", "Integrate an expression with a rule file or a model");
  auto* rule_opt = integrate->add_option("--rule", io.rule, "Rule CSV file");
  auto* model_opt = integrate->add_option("--model", io.model, "Region or solid JSON file");
  rule_opt->excludes(model_opt);
  integrate->add_option("--expr", io.expr, "Integrand in x, y, z")->required();
  integrate->add_flag("--pe", io.pe, "Polynomial-exact planar rule with k detected from the expression");
  integrate->add_option("--order", io.order, "Spectral order for regions, default for solids")->capture_default_str();
  integrate->add_option("--orders", io.orders, "MQ[,NQ[,NP]] for solids");

  MomentOptions mo;
  auto* moments = app.add_subcommand("moments", "Geometric moments up to a total degree");
  moments->add_option("--model", mo.model, "Region or solid JSON file")->required();
  moments->add_option("--max-degree", mo.max_degree, "Highest total degree p")->required()->check(CLI::NonNegativeNumber);
  moments->add_option("--output,-o", mo.output, "Output CSV (default stdout)");

  FitOptions fo;
  auto* fit = app.add_subcommand("fit-trim", "Fit cubic Bezier trim curves to ordered u,v points");
  fit->add_option("--points", fo.points, "Trim-points CSV")->required();
  fit->add_option("--segments", fo.segments, "Curves per point block")->required()->check(CLI::PositiveNumber);
  fit->add_option("--degree", fo.degree, "Curve degree")->capture_default_str()->check(CLI::PositiveNumber);
  fit->add_option("--output,-o", fo.output, "Output JSON (default stdout)");

  ConvergenceOptions co;
  auto* conv = app.add_subcommand("convergence", "Error table against the highest order run");
  conv->add_option("--model", co.model, "Region or solid JSON file")->required();
  conv->add_option("--expr", co.expr, "Integrand in x, y, z")->required();
  conv->add_option("--min-order", co.min_order, "Lowest order")->capture_default_str();
  conv->add_option("--max-order", co.max_order, "Highest order, used as the reference")->capture_default_str();
  conv->add_option("--step", co.step, "Order increment")->capture_default_str();
  conv->add_option("--output,-o", co.output, "Output CSV (default stdout)");

  try
  {
    app.parse(argc, argv);
  }
  catch(const CLI::Success& e)
  {
    return app.exit(e);
  }
  catch(const CLI::ParseError& e)
  {
    app.exit(e);
    return 1;
  }

  try
  {
    if(*rule2d)
    {
      return run_rule2d(r2);
    }
    if(*rule_surface)
    {
      return run_rule_surface(rs);
    }
    if(*rule_volume)
    {
      return run_rule_volume(rv);
    }
    if(*integrate)
    {
      if(io.rule.empty() && io.model.empty())
      {
        throw ValidationError("integrate needs --rule or --model");
      }
      return run_integrate(io);
    }
    if(*moments)
    {
      return run_moments(mo);
    }
    if(*fit)
    {
      return run_fit_trim(fo);
    }
    if(*conv)
    {
      return run_convergence(co);
    }
  }
  catch(const ValidationError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  catch(const NumericError& e)
  {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
